//! Micro merge unit: tiny graphs served from a shared memo table keyed by a
//! canonical encoding of (initial graph, border, operation sequence). A
//! cache hit replaces the whole merge computation by a state copy.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use graph_core::{EdgeId, VertexId};

use crate::general::{MergeReport, Parallelism};
use crate::UnitError;

/// Hard ceiling on micro vertices: pair slots must fit the bit fields.
pub const MICRO_LIMIT: usize = 12;
const SLOTS: usize = MICRO_LIMIT * (MICRO_LIMIT - 1) / 2;

/// Slot of the unordered rank pair (i, j), i < j, in pair-lex order.
fn slot(i: u8, j: u8) -> usize {
    debug_assert!(i < j);
    (j as usize * (j as usize - 1)) / 2 + i as usize
}

fn slot_of(a: u8, b: u8) -> usize {
    if a < b {
        slot(a, b)
    } else {
        slot(b, a)
    }
}

/// Canonical unit state. Vertices are ranks 0..t in sorted-label order;
/// canonical edge ids are positions in the sorted endpoint-pair list, offset
/// by one in `alpha` so zero can mean absent.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct CanonState {
    alive: u16,
    adj: u128,
    alpha: [u8; SLOTS],
    phi: [u8; MICRO_LIMIT],
}

#[derive(Clone, Debug)]
struct CanonReport {
    kept: u8,
    // absorbed canon id, incumbent canon id, shared endpoint ranks low, high
    paras: Vec<(u8, u8, u8, u8)>,
    borders: Vec<u8>,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct MicroKey {
    t: u8,
    adj0: u128,
    border0: u16,
    ops: Vec<(u8, u8)>,
}

#[derive(Debug)]
struct Entry {
    report: CanonReport,
    state: CanonState,
}

/// Shared cache of simulated merge steps. Read-mostly; full table falls
/// through to direct simulation without memoizing.
#[derive(Debug)]
pub struct MemoTable {
    t_max: usize,
    cap: usize,
    map: Mutex<HashMap<MicroKey, Arc<Entry>>>,
    hits: AtomicU64,
    misses: AtomicU64,
    overflow: AtomicU64,
}

impl MemoTable {
    pub fn new(t_max: usize, cap: usize) -> Self {
        assert!(t_max <= MICRO_LIMIT, "micro encoding supports at most {MICRO_LIMIT} vertices");
        MemoTable {
            t_max,
            cap,
            map: Mutex::new(HashMap::new()),
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
            overflow: AtomicU64::new(0),
        }
    }

    pub fn threshold(&self) -> usize {
        self.t_max
    }

    pub fn hits(&self) -> u64 {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn misses(&self) -> u64 {
        self.misses.load(Ordering::Relaxed)
    }

    /// Steps simulated but not stored because the table was full.
    pub fn overflow_skips(&self) -> u64 {
        self.overflow.load(Ordering::Relaxed)
    }

    pub fn len(&self) -> usize {
        self.map.lock().expect("memo lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Default for MemoTable {
    fn default() -> Self {
        MemoTable::new(MICRO_LIMIT, 200_000)
    }
}

#[derive(Debug, Clone)]
pub struct MicroUnit {
    table: Arc<MemoTable>,
    key: MicroKey,
    state: CanonState,
    border0: u16,
    t: u8,
    real_vertex: Vec<VertexId>,
    real_edge: Vec<EdgeId>,
}

impl MicroUnit {
    pub fn init(
        table: Arc<MemoTable>,
        vertices: &[VertexId],
        border: &[VertexId],
        edges: &[(EdgeId, VertexId, VertexId)],
    ) -> Result<Self, UnitError> {
        if vertices.len() > table.t_max {
            return Err(UnitError::OverThreshold { n: vertices.len(), cap: table.t_max });
        }
        let mut real_vertex = vertices.to_vec();
        real_vertex.sort_unstable();
        debug_assert!(real_vertex.windows(2).all(|w| w[0] < w[1]), "vertex labels repeat");
        let t = real_vertex.len() as u8;
        let rank = |v: VertexId| real_vertex.binary_search(&v).ok().map(|i| i as u8);

        let mut border0 = 0u16;
        for &b in border {
            let r = rank(b).ok_or(UnitError::UnknownVertex(b))?;
            border0 |= 1 << r;
        }

        let mut pairs: Vec<(u8, u8, EdgeId)> = Vec::with_capacity(edges.len());
        let mut adj0 = 0u128;
        for &(e, u, v) in edges {
            let ru = rank(u).ok_or(UnitError::UnknownVertex(u))?;
            let rv = rank(v).ok_or(UnitError::UnknownVertex(v))?;
            if ru == rv || adj0 & (1 << slot_of(ru, rv)) != 0 {
                return Err(UnitError::NotSimple { edge: e });
            }
            if pairs.iter().any(|&(_, _, other)| other == e) {
                return Err(UnitError::DuplicateEdge(e));
            }
            if border0 & (1 << ru) != 0 && border0 & (1 << rv) != 0 {
                return Err(UnitError::BorderEdge { edge: e });
            }
            adj0 |= 1 << slot_of(ru, rv);
            pairs.push((ru.min(rv), ru.max(rv), e));
        }
        pairs.sort_unstable();

        let mut alpha = [0u8; SLOTS];
        let mut real_edge = Vec::with_capacity(pairs.len());
        for (k, &(i, j, e)) in pairs.iter().enumerate() {
            alpha[slot(i, j)] = k as u8 + 1;
            real_edge.push(e);
        }

        let mut phi = [0u8; MICRO_LIMIT];
        for (i, p) in phi.iter_mut().enumerate().take(t as usize) {
            *p = i as u8;
        }
        let alive = if t == 0 { 0 } else { (1u16 << t) - 1 };
        Ok(MicroUnit {
            table,
            key: MicroKey { t, adj0, border0, ops: Vec::new() },
            state: CanonState { alive, adj: adj0, alpha, phi },
            border0,
            t,
            real_vertex,
            real_edge,
        })
    }

    fn rank(&self, v: VertexId) -> Option<u8> {
        self.real_vertex.binary_search(&v).ok().map(|i| i as u8)
    }

    fn rank_current(&self, v: VertexId) -> Result<u8, UnitError> {
        match self.rank(v) {
            Some(r) if self.state.alive & (1 << r) != 0 => Ok(r),
            _ => Err(UnitError::UnknownVertex(v)),
        }
    }

    pub fn merge(&mut self, u: VertexId, v: VertexId) -> Result<MergeReport, UnitError> {
        let ru = self.rank_current(u)?;
        let rv = self.rank_current(v)?;
        if ru == rv {
            return Err(UnitError::IdenticalMerge(u));
        }
        let adjacent = self.state.adj & (1 << slot_of(ru, rv)) != 0;
        let both_border =
            self.border0 & (1 << ru) != 0 && self.border0 & (1 << rv) != 0;
        if !both_border && !adjacent {
            return Err(UnitError::MergeNotAllowed(u, v));
        }
        self.key.ops.push((ru.min(rv), ru.max(rv)));

        let cached = {
            let map = self.table.map.lock().expect("memo lock");
            map.get(&self.key).cloned()
        };
        let entry = match cached {
            Some(e) => {
                self.table.hits.fetch_add(1, Ordering::Relaxed);
                e
            }
            None => {
                self.table.misses.fetch_add(1, Ordering::Relaxed);
                let fresh = Arc::new(simulate(self.t, self.border0, &self.state, ru, rv));
                let mut map = self.table.map.lock().expect("memo lock");
                if map.len() < self.table.cap {
                    map.insert(self.key.clone(), fresh.clone());
                } else {
                    self.table.overflow.fetch_add(1, Ordering::Relaxed);
                }
                fresh
            }
        };
        self.state = entry.state.clone();
        Ok(self.decode(&entry.report))
    }

    pub fn insert_edge(
        &mut self,
        _e: EdgeId,
        _x: VertexId,
        _y: VertexId,
    ) -> Result<MergeReport, UnitError> {
        Err(UnitError::InsertUnsupported)
    }

    fn decode(&self, rep: &CanonReport) -> MergeReport {
        let mut out = MergeReport {
            kept: Some(self.real_vertex[rep.kept as usize]),
            ..Default::default()
        };
        for &(a, inc, lo, hi) in &rep.paras {
            out.parallelisms.push(Parallelism {
                absorbed: self.real_edge[a as usize],
                incumbent: self.real_edge[inc as usize],
                ends: (self.real_vertex[lo as usize], self.real_vertex[hi as usize]),
            });
        }
        out.parallelisms.sort_by_key(|p| p.absorbed);
        out.border_edges = rep.borders.iter().map(|&b| self.real_edge[b as usize]).collect();
        out.border_edges.sort_unstable();
        out
    }

    pub fn phi(&self, v0: VertexId) -> Result<VertexId, UnitError> {
        let r = self.rank(v0).ok_or(UnitError::UnknownVertex(v0))?;
        Ok(self.real_vertex[self.state.phi[r as usize] as usize])
    }

    pub fn phi_inv(&self, v: VertexId) -> Result<Vec<VertexId>, UnitError> {
        let r = self.rank_current(v)?;
        Ok((0..self.t)
            .filter(|&i| self.state.phi[i as usize] == r)
            .map(|i| self.real_vertex[i as usize])
            .collect())
    }

    pub fn alpha(&self, x: VertexId, y: VertexId) -> Option<EdgeId> {
        let rx = self.rank_current(x).ok()?;
        let ry = self.rank_current(y).ok()?;
        if rx == ry {
            return None;
        }
        let s = slot_of(rx, ry);
        if self.state.adj & (1 << s) != 0 {
            Some(self.real_edge[self.state.alpha[s] as usize - 1])
        } else {
            None
        }
    }

    pub fn is_border(&self, v: VertexId) -> bool {
        self.rank_current(v).map(|r| self.border0 & (1 << r) != 0).unwrap_or(false)
    }

    pub fn degree(&self, v: VertexId) -> Option<usize> {
        let r = self.rank_current(v).ok()?;
        Some(self.live_neighbors(r).count())
    }

    fn live_neighbors(&self, r: u8) -> impl Iterator<Item = u8> + '_ {
        (0..self.t).filter(move |&x| {
            x != r
                && self.state.alive & (1 << x) != 0
                && self.state.adj & (1 << slot_of(r, x)) != 0
        })
    }

    pub fn neighbors(&self, v: VertexId) -> Option<Vec<(VertexId, EdgeId)>> {
        let r = self.rank_current(v).ok()?;
        Some(
            self.live_neighbors(r)
                .map(|x| {
                    let s = slot_of(r, x);
                    (self.real_vertex[x as usize], self.real_edge[self.state.alpha[s] as usize - 1])
                })
                .collect(),
        )
    }

    pub fn current_vertices(&self) -> Vec<VertexId> {
        (0..self.t)
            .filter(|&r| self.state.alive & (1 << r) != 0)
            .map(|r| self.real_vertex[r as usize])
            .collect()
    }

    pub fn border_vertices(&self) -> Vec<VertexId> {
        (0..self.t)
            .filter(|&r| self.state.alive & (1 << r) != 0 && self.border0 & (1 << r) != 0)
            .map(|r| self.real_vertex[r as usize])
            .collect()
    }

    pub fn edges_sorted(&self) -> Vec<(VertexId, VertexId, EdgeId)> {
        let mut out = Vec::new();
        for j in 1..self.t {
            for i in 0..j {
                let s = slot(i, j);
                if self.state.adj & (1 << s) != 0 {
                    out.push((
                        self.real_vertex[i as usize],
                        self.real_vertex[j as usize],
                        self.real_edge[self.state.alpha[s] as usize - 1],
                    ));
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn phi_pairs(&self) -> Vec<(VertexId, VertexId)> {
        (0..self.t)
            .map(|i| {
                (self.real_vertex[i as usize], self.real_vertex[self.state.phi[i as usize] as usize])
            })
            .collect()
    }

    pub fn table(&self) -> &MemoTable {
        &self.table
    }

    pub fn check_invariants(&self) -> Result<(), String> {
        let s = &self.state;
        for j in 1..self.t {
            for i in 0..j {
                let sl = slot(i, j);
                let present = s.adj & (1 << sl) != 0;
                if present != (s.alpha[sl] != 0) {
                    return Err(format!("alpha and adjacency disagree on pair {i},{j}"));
                }
                if !present {
                    continue;
                }
                if s.alive & (1 << i) == 0 || s.alive & (1 << j) == 0 {
                    return Err(format!("edge on dead rank pair {i},{j}"));
                }
                if self.border0 & (1 << i) != 0 && self.border0 & (1 << j) != 0 {
                    return Err(format!("border ranks {i},{j} are adjacent"));
                }
            }
        }
        for i in 0..self.t {
            let target = s.phi[i as usize];
            if s.alive & (1 << target) == 0 {
                return Err(format!("phi of rank {i} points at dead rank {target}"));
            }
            if s.alive & (1 << i) != 0 && target != i {
                return Err(format!("live rank {i} mapped away to {target}"));
            }
        }
        Ok(())
    }
}

fn simulate(t: u8, border0: u16, from: &CanonState, ru: u8, rv: u8) -> Entry {
    let mut s = from.clone();
    let inv_size = |s: &CanonState, r: u8| {
        (0..t).filter(|&i| s.phi[i as usize] == r).count()
    };
    let is_border = |r: u8| border0 & (1 << r) != 0;
    let key_u = (is_border(ru), inv_size(&s, ru), ru);
    let key_v = (is_border(rv), inv_size(&s, rv), rv);
    let (kept, moved) = if key_u >= key_v { (ru, rv) } else { (rv, ru) };
    let merged_border = is_border(kept);

    let conn = slot_of(ru, rv);
    if s.adj & (1 << conn) != 0 {
        s.adj &= !(1 << conn);
        s.alpha[conn] = 0;
    }

    let mut report = CanonReport { kept, paras: Vec::new(), borders: Vec::new() };
    for x in 0..t {
        if x == moved || x == kept || s.alive & (1 << x) == 0 {
            continue;
        }
        let ms = slot_of(moved, x);
        if s.adj & (1 << ms) == 0 {
            continue;
        }
        let e = s.alpha[ms] - 1;
        let ks = slot_of(kept, x);
        if s.adj & (1 << ks) != 0 {
            report.paras.push((e, s.alpha[ks] - 1, kept.min(x), kept.max(x)));
        } else if merged_border && is_border(x) {
            report.borders.push(e);
        } else {
            s.adj |= 1 << ks;
            s.alpha[ks] = e + 1;
        }
        s.adj &= !(1 << ms);
        s.alpha[ms] = 0;
    }
    for i in 0..t {
        if s.phi[i as usize] == moved {
            s.phi[i as usize] = kept;
        }
    }
    s.alive &= !(1 << moved);
    report.paras.sort_unstable();
    report.borders.sort_unstable();
    Entry { report, state: s }
}

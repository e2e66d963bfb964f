//! General bordered merge unit: hash-dictionary adjacency, arena-backed
//! doubly-linked neighbor lists, and per-edge endpoint-update accounting.

use std::collections::{HashMap, HashSet};

use graph_core::{EdgeId, VertexId};

use crate::UnitError;

const NIL: u32 = u32::MAX;

/// One collapsed pair of parallel edges. `absorbed` left the unit, the
/// `incumbent` keeps representing the adjacency; `ends` are the unit-local
/// endpoints the two edges shared, smaller label first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Parallelism {
    pub absorbed: EdgeId,
    pub incumbent: EdgeId,
    pub ends: (VertexId, VertexId),
}

/// What one merge or insertion reported. `kept` names the surviving vertex
/// of a merge and is absent for insertions. Parallelisms are sorted by the
/// absorbed id, border edges ascending.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MergeReport {
    pub kept: Option<VertexId>,
    pub parallelisms: Vec<Parallelism>,
    pub border_edges: Vec<EdgeId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Instrumentation {
    /// Surviving-edge endpoint rewrites across all merges.
    pub endpoint_updates: u64,
    /// Insertions between vertices that were not adjacent.
    pub fresh_insertions: u64,
    /// All insert calls that passed validation.
    pub total_insertions: u64,
    /// Edges the unit ever materialized: initial plus fresh.
    pub created_edges: u64,
    /// Largest per-edge update count, not counting border promotions.
    pub max_edge_updates: u32,
    /// Largest per-edge update count including border promotions.
    pub max_edge_updates_full: u32,
}

#[derive(Debug, Clone, Copy)]
struct Occ {
    neighbor: VertexId,
    edge: EdgeId,
    prev: u32,
    next: u32,
}

#[derive(Debug, Clone)]
struct VertexRec {
    head: u32,
    degree: u32,
    border: bool,
    originals: Vec<VertexId>,
}

#[derive(Debug, Clone, Copy)]
struct EdgeRec {
    // occ.0 sits in the neighbor list of ends.0, occ.1 in that of ends.1.
    ends: (VertexId, VertexId),
    occ: (u32, u32),
    updates: u32,
    promotions: u32,
}

#[derive(Debug, Clone)]
pub struct MergeUnit {
    verts: HashMap<VertexId, VertexRec>,
    phi: HashMap<VertexId, VertexId>,
    edges: HashMap<EdgeId, EdgeRec>,
    alpha: HashMap<(VertexId, VertexId), EdgeId>,
    occs: Vec<Occ>,
    free: Vec<u32>,
    counters: Instrumentation,
    // Doubling bound: every non-promotion endpoint rewrite at least doubles
    // the merged-set size behind that endpoint, so per edge there are at
    // most 2 ceil(log2 n0) of them.
    update_cap: u32,
    ever_entered: HashSet<EdgeId>,
    repeat_insertions: u64,
    para_sources: HashSet<EdgeId>,
    border_reported: HashSet<EdgeId>,
}

fn pair_key(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn ceil_log2(n: usize) -> u32 {
    (n.max(1) as u64).next_power_of_two().trailing_zeros()
}

impl MergeUnit {
    pub fn init(
        vertices: &[VertexId],
        border: &[VertexId],
        edges: &[(EdgeId, VertexId, VertexId)],
    ) -> Result<Self, UnitError> {
        let mut unit = MergeUnit {
            verts: HashMap::with_capacity(vertices.len()),
            phi: HashMap::with_capacity(vertices.len()),
            edges: HashMap::with_capacity(edges.len()),
            alpha: HashMap::with_capacity(edges.len()),
            occs: Vec::with_capacity(2 * edges.len()),
            free: Vec::new(),
            counters: Instrumentation::default(),
            update_cap: 2 * ceil_log2(vertices.len()),
            ever_entered: HashSet::with_capacity(edges.len()),
            repeat_insertions: 0,
            para_sources: HashSet::new(),
            border_reported: HashSet::new(),
        };
        for &v in vertices {
            unit.verts.insert(
                v,
                VertexRec { head: NIL, degree: 0, border: false, originals: vec![v] },
            );
            unit.phi.insert(v, v);
        }
        for &b in border {
            match unit.verts.get_mut(&b) {
                Some(rec) => rec.border = true,
                None => return Err(UnitError::UnknownVertex(b)),
            }
        }
        for &(e, u, v) in edges {
            if !unit.verts.contains_key(&u) {
                return Err(UnitError::UnknownVertex(u));
            }
            if !unit.verts.contains_key(&v) {
                return Err(UnitError::UnknownVertex(v));
            }
            if u == v || unit.alpha.contains_key(&pair_key(u, v)) {
                return Err(UnitError::NotSimple { edge: e });
            }
            if unit.edges.contains_key(&e) {
                return Err(UnitError::DuplicateEdge(e));
            }
            if unit.verts[&u].border && unit.verts[&v].border {
                return Err(UnitError::BorderEdge { edge: e });
            }
            unit.attach_edge(e, u, v);
            unit.ever_entered.insert(e);
        }
        unit.counters.created_edges = edges.len() as u64;
        Ok(unit)
    }

    fn alloc_occ(&mut self, occ: Occ) -> u32 {
        if let Some(idx) = self.free.pop() {
            self.occs[idx as usize] = occ;
            idx
        } else {
            self.occs.push(occ);
            (self.occs.len() - 1) as u32
        }
    }

    fn link_head(&mut self, at: VertexId, idx: u32) {
        let rec = self.verts.get_mut(&at).expect("current vertex");
        self.occs[idx as usize].prev = NIL;
        self.occs[idx as usize].next = rec.head;
        if rec.head != NIL {
            self.occs[rec.head as usize].prev = idx;
        }
        rec.head = idx;
        rec.degree += 1;
    }

    fn unlink(&mut self, at: VertexId, idx: u32) {
        let Occ { prev, next, .. } = self.occs[idx as usize];
        if prev != NIL {
            self.occs[prev as usize].next = next;
        } else {
            self.verts.get_mut(&at).expect("current vertex").head = next;
        }
        if next != NIL {
            self.occs[next as usize].prev = prev;
        }
        self.verts.get_mut(&at).expect("current vertex").degree -= 1;
    }

    fn attach_edge(&mut self, e: EdgeId, u: VertexId, v: VertexId) {
        let ou = self.alloc_occ(Occ { neighbor: v, edge: e, prev: NIL, next: NIL });
        self.link_head(u, ou);
        let ov = self.alloc_occ(Occ { neighbor: u, edge: e, prev: NIL, next: NIL });
        self.link_head(v, ov);
        self.edges.insert(e, EdgeRec { ends: (u, v), occ: (ou, ov), updates: 0, promotions: 0 });
        self.alpha.insert(pair_key(u, v), e);
    }

    fn detach_edge(&mut self, e: EdgeId) {
        let rec = self.edges.remove(&e).expect("live edge");
        self.unlink(rec.ends.0, rec.occ.0);
        self.unlink(rec.ends.1, rec.occ.1);
        self.free.push(rec.occ.0);
        self.free.push(rec.occ.1);
        self.alpha.remove(&pair_key(rec.ends.0, rec.ends.1));
    }

    pub fn merge(&mut self, u: VertexId, v: VertexId) -> Result<MergeReport, UnitError> {
        let bu = self.verts.get(&u).ok_or(UnitError::UnknownVertex(u))?.border;
        let bv = self.verts.get(&v).ok_or(UnitError::UnknownVertex(v))?.border;
        if u == v {
            return Err(UnitError::IdenticalMerge(u));
        }
        let adjacent = self.alpha.contains_key(&pair_key(u, v));
        if !(bu && bv) && !adjacent {
            return Err(UnitError::MergeNotAllowed(u, v));
        }
        debug_assert!(!(bu && bv && adjacent), "border vertices may never be adjacent");

        // Border wins, then the larger merged set, then the higher label.
        let key_u = (bu, self.verts[&u].originals.len(), u);
        let key_v = (bv, self.verts[&v].originals.len(), v);
        let (kept, moved) = if key_u >= key_v { (u, v) } else { (v, u) };
        let merged_border = self.verts[&kept].border;
        let moved_border = self.verts[&moved].border;

        if adjacent {
            // The connecting edge is consumed without a report.
            let conn = self.alpha[&pair_key(u, v)];
            self.detach_edge(conn);
        }

        let mut moved_adj = Vec::with_capacity(self.verts[&moved].degree as usize);
        let mut c = self.verts[&moved].head;
        while c != NIL {
            let o = self.occs[c as usize];
            moved_adj.push((o.neighbor, o.edge));
            c = o.next;
        }

        let mut report = MergeReport { kept: Some(kept), ..Default::default() };
        for (x, e) in moved_adj {
            debug_assert_ne!(x, kept, "connector already detached");
            if let Some(&incumbent) = self.alpha.get(&pair_key(kept, x)) {
                self.detach_edge(e);
                let first = self.para_sources.insert(e);
                debug_assert!(first, "id reported as source twice");
                report.parallelisms.push(Parallelism {
                    absorbed: e,
                    incumbent,
                    ends: pair_key(kept, x),
                });
            } else if merged_border && self.verts[&x].border {
                self.detach_edge(e);
                let first = self.border_reported.insert(e);
                debug_assert!(first, "id reported as border twice");
                report.border_edges.push(e);
            } else {
                // Rewrite the moved endpoint in place; the edge keeps its
                // identity and its far-side occurrence slot.
                let rec = self.edges.get_mut(&e).expect("live edge");
                let (own, far) = if rec.ends.0 == moved {
                    rec.ends.0 = kept;
                    (rec.occ.0, rec.occ.1)
                } else {
                    debug_assert_eq!(rec.ends.1, moved);
                    rec.ends.1 = kept;
                    (rec.occ.1, rec.occ.0)
                };
                if !moved_border && merged_border {
                    rec.promotions += 1;
                    debug_assert!(rec.promotions <= 2, "one promotion per endpoint");
                } else {
                    rec.updates += 1;
                    debug_assert!(
                        rec.updates <= self.update_cap,
                        "edge {e} exceeded the doubling bound"
                    );
                }
                let full = rec.updates + rec.promotions;
                let bare = rec.updates;
                self.counters.max_edge_updates = self.counters.max_edge_updates.max(bare);
                self.counters.max_edge_updates_full =
                    self.counters.max_edge_updates_full.max(full);
                self.counters.endpoint_updates += 1;
                self.occs[far as usize].neighbor = kept;
                self.unlink(moved, own);
                self.link_head(kept, own);
                self.alpha.remove(&pair_key(moved, x));
                self.alpha.insert(pair_key(kept, x), e);
            }
        }

        let moved_rec = self.verts.remove(&moved).expect("current vertex");
        debug_assert_eq!(moved_rec.degree, 0, "moved vertex still has edges");
        for &orig in &moved_rec.originals {
            self.phi.insert(orig, kept);
        }
        self.verts
            .get_mut(&kept)
            .expect("current vertex")
            .originals
            .extend(moved_rec.originals);

        report.parallelisms.sort_by_key(|p| p.absorbed);
        report.border_edges.sort();
        Ok(report)
    }

    pub fn insert_edge(
        &mut self,
        e: EdgeId,
        x: VertexId,
        y: VertexId,
    ) -> Result<MergeReport, UnitError> {
        let bx = self.verts.get(&x).ok_or(UnitError::UnknownVertex(x))?.border;
        let by = self.verts.get(&y).ok_or(UnitError::UnknownVertex(y))?.border;
        if x == y {
            return Err(UnitError::LoopInsert(x));
        }
        if self.edges.contains_key(&e) {
            return Err(UnitError::DuplicateEdge(e));
        }
        self.counters.total_insertions += 1;
        if !self.ever_entered.insert(e) {
            self.repeat_insertions += 1;
        }
        let mut report = MergeReport::default();
        if bx && by {
            let first = self.border_reported.insert(e);
            debug_assert!(first, "id reported as border twice");
            report.border_edges.push(e);
        } else if let Some(&incumbent) = self.alpha.get(&pair_key(x, y)) {
            let first = self.para_sources.insert(e);
            debug_assert!(first, "id reported as source twice");
            report.parallelisms.push(Parallelism { absorbed: e, incumbent, ends: pair_key(x, y) });
        } else {
            self.attach_edge(e, x, y);
            self.counters.fresh_insertions += 1;
            self.counters.created_edges += 1;
        }
        Ok(report)
    }

    pub fn phi(&self, v0: VertexId) -> Result<VertexId, UnitError> {
        self.phi.get(&v0).copied().ok_or(UnitError::UnknownVertex(v0))
    }

    /// Original vertices currently represented by `v`, sorted.
    pub fn phi_inv(&self, v: VertexId) -> Result<Vec<VertexId>, UnitError> {
        let rec = self.verts.get(&v).ok_or(UnitError::UnknownVertex(v))?;
        let mut out = rec.originals.clone();
        out.sort_unstable();
        Ok(out)
    }

    pub fn alpha(&self, x: VertexId, y: VertexId) -> Option<EdgeId> {
        self.alpha.get(&pair_key(x, y)).copied()
    }

    pub fn is_border(&self, v: VertexId) -> bool {
        self.verts.get(&v).is_some_and(|r| r.border)
    }

    pub fn degree(&self, v: VertexId) -> Option<usize> {
        self.verts.get(&v).map(|r| r.degree as usize)
    }

    /// Neighbors of `v` with the representing edge, sorted by label.
    pub fn neighbors(&self, v: VertexId) -> Option<Vec<(VertexId, EdgeId)>> {
        let rec = self.verts.get(&v)?;
        let mut out = Vec::with_capacity(rec.degree as usize);
        let mut c = rec.head;
        while c != NIL {
            let o = self.occs[c as usize];
            out.push((o.neighbor, o.edge));
            c = o.next;
        }
        out.sort_unstable();
        Some(out)
    }

    pub fn current_vertices(&self) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = self.verts.keys().copied().collect();
        out.sort_unstable();
        out
    }

    pub fn border_vertices(&self) -> Vec<VertexId> {
        let mut out: Vec<VertexId> =
            self.verts.iter().filter(|(_, r)| r.border).map(|(&v, _)| v).collect();
        out.sort_unstable();
        out
    }

    pub fn current_vertex_count(&self) -> usize {
        self.verts.len()
    }

    pub fn live_edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as (smaller endpoint, larger endpoint, id), sorted.
    pub fn edges_sorted(&self) -> Vec<(VertexId, VertexId, EdgeId)> {
        let mut out: Vec<(VertexId, VertexId, EdgeId)> =
            self.alpha.iter().map(|(&(u, v), &e)| (u, v, e)).collect();
        out.sort_unstable();
        out
    }

    /// Mapping pairs (original, current), sorted by original id.
    pub fn phi_pairs(&self) -> Vec<(VertexId, VertexId)> {
        let mut out: Vec<(VertexId, VertexId)> =
            self.phi.iter().map(|(&o, &c)| (o, c)).collect();
        out.sort_unstable();
        out
    }

    pub fn counters(&self) -> Instrumentation {
        self.counters
    }

    /// (updates excluding border promotions, promotions) for a live edge.
    pub fn edge_update_counts(&self, e: EdgeId) -> Option<(u32, u32)> {
        self.edges.get(&e).map(|r| (r.updates, r.promotions))
    }

    /// Per-edge bound on non-promotion endpoint rewrites: 2 ceil(log2 n0).
    pub fn update_cap(&self) -> u32 {
        self.update_cap
    }

    /// Ids that entered the unit a second time after dying. Stays zero in
    /// the containing structure; counted to prove it.
    pub fn repeat_insertions(&self) -> u64 {
        self.repeat_insertions
    }

    /// Sorted adjacency with alpha values plus the phi table, for debugging.
    pub fn dump(&self) -> String {
        use std::fmt::Write;
        let mut s = String::new();
        for v in self.current_vertices() {
            let tag = if self.is_border(v) { "*" } else { "" };
            let nb = self.neighbors(v).expect("current vertex");
            let row: Vec<String> =
                nb.iter().map(|(x, e)| format!("{x}={e}")).collect();
            writeln!(s, "{v}{tag}: {}", row.join(" ")).expect("string write");
        }
        for (o, c) in self.phi_pairs() {
            writeln!(s, "phi {o} -> {c}").expect("string write");
        }
        s
    }

    pub fn check_invariants(&self) -> Result<(), String> {
        for (&e, rec) in &self.edges {
            let (u, v) = rec.ends;
            if u == v {
                return Err(format!("edge {e} is a loop"));
            }
            let ou = &self.occs[rec.occ.0 as usize];
            let ov = &self.occs[rec.occ.1 as usize];
            if ou.edge != e || ov.edge != e {
                return Err(format!("occurrence slots of {e} disagree on the id"));
            }
            if ou.neighbor != v || ov.neighbor != u {
                return Err(format!("occurrence neighbors of {e} do not cross-match"));
            }
            if self.alpha.get(&pair_key(u, v)) != Some(&e) {
                return Err(format!("alpha misses edge {e}"));
            }
            if self.verts[&u].border && self.verts[&v].border {
                return Err(format!("edge {e} joins border vertices {u} and {v}"));
            }
            if rec.updates > self.update_cap {
                return Err(format!("edge {e} exceeded the doubling bound"));
            }
            if rec.promotions > 2 {
                return Err(format!("edge {e} promoted more than twice"));
            }
        }
        if self.alpha.len() != self.edges.len() {
            return Err("alpha and the edge table disagree on size".into());
        }
        for (&v, rec) in &self.verts {
            let mut seen = 0u32;
            let mut c = rec.head;
            let mut prev = NIL;
            while c != NIL {
                let o = &self.occs[c as usize];
                if o.prev != prev {
                    return Err(format!("broken back link in the list of {v}"));
                }
                let er = self
                    .edges
                    .get(&o.edge)
                    .ok_or_else(|| format!("list of {v} holds dead edge {}", o.edge))?;
                if er.ends.0 != v && er.ends.1 != v {
                    return Err(format!("edge {} listed at non-endpoint {v}", o.edge));
                }
                seen += 1;
                prev = c;
                c = o.next;
            }
            if seen != rec.degree {
                return Err(format!("degree of {v} is {} but the list has {seen}", rec.degree));
            }
        }
        let mapped: usize = self.verts.values().map(|r| r.originals.len()).sum();
        if mapped != self.phi.len() {
            return Err("phi inverse does not partition the originals".into());
        }
        for (&o, &c) in &self.phi {
            if !self.verts.get(&c).is_some_and(|r| r.originals.contains(&o)) {
                return Err(format!("phi({o}) = {c} missing from the inverse"));
            }
        }
        Ok(())
    }
}

//! The contraction structure proper: construction over an embedded planar
//! multigraph, the per-mode unit layout, and the public query surface.
//!
//! Construction simplifies the input (loops and parallel groups become init
//! records), reduces it to a bounded-degree working graph, carves that graph
//! into nested pieces, and hands each region to a merge unit. Vertices on a
//! piece border are represented in the parent unit as well; `beta` links a
//! unit-local border vertex to the parent's vertex for the same class, and
//! `gamma` is the inverse, stored on the parent per child. A class is always
//! answered for at its home: the shallowest unit representing it.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use graph_core::{embed, reduce_degree, EdgeId, PlanarMultigraph, VertexId, Weight};
use merge_unit::{AnyUnit, Instrumentation, MemoTable, MergeUnit, MicroUnit};
use partition::{
    default_r1, default_r2, nested_division_with, r_division, NestedConfig, PartitionError,
};

use crate::book::{EdgeBook, EdgeState};
use crate::{ContractError, GammaBacking, Mode};

/// Reports produced while absorbing the input graph: original self-loops and
/// the collapse of each initial parallel group.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InitReport {
    pub loops: Vec<EdgeId>,
    pub parallelisms: Vec<(EdgeId, EdgeId)>,
}

/// Outcome of one contraction: the surviving label, new directed parallelism
/// records (source joined the class of the target) ordered by the common
/// neighbor's label, and the dying class surfacing as self-loops in preorder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepReport {
    pub survivor: VertexId,
    pub parallelisms: Vec<(EdgeId, EdgeId)>,
    pub loops: Vec<EdgeId>,
}

#[derive(Debug, Clone)]
pub struct StructureConfig {
    pub mode: Mode,
    /// Division slack constant; pieces stop splitting at slack * target edges.
    pub slack: usize,
    /// Bottom pieces at or below this many vertices run on the memo table.
    pub micro_threshold: usize,
    /// Top piece target override; defaults scale with the graph.
    pub top_target: Option<usize>,
    /// Bottom piece target override; defaults scale with the top target.
    pub sub_target: Option<usize>,
    pub gamma: GammaBacking,
    /// Shared memo table for micro units; a fresh one is created when absent.
    pub memo: Option<Arc<MemoTable>>,
}

impl StructureConfig {
    pub fn for_mode(mode: Mode) -> Self {
        StructureConfig {
            mode,
            slack: 8,
            micro_threshold: 12,
            top_target: None,
            sub_target: None,
            gamma: GammaBacking::Hash,
            memo: None,
        }
    }
}

/// Per-unit accounting for budget checks: how much the unit started with and
/// how many edges it ever materialized.
#[derive(Debug, Clone)]
pub struct UnitStats {
    pub level: u8,
    pub micro: bool,
    pub init_vertices: usize,
    pub init_edges: usize,
    pub created_edges: u64,
    pub instrumentation: Option<Instrumentation>,
}

#[derive(Debug)]
pub(crate) enum Gamma {
    Hash(HashMap<(usize, VertexId), VertexId>),
    Ordered(BTreeMap<(usize, VertexId), VertexId>),
}

impl Gamma {
    fn new(backing: GammaBacking) -> Self {
        match backing {
            GammaBacking::Hash => Gamma::Hash(HashMap::new()),
            GammaBacking::Ordered => Gamma::Ordered(BTreeMap::new()),
        }
    }

    pub fn get(&self, k: &(usize, VertexId)) -> Option<VertexId> {
        match self {
            Gamma::Hash(m) => m.get(k).copied(),
            Gamma::Ordered(m) => m.get(k).copied(),
        }
    }

    pub fn insert(&mut self, k: (usize, VertexId), v: VertexId) {
        match self {
            Gamma::Hash(m) => {
                m.insert(k, v);
            }
            Gamma::Ordered(m) => {
                m.insert(k, v);
            }
        }
    }

    pub fn remove(&mut self, k: &(usize, VertexId)) -> Option<VertexId> {
        match self {
            Gamma::Hash(m) => m.remove(k),
            Gamma::Ordered(m) => m.remove(k),
        }
    }

    fn entries_sorted(&self) -> Vec<((usize, VertexId), VertexId)> {
        let mut out: Vec<_> = match self {
            Gamma::Hash(m) => m.iter().map(|(&k, &v)| (k, v)).collect(),
            Gamma::Ordered(m) => m.iter().map(|(&k, &v)| (k, v)).collect(),
        };
        out.sort_unstable();
        out
    }
}

#[derive(Debug)]
pub(crate) struct UnitSlot {
    pub unit: AnyUnit,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub level: u8,
    /// local border vertex -> parent-local vertex of the same class
    pub beta: HashMap<VertexId, VertexId>,
    /// (child slot, local vertex) -> that child's vertex of the same class
    pub gamma: Gamma,
    pub init_vertices: usize,
    pub init_edges: usize,
}

/// Where a live class is answered for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Home {
    Unit { unit: usize, rep: VertexId },
    /// Isolated in the simple view from the start; never merges.
    Detached,
}

#[derive(Debug)]
pub struct ContractionStructure {
    pub(crate) units: Vec<UnitSlot>,
    pub(crate) book: EdgeBook,
    /// reduced vertex -> the unit whose own vertex set contains it
    seats: HashMap<VertexId, usize>,
    /// input vertex -> reduced vertex standing in for it
    entry: HashMap<VertexId, VertexId>,
    pub(crate) home: HashMap<VertexId, Home>,
    /// inverse of `home` for unit-seated classes
    pub(crate) label: HashMap<(usize, VertexId), VertexId>,
    /// live label -> input vertices in the class
    pub(crate) live: HashMap<VertexId, u64>,
    /// live label -> simple-view degree
    pub(crate) deg: HashMap<VertexId, usize>,
    known: HashSet<VertexId>,
    pub(crate) weighted: bool,
    requested: Mode,
    effective: Mode,
}

struct Layout {
    units: Vec<UnitSlot>,
    /// reduced vertex -> home unit; vertices in no piece stay absent
    homes: HashMap<VertexId, usize>,
    effective: Mode,
}

impl ContractionStructure {
    pub fn new(
        g: &PlanarMultigraph,
        weights: Option<&HashMap<EdgeId, Weight>>,
        mode: Mode,
    ) -> Result<(Self, InitReport), ContractError> {
        Self::with_config(g, weights, StructureConfig::for_mode(mode))
    }

    pub fn with_config(
        g: &PlanarMultigraph,
        weights: Option<&HashMap<EdgeId, Weight>>,
        cfg: StructureConfig,
    ) -> Result<(Self, InitReport), ContractError> {
        let weighted = weights.is_some();
        let mut book = EdgeBook::default();
        let mut report = InitReport::default();

        for er in g.edge_recs() {
            let e = er.id;
            let (u, v) = g.endpoints(e).expect("edge of the input graph");
            let w = match weights {
                Some(ws) => Some(*ws.get(&e).ok_or(ContractError::WeightMissing(e))?),
                None => None,
            };
            book.register(e, None, w, true);
            if u == v {
                book.set_state(e, EdgeState::Looped);
                report.loops.push(e);
            }
        }
        report.loops.sort_unstable();

        // Parallel groups collapse up front. Each group chains onto a running
        // incumbent; weighted runs hand the target slot to the (weight, id)
        // minimum, so the incumbent stays the class minimum throughout.
        let mut groups: BTreeMap<(VertexId, VertexId), Vec<EdgeId>> = BTreeMap::new();
        for er in g.edge_recs() {
            let (u, v) = g.endpoints(er.id).expect("edge of the input graph");
            if u == v {
                continue;
            }
            groups.entry((u.min(v), u.max(v))).or_default().push(er.id);
        }
        for members in groups.values_mut() {
            members.sort_unstable();
            let mut incumbent = members[0];
            for &dup in &members[1..] {
                let (loser, winner) = if weighted
                    && book.weight_key(dup) < book.weight_key(incumbent)
                {
                    (incumbent, dup)
                } else {
                    (dup, incumbent)
                };
                book.adopt(loser, winner);
                report.parallelisms.push((loser, winner));
                incumbent = winner;
            }
        }
        report.parallelisms.sort_unstable();

        let emb = embed(g).expect("constructor input is planar");
        let red = reduce_degree(&emb).expect("embedded input reduces");
        debug_assert_eq!(red.dropped_loops, report.loops, "loop passes agree");
        #[cfg(debug_assertions)]
        {
            let mut expect: Vec<(EdgeId, EdgeId)> = groups
                .values()
                .filter(|ms| ms.len() > 1)
                .flat_map(|ms| ms[1..].iter().map(|&m| (m, ms[0])))
                .collect();
            expect.sort_unstable();
            let mut got = red.merged_parallels.clone();
            got.sort_unstable();
            debug_assert_eq!(expect, got, "parallel passes agree");
        }

        // Reduced endpoints: kept representatives read them off the working
        // graph, absorbed group members share their representative's, and the
        // expansion cycle edges are registered as internal.
        let gr = &red.reduced;
        for er in gr.edge_recs() {
            let e = er.id;
            let (a, b) = gr.endpoints(e).expect("edge of the reduced graph");
            if book.contains(e) {
                book.set_ends(e, (a, b));
            } else {
                book.register(e, Some((a, b)), None, false);
            }
        }
        for ms in groups.values() {
            if ms.len() > 1 {
                let ends = book.ends(ms[0]).expect("group representative is kept");
                for &m in &ms[1..] {
                    book.set_ends(m, ends);
                }
            }
        }

        let layout = build_layout(gr, &cfg)?;
        let mut s = ContractionStructure {
            seats: layout.homes.clone(),
            units: layout.units,
            book,
            entry: HashMap::new(),
            home: HashMap::new(),
            label: HashMap::new(),
            live: HashMap::new(),
            deg: HashMap::new(),
            known: g.vertex_ids().iter().copied().collect(),
            weighted,
            requested: cfg.mode,
            effective: layout.effective,
        };

        // Working labels are the reduced ids until the rename below.
        for (vi, &gv) in gr.vertex_ids().iter().enumerate() {
            match layout.homes.get(&gv) {
                Some(&u) => {
                    s.home.insert(gv, Home::Unit { unit: u, rep: gv });
                    s.label.insert((u, gv), gv);
                }
                None => {
                    s.home.insert(gv, Home::Detached);
                }
            }
            s.live.insert(gv, 1);
            s.deg.insert(gv, gr.degree(vi));
            s.book.ensure_ring(gv);
        }
        for er in gr.edge_recs() {
            let r = s.book.root_of(er.id);
            let (a, b) = s.book.ends(r).expect("placed representative");
            s.book.ring_insert(r, a, b);
        }

        // Collapse the expansion cycles. These contractions run the full
        // machinery but involve internal edges only, so nothing reaches the
        // init report.
        for &ce in &red.cycle_edges {
            if s.book.state(ce) == EdgeState::Live {
                let internal = s.contract_resolved(ce);
                debug_assert!(
                    internal.parallelisms.is_empty() && internal.loops.is_empty(),
                    "cycle collapse stays internal"
                );
            }
        }

        // Retire the working labels: every surviving class is the expansion
        // of exactly one input vertex.
        let mut labels: Vec<VertexId> = s.home.keys().copied().collect();
        labels.sort_unstable();
        for gl in labels {
            let o = red.vertex_origin[&gl];
            if o != gl {
                let h = s.home.remove(&gl).expect("listed label");
                if let Home::Unit { unit, rep } = h {
                    s.label.insert((unit, rep), o);
                }
                s.home.insert(o, h);
                let d = s.deg.remove(&gl).expect("listed label");
                s.deg.insert(o, d);
                s.live.remove(&gl);
                s.book.ring_rename(gl, o);
            }
            s.live.insert(o, 1);
        }
        debug_assert_eq!(s.home.len(), s.known.len(), "one class per input vertex");

        for (&gv, &o) in &red.vertex_origin {
            let slot = s.entry.entry(o).or_insert(gv);
            if gv < *slot {
                *slot = gv;
            }
        }

        Ok((s, report))
    }

    pub fn mode(&self) -> Mode {
        self.effective
    }

    pub fn requested_mode(&self) -> Mode {
        self.requested
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    /// Current label of the class whose representative in `unit` is `x`.
    pub(crate) fn climb_local(&self, mut unit: usize, mut x: VertexId) -> VertexId {
        loop {
            let slot = &self.units[unit];
            if !slot.unit.is_border(x) {
                return *self
                    .label
                    .get(&(unit, x))
                    .expect("home representative carries a label");
            }
            x = *slot.beta.get(&x).expect("border representative links upward");
            unit = slot.parent.expect("bordered unit has a parent");
        }
    }

    /// Current label of the class containing reduced vertex `gv`.
    pub(crate) fn climb_reduced(&self, gv: VertexId) -> VertexId {
        match self.seats.get(&gv) {
            // Piece-less vertices are detached and keep their label forever.
            None => gv,
            Some(&u) => {
                let x = self.units[u].unit.phi(gv).expect("seat unit covers its vertex");
                self.climb_local(u, x)
            }
        }
    }

    /// Representative of the class labeled `label` inside `target`, when
    /// `target` lies on the chain below the class home.
    pub(crate) fn rep_at(&self, target: usize, label: VertexId) -> Option<VertexId> {
        let Home::Unit { unit: hu, rep } = *self.home.get(&label)? else {
            return None;
        };
        let mut chain = Vec::new();
        let mut cur = target;
        while cur != hu {
            chain.push(cur);
            cur = self.units[cur].parent?;
        }
        let mut t = rep;
        for &w in chain.iter().rev() {
            let p = self.units[w].parent.expect("walked down from an ancestor");
            t = self.units[p].gamma.get(&(w, t))?;
        }
        Some(t)
    }

    pub(crate) fn resolve_label(&self, v: VertexId) -> Result<(), ContractError> {
        if !self.known.contains(&v) {
            return Err(ContractError::UnknownVertex(v));
        }
        if !self.home.contains_key(&v) {
            return Err(ContractError::DeadVertex(v));
        }
        Ok(())
    }

    pub(crate) fn resolve_live_edge(&self, e: EdgeId) -> Result<(), ContractError> {
        if !self.book.contains(e) || !self.book.is_public(e) {
            return Err(ContractError::UnknownEdge(e));
        }
        if self.book.state(e) != EdgeState::Live {
            return Err(ContractError::DeadEdge(e));
        }
        Ok(())
    }

    /// The class of an input vertex, by its live label.
    pub fn phi(&self, v0: VertexId) -> Result<VertexId, ContractError> {
        if !self.known.contains(&v0) {
            return Err(ContractError::UnknownVertex(v0));
        }
        let g = self.entry[&v0];
        Ok(self.climb_reduced(g))
    }

    /// Simple-view degree of a live class.
    pub fn deg(&self, u: VertexId) -> Result<usize, ContractError> {
        self.resolve_label(u)?;
        Ok(self.deg[&u])
    }

    /// Neighboring classes with the representing edge, sorted by label.
    pub fn neighbors(&self, u: VertexId) -> Result<Vec<(VertexId, EdgeId)>, ContractError> {
        self.resolve_label(u)?;
        let mut out: Vec<(VertexId, EdgeId)> = self
            .book
            .ring_edges(u)
            .into_iter()
            .map(|r| {
                let (a, b) = self.book.ends(r).expect("ringed edge is placed");
                let pa = self.climb_reduced(a);
                let other = if pa == u { self.climb_reduced(b) } else { pa };
                (other, r)
            })
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    /// Representative edge between two live classes, if they are adjacent.
    pub fn edge(&self, u: VertexId, v: VertexId) -> Result<Option<EdgeId>, ContractError> {
        self.resolve_label(u)?;
        self.resolve_label(v)?;
        if u == v {
            return Ok(None);
        }
        let hu = self.home[&u];
        let hv = self.home[&v];
        let (Home::Unit { unit: du, rep: ru }, Home::Unit { unit: dv, rep: rv }) = (hu, hv) else {
            return Ok(None);
        };
        // Any adjacency is held by the deeper of the two homes.
        let (deep, deep_rep, shallow_label) = if self.units[du].level >= self.units[dv].level {
            (du, ru, v)
        } else {
            (dv, rv, u)
        };
        let Some(t) = self.rep_at(deep, shallow_label) else {
            return Ok(None);
        };
        Ok(self.units[deep].unit.alpha(deep_rep, t).map(|h| self.book.root_of(h)))
    }

    /// Labels of the two classes a live edge joins, smaller first.
    pub fn vertices(&self, e: EdgeId) -> Result<(VertexId, VertexId), ContractError> {
        self.resolve_live_edge(e)?;
        let (a, b) = self.book.ends(e).expect("live edge is placed");
        let pa = self.climb_reduced(a);
        let pb = self.climb_reduced(b);
        Ok((pa.min(pb), pa.max(pb)))
    }

    pub fn representative(&self, e: EdgeId) -> Result<EdgeId, ContractError> {
        self.resolve_live_edge(e)?;
        Ok(self.book.root_of(e))
    }

    /// Every live edge in the same parallel class, ascending ids.
    pub fn parallel_class(&self, e: EdgeId) -> Result<Vec<EdgeId>, ContractError> {
        self.resolve_live_edge(e)?;
        let mut ids = self.book.preorder(self.book.root_of(e));
        ids.sort_unstable();
        Ok(ids)
    }

    /// In weighted runs class roots are maintained as the (weight, id)
    /// minimum, so the minimum-weight member is the representative itself.
    pub fn min_weight_in_class(&self, e: EdgeId) -> Result<EdgeId, ContractError> {
        if !self.weighted {
            return Err(ContractError::WeightsAbsent);
        }
        self.resolve_live_edge(e)?;
        let root = self.book.root_of(e);
        debug_assert_eq!(
            self.book.weight_key(root),
            self.book
                .preorder(root)
                .into_iter()
                .map(|j| self.book.weight_key(j))
                .min()
                .expect("non-empty class"),
            "weighted roots are class minima"
        );
        Ok(root)
    }

    pub fn live_vertex_count(&self) -> usize {
        self.home.len()
    }

    pub fn live_vertices(&self) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = self.home.keys().copied().collect();
        out.sort_unstable();
        out
    }

    /// Partition of the input vertices by live class, keyed by label.
    pub fn vertex_partition(&self) -> Vec<(VertexId, Vec<VertexId>)> {
        let mut by_class: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
        let mut origins: Vec<VertexId> = self.known.iter().copied().collect();
        origins.sort_unstable();
        for v0 in origins {
            let l = self.phi(v0).expect("known vertex");
            by_class.entry(l).or_default().push(v0);
        }
        by_class.into_iter().collect()
    }

    pub fn live_edges(&self) -> Vec<EdgeId> {
        self.public_by_state(EdgeState::Live)
    }

    pub fn loop_edges(&self) -> Vec<EdgeId> {
        self.public_by_state(EdgeState::Looped)
    }

    pub fn contracted_edges(&self) -> Vec<EdgeId> {
        self.public_by_state(EdgeState::Contracted)
    }

    fn public_by_state(&self, want: EdgeState) -> Vec<EdgeId> {
        self.book
            .edge_ids_sorted()
            .into_iter()
            .filter(|&e| self.book.is_public(e) && self.book.state(e) == want)
            .collect()
    }

    /// Live parallel classes as sorted id lists, ordered by first id.
    pub fn edge_classes(&self) -> Vec<Vec<EdgeId>> {
        let mut out: Vec<Vec<EdgeId>> = self
            .book
            .edge_ids_sorted()
            .into_iter()
            .filter(|&e| {
                self.book.is_public(e)
                    && self.book.state(e) == EdgeState::Live
                    && self.book.root_of(e) == e
            })
            .map(|r| {
                let mut ids = self.book.preorder(r);
                ids.sort_unstable();
                ids
            })
            .collect();
        out.sort();
        out
    }

    /// Simple-view adjacency as sorted label pairs.
    pub fn simple_edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out: Vec<(VertexId, VertexId)> = self
            .book
            .edge_ids_sorted()
            .into_iter()
            .filter(|&e| {
                self.book.is_public(e)
                    && self.book.state(e) == EdgeState::Live
                    && self.book.root_of(e) == e
            })
            .map(|r| {
                let (a, b) = self.book.ends(r).expect("live edge is placed");
                let pa = self.climb_reduced(a);
                let pb = self.climb_reduced(b);
                (pa.min(pb), pa.max(pb))
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn unit_stats(&self) -> Vec<UnitStats> {
        self.units
            .iter()
            .map(|s| match &s.unit {
                AnyUnit::General(g) => {
                    let c = g.counters();
                    UnitStats {
                        level: s.level,
                        micro: false,
                        init_vertices: s.init_vertices,
                        init_edges: s.init_edges,
                        created_edges: c.created_edges,
                        instrumentation: Some(c),
                    }
                }
                AnyUnit::Micro(_) => UnitStats {
                    level: s.level,
                    micro: true,
                    init_vertices: s.init_vertices,
                    init_edges: s.init_edges,
                    created_edges: s.init_edges as u64,
                    instrumentation: None,
                },
            })
            .collect()
    }

    /// Edges whose ids re-entered some unit after once leaving it. Stays zero;
    /// anything else means an edge bounced between units.
    pub fn repeat_insertions(&self) -> u64 {
        self.units
            .iter()
            .map(|s| match &s.unit {
                AnyUnit::General(g) => g.repeat_insertions(),
                AnyUnit::Micro(_) => 0,
            })
            .sum()
    }

    /// Full-state audit. Expensive; meant for tests.
    pub fn check(&self) -> Result<(), String> {
        for (i, s) in self.units.iter().enumerate() {
            s.unit
                .check_invariants()
                .map_err(|e| format!("unit {i}: {e}"))?;
        }

        // Border links and child dictionaries invert each other.
        for (ci, s) in self.units.iter().enumerate() {
            let Some(p) = s.parent else {
                if !s.beta.is_empty() {
                    return Err(format!("root unit {ci} has border links"));
                }
                continue;
            };
            let border: HashSet<VertexId> = s.unit.border_vertices().into_iter().collect();
            let linked: HashSet<VertexId> = s.beta.keys().copied().collect();
            if border != linked {
                return Err(format!("unit {ci}: border set and beta domain differ"));
            }
            for (&x, &y) in &s.beta {
                match self.units[p].gamma.get(&(ci, y)) {
                    Some(back) if back == x => {}
                    other => {
                        return Err(format!(
                            "unit {ci}: beta({x}) = {y} but gamma answers {other:?}"
                        ));
                    }
                }
            }
        }
        for (pi, s) in self.units.iter().enumerate() {
            for ((ci, up), down) in s.gamma.entries_sorted() {
                if self.units[ci].parent != Some(pi) {
                    return Err(format!("gamma of unit {pi} names non-child {ci}"));
                }
                match self.units[ci].beta.get(&down) {
                    Some(&back) if back == up => {}
                    other => {
                        return Err(format!(
                            "unit {pi}: gamma({ci}, {up}) = {down} but beta answers {other:?}"
                        ));
                    }
                }
            }
        }

        // Live classes hang below live roots; dead edges have no live kids.
        for e in self.book.edge_ids_sorted() {
            if self.book.state(e) == EdgeState::Live {
                let r = self.book.root_of(e);
                if self.book.state(r) != EdgeState::Live {
                    return Err(format!("live edge {e} hangs below dead root {r}"));
                }
                if self.book.is_public(e) != self.book.is_public(r) {
                    return Err(format!("class of {r} mixes public and internal edges"));
                }
            }
        }

        // Labels, homes, degrees, rings, and the class sizes agree.
        let mut total_live: u64 = 0;
        for (&l, &h) in &self.home {
            match h {
                Home::Unit { unit, rep } => {
                    if self.units[unit].unit.is_border(rep) {
                        return Err(format!("home representative of {l} sits on a border"));
                    }
                    match self.label.get(&(unit, rep)) {
                        Some(&back) if back == l => {}
                        other => {
                            return Err(format!("label map answers {other:?} for {l}"));
                        }
                    }
                }
                Home::Detached => {
                    if self.deg[&l] != 0 {
                        return Err(format!("detached class {l} has degree {}", self.deg[&l]));
                    }
                }
            }
            let d = *self
                .deg
                .get(&l)
                .ok_or_else(|| format!("live class {l} has no degree"))?;
            let ring = self.book.ring_len(l);
            if d != ring {
                return Err(format!("class {l}: degree {d} but ring holds {ring}"));
            }
            let nb = self.neighbors(l).map_err(|e| e.to_string())?;
            if nb.len() != d {
                return Err(format!("class {l}: degree {d} but {} neighbors", nb.len()));
            }
            for (other, r) in nb {
                if other == l {
                    return Err(format!("class {l} neighbors itself"));
                }
                if self.book.state(r) != EdgeState::Live || self.book.root_of(r) != r {
                    return Err(format!("ring of {l} holds non-representative {r}"));
                }
                match self.edge(l, other) {
                    Ok(Some(back)) if back == r => {}
                    other_ans => {
                        return Err(format!(
                            "edge({l}, {other}) answered {other_ans:?}, ring says {r}"
                        ));
                    }
                }
            }
            total_live += self.live[&l];
        }
        if total_live != self.known.len() as u64 {
            return Err(format!(
                "live counts sum to {total_live}, expected {}",
                self.known.len()
            ));
        }
        for (label, members) in self.vertex_partition() {
            if self.live[&label] != members.len() as u64 {
                return Err(format!(
                    "class {label}: counted {} but holds {} vertices",
                    self.live[&label],
                    members.len()
                ));
            }
            if !members.contains(&label) {
                return Err(format!("label {label} is outside its own class"));
            }
        }

        // The simple view of a planar graph stays planar.
        let n = self.home.len();
        if n >= 3 && self.simple_edges().len() > 3 * n - 6 {
            return Err(format!(
                "simple view exceeds the planar bound: {} edges on {n} classes",
                self.simple_edges().len()
            ));
        }
        Ok(())
    }
}

fn partition_err(e: PartitionError) -> ContractError {
    match e {
        PartitionError::TargetTooSmall(r) => ContractError::InvalidTarget(r),
        // Remaining division failures would mean the reduced graph broke its
        // own guarantees; surface them loudly.
        other => panic!("division of the reduced graph failed: {other}"),
    }
}

fn sorted_triples(
    gr: &PlanarMultigraph,
    ids: impl IntoIterator<Item = EdgeId>,
) -> Vec<(EdgeId, VertexId, VertexId)> {
    let mut out: Vec<(EdgeId, VertexId, VertexId)> = ids
        .into_iter()
        .map(|e| {
            let (u, v) = gr.endpoints(e).expect("edge of the reduced graph");
            (e, u, v)
        })
        .collect();
    out.sort_unstable();
    out
}

fn build_layout(gr: &PlanarMultigraph, cfg: &StructureConfig) -> Result<Layout, ContractError> {
    let n = gr.n();
    // Decide the shape first: layered layouts only pay off while the piece
    // targets still shrink the graph, otherwise drop a level.
    let mut plan = cfg.mode;
    let mut r1 = 0usize;
    let mut r2 = 0usize;
    if plan != Mode::Naive {
        r1 = cfg.top_target.unwrap_or_else(|| default_r1(n));
        if r1 < 4 {
            return Err(ContractError::InvalidTarget(r1));
        }
        if r1 >= n {
            plan = Mode::Naive;
        }
    }
    if plan == Mode::ThreeLevel {
        r2 = cfg.sub_target.unwrap_or_else(|| default_r2(r1));
        if r2 < 4 {
            return Err(ContractError::InvalidTarget(r2));
        }
        if r2 >= r1 {
            plan = Mode::TwoLevel;
        }
    }

    let layout = match plan {
        Mode::Naive => build_naive(gr, cfg),
        Mode::TwoLevel => build_two(gr, cfg, r1)?,
        Mode::ThreeLevel => build_three(gr, cfg, r1, r2)?,
    };
    debug_assert_eq!(
        layout.units.iter().map(|s| s.init_edges).sum::<usize>(),
        gr.m(),
        "every reduced edge lands in exactly one unit"
    );
    Ok(layout)
}

fn build_naive(gr: &PlanarMultigraph, cfg: &StructureConfig) -> Layout {
    let mut vs: Vec<VertexId> = gr.vertex_ids().to_vec();
    vs.sort_unstable();
    let es = sorted_triples(gr, gr.edge_recs().iter().map(|er| er.id));
    let unit = MergeUnit::init(&vs, &[], &es).expect("reduced graph is simple");
    let homes = vs.iter().map(|&v| (v, 0)).collect();
    Layout {
        units: vec![UnitSlot {
            unit: AnyUnit::General(unit),
            parent: None,
            children: Vec::new(),
            level: 0,
            beta: HashMap::new(),
            gamma: Gamma::new(cfg.gamma),
            init_vertices: vs.len(),
            init_edges: es.len(),
        }],
        homes,
        effective: Mode::Naive,
    }
}

fn build_two(gr: &PlanarMultigraph, cfg: &StructureConfig, r1: usize) -> Result<Layout, ContractError> {
    let div = r_division(gr, r1, cfg.slack).map_err(partition_err)?;
    let mut rootset: HashSet<VertexId> = HashSet::new();
    for p in &div.pieces {
        rootset.extend(p.boundary.iter().copied());
    }
    let mut rootv: Vec<VertexId> = rootset.iter().copied().collect();
    rootv.sort_unstable();
    let both_in = |set: &HashSet<VertexId>, e: EdgeId| {
        let (u, v) = gr.endpoints(e).expect("edge of the reduced graph");
        set.contains(&u) && set.contains(&v)
    };
    let root_edges = sorted_triples(
        gr,
        gr.edge_recs().iter().map(|er| er.id).filter(|&e| both_in(&rootset, e)),
    );
    let root = MergeUnit::init(&rootv, &[], &root_edges)
        .expect("boundary skeleton is simple");
    let mut units = vec![UnitSlot {
        unit: AnyUnit::General(root),
        parent: None,
        children: Vec::new(),
        level: 0,
        beta: HashMap::new(),
        gamma: Gamma::new(cfg.gamma),
        init_vertices: rootv.len(),
        init_edges: root_edges.len(),
    }];
    let mut homes: HashMap<VertexId, usize> = rootv.iter().map(|&v| (v, 0)).collect();

    for p in &div.pieces {
        let idx = units.len();
        let pe = sorted_triples(
            gr,
            p.edges.iter().copied().filter(|&e| !both_in(&rootset, e)),
        );
        let unit = MergeUnit::init(&p.vertices, &p.boundary, &pe)
            .expect("edges between borders stay in the top unit");
        let mut beta = HashMap::new();
        for &b in &p.boundary {
            beta.insert(b, b);
            units[0].gamma.insert((idx, b), b);
        }
        let init_edges = pe.len();
        units.push(UnitSlot {
            unit: AnyUnit::General(unit),
            parent: Some(0),
            children: Vec::new(),
            level: 1,
            beta,
            gamma: Gamma::new(cfg.gamma),
            init_vertices: p.vertices.len(),
            init_edges,
        });
        units[0].children.push(idx);
        for &v in &p.vertices {
            if !rootset.contains(&v) {
                homes.insert(v, idx);
            }
        }
    }
    Ok(Layout { units, homes, effective: Mode::TwoLevel })
}

fn build_three(
    gr: &PlanarMultigraph,
    cfg: &StructureConfig,
    r1: usize,
    r2: usize,
) -> Result<Layout, ContractError> {
    let nd = nested_division_with(
        gr,
        NestedConfig {
            r1: Some(r1),
            r2: Some(r2),
            slack: cfg.slack,
            vertex_piece_cap: 3,
        },
    )
    .map_err(partition_err)?;
    let memo = cfg.memo.clone().unwrap_or_default();
    let micro_cap = cfg.micro_threshold.min(memo.threshold());

    let mut rootset: HashSet<VertexId> = HashSet::new();
    for p in &nd.top.pieces {
        rootset.extend(p.boundary.iter().copied());
    }
    let mut rootv: Vec<VertexId> = rootset.iter().copied().collect();
    rootv.sort_unstable();
    let both_in = |set: &HashSet<VertexId>, e: EdgeId| {
        let (u, v) = gr.endpoints(e).expect("edge of the reduced graph");
        set.contains(&u) && set.contains(&v)
    };
    let root_edges = sorted_triples(
        gr,
        gr.edge_recs().iter().map(|er| er.id).filter(|&e| both_in(&rootset, e)),
    );
    let root = MergeUnit::init(&rootv, &[], &root_edges)
        .expect("boundary skeleton is simple");
    let mut units = vec![UnitSlot {
        unit: AnyUnit::General(root),
        parent: None,
        children: Vec::new(),
        level: 0,
        beta: HashMap::new(),
        gamma: Gamma::new(cfg.gamma),
        init_vertices: rootv.len(),
        init_edges: root_edges.len(),
    }];
    let mut homes: HashMap<VertexId, usize> = rootv.iter().map(|&v| (v, 0)).collect();

    for (i, p) in nd.top.pieces.iter().enumerate() {
        let sub = &nd.sub[i];
        let mut midset: HashSet<VertexId> = p.boundary.iter().copied().collect();
        for sp in &sub.pieces {
            midset.extend(sp.boundary.iter().copied());
        }
        let mut midv: Vec<VertexId> = midset.iter().copied().collect();
        midv.sort_unstable();
        let mid_edges = sorted_triples(
            gr,
            p.edges
                .iter()
                .copied()
                .filter(|&e| both_in(&midset, e) && !both_in(&rootset, e)),
        );
        let mid_idx = units.len();
        let unit = MergeUnit::init(&midv, &p.boundary, &mid_edges)
            .expect("edges between piece borders stay in the top unit");
        let mut beta = HashMap::new();
        for &b in &p.boundary {
            beta.insert(b, b);
            units[0].gamma.insert((mid_idx, b), b);
        }
        let mid_edge_count = mid_edges.len();
        units.push(UnitSlot {
            unit: AnyUnit::General(unit),
            parent: Some(0),
            children: Vec::new(),
            level: 1,
            beta,
            gamma: Gamma::new(cfg.gamma),
            init_vertices: midv.len(),
            init_edges: mid_edge_count,
        });
        units[0].children.push(mid_idx);
        for &v in &midv {
            if !rootset.contains(&v) {
                homes.insert(v, mid_idx);
            }
        }

        for sp in &sub.pieces {
            let leaf_idx = units.len();
            let border: Vec<VertexId> = sp
                .vertices
                .iter()
                .copied()
                .filter(|v| midset.contains(v))
                .collect();
            let le = sorted_triples(
                gr,
                sp.edges.iter().copied().filter(|&e| !both_in(&midset, e)),
            );
            let unit = if sp.vertices.len() <= micro_cap {
                AnyUnit::Micro(
                    MicroUnit::init(memo.clone(), &sp.vertices, &border, &le)
                        .expect("small bottom piece fits the memo table"),
                )
            } else {
                AnyUnit::General(
                    MergeUnit::init(&sp.vertices, &border, &le)
                        .expect("edges between borders stay in ancestor units"),
                )
            };
            let mut beta = HashMap::new();
            for &b in &border {
                beta.insert(b, b);
                units[mid_idx].gamma.insert((leaf_idx, b), b);
            }
            let leaf_edge_count = le.len();
            units.push(UnitSlot {
                unit,
                parent: Some(mid_idx),
                children: Vec::new(),
                level: 2,
                beta,
                gamma: Gamma::new(cfg.gamma),
                init_vertices: sp.vertices.len(),
                init_edges: leaf_edge_count,
            });
            units[mid_idx].children.push(leaf_idx);
            for &v in &sp.vertices {
                if !midset.contains(&v) {
                    homes.insert(v, leaf_idx);
                }
            }
        }
    }
    Ok(Layout { units, homes, effective: Mode::ThreeLevel })
}

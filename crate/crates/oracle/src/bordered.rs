//! Reference model of a bordered merge unit: a simple graph with a border
//! vertex set, supporting vertex identifications and edge insertions with
//! parallelism and border-edge reporting. Everything is stored in ordered
//! maps and rescanned; no amortization.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use graph_core::{EdgeId, VertexId};

use crate::OracleError;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModelReport {
    pub parallelisms: Vec<(EdgeId, EdgeId)>,
    pub border_edges: Vec<EdgeId>,
}

#[derive(Debug, Clone)]
pub struct MergeModel {
    cur: BTreeSet<VertexId>,
    border: BTreeSet<VertexId>,
    phi: BTreeMap<VertexId, VertexId>,
    inv: BTreeMap<VertexId, Vec<VertexId>>,
    adj: BTreeMap<VertexId, BTreeMap<VertexId, EdgeId>>,
    live_ids: HashSet<EdgeId>,
    // Lifetime books: an id may be a parallelism source once and a border
    // report subject once, ever.
    para_sources: HashSet<EdgeId>,
    border_reported: HashSet<EdgeId>,
}

impl MergeModel {
    pub fn init(
        vertices: &[VertexId],
        border: &[VertexId],
        edges: &[(EdgeId, VertexId, VertexId)],
    ) -> Result<Self, OracleError> {
        let cur: BTreeSet<VertexId> = vertices.iter().copied().collect();
        let mut bset = BTreeSet::new();
        for &b in border {
            if !cur.contains(&b) {
                return Err(OracleError::UnknownVertex(b));
            }
            bset.insert(b);
        }
        let mut adj: BTreeMap<VertexId, BTreeMap<VertexId, EdgeId>> =
            cur.iter().map(|&v| (v, BTreeMap::new())).collect();
        let mut live_ids = HashSet::new();
        for &(e, u, v) in edges {
            if !cur.contains(&u) {
                return Err(OracleError::UnknownVertex(u));
            }
            if !cur.contains(&v) {
                return Err(OracleError::UnknownVertex(v));
            }
            if u == v || adj[&u].contains_key(&v) {
                return Err(OracleError::NotSimple { edge: e });
            }
            if !live_ids.insert(e) {
                return Err(OracleError::DuplicateEdge(e));
            }
            if bset.contains(&u) && bset.contains(&v) {
                return Err(OracleError::BorderEdge { edge: e });
            }
            adj.get_mut(&u).unwrap().insert(v, e);
            adj.get_mut(&v).unwrap().insert(u, e);
        }
        let phi: BTreeMap<VertexId, VertexId> = cur.iter().map(|&v| (v, v)).collect();
        let inv: BTreeMap<VertexId, Vec<VertexId>> = cur.iter().map(|&v| (v, vec![v])).collect();
        Ok(MergeModel {
            cur,
            border: bset,
            phi,
            inv,
            adj,
            live_ids,
            para_sources: HashSet::new(),
            border_reported: HashSet::new(),
        })
    }

    fn remove_edge(&mut self, u: VertexId, v: VertexId) {
        let e = self.adj.get_mut(&u).unwrap().remove(&v).expect("edge present");
        self.adj.get_mut(&v).unwrap().remove(&u);
        self.live_ids.remove(&e);
    }

    pub fn merge(&mut self, u: VertexId, v: VertexId) -> Result<ModelReport, OracleError> {
        if !self.cur.contains(&u) {
            return Err(OracleError::UnknownVertex(u));
        }
        if !self.cur.contains(&v) {
            return Err(OracleError::UnknownVertex(v));
        }
        if u == v {
            return Err(OracleError::IdenticalMerge(u));
        }
        let both_border = self.border.contains(&u) && self.border.contains(&v);
        let adjacent = self.adj[&u].contains_key(&v);
        if !both_border && !adjacent {
            return Err(OracleError::MergeNotAllowed(u, v));
        }

        // Keep the border endpoint; among equals keep the larger merged set,
        // then the higher label.
        let sort_key = |x: VertexId| (self.border.contains(&x), self.inv[&x].len(), x);
        let (kept, moved) = if sort_key(u) >= sort_key(v) { (u, v) } else { (v, u) };
        let merged_is_border = self.border.contains(&kept);

        let mut report = ModelReport::default();
        let moved_adj: Vec<(VertexId, EdgeId)> =
            self.adj[&moved].iter().map(|(&x, &e)| (x, e)).collect();
        for (x, e) in moved_adj {
            self.remove_edge(moved, x);
            if x == kept {
                // The connecting edge vanishes without a report.
                continue;
            }
            if let Some(&incumbent) = self.adj[&kept].get(&x) {
                let first = self.para_sources.insert(e);
                debug_assert!(first, "id reported as source twice");
                report.parallelisms.push((e, incumbent));
            } else if merged_is_border && self.border.contains(&x) {
                let first = self.border_reported.insert(e);
                debug_assert!(first, "id reported as border twice");
                report.border_edges.push(e);
            } else {
                self.adj.get_mut(&kept).unwrap().insert(x, e);
                self.adj.get_mut(&x).unwrap().insert(kept, e);
                self.live_ids.insert(e);
            }
        }

        let sources = self.inv.remove(&moved).expect("current vertex");
        for &orig in &sources {
            self.phi.insert(orig, kept);
        }
        let target = self.inv.get_mut(&kept).expect("current vertex");
        target.extend(sources);
        target.sort();
        self.adj.remove(&moved);
        self.cur.remove(&moved);
        self.border.remove(&moved);
        report.parallelisms.sort();
        report.border_edges.sort();
        Ok(report)
    }

    pub fn insert_edge(
        &mut self,
        e: EdgeId,
        x: VertexId,
        y: VertexId,
    ) -> Result<ModelReport, OracleError> {
        if !self.cur.contains(&x) {
            return Err(OracleError::UnknownVertex(x));
        }
        if !self.cur.contains(&y) {
            return Err(OracleError::UnknownVertex(y));
        }
        if x == y {
            return Err(OracleError::LoopInsert(x));
        }
        if self.live_ids.contains(&e) {
            return Err(OracleError::DuplicateEdge(e));
        }
        let mut report = ModelReport::default();
        if self.border.contains(&x) && self.border.contains(&y) {
            let first = self.border_reported.insert(e);
            debug_assert!(first, "id reported as border twice");
            report.border_edges.push(e);
        } else if let Some(&incumbent) = self.adj[&x].get(&y) {
            let first = self.para_sources.insert(e);
            debug_assert!(first, "id reported as source twice");
            report.parallelisms.push((e, incumbent));
        } else {
            self.adj.get_mut(&x).unwrap().insert(y, e);
            self.adj.get_mut(&y).unwrap().insert(x, e);
            self.live_ids.insert(e);
        }
        Ok(report)
    }

    pub fn phi(&self, v0: VertexId) -> Result<VertexId, OracleError> {
        self.phi.get(&v0).copied().ok_or(OracleError::UnknownVertex(v0))
    }

    pub fn phi_inv(&self, v: VertexId) -> Result<&[VertexId], OracleError> {
        self.inv.get(&v).map(|s| s.as_slice()).ok_or(OracleError::UnknownVertex(v))
    }

    pub fn current_vertices(&self) -> Vec<VertexId> {
        self.cur.iter().copied().collect()
    }

    pub fn border_vertices(&self) -> Vec<VertexId> {
        self.border.iter().copied().collect()
    }

    pub fn is_border(&self, v: VertexId) -> bool {
        self.border.contains(&v)
    }

    pub fn alpha(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.adj.get(&u)?.get(&v).copied()
    }

    /// Edges as (smaller endpoint, larger endpoint, id), sorted.
    pub fn edges_sorted(&self) -> Vec<(VertexId, VertexId, EdgeId)> {
        let mut out = Vec::new();
        for (&u, nb) in &self.adj {
            for (&v, &e) in nb {
                if u < v {
                    out.push((u, v, e));
                }
            }
        }
        out
    }

    /// Mapping pairs (original, current), sorted by original id.
    pub fn phi_pairs(&self) -> Vec<(VertexId, VertexId)> {
        self.phi.iter().map(|(&o, &c)| (o, c)).collect()
    }

    pub fn check_invariants(&self) -> Result<(), String> {
        for (&u, nb) in &self.adj {
            for (&v, &e) in nb {
                if u == v {
                    return Err(format!("loop at {u}"));
                }
                if self.adj.get(&v).and_then(|m| m.get(&u)) != Some(&e) {
                    return Err(format!("asymmetric adjacency {u}-{v}"));
                }
                if self.border.contains(&u) && self.border.contains(&v) {
                    return Err(format!("edge {e} joins border vertices {u} and {v}"));
                }
            }
        }
        for (&orig, &cur) in &self.phi {
            if !self.inv.get(&cur).is_some_and(|s| s.contains(&orig)) {
                return Err(format!("phi({orig}) = {cur} missing from the inverse"));
            }
        }
        let mapped: usize = self.inv.values().map(|s| s.len()).sum();
        if mapped != self.phi.len() {
            return Err("phi inverse does not partition the originals".into());
        }
        Ok(())
    }
}

//! Naive contraction model: the whole state is a vertex partition plus a
//! forest of parallelism records, and every query rescans the live edge list.

use std::collections::HashMap;

use graph_core::{EdgeId, PlanarMultigraph, VertexId, Weight};

use crate::OracleError;

/// Reports produced while absorbing the input graph: original self-loops and
/// the collapse of each initial parallel group onto its lowest-id member.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InitReport {
    pub loops: Vec<EdgeId>,
    pub parallelisms: Vec<(EdgeId, EdgeId)>,
}

/// Outcome of one contraction: the surviving vertex label, new directed
/// parallelisms (source joined the class of the target), and edges that became
/// self-loops, listed in preorder of the dying class tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepReport {
    pub survivor: VertexId,
    pub parallelisms: Vec<(EdgeId, EdgeId)>,
    pub loops: Vec<EdgeId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EdgeState {
    Live,
    Looped,
    Contracted,
}

pub struct NaiveContraction {
    vids: Vec<VertexId>,
    vidx: HashMap<VertexId, usize>,
    eids: Vec<EdgeId>,
    eidx: HashMap<EdgeId, usize>,
    ends: Vec<(usize, usize)>,
    weights: Option<Vec<Weight>>,
    // Vertex partition: slot per class, always labelled with a live label.
    class_of: Vec<usize>,
    members: Vec<Vec<usize>>,
    label: Vec<VertexId>,
    alive_class: Vec<bool>,
    // Parallelism forest over edge indices, built from the reported pairs;
    // children in report order so the loop lists of later contractions come
    // out in a fixed preorder. In weighted runs every report points at the
    // (weight, id)-minimal of the two class minima, so roots are always
    // class minima; unweighted reports point at the survivor-side edge.
    state: Vec<EdgeState>,
    parent: Vec<Option<usize>>,
    kids: Vec<Vec<usize>>,
}

impl NaiveContraction {
    pub fn from_graph(
        g: &PlanarMultigraph,
        weights: Option<&HashMap<EdgeId, Weight>>,
    ) -> Result<(Self, InitReport), OracleError> {
        let vertices = g.vertex_ids().to_vec();
        let edges: Vec<(EdgeId, VertexId, VertexId)> = g
            .edge_recs()
            .iter()
            .map(|r| {
                let (u, v) = g.endpoints(r.id).expect("edge of its own graph");
                (r.id, u, v)
            })
            .collect();
        Self::from_parts(&vertices, &edges, weights)
    }

    pub fn from_parts(
        vertices: &[VertexId],
        edges: &[(EdgeId, VertexId, VertexId)],
        weights: Option<&HashMap<EdgeId, Weight>>,
    ) -> Result<(Self, InitReport), OracleError> {
        let vids = vertices.to_vec();
        let mut vidx = HashMap::new();
        for (i, &v) in vids.iter().enumerate() {
            vidx.insert(v, i);
        }
        let mut eids = Vec::with_capacity(edges.len());
        let mut eidx = HashMap::new();
        let mut ends = Vec::with_capacity(edges.len());
        for &(id, u, v) in edges {
            if eidx.insert(id, eids.len()).is_some() {
                return Err(OracleError::DuplicateEdge(id));
            }
            let ui = *vidx.get(&u).ok_or(OracleError::UnknownVertex(u))?;
            let vi = *vidx.get(&v).ok_or(OracleError::UnknownVertex(v))?;
            eids.push(id);
            ends.push((ui, vi));
        }
        let wvec = match weights {
            None => None,
            Some(map) => {
                let mut w = Vec::with_capacity(eids.len());
                for &id in &eids {
                    w.push(*map.get(&id).ok_or(OracleError::WeightMissing(id))?);
                }
                Some(w)
            }
        };

        let n = vids.len();
        let m = eids.len();
        let mut s = NaiveContraction {
            class_of: (0..n).collect(),
            members: (0..n).map(|i| vec![i]).collect(),
            label: vids.clone(),
            alive_class: vec![true; n],
            state: vec![EdgeState::Live; m],
            parent: vec![None; m],
            kids: vec![Vec::new(); m],
            vids,
            vidx,
            eids,
            eidx,
            ends,
            weights: wvec,
        };

        let mut report = InitReport::default();
        // Original self-loops die immediately, in ascending id order.
        let mut loop_ids: Vec<(EdgeId, usize)> = (0..m)
            .filter(|&i| s.ends[i].0 == s.ends[i].1)
            .map(|i| (s.eids[i], i))
            .collect();
        loop_ids.sort();
        for (id, i) in loop_ids {
            s.state[i] = EdgeState::Looped;
            report.loops.push(id);
        }
        // Parallel groups collapse onto their lowest-id member.
        let mut groups: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for i in 0..m {
            if s.state[i] != EdgeState::Live {
                continue;
            }
            let (a, b) = s.ends[i];
            groups.entry((a.min(b), a.max(b))).or_default().push(i);
        }
        for group in groups.values_mut() {
            if group.len() < 2 {
                continue;
            }
            group.sort_by_key(|&i| s.eids[i]);
            // Each later edge merges with the class built so far; the report
            // direction follows from the weight rule, so in weighted runs the
            // running class minimum keeps winning the target slot.
            let mut incumbent = group[0];
            for &dup in &group[1..] {
                let (src, dst) = s.direct_report(incumbent, dup);
                s.parent[src] = Some(dst);
                s.kids[dst].push(src);
                report.parallelisms.push((s.eids[src], s.eids[dst]));
                incumbent = dst;
            }
        }
        report.parallelisms.sort();
        Ok((s, report))
    }

    /// Directs one parallelism record. `keep` is the edge the structural rule
    /// favours as target (the incumbent, or the survivor-side class root);
    /// `arrive` is the other side. Weighted runs override the direction so
    /// the (weight, id)-smaller edge is the target.
    fn direct_report(&self, keep: usize, arrive: usize) -> (usize, usize) {
        match self.weights {
            Some(_) if self.weight_key(arrive) < self.weight_key(keep) => (keep, arrive),
            _ => (arrive, keep),
        }
    }

    fn weight_key(&self, i: usize) -> (Weight, EdgeId) {
        let w = self.weights.as_ref().expect("weighted run")[i];
        (w, self.eids[i])
    }

    fn root_of(&self, mut i: usize) -> usize {
        while let Some(p) = self.parent[i] {
            i = p;
        }
        i
    }

    fn resolve_vertex(&self, u: VertexId) -> Result<usize, OracleError> {
        let i = *self.vidx.get(&u).ok_or(OracleError::UnknownVertex(u))?;
        let slot = self.class_of[i];
        if self.label[slot] == u {
            Ok(slot)
        } else {
            Err(OracleError::DeadVertex(u))
        }
    }

    fn resolve_live_edge(&self, e: EdgeId) -> Result<usize, OracleError> {
        let i = *self.eidx.get(&e).ok_or(OracleError::UnknownEdge(e))?;
        if self.state[i] == EdgeState::Live {
            Ok(i)
        } else {
            Err(OracleError::DeadEdge(e))
        }
    }

    /// Preorder of the tree rooted at `r`, children in report order.
    fn tree_preorder(&self, r: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![r];
        while let Some(i) = stack.pop() {
            out.push(i);
            for &k in self.kids[i].iter().rev() {
                stack.push(k);
            }
        }
        out
    }

    pub fn contract(&mut self, e: EdgeId) -> Result<StepReport, OracleError> {
        let ei = self.resolve_live_edge(e)?;
        let r = self.root_of(ei);
        let (a, b) = self.ends[r];
        let cu = self.class_of[a];
        let cv = self.class_of[b];
        debug_assert_ne!(cu, cv, "live edges never join a class to itself");

        // Survivor: larger class, ties to the larger label.
        let key = |slot: usize| (self.members[slot].len(), self.label[slot]);
        let (s_slot, l_slot) = if key(cu) >= key(cv) { (cu, cv) } else { (cv, cu) };
        let survivor = self.label[s_slot];

        // The whole class of e dies: the root counts as contracted, everything
        // under it surfaces as a self-loop.
        let mut loops = Vec::new();
        for i in self.tree_preorder(r) {
            if i == r {
                self.state[i] = EdgeState::Contracted;
            } else {
                self.state[i] = EdgeState::Looped;
                loops.push(self.eids[i]);
            }
        }

        // Surviving classes adjacent to both sides produce parallelisms.
        let mut to_u: HashMap<usize, usize> = HashMap::new();
        let mut to_v: HashMap<usize, usize> = HashMap::new();
        for i in 0..self.eids.len() {
            if self.state[i] != EdgeState::Live || self.parent[i].is_some() {
                continue;
            }
            let (x, y) = self.ends[i];
            let (cx, cy) = (self.class_of[x], self.class_of[y]);
            for (mine, other) in [(cx, cy), (cy, cx)] {
                if mine == cu {
                    to_u.insert(other, i);
                } else if mine == cv {
                    to_v.insert(other, i);
                }
            }
        }
        let mut commons: Vec<(VertexId, usize, usize)> = to_u
            .iter()
            .filter_map(|(&slot, &ru)| to_v.get(&slot).map(|&rv| (self.label[slot], ru, rv)))
            .collect();
        commons.sort();

        let mut parallelisms = Vec::new();
        for (_, ru, rv) in commons {
            let survivor_side = if s_slot == cu { ru } else { rv };
            let other_side = if s_slot == cu { rv } else { ru };
            let (src, dst) = self.direct_report(survivor_side, other_side);
            self.parent[src] = Some(dst);
            self.kids[dst].push(src);
            parallelisms.push((self.eids[src], self.eids[dst]));
        }

        // Fold the losing class into the survivor.
        let moved = std::mem::take(&mut self.members[l_slot]);
        for &vi in &moved {
            self.class_of[vi] = s_slot;
        }
        self.members[s_slot].extend(moved);
        self.alive_class[l_slot] = false;

        Ok(StepReport { survivor, parallelisms, loops })
    }

    pub fn deg(&self, u: VertexId) -> Result<usize, OracleError> {
        Ok(self.neighbors(u)?.len())
    }

    /// Live neighbours of `u` with the representative edge towards each,
    /// sorted by neighbour label.
    pub fn neighbors(&self, u: VertexId) -> Result<Vec<(VertexId, EdgeId)>, OracleError> {
        let slot = self.resolve_vertex(u)?;
        let mut out: HashMap<usize, usize> = HashMap::new();
        for i in 0..self.eids.len() {
            if self.state[i] != EdgeState::Live || self.parent[i].is_some() {
                continue;
            }
            let (x, y) = self.ends[i];
            let (cx, cy) = (self.class_of[x], self.class_of[y]);
            if cx == slot {
                out.insert(cy, i);
            } else if cy == slot {
                out.insert(cx, i);
            }
        }
        let mut listed: Vec<(VertexId, EdgeId)> = out
            .into_iter()
            .map(|(s, i)| (self.label[s], self.eids[i]))
            .collect();
        listed.sort();
        Ok(listed)
    }

    pub fn edge(&self, u: VertexId, v: VertexId) -> Result<Option<EdgeId>, OracleError> {
        let su = self.resolve_vertex(u)?;
        let sv = self.resolve_vertex(v)?;
        if su == sv {
            return Ok(None);
        }
        for i in 0..self.eids.len() {
            if self.state[i] != EdgeState::Live || self.parent[i].is_some() {
                continue;
            }
            let (x, y) = self.ends[i];
            let pair = (self.class_of[x], self.class_of[y]);
            if pair == (su, sv) || pair == (sv, su) {
                return Ok(Some(self.eids[i]));
            }
        }
        Ok(None)
    }

    /// Live endpoint labels of any live edge, smaller label first.
    pub fn vertices(&self, e: EdgeId) -> Result<(VertexId, VertexId), OracleError> {
        let i = self.resolve_live_edge(e)?;
        let (a, b) = self.ends[i];
        let la = self.label[self.class_of[a]];
        let lb = self.label[self.class_of[b]];
        Ok((la.min(lb), la.max(lb)))
    }

    pub fn representative(&self, e: EdgeId) -> Result<EdgeId, OracleError> {
        let i = self.resolve_live_edge(e)?;
        Ok(self.eids[self.root_of(i)])
    }

    /// Every live edge in the same parallel class, ascending ids.
    pub fn parallel_class(&self, e: EdgeId) -> Result<Vec<EdgeId>, OracleError> {
        let i = self.resolve_live_edge(e)?;
        let mut ids: Vec<EdgeId> = self
            .tree_preorder(self.root_of(i))
            .into_iter()
            .map(|j| self.eids[j])
            .collect();
        ids.sort();
        Ok(ids)
    }

    /// In weighted runs the class root is maintained as the (weight, id)
    /// minimum, so the minimum-weight member is the representative itself.
    pub fn min_weight_in_class(&self, e: EdgeId) -> Result<EdgeId, OracleError> {
        if self.weights.is_none() {
            return Err(OracleError::WeightsAbsent);
        }
        let i = self.resolve_live_edge(e)?;
        let root = self.root_of(i);
        debug_assert_eq!(
            self.weight_key(root),
            self.tree_preorder(root)
                .into_iter()
                .map(|j| self.weight_key(j))
                .min()
                .expect("non-empty class"),
            "weighted roots are class minima"
        );
        Ok(self.eids[root])
    }

    pub fn live_vertex_count(&self) -> usize {
        self.alive_class.iter().filter(|&&a| a).count()
    }

    pub fn live_vertices(&self) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = (0..self.members.len())
            .filter(|&s| self.alive_class[s])
            .map(|s| self.label[s])
            .collect();
        out.sort();
        out
    }

    /// Partition of the original vertices by live class, keyed by label.
    pub fn vertex_partition(&self) -> Vec<(VertexId, Vec<VertexId>)> {
        let mut out: Vec<(VertexId, Vec<VertexId>)> = (0..self.members.len())
            .filter(|&s| self.alive_class[s])
            .map(|s| {
                let mut ids: Vec<VertexId> =
                    self.members[s].iter().map(|&i| self.vids[i]).collect();
                ids.sort();
                (self.label[s], ids)
            })
            .collect();
        out.sort();
        out
    }

    pub fn live_edges(&self) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = (0..self.eids.len())
            .filter(|&i| self.state[i] == EdgeState::Live)
            .map(|i| self.eids[i])
            .collect();
        out.sort();
        out
    }

    pub fn loop_edges(&self) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = (0..self.eids.len())
            .filter(|&i| self.state[i] == EdgeState::Looped)
            .map(|i| self.eids[i])
            .collect();
        out.sort();
        out
    }

    pub fn contracted_edges(&self) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = (0..self.eids.len())
            .filter(|&i| self.state[i] == EdgeState::Contracted)
            .map(|i| self.eids[i])
            .collect();
        out.sort();
        out
    }

    /// Live parallel classes as sorted id lists, ordered by first id.
    pub fn edge_classes(&self) -> Vec<Vec<EdgeId>> {
        let mut out: Vec<Vec<EdgeId>> = (0..self.eids.len())
            .filter(|&i| self.state[i] == EdgeState::Live && self.parent[i].is_none())
            .map(|r| {
                let mut ids: Vec<EdgeId> =
                    self.tree_preorder(r).into_iter().map(|j| self.eids[j]).collect();
                ids.sort();
                ids
            })
            .collect();
        out.sort();
        out
    }

    /// Simple-view adjacency as sorted label pairs.
    pub fn simple_edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out: Vec<(VertexId, VertexId)> = (0..self.eids.len())
            .filter(|&i| self.state[i] == EdgeState::Live && self.parent[i].is_none())
            .map(|i| {
                let (a, b) = self.ends[i];
                let la = self.label[self.class_of[a]];
                let lb = self.label[self.class_of[b]];
                (la.min(lb), la.max(lb))
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

//! Ledger of every edge id the structure has seen: per-edge placement and
//! state, the forest of parallelism records, and per-label rings of live
//! representative edges.
//!
//! Rings are circular doubly-linked lists in one arena, one sentinel node
//! per ring. The sentinel makes removal independent of which label owns the
//! ring and turns concatenation into a constant-time splice.

use std::collections::HashMap;

use graph_core::{EdgeId, VertexId, Weight};

const NIL: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum EdgeState {
    Live,
    Looped,
    Contracted,
}

#[derive(Debug)]
struct EdgeInfo {
    /// Endpoints in the reduced graph; input self-loops never get any.
    ends: Option<(VertexId, VertexId)>,
    weight: Option<Weight>,
    /// Cycle edges added by the degree reduction are internal and excluded
    /// from every report and query answer.
    public: bool,
    state: EdgeState,
    parent: Option<EdgeId>,
    kids: Vec<EdgeId>,
    /// Arena slots of this edge's two ring occurrences while it is a live
    /// representative.
    occ: Option<(u32, u32)>,
}

#[derive(Debug, Clone, Copy)]
struct Node {
    edge: EdgeId,
    prev: u32,
    next: u32,
}

#[derive(Debug, Default)]
pub(crate) struct EdgeBook {
    info: HashMap<EdgeId, EdgeInfo>,
    nodes: Vec<Node>,
    free: Vec<u32>,
    /// label -> sentinel slot of that label's ring
    ring: HashMap<VertexId, u32>,
}

impl EdgeBook {
    pub fn register(
        &mut self,
        e: EdgeId,
        ends: Option<(VertexId, VertexId)>,
        weight: Option<Weight>,
        public: bool,
    ) {
        let prev = self.info.insert(
            e,
            EdgeInfo {
                ends,
                weight,
                public,
                state: EdgeState::Live,
                parent: None,
                kids: Vec::new(),
                occ: None,
            },
        );
        debug_assert!(prev.is_none(), "edge ids register once");
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.info.contains_key(&e)
    }

    pub fn state(&self, e: EdgeId) -> EdgeState {
        self.info[&e].state
    }

    pub fn set_state(&mut self, e: EdgeId, s: EdgeState) {
        self.info.get_mut(&e).expect("known edge").state = s;
    }

    pub fn is_public(&self, e: EdgeId) -> bool {
        self.info[&e].public
    }

    pub fn ends(&self, e: EdgeId) -> Option<(VertexId, VertexId)> {
        self.info[&e].ends
    }

    pub fn set_ends(&mut self, e: EdgeId, ends: (VertexId, VertexId)) {
        self.info.get_mut(&e).expect("known edge").ends = Some(ends);
    }

    pub fn weight(&self, e: EdgeId) -> Option<Weight> {
        self.info[&e].weight
    }

    /// Weighted comparison key. Only meaningful for weighted structures.
    pub fn weight_key(&self, e: EdgeId) -> (Weight, EdgeId) {
        (self.info[&e].weight.expect("weighted edge"), e)
    }

    pub fn root_of(&self, e: EdgeId) -> EdgeId {
        let mut cur = e;
        while let Some(p) = self.info[&cur].parent {
            cur = p;
        }
        cur
    }

    /// Records `loser`'s class under `winner`. Both must be roots.
    pub fn adopt(&mut self, loser: EdgeId, winner: EdgeId) {
        debug_assert!(self.info[&loser].parent.is_none());
        debug_assert!(self.info[&winner].parent.is_none());
        debug_assert_ne!(loser, winner);
        self.info.get_mut(&loser).expect("known edge").parent = Some(winner);
        self.info.get_mut(&winner).expect("known edge").kids.push(loser);
    }

    /// The class below `root` in report order: depth first, children in the
    /// order they were adopted, `root` itself first.
    pub fn preorder(&self, root: EdgeId) -> Vec<EdgeId> {
        let mut out = Vec::new();
        let mut stack = vec![root];
        while let Some(e) = stack.pop() {
            out.push(e);
            for &k in self.info[&e].kids.iter().rev() {
                stack.push(k);
            }
        }
        out
    }

    pub fn edge_ids_sorted(&self) -> Vec<EdgeId> {
        let mut ids: Vec<EdgeId> = self.info.keys().copied().collect();
        ids.sort_unstable();
        ids
    }

    fn alloc(&mut self, n: Node) -> u32 {
        if let Some(i) = self.free.pop() {
            self.nodes[i as usize] = n;
            i
        } else {
            self.nodes.push(n);
            (self.nodes.len() - 1) as u32
        }
    }

    pub fn ensure_ring(&mut self, label: VertexId) {
        if self.ring.contains_key(&label) {
            return;
        }
        let s = self.alloc(Node { edge: EdgeId(u64::MAX), prev: NIL, next: NIL });
        self.nodes[s as usize].prev = s;
        self.nodes[s as usize].next = s;
        self.ring.insert(label, s);
    }

    fn splice_before(&mut self, at: u32, n: u32) {
        let p = self.nodes[at as usize].prev;
        self.nodes[n as usize].prev = p;
        self.nodes[n as usize].next = at;
        self.nodes[p as usize].next = n;
        self.nodes[at as usize].prev = n;
    }

    /// Adds a live representative to the rings of both its labels.
    pub fn ring_insert(&mut self, e: EdgeId, a: VertexId, b: VertexId) {
        let sa = *self.ring.get(&a).expect("ring exists");
        let na = self.alloc(Node { edge: e, prev: NIL, next: NIL });
        self.splice_before(sa, na);
        let sb = *self.ring.get(&b).expect("ring exists");
        let nb = self.alloc(Node { edge: e, prev: NIL, next: NIL });
        self.splice_before(sb, nb);
        let info = self.info.get_mut(&e).expect("known edge");
        debug_assert!(info.occ.is_none(), "edge already ringed");
        info.occ = Some((na, nb));
    }

    fn unlink(&mut self, i: u32) {
        let Node { prev, next, .. } = self.nodes[i as usize];
        self.nodes[prev as usize].next = next;
        self.nodes[next as usize].prev = prev;
        self.free.push(i);
    }

    /// Drops both ring occurrences of an edge that stops being a live
    /// representative. A no-op for edges that never entered a ring.
    pub fn ring_remove(&mut self, e: EdgeId) {
        if let Some((a, b)) = self.info.get_mut(&e).and_then(|i| i.occ.take()) {
            self.unlink(a);
            self.unlink(b);
        }
    }

    /// Concatenates the rings of `a` and `b` and keys the result under
    /// `keep`, which must be one of the two.
    pub fn ring_concat(&mut self, a: VertexId, b: VertexId, keep: VertexId) {
        debug_assert!(keep == a || keep == b);
        let sa = self.ring.remove(&a).expect("ring exists");
        let sb = self.ring.remove(&b).expect("ring exists");
        // Cut b's sentinel out, then splice b's chain before a's sentinel.
        let first = self.nodes[sb as usize].next;
        if first != sb {
            let last = self.nodes[sb as usize].prev;
            let tail = self.nodes[sa as usize].prev;
            self.nodes[tail as usize].next = first;
            self.nodes[first as usize].prev = tail;
            self.nodes[last as usize].next = sa;
            self.nodes[sa as usize].prev = last;
        }
        self.free.push(sb);
        self.ring.insert(keep, sa);
    }

    pub fn ring_rename(&mut self, old: VertexId, new: VertexId) {
        if let Some(s) = self.ring.remove(&old) {
            self.ring.insert(new, s);
        }
    }

    /// Live representatives around a label, in ring order.
    pub fn ring_edges(&self, label: VertexId) -> Vec<EdgeId> {
        let Some(&s) = self.ring.get(&label) else { return Vec::new() };
        let mut out = Vec::new();
        let mut cur = self.nodes[s as usize].next;
        while cur != s {
            out.push(self.nodes[cur as usize].edge);
            cur = self.nodes[cur as usize].next;
        }
        out
    }

    pub fn ring_len(&self, label: VertexId) -> usize {
        let Some(&s) = self.ring.get(&label) else { return 0 };
        let mut n = 0;
        let mut cur = self.nodes[s as usize].next;
        while cur != s {
            n += 1;
            cur = self.nodes[cur as usize].next;
        }
        n
    }
}

use std::collections::HashMap;

use crate::ids::{dart_edge, twin, Dart, EdgeId, VertexId};
use crate::GraphError;

#[derive(Clone, Debug)]
pub struct EdgeRec {
    pub id: EdgeId,
    /// Endpoint indices into the vertex table. Dart 2e lives at `u`, dart
    /// 2e+1 at `v`; for a self-loop both live at the same vertex but remain
    /// distinct darts.
    pub u: usize,
    pub v: usize,
}

/// Planar multigraph with an optional combinatorial embedding.
///
/// When embedded, each per-vertex dart list is the counterclockwise rotation
/// at that vertex and `dart_pos` gives every dart's position in its list.
/// Face traversal follows next(d) = rotation successor of twin(d).
#[derive(Clone, Debug)]
pub struct PlanarMultigraph {
    verts: Vec<VertexId>,
    vidx: HashMap<VertexId, usize>,
    edges: Vec<EdgeRec>,
    eidx: HashMap<EdgeId, usize>,
    adj: Vec<Vec<Dart>>,
    dart_pos: Vec<u32>,
    embedded: bool,
}

#[derive(Clone, Debug)]
pub struct Faces {
    /// Dart walks, one per face, each rotated to start at its smallest dart
    /// and sorted by that key. Indices into this list are face handles.
    pub walks: Vec<Vec<Dart>>,
    pub face_of_dart: Vec<usize>,
}

impl PlanarMultigraph {
    pub fn from_parts(
        extra_vertices: &[VertexId],
        edge_list: &[(VertexId, VertexId, EdgeId)],
    ) -> Result<Self, GraphError> {
        let mut g = PlanarMultigraph {
            verts: Vec::new(),
            vidx: HashMap::new(),
            edges: Vec::new(),
            eidx: HashMap::new(),
            adj: Vec::new(),
            dart_pos: Vec::new(),
            embedded: false,
        };
        for &v in extra_vertices {
            g.intern_vertex(v);
        }
        for &(u, v, id) in edge_list {
            g.push_edge(u, v, id)?;
        }
        Ok(g)
    }

    /// Builds an embedded graph. `rotations` lists, per vertex, the incident
    /// edge ids in counterclockwise order; a self-loop id appears twice and
    /// its first occurrence is taken as dart 2e. Every vertex with incident
    /// edges must be covered and each list must mention exactly the incident
    /// edge ends.
    pub fn with_rotations(
        extra_vertices: &[VertexId],
        edge_list: &[(VertexId, VertexId, EdgeId)],
        rotations: &[(VertexId, Vec<EdgeId>)],
    ) -> Result<Self, GraphError> {
        let mut g = Self::from_parts(extra_vertices, edge_list)?;
        let mut order: Vec<Vec<Dart>> = vec![Vec::new(); g.verts.len()];
        let mut seen = vec![false; g.verts.len()];
        for (v, ids) in rotations {
            let vi = g
                .vidx
                .get(v)
                .copied()
                .ok_or(GraphError::UnknownVertex(*v))?;
            if seen[vi] {
                return Err(GraphError::InvalidRotation(format!(
                    "vertex {v} listed twice"
                )));
            }
            seen[vi] = true;
            let mut loop_seen: HashMap<usize, ()> = HashMap::new();
            let mut darts = Vec::with_capacity(ids.len());
            for id in ids {
                let ei = g.eidx.get(id).copied().ok_or(GraphError::UnknownEdge(*id))?;
                let e = &g.edges[ei];
                let d = if e.u == vi && e.v == vi {
                    // second mention of a loop refers to the other end
                    if loop_seen.insert(ei, ()).is_none() {
                        2 * ei
                    } else {
                        2 * ei + 1
                    }
                } else if e.u == vi {
                    2 * ei
                } else if e.v == vi {
                    2 * ei + 1
                } else {
                    return Err(GraphError::InvalidRotation(format!(
                        "edge {id} is not incident to vertex {v}"
                    )));
                };
                darts.push(d);
            }
            order[vi] = darts;
        }
        for vi in 0..g.verts.len() {
            if !g.adj[vi].is_empty() && !seen[vi] {
                return Err(GraphError::InvalidRotation(format!(
                    "vertex {} has incident edges but no rotation",
                    g.verts[vi]
                )));
            }
        }
        g.install_rotation(order)?;
        Ok(g)
    }

    /// Embedded construction straight from per-vertex dart lists. Used by
    /// generators and transforms that already work at the dart level.
    pub fn from_dart_rotations(
        verts: Vec<VertexId>,
        edge_list: Vec<(VertexId, VertexId, EdgeId)>,
        order: Vec<Vec<Dart>>,
    ) -> Result<Self, GraphError> {
        let mut g = Self::from_parts(&verts, &edge_list)?;
        if order.len() != g.verts.len() {
            return Err(GraphError::InvalidRotation(
                "rotation table size mismatch".into(),
            ));
        }
        g.install_rotation(order)?;
        Ok(g)
    }

    fn install_rotation(&mut self, order: Vec<Vec<Dart>>) -> Result<(), GraphError> {
        let mut covered = vec![false; 2 * self.edges.len()];
        for (vi, darts) in order.iter().enumerate() {
            if darts.len() != self.adj[vi].len() {
                return Err(GraphError::InvalidRotation(format!(
                    "vertex {} rotation length {} != degree {}",
                    self.verts[vi],
                    darts.len(),
                    self.adj[vi].len()
                )));
            }
            for &d in darts {
                if d >= covered.len() || self.dart_vertex(d) != vi {
                    return Err(GraphError::InvalidRotation(format!(
                        "dart at wrong vertex in rotation of {}",
                        self.verts[vi]
                    )));
                }
                if covered[d] {
                    return Err(GraphError::InvalidRotation("dart repeated".into()));
                }
                covered[d] = true;
            }
        }
        if covered.iter().any(|c| !c) {
            return Err(GraphError::InvalidRotation("dart missing".into()));
        }
        self.adj = order;
        self.dart_pos = vec![0; 2 * self.edges.len()];
        for darts in &self.adj {
            for (i, &d) in darts.iter().enumerate() {
                self.dart_pos[d] = i as u32;
            }
        }
        self.embedded = true;
        Ok(())
    }

    fn intern_vertex(&mut self, v: VertexId) -> usize {
        if let Some(&i) = self.vidx.get(&v) {
            return i;
        }
        let i = self.verts.len();
        self.verts.push(v);
        self.vidx.insert(v, i);
        self.adj.push(Vec::new());
        i
    }

    fn push_edge(&mut self, u: VertexId, v: VertexId, id: EdgeId) -> Result<usize, GraphError> {
        if self.eidx.contains_key(&id) {
            return Err(GraphError::DuplicateEdgeId(id));
        }
        let ui = self.intern_vertex(u);
        let vi = self.intern_vertex(v);
        let ei = self.edges.len();
        self.edges.push(EdgeRec { id, u: ui, v: vi });
        self.eidx.insert(id, ei);
        self.adj[ui].push(2 * ei);
        self.adj[vi].push(2 * ei + 1);
        self.embedded = false;
        Ok(ei)
    }

    pub fn n(&self) -> usize {
        self.verts.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn is_embedded(&self) -> bool {
        self.embedded
    }

    pub fn vertex_ids(&self) -> &[VertexId] {
        &self.verts
    }

    pub fn vertex_index(&self, v: VertexId) -> Option<usize> {
        self.vidx.get(&v).copied()
    }

    pub fn vertex_id(&self, vi: usize) -> VertexId {
        self.verts[vi]
    }

    pub fn edge_recs(&self) -> &[EdgeRec] {
        &self.edges
    }

    pub fn edge_index(&self, e: EdgeId) -> Option<usize> {
        self.eidx.get(&e).copied()
    }

    pub fn edge_id(&self, ei: usize) -> EdgeId {
        self.edges[ei].id
    }

    pub fn endpoints(&self, e: EdgeId) -> Option<(VertexId, VertexId)> {
        let ei = self.edge_index(e)?;
        let r = &self.edges[ei];
        Some((self.verts[r.u], self.verts[r.v]))
    }

    pub fn is_loop_edge(&self, ei: usize) -> bool {
        self.edges[ei].u == self.edges[ei].v
    }

    pub fn dart_vertex(&self, d: Dart) -> usize {
        let e = &self.edges[dart_edge(d)];
        if d & 1 == 0 {
            e.u
        } else {
            e.v
        }
    }

    /// Head of the dart viewed as an arc leaving its own vertex.
    pub fn dart_head(&self, d: Dart) -> usize {
        self.dart_vertex(twin(d))
    }

    pub fn darts_at(&self, vi: usize) -> &[Dart] {
        &self.adj[vi]
    }

    /// Multigraph degree: incident edge ends, so a self-loop contributes 2.
    pub fn degree(&self, vi: usize) -> usize {
        self.adj[vi].len()
    }

    pub fn rotation_next(&self, d: Dart) -> Dart {
        debug_assert!(self.embedded);
        let vi = self.dart_vertex(d);
        let list = &self.adj[vi];
        let p = self.dart_pos[d] as usize;
        list[(p + 1) % list.len()]
    }

    pub fn rotation_prev(&self, d: Dart) -> Dart {
        debug_assert!(self.embedded);
        let vi = self.dart_vertex(d);
        let list = &self.adj[vi];
        let p = self.dart_pos[d] as usize;
        list[(p + list.len() - 1) % list.len()]
    }

    /// Face-walk successor: the next dart along the face left of `d`.
    pub fn face_next(&self, d: Dart) -> Dart {
        self.rotation_next(twin(d))
    }

    pub fn faces(&self) -> Result<Faces, GraphError> {
        if !self.embedded {
            return Err(GraphError::NotEmbedded);
        }
        let nd = 2 * self.edges.len();
        let mut face_of_dart = vec![usize::MAX; nd];
        let mut walks: Vec<Vec<Dart>> = Vec::new();
        for start in 0..nd {
            if face_of_dart[start] != usize::MAX {
                continue;
            }
            let mut walk = Vec::new();
            let mut d = start;
            loop {
                face_of_dart[d] = walks.len();
                walk.push(d);
                d = self.face_next(d);
                if d == start {
                    break;
                }
            }
            walks.push(walk);
        }
        // canonical form: rotate each walk to its least dart, sort by that key
        for w in &mut walks {
            let k = w.iter().enumerate().min_by_key(|(_, &d)| d).unwrap().0;
            w.rotate_left(k);
        }
        let mut idx: Vec<usize> = (0..walks.len()).collect();
        idx.sort_by_key(|&i| walks[i][0]);
        let mut renum = vec![0usize; walks.len()];
        for (new, &old) in idx.iter().enumerate() {
            renum[old] = new;
        }
        let sorted = idx.iter().map(|&i| walks[i].clone()).collect();
        for f in face_of_dart.iter_mut() {
            *f = renum[*f];
        }
        Ok(Faces {
            walks: sorted,
            face_of_dart,
        })
    }

    pub fn component_of(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.verts.len()];
        let mut next = 0;
        let mut stack = Vec::new();
        for s in 0..self.verts.len() {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            stack.push(s);
            while let Some(v) = stack.pop() {
                for &d in &self.adj[v] {
                    let w = self.dart_head(d);
                    if comp[w] == usize::MAX {
                        comp[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn is_connected(&self) -> bool {
        self.verts.is_empty() || self.component_of().iter().all(|&c| c == 0)
    }

    /// Per-component Euler check v - e + f = 2. An edgeless component is a
    /// single vertex and counts one face.
    pub fn euler_check(&self) -> Result<(), GraphError> {
        let faces = self.faces()?;
        let comp = self.component_of();
        let ncomp = comp.iter().copied().max().map_or(0, |c| c + 1);
        let mut nv = vec![0i64; ncomp];
        let mut ne = vec![0i64; ncomp];
        let mut nf = vec![0i64; ncomp];
        for &c in &comp {
            nv[c] += 1;
        }
        for e in &self.edges {
            ne[comp[e.u]] += 1;
        }
        let mut face_comp = vec![usize::MAX; faces.walks.len()];
        for (fi, w) in faces.walks.iter().enumerate() {
            face_comp[fi] = comp[self.dart_vertex(w[0])];
        }
        for &c in &face_comp {
            nf[c] += 1;
        }
        for c in 0..ncomp {
            let f = if ne[c] == 0 { 1 } else { nf[c] };
            if nv[c] - ne[c] + f != 2 {
                return Err(GraphError::InvalidRotation(format!(
                    "euler count failed on component {c}: v={} e={} f={f}",
                    nv[c], ne[c]
                )));
            }
        }
        Ok(())
    }

    /// Distinct neighbours, self excluded, in ascending id order.
    pub fn simple_neighbors(&self, v: VertexId) -> Result<Vec<VertexId>, GraphError> {
        let vi = self.vertex_index(v).ok_or(GraphError::UnknownVertex(v))?;
        let mut out: Vec<VertexId> = self.adj[vi]
            .iter()
            .map(|&d| self.verts[self.dart_head(d)])
            .filter(|&w| w != v)
            .collect();
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Number of edges in the simple view: loops dropped, parallels merged.
    pub fn simple_edge_count(&self) -> usize {
        let mut pairs: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter(|e| e.u != e.v)
            .map(|e| (e.u.min(e.v), e.u.max(e.v)))
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        pairs.len()
    }

    /// Groups of parallel edge ids keyed by their endpoint pair, each group
    /// sorted ascending. Loops are excluded.
    pub fn parallel_classes(&self) -> HashMap<(usize, usize), Vec<EdgeId>> {
        let mut map: HashMap<(usize, usize), Vec<EdgeId>> = HashMap::new();
        for e in &self.edges {
            if e.u != e.v {
                map.entry((e.u.min(e.v), e.u.max(e.v)))
                    .or_default()
                    .push(e.id);
            }
        }
        for v in map.values_mut() {
            v.sort_unstable();
        }
        map
    }
}

/// Edge count bound satisfied by simple planar graphs. For n >= 3 this is
/// 3n - 6; below that the complete graph bound applies.
pub fn semi_strict_bound(n: usize) -> usize {
    if n >= 3 {
        3 * n - 6
    } else {
        n * n.saturating_sub(1) / 2
    }
}

pub fn semi_strict_bound_check(g: &PlanarMultigraph) -> bool {
    g.simple_edge_count() <= semi_strict_bound(g.n())
}

use crate::ids::{twin, Dart, EdgeId, VertexId};
use crate::{Faces, GraphError, PlanarMultigraph};

/// Bipartite incidence structure: the original vertices plus one fresh vertex
/// per face, with a spoke edge for every corner, i.e. every occurrence of a
/// vertex on a face walk. |E| is therefore exactly twice the primal edge
/// count. Spoke edge k joins a face vertex (dart 2k) to an original vertex
/// (dart 2k+1), and the whole structure carries an embedding compatible with
/// the primal one.
#[derive(Clone, Debug)]
pub struct FaceVertexGraph {
    pub graph: PlanarMultigraph,
    pub faces: Faces,
    /// face index -> id of its fresh vertex (first id above the primal ones)
    pub face_ids: Vec<VertexId>,
    /// primal dart d -> spoke edge index for the corner that follows d on its
    /// face walk; that corner sits at the head of d
    pub spoke_for_dart: Vec<usize>,
    pub primal_dart_of_spoke: Vec<Dart>,
}

impl FaceVertexGraph {
    pub fn is_face_vertex(&self, v: VertexId) -> bool {
        self.face_ids.first().is_some_and(|&base| v >= base)
    }
}

pub fn face_vertex_graph(g: &PlanarMultigraph) -> Result<FaceVertexGraph, GraphError> {
    let faces = g.faces()?;
    let base = g
        .vertex_ids()
        .iter()
        .map(|v| v.0 + 1)
        .max()
        .unwrap_or(0);
    let face_ids: Vec<VertexId> = (0..faces.walks.len())
        .map(|i| VertexId(base + i as u64))
        .collect();

    let mut spoke_for_dart = vec![usize::MAX; 2 * g.m()];
    let mut primal_dart_of_spoke = Vec::with_capacity(2 * g.m());
    let mut edges = Vec::with_capacity(2 * g.m());
    for (fi, w) in faces.walks.iter().enumerate() {
        for &d in w {
            let k = edges.len();
            spoke_for_dart[d] = k;
            primal_dart_of_spoke.push(d);
            let corner = g.vertex_id(g.dart_head(d));
            edges.push((face_ids[fi], corner, EdgeId(k as u64)));
        }
    }

    let mut verts: Vec<VertexId> = g.vertex_ids().to_vec();
    verts.extend(face_ids.iter().copied());
    let mut order: Vec<Vec<Dart>> = Vec::with_capacity(verts.len());
    for vi in 0..g.n() {
        // one corner per incident dart, in rotation order; the corner that
        // follows primal dart d is entered along twin(d)
        order.push(
            g.darts_at(vi)
                .iter()
                .map(|&x| 2 * spoke_for_dart[twin(x)] + 1)
                .collect(),
        );
    }
    for w in &faces.walks {
        // reversed walk order: corners appear around the face centre in the
        // opposite sense to the boundary traversal
        order.push(w.iter().rev().map(|&d| 2 * spoke_for_dart[d]).collect());
    }

    let graph = PlanarMultigraph::from_dart_rotations(verts, edges, order)?;
    Ok(FaceVertexGraph {
        graph,
        faces,
        face_ids,
        spoke_for_dart,
        primal_dart_of_spoke,
    })
}

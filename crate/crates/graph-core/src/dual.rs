use crate::ids::{Dart, EdgeId, VertexId};
use crate::{Faces, GraphError, PlanarMultigraph};

/// Dual of an embedded multigraph together with the face data it was built
/// from. Dual vertex k stands for `faces.walks[k]`; dual edge ids equal the
/// primal ids, and dual dart d crosses primal dart d.
#[derive(Clone, Debug)]
pub struct DualCorrespondence {
    pub dual: PlanarMultigraph,
    pub faces: Faces,
}

impl DualCorrespondence {
    pub fn face_vertex(&self, face: usize) -> VertexId {
        VertexId(face as u64)
    }

    /// Faces on the two sides of a primal edge, given by its index.
    pub fn edge_sides(&self, ei: usize) -> (usize, usize) {
        (
            self.faces.face_of_dart[2 * ei],
            self.faces.face_of_dart[2 * ei + 1],
        )
    }
}

/// Builds the dual: one vertex per face, one edge per primal edge joining the
/// faces on its two sides. The rotation at a dual vertex is the face walk
/// order, which embeds the dual in the same surface.
pub fn dual_graph(g: &PlanarMultigraph) -> Result<DualCorrespondence, GraphError> {
    let faces = g.faces()?;
    let verts: Vec<VertexId> = (0..faces.walks.len()).map(|i| VertexId(i as u64)).collect();
    let edges: Vec<(VertexId, VertexId, EdgeId)> = (0..g.m())
        .map(|ei| {
            (
                VertexId(faces.face_of_dart[2 * ei] as u64),
                VertexId(faces.face_of_dart[2 * ei + 1] as u64),
                g.edge_id(ei),
            )
        })
        .collect();
    let order: Vec<Vec<Dart>> = faces.walks.clone();
    let dual = PlanarMultigraph::from_dart_rotations(verts, edges, order)?;
    Ok(DualCorrespondence { dual, faces })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{grid, random_triangulation};

    fn triangle() -> PlanarMultigraph {
        PlanarMultigraph::with_rotations(
            &[],
            &[
                (VertexId(1), VertexId(2), EdgeId(10)),
                (VertexId(2), VertexId(3), EdgeId(11)),
                (VertexId(3), VertexId(1), EdgeId(12)),
            ],
            &[
                (VertexId(1), vec![EdgeId(10), EdgeId(12)]),
                (VertexId(2), vec![EdgeId(11), EdgeId(10)]),
                (VertexId(3), vec![EdgeId(12), EdgeId(11)]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn triangle_dual_is_parallel_triple() {
        let d = dual_graph(&triangle()).unwrap();
        assert_eq!(d.dual.n(), 2);
        assert_eq!(d.dual.m(), 3);
        assert_eq!(d.dual.simple_edge_count(), 1);
        d.dual.euler_check().unwrap();
    }

    #[test]
    fn path_dual_is_double_loop() {
        let g = PlanarMultigraph::with_rotations(
            &[],
            &[
                (VertexId(0), VertexId(1), EdgeId(0)),
                (VertexId(1), VertexId(2), EdgeId(1)),
            ],
            &[
                (VertexId(0), vec![EdgeId(0)]),
                (VertexId(1), vec![EdgeId(0), EdgeId(1)]),
                (VertexId(2), vec![EdgeId(1)]),
            ],
        )
        .unwrap();
        let d = dual_graph(&g).unwrap();
        assert_eq!(d.dual.n(), 1);
        assert_eq!(d.dual.m(), 2);
        assert!((0..d.dual.m()).all(|ei| d.dual.is_loop_edge(ei)));
        d.dual.euler_check().unwrap();
    }

    #[test]
    fn dual_euler_holds_on_generated_graphs() {
        for seed in 0..4 {
            let g = random_triangulation(30, seed);
            let d = dual_graph(&g).unwrap();
            // dual of a triangulation is cubic
            assert!((0..d.dual.n()).all(|vi| d.dual.degree(vi) == 3));
            d.dual.euler_check().unwrap();
        }
        let g = grid(5);
        let d = dual_graph(&g).unwrap();
        d.dual.euler_check().unwrap();
        assert_eq!(d.dual.n(), 4 * 4 + 1);
    }

    /// The dual of the dual must be the primal again: every dual face is the
    /// set of darts around one primal vertex.
    #[test]
    fn double_dual_returns_to_primal() {
        for g in [triangle(), grid(4), random_triangulation(25, 7)] {
            let d = dual_graph(&g).unwrap();
            let dd = dual_graph(&d.dual).unwrap();
            assert_eq!(dd.dual.n(), g.n());
            assert_eq!(dd.dual.m(), g.m());
            for w in &dd.faces.walks {
                let homes: Vec<usize> = w.iter().map(|&dart| g.dart_vertex(dart)).collect();
                assert!(
                    homes.iter().all(|&h| h == homes[0]),
                    "dual face does not sit around a single primal vertex"
                );
                assert_eq!(homes.len(), g.degree(homes[0]));
            }
        }
    }
}

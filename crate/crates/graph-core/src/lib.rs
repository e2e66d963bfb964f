//! Planar multigraph foundation: identifier-stable graphs, rotation systems,
//! face traversal, duality, face-vertex incidence, degree reduction, input
//! parsing, and seeded generators.

mod dual;
mod embed;
mod face_vertex;
mod gen;
mod graph;
mod ids;
mod io;
mod reduce;

pub use dual::{dual_graph, DualCorrespondence};
pub use embed::embed;
pub use face_vertex::{face_vertex_graph, FaceVertexGraph};
pub use gen::{grid, random_planar, random_triangulation, seeded_rng};
pub use graph::{
    semi_strict_bound, semi_strict_bound_check, EdgeRec, Faces, PlanarMultigraph,
};
pub use ids::{dart_edge, twin, Dart, EdgeId, VertexId, Weight};
pub use io::{
    parse_edge_list, parse_rotations, write_edge_list, write_rotations, ParsedGraph,
};
pub use reduce::{reduce_degree, DegreeReduction};

#[derive(thiserror::Error, Debug)]
pub enum GraphError {
    #[error("duplicate edge id {0}")]
    DuplicateEdgeId(EdgeId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("operation requires an embedded graph")]
    NotEmbedded,
    #[error("graph is not planar")]
    NonPlanar,
    #[error("invalid rotation system: {0}")]
    InvalidRotation(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

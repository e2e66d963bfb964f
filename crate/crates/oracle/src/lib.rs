//! Reference implementations for differential testing.
//!
//! Everything in this crate favours clarity over speed: adjacency is
//! rescanned, cuts are found by repeated minimum-cut phases, matchings by
//! enumeration. The structures under test must agree with these models on
//! every observable.

mod apps;
mod bordered;
mod contract;
mod faces;

pub use apps::{
    bridges, components, kruskal_mst, kec_partition, min_cut, perfect_matchings,
    two_ec_components, two_edge_connected, MatchingCount, KEC_CAP, MATCHING_CAP,
};
pub use bordered::{MergeModel, ModelReport};
pub use contract::{InitReport, NaiveContraction, StepReport};
pub use faces::{common_neighbor_faces_brute, face_intersection_brute, restricted_faces};

use graph_core::{EdgeId, VertexId};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("vertex {0} is no longer live")]
    DeadVertex(VertexId),
    #[error("edge {0} is no longer live")]
    DeadEdge(EdgeId),
    #[error("no weights were supplied at init")]
    WeightsAbsent,
    #[error("weight missing for edge {0}")]
    WeightMissing(EdgeId),
    #[error("instance with {n} vertices exceeds the oracle cap {cap}")]
    OverCap { n: usize, cap: usize },
    #[error("input graph is disconnected")]
    Disconnected,
    #[error("graph has no embedding")]
    NotEmbedded,
    #[error("edge {0} is a bridge; its two faces coincide")]
    BridgeQuery(EdgeId),
    #[error("duplicate edge id {0}")]
    DuplicateEdge(EdgeId),
    #[error("edge {edge} joins two border vertices")]
    BorderEdge { edge: EdgeId },
    #[error("edge {edge} is a loop or duplicates an existing adjacency")]
    NotSimple { edge: EdgeId },
    #[error("cannot merge {0} with itself")]
    IdenticalMerge(VertexId),
    #[error("{0} and {1} are neither adjacent nor both border vertices")]
    MergeNotAllowed(VertexId, VertexId),
    #[error("refusing to insert a loop at {0}")]
    LoopInsert(VertexId),
}

//! Contraction of a planar multigraph behind a layered arrangement of
//! merging units. The structure tracks the simple view of the contracted
//! graph: parallel edges collapse into directed records the moment they
//! appear, self-loops are reported and dropped, and queries about live
//! vertices and edges are answered without ever touching dead state.

mod book;
mod contract;
mod structure;
pub mod trace;

pub use structure::{
    ContractionStructure, InitReport, StepReport, StructureConfig, UnitStats,
};

use graph_core::{EdgeId, VertexId};
use thiserror::Error;

/// How many unit levels the structure is built with. The naive layout is a
/// single unit over the whole graph; the layered ones route merges through
/// per-piece units. All three behave identically through the public surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Naive,
    TwoLevel,
    ThreeLevel,
}

/// Dictionary backing for the per-unit child maps. Hashing is the default;
/// the ordered variant trades speed for fully reproducible memory behavior
/// in benchmarks. The two never differ observably.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GammaBacking {
    #[default]
    Hash,
    Ordered,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ContractError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("vertex {0} is no longer a live label")]
    DeadVertex(VertexId),
    #[error("edge {0} is contracted or a self-loop")]
    DeadEdge(EdgeId),
    #[error("structure was initialized without weights")]
    WeightsAbsent,
    #[error("no weight given for edge {0}")]
    WeightMissing(EdgeId),
    #[error("piece target {0} is below the minimum of 4")]
    InvalidTarget(usize),
}

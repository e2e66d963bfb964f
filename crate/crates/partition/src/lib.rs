//! Edge-disjoint divisions of planar graphs: single-level r-divisions and
//! the two-level nesting the contraction structure is seeded with.

mod division;
mod nested;

pub use division::{r_division, Piece, RDivision};
pub use nested::{
    default_r1, default_r2, nested_division, nested_division_with, NestedConfig, NestedDivision,
};

use graph_core::{EdgeId, VertexId};
use thiserror::Error;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum PartitionError {
    #[error("piece target {0} is below the minimum of 4")]
    TargetTooSmall(usize),
    #[error("edge {edge} is a loop or duplicates an adjacency; input must be simple")]
    NotSimple { edge: EdgeId },
    #[error("vertex {vertex} lies in {count} pieces of one level, cap is {cap}")]
    PieceCapExceeded { vertex: VertexId, count: usize, cap: usize },
}

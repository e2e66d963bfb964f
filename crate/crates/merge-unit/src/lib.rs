//! Bordered vertex-merging units. A unit holds a simple graph together with
//! a border vertex set, supports identifying two vertices and inserting
//! edges, and reports instead of keeping any edge that would duplicate an
//! adjacency or connect two border vertices. The general unit works at any
//! size; the micro unit serves tiny graphs out of a shared memo table.

mod general;
mod micro;

pub use general::{Instrumentation, MergeReport, MergeUnit, Parallelism};
pub use micro::{MemoTable, MicroUnit};

use graph_core::{EdgeId, VertexId};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum UnitError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("edge {edge} joins two border vertices")]
    BorderEdge { edge: EdgeId },
    #[error("edge {edge} is a loop or duplicates an adjacency")]
    NotSimple { edge: EdgeId },
    #[error("edge id {0} is already live")]
    DuplicateEdge(EdgeId),
    #[error("cannot merge {0} with itself")]
    IdenticalMerge(VertexId),
    #[error("{0} and {1} are neither adjacent nor both border vertices")]
    MergeNotAllowed(VertexId, VertexId),
    #[error("loop insertion at {0}")]
    LoopInsert(VertexId),
    #[error("graph has {n} vertices, micro limit is {cap}")]
    OverThreshold { n: usize, cap: usize },
    #[error("micro units do not support edge insertion")]
    InsertUnsupported,
}

/// Either unit behind one dispatch surface, so callers can pick the micro
/// variant for small graphs without caring afterwards.
#[derive(Debug)]
pub enum AnyUnit {
    General(MergeUnit),
    Micro(MicroUnit),
}

impl AnyUnit {
    pub fn merge(&mut self, u: VertexId, v: VertexId) -> Result<MergeReport, UnitError> {
        match self {
            AnyUnit::General(g) => g.merge(u, v),
            AnyUnit::Micro(m) => m.merge(u, v),
        }
    }

    pub fn insert_edge(
        &mut self,
        e: EdgeId,
        x: VertexId,
        y: VertexId,
    ) -> Result<MergeReport, UnitError> {
        match self {
            AnyUnit::General(g) => g.insert_edge(e, x, y),
            AnyUnit::Micro(_) => Err(UnitError::InsertUnsupported),
        }
    }

    pub fn phi(&self, v0: VertexId) -> Result<VertexId, UnitError> {
        match self {
            AnyUnit::General(g) => g.phi(v0),
            AnyUnit::Micro(m) => m.phi(v0),
        }
    }

    pub fn phi_inv(&self, v: VertexId) -> Result<Vec<VertexId>, UnitError> {
        match self {
            AnyUnit::General(g) => g.phi_inv(v),
            AnyUnit::Micro(m) => m.phi_inv(v),
        }
    }

    pub fn alpha(&self, x: VertexId, y: VertexId) -> Option<EdgeId> {
        match self {
            AnyUnit::General(g) => g.alpha(x, y),
            AnyUnit::Micro(m) => m.alpha(x, y),
        }
    }

    pub fn is_border(&self, v: VertexId) -> bool {
        match self {
            AnyUnit::General(g) => g.is_border(v),
            AnyUnit::Micro(m) => m.is_border(v),
        }
    }

    pub fn degree(&self, v: VertexId) -> Option<usize> {
        match self {
            AnyUnit::General(g) => g.degree(v),
            AnyUnit::Micro(m) => m.degree(v),
        }
    }

    pub fn neighbors(&self, v: VertexId) -> Option<Vec<(VertexId, EdgeId)>> {
        match self {
            AnyUnit::General(g) => g.neighbors(v),
            AnyUnit::Micro(m) => m.neighbors(v),
        }
    }

    pub fn current_vertices(&self) -> Vec<VertexId> {
        match self {
            AnyUnit::General(g) => g.current_vertices(),
            AnyUnit::Micro(m) => m.current_vertices(),
        }
    }

    pub fn border_vertices(&self) -> Vec<VertexId> {
        match self {
            AnyUnit::General(g) => g.border_vertices(),
            AnyUnit::Micro(m) => m.border_vertices(),
        }
    }

    pub fn edges_sorted(&self) -> Vec<(VertexId, VertexId, EdgeId)> {
        match self {
            AnyUnit::General(g) => g.edges_sorted(),
            AnyUnit::Micro(m) => m.edges_sorted(),
        }
    }

    pub fn phi_pairs(&self) -> Vec<(VertexId, VertexId)> {
        match self {
            AnyUnit::General(g) => g.phi_pairs(),
            AnyUnit::Micro(m) => m.phi_pairs(),
        }
    }

    pub fn check_invariants(&self) -> Result<(), String> {
        match self {
            AnyUnit::General(g) => g.check_invariants(),
            AnyUnit::Micro(m) => m.check_invariants(),
        }
    }
}

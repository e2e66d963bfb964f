use std::fmt;

/// Vertex identifier. Opaque to the library; only equality and ordering are used.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct VertexId(pub u64);

/// Edge identifier. Never reused; survives contraction until the edge is
/// reported as a self-loop or consumed by a contraction.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct EdgeId(pub u64);

pub type Weight = i64;

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Darts are edge ends: dart 2e is the end of edge index e at its first
/// endpoint, dart 2e+1 the end at its second.
pub type Dart = usize;

#[inline]
pub fn twin(d: Dart) -> Dart {
    d ^ 1
}

#[inline]
pub fn dart_edge(d: Dart) -> usize {
    d >> 1
}

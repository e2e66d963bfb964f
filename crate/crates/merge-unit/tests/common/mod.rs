//! Helpers shared by the differential suites: state snapshots, border
//! selection, and input extraction from generated graphs.

// Each test binary compiles this module separately and uses a subset.
#![allow(dead_code)]

use graph_core::{EdgeId, PlanarMultigraph, VertexId};
use merge_unit::{MergeReport, MergeUnit, MicroUnit};
use oracle::MergeModel;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn vid(v: u64) -> VertexId {
    VertexId(v)
}

pub fn eid(e: u64) -> EdgeId {
    EdgeId(e)
}

/// Full observable state of a unit, for equality assertions.
#[derive(Debug, PartialEq, Eq, Clone)]
pub struct Snapshot {
    pub edges: Vec<(VertexId, VertexId, EdgeId)>,
    pub phi: Vec<(VertexId, VertexId)>,
    pub current: Vec<VertexId>,
    pub border: Vec<VertexId>,
}

impl Snapshot {
    pub fn of_general(u: &MergeUnit) -> Snapshot {
        Snapshot {
            edges: u.edges_sorted(),
            phi: u.phi_pairs(),
            current: u.current_vertices(),
            border: u.border_vertices(),
        }
    }

    pub fn of_micro(u: &MicroUnit) -> Snapshot {
        Snapshot {
            edges: u.edges_sorted(),
            phi: u.phi_pairs(),
            current: u.current_vertices(),
            border: u.border_vertices(),
        }
    }

    pub fn of_model(m: &MergeModel) -> Snapshot {
        Snapshot {
            edges: m.edges_sorted(),
            phi: m.phi_pairs(),
            current: m.current_vertices(),
            border: m.border_vertices(),
        }
    }
}

/// Report reduced to what the model can express: directed id pairs plus
/// border ids, both sorted.
pub fn report_pairs(rep: &MergeReport) -> (Vec<(EdgeId, EdgeId)>, Vec<EdgeId>) {
    (
        rep.parallelisms.iter().map(|p| (p.absorbed, p.incumbent)).collect(),
        rep.border_edges.clone(),
    )
}

pub fn unit_input(g: &PlanarMultigraph) -> (Vec<VertexId>, Vec<(EdgeId, VertexId, VertexId)>) {
    let verts = g.vertex_ids().to_vec();
    let edges = g
        .edge_recs()
        .iter()
        .map(|r| (r.id, g.vertex_id(r.u), g.vertex_id(r.v)))
        .collect();
    (verts, edges)
}

/// Random independent vertex subset: candidates in shuffled order, kept
/// unless adjacent to an already kept one.
pub fn pick_border<R: Rng>(
    vertices: &[VertexId],
    edges: &[(EdgeId, VertexId, VertexId)],
    rng: &mut R,
) -> Vec<VertexId> {
    let mut cand = vertices.to_vec();
    cand.shuffle(rng);
    let take = rng.gen_range(0..=cand.len());
    let mut border: Vec<VertexId> = Vec::new();
    for &v in cand.iter().take(take) {
        let clash = edges
            .iter()
            .any(|&(_, a, b)| (a == v && border.contains(&b)) || (b == v && border.contains(&a)));
        if !clash {
            border.push(v);
        }
    }
    border.sort_unstable();
    border
}

/// Valid merge arguments in the current state: adjacent pairs plus
/// non-adjacent border pairs.
pub fn valid_merges(snap: &Snapshot) -> Vec<(VertexId, VertexId)> {
    let mut out: Vec<(VertexId, VertexId)> =
        snap.edges.iter().map(|&(u, v, _)| (u, v)).collect();
    for (i, &a) in snap.border.iter().enumerate() {
        for &b in snap.border.iter().skip(i + 1) {
            out.push((a, b));
        }
    }
    out
}

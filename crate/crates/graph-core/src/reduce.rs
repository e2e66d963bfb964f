use std::collections::HashMap;

use crate::ids::{dart_edge, Dart, EdgeId, VertexId};
use crate::{GraphError, PlanarMultigraph};

/// Degree reduction outcome. The reduced graph is simple, embedded, and has
/// maximum degree 3: high-degree vertices are replaced by cycles of fresh
/// vertices threaded in rotation order, one original attachment per cycle
/// vertex. Contracting every cycle edge undoes the expansion.
#[derive(Clone, Debug)]
pub struct DegreeReduction {
    pub reduced: PlanarMultigraph,
    /// fresh edges forming the expansion cycles, ids above every input id
    pub cycle_edges: Vec<EdgeId>,
    /// reduced vertex -> the input vertex it stands for (identity when kept)
    pub vertex_origin: HashMap<VertexId, VertexId>,
    /// loops removed during simplification, ascending
    pub dropped_loops: Vec<EdgeId>,
    /// (removed id, kept representative) per parallel edge, representative is
    /// the least id of its class
    pub merged_parallels: Vec<(EdgeId, EdgeId)>,
}

pub fn reduce_degree(g: &PlanarMultigraph) -> Result<DegreeReduction, GraphError> {
    if !g.is_embedded() {
        return Err(GraphError::NotEmbedded);
    }

    let mut dropped_loops = Vec::new();
    let mut merged_parallels = Vec::new();
    let mut keep = vec![true; g.m()];
    for (ei, rec) in g.edge_recs().iter().enumerate() {
        if rec.u == rec.v {
            keep[ei] = false;
            dropped_loops.push(rec.id);
        }
    }
    let mut classes: Vec<_> = g.parallel_classes().into_iter().collect();
    classes.sort_by_key(|(pair, _)| *pair);
    for (_, ids) in classes {
        let rep = ids[0];
        for &dup in &ids[1..] {
            keep[g.edge_index(dup).unwrap()] = false;
            merged_parallels.push((dup, rep));
        }
    }
    dropped_loops.sort_unstable();
    merged_parallels.sort_unstable();

    // per-vertex kept darts in rotation order, rotated to start at the
    // smallest incident edge id so ring numbering is reproducible
    let mut kept_darts: Vec<Vec<Dart>> = Vec::with_capacity(g.n());
    for vi in 0..g.n() {
        let mut list: Vec<Dart> = g
            .darts_at(vi)
            .iter()
            .copied()
            .filter(|&d| keep[dart_edge(d)])
            .collect();
        if let Some(k) = list
            .iter()
            .enumerate()
            .min_by_key(|(_, &d)| g.edge_id(dart_edge(d)))
            .map(|(k, _)| k)
        {
            list.rotate_left(k);
        }
        kept_darts.push(list);
    }

    let vbase = g.vertex_ids().iter().map(|v| v.0 + 1).max().unwrap_or(0);
    let ebase = g
        .edge_recs()
        .iter()
        .map(|e| e.id.0 + 1)
        .max()
        .unwrap_or(0);

    // vertex plan: kept vertices map to themselves, expanded ones to a ring
    let mut vertex_origin = HashMap::new();
    let mut side_vertex: Vec<Vec<VertexId>> = Vec::with_capacity(g.n()); // per kept dart
    let mut new_verts = Vec::new();
    let mut ring_vertices: Vec<(usize, Vec<VertexId>)> = Vec::new();
    let mut next_v = vbase;
    let mut vorder: Vec<usize> = (0..g.n()).collect();
    vorder.sort_by_key(|&vi| g.vertex_id(vi));
    side_vertex.resize(g.n(), Vec::new());
    for &vi in &vorder {
        let v = g.vertex_id(vi);
        let t = kept_darts[vi].len();
        if t <= 3 {
            vertex_origin.insert(v, v);
            new_verts.push(v);
            side_vertex[vi] = vec![v; t];
        } else {
            let ring: Vec<VertexId> = (0..t)
                .map(|_| {
                    let r = VertexId(next_v);
                    next_v += 1;
                    r
                })
                .collect();
            for &r in &ring {
                vertex_origin.insert(r, v);
                new_verts.push(r);
            }
            side_vertex[vi] = ring.clone();
            ring_vertices.push((vi, ring));
        }
    }

    // kept original edges first, then cycle edges vertex by vertex
    let mut new_edges: Vec<(VertexId, VertexId, EdgeId)> = Vec::new();
    let mut new_idx = vec![usize::MAX; g.m()];
    let mut dart_slot: HashMap<Dart, (VertexId, u8)> = HashMap::new();
    for (vi, darts) in kept_darts.iter().enumerate() {
        for (k, &d) in darts.iter().enumerate() {
            dart_slot.insert(d, (side_vertex[vi][k], (d & 1) as u8));
        }
    }
    for (ei, rec) in g.edge_recs().iter().enumerate() {
        if !keep[ei] {
            continue;
        }
        let (u, _) = dart_slot[&(2 * ei)];
        let (v, _) = dart_slot[&(2 * ei + 1)];
        new_idx[ei] = new_edges.len();
        new_edges.push((u, v, rec.id));
    }
    let mut cycle_edges = Vec::new();
    let mut ring_edge_idx: HashMap<(usize, usize), usize> = HashMap::new(); // (vi, k) -> edge of r_k -> r_{k+1}
    let mut next_e = ebase;
    for (vi, ring) in &ring_vertices {
        for k in 0..ring.len() {
            let id = EdgeId(next_e);
            next_e += 1;
            ring_edge_idx.insert((*vi, k), new_edges.len());
            new_edges.push((ring[k], ring[(k + 1) % ring.len()], id));
            cycle_edges.push(id);
        }
    }

    // rotations: kept vertices keep their induced order; ring vertex k is
    // [original attachment, toward ring k+1, toward ring k-1], the
    // counterclockwise order when the ring replaces a disc around the vertex
    let map_dart = |d: Dart| 2 * new_idx[dart_edge(d)] + (d & 1);
    let mut order_by_vertex: HashMap<VertexId, Vec<Dart>> = HashMap::new();
    for (vi, darts) in kept_darts.iter().enumerate() {
        let t = darts.len();
        if t <= 3 {
            order_by_vertex.insert(g.vertex_id(vi), darts.iter().map(|&d| map_dart(d)).collect());
        } else {
            for (k, &d) in darts.iter().enumerate() {
                let to_next = 2 * ring_edge_idx[&(vi, k)];
                let to_prev = 2 * ring_edge_idx[&(vi, (k + t - 1) % t)] + 1;
                order_by_vertex.insert(side_vertex[vi][k], vec![map_dart(d), to_next, to_prev]);
            }
        }
    }
    let order: Vec<Vec<Dart>> = new_verts
        .iter()
        .map(|v| order_by_vertex.remove(v).unwrap_or_default())
        .collect();

    let reduced = PlanarMultigraph::from_dart_rotations(new_verts, new_edges, order)?;
    debug_assert!(reduced.euler_check().is_ok());
    Ok(DegreeReduction {
        reduced,
        cycle_edges,
        vertex_origin,
        dropped_loops,
        merged_parallels,
    })
}

//! Face tracing over an embedded graph restricted to its surviving edges.
//! Used as ground truth for the face-adjacency primitives: boundary walks
//! are re-derived from the rotation system on every call.

use std::collections::{HashMap, HashSet};

use graph_core::{dart_edge, twin, Dart, EdgeId, PlanarMultigraph, VertexId};

use crate::OracleError;

fn alive(g: &PlanarMultigraph, dead: &HashSet<EdgeId>, d: Dart) -> bool {
    !dead.contains(&g.edge_id(dart_edge(d)))
}

fn rotation_next_alive(g: &PlanarMultigraph, dead: &HashSet<EdgeId>, d: Dart) -> Dart {
    debug_assert!(alive(g, dead, d));
    let mut cur = g.rotation_next(d);
    while !alive(g, dead, cur) {
        cur = g.rotation_next(cur);
    }
    cur
}

/// Face walks of the embedding restricted to edges outside `dead`, in the
/// original dart numbering. Each walk is rotated to start at its smallest
/// dart; walks are sorted by that dart.
pub fn restricted_faces(
    g: &PlanarMultigraph,
    dead: &HashSet<EdgeId>,
) -> Result<Vec<Vec<Dart>>, OracleError> {
    if !g.is_embedded() {
        return Err(OracleError::NotEmbedded);
    }
    let mut seen = vec![false; 2 * g.m()];
    let mut walks = Vec::new();
    for start in 0..2 * g.m() {
        if seen[start] || !alive(g, dead, start) {
            continue;
        }
        let mut walk = Vec::new();
        let mut d = start;
        loop {
            seen[d] = true;
            walk.push(d);
            d = rotation_next_alive(g, dead, twin(d));
            if d == start {
                break;
            }
        }
        let min_pos = walk
            .iter()
            .enumerate()
            .min_by_key(|&(_, &dart)| dart)
            .map(|(i, _)| i)
            .expect("non-empty walk");
        walk.rotate_left(min_pos);
        walks.push(walk);
    }
    walks.sort_by_key(|w| w[0]);
    Ok(walks)
}

fn sides_of(
    g: &PlanarMultigraph,
    dead: &HashSet<EdgeId>,
    e: EdgeId,
) -> Result<(Vec<Vec<Dart>>, usize, usize), OracleError> {
    let ei = g.edge_index(e).ok_or(OracleError::UnknownEdge(e))?;
    if dead.contains(&e) {
        return Err(OracleError::DeadEdge(e));
    }
    let walks = restricted_faces(g, dead)?;
    let mut face_of: HashMap<Dart, usize> = HashMap::new();
    for (i, w) in walks.iter().enumerate() {
        for &d in w {
            face_of.insert(d, i);
        }
    }
    let fl = face_of[&(2 * ei)];
    let fr = face_of[&(2 * ei + 1)];
    if fl == fr {
        return Err(OracleError::BridgeQuery(e));
    }
    Ok((walks, fl, fr))
}

/// Vertices on the boundaries of both faces of `e`, sorted. `e` must be
/// alive and must separate two distinct faces of the restricted embedding.
pub fn face_intersection_brute(
    g: &PlanarMultigraph,
    dead: &HashSet<EdgeId>,
    e: EdgeId,
) -> Result<Vec<VertexId>, OracleError> {
    let (walks, fl, fr) = sides_of(g, dead, e)?;
    let boundary = |f: usize| -> HashSet<VertexId> {
        walks[f].iter().map(|&d| g.vertex_id(g.dart_vertex(d))).collect()
    };
    let left = boundary(fl);
    let mut out: Vec<VertexId> = boundary(fr).intersection(&left).copied().collect();
    out.sort();
    Ok(out)
}

/// Faces sharing a surviving edge with both faces of `e`, excluding those two
/// faces themselves. Faces are named by the smallest dart on their walk;
/// the result is sorted by that name.
pub fn common_neighbor_faces_brute(
    g: &PlanarMultigraph,
    dead: &HashSet<EdgeId>,
    e: EdgeId,
) -> Result<Vec<Dart>, OracleError> {
    let (walks, fl, fr) = sides_of(g, dead, e)?;
    let mut face_of: HashMap<Dart, usize> = HashMap::new();
    for (i, w) in walks.iter().enumerate() {
        for &d in w {
            face_of.insert(d, i);
        }
    }
    let mut out = Vec::new();
    for (i, w) in walks.iter().enumerate() {
        if i == fl || i == fr {
            continue;
        }
        let touches = |target: usize| w.iter().any(|&d| face_of[&twin(d)] == target);
        if touches(fl) && touches(fr) {
            out.push(w[0]);
        }
    }
    Ok(out)
}

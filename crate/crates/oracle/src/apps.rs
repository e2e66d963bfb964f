//! Small-instance ground truth: sort-based MST, DFS bridges, repeated
//! minimum cuts, and matching enumeration.

use std::collections::{HashMap, HashSet};

use graph_core::{EdgeId, VertexId, Weight};

use crate::OracleError;

pub const KEC_CAP: usize = 60;
pub const MATCHING_CAP: usize = 16;

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

fn index_vertices(vertices: &[VertexId]) -> HashMap<VertexId, usize> {
    vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect()
}

/// Minimum spanning tree by sorting on (weight, id). Returns the total weight
/// and the chosen edges in ascending id order.
pub fn kruskal_mst(
    vertices: &[VertexId],
    edges: &[(EdgeId, VertexId, VertexId)],
    weights: &HashMap<EdgeId, Weight>,
) -> Result<(Weight, Vec<EdgeId>), OracleError> {
    let vidx = index_vertices(vertices);
    let mut order: Vec<(Weight, EdgeId, usize, usize)> = Vec::new();
    for &(e, u, v) in edges {
        let ui = *vidx.get(&u).ok_or(OracleError::UnknownVertex(u))?;
        let vi = *vidx.get(&v).ok_or(OracleError::UnknownVertex(v))?;
        if ui == vi {
            continue;
        }
        let w = *weights.get(&e).ok_or(OracleError::WeightMissing(e))?;
        order.push((w, e, ui, vi));
    }
    order.sort();
    let mut dsu = Dsu::new(vertices.len());
    let mut total = 0;
    let mut chosen = Vec::new();
    for (w, e, ui, vi) in order {
        if dsu.union(ui, vi) {
            total += w;
            chosen.push(e);
        }
    }
    if chosen.len() + 1 != vertices.len() {
        return Err(OracleError::Disconnected);
    }
    chosen.sort();
    Ok((total, chosen))
}

/// Bridges of a multigraph, ascending ids. Parallel copies are entered by
/// edge index, not parent vertex, so a doubled edge is never a bridge.
pub fn bridges(vertices: &[VertexId], edges: &[(EdgeId, VertexId, VertexId)]) -> Vec<EdgeId> {
    let vidx = index_vertices(vertices);
    let n = vertices.len();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, &(_, u, v)) in edges.iter().enumerate() {
        let (ui, vi) = (vidx[&u], vidx[&v]);
        if ui == vi {
            continue;
        }
        adj[ui].push((vi, i));
        adj[vi].push((ui, i));
    }
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![usize::MAX; n];
    let mut timer = 0;
    let mut out = Vec::new();
    for start in 0..n {
        if disc[start] != usize::MAX {
            continue;
        }
        // Frames: (vertex, entering edge index, position in adj list).
        let mut stack: Vec<(usize, usize, usize)> = vec![(start, usize::MAX, 0)];
        disc[start] = timer;
        low[start] = timer;
        timer += 1;
        while let Some(&(v, entered, pos)) = stack.last() {
            if pos < adj[v].len() {
                stack.last_mut().expect("frame present").2 += 1;
                let (to, via) = adj[v][pos];
                if via == entered {
                    continue;
                }
                if disc[to] == usize::MAX {
                    disc[to] = timer;
                    low[to] = timer;
                    timer += 1;
                    stack.push((to, via, 0));
                } else {
                    low[v] = low[v].min(disc[to]);
                }
            } else {
                stack.pop();
                if let Some(&(parent, _, _)) = stack.last() {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] > disc[parent] {
                        out.push(edges[entered].0);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// Connected components, skipping `dead` edges. Sorted inside and out.
pub fn components(
    vertices: &[VertexId],
    edges: &[(EdgeId, VertexId, VertexId)],
    dead: &HashSet<EdgeId>,
) -> Vec<Vec<VertexId>> {
    let vidx = index_vertices(vertices);
    let mut dsu = Dsu::new(vertices.len());
    for &(e, u, v) in edges {
        if !dead.contains(&e) {
            dsu.union(vidx[&u], vidx[&v]);
        }
    }
    let mut groups: HashMap<usize, Vec<VertexId>> = HashMap::new();
    for (i, &v) in vertices.iter().enumerate() {
        groups.entry(dsu.find(i)).or_default().push(v);
    }
    let mut out: Vec<Vec<VertexId>> = groups
        .into_values()
        .map(|mut g| {
            g.sort();
            g
        })
        .collect();
    out.sort();
    out
}

/// Components after removing every bridge: the 2-edge-connected classes.
pub fn two_ec_components(
    vertices: &[VertexId],
    edges: &[(EdgeId, VertexId, VertexId)],
) -> Vec<Vec<VertexId>> {
    let dead: HashSet<EdgeId> = bridges(vertices, edges).into_iter().collect();
    components(vertices, edges, &dead)
}

pub fn two_edge_connected(
    vertices: &[VertexId],
    edges: &[(EdgeId, VertexId, VertexId)],
    u: VertexId,
    v: VertexId,
) -> bool {
    two_ec_components(vertices, edges)
        .iter()
        .any(|comp| comp.contains(&u) && comp.contains(&v))
}

/// Global minimum edge cut by repeated maximum-adjacency phases. Returns the
/// cut size and one side. None for graphs with fewer than two vertices.
/// Disconnected inputs yield a zero cut.
pub fn min_cut(
    vertices: &[VertexId],
    edges: &[(EdgeId, VertexId, VertexId)],
) -> Option<(u64, Vec<VertexId>)> {
    let n = vertices.len();
    if n < 2 {
        return None;
    }
    let vidx = index_vertices(vertices);
    let mut w = vec![vec![0u64; n]; n];
    for &(_, u, v) in edges {
        let (ui, vi) = (vidx[&u], vidx[&v]);
        if ui != vi {
            w[ui][vi] += 1;
            w[vi][ui] += 1;
        }
    }
    let mut groups: Vec<Vec<VertexId>> = vertices.iter().map(|&v| vec![v]).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut best: Option<(u64, Vec<VertexId>)> = None;
    while active.len() > 1 {
        // One phase: grow a set by maximum attachment; the last vertex added
        // defines a cut (itself against the rest), then merges into the
        // second-to-last.
        let mut weight_to_set: Vec<u64> = vec![0; n];
        let mut in_set = vec![false; n];
        let mut prev = usize::MAX;
        let mut last = usize::MAX;
        for _ in 0..active.len() {
            let &next = active
                .iter()
                .filter(|&&v| !in_set[v])
                .max_by_key(|&&v| (weight_to_set[v], std::cmp::Reverse(v)))
                .expect("an unadded vertex remains");
            in_set[next] = true;
            prev = last;
            last = next;
            for &v in &active {
                if !in_set[v] {
                    weight_to_set[v] += w[last][v];
                }
            }
        }
        let phase_cut = active.iter().map(|&v| w[last][v]).sum::<u64>();
        if best.as_ref().is_none_or(|(b, _)| phase_cut < *b) {
            best = Some((phase_cut, groups[last].clone()));
        }
        // Merge last into prev.
        for &v in &active {
            if v != last && v != prev {
                w[prev][v] += w[last][v];
                w[v][prev] = w[prev][v];
            }
        }
        let moved = std::mem::take(&mut groups[last]);
        groups[prev].extend(moved);
        active.retain(|&v| v != last);
    }
    best.map(|(c, mut side)| {
        side.sort();
        (c, side)
    })
}

/// Partition into maximal k-edge-connected parts: split along any cut smaller
/// than k and recurse on the induced sides.
pub fn kec_partition(
    vertices: &[VertexId],
    edges: &[(EdgeId, VertexId, VertexId)],
    k: u64,
) -> Result<Vec<Vec<VertexId>>, OracleError> {
    if vertices.len() > KEC_CAP {
        return Err(OracleError::OverCap { n: vertices.len(), cap: KEC_CAP });
    }
    let mut parts = Vec::new();
    let mut work: Vec<Vec<VertexId>> = vec![vertices.to_vec()];
    while let Some(sub) = work.pop() {
        let inside: HashSet<VertexId> = sub.iter().copied().collect();
        let sub_edges: Vec<(EdgeId, VertexId, VertexId)> = edges
            .iter()
            .filter(|&&(_, u, v)| u != v && inside.contains(&u) && inside.contains(&v))
            .copied()
            .collect();
        let comps = components(&sub, &sub_edges, &HashSet::new());
        if comps.len() > 1 {
            work.extend(comps);
            continue;
        }
        if sub.len() == 1 {
            parts.push(sub);
            continue;
        }
        let (cut, side) = min_cut(&sub, &sub_edges).expect("two or more vertices");
        if cut >= k {
            let mut part = sub;
            part.sort();
            parts.push(part);
        } else {
            let side_set: HashSet<VertexId> = side.iter().copied().collect();
            let rest: Vec<VertexId> =
                sub.iter().copied().filter(|v| !side_set.contains(v)).collect();
            work.push(side);
            work.push(rest);
        }
    }
    parts.sort();
    Ok(parts)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchingCount {
    Zero,
    One(Vec<EdgeId>),
    Many,
}

/// Enumerate perfect matchings as edge sets, stopping at the second one.
/// Parallel copies count separately.
pub fn perfect_matchings(
    vertices: &[VertexId],
    edges: &[(EdgeId, VertexId, VertexId)],
) -> Result<MatchingCount, OracleError> {
    let n = vertices.len();
    if n > MATCHING_CAP {
        return Err(OracleError::OverCap { n, cap: MATCHING_CAP });
    }
    if n % 2 == 1 {
        return Ok(MatchingCount::Zero);
    }
    let vidx = index_vertices(vertices);
    let mut adj: Vec<Vec<(usize, EdgeId)>> = vec![Vec::new(); n];
    for &(e, u, v) in edges {
        let (ui, vi) = (vidx[&u], vidx[&v]);
        if ui != vi {
            adj[ui].push((vi, e));
            adj[vi].push((ui, e));
        }
    }
    let mut found: Vec<Vec<EdgeId>> = Vec::new();
    let mut matched = vec![false; n];
    let mut picked: Vec<EdgeId> = Vec::new();

    fn search(
        adj: &[Vec<(usize, EdgeId)>],
        matched: &mut [bool],
        picked: &mut Vec<EdgeId>,
        found: &mut Vec<Vec<EdgeId>>,
    ) {
        if found.len() >= 2 {
            return;
        }
        let Some(v) = matched.iter().position(|&m| !m) else {
            let mut m = picked.clone();
            m.sort();
            found.push(m);
            return;
        };
        matched[v] = true;
        for &(to, e) in &adj[v] {
            if !matched[to] {
                matched[to] = true;
                picked.push(e);
                search(adj, matched, picked, found);
                picked.pop();
                matched[to] = false;
            }
        }
        matched[v] = false;
    }

    search(&adj, &mut matched, &mut picked, &mut found);
    Ok(match found.len() {
        0 => MatchingCount::Zero,
        1 => MatchingCount::One(found.pop().expect("one entry")),
        _ => MatchingCount::Many,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vid(v: u64) -> VertexId {
        VertexId(v)
    }
    fn eid(e: u64) -> EdgeId {
        EdgeId(e)
    }
    fn vs(ids: &[u64]) -> Vec<VertexId> {
        ids.iter().map(|&v| vid(v)).collect()
    }
    fn es(list: &[(u64, u64, u64)]) -> Vec<(EdgeId, VertexId, VertexId)> {
        list.iter().map(|&(e, u, v)| (eid(e), vid(u), vid(v))).collect()
    }

    #[test]
    fn kruskal_matches_hand_computations() {
        let verts = vs(&[1, 2, 3]);
        let edges = es(&[(12, 1, 2), (13, 1, 3), (23, 2, 3)]);
        let w: HashMap<EdgeId, Weight> =
            [(eid(12), 1), (eid(13), 2), (eid(23), 3)].into_iter().collect();
        let (total, chosen) = kruskal_mst(&verts, &edges, &w).unwrap();
        assert_eq!(total, 3);
        assert_eq!(chosen, vec![eid(12), eid(13)]);

        let verts = vs(&[1, 2, 3, 4]);
        let edges = es(&[(1, 1, 2), (2, 2, 3), (3, 3, 4), (4, 4, 1), (5, 1, 3)]);
        let w: HashMap<EdgeId, Weight> =
            [(eid(1), 4), (eid(2), 1), (eid(3), 2), (eid(4), 3), (eid(5), 5)]
                .into_iter()
                .collect();
        let (total, chosen) = kruskal_mst(&verts, &edges, &w).unwrap();
        assert_eq!(total, 6);
        assert_eq!(chosen, vec![eid(2), eid(3), eid(4)]);

        let err = kruskal_mst(&vs(&[1, 2, 3]), &es(&[(1, 1, 2)]), &w.clone()).unwrap_err();
        assert_eq!(err, OracleError::Disconnected);
    }

    #[test]
    fn bridge_detection_handles_parallels_and_loops() {
        // Path: every edge is a bridge.
        let b = bridges(&vs(&[1, 2, 3, 4]), &es(&[(1, 1, 2), (2, 2, 3), (3, 3, 4)]));
        assert_eq!(b, vec![eid(1), eid(2), eid(3)]);
        // Cycle: none.
        assert!(bridges(&vs(&[1, 2, 3]), &es(&[(1, 1, 2), (2, 2, 3), (3, 3, 1)])).is_empty());
        // A doubled edge is not a bridge; the pendant edge is.
        let b = bridges(&vs(&[1, 2, 3]), &es(&[(1, 1, 2), (2, 1, 2), (3, 2, 3)]));
        assert_eq!(b, vec![eid(3)]);
        // Loops are ignored.
        let b = bridges(&vs(&[1, 2]), &es(&[(1, 1, 1), (2, 1, 2)]));
        assert_eq!(b, vec![eid(2)]);
        // Two triangles sharing a vertex: cut vertex but no bridge.
        let b = bridges(
            &vs(&[1, 2, 3, 4, 5]),
            &es(&[(1, 1, 2), (2, 2, 3), (3, 3, 1), (4, 3, 4), (5, 4, 5), (6, 5, 3)]),
        );
        assert!(b.is_empty());
    }

    #[test]
    fn two_ec_classes_split_at_bridges() {
        let verts = vs(&[1, 2, 3, 4, 5]);
        // Triangle 1-2-3 with a path hanging off 3.
        let edges = es(&[(1, 1, 2), (2, 2, 3), (3, 3, 1), (4, 3, 4), (5, 4, 5)]);
        let comps = two_ec_components(&verts, &edges);
        assert_eq!(comps, vec![vs(&[1, 2, 3]), vs(&[4]), vs(&[5])]);
        assert!(two_edge_connected(&verts, &edges, vid(1), vid(3)));
        assert!(!two_edge_connected(&verts, &edges, vid(3), vid(4)));
    }

    #[test]
    fn min_cut_values_on_known_graphs() {
        let k4 = es(&[(1, 1, 2), (2, 1, 3), (3, 1, 4), (4, 2, 3), (5, 2, 4), (6, 3, 4)]);
        assert_eq!(min_cut(&vs(&[1, 2, 3, 4]), &k4).unwrap().0, 3);
        let c4 = es(&[(1, 1, 2), (2, 2, 3), (3, 3, 4), (4, 4, 1)]);
        assert_eq!(min_cut(&vs(&[1, 2, 3, 4]), &c4).unwrap().0, 2);
        let path = es(&[(1, 1, 2), (2, 2, 3)]);
        let (c, side) = min_cut(&vs(&[1, 2, 3]), &path).unwrap();
        assert_eq!(c, 1);
        assert!(side == vs(&[1]) || side == vs(&[3]) || side == vs(&[1, 2]) || side == vs(&[2, 3]));
        // Parallel pair counts with multiplicity.
        let doubled = es(&[(1, 1, 2), (2, 1, 2)]);
        assert_eq!(min_cut(&vs(&[1, 2]), &doubled).unwrap().0, 2);
        // Disconnected: zero cut.
        assert_eq!(min_cut(&vs(&[1, 2]), &[]).unwrap().0, 0);
    }

    fn k4_edges(base: u64, a: u64, b: u64, c: u64, d: u64) -> Vec<(EdgeId, VertexId, VertexId)> {
        es(&[
            (base, a, b),
            (base + 1, a, c),
            (base + 2, a, d),
            (base + 3, b, c),
            (base + 4, b, d),
            (base + 5, c, d),
        ])
    }

    #[test]
    fn kec_partition_matches_hand_instances() {
        // K4 alone survives at k = 3.
        let parts = kec_partition(&vs(&[1, 2, 3, 4]), &k4_edges(1, 1, 2, 3, 4), 3).unwrap();
        assert_eq!(parts, vec![vs(&[1, 2, 3, 4])]);
        // A tree falls apart into singletons.
        let parts =
            kec_partition(&vs(&[1, 2, 3, 4]), &es(&[(1, 1, 2), (2, 2, 3), (3, 2, 4)]), 3).unwrap();
        assert_eq!(parts.len(), 4);
        // Two K4s joined by two vertex-disjoint length-2 paths: the bundles
        // form a 2-cut, so at k = 3 only the K4s survive.
        let mut edges = k4_edges(1, 1, 2, 3, 4);
        edges.extend(k4_edges(7, 5, 6, 7, 8));
        edges.extend(es(&[(13, 4, 9), (14, 9, 5), (15, 4, 10), (16, 10, 5)]));
        let parts = kec_partition(&vs(&[1, 2, 3, 4, 5, 6, 7, 8, 9, 10]), &edges, 3).unwrap();
        assert_eq!(
            parts,
            vec![vs(&[1, 2, 3, 4]), vs(&[5, 6, 7, 8]), vs(&[9]), vs(&[10])]
        );
        // The same instance is one part at k = 2.
        let parts2 = kec_partition(&vs(&[1, 2, 3, 4, 5, 6, 7, 8, 9, 10]), &edges, 2).unwrap();
        assert_eq!(parts2.len(), 1);
        let err = kec_partition(&vs(&(0..80).collect::<Vec<u64>>()), &[], 3).unwrap_err();
        assert_eq!(err, OracleError::OverCap { n: 80, cap: KEC_CAP });
    }

    #[test]
    fn matching_enumeration_verdicts() {
        assert_eq!(
            perfect_matchings(&vs(&[1, 2]), &es(&[(1, 1, 2)])).unwrap(),
            MatchingCount::One(vec![eid(1)])
        );
        // Path on four vertices: outer edges forced.
        assert_eq!(
            perfect_matchings(&vs(&[1, 2, 3, 4]), &es(&[(1, 1, 2), (2, 2, 3), (3, 3, 4)])).unwrap(),
            MatchingCount::One(vec![eid(1), eid(3)])
        );
        // C4 has two; a doubled edge has two; odd order has none.
        let c4 = es(&[(1, 1, 2), (2, 2, 3), (3, 3, 4), (4, 4, 1)]);
        assert_eq!(perfect_matchings(&vs(&[1, 2, 3, 4]), &c4).unwrap(), MatchingCount::Many);
        let doubled = es(&[(1, 1, 2), (2, 1, 2)]);
        assert_eq!(perfect_matchings(&vs(&[1, 2]), &doubled).unwrap(), MatchingCount::Many);
        assert_eq!(
            perfect_matchings(&vs(&[1, 2, 3]), &es(&[(1, 1, 2), (2, 2, 3)])).unwrap(),
            MatchingCount::Zero
        );
        // Star with three leaves: even order, no perfect matching.
        assert_eq!(
            perfect_matchings(&vs(&[0, 1, 2, 3]), &es(&[(1, 0, 1), (2, 0, 2), (3, 0, 3)])).unwrap(),
            MatchingCount::Zero
        );
    }
}

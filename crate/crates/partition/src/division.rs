//! Single-level r-divisions by recursive separator splitting.
//!
//! Regions are edge sets. A region whose vertex or boundary count is over
//! target is cut by a separator: connected components first, a weighted
//! centroid on trees, otherwise a cheapest balanced BFS level. Separator
//! vertices land on both sides, edges on exactly one, so pieces stay
//! edge-disjoint and cover the input. Vertex weights drive the cut while a
//! region is too big, boundary weights once only its boundary is.

use std::collections::HashMap;

use graph_core::{EdgeId, PlanarMultigraph, VertexId};

use crate::PartitionError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    /// edge ids, ascending
    pub edges: Vec<EdgeId>,
    /// endpoints of those edges, ascending; never any isolated vertex
    pub vertices: Vec<VertexId>,
    /// vertices also incident to edges outside the piece, ascending
    pub boundary: Vec<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RDivision {
    pub pieces: Vec<Piece>,
    pub r: usize,
    pub slack: usize,
}

impl RDivision {
    pub fn total_boundary(&self) -> usize {
        self.pieces.iter().map(|p| p.boundary.len()).sum()
    }

    pub fn dump(&self) -> String {
        let mut out = format!(
            "r-division r={} slack={} pieces={}\n",
            self.r,
            self.slack,
            self.pieces.len()
        );
        for (i, p) in self.pieces.iter().enumerate() {
            out.push_str(&format!(
                "piece {i}: edges {}; boundary {}\n",
                join(&p.edges),
                join(&p.boundary)
            ));
        }
        out
    }

    /// Structural soundness: pieces cover the edge set exactly once, have no
    /// isolated vertices, their boundaries match the incidence definition,
    /// and every size bound holds with the configured slack.
    pub fn check(&self, g: &PlanarMultigraph) -> Result<(), String> {
        let mut seen: HashMap<EdgeId, usize> = HashMap::new();
        for (i, p) in self.pieces.iter().enumerate() {
            for &e in &p.edges {
                if let Some(j) = seen.insert(e, i) {
                    return Err(format!("edge {e} is in pieces {j} and {i}"));
                }
            }
        }
        for rec in g.edge_recs() {
            if !seen.contains_key(&rec.id) {
                return Err(format!("edge {} is in no piece", rec.id));
            }
        }
        if seen.len() != g.m() {
            return Err("pieces contain edges not in the graph".into());
        }
        let rf = self.r as f64;
        let max_verts = self.slack * self.r;
        let max_border = (self.slack as f64 * rf.sqrt()).ceil() as usize;
        for (i, p) in self.pieces.iter().enumerate() {
            let mut deg: HashMap<VertexId, usize> = HashMap::new();
            for &e in &p.edges {
                let (u, v) = g.endpoints(e).ok_or(format!("unknown edge {e}"))?;
                *deg.entry(u).or_insert(0) += 1;
                *deg.entry(v).or_insert(0) += 1;
            }
            let mut verts: Vec<VertexId> = deg.keys().copied().collect();
            verts.sort_unstable();
            if verts != p.vertices {
                return Err(format!("piece {i} vertex list does not match its edges"));
            }
            let mut border: Vec<VertexId> = verts
                .iter()
                .copied()
                .filter(|&v| {
                    let vi = g.vertex_index(v).unwrap();
                    g.degree(vi) > deg[&v]
                })
                .collect();
            border.sort_unstable();
            if border != p.boundary {
                return Err(format!("piece {i} boundary list is wrong"));
            }
            if p.vertices.len() > max_verts {
                return Err(format!(
                    "piece {i} has {} vertices, cap {max_verts}",
                    p.vertices.len()
                ));
            }
            if p.boundary.len() > max_border {
                return Err(format!(
                    "piece {i} has {} boundary vertices, cap {max_border}",
                    p.boundary.len()
                ));
            }
        }
        Ok(())
    }
}

fn join<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn r_division(
    g: &PlanarMultigraph,
    r: usize,
    slack: usize,
) -> Result<RDivision, PartitionError> {
    if r < 4 {
        return Err(PartitionError::TargetTooSmall(r));
    }
    let mut pair_seen: HashMap<(usize, usize), ()> = HashMap::new();
    for rec in g.edge_recs() {
        if rec.u == rec.v {
            return Err(PartitionError::NotSimple { edge: rec.id });
        }
        let key = (rec.u.min(rec.v), rec.u.max(rec.v));
        if pair_seen.insert(key, ()).is_some() {
            return Err(PartitionError::NotSimple { edge: rec.id });
        }
    }

    let ends: Vec<(u32, u32)> = g
        .edge_recs()
        .iter()
        .map(|rec| (rec.u as u32, rec.v as u32))
        .collect();
    let deg: Vec<u32> = (0..g.n()).map(|vi| g.degree(vi) as u32).collect();
    let regions = divide_edges(&ends, &deg, (0..g.m() as u32).collect(), r);

    let mut pieces: Vec<Piece> = regions
        .into_iter()
        .map(|region| assemble_piece(g, &region))
        .collect();
    pieces.sort_by_key(|p| p.edges[0]);
    Ok(RDivision { pieces, r, slack })
}

fn assemble_piece(g: &PlanarMultigraph, region: &[u32]) -> Piece {
    let mut deg_in: HashMap<usize, usize> = HashMap::new();
    let mut edges: Vec<EdgeId> = Vec::with_capacity(region.len());
    for &ei in region {
        let rec = &g.edge_recs()[ei as usize];
        edges.push(rec.id);
        *deg_in.entry(rec.u).or_insert(0) += 1;
        *deg_in.entry(rec.v).or_insert(0) += 1;
    }
    edges.sort_unstable();
    let vidx: Vec<usize> = deg_in.keys().copied().collect();
    let mut vertices: Vec<VertexId> = vidx.iter().map(|&vi| g.vertex_id(vi)).collect();
    vertices.sort_unstable();
    let mut boundary: Vec<VertexId> = vidx
        .iter()
        .filter(|&&vi| g.degree(vi) > deg_in[&vi])
        .map(|&vi| g.vertex_id(vi))
        .collect();
    boundary.sort_unstable();
    Piece { edges, vertices, boundary }
}

/// Splits `region` (edge indices into `ends`) until every remainder fits
/// 2r vertices and 4⌈√r⌉ boundary vertices, where boundary means incidence
/// to an edge of the host graph outside the region. `deg` is the host
/// degree per vertex slot. Emitted regions are sorted and partition the
/// input region.
pub(crate) fn divide_edges(
    ends: &[(u32, u32)],
    deg: &[u32],
    region: Vec<u32>,
    r: usize,
) -> Vec<Vec<u32>> {
    let vcap = 2 * r;
    let bcap = 4 * (r as f64).sqrt().ceil() as usize;
    let mut out = Vec::new();
    let mut stack = vec![region];
    while let Some(mut region) = stack.pop() {
        if region.is_empty() {
            continue;
        }
        region.sort_unstable();
        let local = Local::build(ends, deg, &region);
        if local.components > 1 {
            let mut parts: Vec<Vec<u32>> = vec![Vec::new(); local.components];
            for (i, &ei) in region.iter().enumerate() {
                parts[local.comp[local.ledge[i].0 as usize] as usize].push(ei);
            }
            stack.extend(parts);
            continue;
        }
        let nb = local.border.iter().filter(|&&b| b).count();
        if local.nv <= vcap && nb <= bcap {
            out.push(region);
            continue;
        }
        let weights: Vec<u64> = if local.nv > vcap {
            vec![1; local.nv]
        } else {
            local.border.iter().map(|&b| b as u64).collect()
        };
        let (left, right) = if region.len() == local.nv - 1 {
            centroid_split(&local, &region, &weights)
        } else {
            level_split(&local, &region, &weights)
        };
        match (left, right) {
            (Some(l), Some(rt)) if !l.is_empty() && !rt.is_empty() => {
                stack.push(l);
                stack.push(rt);
            }
            _ => {
                // last resort, keeps termination unconditional
                let mid = region.len() / 2;
                let tail = region.split_off(mid);
                stack.push(region);
                stack.push(tail);
            }
        }
    }
    out.sort_by_key(|p| p[0]);
    out
}

/// Region-local view: dense vertex numbering, adjacency, host-vs-local
/// degree border flags, connected components.
struct Local {
    nv: usize,
    /// per region edge (same order), local endpoint pair
    ledge: Vec<(u32, u32)>,
    /// local vertex -> global slot
    slot: Vec<u32>,
    adj: Vec<Vec<(u32, u32)>>,
    border: Vec<bool>,
    comp: Vec<u32>,
    components: usize,
}

impl Local {
    fn build(ends: &[(u32, u32)], deg: &[u32], region: &[u32]) -> Local {
        let mut index: HashMap<u32, u32> = HashMap::new();
        let mut slot: Vec<u32> = Vec::new();
        let mut ledge = Vec::with_capacity(region.len());
        for &ei in region {
            let (gu, gv) = ends[ei as usize];
            let lu = *index.entry(gu).or_insert_with(|| {
                slot.push(gu);
                slot.len() as u32 - 1
            });
            let lv = *index.entry(gv).or_insert_with(|| {
                slot.push(gv);
                slot.len() as u32 - 1
            });
            ledge.push((lu, lv));
        }
        let nv = slot.len();
        let mut adj: Vec<Vec<(u32, u32)>> = vec![Vec::new(); nv];
        for (i, &(lu, lv)) in ledge.iter().enumerate() {
            adj[lu as usize].push((lv, i as u32));
            adj[lv as usize].push((lu, i as u32));
        }
        let border: Vec<bool> = (0..nv)
            .map(|lv| adj[lv].len() < deg[slot[lv] as usize] as usize)
            .collect();
        let mut comp = vec![u32::MAX; nv];
        let mut components = 0;
        for start in 0..nv {
            if comp[start] != u32::MAX {
                continue;
            }
            let mut queue = vec![start as u32];
            comp[start] = components as u32;
            while let Some(x) = queue.pop() {
                for &(y, _) in &adj[x as usize] {
                    if comp[y as usize] == u32::MAX {
                        comp[y as usize] = components as u32;
                        queue.push(y);
                    }
                }
            }
            components += 1;
        }
        Local { nv, ledge, slot, adj, border, comp, components }
    }

    /// BFS levels from the vertex with the smallest global slot.
    fn levels(&self) -> Vec<u32> {
        let root = (0..self.nv)
            .min_by_key(|&lv| self.slot[lv])
            .expect("nonempty region");
        let mut level = vec![u32::MAX; self.nv];
        level[root] = 0;
        let mut frontier = vec![root as u32];
        let mut depth = 0u32;
        while !frontier.is_empty() {
            depth += 1;
            let mut next = Vec::new();
            for &x in &frontier {
                for &(y, _) in &self.adj[x as usize] {
                    if level[y as usize] == u32::MAX {
                        level[y as usize] = depth;
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        level
    }
}

/// Cheapest balanced BFS level: among levels whose removal leaves at most
/// three quarters of the weight on either side, take the smallest. Edges
/// strictly below the level go left, the rest right.
fn level_split(
    local: &Local,
    region: &[u32],
    weights: &[u64],
) -> (Option<Vec<u32>>, Option<Vec<u32>>) {
    let level = local.levels();
    let depth = 1 + *level.iter().max().unwrap() as usize;
    let mut lw = vec![0u64; depth];
    let mut lsize = vec![0usize; depth];
    for lv in 0..local.nv {
        lw[level[lv] as usize] += weights[lv];
        lsize[level[lv] as usize] += 1;
    }
    let total: u64 = lw.iter().sum();
    let mut best: Option<(usize, usize)> = None;
    let mut before = 0u64;
    for d in 0..depth {
        let through = before + lw[d];
        if 4 * before < 3 * total && 4 * through > total {
            match best {
                Some((sz, _)) if sz <= lsize[d] => {}
                _ => best = Some((lsize[d], d)),
            }
        }
        before = through;
    }
    let Some((_, cut)) = best else { return (None, None) };
    let cut = cut as u32;
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (i, &ei) in region.iter().enumerate() {
        let (lu, lv) = local.ledge[i];
        if level[lu as usize].min(level[lv as usize]) < cut {
            left.push(ei);
        } else {
            right.push(ei);
        }
    }
    (Some(left), Some(right))
}

/// Weighted centroid cut for tree regions: find the vertex minimizing the
/// heaviest remaining component, then pack those components into two sides
/// greedily by weight. The centroid's own edges follow the far endpoint.
fn centroid_split(
    local: &Local,
    region: &[u32],
    weights: &[u64],
) -> (Option<Vec<u32>>, Option<Vec<u32>>) {
    let n = local.nv;
    let root = 0usize;
    let mut order = vec![root as u32];
    let mut parent = vec![u32::MAX; n];
    parent[root] = root as u32;
    let mut head = 0;
    while head < order.len() {
        let x = order[head] as usize;
        head += 1;
        for &(y, _) in &local.adj[x] {
            if parent[y as usize] == u32::MAX {
                parent[y as usize] = x as u32;
                order.push(y);
            }
        }
    }
    let total: u64 = weights.iter().sum();
    let mut sub = weights.to_vec();
    for &x in order.iter().rev() {
        let p = parent[x as usize];
        if p != x {
            sub[p as usize] += sub[x as usize];
        }
    }
    let mut centroid = 0usize;
    let mut best = u64::MAX;
    for v in 0..n {
        let mut worst = total - sub[v];
        for &(c, _) in &local.adj[v] {
            if parent[c as usize] as usize == v && c as usize != root {
                worst = worst.max(sub[c as usize]);
            }
        }
        if best > worst || (best == worst && local.slot[v] < local.slot[centroid]) {
            best = worst;
            centroid = v;
        }
    }

    // components of the tree minus the centroid, one per incident edge
    let mut comp = vec![u32::MAX; n];
    let mut groups: Vec<(u64, u32)> = Vec::new();
    for &(y, _) in &local.adj[centroid] {
        let gi = groups.len() as u32;
        let mut queue = vec![y];
        comp[y as usize] = gi;
        let mut w = 0u64;
        while let Some(x) = queue.pop() {
            w += weights[x as usize];
            for &(z, _) in &local.adj[x as usize] {
                if z as usize != centroid && comp[z as usize] == u32::MAX {
                    comp[z as usize] = gi;
                    queue.push(z);
                }
            }
        }
        groups.push((w, gi));
    }
    if groups.len() < 2 {
        return (None, None);
    }
    let mut by_weight: Vec<(u64, u32)> = groups.clone();
    by_weight.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut side = vec![0u8; groups.len()];
    let (mut wl, mut wr) = (0u64, 0u64);
    for &(w, gi) in &by_weight {
        if wl <= wr {
            side[gi as usize] = 0;
            wl += w;
        } else {
            side[gi as usize] = 1;
            wr += w;
        }
    }
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (i, &ei) in region.iter().enumerate() {
        let (lu, lv) = local.ledge[i];
        let other = if lu as usize == centroid { lv } else { lu };
        if side[comp[other as usize] as usize] == 0 {
            left.push(ei);
        } else {
            right.push(ei);
        }
    }
    (Some(left), Some(right))
}

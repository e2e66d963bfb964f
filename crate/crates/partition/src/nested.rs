//! The two-level division: a coarse r-division of the whole graph, then an
//! r-division of each piece relative to that piece.

use std::collections::HashMap;

use graph_core::{EdgeId, PlanarMultigraph, VertexId};

use crate::division::{divide_edges, Piece, RDivision};
use crate::{r_division, PartitionError};

#[derive(Debug, Clone, Copy)]
pub struct NestedConfig {
    /// top-level piece target; None computes it from n
    pub r1: Option<usize>,
    /// second-level piece target; None computes it from r1
    pub r2: Option<usize>,
    pub slack: usize,
    /// maximum pieces of one level any vertex may lie in
    pub vertex_piece_cap: usize,
}

impl Default for NestedConfig {
    fn default() -> Self {
        NestedConfig { r1: None, r2: None, slack: 8, vertex_piece_cap: 3 }
    }
}

#[derive(Debug, Clone)]
pub struct NestedDivision {
    pub top: RDivision,
    /// sub[i] divides top.pieces[i]; its boundaries are relative to that piece
    pub sub: Vec<RDivision>,
    pub r1: usize,
    pub r2: usize,
}

/// Piece targets grow like the fourth power of the log but are clamped to a
/// quarter of the instance so small inputs still split into real levels,
/// and floored so targets stay valid.
pub fn default_r1(n: usize) -> usize {
    let quartic = log_quartic(n);
    quartic.min(64.max(n.div_ceil(4))).max(4)
}

pub fn default_r2(r1: usize) -> usize {
    let quartic = log_quartic(r1);
    quartic.min(8.max(r1.div_ceil(4))).max(4)
}

fn log_quartic(n: usize) -> usize {
    let lg = (n.max(2) as f64).log2();
    (lg * lg * lg * lg).ceil() as usize
}

pub fn nested_division(g: &PlanarMultigraph) -> Result<NestedDivision, PartitionError> {
    nested_division_with(g, NestedConfig::default())
}

pub fn nested_division_with(
    g: &PlanarMultigraph,
    cfg: NestedConfig,
) -> Result<NestedDivision, PartitionError> {
    let r1 = cfg.r1.unwrap_or_else(|| default_r1(g.n()));
    let r2 = cfg.r2.unwrap_or_else(|| default_r2(r1));
    if r2 < 4 {
        return Err(PartitionError::TargetTooSmall(r2));
    }
    let top = r_division(g, r1, cfg.slack)?;
    let sub: Vec<RDivision> = top
        .pieces
        .iter()
        .map(|p| subdivide(g, p, r2, cfg.slack))
        .collect();
    let nested = NestedDivision { top, sub, r1, r2 };
    nested.check_piece_cap(cfg.vertex_piece_cap)?;
    Ok(nested)
}

/// An r-division of one piece, treating the piece itself as the host graph:
/// sub-boundaries mark vertices shared between sub-pieces, not the piece's
/// own outer boundary.
fn subdivide(g: &PlanarMultigraph, piece: &Piece, r2: usize, slack: usize) -> RDivision {
    let mut local_of: HashMap<VertexId, u32> = HashMap::new();
    for (i, &v) in piece.vertices.iter().enumerate() {
        local_of.insert(v, i as u32);
    }
    let mut ends: Vec<(u32, u32)> = Vec::with_capacity(piece.edges.len());
    let mut deg = vec![0u32; piece.vertices.len()];
    for &e in &piece.edges {
        let (u, v) = g.endpoints(e).expect("piece edge in host graph");
        let (lu, lv) = (local_of[&u], local_of[&v]);
        ends.push((lu, lv));
        deg[lu as usize] += 1;
        deg[lv as usize] += 1;
    }
    let regions = divide_edges(&ends, &deg, (0..ends.len() as u32).collect(), r2);
    let mut pieces: Vec<Piece> = regions
        .into_iter()
        .map(|region| {
            let mut deg_in: HashMap<u32, u32> = HashMap::new();
            let mut edges: Vec<EdgeId> = Vec::with_capacity(region.len());
            for &ei in &region {
                edges.push(piece.edges[ei as usize]);
                let (lu, lv) = ends[ei as usize];
                *deg_in.entry(lu).or_insert(0) += 1;
                *deg_in.entry(lv).or_insert(0) += 1;
            }
            edges.sort_unstable();
            let mut vertices: Vec<VertexId> =
                deg_in.keys().map(|&lv| piece.vertices[lv as usize]).collect();
            vertices.sort_unstable();
            let mut boundary: Vec<VertexId> = deg_in
                .iter()
                .filter(|&(&lv, &d)| d < deg[lv as usize])
                .map(|(&lv, _)| piece.vertices[lv as usize])
                .collect();
            boundary.sort_unstable();
            Piece { edges, vertices, boundary }
        })
        .collect();
    pieces.sort_by_key(|p| p.edges[0]);
    RDivision { pieces, r: r2, slack }
}

impl NestedDivision {
    /// No vertex may lie in more pieces of one level than the cap. With the
    /// degree-3 precondition a vertex has at most three incident edges, so
    /// three is tight for both levels.
    pub fn check_piece_cap(&self, cap: usize) -> Result<(), PartitionError> {
        let flat = flatten(&self.sub);
        for level in [&self.top.pieces, &flat] {
            let mut count: HashMap<VertexId, usize> = HashMap::new();
            for p in level.iter() {
                for &v in &p.vertices {
                    *count.entry(v).or_insert(0) += 1;
                }
            }
            let mut over: Vec<(usize, VertexId)> =
                count.into_iter().filter(|&(_, c)| c > cap).map(|(v, c)| (c, v)).collect();
            over.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
            if let Some(&(count, vertex)) = over.first() {
                return Err(PartitionError::PieceCapExceeded { vertex, count, cap });
            }
        }
        Ok(())
    }

    pub fn check(&self, g: &PlanarMultigraph) -> Result<(), String> {
        self.top.check(g)?;
        if self.sub.len() != self.top.pieces.len() {
            return Err("one sub-division per top piece expected".into());
        }
        for (i, (piece, subdiv)) in self.top.pieces.iter().zip(&self.sub).enumerate() {
            check_sub(g, piece, subdiv).map_err(|e| format!("sub-division {i}: {e}"))?;
        }
        Ok(())
    }

    pub fn dump(&self) -> String {
        let mut out = format!(
            "nested r1={} r2={} top-pieces={}\n",
            self.r1,
            self.r2,
            self.top.pieces.len()
        );
        for (i, p) in self.top.pieces.iter().enumerate() {
            out.push_str(&format!(
                "piece {i}: edges {}; boundary {}\n",
                join(&p.edges),
                join(&p.boundary)
            ));
            for (j, sp) in self.sub[i].pieces.iter().enumerate() {
                out.push_str(&format!(
                    "  sub {i}.{j}: edges {}; boundary {}\n",
                    join(&sp.edges),
                    join(&sp.boundary)
                ));
            }
        }
        out
    }
}

fn flatten(divs: &[RDivision]) -> Vec<Piece> {
    divs.iter().flat_map(|d| d.pieces.iter().cloned()).collect()
}

fn join<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Mirrors RDivision::check but relative to the piece: cover and disjointness
/// against the piece's edges, boundaries against degrees within the piece.
fn check_sub(g: &PlanarMultigraph, piece: &Piece, div: &RDivision) -> Result<(), String> {
    let mut covered: Vec<EdgeId> = div.pieces.iter().flat_map(|p| p.edges.iter().copied()).collect();
    covered.sort_unstable();
    if covered != piece.edges {
        return Err("sub-pieces do not partition the piece's edges".into());
    }
    let mut piece_deg: HashMap<VertexId, usize> = HashMap::new();
    for &e in &piece.edges {
        let (u, v) = g.endpoints(e).unwrap();
        *piece_deg.entry(u).or_insert(0) += 1;
        *piece_deg.entry(v).or_insert(0) += 1;
    }
    let rf = div.r as f64;
    let max_verts = div.slack * div.r;
    let max_border = (div.slack as f64 * rf.sqrt()).ceil() as usize;
    for (i, sp) in div.pieces.iter().enumerate() {
        let mut deg_in: HashMap<VertexId, usize> = HashMap::new();
        for &e in &sp.edges {
            let (u, v) = g.endpoints(e).unwrap();
            *deg_in.entry(u).or_insert(0) += 1;
            *deg_in.entry(v).or_insert(0) += 1;
        }
        let mut verts: Vec<VertexId> = deg_in.keys().copied().collect();
        verts.sort_unstable();
        if verts != sp.vertices {
            return Err(format!("sub-piece {i} vertex list does not match its edges"));
        }
        let mut border: Vec<VertexId> = verts
            .iter()
            .copied()
            .filter(|v| deg_in[v] < piece_deg[v])
            .collect();
        border.sort_unstable();
        if border != sp.boundary {
            return Err(format!("sub-piece {i} boundary list is wrong"));
        }
        if sp.vertices.len() > max_verts {
            return Err(format!("sub-piece {i} has {} vertices, cap {max_verts}", sp.vertices.len()));
        }
        if sp.boundary.len() > max_border {
            return Err(format!(
                "sub-piece {i} has {} boundary vertices, cap {max_border}",
                sp.boundary.len()
            ));
        }
    }
    Ok(())
}

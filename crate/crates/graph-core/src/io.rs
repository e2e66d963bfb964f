use std::collections::HashMap;
use std::fmt::Write as _;

use crate::ids::{EdgeId, VertexId, Weight};
use crate::GraphError;

/// Result of parsing the text edge-list format. One edge per line as
/// `u v id` or `u v id w`; blank lines and `#` comments are skipped. A line
/// `vertex v` declares an isolated vertex.
#[derive(Clone, Debug, Default)]
pub struct ParsedGraph {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(VertexId, VertexId, EdgeId)>,
    pub weights: HashMap<EdgeId, Weight>,
}

fn bad(line: usize, msg: impl Into<String>) -> GraphError {
    GraphError::Parse {
        line,
        msg: msg.into(),
    }
}

fn num(line: usize, tok: &str) -> Result<u64, GraphError> {
    tok.parse()
        .map_err(|_| bad(line, format!("expected a number, got `{tok}`")))
}

pub fn parse_edge_list(text: &str) -> Result<ParsedGraph, GraphError> {
    let mut out = ParsedGraph::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        if toks[0] == "vertex" {
            if toks.len() != 2 {
                return Err(bad(line, "expected `vertex <id>`"));
            }
            out.vertices.push(VertexId(num(line, toks[1])?));
            continue;
        }
        match toks.len() {
            3 | 4 => {
                let u = VertexId(num(line, toks[0])?);
                let v = VertexId(num(line, toks[1])?);
                let id = EdgeId(num(line, toks[2])?);
                out.edges.push((u, v, id));
                if toks.len() == 4 {
                    let w: Weight = toks[3]
                        .parse()
                        .map_err(|_| bad(line, format!("bad weight `{}`", toks[3])))?;
                    out.weights.insert(id, w);
                }
            }
            _ => return Err(bad(line, "expected `u v id` or `u v id w`")),
        }
    }
    Ok(out)
}

/// Rotation lines `v: e1 e2 ...` giving the counterclockwise edge order at
/// each vertex; a self-loop id appears twice.
pub fn parse_rotations(text: &str) -> Result<Vec<(VertexId, Vec<EdgeId>)>, GraphError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (head, tail) = body
            .split_once(':')
            .ok_or_else(|| bad(line, "expected `v: e1 e2 ...`"))?;
        let v = VertexId(num(line, head.trim())?);
        let mut ids = Vec::new();
        for tok in tail.split_whitespace() {
            ids.push(EdgeId(num(line, tok)?));
        }
        out.push((v, ids));
    }
    Ok(out)
}

pub fn write_edge_list(g: &crate::PlanarMultigraph, weights: &HashMap<EdgeId, Weight>) -> String {
    let mut s = String::new();
    let mut isolated: Vec<VertexId> = (0..g.n())
        .filter(|&vi| g.degree(vi) == 0)
        .map(|vi| g.vertex_id(vi))
        .collect();
    isolated.sort_unstable();
    for v in isolated {
        let _ = writeln!(s, "vertex {v}");
    }
    let mut recs: Vec<_> = g.edge_recs().to_vec();
    recs.sort_by_key(|e| e.id);
    for e in recs {
        let (u, v) = (g.vertex_id(e.u), g.vertex_id(e.v));
        match weights.get(&e.id) {
            Some(w) => {
                let _ = writeln!(s, "{u} {v} {} {w}", e.id);
            }
            None => {
                let _ = writeln!(s, "{u} {v} {}", e.id);
            }
        }
    }
    s
}

pub fn write_rotations(g: &crate::PlanarMultigraph) -> Result<String, GraphError> {
    if !g.is_embedded() {
        return Err(GraphError::NotEmbedded);
    }
    let mut s = String::new();
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&vi| g.vertex_id(vi));
    for vi in order {
        if g.degree(vi) == 0 {
            continue;
        }
        let _ = write!(s, "{}:", g.vertex_id(vi));
        for &d in g.darts_at(vi) {
            let _ = write!(s, " {}", g.edge_id(crate::dart_edge(d)));
        }
        let _ = writeln!(s);
    }
    Ok(s)
}

//! Line-oriented traces: a `n m` header, an edge list in the shared text
//! format, then `contract <id>` commands. Running a trace prints one line
//! per report; tests freeze the exact output.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use graph_core::{EdgeId, PlanarMultigraph, VertexId, Weight};

use crate::{ContractionStructure, Mode};

#[derive(Debug, Clone, Default)]
pub struct Trace {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(VertexId, VertexId, EdgeId)>,
    pub weights: HashMap<EdgeId, Weight>,
    pub ops: Vec<EdgeId>,
}

pub fn parse_trace(text: &str) -> Result<Trace, String> {
    let mut header: Option<(usize, usize)> = None;
    let mut t = Trace::default();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = ln + 1;
        let toks: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| -> Result<u64, String> {
            s.parse().map_err(|_| format!("line {at}: bad number `{s}`"))
        };
        if header.is_none() {
            if toks.len() != 2 {
                return Err(format!("line {at}: expected `n m` header"));
            }
            header = Some((num(toks[0])? as usize, num(toks[1])? as usize));
            continue;
        }
        match toks[0] {
            "vertex" if toks.len() == 2 => t.vertices.push(VertexId(num(toks[1])?)),
            "contract" if toks.len() == 2 => t.ops.push(EdgeId(num(toks[1])?)),
            _ if toks.len() == 3 || toks.len() == 4 => {
                let u = VertexId(num(toks[0])?);
                let v = VertexId(num(toks[1])?);
                let id = EdgeId(num(toks[2])?);
                if toks.len() == 4 {
                    let w: Weight = toks[3]
                        .parse()
                        .map_err(|_| format!("line {at}: bad weight `{}`", toks[3]))?;
                    t.weights.insert(id, w);
                }
                t.edges.push((u, v, id));
            }
            _ => return Err(format!("line {at}: unrecognized line `{line}`")),
        }
    }
    let (n, m) = header.ok_or("trace has no header")?;
    if t.edges.len() != m {
        return Err(format!("header names {m} edges, found {}", t.edges.len()));
    }
    let mut vs: HashSet<VertexId> = t.vertices.iter().copied().collect();
    for &(u, v, _) in &t.edges {
        vs.insert(u);
        vs.insert(v);
    }
    if vs.len() != n {
        return Err(format!("header names {n} vertices, found {}", vs.len()));
    }
    if !t.weights.is_empty() && t.weights.len() != t.edges.len() {
        return Err("weights must cover every edge or none".to_string());
    }
    Ok(t)
}

fn fmt_ids(ids: &[EdgeId]) -> String {
    ids.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
}

fn fmt_pairs(pairs: &[(EdgeId, EdgeId)]) -> String {
    pairs
        .iter()
        .map(|(a, b)| format!("{a}->{b}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// Builds the graph, runs every command, and renders one line per report.
/// Loop lists are printed ascending so lines are easy to diff.
pub fn run_trace(text: &str, mode: Mode) -> Result<String, String> {
    let t = parse_trace(text)?;
    let g = PlanarMultigraph::from_parts(&t.vertices, &t.edges).map_err(|e| e.to_string())?;
    let weights = if t.weights.is_empty() { None } else { Some(&t.weights) };
    let (mut s, init) =
        ContractionStructure::new(&g, weights, mode).map_err(|e| e.to_string())?;
    let mut out = String::new();
    writeln!(
        out,
        "init loops=[{}] parallelisms=[{}]",
        fmt_ids(&init.loops),
        fmt_pairs(&init.parallelisms)
    )
    .expect("write to string");
    for e in t.ops {
        let rep = s.contract(e).map_err(|err| format!("contract {e}: {err}"))?;
        let mut loops = rep.loops.clone();
        loops.sort_unstable();
        writeln!(
            out,
            "contract {} survivor={} parallelisms=[{}] loops=[{}]",
            e,
            rep.survivor,
            fmt_pairs(&rep.parallelisms),
            fmt_ids(&loops)
        )
        .expect("write to string");
    }
    Ok(out)
}

/// Renders a graph plus a command list in the trace format: isolated
/// vertices first, edges by ascending id, then the commands.
pub fn format_trace(
    g: &PlanarMultigraph,
    weights: Option<&HashMap<EdgeId, Weight>>,
    ops: &[EdgeId],
) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", g.n(), g.m()).expect("write to string");
    let mut isolated: Vec<VertexId> = (0..g.n())
        .filter(|&vi| g.degree(vi) == 0)
        .map(|vi| g.vertex_id(vi))
        .collect();
    isolated.sort_unstable();
    for v in isolated {
        writeln!(out, "vertex {v}").expect("write to string");
    }
    let mut edges: Vec<(EdgeId, VertexId, VertexId)> = g
        .edge_recs()
        .iter()
        .map(|er| {
            let (u, v) = g.endpoints(er.id).expect("edge of the graph");
            (er.id, u, v)
        })
        .collect();
    edges.sort_unstable();
    for (id, u, v) in edges {
        match weights.and_then(|ws| ws.get(&id)) {
            Some(w) => writeln!(out, "{u} {v} {id} {w}").expect("write to string"),
            None => writeln!(out, "{u} {v} {id}").expect("write to string"),
        }
    }
    for e in ops {
        writeln!(out, "contract {e}").expect("write to string");
    }
    out
}

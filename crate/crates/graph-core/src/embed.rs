use std::collections::HashMap;

use crate::ids::{dart_edge, twin, Dart};
use crate::{semi_strict_bound, GraphError, PlanarMultigraph};

/// Produces an embedded copy of `g`. Supplied rotations are only validated
/// (per-component Euler counts); otherwise a combinatorial embedding is
/// constructed, or `NonPlanar` is returned.
///
/// Construction runs per biconnected block on the simplified graph: loops and
/// parallel copies are set aside, each block is embedded by iterative face
/// splitting, blocks are glued at cut vertices, and the removed edges are
/// reinserted next to their representatives.
pub fn embed(g: &PlanarMultigraph) -> Result<PlanarMultigraph, GraphError> {
    if g.is_embedded() {
        g.euler_check()?;
        return Ok(g.clone());
    }

    let m = g.m();
    let n = g.n();
    let mut in_residue = vec![true; m];
    let mut loops_at: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (ei, rec) in g.edge_recs().iter().enumerate() {
        if rec.u == rec.v {
            in_residue[ei] = false;
            loops_at[rec.u].push(ei);
        }
    }
    for l in loops_at.iter_mut() {
        l.sort_by_key(|&ei| g.edge_id(ei));
    }
    let mut dups_of: HashMap<usize, Vec<usize>> = HashMap::new();
    for ids in g.parallel_classes().into_values() {
        let rep = g.edge_index(ids[0]).unwrap();
        for id in &ids[1..] {
            let ei = g.edge_index(*id).unwrap();
            in_residue[ei] = false;
            dups_of.entry(rep).or_default().push(ei);
        }
    }

    let residue_m = in_residue.iter().filter(|&&k| k).count();
    if residue_m > semi_strict_bound(n) {
        return Err(GraphError::NonPlanar);
    }

    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n]; // (edge idx, other)
    for (ei, rec) in g.edge_recs().iter().enumerate() {
        if in_residue[ei] {
            adj[rec.u].push((ei, rec.v));
            adj[rec.v].push((ei, rec.u));
        }
    }

    let blocks = biconnected_blocks(n, &adj);

    // rotation contribution of each block at each of its vertices
    let mut rot: Vec<Vec<Dart>> = vec![Vec::new(); n];
    let mut order: Vec<usize> = (0..blocks.len()).collect();
    order.sort_by_key(|&b| blocks[b].iter().copied().min());
    for &b in &order {
        let blk = &blocks[b];
        if blk.len() == 1 {
            let rec = &g.edge_recs()[blk[0]];
            rot[rec.u].push(2 * blk[0]);
            rot[rec.v].push(2 * blk[0] + 1);
            continue;
        }
        // local numbering for the block
        let mut lv: HashMap<usize, usize> = HashMap::new();
        let mut back: Vec<usize> = Vec::new();
        let mut ledges = Vec::with_capacity(blk.len());
        for &ei in blk {
            let rec = &g.edge_recs()[ei];
            for x in [rec.u, rec.v] {
                if !lv.contains_key(&x) {
                    lv.insert(x, back.len());
                    back.push(x);
                }
            }
            ledges.push((lv[&rec.u], lv[&rec.v]));
        }
        let local = demoucron_block(back.len(), &ledges).ok_or(GraphError::NonPlanar)?;
        for (lvi, darts) in local.into_iter().enumerate() {
            let gv = back[lvi];
            for d in darts {
                rot[gv].push(2 * blk[dart_edge(d)] + (d & 1));
            }
        }
    }

    // reinsert parallels: copies nest around the representative, so their
    // cyclic order at one endpoint is the reverse of the other
    for r in rot.iter_mut() {
        let mut out = Vec::with_capacity(r.len());
        for &d in r.iter() {
            let ei = dart_edge(d);
            match dups_of.get(&ei) {
                None => out.push(d),
                Some(dups) => {
                    if d & 1 == 0 {
                        out.push(d);
                        out.extend(dups.iter().map(|&k| 2 * k));
                    } else {
                        out.extend(dups.iter().rev().map(|&k| 2 * k + 1));
                        out.push(d);
                    }
                }
            }
        }
        *r = out;
    }
    for (vi, ls) in loops_at.iter().enumerate() {
        for &ei in ls {
            rot[vi].push(2 * ei);
            rot[vi].push(2 * ei + 1);
        }
    }

    let verts = g.vertex_ids().to_vec();
    let edges = g
        .edge_recs()
        .iter()
        .map(|rec| (g.vertex_id(rec.u), g.vertex_id(rec.v), rec.id))
        .collect();
    let out = PlanarMultigraph::from_dart_rotations(verts, edges, rot)?;
    out.euler_check()?;
    Ok(out)
}

/// Edge partition into biconnected blocks (bridges are single-edge blocks).
fn biconnected_blocks(n: usize, adj: &[Vec<(usize, usize)>]) -> Vec<Vec<usize>> {
    struct Frame {
        v: usize,
        pe: usize,
        ci: usize,
    }
    let mut disc = vec![0usize; n];
    let mut low = vec![0usize; n];
    let mut time = 1usize;
    let mut estack: Vec<usize> = Vec::new();
    let mut blocks = Vec::new();
    for s in 0..n {
        if disc[s] != 0 {
            continue;
        }
        disc[s] = time;
        low[s] = time;
        time += 1;
        let mut stack = vec![Frame {
            v: s,
            pe: usize::MAX,
            ci: 0,
        }];
        while let Some(fr) = stack.last_mut() {
            if fr.ci < adj[fr.v].len() {
                let (k, w) = adj[fr.v][fr.ci];
                fr.ci += 1;
                if k == fr.pe {
                    continue;
                }
                if disc[w] == 0 {
                    estack.push(k);
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push(Frame {
                        v: w,
                        pe: k,
                        ci: 0,
                    });
                } else if disc[w] < disc[fr.v] {
                    estack.push(k);
                    if disc[w] < low[fr.v] {
                        low[fr.v] = disc[w];
                    }
                }
            } else {
                let done = stack.pop().unwrap();
                if let Some(par) = stack.last() {
                    if low[done.v] < low[par.v] {
                        let lv = low[done.v];
                        let pv = par.v;
                        low[pv] = lv;
                    }
                    if low[done.v] >= disc[par.v] {
                        let mut blk = Vec::new();
                        while let Some(k) = estack.pop() {
                            blk.push(k);
                            if k == done.pe {
                                break;
                            }
                        }
                        blocks.push(blk);
                    }
                }
            }
        }
    }
    blocks
}

/// Planar embedding of one simple biconnected graph by iterative face
/// splitting: keep a face set, repeatedly route a path of an unembedded
/// fragment through a face containing all its contacts. Returns per-vertex
/// rotations, or None when some fragment has no admissible face.
fn demoucron_block(n: usize, edges: &[(usize, usize)]) -> Option<Vec<Vec<Dart>>> {
    let m = edges.len();
    let dvert = |d: Dart| {
        let (a, b) = edges[dart_edge(d)];
        if d & 1 == 0 {
            a
        } else {
            b
        }
    };
    let dhead = |d: Dart| dvert(twin(d));
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (k, &(a, b)) in edges.iter().enumerate() {
        adj[a].push((k, b));
        adj[b].push((k, a));
    }

    // initial cycle via dfs back edge
    let (cyc_vs, cyc_es) = find_cycle(n, &adj)?;
    let mut faces: Vec<Vec<Dart>> = Vec::new();
    let mut walk = Vec::with_capacity(cyc_vs.len());
    for (i, &k) in cyc_es.iter().enumerate() {
        let from = cyc_vs[i];
        walk.push(if edges[k].0 == from { 2 * k } else { 2 * k + 1 });
    }
    faces.push(walk.iter().rev().map(|&d| twin(d)).collect());
    faces.push(walk);
    let mut emb_e = vec![false; m];
    let mut emb_v = vec![false; n];
    for &k in &cyc_es {
        emb_e[k] = true;
    }
    for &v in &cyc_vs {
        emb_v[v] = true;
    }
    let mut remaining = m - cyc_es.len();

    while remaining > 0 {
        // fragments: unembedded edges joined through unembedded vertices
        let mut dsu = Dsu::new(m);
        let mut seen_at: Vec<usize> = vec![usize::MAX; n];
        for k in 0..m {
            if emb_e[k] {
                continue;
            }
            for x in [edges[k].0, edges[k].1] {
                if emb_v[x] {
                    continue;
                }
                if seen_at[x] == usize::MAX {
                    seen_at[x] = k;
                } else {
                    dsu.union(seen_at[x], k);
                }
            }
        }
        let mut members: HashMap<usize, Vec<usize>> = HashMap::new();
        for k in 0..m {
            if !emb_e[k] {
                members.entry(dsu.find(k)).or_default().push(k);
            }
        }
        let mut frags: Vec<Vec<usize>> = members.into_values().collect();
        frags.sort_by_key(|f| f.iter().copied().min());

        let face_vsets: Vec<Vec<usize>> = faces
            .iter()
            .map(|w| {
                let mut vs: Vec<usize> = w.iter().map(|&d| dvert(d)).collect();
                vs.sort_unstable();
                vs
            })
            .collect();

        let mut best: Option<(usize, usize, usize)> = None; // (#admissible, frag, face)
        for (fi, frag) in frags.iter().enumerate() {
            let mut contacts: Vec<usize> = frag
                .iter()
                .flat_map(|&k| [edges[k].0, edges[k].1])
                .filter(|&x| emb_v[x])
                .collect();
            contacts.sort_unstable();
            contacts.dedup();
            debug_assert!(contacts.len() >= 2, "blocks have no cut vertices");
            let mut count = 0;
            let mut first = usize::MAX;
            for (fa, vs) in face_vsets.iter().enumerate() {
                if contacts.iter().all(|c| vs.binary_search(c).is_ok()) {
                    count += 1;
                    if first == usize::MAX {
                        first = fa;
                    }
                }
            }
            if count == 0 {
                return None;
            }
            if best.map_or(true, |(bc, _, _)| count < bc) {
                best = Some((count, fi, first));
            }
        }
        let (_, fi, face_idx) = best.unwrap();
        let frag = &frags[fi];

        // route one path of the fragment between two contacts
        let fadj: HashMap<usize, Vec<(usize, usize)>> = {
            let mut map: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
            for &k in frag {
                let (a, b) = edges[k];
                map.entry(a).or_default().push((k, b));
                map.entry(b).or_default().push((k, a));
            }
            map
        };
        let start = frag
            .iter()
            .flat_map(|&k| [edges[k].0, edges[k].1])
            .filter(|&x| emb_v[x])
            .min()
            .unwrap();
        let (pv, pe) = bfs_to_other_contact(start, &fadj, &emb_v);
        for &k in &pe {
            emb_e[k] = true;
        }
        remaining -= pe.len();
        for &v in &pv[1..pv.len() - 1] {
            emb_v[v] = true;
        }
        let deltas: Vec<Dart> = pe
            .iter()
            .zip(pv.iter())
            .map(|(&k, &from)| if edges[k].0 == from { 2 * k } else { 2 * k + 1 })
            .collect();

        let (a, b) = (pv[0], *pv.last().unwrap());
        let face = faces[face_idx].clone();
        let pos_a = face.iter().position(|&d| dhead(d) == a).unwrap();
        let pos_b = face.iter().position(|&d| dhead(d) == b).unwrap();
        let l = face.len();
        let seg = |from: usize, to: usize| {
            // darts strictly after `from`, through `to`, cyclically
            let mut out = Vec::new();
            let mut i = (from + 1) % l;
            loop {
                out.push(face[i]);
                if i == to {
                    break;
                }
                i = (i + 1) % l;
            }
            out
        };
        let mut fx = seg(pos_a, pos_b);
        fx.extend(deltas.iter().rev().map(|&d| twin(d)));
        let mut fy = seg(pos_b, pos_a);
        fy.extend(deltas.iter().copied());
        faces[face_idx] = fx;
        faces.push(fy);
    }

    // rotations out of the face system: consecutive face darts d, d2 mean d2
    // follows twin(d) in the rotation at their shared vertex
    let mut succ = vec![usize::MAX; 2 * m];
    for w in &faces {
        for i in 0..w.len() {
            succ[twin(w[i])] = w[(i + 1) % w.len()];
        }
    }
    debug_assert!(succ.iter().all(|&x| x != usize::MAX));
    let mut rot = Vec::with_capacity(n);
    for v in 0..n {
        let start = adj[v][0].0;
        let start = if edges[start].0 == v { 2 * start } else { 2 * start + 1 };
        let mut list = vec![start];
        let mut d = succ[start];
        while d != start {
            list.push(d);
            d = succ[d];
        }
        debug_assert_eq!(list.len(), adj[v].len());
        rot.push(list);
    }
    Some(rot)
}

fn find_cycle(n: usize, adj: &[Vec<(usize, usize)>]) -> Option<(Vec<usize>, Vec<usize>)> {
    let mut par_v = vec![usize::MAX; n];
    let mut par_e = vec![usize::MAX; n];
    let mut state = vec![0u8; n]; // 0 new, 1 open
    let mut stack = vec![(0usize, 0usize)];
    state[0] = 1;
    while let Some(&mut (v, ref mut ci)) = stack.last_mut() {
        if *ci >= adj[v].len() {
            stack.pop();
            continue;
        }
        let (k, w) = adj[v][*ci];
        *ci += 1;
        if k == par_e[v] {
            continue;
        }
        if state[w] == 0 {
            state[w] = 1;
            par_v[w] = v;
            par_e[w] = k;
            stack.push((w, 0));
        } else {
            // back edge w .. v: walk parents from v up to w
            let mut vs = vec![v];
            let mut es = Vec::new();
            let mut x = v;
            while x != w {
                es.push(par_e[x]);
                x = par_v[x];
                vs.push(x);
            }
            vs.reverse();
            es.reverse();
            // vs = [w, ..., v]; close with the back edge v -> w
            es.push(k);
            return Some((vs, es));
        }
    }
    None
}

/// BFS inside a fragment from embedded vertex `start` to any other embedded
/// vertex, passing only through unembedded interior vertices. Returns the
/// path vertices and edges.
fn bfs_to_other_contact(
    start: usize,
    fadj: &HashMap<usize, Vec<(usize, usize)>>,
    emb_v: &[bool],
) -> (Vec<usize>, Vec<usize>) {
    let mut prev: HashMap<usize, (usize, usize)> = HashMap::new(); // v -> (prior v, edge)
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(start);
    while let Some(v) = queue.pop_front() {
        for &(k, w) in fadj.get(&v).into_iter().flatten() {
            if w == start || prev.contains_key(&w) {
                continue;
            }
            prev.insert(w, (v, k));
            if emb_v[w] {
                let mut pv = vec![w];
                let mut pe = Vec::new();
                let mut x = w;
                while x != start {
                    let (p, e) = prev[&x];
                    pe.push(e);
                    pv.push(p);
                    x = p;
                }
                pv.reverse();
                pe.reverse();
                return (pv, pe);
            }
            queue.push_back(w);
        }
    }
    unreachable!("fragment has a second contact");
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let nx = self.parent[c];
            self.parent[c] = r;
            c = nx;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

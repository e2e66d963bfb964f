use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ids::{dart_edge, twin, Dart, EdgeId, VertexId};
use crate::PlanarMultigraph;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// side x side grid, embedded. Vertex (r, c) gets id r*side + c; horizontal
/// edges are numbered before vertical ones, row-major.
pub fn grid(side: usize) -> PlanarMultigraph {
    assert!(side >= 1);
    let vid = |r: usize, c: usize| VertexId((r * side + c) as u64);
    let mut edges = Vec::new();
    let mut hor = vec![vec![usize::MAX; side]; side];
    let mut ver = vec![vec![usize::MAX; side]; side];
    for r in 0..side {
        for c in 0..side.saturating_sub(1) {
            hor[r][c] = edges.len();
            edges.push((vid(r, c), vid(r, c + 1), EdgeId(edges.len() as u64)));
        }
    }
    for r in 0..side.saturating_sub(1) {
        for c in 0..side {
            ver[r][c] = edges.len();
            edges.push((vid(r, c), vid(r + 1, c), EdgeId(edges.len() as u64)));
        }
    }
    let verts: Vec<VertexId> = (0..side * side).map(|i| VertexId(i as u64)).collect();
    let mut order: Vec<Vec<Dart>> = vec![Vec::new(); side * side];
    for r in 0..side {
        for c in 0..side {
            let list = &mut order[r * side + c];
            // counterclockwise: east, north, west, south
            if c + 1 < side {
                list.push(2 * hor[r][c]);
            }
            if r > 0 {
                list.push(2 * ver[r - 1][c] + 1);
            }
            if c > 0 {
                list.push(2 * hor[r][c - 1] + 1);
            }
            if r + 1 < side {
                list.push(2 * ver[r][c]);
            }
        }
    }
    PlanarMultigraph::from_dart_rotations(verts, edges, order).expect("grid rotation is valid")
}

struct TriBuilder {
    edges: Vec<(u64, u64)>,
    succ: Vec<Dart>,
    pred: Vec<Dart>,
    faces: Vec<[Dart; 3]>,
    rep: Vec<Dart>,
}

impl TriBuilder {
    fn dart_vertex(&self, d: Dart) -> u64 {
        let (u, v) = self.edges[dart_edge(d)];
        if d & 1 == 0 {
            u
        } else {
            v
        }
    }

    fn add_edge(&mut self, u: u64, v: u64) -> usize {
        self.edges.push((u, v));
        self.succ.extend([0, 0]);
        self.pred.extend([0, 0]);
        self.edges.len() - 1
    }

    fn insert_after(&mut self, y: Dart, x: Dart) {
        let z = self.succ[y];
        self.succ[y] = x;
        self.succ[x] = z;
        self.pred[z] = x;
        self.pred[x] = y;
    }
}

/// Random maximal planar graph on n >= 3 vertices: repeatedly picks a face
/// uniformly and places the next vertex inside it. Every face is a triangle
/// throughout, so the result always has 3n - 6 edges.
pub fn random_triangulation(n: usize, seed: u64) -> PlanarMultigraph {
    assert!(n >= 3);
    let mut rng = seeded_rng(seed);
    let mut b = TriBuilder {
        edges: Vec::new(),
        succ: Vec::new(),
        pred: Vec::new(),
        faces: Vec::new(),
        rep: vec![0; n],
    };
    let e01 = b.add_edge(0, 1);
    let e12 = b.add_edge(1, 2);
    let e20 = b.add_edge(2, 0);
    // rotation at each corner is the 2-cycle of its two darts
    for (a, x, y) in [
        (0u64, 2 * e01, 2 * e20 + 1),
        (1, 2 * e12, 2 * e01 + 1),
        (2, 2 * e20, 2 * e12 + 1),
    ] {
        b.succ[x] = y;
        b.succ[y] = x;
        b.pred[x] = y;
        b.pred[y] = x;
        b.rep[a as usize] = x;
    }
    b.faces.push([2 * e01, 2 * e12, 2 * e20]);
    b.faces.push([2 * e12 + 1, 2 * e01 + 1, 2 * e20 + 1]);

    for v in 3..n as u64 {
        let fi = rng.gen_range(0..b.faces.len());
        let [p, q, r] = b.faces[fi];
        let (a, bb, c) = (b.dart_vertex(p), b.dart_vertex(q), b.dart_vertex(r));
        let ea = b.add_edge(a, v);
        let eb = b.add_edge(bb, v);
        let ec = b.add_edge(c, v);
        b.insert_after(twin(r), 2 * ea);
        b.insert_after(twin(p), 2 * eb);
        b.insert_after(twin(q), 2 * ec);
        let (va, vb, vc) = (2 * ea + 1, 2 * eb + 1, 2 * ec + 1);
        b.succ[va] = vc;
        b.succ[vc] = vb;
        b.succ[vb] = va;
        b.pred[vc] = va;
        b.pred[vb] = vc;
        b.pred[va] = vb;
        b.rep[v as usize] = va;
        b.faces[fi] = [p, 2 * eb, va];
        b.faces.push([q, 2 * ec, vb]);
        b.faces.push([r, 2 * ea, vc]);
    }

    let verts: Vec<VertexId> = (0..n as u64).map(VertexId).collect();
    let edges: Vec<(VertexId, VertexId, EdgeId)> = b
        .edges
        .iter()
        .enumerate()
        .map(|(i, &(u, v))| (VertexId(u), VertexId(v), EdgeId(i as u64)))
        .collect();
    let mut order: Vec<Vec<Dart>> = Vec::with_capacity(n);
    for v in 0..n {
        let start = b.rep[v];
        let mut list = vec![start];
        let mut d = b.succ[start];
        while d != start {
            list.push(d);
            d = b.succ[d];
        }
        order.push(list);
    }
    PlanarMultigraph::from_dart_rotations(verts, edges, order)
        .expect("triangulation rotation is valid")
}

/// Random planar graph: a triangulation with each edge independently kept
/// with probability 0.7. May be disconnected; edge ids stay sparse.
pub fn random_planar(n: usize, seed: u64) -> PlanarMultigraph {
    let tri = random_triangulation(n, seed);
    let mut rng = seeded_rng(seed ^ 0x9e37_79b9_7f4a_7c15);
    let keep: Vec<bool> = (0..tri.m()).map(|_| rng.gen_bool(0.7)).collect();
    let mut new_idx = vec![usize::MAX; tri.m()];
    let mut edges = Vec::new();
    for (ei, rec) in tri.edge_recs().iter().enumerate() {
        if keep[ei] {
            new_idx[ei] = edges.len();
            edges.push((tri.vertex_id(rec.u), tri.vertex_id(rec.v), rec.id));
        }
    }
    let verts = tri.vertex_ids().to_vec();
    let order: Vec<Vec<Dart>> = (0..tri.n())
        .map(|vi| {
            tri.darts_at(vi)
                .iter()
                .filter(|&&d| keep[dart_edge(d)])
                .map(|&d| 2 * new_idx[dart_edge(d)] + (d & 1))
                .collect()
        })
        .collect();
    PlanarMultigraph::from_dart_rotations(verts, edges, order)
        .expect("subset of a valid rotation stays valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_euler_and_counts() {
        for side in [1usize, 2, 3, 4, 7] {
            let g = grid(side);
            assert_eq!(g.n(), side * side);
            assert_eq!(g.m(), 2 * side * (side - 1));
            g.euler_check().unwrap();
        }
    }

    #[test]
    fn triangulation_is_maximal_planar() {
        for (n, seed) in [(3usize, 1u64), (4, 2), (10, 3), (50, 4), (200, 5)] {
            let g = random_triangulation(n, seed);
            assert_eq!(g.n(), n);
            assert_eq!(g.m(), 3 * n - 6);
            assert_eq!(g.simple_edge_count(), g.m(), "no parallels or loops");
            g.euler_check().unwrap();
            let faces = g.faces().unwrap();
            assert!(faces.walks.iter().all(|w| w.len() == 3));
        }
    }

    #[test]
    fn triangulation_is_deterministic() {
        let a = random_triangulation(40, 9);
        let b = random_triangulation(40, 9);
        assert_eq!(
            a.edge_recs().iter().map(|e| (e.u, e.v)).collect::<Vec<_>>(),
            b.edge_recs().iter().map(|e| (e.u, e.v)).collect::<Vec<_>>()
        );
    }

    #[test]
    fn random_planar_embeds() {
        for seed in 0..5 {
            let g = random_planar(60, seed);
            g.euler_check().unwrap();
            assert!(g.m() <= 3 * 60 - 6);
        }
    }
}

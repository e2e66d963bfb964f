//! Property tests: every layout tells the same story step for step, degree
//! arithmetic balances across each contraction, and class minima stay where
//! the weight order puts them.

use std::collections::HashMap;

use contract_ds::{ContractionStructure, Mode, StructureConfig};
use graph_core::{random_planar, seeded_rng, EdgeId, VertexId, Weight};
use proptest::prelude::*;
use rand::Rng;

fn forced(mode: Mode, n: usize) -> StructureConfig {
    let mut cfg = StructureConfig::for_mode(mode);
    if n > 16 {
        cfg.top_target = Some(16);
        if mode == Mode::ThreeLevel {
            cfg.sub_target = Some(6);
        }
    }
    cfg
}

fn weight_map(g: &graph_core::PlanarMultigraph, seed: u64) -> HashMap<EdgeId, Weight> {
    let mut rng = seeded_rng(seed);
    g.edge_recs().iter().map(|er| (er.id, rng.gen_range(1..5))).collect()
}

/// Connected components of the input, since generators may hand back a
/// forest of islands and contraction stops at one class per island.
fn component_count(g: &graph_core::PlanarMultigraph) -> usize {
    let mut parent: Vec<usize> = (0..g.n()).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            p[r] = p[p[r]];
            r = p[r];
        }
        r
    }
    for er in g.edge_recs() {
        let a = find(&mut parent, er.u);
        let b = find(&mut parent, er.v);
        parent[a] = b;
    }
    (0..g.n()).filter(|&i| find(&mut parent, i) == i).count()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, ..ProptestConfig::default() })]

    #[test]
    fn every_layout_reports_identically(
        n in 4usize..48,
        gseed in 0u64..500,
        pick_seed in 0u64..500,
        weighted in any::<bool>(),
    ) {
        let g = random_planar(n, gseed);
        let w = weighted.then(|| weight_map(&g, gseed ^ 0x5bd1));
        let (mut reference, init0) =
            ContractionStructure::new(&g, w.as_ref(), Mode::Naive).unwrap();
        let mut others = Vec::new();
        for mode in [Mode::TwoLevel, Mode::ThreeLevel] {
            let (s, init) =
                ContractionStructure::with_config(&g, w.as_ref(), forced(mode, n)).unwrap();
            prop_assert_eq!(&init.loops, &init0.loops);
            prop_assert_eq!(&init.parallelisms, &init0.parallelisms);
            others.push(s);
        }

        let mut rng = seeded_rng(pick_seed);
        let mut step = 0u32;
        loop {
            let live = reference.live_edges();
            if live.is_empty() {
                break;
            }
            let e = live[rng.gen_range(0..live.len())];
            let want = reference.contract(e).unwrap();
            for s in &mut others {
                let got = s.contract(e).unwrap();
                prop_assert_eq!(&got.survivor, &want.survivor);
                prop_assert_eq!(&got.parallelisms, &want.parallelisms);
                prop_assert_eq!(&got.loops, &want.loops);
            }
            if step % 4 == 0 {
                for s in &others {
                    prop_assert_eq!(s.live_vertices(), reference.live_vertices());
                    prop_assert_eq!(s.live_edges(), reference.live_edges());
                    prop_assert_eq!(s.simple_edges(), reference.simple_edges());
                    prop_assert_eq!(s.edge_classes(), reference.edge_classes());
                    s.check().unwrap();
                }
            }
            step += 1;
        }
        for s in &others {
            prop_assert_eq!(s.vertex_partition(), reference.vertex_partition());
            prop_assert_eq!(s.loop_edges(), reference.loop_edges());
            prop_assert_eq!(s.contracted_edges(), reference.contracted_edges());
            prop_assert_eq!(s.repeat_insertions(), 0);
            s.check().unwrap();
        }
    }

    #[test]
    fn degree_arithmetic_balances(
        n in 4usize..40,
        gseed in 500u64..900,
        pick_seed in 0u64..500,
    ) {
        let g = random_planar(n, gseed);
        let (mut s, _) =
            ContractionStructure::with_config(&g, None, forced(Mode::ThreeLevel, n)).unwrap();
        let mut rng = seeded_rng(pick_seed);
        loop {
            let live = s.live_edges();
            if live.is_empty() {
                break;
            }
            let e = live[rng.gen_range(0..live.len())];
            let before: HashMap<VertexId, usize> = s
                .live_vertices()
                .into_iter()
                .map(|v| (v, s.deg(v).unwrap()))
                .collect();
            let (pu, pv) = s.vertices(e).unwrap();
            let root = s.representative(e).unwrap();
            let rep = s.contract(e).unwrap();

            // The survivor inherits both endpoints' edges minus the
            // contracted class and one edge per merged duplicate pair.
            let merged = rep.parallelisms.len();
            prop_assert_eq!(
                s.deg(rep.survivor).unwrap(),
                before[&pu] + before[&pv] - 2 - merged,
            );

            // Each duplicate pair costs its shared neighbor exactly one
            // incident class.
            let mut lost: HashMap<VertexId, usize> = HashMap::new();
            for &(_, keeper) in &rep.parallelisms {
                let (a, b) = s.vertices(keeper).unwrap();
                let far = if a == rep.survivor { b } else { a };
                prop_assert_ne!(far, rep.survivor);
                *lost.entry(far).or_default() += 1;
            }
            for v in s.live_vertices() {
                if v == rep.survivor {
                    continue;
                }
                prop_assert_eq!(
                    s.deg(v).unwrap(),
                    before[&v] - lost.get(&v).copied().unwrap_or(0),
                );
            }

            // The contracted class root is retired and its other members
            // come back as loops.
            prop_assert!(s.contracted_edges().contains(&root));
            for l in &rep.loops {
                prop_assert!(s.loop_edges().contains(l));
            }
        }
        prop_assert_eq!(s.live_vertex_count(), component_count(&g));
        prop_assert!(s.live_edges().is_empty());
    }

    #[test]
    fn class_minimum_matches_recomputation(
        n in 4usize..40,
        gseed in 900u64..1300,
        pick_seed in 0u64..500,
    ) {
        let g = random_planar(n, gseed);
        let w = weight_map(&g, gseed ^ 0x94d0);
        let (mut s, _) =
            ContractionStructure::with_config(&g, Some(&w), forced(Mode::TwoLevel, n)).unwrap();
        let mut rng = seeded_rng(pick_seed);
        loop {
            for e in s.live_edges() {
                let class = s.parallel_class(e).unwrap();
                let by_weight = class
                    .iter()
                    .copied()
                    .min_by_key(|id| (w[id], *id))
                    .unwrap();
                prop_assert_eq!(s.min_weight_in_class(e).unwrap(), by_weight);
                prop_assert_eq!(s.representative(e).unwrap(), by_weight);
                prop_assert!(class.contains(&e));
            }
            let live = s.live_edges();
            if live.is_empty() {
                break;
            }
            let e = live[rng.gen_range(0..live.len())];
            s.contract(e).unwrap();
        }
    }
}

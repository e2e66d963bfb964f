//! Fixed scenarios with hand-checked reports, driven through every layout.

use std::collections::HashMap;

use contract_ds::{ContractError, ContractionStructure, InitReport, Mode, StructureConfig};
use graph_core::{grid, EdgeId, PlanarMultigraph, VertexId};

fn vid(v: u64) -> VertexId {
    VertexId(v)
}
fn eid(e: u64) -> EdgeId {
    EdgeId(e)
}

const MODES: [Mode; 3] = [Mode::Naive, Mode::TwoLevel, Mode::ThreeLevel];

fn build(
    verts: &[u64],
    edges: &[(u64, u64, u64)],
    weights: Option<&[(u64, i64)]>,
    mode: Mode,
) -> (ContractionStructure, InitReport) {
    let vs: Vec<VertexId> = verts.iter().map(|&v| vid(v)).collect();
    let es: Vec<(VertexId, VertexId, EdgeId)> =
        edges.iter().map(|&(u, v, e)| (vid(u), vid(v), eid(e))).collect();
    let g = PlanarMultigraph::from_parts(&vs, &es).unwrap();
    let w: Option<HashMap<EdgeId, i64>> =
        weights.map(|ws| ws.iter().map(|&(e, w)| (eid(e), w)).collect());
    ContractionStructure::new(&g, w.as_ref(), mode).unwrap()
}

#[test]
fn init_on_triangle_is_silent() {
    for mode in MODES {
        let (s, rep) = build(&[1, 2, 3], &[(1, 2, 12), (1, 3, 13), (2, 3, 23)], None, mode);
        assert_eq!(rep, InitReport::default());
        for v in [1, 2, 3] {
            assert_eq!(s.deg(vid(v)).unwrap(), 2);
        }
        s.check().unwrap();
    }
}

#[test]
fn init_reports_self_loops_and_parallel_groups() {
    for mode in MODES {
        let (s, rep) = build(
            &[1, 2],
            &[(2, 2, 7), (1, 2, 5), (1, 2, 3), (1, 1, 9)],
            None,
            mode,
        );
        assert_eq!(rep.loops, vec![eid(7), eid(9)]);
        assert_eq!(rep.parallelisms, vec![(eid(5), eid(3))]);
        assert_eq!(s.representative(eid(5)).unwrap(), eid(3));
        assert_eq!(s.parallel_class(eid(3)).unwrap(), vec![eid(3), eid(5)]);
        assert_eq!(s.deg(vid(1)).unwrap(), 1);
        s.check().unwrap();
    }
}

#[test]
fn triangle_contraction_sequence() {
    for mode in MODES {
        let (mut s, _) = build(&[1, 2, 3], &[(1, 2, 12), (1, 3, 13), (2, 3, 23)], None, mode);
        let r = s.contract(eid(12)).unwrap();
        assert_eq!(r.survivor, vid(2));
        assert_eq!(r.parallelisms, vec![(eid(13), eid(23))]);
        assert!(r.loops.is_empty());
        assert_eq!(s.edge(vid(2), vid(3)).unwrap(), Some(eid(23)));
        assert_eq!(s.deg(vid(2)).unwrap(), 1);
        assert_eq!(s.deg(vid(3)).unwrap(), 1);
        assert_eq!(s.vertices(eid(13)).unwrap(), (vid(2), vid(3)));
        assert_eq!(s.phi(vid(1)).unwrap(), vid(2));
        s.check().unwrap();

        let r = s.contract(eid(23)).unwrap();
        assert_eq!(r.survivor, vid(2));
        assert!(r.parallelisms.is_empty());
        assert_eq!(r.loops, vec![eid(13)]);
        assert_eq!(s.live_vertices(), vec![vid(2)]);
        assert!(s.live_edges().is_empty());
        s.check().unwrap();
    }
}

const SQUARE: [(u64, u64, u64); 4] = [(1, 2, 12), (2, 3, 23), (3, 4, 34), (4, 1, 41)];

#[test]
fn square_contraction_sequence() {
    for mode in MODES {
        let (mut s, _) = build(&[1, 2, 3, 4], &SQUARE, None, mode);
        let r = s.contract(eid(12)).unwrap();
        assert_eq!(r.survivor, vid(2));
        assert!(r.parallelisms.is_empty() && r.loops.is_empty());

        let r = s.contract(eid(23)).unwrap();
        assert_eq!(r.survivor, vid(2));
        assert_eq!(r.parallelisms, vec![(eid(34), eid(41))]);
        assert_eq!(s.representative(eid(34)).unwrap(), eid(41));

        // Contracting through a non-representative resolves to the root.
        let r = s.contract(eid(34)).unwrap();
        assert_eq!(r.survivor, vid(2));
        assert_eq!(r.loops, vec![eid(34)]);
        assert_eq!(s.contracted_edges(), vec![eid(12), eid(23), eid(41)]);
        assert_eq!(s.loop_edges(), vec![eid(34)]);
        s.check().unwrap();
    }
}

#[test]
fn weight_rule_redirects_parallelisms() {
    for mode in MODES {
        let (mut s, _) = build(
            &[1, 2, 3, 4],
            &SQUARE,
            Some(&[(12, 2), (23, 2), (34, 1), (41, 9)]),
            mode,
        );
        s.contract(eid(12)).unwrap();
        // Structurally the record would point at the survivor-side edge 41;
        // the lighter edge 34 wins instead.
        let r = s.contract(eid(23)).unwrap();
        assert_eq!(r.parallelisms, vec![(eid(41), eid(34))]);
        assert_eq!(s.representative(eid(41)).unwrap(), eid(34));
        assert_eq!(s.min_weight_in_class(eid(41)).unwrap(), eid(34));
        s.check().unwrap();
    }
}

#[test]
fn weighted_init_reports_follow_the_running_minimum() {
    for mode in MODES {
        let (mut s, rep) = build(
            &[1, 2],
            &[(1, 2, 1), (1, 2, 2), (1, 2, 3)],
            Some(&[(1, 2), (2, 5), (3, 1)]),
            mode,
        );
        assert_eq!(rep.parallelisms, vec![(eid(1), eid(3)), (eid(2), eid(1))]);
        assert_eq!(s.representative(eid(2)).unwrap(), eid(3));
        assert_eq!(s.min_weight_in_class(eid(2)).unwrap(), eid(3));
        let r = s.contract(eid(2)).unwrap();
        assert_eq!(r.loops, vec![eid(1), eid(2)]);
        s.check().unwrap();
    }
}

#[test]
fn k4_builds_a_three_way_class() {
    for mode in MODES {
        let (mut s, _) = build(
            &[1, 2, 3, 4],
            &[(1, 2, 12), (1, 3, 13), (1, 4, 14), (2, 3, 23), (2, 4, 24), (3, 4, 34)],
            None,
            mode,
        );
        let r = s.contract(eid(12)).unwrap();
        assert_eq!(r.survivor, vid(2));
        assert_eq!(r.parallelisms, vec![(eid(13), eid(23)), (eid(14), eid(24))]);
        let r = s.contract(eid(23)).unwrap();
        assert_eq!(r.survivor, vid(2));
        assert_eq!(r.loops, vec![eid(13)]);
        assert_eq!(r.parallelisms, vec![(eid(34), eid(24))]);
        assert_eq!(s.parallel_class(eid(14)).unwrap(), vec![eid(14), eid(24), eid(34)]);
        assert_eq!(s.representative(eid(34)).unwrap(), eid(24));
        s.check().unwrap();
    }
}

#[test]
fn contracting_a_class_root_reports_the_whole_tree() {
    for mode in MODES {
        let (mut s, rep) = build(
            &[1, 2],
            &[(1, 2, 1), (1, 2, 2), (1, 2, 3), (1, 2, 4)],
            None,
            mode,
        );
        assert_eq!(rep.parallelisms.len(), 3);
        let r = s.contract(eid(1)).unwrap();
        assert_eq!(r.loops, vec![eid(2), eid(3), eid(4)]);
        s.check().unwrap();
    }
}

#[test]
fn dead_arguments_are_rejected() {
    for mode in MODES {
        let (mut s, _) = build(&[1, 2, 3], &[(1, 2, 12), (1, 3, 13), (2, 3, 23)], None, mode);
        s.contract(eid(12)).unwrap();
        assert_eq!(s.contract(eid(12)), Err(ContractError::DeadEdge(eid(12))));
        assert_eq!(s.deg(vid(1)).unwrap_err(), ContractError::DeadVertex(vid(1)));
        assert_eq!(s.edge(vid(1), vid(3)).unwrap_err(), ContractError::DeadVertex(vid(1)));
        assert_eq!(s.contract(eid(99)), Err(ContractError::UnknownEdge(eid(99))));
        assert_eq!(s.min_weight_in_class(eid(13)), Err(ContractError::WeightsAbsent));
        assert_eq!(s.deg(vid(77)).unwrap_err(), ContractError::UnknownVertex(vid(77)));
    }
}

#[test]
fn missing_weight_is_reported_at_init() {
    let g = PlanarMultigraph::from_parts(
        &[],
        &[(vid(1), vid(2), eid(5)), (vid(2), vid(3), eid(6))],
    )
    .unwrap();
    let w: HashMap<EdgeId, i64> = [(eid(5), 1)].into_iter().collect();
    let err = ContractionStructure::new(&g, Some(&w), Mode::Naive).unwrap_err();
    assert_eq!(err, ContractError::WeightMissing(eid(6)));
}

#[test]
fn isolated_vertices_stay_detached_but_live() {
    for mode in MODES {
        let (mut s, _) = build(
            &[1, 2, 3, 9],
            &[(1, 2, 12), (1, 3, 13), (2, 3, 23)],
            None,
            mode,
        );
        assert_eq!(s.deg(vid(9)).unwrap(), 0);
        assert!(s.neighbors(vid(9)).unwrap().is_empty());
        assert_eq!(s.edge(vid(9), vid(1)).unwrap(), None);
        assert_eq!(s.phi(vid(9)).unwrap(), vid(9));
        s.contract(eid(12)).unwrap();
        s.contract(eid(23)).unwrap();
        assert_eq!(s.live_vertices(), vec![vid(2), vid(9)]);
        s.check().unwrap();
    }
}

#[test]
fn small_graphs_degrade_to_a_single_unit() {
    for mode in MODES {
        let (s, _) = build(&[1, 2, 3], &[(1, 2, 12), (1, 3, 13), (2, 3, 23)], None, mode);
        assert_eq!(s.requested_mode(), mode);
        assert_eq!(s.mode(), Mode::Naive);
        assert_eq!(s.unit_stats().len(), 1);
    }
}

fn grid_structure(side: usize, mode: Mode, top: usize) -> ContractionStructure {
    let g = grid(side);
    let mut cfg = StructureConfig::for_mode(mode);
    cfg.top_target = Some(top);
    ContractionStructure::with_config(&g, None, cfg).unwrap().0
}

#[test]
fn forced_layouts_take_effect_on_a_grid() {
    let two = grid_structure(8, Mode::TwoLevel, 16);
    assert_eq!(two.mode(), Mode::TwoLevel);
    let stats = two.unit_stats();
    assert!(stats.len() > 1, "grid splits into pieces");
    assert!(stats.iter().all(|u| !u.micro));
    two.check().unwrap();

    let three = grid_structure(8, Mode::ThreeLevel, 16);
    assert_eq!(three.mode(), Mode::ThreeLevel);
    let stats = three.unit_stats();
    assert_eq!(stats.iter().map(|u| u.level).max(), Some(2));
    three.check().unwrap();

    // A sub target no smaller than the top target drops the third level.
    let g = grid(8);
    let mut cfg = StructureConfig::for_mode(Mode::ThreeLevel);
    cfg.top_target = Some(16);
    cfg.sub_target = Some(16);
    let (s, _) = ContractionStructure::with_config(&g, None, cfg).unwrap();
    assert_eq!(s.mode(), Mode::TwoLevel);
}

#[test]
fn layered_grid_contracts_to_a_point() {
    for (mode, top) in [(Mode::TwoLevel, 16), (Mode::ThreeLevel, 16)] {
        let mut s = grid_structure(8, mode, top);
        let mut guard = 0;
        while s.live_vertex_count() > 1 {
            let live = s.live_edges();
            let e = live[guard % live.len()];
            s.contract(e).unwrap();
            guard += 1;
            if guard % 7 == 0 {
                s.check().unwrap();
            }
        }
        assert!(s.live_edges().is_empty());
        assert_eq!(s.repeat_insertions(), 0);
        s.check().unwrap();
    }
}

#[test]
fn undersized_targets_are_rejected() {
    let g = grid(6);
    let mut cfg = StructureConfig::for_mode(Mode::TwoLevel);
    cfg.top_target = Some(3);
    let err = ContractionStructure::with_config(&g, None, cfg).unwrap_err();
    assert_eq!(err, ContractError::InvalidTarget(3));
}

//! General unit against the rescanning model: exhaustive small graphs with
//! every operation sequence, then randomized planar graphs, then scripted
//! property runs.

mod common;

use common::{eid, pick_border, report_pairs, unit_input, valid_merges, vid, Snapshot};
use graph_core::{random_planar, seeded_rng, EdgeId, VertexId};
use merge_unit::{MergeUnit, UnitError};
use oracle::{MergeModel, OracleError};
use proptest::prelude::*;
use rand::Rng;

#[derive(Debug, PartialEq, Eq, Clone, Copy)]
enum ErrTag {
    Unknown,
    Identical,
    NotAllowed,
    Loop,
    Duplicate,
    Other,
}

fn unit_tag(e: UnitError) -> ErrTag {
    match e {
        UnitError::UnknownVertex(_) => ErrTag::Unknown,
        UnitError::IdenticalMerge(_) => ErrTag::Identical,
        UnitError::MergeNotAllowed(..) => ErrTag::NotAllowed,
        UnitError::LoopInsert(_) => ErrTag::Loop,
        UnitError::DuplicateEdge(_) => ErrTag::Duplicate,
        _ => ErrTag::Other,
    }
}

fn model_tag(e: OracleError) -> ErrTag {
    match e {
        OracleError::UnknownVertex(_) => ErrTag::Unknown,
        OracleError::IdenticalMerge(_) => ErrTag::Identical,
        OracleError::MergeNotAllowed(..) => ErrTag::NotAllowed,
        OracleError::LoopInsert(_) => ErrTag::Loop,
        OracleError::DuplicateEdge(_) => ErrTag::Duplicate,
        _ => ErrTag::Other,
    }
}

fn check_merge_step(
    unit: &mut MergeUnit,
    model: &mut MergeModel,
    u: VertexId,
    v: VertexId,
) -> bool {
    match (unit.merge(u, v), model.merge(u, v)) {
        (Ok(ru), Ok(rm)) => {
            let (paras, borders) = report_pairs(&ru);
            assert_eq!(paras, rm.parallelisms, "parallelisms differ after merge({u},{v})");
            assert_eq!(borders, rm.border_edges, "border edges differ after merge({u},{v})");
            assert_eq!(ru.kept, Some(model.phi(u).unwrap()), "kept vertex differs");
            assert_eq!(Snapshot::of_general(unit), Snapshot::of_model(model));
            unit.check_invariants().unwrap();
            model.check_invariants().unwrap();
            true
        }
        (Err(eu), Err(em)) => {
            assert_eq!(unit_tag(eu), model_tag(em), "error kinds differ on merge({u},{v})");
            false
        }
        (a, b) => panic!("validity disagreement on merge({u},{v}): {a:?} vs {b:?}"),
    }
}

fn check_insert_step(
    unit: &mut MergeUnit,
    model: &mut MergeModel,
    e: EdgeId,
    x: VertexId,
    y: VertexId,
) -> bool {
    match (unit.insert_edge(e, x, y), model.insert_edge(e, x, y)) {
        (Ok(ru), Ok(rm)) => {
            let (paras, borders) = report_pairs(&ru);
            assert_eq!(paras, rm.parallelisms, "parallelisms differ after insert {e}");
            assert_eq!(borders, rm.border_edges, "border edges differ after insert {e}");
            assert_eq!(ru.kept, None);
            assert_eq!(Snapshot::of_general(unit), Snapshot::of_model(model));
            unit.check_invariants().unwrap();
            model.check_invariants().unwrap();
            true
        }
        (Err(eu), Err(em)) => {
            assert_eq!(unit_tag(eu), model_tag(em), "error kinds differ on insert {e}");
            false
        }
        (a, b) => panic!("validity disagreement on insert {e}=({x},{y}): {a:?} vs {b:?}"),
    }
}

/// Every labeled graph on four vertices, every independent border set,
/// every merge sequence, with one optional insertion branched in at each
/// step. Each branch compares reports, state, and error kinds.
#[test]
fn exhaustive_four_vertex_sequences_match_the_model() {
    let pairs = [(1u64, 2u64), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];
    let verts: Vec<VertexId> = (1..=4).map(vid).collect();
    let mut steps = 0u64;
    for mask in 0u32..64 {
        let edges: Vec<(EdgeId, VertexId, VertexId)> = pairs
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask & (1 << i) != 0)
            .map(|(_, &(u, v))| (eid(10 * u + v), vid(u), vid(v)))
            .collect();
        for bmask in 0u32..16 {
            let border: Vec<VertexId> =
                (0..4).filter(|i| bmask & (1 << i) != 0).map(|i| vid(i + 1)).collect();
            let internal = edges
                .iter()
                .any(|(_, u, v)| border.contains(u) && border.contains(v));
            let unit = MergeUnit::init(&verts, &border, &edges);
            let model = MergeModel::init(&verts, &border, &edges);
            if internal {
                assert!(matches!(unit, Err(UnitError::BorderEdge { .. })));
                assert!(matches!(model, Err(OracleError::BorderEdge { .. })));
                continue;
            }
            dfs(&unit.unwrap(), &model.unwrap(), 100, 1, &mut steps);
        }
    }
    assert!(steps > 10_000, "exhaustive walk looks truncated: {steps} steps");
}

fn dfs(unit: &MergeUnit, model: &MergeModel, fresh: u64, inserts_left: u32, steps: &mut u64) {
    let cur = unit.current_vertices();
    for i in 0..cur.len() {
        for j in i + 1..cur.len() {
            let (u, v) = (cur[i], cur[j]);
            let mut u2 = unit.clone();
            let mut m2 = model.clone();
            *steps += 1;
            if check_merge_step(&mut u2, &mut m2, u, v) {
                dfs(&u2, &m2, fresh, inserts_left, steps);
            }
            if inserts_left > 0 {
                let mut u2 = unit.clone();
                let mut m2 = model.clone();
                *steps += 1;
                if check_insert_step(&mut u2, &mut m2, eid(fresh), u, v) {
                    dfs(&u2, &m2, fresh + 1, inserts_left - 1, steps);
                }
            }
        }
    }
}

/// Random planar graphs up to twelve vertices with mixed merge and insert
/// sequences driven to exhaustion.
#[test]
fn random_planar_sequences_match_the_model() {
    for seed in 0..40u64 {
        let n = 5 + (seed as usize) % 8;
        let g = random_planar(n, seed * 7 + 1);
        let (verts, edges) = unit_input(&g);
        let mut rng = seeded_rng(seed ^ 0x00c0_ffee);
        let border = pick_border(&verts, &edges, &mut rng);
        let mut unit = MergeUnit::init(&verts, &border, &edges).unwrap();
        let mut model = MergeModel::init(&verts, &border, &edges).unwrap();
        let mut fresh = 1000u64;
        for _ in 0..4 * n {
            let snap = Snapshot::of_general(&unit);
            if snap.current.len() <= 1 {
                break;
            }
            let merges = valid_merges(&snap);
            if !merges.is_empty() && rng.gen_bool(0.7) {
                let &(u, v) = &merges[rng.gen_range(0..merges.len())];
                check_merge_step(&mut unit, &mut model, u, v);
            } else {
                let x = snap.current[rng.gen_range(0..snap.current.len())];
                let y = snap.current[rng.gen_range(0..snap.current.len())];
                if x == y {
                    continue;
                }
                check_insert_step(&mut unit, &mut model, eid(fresh), x, y);
                fresh += 1;
            }
        }
        let c = unit.counters();
        assert!(c.fresh_insertions <= c.total_insertions);
        assert!(c.max_edge_updates <= unit.update_cap());
        assert_eq!(unit.repeat_insertions(), 0);
    }
}

/// Both sides refuse the same inputs for the same reasons.
#[test]
fn rejections_agree_with_the_model() {
    let verts = [vid(1), vid(2), vid(3), vid(4)];
    let border = [vid(1)];
    let edges = [(eid(12), vid(1), vid(2)), (eid(23), vid(2), vid(3))];
    let mut unit = MergeUnit::init(&verts, &border, &edges).unwrap();
    let mut model = MergeModel::init(&verts, &border, &edges).unwrap();
    let probes: [(&str, UnitError, OracleError); 6] = [
        ("merge unknown", unit.merge(vid(9), vid(1)).unwrap_err(), model.merge(vid(9), vid(1)).unwrap_err()),
        ("merge self", unit.merge(vid(2), vid(2)).unwrap_err(), model.merge(vid(2), vid(2)).unwrap_err()),
        ("merge apart", unit.merge(vid(1), vid(3)).unwrap_err(), model.merge(vid(1), vid(3)).unwrap_err()),
        ("insert unknown", unit.insert_edge(eid(7), vid(9), vid(1)).unwrap_err(), model.insert_edge(eid(7), vid(9), vid(1)).unwrap_err()),
        ("insert loop", unit.insert_edge(eid(7), vid(3), vid(3)).unwrap_err(), model.insert_edge(eid(7), vid(3), vid(3)).unwrap_err()),
        ("insert live id", unit.insert_edge(eid(23), vid(1), vid(4)).unwrap_err(), model.insert_edge(eid(23), vid(1), vid(4)).unwrap_err()),
    ];
    for (what, eu, em) in probes {
        assert_eq!(unit_tag(eu), model_tag(em), "{what}");
    }
    assert_eq!(Snapshot::of_general(&unit), Snapshot::of_model(&model));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// Scripted random walks: the script picks among the currently valid
    /// operations, so shrinking yields a minimal failing sequence.
    #[test]
    fn scripted_walks_match_the_model(
        n in 4usize..=10,
        seed in 0u64..(1 << 48),
        script in proptest::collection::vec(0u16..u16::MAX, 1..40),
    ) {
        let g = random_planar(n, seed);
        let (verts, edges) = unit_input(&g);
        let mut rng = seeded_rng(seed.wrapping_mul(0x9e37_79b9));
        let border = pick_border(&verts, &edges, &mut rng);
        let mut unit = MergeUnit::init(&verts, &border, &edges).unwrap();
        let mut model = MergeModel::init(&verts, &border, &edges).unwrap();
        let mut fresh = 5000u64;
        for &w in &script {
            let snap = Snapshot::of_general(&unit);
            if snap.current.len() <= 1 {
                break;
            }
            let merges = valid_merges(&snap);
            // Low bits pick the op, the high bit mixes in insertions.
            let do_insert = w & 0x8000 != 0 || merges.is_empty();
            if do_insert {
                let k = snap.current.len();
                let x = snap.current[(w as usize) % k];
                let y = snap.current[(w as usize / k) % k];
                if x != y {
                    check_insert_step(&mut unit, &mut model, eid(fresh), x, y);
                    fresh += 1;
                }
            } else {
                let (u, v) = merges[(w as usize) % merges.len()];
                check_merge_step(&mut unit, &mut model, u, v);
            }
        }
        unit.check_invariants().unwrap();
    }
}

//! The memoized micro unit must be indistinguishable from the general unit
//! on every instance below its threshold, including across table reuse and
//! concurrent access.

mod common;

use std::sync::Arc;

use common::{eid, pick_border, unit_input, valid_merges, vid, Snapshot};
use graph_core::{random_planar, seeded_rng, EdgeId, VertexId};
use merge_unit::{MemoTable, MergeUnit, MicroUnit};
use rand::Rng;

fn pairs_of(t: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for i in 1..=t {
        for j in i + 1..=t {
            out.push((i, j));
        }
    }
    out
}

fn lockstep_merge(micro: &mut MicroUnit, gen: &mut MergeUnit, u: VertexId, v: VertexId) -> bool {
    let rm = micro.merge(u, v);
    let rg = gen.merge(u, v);
    assert_eq!(rm, rg, "merge({u},{v}) diverged");
    if rm.is_err() {
        return false;
    }
    assert_eq!(Snapshot::of_micro(micro), Snapshot::of_general(gen));
    micro.check_invariants().unwrap();
    gen.check_invariants().unwrap();
    true
}

fn dfs(micro: &MicroUnit, gen: &MergeUnit, steps: &mut u64) {
    let cur = gen.current_vertices();
    for i in 0..cur.len() {
        for j in i + 1..cur.len() {
            let mut m2 = micro.clone();
            let mut g2 = gen.clone();
            *steps += 1;
            if lockstep_merge(&mut m2, &mut g2, cur[i], cur[j]) {
                dfs(&m2, &g2, steps);
            }
        }
    }
}

fn sweep(table: &Arc<MemoTable>, t_lo: u64, t_hi: u64, base: u64) -> u64 {
    let mut steps = 0u64;
    for t in t_lo..=t_hi {
        let pairs = pairs_of(t);
        let verts: Vec<VertexId> = (base + 1..=base + t).map(vid).collect();
        let border_masks: Vec<u32> = if t <= 4 {
            (0..1u32 << t).collect()
        } else {
            vec![0b00000, 0b00001, 0b00101]
        };
        for mask in 0u32..1 << pairs.len() {
            let edges: Vec<(EdgeId, VertexId, VertexId)> = pairs
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask & (1 << i) != 0)
                .map(|(_, &(u, v))| (eid(10 * u + v), vid(base + u), vid(base + v)))
                .collect();
            for &bmask in &border_masks {
                let border: Vec<VertexId> = (0..t)
                    .filter(|i| bmask & (1 << i) != 0)
                    .map(|i| vid(base + i + 1))
                    .collect();
                let internal = edges
                    .iter()
                    .any(|(_, u, v)| border.contains(u) && border.contains(v));
                let micro = MicroUnit::init(table.clone(), &verts, &border, &edges);
                let gen = MergeUnit::init(&verts, &border, &edges);
                if internal {
                    assert_eq!(micro.unwrap_err(), gen.unwrap_err());
                    continue;
                }
                dfs(&micro.unwrap(), &gen.unwrap(), &mut steps);
            }
        }
    }
    steps
}

/// All graphs on up to four vertices with every border set and every merge
/// sequence, plus all five-vertex graphs with a few border sets. A second
/// sweep under shifted labels maps to the same canonical shapes, so it must
/// be answered entirely from the table filled by the first.
#[test]
fn exhaustive_small_instances_match_the_general_unit() {
    let table = Arc::new(MemoTable::new(12, 1_000_000));
    let steps = sweep(&table, 2, 5, 0);
    assert!(steps > 50_000, "exhaustive walk looks truncated: {steps} steps");
    assert_eq!(table.hits(), 0);
    assert!(!table.is_empty());

    let misses_first = table.misses();
    sweep(&table, 2, 4, 100);
    assert_eq!(table.misses(), misses_first, "relabeled sweep failed to reuse entries");
    assert!(table.hits() > 0, "relabeled sweep never hit the table");
}

/// Random instances at six to twelve vertices. Each seed gets a private
/// table; replaying the identical run must come back entirely from memory.
#[test]
fn random_instances_replay_from_the_table() {
    for seed in 0..24u64 {
        let n = 6 + (seed as usize) % 7;
        let g = random_planar(n, seed * 13 + 5);
        let (verts, edges) = unit_input(&g);
        let mut rng = seeded_rng(seed ^ 0x5eed);
        let border = pick_border(&verts, &edges, &mut rng);
        let table = Arc::new(MemoTable::default());
        let mut micro = MicroUnit::init(table.clone(), &verts, &border, &edges).unwrap();
        let mut gen = MergeUnit::init(&verts, &border, &edges).unwrap();
        let mut ops: Vec<(VertexId, VertexId)> = Vec::new();
        let mut reports = Vec::new();
        for _ in 0..3 * n {
            let snap = Snapshot::of_general(&gen);
            let merges = valid_merges(&snap);
            if merges.is_empty() {
                break;
            }
            let (u, v) = merges[rng.gen_range(0..merges.len())];
            let rm = micro.merge(u, v).unwrap();
            let rg = gen.merge(u, v).unwrap();
            assert_eq!(rm, rg);
            assert_eq!(Snapshot::of_micro(&micro), Snapshot::of_general(&gen));
            ops.push((u, v));
            reports.push(rm);
        }
        micro.check_invariants().unwrap();
        assert_eq!(table.misses(), ops.len() as u64);
        assert_eq!(table.hits(), 0);

        let mut replay = MicroUnit::init(table.clone(), &verts, &border, &edges).unwrap();
        for (&(u, v), want) in ops.iter().zip(&reports) {
            let got = replay.merge(u, v).unwrap();
            assert_eq!(&got, want, "replay diverged at merge({u},{v})");
        }
        assert_eq!(table.hits(), ops.len() as u64, "replay was not served from the table");
        assert_eq!(table.misses(), ops.len() as u64);
        assert_eq!(Snapshot::of_micro(&replay), Snapshot::of_micro(&micro));
    }
}

/// Four threads run the same canonical shape under different labels against
/// one table. Races on publish must never corrupt anyone's answers.
#[test]
fn concurrent_threads_share_one_table_safely() {
    let table = Arc::new(MemoTable::default());
    let shape: Vec<(u64, u64)> = vec![(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 6), (1, 3), (3, 5)];
    std::thread::scope(|scope| {
        for i in 0..4u64 {
            let table = table.clone();
            let shape = shape.clone();
            scope.spawn(move || {
                let base = 1000 * i;
                let verts: Vec<VertexId> = (1..=6).map(|r| vid(base + r)).collect();
                let border = [vid(base + 2), vid(base + 5)];
                let edges: Vec<(EdgeId, VertexId, VertexId)> = shape
                    .iter()
                    .map(|&(u, v)| (eid(base + 10 * u + v), vid(base + u), vid(base + v)))
                    .collect();
                for round in 0..8u64 {
                    let mut micro =
                        MicroUnit::init(table.clone(), &verts, &border, &edges).unwrap();
                    let mut gen = MergeUnit::init(&verts, &border, &edges).unwrap();
                    let mut rng = seeded_rng(round);
                    loop {
                        let snap = Snapshot::of_general(&gen);
                        let merges = valid_merges(&snap);
                        if merges.is_empty() {
                            break;
                        }
                        let (u, v) = merges[rng.gen_range(0..merges.len())];
                        assert!(lockstep_merge(&mut micro, &mut gen, u, v));
                    }
                }
            });
        }
    });
    assert!(table.hits() > 0);
    assert_eq!(table.overflow_skips(), 0);
}

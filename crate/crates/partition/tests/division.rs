//! Division invariants on the graph families the structure is built for,
//! with boundaries recomputed by brute force as a second route.

use std::collections::HashSet;

use graph_core::{grid, random_planar, reduce_degree, EdgeId, PlanarMultigraph, VertexId};
use partition::{nested_division, nested_division_with, r_division, NestedConfig, PartitionError, RDivision};
use proptest::prelude::*;

fn vid(x: u64) -> VertexId {
    VertexId(x)
}

fn path(n: u64) -> PlanarMultigraph {
    let edges: Vec<(VertexId, VertexId, EdgeId)> =
        (1..n).map(|i| (vid(i), vid(i + 1), EdgeId(i))).collect();
    PlanarMultigraph::from_parts(&[], &edges).unwrap()
}

fn two_triangles() -> PlanarMultigraph {
    let edges = [
        (vid(1), vid(2), EdgeId(12)),
        (vid(1), vid(3), EdgeId(13)),
        (vid(2), vid(3), EdgeId(23)),
        (vid(4), vid(5), EdgeId(45)),
        (vid(4), vid(6), EdgeId(46)),
        (vid(5), vid(6), EdgeId(56)),
    ];
    PlanarMultigraph::from_parts(&[], &edges).unwrap()
}

/// Boundary by the incidence definition, scanning every edge of the host.
fn brute_boundaries(g: &PlanarMultigraph, div: &RDivision) {
    for p in &div.pieces {
        let inside: HashSet<EdgeId> = p.edges.iter().copied().collect();
        let mut expect: Vec<VertexId> = p
            .vertices
            .iter()
            .copied()
            .filter(|&v| {
                g.edge_recs().iter().any(|rec| {
                    !inside.contains(&rec.id)
                        && (g.vertex_id(rec.u) == v || g.vertex_id(rec.v) == v)
                })
            })
            .collect();
        expect.sort_unstable();
        assert_eq!(expect, p.boundary);
    }
}

#[test]
fn a_graph_that_fits_is_a_single_piece() {
    let g = path(5);
    let div = r_division(&g, 8, 8).unwrap();
    assert_eq!(div.pieces.len(), 1);
    assert!(div.pieces[0].boundary.is_empty());
    assert_eq!(div.pieces[0].vertices.len(), 5);
    div.check(&g).unwrap();
}

#[test]
fn grid_pieces_meet_the_bounds() {
    let g = reduce_degree(&grid(16)).unwrap().reduced;
    let div = r_division(&g, 64, 8).unwrap();
    assert!(div.pieces.len() > 1);
    div.check(&g).unwrap();
    brute_boundaries(&g, &div);
    let bound = (8.0 * g.n() as f64 / 8.0).ceil() as usize;
    assert!(div.total_boundary() <= bound, "total boundary {} over {bound}", div.total_boundary());
}

#[test]
fn path_pieces_keep_boundaries_of_at_most_two() {
    let g = path(1000);
    let div = r_division(&g, 100, 8).unwrap();
    div.check(&g).unwrap();
    assert!(div.pieces.len() <= 80, "{} pieces", div.pieces.len());
    for p in &div.pieces {
        assert!(p.boundary.len() <= 2);
    }
}

#[test]
fn components_are_divided_independently() {
    let g = two_triangles();
    let div = r_division(&g, 8, 8).unwrap();
    assert_eq!(div.pieces.len(), 2);
    for p in &div.pieces {
        assert_eq!(p.edges.len(), 3);
        assert!(p.boundary.is_empty());
    }
    div.check(&g).unwrap();
}

#[test]
fn invalid_inputs_are_rejected() {
    let g = path(6);
    assert_eq!(r_division(&g, 3, 8).unwrap_err(), PartitionError::TargetTooSmall(3));

    let looped = PlanarMultigraph::from_parts(&[], &[(vid(1), vid(1), EdgeId(7))]).unwrap();
    assert_eq!(
        r_division(&looped, 8, 8).unwrap_err(),
        PartitionError::NotSimple { edge: EdgeId(7) }
    );

    let doubled = PlanarMultigraph::from_parts(
        &[],
        &[(vid(1), vid(2), EdgeId(1)), (vid(2), vid(1), EdgeId(2))],
    )
    .unwrap();
    assert_eq!(
        r_division(&doubled, 8, 8).unwrap_err(),
        PartitionError::NotSimple { edge: EdgeId(2) }
    );
}

#[test]
fn random_planar_divisions_hold_their_invariants() {
    for seed in 0..25u64 {
        let n = 10 + (seed as usize * 11) % 250;
        let g0 = random_planar(n, seed);
        let g = reduce_degree(&g0).unwrap().reduced;
        for r in [4usize, 16, 64] {
            let div = r_division(&g, r, 8).unwrap();
            div.check(&g).unwrap_or_else(|e| panic!("seed {seed} r {r}: {e}"));
            brute_boundaries(&g, &div);
            let again = r_division(&g, r, 8).unwrap();
            assert_eq!(div.dump(), again.dump(), "seed {seed} r {r} not deterministic");
        }
    }
}

#[test]
fn small_nested_division_degenerates_to_one_piece_per_level() {
    let g = path(16);
    let nd = nested_division(&g).unwrap();
    assert_eq!(nd.top.pieces.len(), 1);
    assert_eq!(nd.sub.len(), 1);
    assert_eq!(nd.sub[0].pieces.len(), 1);
    assert!(nd.top.pieces[0].boundary.is_empty());
    assert!(nd.sub[0].pieces[0].boundary.is_empty());
    nd.check(&g).unwrap();
}

#[test]
fn grid_nested_division_has_two_genuine_levels() {
    let g = reduce_degree(&grid(32)).unwrap().reduced;
    let nd = nested_division(&g).unwrap();
    assert!(nd.top.pieces.len() > 1, "top level did not split");
    assert!(
        nd.sub.iter().any(|d| d.pieces.len() > 1),
        "no sub-division split its piece"
    );
    assert!(nd.r2 < nd.r1);
    nd.check(&g).unwrap();
    nd.check_piece_cap(3).unwrap();
}

#[test]
fn nested_division_respects_components() {
    let g = two_triangles();
    let nd = nested_division(&g).unwrap();
    assert_eq!(nd.top.pieces.len(), 2);
    nd.check(&g).unwrap();
}

#[test]
fn explicit_targets_override_the_computed_ones() {
    let g = path(200);
    let cfg = NestedConfig { r1: Some(25), r2: Some(5), ..NestedConfig::default() };
    let nd = nested_division_with(&g, cfg).unwrap();
    assert_eq!((nd.r1, nd.r2), (25, 5));
    assert!(nd.top.pieces.len() > 1);
    assert!(nd.sub.iter().any(|d| d.pieces.len() > 1));
    nd.check(&g).unwrap();

    let bad = NestedConfig { r2: Some(2), ..NestedConfig::default() };
    assert_eq!(
        nested_division_with(&g, bad).unwrap_err(),
        PartitionError::TargetTooSmall(2)
    );
}

#[test]
fn division_dump_is_frozen() {
    let g = path(24);
    let div = r_division(&g, 4, 8).unwrap();
    div.check(&g).unwrap();
    assert_eq!(
        div.dump(),
        "r-division r=4 slack=8 pieces=4\n\
         piece 0: edges 1 2 3 4 5; boundary 6\n\
         piece 1: edges 6 7 8 9 10 11; boundary 6 12\n\
         piece 2: edges 12 13 14 15 16 17; boundary 12 18\n\
         piece 3: edges 18 19 20 21 22 23; boundary 18\n"
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn any_reduced_planar_graph_divides_cleanly(
        n in 8usize..120,
        seed in 0u64..(1 << 40),
        r in 4usize..=32,
    ) {
        let g = reduce_degree(&random_planar(n, seed)).unwrap().reduced;
        let div = r_division(&g, r, 8).unwrap();
        prop_assert!(div.check(&g).is_ok());
        let covered: usize = div.pieces.iter().map(|p| p.edges.len()).sum();
        prop_assert_eq!(covered, g.m());
    }
}

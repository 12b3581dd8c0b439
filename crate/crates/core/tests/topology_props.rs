use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use realcubic::atlas::{build_atlas, GraphKind, VertexId};
use realcubic::ramified::{add_unknotted_handle, handle_counts};
use realcubic::topology::{
    apply_morse, derivation, descriptor_invariants, propagate, propagate_in_order, MorseEvent,
    RealLocusDescriptor, TopologyError,
};
use realcubic::wall_crossing::r_wall_verdicts;

fn random_topological_order(atlas: &realcubic::atlas::Atlas, seed: u64) -> Vec<VertexId> {
    let mut rng = StdRng::seed_from_u64(seed);
    let parents: Vec<(VertexId, Option<VertexId>)> = atlas
        .vertices
        .iter()
        .map(|v| (v.id, derivation(atlas, v.id).unwrap().source()))
        .collect();
    let mut done = BTreeSet::new();
    let mut order = Vec::new();
    while order.len() < parents.len() {
        let ready: Vec<VertexId> = parents
            .iter()
            .filter(|(id, p)| !done.contains(id) && p.is_none_or(|p| done.contains(&p)))
            .map(|(id, _)| *id)
            .collect();
        let pick = ready[rng.gen_range(0..ready.len())];
        done.insert(pick);
        order.push(pick);
    }
    order
}

#[test]
fn propagation_is_order_independent() {
    let atlas = build_atlas(GraphKind::K4);
    let verdicts = r_wall_verdicts(&atlas, 4).unwrap();
    let reference = propagate(&atlas, &verdicts).unwrap();
    for seed in 0..50 {
        let order = random_topological_order(&atlas, seed);
        assert_eq!(
            propagate_in_order(&atlas, &verdicts, &order).unwrap(),
            reference,
            "seed {seed}"
        );
    }
}

#[test]
fn order_must_respect_derivations() {
    let atlas = build_atlas(GraphKind::K4);
    let verdicts = r_wall_verdicts(&atlas, 4).unwrap();
    let mut order = random_topological_order(&atlas, 7);
    order.reverse();
    assert!(matches!(
        propagate_in_order(&atlas, &verdicts, &order),
        Err(TopologyError::BadOrder(..))
    ));
}

#[test]
fn justification_chains_reach_the_base() {
    let atlas = build_atlas(GraphKind::K4);
    let verdicts = r_wall_verdicts(&atlas, 4).unwrap();
    for (id, a) in propagate(&atlas, &verdicts).unwrap() {
        let mut depth = 1;
        let mut cur = id;
        while let Some(p) = derivation(&atlas, cur).unwrap().source() {
            depth += 1;
            cur = p;
        }
        assert_eq!(cur, VertexId::principal(0, 0));
        assert_eq!(a.justification.len(), depth, "{id}");
    }
}

#[test]
fn fourfold_coordinates_round_trip() {
    for i in 0..=10 {
        for j in 0..=10 {
            let inv = descriptor_invariants(&RealLocusDescriptor::fourfold(i, j)).unwrap();
            assert_eq!((inv.i, inv.j), (i64::from(i), i64::from(j)));
            assert_eq!(inv.r, 11 - inv.i + inv.j);
            assert_eq!(inv.d, 11 - inv.i - inv.j);
        }
    }
}

#[test]
fn handle_counts_match_binomials() {
    for n in 1..=12u32 {
        for k in 0..=n {
            match handle_counts(n, k) {
                Ok(h) => {
                    assert!(2 * k < n + 1);
                    let b = h.descriptor().b_star();
                    assert_eq!(b, i64::from(n) + 1 + 2 * h.count as i64);
                }
                Err(_) => assert!(2 * k > n),
            }
        }
    }
}

fn descriptor() -> impl Strategy<Value = RealLocusDescriptor> {
    (
        2u32..=7,
        prop::collection::vec((1u32..=3, 0u32..=3), 0..=3),
        0u32..=2,
    )
        .prop_map(|(n, hs, s)| {
            let mut d = RealLocusDescriptor::projective(n);
            for (p, c) in hs {
                let p = p.min(n - 1);
                d.add_handles(p, n - p, c);
            }
            d.disjoint_spheres = s;
            d
        })
}

fn sign(k: u32) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn morse_changes_follow_the_handle_algebra(d in descriptor(), index in 0u32..=3) {
        let (b, chi) = (d.b_star(), d.chi());
        match apply_morse(&d, MorseEvent::new(index, true)) {
            Ok(e) => {
                let (db, dchi) = (e.b_star() - b, e.chi() - chi);
                prop_assert_eq!(db, 2);
                let expected = match index {
                    0 => 1 + sign(d.n),
                    1 => -1 - sign(d.n) + (1 + sign(1)) * (1 + sign(d.n - 1)),
                    _ => (1 + sign(2)) * (1 + sign(d.n - 2)) - 1 - sign(d.n),
                };
                prop_assert_eq!(dchi, expected);
            }
            Err(TopologyError::Unsupported(_)) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn unknotted_handle_algebra(d in descriptor(), p in 1u32..=6) {
        prop_assume!(p < d.n);
        let q = d.n - p;
        match add_unknotted_handle(&d, p, q) {
            Ok(e) => {
                prop_assert_eq!(e.b_star() - d.b_star(), 4);
                let s1 = (1 + sign(1)) * (1 + sign(d.n - 1)) - 1 - sign(d.n);
                let pq = (1 + sign(p)) * (1 + sign(q)) - 1 - sign(d.n);
                prop_assert_eq!(e.chi() - d.chi(), s1 + pq);
            }
            Err(_) => prop_assert!(!d.is_connected()),
        }
    }
}

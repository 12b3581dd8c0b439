#![allow(dead_code)]

use proptest::prelude::*;
use realcubic::lattice::{Atom, IntMatrix, LatticeExpr, Term};

pub fn atom() -> impl Strategy<Value = Atom> {
    prop_oneof![
        (1u32..=8).prop_map(Atom::A),
        (4u32..=8).prop_map(Atom::D),
        (6u32..=8).prop_map(Atom::E),
        Just(Atom::U),
        (-9i64..=9)
            .prop_filter("nonzero", |k| *k != 0)
            .prop_map(Atom::Form),
    ]
}

/// Arbitrary well-formed expressions, possibly large and indefinite.
pub fn expr() -> impl Strategy<Value = LatticeExpr> {
    prop::collection::vec((1u32..=3, atom(), 1u32..=3), 1..=4).prop_map(|parts| {
        LatticeExpr::new(
            parts
                .into_iter()
                .map(|(m, a, s)| Term::new(m, a, s))
                .collect(),
        )
        .expect("generated terms are valid")
    })
}

/// Expressions of rank at most `max_rank`.
pub fn small_expr(max_rank: usize) -> impl Strategy<Value = LatticeExpr> {
    let part = prop_oneof![
        (1u32..=4).prop_map(Atom::A),
        Just(Atom::D(4)),
        Just(Atom::U),
        (-6i64..=6)
            .prop_filter("nonzero", |k| *k != 0)
            .prop_map(Atom::Form),
    ];
    prop::collection::vec((part, 1u32..=2), 1..=3)
        .prop_map(|parts| {
            LatticeExpr::new(parts.into_iter().map(|(a, s)| Term::new(1, a, s)).collect())
                .expect("valid")
        })
        .prop_filter("rank bound", move |e| e.rank() <= max_rank)
}

/// Positive definite root lattices of rank at most 8.
pub fn definite_expr() -> impl Strategy<Value = LatticeExpr> {
    let part = prop_oneof![
        (1u32..=4).prop_map(Atom::A),
        Just(Atom::D(4)),
        Just(Atom::E(6)),
        (1i64..=6).prop_map(Atom::Form),
    ];
    prop::collection::vec((part, 1u32..=2), 1..=2)
        .prop_map(|parts| {
            LatticeExpr::new(parts.into_iter().map(|(a, s)| Term::new(1, a, s)).collect())
                .expect("valid")
        })
        .prop_filter("rank <= 8", |e| e.rank() <= 8)
}

/// A unimodular matrix as a product of transvections, swaps and sign flips.
pub fn unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
    let step = (0..n, 0..n, -2i64..=2, 0u8..4);
    prop::collection::vec(step, 0..=12).prop_map(move |steps| {
        let mut p = IntMatrix::identity(n);
        for (i, j, k, kind) in steps {
            match kind {
                0 if i != j => p.swap_cols(i, j),
                1 => p.negate_col(i),
                _ if i != j => p.add_col_multiple(i, j, k),
                _ => {}
            }
        }
        p
    })
}

pub fn matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-bound..=bound, c), r)
            .prop_map(|rows| IntMatrix::from_rows(&rows))
    })
}

pub fn symmetric(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim).prop_flat_map(move |n| {
        prop::collection::vec(-bound..=bound, n * (n + 1) / 2).prop_map(move |xs| {
            let mut m = IntMatrix::zeros(n, n);
            let mut it = xs.into_iter();
            for i in 0..n {
                for j in i..n {
                    let x = it.next().expect("enough entries");
                    m[(i, j)] = x;
                    m[(j, i)] = x;
                }
            }
            m
        })
    })
}

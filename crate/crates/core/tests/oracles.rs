//! Independent brute-force checks of the lattice searches.

mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use realcubic::atlas::{build_atlas, GraphKind, VertexId};
use realcubic::lattice::{enumerate_norm_vectors, gram, GramMatrix, IntMatrix, LatticeExpr};
use realcubic::wall_crossing::{find_a2_pair, refute_a2_mod2};

fn g(s: &str) -> GramMatrix {
    gram(&LatticeExpr::parse(s).unwrap())
}

/// Every `x` in `[-b, b]^n` with `x.Gx = norm`, by exhaustive recursion.
fn box_search(g: &GramMatrix, norm: i64, b: i64) -> BTreeSet<Vec<i64>> {
    let n = g.rank();
    let m = g.matrix();
    let mut out = BTreeSet::new();
    let mut x = vec![0i64; n];
    fn rec(
        k: usize,
        x: &mut Vec<i64>,
        m: &IntMatrix,
        norm: i64,
        b: i64,
        out: &mut BTreeSet<Vec<i64>>,
    ) {
        let n = x.len();
        if k == n {
            let mut s = 0;
            for i in 0..n {
                if x[i] == 0 {
                    continue;
                }
                for j in 0..n {
                    s += x[i] * m[(i, j)] * x[j];
                }
            }
            if s == norm {
                out.insert(x.clone());
            }
            return;
        }
        for v in -b..=b {
            x[k] = v;
            rec(k + 1, x, m, norm, b, out);
        }
        x[k] = 0;
    }
    rec(0, &mut x, m, norm, b, &mut out);
    out
}

/// `x_i^2 <= N (G^-1)_ii` for positive definite `G`, by Cauchy-Schwarz; the
/// box `[-b, b]^n` is complete when this bound is below `(b + 1)^2`.
fn box_is_complete(g: &GramMatrix, norm: i64, b: i64) -> bool {
    let n = g.rank();
    let det = g.determinant();
    (0..n).all(|i| {
        let keep: Vec<usize> = (0..n).filter(|&k| k != i).collect();
        let rows: Vec<Vec<i64>> = keep
            .iter()
            .map(|&r| keep.iter().map(|&c| g.entry(r, c)).collect())
            .collect();
        let cof = if rows.is_empty() {
            1
        } else {
            IntMatrix::from_rows(&rows).determinant()
        };
        // floor(sqrt(norm * cof / det)) <= b  <=>  norm * cof < (b+1)^2 det
        i128::from(norm) * cof < i128::from((b + 1) * (b + 1)) * det
    })
}

fn fincke_pohst(g: &GramMatrix, norm: i64) -> BTreeSet<Vec<i64>> {
    enumerate_norm_vectors(g, norm)
        .unwrap()
        .into_iter()
        .collect()
}

#[test]
fn root_counts_match_the_box_oracle() {
    let expected = [
        ("A1", 2),
        ("A2", 6),
        ("A3", 12),
        ("D4", 24),
        ("D5", 40),
        ("E6", 72),
        ("E7", 126),
        ("E8", 240),
        ("A2+A1", 8),
        ("<4>+A2(2)", 0),
    ];
    for (s, count) in expected {
        let lattice = g(s);
        assert!(
            box_is_complete(&lattice, 2, 4),
            "[-4,4] box incomplete for {s}"
        );
        let oracle = box_search(&lattice, 2, 4);
        assert_eq!(oracle.len(), count, "{s}");
        assert_eq!(fincke_pohst(&lattice, 2), oracle, "{s}");
    }
}

#[test]
fn norm_six_vectors_match_the_box_oracle() {
    for s in [
        "A1",
        "A2",
        "A3",
        "D4",
        "A2(2)+<6>",
        "<2>+<3>+<6>",
        "A4",
        "D5",
    ] {
        let lattice = g(s);
        let b = (1..).find(|&b| box_is_complete(&lattice, 6, b)).unwrap();
        let oracle = box_search(&lattice, 6, b);
        assert_eq!(fincke_pohst(&lattice, 6), oracle, "{s}");
    }
}

fn l1_ball(n: usize, r: i64) -> Vec<Vec<i64>> {
    fn rec(k: usize, left: i64, x: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if k == x.len() {
            out.push(x.clone());
            return;
        }
        for v in -left..=left {
            x[k] = v;
            rec(k + 1, left - v.abs(), x, out);
        }
        x[k] = 0;
    }
    let mut out = Vec::new();
    rec(0, r, &mut vec![0; n], &mut out);
    out
}

/// A pair of 2-roots with `v1.v2 = -1` among vectors of l1 norm at most `r`.
fn l1_pair(g: &GramMatrix, r: i64) -> Option<(Vec<i64>, Vec<i64>)> {
    let roots: Vec<Vec<i64>> = l1_ball(g.rank(), r)
        .into_iter()
        .filter(|v| g.norm(v) == 2)
        .collect();
    for a in &roots {
        let ga = g.pairings(a);
        for b in &roots {
            if ga.iter().zip(b).map(|(x, y)| x * y).sum::<i64>() == -1 {
                return Some((a.clone(), b.clone()));
            }
        }
    }
    None
}

#[test]
fn refutations_survive_exhaustive_search() {
    let atlas = build_atlas(GraphKind::K4);
    let mut lattices: Vec<LatticeExpr> = ["U", "U(2)", "U+E8(2)", "<-2>+U(2)", "U(2)+D4(2)"]
        .iter()
        .map(|s| LatticeExpr::parse(s).unwrap())
        .collect();
    for id in [VertexId::principal(10, 1), VertexId::special(2, 1)] {
        lattices.push(atlas.vertex(id).unwrap().m_minus.clone());
    }
    let mut refuted = 0;
    for e in &lattices {
        let gm = gram(e);
        if gm.rank() > 10 {
            continue;
        }
        if refute_a2_mod2(e).unwrap().is_some() {
            refuted += 1;
            assert_eq!(l1_pair(&gm, 6), None, "{e} refuted yet a pair exists");
        }
    }
    assert!(refuted >= 4, "only {refuted} refutations exercised");
}

#[test]
fn hyperbolic_plane_has_no_pair() {
    assert!(find_a2_pair(&LatticeExpr::parse("U").unwrap()).is_none());
    assert_eq!(l1_pair(&g("U"), 12), None);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    /// Whenever the sweep refutes, no pair turns up; whenever a pair turns up,
    /// the sweep does not refute.
    #[test]
    fn refutation_is_sound(e in common::small_expr(6)) {
        let gm = gram(&e);
        let pair = l1_pair(&gm, 6);
        let refutation = refute_a2_mod2(&e).unwrap();
        prop_assert!(!(pair.is_some() && refutation.is_some()), "{} has {:?}", e, pair);
        if let Some(c) = find_a2_pair(&e) {
            prop_assert!(c.verify_a2());
            prop_assert!(refutation.is_none());
        }
    }
}

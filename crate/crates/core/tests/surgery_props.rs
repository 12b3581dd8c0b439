mod common;

use proptest::prelude::*;
use realcubic::lattice::IntMatrix;
use realcubic::surgery::{
    abelianization, blow_down, blow_up, factor_unimodular, h1_from_linking, slide, AbelianGroup,
    GroupPresentation, LinkingMatrix,
};

fn linking() -> impl Strategy<Value = LinkingMatrix> {
    common::symmetric(6, 9).prop_map(|m| LinkingMatrix::new(m).unwrap())
}

/// `(i, j, sign)` slide instructions, reduced mod the component count later.
fn slides() -> impl Strategy<Value = Vec<(usize, usize, bool)>> {
    prop::collection::vec((0usize..6, 1usize..6, any::<bool>()), 0..=10)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn slides_preserve_homology(m in linking(), moves in slides()) {
        let h = h1_from_linking(&m);
        let n = m.components();
        prop_assume!(n > 1);
        let mut cur = m.clone();
        for (i, off, pos) in moves {
            let i = i % n;
            let j = (i + 1 + off % (n - 1)) % n;
            cur = slide(&cur, i, j, if pos { 1 } else { -1 }).unwrap();
            prop_assert_eq!(&h1_from_linking(&cur), &h);
        }
    }

    #[test]
    fn blow_up_then_down(m in linking(), pos in any::<bool>(), moves in slides()) {
        let h = h1_from_linking(&m);
        let sign = if pos { 1 } else { -1 };
        let n = m.components();
        let mut up = blow_up(&m, sign).unwrap();
        prop_assert_eq!(&h1_from_linking(&up), &h);
        // Entangle the new component, then blow it down again.
        for (i, _, p) in moves {
            up = slide(&up, i % n, n, if p { 1 } else { -1 }).unwrap();
        }
        prop_assert_eq!(&h1_from_linking(&up), &h);
        let down = blow_down(&up, n).unwrap();
        prop_assert_eq!(h1_from_linking(&down), h);
    }

    #[test]
    fn plain_blow_down_inverts_blow_up(m in linking(), pos in any::<bool>()) {
        let sign = if pos { 1 } else { -1 };
        let up = blow_up(&m, sign).unwrap();
        prop_assert_eq!(blow_down(&up, m.components()).unwrap(), m);
    }

    #[test]
    fn torsion_order_is_the_determinant(m in linking()) {
        let h = h1_from_linking(&m);
        let det = m.matrix().determinant();
        if det != 0 {
            prop_assert_eq!(h.free_rank, 0);
            prop_assert_eq!(i128::from(h.torsion_order()), det.abs());
        } else {
            prop_assert!(h.free_rank > 0);
        }
    }

    #[test]
    fn abelianized_surgery_presentation(m in linking()) {
        let p = GroupPresentation::from_linking(&m);
        prop_assert_eq!(abelianization(&p), h1_from_linking(&m));
        let text = format!(
            "<{} | {}>",
            p.generators.iter().map(char::to_string).collect::<Vec<_>>().join(","),
            p.words.join(", ")
        );
        let reparsed = GroupPresentation::parse(&text).unwrap();
        prop_assert_eq!(reparsed.relations, p.relations);
    }

    #[test]
    fn unimodular_factorization(p in (1usize..=6).prop_flat_map(common::unimodular)) {
        let n = p.rows();
        let ops = factor_unimodular(&p).unwrap();
        let prod = ops.iter().fold(IntMatrix::identity(n), |acc, op| &acc * &op.matrix(n));
        prop_assert_eq!(prod, p);
    }
}

#[test]
fn cokernel_of_rectangular_matrices() {
    let m = IntMatrix::from_rows(&[[2, 0, 0], [0, 3, 0]]);
    assert_eq!(AbelianGroup::cokernel(&m).to_string(), "Z/6");
    assert_eq!(
        AbelianGroup::cokernel(&m.transpose()).to_string(),
        "Z + Z/6"
    );
}

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::expr::{Atom, LatticeExpr};
use super::matrix::IntMatrix;
use super::LatticeError;

/// Symmetric integer matrix of a lattice in a fixed basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GramMatrix(IntMatrix);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub pos: usize,
    pub neg: usize,
}

impl GramMatrix {
    pub fn new(m: IntMatrix) -> Result<Self, LatticeError> {
        if !m.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        Ok(Self(m))
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, LatticeError> {
        Self::new(IntMatrix::from_rows(rows))
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.rows()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.0[(i, j)]
    }

    pub fn determinant(&self) -> i128 {
        self.0.determinant()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self(self.0.direct_sum(&other.0))
    }

    pub fn scaled(&self, s: i64) -> Self {
        Self(self.0.scaled(s))
    }

    /// `P^T G P`; `p` should be unimodular for the result to describe the same lattice.
    pub fn congruence(&self, p: &IntMatrix) -> Self {
        Self(self.0.congruence(p))
    }

    pub fn check_dim(&self, v: &[i64]) -> Result<(), LatticeError> {
        if v.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.rank(),
                found: v.len(),
            });
        }
        Ok(())
    }

    pub fn pairing(&self, x: &[i64], y: &[i64]) -> i64 {
        self.0.bilinear(x, y)
    }

    pub fn norm(&self, x: &[i64]) -> i64 {
        self.0.bilinear(x, x)
    }

    /// Pairings of `v` with every basis vector.
    pub fn pairings(&self, v: &[i64]) -> Vec<i64> {
        self.0.mul_vec(v)
    }

    /// Inertia by exact symmetric Gaussian elimination over the rationals.
    pub fn signature(&self) -> Result<Signature, LatticeError> {
        let n = self.rank();
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| BigRational::from_integer(BigInt::from(self.0[(i, j)])))
                    .collect()
            })
            .collect();
        let mut sig = Signature { pos: 0, neg: 0 };
        for k in 0..n {
            if a[k][k].is_zero() {
                if let Some(p) = (k + 1..n).find(|&p| !a[p][p].is_zero()) {
                    swap_sym(&mut a, k, p);
                } else if let Some(p) = (k + 1..n).find(|&p| !a[k][p].is_zero()) {
                    // Both diagonals vanish: e_k += e_p gives 2 a[k][p] on the diagonal.
                    add_sym(&mut a, k, p);
                } else {
                    return Err(LatticeError::Degenerate);
                }
            }
            let pivot = a[k][k].clone();
            if pivot.is_positive() {
                sig.pos += 1;
            } else {
                sig.neg += 1;
            }
            // Schur complement; it stays symmetric, so row operations suffice.
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let f = &a[i][k] / &pivot;
                for j in k..n {
                    let t = &f * &a[k][j];
                    a[i][j] -= t;
                }
            }
            for i in k + 1..n {
                a[k][i] = BigRational::zero();
            }
        }
        Ok(sig)
    }

    pub fn is_positive_definite(&self) -> bool {
        matches!(self.signature(), Ok(s) if s.neg == 0)
    }
}

fn swap_sym(a: &mut [Vec<BigRational>], i: usize, j: usize) {
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

/// Basis change `e_i <- e_i + e_j`.
fn add_sym(a: &mut [Vec<BigRational>], i: usize, j: usize) {
    let n = a.len();
    for c in 0..n {
        let v = a[j][c].clone();
        a[i][c] += v;
    }
    for r in 0..n {
        let v = a[r][j].clone();
        a[r][i] += v;
    }
}

fn chain(n: usize, edges: &[(usize, usize)]) -> IntMatrix {
    let mut m = IntMatrix::diagonal(&vec![2; n]);
    for &(a, b) in edges {
        m[(a, b)] = -1;
        m[(b, a)] = -1;
    }
    m
}

/// Gram block of one unscaled atom.
///
/// A_n, D_n, E6 and E7 use simple-root bases (Bourbaki numbering). E8 uses a
/// root basis whose dual vectors are short, so every root has coordinates in
/// [-4, 4]; see `e8_basis_is_box_complete` in the tests.
pub fn atom_gram(atom: Atom) -> IntMatrix {
    match atom {
        Atom::A(n) => {
            let n = n as usize;
            let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
            chain(n, &edges)
        }
        Atom::D(n) => {
            let n = n as usize;
            let mut edges: Vec<_> = (1..n - 1).map(|i| (i - 1, i)).collect();
            edges.push((n - 3, n - 1));
            chain(n, &edges)
        }
        Atom::E(6) => chain(6, &[(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)]),
        Atom::E(7) => chain(7, &[(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 3)]),
        Atom::E(8) => IntMatrix::from_rows(&[
            [2, 0, 0, 0, 0, 0, -1, 0],
            [0, 2, -1, 0, 0, -1, 0, 0],
            [0, -1, 2, -1, 0, 0, 0, 0],
            [0, 0, -1, 2, 1, 0, -1, 0],
            [0, 0, 0, 1, 2, -1, 0, 0],
            [0, -1, 0, 0, -1, 2, 0, -1],
            [-1, 0, 0, -1, 0, 0, 2, 0],
            [0, 0, 0, 0, 0, -1, 0, 2],
        ]),
        Atom::E(n) => panic!("E{n} is not a valid atom"),
        Atom::U => IntMatrix::from_rows(&[[0, 1], [1, 0]]),
        Atom::Form(k) => IntMatrix::diagonal(&[k]),
    }
}

/// Block-diagonal Gram matrix of an expression, summands in written order.
pub fn gram(expr: &LatticeExpr) -> GramMatrix {
    let mut m = IntMatrix::zeros(0, 0);
    for (atom, scale) in expr.summands() {
        m = m.direct_sum(&atom_gram(atom).scaled(i64::from(scale)));
    }
    GramMatrix(m)
}

/// The odd unimodular lattice `3I + 2U + 2E8` of signature (21, 2).
pub fn ambient_lattice() -> GramMatrix {
    let i3 = GramMatrix(IntMatrix::identity(3));
    let rest = gram(&LatticeExpr::parse("2*U+2*E8").expect("literal"));
    i3.direct_sum(&rest)
}

/// The polarization `h = (1,1,1,0,...,0)` in the basis of [`ambient_lattice`]; `h^2 = 3`.
pub fn polarization() -> Vec<i64> {
    let mut h = vec![0; 23];
    h[..3].fill(1);
    h
}

/// `h^perp = A2 + 2U + 2E8`, the primitive cohomology lattice.
pub fn primitive_lattice() -> GramMatrix {
    gram(&LatticeExpr::parse("A2+2*U+2*E8").expect("literal"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GramMatrix {
        gram(&LatticeExpr::parse(s).unwrap())
    }

    #[test]
    fn basic_blocks() {
        assert_eq!(g("U").matrix().to_rows(), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(g("A2").matrix().to_rows(), vec![vec![2, -1], vec![-1, 2]]);
        assert_eq!(g("<-2>").matrix().to_rows(), vec![vec![-2]]);
        assert_eq!(g("D4").determinant(), 4);
        assert_eq!(g("E6").determinant(), 3);
        assert_eq!(g("E7").determinant(), 2);
        assert_eq!(g("E8").determinant(), 1);
        assert_eq!(g("E8(2)").determinant(), 256);
        assert_eq!(g("A3").determinant(), 4);
        assert_eq!(g("D5").determinant(), 4);
    }

    #[test]
    fn signatures() {
        assert_eq!(g("U").signature().unwrap(), Signature { pos: 1, neg: 1 });
        assert_eq!(g("E8").signature().unwrap(), Signature { pos: 8, neg: 0 });
        assert_eq!(
            g("<-2>+10*A1").signature().unwrap(),
            Signature { pos: 10, neg: 1 }
        );
        assert_eq!(
            g("U(2)+E6(2)").signature().unwrap(),
            Signature { pos: 7, neg: 1 }
        );
        assert_eq!(g("2*U").signature().unwrap(), Signature { pos: 2, neg: 2 });
        let degenerate = GramMatrix::from_rows(&[[1, 1], [1, 1]]).unwrap();
        assert_eq!(degenerate.signature(), Err(LatticeError::Degenerate));
    }

    #[test]
    fn ambient_and_primitive() {
        let m = ambient_lattice();
        assert_eq!(m.rank(), 23);
        assert_eq!(m.determinant().abs(), 1);
        assert_eq!(m.signature().unwrap(), Signature { pos: 21, neg: 2 });
        let h = polarization();
        assert_eq!(m.norm(&h), 3);
        let m0 = primitive_lattice();
        assert_eq!(m0.rank(), 22);
        assert_eq!(m0.determinant().abs(), 3);
        assert_eq!(m0.signature().unwrap(), Signature { pos: 20, neg: 2 });
        // e1 - e2 and e2 - e3 span h^perp inside 3I with Gram A2.
        let a = [1, -1, 0];
        let b = [0, 1, -1];
        let i3 = IntMatrix::identity(3);
        assert_eq!(i3.bilinear(&a, &a), 2);
        assert_eq!(i3.bilinear(&a, &b), -1);
        assert_eq!(i3.bilinear(&a, &[1, 1, 1]), 0);
    }

    #[test]
    fn asymmetric_rejected() {
        assert_eq!(
            GramMatrix::from_rows(&[[1, 2], [3, 4]]),
            Err(LatticeError::NotSymmetric)
        );
    }
}

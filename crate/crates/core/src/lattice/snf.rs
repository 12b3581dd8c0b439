//! Smith normal form over the integers.
//!
//! For an `m x n` integer matrix `A` we compute unimodular `U` (`m x m`) and
//! `V` (`n x n`) with `U * A * V = D`, where `D` is diagonal with
//! nonnegative entries `d_1 | d_2 | ... | d_r`, followed by zeros.
//!
//! Pivoting always brings the entry of least absolute value to the corner
//! and reduces by Euclidean division, which keeps the transforms small on
//! the matrices we meet in practice. Work is done in `i128` and converted
//! back at the end.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::IntMatrix;

/// Dense row-major matrix of big integers; Smith transforms can outgrow `i64`
/// long before the invariant factors do.
pub type BigMatrix = Vec<Vec<BigInt>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// Diagonal of `D`, length `min(m, n)`, nonzero entries first.
    pub diagonal: Vec<i64>,
    pub left: BigMatrix,
    pub right: BigMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().take_while(|&&d| d != 0).count()
    }

    /// Nonzero diagonal entries, units included.
    pub fn invariant_factors(&self) -> &[i64] {
        &self.diagonal[..self.rank()]
    }

    /// Nonzero diagonal entries greater than one.
    pub fn torsion(&self) -> Vec<i64> {
        self.invariant_factors()
            .iter()
            .copied()
            .filter(|&d| d > 1)
            .collect()
    }

    /// Column `k` of `V`.
    pub fn right_column(&self, k: usize) -> Vec<BigInt> {
        self.right.iter().map(|row| row[k].clone()).collect()
    }
}

pub fn to_big(m: &IntMatrix) -> BigMatrix {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn big_mul(a: &BigMatrix, b: &BigMatrix, inner: usize) -> BigMatrix {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Fraction-free (Bareiss) determinant of a square big-integer matrix.
pub fn big_determinant(m: &BigMatrix) -> BigInt {
    let n = m.len();
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &a[n - 1][n - 1]
}

struct Work {
    a: BigMatrix,
    u: BigMatrix,
    v: BigMatrix,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            row.swap(i, j);
        }
    }

    /// row[dst] -= q * row[src]
    fn sub_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.u] {
            for j in 0..m[0].len() {
                let s = &m[src][j] * q;
                m[dst][j] -= s;
            }
        }
    }

    /// col[dst] -= q * col[src]
    fn sub_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.v] {
            for row in m.iter_mut() {
                let s = &row[src] * q;
                row[dst] -= s;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut().chain(self.u[i].iter_mut()) {
            *x = -std::mem::take(x);
        }
    }
}

fn identity(n: usize) -> BigMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// Euclidean quotient rounding to nearest, so remainders satisfy |r| <= |d|/2.
fn nearest_quotient(n: &BigInt, d: &BigInt) -> BigInt {
    // The floored remainder has the sign of d, so rounding away moves q up.
    let (q, r) = n.div_mod_floor(d);
    if (&r * 2u8).abs() > d.abs() {
        q + 1
    } else {
        q
    }
}

/// Smith normal form with transforms. The invariant factors must fit in `i64`.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        a: to_big(m),
        u: identity(rows),
        v: identity(cols),
    };
    let steps = rows.min(cols);

    for k in 0..steps {
        // Least nonzero entry of the trailing block.
        let mut pivot: Option<(BigInt, usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                let x = w.a[i][j].abs();
                if !x.is_zero() && pivot.as_ref().is_none_or(|(best, _, _)| x < *best) {
                    pivot = Some((x, i, j));
                }
            }
        }
        let Some((_, pi, pj)) = pivot else { break };
        w.swap_rows(k, pi);
        w.swap_cols(k, pj);

        loop {
            let mut dirty = false;
            for i in k + 1..rows {
                if !w.a[i][k].is_zero() {
                    let q = nearest_quotient(&w.a[i][k], &w.a[k][k]);
                    w.sub_row(i, k, &q);
                    dirty |= !w.a[i][k].is_zero();
                }
            }
            for j in k + 1..cols {
                if !w.a[k][j].is_zero() {
                    let q = nearest_quotient(&w.a[k][j], &w.a[k][k]);
                    w.sub_col(j, k, &q);
                    dirty |= !w.a[k][j].is_zero();
                }
            }
            if dirty {
                // Move the smallest remainder in row/column k to the corner.
                let mut best = (w.a[k][k].abs(), k, k);
                for i in k + 1..rows {
                    let x = w.a[i][k].abs();
                    if !x.is_zero() && x < best.0 {
                        best = (x, i, k);
                    }
                }
                for j in k + 1..cols {
                    let x = w.a[k][j].abs();
                    if !x.is_zero() && x < best.0 {
                        best = (x, k, j);
                    }
                }
                w.swap_rows(k, best.1);
                w.swap_cols(k, best.2);
                continue;
            }
            // Row and column are clear; enforce divisibility of the block.
            let d = w.a[k][k].clone();
            let offender = (k + 1..rows)
                .flat_map(|i| (k + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !(&w.a[i][j] % &d).is_zero());
            match offender {
                Some((i, _)) => w.sub_row(k, i, &-BigInt::one()),
                None => break,
            }
        }
        if w.a[k][k].is_negative() {
            w.negate_row(k);
        }
    }

    let diagonal = (0..steps)
        .map(|i| w.a[i][i].to_i64().expect("invariant factor exceeds i64"))
        .collect();
    SmithForm {
        diagonal,
        left: w.u,
        right: w.v,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_contract(m: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(m);
        let d = big_mul(&big_mul(&s.left, &to_big(m), m.rows()), &s.right, m.cols());
        for (i, row) in d.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let expect = if i == j { s.diagonal[i] } else { 0 };
                assert_eq!(*x, BigInt::from(expect), "U m V not diagonal for {m}");
            }
        }
        assert_eq!(big_determinant(&s.left).abs(), BigInt::one());
        assert_eq!(big_determinant(&s.right).abs(), BigInt::one());
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
        s
    }

    #[test]
    fn diagonal_input() {
        let s = check_contract(&IntMatrix::diagonal(&[2, 2]));
        assert_eq!(s.diagonal, vec![2, 2]);
    }

    #[test]
    fn exponent_matrix_of_seifert_presentation() {
        let m = IntMatrix::from_rows(&[[1, -1, -1], [-1, 3, -1], [-1, -1, 5]]);
        let s = check_contract(&m);
        assert_eq!(s.diagonal, vec![1, 2, 2]);
    }

    #[test]
    fn coprime_diagonal_is_merged() {
        let s = check_contract(&IntMatrix::diagonal(&[2, 3]));
        assert_eq!(s.diagonal, vec![1, 6]);
    }

    #[test]
    fn rectangular_and_zero() {
        let s = check_contract(&IntMatrix::from_rows(&[[2, 4, 6], [4, 8, 12]]));
        assert_eq!(s.diagonal, vec![2, 0]);
        let z = check_contract(&IntMatrix::zeros(2, 3));
        assert_eq!(z.rank(), 0);
        let empty = smith_normal_form(&IntMatrix::zeros(0, 0));
        assert!(empty.diagonal.is_empty());
    }

    #[test]
    fn bareiss_on_big_matrices() {
        let m = IntMatrix::from_rows(&[[0, 2, 1], [3, -1, 4], [5, 9, -2]]);
        assert_eq!(big_determinant(&to_big(&m)), BigInt::from(m.determinant()));
        assert_eq!(big_determinant(&Vec::new()), BigInt::one());
    }
}

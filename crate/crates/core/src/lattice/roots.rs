//! Short vectors of definite lattices and reflections in roots.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::gram::GramMatrix;
use super::{LatticeError, Vector};

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// `Q(x) = sum_i d_i (x_i + sum_{j>i} mu_ij x_j)^2`, exactly.
struct Ldl {
    d: Vec<BigRational>,
    mu: Vec<Vec<BigRational>>,
}

fn ldl(g: &GramMatrix) -> Option<Ldl> {
    let n = g.rank();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| rat(g.entry(i, j))).collect())
        .collect();
    let mut d = Vec::with_capacity(n);
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    for k in 0..n {
        let p = a[k][k].clone();
        if !p.is_positive() {
            return None;
        }
        for j in k + 1..n {
            mu[k][j] = &a[k][j] / &p;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &mu[k][i] * &a[k][j];
                a[i][j] -= t;
            }
        }
        d.push(p);
    }
    Some(Ldl { d, mu })
}

/// All `v` with `v^T G v = norm`, sorted lexicographically.
///
/// Depth-first search from the last coordinate down; at each level the
/// admissible interval comes from the remaining budget of the LDL form.
/// Float estimates only propose a slightly widened interval, every candidate
/// is accepted or rejected with exact rational arithmetic.
pub fn enumerate_norm_vectors(g: &GramMatrix, norm: i64) -> Result<Vec<Vector>, LatticeError> {
    if norm <= 0 {
        return Err(LatticeError::NonPositiveNorm(norm));
    }
    let l = ldl(g).ok_or(LatticeError::NotPositiveDefinite)?;
    let n = g.rank();
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    if n > 0 {
        search(&l, n - 1, rat(norm), &mut x, &mut out);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn search(l: &Ldl, k: usize, budget: BigRational, x: &mut Vec<i64>, out: &mut Vec<Vector>) {
    let n = x.len();
    let mut c = BigRational::zero();
    for j in k + 1..n {
        c += &l.mu[k][j] * rat(x[j]);
    }
    let radius = (budget.to_f64().unwrap_or(f64::MAX) / l.d[k].to_f64().unwrap_or(1.0)).sqrt();
    let center = -c.to_f64().unwrap_or(0.0);
    let lo = (center - radius).floor() as i64 - 1;
    let hi = (center + radius).ceil() as i64 + 1;
    for xi in lo..=hi {
        let t = rat(xi) + &c;
        let used = &l.d[k] * &t * &t;
        if used > budget {
            continue;
        }
        x[k] = xi;
        let rest = &budget - used;
        if k == 0 {
            if rest.is_zero() {
                out.push(x.clone());
            }
        } else {
            search(l, k - 1, rest, x, out);
        }
    }
    x[k] = 0;
}

/// `v^2 = 6` and `v . e_i = 0 (mod 3)` for every basis vector.
pub fn is_six_root(v: &[i64], g: &GramMatrix) -> Result<bool, LatticeError> {
    g.check_dim(v)?;
    Ok(g.norm(v) == 6 && g.pairings(v).iter().all(|p| p % 3 == 0))
}

/// `R_v(x) = x - sign(v^2) (v.x) v` for a root `v` of square `+-2`.
pub fn picard_lefschetz(v: &[i64], x: &[i64], g: &GramMatrix) -> Result<Vector, LatticeError> {
    g.check_dim(v)?;
    g.check_dim(x)?;
    let vv = g.norm(v);
    if vv.abs() != 2 {
        return Err(LatticeError::NotARoot(vv));
    }
    let c = vv.signum() * g.pairing(v, x);
    Ok(x.iter().zip(v).map(|(xi, vi)| xi - c * vi).collect())
}

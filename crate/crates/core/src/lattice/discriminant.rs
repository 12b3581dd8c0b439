//! Discriminant group `L^*/L` and its finite quadratic form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::gram::GramMatrix;
use super::snf::smith_normal_form;
use super::LatticeError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscriminantGroup {
    /// Invariant factors greater than one, each dividing the next.
    pub invariant_factors: Vec<i64>,
    /// Number of factors divisible by 2.
    pub two_rank: usize,
}

impl DiscriminantGroup {
    pub fn order(&self) -> i64 {
        self.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }
}

impl std::fmt::Display for DiscriminantGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.invariant_factors.is_empty() {
            return write!(f, "0");
        }
        let mut runs: Vec<(i64, usize)> = Vec::new();
        for &d in &self.invariant_factors {
            match runs.last_mut() {
                Some((e, c)) if *e == d => *c += 1,
                _ => runs.push((d, 1)),
            }
        }
        let parts: Vec<String> = runs
            .iter()
            .map(|&(d, c)| {
                if c == 1 {
                    format!("Z/{d}")
                } else {
                    format!("(Z/{d})^{c}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Quadratic form on `L^*/L` evaluated on the SNF generators.
///
/// Generator `x_k` is column `k` of the right SNF transform divided by the
/// invariant factor `d_k`; `q` is taken mod 2 and `b` mod 1, both reduced to
/// `[0, 2)` and `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscriminantForm {
    pub group: DiscriminantGroup,
    /// Numerators of the generators; generator `k` is `numerators[k] / group.invariant_factors[k]`.
    pub numerators: Vec<Vec<i64>>,
    pub q_values: Vec<Rational64>,
    pub b_values: Vec<Vec<Rational64>>,
    pub two_part_integer: bool,
}

impl DiscriminantForm {
    /// `q` of `sum c_k x_k`, reduced mod 2.
    pub fn q_of(&self, coeffs: &[i64]) -> Rational64 {
        let n = self.q_values.len();
        let mut total = Rational64::zero();
        for k in 0..n {
            total += self.q_values[k] * coeffs[k] * coeffs[k];
            for l in k + 1..n {
                total += self.b_values[k][l] * 2 * coeffs[k] * coeffs[l];
            }
        }
        reduce_mod(total, 2)
    }
}

fn reduce_mod(x: Rational64, m: i64) -> Rational64 {
    let num = x.numer().mod_floor(&(m * x.denom()));
    Rational64::new(num, *x.denom())
}

fn nondegenerate_snf(g: &GramMatrix) -> Result<super::SmithForm, LatticeError> {
    let s = smith_normal_form(g.matrix());
    if s.rank() < g.rank() {
        return Err(LatticeError::Degenerate);
    }
    Ok(s)
}

fn group_from_factors(factors: Vec<i64>) -> DiscriminantGroup {
    let two_rank = factors.iter().filter(|d| *d % 2 == 0).count();
    DiscriminantGroup {
        invariant_factors: factors,
        two_rank,
    }
}

pub fn discriminant_group(g: &GramMatrix) -> Result<DiscriminantGroup, LatticeError> {
    let s = nondegenerate_snf(g)?;
    Ok(group_from_factors(s.torsion()))
}

pub fn discriminant_form(g: &GramMatrix) -> Result<DiscriminantForm, LatticeError> {
    let s = nondegenerate_snf(g)?;
    let n = g.rank();
    let (factors, numerators): (Vec<i64>, Vec<Vec<i64>>) = (0..n)
        .filter(|&k| s.diagonal[k] > 1)
        .map(|k| {
            // Only v / d_k mod L matters; take symmetric residues mod d_k.
            let d = BigInt::from(s.diagonal[k]);
            let v = s
                .right_column(k)
                .iter()
                .map(|x| {
                    let r = x.mod_floor(&d);
                    let r = if &r * 2 > d { r - &d } else { r };
                    r.to_i64().expect("residue below d_k")
                })
                .collect();
            (s.diagonal[k], v)
        })
        .unzip();
    let m = factors.len();

    let pair = |a: usize, b: usize| -> Rational64 {
        let num = g.pairing(&numerators[a], &numerators[b]);
        Rational64::new(num, factors[a] * factors[b])
    };
    let q_values: Vec<Rational64> = (0..m).map(|k| reduce_mod(pair(k, k), 2)).collect();
    let b_values: Vec<Vec<Rational64>> = (0..m)
        .map(|k| (0..m).map(|l| reduce_mod(pair(k, l), 1)).collect())
        .collect();

    // 2-primary generators y_k = (d_k / 2^a_k) x_k. q is integral on the 2-part
    // iff q(y_k) is integral and 2 b(y_k, y_l) is integral for all k, l.
    let odd_part: Vec<Option<i64>> = factors
        .iter()
        .map(|&d| {
            if d % 2 != 0 {
                return None;
            }
            let mut o = d;
            while o % 2 == 0 {
                o /= 2;
            }
            Some(o)
        })
        .collect();
    let mut two_part_integer = true;
    for k in 0..m {
        let Some(ok) = odd_part[k] else { continue };
        if !(pair(k, k) * ok * ok).is_integer() {
            two_part_integer = false;
        }
        for l in k + 1..m {
            let Some(ol) = odd_part[l] else { continue };
            if !(pair(k, l) * 2 * ok * ol).is_integer() {
                two_part_integer = false;
            }
        }
    }

    Ok(DiscriminantForm {
        group: group_from_factors(factors),
        numerators,
        q_values,
        b_values,
        two_part_integer,
    })
}

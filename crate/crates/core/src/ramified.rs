//! Double covers branched along a hypersurface: Euler characteristics of
//! perturbations, local cusp models and ramified sums with unknotted handles.

use serde::Serialize;

use crate::topology::{RealLocusDescriptor, TopologyError};
use crate::wall_crossing::MoveKind;

/// Euler characteristics of a real projective variety `P`, the region `P_+`
/// where the defining section is non-negative, and the branch locus `L`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PerturbationData {
    pub chi_p: i64,
    pub chi_p_plus: i64,
    pub chi_l: i64,
}

/// `chi(X) = chi(P) + 2 chi(P_+) - chi(L)` for the perturbed double cover.
pub fn euler_perturbation(d: PerturbationData) -> i64 {
    d.chi_p + 2 * d.chi_p_plus - d.chi_l
}

/// A cusp point of the family, viewed from both sides of the wall.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CuspLocalModel {
    pub p: u32,
    pub q: u32,
    /// Morse index of the facet crossed on the `+` side.
    pub facet_plus: u32,
    /// Morse index of the facet crossed on the `-` side.
    pub facet_minus: u32,
    /// The handle `S^p x S^q` gained across the cusp.
    pub handle: (u32, u32),
}

impl CuspLocalModel {
    /// Odd Morse index faces an R-wall, even an L-wall.
    pub fn facet_kinds(&self) -> (MoveKind, MoveKind) {
        let kind = |k: u32| if k % 2 == 1 { MoveKind::R } else { MoveKind::L };
        (kind(self.facet_plus), kind(self.facet_minus))
    }
}

/// Local model `x_0^3 + ...` of signature `(p, q)`: index `q` on one side,
/// index `p` on the other, the two facets bounding the same cusp region.
pub fn cusp_local_model(p: u32, q: u32) -> CuspLocalModel {
    CuspLocalModel {
        p,
        q,
        facet_plus: q,
        facet_minus: p,
        handle: (p.min(q), p.max(q)),
    }
}

/// A Morse point of index `q` on the branch locus becomes one of index
/// `q + 1` on the double cover.
pub fn lift_morse_index(q: u32) -> u32 {
    q + 1
}

/// Ramified sum with an unknotted `S^p x S^q` in `R^n`: adds `S^1 x S^(n-1)`
/// and `S^p x S^q` to a connected real locus.
pub fn add_unknotted_handle(
    d: &RealLocusDescriptor,
    p: u32,
    q: u32,
) -> Result<RealLocusDescriptor, TopologyError> {
    if p + q != d.n || p == 0 || q == 0 {
        return Err(TopologyError::DimensionMismatch { p, q, n: d.n });
    }
    if !d.is_connected() {
        return Err(TopologyError::Unsupported(format!(
            "ramified sum on the disconnected {d}"
        )));
    }
    let mut out = d.clone();
    out.add_handles(1, d.n - 1, 1);
    out.add_handles(p, q, 1);
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HandleCount {
    pub n: u32,
    pub k: u32,
    /// Number of `S^k x S^(n-k)` summands, `C(n+1, k)`.
    pub count: u64,
    /// Multiplicity `(n + 1 - 2k)^2` of the resulting cover.
    pub t: u64,
}

impl HandleCount {
    pub fn descriptor(&self) -> RealLocusDescriptor {
        let mut d = RealLocusDescriptor::projective(self.n);
        d.add_handles(self.k, self.n - self.k, self.count as u32);
        d
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Handle count of the iterated ramified construction; defined for
/// `0 <= k < (n + 1)/2`.
pub fn handle_counts(n: u32, k: u32) -> Result<HandleCount, TopologyError> {
    if 2 * k > n {
        return Err(TopologyError::Unsupported(format!(
            "handle count needs 2k < n + 1, got n = {n}, k = {k}"
        )));
    }
    let t = u64::from(n + 1 - 2 * k);
    Ok(HandleCount {
        n,
        k,
        count: binomial(u64::from(n) + 1, u64::from(k)),
        t: t * t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler() {
        let d = PerturbationData {
            chi_p: 1,
            chi_p_plus: 1,
            chi_l: 0,
        };
        assert_eq!(euler_perturbation(d), 3);
        let d = PerturbationData {
            chi_p: 0,
            chi_p_plus: -2,
            chi_l: 2,
        };
        assert_eq!(euler_perturbation(d), -6);
    }

    #[test]
    fn cusp_models() {
        for (p, q) in [(0, 4), (1, 3), (2, 2), (3, 1), (4, 0)] {
            let m = cusp_local_model(p, q);
            assert_eq!(m.facet_plus + m.facet_minus, 4);
            let (a, b) = m.facet_kinds();
            assert_eq!(a, b, "({p},{q})");
        }
        assert_eq!(cusp_local_model(1, 3).facet_kinds().0, MoveKind::R);
        assert_eq!(cusp_local_model(2, 2).facet_kinds().0, MoveKind::L);
        assert_eq!(cusp_local_model(3, 1).handle, (1, 3));
        // on the fourfold itself the two facets of a cusp split into one R and one L
        for p in 0..=5 {
            let m = cusp_local_model(p, 5 - p);
            assert_eq!(m.facet_plus + m.facet_minus, 5);
            let (a, b) = m.facet_kinds();
            assert_ne!(a, b, "({p},{})", 5 - p);
        }
    }

    #[test]
    fn unknotted() {
        let rp4 = RealLocusDescriptor::projective(4);
        let d = add_unknotted_handle(&rp4, 2, 2).unwrap();
        assert_eq!(d, RealLocusDescriptor::fourfold(1, 1));
        assert!(add_unknotted_handle(&rp4, 1, 2).is_err());
        assert!(add_unknotted_handle(&rp4, 0, 4).is_err());
    }

    #[test]
    fn counts() {
        let h = handle_counts(4, 1).unwrap();
        assert_eq!((h.count, h.t), (5, 9));
        assert_eq!(h.descriptor().to_string(), "RP4 # 5(S1xS3)");
        let h = handle_counts(7, 3).unwrap();
        assert_eq!((h.count, h.t), (56, 4));
        assert_eq!(handle_counts(5, 0).unwrap().count, 1);
        assert!(handle_counts(4, 3).is_err());
        assert!(handle_counts(5, 3).is_err());
        assert!(handle_counts(1, 1).is_err());
    }
}

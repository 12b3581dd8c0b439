use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::VertexId;
use crate::lattice::LatticeExpr;

/// Closed orientable surface given by the genera of its components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceDescriptor {
    pub genera: Vec<u32>,
}

impl SurfaceDescriptor {
    pub fn new(genera: &[u32]) -> Self {
        Self {
            genera: genera.to_vec(),
        }
    }

    /// Total mod-2 Betti number.
    pub fn b_star(&self) -> i64 {
        self.genera.iter().map(|&g| 2 + 2 * i64::from(g)).sum()
    }

    pub fn chi(&self) -> i64 {
        self.genera.iter().map(|&g| 2 - 2 * i64::from(g)).sum()
    }

    /// `(r, d)` of a real K3 surface with this real locus:
    /// `r = 10 + chi/2`, `d = (24 - b_*)/2`.
    pub fn k3_coordinates(&self) -> Option<(i64, i64)> {
        let (b, chi) = (self.b_star(), self.chi());
        if b > 24 || b % 2 != 0 || chi % 2 != 0 {
            return None;
        }
        Some((10 + chi / 2, (24 - b) / 2))
    }
}

impl fmt::Display for SurfaceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .genera
            .iter()
            .map(|&g| match g {
                0 => "S2".to_string(),
                1 => "T2".to_string(),
                g => format!("S{g}"),
            })
            .collect();
        f.write_str(&parts.join(" ⊔ "))
    }
}

/// K3 real loci paired with K4 vertices of the same `(r, d)`.
pub(super) fn real_loci() -> BTreeMap<VertexId, SurfaceDescriptor> {
    BTreeMap::from([
        (VertexId::principal(1, 0), SurfaceDescriptor::new(&[1])),
        (VertexId::special(2, 1), SurfaceDescriptor::new(&[1, 1])),
        (VertexId::principal(10, 0), SurfaceDescriptor::new(&[10])),
        (VertexId::principal(10, 1), SurfaceDescriptor::new(&[10, 0])),
    ])
}

/// For `C^{10,1}`, `L_+ = -M_- = -U`, which is isometric to `U`.
pub(super) fn l_plus() -> BTreeMap<VertexId, LatticeExpr> {
    BTreeMap::from([(
        VertexId::principal(10, 1),
        LatticeExpr::parse("U").expect("literal"),
    )])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{gram, IntMatrix};

    #[test]
    fn coordinates() {
        assert_eq!(
            SurfaceDescriptor::new(&[1]).k3_coordinates(),
            Some((10, 10))
        );
        assert_eq!(
            SurfaceDescriptor::new(&[1, 1]).k3_coordinates(),
            Some((10, 8))
        );
        assert_eq!(SurfaceDescriptor::new(&[10]).k3_coordinates(), Some((1, 1)));
        assert_eq!(
            SurfaceDescriptor::new(&[10, 0]).k3_coordinates(),
            Some((2, 0))
        );
        assert_eq!(SurfaceDescriptor::new(&[10, 0]).to_string(), "S10 ⊔ S2");
    }

    #[test]
    fn minus_u_is_u() {
        let u = gram(&LatticeExpr::parse("U").unwrap());
        let flip = IntMatrix::diagonal(&[1, -1]);
        assert_eq!(u.scaled(-1).congruence(&flip), u);
    }
}

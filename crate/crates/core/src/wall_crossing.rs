//! Moves between adjacent classes and cuspidal strata on walls.
//!
//! A wall between `X_+` and `X_-` (with `d(X_+) > d(X_-)`) carries a cuspidal
//! stratum iff the relevant eigenlattice of `X_-` contains 2-roots `v1, v2`
//! with `v1.v2 = -1` such that `v1 - v2` pairs nontrivially mod 3 with the
//! lattice. For R-walls the lattice is `M_-(X_-)`, for L-walls `M_+^0(X_-)`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::atlas::{Atlas, VertexData, VertexId};
use crate::lattice::{gram, Atom, GramMatrix, LatticeError, LatticeExpr, Vector};

/// Default coordinate height (l1 norm) of the fallback search in [`find_a2_pair`].
pub const DEFAULT_HEIGHT: u32 = 4;

/// Largest rank accepted by [`refute_a2_mod2`].
pub const MAX_REFUTATION_RANK: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MoveKind {
    L,
    R,
    #[serde(rename = "L_inverse")]
    LInverse,
    #[serde(rename = "R_inverse")]
    RInverse,
}

impl MoveKind {
    /// Change of the coordinate `d` along the move.
    pub fn d_change(self) -> i32 {
        match self {
            Self::L | Self::R => -1,
            Self::LInverse | Self::RInverse => 1,
        }
    }

    pub fn inverse(self) -> Self {
        match self {
            Self::L => Self::LInverse,
            Self::R => Self::RInverse,
            Self::LInverse => Self::L,
            Self::RInverse => Self::R,
        }
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::L => "L",
            Self::R => "R",
            Self::LInverse => "L^-1",
            Self::RInverse => "R^-1",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WallError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("vector has square {0}, expected a 2-root")]
    NotARoot(i64),
    #[error("rank {rank} exceeds the residue sweep limit {max}")]
    RankTooLarge { rank: usize, max: usize },
    #[error("{0} and {1} are not adjacent")]
    NotAdjacent(VertexId, VertexId),
}

/// Move from `X_+` across the wall of the 2-root `v`.
///
/// On the plus side `v` lives in `M_+^0`; the parity test runs over
/// `M_+^0 + Zh` with `h^2 = 3`. That sublattice has index 1 or 3 in `M_+`,
/// which is odd, so parities over it and over `M_+` coincide. A vector of
/// length `rank M_+^0` is padded with a zero `h`-coordinate.
pub fn classify_move(v: &[i64], side: Side, vertex: &VertexData) -> Result<MoveKind, WallError> {
    let (g, v) = match side {
        Side::Minus => (gram(&vertex.m_minus), v.to_vec()),
        Side::Plus => {
            let g = gram(&vertex.m_plus0)
                .direct_sum(&gram(&LatticeExpr::parse("<3>").expect("literal")));
            let mut v = v.to_vec();
            if v.len() + 1 == g.rank() {
                v.push(0);
            }
            (g, v)
        }
    };
    g.check_dim(&v)?;
    let n = g.norm(&v);
    if n != 2 {
        return Err(WallError::NotARoot(n));
    }
    let even = g.pairings(&v).iter().all(|p| p % 2 == 0);
    Ok(match (side, even) {
        (Side::Plus, true) => MoveKind::R,
        (Side::Minus, true) => MoveKind::L,
        (Side::Plus, false) => MoveKind::LInverse,
        (Side::Minus, false) => MoveKind::RInverse,
    })
}

/// Two 2-roots with `v1.v2 = -1`, in the coordinates of `gram(lattice)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct A2Certificate {
    pub lattice: LatticeExpr,
    pub v1: Vector,
    pub v2: Vector,
    /// Where the pair was found, e.g. `<2>+U (summands 3, 0)`.
    pub host: String,
}

impl A2Certificate {
    /// Norms 2 and pairing -1, recomputed from scratch.
    pub fn verify_a2(&self) -> bool {
        let g = gram(&self.lattice);
        g.check_dim(&self.v1).is_ok()
            && g.check_dim(&self.v2).is_ok()
            && g.norm(&self.v1) == 2
            && g.norm(&self.v2) == 2
            && g.pairing(&self.v1, &self.v2) == -1
    }

    pub fn verify_cusp(&self) -> bool {
        self.verify_a2()
            && mod3_condition(&self.v1, &self.v2, &gram(&self.lattice)).unwrap_or(false)
    }
}

/// `(v1 - v2).e_i != 0 (mod 3)` for some basis vector `e_i`.
pub fn mod3_condition(v1: &[i64], v2: &[i64], g: &GramMatrix) -> Result<bool, LatticeError> {
    g.check_dim(v1)?;
    g.check_dim(v2)?;
    let diff: Vec<i64> = v1.iter().zip(v2).map(|(a, b)| a - b).collect();
    Ok(g.pairings(&diff).iter().any(|p| p % 3 != 0))
}

struct Block {
    atom: Atom,
    scale: u32,
    offset: usize,
}

fn blocks(expr: &LatticeExpr) -> Vec<Block> {
    let mut offset = 0;
    expr.summands()
        .into_iter()
        .map(|(atom, scale)| {
            let b = Block {
                atom,
                scale,
                offset,
            };
            offset += atom.rank();
            b
        })
        .collect()
}

fn unit(n: usize, k: usize) -> Vector {
    let mut v = vec![0; n];
    v[k] = 1;
    v
}

/// Vectors of square 2 in `U(s)`, by divisor enumeration of `2 s a b = 2`.
pub fn hyperbolic_square_two(scale: u32) -> Vec<Vector> {
    if scale != 1 {
        return Vec::new();
    }
    // a b = 1
    vec![vec![-1, -1], vec![1, 1]]
}

/// Every nonzero vector of l1 norm at most `height`.
fn small_vectors(n: usize, height: u32) -> Vec<Vector> {
    fn rec(k: usize, budget: i64, cur: &mut Vector, out: &mut Vec<Vector>) {
        if k == cur.len() {
            if cur.iter().any(|&x| x != 0) {
                out.push(cur.clone());
            }
            return;
        }
        for x in -budget..=budget {
            cur[k] = x;
            rec(k + 1, budget - x.abs(), cur, out);
        }
        cur[k] = 0;
    }
    let mut out = Vec::new();
    rec(0, i64::from(height), &mut vec![0; n], &mut out);
    out
}

/// Structured search first: a `<2>+U` pair `(e - u1, u1 + u2)`, then adjacent
/// basis roots of D_n, E_n and A_n blocks. Falls back to all 2-roots of l1
/// height at most `height`. Only pairs passing `accept` are returned.
pub fn find_a2_pair_with<F>(expr: &LatticeExpr, height: u32, accept: F) -> Option<A2Certificate>
where
    F: Fn(&GramMatrix, &[i64], &[i64]) -> bool,
{
    let g = gram(expr);
    let n = g.rank();
    let bs = blocks(expr);
    let cert = |v1: Vector, v2: Vector, host: String| A2Certificate {
        lattice: expr.clone(),
        v1,
        v2,
        host,
    };

    // A lone hyperbolic plane: its 2-roots are known exactly.
    if let [b] = bs.as_slice() {
        if b.atom == Atom::U {
            let roots = hyperbolic_square_two(b.scale);
            for x in &roots {
                for y in &roots {
                    if g.pairing(x, y) == -1 && accept(&g, x, y) {
                        return Some(cert(x.clone(), y.clone(), "U".into()));
                    }
                }
            }
            return None;
        }
    }

    let two = bs
        .iter()
        .enumerate()
        .filter(|(_, b)| b.scale == 1 && matches!(b.atom, Atom::A(1) | Atom::Form(2)));
    for (ei, e) in two {
        for (ui, u) in bs.iter().enumerate() {
            if u.atom != Atom::U || u.scale != 1 {
                continue;
            }
            let (e, u1, u2) = (e.offset, u.offset, u.offset + 1);
            let mut v1 = unit(n, e);
            v1[u1] -= 1;
            let mut v2 = unit(n, u1);
            v2[u2] += 1;
            if accept(&g, &v1, &v2) {
                return Some(cert(v1, v2, format!("<2>+U (summands {ei}, {ui})")));
            }
        }
    }

    let root_blocks = bs
        .iter()
        .enumerate()
        .filter(|(_, b)| b.scale == 1 && matches!(b.atom, Atom::D(_) | Atom::E(_)))
        .chain(
            bs.iter()
                .enumerate()
                .filter(|(_, b)| b.scale == 1 && matches!(b.atom, Atom::A(k) if k >= 2)),
        );
    for (bi, b) in root_blocks {
        let r = b.atom.rank();
        for a in 0..r {
            for c in 0..r {
                let (x, y) = (b.offset + a, b.offset + c);
                if g.entry(x, y) != -1 {
                    continue;
                }
                let (v1, v2) = (unit(n, x), unit(n, y));
                if accept(&g, &v1, &v2) {
                    return Some(cert(v1, v2, format!("{} (summand {bi})", b.atom)));
                }
            }
        }
    }

    let roots: Vec<Vector> = small_vectors(n, height)
        .into_iter()
        .filter(|v| g.norm(v) == 2)
        .collect();
    for v1 in &roots {
        let gv1 = g.pairings(v1);
        for v2 in &roots {
            let p: i64 = gv1.iter().zip(v2).map(|(a, b)| a * b).sum();
            if p == -1 && accept(&g, v1, v2) {
                return Some(cert(
                    v1.clone(),
                    v2.clone(),
                    format!("bounded search, height {height}"),
                ));
            }
        }
    }
    None
}

pub fn find_a2_pair(expr: &LatticeExpr) -> Option<A2Certificate> {
    find_a2_pair_with(expr, DEFAULT_HEIGHT, |_, _, _| true)
}

/// Certificate that no two 2-roots pair to -1, by a sweep of `L/2L`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mod2Refutation {
    pub lattice: LatticeExpr,
    /// `2^rank`.
    pub classes: u64,
    /// Classes whose norm is `2 mod 4`.
    pub candidates: usize,
    /// Rank over GF(2) of the span of the candidates.
    pub span_rank: usize,
    /// SHA-256 of the sorted candidate classes (little-endian bit masks).
    pub digest: String,
}

/// Any 2-root lies in a class of `L/2L` with norm `2 mod 4`, and norms mod 4
/// are constant on classes. If the candidate classes span a subspace on
/// which the form is even, no two 2-roots can pair to `-1`.
pub fn refute_a2_mod2(expr: &LatticeExpr) -> Result<Option<Mod2Refutation>, WallError> {
    let g = gram(expr);
    let n = g.rank();
    if n > MAX_REFUTATION_RANK {
        return Err(WallError::RankTooLarge {
            rank: n,
            max: MAX_REFUTATION_RANK,
        });
    }
    let classes = 1u64 << n;
    let decode = |mask: u64| -> Vector { (0..n).map(|k| ((mask >> k) & 1) as i64).collect() };
    let candidates: Vec<u64> = (0..classes)
        .filter(|&m| g.norm(&decode(m)).rem_euclid(4) == 2)
        .collect();

    // GF(2) basis of the candidate span.
    let mut basis: Vec<u64> = Vec::new();
    for &c in &candidates {
        let mut x = c;
        for &b in &basis {
            let top = 63 - b.leading_zeros();
            if (x >> top) & 1 == 1 {
                x ^= b;
            }
        }
        if x != 0 {
            basis.push(x);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    let vs: Vec<Vector> = basis.iter().map(|&b| decode(b)).collect();
    let isotropic = vs
        .iter()
        .enumerate()
        .all(|(k, x)| vs[k..].iter().all(|y| g.pairing(x, y).rem_euclid(2) == 0));
    if !isotropic {
        return Ok(None);
    }

    let mut hasher = Sha256::new();
    for c in &candidates {
        hasher.update(c.to_le_bytes());
    }
    let digest = hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    Ok(Some(Mod2Refutation {
        lattice: expr.clone(),
        classes,
        candidates: candidates.len(),
        span_rank: basis.len(),
        digest,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum CuspVerdict {
    Yes(A2Certificate),
    No(Mod2Refutation),
    Unknown { height: u32 },
}

impl CuspVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Self::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Self::No(_))
    }
}

/// Decides whether the wall between `a` and `b` has a cuspidal stratum.
pub fn cusp_stratum(
    atlas: &Atlas,
    a: VertexId,
    b: VertexId,
    height: u32,
) -> Result<CuspVerdict, WallError> {
    let edge = atlas.edge(a, b).ok_or(WallError::NotAdjacent(a, b))?;
    let lower = atlas.vertex(edge.to).ok_or(WallError::NotAdjacent(a, b))?;
    let lattice = match edge.kind {
        MoveKind::R | MoveKind::RInverse => &lower.m_minus,
        MoveKind::L | MoveKind::LInverse => &lower.m_plus0,
    };
    let found = find_a2_pair_with(lattice, height, |g, v1, v2| {
        mod3_condition(v1, v2, g).unwrap_or(false)
    });
    if let Some(c) = found {
        return Ok(CuspVerdict::Yes(c));
    }
    match refute_a2_mod2(lattice) {
        Ok(Some(r)) => Ok(CuspVerdict::No(r)),
        Ok(None) | Err(WallError::RankTooLarge { .. }) => Ok(CuspVerdict::Unknown { height }),
        Err(e) => Err(e),
    }
}

/// Verdicts on every R-edge of the atlas, keyed by `(from, to)`.
pub fn r_wall_verdicts(
    atlas: &Atlas,
    height: u32,
) -> Result<BTreeMap<(VertexId, VertexId), CuspVerdict>, WallError> {
    atlas
        .edges
        .iter()
        .filter(|e| e.kind == MoveKind::R)
        .map(|e| Ok(((e.from, e.to), cusp_stratum(atlas, e.from, e.to, height)?)))
        .collect()
}

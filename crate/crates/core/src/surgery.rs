//! Framed-link surgery at the level of linking matrices: first homology,
//! Kirby moves, abelianized group presentations and the spiral-curve
//! computation of a Seifert real locus.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Serialize, Serializer};

use crate::lattice::{smith_normal_form, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SurgeryError {
    #[error("linking matrix must be square and symmetric")]
    NotSymmetric,
    #[error("component {0} out of range")]
    OutOfRange(usize),
    #[error("cannot slide component {0} over itself")]
    SelfSlide(usize),
    #[error("blow-down needs framing +1 or -1 on component {index}, found {framing}")]
    InvalidBlowDown { index: usize, framing: i64 },
    #[error("sign must be +1 or -1, got {0}")]
    BadSign(i64),
    #[error("matrix literal: {0}")]
    Literal(String),
    #[error("presentation syntax at byte {position}: {message}")]
    Presentation { position: usize, message: String },
    #[error("not unimodular")]
    NotUnimodular,
    #[error("step failed: {0}")]
    Check(String),
}

/// Finitely generated abelian group `Z^free + Z/t_1 + ... + Z/t_k` with
/// `t_1 | t_2 | ... | t_k`, all `t_i > 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AbelianGroup {
    pub torsion: Vec<i64>,
    pub free_rank: usize,
}

impl AbelianGroup {
    /// Cokernel of an integer matrix, read off its Smith normal form.
    pub fn cokernel(m: &IntMatrix) -> Self {
        let snf = smith_normal_form(m);
        Self {
            torsion: snf.torsion(),
            free_rank: m.rows() - snf.rank(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> i64 {
        self.torsion.iter().product()
    }
}

/// `Z^2 + Z/2 + Z/6`, or `0`.
impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Framings on the diagonal, linking numbers off it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinkingMatrix(IntMatrix);

impl LinkingMatrix {
    pub fn new(m: IntMatrix) -> Result<Self, SurgeryError> {
        if !m.is_symmetric() {
            return Err(SurgeryError::NotSymmetric);
        }
        Ok(Self(m))
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, SurgeryError> {
        Self::new(IntMatrix::from_rows(rows))
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn components(&self) -> usize {
        self.0.rows()
    }

    pub fn framing(&self, i: usize) -> i64 {
        self.0[(i, i)]
    }

    /// `P^T M P` for unimodular `P`.
    pub fn congruence(&self, p: &IntMatrix) -> Result<Self, SurgeryError> {
        if !p.is_square() || p.rows() != self.components() || p.determinant().abs() != 1 {
            return Err(SurgeryError::NotUnimodular);
        }
        Ok(Self(self.0.congruence(p)))
    }
}

impl fmt::Display for LinkingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for LinkingMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.to_rows().serialize(s)
    }
}

/// JSON array syntax, `[[-4,2],[2,-2]]`; the Unicode minus sign is accepted.
impl FromStr for LinkingMatrix {
    type Err = SurgeryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let normalized = s.replace('−', "-");
        let rows: Vec<Vec<i64>> =
            serde_json::from_str(&normalized).map_err(|e| SurgeryError::Literal(e.to_string()))?;
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(SurgeryError::Literal(format!(
                "expected a square matrix, got {s}"
            )));
        }
        Self::from_rows(&rows)
    }
}

pub fn h1_from_linking(m: &LinkingMatrix) -> AbelianGroup {
    AbelianGroup::cokernel(m.matrix())
}

fn check_sign(sign: i64) -> Result<(), SurgeryError> {
    match sign {
        1 | -1 => Ok(()),
        s => Err(SurgeryError::BadSign(s)),
    }
}

/// Adds an unlinked unknot with framing `sign`.
pub fn blow_up(m: &LinkingMatrix, sign: i64) -> Result<LinkingMatrix, SurgeryError> {
    check_sign(sign)?;
    Ok(LinkingMatrix(m.0.direct_sum(&IntMatrix::diagonal(&[sign]))))
}

/// The transvection `E = I + k e_j e_i^T`, adding `k` times column `j` to column `i`.
fn transvection(n: usize, i: usize, j: usize, k: i64) -> IntMatrix {
    let mut e = IntMatrix::identity(n);
    e[(j, i)] = k;
    e
}

fn check_pair(m: &LinkingMatrix, i: usize, j: usize) -> Result<(), SurgeryError> {
    let n = m.components();
    if i >= n {
        return Err(SurgeryError::OutOfRange(i));
    }
    if j >= n {
        return Err(SurgeryError::OutOfRange(j));
    }
    if i == j {
        return Err(SurgeryError::SelfSlide(i));
    }
    Ok(())
}

/// Slides component `i` over component `j`: `E^T M E` with `E` adding
/// `sign` times column `j` to column `i`.
pub fn slide(
    m: &LinkingMatrix,
    i: usize,
    j: usize,
    sign: i64,
) -> Result<LinkingMatrix, SurgeryError> {
    check_sign(sign)?;
    check_pair(m, i, j)?;
    Ok(LinkingMatrix(m.0.congruence(&transvection(
        m.components(),
        i,
        j,
        sign,
    ))))
}

/// Unlinks everything from the `±1`-framed component `k` by slides, then
/// deletes it.
pub fn blow_down(m: &LinkingMatrix, k: usize) -> Result<LinkingMatrix, SurgeryError> {
    let n = m.components();
    if k >= n {
        return Err(SurgeryError::OutOfRange(k));
    }
    let f = m.framing(k);
    if f.abs() != 1 {
        return Err(SurgeryError::InvalidBlowDown {
            index: k,
            framing: f,
        });
    }
    let mut cur = m.clone();
    for l in (0..n).filter(|&l| l != k) {
        // e_l - (m_lk / m_kk) e_k is orthogonal to e_k.
        let c = cur.0[(l, k)] * f;
        let sign = if c > 0 { -1 } else { 1 };
        for _ in 0..c.abs() {
            cur = slide(&cur, l, k, sign)?;
        }
    }
    let keep: Vec<usize> = (0..n).filter(|&l| l != k).collect();
    let rows: Vec<Vec<i64>> = keep
        .iter()
        .map(|&a| keep.iter().map(|&b| cur.0[(a, b)]).collect())
        .collect();
    if rows.is_empty() {
        return Ok(LinkingMatrix(IntMatrix::zeros(0, 0)));
    }
    LinkingMatrix::from_rows(&rows)
}

/// Change of basis of the link: a Kirby slide, a relabelling, or an
/// orientation reversal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BasisMove {
    Slide { i: usize, j: usize, sign: i64 },
    Swap(usize, usize),
    Reverse(usize),
}

impl BasisMove {
    pub fn matrix(&self, n: usize) -> IntMatrix {
        match *self {
            Self::Slide { i, j, sign } => transvection(n, i, j, sign),
            Self::Swap(a, b) => {
                let mut e = IntMatrix::identity(n);
                e.swap_cols(a, b);
                e
            }
            Self::Reverse(a) => {
                let mut e = IntMatrix::identity(n);
                e.negate_col(a);
                e
            }
        }
    }

    pub fn apply(&self, m: &LinkingMatrix) -> Result<LinkingMatrix, SurgeryError> {
        match *self {
            Self::Slide { i, j, sign } => slide(m, i, j, sign),
            Self::Swap(a, b) if a.max(b) >= m.components() => {
                Err(SurgeryError::OutOfRange(a.max(b)))
            }
            Self::Reverse(a) if a >= m.components() => Err(SurgeryError::OutOfRange(a)),
            _ => m.congruence(&self.matrix(m.components())),
        }
    }
}

impl fmt::Display for BasisMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Slide { i, j, sign } => {
                let s = if sign > 0 { '+' } else { '-' };
                write!(f, "slide K{} over {s}K{}", i + 1, j + 1)
            }
            Self::Swap(a, b) => write!(f, "relabel K{} <-> K{}", a + 1, b + 1),
            Self::Reverse(a) => write!(f, "reverse K{}", a + 1),
        }
    }
}

/// Writes a unimodular `P` as a product `E_1 E_2 ... E_k` of elementary
/// moves, so that congruence by `P` is the sequence of moves in order.
pub fn factor_unimodular(p: &IntMatrix) -> Result<Vec<BasisMove>, SurgeryError> {
    let n = p.rows();
    if !p.is_square() || p.determinant().abs() != 1 {
        return Err(SurgeryError::NotUnimodular);
    }
    // Column operations C_1, ..., C_k with P C_1 ... C_k = I; then
    // P = C_k^-1 ... C_1^-1.
    let mut a = p.clone();
    let mut ops: Vec<BasisMove> = Vec::new();
    let add = |a: &mut IntMatrix, ops: &mut Vec<BasisMove>, dst: usize, src: usize, k: i64| {
        a.add_col_multiple(dst, src, k);
        let sign = k.signum();
        for _ in 0..k.abs() {
            ops.push(BasisMove::Slide {
                i: dst,
                j: src,
                sign,
            });
        }
    };
    for r in 0..n {
        // Euclid along row r over columns r.., leaving one nonzero entry.
        loop {
            let nonzero: Vec<usize> = (r..n).filter(|&c| a[(r, c)] != 0).collect();
            let piv = *nonzero
                .iter()
                .min_by_key(|&&c| a[(r, c)].abs())
                .ok_or(SurgeryError::NotUnimodular)?;
            if nonzero.len() == 1 {
                if piv != r {
                    a.swap_cols(r, piv);
                    ops.push(BasisMove::Swap(r, piv));
                }
                break;
            }
            for &c in nonzero.iter().filter(|&&c| c != piv) {
                let q = Integer::div_floor(&a[(r, c)], &a[(r, piv)]);
                add(&mut a, &mut ops, c, piv, -q);
            }
        }
        if a[(r, r)] == -1 {
            a.negate_col(r);
            ops.push(BasisMove::Reverse(r));
        } else if a[(r, r)] != 1 {
            return Err(SurgeryError::NotUnimodular);
        }
    }
    // Now lower unitriangular; clear below the diagonal.
    for j in 0..n {
        for i in j + 1..n {
            let k = a[(i, j)];
            if k != 0 {
                add(&mut a, &mut ops, j, i, -k);
            }
        }
    }
    debug_assert_eq!(a, IntMatrix::identity(n));
    Ok(ops
        .into_iter()
        .rev()
        .map(|op| match op {
            BasisMove::Slide { i, j, sign } => BasisMove::Slide { i, j, sign: -sign },
            other => other,
        })
        .collect())
}

/// Finitely presented group; relations are kept both as words and as
/// exponent-sum vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupPresentation {
    pub generators: Vec<char>,
    pub relations: Vec<Vec<i64>>,
    pub words: Vec<String>,
}

impl GroupPresentation {
    /// Relators given directly as exponent-sum vectors.
    pub fn from_exponents(
        generators: usize,
        relations: Vec<Vec<i64>>,
    ) -> Result<Self, SurgeryError> {
        if generators > 26 {
            return Err(SurgeryError::Literal(format!("{generators} generators")));
        }
        if let Some(r) = relations.iter().find(|r| r.len() != generators) {
            return Err(SurgeryError::Literal(format!(
                "relation of length {} for {generators} generators",
                r.len()
            )));
        }
        let generators: Vec<char> = (b'a'..).take(generators).map(char::from).collect();
        let words = relations
            .iter()
            .map(|r| {
                let w: Vec<String> = r
                    .iter()
                    .zip(&generators)
                    .filter(|(e, _)| **e != 0)
                    .map(|(e, g)| {
                        if *e == 1 {
                            g.to_string()
                        } else {
                            format!("{g}^{e}")
                        }
                    })
                    .collect();
                if w.is_empty() {
                    "1".to_string()
                } else {
                    w.join("")
                }
            })
            .collect();
        Ok(Self {
            generators,
            relations,
            words,
        })
    }

    /// One generator per component, one relation per row.
    pub fn from_linking(m: &LinkingMatrix) -> Self {
        Self::from_exponents(m.components(), m.matrix().to_rows())
            .expect("row length equals component count")
    }

    /// `<a,b,c | a^2=b^4=c^6=abc>`. Generators are single letters;
    /// `x^k` raises to an integer power, `1` is the empty word, a chain
    /// `w_0 = ... = w_k` yields the relators `w_t w_k^-1`, and a bare word
    /// is a relator. Angle brackets may be `<>` or `⟨⟩`; `∅` or nothing
    /// after `|` means no relations.
    pub fn parse(s: &str) -> Result<Self, SurgeryError> {
        let err = |position: usize, message: &str| SurgeryError::Presentation {
            position,
            message: message.to_string(),
        };
        let t = s.trim();
        let inner = t
            .strip_prefix('<')
            .and_then(|x| x.strip_suffix('>'))
            .or_else(|| t.strip_prefix('⟨').and_then(|x| x.strip_suffix('⟩')))
            .ok_or_else(|| err(0, "expected <generators | relations>"))?;
        let offset = s.find(inner).unwrap_or(0);
        let bar = inner.find('|').ok_or_else(|| err(offset, "missing '|'"))?;
        let mut generators = Vec::new();
        for g in inner[..bar].split(',') {
            let g = g.trim();
            let mut chars = g.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) if c.is_ascii_lowercase() && !generators.contains(&c) => {
                    generators.push(c)
                }
                _ => return Err(err(offset, &format!("bad generator '{g}'"))),
            }
        }
        let rel_text = inner[bar + 1..].trim();
        let mut relations = Vec::new();
        let mut words = Vec::new();
        if !rel_text.is_empty() && rel_text != "∅" {
            let base = offset + bar + 1 + inner[bar + 1..].find(rel_text).unwrap_or(0);
            let mut pos = base;
            for rel in rel_text.split(',') {
                let mut chain = Vec::new();
                let mut p = pos;
                for w in rel.split('=') {
                    chain.push(parse_word(w, &generators, p)?);
                    p += w.len() + 1;
                }
                let last = chain.last().expect("split yields one piece").clone();
                if chain.len() == 1 {
                    relations.push(last);
                    words.push(rel.trim().to_string());
                } else {
                    let rhs = rel.split('=').next_back().unwrap_or("").trim();
                    for (w, text) in chain[..chain.len() - 1].iter().zip(rel.split('=')) {
                        relations.push(w.iter().zip(&last).map(|(a, b)| a - b).collect());
                        words.push(format!("{} = {rhs}", text.trim()));
                    }
                }
                pos += rel.len() + 1;
            }
        }
        Ok(Self {
            generators,
            relations,
            words,
        })
    }

    pub fn exponent_matrix(&self) -> IntMatrix {
        if self.relations.is_empty() {
            return IntMatrix::zeros(0, self.generators.len());
        }
        IntMatrix::from_rows(&self.relations)
    }
}

fn parse_word(w: &str, generators: &[char], start: usize) -> Result<Vec<i64>, SurgeryError> {
    let mut v = vec![0i64; generators.len()];
    let bytes: Vec<(usize, char)> = w.char_indices().collect();
    let mut k = 0;
    let err = |at: usize, message: String| SurgeryError::Presentation {
        position: start + at,
        message,
    };
    let mut seen = false;
    while k < bytes.len() {
        let (at, c) = bytes[k];
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        if c == '1' && !seen {
            seen = true;
            k += 1;
            continue;
        }
        let g = generators
            .iter()
            .position(|&g| g == c)
            .ok_or_else(|| err(at, format!("unknown generator '{c}'")))?;
        seen = true;
        k += 1;
        let mut exp = 1i64;
        if k < bytes.len() && bytes[k].1 == '^' {
            k += 1;
            let from = k;
            if k < bytes.len() && bytes[k].1 == '-' {
                k += 1;
            }
            while k < bytes.len() && bytes[k].1.is_ascii_digit() {
                k += 1;
            }
            let text: String = bytes[from..k].iter().map(|(_, c)| c).collect();
            exp = text.parse().map_err(|_| {
                err(
                    bytes.get(from).map_or(w.len(), |b| b.0),
                    "bad exponent".into(),
                )
            })?;
        }
        v[g] += exp;
    }
    if !seen {
        return Err(err(0, "empty word".into()));
    }
    Ok(v)
}

impl FromStr for GroupPresentation {
    type Err = SurgeryError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

/// Abelianization: cokernel of the transposed relation exponent matrix.
pub fn abelianization(p: &GroupPresentation) -> AbelianGroup {
    AbelianGroup::cokernel(&p.exponent_matrix().transpose())
}

/// The torus framing of a `(p, q)`-torus knot.
pub fn torus_framing(p: i64, q: i64) -> i64 {
    p * q
}

/// Framing induced on each lift of `K` by a framing `n` of `K`, in the
/// double cover branched along the spiral curve.
pub fn lifted_framing(n: i64) -> i64 {
    n - 2
}

/// Linking number of two components of the `(p, q)`-torus link with
/// `gcd(p, q)` components.
pub fn torus_link_linking(p: i64, q: i64) -> i64 {
    let d = p.gcd(&q);
    (p / d) * (q / d)
}

/// Intersection number on the torus in the basis `(l_1, l_2)`, `l_1 . l_2 = 1`.
fn torus_intersection(x: [i64; 2], y: [i64; 2]) -> i64 {
    x[0] * y[1] - x[1] * y[0]
}

/// Coordinates of `v` in the basis `(b_0, b_1)` of `Z^2`, if it is one.
fn coordinates(v: [i64; 2], b0: [i64; 2], b1: [i64; 2]) -> Option<[i64; 2]> {
    let det = b0[0] * b1[1] - b0[1] * b1[0];
    if det.abs() != 1 {
        return None;
    }
    let x = (v[0] * b1[1] - v[1] * b1[0]) * det;
    let y = (b0[0] * v[1] - b0[1] * v[0]) * det;
    Some([x, y])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpiralStep {
    pub description: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<LinkingMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h1: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpiralReport {
    /// `[L] = p [l_1] + q [l_2]`.
    pub curve_class: (i64, i64),
    /// `[L]` in the basis `([m_+], -[l_1])`.
    pub curve_in_plus_basis: (i64, i64),
    pub k_framing: i64,
    pub lifted_framings: (i64, i64),
    pub lift_linking: i64,
    pub initial: LinkingMatrix,
    pub final_diagram: LinkingMatrix,
    pub steps: Vec<SpiralStep>,
    pub h1_linking: AbelianGroup,
    pub h1_presentation: AbelianGroup,
    pub seifert_presentation: GroupPresentation,
}

impl SpiralReport {
    pub fn routes_agree(&self) -> bool {
        self.h1_linking == self.h1_presentation
    }
}

impl fmt::Display for SpiralReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, s) in self.steps.iter().enumerate() {
            write!(f, "{:>2}. {}", k + 1, s.description)?;
            if let Some(m) = &s.matrix {
                write!(f, "  {m}")?;
            }
            if let Some(h) = &s.h1 {
                write!(f, "  H1 = {h}")?;
            }
            writeln!(f)?;
        }
        let agree = if self.routes_agree() {
            "two routes agree"
        } else {
            "ROUTES DISAGREE"
        };
        write!(f, "H1 = {} ({agree})", self.h1_linking)
    }
}

/// Star-shaped plumbing: central `(-1)` with arms `(-2)`, `(-4)`, `(-6)`.
pub fn seifert_star() -> LinkingMatrix {
    LinkingMatrix::from_rows(&[[-1, 1, 1, 1], [1, -2, 0, 0], [1, 0, -4, 0], [1, 0, 0, -6]])
        .expect("symmetric literal")
}

/// Basis change taking the twice blown-up diagram to [`seifert_star`].
pub const STAR_CHANGE: [[i64; 4]; 4] = [[0, 0, -1, 1], [0, 0, -1, 0], [-1, 1, 1, 1], [0, -1, 1, 1]];

/// The spiral curve `[L] = [l_2] - 3[l_1]` on the hyperboloid, followed from
/// the torus classes through the branched cover to a Seifert link diagram,
/// with `H_1` recomputed after every move.
pub fn spiral_scenario() -> Result<SpiralReport, SurgeryError> {
    let fail = |s: String| SurgeryError::Check(s);
    let mut steps = Vec::new();
    let note = |steps: &mut Vec<SpiralStep>, d: String, m: Option<&LinkingMatrix>| {
        steps.push(SpiralStep {
            description: d,
            h1: m.map(|m| h1_from_linking(m).to_string()),
            matrix: m.cloned(),
        });
    };

    let (p, q) = (-3i64, 1i64);
    let allowed = [-3, -1, 1, 3];
    if !allowed.contains(&p) || !allowed.contains(&q) || p.gcd(&q) != 1 {
        return Err(fail(format!(
            "[L] = {p}[l1] + {q}[l2] violates the Bezout constraint"
        )));
    }
    note(
        &mut steps,
        format!("[L] = {p}[l1] + {q}[l2]: p, q in {{±1, ±3}}, coprime, so L is connected"),
        None,
    );

    let (l1, l2) = ([1, 0], [0, 1]);
    let m_plus = [1, 1];
    let m_minus = [1, -1];
    if torus_intersection(l1, l2) != 1 || torus_intersection(m_plus, l1) != -1 {
        return Err(fail(
            "m_+ . l_1 must be -1 for P_+ and T_1 to form S^3".into(),
        ));
    }
    let basis = (m_plus, [-1, 0]);
    let l = [p, q];
    let lc = coordinates(l, basis.0, basis.1)
        .ok_or_else(|| fail("([m+], -[l1]) is not a basis".into()))?;
    if lc != [1, 4] {
        return Err(fail(format!("[L] has coordinates {lc:?}, expected (1, 4)")));
    }
    note(
        &mut steps,
        "[L] = [l2] - 3[l1] = [m+] - 4[l1]: a (4,1)-torus knot in the exterior of K".into(),
        None,
    );
    let mc = coordinates(m_minus, basis.0, basis.1).ok_or_else(|| fail("basis".into()))?;
    if mc[0].abs() != 1 {
        return Err(fail("m_- is not a longitude of K".into()));
    }
    // Up to sign m_- = m_+ + n l_1, and n is the framing of K.
    let k_framing = -mc[0] * mc[1];
    if mc != [-1, -2] || k_framing != -2 {
        return Err(fail(format!("[m-] has coordinates {mc:?}")));
    }
    note(
        &mut steps,
        "[m-] = -[m+] + 2[l1]: P is (-2)-surgery on K, D(P_+) is 0-surgery".into(),
        None,
    );

    if torus_framing(4, 1) != 4 || torus_framing(2, 1) != 2 {
        return Err(fail("torus framings".into()));
    }
    let lifted = (lifted_framing(k_framing), lifted_framing(0));
    let lift_linking = torus_link_linking(4, 2);
    note(
        &mut steps,
        format!(
            "K lifts to the (4,2)-torus link K1, K2 of (2,1)-torus knots: framings n - 2 give n1 = {}, n2 = {}, lk(K1, K2) = {lift_linking}",
            lifted.0, lifted.1
        ),
        None,
    );
    if lifted != (-4, -2) || lift_linking != 2 {
        return Err(fail(format!(
            "lifted data {lifted:?}, linking {lift_linking}"
        )));
    }

    let initial = LinkingMatrix::from_rows(&[[lifted.0, lift_linking], [lift_linking, -2]])?;
    let h1 = h1_from_linking(&initial);
    note(&mut steps, "surgery on K1, K2".into(), Some(&initial));

    let mut cur = blow_up(&initial, -1)?;
    note(&mut steps, "blow up a (-1)-unknot".into(), Some(&cur));
    cur = blow_up(&cur, -1)?;
    note(
        &mut steps,
        "blow up a second (-1)-unknot".into(),
        Some(&cur),
    );
    for mv in factor_unimodular(&IntMatrix::from_rows(&STAR_CHANGE))? {
        cur = mv.apply(&cur)?;
        note(&mut steps, mv.to_string(), Some(&cur));
    }
    for s in &steps {
        if let Some(h) = &s.h1 {
            if *h != h1.to_string() {
                return Err(fail(format!("H1 changed to {h} at '{}'", s.description)));
            }
        }
    }
    let star = seifert_star();
    if cur != star {
        return Err(fail(format!("final diagram {cur} is not the Seifert star")));
    }
    note(
        &mut steps,
        "star diagram: central (-1) with arms (-2), (-4), (-6)".into(),
        None,
    );

    let seifert = GroupPresentation::parse("<a,b,c | a^2=b^4=c^6=abc>")?;
    let h1_presentation = abelianization(&seifert);
    note(
        &mut steps,
        format!("abelianization of <a,b,c | a^2=b^4=c^6=abc> = {h1_presentation}"),
        None,
    );
    let report = SpiralReport {
        curve_class: (p, q),
        curve_in_plus_basis: (lc[0], lc[1]),
        k_framing,
        lifted_framings: lifted,
        lift_linking,
        initial,
        final_diagram: cur,
        steps,
        h1_linking: h1,
        h1_presentation,
        seifert_presentation: seifert,
    };
    if !report.routes_agree() {
        return Err(fail(format!(
            "linking matrix gives {}, presentation gives {}",
            report.h1_linking, report.h1_presentation
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lm(s: &str) -> LinkingMatrix {
        s.parse().unwrap()
    }

    #[test]
    fn documented_homology() {
        assert_eq!(
            h1_from_linking(&lm("[[−4,2],[2,−2]]")).to_string(),
            "Z/2 + Z/2"
        );
        assert_eq!(h1_from_linking(&lm("[[0]]")).to_string(), "Z");
        assert!(h1_from_linking(&lm("[[1]]")).is_trivial());
        assert_eq!(h1_from_linking(&lm("[[0,0],[0,6]]")).to_string(), "Z + Z/6");
        assert!(matches!(
            "[[1,2],[3,4]]".parse::<LinkingMatrix>(),
            Err(SurgeryError::NotSymmetric)
        ));
        assert!("[[1,2]]".parse::<LinkingMatrix>().is_err());
        assert!("[[1,".parse::<LinkingMatrix>().is_err());
    }

    #[test]
    fn moves() {
        let a = lm("[[-4,2],[2,-2]]");
        let b = blow_up(&a, -1).unwrap();
        assert_eq!(b, lm("[[-4,2,0],[2,-2,0],[0,0,-1]]"));
        assert_eq!(blow_down(&b, 2).unwrap(), a);
        assert!(blow_up(&a, 2).is_err());
        let s = slide(&a, 0, 1, 1).unwrap();
        assert_eq!(s.framing(0), -4 - 2 + 4);
        assert_eq!(h1_from_linking(&s), h1_from_linking(&a));
        assert_eq!(slide(&a, 1, 1, 1), Err(SurgeryError::SelfSlide(1)));
        assert_eq!(
            blow_down(&a, 0),
            Err(SurgeryError::InvalidBlowDown {
                index: 0,
                framing: -4
            })
        );
        // A linked (+1) unknot: blowing down changes the other framing by -lk^2.
        let linked = lm("[[3,2],[2,1]]");
        assert_eq!(blow_down(&linked, 1).unwrap(), lm("[[-1]]"));
    }

    #[test]
    fn factorization_reproduces_matrix() {
        let p = IntMatrix::from_rows(&STAR_CHANGE);
        let ops = factor_unimodular(&p).unwrap();
        let n = 4;
        let prod = ops
            .iter()
            .fold(IntMatrix::identity(n), |acc, op| &acc * &op.matrix(n));
        assert_eq!(prod, p);
        assert!(factor_unimodular(&IntMatrix::diagonal(&[2, 1])).is_err());
    }

    #[test]
    fn presentations() {
        let g = GroupPresentation::parse("<a,b,c | a^2=b^4=c^6=abc>").unwrap();
        let full = GroupPresentation::parse("⟨a,b,c | a^2=abc, b^4=abc, c^6=abc⟩").unwrap();
        assert_eq!(
            full.relations,
            vec![vec![1, -1, -1], vec![-1, 3, -1], vec![-1, -1, 5]]
        );
        assert_eq!(
            smith_normal_form(&full.exponent_matrix()).diagonal,
            vec![1, 2, 2]
        );
        assert_eq!(abelianization(&full).to_string(), "Z/2 + Z/2");
        assert_eq!(g.relations, full.relations);
        assert!(abelianization(&"<a | a>".parse().unwrap()).is_trivial());
        assert_eq!(
            abelianization(&"<a,b | ∅>".parse().unwrap()).to_string(),
            "Z^2"
        );
        assert_eq!(
            abelianization(&"<a,b | >".parse().unwrap()).to_string(),
            "Z^2"
        );
        assert_eq!(
            abelianization(&"<a,b | a^-3b^3, 1>".parse().unwrap()).to_string(),
            "Z + Z/3"
        );
        assert!(GroupPresentation::parse("<a | b>").is_err());
        assert!(GroupPresentation::parse("<a,a | a>").is_err());
        assert!(GroupPresentation::parse("a | a").is_err());
        assert!(GroupPresentation::parse("<a | a^>").is_err());
    }

    #[test]
    fn framings() {
        assert_eq!(torus_framing(4, 1), 4);
        assert_eq!(torus_framing(2, 1), 2);
        assert_eq!(torus_framing(1, 1), 1);
        assert_eq!(lifted_framing(-2), -4);
        assert_eq!(lifted_framing(0), -2);
        assert_eq!(lifted_framing(2), 0);
        assert_eq!(torus_link_linking(4, 2), 2);
    }

    #[test]
    fn spiral() {
        let r = spiral_scenario().unwrap();
        assert_eq!(r.curve_in_plus_basis, (1, 4));
        assert_eq!(r.k_framing, -2);
        assert_eq!(r.initial, lm("[[-4,2],[2,-2]]"));
        assert_eq!(r.final_diagram, seifert_star());
        assert_eq!(r.h1_linking.to_string(), "Z/2 + Z/2");
        let text = r.to_string();
        assert_eq!(
            text.lines().last().unwrap(),
            "H1 = Z/2 + Z/2 (two routes agree)"
        );
        let with_h1 = r.steps.iter().filter(|s| s.h1.is_some()).count();
        assert!(with_h1 >= 4);
        assert!(r
            .steps
            .iter()
            .filter_map(|s| s.h1.as_deref())
            .all(|h| h == "Z/2 + Z/2"));
    }
}

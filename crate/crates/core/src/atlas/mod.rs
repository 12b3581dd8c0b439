//! The graph of coarse deformation classes, with eigenlattice data per vertex.
//!
//! A vertex `C^{i,j}` carries the eigenlattices `M_+^0` and `M_-` of the
//! conjugation involution. Its coordinates are tied to the lattices by
//! `r = rank M_-`, `d = ` 2-rank of the discriminant group, and
//! `i = (22 - r - d)/2`, `j = (r - d)/2`.

mod export;
mod k3;
pub mod tables;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::lattice::{discriminant_form, discriminant_group, gram, LatticeError, LatticeExpr};
use crate::wall_crossing::MoveKind;

pub use export::{to_dot, to_json};
pub use k3::SurfaceDescriptor;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GraphKind {
    K4,
    K3,
}

impl FromStr for GraphKind {
    type Err = AtlasError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "k4" => Ok(Self::K4),
            "k3" => Ok(Self::K3),
            _ => Err(AtlasError::Parse(format!("unknown graph kind {s:?}"))),
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::K4 => "K4",
            Self::K3 => "K3",
        })
    }
}

/// `C^{i,j}`, or `C^{i,j}_I` when `special`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId {
    pub i: u32,
    pub j: u32,
    pub special: bool,
}

impl VertexId {
    pub const fn principal(i: u32, j: u32) -> Self {
        Self {
            i,
            j,
            special: false,
        }
    }

    pub const fn special(i: u32, j: u32) -> Self {
        Self {
            i,
            j,
            special: true,
        }
    }

    /// Identifier used in DOT output: `C3_2` or `C3_2_I`.
    pub fn dot_id(&self) -> String {
        let suffix = if self.special { "_I" } else { "" };
        format!("C{}_{}{}", self.i, self.j, suffix)
    }
}

/// Formats as `C3,2` or `C3,2_I`, the form accepted on the command line.
impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{},{}", self.i, self.j)?;
        if self.special {
            write!(f, "_I")?;
        }
        Ok(())
    }
}

impl FromStr for VertexId {
    type Err = AtlasError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || AtlasError::Parse(format!("expected C<i>,<j> or C<i>,<j>_I, got {s:?}"));
        let body = s.trim().strip_prefix('C').ok_or_else(bad)?;
        let (body, special) = match body.strip_suffix("_I") {
            Some(b) => (b, true),
            None => (body, false),
        };
        let (i, j) = body.split_once(',').ok_or_else(bad)?;
        let i = i.trim().parse().map_err(|_| bad())?;
        let j = j.trim().parse().map_err(|_| bad())?;
        Ok(Self { i, j, special })
    }
}

impl Serialize for VertexId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VertexId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexType {
    I,
    II,
}

impl fmt::Display for VertexType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::I => "I",
            Self::II => "II",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexData {
    pub id: VertexId,
    pub m_plus0: LatticeExpr,
    pub m_minus: LatticeExpr,
    pub r: u32,
    pub d: u32,
    pub vertex_type: VertexType,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Adjacency stated explicitly by the classification.
    Asserted,
    /// Adjacency read off the coordinate grid.
    GridInferred,
}

/// Oriented from the larger `d` to the smaller.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub from: VertexId,
    pub to: VertexId,
    pub kind: MoveKind,
    pub provenance: Provenance,
    pub note: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Atlas {
    pub kind: GraphKind,
    pub vertices: Vec<VertexData>,
    pub edges: Vec<Edge>,
    /// K3 only: real loci of the classes matched with K4 vertices.
    pub k3_real_locus: BTreeMap<VertexId, SurfaceDescriptor>,
    /// K3 only: the lattice `L_+` where it is needed.
    pub k3_l_plus: BTreeMap<VertexId, LatticeExpr>,
}

impl Atlas {
    pub fn vertex(&self, id: VertexId) -> Option<&VertexData> {
        self.vertices
            .binary_search_by(|v| v.id.cmp(&id))
            .ok()
            .map(|k| &self.vertices[k])
    }

    /// The edge joining `a` and `b` in either orientation.
    pub fn edge(&self, a: VertexId, b: VertexId) -> Option<&Edge> {
        self.edges
            .iter()
            .find(|e| (e.from == a && e.to == b) || (e.from == b && e.to == a))
    }

    pub fn principal_count(&self) -> usize {
        self.vertices.iter().filter(|v| !v.id.special).count()
    }

    pub fn special_count(&self) -> usize {
        self.vertices.iter().filter(|v| v.id.special).count()
    }

    pub fn edges_into(&self, id: VertexId) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.to == id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AtlasError {
    #[error("{vertex}: {equation}")]
    Invariant { vertex: VertexId, equation: String },
    #[error("{vertex}: M_+^0 gives type {plus}, M_- gives type {minus}")]
    TypeMismatch {
        vertex: VertexId,
        plus: VertexType,
        minus: VertexType,
    },
    #[error("{0}")]
    Lattice(#[from] LatticeError),
    #[error("{0}")]
    Parse(String),
}

fn make_vertex(id: VertexId, m_plus0: LatticeExpr, m_minus: LatticeExpr) -> VertexData {
    let g = gram(&m_minus);
    let d = discriminant_group(&g)
        .expect("table lattices are nondegenerate")
        .two_rank;
    let two_part = discriminant_form(&g)
        .expect("table lattices are nondegenerate")
        .two_part_integer;
    VertexData {
        id,
        r: m_minus.rank() as u32,
        d: d as u32,
        vertex_type: if two_part {
            VertexType::I
        } else {
            VertexType::II
        },
        m_plus0,
        m_minus,
    }
}

fn k4_vertices() -> Vec<VertexData> {
    let mut out: Vec<VertexData> = tables::plus_domain()
        .into_iter()
        .filter_map(|(i, j)| {
            let plus = tables::plus_table(i, j)?;
            let minus = tables::minus_table(i, j)?;
            Some(make_vertex(VertexId::principal(i, j), plus, minus))
        })
        .collect();
    for (i, j, plus, minus) in tables::SPECIAL_ROWS {
        out.push(make_vertex(
            VertexId::special(i, j),
            LatticeExpr::parse(plus).expect("literal"),
            LatticeExpr::parse(minus).expect("literal"),
        ));
    }
    out.sort_by_key(|v| v.id);
    out
}

/// Special vertices reached by an R-move from `C^{i,j-1}`.
const SPECIAL_R_TARGETS: [(u32, u32); 8] = [
    (0, 3),
    (1, 8),
    (1, 4),
    (2, 5),
    (3, 2),
    (4, 3),
    (5, 4),
    (6, 1),
];

fn k4_edges(vertices: &[VertexData]) -> Vec<Edge> {
    let has = |i: u32, j: u32| {
        vertices
            .binary_search_by(|v| v.id.cmp(&VertexId::principal(i, j)))
            .is_ok()
    };
    let mut edges = Vec::new();
    for v in vertices.iter().filter(|v| !v.id.special) {
        let (i, j) = (v.id.i, v.id.j);
        if has(i + 1, j) {
            let (provenance, note) = if j == 0 {
                (Provenance::Asserted, "L-chain along j = 0")
            } else {
                (Provenance::GridInferred, "grid neighbour")
            };
            edges.push(Edge {
                from: v.id,
                to: VertexId::principal(i + 1, j),
                kind: MoveKind::L,
                provenance,
                note,
            });
        }
        if has(i, j + 1) {
            let note = if (i, j) == (10, 0) {
                "terminal attachment"
            } else {
                "R-chain from C^{i,0}"
            };
            edges.push(Edge {
                from: v.id,
                to: VertexId::principal(i, j + 1),
                kind: MoveKind::R,
                provenance: Provenance::Asserted,
                note,
            });
        }
    }
    edges.push(Edge {
        from: VertexId::principal(0, 0),
        to: VertexId::special(1, 0),
        kind: MoveKind::L,
        provenance: Provenance::Asserted,
        note: "birth of a sphere component",
    });
    edges.push(Edge {
        from: VertexId::principal(8, 0),
        to: VertexId::special(9, 0),
        kind: MoveKind::L,
        provenance: Provenance::Asserted,
        note: "L-chain along j = 0",
    });
    for (i, j) in SPECIAL_R_TARGETS {
        edges.push(Edge {
            from: VertexId::principal(i, j - 1),
            to: VertexId::special(i, j),
            kind: MoveKind::R,
            provenance: Provenance::Asserted,
            note: "R-chain from C^{i,0}",
        });
    }
    edges.push(Edge {
        from: VertexId::principal(2, 0),
        to: VertexId::special(2, 1),
        kind: MoveKind::R,
        provenance: Provenance::Asserted,
        note: "terminal attachment",
    });
    edges.sort_by_key(|e| (e.from, e.to));
    edges
}

pub fn build_atlas(kind: GraphKind) -> Atlas {
    let vertices = k4_vertices();
    let edges = k4_edges(&vertices);
    let (k3_real_locus, k3_l_plus) = match kind {
        GraphKind::K4 => (BTreeMap::new(), BTreeMap::new()),
        GraphKind::K3 => (k3::real_loci(), k3::l_plus()),
    };
    Atlas {
        kind,
        vertices,
        edges,
        k3_real_locus,
        k3_l_plus,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VertexInvariants {
    pub r: i64,
    pub d: i64,
    pub i: i64,
    pub j: i64,
    pub b_star: i64,
    pub chi: i64,
}

/// Recomputes `(r, d, i, j, b_*, chi)` from the lattices and checks every
/// relation between them and the vertex label.
pub fn vertex_invariants(v: &VertexData) -> Result<VertexInvariants, AtlasError> {
    let fail = |equation: String| AtlasError::Invariant {
        vertex: v.id,
        equation,
    };
    let gp = gram(&v.m_plus0);
    let gm = gram(&v.m_minus);
    let (rp, rm) = (gp.rank(), gm.rank());
    if rp + rm != 22 {
        return Err(fail(format!("rank M_+^0 + rank M_- = {rp} + {rm} != 22")));
    }
    for (name, g) in [("M_+^0", &gp), ("M_-", &gm)] {
        let s = g.signature()?;
        if s.neg != 1 || s.pos + 1 != g.rank() {
            return Err(fail(format!(
                "signature {name} = ({}, {}), expected ({}, 1)",
                s.pos,
                s.neg,
                g.rank() - 1
            )));
        }
    }
    let dp = discriminant_group(&gp)?.two_rank as i64;
    let dm = discriminant_group(&gm)?.two_rank as i64;
    if dp != dm {
        return Err(fail(format!("2-rank M_+^0 = {dp} != 2-rank M_- = {dm}")));
    }
    let r = rm as i64;
    let d = dm;
    if (22 - r - d) % 2 != 0 || (r - d) % 2 != 0 {
        return Err(fail(format!("r = {r}, d = {d}: r - d is odd")));
    }
    let i = (22 - r - d) / 2;
    let j = (r - d) / 2;
    if i < 0 || j < 0 || i != i64::from(v.id.i) || j != i64::from(v.id.j) {
        return Err(fail(format!(
            "(22 - r - d)/2 = {i}, (r - d)/2 = {j} do not match the label"
        )));
    }
    if i64::from(v.r) != r || i64::from(v.d) != d {
        return Err(fail(format!(
            "stored (r, d) = ({}, {}) but lattices give ({r}, {d})",
            v.r, v.d
        )));
    }
    Ok(VertexInvariants {
        r,
        d,
        i,
        j,
        b_star: 27 - 2 * d,
        chi: 23 - 2 * r,
    })
}

fn type_of(expr: &LatticeExpr) -> Result<VertexType, AtlasError> {
    let f = discriminant_form(&gram(expr))?;
    Ok(if f.two_part_integer {
        VertexType::I
    } else {
        VertexType::II
    })
}

/// Type I iff the discriminant form of `M_-` is integral on its 2-primary
/// part; `M_+^0` must give the same answer.
pub fn classify_type(v: &VertexData) -> Result<VertexType, AtlasError> {
    let minus = type_of(&v.m_minus)?;
    let plus = type_of(&v.m_plus0)?;
    if minus != plus {
        return Err(AtlasError::TypeMismatch {
            vertex: v.id,
            plus,
            minus,
        });
    }
    Ok(minus)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Warn,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub kind: GraphKind,
    pub checks: Vec<Check>,
    pub twin_pairs: usize,
    pub type_one_count: usize,
    pub principal_type_one: Vec<VertexId>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Warn)
    }

    fn push(&mut self, name: &str, ok: bool, detail: String) {
        self.checks.push(Check {
            name: name.into(),
            status: if ok {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            detail,
        });
    }
}

/// Number of twin pairs stated in the classification's prose; the tables give one more.
pub const PROSE_TWIN_PAIRS: usize = 10;

/// Principal type I vertices: the local minima of `d` along the lower boundary.
pub const PRINCIPAL_TYPE_ONE: [VertexId; 5] = [
    VertexId::principal(2, 9),
    VertexId::principal(3, 6),
    VertexId::principal(6, 5),
    VertexId::principal(7, 2),
    VertexId::principal(10, 1),
];

pub fn validate_atlas(a: &Atlas) -> ValidationReport {
    let mut report = ValidationReport {
        kind: a.kind,
        checks: Vec::new(),
        twin_pairs: 0,
        type_one_count: 0,
        principal_type_one: Vec::new(),
    };

    let (p, s) = (a.principal_count(), a.special_count());
    report.push(
        "vertex-count",
        a.vertices.len() == 75 && p == 64 && s == 11,
        format!("{} vertices: {p} principal + {s} special", a.vertices.len()),
    );

    let plus = tables::plus_domain();
    let minus = tables::minus_domain();
    report.push(
        "table-domains-agree",
        plus == minus && plus.len() == 64,
        format!(
            "M_+^0 table: {} pairs, M_- table: {} pairs",
            plus.len(),
            minus.len()
        ),
    );

    let mut bad = Vec::new();
    for v in &a.vertices {
        if let Err(e) = vertex_invariants(v) {
            bad.push(e.to_string());
        }
    }
    report.push(
        "vertex-invariants",
        bad.is_empty(),
        if bad.is_empty() {
            format!(
                "{}/{} vertices consistent",
                a.vertices.len(),
                a.vertices.len()
            )
        } else {
            bad.join("; ")
        },
    );

    let mut types = BTreeMap::new();
    let mut disagreements = Vec::new();
    for v in &a.vertices {
        match classify_type(v) {
            Ok(t) => {
                types.insert(v.id, t);
                if t != v.vertex_type {
                    disagreements.push(format!("{}: stored type differs", v.id));
                }
            }
            Err(e) => disagreements.push(e.to_string()),
        }
    }
    report.push(
        "type-verdicts-agree",
        disagreements.is_empty(),
        if disagreements.is_empty() {
            format!("M_+^0 and M_- agree on {} vertices", types.len())
        } else {
            disagreements.join("; ")
        },
    );

    let is_one = |id: &VertexId| types.get(id) == Some(&VertexType::I);
    report.type_one_count = types.values().filter(|t| **t == VertexType::I).count();
    let special_not_one: Vec<String> = a
        .vertices
        .iter()
        .filter(|v| v.id.special && !is_one(&v.id))
        .map(|v| v.id.to_string())
        .collect();
    report.push(
        "special-vertices-type-I",
        special_not_one.is_empty(),
        if special_not_one.is_empty() {
            format!("all {s} special vertices are type I")
        } else {
            format!("type II: {}", special_not_one.join(", "))
        },
    );

    report.principal_type_one = a
        .vertices
        .iter()
        .filter(|v| !v.id.special && is_one(&v.id))
        .map(|v| v.id)
        .collect();
    let listed: Vec<String> = report
        .principal_type_one
        .iter()
        .map(ToString::to_string)
        .collect();
    report.push(
        "principal-type-I",
        report.principal_type_one == PRINCIPAL_TYPE_ONE,
        format!("{} principal type I: {}", listed.len(), listed.join(", ")),
    );

    let twins: Vec<(VertexId, VertexId)> = a
        .vertices
        .iter()
        .filter(|v| v.id.special)
        .filter_map(|v| {
            let twin = VertexId::principal(v.id.i, v.id.j);
            a.vertex(twin).map(|_| (twin, v.id))
        })
        .collect();
    report.twin_pairs = twins.len();
    let mixed = twins.iter().all(|(x, y)| is_one(x) != is_one(y));
    report.push(
        "twins-split-by-type",
        mixed,
        format!(
            "{} twin pairs, each with exactly one type I member",
            twins.len()
        ),
    );
    report.checks.push(Check {
        name: "twin-count".into(),
        status: if twins.len() == PROSE_TWIN_PAIRS {
            CheckStatus::Pass
        } else {
            CheckStatus::Warn
        },
        detail: format!(
            "tables give {} twin pairs, prose count is {PROSE_TWIN_PAIRS}",
            twins.len()
        ),
    });

    let mut edge_errors = Vec::new();
    for e in &a.edges {
        let (Some(x), Some(y)) = (a.vertex(e.from), a.vertex(e.to)) else {
            edge_errors.push(format!("{} -> {}: missing endpoint", e.from, e.to));
            continue;
        };
        let step = match e.kind {
            MoveKind::L => (x.id.i + 1, x.id.j),
            MoveKind::R => (x.id.i, x.id.j + 1),
            _ => (u32::MAX, u32::MAX),
        };
        if (y.id.i, y.id.j) != step || x.d != y.d + 1 {
            edge_errors.push(format!(
                "{} -> {}: inconsistent with {}",
                e.from, e.to, e.kind
            ));
        }
    }
    report.push(
        "edge-consistency",
        edge_errors.is_empty(),
        if edge_errors.is_empty() {
            format!("{} edges, each decreasing d by one", a.edges.len())
        } else {
            edge_errors.join("; ")
        },
    );

    if a.kind == GraphKind::K3 {
        let mut k3_errors = Vec::new();
        for (id, s) in &a.k3_real_locus {
            match a.vertex(*id) {
                Some(v) if s.k3_coordinates() == Some((i64::from(v.r), i64::from(v.d))) => {}
                Some(v) => k3_errors.push(format!(
                    "{id}: {s} gives (r, d) = {:?}, vertex has ({}, {})",
                    s.k3_coordinates(),
                    v.r,
                    v.d
                )),
                None => k3_errors.push(format!("{id}: no such vertex")),
            }
        }
        report.push(
            "k3-real-loci",
            k3_errors.is_empty(),
            if k3_errors.is_empty() {
                format!(
                    "{} annotated classes match their coordinates",
                    a.k3_real_locus.len()
                )
            } else {
                k3_errors.join("; ")
            },
        );
    }
    report
}

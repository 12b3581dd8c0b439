//! Real loci as `RP^n # handles ⊔ spheres`, Morse modifications on them, and
//! propagation of real loci across the deformation graph.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::atlas::{Atlas, VertexId};
use crate::ramified::{add_unknotted_handle, lift_morse_index};
use crate::wall_crossing::{CuspVerdict, MoveKind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TopologyError {
    #[error("unsupported Morse modification: {0}")]
    Unsupported(String),
    #[error("Morse index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: u32, n: u32 },
    #[error("handle S{p}xS{q} does not fit dimension {n}")]
    DimensionMismatch { p: u32, q: u32, n: u32 },
    #[error("malformed descriptor: {0}")]
    Malformed(String),
    #[error("facet indices are defined on L and R moves only, got {0}")]
    InverseMove(MoveKind),
    #[error("no cusp verdict justifying the R-move {0} -> {1}")]
    MissingCusp(VertexId, VertexId),
    #[error("{vertex}: descriptor gives (r, d) = ({r}, {d}), lattices give ({lr}, {ld})")]
    InvariantMismatch {
        vertex: VertexId,
        r: i64,
        d: i64,
        lr: i64,
        ld: i64,
    },
    #[error("{0} is not a vertex of the atlas or has no derivation")]
    NoDerivation(VertexId),
    #[error("order places {0} before its source {1}")]
    BadOrder(VertexId, VertexId),
}

/// `RP^n # (S^p x S^q) # ... ⊔ S^n ⊔ ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RealLocusDescriptor {
    pub n: u32,
    /// Multiplicities of `S^p x S^q` summands, keyed with `p <= q`.
    #[serde(serialize_with = "handles_as_list")]
    pub handles: BTreeMap<(u32, u32), u32>,
    pub disjoint_spheres: u32,
}

fn handles_as_list<S: serde::Serializer>(
    h: &BTreeMap<(u32, u32), u32>,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.collect_seq(
        h.iter()
            .map(|(&(p, q), &count)| HandleEntry { p, q, count }),
    )
}

#[derive(Serialize)]
struct HandleEntry {
    p: u32,
    q: u32,
    count: u32,
}

impl RealLocusDescriptor {
    pub fn projective(n: u32) -> Self {
        Self {
            n,
            handles: BTreeMap::new(),
            disjoint_spheres: 0,
        }
    }

    /// `RP^4 # i(S^2xS^2) # j(S^1xS^3)`.
    pub fn fourfold(i: u32, j: u32) -> Self {
        let mut d = Self::projective(4);
        d.add_handles(2, 2, i);
        d.add_handles(1, 3, j);
        d
    }

    pub fn add_handles(&mut self, p: u32, q: u32, count: u32) {
        if count > 0 {
            *self.handles.entry((p.min(q), p.max(q))).or_default() += count;
        }
    }

    pub fn handle_count(&self, p: u32, q: u32) -> u32 {
        self.handles
            .get(&(p.min(q), p.max(q)))
            .copied()
            .unwrap_or(0)
    }

    pub fn total_handles(&self) -> u32 {
        self.handles.values().sum()
    }

    pub fn is_connected(&self) -> bool {
        self.disjoint_spheres == 0
    }

    /// Total mod-2 Betti number.
    pub fn b_star(&self) -> i64 {
        i64::from(self.n)
            + 1
            + 2 * i64::from(self.total_handles())
            + 2 * i64::from(self.disjoint_spheres)
    }

    pub fn chi(&self) -> i64 {
        let e = |k: u32| if k.is_multiple_of(2) { 1 } else { -1 };
        let chi_rp = (1 + e(self.n)) / 2;
        let handles: i64 = self
            .handles
            .iter()
            .map(|(&(p, q), &c)| i64::from(c) * ((1 + e(p)) * (1 + e(q)) - (1 + e(self.n))))
            .sum();
        chi_rp + handles + i64::from(self.disjoint_spheres) * (1 + e(self.n))
    }
}

/// `RP4 # 5(S2xS2) # 4(S1xS3)`; summands with larger `p` first, spheres last.
impl fmt::Display for RealLocusDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RP{}", self.n)?;
        for (&(p, q), &c) in self.handles.iter().rev() {
            if c == 1 {
                write!(f, " # (S{p}xS{q})")?;
            } else {
                write!(f, " # {c}(S{p}xS{q})")?;
            }
        }
        for _ in 0..self.disjoint_spheres {
            write!(f, " ⊔ S{}", self.n)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DescriptorInvariants {
    pub b_star: i64,
    pub chi: i64,
    pub r: i64,
    pub d: i64,
    pub i: i64,
    pub j: i64,
}

/// `b_*`, `chi` and, for fourfolds, `r = 11 + (1 - chi)/2`, `d = (27 - b_*)/2`
/// and the coordinates `i = (22 - r - d)/2`, `j = (r - d)/2`.
pub fn descriptor_invariants(
    d: &RealLocusDescriptor,
) -> Result<DescriptorInvariants, TopologyError> {
    if d.n != 4 {
        return Err(TopologyError::Malformed(format!(
            "coordinates need dimension 4, got {}",
            d.n
        )));
    }
    let (b, chi) = (d.b_star(), d.chi());
    if (1 - chi) % 2 != 0 || (27 - b) % 2 != 0 {
        return Err(TopologyError::Malformed(format!("b_* = {b}, chi = {chi}")));
    }
    let r = 11 + (1 - chi) / 2;
    let dc = (27 - b) / 2;
    if (22 - r - dc) % 2 != 0 {
        return Err(TopologyError::Malformed(format!("r = {r}, d = {dc}")));
    }
    Ok(DescriptorInvariants {
        b_star: b,
        chi,
        r,
        d: dc,
        i: (22 - r - dc) / 2,
        j: (r - dc) / 2,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MorseEvent {
    pub index: u32,
    /// The attaching core sphere is null-homologous mod 2.
    pub core_trivial: bool,
}

impl MorseEvent {
    pub fn new(index: u32, core_trivial: bool) -> Self {
        Self {
            index,
            core_trivial,
        }
    }
}

/// Admissible Morse indices of a facet crossed in the direction of the move.
pub fn facet_index_options(
    kind: MoveKind,
    from: VertexId,
    to: VertexId,
) -> Result<BTreeSet<u32>, TopologyError> {
    match kind {
        MoveKind::L if from == VertexId::principal(0, 0) && to == VertexId::special(1, 0) => {
            Ok(BTreeSet::from([0, 4]))
        }
        MoveKind::L => Ok(BTreeSet::from([2])),
        MoveKind::R => Ok(BTreeSet::from([1, 3])),
        k => Err(TopologyError::InverseMove(k)),
    }
}

/// Index 0 adds a sphere component; index 1 on a connected non-orientable
/// locus adds `S^1 x S^(n-1)`; index 2 with a trivial core on a fourfold
/// with fundamental group `Z/2` adds `S^2 x S^2` (the twisted bundle is
/// excluded since `w_2` of a cubic's real locus vanishes).
pub fn apply_morse(
    d: &RealLocusDescriptor,
    e: MorseEvent,
) -> Result<RealLocusDescriptor, TopologyError> {
    if e.index > d.n + 1 {
        return Err(TopologyError::IndexOutOfRange {
            index: e.index,
            n: d.n,
        });
    }
    let mut out = d.clone();
    match e.index {
        0 => out.disjoint_spheres += 1,
        1 if d.is_connected() && d.n.is_multiple_of(2) => out.add_handles(1, d.n - 1, 1),
        2 if d.n == 4
            && e.core_trivial
            && d.is_connected()
            && d.handles.keys().all(|&(p, _)| p != 1) =>
        {
            out.add_handles(2, 2, 1)
        }
        q => {
            return Err(TopologyError::Unsupported(format!(
                "index {q} (core trivial: {}) on {d}",
                e.core_trivial
            )))
        }
    }
    Ok(out)
}

/// How a vertex gets its real locus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Derivation {
    /// `C^{0,0}`: the real locus is `RP^4`.
    Base,
    /// Crossing an atlas edge with a Morse modification of the given index.
    Morse {
        from: VertexId,
        kind: MoveKind,
        index: u32,
    },
    /// Ramified sum adding `S^1xS^3` and `S^p x S^q` to the source.
    UnknottedHandle { from: VertexId, p: u32, q: u32 },
    /// Facet of the branch locus of index `branch_index`, lifted to the double cover.
    Lifted { from: VertexId, branch_index: u32 },
}

impl Derivation {
    pub fn source(&self) -> Option<VertexId> {
        match *self {
            Self::Base => None,
            Self::Morse { from, .. }
            | Self::UnknottedHandle { from, .. }
            | Self::Lifted { from, .. } => Some(from),
        }
    }
}

/// The rule used for each vertex.
pub fn derivation(atlas: &Atlas, id: VertexId) -> Result<Derivation, TopologyError> {
    atlas.vertex(id).ok_or(TopologyError::NoDerivation(id))?;
    let p = VertexId::principal;
    Ok(match (id.i, id.j, id.special) {
        (0, 0, false) => Derivation::Base,
        (1, 0, true) => Derivation::Morse {
            from: p(0, 0),
            kind: MoveKind::L,
            index: 0,
        },
        (2, 1, true) => Derivation::UnknottedHandle {
            from: p(1, 0),
            p: 2,
            q: 2,
        },
        (10, 1, false) => Derivation::Lifted {
            from: p(10, 0),
            branch_index: 0,
        },
        (i, 0, _) => Derivation::Morse {
            from: p(i - 1, 0),
            kind: MoveKind::L,
            index: 2,
        },
        (i, j, _) => Derivation::Morse {
            from: p(i, j - 1),
            kind: MoveKind::R,
            index: 1,
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Assignment {
    pub descriptor: RealLocusDescriptor,
    pub derivation: Derivation,
    /// Steps from the base case, in order.
    pub justification: Vec<String>,
}

pub type Propagation = BTreeMap<VertexId, Assignment>;

fn step_text(atlas_id: VertexId, der: &Derivation, verdict: Option<&CuspVerdict>) -> String {
    match der {
        Derivation::Base => format!("{atlas_id}: RP4 (base case)"),
        Derivation::Morse { from, kind, index } => {
            let mut s = format!("{from} -> {atlas_id}: {kind}-facet, Morse index {index}");
            if let Some(CuspVerdict::Yes(c)) = verdict {
                s.push_str(&format!(", cusp certificate in {}", c.host));
            }
            if *index == 0 {
                s.push_str(", birth of a sphere");
            }
            s
        }
        Derivation::UnknottedHandle { from, p, q } => format!(
            "{from} -> {atlas_id}: ramified sum with unknotted torus, # (S1xS3) # (S{p}xS{q})"
        ),
        Derivation::Lifted { from, branch_index } => format!(
            "{from} -> {atlas_id}: branch-locus index {branch_index} lifts to Morse index {}",
            lift_morse_index(*branch_index)
        ),
    }
}

/// Canonical processing order: sources before targets, ties by vertex id.
pub fn derivation_order(atlas: &Atlas) -> Result<Vec<VertexId>, TopologyError> {
    let mut parents = BTreeMap::new();
    for v in &atlas.vertices {
        parents.insert(v.id, derivation(atlas, v.id)?.source());
    }
    let mut done: BTreeSet<VertexId> = BTreeSet::new();
    let mut order = Vec::new();
    while order.len() < parents.len() {
        let ready: Vec<VertexId> = parents
            .iter()
            .filter(|(id, p)| !done.contains(*id) && p.is_none_or(|p| done.contains(&p)))
            .map(|(id, _)| *id)
            .collect();
        if ready.is_empty() {
            let stuck = parents.keys().find(|id| !done.contains(*id)).copied();
            return Err(TopologyError::NoDerivation(stuck.expect("nonempty")));
        }
        for id in ready {
            done.insert(id);
            order.push(id);
        }
    }
    Ok(order)
}

pub fn propagate(
    atlas: &Atlas,
    verdicts: &BTreeMap<(VertexId, VertexId), CuspVerdict>,
) -> Result<Propagation, TopologyError> {
    let order = derivation_order(atlas)?;
    propagate_in_order(atlas, verdicts, &order)
}

/// Propagation along an explicit vertex order, which must list each source
/// before its targets.
pub fn propagate_in_order(
    atlas: &Atlas,
    verdicts: &BTreeMap<(VertexId, VertexId), CuspVerdict>,
    order: &[VertexId],
) -> Result<Propagation, TopologyError> {
    let mut out: Propagation = BTreeMap::new();
    for &id in order {
        let der = derivation(atlas, id)?;
        let (descriptor, parent_chain, verdict) = match &der {
            Derivation::Base => (RealLocusDescriptor::projective(4), Vec::new(), None),
            Derivation::Morse { from, kind, index } => {
                let src = out.get(from).ok_or(TopologyError::BadOrder(id, *from))?;
                let edge = atlas
                    .edge(*from, id)
                    .filter(|e| e.kind == *kind && e.from == *from)
                    .ok_or(TopologyError::NoDerivation(id))?;
                if !facet_index_options(edge.kind, edge.from, edge.to)?.contains(index) {
                    return Err(TopologyError::Unsupported(format!(
                        "index {index} on the {kind}-facet {from} -> {id}"
                    )));
                }
                let verdict = if *kind == MoveKind::R {
                    match verdicts.get(&(*from, id)) {
                        Some(v @ CuspVerdict::Yes(_)) => Some(v),
                        _ => return Err(TopologyError::MissingCusp(*from, id)),
                    }
                } else {
                    None
                };
                let d = apply_morse(&src.descriptor, MorseEvent::new(*index, true))?;
                (d, src.justification.clone(), verdict)
            }
            Derivation::UnknottedHandle { from, p, q } => {
                let src = out.get(from).ok_or(TopologyError::BadOrder(id, *from))?;
                let d = add_unknotted_handle(&src.descriptor, *p, *q)?;
                (d, src.justification.clone(), None)
            }
            Derivation::Lifted { from, branch_index } => {
                let src = out.get(from).ok_or(TopologyError::BadOrder(id, *from))?;
                let index = lift_morse_index(*branch_index);
                let d = apply_morse(&src.descriptor, MorseEvent::new(index, true))?;
                (d, src.justification.clone(), None)
            }
        };

        let v = atlas.vertex(id).ok_or(TopologyError::NoDerivation(id))?;
        let inv = descriptor_invariants(&descriptor)?;
        let (lr, ld) = (i64::from(v.r), i64::from(v.d));
        if (inv.r, inv.d) != (lr, ld) {
            return Err(TopologyError::InvariantMismatch {
                vertex: id,
                r: inv.r,
                d: inv.d,
                lr,
                ld,
            });
        }
        let mut justification = parent_chain;
        justification.push(step_text(id, &der, verdict));
        out.insert(
            id,
            Assignment {
                descriptor,
                derivation: der,
                justification,
            },
        );
    }
    for v in &atlas.vertices {
        if !out.contains_key(&v.id) {
            return Err(TopologyError::NoDerivation(v.id));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::{build_atlas, GraphKind};
    use crate::wall_crossing::r_wall_verdicts;

    #[test]
    fn documented_invariants() {
        let rp4 = RealLocusDescriptor::projective(4);
        let inv = descriptor_invariants(&rp4).unwrap();
        assert_eq!(
            (inv.b_star, inv.chi, inv.r, inv.d, inv.i, inv.j),
            (5, 1, 11, 11, 0, 0)
        );
        let mut split = rp4.clone();
        split.disjoint_spheres = 1;
        let inv = descriptor_invariants(&split).unwrap();
        assert_eq!(
            (inv.b_star, inv.chi, inv.r, inv.d, inv.i, inv.j),
            (7, 3, 10, 10, 1, 0)
        );
        let inv = descriptor_invariants(&RealLocusDescriptor::fourfold(2, 1)).unwrap();
        assert_eq!(
            (inv.b_star, inv.chi, inv.r, inv.d, inv.i, inv.j),
            (11, 3, 10, 8, 2, 1)
        );
    }

    #[test]
    fn display() {
        assert_eq!(
            RealLocusDescriptor::fourfold(5, 4).to_string(),
            "RP4 # 5(S2xS2) # 4(S1xS3)"
        );
        assert_eq!(
            RealLocusDescriptor::fourfold(1, 0).to_string(),
            "RP4 # (S2xS2)"
        );
        assert_eq!(RealLocusDescriptor::fourfold(0, 0).to_string(), "RP4");
        let mut s = RealLocusDescriptor::projective(4);
        s.disjoint_spheres = 1;
        assert_eq!(s.to_string(), "RP4 ⊔ S4");
    }

    #[test]
    fn odd_dimension_chi() {
        let mut d = RealLocusDescriptor::projective(3);
        assert_eq!(d.chi(), 0);
        d.add_handles(1, 2, 1);
        assert_eq!(d.chi(), 0);
        assert_eq!(d.b_star(), 6);
    }

    #[test]
    fn morse_moves() {
        let rp4 = RealLocusDescriptor::projective(4);
        let a = apply_morse(&rp4, MorseEvent::new(2, true)).unwrap();
        assert_eq!(a, RealLocusDescriptor::fourfold(1, 0));
        let b = apply_morse(&a, MorseEvent::new(1, true)).unwrap();
        assert_eq!(b, RealLocusDescriptor::fourfold(1, 1));
        let c = apply_morse(&rp4, MorseEvent::new(0, true)).unwrap();
        assert_eq!(c.to_string(), "RP4 ⊔ S4");
        assert!(matches!(
            apply_morse(&b, MorseEvent::new(2, true)),
            Err(TopologyError::Unsupported(_))
        ));
        assert!(matches!(
            apply_morse(&rp4, MorseEvent::new(2, false)),
            Err(TopologyError::Unsupported(_))
        ));
        assert!(matches!(
            apply_morse(&c, MorseEvent::new(1, true)),
            Err(TopologyError::Unsupported(_))
        ));
        assert!(matches!(
            apply_morse(&rp4, MorseEvent::new(3, true)),
            Err(TopologyError::Unsupported(_))
        ));
        assert_eq!(
            apply_morse(&rp4, MorseEvent::new(6, true)),
            Err(TopologyError::IndexOutOfRange { index: 6, n: 4 })
        );
    }

    #[test]
    fn facet_indices() {
        let p = VertexId::principal;
        assert_eq!(
            facet_index_options(MoveKind::L, p(3, 0), p(4, 0)).unwrap(),
            BTreeSet::from([2])
        );
        assert_eq!(
            facet_index_options(MoveKind::L, p(0, 0), VertexId::special(1, 0)).unwrap(),
            BTreeSet::from([0, 4])
        );
        assert_eq!(
            facet_index_options(MoveKind::R, p(3, 0), p(3, 1)).unwrap(),
            BTreeSet::from([1, 3])
        );
        assert_eq!(
            facet_index_options(MoveKind::RInverse, p(3, 1), p(3, 0)),
            Err(TopologyError::InverseMove(MoveKind::RInverse))
        );
    }

    #[test]
    fn propagation_matches_formula() {
        let atlas = build_atlas(GraphKind::K4);
        let verdicts = r_wall_verdicts(&atlas, 4).unwrap();
        let table = propagate(&atlas, &verdicts).unwrap();
        assert_eq!(table.len(), 75);
        for (id, a) in &table {
            if *id == VertexId::special(1, 0) {
                assert_eq!(a.descriptor.to_string(), "RP4 ⊔ S4");
            } else {
                assert_eq!(
                    a.descriptor,
                    RealLocusDescriptor::fourfold(id.i, id.j),
                    "{id}"
                );
            }
            assert_eq!(a.justification.len(), a.justification.len());
            assert!(a.justification[0].contains("base case"));
        }
        let c21 = &table[&VertexId::special(2, 1)];
        assert_eq!(c21.descriptor.to_string(), "RP4 # 2(S2xS2) # (S1xS3)");
    }

    #[test]
    fn missing_verdict_is_an_error() {
        let atlas = build_atlas(GraphKind::K4);
        let mut verdicts = r_wall_verdicts(&atlas, 4).unwrap();
        let key = (VertexId::principal(3, 0), VertexId::principal(3, 1));
        verdicts.remove(&key);
        assert_eq!(
            propagate(&atlas, &verdicts),
            Err(TopologyError::MissingCusp(key.0, key.1))
        );
    }
}

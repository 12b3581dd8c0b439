//! `atlas verify`: every consistency check the library can run on its own data.

use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use realcubic::atlas::{build_atlas, validate_atlas, CheckStatus, GraphKind, VertexId};
use realcubic::lattice::{IntMatrix, LatticeExpr};
use realcubic::surgery::{
    blow_down, blow_up, h1_from_linking, slide, spiral_scenario, LinkingMatrix,
};
use realcubic::topology::{propagate, RealLocusDescriptor};
use realcubic::wall_crossing::{find_a2_pair, r_wall_verdicts, CuspVerdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Warn,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Pass => "PASS",
            Self::Warn => "WARN",
            Self::Fail => "FAIL",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

fn outcome(name: &str, ok: bool, detail: String) -> Outcome {
    Outcome {
        name: name.into(),
        status: if ok { Status::Pass } else { Status::Fail },
        detail,
    }
}

const KIRBY_CASES: usize = 200;

pub fn run(height: u32, seed: u64, verbose: bool) -> Vec<Outcome> {
    let mut out = Vec::new();
    let log = |s: &str| {
        if verbose {
            eprintln!("verify: {s}");
        }
    };

    for kind in [GraphKind::K4, GraphKind::K3] {
        log(&format!("validating the {kind} atlas"));
        let report = validate_atlas(&build_atlas(kind));
        for c in report.checks {
            out.push(Outcome {
                name: format!("{kind}/{}", c.name),
                status: match c.status {
                    CheckStatus::Pass => Status::Pass,
                    CheckStatus::Warn => Status::Warn,
                    CheckStatus::Fail => Status::Fail,
                },
                detail: c.detail,
            });
        }
    }

    log("deciding cuspidal strata on R-walls");
    let atlas = build_atlas(GraphKind::K4);
    let no_cusp = [VertexId::principal(10, 1), VertexId::special(2, 1)];
    match r_wall_verdicts(&atlas, height) {
        Ok(verdicts) => {
            let mut bad = Vec::new();
            for ((a, b), v) in &verdicts {
                let ok = match v {
                    CuspVerdict::Yes(c) => !no_cusp.contains(b) && c.verify_cusp(),
                    CuspVerdict::No(_) => no_cusp.contains(b),
                    CuspVerdict::Unknown { .. } => false,
                };
                if !ok {
                    bad.push(format!("{a}->{b}"));
                }
            }
            let yes = verdicts.values().filter(|v| v.is_yes()).count();
            out.push(outcome(
                "cusp/r-walls",
                bad.is_empty(),
                if bad.is_empty() {
                    format!("{yes} certified cusps, {} refuted", verdicts.len() - yes)
                } else {
                    format!("unexpected verdicts on {}", bad.join(", "))
                },
            ));

            log("propagating real loci");
            match propagate(&atlas, &verdicts) {
                Ok(table) => {
                    let wrong: Vec<String> = table
                        .iter()
                        .filter(|(id, a)| {
                            let expected = if **id == VertexId::special(1, 0) {
                                let mut d = RealLocusDescriptor::projective(4);
                                d.disjoint_spheres = 1;
                                d
                            } else {
                                RealLocusDescriptor::fourfold(id.i, id.j)
                            };
                            a.descriptor != expected
                        })
                        .map(|(id, _)| id.to_string())
                        .collect();
                    out.push(outcome(
                        "topology/main-table",
                        table.len() == atlas.vertices.len() && wrong.is_empty(),
                        format!(
                            "{} vertices assigned, {} off the formula",
                            table.len(),
                            wrong.len()
                        ),
                    ));
                }
                Err(e) => out.push(outcome("topology/main-table", false, e.to_string())),
            }
        }
        Err(e) => out.push(outcome("cusp/r-walls", false, e.to_string())),
    }
    let u = LatticeExpr::parse("U").expect("literal");
    out.push(outcome(
        "cusp/hyperbolic-plane",
        find_a2_pair(&u).is_none(),
        "U has no pair of 2-roots with product -1".into(),
    ));

    log("running the spiral computation");
    match spiral_scenario() {
        Ok(r) => out.push(outcome(
            "surgery/spiral",
            r.routes_agree(),
            format!(
                "H1 = {} by linking matrix and by presentation",
                r.h1_linking
            ),
        )),
        Err(e) => out.push(outcome("surgery/spiral", false, e.to_string())),
    }

    log(&format!("Kirby spot check, seed {seed}"));
    let failures = kirby_spot_check(seed, KIRBY_CASES);
    out.push(outcome(
        "surgery/kirby-invariance",
        failures == 0,
        format!("{KIRBY_CASES} random cases, seed {seed}, {failures} failures"),
    ));
    out
}

fn random_linking(rng: &mut StdRng) -> LinkingMatrix {
    let n = rng.gen_range(1..=6);
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let x = rng.gen_range(-9..=9);
            m[(i, j)] = x;
            m[(j, i)] = x;
        }
    }
    LinkingMatrix::new(m).expect("symmetric by construction")
}

/// Slides and blow-up/blow-down pairs must leave `H_1` unchanged.
fn kirby_spot_check(seed: u64, cases: usize) -> usize {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut failures = 0;
    for _ in 0..cases {
        let m = random_linking(&mut rng);
        let h = h1_from_linking(&m);
        let n = m.components();
        let mut cur = m.clone();
        if n > 1 {
            for _ in 0..3 {
                let i = rng.gen_range(0..n);
                let j = (i + rng.gen_range(1..n)) % n;
                let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                cur = slide(&cur, i, j, sign).expect("valid indices");
            }
        }
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        let up = blow_up(&cur, sign).expect("sign is a unit");
        let down = blow_down(&up, n).expect("unit framing");
        if h1_from_linking(&cur) != h || h1_from_linking(&up) != h || down != cur {
            failures += 1;
        }
    }
    failures
}

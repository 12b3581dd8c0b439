use std::fmt::Write as _;
use std::process::ExitCode;

use clap::parser::ValueSource;
use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde_json::json;

use realcubic::atlas::{build_atlas, to_dot, to_json, GraphKind, VertexId};
use realcubic::lattice::{
    discriminant_form, enumerate_norm_vectors, gram, LatticeError, LatticeExpr,
};
use realcubic::ramified::{euler_perturbation, PerturbationData};
use realcubic::surgery::{h1_from_linking, spiral_scenario, LinkingMatrix};
use realcubic::topology::{propagate, Propagation};
use realcubic::wall_crossing::{cusp_stratum, r_wall_verdicts, CuspVerdict, DEFAULT_HEIGHT};

mod verify;

/// Exit status of a command.
#[derive(Debug)]
enum Failure {
    /// Verification or computation failed.
    Check(String),
    Usage(String),
    Unsupported(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Self::Check(_) => 1,
            Self::Usage(_) => 2,
            Self::Unsupported(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Self::Check(m) | Self::Usage(m) | Self::Unsupported(m) => m,
        }
    }
}

type Outcome = Result<String, Failure>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Md,
    Text,
}

#[derive(Parser, Debug)]
#[command(
    name = "realcubic",
    version,
    about = "Lattices, deformation graphs and real loci of real cubic fourfolds"
)]
struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum, env = "REALCUBIC_FORMAT")]
    format: Option<Format>,
    /// Coordinate bound for the bounded A2 search.
    #[arg(long, global = true, default_value_t = DEFAULT_HEIGHT)]
    height: u32,
    /// Seed for randomized spot checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print progress and derivations to stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    /// The format came from the environment, so it may not suit every command.
    #[arg(skip)]
    format_from_env: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build, export and verify the deformation graphs.
    #[command(subcommand)]
    Atlas(AtlasCmd),
    /// Query a lattice given by an expression such as "U+E8(2)".
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Decide whether a wall carries a cuspidal stratum.
    #[command(subcommand)]
    Cusp(CuspCmd),
    /// Real loci of all vertices.
    #[command(subcommand)]
    Topology(TopologyCmd),
    /// Euler characteristics of perturbed double covers.
    #[command(subcommand)]
    Ramified(RamifiedCmd),
    /// Surgery homology of framed links.
    #[command(subcommand)]
    Surgery(SurgeryCmd),
    /// Human-readable derivations.
    #[command(subcommand)]
    Report(ReportCmd),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GraphArg {
    K4,
    K3,
}

impl From<GraphArg> for GraphKind {
    fn from(g: GraphArg) -> Self {
        match g {
            GraphArg::K4 => GraphKind::K4,
            GraphArg::K3 => GraphKind::K3,
        }
    }
}

#[derive(Subcommand, Debug)]
enum AtlasCmd {
    Build {
        #[arg(long, value_enum, default_value = "k4")]
        graph: GraphArg,
    },
    /// Run every consistency check; exit 0 iff none fails.
    Verify,
}

#[derive(Subcommand, Debug)]
enum LatticeCmd {
    Info {
        expr: String,
    },
    Roots {
        expr: String,
        #[arg(long, default_value_t = 2)]
        norm: i64,
    },
}

#[derive(Subcommand, Debug)]
enum CuspCmd {
    Check {
        /// Two adjacent vertices, e.g. "C3,0:C3,1".
        #[arg(long)]
        edge: String,
    },
}

#[derive(Subcommand, Debug)]
enum TopologyCmd {
    Table,
}

#[derive(Subcommand, Debug)]
enum RamifiedCmd {
    Euler(EulerArgs),
}

#[derive(Args, Debug)]
struct EulerArgs {
    #[arg(long = "chiP", alias = "chi-p", allow_negative_numbers = true)]
    chi_p: i64,
    #[arg(long = "chiPplus", alias = "chi-p-plus", allow_negative_numbers = true)]
    chi_p_plus: i64,
    #[arg(long = "chiL", alias = "chi-l", allow_negative_numbers = true)]
    chi_l: i64,
}

#[derive(Subcommand, Debug)]
enum SurgeryCmd {
    H1 {
        /// JSON array literal, e.g. "[[-4,2],[2,-2]]".
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    Spiral,
}

#[derive(Subcommand, Debug)]
enum ReportCmd {
    MainTheorem,
    Spiral,
}

impl Cli {
    /// Output format for a command; an unsuitable default from the
    /// environment falls back to the command's own default.
    fn format(&self, default: Format, allowed: &[Format]) -> Result<Format, Failure> {
        match self.format {
            Some(f) if !allowed.contains(&f) && self.format_from_env => Ok(default),
            f => pick(f, default, allowed),
        }
    }
}

fn pick(format: Option<Format>, default: Format, allowed: &[Format]) -> Result<Format, Failure> {
    let f = format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        let name = |f: &Format| {
            f.to_possible_value()
                .map(|v| v.get_name().to_owned())
                .unwrap_or_default()
        };
        let choices: Vec<String> = allowed.iter().map(name).collect();
        Err(Failure::Usage(format!(
            "format {} not available here; choose from {}",
            name(&f),
            choices.join(", ")
        )))
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn parse_expr(s: &str) -> Result<LatticeExpr, Failure> {
    LatticeExpr::parse(s).map_err(|e| Failure::Usage(format!("{s:?}: {e}")))
}

fn cmd_atlas(cli: &Cli, cmd: &AtlasCmd) -> Outcome {
    match cmd {
        AtlasCmd::Build { graph } => {
            let atlas = build_atlas((*graph).into());
            match cli.format(Format::Json, &[Format::Json, Format::Dot])? {
                Format::Dot => Ok(to_dot(&atlas)),
                _ => Ok(pretty(&to_json(&atlas))),
            }
        }
        AtlasCmd::Verify => {
            let format = cli.format(Format::Text, &[Format::Text, Format::Json])?;
            let checks = verify::run(cli.height, cli.seed, cli.verbose > 0);
            let failures: Vec<_> = checks
                .iter()
                .filter(|c| c.status == verify::Status::Fail)
                .collect();
            let out = match format {
                Format::Json => pretty(&checks),
                _ => checks.iter().fold(String::new(), |mut s, c| {
                    writeln!(s, "{} {}: {}", c.status, c.name, c.detail).unwrap();
                    s
                }),
            };
            if failures.is_empty() {
                Ok(out)
            } else {
                print!("{out}");
                Err(Failure::Check(
                    serde_json::to_string(&failures).expect("serializable"),
                ))
            }
        }
    }
}

fn cmd_lattice(cli: &Cli, cmd: &LatticeCmd) -> Outcome {
    match cmd {
        LatticeCmd::Info { expr } => {
            let e = parse_expr(expr)?;
            let g = gram(&e);
            let sig = g.signature().map_err(|e| Failure::Check(e.to_string()))?;
            let form = discriminant_form(&g).map_err(|e| match e {
                LatticeError::Degenerate => Failure::Unsupported(format!("{expr} is degenerate")),
                e => Failure::Check(e.to_string()),
            })?;
            let det = g.determinant();
            let q: Vec<String> = form.q_values.iter().map(|q| q.to_string()).collect();
            match cli.format(Format::Text, &[Format::Text, Format::Json])? {
                Format::Json => Ok(pretty(&json!({
                    "expr": e.to_string(),
                    "rank": g.rank(),
                    "signature": [sig.pos, sig.neg],
                    "determinant": det.to_string(),
                    "discriminant": form.group.to_string(),
                    "invariant_factors": form.group.invariant_factors,
                    "two_rank": form.group.two_rank,
                    "q": q,
                    "two_part_integer": form.two_part_integer,
                }))),
                _ => {
                    let mut s = String::new();
                    writeln!(s, "lattice: {e}").unwrap();
                    writeln!(s, "rank: {}", g.rank()).unwrap();
                    writeln!(s, "signature: ({},{})", sig.pos, sig.neg).unwrap();
                    writeln!(s, "determinant: {det}").unwrap();
                    writeln!(s, "discriminant: {}", form.group).unwrap();
                    writeln!(s, "q on generators: [{}]", q.join(", ")).unwrap();
                    let yes = if form.two_part_integer { "yes" } else { "no" };
                    writeln!(s, "two-part integer: {yes}").unwrap();
                    Ok(s)
                }
            }
        }
        LatticeCmd::Roots { expr, norm } => {
            let e = parse_expr(expr)?;
            let vs = enumerate_norm_vectors(&gram(&e), *norm).map_err(|err| match err {
                LatticeError::NotPositiveDefinite => Failure::Unsupported(format!(
                    "{e} is not positive definite, so it has infinitely many or no vectors of a given norm to list"
                )),
                LatticeError::NonPositiveNorm(n) => {
                    Failure::Usage(format!("norm must be positive, got {n}"))
                }
                err => Failure::Check(err.to_string()),
            })?;
            match cli.format(Format::Text, &[Format::Text, Format::Json])? {
                Format::Json => Ok(pretty(&json!({
                    "expr": e.to_string(),
                    "norm": norm,
                    "count": vs.len(),
                    "vectors": vs,
                }))),
                _ => {
                    let mut s = format!("{} vectors of norm {norm} in {e}\n", vs.len());
                    for v in &vs {
                        writeln!(s, "{v:?}").unwrap();
                    }
                    Ok(s)
                }
            }
        }
    }
}

fn parse_edge(s: &str) -> Result<(VertexId, VertexId), Failure> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| Failure::Usage(format!("expected FROM:TO, got {s:?}")))?;
    let parse = |x: &str| {
        x.parse::<VertexId>()
            .map_err(|e| Failure::Usage(e.to_string()))
    };
    Ok((parse(a)?, parse(b)?))
}

fn verdict_text(v: &CuspVerdict) -> String {
    match v {
        CuspVerdict::Yes(c) => format!(
            "yes: v1 = {:?}, v2 = {:?} in {} ({}), certificate re-verified: {}",
            c.v1,
            c.v2,
            c.lattice,
            c.host,
            c.verify_cusp()
        ),
        CuspVerdict::No(r) => format!(
            "no: {} of {} classes of L/2L have norm 2 mod 4, their span (rank {}) is even; digest {}",
            r.candidates, r.classes, r.span_rank, r.digest
        ),
        CuspVerdict::Unknown { height } => format!("unknown: no pair up to height {height} and no mod-2 obstruction"),
    }
}

fn cmd_cusp(cli: &Cli, cmd: &CuspCmd) -> Outcome {
    let CuspCmd::Check { edge } = cmd;
    let (a, b) = parse_edge(edge)?;
    let atlas = build_atlas(GraphKind::K4);
    let e = atlas
        .edge(a, b)
        .ok_or_else(|| Failure::Usage(format!("{a} and {b} are not adjacent")))?;
    let kind = if e.from == a {
        e.kind
    } else {
        e.kind.inverse()
    };
    let verdict =
        cusp_stratum(&atlas, a, b, cli.height).map_err(|e| Failure::Check(e.to_string()))?;
    match cli.format(Format::Text, &[Format::Text, Format::Json])? {
        Format::Json => Ok(pretty(&json!({
            "from": a, "to": b, "move": kind.to_string(), "result": verdict,
        }))),
        _ => Ok(format!("{a} -> {b} ({kind}): {}\n", verdict_text(&verdict))),
    }
}

fn main_theorem(height: u32) -> Result<Propagation, Failure> {
    let atlas = build_atlas(GraphKind::K4);
    let verdicts = r_wall_verdicts(&atlas, height).map_err(|e| Failure::Check(e.to_string()))?;
    propagate(&atlas, &verdicts).map_err(|e| Failure::Check(e.to_string()))
}

fn markdown_table(table: &Propagation, chains: bool) -> String {
    let atlas = build_atlas(GraphKind::K4);
    let mut s = String::new();
    if chains {
        s.push_str("| vertex | (r,d) | type | real locus | derivation |\n|---|---|---|---|---|\n");
    } else {
        s.push_str("| vertex | (r,d) | type | real locus |\n|---|---|---|---|\n");
    }
    for (id, a) in table {
        let v = atlas
            .vertex(*id)
            .expect("propagated vertices come from the atlas");
        write!(
            s,
            "| {id} | ({},{}) | {} | {} |",
            v.r, v.d, v.vertex_type, a.descriptor
        )
        .unwrap();
        if chains {
            write!(s, " {} |", a.justification.join("; ")).unwrap();
        }
        s.push('\n');
    }
    s
}

fn cmd_topology(cli: &Cli, cmd: &TopologyCmd) -> Outcome {
    let TopologyCmd::Table = cmd;
    let format = cli.format(Format::Md, &[Format::Md, Format::Json])?;
    let table = main_theorem(cli.height)?;
    match format {
        Format::Json => {
            let rows: Vec<_> = table
                .iter()
                .map(|(id, a)| {
                    json!({
                        "vertex": id,
                        "real_locus": a.descriptor.to_string(),
                        "descriptor": a.descriptor,
                        "derivation": a.derivation,
                        "justification": a.justification,
                    })
                })
                .collect();
            Ok(pretty(&rows))
        }
        _ => Ok(markdown_table(&table, false)),
    }
}

fn cmd_ramified(cli: &Cli, cmd: &RamifiedCmd) -> Outcome {
    let RamifiedCmd::Euler(a) = cmd;
    let data = PerturbationData {
        chi_p: a.chi_p,
        chi_p_plus: a.chi_p_plus,
        chi_l: a.chi_l,
    };
    let chi = euler_perturbation(data);
    // For a fourfold, chi = 2r - 21.
    let r = (chi % 2 != 0).then(|| 11 + (1 - chi) / 2);
    match cli.format(Format::Text, &[Format::Text, Format::Json])? {
        Format::Json => Ok(pretty(&json!({ "chi": chi, "r": r }))),
        _ => {
            let mut s = format!("chi = {chi}\n");
            match r {
                Some(r) => writeln!(s, "r = {r}").unwrap(),
                None => writeln!(s, "r undefined: chi of a real cubic fourfold is odd").unwrap(),
            }
            Ok(s)
        }
    }
}

fn spiral(cli: &Cli) -> Outcome {
    let format = cli.format(Format::Text, &[Format::Text, Format::Json])?;
    let report = spiral_scenario().map_err(|e| Failure::Check(e.to_string()))?;
    match format {
        Format::Json => Ok(pretty(&report)),
        _ => Ok(format!("{report}\n")),
    }
}

fn cmd_surgery(cli: &Cli, cmd: &SurgeryCmd) -> Outcome {
    match cmd {
        SurgeryCmd::H1 { matrix } => {
            let m: LinkingMatrix = matrix.parse().map_err(|e| Failure::Usage(format!("{e}")))?;
            let h = h1_from_linking(&m);
            match cli.format(Format::Text, &[Format::Text, Format::Json])? {
                Format::Json => Ok(pretty(&json!({
                    "matrix": m, "h1": h.to_string(), "torsion": h.torsion, "free_rank": h.free_rank,
                }))),
                _ => Ok(format!("{h}\n")),
            }
        }
        SurgeryCmd::Spiral => spiral(cli),
    }
}

fn cmd_report(cli: &Cli, cmd: &ReportCmd) -> Outcome {
    match cmd {
        ReportCmd::MainTheorem => {
            cli.format(Format::Md, &[Format::Md])?;
            let table = main_theorem(cli.height)?;
            Ok(markdown_table(&table, true))
        }
        ReportCmd::Spiral => spiral(cli),
    }
}

fn main() -> ExitCode {
    let matches = Cli::command().get_matches();
    let mut cli = Cli::from_arg_matches(&matches).unwrap_or_else(|e| e.exit());
    cli.format_from_env = matches.value_source("format") == Some(ValueSource::EnvVariable);
    let outcome = match &cli.command {
        Command::Atlas(c) => cmd_atlas(&cli, c),
        Command::Lattice(c) => cmd_lattice(&cli, c),
        Command::Cusp(c) => cmd_cusp(&cli, c),
        Command::Topology(c) => cmd_topology(&cli, c),
        Command::Ramified(c) => cmd_ramified(&cli, c),
        Command::Surgery(c) => cmd_surgery(&cli, c),
        Command::Report(c) => cmd_report(&cli, c),
    };
    match outcome {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            if let Failure::Check(m) = &f {
                if m.starts_with('[') {
                    println!("{m}");
                }
            }
            ExitCode::from(f.code())
        }
    }
}

mod domain;
mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use modelkit_core::coeff::Rational;
use modelkit_core::decomposition::{holomorphic_decompose, pluriharmonic_split};
use modelkit_core::flows::{
    admissible_flow_types, generator, invariance_constraint, lie_bracket, non_unitary_parameter, pair_check, VField,
};
use modelkit_core::grading::{balance_class, completely_diversely_balanced, is_extremely_balanced, Group, Weight};
use modelkit_core::symmetry::{
    classify, finite_type_necessary, tangent_fields, torus_weights, translation_directions, verify_model_map_bounded,
    ModelDomain,
};
use serde::Serialize;

use domain::{parse_file, DomainFile};
use report::*;

const DEFAULT_MAX_TERMS: usize = 100_000;

#[derive(Parser)]
#[command(name = "modelkit", version, about = "Symmetry analysis of rigid polynomial model domains {2 Re z3 + P(z1, z2) < 0}")]
struct Cli {
    /// Emit the machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Print nothing on success; rely on the exit status.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Finite-type check, variable split, balance classes and rotation weights.
    Analyze {
        file: PathBuf,
        /// Weight `t1,t2`, optionally `:integers` or `:zN` (integers a,b); repeatable.
        #[arg(long = "weight")]
        weights: Vec<String>,
    },
    /// Splits P into pluriharmonic part and signed sums of squares.
    Decompose { file: PathBuf },
    /// Rotation and translation symmetries, tangent fields, admissible flow types.
    Symmetries {
        file: PathBuf,
        /// Degree bound for tangent fields (default: degree of P).
        #[arg(long)]
        max_degree: Option<u32>,
    },
    /// Normal-form classification.
    Classify { file: PathBuf },
    /// Checks declared maps and flows; without options uses declarations in FILE.
    Verify {
        file: PathBuf,
        #[arg(long, conflicts_with = "flow")]
        map: Option<PathBuf>,
        #[arg(long)]
        flow: Option<PathBuf>,
    },
}

/// Exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Ok = 0,
    VerificationFailed = 1,
    InvalidInput = 2,
    Degenerate = 3,
    Internal = 4,
}

struct Failure {
    status: Status,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { status: Status::InvalidInput, message: message.into() }
    }
}

struct Output {
    json: String,
    text: String,
    status: Status,
    /// Reason for a nonzero status, for stderr.
    reason: Option<String>,
}

impl Output {
    fn new<R: Serialize>(report: &R, text: String, status: Status) -> Result<Self, Failure> {
        let json = serde_json::to_string_pretty(report)
            .map_err(|e| Failure { status: Status::Internal, message: format!("serialization failed: {e}") })?;
        Ok(Output { json, text, status, reason: None })
    }
}

fn max_terms() -> Result<usize, Failure> {
    match std::env::var("MODELKIT_MAX_TERMS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| Failure::input(format!("MODELKIT_MAX_TERMS must be a positive integer, got '{v}'"))),
        Err(_) => Ok(DEFAULT_MAX_TERMS),
    }
}

fn load(path: &Path, limit: usize) -> Result<DomainFile, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    parse_file(&text, limit).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_domain(path: &Path, limit: usize) -> Result<(ModelDomain, DomainFile), Failure> {
    let file = load(path, limit)?;
    let p = file.p.clone().ok_or_else(|| Failure::input(format!("{}: no polynomial P given", path.display())))?;
    let d = ModelDomain::new(p).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Ok((d, file))
}

fn parse_weight(spec: &str) -> Result<Weight, Failure> {
    let bad = || Failure::input(format!("bad weight '{spec}': expected t1,t2 with optional :integers or :zN"));
    let (pair, group) = match spec.split_once(':') {
        Some((pair, group)) => (pair, Some(group.trim())),
        None => (spec, None),
    };
    let (a, b) = pair.split_once(',').ok_or_else(bad)?;
    let rational = |s: &str| s.trim().parse::<Rational>().map_err(|_| bad());
    match group {
        None | Some("circle") => Ok(Weight::circle(rational(a)?, rational(b)?)),
        Some("integers") => Ok(Weight::integers(rational(a)?, rational(b)?)),
        Some(g) => {
            let n = g.strip_prefix('z').or_else(|| g.strip_prefix('Z')).and_then(|n| n.parse::<u64>().ok()).ok_or_else(bad)?;
            let int = |s: &str| s.trim().parse::<i64>().map_err(|_| bad());
            Weight::cyclic(int(a)?, int(b)?, n).map_err(|e| Failure::input(e.to_string()))
        }
    }
}

fn analyze(path: &Path, weights: &[String], limit: usize) -> Result<Output, Failure> {
    let user: Vec<Weight> = weights.iter().map(|w| parse_weight(w)).collect::<Result<_, _>>()?;
    let (d, _) = load_domain(path, limit)?;
    let p = &d.p;
    let finite_type = finite_type_necessary(p);
    let (_, core) = pluriharmonic_split(p).expect("validated domain");
    let torus = torus_weights(&core);
    let derived = torus.kernel_basis.iter().map(|(a, b)| Weight::ints(*a, *b));
    let mut summaries = Vec::new();
    let tagged = user.into_iter().map(|w| (w, "given")).chain(derived.map(|w| (w, "rotation kernel")));
    for (weight, source) in tagged {
        let balance = match balance_class(p, &weight) {
            Ok(b) => b,
            Err(e) => return Err(Failure::input(e.to_string())),
        };
        let cdb = match weight.group {
            Group::Cyclic(_) => None,
            _ => completely_diversely_balanced(p, &weight).ok(),
        };
        summaries.push(WeightSummary { weight, source, balance, completely_diversely_balanced: cdb });
    }
    let (status, reason) = if finite_type.passed {
        (Status::Ok, None)
    } else {
        (Status::Degenerate, Some(format!("degenerate P: {}", finite_type.summary())))
    };
    let r = AnalyzeReport {
        p: p.clone(),
        parts: p.split_parts(),
        extremely_balanced: is_extremely_balanced(p),
        finite_type,
        torus,
        weights: summaries,
    };
    let mut out = Output::new(&r, r.to_string(), status)?;
    out.reason = reason;
    Ok(out)
}

fn decompose(path: &Path, limit: usize) -> Result<Output, Failure> {
    let (d, _) = load_domain(path, limit)?;
    let dec = holomorphic_decompose(&d.p).map_err(|e| Failure::input(e.to_string()))?;
    let reconstructed = dec.reconstruct() == d.p;
    let r = DecomposeReport { p: d.p.clone(), inertia: dec.inertia(), decomposition: dec, reconstructed };
    if !reconstructed {
        return Err(Failure { status: Status::Internal, message: format!("reconstruction failed:\n{r}") });
    }
    Output::new(&r, r.to_string(), Status::Ok)
}

fn degenerate(p: &modelkit_core::poly::RPoly) -> Result<(), Failure> {
    let v = finite_type_necessary(p);
    if v.passed {
        Ok(())
    } else {
        Err(Failure { status: Status::Degenerate, message: format!("degenerate P: {}", v.summary()) })
    }
}

fn symmetries(path: &Path, max_degree: Option<u32>, limit: usize) -> Result<Output, Failure> {
    let (d, _) = load_domain(path, limit)?;
    let p = &d.p;
    degenerate(p)?;
    let (_, core) = pluriharmonic_split(p).expect("validated domain");
    let bound = max_degree.unwrap_or_else(|| p.degree());
    let r = SymmetriesReport {
        p: p.clone(),
        torus: torus_weights(&core),
        translations: translation_directions(p).map_err(|e| Failure::input(e.to_string()))?,
        max_degree: bound,
        tangent_fields: tangent_fields(p, bound).map_err(|e| Failure::input(e.to_string()))?,
        flow_types: admissible_flow_types(p).map_err(|e| Failure { status: Status::Degenerate, message: e.to_string() })?,
    };
    Output::new(&r, r.to_string(), Status::Ok)
}

fn classify_cmd(path: &Path, limit: usize) -> Result<Output, Failure> {
    let (d, _) = load_domain(path, limit)?;
    let r = classify(&d);
    Output::new(&r, render_classification(&r), Status::Ok)
}

fn verify(path: &Path, map: Option<&Path>, flow: Option<&Path>, limit: usize) -> Result<Output, Failure> {
    let (d, own) = load_domain(path, limit)?;
    let (maps, flows) = match (map, flow) {
        (Some(m), _) => (load(m, limit)?.maps, Vec::new()),
        (_, Some(f)) => (Vec::new(), load(f, limit)?.flows),
        _ => (own.maps, own.flows),
    };
    if maps.is_empty() && flows.is_empty() {
        return Err(Failure::input("nothing to verify: no map { .. } or flow { .. } declarations"));
    }
    let mut map_checks = Vec::new();
    for m in maps {
        let verdict = verify_model_map_bounded(&d, &m, limit).map_err(|e| Failure::input(e.to_string()))?;
        map_checks.push(MapCheck { map: m, verdict });
    }
    let mut flow_checks = Vec::new();
    for f in &flows {
        let x = generator(f);
        let commutes = lie_bracket(&x, &VField::canonical()).is_zero();
        let invariance = invariance_constraint(&d.p, &x).map_err(|e| Failure::input(e.to_string()))?;
        let unitary = non_unitary_parameter(f).is_none();
        let passed = commutes && unitary && invariance.holds();
        flow_checks.push(FlowCheck { flow: f.clone(), commutes_with_z3_translation: commutes, invariance, unitary, passed });
    }
    let mut pairs = Vec::new();
    for i in 0..flows.len() {
        for j in i + 1..flows.len() {
            pairs.push(PairCheck { first: i, second: j, verdict: pair_check(&flows[i], &flows[j]) });
        }
    }
    let passed = map_checks.iter().all(|m| m.verdict.passed)
        && flow_checks.iter().all(|f| f.passed)
        && pairs.iter().all(|p| p.verdict.commuting);
    let r = VerifyReport { p: d.p.clone(), maps: map_checks, flows: flow_checks, pairs, passed };
    let status = if passed { Status::Ok } else { Status::VerificationFailed };
    let mut out = Output::new(&r, r.to_string(), status)?;
    if !passed {
        out.reason = Some("verification failed".into());
    }
    Ok(out)
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let limit = max_terms()?;
    match &cli.command {
        Command::Analyze { file, weights } => analyze(file, weights, limit),
        Command::Decompose { file } => decompose(file, limit),
        Command::Symmetries { file, max_degree } => symmetries(file, *max_degree, limit),
        Command::Classify { file } => classify_cmd(file, limit),
        Command::Verify { file, map, flow } => verify(file, map.as_deref(), flow.as_deref(), limit),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if !cli.quiet {
                // a closed pipe is not an error worth reporting
                let mut stdout = std::io::stdout().lock();
                let _ = if cli.json { writeln!(stdout, "{}", out.json) } else { write!(stdout, "{}", out.text) };
            }
            if let Some(reason) = &out.reason {
                eprintln!("modelkit: {reason}");
            }
            ExitCode::from(out.status as u8)
        }
        Err(f) => {
            eprintln!("modelkit: {}", f.message);
            ExitCode::from(f.status as u8)
        }
    }
}

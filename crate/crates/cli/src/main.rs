//! `k3bound`: command-line front end.
//!
//! Every subcommand prints one JSON document on stdout. Exit codes: 0 on
//! success, 1 on invalid input, 2 when the request is well-formed but has no
//! applicable answer (infeasible constraints, no solution, failed check).

use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use k3bound::classify::{enumerate, CaseReport, ConstraintProblem, DEFAULT_R_MAX};
use k3bound::orchestrator::prove_main;
use k3bound::slope::{base_bounds, fiber_volume_bound, parse_schedule, propagate, FiberData, DEFAULT_SCHEDULE};
use k3bound::wps::{ConsistencyReport, WeightedCI};
use k3bound::xi::{run_preset, volume_bound, xi_iterate, XiProblem, XiTrace};
use k3bound::{Basket, BasketSet, Error, Rational, ReidModel};

#[derive(Parser, Debug)]
#[command(name = "k3bound", version, about = "Exact plurigenera, basket classification and volume bounds")]
struct Cli {
    /// Pretty-print JSON with this many spaces of indentation.
    #[arg(long, global = true, value_name = "N")]
    json_indent: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Plurigenera from Reid's formula.
    Pluri(PluriArgs),
    /// Enumerate baskets with prescribed plurigenera.
    Classify(ClassifyArgs),
    /// Invariants of a weighted complete intersection.
    Wps(WpsArgs),
    /// Lower bounds for xi and the resulting volume bound.
    Xi(XiArgs),
    /// Slope propagation for the (1,2) fibration.
    Slope(SlopeArgs),
    /// Assemble all branches into the global volume bound.
    ProveMain,
}

#[derive(Args, Debug)]
struct PluriArgs {
    #[arg(long, allow_hyphen_values = true)]
    k3: Rational,
    #[arg(long, allow_hyphen_values = true)]
    chi: i64,
    /// `r,b` with `b` the inverse of `a` modulo `r`.
    #[arg(long = "basket", value_parser = parse_pair)]
    baskets: Vec<(i64, i64)>,
    #[arg(long)]
    mmax: i64,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[arg(long, allow_hyphen_values = true)]
    chi: i64,
    #[arg(long, allow_hyphen_values = true)]
    p2: i64,
    #[arg(long, allow_hyphen_values = true)]
    p3: i64,
    /// Required plurigenus `M=V` (M >= 4); repeatable.
    #[arg(long = "p", value_parser = parse_filter)]
    filters: Vec<(i64, i64)>,
    #[arg(long)]
    rmax: Option<i64>,
}

#[derive(Args, Debug)]
struct WpsArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    weights: Vec<i64>,
    #[arg(long, value_delimiter = ',', required = true)]
    degrees: Vec<i64>,
    #[arg(long, default_value_t = 20)]
    upto: i64,
    /// Claimed basket `r,b`; repeatable.
    #[arg(long = "claim", value_parser = parse_pair)]
    claims: Vec<(i64, i64)>,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    chi: i64,
}

#[derive(Args, Debug)]
struct XiArgs {
    #[arg(long, conflicts_with_all = ["m0", "p", "beta", "beta_open", "degkc", "even_c"])]
    preset: Option<String>,
    #[arg(long, required_unless_present = "preset")]
    m0: Option<i64>,
    #[arg(long, required_unless_present = "preset")]
    p: Option<i64>,
    #[arg(long, required_unless_present = "preset")]
    beta: Option<Rational>,
    #[arg(long)]
    beta_open: bool,
    #[arg(long, required_unless_present = "preset")]
    degkc: Option<i64>,
    #[arg(long)]
    even_c: bool,
    #[arg(long)]
    mmax: Option<i64>,
    #[arg(long)]
    rounds: Option<usize>,
}

#[derive(Args, Debug)]
struct SlopeArgs {
    #[arg(long)]
    schedule: Option<String>,
}

fn parse_pair(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected r,b but got {s:?}"))?;
    let a = a.trim().parse().map_err(|_| format!("bad integer in {s:?}"))?;
    let b = b.trim().parse().map_err(|_| format!("bad integer in {s:?}"))?;
    Ok((a, b))
}

fn parse_filter(s: &str) -> Result<(i64, i64), String> {
    let (m, v) = s.split_once('=').ok_or_else(|| format!("expected M=V but got {s:?}"))?;
    let m = m.trim().parse().map_err(|_| format!("bad integer in {s:?}"))?;
    let v = v.trim().parse().map_err(|_| format!("bad integer in {s:?}"))?;
    Ok((m, v))
}

enum Failure {
    Invalid(String),
    /// Well-formed request without an answer; the document is still printed.
    NoAnswer(serde_json::Value, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidBasket { .. }
            | Error::InvalidArgument(_)
            | Error::Parse(_)
            | Error::UnknownPreset(_)
            | Error::UnsupportedFiber { .. } => Failure::Invalid(e.to_string()),
            Error::Infeasible(_)
            | Error::NotApplicable(_)
            | Error::NotGeneralType(_)
            | Error::UnsupportedNormalization(_)
            | Error::MissingBound(_)
            | Error::NoValidRule(..)
            | Error::InsufficientSlope { .. } => {
                let doc = serde_json::json!({ "error": e.to_string() });
                Failure::NoAnswer(doc, e.to_string())
            }
        }
    }
}

type Outcome = Result<serde_json::Value, Failure>;

fn to_value<T: Serialize>(x: &T) -> serde_json::Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn pluri(args: PluriArgs) -> Outcome {
    let baskets = args
        .baskets
        .iter()
        .map(|&(r, b)| Basket::from_inverse(r, b))
        .collect::<Result<Vec<_>, _>>()?;
    let model = ReidModel::new(args.k3, args.chi, BasketSet::new(baskets));
    let table = model.pluri_table(args.mmax)?;
    #[derive(Serialize)]
    struct Out {
        #[serde(rename = "P")]
        p: BTreeMap<i64, Rational>,
    }
    Ok(to_value(&Out { p: table }))
}

fn classify(args: ClassifyArgs) -> Outcome {
    let filters: BTreeMap<i64, i64> = args.filters.into_iter().collect();
    let bounded = filters.contains_key(&4) && filters.contains_key(&5);
    let r_max = match args.rmax {
        Some(r) => r,
        None if bounded => DEFAULT_R_MAX,
        None => {
            return Err(Failure::Invalid(
                "--rmax is required unless both P4 and P5 are prescribed".into(),
            ))
        }
    };
    let problem = ConstraintProblem::new(args.chi, args.p2, args.p3, filters, r_max);
    let report: CaseReport = enumerate(&problem)?;
    let doc = to_value(&report);
    if report.solutions.is_empty() {
        return Err(Failure::NoAnswer(doc, "no basket configuration satisfies the constraints".into()));
    }
    Ok(doc)
}

fn wps(args: WpsArgs) -> Outcome {
    let x = WeightedCI::new(args.weights, args.degrees)?;
    if args.upto < 0 {
        return Err(Failure::Invalid("--upto must be >= 0".into()));
    }
    #[derive(Serialize)]
    struct Out {
        weights: Vec<i64>,
        degrees: Vec<i64>,
        assumption: &'static str,
        amplitude: i64,
        volume: Option<Rational>,
        hilbert: Vec<i64>,
        plurigenera: Option<BTreeMap<i64, i64>>,
        consistency: Option<ConsistencyReport>,
    }
    let consistency = if args.claims.is_empty() {
        None
    } else {
        let claimed = args
            .claims
            .iter()
            .map(|&(r, b)| Basket::from_inverse(r, b))
            .collect::<Result<BasketSet, _>>()?;
        Some(x.reid_consistency(&claimed, args.chi, args.upto.max(2))?)
    };
    let out = Out {
        amplitude: x.canonical_amplitude(),
        volume: x.canonical_volume().ok(),
        hilbert: x.hilbert_coeffs(args.upto as usize).values,
        plurigenera: (args.upto >= 1).then(|| x.plurigenera_from_hilbert(args.upto).ok()).flatten(),
        assumption: k3bound::wps::QUASI_SMOOTH_ASSUMPTION,
        weights: x.weights.clone(),
        degrees: x.degrees.clone(),
        consistency,
    };
    let doc = to_value(&out);
    match &out.consistency {
        Some(c) if !c.pass => {
            let m = c.first_mismatch.as_ref().map_or(0, |mm| mm.m);
            Err(Failure::NoAnswer(doc, format!("claimed basket disagrees with the Hilbert series at m = {m}")))
        }
        _ => Ok(doc),
    }
}

fn xi(args: XiArgs) -> Outcome {
    #[derive(Serialize)]
    struct Out {
        xi: Rational,
        volume: Rational,
        trace: XiTrace,
        #[serde(skip_serializing_if = "Option::is_none")]
        preset: Option<String>,
    }
    if let Some(id) = args.preset {
        let run = run_preset(&id)?;
        return Ok(to_value(&Out { xi: run.xi, volume: run.volume, trace: run.trace, preset: Some(run.preset) }));
    }
    let mut prob = XiProblem::new(
        args.m0.expect("required by clap"),
        args.p.expect("required by clap"),
        args.beta.expect("required by clap"),
        args.degkc.expect("required by clap"),
    )?;
    prob.beta_is_open_limit = args.beta_open;
    prob.even_c = args.even_c;
    let m_max = args.mmax.unwrap_or(100);
    if m_max < 2 {
        return Err(Failure::Invalid("--mmax must be >= 2".into()));
    }
    let rounds = args.rounds.unwrap_or(50);
    if rounds < 1 {
        return Err(Failure::Invalid("--rounds must be >= 1".into()));
    }
    let trace = xi_iterate(&prob, m_max, rounds);
    let xi = trace.best().clone();
    let volume = volume_bound(prob.p, &prob.beta, prob.m0, &xi);
    Ok(to_value(&Out { xi, volume, trace, preset: None }))
}

fn slope(args: SlopeArgs) -> Outcome {
    let schedule = match &args.schedule {
        Some(s) => parse_schedule(s)?,
        None => DEFAULT_SCHEDULE.to_vec(),
    };
    let state = propagate(&base_bounds(FiberData::ONE_TWO)?, &schedule)?;
    let n = state.bounds.iter().find(|(_, b)| **b >= 1).map(|(&n, _)| n);
    #[derive(Serialize)]
    struct Out {
        bounds: BTreeMap<i64, Rational>,
        derivation: Vec<k3bound::slope::DerivationStep>,
        volume: Option<Rational>,
    }
    let volume = n.map(|n| fiber_volume_bound(&state, n)).transpose()?;
    let doc = to_value(&Out { bounds: state.bounds.clone(), derivation: state.derivation.clone(), volume: volume.clone() });
    match volume {
        Some(_) => Ok(doc),
        None => Err(Failure::NoAnswer(doc, "no nu(E_n) >= 1 was derived".into())),
    }
}

fn render(doc: &serde_json::Value, indent: Option<usize>) -> String {
    match indent {
        None => serde_json::to_string(doc).expect("serializable"),
        Some(n) => {
            let pad = vec![b' '; n];
            let formatter = serde_json::ser::PrettyFormatter::with_indent(&pad);
            let mut buf = Vec::new();
            let mut ser = serde_json::Serializer::with_formatter(&mut buf, formatter);
            doc.serialize(&mut ser).expect("serializable");
            String::from_utf8(buf).expect("utf-8")
        }
    }
}

/// Writes the whole document at once; a closed pipe is not an error.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}").and_then(|_| out.flush());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Pluri(a) => pluri(a),
        Command::Classify(a) => classify(a),
        Command::Wps(a) => wps(a),
        Command::Xi(a) => xi(a),
        Command::Slope(a) => slope(a),
        Command::ProveMain => Ok(to_value(&prove_main())),
    };
    match outcome {
        Ok(doc) => {
            emit(&render(&doc, cli.json_indent));
            ExitCode::SUCCESS
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::NoAnswer(doc, msg)) => {
            emit(&render(&doc, cli.json_indent));
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}

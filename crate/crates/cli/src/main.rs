//! `csconc` command-line front end.

mod verify;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use csconc::concurrence::{all_spacings, ConcurrencePoint};
use csconc::csx::{csx_branches, BranchValues, Csx4Coeffs, Csx5Coeffs};
use csconc::cyclic::{CsState, CsStateJson};
use csconc::extremal::{
    envelope, linear_bounds_5q, maximize_branch, theorem1_check, theorem2_check, thresholds, trace_all,
    trace_boundary, Branch, BoundaryCurve, OptimizeOptions, PairId, TraceOptions,
};
use csconc::io::{artifact, boundary_csv, dataset_csv, dataset_metadata, to_json, Plot};
use csconc::sampler::{scatter, Mode, SampleSpec, Subspace};
use csconc::C64;

#[derive(Parser)]
#[command(name = "csconc", version, about = "Pairwise concurrence in cyclically symmetric qubit states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Random states and their (s1, s2) points.
    Sample(SampleArgs),
    /// Branch values and concurrences of one state.
    Eval(EvalArgs),
    /// Maxima of the spacing-1 branches.
    Maxima(MaximaArgs),
    /// Monogamy thresholds from traced boundaries.
    Thresholds(TraceArgs),
    /// Boundary curves of the even-weight region.
    Boundary(BoundaryArgs),
    /// Spaced-product construction check.
    Theorem1(Theorem1Args),
    /// Perturbations of the interleaved Bell-pair state.
    Theorem2(Theorem2Args),
    /// Oracle and invariant checks, one PASS/FAIL line each.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Args, Serialize)]
struct OutArgs {
    /// Output file; stdout when absent.
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct SampleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "cs")]
    subspace: Subspace,
    #[arg(long, default_value_t = 100_000)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "subconcurrence")]
    mode: Mode,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    #[serde(skip)]
    out: OutArgs,
}

#[derive(Args, Serialize)]
struct EvalArgs {
    /// Qubit count for --coeffs (4 or 5).
    #[arg(long)]
    n: Option<usize>,
    /// Even-orbit coefficients: a,c,d,f for 4 qubits or a,c,d,g for 5. Complex entries as 0.3+0.1i.
    #[arg(long, conflicts_with = "state")]
    coeffs: Option<String>,
    /// JSON state file: {"n": .., "orbits": [{"rep": "0011", "re": .., "im": ..}]}.
    #[arg(long)]
    state: Option<PathBuf>,
    /// Rescale coefficients to unit norm instead of rejecting them.
    #[arg(long)]
    normalize: bool,
    #[command(flatten)]
    #[serde(skip)]
    out: OutArgs,
}

#[derive(Args, Serialize)]
struct MaximaArgs {
    #[arg(long)]
    n: usize,
    /// Grid points per angle in the initial scan.
    #[arg(long, default_value_t = 200)]
    grid: usize,
    #[command(flatten)]
    #[serde(skip)]
    out: OutArgs,
}

#[derive(Args, Serialize)]
struct TraceArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 512)]
    resolution: usize,
    #[command(flatten)]
    #[serde(skip)]
    out: OutArgs,
}

#[derive(Args, Serialize)]
struct BoundaryArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 512)]
    resolution: usize,
    /// Single branch pair such as 4:1nu-2mu; all pairs when absent.
    #[arg(long)]
    pair: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    #[serde(skip)]
    out: OutArgs,
}

#[derive(Args, Serialize)]
struct Theorem1Args {
    #[arg(long)]
    n: usize,
    /// Spacing; every proper divisor of n with n/k in {2, 3} when absent.
    #[arg(long)]
    k: Option<usize>,
    #[command(flatten)]
    #[serde(skip)]
    out: OutArgs,
}

#[derive(Args, Serialize)]
struct Theorem2Args {
    #[arg(long, default_value_t = 1e-3)]
    epsilon: f64,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    #[serde(skip)]
    out: OutArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Random states per qubit count in the sampled checks.
    #[arg(long, default_value_t = 10_000)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Failure reported as one `error ...` line.
#[derive(Debug)]
pub(crate) struct Failure {
    code: u8,
    kind: String,
    check: Option<String>,
    message: String,
}

impl Failure {
    pub(crate) fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, kind: "usage".into(), check: None, message: message.into() }
    }

    pub(crate) fn check(name: &str, message: impl Into<String>) -> Self {
        Self { code: 3, kind: "validation".into(), check: Some(name.into()), message: message.into() }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Self { code: 1, kind: "io".into(), check: None, message: format!("{}: {e}", path.display()) }
    }

    fn line(&self) -> String {
        let quote = |s: &str| serde_json::to_string(&s.replace('\n', " ")).expect("string serializes");
        let check = self.check.as_deref().map_or(String::new(), |c| format!(" check={c}"));
        format!("error kind={}{check} message={}", self.kind, quote(&self.message))
    }
}

impl From<csconc::Error> for Failure {
    fn from(e: csconc::Error) -> Self {
        use csconc::Error as E;
        match &e {
            E::Validation(msg) => {
                // messages of named checks start with "<name>: "
                let name = msg
                    .split_once(": ")
                    .map(|(h, _)| h)
                    .filter(|h| h.chars().all(|c| c.is_ascii_lowercase() || c == '-'))
                    .unwrap_or("validation");
                Self::check(name, e.to_string())
            }
            E::NotXShape { .. } => Self::check("x-shape", e.to_string()),
            _ => Self { code: 2, kind: e.kind().into(), check: None, message: e.to_string() },
        }
    }
}

type Outcome<T = ()> = std::result::Result<T, Failure>;

fn emit(out: &OutArgs, text: &str) -> Outcome {
    match &out.out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::io(p, e)),
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            // a closed reader (e.g. `| head`) is not an error
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::io(Path::new("<stdout>"), e)),
            _ => Ok(()),
        },
    }
}

fn emit_json<C: Serialize, T: Serialize>(out: &OutArgs, kind: &str, config: &C, payload: &T) -> Outcome {
    let doc = artifact(kind, config, payload).map_err(|e| Failure::usage(e.to_string()))?;
    emit(out, &to_json(&doc).map_err(|e| Failure::usage(e.to_string()))?)
}

fn require_n(n: usize, allowed: &[usize]) -> Outcome {
    if allowed.contains(&n) {
        Ok(())
    } else {
        Err(Failure::usage(format!("--n {n} is not supported here (allowed: {allowed:?})")))
    }
}

fn sample(a: &SampleArgs) -> Outcome {
    require_n(a.n, &[4, 5])?;
    let spec = SampleSpec::new(a.n, a.subspace, a.count, a.seed)?;
    let data = scatter(&spec, a.mode)?;
    match a.format {
        Format::Csv => {
            emit(&a.out, &dataset_csv(&data))?;
            if let Some(p) = &a.out.out {
                let meta = p.with_extension("meta.json");
                let text = to_json(&dataset_metadata(&data)).map_err(|e| Failure::usage(e.to_string()))?;
                fs::write(&meta, text).map_err(|e| Failure::io(&meta, e))?;
            }
            Ok(())
        }
        Format::Json => emit_json(&a.out, "scatter", a, &data.points),
        Format::Svg => {
            let value = match a.mode {
                Mode::Concurrence => "C",
                Mode::Subconcurrence => "S",
            };
            let plot = Plot {
                title: format!("n = {}, {} states, {} samples, seed {}", a.n, a.subspace, a.count, a.seed),
                x_label: format!("{value}1"),
                y_label: format!("{value}2"),
                points: data.points,
                curves: Vec::new(),
            };
            emit(&a.out, &plot.render())
        }
    }
}

fn parse_coeffs(text: &str) -> Outcome<[C64; 4]> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(Failure::usage(format!("--coeffs needs 4 comma-separated values, got {}", parts.len())));
    }
    let mut v = [C64::new(0.0, 0.0); 4];
    for (slot, p) in v.iter_mut().zip(&parts) {
        *slot = C64::from_str(p).map_err(|_| Failure::usage(format!("cannot read coefficient '{p}'")))?;
    }
    Ok(v)
}

#[derive(Serialize)]
struct Evaluation {
    n: usize,
    state: CsStateJson,
    subconcurrences: Vec<f64>,
    concurrences: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    branches: Option<BranchValues>,
    #[serde(skip_serializing_if = "Option::is_none")]
    point: Option<ConcurrencePoint>,
}

fn eval(a: &EvalArgs) -> Outcome {
    let state = match (&a.coeffs, &a.state) {
        (Some(text), None) => {
            let n = a.n.ok_or_else(|| Failure::usage("--coeffs needs --n"))?;
            require_n(n, &[4, 5])?;
            let [w, x, y, z] = parse_coeffs(text)?;
            let built = match (n, a.normalize) {
                (4, false) => Csx4Coeffs::new(w, x, y, z).map(|k| k.to_state()),
                (4, true) => Csx4Coeffs::normalized(w, x, y, z).map(|k| k.to_state()),
                (_, false) => Csx5Coeffs::new(w, x, y, z).map(|k| k.to_state()),
                (_, true) => Csx5Coeffs::normalized(w, x, y, z).map(|k| k.to_state()),
            };
            built.map_err(|e| Failure::check("normalization", e.to_string()))?
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
            let mut j: CsStateJson =
                serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            if a.normalize {
                let norm = j.orbits.iter().map(|o| o.re * o.re + o.im * o.im).sum::<f64>().sqrt();
                if norm > 0.0 {
                    for o in &mut j.orbits {
                        o.re /= norm;
                        o.im /= norm;
                    }
                }
            }
            if let Some(n) = a.n {
                if n != j.n {
                    return Err(Failure::usage(format!("--n {n} disagrees with the state file (n = {})", j.n)));
                }
            }
            CsState::try_from(j).map_err(|e| match e {
                csconc::Error::Validation(_) => Failure::check("normalization", e.to_string()),
                other => other.into(),
            })?
        }
        _ => return Err(Failure::usage("eval needs exactly one of --coeffs or --state")),
    };
    let n = state.n();
    if n < 2 {
        return Err(Failure::usage("eval needs at least 2 qubits"));
    }
    let subs = all_spacings(&state)?;
    let branches = if state.is_csx() && (n == 4 || n == 5) {
        Some(csx_branches(&state)?)
    } else {
        None
    };
    if let Some(b) = &branches {
        let p = b.point();
        let gap = (p.s1 - subs[0]).abs().max((p.s2 - subs[1]).abs());
        if gap > 1e-9 {
            return Err(Failure::check("closed-form-oracle", format!("closed forms differ from the generic route by {gap:e}")));
        }
    }
    let result = Evaluation {
        n,
        state: CsStateJson::from(&state),
        concurrences: subs.iter().map(|s| s.max(0.0)).collect(),
        subconcurrences: subs,
        point: branches.as_ref().map(BranchValues::point),
        branches,
    };
    emit_json(&a.out, "eval", a, &result)
}

fn maxima(a: &MaximaArgs) -> Outcome {
    require_n(a.n, &[4, 5])?;
    let opts = OptimizeOptions { grid: a.grid, ..OptimizeOptions::default() };
    let mut rows = Vec::new();
    for b in Branch::ALL {
        let m = maximize_branch(b, a.n, &opts)?;
        rows.push(json!({ "branch": b.to_string(), "value": m.value, "coefficients": m.coefficients }));
    }
    let bounds = if a.n == 5 { Some(linear_bounds_5q(&opts)?) } else { None };
    let result = json!({ "maxima": rows, "linear_bounds": bounds });
    emit_json(&a.out, "maxima", &json!({ "n": a.n, "grid": opts.grid, "seeds": opts.seeds, "tol": opts.tol }), &result)
}

fn trace_opts(resolution: usize) -> Outcome<TraceOptions> {
    if resolution < 64 {
        return Err(Failure::usage(format!("--resolution {resolution} is below 64")));
    }
    Ok(TraceOptions::with_resolution(resolution))
}

fn thresholds_cmd(a: &TraceArgs) -> Outcome {
    require_n(a.n, &[4, 5])?;
    let curves = trace_all(a.n, &trace_opts(a.resolution)?)?;
    emit_json(&a.out, "thresholds", a, &thresholds(a.n, &curves)?)
}

#[derive(Serialize)]
struct CurveJson<'a> {
    source: String,
    pair: Option<String>,
    param_id: &'a str,
    s1: Vec<f64>,
    s2: Vec<f64>,
}

fn boundary(a: &BoundaryArgs) -> Outcome {
    require_n(a.n, &[4, 5])?;
    let opts = trace_opts(a.resolution)?;
    let mut curves: Vec<BoundaryCurve> = match &a.pair {
        Some(p) => {
            let pair = PairId::from_str(p)?;
            if pair.n != a.n {
                return Err(Failure::usage(format!("pair {p} is not a {}-qubit pair", a.n)));
            }
            trace_boundary(pair, &opts)?
        }
        None => trace_all(a.n, &opts)?,
    };
    let env = envelope(&curves)?;
    curves.push(env.curve("upper-envelope"));
    match a.format {
        Format::Csv => emit(&a.out, &boundary_csv(&curves)),
        Format::Json => {
            let rows: Vec<CurveJson> = curves
                .iter()
                .map(|c| CurveJson {
                    source: c.source.to_string(),
                    pair: c.pair.map(|p| p.to_string()),
                    param_id: &c.param_id,
                    s1: c.points.iter().map(|p| p.s1).collect(),
                    s2: c.points.iter().map(|p| p.s2).collect(),
                })
                .collect();
            emit_json(&a.out, "boundary", a, &rows)
        }
        Format::Svg => {
            let plot = Plot {
                title: format!("n = {} even-weight boundary, resolution {}", a.n, a.resolution),
                x_label: "S1".into(),
                y_label: "S2".into(),
                points: Vec::new(),
                curves: curves.into_iter().map(|c| c.points).collect(),
            };
            emit(&a.out, &plot.render())
        }
    }
}

fn theorem1(a: &Theorem1Args) -> Outcome {
    require_n(a.n, &[4, 5, 6])?;
    let ks: Vec<usize> = match a.k {
        Some(k) => vec![k],
        None => (1..a.n).filter(|k| a.n.is_multiple_of(*k) && matches!(a.n / k, 2 | 3)).collect(),
    };
    if ks.is_empty() {
        return Err(Failure::usage(format!("no spacing k with n/k in {{2, 3}} for n = {}", a.n)));
    }
    let reports = ks.iter().map(|&k| theorem1_check(a.n, k)).collect::<csconc::Result<Vec<_>>>()?;
    emit_json(&a.out, "theorem1", a, &reports)?;
    match reports.iter().find(|r| !r.passes(1e-10)) {
        Some(r) => Err(Failure::check("theorem1", format!("n={} k={} fails: {:?}", r.n, r.k, r.subconcurrences))),
        None => Ok(()),
    }
}

fn theorem2(a: &Theorem2Args) -> Outcome {
    emit_json(&a.out, "theorem2", a, &theorem2_check(a.epsilon, a.trials, a.seed)?)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Sample(a) => sample(&a),
        Command::Eval(a) => eval(&a),
        Command::Maxima(a) => maxima(&a),
        Command::Thresholds(a) => thresholds_cmd(&a),
        Command::Boundary(a) => boundary(&a),
        Command::Theorem1(a) => theorem1(&a),
        Command::Theorem2(a) => theorem2(&a),
        Command::Verify(a) => verify::run(a.count, a.seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("{}", Failure::usage(first).line());
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.line());
            ExitCode::from(f.code)
        }
    }
}

//! The `primdeg` command-line tool.
//!
//! Verbs: `analyze`, `generate`, `oracle-check`, `experiment`. Machine output
//! is line-oriented with `#`-prefixed TSV headers; `--pretty` switches to a
//! human-readable layout. Every randomized verb requires `--seed`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::digraph::short_cycles_and_h;
use crate::engine::{
    analyze, column_fill_trace, degree_bound, pattern_powers, DegreeReport, TraceEnd,
};
use crate::generators::{
    derive_seed, random_primitive_tensor, random_tensor, wielandt_tensor, GeneratorError, Values,
};
use crate::oracle::{
    default_tmap_r_max, materialized_patterns, matrix_exponent, tmap_numeric_check,
    tmap_oracle_degree, tmap_support_step, POWER_ORACLE_R_MAX,
};
use crate::pattern::PatternVector;
use crate::tensor::{Tensor, DEFAULT_MAX_ENTRIES};
use crate::tns::{parse_tensor, write_tensor};

pub const EXIT_PRIMITIVE: i32 = 0;
pub const EXIT_NOT_PRIMITIVE: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

const DEFAULT_MAX_TRIES: usize = 10_000;

#[derive(Debug, Parser)]
#[command(
    name = "primdeg",
    version,
    about = "Primitivity and primitive degree of nonnegative tensors"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the main output to this file instead of standard output
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Human-readable output instead of the line/TSV format
    #[arg(long, global = true)]
    pub pretty: bool,

    /// Largest number of entries a materialized tensor power may need
    #[arg(long = "max-entries", global = true, default_value_t = DEFAULT_MAX_ENTRIES)]
    pub max_entries: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Wielandt,
    Random,
    RandomPrimitive,
}

#[derive(Debug, clap::Args)]
pub struct GenParams {
    /// Dimension
    #[arg(long)]
    pub n: Option<usize>,
    /// Order
    #[arg(long)]
    pub m: Option<usize>,
    /// Probability that each position is present (random kinds)
    #[arg(long)]
    pub density: Option<f64>,
    /// RNG seed (required by random kinds)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Rejection-sampling budget for random-primitive
    #[arg(long = "max-tries", default_value_t = DEFAULT_MAX_TRIES)]
    pub max_tries: usize,
    /// Draw values uniformly from (0, 1] instead of using 1
    #[arg(long = "uniform-values")]
    pub uniform_values: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide primitivity and report the primitive degree of a TNS file
    Analyze {
        path: PathBuf,
        /// Append the support trace of column j (1-based)
        #[arg(long)]
        trace: Option<usize>,
    },
    /// Write a generated tensor in TNS format
    Generate {
        #[arg(value_enum)]
        kind: Kind,
        #[command(flatten)]
        params: GenParams,
    },
    /// Cross-check the engine against the slow oracles
    OracleCheck {
        /// TNS file; omit to use --kind and generator parameters
        path: Option<PathBuf>,
        #[arg(long, value_enum)]
        kind: Option<Kind>,
        #[command(flatten)]
        params: GenParams,
        /// Largest power the materializing oracle attempts
        #[arg(long = "r-max", default_value_t = POWER_ORACLE_R_MAX)]
        r_max: usize,
    },
    /// Sample random tensors over a parameter grid and tabulate degrees
    Experiment {
        /// Inclusive dimension range, e.g. `2..5` or `4`
        #[arg(long = "n-range")]
        n_range: String,
        #[arg(long)]
        m: usize,
        /// Comma-separated densities, e.g. `0.1,0.2,0.4`
        #[arg(long)]
        densities: String,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Add the Wielandt tensor of each dimension to every row
        #[arg(long = "include-wielandt")]
        include_wielandt: bool,
    },
}

/// Result of one command: text for stdout (or `--out`), text for stderr,
/// and the process exit code.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn input_error(msg: impl std::fmt::Display) -> Self {
        Outcome {
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
            code: EXIT_INPUT_ERROR,
        }
    }
}

/// Parses `args` (including the program name), runs the command, and writes
/// its output. Returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT_ERROR } else { 0 };
        }
    };
    let outcome = run(&cli);
    eprint!("{}", outcome.stderr);
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &outcome.stdout) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_INPUT_ERROR;
            }
        }
        None => print!("{}", outcome.stdout),
    }
    outcome.code
}

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Analyze { path, trace } => match read_tensor(path) {
            Ok(a) => cmd_analyze(&a, *trace, cli.pretty),
            Err(o) => o,
        },
        Command::Generate { kind, params } => match build_instance(*kind, params) {
            Ok(a) => Outcome {
                stdout: write_tensor(&a),
                ..Outcome::default()
            },
            Err(msg) => Outcome::input_error(msg),
        },
        Command::OracleCheck {
            path,
            kind,
            params,
            r_max,
        } => {
            let tensor = match (path, kind) {
                (Some(p), None) => read_tensor(p),
                (None, Some(k)) => build_instance(*k, params).map_err(Outcome::input_error),
                _ => Err(Outcome::input_error("give either a TNS path or --kind")),
            };
            match tensor {
                Ok(a) => cmd_oracle_check(&a, *r_max, cli.max_entries),
                Err(o) => o,
            }
        }
        Command::Experiment {
            n_range,
            m,
            densities,
            trials,
            seed,
            include_wielandt,
        } => {
            let Some(seed) = *seed else {
                return Outcome::input_error("experiment requires --seed");
            };
            let spec = match ExperimentSpec::parse(
                n_range,
                *m,
                densities,
                *trials,
                seed,
                *include_wielandt,
            ) {
                Ok(s) => s,
                Err(msg) => return Outcome::input_error(msg),
            };
            cmd_experiment(&spec, cli.pretty)
        }
    }
}

fn read_tensor(path: &PathBuf) -> Result<Tensor, Outcome> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Outcome::input_error(format!("cannot read {}: {e}", path.display())))?;
    parse_tensor(&text).map_err(|e| Outcome::input_error(format!("{}: {e}", path.display())))
}

fn build_instance(kind: Kind, p: &GenParams) -> Result<Tensor, String> {
    let n = p.n.ok_or("--n is required")?;
    let m = p.m.ok_or("--m is required")?;
    if m < 2 {
        return Err(format!("--m must be at least 2, got {m}"));
    }
    if n < 1 {
        return Err("--n must be at least 1".into());
    }
    let gen_err = |e: GeneratorError| e.to_string();
    match kind {
        Kind::Wielandt => wielandt_tensor(n, m).map_err(gen_err),
        Kind::Random | Kind::RandomPrimitive => {
            let seed = p.seed.ok_or("random instances require --seed")?;
            let density = p.density.ok_or("random instances require --density")?;
            if kind == Kind::Random {
                let values = if p.uniform_values {
                    Values::Uniform
                } else {
                    Values::Ones
                };
                random_tensor(n, m, density, seed, values).map_err(gen_err)
            } else {
                random_primitive_tensor(n, m, density, seed, p.max_tries)
                    .map(|(a, _)| a)
                    .map_err(gen_err)
            }
        }
    }
}

fn opt(v: Option<usize>) -> String {
    v.map_or_else(|| "-".to_string(), |k| k.to_string())
}

/// Formats the analysis of `a`. Exit code 0 when primitive, 1 otherwise,
/// 2 when the trace column is out of range.
pub fn cmd_analyze(a: &Tensor, trace: Option<usize>, pretty: bool) -> Outcome {
    let trace = match trace {
        Some(j) if j == 0 || j > a.dim() => {
            return Outcome::input_error(format!("--trace {j} is out of range 1..={}", a.dim()))
        }
        Some(j) => Some(column_fill_trace(a, j - 1).expect("column checked above")),
        None => None,
    };
    let report = analyze(a);
    let info = short_cycles_and_h(a);
    let mut out = String::new();
    if pretty {
        write_pretty_report(&mut out, &report, &info.h, info.s);
    } else {
        let _ = writeln!(
            out,
            "primitive: {}",
            if report.primitive { "yes" } else { "no" }
        );
        if let Some(g) = report.gamma {
            let _ = writeln!(out, "gamma: {g}");
        }
        let _ = writeln!(out, "bound: {}", report.bound);
        let _ = writeln!(out, "order: {}", report.order);
        let _ = writeln!(out, "dim: {}", report.dim);
        let _ = writeln!(out, "steps_run: {}", report.steps_run);
        let _ = writeln!(out, "H: {}", info.h);
        let _ = writeln!(out, "s: {}", info.s);
        if let Some(v) = &report.violation {
            let _ = writeln!(out, "violation: {v}");
        }
        out.push_str("# j\tgamma_j\n");
        for (j, g) in report.gamma_j.iter().enumerate() {
            let _ = writeln!(out, "{}\t{}", j + 1, opt(*g));
        }
    }
    if let Some(t) = trace {
        let _ = writeln!(out, "# trace column {}", t.column + 1);
        out.push_str("# k\tS_k\n");
        for (k, s) in t.sets.iter().enumerate() {
            let _ = writeln!(out, "{}\t{}", k + 1, s);
        }
        let end = match t.end {
            TraceEnd::Full => "full".to_string(),
            TraceEnd::Repeats { step } => format!("repeats S_{step}"),
            TraceEnd::Truncated => "truncated".to_string(),
        };
        let _ = writeln!(out, "# end: {end}");
    }
    Outcome {
        stdout: out,
        stderr: String::new(),
        code: if report.primitive {
            EXIT_PRIMITIVE
        } else {
            EXIT_NOT_PRIMITIVE
        },
    }
}

fn write_pretty_report(out: &mut String, r: &DegreeReport, h: &PatternVector, s: usize) {
    let _ = writeln!(out, "Tensor of order {}, dimension {}", r.order, r.dim);
    match r.gamma {
        Some(g) => {
            let _ = writeln!(
                out,
                "Primitive with primitive degree {g} (bound {})",
                r.bound
            );
        }
        None => {
            let _ = writeln!(
                out,
                "Not primitive: some column is still not positive after {} steps (bound {})",
                r.steps_run, r.bound
            );
        }
    }
    if let Some(v) = &r.violation {
        let _ = writeln!(out, "Failed precheck: {v}");
    }
    let _ = writeln!(out, "Vertices on cycles of length <= n-1: {h} (s = {s})");
    let _ = writeln!(out, "Column degrees:");
    for (j, g) in r.gamma_j.iter().enumerate() {
        match g {
            Some(g) => {
                let _ = writeln!(out, "  column {:>3}: {g}", j + 1);
            }
            None => {
                let _ = writeln!(out, "  column {:>3}: never positive", j + 1);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

impl CheckStatus {
    fn label(self) -> &'static str {
        match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skipped => "SKIPPED",
        }
    }
}

fn status(ok: bool) -> CheckStatus {
    if ok {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    }
}

/// Runs every applicable oracle against the engine and prints one line per
/// check. Exit code 0 iff nothing failed.
pub fn cmd_oracle_check(a: &Tensor, r_max: usize, max_entries: usize) -> Outcome {
    let n = a.dim();
    let bound = degree_bound(n);
    let report = analyze(a);
    let engine = pattern_powers(a, bound);
    let mut lines: Vec<(CheckStatus, &str, String)> = Vec::new();

    // T-map bridge: every column of every engine iterate, then the degree
    let tmap_gamma = tmap_oracle_degree(a, default_tmap_r_max(n));
    let mut columns_ok = true;
    for j in 0..n {
        let mut x = PatternVector::basis(n, j);
        for p in &engine {
            x = tmap_support_step(a, &x);
            columns_ok &= p.column(j) == x;
        }
    }
    let ok = columns_ok && tmap_gamma == report.gamma;
    lines.push((
        status(ok),
        "engine-vs-tmap",
        format!(
            "gamma {} (engine) vs {} (T-map, r <= {}); column supports {} for k <= {bound}",
            opt(report.gamma),
            opt(tmap_gamma),
            default_tmap_r_max(n),
            if columns_ok { "agree" } else { "differ" }
        ),
    ));

    let numeric = tmap_numeric_check(a, bound);
    lines.push((
        status(numeric.is_ok()),
        "tmap-numeric",
        match numeric {
            Ok(()) => format!("real-valued iterates have the pattern supports for {bound} steps"),
            Err(e) => e.to_string(),
        },
    ));

    let mp = materialized_patterns(a, r_max, max_entries);
    if mp.patterns.len() < 2 {
        let why = match mp.refused_at {
            Some(r) => format!("A^{r} exceeds the entry cap of {max_entries}"),
            None => "nothing to compare with r-max below 2".to_string(),
        };
        lines.push((CheckStatus::Skipped, "engine-vs-power", why));
    } else {
        let depth = mp.patterns.len();
        let patterns_ok = mp.patterns.iter().zip(&engine).all(|(m, e)| m == e);
        let power_gamma = mp
            .patterns
            .iter()
            .position(|p| p.is_positive())
            .map(|r| r + 1);
        let engine_within = report.gamma.filter(|&g| g <= depth);
        let ok = patterns_ok && power_gamma == engine_within;
        lines.push((
            status(ok),
            "engine-vs-power",
            format!(
                "patterns {} for r <= {depth}; first positive power {} (engine gamma {}){}",
                if patterns_ok { "agree" } else { "differ" },
                opt(power_gamma),
                opt(report.gamma),
                mp.refused_at
                    .map(|r| format!("; A^{r} exceeds the entry cap"))
                    .unwrap_or_default()
            ),
        ));
    }

    if a.is_matrix_lift() {
        let m = a.majorization();
        let mut power = m.clone();
        let mut powers_ok = true;
        for p in &engine {
            powers_ok &= *p == power;
            power = power.bool_mul(&m);
        }
        let exponent = matrix_exponent(&m);
        let ok = powers_ok && exponent == report.gamma;
        lines.push((
            status(ok),
            "matrix-lift",
            format!(
                "engine iterates {} Boolean powers of M(A) for k <= {bound}; gamma {} vs matrix exponent {}",
                if powers_ok { "equal" } else { "differ from" },
                opt(report.gamma),
                opt(exponent)
            ),
        ));
    } else {
        lines.push((
            CheckStatus::Skipped,
            "matrix-lift",
            "tensor is not a matrix lift".to_string(),
        ));
    }

    let consistent = !(report.primitive && report.violation.is_some());
    lines.push((
        status(consistent),
        "prechecks",
        match &report.violation {
            Some(v) => format!("violation ({v}) with verdict not primitive"),
            None => "no violation".to_string(),
        },
    ));

    let mut out = String::new();
    let (mut pass, mut fail, mut skip) = (0, 0, 0);
    for (st, name, detail) in &lines {
        match st {
            CheckStatus::Pass => pass += 1,
            CheckStatus::Fail => fail += 1,
            CheckStatus::Skipped => skip += 1,
        }
        let _ = writeln!(out, "{} {name}: {detail}", st.label());
    }
    let _ = writeln!(out, "summary: {pass} passed, {fail} failed, {skip} skipped");
    Outcome {
        stdout: out,
        stderr: String::new(),
        code: if fail == 0 { 0 } else { 1 },
    }
}

/// A fully validated experiment grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub dims: Vec<usize>,
    pub m: usize,
    pub densities: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub include_wielandt: bool,
}

impl ExperimentSpec {
    pub fn parse(
        n_range: &str,
        m: usize,
        densities: &str,
        trials: usize,
        seed: u64,
        include_wielandt: bool,
    ) -> Result<Self, String> {
        let bad_range = || format!("malformed --n-range `{n_range}`, expected `a..b` or `a`");
        let (lo, hi) = match n_range.split_once("..") {
            Some((a, b)) => {
                let b = b.strip_prefix('=').unwrap_or(b);
                (
                    a.trim().parse::<usize>().map_err(|_| bad_range())?,
                    b.trim().parse::<usize>().map_err(|_| bad_range())?,
                )
            }
            None => {
                let v = n_range.trim().parse::<usize>().map_err(|_| bad_range())?;
                (v, v)
            }
        };
        if lo == 0 || lo > hi {
            return Err(format!(
                "--n-range `{n_range}` must be a nonempty range of positive integers"
            ));
        }
        if include_wielandt && lo < 2 {
            return Err("--include-wielandt needs every n >= 2".into());
        }
        if m < 2 {
            return Err(format!("--m must be at least 2, got {m}"));
        }
        let densities = densities
            .split(',')
            .map(|d| {
                let v: f64 = d
                    .trim()
                    .parse()
                    .map_err(|_| format!("malformed density `{d}`"))?;
                if v > 0.0 && v <= 1.0 {
                    Ok(v)
                } else {
                    Err(format!("density {v} is outside (0, 1]"))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ExperimentSpec {
            dims: (lo..=hi).collect(),
            m,
            densities,
            trials,
            seed,
            include_wielandt,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub n: usize,
    pub m: usize,
    pub density: f64,
    pub trials: usize,
    pub primitive_count: usize,
    pub max_gamma: Option<usize>,
    pub bound: usize,
    pub bound_hit_count: usize,
}

/// A primitive instance whose degree exceeds `(n-1)^2 + 1`.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub tensor: Tensor,
    pub report: DegreeReport,
}

/// Seed of trial `trial` in row `(n, density_index)`.
pub fn trial_seed(master: u64, n: usize, density_index: usize, trial: usize) -> u64 {
    derive_seed(
        master,
        ((n as u64) << 32) | density_index as u64,
        trial as u64,
    )
}

/// Runs the grid. Trials run on the rayon pool; rows come back in grid
/// order. Returns the first counterexample to the degree bound, if any.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<ExperimentRow>, Box<Counterexample>> {
    let mut rows = Vec::new();
    for &n in &spec.dims {
        let bound = degree_bound(n);
        for (di, &density) in spec.densities.iter().enumerate() {
            let mut instances: Vec<(Tensor, DegreeReport)> = (0..spec.trials)
                .into_par_iter()
                .map(|t| {
                    let a = random_tensor(
                        n,
                        spec.m,
                        density,
                        trial_seed(spec.seed, n, di, t),
                        Values::Ones,
                    )
                    .expect("grid parameters validated");
                    let r = analyze(&a);
                    (a, r)
                })
                .collect();
            if spec.include_wielandt {
                let w = wielandt_tensor(n, spec.m).expect("n >= 2 validated");
                let r = analyze(&w);
                instances.push((w, r));
            }
            if let Some((a, r)) = instances
                .iter()
                .find(|(_, r)| r.gamma.is_some_and(|g| g > bound))
            {
                return Err(Box::new(Counterexample {
                    tensor: a.clone(),
                    report: r.clone(),
                }));
            }
            let gammas: Vec<usize> = instances.iter().filter_map(|(_, r)| r.gamma).collect();
            rows.push(ExperimentRow {
                n,
                m: spec.m,
                density,
                trials: spec.trials,
                primitive_count: gammas.len(),
                max_gamma: gammas.iter().copied().max(),
                bound,
                bound_hit_count: gammas.iter().filter(|&&g| g == bound).count(),
            });
        }
    }
    Ok(rows)
}

const EXPERIMENT_COLUMNS: [&str; 8] = [
    "n",
    "m",
    "density",
    "trials",
    "primitive_count",
    "max_gamma",
    "bound",
    "bound_hit_count",
];

pub fn cmd_experiment(spec: &ExperimentSpec, pretty: bool) -> Outcome {
    let rows = match run_experiment(spec) {
        Ok(rows) => rows,
        Err(ce) => {
            let mut err = String::new();
            let _ = writeln!(
                err,
                "COUNTEREXAMPLE: primitive degree {} exceeds the bound {} (n = {}, m = {})",
                opt(ce.report.gamma),
                ce.report.bound,
                ce.report.dim,
                ce.report.order
            );
            err.push_str(&write_tensor(&ce.tensor));
            for (j, g) in ce.report.gamma_j.iter().enumerate() {
                let _ = writeln!(err, "# gamma_{} = {}", j + 1, opt(*g));
                if let Ok(t) = column_fill_trace(&ce.tensor, j) {
                    for (k, s) in t.sets.iter().enumerate() {
                        let _ = writeln!(err, "#   S_{} = {s}", k + 1);
                    }
                }
            }
            return Outcome {
                stdout: String::new(),
                stderr: err,
                code: 1,
            };
        }
    };
    let cells: Vec<[String; 8]> = rows
        .iter()
        .map(|r| {
            [
                r.n.to_string(),
                r.m.to_string(),
                r.density.to_string(),
                r.trials.to_string(),
                r.primitive_count.to_string(),
                opt(r.max_gamma),
                r.bound.to_string(),
                r.bound_hit_count.to_string(),
            ]
        })
        .collect();
    let mut out = String::new();
    if pretty {
        let widths: Vec<usize> = (0..8)
            .map(|c| {
                cells
                    .iter()
                    .map(|row| row[c].len())
                    .chain([EXPERIMENT_COLUMNS[c].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |fields: Vec<&str>| {
            fields
                .iter()
                .zip(&widths)
                .map(|(f, w)| format!("{f:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
        };
        let _ = writeln!(out, "{}", line(EXPERIMENT_COLUMNS.to_vec()));
        for row in &cells {
            let _ = writeln!(out, "{}", line(row.iter().map(String::as_str).collect()));
        }
    } else {
        let _ = writeln!(out, "# {}", EXPERIMENT_COLUMNS.join("\t"));
        for row in &cells {
            let _ = writeln!(out, "{}", row.join("\t"));
        }
    }
    Outcome {
        stdout: out,
        stderr: String::new(),
        code: 0,
    }
}

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use maxmin_eigen::bench::{run_bench, BenchConfig};
use maxmin_eigen::io::parse_matrix;
use maxmin_eigen::oracle::DEFAULT_POWER_STEPS;
use maxmin_eigen::{
    residuals, saturation_graph, solve, verify_eigenvector, ExtScalar, SolveConfig, SolveReport,
    Status, Threshold, TropicalMatrix,
};
use serde_json::Value;

const EXIT_INPUT: u8 = 1;
const EXIT_CONJECTURED: u8 = 2;
const EXIT_UNRESOLVED: u8 = 3;
const EXIT_REJECTED: u8 = 2;

/// Zone-based solver for the maxmin-omega eigenproblem.
#[derive(Parser, Debug)]
#[command(name = "maxmin", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve A ⊗_ω x = λ + x for one matrix and threshold.
    Solve(SolveArgs),
    /// Check an eigenpair by substitution and print per-row residuals.
    Verify(VerifyArgs),
    /// Run the seeded random benchmark.
    Bench(BenchArgs),
    /// Print the saturation, certified-active or possibly-active graph as DOT.
    Graph(GraphArgs),
}

#[derive(Args, Debug)]
struct Problem {
    /// JSON matrix file `{"n": .., "entries": [[..], ..]}`.
    #[arg(long)]
    matrix: PathBuf,
    /// Threshold rank p in 1..=n.
    #[arg(long)]
    p: usize,
}

#[derive(Args, Debug)]
struct Limits {
    #[arg(long, default_value_t = 64)]
    max_rounds: usize,
    #[arg(long, default_value_t = 10_000)]
    max_iters: usize,
}

impl Limits {
    fn config(&self) -> SolveConfig {
        SolveConfig {
            max_rounds: self.max_rounds,
            max_iters: self.max_iters,
        }
    }
}

#[derive(Args, Debug)]
struct Output {
    /// Emit JSON (default).
    #[arg(long, conflicts_with = "table")]
    json: bool,
    /// Emit a human-readable table.
    #[arg(long)]
    table: bool,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    problem: Problem,
    #[command(flatten)]
    limits: Limits,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    problem: Problem,
    /// Candidate eigenvalue, integer or "num/den".
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
    /// Candidate eigenvector, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    vector: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Matrix sizes, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "5,6,7")]
    sizes: Vec<usize>,
    /// Thresholds for every size (default 2..=n-1).
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<usize>>,
    /// Matrices per size.
    #[arg(long, default_value_t = 20)]
    count: usize,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    low: i64,
    #[arg(long, default_value_t = 100, allow_hyphen_values = true)]
    high: i64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_POWER_STEPS)]
    oracle_steps: usize,
    #[command(flatten)]
    limits: Limits,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Which {
    Sat,
    Act,
    Pos,
}

#[derive(Args, Debug)]
struct GraphArgs {
    #[command(flatten)]
    problem: Problem,
    #[arg(long, value_enum)]
    which: Which,
    /// Vector for the saturation graph, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    vector: Option<String>,
    /// Classify with the refined zone instead of the stabilized one.
    #[arg(long)]
    refined: bool,
    #[command(flatten)]
    limits: Limits,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Input problems exit with code 1; everything else propagates.
#[derive(Debug)]
struct InputError(anyhow::Error);

type Outcome = Result<u8, InputError>;

impl<E: Into<anyhow::Error>> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.into())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Graph(args) => cmd_graph(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(InputError(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn load(problem: &Problem) -> Result<(TropicalMatrix, Threshold), InputError> {
    let text = fs::read_to_string(&problem.matrix)
        .with_context(|| format!("cannot read {}", problem.matrix.display()))?;
    let a = parse_matrix(&text).with_context(|| format!("in {}", problem.matrix.display()))?;
    let t = Threshold::new(problem.p, a.n())?;
    Ok((a, t))
}

fn parse_vector(text: &str) -> anyhow::Result<Vec<ExtScalar>> {
    text.trim_matches(|c| c == '[' || c == ']')
        .split(',')
        .map(|s| {
            let v: ExtScalar = s.trim().parse()?;
            if !v.is_finite() {
                bail!("vector entries must be finite, found {v}");
            }
            Ok(v)
        })
        .collect()
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), InputError> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn status_code(status: Status) -> u8 {
    match status {
        Status::Solved => 0,
        Status::Conjectured => EXIT_CONJECTURED,
        Status::Unresolved | Status::Failed => EXIT_UNRESOLVED,
    }
}

/// The report as JSON, with `lambda` as an exact `"num/den"` string.
fn report_json(report: &SolveReport) -> String {
    let mut value = serde_json::to_value(report).expect("report serializes");
    value["lambda"] = match &report.lambda {
        Some(l) => Value::String(l.to_string()),
        None => Value::Null,
    };
    let mut text = serde_json::to_string_pretty(&value).expect("value serializes");
    text.push('\n');
    text
}

fn report_table(report: &SolveReport) -> String {
    let lambda = report.lambda.as_ref().map_or("-".to_string(), ToString::to_string);
    let mut s = format!(
        "n = {}, p = {}\nstatus: {:?}\nlambda: {lambda}\nbounds: {} <= lambda <= {}\nstabilization steps: {}\n",
        report.n,
        report.p,
        report.status,
        report.bounds.lower,
        report.bounds.upper,
        report.stabilization_steps
    );
    for r in &report.iterations {
        s += &format!(
            "round {}: m = {}, {:?}, [{}, {}]\n",
            r.round, r.midpoint, r.branch, r.lower, r.upper
        );
    }
    let cols: Vec<String> = report.eigenvector_columns.iter().map(|k| (k + 1).to_string()).collect();
    s += &format!("eigenvector columns: {}\n", if cols.is_empty() { "-".into() } else { cols.join(", ") });
    s += &format!("stabilized DBM:\n{}", report.stabilized_dbm.matrix());
    s += &format!("refined DBM:\n{}", report.refined_dbm.matrix());
    s += &format!("T:\n{}", report.refined_active.strongly_active);
    s += &format!("A-hat:\n{}", report.refined_active.possibly_active);
    s
}

fn cmd_solve(args: SolveArgs) -> Outcome {
    let (a, t) = load(&args.problem)?;
    let report = match solve(&a, t.p(), &args.limits.config()) {
        Ok(r) => r,
        Err(e @ maxmin_eigen::Error::IterationBudgetExceeded { .. }) => {
            eprintln!("unresolved: {e}");
            return Ok(EXIT_UNRESOLVED);
        }
        Err(e) => return Err(e.into()),
    };
    let text = if args.output.table {
        report_table(&report)
    } else {
        report_json(&report)
    };
    emit(args.output.out.as_deref(), &text)?;
    Ok(status_code(report.status))
}

fn cmd_verify(args: VerifyArgs) -> Outcome {
    let (a, t) = load(&args.problem)?;
    let lambda: ExtScalar = args.lambda.parse()?;
    let Some(l) = lambda.as_rational() else {
        return Err(anyhow!("lambda must be finite").into());
    };
    let x = parse_vector(&args.vector)?;
    if x.len() != a.n() {
        return Err(anyhow!("vector has {} entries, matrix is {}x{}", x.len(), a.n(), a.n()).into());
    }
    let res = residuals(&a, t, l, &x)?;
    let ok = verify_eigenvector(&a, t, &lambda, &x)?;
    let mut text = String::new();
    for (i, r) in res.iter().enumerate() {
        text += &format!("row {}: {r}\n", i + 1);
    }
    text += if ok { "verified\n" } else { "rejected\n" };
    emit(args.out.as_deref(), &text)?;
    Ok(if ok { 0 } else { EXIT_REJECTED })
}

fn cmd_bench(args: BenchArgs) -> Outcome {
    let p_values: BTreeMap<usize, Vec<usize>> = match &args.p {
        Some(ps) => args.sizes.iter().map(|&n| (n, ps.clone())).collect(),
        None => BTreeMap::new(),
    };
    let config = BenchConfig {
        sizes: args.sizes,
        p_values,
        count: args.count,
        low: args.low,
        high: args.high,
        seed: args.seed,
        solve: args.limits.config(),
        oracle_steps: args.oracle_steps,
    };
    let report = run_bench(&config)?;
    let text = if args.output.table {
        report.to_table()
    } else {
        report.to_json() + "\n"
    };
    emit(args.output.out.as_deref(), &text)?;
    Ok(0)
}

fn cmd_graph(args: GraphArgs) -> Outcome {
    let (a, t) = load(&args.problem)?;
    let report = solve(&a, t.p(), &args.limits.config())?;
    let active = if args.refined {
        &report.refined_active
    } else {
        &report.active
    };
    let (name, arcs) = match args.which {
        Which::Sat => {
            let text = args
                .vector
                .as_deref()
                .ok_or_else(|| anyhow!("--which sat requires --vector"))?;
            let x = parse_vector(text)?;
            if x.len() != a.n() {
                return Err(anyhow!("vector has {} entries, matrix is {}x{}", x.len(), a.n(), a.n()).into());
            }
            ("sat", saturation_graph(&a, t, &x)?)
        }
        Which::Act => ("act", active.act_graph.clone()),
        Which::Pos => ("pos", active.pos_graph.clone()),
    };
    emit(args.out.as_deref(), &arcs.to_dot(name, &a, Some(&active.act_graph)))?;
    Ok(0)
}

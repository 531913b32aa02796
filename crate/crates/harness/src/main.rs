use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use robustfw_core::config::Method;

use robustfw_harness::error::{ErrorKind, HarnessError};
use robustfw_harness::experiment::{
    default_trace_path, run_bench, run_instance, sanitize_name, worst_error_kind,
    write_trace_csv, BenchCell, RunSettings, SUMMARY_FILE,
};
use robustfw_harness::gen::{generate_instance, GenSpec, UncertaintyChoice};
use robustfw_harness::instance::{InstanceFile, Kind};

/// Benchmark harness for the oracle-based robust min-max solvers.
#[derive(Parser)]
#[command(name = "robustfw", version, about, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance and write it as JSON.
    Gen(GenArgs),
    /// Run one solver on one instance and write its iteration trace as CSV.
    Solve(SolveArgs),
    /// Run a grid of (instance, method) cells in parallel and write one trace
    /// per cell plus a summary.csv.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Ground set: mst, tsp, or vertex_list.
    #[arg(long)]
    kind: String,
    /// Graph vertex count, or coordinate dimension for vertex_list.
    #[arg(long)]
    n: usize,
    /// Deviation budget of the uncertainty set.
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// RNG seed; equal seeds give byte-identical files.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Uncertainty family: box, budgeted, or scenarios.
    #[arg(long, default_value = "budgeted")]
    uncertainty: String,
    /// Number of scenarios when --uncertainty scenarios.
    #[arg(long, default_value_t = 3)]
    num_scenarios: usize,
    /// Output path; defaults to <instance-name>.json in the working directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance JSON file to solve.
    #[arg(long)]
    instance: PathBuf,
    /// Solver: fw, afw, fw-convhull, or consgen.
    #[arg(long)]
    method: String,
    /// Target additive accuracy on the objective.
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    /// Fixed smoothing parameter override.
    #[arg(long)]
    mu: Option<f64>,
    /// Hard cap on iterations.
    #[arg(long, default_value_t = 10_000)]
    max_iters: usize,
    /// Hard cap on linear minimization oracle calls.
    #[arg(long, default_value_t = 2_500)]
    max_lmo: usize,
    /// Convex-hull solve cadence for fw-convhull.
    #[arg(long, default_value_t = 10)]
    period: usize,
    /// Trace CSV path; defaults to <instance-stem>_<method>.csv next to the
    /// instance.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Existing instance JSON files to include as rows.
    #[arg(long = "instance")]
    instances: Vec<PathBuf>,
    /// Generate sweep rows of this kind (requires --n).
    #[arg(long)]
    kind: Option<String>,
    /// Size for generated rows.
    #[arg(long)]
    n: Option<usize>,
    /// Budget values for generated rows; repeat for a sweep.
    #[arg(long = "gamma")]
    gammas: Vec<f64>,
    /// Seeds for generated rows; repeat for a sweep.
    #[arg(long = "seed")]
    seeds: Vec<u64>,
    /// Uncertainty family for generated rows.
    #[arg(long, default_value = "budgeted")]
    uncertainty: String,
    /// Number of scenarios when --uncertainty scenarios.
    #[arg(long, default_value_t = 3)]
    num_scenarios: usize,
    /// Solver column; repeat to compare methods.
    #[arg(long = "method", required = true)]
    methods: Vec<String>,
    /// Target additive accuracy for every cell.
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    /// Fixed smoothing parameter override for every cell.
    #[arg(long)]
    mu: Option<f64>,
    /// Hard cap on iterations per cell.
    #[arg(long, default_value_t = 10_000)]
    max_iters: usize,
    /// Hard cap on oracle calls per cell.
    #[arg(long, default_value_t = 2_500)]
    max_lmo: usize,
    /// Convex-hull solve cadence for fw-convhull cells.
    #[arg(long, default_value_t = 10)]
    period: usize,
    /// Output directory for traces, generated instances, and summary.csv.
    #[arg(long)]
    out: PathBuf,
}

fn parse_method(text: &str) -> Result<Method, HarnessError> {
    Method::parse(text).ok_or_else(|| {
        HarnessError::usage(format!(
            "unknown method {text:?} (expected fw, afw, fw-convhull, or consgen)"
        ))
    })
}

fn instance_label(file: &InstanceFile, path: &PathBuf) -> String {
    if let Some(name) = &file.name {
        return sanitize_name(name);
    }
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "instance".to_string());
    sanitize_name(&stem)
}

fn cmd_gen(args: GenArgs) -> Result<(), HarnessError> {
    let spec = GenSpec {
        kind: Kind::parse(&args.kind)?,
        n: args.n,
        gamma: args.gamma,
        seed: args.seed,
        uncertainty: UncertaintyChoice::parse(&args.uncertainty)?,
        num_scenarios: args.num_scenarios,
    };
    let file = generate_instance(&spec)?;
    let out = args.out.unwrap_or_else(|| PathBuf::from(format!("{}.json", spec.instance_name())));
    file.write(&out)?;
    println!("wrote {}", out.display());
    Ok(())
}

fn cmd_solve(args: SolveArgs) -> Result<(), HarnessError> {
    let method = parse_method(&args.method)?;
    let file = InstanceFile::read(&args.instance)?;
    let settings = RunSettings {
        epsilon: args.epsilon,
        mu_override: args.mu,
        max_iters: args.max_iters,
        max_lmo_calls: args.max_lmo,
        conv_hull_period: args.period,
    };
    let run = run_instance(&file, method, &settings)?;
    let trace_path = args.out.unwrap_or_else(|| default_trace_path(&args.instance, method));
    write_trace_csv(&trace_path, &run.trace)?;

    let elapsed = run.trace.last().map(|r| r.elapsed_seconds).unwrap_or(0.0);
    let dual = run.dual_bound.map(|b| b.to_string()).unwrap_or_default();
    println!(
        "instance={} method={} termination={} f_best={} dual_bound={} iterations={} lmo_calls={} elapsed_seconds={} trace={}",
        instance_label(&file, &args.instance),
        method.name(),
        run.termination.name(),
        run.f_best,
        dual,
        run.iterations,
        run.lmo_calls,
        elapsed,
        trace_path.display(),
    );
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<(), HarnessError> {
    let mut methods = Vec::new();
    for text in &args.methods {
        let method = parse_method(text)?;
        if !methods.contains(&method) {
            methods.push(method);
        }
    }

    let mut rows: Vec<(String, InstanceFile)> = Vec::new();
    for path in &args.instances {
        let file = InstanceFile::read(path)?;
        rows.push((instance_label(&file, path), file));
    }
    if let Some(kind_text) = &args.kind {
        let kind = Kind::parse(kind_text)?;
        let n = args
            .n
            .ok_or_else(|| HarnessError::usage("--kind sweeps need --n"))?;
        let uncertainty = UncertaintyChoice::parse(&args.uncertainty)?;
        let gammas = if args.gammas.is_empty() { vec![1.0] } else { args.gammas.clone() };
        let seeds = if args.seeds.is_empty() { vec![0] } else { args.seeds.clone() };
        for &gamma in &gammas {
            for &seed in &seeds {
                let spec = GenSpec {
                    kind,
                    n,
                    gamma,
                    seed,
                    uncertainty,
                    num_scenarios: args.num_scenarios,
                };
                rows.push((spec.instance_name(), generate_instance(&spec)?));
            }
        }
    } else if !args.gammas.is_empty() || !args.seeds.is_empty() || args.n.is_some() {
        return Err(HarnessError::usage("--n, --gamma, and --seed need --kind"));
    }
    if rows.is_empty() {
        return Err(HarnessError::usage("nothing to run: pass --instance files or a --kind sweep"));
    }

    std::fs::create_dir_all(&args.out).map_err(|e| {
        HarnessError::usage(format!("cannot create output directory {}: {e}", args.out.display()))
    })?;
    for (name, file) in &rows {
        file.write(&args.out.join(format!("{name}.json")))?;
    }

    let settings = RunSettings {
        epsilon: args.epsilon,
        mu_override: args.mu,
        max_iters: args.max_iters,
        max_lmo_calls: args.max_lmo,
        conv_hull_period: args.period,
    };
    let mut cells = Vec::new();
    for (name, file) in &rows {
        for &method in &methods {
            cells.push(BenchCell { name: name.clone(), file: file.clone(), method });
        }
    }
    let total = cells.len();
    let outcomes = run_bench(cells, &settings, &args.out)?;

    let failures = outcomes.iter().filter(|c| c.result.is_err()).count();
    for cell in &outcomes {
        if let Err(err) = &cell.result {
            eprintln!("cell {} {} failed: {err}", cell.name, cell.method.name());
        }
    }
    println!(
        "ran {} cells ({} failed); wrote traces and {} to {}",
        total,
        failures,
        SUMMARY_FILE,
        args.out.display(),
    );
    match worst_error_kind(&outcomes) {
        None => Ok(()),
        Some(ErrorKind::Solver) => Err(HarnessError::solver("one or more cells failed")),
        Some(_) => Err(HarnessError::instance("one or more cells failed")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

use std::fs::OpenOptions;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dualgraph::experiments::{
    loglog_fit, model_sweep, spanning_constant_sweep, splittability_sweep, sweep_graphs, KFit,
    ModelSummary, RegressionFit, SpanningRow, SplitRow, SweepConfig,
};
use dualgraph::io::{load_graph, read_xy, save_graph, write_rows, write_rows_to, GraphFormat, ResultRow};
use dualgraph::models::{build_model, ModelSpec};
use dualgraph::par::Execution;
use dualgraph::planarity::check_planar;
use dualgraph::spanning::spanning_profile;
use dualgraph::splitting::{estimate_splittability, GbasConfig, SplitMode, DEFAULT_TARGET_SUCCESSES, DEFAULT_TRIAL_CAP};
use dualgraph::{connected_components, degree_stats, largest_component, Error, Graph};

const ANALYZE_SCHEMA: [&str; 10] = [
    "graph", "n", "m", "avg_degree", "median_degree", "max_degree", "connected", "planar", "ln_st", "st_constant",
];

#[derive(Parser)]
#[command(name = "dualgraph", version, about = "Random dual-graph models, spanning trees and splittability")]
struct Cli {
    /// Run every computation on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Degree, connectivity, planarity and spanning-tree statistics of a graph file.
    Analyze {
        graph: PathBuf,
        #[arg(long)]
        format: Option<GraphFormat>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build one model instance and save it.
    Generate {
        #[arg(long)]
        model: String,
        #[arg(short)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        format: Option<GraphFormat>,
    },
    /// Estimate the probability that a uniform spanning tree splits into k balanced parts.
    Split(SplitArgs),
    /// Run a sweep described by a config file.
    Sweep {
        kind: SweepKind,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit ln y against ln x from two CSV columns.
    Fit {
        csv: PathBuf,
        #[arg(long, default_value = "n")]
        x: String,
        #[arg(long, default_value = "p_hat")]
        y: String,
        /// Append the fit to this CSV (header written when new).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SplitArgs {
    #[arg(long, conflicts_with = "model", required_unless_present = "model")]
    graph: Option<PathBuf>,
    #[arg(long, requires = "n")]
    model: Option<String>,
    #[arg(short)]
    n: Option<usize>,
    #[arg(short)]
    k: usize,
    #[arg(long, default_value_t = DEFAULT_TARGET_SUCCESSES)]
    successes: u64,
    /// Balance rule; chosen by divisibility when omitted.
    #[arg(long)]
    mode: Option<SplitMode>,
    #[arg(long, value_enum, default_value_t = EstimatorChoice::Ratio)]
    estimator: EstimatorChoice,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_TRIAL_CAP)]
    trial_cap: u64,
    #[arg(long)]
    format: Option<GraphFormat>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum EstimatorChoice {
    Ratio,
    Gbas,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepKind {
    Models,
    Split,
    Stconst,
}

fn emit(out: Option<&Path>, schema: &[&str], rows: &[ResultRow]) -> dualgraph::Result<()> {
    match out {
        Some(p) => write_rows(p, schema, rows),
        None => write_rows_to(io::stdout().lock(), schema, rows),
    }
}

fn load(path: &Path, format: Option<GraphFormat>) -> dualgraph::Result<Graph> {
    load_graph(path, format.unwrap_or_else(|| GraphFormat::from_path(path)))
}

fn label_of(path: &Path) -> String {
    path.file_stem()
        .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn analyze(path: &Path, format: Option<GraphFormat>, out: Option<&Path>) -> dualgraph::Result<()> {
    let g = load(path, format)?;
    let deg = degree_stats(&g)?;
    let connected = connected_components(&g).is_connected();
    // spanning trees of the largest component when disconnected
    let profile = spanning_profile(&largest_component(&g)?)?;
    let row = ResultRow::new()
        .with("graph", label_of(path))
        .with("n", g.n())
        .with("m", g.m())
        .with("avg_degree", deg.average)
        .with("median_degree", deg.median)
        .with("max_degree", deg.maximum)
        .with("connected", connected)
        .with("planar", check_planar(&g))
        .with("ln_st", profile.ln_count)
        .with("st_constant", profile.st_constant);
    emit(out, &ANALYZE_SCHEMA, &[row])
}

fn split(a: &SplitArgs, execution: Execution) -> dualgraph::Result<()> {
    let (g, label) = match (&a.graph, &a.model) {
        (Some(path), _) => (load(path, a.format)?, label_of(path)),
        (None, Some(m)) => {
            let spec = ModelSpec::resolve(m)?;
            let n = a.n.expect("clap enforces -n with --model");
            (build_model(&spec, n, a.seed)?, format!("{}-n{n}", spec.name))
        }
        (None, None) => unreachable!("clap requires --graph or --model"),
    };
    let cfg = GbasConfig {
        target_successes: a.successes,
        trial_cap: a.trial_cap,
        seed: a.seed,
        execution,
    };
    let e = estimate_splittability(&g, &label, a.k, a.mode, &cfg)?;
    let p_hat = match a.estimator {
        EstimatorChoice::Gbas => e.p_gbas,
        _ => e.p_hat,
    };
    let mut schema = vec!["graph", "n", "k", "successes", "trials", "p_hat", "seed"];
    let mut row = ResultRow::new()
        .with("graph", e.graph_label.as_str())
        .with("n", e.n)
        .with("k", e.k)
        .with("successes", e.successes)
        .with("trials", e.trials)
        .with("p_hat", p_hat)
        .with("seed", e.seed);
    if let EstimatorChoice::Both = a.estimator {
        schema.push("p_gbas");
        row = row.with("p_gbas", e.p_gbas);
    }
    emit(a.out.as_deref(), &schema, &[row])
}

/// `runs.csv` -> `runs_fits.csv`
fn fits_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    out.with_file_name(format!("{stem}_fits.csv"))
}

fn sweep(kind: SweepKind, config: &Path, out: &Path, execution: Execution) -> dualgraph::Result<()> {
    let cfg = SweepConfig {
        execution,
        ..SweepConfig::load(config)?
    };
    match kind {
        SweepKind::Models => {
            let rows: Vec<ResultRow> = model_sweep(&cfg)?.iter().map(ModelSummary::to_row).collect();
            write_rows(out, &ModelSummary::SCHEMA, &rows)
        }
        SweepKind::Stconst => {
            let rows: Vec<ResultRow> = spanning_constant_sweep(&cfg)?.iter().map(SpanningRow::to_row).collect();
            write_rows(out, &SpanningRow::SCHEMA, &rows)
        }
        SweepKind::Split => {
            let graphs = sweep_graphs(&cfg)?;
            let result = splittability_sweep(&cfg, &graphs)?;
            for (label, k) in &result.excluded {
                eprintln!("excluded {label} for k = {k} (fewer than {} vertices)", 4 * k);
            }
            let capped = result.rows.iter().filter(|r| r.p_hat.is_none()).count();
            if capped > 0 {
                eprintln!("{capped} estimate(s) hit the trial cap and were left out of the fits");
            }
            let rows: Vec<ResultRow> = result.rows.iter().map(SplitRow::to_row).collect();
            write_rows(out, &SplitRow::SCHEMA, &rows)?;
            let fits: Vec<ResultRow> = result.fits.iter().map(KFit::to_row).collect();
            write_rows(&fits_path(out), &KFit::SCHEMA, &fits)
        }
    }
}

fn fit(csv: &Path, x: &str, y: &str, out: Option<&Path>) -> dualgraph::Result<()> {
    let f = loglog_fit(&read_xy(csv, x, y)?)?;
    println!(
        "ln({y}) = {:.6} ln({x}) + {:.6}   R^2 = {:.6}   points = {}",
        f.slope, f.intercept, f.r_squared, f.n_points
    );
    let row = f.to_row();
    let Some(path) = out else {
        return write_rows_to(io::stdout().lock(), &RegressionFit::SCHEMA, &[row]);
    };
    let fresh = !path.exists() || std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let mut buf = Vec::new();
    write_rows_to(&mut buf, &RegressionFit::SCHEMA, &[row])?;
    if !fresh {
        // drop the header line
        let cut = buf.iter().position(|&b| b == b'\n').map_or(0, |i| i + 1);
        buf.drain(..cut);
    }
    let io_err = |e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    };
    let mut file = OpenOptions::new().create(true).append(true).open(path).map_err(io_err)?;
    file.write_all(&buf).map_err(io_err)
}

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var("DUALGRAPH_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| format!("DUALGRAPH_THREADS must be a positive integer, got {value:?}"))?;
    #[cfg(feature = "parallel")]
    dualgraph::par::set_thread_count(threads).map_err(|e| e.to_string())?;
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

fn run(cli: Cli) -> dualgraph::Result<()> {
    let execution = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    match cli.command {
        Command::Analyze { graph, format, out } => analyze(&graph, format, out.as_deref()),
        Command::Generate {
            model,
            n,
            seed,
            output,
            format,
        } => {
            let spec = ModelSpec::resolve(&model)?;
            let g = build_model(&spec, n, seed)?;
            save_graph(&g, &output, format.unwrap_or_else(|| GraphFormat::from_path(&output)))
        }
        Command::Split(a) => split(&a, execution),
        Command::Sweep { kind, config, out } => sweep(kind, &config, &out, execution),
        Command::Fit { csv, x, y, out } => fit(&csv, &x, &y, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}

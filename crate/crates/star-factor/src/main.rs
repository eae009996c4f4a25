//! Command-line interface: generate instances, solve for star factors,
//! verify packings, query the exact oracle on tiny graphs, and run seeded
//! benchmarks.
//!
//! Exit codes: 0 success/valid, 1 verification failure, 2 input or parse
//! error, 3 solver failure.

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use std::path::PathBuf;
use std::time::Instant;

use star_factor::cover::Mode;
use star_factor::graph::{Graph, VertexSet};
use star_factor::packing::verify;
use star_factor::solver::{solve, SolveReport, SolverConfig};
use star_factor::util::{ceil_sqrt, derive_seed, round12};
use star_factor::{construct, io, oracle, Error};

#[derive(Parser)]
#[command(name = "star-factor", version, about = "Star-factor solver toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Regular,
    MinDegree,
    LowerBound,
}

impl Family {
    fn as_str(self) -> &'static str {
        match self {
            Family::Regular => "regular",
            Family::MinDegree => "min-degree",
            Family::LowerBound => "lower-bound",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Faithful,
    BestEffort,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Faithful => Mode::Faithful,
            ModeArg::BestEffort => Mode::BestEffort,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a graph instance and write it to a file.
    Gen(GenArgs),
    /// Compute a star factor of a graph with minimum degree at least d.
    Solve(SolveArgs),
    /// Verify a packing file against a graph file.
    Verify(VerifyArgs),
    /// Exact maximum star-factor size (or decision) on a tiny graph.
    Oracle(OracleArgs),
    /// Batch solve random instances and write a CSV of achieved sizes.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    family: Family,
    /// Vertex count (layer size n for lower-bound).
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    graph: PathBuf,
    #[arg(long)]
    d: usize,
    #[arg(long, value_enum, default_value = "best-effort")]
    mode: ModeArg,
    #[arg(long)]
    seed: Option<u64>,
    /// Packing output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON report output path.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    graph: PathBuf,
    packing: PathBuf,
    #[arg(long)]
    ell: usize,
    /// Cover requirement: "all", "none", or comma-separated vertex ids.
    #[arg(long, default_value = "all")]
    cover: String,
}

#[derive(Args)]
struct OracleArgs {
    graph: PathBuf,
    /// Decide existence at this exact ell instead of maximizing.
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long, default_value_t = oracle::DEFAULT_LIMIT)]
    limit: usize,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Comma-separated list of degree parameters.
    #[arg(long = "d-list", value_delimiter = ',', required = true)]
    d_list: Vec<usize>,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "best-effort")]
    mode: ModeArg,
    #[arg(long)]
    csv: PathBuf,
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::SolverFailure { .. } => 3,
                _ => 2,
            }
        }
    };
    std::process::exit(code);
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    let seed = seed.unwrap_or_else(|| rand::rng().random());
    println!("seed: {seed}");
    seed
}

fn run(cli: Cli) -> star_factor::Result<i32> {
    match cli.cmd {
        Cmd::Gen(args) => cmd_gen(args),
        Cmd::Solve(args) => cmd_solve(args),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Oracle(args) => cmd_oracle(args),
        Cmd::Bench(args) => cmd_bench(args),
    }
}

fn generate(family: Family, n: usize, d: usize, seed: u64) -> star_factor::Result<Graph> {
    match family {
        Family::Regular => construct::random_regular_graph(n, d, seed),
        Family::MinDegree => construct::random_min_degree_graph(n, d, seed),
        Family::LowerBound => construct::lower_bound_graph(d, n, seed),
    }
}

fn cmd_gen(args: GenArgs) -> star_factor::Result<i32> {
    let seed = resolve_seed(args.seed);
    let g = generate(args.family, args.n, args.d, seed)?;
    io::write_graph(&args.out, &g)?;
    println!("vertices: {}", g.vertex_count());
    println!("edges: {}", g.edge_count());
    Ok(0)
}

fn cmd_solve(args: SolveArgs) -> star_factor::Result<i32> {
    let g = io::read_graph(&args.graph)?;
    let seed = resolve_seed(args.seed);
    let cfg = SolverConfig::default()
        .with_seed(seed)
        .with_mode(args.mode.into());
    let (packing, report) = solve(&g, args.d, &cfg)?;

    let check = verify(
        &g,
        &packing,
        report.achieved_ell,
        &VertexSet::full(g.vertex_count()),
    );
    if let Some(path) = &args.out {
        io::write_packing(path, &packing)?;
    }
    if let Some(path) = &args.report {
        std::fs::write(
            path,
            serde_json::to_string_pretty(&report).expect("report serializes"),
        )?;
    }
    println!("achieved_ell: {}", report.achieved_ell);
    println!("paper_target_ell: {}", report.paper_target_ell);
    println!("fallbacks: {}", report.fallbacks.len());
    if !check.is_valid() {
        for v in &check.violations {
            println!("{v}");
        }
        return Ok(1);
    }
    Ok(0)
}

fn parse_cover(spec: &str, n: usize) -> star_factor::Result<VertexSet> {
    match spec {
        "all" => Ok(VertexSet::full(n)),
        "none" => Ok(VertexSet::new()),
        list => list
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Input(format!("bad cover vertex '{t}'")))
            })
            .collect::<star_factor::Result<Vec<usize>>>()
            .map(|v| v.into_iter().collect()),
    }
}

fn cmd_verify(args: VerifyArgs) -> star_factor::Result<i32> {
    let g = io::read_graph(&args.graph)?;
    let p = io::read_packing(&args.packing)?;
    let cover = parse_cover(&args.cover, g.vertex_count())?;
    let report = verify(&g, &p, args.ell, &cover);
    for v in &report.violations {
        println!("{v}");
    }
    if report.is_valid() {
        println!("valid: min star size {:?}", report.min_star_size);
        Ok(0)
    } else {
        Ok(1)
    }
}

fn cmd_oracle(args: OracleArgs) -> star_factor::Result<i32> {
    let g = io::read_graph(&args.graph)?;
    match args.ell {
        Some(ell) => {
            let (yes, _) = oracle::exists_factor(&g, ell, args.limit)?;
            println!("{}", if yes { "yes" } else { "no" });
        }
        None => {
            let out = oracle::max_factor_size(&g, args.limit)?;
            if out.isolated_vertex {
                println!("0 # isolated vertex: no factor exists");
            } else {
                println!("{}", out.ell);
            }
        }
    }
    Ok(0)
}

struct BenchRow {
    family: &'static str,
    n: usize,
    d: usize,
    trial: usize,
    seed: u64,
    outcome: star_factor::Result<(usize, SolveReport, f64)>,
}

fn bench_one(
    family: Family,
    n: usize,
    d: usize,
    seed: u64,
    mode: Mode,
) -> star_factor::Result<(usize, SolveReport, f64)> {
    let g = generate(family, n, d, seed)?;
    let start = Instant::now();
    let cfg = SolverConfig::default().with_seed(seed).with_mode(mode);
    let (packing, report) = solve(&g, d, &cfg)?;
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let check = verify(
        &g,
        &packing,
        report.achieved_ell,
        &VertexSet::full(g.vertex_count()),
    );
    if !check.is_valid() {
        return Err(Error::SolverFailure {
            stage: "bench.verify".into(),
            details: format!("{} violations", check.violations.len()),
        });
    }
    if matches!(family, Family::LowerBound) && report.achieved_ell > ceil_sqrt(d) + 1 {
        return Err(Error::SolverFailure {
            stage: "bench.bound".into(),
            details: format!(
                "achieved_ell {} exceeds ceil(sqrt(d))+1 = {}",
                report.achieved_ell,
                ceil_sqrt(d) + 1
            ),
        });
    }
    Ok((report.achieved_ell, report, elapsed))
}

fn cmd_bench(args: BenchArgs) -> star_factor::Result<i32> {
    if args.d_list.is_empty() {
        return Err(Error::Input("d-list must not be empty".into()));
    }
    let base_seed = resolve_seed(args.seed);
    let mode: Mode = args.mode.into();

    let params: Vec<(usize, usize, usize, u64)> = args
        .d_list
        .iter()
        .flat_map(|&d| (0..args.trials).map(move |t| (d, t)))
        .enumerate()
        .map(|(i, (d, t))| (d, args.n, t, derive_seed(base_seed, i as u64)))
        .collect();

    let workers = std::thread::available_parallelism()
        .map(|p| p.get())
        .unwrap_or(1)
        .min(4);
    let rows: Vec<BenchRow> = std::thread::scope(|scope| {
        let chunks: Vec<_> = params.chunks(params.len().div_ceil(workers)).collect();
        let handles: Vec<_> = chunks
            .into_iter()
            .map(|chunk| {
                scope.spawn(move || {
                    chunk
                        .iter()
                        .map(|&(d, n, trial, seed)| BenchRow {
                            family: args.family.as_str(),
                            n,
                            d,
                            trial,
                            seed,
                            outcome: bench_one(args.family, n, d, seed, mode),
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("bench worker"))
            .collect()
    });

    let mut writer = csv::Writer::from_path(&args.csv).map_err(csv_err)?;
    writer
        .write_record([
            "family",
            "n",
            "d",
            "trial",
            "seed",
            "achieved_ell",
            "sqrt_d",
            "paper_target_ell",
            "c_tilde",
            "fallback_used",
            "wall_time_ms",
            "error",
        ])
        .map_err(csv_err)?;
    for row in &rows {
        let sqrt_d = round12((row.d as f64).sqrt());
        match &row.outcome {
            Ok((ell, report, wall)) => writer
                .write_record([
                    row.family.to_string(),
                    row.n.to_string(),
                    row.d.to_string(),
                    row.trial.to_string(),
                    row.seed.to_string(),
                    ell.to_string(),
                    sqrt_d.to_string(),
                    report.paper_target_ell.to_string(),
                    report.c_tilde.to_string(),
                    (!report.fallbacks.is_empty()).to_string(),
                    format!("{wall:.3}"),
                    String::new(),
                ])
                .map_err(csv_err)?,
            Err(e) => writer
                .write_record([
                    row.family.to_string(),
                    row.n.to_string(),
                    row.d.to_string(),
                    row.trial.to_string(),
                    row.seed.to_string(),
                    String::new(),
                    sqrt_d.to_string(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    e.to_string(),
                ])
                .map_err(csv_err)?,
        }
    }
    writer.flush().map_err(Error::Io)?;
    let failures = rows.iter().filter(|r| r.outcome.is_err()).count();
    println!("rows: {} ({} failed)", rows.len(), failures);
    Ok(0)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Input(format!("csv write failed: {e}"))
}

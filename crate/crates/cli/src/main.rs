use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use lsminit::config::{self, serialize};
use lsminit::engine::{simulate, Plasticity};
use lsminit::experiment::{
    format_sig6, run_sweep_with, summarize, write_csv, write_summary_csv, Execution, SweepConfig, Which,
};
use lsminit::plot::emit_plot;
use lsminit::seed;
use lsminit::weight_init::{
    barabasi_albert, degree_table, erdos_renyi, matched_er_p, WeightRange, DEFAULT_BA_M, DEFAULT_KEEP_FRACTION,
};
use lsminit::{van_rossum, victor_purpura, SpikeTrain, VpCost, VrKernel};

const EXIT_USAGE: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

#[derive(Parser)]
#[command(name = "lsminit", version, about = "Weight-initialisation sweeps for LIF/STDP spiking networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a weight-range sweep and write records, summary and plots.
    Sweep(SweepArgs),
    /// Simulate one network and dump the recorded spike trains.
    Simulate(SimulateArgs),
    /// Distance between two spike-train files.
    Metric(MetricArgs),
    /// Generate a graph and its degree/weight table.
    Graph(GraphArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Config file; the built-in defaults are used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, required_unless_present = "print_defaults")]
    out: Option<PathBuf>,
    /// Print the default config and exit.
    #[arg(long)]
    print_defaults: bool,
    /// Run cells one after another instead of in parallel.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    /// Seed; defaults to the first seed of the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Weight range `lo:hi`; defaults to the first range of the config.
    #[arg(long)]
    range: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricKind {
    Vp,
    Vr,
}

#[derive(Args)]
struct MetricArgs {
    kind: MetricKind,
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    /// Victor-Purpura shift cost (1/ms).
    #[arg(long, default_value_t = VpCost::default().q)]
    q: f64,
    /// van Rossum kernel time constant (ms).
    #[arg(long, default_value_t = VrKernel::default().tau)]
    tau: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphKind {
    Ba,
    Er,
}

#[derive(Args)]
struct GraphArgs {
    kind: GraphKind,
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Edges per new node (BA); also sets ER's matched default p.
    #[arg(long, default_value_t = DEFAULT_BA_M)]
    m: usize,
    /// ER edge probability; defaults to BA's expected density.
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Weight range `lo:hi` for the degree table.
    #[arg(long, default_value = "1:10")]
    range: String,
    #[arg(long, default_value_t = DEFAULT_KEEP_FRACTION)]
    keep: f64,
    #[arg(long)]
    out: PathBuf,
}

struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn config_err(error: impl Into<anyhow::Error>) -> Failure {
    Failure { code: EXIT_CONFIG, error: error.into() }
}

fn runtime_err(error: impl Into<anyhow::Error>) -> Failure {
    Failure { code: EXIT_RUNTIME, error: error.into() }
}

fn usage_err(error: impl Into<anyhow::Error>) -> Failure {
    Failure { code: EXIT_USAGE, error: error.into() }
}

fn load_config(path: Option<&Path>) -> Result<SweepConfig, Failure> {
    match path {
        None => Ok(SweepConfig::default()),
        Some(p) => config::load(p).map_err(config_err),
    }
}

fn create_dir(dir: &Path) -> Result<(), Failure> {
    std::fs::create_dir_all(dir)
        .with_context(|| format!("creating {}", dir.display()))
        .map_err(runtime_err)
}

fn parse_range(s: &str) -> anyhow::Result<WeightRange> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| anyhow!("expected `lo:hi`, got `{s}`"))?;
    let lo: f64 = lo.trim().parse().with_context(|| format!("bad lower bound in `{s}`"))?;
    let hi: f64 = hi.trim().parse().with_context(|| format!("bad upper bound in `{s}`"))?;
    Ok(WeightRange::new(lo, hi)?)
}

fn sweep(args: SweepArgs) -> Result<(), Failure> {
    let config = load_config(args.config.as_deref())?;
    if args.print_defaults {
        print!("{}", serialize(&SweepConfig::default()));
        return Ok(());
    }
    let out = args.out.expect("clap enforces --out");
    create_dir(&out)?;
    let execution = if args.sequential { Execution::Sequential } else { Execution::Parallel };
    log::info!("running {} records", config.record_count());
    let outcome = run_sweep_with(&config, execution).map_err(runtime_err)?;
    for f in &outcome.failures {
        eprintln!("cell {} {} seed {} failed: {}", f.method, f.range, f.seed, f.message);
    }
    if outcome.records.is_empty() {
        return Err(runtime_err(anyhow!("every sweep cell failed")));
    }
    write_csv(&outcome.records, out.join("records.csv")).map_err(runtime_err)?;
    let summary = summarize(&outcome.records).map_err(runtime_err)?;
    write_summary_csv(&summary, out.join("summary.csv")).map_err(runtime_err)?;
    emit_plot(&outcome.records, Which::Vp, out.join("vp.svg")).map_err(runtime_err)?;
    emit_plot(&outcome.records, Which::Vr, out.join("vr.svg")).map_err(runtime_err)?;
    if !outcome.failures.is_empty() {
        let mut text = String::from("method,w_low,w_high,seed,message\n");
        for f in &outcome.failures {
            text.push_str(&format!(
                "{},{},{},{},\"{}\"\n",
                f.method,
                format_sig6(f.range.low),
                format_sig6(f.range.high),
                f.seed,
                f.message.replace('"', "'")
            ));
        }
        let path = out.join("failures.csv");
        std::fs::write(&path, text)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(runtime_err)?;
    }
    for b in &summary.best {
        println!("{}: best vp {} best vr {}", b.method, b.vp_range, b.vr_range);
    }
    Ok(())
}

fn simulate_cmd(args: SimulateArgs) -> Result<(), Failure> {
    let config = load_config(args.config.as_deref())?;
    let range = match &args.range {
        Some(r) => parse_range(r).map_err(usage_err)?,
        None => config.ranges[0],
    };
    let run_seed = args.seed.unwrap_or(config.seeds[0]);
    let method = config.methods[0];
    let topo = config
        .topology
        .build(
            &config.lif,
            &method,
            range,
            run_seed,
            lsminit::experiment::epoch_seed(run_seed, 0, &method, range),
        )
        .map_err(runtime_err)?;
    let plasticity = if config.plasticity_on {
        Plasticity::On(config.stdp_for(range))
    } else {
        Plasticity::Off
    };
    let result =
        simulate(&topo, &config.stimulus, config.duration, config.dt, run_seed, plasticity).map_err(runtime_err)?;
    create_dir(&args.out)?;
    for (id, train) in &result.recorded {
        train.write(args.out.join(format!("neuron_{id}.txt"))).map_err(runtime_err)?;
    }
    let topo_path = args.out.join("topology.csv");
    std::fs::write(&topo_path, topo.to_csv())
        .with_context(|| format!("writing {}", topo_path.display()))
        .map_err(runtime_err)?;
    let spikes: usize = result.recorded.values().map(SpikeTrain::len).sum();
    println!(
        "{} neurons recorded, {} spikes, method {} range {} seed {}",
        result.recorded.len(),
        spikes,
        method.name(),
        range,
        run_seed
    );
    Ok(())
}

fn metric(args: MetricArgs) -> Result<(), Failure> {
    let a = SpikeTrain::read(&args.a).map_err(runtime_err)?;
    let b = SpikeTrain::read(&args.b).map_err(runtime_err)?;
    let d = match args.kind {
        MetricKind::Vp => victor_purpura(&a, &b, VpCost::new(args.q).map_err(usage_err)?),
        MetricKind::Vr => van_rossum(&a, &b, VrKernel::new(args.tau).map_err(usage_err)?),
    };
    println!("{}", format_sig6(d));
    Ok(())
}

fn graph(args: GraphArgs) -> Result<(), Failure> {
    let range = parse_range(&args.range).map_err(usage_err)?;
    let mut rng = seed::rng(args.seed);
    let g = match args.kind {
        GraphKind::Ba => barabasi_albert(args.n, args.m, &mut rng),
        GraphKind::Er => {
            let p = args.p.unwrap_or_else(|| matched_er_p(args.n, args.m));
            erdos_renyi(args.n, p, &mut rng)
        }
    }
    .map_err(usage_err)?;
    let table = degree_table(&g, range, args.keep).map_err(usage_err)?;
    create_dir(&args.out)?;
    let edges = args.out.join("edges.txt");
    std::fs::write(&edges, g.to_edge_list())
        .with_context(|| format!("writing {}", edges.display()))
        .map_err(runtime_err)?;
    let mut csv = String::from("node,degree,weight,kept\n");
    for row in &table {
        csv.push_str(&format!("{},{},{},{}\n", row.node, row.degree, format_sig6(row.weight), row.kept));
    }
    let path = args.out.join("degrees.csv");
    std::fs::write(&path, csv)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(runtime_err)?;
    println!("{} nodes, {} edges", g.n(), g.edges().len());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Sweep(a) => sweep(a),
        Command::Simulate(a) => simulate_cmd(a),
        Command::Metric(a) => metric(a),
        Command::Graph(a) => graph(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

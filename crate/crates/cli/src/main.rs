//! `ftw`: largest-root tests, Tracy–Widom laws, edge constants and
//! Monte-Carlo studies from the command line.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::LazyLock;

use clap::{ArgGroup, Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use ftw_core::edge::{
    discrete_constants, empirical_constants, integral_constants, johnstone_constants,
    log_constants, section5_constants, CpMethod, DimensionTriple, EdgeConstants,
};
use ftw_core::ensembles::{
    apply_sigma, EntryDistribution, EntrySampler, Seed, SigmaConvention, SpikeSpec, RNG_ALGORITHM,
};
use ftw_core::inference::equality_test;
use ftw_core::linalg::{read_matrix_file, sym_eigenvalues};
use ftw_core::mc::{
    qq_data, run_null_coverage, run_power, write_qq_csv, RunOptions, SimulationConfig,
    SimulationMode, DEFAULT_ALPHA, DEFAULT_REPS,
};
use ftw_core::tw::{tw_cdf, tw_quantile, TwParams, TABLE1};
use ftw_core::Error;

static VERSION: LazyLock<String> =
    LazyLock::new(|| format!("{} (rng {RNG_ALGORITHM})", env!("CARGO_PKG_VERSION")));

#[derive(Debug, Parser)]
#[command(name = "ftw", about = "Largest root of F-type pencils and Tracy-Widom inference")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the payload to this file instead of stdout.
    #[arg(long, short, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Log verbosity on stderr (-v info, -vv debug, -vvv trace).
    #[arg(long, short, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print all six forms of the centering and scaling constants as JSON.
    Constants(ConstantsArgs),
    /// Evaluate the Tracy-Widom law: CDF, quantile or the reference table.
    Tw(TwArgs),
    /// Run the two-sample covariance equality test.
    Test(TestArgs),
    /// Null coverage study at the nine reference percentiles.
    Simulate(SimArgs),
    /// Power study under a spiked alternative.
    Power(SimArgs),
    /// Quantile-quantile data of the null statistic as CSV.
    Qq(SimArgs),
}

#[derive(Debug, Args)]
struct ConstantsArgs {
    /// Dimensions "p,m,n".
    #[arg(long)]
    triple: DimensionTriple,
    /// Entry distribution of the sample behind the empirical form.
    #[arg(long, default_value = "gaussian")]
    dist: EntryDistribution,
    /// Seed of the sample behind the empirical form.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("query").required(true).args(["cdf", "quantile", "table"])))]
struct TwArgs {
    /// 1 for real (F1), 2 for complex (F2).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    beta: u8,
    /// Evaluate F_beta at this point in [-15, 10].
    #[arg(long, allow_hyphen_values = true)]
    cdf: Option<f64>,
    /// Invert F_beta at this level in [1e-6, 1 - 1e-6].
    #[arg(long)]
    quantile: Option<f64>,
    /// Evaluate F_beta at the nine reference percentiles.
    #[arg(long)]
    table: bool,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("data").required(true).args(["z1", "triple"])))]
struct TestArgs {
    /// CSV of the first sample, p rows by n columns.
    #[arg(long, requires = "z2")]
    z1: Option<PathBuf>,
    /// CSV of the second sample, p rows by m columns.
    #[arg(long, requires = "z1")]
    z2: Option<PathBuf>,
    /// Skip the first line of each CSV.
    #[arg(long)]
    header: bool,
    /// Generate both samples instead: dimensions "p,m,n".
    #[arg(long, conflicts_with_all = ["z1", "z2"])]
    triple: Option<DimensionTriple>,
    /// Entry distribution for generated samples.
    #[arg(long, default_value = "gaussian")]
    dist: EntryDistribution,
    /// Seed for generated samples.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Covariance of the generated first sample: identity, rank1:tau=<v> or alt:omega=<v>.
    #[arg(long, default_value = "identity")]
    spike: SpikeSpec,
    /// Apply Sigma^(1/2) ("half") or Sigma ("full") to the generated first sample.
    #[arg(long, default_value = "half")]
    sigma: SigmaConvention,
    /// Significance level in (0, 1].
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
}

#[derive(Debug, Args)]
struct SimArgs {
    /// Dimensions "p,m,n".
    #[arg(long)]
    triple: DimensionTriple,
    /// Entry distribution: gaussian, three-point or uniform.
    #[arg(long, default_value = "gaussian")]
    dist: EntryDistribution,
    /// Number of replications.
    #[arg(long, default_value_t = DEFAULT_REPS)]
    reps: usize,
    /// Base seed; replication r uses stream r.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: available parallelism). Does not change the output.
    #[arg(long)]
    threads: Option<usize>,
    /// Covariance of the first sample: identity, rank1:tau=<v> or alt:omega=<v>.
    #[arg(long, default_value = "identity")]
    spike: SpikeSpec,
    /// Apply Sigma^(1/2) ("half") or Sigma ("full") to the first sample.
    #[arg(long, default_value = "half")]
    sigma: SigmaConvention,
    /// Significance level in (0, 1) for power studies.
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    /// Record wall time as elapsed_ms (output is then not reproducible).
    #[arg(long)]
    timing: bool,
}

impl SimArgs {
    fn config(&self, mode: SimulationMode) -> SimulationConfig {
        let mut c = SimulationConfig::new(self.triple, self.dist, mode);
        c.reps = self.reps;
        c.base_seed = self.seed;
        c.spike = self.spike;
        c.sigma_convention = self.sigma;
        c.alpha = self.alpha;
        c
    }

    fn options(&self) -> RunOptions {
        let mut o = RunOptions::default();
        if let Some(t) = self.threads {
            o.threads = t;
        }
        o.timing = self.timing;
        o
    }
}

#[derive(Debug)]
enum Failure {
    Compute(Error),
    Output(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Output(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Output(e.into())
    }
}

/// Rounds every float in a JSON tree to 15 significant digits.
fn round15(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x: f64 = format!("{:.14e}", n.as_f64().unwrap_or(f64::NAN)).parse().unwrap_or(f64::NAN);
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round15).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round15(v))).collect()),
        other => other,
    }
}

fn write_json(out: &mut dyn Write, value: &impl Serialize) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

/// Descending nonzero spectrum of `Y Yᵀ / m̆` for a sampled `Y`.
fn sample_spectrum(t: &DimensionTriple, dist: EntryDistribution, seed: u64) -> Result<Vec<f64>, Error> {
    let mut s = EntrySampler::new(Seed::new(seed, 0));
    let _x = s.matrix(dist, t.p, t.n);
    let y = s.matrix(dist, t.p, t.m);
    let mut eigs = sym_eigenvalues(&y.gram().scaled(1.0 / t.m_breve() as f64))?;
    eigs.truncate(t.p_breve());
    Ok(eigs)
}

fn constants(a: &ConstantsArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let t = &a.triple;
    let eigs = sample_spectrum(t, a.dist, a.seed)?;
    log::info!("empirical form from {} sample eigenvalues", eigs.len());
    let forms: Vec<EdgeConstants> = vec![
        johnstone_constants(t)?,
        section5_constants(t)?,
        integral_constants(t, CpMethod::FixedPoint)?,
        discrete_constants(t)?,
        empirical_constants(&eigs, t.n_breve())?,
        log_constants(t)?,
    ];
    let payload = serde_json::json!({
        "triple": t,
        "dist": a.dist,
        "seed": a.seed,
        "constants": forms,
    });
    write_json(out, &round15(payload))
}

#[derive(Serialize)]
struct TwRow {
    percentile: f64,
    nominal: f64,
    cdf: f64,
}

fn tw(a: &TwArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let p = TwParams::new(a.beta)?;
    if let Some(s) = a.cdf {
        write_json(out, &serde_json::json!({"beta": a.beta, "s": s, "cdf": tw_cdf(s, &p)?}))
    } else if let Some(q) = a.quantile {
        write_json(out, &serde_json::json!({"beta": a.beta, "q": q, "quantile": tw_quantile(q, &p)?}))
    } else {
        let rows = TABLE1
            .iter()
            .map(|&(s, nominal)| Ok(TwRow { percentile: s, nominal, cdf: tw_cdf(s, &p)? }))
            .collect::<Result<Vec<_>, Error>>()?;
        write_json(out, &serde_json::json!({"beta": a.beta, "table": rows}))
    }
}

fn test(a: &TestArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let (z1, z2, source) = match (&a.z1, &a.z2, &a.triple) {
        (Some(p1), Some(p2), _) => {
            let z1 = read_matrix_file(p1, a.header)?;
            let z2 = read_matrix_file(p2, a.header)?;
            (z1, z2, serde_json::json!({"z1": p1, "z2": p2}))
        }
        (_, _, Some(t)) => {
            a.spike.validate(t)?;
            let mut s = EntrySampler::new(Seed::new(a.seed, 0));
            let x = s.matrix(a.dist, t.p, t.n);
            let y = s.matrix(a.dist, t.p, t.m);
            let x = apply_sigma(&x, &a.spike, t, a.sigma)?;
            let src = serde_json::json!({
                "triple": t, "dist": a.dist, "seed": a.seed,
                "spike": a.spike.to_string(), "sigma_convention": a.sigma,
            });
            (x, y, src)
        }
        _ => unreachable!("clap requires a data source"),
    };
    let r = equality_test(&z1, &z2, a.alpha)?;
    let mut v = serde_json::to_value(&r)?;
    v["source"] = source;
    write_json(out, &v)
}

fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), Failure> {
    match &cli.command {
        Command::Constants(a) => constants(a, out),
        Command::Tw(a) => tw(a, out),
        Command::Test(a) => test(a, out),
        Command::Simulate(a) => {
            let r = run_null_coverage(&a.config(SimulationMode::NullCoverage), &a.options())?;
            write_json(out, &r)
        }
        Command::Power(a) => {
            let r = run_power(&a.config(SimulationMode::Power), &a.options())?;
            write_json(out, &r)
        }
        Command::Qq(a) => {
            let rows = qq_data(&a.config(SimulationMode::Qq), &a.options())?;
            writeln!(out, "# seed {} triple {} dist {} spike {}", a.seed, a.triple, a.dist, a.spike)?;
            write_qq_csv(&mut *out, &rows)?;
            Ok(())
        }
    }
}

fn report(kind: &str, detail: String) -> ExitCode {
    let msg = serde_json::json!({"error_kind": kind, "detail": detail});
    eprintln!("{msg}");
    ExitCode::from(1)
}

fn main() -> ExitCode {
    let matches = Cli::command().version(VERSION.as_str()).get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        2 => log::LevelFilter::Debug,
        _ => log::LevelFilter::Trace,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .parse_default_env()
        .target(env_logger::Target::Stderr)
        .init();

    let result = match &cli.output {
        Some(path) => File::create(path).map_err(Failure::Output).and_then(|f| {
            let mut w = BufWriter::new(f);
            run(&cli, &mut w)?;
            w.flush()?;
            Ok(())
        }),
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            run(&cli, &mut w).and_then(|()| w.flush().map_err(Failure::Output))
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Compute(e)) => report(e.kind(), e.to_string()),
        Err(Failure::Output(e)) => report("Io", e.to_string()),
    }
}

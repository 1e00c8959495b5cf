//! `clustlab` command-line driver.
//!
//! Exit codes: 0 on success, 1 when a verification suite fails, 2 on invalid
//! configuration or any other error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use clustlab::cluster::{exact_kmeans, lloyd, single_linkage, spectral_cluster, ExactKMeansOptions};
use clustlab::lab::{
    lowdegree_report, recovery_curve, run_sweep, verify, write_records, Algorithm, Suite, SweepConfig,
};
use clustlab::metrics::{kmeans_criterion, misclassification_error};
use clustlab::model::{hypercube_packing, sample_fixed_means, sample_prior, uniform_labels, MixtureInstance, Prior};
use clustlab::{Error, Partition};

#[derive(Parser)]
#[command(name = "clustlab", version, about = "Gaussian-mixture clustering laboratory")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PriorArg {
    BernoulliHypercube,
    GaussianPrior,
    FixedMeans,
}

impl From<PriorArg> for Prior {
    fn from(p: PriorArg) -> Self {
        match p {
            PriorArg::BernoulliHypercube => Prior::BernoulliHypercube,
            PriorArg::GaussianPrior => Prior::GaussianPrior,
            PriorArg::FixedMeans => Prior::FixedMeans,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    ExactKmeans,
    Lloyd,
    SingleLinkage,
    Spectral,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::ExactKmeans => Algorithm::ExactKmeans,
            AlgorithmArg::Lloyd => Algorithm::Lloyd,
            AlgorithmArg::SingleLinkage => Algorithm::SingleLinkage,
            AlgorithmArg::Spectral => Algorithm::Spectral,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Metrics,
    Cluster,
    Lowdegree,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Metrics => Suite::Metrics,
            SuiteArg::Cluster => Suite::Cluster,
            SuiteArg::Lowdegree => Suite::Lowdegree,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Draw a mixture instance and write it as JSON.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        #[arg(long = "K", alias = "k")]
        k: usize,
        #[arg(long)]
        delta_bar_sq: f64,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, value_enum, default_value = "bernoulli-hypercube")]
        prior: PriorArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cluster a JSON instance and report the partition, criterion and error.
    Cluster {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        algorithm: AlgorithmArg,
        /// Number of groups (defaults to the instance's K).
        #[arg(long = "K", alias = "k")]
        k: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a sweep config and write its CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the config's output_path; stdout when neither is set.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the low-degree bound, exact correlation sum and regression estimate.
    Lowdegree {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        #[arg(long = "K", alias = "k")]
        k: usize,
        #[arg(long)]
        delta_bar_sq: f64,
        #[arg(long = "D", alias = "d")]
        d: u32,
        #[arg(long, default_value_t = 50_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact-recovery rate against the separation Δ², as CSV.
    Recovery {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        #[arg(long = "K", alias = "k")]
        k: usize,
        /// Comma-separated Δ² values.
        #[arg(long, value_delimiter = ',', required = true)]
        delta_grid: Vec<f64>,
        #[arg(long, value_enum)]
        algorithm: AlgorithmArg,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run invariant suites; exits with 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn sink(out: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn write_json<T: Serialize>(value: &T, out: Option<&Path>) -> clustlab::Result<()> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct ClusterOutput {
    algorithm: Algorithm,
    #[serde(rename = "K")]
    k: usize,
    partition: Partition,
    criterion: f64,
    err: f64,
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Done,
    InvariantFailure,
}

fn run(cli: Cli) -> clustlab::Result<Outcome> {
    if let Some(t) = cli.threads {
        rayon_pool(t)?;
    }
    match cli.command {
        Command::Generate { n, p, k, delta_bar_sq, sigma, prior, seed, out } => {
            let inst = match Prior::from(prior) {
                Prior::FixedMeans => {
                    let means = hypercube_packing(k, p, delta_bar_sq, sigma)?;
                    let mut inst = sample_fixed_means(&means, &uniform_labels(n, k, seed), sigma, seed)?;
                    inst.delta_bar_sq = Some(delta_bar_sq);
                    inst
                }
                prior => sample_prior(prior, n, p, k, delta_bar_sq, sigma, seed)?,
            };
            write_json(&inst, out.as_deref())?;
        }
        Command::Cluster { input, algorithm, k, seed, out } => {
            let text = std::fs::read_to_string(&input)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", input.display())))?;
            let inst: MixtureInstance =
                serde_json::from_str(&text).map_err(|e| Error::Config(format!("invalid instance: {e}")))?;
            let k = k.unwrap_or(inst.k);
            let algorithm = Algorithm::from(algorithm);
            let partition = match algorithm {
                Algorithm::ExactKmeans => exact_kmeans(&inst.data, k, ExactKMeansOptions::default())?.partition,
                Algorithm::Lloyd => lloyd(&inst.data, k, 10, 100, seed)?.partition,
                Algorithm::SingleLinkage => single_linkage(&inst.data, k)?,
                Algorithm::Spectral => spectral_cluster(&inst.data, k, seed)?,
            };
            let output = ClusterOutput {
                algorithm,
                k,
                criterion: kmeans_criterion(&inst.data, &partition)?,
                err: misclassification_error(&partition, &inst.labels)?,
                partition,
            };
            write_json(&output, out.as_deref())?;
        }
        Command::Sweep { config, seed, out } => {
            let mut cfg = SweepConfig::load(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let records = run_sweep(&cfg, cli.threads)?;
            let target = out.or_else(|| cfg.output_path.as_ref().map(PathBuf::from));
            let mut w = sink(target.as_deref())?;
            write_records(&records, &mut w)?;
            w.flush()?;
        }
        Command::Lowdegree { n, p, k, delta_bar_sq, d, samples, seed, out } => {
            let report = lowdegree_report(n, p, k, delta_bar_sq, d, samples, seed)?;
            write_json(&report, out.as_deref())?;
        }
        Command::Recovery { n, p, k, delta_grid, algorithm, trials, seed, out } => {
            let curve = recovery_curve(n, p, k, &delta_grid, algorithm.into(), trials, seed)?;
            let mut w = sink(out.as_deref())?;
            curve.write_csv(&mut w)?;
            w.flush()?;
            eprintln!("isotonic residual: {}", curve.isotonic_residual);
        }
        Command::Verify { suite, out } => {
            let report = verify(suite.into());
            write_json(&report, out.as_deref())?;
            for failure in report.failures() {
                eprintln!(
                    "FAIL {}: {}",
                    failure.name,
                    failure.counterexample.as_deref().unwrap_or("no counterexample")
                );
            }
            if !report.passed {
                return Ok(Outcome::InvariantFailure);
            }
        }
    }
    Ok(Outcome::Done)
}

fn rayon_pool(threads: usize) -> clustlab::Result<()> {
    if threads == 0 {
        return Err(Error::Config("--threads must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::InvariantFailure) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

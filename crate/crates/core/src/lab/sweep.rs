use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;

use super::config::{Algorithm, Cell, SweepConfig};
use super::record::{write_records, SweepRecord};
use super::regime::regime;
use crate::cluster::{exact_kmeans, lloyd, single_linkage, spectral_cluster, ExactKMeansOptions};
use crate::error::{Error, Result};
use crate::lowdegree::bound_report_for_prior;
use crate::matrix::Matrix;
use crate::metrics::{misclassification_error, partnership_distance};
use crate::model::{hypercube_packing, sample_fixed_means, sample_prior, uniform_labels, MixtureInstance, Prior};
use crate::partition::Partition;
use crate::rng::derive_seed;

const LLOYD_MAX_ITERS: usize = 100;

/// Seed of the data drawn for `(cell, trial)`; all algorithms see the same data.
pub fn instance_seed(master: u64, cell: usize, trial: usize) -> u64 {
    derive_seed(master, &[cell as u64, trial as u64])
}

/// Seed of an algorithm's own randomness for `(cell, algorithm, trial)`.
pub fn algorithm_seed(master: u64, cell: usize, algorithm: Algorithm, trial: usize) -> u64 {
    derive_seed(master, &[cell as u64, algorithm.id(), trial as u64])
}

fn draw_instance(cfg: &SweepConfig, cell: &Cell, seed: u64) -> Result<MixtureInstance> {
    match cfg.prior {
        Prior::FixedMeans => {
            let means = hypercube_packing(cell.k, cell.p, cell.delta_bar_sq, cfg.sigma)?;
            let mut inst = sample_fixed_means(&means, &uniform_labels(cell.n, cell.k, seed), cfg.sigma, seed)?;
            inst.delta_bar_sq = Some(cell.delta_bar_sq);
            Ok(inst)
        }
        prior => sample_prior(prior, cell.n, cell.p, cell.k, cell.delta_bar_sq, cfg.sigma, seed),
    }
}

/// Flag values may not contain the separators of the `flags` column.
fn flag_text(s: &str) -> String {
    s.replace([';', '='], ",")
}

fn cell_flags(cfg: &SweepConfig, cell: &Cell) -> Result<BTreeMap<String, String>> {
    let mut flags = BTreeMap::new();
    flags.insert("regime".into(), regime(cell.n, cell.p, cell.k, cell.delta_bar_sq).name().into());
    if let Some(d) = cfg.d {
        let report = bound_report_for_prior(cfg.prior, cell.n, cell.p, cell.k, cell.delta_bar_sq, d)?;
        flags.insert("zeta".into(), report.active_zeta().to_string());
        flags.insert("mmse_lower".into(), report.mmse_lower.to_string());
        flags.insert("bound_applicable".into(), report.applicable.to_string());
        if report.warning.is_some() {
            flags.insert("bound_warning".into(), "prior".into());
        }
    }
    Ok(flags)
}

fn run_algorithm(
    cfg: &SweepConfig,
    algorithm: Algorithm,
    data: &Matrix,
    k: usize,
    seed: u64,
) -> Result<Option<Partition>> {
    Ok(Some(match algorithm {
        Algorithm::ExactKmeans => {
            if data.rows() > cfg.exact_n_max {
                return Ok(None);
            }
            let opts = ExactKMeansOptions { n_max: cfg.exact_n_max, time_budget: None };
            exact_kmeans(data, k, opts)?.partition
        }
        Algorithm::Lloyd => lloyd(data, k, cfg.lloyd_restarts, LLOYD_MAX_ITERS, seed)?.partition,
        Algorithm::SingleLinkage => single_linkage(data, k)?,
        Algorithm::Spectral => spectral_cluster(data, k, seed)?,
    }))
}

fn run_task(cfg: &SweepConfig, cell: &Cell, trial: usize, flags: &BTreeMap<String, String>) -> Result<Vec<SweepRecord>> {
    let seed = instance_seed(cfg.seed, cell.index, trial);
    let inst = draw_instance(cfg, cell, seed)?;
    let mut out = Vec::with_capacity(cfg.algorithms.len());
    for &algorithm in &cfg.algorithms {
        let start = Instant::now();
        let result = run_algorithm(cfg, algorithm, &inst.data, cell.k, algorithm_seed(cfg.seed, cell.index, algorithm, trial));
        let elapsed = start.elapsed().as_secs_f64() * 1e3;
        let mut rec = SweepRecord {
            n: cell.n,
            p: cell.p,
            k: cell.k,
            delta_bar_sq: cell.delta_bar_sq,
            algorithm,
            trial,
            seed,
            err: None,
            partnership_mse: None,
            runtime_ms: cfg.record_timing.then_some(elapsed),
            flags: flags.clone(),
        };
        match result {
            Ok(Some(g)) => {
                rec.err = Some(misclassification_error(&g, &inst.labels)?);
                rec.partnership_mse = Some(partnership_distance(&g, &inst.labels)?);
            }
            Ok(None) => {
                rec.flags.insert("skipped".into(), "exact_kmeans_infeasible".into());
            }
            Err(e) => {
                rec.flags.insert("skipped".into(), "error".into());
                rec.flags.insert("error".into(), flag_text(&e.to_string()));
            }
        }
        out.push(rec);
    }
    Ok(out)
}

/// Runs every `(cell, trial)` and returns records ordered by
/// `(cell, algorithm as listed, trial)`. The result does not depend on
/// `threads`; `None` uses the global pool.
pub fn run_sweep(cfg: &SweepConfig, threads: Option<usize>) -> Result<Vec<SweepRecord>> {
    cfg.validate()?;
    let cells = cfg.cells();
    let flags: Vec<BTreeMap<String, String>> = cells.iter().map(|c| cell_flags(cfg, c)).collect::<Result<_>>()?;
    let tasks: Vec<(usize, usize)> =
        (0..cells.len()).flat_map(|c| (0..cfg.trials).map(move |t| (c, t))).collect();
    let work = || -> Result<Vec<Vec<SweepRecord>>> {
        tasks.par_iter().map(|&(c, t)| run_task(cfg, &cells[c], t, &flags[c])).collect()
    };
    let batches = match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(work)?,
        None => work()?,
    };
    let order: BTreeMap<Algorithm, usize> =
        cfg.algorithms.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let mut records: Vec<((usize, usize, usize), SweepRecord)> = batches
        .into_iter()
        .zip(&tasks)
        .flat_map(|(batch, &(c, t))| batch.into_iter().map(move |r| ((c, t), r)))
        .map(|((c, t), r)| ((c, order[&r.algorithm], t), r))
        .collect();
    records.sort_by_key(|(key, _)| *key);
    Ok(records.into_iter().map(|(_, r)| r).collect())
}

/// Runs the sweep and writes its CSV to `path`.
pub fn run_sweep_to_file(cfg: &SweepConfig, threads: Option<usize>, path: &Path) -> Result<Vec<SweepRecord>> {
    let records = run_sweep(cfg, threads)?;
    let file = std::fs::File::create(path)?;
    write_records(&records, std::io::BufWriter::new(file))?;
    Ok(records)
}

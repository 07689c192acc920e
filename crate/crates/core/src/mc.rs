//! Deterministic parallel Monte-Carlo harness.
//!
//! Replication `r` draws its entries from RNG stream `r` of the base seed:
//! first `X` (`p×n`), then `Y` (`p×m`). Workers pull replication indices
//! from a shared counter and results are stored by index, so the output
//! does not depend on the number of threads or on scheduling.

use std::io::Write;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::edge::{log_constants, DimensionTriple};
use crate::ensembles::{
    apply_sigma, EntryDistribution, EntrySampler, Seed, SigmaConvention, SpikeSpec,
};
use crate::error::{Error, Result};
use crate::froots::{largest_root, FactorPair};
use crate::tw::{tw_quantile, tw_quantiles, TwParams, TABLE1};

pub const DEFAULT_REPS: usize = 2000;
pub const DEFAULT_ALPHA: f64 = 0.05;
const QQ_CHUNK: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimulationMode {
    NullCoverage,
    Power,
    Qq,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub triple: DimensionTriple,
    pub dist: EntryDistribution,
    pub spike: SpikeSpec,
    #[serde(default)]
    pub sigma_convention: SigmaConvention,
    pub reps: usize,
    pub alpha: f64,
    pub base_seed: u64,
    pub mode: SimulationMode,
}

impl SimulationConfig {
    /// Identity spike, default reps and alpha, seed 0.
    pub fn new(triple: DimensionTriple, dist: EntryDistribution, mode: SimulationMode) -> Self {
        SimulationConfig {
            triple,
            dist,
            spike: SpikeSpec::Identity,
            sigma_convention: SigmaConvention::Half,
            reps: DEFAULT_REPS,
            alpha: DEFAULT_ALPHA,
            base_seed: 0,
            mode,
        }
    }

    fn check(&self, mode: SimulationMode) -> Result<()> {
        if self.mode != mode {
            return Err(Error::OutOfRange(format!(
                "configuration mode {:?} does not match {:?}",
                self.mode, mode
            )));
        }
        if self.reps == 0 {
            return Err(Error::OutOfRange("reps must be positive".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::OutOfRange(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        self.spike.validate(&self.triple)
    }
}

/// Execution knobs that never change the statistical output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub threads: usize,
    /// Record wall time in the report (makes reports non-reproducible).
    pub timing: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
            timing: false,
        }
    }
}

impl RunOptions {
    pub fn with_threads(threads: usize) -> Self {
        RunOptions {
            threads,
            ..RunOptions::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageRow {
    pub percentile: f64,
    /// Nominal `F1(percentile)`.
    pub tw: f64,
    pub empirical: f64,
    /// Two binomial standard errors at the nominal level.
    pub se2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub config: SimulationConfig,
    pub mode: SimulationMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coverage: Option<Vec<CoverageRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
    pub seed: u64,
}

impl SimulationReport {
    /// Empirical coverage at a percentile of the grid.
    pub fn coverage_at(&self, percentile: f64) -> Option<f64> {
        self.coverage
            .as_ref()?
            .iter()
            .find(|r| (r.percentile - percentile).abs() < 1e-12)
            .map(|r| r.empirical)
    }
}

/// Runs `f(0..count)` on `threads` workers and returns results in index order.
pub(crate) fn par_map<T, F>(count: usize, threads: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync,
{
    let threads = threads.clamp(1, count.max(1));
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<T>>>> = Mutex::new((0..count).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= count {
                    break;
                }
                let r = f(i);
                slots.lock().expect("result slots poisoned")[i] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .expect("result slots poisoned")
        .into_iter()
        .enumerate()
        .map(|(index, r)| {
            r.expect("every index is visited")
                .map_err(|e| Error::Replication {
                    index,
                    source: Box::new(e),
                })
        })
        .collect()
}

/// Standardized log statistics of all replications, in replication order.
pub fn replicate_statistics(cfg: &SimulationConfig, threads: usize) -> Result<Vec<f64>> {
    let t = cfg.triple;
    let k = log_constants(&t)?;
    par_map(cfg.reps, threads, |r| {
        let mut s = EntrySampler::new(Seed::new(cfg.base_seed, r as u64));
        let x = s.matrix(cfg.dist, t.p, t.n);
        let y = s.matrix(cfg.dist, t.p, t.m);
        let x = if cfg.spike.is_identity() {
            x
        } else {
            apply_sigma(&x, &cfg.spike, &t, cfg.sigma_convention)?
        };
        let root = largest_root(&FactorPair::new(y, x)?)?;
        Ok(k.standardize(root.lambda1, &t))
    })
}

fn elapsed(start: Instant, opts: &RunOptions) -> Option<u64> {
    opts.timing.then(|| start.elapsed().as_millis() as u64)
}

/// Empirical CDF of the statistic at the nine reference percentiles.
pub fn run_null_coverage(cfg: &SimulationConfig, opts: &RunOptions) -> Result<SimulationReport> {
    cfg.check(SimulationMode::NullCoverage)?;
    let start = Instant::now();
    let stats = replicate_statistics(cfg, opts.threads)?;
    let reps = stats.len() as f64;
    let coverage = TABLE1
        .iter()
        .map(|&(percentile, tw)| CoverageRow {
            percentile,
            tw,
            empirical: stats.iter().filter(|&&s| s <= percentile).count() as f64 / reps,
            se2: 2.0 * (tw * (1.0 - tw) / reps).sqrt(),
        })
        .collect();
    Ok(SimulationReport {
        config: *cfg,
        mode: SimulationMode::NullCoverage,
        coverage: Some(coverage),
        power: None,
        elapsed_ms: elapsed(start, opts),
        seed: cfg.base_seed,
    })
}

/// Rejection rate at level `alpha` under a spiked alternative.
pub fn run_power(cfg: &SimulationConfig, opts: &RunOptions) -> Result<SimulationReport> {
    cfg.check(SimulationMode::Power)?;
    if cfg.spike.is_identity() {
        return Err(Error::SpikeInvalidForTriple(format!(
            "power mode needs a non-identity spike, got {}",
            cfg.spike
        )));
    }
    let start = Instant::now();
    let critical = tw_quantile(1.0 - cfg.alpha, &TwParams::default())?;
    let stats = replicate_statistics(cfg, opts.threads)?;
    let power = stats.iter().filter(|&&s| s > critical).count() as f64 / stats.len() as f64;
    Ok(SimulationReport {
        config: *cfg,
        mode: SimulationMode::Power,
        coverage: None,
        power: Some(power),
        elapsed_ms: elapsed(start, opts),
        seed: cfg.base_seed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QqRow {
    pub rank: usize,
    pub statistic: f64,
    pub theoretical: f64,
}

/// Sorted statistics against `F1⁻¹((i − ½)/reps)`, `i = 1..reps`.
pub fn qq_data(cfg: &SimulationConfig, opts: &RunOptions) -> Result<Vec<QqRow>> {
    cfg.check(SimulationMode::Qq)?;
    let mut stats = replicate_statistics(cfg, opts.threads)?;
    stats.sort_by(f64::total_cmp);
    let reps = stats.len();
    let levels: Vec<f64> = (0..reps)
        .map(|i| ((i as f64 + 0.5) / reps as f64).clamp(1e-6, 1.0 - 1e-6))
        .collect();
    // fixed-size chunks so the split does not depend on the thread count
    let chunk = QQ_CHUNK;
    let params = TwParams::default();
    let theoretical: Vec<f64> = par_map(reps.div_ceil(chunk), opts.threads, |k| {
        let end = ((k + 1) * chunk).min(reps);
        tw_quantiles(&levels[k * chunk..end], &params)
    })
    .map_err(|e| match e {
        Error::Replication { source, .. } => *source,
        other => other,
    })?
    .concat();
    Ok(stats
        .into_iter()
        .zip(theoretical)
        .enumerate()
        .map(|(i, (statistic, theoretical))| QqRow {
            rank: i + 1,
            statistic,
            theoretical,
        })
        .collect())
}

/// Writes QQ rows as CSV with header `rank,statistic,theoretical`.
pub fn write_qq_csv(mut w: impl Write, rows: &[QqRow]) -> Result<()> {
    writeln!(w, "rank,statistic,theoretical")?;
    for r in rows {
        writeln!(w, "{},{:.16e},{:.16e}", r.rank, r.statistic, r.theoretical)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn par_map_keeps_order() {
        let v = par_map(100, 7, |i| Ok(i * i)).unwrap();
        assert_eq!(v, (0..100).map(|i| i * i).collect::<Vec<_>>());
    }

    #[test]
    fn par_map_reports_failing_index() {
        let e = par_map(10, 3, |i| if i == 6 { Err(Error::NotFinite) } else { Ok(i) }).unwrap_err();
        assert!(matches!(e, Error::Replication { index: 6, .. }));
    }
}

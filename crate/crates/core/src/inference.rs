//! Two-sample test of `Σ₁ = Σ₂` based on the largest root.

use serde::{Deserialize, Serialize};

use crate::edge::{log_constants, DimensionTriple, EdgeConstants};
use crate::error::{Error, Result};
use crate::froots::{largest_root, FactorPair, PencilPath};
use crate::linalg::Matrix;
use crate::tw::{tw_cdf, TwParams, CDF_RANGE};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub lambda1: f64,
    pub statistic: f64,
    pub p_value: f64,
    pub reject: bool,
    pub alpha: f64,
    pub triple: DimensionTriple,
    pub path: PencilPath,
}

/// Standardized log statistic `σ (ln λ₁ − μ)` for a triple.
pub fn log_statistic(lambda1: f64, t: &DimensionTriple) -> Result<f64> {
    Ok(log_constants(t)?.standardize(lambda1, t))
}

/// Upper-tail p-value `1 − F1(stat)`; the argument is clamped to the
/// domain of the CDF, where `F1` is within `1e-6` of 0 or 1.
pub fn upper_tail_p_value(statistic: f64) -> Result<f64> {
    if statistic.is_nan() {
        return Err(Error::NotFinite);
    }
    let s = statistic.clamp(CDF_RANGE.0, CDF_RANGE.1);
    Ok(1.0 - tw_cdf(s, &TwParams::default())?)
}

/// Tests equality of the covariances of `z1` (`p×n`) and `z2` (`p×m`).
/// Rejects for large `λ₁` when the p-value falls below `alpha`.
pub fn equality_test(z1: &Matrix, z2: &Matrix, alpha: f64) -> Result<TestResult> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::OutOfRange(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    let pair = FactorPair::new(z2.clone(), z1.clone())?;
    let root = largest_root(&pair)?;
    let k: EdgeConstants = log_constants(&pair.triple)?;
    let statistic = k.standardize(root.lambda1, &pair.triple);
    let p_value = upper_tail_p_value(statistic)?;
    Ok(TestResult {
        lambda1: root.lambda1,
        statistic,
        p_value,
        reject: p_value < alpha || alpha >= 1.0,
        alpha,
        triple: pair.triple,
        path: root.path,
    })
}

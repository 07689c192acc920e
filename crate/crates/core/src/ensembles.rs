//! Seedable generation of the standardized entry laws and the population
//! covariance decorators used in the power study.
//!
//! Every matrix is drawn from a ChaCha8 keystream keyed by `Seed::base`
//! with stream number `Seed::stream`. The keystream position is the draw
//! counter, so a `(base, stream)` pair fixes the output bit for bit no
//! matter which thread consumes it. One entry consumes exactly one 64-bit
//! word for every distribution.

use std::fmt;
use std::str::FromStr;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::edge::DimensionTriple;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Name of the pinned generator, echoed in reports and the CLI version.
pub const RNG_ALGORITHM: &str = "chacha8-stream";

const SQRT3: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryDistribution {
    Gaussian,
    /// `±√3` with probability 1/6 each, 0 with probability 2/3.
    ThreePoint,
    /// Uniform on `[-√3, √3]`.
    Uniform,
}

impl EntryDistribution {
    pub const ALL: [EntryDistribution; 3] = [
        EntryDistribution::Gaussian,
        EntryDistribution::ThreePoint,
        EntryDistribution::Uniform,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EntryDistribution::Gaussian => "gaussian",
            EntryDistribution::ThreePoint => "three-point",
            EntryDistribution::Uniform => "uniform",
        }
    }

    /// Maps a uniform variate in (0, 1) to a standardized draw.
    #[inline]
    fn transform(self, u: f64) -> f64 {
        match self {
            EntryDistribution::Gaussian => normal_quantile(u),
            EntryDistribution::ThreePoint => {
                if u < 1.0 / 6.0 {
                    -SQRT3
                } else if u < 2.0 / 6.0 {
                    SQRT3
                } else {
                    0.0
                }
            }
            EntryDistribution::Uniform => SQRT3 * (2.0 * u - 1.0),
        }
    }
}

impl fmt::Display for EntryDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EntryDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EntryDistribution::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| {
                Error::Parse(format!(
                    "unknown distribution {s:?} (expected gaussian, three-point or uniform)"
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Seed {
    pub base: u64,
    pub stream: u64,
}

impl Seed {
    pub fn new(base: u64, stream: u64) -> Self {
        Seed { base, stream }
    }
}

/// Sequential draws from one `(base, stream)` keystream.
pub struct EntrySampler {
    rng: ChaCha8Rng,
}

impl EntrySampler {
    pub fn new(seed: Seed) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.base);
        rng.set_stream(seed.stream);
        EntrySampler { rng }
    }

    /// Uniform variate in the open interval (0, 1) with 53 random bits.
    #[inline]
    pub fn next_open01(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    #[inline]
    pub fn draw(&mut self, dist: EntryDistribution) -> f64 {
        dist.transform(self.next_open01())
    }

    /// Next `rows x cols` block of i.i.d. entries, filled row-major.
    pub fn matrix(&mut self, dist: EntryDistribution, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |_, _| self.draw(dist))
    }
}

/// A `rows x cols` matrix of i.i.d. entries from a fresh keystream.
pub fn sample_matrix(dist: EntryDistribution, rows: usize, cols: usize, seed: Seed) -> Result<Matrix> {
    if rows == 0 || cols == 0 {
        return Err(Error::DimensionMismatch(format!(
            "cannot sample a {rows}x{cols} matrix"
        )));
    }
    rows.checked_mul(cols)
        .ok_or_else(|| Error::DimensionMismatch("matrix size overflows".into()))?;
    Ok(EntrySampler::new(seed).matrix(dist, rows, cols))
}

/// Standard normal quantile: Acklam's rational approximation (relative
/// error below 1.2e-9 on the whole open interval).
pub fn normal_quantile(u: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.02425;

    let tail = |q: f64| {
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    if u < P_LOW {
        tail((-2.0 * u.ln()).sqrt())
    } else if u <= 1.0 - P_LOW {
        let q = u - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -tail((-2.0 * (1.0 - u).ln()).sqrt())
    }
}

/// Population covariance decorator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpikeSpec {
    Identity,
    /// `Σ = I + θ e₁e₁ᵀ` with `θ = τ (r − p/m) / (1 − p/m)`.
    RankOne { tau: f64 },
    /// Diagonal `Σ` with `ω` on the 2nd, 4th, ... coordinates and 1 elsewhere.
    Alternating { omega: f64 },
}

/// Whether the decorator multiplies by `Σ^{1/2}` or by `Σ` itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaConvention {
    #[default]
    Half,
    Full,
}

impl FromStr for SigmaConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "half" => Ok(SigmaConvention::Half),
            "full" => Ok(SigmaConvention::Full),
            _ => Err(Error::Parse(format!("unknown sigma convention {s:?}"))),
        }
    }
}

impl SpikeSpec {
    pub fn is_identity(&self) -> bool {
        match *self {
            SpikeSpec::Identity => true,
            SpikeSpec::RankOne { tau } => tau == 0.0,
            SpikeSpec::Alternating { omega } => omega == 1.0,
        }
    }

    /// Checks the decorator against a dimension triple.
    pub fn validate(&self, t: &DimensionTriple) -> Result<()> {
        match *self {
            SpikeSpec::Identity => Ok(()),
            SpikeSpec::RankOne { tau } => {
                if !tau.is_finite() {
                    return Err(Error::SpikeInvalidForTriple(format!("tau = {tau}")));
                }
                if t.p >= t.m {
                    return Err(Error::SpikeInvalidForTriple(format!(
                        "rank-one spike needs p < m, got p = {}, m = {}",
                        t.p, t.m
                    )));
                }
                let theta = rank_one_theta(tau, t)?;
                if 1.0 + theta <= 0.0 {
                    return Err(Error::NegativeVariance(1.0 + theta));
                }
                Ok(())
            }
            SpikeSpec::Alternating { omega } => {
                if omega > 0.0 && omega.is_finite() {
                    Ok(())
                } else {
                    Err(Error::SpikeInvalidForTriple(format!(
                        "alternating spike needs omega > 0, got {omega}"
                    )))
                }
            }
        }
    }

    /// Diagonal of `Σ` (the decorators are all diagonal).
    pub fn sigma_diagonal(&self, t: &DimensionTriple) -> Result<Vec<f64>> {
        self.validate(t)?;
        let mut diag = vec![1.0; t.p];
        match *self {
            SpikeSpec::Identity => {}
            SpikeSpec::RankOne { tau } => diag[0] = 1.0 + rank_one_theta(tau, t)?,
            SpikeSpec::Alternating { omega } => {
                diag.iter_mut().skip(1).step_by(2).for_each(|d| *d = omega)
            }
        }
        Ok(diag)
    }
}

impl fmt::Display for SpikeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpikeSpec::Identity => f.write_str("identity"),
            SpikeSpec::RankOne { tau } => write!(f, "rank1:tau={tau}"),
            SpikeSpec::Alternating { omega } => write!(f, "alt:omega={omega}"),
        }
    }
}

impl FromStr for SpikeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad spike spec {s:?}; expected identity, rank1:tau=<v> or alt:omega=<v>"));
        if s == "identity" {
            return Ok(SpikeSpec::Identity);
        }
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        let (key, value) = arg.split_once('=').ok_or_else(bad)?;
        let value: f64 = value.parse().map_err(|_| bad())?;
        match (kind, key) {
            ("rank1", "tau") => Ok(SpikeSpec::RankOne { tau: value }),
            ("alt", "omega") => Ok(SpikeSpec::Alternating { omega: value }),
            _ => Err(bad()),
        }
    }
}

/// `r = √(p/m + p/n − p²/(mn))`.
pub fn spike_r(t: &DimensionTriple) -> f64 {
    let (p, m, n) = (t.p as f64, t.m as f64, t.n as f64);
    (p / m + p / n - p * p / (m * n)).sqrt()
}

/// Rank-one spike size `θ = τ (r − p/m) / (1 − p/m)`; requires `p < m`.
pub fn rank_one_theta(tau: f64, t: &DimensionTriple) -> Result<f64> {
    if t.p >= t.m {
        return Err(Error::SpikeInvalidForTriple(format!(
            "rank-one spike needs p < m, got p = {}, m = {}",
            t.p, t.m
        )));
    }
    let d1 = t.p as f64 / t.m as f64;
    Ok(tau * (spike_r(t) - d1) / (1.0 - d1))
}

/// Left-multiplies `x` (p rows) by `Σ^{1/2}`.
pub fn apply_sigma_half(x: &Matrix, spike: &SpikeSpec, t: &DimensionTriple) -> Result<Matrix> {
    apply_sigma(x, spike, t, SigmaConvention::Half)
}

/// Left-multiplies `x` by `Σ^{1/2}` or `Σ` depending on `convention`.
pub fn apply_sigma(
    x: &Matrix,
    spike: &SpikeSpec,
    t: &DimensionTriple,
    convention: SigmaConvention,
) -> Result<Matrix> {
    if x.rows() != t.p {
        return Err(Error::DimensionMismatch(format!(
            "sample has {} rows, triple has p = {}",
            x.rows(),
            t.p
        )));
    }
    let diag = spike.sigma_diagonal(t)?;
    let mut out = x.clone();
    for (i, &d) in diag.iter().enumerate() {
        let factor = match convention {
            SigmaConvention::Half => d.sqrt(),
            SigmaConvention::Full => d,
        };
        if factor != 1.0 {
            out.row_mut(i).iter_mut().for_each(|v| *v *= factor);
        }
    }
    Ok(out)
}

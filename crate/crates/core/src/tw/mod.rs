//! Tracy–Widom laws `F1` and `F2` as Fredholm determinants of Airy-type
//! kernels, discretized by Nyström on a mapped semi-infinite interval.

mod airy;

pub use airy::{ai_and_derivative, airy_ai, AIRY_RANGE};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{det, Matrix};
use crate::quad::GaussLegendre;

/// Domain of [`tw_cdf`].
pub const CDF_RANGE: (f64, f64) = (-15.0, 10.0);
/// Domain of [`tw_quantile`].
pub const QUANTILE_RANGE: (f64, f64) = (1e-6, 1.0 - 1e-6);

/// Nine `(percentile, F1(percentile))` pairs of the reference coverage
/// table, with `F1` values rounded to two decimals.
pub const TABLE1: [(f64, f64); 9] = [
    (-3.90, 0.01),
    (-3.18, 0.05),
    (-2.78, 0.10),
    (-1.91, 0.30),
    (-1.27, 0.50),
    (-0.59, 0.70),
    (0.45, 0.90),
    (0.98, 0.95),
    (2.02, 0.99),
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwParams {
    pub beta: u8,
    pub quadrature_nodes: usize,
    pub domain_map_scale: f64,
}

impl TwParams {
    pub fn new(beta: u8) -> Result<Self> {
        let p = TwParams {
            beta,
            ..TwParams::default()
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.beta != 1 && self.beta != 2 {
            return Err(Error::OutOfRange(format!("beta must be 1 or 2, got {}", self.beta)));
        }
        if self.quadrature_nodes < 20 {
            return Err(Error::OutOfRange(format!(
                "need at least 20 quadrature nodes, got {}",
                self.quadrature_nodes
            )));
        }
        if !(self.domain_map_scale > 0.0 && self.domain_map_scale.is_finite()) {
            return Err(Error::OutOfRange(format!(
                "domain map scale must be positive, got {}",
                self.domain_map_scale
            )));
        }
        Ok(())
    }
}

impl Default for TwParams {
    fn default() -> Self {
        TwParams {
            beta: 1,
            quadrature_nodes: 60,
            domain_map_scale: 10.0,
        }
    }
}

/// `F_β(s)` for `s` in `[-15, 10]`.
pub fn tw_cdf(s: f64, params: &TwParams) -> Result<f64> {
    params.validate()?;
    if !(s >= CDF_RANGE.0 && s <= CDF_RANGE.1) {
        return Err(Error::OutOfRange(format!(
            "TW argument {s} outside [{}, {}]",
            CDF_RANGE.0, CDF_RANGE.1
        )));
    }
    let gl = GaussLegendre::new(params.quadrature_nodes);
    Ok(fredholm(s, params, &gl))
}

/// Nodes `x_i = s + L(1+ξ)/(1−ξ)` and weights `w_i 2L/(1−ξ)²`.
fn mapped_nodes(s: f64, scale: f64, gl: &GaussLegendre) -> (Vec<f64>, Vec<f64>) {
    gl.nodes
        .iter()
        .zip(&gl.weights)
        .map(|(&xi, &w)| {
            let d = 1.0 - xi;
            (s + scale * (1.0 + xi) / d, w * 2.0 * scale / (d * d))
        })
        .unzip()
}

fn fredholm(s: f64, params: &TwParams, gl: &GaussLegendre) -> f64 {
    let (x, w) = mapped_nodes(s, params.domain_map_scale, gl);
    let n = x.len();
    let sw: Vec<f64> = w.iter().map(|v| v.sqrt()).collect();
    let kernel: Box<dyn Fn(usize, usize) -> f64> = if params.beta == 1 {
        Box::new(|i, j| 0.5 * ai_and_derivative(0.5 * (x[i] + x[j])).0)
    } else {
        let airy: Vec<(f64, f64)> = x.iter().map(|&v| ai_and_derivative(v)).collect();
        let x = x.clone();
        Box::new(move |i, j| {
            let (ai, aip) = airy[i];
            if i == j {
                aip * aip - x[i] * ai * ai
            } else {
                let (bj, bpj) = airy[j];
                (ai * bpj - aip * bj) / (x[i] - x[j])
            }
        })
    };
    let mut m = Matrix::identity(n);
    for i in 0..n {
        for j in i..n {
            let v = sw[i] * kernel(i, j) * sw[j];
            m[(i, j)] -= v;
            if j != i {
                m[(j, i)] -= v;
            }
        }
    }
    det(&m).clamp(0.0, 1.0)
}

const QUANTILE_TOL: f64 = 1e-10;
const WIDTH_TOL: f64 = 1e-12;
/// Grid step of the table used by [`tw_quantiles`].
const TABLE_STEP: f64 = 0.02;

fn check_level(q: f64) -> Result<()> {
    if q >= QUANTILE_RANGE.0 && q <= QUANTILE_RANGE.1 {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!(
            "quantile level {q} outside [{}, {}]",
            QUANTILE_RANGE.0, QUANTILE_RANGE.1
        )))
    }
}

/// Illinois iteration for `g(s) = 0` on `[a, b]` with `g(a) < 0 < g(b)`,
/// optionally starting from an interior guess. Stops at `|g| <= 1e-10`
/// or bracket width `1e-12`.
fn illinois(
    g: impl Fn(f64) -> f64,
    (mut a, mut fa): (f64, f64),
    (mut b, mut fb): (f64, f64),
    mut guess: Option<f64>,
) -> f64 {
    let mut side = 0i8;
    for _ in 0..200 {
        let mut c = guess.take().unwrap_or((a * fb - b * fa) / (fb - fa));
        if !(c > a && c < b) {
            c = 0.5 * (a + b);
        }
        let fc = g(c);
        if fc.abs() <= QUANTILE_TOL || b - a < WIDTH_TOL {
            return c;
        }
        if fc > 0.0 {
            b = c;
            fb = fc;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        } else {
            a = c;
            fa = fc;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        }
    }
    0.5 * (a + b)
}

/// `F_β⁻¹(q)` for `q` in `[1e-6, 1 − 1e-6]`, by a safeguarded secant
/// (Illinois) iteration on `[-15, 10]` to `|F(s) − q| <= 1e-10`.
pub fn tw_quantile(q: f64, params: &TwParams) -> Result<f64> {
    params.validate()?;
    check_level(q)?;
    let gl = GaussLegendre::new(params.quadrature_nodes);
    let g = |s: f64| fredholm(s, params, &gl) - q;
    let (a, b) = CDF_RANGE;
    let (fa, fb) = (g(a), g(b));
    if !(fa < 0.0 && fb > 0.0) {
        return Err(Error::BracketFailure(format!("no TW quantile for level {q}")));
    }
    Ok(illinois(g, (a, fa), (b, fb), None))
}

/// [`tw_quantile`] for many levels at once. The CDF is tabulated on the
/// lattice `-15 + 0.02 k` around the levels; each quantile starts from a
/// cubic inverse interpolation through the four lattice points around its
/// cell and is then polished by the same iteration and tolerance as
/// [`tw_quantile`]. The result for a level does not depend on the other
/// levels in the batch.
pub fn tw_quantiles(levels: &[f64], params: &TwParams) -> Result<Vec<f64>> {
    params.validate()?;
    for &q in levels {
        check_level(q)?;
    }
    if levels.is_empty() {
        return Ok(Vec::new());
    }
    let gl = GaussLegendre::new(params.quadrature_nodes);
    let cdf = |s: f64| fredholm(s, params, &gl);
    let node = |k: usize| CDF_RANGE.0 + k as f64 * TABLE_STEP;
    let last = ((CDF_RANGE.1 - CDF_RANGE.0) / TABLE_STEP).round() as usize;
    let lowest = levels.iter().copied().fold(f64::INFINITY, f64::min);
    let highest = levels.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(cdf(node(0)) < lowest && cdf(node(last)) > highest) {
        return Err(Error::BracketFailure(format!(
            "TW quantiles for levels in [{lowest}, {highest}] not bracketed"
        )));
    }

    // largest lattice index with F < lowest
    let (mut lo, mut hi) = (0, last);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if cdf(node(mid)) < lowest {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let first = lo.saturating_sub(1);
    let mut table: Vec<f64> = Vec::new();
    let mut k = first;
    let mut above = 0;
    while k <= last && above < 3 {
        let f = cdf(node(k));
        if f > highest {
            above += 1;
        }
        table.push(f);
        k += 1;
    }
    let at = |k: usize| (node(k), table[k - first]);
    let end = first + table.len() - 1;

    Ok(levels
        .iter()
        .map(|&q| {
            // cell [k, k+1] with F(s_k) < q <= F(s_{k+1})
            let k = first + table.partition_point(|&f| f < q) - 1;
            let (a, fa) = at(k);
            let (b, fb) = at(k + 1);
            let lo = k.saturating_sub(1).max(first);
            let hi = (k + 2).min(end);
            let stencil: Vec<(f64, f64)> = (lo..=hi).map(at).collect();
            let guess = inverse_cubic(&stencil, q);
            illinois(|s| cdf(s) - q, (a, fa - q), (b, fb - q), guess)
        })
        .collect())
}

/// Lagrange interpolation of `s` as a function of `F` through the points.
fn inverse_cubic(points: &[(f64, f64)], q: f64) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let mut s = 0.0;
    for (i, &(si, fi)) in points.iter().enumerate() {
        let mut w = 1.0;
        for (j, &(_, fj)) in points.iter().enumerate() {
            if i != j {
                w *= (q - fj) / (fi - fj);
            }
        }
        s += w * si;
    }
    s.is_finite().then_some(s)
}

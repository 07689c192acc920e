//! Centering and scaling constants for the largest root.
//!
//! Six interchangeable forms are provided. They differ in how the
//! standardized statistic is formed, see [`EdgeConstants::standardize`].

mod constants;
mod mp;
mod solve;

pub use constants::{
    c_closed_form, c_fixed_point, discrete_constants, discrete_constants_from,
    empirical_constants, integral_constants, johnstone_constants, log_constants,
    section5_constants, CpMethod,
};
pub use mp::{typical_locations, MpLaw, TypicalLocations};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dimensions `(p, m, n)`: `p` variables, `m` columns of the denominator
/// sample `Y`, `n` columns of the numerator sample `X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DimensionTriple {
    pub p: usize,
    pub m: usize,
    pub n: usize,
}

impl DimensionTriple {
    pub fn new(p: usize, m: usize, n: usize) -> Result<Self> {
        if p == 0 || m == 0 || n == 0 {
            return Err(Error::InvalidTriple(format!(
                "dimensions must be positive, got ({p},{m},{n})"
            )));
        }
        if m + n <= p {
            return Err(Error::InvalidTriple(format!(
                "m + n = {} must exceed p = {p}",
                m + n
            )));
        }
        Ok(DimensionTriple { p, m, n })
    }

    /// `max(m, p)`
    pub fn m_breve(&self) -> usize {
        self.m.max(self.p)
    }

    /// `min(n, m + n - p)`
    pub fn n_breve(&self) -> usize {
        self.n.min(self.m + self.n - self.p)
    }

    /// `min(m, p)`
    pub fn p_breve(&self) -> usize {
        self.m.min(self.p)
    }

    pub fn d1(&self) -> f64 {
        self.p as f64 / self.m as f64
    }

    pub fn d2(&self) -> f64 {
        self.p as f64 / self.n as f64
    }

    /// True when `Y Y^T` is (almost surely) invertible.
    pub fn is_invertible(&self) -> bool {
        self.p <= self.m
    }

    /// The triple scaled by `k` in every coordinate.
    pub fn scaled(&self, k: usize) -> Self {
        DimensionTriple {
            p: self.p * k,
            m: self.m * k,
            n: self.n * k,
        }
    }

    pub(crate) fn breve_f64(&self) -> (f64, f64, f64) {
        (
            self.p_breve() as f64,
            self.m_breve() as f64,
            self.n_breve() as f64,
        )
    }
}

impl std::str::FromStr for DimensionTriple {
    type Err = Error;

    /// Parses `"p,m,n"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("triple must be p,m,n, got {s:?}")));
        }
        let mut v = [0usize; 3];
        for (slot, part) in v.iter_mut().zip(&parts) {
            *slot = part
                .parse()
                .map_err(|_| Error::Parse(format!("bad triple component {part:?}")))?;
        }
        DimensionTriple::new(v[0], v[1], v[2])
    }
}

impl std::fmt::Display for DimensionTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{},{},{}", self.p, self.m, self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantForm {
    Johnstone,
    Section5,
    Integral,
    Discrete,
    Empirical,
    LogScale,
}

/// Auxiliary quantities attached to a set of constants.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Aux {
    /// Fixed point `c` (integral, discrete and empirical forms).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeConstants {
    pub form: ConstantForm,
    pub center: f64,
    pub scale: f64,
    #[serde(flatten)]
    pub aux: Aux,
}

impl EdgeConstants {
    /// Standardizes a largest root `lambda1` of `det(λ YYᵀ/m̆ − XXᵀ/n̆) = 0`:
    ///
    /// * johnstone: `((n̆/m̆) λ − μ) / σ`
    /// * log_scale: `σ (ln λ − μ)`
    /// * all others: `σ n̆^{2/3} (λ − μ)`
    pub fn standardize(&self, lambda1: f64, t: &DimensionTriple) -> f64 {
        let (_, mb, nb) = t.breve_f64();
        match self.form {
            ConstantForm::Johnstone => (nb / mb * lambda1 - self.center) / self.scale,
            ConstantForm::LogScale => self.scale * (lambda1.ln() - self.center),
            _ => self.scale * nb.powf(2.0 / 3.0) * (lambda1 - self.center),
        }
    }
}

use std::f64::consts::{FRAC_PI_2, PI};

use super::DimensionTriple;
use crate::error::{Error, Result};
use crate::quad::GaussLegendre;

/// Gauss–Legendre nodes per panel used against the MP density.
const PANEL_NODES: usize = 40;

/// Marchenko–Pastur law with ratio `p̆/m̆ < 1`.
///
/// Integrals against the density use `x = (a+b)/2 + (b−a)/2 · sin t`, which
/// turns the square-root edges into a smooth integrand in `t`, split into
/// panels graded towards the lower edge.
#[derive(Debug, Clone)]
pub struct MpLaw {
    pub ratio: f64,
    pub a: f64,
    pub b: f64,
    gl: GaussLegendre,
    /// Support points and density-weighted quadrature weights.
    points: Vec<(f64, f64)>,
}

impl MpLaw {
    pub fn new(ratio: f64) -> Result<Self> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::InvalidTriple(format!(
                "MP ratio must lie in (0, 1), got {ratio}"
            )));
        }
        let s = ratio.sqrt();
        let a = (1.0 - s) * (1.0 - s);
        let b = (1.0 + s) * (1.0 + s);
        let gl = GaussLegendre::new(PANEL_NODES);
        let mut law = MpLaw {
            ratio,
            a,
            b,
            gl,
            points: Vec::new(),
        };
        law.points = law.mapped_rule(-FRAC_PI_2);
        Ok(law)
    }

    /// Law with ratio `p̆/m̆` for the triple; rejects `p = m`, where the
    /// lower edge collapses to zero.
    pub fn for_triple(t: &DimensionTriple) -> Result<Self> {
        if t.p_breve() == t.m_breve() {
            return Err(Error::InvalidTriple(format!(
                "p = m = {} puts the lower MP edge at zero",
                t.p
            )));
        }
        MpLaw::new(t.p_breve() as f64 / t.m_breve() as f64)
    }

    fn mid_half(&self) -> (f64, f64) {
        (0.5 * (self.a + self.b), 0.5 * (self.b - self.a))
    }

    /// Panel breakpoints in `u = t + π/2`, graded geometrically towards the
    /// lower edge on the scale `√(2a/half)` where `1/x` varies fastest.
    fn breakpoints(&self) -> Vec<f64> {
        let (_, half) = self.mid_half();
        let mut h = 0.25 * (2.0 * self.a / half).sqrt();
        let mut v = Vec::new();
        while h < 0.5 * PI {
            v.push(h);
            h *= 2.0;
        }
        v.push(PI);
        v
    }

    /// Quadrature rule for `∫_{x(t0)}^{b} g(x) ϱ(x) dx` in the angle variable.
    fn mapped_rule(&self, t0: f64) -> Vec<(f64, f64)> {
        let (mid, half) = self.mid_half();
        let u0 = t0 + FRAC_PI_2;
        let mut edges = vec![u0];
        edges.extend(self.breakpoints().into_iter().filter(|&u| u > u0));
        let mut rule = Vec::with_capacity(edges.len() * PANEL_NODES);
        for w in edges.windows(2) {
            let (um, uh) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
            for (&z, &wt) in self.gl.nodes.iter().zip(&self.gl.weights) {
                let t = um + uh * z - FRAC_PI_2;
                let x = mid + half * t.sin();
                let c = t.cos();
                rule.push((x, wt * uh * half * half * c * c / (2.0 * PI * self.ratio * x)));
            }
        }
        rule
    }

    pub fn density(&self, x: f64) -> f64 {
        if x <= self.a || x >= self.b {
            return 0.0;
        }
        ((self.b - x) * (x - self.a)).sqrt() / (2.0 * PI * self.ratio * x)
    }

    /// `∫ g(x) ϱ(x) dx` over the support.
    pub fn integrate(&self, mut g: impl FnMut(f64) -> f64) -> f64 {
        self.points.iter().map(|&(x, w)| w * g(x)).sum()
    }

    /// Mass of `(x, ∞)`.
    pub fn tail_mass(&self, x: f64) -> f64 {
        if x <= self.a {
            return 1.0;
        }
        if x >= self.b {
            return 0.0;
        }
        let (mid, half) = self.mid_half();
        let t0 = ((x - mid) / half).clamp(-1.0, 1.0).asin();
        self.mapped_rule(t0).iter().map(|&(_, w)| w).sum()
    }

    /// `F(c) = ∫ (c/(x−c))² ϱ − target` and its derivative in `c`.
    pub fn edge_objective(&self, c: f64, target: f64) -> (f64, f64) {
        let mut f = -target;
        let mut df = 0.0;
        for &(x, w) in &self.points {
            let r = c / (x - c);
            f += w * r * r;
            df += w * 2.0 * r * x / ((x - c) * (x - c));
        }
        (f, df)
    }
}

/// Deterministic MP quantiles `γ_1 ≥ … ≥ γ_p̆` with `γ_p̆ = a`.
#[derive(Debug, Clone, PartialEq)]
pub struct TypicalLocations {
    pub gamma: Vec<f64>,
}

impl TypicalLocations {
    /// `γ_j` with tail mass `j/p̆`, by Newton on the tail mass (its
    /// derivative is `−ϱ`) safeguarded by bisection.
    pub fn new(law: &MpLaw, count: usize) -> Self {
        let mut gamma = Vec::with_capacity(count);
        let mut upper = law.b;
        for j in 1..count {
            let target = j as f64 / count as f64;
            let (mut lo, mut hi) = (law.a, upper);
            let mut x = 0.5 * (lo + hi);
            for _ in 0..200 {
                let f = law.tail_mass(x) - target;
                if f > 0.0 {
                    lo = x;
                } else {
                    hi = x;
                }
                if f.abs() <= 1e-15 || hi - lo <= 4.0 * f64::EPSILON * hi {
                    break;
                }
                let mut next = x + f / law.density(x);
                if !(next > lo && next < hi) {
                    next = 0.5 * (lo + hi);
                }
                x = next;
            }
            gamma.push(x);
            upper = x;
        }
        if count > 0 {
            gamma.push(law.a);
        }
        TypicalLocations { gamma }
    }
}

/// Typical locations of the MP law attached to a triple.
pub fn typical_locations(t: &DimensionTriple) -> Result<TypicalLocations> {
    let law = MpLaw::for_triple(t)?;
    Ok(TypicalLocations::new(&law, t.p_breve()))
}

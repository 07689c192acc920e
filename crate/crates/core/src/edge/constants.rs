use super::mp::{MpLaw, TypicalLocations};
use super::solve::increasing_root;
use super::{Aux, ConstantForm, DimensionTriple, EdgeConstants};
use crate::error::{Error, Result};

/// `2 asin(√v)` on the principal branch.
fn half_angle(v: f64) -> f64 {
    2.0 * v.sqrt().asin()
}

/// Trigonometric constants `(μ_J, σ_J)`; they standardize `(n̆/m̆) λ₁`.
pub fn johnstone_constants(t: &DimensionTriple) -> Result<EdgeConstants> {
    require_mp_triple(t)?;
    let (pb, mb, nb) = t.breve_f64();
    let denom = mb + nb - 1.0;
    let gamma = half_angle((pb.min(nb) - 0.5) / denom);
    let psi = half_angle((pb.max(nb) - 0.5) / denom);
    let mu = ((gamma + psi) / 2.0).tan().powi(2);
    let sigma3 = mu.powi(3) * 16.0
        / (denom * denom * gamma.sin() * psi.sin() * (gamma + psi).sin().powi(2));
    check_positive(mu, sigma3, "johnstone")?;
    Ok(EdgeConstants {
        form: ConstantForm::Johnstone,
        center: mu,
        scale: sigma3.cbrt(),
        aux: Aux {
            gamma: Some(gamma),
            psi: Some(psi),
            ..Aux::default()
        },
    })
}

/// Closed-form `(μ_p, σ_p)` in terms of the angles `α_p`, `β_p`.
pub fn section5_constants(t: &DimensionTriple) -> Result<EdgeConstants> {
    require_mp_triple(t)?;
    let (pb, mb, nb) = t.breve_f64();
    let alpha = (pb / (mb + nb)).sqrt().asin();
    let beta = (nb / (mb + nb)).sqrt().asin();
    let mu = mb / nb * (alpha + beta).tan().powi(2);
    let inv_sigma3 = mu.powi(3) * 16.0 * nb * nb
        / ((mb + nb).powi(2)
            * (2.0 * beta).sin()
            * (2.0 * alpha).sin()
            * (2.0 * beta + 2.0 * alpha).sin().powi(2));
    check_positive(mu, inv_sigma3, "section5")?;
    Ok(EdgeConstants {
        form: ConstantForm::Section5,
        center: mu,
        scale: 1.0 / inv_sigma3.cbrt(),
        aux: Aux {
            alpha: Some(alpha),
            beta: Some(beta),
            ..Aux::default()
        },
    })
}

fn check_positive(center: f64, cube: f64, form: &str) -> Result<()> {
    if center > 0.0 && center.is_finite() && cube > 0.0 && cube.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTriple(format!(
            "{form} constants degenerate (center {center}, scale^3 {cube})"
        )))
    }
}

fn require_mp_triple(t: &DimensionTriple) -> Result<()> {
    if t.p_breve() == t.m_breve() {
        Err(Error::InvalidTriple(format!(
            "p = m = {} puts the lower MP edge at zero and the centering at infinity",
            t.p
        )))
    } else {
        Ok(())
    }
}

/// Explicit solution of the fixed-point equation for `c_p`.
pub fn c_closed_form(t: &DimensionTriple) -> Result<f64> {
    require_mp_triple(t)?;
    let (p, m, n) = t.breve_f64();
    let c = if t.n_breve() == t.p_breve() {
        (m - p).powi(2) / (2.0 * (m + p) * m)
    } else {
        let s = (m * n * p * (m + n - p)).sqrt();
        (n * (m + p) * (m + n - p) - (m + 2.0 * n - p) * s) / (m * (n - p) * (m + n))
    };
    Ok(c)
}

/// `c_p` as the root of `∫ (c/(x−c))² ϱ_p(x) dx = n̆/p̆` in `(0, a_p)`.
pub fn c_fixed_point(t: &DimensionTriple) -> Result<f64> {
    let law = MpLaw::for_triple(t)?;
    fixed_point_on(&law, t)
}

fn fixed_point_on(law: &MpLaw, t: &DimensionTriple) -> Result<f64> {
    let (pb, _, nb) = t.breve_f64();
    let target = nb / pb;
    increasing_root(law.a, |c| law.edge_objective(c, target))
}

/// Which route supplies `c_p` to [`integral_constants`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CpMethod {
    ClosedForm,
    #[default]
    FixedPoint,
}

/// `(μ_p, σ_p)` from integrals against the MP density.
pub fn integral_constants(t: &DimensionTriple, method: CpMethod) -> Result<EdgeConstants> {
    let law = MpLaw::for_triple(t)?;
    let c = match method {
        CpMethod::ClosedForm => c_closed_form(t)?,
        CpMethod::FixedPoint => fixed_point_on(&law, t)?,
    };
    let (pb, _, nb) = t.breve_f64();
    let i1 = law.integrate(|x| c / (x - c));
    let i3 = law.integrate(|x| (c / (x - c)).powi(3));
    let mu = (1.0 + pb / nb * i1) / c;
    let inv_sigma3 = (1.0 + pb / nb * i3) / c.powi(3);
    check_positive(mu, inv_sigma3, "integral")?;
    Ok(EdgeConstants {
        form: ConstantForm::Integral,
        center: mu,
        scale: 1.0 / inv_sigma3.cbrt(),
        aux: Aux {
            c: Some(c),
            ..Aux::default()
        },
    })
}

/// `(μ_{p,0}, σ_{p,0})` with the MP density replaced by its typical locations.
pub fn discrete_constants(t: &DimensionTriple) -> Result<EdgeConstants> {
    require_mp_triple(t)?;
    let loc = super::mp::typical_locations(t)?;
    discrete_constants_from(&loc, t.n_breve())
}

/// Discrete constants for precomputed locations.
pub fn discrete_constants_from(loc: &TypicalLocations, n_eff: usize) -> Result<EdgeConstants> {
    let mut k = spectral_constants(&loc.gamma, n_eff).map_err(|e| match e {
        Error::NoRootInBracket => Error::BracketFailure("discrete fixed point".into()),
        other => other,
    })?;
    k.form = ConstantForm::Discrete;
    Ok(k)
}

/// `(μ̂, σ̂)` from an observed spectrum `γ̂_1 ≥ … ≥ γ̂_q > 0`.
pub fn empirical_constants(eigs: &[f64], n_eff: usize) -> Result<EdgeConstants> {
    spectral_constants(eigs, n_eff)
}

fn spectral_constants(eigs: &[f64], n_eff: usize) -> Result<EdgeConstants> {
    if eigs.is_empty() {
        return Err(Error::InvalidSpectrum("empty spectrum".into()));
    }
    if n_eff == 0 {
        return Err(Error::InvalidSpectrum("n_eff must be positive".into()));
    }
    if eigs.iter().any(|&g| !(g > 0.0 && g.is_finite())) {
        return Err(Error::InvalidSpectrum("eigenvalues must be positive and finite".into()));
    }
    let floor = eigs.iter().copied().fold(f64::INFINITY, f64::min);
    let ne = n_eff as f64;
    let c = increasing_root(floor, |c| {
        let mut f = -ne;
        let mut df = 0.0;
        for &g in eigs {
            let r = c / (g - c);
            f += r * r;
            df += 2.0 * r * g / ((g - c) * (g - c));
        }
        (f, df)
    })
    .map_err(|_| Error::NoRootInBracket)?;
    let s1: f64 = eigs.iter().map(|&g| c / (g - c)).sum();
    let s3: f64 = eigs.iter().map(|&g| (c / (g - c)).powi(3)).sum();
    let mu = (1.0 + s1 / ne) / c;
    let inv_sigma3 = (1.0 + s3 / ne) / c.powi(3);
    Ok(EdgeConstants {
        form: ConstantForm::Empirical,
        center: mu,
        scale: 1.0 / inv_sigma3.cbrt(),
        aux: Aux {
            c: Some(c),
            ..Aux::default()
        },
    })
}

/// Constants for `ln λ₁`: `μ = ln((m̆/n̆) μ_J)`, `σ = μ_J/σ_J`.
pub fn log_constants(t: &DimensionTriple) -> Result<EdgeConstants> {
    let j = johnstone_constants(t)?;
    let (_, mb, nb) = t.breve_f64();
    Ok(EdgeConstants {
        form: ConstantForm::LogScale,
        center: (mb / nb * j.center).ln(),
        scale: j.center / j.scale,
        aux: j.aux,
    })
}

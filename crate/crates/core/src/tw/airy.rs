//! Airy function `Ai` and its derivative on the real line.
//!
//! Three regimes:
//!
//! * `-9 <= x <= 6`: Maclaurin series summed in double-double arithmetic.
//!   The two series grow like `exp(2/3 |x|^{3/2})` while `Ai` stays bounded,
//!   so plain `f64` summation would lose up to eight digits at `x = -9`.
//! * `x > 6`: exponentially decaying asymptotic expansion.
//! * `x < -9`: oscillatory asymptotic expansion, truncated at its smallest
//!   term. At `x = -9` that term is below `1e-15`; at `x = -6` it would
//!   still be about `1e-9`, which is why the negative switchover sits
//!   further out than the positive one.

use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{Error, Result};

pub const SERIES_UPPER: f64 = 6.0;
pub const SERIES_LOWER: f64 = -9.0;

/// Public evaluation range of [`airy_ai`].
pub const AIRY_RANGE: (f64, f64) = (-20.0, 40.0);

/// `Ai(0)` and `-Ai'(0)` split into double-double pairs.
const AI0: Dd = Dd(0.355_028_053_887_817_2, 2.052_336_324_362_12e-17);
const AIP0: Dd = Dd(0.258_819_403_792_806_8, -2.522_243_111_610_832e-17);

/// `Ai(x)` for `x` in `[-20, 40]`, absolute error below `1e-11`.
pub fn airy_ai(x: f64) -> Result<f64> {
    if !(x >= AIRY_RANGE.0 && x <= AIRY_RANGE.1) {
        return Err(Error::OutOfRange(format!(
            "Airy argument {x} outside [{}, {}]",
            AIRY_RANGE.0, AIRY_RANGE.1
        )));
    }
    Ok(ai_and_derivative(x).0)
}

/// `(Ai(x), Ai'(x))` without range checking.
pub fn ai_and_derivative(x: f64) -> (f64, f64) {
    if x > SERIES_UPPER {
        decaying_asymptotic(x)
    } else if x < SERIES_LOWER {
        oscillating_asymptotic(-x)
    } else {
        maclaurin(x)
    }
}

/// Double-double number `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy)]
struct Dd(f64, f64);

impl Dd {
    #[inline]
    fn from(x: f64) -> Dd {
        Dd(x, 0.0)
    }

    #[inline]
    fn two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let bb = s - a;
        Dd(s, (a - (s - bb)) + (b - bb))
    }

    #[inline]
    fn add(self, o: Dd) -> Dd {
        let s = Dd::two_sum(self.0, o.0);
        let t = Dd::two_sum(self.1, o.1);
        let hi = Dd::two_sum(s.0, s.1 + t.0);
        Dd::two_sum(hi.0, hi.1 + t.1)
    }

    #[inline]
    fn neg(self) -> Dd {
        Dd(-self.0, -self.1)
    }

    #[inline]
    fn mul(self, o: Dd) -> Dd {
        let p = self.0 * o.0;
        let e = self.0.mul_add(o.0, -p);
        Dd::two_sum(p, e + self.0 * o.1 + self.1 * o.0)
    }

    #[inline]
    fn div_f64(self, d: f64) -> Dd {
        let q1 = self.0 / d;
        // remainder self - q1 * d, exact product via fma
        let p = q1 * d;
        let pe = q1.mul_add(d, -p);
        let r = Dd::two_sum(self.0, -p);
        let q2 = (r.0 + (r.1 - pe + self.1)) / d;
        Dd::two_sum(q1, q2)
    }

    #[inline]
    fn to_f64(self) -> f64 {
        self.0 + self.1
    }
}

fn maclaurin(x: f64) -> (f64, f64) {
    let xd = Dd::from(x);
    let x3 = xd.mul(xd).mul(xd);

    // f = Σ t_k, g = Σ u_k, f' = Σ d_k, g' = Σ e_k
    let mut t = Dd::from(1.0);
    let mut u = xd;
    let mut d = xd.mul(xd).div_f64(2.0);
    let mut e = Dd::from(1.0);
    let mut f = t;
    let mut g = u;
    let mut fp = d;
    let mut gp = e;
    for k in 0..200 {
        let kf = 3.0 * k as f64;
        t = t.mul(x3).div_f64((kf + 2.0) * (kf + 3.0));
        u = u.mul(x3).div_f64((kf + 3.0) * (kf + 4.0));
        e = e.mul(x3).div_f64((kf + 1.0) * (kf + 3.0));
        if k > 0 {
            d = d.mul(x3).div_f64(kf * (kf + 2.0));
        }
        f = f.add(t);
        g = g.add(u);
        gp = gp.add(e);
        if k > 0 {
            fp = fp.add(d);
        }
        let biggest = t.0.abs().max(u.0.abs()).max(d.0.abs()).max(e.0.abs());
        if k > 2 && biggest < 1e-34 {
            break;
        }
    }
    let ai = AI0.mul(f).add(AIP0.mul(g).neg());
    let aip = AI0.mul(fp).add(AIP0.mul(gp).neg());
    (ai.to_f64(), aip.to_f64())
}

/// Coefficient sequences `u_k`, `v_k` of the asymptotic expansions.
fn asymptotic_coefficients(count: usize) -> (Vec<f64>, Vec<f64>) {
    let mut u = Vec::with_capacity(count);
    let mut v = Vec::with_capacity(count);
    u.push(1.0);
    v.push(1.0);
    for k in 1..count {
        let kf = k as f64;
        let next = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
        u.push(next);
        v.push(-(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * next);
    }
    (u, v)
}

const ASYMPTOTIC_TERMS: usize = 40;

/// Sums `Σ sign_k c_k / ζ^k` over `k ≡ offset (mod step)`, stopping at the
/// smallest term.
fn truncated_sum(coeffs: &[f64], zeta: f64, offset: usize, step: usize, alternate: bool) -> f64 {
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    for (j, k) in (offset..coeffs.len()).step_by(step).enumerate() {
        let term = coeffs[k] / zeta.powi(k as i32);
        if term.abs() > last {
            break;
        }
        last = term.abs();
        sum += if alternate && j % 2 == 1 { -term } else { term };
    }
    sum
}

fn decaying_asymptotic(x: f64) -> (f64, f64) {
    let (u, v) = asymptotic_coefficients(ASYMPTOTIC_TERMS);
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let pref = (-zeta).exp() / (2.0 * PI.sqrt());
    let q = x.sqrt().sqrt();
    let su = truncated_sum(&u, zeta, 0, 1, true);
    let sv = truncated_sum(&v, zeta, 0, 1, true);
    (pref / q * su, -pref * q * sv)
}

fn oscillating_asymptotic(y: f64) -> (f64, f64) {
    let (u, v) = asymptotic_coefficients(ASYMPTOTIC_TERMS);
    let zeta = 2.0 / 3.0 * y * y.sqrt();
    let q = y.sqrt().sqrt();
    let (s, c) = (zeta - FRAC_PI_4).sin_cos();
    let u_even = truncated_sum(&u, zeta, 0, 2, true);
    let u_odd = truncated_sum(&u, zeta, 1, 2, true);
    let v_even = truncated_sum(&v, zeta, 0, 2, true);
    let v_odd = truncated_sum(&v, zeta, 1, 2, true);
    let rp = PI.sqrt();
    let ai = (c * u_even + s * u_odd) / (rp * q);
    let aip = q / rp * (s * v_even - c * v_odd);
    (ai, aip)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_at_origin() {
        let (ai, aip) = ai_and_derivative(0.0);
        assert!((ai - 0.355_028_053_887_817_2).abs() < 1e-16);
        assert!((aip + 0.258_819_403_792_806_8).abs() < 1e-16);
    }

    #[test]
    fn out_of_range() {
        assert!(airy_ai(-20.5).is_err());
        assert!(airy_ai(41.0).is_err());
        assert!(airy_ai(f64::NAN).is_err());
    }

    #[test]
    fn switchovers_agree() {
        for x in [SERIES_UPPER, SERIES_LOWER] {
            let (a, ap) = maclaurin(x);
            let (b, bp) = if x > 0.0 {
                decaying_asymptotic(x)
            } else {
                oscillating_asymptotic(-x)
            };
            assert!((a - b).abs() < 1e-11, "Ai at {x}: {a} vs {b}");
            assert!((ap - bp).abs() < 1e-11, "Ai' at {x}: {ap} vs {bp}");
        }
    }
}

//! Root finder for the increasing edge objectives on `(0, limit)`.

use crate::error::{Error, Result};

const BISECT_REL_WIDTH: f64 = 1e-6;
const RESIDUAL_TOL: f64 = 1e-12;
const MAX_NEWTON: usize = 100;

/// Finds the root of an increasing `f` on `(0, limit)` with `f(0+) < 0`
/// and `f -> +inf` at `limit`. `fdf` returns `(f(x), f'(x))`.
///
/// The upper bracket is searched at `limit (1 - 2^-k)`; the sign change is
/// verified before any iteration. Bisection narrows the bracket to
/// `1e-6 limit`, then safeguarded Newton polishes to `|f| <= 1e-12`.
pub(crate) fn increasing_root(
    limit: f64,
    mut fdf: impl FnMut(f64) -> (f64, f64),
) -> Result<f64> {
    let mut lo = 0.0;
    let (f_lo, _) = fdf(lo);
    if !(f_lo < 0.0) {
        return Err(Error::BracketFailure(format!("objective at 0 is {f_lo}")));
    }
    let mut hi = None;
    for k in 1..=60 {
        let x = limit * (1.0 - 0.5f64.powi(k));
        let (fx, _) = fdf(x);
        if fx > 0.0 {
            hi = Some(x);
            break;
        }
        if fx.is_nan() {
            break;
        }
        lo = x;
    }
    let mut hi = hi.ok_or_else(|| {
        Error::BracketFailure(format!("objective stays non-positive below {limit}"))
    })?;

    while hi - lo > BISECT_REL_WIDTH * limit {
        let mid = 0.5 * (lo + hi);
        let (fm, _) = fdf(mid);
        if fm > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    let mut x = 0.5 * (lo + hi);
    for _ in 0..MAX_NEWTON {
        let (fx, dfx) = fdf(x);
        if fx.abs() <= RESIDUAL_TOL {
            return Ok(x);
        }
        if fx > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let mut next = x - fx / dfx;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if next == x {
            break;
        }
        x = next;
    }
    Ok(x)
}

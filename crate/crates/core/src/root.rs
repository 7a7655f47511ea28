//! Bracketed bisection for strictly decreasing functions.

use crate::error::{Error, Result};

pub(crate) const MAX_DOUBLINGS: usize = 200;
const MAX_BISECTIONS: usize = 400;

/// Finds `m` with `f(m) = target` for a continuous, strictly decreasing `f`.
///
/// The bracket starts as `center ± 1` and its radius doubles until `target` is
/// straddled. Bisection then runs until `|f(m) - target| ≤ residual_tol` or the
/// bracket has collapsed to a few ulps.
pub(crate) fn solve_decreasing<F>(f: F, target: f64, center: f64, residual_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let mut radius = 1.0_f64;
    let mut lo = center - radius;
    let mut hi = center + radius;
    let mut f_lo = f(lo);
    let mut f_hi = f(hi);
    let mut doublings = 0;
    while f_lo < target || f_hi > target {
        if doublings == MAX_DOUBLINGS || !radius.is_finite() {
            return Err(Error::IterationLimit { doublings, target });
        }
        radius *= 2.0;
        doublings += 1;
        if f_lo < target {
            hi = lo;
            f_hi = f_lo;
            lo = center - radius;
            f_lo = f(lo);
        } else {
            lo = hi;
            f_lo = f_hi;
            hi = center + radius;
            f_hi = f(hi);
        }
    }
    if (f_lo - target).abs() <= residual_tol {
        return Ok(lo);
    }
    if (f_hi - target).abs() <= residual_tol {
        return Ok(hi);
    }

    let mut mid = 0.5 * (lo + hi);
    for _ in 0..MAX_BISECTIONS {
        mid = 0.5 * (lo + hi);
        let v = f(mid);
        if (v - target).abs() <= residual_tol {
            break;
        }
        if v > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 4.0 * f64::EPSILON * (1.0 + mid.abs()) {
            break;
        }
    }
    Ok(mid)
}

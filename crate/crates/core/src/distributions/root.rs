//! Safeguarded Newton iteration for inverting a lower-tail CDF.

use crate::math::{abs, ln};

const MAX_ITER: usize = 300;

/// Finds `x ≤ 0` with `cdf(x) = target`, for `target ≤ 0.5`.
///
/// `guess` is a starting point; the bracket `[lo, 0]` is grown geometrically
/// until `cdf(lo) < target`. Newton steps that leave the bracket are replaced
/// by bisection.
pub(super) fn invert_lower_tail(
    target: f64,
    guess: f64,
    cdf: impl Fn(f64) -> f64,
    pdf: impl Fn(f64) -> f64,
) -> f64 {
    debug_assert!(target > 0.0 && target <= 0.5);
    if target == 0.5 {
        return 0.0;
    }
    let mut hi = 0.0_f64;
    let mut lo = if guess < -1.0 { 2.0 * guess } else { -2.0 };
    while cdf(lo) >= target {
        hi = lo;
        lo *= 2.0;
    }
    let mut x = if guess > lo && guess < hi {
        guess
    } else {
        0.5 * (lo + hi)
    };
    let ln_target = ln(target);

    for _ in 0..MAX_ITER {
        let c = cdf(x);
        if c == target {
            return x;
        }
        if c < target {
            lo = x;
        } else {
            hi = x;
        }
        // Newton on ln F, which stays well scaled deep in the tail.
        let step = if c > 0.0 {
            (ln(c) - ln_target) * c / pdf(x)
        } else {
            f64::NAN
        };
        if step.is_finite() && abs(step) <= 2.0 * f64::EPSILON * abs(x) {
            return x - step;
        }
        let mut next = x - step;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if next == x || hi - lo <= f64::EPSILON * abs(lo) {
            return next;
        }
        x = next;
    }
    x
}

//! Empirical quantiles by linear interpolation between order statistics.
//!
//! For sorted data `x₍₁₎ ≤ … ≤ x₍ₙ₎` and probability `q`, let
//! `h = (n − 1)·q`. The quantile is `x₍⌊h⌋+1₎ + (h − ⌊h⌋)·(x₍⌊h⌋+2₎ − x₍⌊h⌋+1₎)`.
//! This is the "type 7" rule, the default of R and NumPy.

use alloc::vec::Vec;

use crate::math::floor;

/// Quantile of already sorted, non-empty data.
pub fn sorted_quantile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    debug_assert!((0.0..=1.0).contains(&q));
    let h = (sorted.len() - 1) as f64 * q;
    let lo = floor(h) as usize;
    let frac = h - lo as f64;
    match sorted.get(lo + 1) {
        Some(&next) if frac > 0.0 => sorted[lo] + frac * (next - sorted[lo]),
        _ => sorted[lo],
    }
}

/// Returns a sorted copy. NaNs sort last.
pub fn sorted_copy(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

use crate::math::{abs, exp, ln, ln_1p, ln_gamma};

const CF_MAX_ITER: usize = 50_000;
const CF_EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;

/// Below this argument `ln Γ` differences are taken directly; above it the
/// Stirling series is used so that `ln Γ(a) - ln Γ(a + b)` does not cancel.
const STIRLING_CUTOFF: f64 = 10.0;

/// Remainder of Stirling's series, `ln Γ(z) - [(z - ½) ln z - z + ½ ln 2π]`.
fn stirling_correction(z: f64) -> f64 {
    const COEFFS: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
        -3617.0 / 122_400.0,
    ];
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut acc = 0.0;
    for c in COEFFS.iter().rev() {
        acc = acc * inv2 + c;
    }
    acc * inv
}

/// `ln Γ(a) - ln Γ(a + b)` for `a ≥ STIRLING_CUTOFF`.
fn ln_gamma_ratio(a: f64, b: f64) -> f64 {
    let ab = a + b;
    -(a - 0.5) * ln_1p(b / a) - b * ln(ab) + b + stirling_correction(a) - stirling_correction(ab)
}

/// `ln B(a, b)`, accurate when one argument is much larger than the other.
pub(crate) fn ln_beta(a: f64, b: f64) -> f64 {
    let (big, small) = if a >= b { (a, b) } else { (b, a) };
    if big < STIRLING_CUTOFF {
        ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
    } else {
        ln_gamma(small) + ln_gamma_ratio(big, small)
    }
}

/// Regularized incomplete beta `I_x(a, b)`.
///
/// `xc` must equal `1 - x`; passing it separately keeps precision when `x`
/// is within rounding distance of one.
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64, xc: f64) -> f64 {
    debug_assert!(a > 0.0 && b > 0.0);
    if x <= 0.0 {
        return 0.0;
    }
    if xc <= 0.0 {
        return 1.0;
    }
    let ln_x = if xc < 0.5 { ln_1p(-xc) } else { ln(x) };
    let ln_xc = if x < 0.5 { ln_1p(-x) } else { ln(xc) };
    let front = exp(a * ln_x + b * ln_xc - ln_beta(a, b));
    if x < (a + 1.0) / (a + b + 2.0) {
        front * continued_fraction(a, b, x) / a
    } else {
        1.0 - front * continued_fraction(b, a, xc) / b
    }
}

/// Modified Lentz evaluation of the incomplete beta continued fraction.
fn continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if abs(d) < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;

        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if abs(d) < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if abs(c) < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;

        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if abs(d) < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if abs(c) < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if abs(delta - 1.0) < CF_EPS {
            break;
        }
    }
    h
}

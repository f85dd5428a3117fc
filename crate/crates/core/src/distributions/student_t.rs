use super::beta::{ln_beta, regularized_incomplete_beta};
use super::normal::{normal_quantile, phi};
use super::root::invert_lower_tail;
use super::{DegreesOfFreedom, Probability};
use crate::error::{domain, Result};
use crate::math::{exp, ln, ln_1p, sqrt, tan};

/// Unchecked Student-t CDF.
pub(crate) fn t_cdf(x: f64, df: f64) -> f64 {
    if x == 0.0 {
        return 0.5;
    }
    let x2 = x * x;
    let denom = df + x2;
    // P(|T| > |x|) = I_{df/(df+x²)}(df/2, 1/2)
    let tail = 0.5 * regularized_incomplete_beta(0.5 * df, 0.5, df / denom, x2 / denom);
    if x < 0.0 {
        tail
    } else {
        1.0 - tail
    }
}

fn t_pdf(x: f64, df: f64) -> f64 {
    let ln_norm = -0.5 * ln(df) - ln_beta(0.5 * df, 0.5);
    exp(ln_norm - 0.5 * (df + 1.0) * ln_1p(x * x / df))
}

/// Student-t density.
pub fn student_t_pdf(x: f64, df: DegreesOfFreedom) -> f64 {
    t_pdf(x, df.as_f64())
}

/// Student-t cumulative distribution function, via the incomplete beta
/// function.
pub fn student_t_cdf(x: f64, df: DegreesOfFreedom) -> Result<f64> {
    if !x.is_finite() {
        return Err(domain("student_t_cdf argument", x));
    }
    if df.get() > (1u64 << 53) {
        return Ok(phi(x));
    }
    Ok(t_cdf(x, df.as_f64()))
}

/// Lower-tail starting value: closed forms for one and two degrees of
/// freedom, a Cornish-Fisher expansion around the normal quantile otherwise.
fn initial_guess(tail: f64, df: f64) -> f64 {
    if df == 1.0 {
        return tan(core::f64::consts::PI * (tail - 0.5));
    }
    if df == 2.0 {
        return (2.0 * tail - 1.0) / sqrt(2.0 * tail * (1.0 - tail));
    }
    let z = normal_quantile(Probability(tail));
    let z2 = z * z;
    let g1 = (z2 + 1.0) * z / 4.0;
    let g2 = ((5.0 * z2 + 16.0) * z2 + 3.0) * z / 96.0;
    let g3 = (((3.0 * z2 + 19.0) * z2 + 17.0) * z2 - 15.0) * z / 384.0;
    z + g1 / df + g2 / (df * df) + g3 / (df * df * df)
}

/// Student-t quantile.
///
/// Like [`normal_quantile`](super::normal_quantile), the smaller tail is
/// inverted and the sign restored, so the function is exactly odd about
/// `p = 0.5`.
pub fn student_t_quantile(p: Probability, df: DegreesOfFreedom) -> f64 {
    let p = p.value();
    let nu = df.as_f64();
    let (tail, upper) = if p > 0.5 { (1.0 - p, true) } else { (p, false) };
    let x = if df.get() > (1u64 << 53) {
        normal_quantile(Probability(tail))
    } else {
        invert_lower_tail(
            tail,
            initial_guess(tail, nu),
            |x| t_cdf(x, nu),
            |x| t_pdf(x, nu),
        )
    };
    if upper {
        -x
    } else {
        x
    }
}

//! Normal and Student-t distribution functions, plus seeded sampling.
//!
//! The CDFs are evaluated from rational approximations (normal) and the
//! regularized incomplete beta function (Student-t). Quantiles come from a
//! closed-form starting point polished by safeguarded Newton iteration on
//! the matching CDF, so `cdf(quantile(p)) == p` to within a few ulps of `p`.

mod beta;
mod normal;
mod rng;
mod root;
mod student_t;

pub use normal::{normal_cdf, normal_pdf, normal_quantile};
pub(crate) use rng::check_rho_x as check_rho_x_pub;
pub use rng::{sample_equicorrelated_normal, sample_standard_normal, NormalSampler, RngStream};
pub use student_t::{student_t_cdf, student_t_pdf, student_t_quantile};

#[doc(hidden)]
pub use beta::regularized_incomplete_beta;

use crate::error::{domain, Result};

/// A probability strictly inside `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability(f64);

impl Probability {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value < 1.0 {
            Ok(Self(value))
        } else {
            Err(domain("probability", value))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Integer degrees of freedom, at least one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DegreesOfFreedom(u64);

impl DegreesOfFreedom {
    pub fn new(value: u64) -> Result<Self> {
        if value >= 1 {
            Ok(Self(value))
        } else {
            Err(domain("degrees of freedom", value as f64))
        }
    }

    /// Converts a count that may be zero or negative, such as `n - p - 1`.
    pub fn from_count(value: i64) -> Result<Self> {
        if value >= 1 {
            Ok(Self(value as u64))
        } else {
            Err(domain("degrees of freedom", value as f64))
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub(crate) fn as_f64(self) -> f64 {
        self.0 as f64
    }
}

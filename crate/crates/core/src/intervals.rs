//! Conditional (PI) and marginal (MPI) prediction intervals.
//!
//! | method          | center        | half-width                              |
//! |-----------------|---------------|-----------------------------------------|
//! | `PiApprox`      | `x·β̂`         | `z · σ̃_ε`                               |
//! | `PiExact`       | `x·β̂`         | `t(n-p-1) · σ̃_ε · √(1 + x(XᵀX)⁻¹xᵀ)`    |
//! | `MpiApprox`     | `μ̂_Y`         | `z · σ̃_Y`                               |
//! | `MpiExact`      | `μ̂_Y`         | `t(n-1) · σ̃_Y · √(1 + 1/n)`             |
//! | `MpiEmpirical`  | median        | empirical `(1∓γ)/2` quantiles           |
//!
//! `z` and `t` are the `(1 + γ)/2` quantiles. Bounds are never clamped.

use alloc::vec::Vec;

use crate::distributions::{normal_quantile, student_t_quantile, DegreesOfFreedom, Probability};
use crate::error::{domain, Error, Result};
use crate::linreg::FitResult;
use crate::math::sqrt;
use crate::quantile::{sorted_copy, sorted_quantile};

/// Nominal coverage level `γ ∈ (0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Level(f64);

impl Level {
    pub const DEFAULT: Level = Level(0.95);

    pub fn new(gamma: f64) -> Result<Self> {
        if gamma > 0.0 && gamma < 1.0 {
            Ok(Self(gamma))
        } else {
            Err(domain("level", gamma))
        }
    }

    pub fn gamma(self) -> f64 {
        self.0
    }

    /// `(1 + γ)/2`, the quantile used for two-sided intervals.
    pub fn upper_probability(self) -> Probability {
        Probability::new((1.0 + self.0) / 2.0).expect("γ in (0, 1)")
    }

    /// `z_{(1+γ)/2}`.
    pub fn z(self) -> f64 {
        normal_quantile(self.upper_probability())
    }

    /// `t_{(1+γ)/2, df}`.
    pub fn t(self, df: DegreesOfFreedom) -> f64 {
        student_t_quantile(self.upper_probability(), df)
    }
}

impl Default for Level {
    fn default() -> Self {
        Self::DEFAULT
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    PiApprox,
    PiExact,
    MpiApprox,
    MpiExact,
    MpiEmpirical,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::PiApprox => "pi_approx",
            Method::PiExact => "pi_exact",
            Method::MpiApprox => "mpi_approx",
            Method::MpiExact => "mpi_exact",
            Method::MpiEmpirical => "mpi_empirical",
        }
    }

    pub fn is_marginal(self) -> bool {
        matches!(
            self,
            Method::MpiApprox | Method::MpiExact | Method::MpiEmpirical
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
    pub center: f64,
    pub level: Level,
    pub method: Method,
}

impl Interval {
    fn symmetric(center: f64, half_width: f64, level: Level, method: Method) -> Self {
        Self {
            lower: center - half_width,
            upper: center + half_width,
            center,
            level,
            method,
        }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    /// Closed-interval membership.
    pub fn contains(&self, y: f64) -> bool {
        self.lower <= y && y <= self.upper
    }
}

/// Plug-in interval `x·β̂ ± z·σ̃_ε`; width does not depend on `x`.
pub fn pi_approx(fit: &FitResult, x: &[f64], level: Level) -> Result<Interval> {
    let center = crate::linreg::fitted_value(fit, x)?;
    Ok(Interval::symmetric(
        center,
        level.z() * fit.sigma_eps_unbiased(),
        level,
        Method::PiApprox,
    ))
}

/// Exact normal-theory prediction interval with Student-t quantile and
/// leverage correction.
pub fn pi_exact(fit: &FitResult, x: &[f64], level: Level) -> Result<Interval> {
    let center = crate::linreg::fitted_value(fit, x)?;
    let lev = crate::linreg::leverage(fit, x)?;
    let t = level.t(residual_df(fit)?);
    Ok(exact_from_parts(fit, center, lev, t, level))
}

pub(crate) fn residual_df(fit: &FitResult) -> Result<DegreesOfFreedom> {
    DegreesOfFreedom::from_count(fit.n() as i64 - fit.p() as i64 - 1)
}

pub(crate) fn exact_from_parts(
    fit: &FitResult,
    center: f64,
    lev: f64,
    t: f64,
    level: Level,
) -> Interval {
    let half = t * fit.sigma_eps_unbiased() * sqrt(1.0 + lev);
    Interval::symmetric(center, half, level, Method::PiExact)
}

struct Moments {
    n: usize,
    mean: f64,
    sd_unbiased: f64,
}

fn moments(y: &[f64]) -> Result<Moments> {
    let n = y.len();
    if n < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            found: n,
        });
    }
    if let Some(i) = y.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { row: i, column: 0 });
    }
    let mean = y.iter().sum::<f64>() / n as f64;
    let ss: f64 = y.iter().map(|v| (v - mean) * (v - mean)).sum();
    Ok(Moments {
        n,
        mean,
        sd_unbiased: sqrt(ss / (n - 1) as f64),
    })
}

/// `μ̂_Y ± z·σ̃_Y`.
pub fn mpi_approx(y: &[f64], level: Level) -> Result<Interval> {
    let m = moments(y)?;
    Ok(Interval::symmetric(
        m.mean,
        level.z() * m.sd_unbiased,
        level,
        Method::MpiApprox,
    ))
}

/// `μ̂_Y ± t(n-1)·σ̃_Y·√(1 + 1/n)`.
pub fn mpi_exact(y: &[f64], level: Level) -> Result<Interval> {
    let m = moments(y)?;
    let df = DegreesOfFreedom::from_count(m.n as i64 - 1)?;
    let half = level.t(df) * m.sd_unbiased * sqrt(1.0 + 1.0 / m.n as f64);
    Ok(Interval::symmetric(m.mean, half, level, Method::MpiExact))
}

/// Smallest sample size accepted by [`mpi_empirical`]: `⌈2/(1-γ)⌉`.
pub fn empirical_min_size(level: Level) -> usize {
    let need = 2.0 / (1.0 - level.gamma());
    // Guard against 2/(1-0.95) evaluating to 40.000000000000036.
    let rounded = libm::round(need);
    if (need - rounded).abs() < 1e-9 {
        rounded as usize
    } else {
        libm::ceil(need) as usize
    }
}

/// Distribution-free marginal interval from empirical quantiles.
///
/// Bounds are the `(1-γ)/2` and `(1+γ)/2` sample quantiles and the center
/// is the sample median, all under linear interpolation between order
/// statistics (see [`crate::quantile`]).
pub fn mpi_empirical(y: &[f64], level: Level) -> Result<Interval> {
    let needed = empirical_min_size(level);
    if y.len() < needed {
        return Err(Error::InsufficientData {
            needed,
            found: y.len(),
        });
    }
    if let Some(i) = y.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { row: i, column: 0 });
    }
    let sorted = sorted_copy(y);
    let g = level.gamma();
    Ok(Interval {
        lower: sorted_quantile(&sorted, (1.0 - g) / 2.0),
        upper: sorted_quantile(&sorted, (1.0 + g) / 2.0),
        center: sorted_quantile(&sorted, 0.5),
        level,
        method: Method::MpiEmpirical,
    })
}

/// Fraction of outcomes lying inside their interval, bounds included.
pub fn coverage(intervals: &[Interval], y_true: &[f64]) -> Result<f64> {
    Ok(coverage_count(intervals, y_true)? as f64 / y_true.len() as f64)
}

/// Number of outcomes lying inside their interval, bounds included.
pub fn coverage_count(intervals: &[Interval], y_true: &[f64]) -> Result<usize> {
    if intervals.len() != y_true.len() {
        return Err(Error::LengthMismatch {
            left: intervals.len(),
            right: y_true.len(),
        });
    }
    if y_true.is_empty() {
        return Err(Error::InsufficientData {
            needed: 1,
            found: 0,
        });
    }
    Ok(intervals
        .iter()
        .zip(y_true)
        .filter(|(iv, &y)| iv.contains(y))
        .count())
}

/// Exact intervals at every training row of a design.
pub fn pi_exact_at_rows(
    fit: &FitResult,
    design: &crate::linreg::DesignMatrix,
    level: Level,
) -> Result<Vec<Interval>> {
    let t = level.t(residual_df(fit)?);
    Ok((0..design.n())
        .map(|i| {
            let row = design.row(i);
            exact_from_parts(
                fit,
                fit.fitted_augmented(row),
                fit.leverage_augmented(row),
                t,
                level,
            )
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn level_bounds() {
        assert!(Level::new(0.0).is_err());
        assert!(Level::new(1.0).is_err());
        assert!(Level::new(1.5).is_err());
        assert_eq!(Level::default().gamma(), 0.95);
    }

    #[test]
    fn standardized_outcome_gives_plus_minus_z() {
        // mean 0 and unbiased sd 1
        let y = [-1.0, 1.0, 0.0];
        let sd = sqrt(2.0 / 2.0);
        let iv = mpi_approx(&y, Level::DEFAULT).unwrap();
        assert_eq!(iv.center, 0.0);
        assert!((iv.upper - 1.959_964 * sd).abs() < 1e-6);
        assert!((iv.lower + 1.959_964 * sd).abs() < 1e-6);
    }

    #[test]
    fn constant_outcome_collapses() {
        let y = vec![4.2; 60];
        for iv in [
            mpi_approx(&y, Level::DEFAULT).unwrap(),
            mpi_exact(&y, Level::DEFAULT).unwrap(),
            mpi_empirical(&y, Level::DEFAULT).unwrap(),
        ] {
            assert!((iv.lower - 4.2).abs() < 1e-12 && (iv.upper - 4.2).abs() < 1e-12);
        }
    }

    #[test]
    fn two_point_exact_mpi() {
        let iv = mpi_exact(&[0.0, 1.0], Level::DEFAULT).unwrap();
        assert_eq!(iv.center, 0.5);
        // t_{0.975,1} = 12.706204736174696
        let expect = 12.706_204_736_174_696 * sqrt(0.5) * sqrt(1.5);
        assert!((iv.upper - iv.center - expect).abs() < 1e-9);
    }

    #[test]
    fn marginal_needs_two_points() {
        assert!(matches!(
            mpi_approx(&[1.0], Level::DEFAULT),
            Err(Error::InsufficientData { .. })
        ));
        assert!(matches!(
            mpi_exact(&[], Level::DEFAULT),
            Err(Error::InsufficientData { .. })
        ));
    }

    #[test]
    fn empirical_size_rule() {
        assert_eq!(empirical_min_size(Level::DEFAULT), 40);
        assert_eq!(empirical_min_size(Level::new(0.9).unwrap()), 20);
        let y: Vec<f64> = (0..39).map(|i| i as f64).collect();
        assert!(mpi_empirical(&y, Level::DEFAULT).is_err());
    }

    #[test]
    fn coverage_closed_bounds() {
        let iv = Interval::symmetric(0.0, 1.0, Level::DEFAULT, Method::PiApprox);
        let ivs = [iv, iv, iv, iv];
        assert_eq!(coverage(&ivs, &[-1.0, 1.0, 0.5, 1.0001]).unwrap(), 0.75);
        assert!(matches!(
            coverage(&ivs, &[0.0]),
            Err(Error::LengthMismatch { left: 4, right: 1 })
        ));
        let huge = Interval::symmetric(0.0, 1e300, Level::DEFAULT, Method::MpiApprox);
        assert_eq!(coverage(&[huge, huge], &[-1e200, 5e299]).unwrap(), 1.0);
    }
}

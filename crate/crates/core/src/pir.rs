//! Prediction interval reduction.
//!
//! PIR compares the width of a conditional prediction interval with the
//! width of a marginal one: `(width(MPI) - width(PI)) / width(MPI)`. For a
//! linear model under normal errors this equals `1 - √(1 - ρ²)`, the
//! complement of the coefficient of alienation.
//!
//! Three sample estimators are provided:
//!
//! - [`pir_sample`]: exact intervals, averaged over the training rows
//! - [`pir_tilde`]: from `R²_adj`, i.e. unbiased variance estimates
//! - [`pir_hat`]: from `R²`, i.e. divisor-`n` variance estimates

use alloc::vec::Vec;

use crate::error::{domain, Error, Result};
use crate::intervals::{exact_from_parts, residual_df, Level};
use crate::linreg::{DesignMatrix, FitResult};
use crate::math::sqrt;

/// Population-level strength of association, given either as a correlation
/// or as a coefficient of determination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PopulationAssociation {
    /// Pearson correlation `ρ ∈ [-1, 1]`. Only `ρ²` matters.
    Correlation(f64),
    /// Coefficient of determination `ρ² ∈ [0, 1]`.
    Determination(f64),
}

impl PopulationAssociation {
    pub fn rho2(self) -> Result<f64> {
        match self {
            Self::Correlation(rho) if (-1.0..=1.0).contains(&rho) => Ok(rho * rho),
            Self::Correlation(rho) => Err(domain("correlation", rho)),
            Self::Determination(r2) if (0.0..=1.0).contains(&r2) => Ok(r2),
            Self::Determination(r2) => Err(domain("coefficient of determination", r2)),
        }
    }
}

/// Coefficient of alienation `κ = √(1 - ρ²)`.
pub fn alienation(assoc: PopulationAssociation) -> Result<f64> {
    Ok(sqrt(1.0 - assoc.rho2()?))
}

/// `PIR = 1 - √(1 - ρ²)`.
pub fn population_pir(assoc: PopulationAssociation) -> Result<f64> {
    Ok(1.0 - alienation(assoc)?)
}

fn check_outcome_variance(fit: &FitResult) -> Result<()> {
    if fit.sigma2_y_biased() > 0.0 {
        Ok(())
    } else {
        Err(Error::Degenerate("outcome has zero variance"))
    }
}

/// `(σ̂_Y - σ̂_ε) / σ̂_Y`, equal to `1 - √(1 - R²)`.
pub fn pir_hat(fit: &FitResult) -> Result<f64> {
    check_outcome_variance(fit)?;
    let sy = fit.sigma_y_biased();
    Ok((sy - fit.sigma_eps_biased()) / sy)
}

/// `(σ̃_Y - σ̃_ε) / σ̃_Y`, equal to `1 - √(1 - R²_adj)` and to the width
/// reduction of the approximate intervals. Negative when `R²_adj < 0`.
pub fn pir_tilde(fit: &FitResult) -> Result<f64> {
    check_outcome_variance(fit)?;
    let sy = fit.sigma_y_unbiased();
    Ok((sy - fit.sigma_eps_unbiased()) / sy)
}

/// `(mpi_width - mean(pi_widths)) / mpi_width`.
///
/// Works for any model that can produce per-individual interval widths.
pub fn pir_generalized(mpi_width: f64, pi_widths: &[f64]) -> Result<f64> {
    if !(mpi_width > 0.0) || !mpi_width.is_finite() {
        return Err(domain("marginal interval width", mpi_width));
    }
    if pi_widths.is_empty() {
        return Err(Error::InsufficientData {
            needed: 1,
            found: 0,
        });
    }
    if let Some(&w) = pi_widths.iter().find(|w| !(**w >= 0.0) || !w.is_finite()) {
        return Err(domain("conditional interval width", w));
    }
    let mean = pi_widths.iter().sum::<f64>() / pi_widths.len() as f64;
    Ok((mpi_width - mean) / mpi_width)
}

/// Quantiles that [`pir_sample`] needs; callers that evaluate many fits
/// with the same `(n, p, γ)` can compute them once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactQuantiles {
    /// `t_{(1+γ)/2, n-p-1}`
    pub conditional: f64,
    /// `t_{(1+γ)/2, n-1}`
    pub marginal: f64,
}

impl ExactQuantiles {
    pub fn new(n: usize, p: usize, level: Level) -> Result<Self> {
        use crate::distributions::DegreesOfFreedom;
        Ok(Self {
            conditional: level.t(DegreesOfFreedom::from_count(n as i64 - p as i64 - 1)?),
            marginal: level.t(DegreesOfFreedom::from_count(n as i64 - 1)?),
        })
    }
}

/// Width of the exact marginal interval implied by a fit.
pub fn width_mpi_exact(fit: &FitResult, marginal_t: f64) -> f64 {
    2.0 * marginal_t * fit.sigma_y_unbiased() * sqrt(1.0 + 1.0 / fit.n() as f64)
}

/// Exact conditional interval widths at each training row.
pub fn exact_widths(
    fit: &FitResult,
    design: &DesignMatrix,
    conditional_t: f64,
) -> Result<Vec<f64>> {
    if design.n() != fit.n() || design.p() != fit.p() {
        return Err(Error::Dimension {
            expected: fit.n(),
            found: design.n(),
        });
    }
    Ok((0..design.n())
        .map(|i| {
            let row = design.row(i);
            exact_from_parts(
                fit,
                0.0,
                fit.leverage_augmented(row),
                conditional_t,
                Level::DEFAULT,
            )
            .width()
        })
        .collect())
}

/// Sample PIR from exact intervals: one minus the mean exact conditional
/// width over the `n` training rows, divided by the exact marginal width.
pub fn pir_sample(fit: &FitResult, design: &DesignMatrix, level: Level) -> Result<f64> {
    residual_df(fit)?;
    let q = ExactQuantiles::new(fit.n(), fit.p(), level)?;
    pir_sample_with(fit, design, q)
}

/// [`pir_sample`] with precomputed quantiles.
pub fn pir_sample_with(fit: &FitResult, design: &DesignMatrix, q: ExactQuantiles) -> Result<f64> {
    check_outcome_variance(fit)?;
    let widths = exact_widths(fit, design, q.conditional)?;
    pir_generalized(width_mpi_exact(fit, q.marginal), &widths)
}

/// All three sample estimators together with the widths behind them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PirReport {
    pub pir_s: f64,
    pub pir_tilde: f64,
    pub pir_hat: f64,
    pub width_mpi_exact: f64,
    pub mean_width_pi_exact: f64,
    pub width_mpi_approx: f64,
    pub width_pi_approx: f64,
    pub level: Level,
    /// Set when `pir_tilde < 0`, which happens whenever `R²_adj < 0`.
    pub negative_pir_tilde: bool,
}

pub fn pir_report(fit: &FitResult, design: &DesignMatrix, level: Level) -> Result<PirReport> {
    let q = ExactQuantiles::new(fit.n(), fit.p(), level)?;
    let widths = exact_widths(fit, design, q.conditional)?;
    let width_mpi_exact = width_mpi_exact(fit, q.marginal);
    let z = level.z();
    let pir_tilde = pir_tilde(fit)?;
    Ok(PirReport {
        pir_s: pir_generalized(width_mpi_exact, &widths)?,
        pir_tilde,
        pir_hat: pir_hat(fit)?,
        width_mpi_exact,
        mean_width_pi_exact: widths.iter().sum::<f64>() / widths.len() as f64,
        width_mpi_approx: 2.0 * z * fit.sigma_y_unbiased(),
        width_pi_approx: 2.0 * z * fit.sigma_eps_unbiased(),
        level,
        negative_pir_tilde: pir_tilde < 0.0,
    })
}

/// One row of the ρ → ρ² → PIR table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    pub rho: f64,
    pub rho2: f64,
    pub pir: f64,
}

/// Correlations listed in the classic conversion table.
pub const DEFAULT_TABLE_RHOS: [f64; 17] = [
    0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.707, 0.8, 0.866, 0.9, 0.95, 0.99, 0.995, 0.999, 0.9999,
    1.0,
];

/// Decimal places used when the default table is printed: `(ρ, ρ², PIR)`.
pub const DEFAULT_TABLE_DECIMALS: [(usize, usize, usize); 17] = [
    (0, 0, 0),
    (1, 2, 3),
    (1, 2, 2),
    (1, 2, 2),
    (1, 2, 2),
    (1, 2, 2),
    (1, 2, 1),
    (3, 1, 2),
    (1, 2, 1),
    (3, 2, 1),
    (1, 2, 2),
    (2, 2, 2),
    (2, 2, 2),
    (3, 2, 1),
    (3, 3, 3),
    (4, 4, 4),
    (0, 0, 0),
];

pub fn table1(rhos: &[f64]) -> Result<Vec<TableRow>> {
    rhos.iter()
        .map(|&rho| {
            if !(0.0..=1.0).contains(&rho) {
                return Err(domain("correlation", rho));
            }
            let rho2 = rho * rho;
            Ok(TableRow {
                rho,
                rho2,
                pir: 1.0 - sqrt(1.0 - rho2),
            })
        })
        .collect()
}

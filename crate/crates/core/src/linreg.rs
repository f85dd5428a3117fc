//! Ordinary least squares with an intercept.
//!
//! The fit goes through a Householder QR of the design matrix. The normal
//! equations are never formed for the solve; `(XᵀX)⁻¹` is recovered from
//! the triangular factor because exact prediction intervals need leverages.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{dot, HouseholderQr, Matrix};
use crate::math::{abs, sqrt};

/// Pivots smaller than this fraction of the largest column norm mark the
/// design as rank deficient.
pub const RANK_TOLERANCE: f64 = 1e-10;

pub const INTERCEPT_NAME: &str = "(intercept)";

/// Outcome vector plus predictor matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    y: Vec<f64>,
    x: Matrix,
    predictor_names: Vec<String>,
}

impl Dataset {
    /// `rows[i]` holds the `p` predictor values of observation `i`.
    pub fn new(y: Vec<f64>, rows: Vec<Vec<f64>>, predictor_names: Vec<String>) -> Result<Self> {
        let n = y.len();
        if n < 2 {
            return Err(Error::InsufficientData {
                needed: 2,
                found: n,
            });
        }
        if rows.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: rows.len(),
            });
        }
        let p = predictor_names.len();
        let mut data = Vec::with_capacity(n * p);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != p {
                return Err(Error::Dimension {
                    expected: p,
                    found: row.len(),
                });
            }
            if !y[i].is_finite() {
                return Err(Error::NonFinite { row: i, column: 0 });
            }
            for (j, v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFinite {
                        row: i,
                        column: j + 1,
                    });
                }
            }
            data.extend_from_slice(row);
        }
        Ok(Self {
            y,
            x: Matrix::from_row_major(n, p, data),
            predictor_names,
        })
    }

    /// Outcome only, no predictors.
    pub fn outcome_only(y: Vec<f64>) -> Result<Self> {
        let rows = alloc::vec![Vec::new(); y.len()];
        Self::new(y, rows, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn p(&self) -> usize {
        self.predictor_names.len()
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn predictors(&self, i: usize) -> &[f64] {
        self.x.row(i)
    }

    pub fn predictor_names(&self) -> &[String] {
        &self.predictor_names
    }

    /// Maps every outcome value through `a·y + b`.
    pub fn map_outcome(&self, a: f64, b: f64) -> Self {
        let mut out = self.clone();
        for v in &mut out.y {
            *v = a * *v + b;
        }
        out
    }
}

/// `n × (p + 1)` matrix whose first column is all ones.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    matrix: Matrix,
    names: Vec<String>,
}

impl DesignMatrix {
    /// Builds a design from predictor rows. Rank is not checked here.
    pub fn from_rows(rows: &[Vec<f64>], predictor_names: &[String]) -> Result<Self> {
        let p = predictor_names.len();
        let n = rows.len();
        let mut data = Vec::with_capacity(n * (p + 1));
        for (i, row) in rows.iter().enumerate() {
            if row.len() != p {
                return Err(Error::Dimension {
                    expected: p,
                    found: row.len(),
                });
            }
            data.push(1.0);
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFinite {
                        row: i,
                        column: j + 1,
                    });
                }
                data.push(v);
            }
        }
        let mut names = Vec::with_capacity(p + 1);
        names.push(String::from(INTERCEPT_NAME));
        names.extend(predictor_names.iter().cloned());
        Ok(Self {
            matrix: Matrix::from_row_major(n, p + 1, data),
            names,
        })
    }

    pub(crate) fn from_predictor_matrix(x: &Matrix) -> Self {
        let (n, p) = (x.rows(), x.cols());
        let mut data = Vec::with_capacity(n * (p + 1));
        for i in 0..n {
            data.push(1.0);
            data.extend_from_slice(x.row(i));
        }
        let mut names = Vec::with_capacity(p + 1);
        names.push(String::from(INTERCEPT_NAME));
        names.extend((1..=p).map(|j| format!("x{j}")));
        Self {
            matrix: Matrix::from_row_major(n, p + 1, data),
            names,
        }
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    /// Number of predictors, excluding the intercept.
    pub fn p(&self) -> usize {
        self.matrix.cols() - 1
    }

    /// Row `i` including the leading one.
    pub fn row(&self, i: usize) -> &[f64] {
        self.matrix.row(i)
    }

    /// Row `i` without the intercept entry.
    pub fn predictors(&self, i: usize) -> &[f64] {
        &self.matrix.row(i)[1..]
    }

    pub fn column_names(&self) -> &[String] {
        &self.names
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }
}

/// Prepends the intercept column to the dataset's predictors.
pub fn build_design(dataset: &Dataset) -> Result<DesignMatrix> {
    let rows: Vec<Vec<f64>> = (0..dataset.n())
        .map(|i| dataset.predictors(i).to_vec())
        .collect();
    DesignMatrix::from_rows(&rows, dataset.predictor_names())
}

/// Immutable result of [`fit_ols`].
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    beta_hat: Vec<f64>,
    residuals: Vec<f64>,
    sigma2_eps_biased: f64,
    sigma2_eps_unbiased: f64,
    mu_y_hat: f64,
    sigma2_y_biased: f64,
    sigma2_y_unbiased: f64,
    r2: f64,
    r2_adj: f64,
    gram_inverse: Matrix,
    n: usize,
    p: usize,
}

impl FitResult {
    /// Coefficients, intercept first.
    pub fn beta_hat(&self) -> &[f64] {
        &self.beta_hat
    }
    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }
    /// Residual variance with divisor `n`.
    pub fn sigma2_eps_biased(&self) -> f64 {
        self.sigma2_eps_biased
    }
    /// Residual variance with divisor `n - p - 1`.
    pub fn sigma2_eps_unbiased(&self) -> f64 {
        self.sigma2_eps_unbiased
    }
    pub fn sigma_eps_biased(&self) -> f64 {
        sqrt(self.sigma2_eps_biased)
    }
    pub fn sigma_eps_unbiased(&self) -> f64 {
        sqrt(self.sigma2_eps_unbiased)
    }
    pub fn mu_y_hat(&self) -> f64 {
        self.mu_y_hat
    }
    /// Outcome variance with divisor `n`.
    pub fn sigma2_y_biased(&self) -> f64 {
        self.sigma2_y_biased
    }
    /// Outcome variance with divisor `n - 1`.
    pub fn sigma2_y_unbiased(&self) -> f64 {
        self.sigma2_y_unbiased
    }
    pub fn sigma_y_biased(&self) -> f64 {
        sqrt(self.sigma2_y_biased)
    }
    pub fn sigma_y_unbiased(&self) -> f64 {
        sqrt(self.sigma2_y_unbiased)
    }
    /// `R² = 1 - σ̂²_ε / σ̂²_Y`.
    pub fn r2(&self) -> f64 {
        self.r2
    }
    /// `R²_adj = 1 - σ̃²_ε / σ̃²_Y`. Not clamped; negative for weak fits.
    pub fn r2_adj(&self) -> f64 {
        self.r2_adj
    }
    /// `(XᵀX)⁻¹`, `(p + 1) × (p + 1)`.
    pub fn gram_inverse(&self) -> &Matrix {
        &self.gram_inverse
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn p(&self) -> usize {
        self.p
    }
    /// `n - p - 1`.
    pub fn residual_df(&self) -> usize {
        self.n - self.p - 1
    }

    /// `x·β̂` for an intercept-augmented row.
    pub(crate) fn fitted_augmented(&self, row: &[f64]) -> f64 {
        dot(row, &self.beta_hat)
    }

    /// `x (XᵀX)⁻¹ xᵀ` for an intercept-augmented row.
    pub(crate) fn leverage_augmented(&self, row: &[f64]) -> f64 {
        self.gram_inverse.quadratic_form(row)
    }

    fn augment(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.p {
            return Err(Error::Dimension {
                expected: self.p,
                found: x.len(),
            });
        }
        if let Some(j) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: 0,
                column: j + 1,
            });
        }
        let mut row = Vec::with_capacity(self.p + 1);
        row.push(1.0);
        row.extend_from_slice(x);
        Ok(row)
    }
}

/// Least-squares fit of `y` on the design.
///
/// Requires `n > p + 1` so that the unbiased residual variance exists, and
/// a full-rank design. Constant outcomes are rejected because `R²` is then
/// undefined.
pub fn fit_ols(design: &DesignMatrix, y: &[f64]) -> Result<FitResult> {
    let n = design.n();
    let k = design.matrix.cols();
    let p = k - 1;
    if y.len() != n {
        return Err(Error::Dimension {
            expected: n,
            found: y.len(),
        });
    }
    if n <= p + 1 {
        return Err(Error::InsufficientData {
            needed: p + 2,
            found: n,
        });
    }
    if let Some(i) = y.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { row: i, column: 0 });
    }

    let max_norm = (0..k)
        .map(|j| {
            sqrt(
                (0..n)
                    .map(|i| design.matrix[(i, j)] * design.matrix[(i, j)])
                    .sum(),
            )
        })
        .fold(0.0, f64::max);
    let qr = HouseholderQr::factor(&design.matrix);
    for (j, &d) in qr.r_diag().iter().enumerate() {
        if !(abs(d) >= RANK_TOLERANCE * max_norm) {
            return Err(Error::SingularDesign {
                index: j,
                name: design.names[j].clone(),
            });
        }
    }

    let beta_hat = qr.solve(y);
    let residuals: Vec<f64> = (0..n)
        .map(|i| y[i] - dot(design.row(i), &beta_hat))
        .collect();

    let nf = n as f64;
    let mu_y_hat = y.iter().sum::<f64>() / nf;
    let sst: f64 = y.iter().map(|v| (v - mu_y_hat) * (v - mu_y_hat)).sum();
    if sst == 0.0 {
        return Err(Error::Degenerate("outcome has zero variance"));
    }
    // With an intercept RSS ≤ SST; rounding can push it a hair above.
    let rss = residuals.iter().map(|e| e * e).sum::<f64>().min(sst);

    let sigma2_eps_biased = rss / nf;
    let sigma2_eps_unbiased = rss / (n - p - 1) as f64;
    let sigma2_y_biased = sst / nf;
    let sigma2_y_unbiased = sst / (nf - 1.0);
    // Both R² forms share one ratio so that R²_adj ≤ R² survives rounding.
    let unexplained = rss / sst;

    Ok(FitResult {
        beta_hat,
        residuals,
        sigma2_eps_biased,
        sigma2_eps_unbiased,
        mu_y_hat,
        sigma2_y_biased,
        sigma2_y_unbiased,
        r2: 1.0 - unexplained,
        r2_adj: 1.0 - unexplained * ((nf - 1.0) / (n - p - 1) as f64),
        gram_inverse: qr.gram_inverse(),
        n,
        p,
    })
}

/// Point prediction `(1, x₁, …, x_p)·β̂`.
pub fn fitted_value(fit: &FitResult, x: &[f64]) -> Result<f64> {
    Ok(fit.fitted_augmented(&fit.augment(x)?))
}

/// Leverage `x (XᵀX)⁻¹ xᵀ` of the intercept-augmented predictor vector.
pub fn leverage(fit: &FitResult, x: &[f64]) -> Result<f64> {
    Ok(fit.leverage_augmented(&fit.augment(x)?))
}

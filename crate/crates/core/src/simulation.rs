//! Monte Carlo study of the three PIR estimators.
//!
//! Each replication draws `n` rows of `p` equicorrelated standard normal
//! predictors, sets `Y = 1 + X₁ + … + X_p + ε` with normal `ε`, fits OLS and
//! records `PIR_s`, `PIR̃` and `PIR̂`. The residual variance is calibrated
//! so that the population coefficient of determination hits a target `ρ²`.
//!
//! Every `(cell, replication)` pair owns a random stream derived from the
//! cell coordinates and the replication index, so results do not depend on
//! execution order or thread count.

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::distributions::RngStream;
use crate::error::{domain, Error, Result};
use crate::intervals::Level;
use crate::linreg::{fit_ols, DesignMatrix};
use crate::math::sqrt;
use crate::pir::{
    pir_hat, pir_sample_with, pir_tilde, population_pir, ExactQuantiles, PopulationAssociation,
};
use crate::quantile::{sorted_copy, sorted_quantile};

/// Largest tolerated fraction of failed fits in a cell.
pub const MAX_MISSING_FRACTION: f64 = 0.01;

/// How the residual variance is calibrated to a target `ρ²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SigmaEpsMode {
    /// `(1 - ρ²)/ρ² · (1 + (p - 1)ρ_x)`. Omits the factor `p` of `Var(L)`, so
    /// for `p > 1` the realized `ρ²` overshoots the target.
    AsPrinted,
    /// `Var(L)·(1 - ρ²)/ρ²` with `Var(L) = p(1 + (p - 1)ρ_x)` for unit slopes.
    #[default]
    Derived,
}

/// Variance of `β₁X₁ + … + β_pX_p` with unit slopes and equicorrelated,
/// unit-variance predictors.
pub fn linear_predictor_variance(p: usize, rho_x: f64) -> f64 {
    let p = p as f64;
    p * (1.0 + (p - 1.0) * rho_x)
}

pub fn residual_variance_for_target(
    rho2: f64,
    p: usize,
    rho_x: f64,
    mode: SigmaEpsMode,
) -> Result<f64> {
    if !(rho2 > 0.0 && rho2 < 1.0) {
        return Err(domain("target rho2", rho2));
    }
    if p == 0 {
        return Err(domain("number of predictors", 0.0));
    }
    crate::distributions::check_rho_x_pub(rho_x)?;
    let odds = (1.0 - rho2) / rho2;
    Ok(match mode {
        SigmaEpsMode::AsPrinted => odds * (1.0 + (p as f64 - 1.0) * rho_x),
        SigmaEpsMode::Derived => odds * linear_predictor_variance(p, rho_x),
    })
}

/// One point of the design grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub n: usize,
    pub p: usize,
    pub rho2: f64,
    pub rho_x: f64,
}

impl Cell {
    pub fn population_pir(&self) -> f64 {
        population_pir(PopulationAssociation::Determination(self.rho2)).unwrap_or(f64::NAN)
    }

    /// Stream id of replication `rep`, hashed from the cell coordinates.
    pub fn stream_id(&self, rep: u64) -> u64 {
        [
            self.n as u64,
            self.p as u64,
            self.rho2.to_bits(),
            self.rho_x.to_bits(),
            rep,
        ]
        .iter()
        .fold(0x5052_4952_5349_4d55, |h, &w| splitmix64(h ^ w))
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationSpec {
    pub n_values: Vec<usize>,
    pub p_values: Vec<usize>,
    pub rho2_values: Vec<f64>,
    pub rho_x_values: Vec<f64>,
    pub replications: usize,
    pub level: Level,
    pub seed: u64,
    pub sigma_eps_mode: SigmaEpsMode,
}

impl Default for SimulationSpec {
    fn default() -> Self {
        Self {
            n_values: alloc::vec![20, 100, 500],
            p_values: alloc::vec![1, 5, 10],
            rho2_values: alloc::vec![0.25, 0.5, 0.9],
            rho_x_values: alloc::vec![0.0, 0.5],
            replications: 2000,
            level: Level::DEFAULT,
            seed: 1,
            sigma_eps_mode: SigmaEpsMode::Derived,
        }
    }
}

impl SimulationSpec {
    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: &str| Err(Error::Invalid(msg.to_string()));
        if self.replications == 0 {
            return invalid("replications must be at least 1");
        }
        if self.n_values.is_empty()
            || self.p_values.is_empty()
            || self.rho2_values.is_empty()
            || self.rho_x_values.is_empty()
        {
            return invalid("every grid dimension needs at least one value");
        }
        if self.p_values.contains(&0) {
            return invalid("p must be at least 1");
        }
        let max_p = *self.p_values.iter().max().unwrap_or(&0);
        if self.n_values.iter().any(|&n| n <= max_p + 1) {
            return invalid("every n must exceed max(p) + 1");
        }
        if let Some(&r) = self.rho2_values.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
            return Err(domain("target rho2", r));
        }
        for &r in &self.rho_x_values {
            crate::distributions::check_rho_x_pub(r)?;
        }
        Ok(())
    }

    /// Grid in iteration order: `rho_x`, then `n`, then `p`, then `rho2`.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for &rho_x in &self.rho_x_values {
            for &n in &self.n_values {
                for &p in &self.p_values {
                    for &rho2 in &self.rho2_values {
                        out.push(Cell { n, p, rho2, rho_x });
                    }
                }
            }
        }
        out
    }
}

/// Estimates from one simulated sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimates {
    pub pir_s: f64,
    pub pir_tilde: f64,
    pub pir_hat: f64,
    /// Realized `R²` of the fit.
    pub r2: f64,
}

/// Draws the `(y, design)` sample of one replication.
pub fn draw_sample(cell: &Cell, sigma2_eps: f64, stream: RngStream) -> (Vec<f64>, DesignMatrix) {
    let mut sampler = stream.sampler();
    let x = sampler.equicorrelated(cell.n, cell.p, cell.rho_x);
    let sigma = sqrt(sigma2_eps);
    let y = (0..cell.n)
        .map(|i| 1.0 + x.row(i).iter().sum::<f64>() + sigma * sampler.next_normal())
        .collect();
    (y, DesignMatrix::from_predictor_matrix(&x))
}

/// Per-cell constants shared by all replications.
#[derive(Debug, Clone, Copy)]
pub struct CellPlan {
    pub cell: Cell,
    pub sigma2_eps: f64,
    pub quantiles: ExactQuantiles,
    pub seed: u64,
}

impl CellPlan {
    pub fn new(cell: Cell, level: Level, seed: u64, mode: SigmaEpsMode) -> Result<Self> {
        Ok(Self {
            cell,
            sigma2_eps: residual_variance_for_target(cell.rho2, cell.p, cell.rho_x, mode)?,
            quantiles: ExactQuantiles::new(cell.n, cell.p, level)?,
            seed,
        })
    }

    /// Runs replication `rep`. Fit failures surface as errors so the caller
    /// can count them as missing.
    pub fn replicate(&self, rep: u64) -> Result<Estimates> {
        let stream = RngStream::new(self.seed, self.cell.stream_id(rep));
        let (y, design) = draw_sample(&self.cell, self.sigma2_eps, stream);
        let fit = fit_ols(&design, &y)?;
        Ok(Estimates {
            pir_s: pir_sample_with(&fit, &design, self.quantiles)?,
            pir_tilde: pir_tilde(&fit)?,
            pir_hat: pir_hat(&fit)?,
            r2: fit.r2(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Estimator {
    /// `PIR_s`, exact intervals
    Sample,
    /// `PIR̃`, adjusted
    Unbiased,
    /// `PIR̂`, plain
    Biased,
}

impl Estimator {
    pub const ALL: [Estimator; 3] = [Estimator::Sample, Estimator::Unbiased, Estimator::Biased];

    pub fn name(self) -> &'static str {
        match self {
            Estimator::Sample => "pir_s",
            Estimator::Unbiased => "pir_tilde",
            Estimator::Biased => "pir_hat",
        }
    }

    /// One-letter plot label.
    pub fn label(self) -> &'static str {
        match self {
            Estimator::Sample => "S",
            Estimator::Unbiased => "U",
            Estimator::Biased => "B",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub cell: Cell,
    pub population_pir: f64,
    pub pir_s: Vec<f64>,
    pub pir_tilde: Vec<f64>,
    pub pir_hat: Vec<f64>,
    pub r2: Vec<f64>,
    /// Replications whose fit failed; they are absent from the vectors.
    pub missing: usize,
}

impl CellResult {
    /// Collects replication outcomes in replication order and applies the
    /// missing-fit budget.
    pub fn from_replications(
        cell: Cell,
        outcomes: impl IntoIterator<Item = Result<Estimates>>,
    ) -> Result<Self> {
        let mut out = CellResult {
            cell,
            population_pir: cell.population_pir(),
            pir_s: Vec::new(),
            pir_tilde: Vec::new(),
            pir_hat: Vec::new(),
            r2: Vec::new(),
            missing: 0,
        };
        let mut total = 0usize;
        for o in outcomes {
            total += 1;
            match o {
                Ok(e) => {
                    out.pir_s.push(e.pir_s);
                    out.pir_tilde.push(e.pir_tilde);
                    out.pir_hat.push(e.pir_hat);
                    out.r2.push(e.r2);
                }
                Err(_) => out.missing += 1,
            }
        }
        if out.missing as f64 > MAX_MISSING_FRACTION * total as f64 {
            return Err(Error::TooManyMissing {
                n: cell.n,
                p: cell.p,
                rho2: cell.rho2,
                rho_x: cell.rho_x,
                missing: out.missing,
                replications: total,
            });
        }
        Ok(out)
    }

    pub fn values(&self, est: Estimator) -> &[f64] {
        match est {
            Estimator::Sample => &self.pir_s,
            Estimator::Unbiased => &self.pir_tilde,
            Estimator::Biased => &self.pir_hat,
        }
    }

    pub fn summary(&self, est: Estimator) -> Result<BoxplotStats> {
        boxplot_stats(self.values(est))
    }

    pub fn mean(&self, est: Estimator) -> f64 {
        let v = self.values(est);
        v.iter().sum::<f64>() / v.len() as f64
    }
}

/// Runs every replication of one cell, sequentially.
pub fn simulate_cell(
    cell: Cell,
    replications: usize,
    level: Level,
    seed: u64,
    mode: SigmaEpsMode,
) -> Result<CellResult> {
    let plan = CellPlan::new(cell, level, seed, mode)?;
    CellResult::from_replications(cell, (0..replications as u64).map(|r| plan.replicate(r)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationResult {
    pub spec: SimulationSpec,
    pub cells: Vec<CellResult>,
}

impl SimulationResult {
    pub fn find(&self, n: usize, p: usize, rho2: f64, rho_x: f64) -> Option<&CellResult> {
        self.cells.iter().find(|c| {
            c.cell.n == n && c.cell.p == p && c.cell.rho2 == rho2 && c.cell.rho_x == rho_x
        })
    }
}

/// Runs the whole grid on the calling thread.
pub fn run(spec: &SimulationSpec) -> Result<SimulationResult> {
    spec.validate()?;
    let cells = spec
        .cells()
        .into_iter()
        .map(|cell| {
            simulate_cell(
                cell,
                spec.replications,
                spec.level,
                spec.seed,
                spec.sigma_eps_mode,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SimulationResult {
        spec: spec.clone(),
        cells,
    })
}

/// Realized `R²` from one large sample, used to check a calibration.
pub fn realized_r2(cell: &Cell, mode: SigmaEpsMode, stream: RngStream) -> Result<f64> {
    let sigma2 = residual_variance_for_target(cell.rho2, cell.p, cell.rho_x, mode)?;
    let (y, design) = draw_sample(cell, sigma2, stream);
    Ok(fit_ols(&design, &y)?.r2())
}

/// Five-number summary plus mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxplotStats {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub mean: f64,
}

/// Quartiles use the same interpolation rule as [`crate::quantile`].
pub fn boxplot_stats(values: &[f64]) -> Result<BoxplotStats> {
    if values.is_empty() {
        return Err(Error::InsufficientData {
            needed: 1,
            found: 0,
        });
    }
    let s = sorted_copy(values);
    Ok(BoxplotStats {
        min: s[0],
        q1: sorted_quantile(&s, 0.25),
        median: sorted_quantile(&s, 0.5),
        q3: sorted_quantile(&s, 0.75),
        max: s[s.len() - 1],
        mean: values.iter().sum::<f64>() / values.len() as f64,
    })
}

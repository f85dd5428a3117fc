//! CSV ingestion and the father/son heights fixture.
//!
//! Values are read as given and multiplied by [`CsvSchema::unit_scale`].
//! Without a header row, columns are addressed by their 1-based position
//! (`"1"`, `"2"`, ...).

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use pir_core::intervals::{self, Interval, Level};
use pir_core::linreg::{build_design, fit_ols};
use pir_core::pir::pir_report;
use pir_core::Dataset;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CsvSchema {
    pub outcome_column: String,
    pub predictor_columns: Vec<String>,
    pub delimiter: u8,
    pub has_header: bool,
    pub unit_scale: f64,
}

impl CsvSchema {
    pub fn new(outcome: impl Into<String>, predictors: &[&str]) -> Self {
        Self {
            outcome_column: outcome.into(),
            predictor_columns: predictors.iter().map(|s| s.to_string()).collect(),
            delimiter: b',',
            has_header: true,
            unit_scale: 1.0,
        }
    }

    pub fn with_unit_scale(mut self, scale: f64) -> Self {
        self.unit_scale = scale;
        self
    }

    pub fn with_delimiter(mut self, delimiter: u8) -> Self {
        self.delimiter = delimiter;
        self
    }

    pub fn without_header(mut self) -> Self {
        self.has_header = false;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.unit_scale > 0.0 && self.unit_scale.is_finite()) {
            return Err(Error::Schema(format!("unit scale must be positive, got {}", self.unit_scale)));
        }
        if self.predictor_columns.contains(&self.outcome_column) {
            return Err(Error::Schema(format!(
                "outcome column `{}` is also listed as a predictor",
                self.outcome_column
            )));
        }
        for (i, c) in self.predictor_columns.iter().enumerate() {
            if self.predictor_columns[..i].contains(c) {
                return Err(Error::Schema(format!("predictor `{c}` listed twice")));
            }
        }
        Ok(())
    }

    fn columns(&self) -> impl Iterator<Item = &String> {
        std::iter::once(&self.outcome_column).chain(&self.predictor_columns)
    }
}

/// Reads a dataset from a CSV file.
pub fn read_csv(path: &Path, schema: &CsvSchema) -> Result<Dataset> {
    let file = fs::File::open(path).map_err(|source| Error::Read { path: path.to_path_buf(), source })?;
    read_csv_from(file, schema, &path.display().to_string())
}

/// Reads a dataset from any reader; `source_name` labels error messages.
pub fn read_csv_from<R: Read>(reader: R, schema: &CsvSchema, source_name: &str) -> Result<Dataset> {
    schema.validate()?;
    let csv_err = |e: csv::Error| Error::Csv { source_name: source_name.to_string(), message: e.to_string() };
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(schema.delimiter)
        .has_headers(schema.has_header)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let header: Vec<String> = if schema.has_header {
        let h = rdr.headers().map_err(csv_err)?;
        if h.is_empty() {
            return Err(Error::EmptyFile(source_name.to_string()));
        }
        h.iter().map(str::to_string).collect()
    } else {
        Vec::new()
    };
    let mut records = rdr.into_records().peekable();
    let header = if schema.has_header {
        header
    } else {
        match records.peek() {
            None => return Err(Error::EmptyFile(source_name.to_string())),
            Some(Err(_)) => Vec::new(),
            Some(Ok(r)) => (1..=r.len()).map(|i| i.to_string()).collect(),
        }
    };

    let mut index = Vec::new();
    for name in schema.columns() {
        match header.iter().position(|h| h == name) {
            Some(i) => index.push(i),
            None => {
                return Err(Error::MissingColumn { source_name: source_name.to_string(), column: name.clone() })
            }
        }
    }

    let mut y = Vec::new();
    let mut rows = Vec::new();
    for (r, record) in records.enumerate() {
        let record = record.map_err(csv_err)?;
        let row_no = r + 1;
        let mut values = Vec::with_capacity(index.len());
        for (name, &i) in schema.columns().zip(&index) {
            let cell = record.get(i).unwrap_or("");
            let v: f64 = cell
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| Error::Parse {
                    source_name: source_name.to_string(),
                    row: row_no,
                    column: name.clone(),
                    value: cell.to_string(),
                })?;
            values.push(v * schema.unit_scale);
        }
        y.push(values[0]);
        rows.push(values.split_off(1));
    }
    Dataset::new(y, rows, schema.predictor_columns.clone())
        .map_err(|source| Error::Data { source_name: source_name.to_string(), source })
}

/// Writes a dataset with the schema's column names, undoing the unit scale
/// so that [`read_csv`] with the same schema gives back the same values.
pub fn write_csv(path: &Path, dataset: &Dataset, schema: &CsvSchema) -> Result<()> {
    schema.validate()?;
    if schema.predictor_columns.len() != dataset.p() {
        return Err(Error::Schema(format!(
            "schema lists {} predictors, dataset has {}",
            schema.predictor_columns.len(),
            dataset.p()
        )));
    }
    let write_err = |e: std::io::Error| Error::Write { path: path.to_path_buf(), source: e };
    let mut w = csv::WriterBuilder::new()
        .delimiter(schema.delimiter)
        .from_path(path)
        .map_err(|e| write_err(e.into()))?;
    if schema.has_header {
        w.write_record(schema.columns()).map_err(|e| write_err(e.into()))?;
    }
    for i in 0..dataset.n() {
        let rec = std::iter::once(dataset.y()[i])
            .chain(dataset.predictors(i).iter().copied())
            .map(|v| (v / schema.unit_scale).to_string());
        w.write_record(rec).map_err(|e| write_err(e.into()))?;
    }
    w.flush().map_err(write_err)
}

/// Number of father/son pairs in the fixture.
pub const FIXTURE_ROWS: usize = 1078;
/// Inches to centimetres.
pub const FIXTURE_SCALE: f64 = 2.54;
/// Environment variable overriding the fixture location.
pub const FIXTURE_ENV: &str = "PIR_FIXTURE";
/// Father heights at which the example prediction intervals are reported.
pub const EXAMPLE_POINTS: [f64; 2] = [160.0, 180.0];

/// Schema of the fixture: `father,son` in inches, converted to cm.
pub fn fixture_schema() -> CsvSchema {
    CsvSchema::new("son", &["father"]).with_unit_scale(FIXTURE_SCALE)
}

/// `$PIR_FIXTURE` when set, otherwise `data/father_son.csv` in this crate.
pub fn fixture_path() -> PathBuf {
    std::env::var_os(FIXTURE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join("father_son.csv"))
}

/// The pinned digest lives next to the fixture as `<name>.sha256`, in
/// `sha256sum` format.
pub fn checksum_path(fixture: &Path) -> PathBuf {
    let mut name = fixture.file_name().unwrap_or_default().to_os_string();
    name.push(".sha256");
    fixture.with_file_name(name)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Loads the fixture after checking its pinned checksum, row count and
/// value ranges.
pub fn load_fixture(path: &Path) -> Result<Dataset> {
    let fixture_err = |message: String| Error::Fixture { path: path.to_path_buf(), message };
    let bytes = fs::read(path).map_err(|source| Error::Read { path: path.to_path_buf(), source })?;
    let pin_path = checksum_path(path);
    let pinned = fs::read_to_string(&pin_path)
        .map_err(|e| fixture_err(format!("no pinned checksum at {}: {e}", pin_path.display())))?;
    let expected = pinned.split_whitespace().next().unwrap_or("").to_ascii_lowercase();
    let found = sha256_hex(&bytes);
    if expected != found {
        return Err(Error::Checksum { path: path.to_path_buf(), expected, found });
    }
    let data = read_csv_from(bytes.as_slice(), &fixture_schema(), &path.display().to_string())?;
    if data.n() != FIXTURE_ROWS {
        return Err(fixture_err(format!("expected {FIXTURE_ROWS} rows, found {}", data.n())));
    }
    for i in 0..data.n() {
        if !(data.y()[i] > 0.0 && data.predictors(i)[0] > 0.0) {
            return Err(fixture_err(format!("row {} has a non-positive height", i + 1)));
        }
    }
    Ok(data)
}

/// Every quantity of the worked father/son example.
#[derive(Debug, Clone, PartialEq)]
pub struct ExampleReport {
    pub n: usize,
    pub beta0: f64,
    pub beta1: f64,
    pub rho_hat: f64,
    pub r2: f64,
    pub r2_adj: f64,
    pub sigma_eps: f64,
    pub sigma_y: f64,
    pub mu_y: f64,
    /// Approximate intervals at [`EXAMPLE_POINTS`].
    pub pi_approx: [Interval; 2],
    /// Exact intervals at [`EXAMPLE_POINTS`].
    pub pi_exact: [Interval; 2],
    pub mpi_approx: Interval,
    pub mpi_exact: Interval,
    pub covered_conditional_exact: usize,
    pub covered_conditional_approx: usize,
    pub covered_marginal_exact: usize,
    pub covered_marginal_approx: usize,
    pub width_pi_approx: f64,
    pub width_mpi_approx: f64,
    pub pir_s: f64,
    pub pir_tilde: f64,
    pub pir_hat: f64,
}

/// Computes the worked example on a single-predictor dataset.
pub fn validate_example(data: &Dataset, level: Level) -> Result<ExampleReport> {
    if data.p() != 1 {
        return Err(Error::Compute(pir_core::Error::Dimension { expected: 1, found: data.p() }));
    }
    let design = build_design(data)?;
    let fit = fit_ols(&design, data.y())?;
    let y = data.y();
    let at = |x: f64| -> Result<[Interval; 2]> {
        Ok([intervals::pi_approx(&fit, &[x], level)?, intervals::pi_exact(&fit, &[x], level)?])
    };
    let [a160, e160] = at(EXAMPLE_POINTS[0])?;
    let [a180, e180] = at(EXAMPLE_POINTS[1])?;
    let conditional_exact = intervals::pi_exact_at_rows(&fit, &design, level)?;
    let conditional_approx = (0..data.n())
        .map(|i| intervals::pi_approx(&fit, data.predictors(i), level))
        .collect::<pir_core::Result<Vec<_>>>()?;
    let mpi_approx = intervals::mpi_approx(y, level)?;
    let mpi_exact = intervals::mpi_exact(y, level)?;
    let count = |iv: &Interval| y.iter().filter(|&&v| iv.contains(v)).count();
    let report = pir_report(&fit, &design, level)?;
    let beta = fit.beta_hat();
    Ok(ExampleReport {
        n: data.n(),
        beta0: beta[0],
        beta1: beta[1],
        rho_hat: fit.r2().sqrt().copysign(beta[1]),
        r2: fit.r2(),
        r2_adj: fit.r2_adj(),
        sigma_eps: fit.sigma_eps_unbiased(),
        sigma_y: fit.sigma_y_unbiased(),
        mu_y: fit.mu_y_hat(),
        pi_approx: [a160, a180],
        pi_exact: [e160, e180],
        mpi_approx,
        mpi_exact,
        covered_conditional_exact: intervals::coverage_count(&conditional_exact, y)?,
        covered_conditional_approx: intervals::coverage_count(&conditional_approx, y)?,
        covered_marginal_exact: count(&mpi_exact),
        covered_marginal_approx: count(&mpi_approx),
        width_pi_approx: report.width_pi_approx,
        width_mpi_approx: report.width_mpi_approx,
        pir_s: report.pir_s,
        pir_tilde: report.pir_tilde,
        pir_hat: report.pir_hat,
    })
}

/// Loads the fixture at `path` (checksum enforced) and computes the example.
pub fn validate_fixture(path: &Path, level: Level) -> Result<ExampleReport> {
    validate_example(&load_fixture(path)?, level)
}

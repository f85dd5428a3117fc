//! The `pir` command line.
//!
//! Exit codes: 0 success, 2 usage, 3 input (missing file, schema, parse,
//! fixture), 4 computation, 5 output could not be written. Output is built
//! in full before anything is printed.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use pir_core::intervals::{self, Interval, Level};
use pir_core::linreg::{build_design, fit_ols, DesignMatrix, FitResult};
use pir_core::pir::{pir_report, table1, DEFAULT_TABLE_DECIMALS, DEFAULT_TABLE_RHOS};
use pir_core::simulation::{Estimator, SigmaEpsMode, SimulationResult, SimulationSpec};
use pir_core::Dataset;

use crate::dataio::{self, CsvSchema};
use crate::error::{Error, Result};
use crate::output::{Format, Table, Value};

pub const EXIT_USAGE: i32 = 2;
pub const DEFAULT_PRECISION: usize = 4;

#[derive(Debug, Parser)]
#[command(name = "pir", version, about = "Prediction interval reduction for linear models")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Decimal places for reported numbers [default: 4].
    #[arg(long, global = true)]
    pub precision: Option<usize>,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// CSV file to read.
    #[arg(long)]
    pub data: PathBuf,
    /// Outcome column.
    #[arg(long)]
    pub outcome: String,
    /// Predictor columns, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub predictors: Vec<String>,
    /// Multiplier applied to every value read.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    /// Field delimiter.
    #[arg(long, default_value_t = ',')]
    pub delimiter: char,
    /// The file has no header row; columns are named 1, 2, ...
    #[arg(long)]
    pub no_header: bool,
}

impl DataArgs {
    fn schema(&self) -> Result<CsvSchema> {
        if !self.delimiter.is_ascii() {
            return Err(Error::Schema(format!("delimiter must be a single ASCII character, got {:?}", self.delimiter)));
        }
        let preds: Vec<&str> = self.predictors.iter().map(String::as_str).collect();
        let mut s = CsvSchema::new(self.outcome.clone(), &preds)
            .with_unit_scale(self.scale)
            .with_delimiter(self.delimiter as u8);
        if self.no_header {
            s = s.without_header();
        }
        Ok(s)
    }

    fn load(&self) -> Result<Dataset> {
        dataio::read_csv(&self.data, &self.schema()?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PiMethod {
    Exact,
    Approx,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoverageMethod {
    All,
    PiExact,
    PiApprox,
    MpiExact,
    MpiApprox,
    MpiEmpirical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SigmaMode {
    Derived,
    AsPrinted,
}

impl From<SigmaMode> for SigmaEpsMode {
    fn from(m: SigmaMode) -> Self {
        match m {
            SigmaMode::Derived => SigmaEpsMode::Derived,
            SigmaMode::AsPrinted => SigmaEpsMode::AsPrinted,
        }
    }
}

fn parse_level(s: &str) -> std::result::Result<Level, String> {
    let g: f64 = s.parse().map_err(|_| format!("not a number: {s}"))?;
    Level::new(g).map_err(|_| format!("level must lie strictly between 0 and 1, got {s}"))
}

fn parse_rho(s: &str) -> std::result::Result<f64, String> {
    let r: f64 = s.parse().map_err(|_| format!("not a number: {s}"))?;
    if (0.0..=1.0).contains(&r) {
        Ok(r)
    } else {
        Err(format!("correlation must lie in [0, 1], got {s}"))
    }
}

/// A predictor vector written as comma-separated numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(pub Vec<f64>);

fn parse_point(s: &str) -> std::result::Result<Point, String> {
    s.split(',')
        .map(|v| v.trim().parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| format!("not a finite number: {v}")))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(Point)
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a least-squares regression and report the estimates.
    Fit(DataArgs),
    /// Prediction intervals at new predictor values.
    Predict {
        #[command(flatten)]
        data: DataArgs,
        /// Predictor values, comma separated; repeat for several points.
        #[arg(long, required = true, value_parser = parse_point)]
        at: Vec<Point>,
        #[arg(long, default_value = "0.95", value_parser = parse_level)]
        level: Level,
        #[arg(long, value_enum, default_value_t = PiMethod::Exact)]
        method: PiMethod,
    },
    /// The three sample PIR estimates and the interval widths behind them.
    Pir {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value = "0.95", value_parser = parse_level)]
        level: Level,
    },
    /// Correlation to PIR conversion table.
    Table {
        /// The classic 17-row table at its customary rounding (the default).
        #[arg(long, conflicts_with = "rho")]
        default: bool,
        /// Correlations to convert, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, value_parser = parse_rho)]
        rho: Vec<f64>,
    },
    /// Fraction of observed outcomes inside their prediction intervals.
    Coverage {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value = "0.95", value_parser = parse_level)]
        level: Level,
        #[arg(long, value_enum, default_value_t = CoverageMethod::All)]
        method: CoverageMethod,
    },
    /// Monte Carlo bias study of the PIR estimators.
    Simulate(SimulateArgs),
    /// The father/son worked example on the bundled fixture.
    Example {
        /// Fixture path; defaults to $PIR_FIXTURE or the bundled file.
        #[arg(long)]
        fixture: Option<PathBuf>,
        #[arg(long, default_value = "0.95", value_parser = parse_level)]
        level: Level,
    },
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [20, 100, 500])]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [1, 5, 10])]
    pub p: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.25, 0.5, 0.9])]
    pub rho2: Vec<f64>,
    #[arg(long = "rho-x", value_delimiter = ',', default_values_t = [0.0])]
    pub rho_x: Vec<f64>,
    #[arg(long, default_value_t = 2000)]
    pub reps: usize,
    #[arg(long, env = "PIR_SEED", default_value_t = 1)]
    pub seed: u64,
    #[arg(long = "sigma-mode", value_enum, default_value_t = SigmaMode::Derived)]
    pub sigma_mode: SigmaMode,
    #[arg(long, default_value = "0.95", value_parser = parse_level)]
    pub level: Level,
    /// Worker threads; results do not depend on this.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Also write the boxplot grid to this SVG file.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Also write every replication's estimates to this CSV file.
    #[arg(long)]
    pub replications: Option<PathBuf>,
}

impl SimulateArgs {
    pub fn spec(&self) -> SimulationSpec {
        SimulationSpec {
            n_values: self.n.clone(),
            p_values: self.p.clone(),
            rho2_values: self.rho2.clone(),
            rho_x_values: self.rho_x.clone(),
            replications: self.reps,
            level: self.level,
            seed: self.seed,
            sigma_eps_mode: self.sigma_mode.into(),
        }
    }
}

/// Side files written after the main report has been computed.
#[derive(Debug, Default)]
pub struct Outcome {
    pub report: String,
    pub files: Vec<(PathBuf, String)>,
    pub warnings: Vec<String>,
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match execute(&cli).and_then(|o| deliver(&cli, o)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn main() -> i32 {
    main_with_args(std::env::args_os())
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Write { path: path.to_path_buf(), source })
}

fn deliver(cli: &Cli, outcome: Outcome) -> Result<()> {
    for (path, contents) in &outcome.files {
        write_file(path, contents)?;
    }
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    match &cli.out {
        Some(path) => write_file(path, &outcome.report),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(outcome.report.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| Error::Write { path: PathBuf::from("<stdout>"), source })
        }
    }
}

/// Runs the command without touching stdout or the file system beyond
/// reading inputs.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    let mut outcome = Outcome::default();
    let table = match &cli.command {
        Command::Fit(data) => {
            let (design, fit) = fit_data(&data.load()?)?;
            fit_table(&design, &fit)
        }
        Command::Predict { data, at, level, method } => {
            let dataset = data.load()?;
            let (_, fit) = fit_data(&dataset)?;
            predict_table(&dataset, &fit, at, *level, *method)?
        }
        Command::Pir { data, level } => {
            let dataset = data.load()?;
            let (design, fit) = fit_data(&dataset)?;
            let r = pir_report(&fit, &design, *level)?;
            if r.negative_pir_tilde {
                outcome.warnings.push("adjusted R² is negative, so pir_tilde is negative".into());
            }
            Table::record(vec![
                ("n".into(), Value::int(fit.n())),
                ("p".into(), Value::int(fit.p())),
                ("level".into(), Value::num(level.gamma())),
                ("pir_s".into(), Value::num(r.pir_s)),
                ("pir_tilde".into(), Value::num(r.pir_tilde)),
                ("pir_hat".into(), Value::num(r.pir_hat)),
                ("width_mpi_exact".into(), Value::num(r.width_mpi_exact)),
                ("mean_width_pi_exact".into(), Value::num(r.mean_width_pi_exact)),
                ("width_mpi_approx".into(), Value::num(r.width_mpi_approx)),
                ("width_pi_approx".into(), Value::num(r.width_pi_approx)),
                ("negative_pir_tilde".into(), Value::Bool(r.negative_pir_tilde)),
            ])
        }
        Command::Table { default: _, rho } => table_of(rho, cli.precision)?,
        Command::Coverage { data, level, method } => coverage_table(&data.load()?, *level, *method)?,
        Command::Simulate(args) => {
            let result = crate::parallel::run(&args.spec(), args.threads)?;
            if let Some(path) = &args.svg {
                outcome.files.push((path.clone(), crate::svg::boxplot_grid(&result)?));
            }
            if let Some(path) = &args.replications {
                outcome.files.push((path.clone(), replications_table(&result).render(Format::Csv, 17)));
            }
            summary_table(&result)?
        }
        Command::Example { fixture, level } => {
            let path = fixture.clone().unwrap_or_else(dataio::fixture_path);
            example_table(&dataio::validate_fixture(&path, *level)?)
        }
    };
    outcome.report = table.render(cli.format, cli.precision.unwrap_or(DEFAULT_PRECISION));
    Ok(outcome)
}

fn fit_data(data: &Dataset) -> Result<(DesignMatrix, FitResult)> {
    let design = build_design(data)?;
    let fit = fit_ols(&design, data.y())?;
    Ok((design, fit))
}

fn term_key(name: &str) -> String {
    if name == pir_core::linreg::INTERCEPT_NAME {
        "beta_intercept".into()
    } else {
        format!("beta_{name}")
    }
}

fn fit_table(design: &DesignMatrix, fit: &FitResult) -> Table {
    let mut fields: Vec<(String, Value)> = vec![("n".into(), Value::int(fit.n())), ("p".into(), Value::int(fit.p()))];
    for (name, b) in design.column_names().iter().zip(fit.beta_hat()) {
        fields.push((term_key(name), Value::num(*b)));
    }
    fields.extend([
        ("sigma_eps".into(), Value::num(fit.sigma_eps_unbiased())),
        ("sigma_y".into(), Value::num(fit.sigma_y_unbiased())),
        ("sigma_eps_biased".into(), Value::num(fit.sigma_eps_biased())),
        ("sigma_y_biased".into(), Value::num(fit.sigma_y_biased())),
        ("mu_y".into(), Value::num(fit.mu_y_hat())),
        ("r2".into(), Value::num(fit.r2())),
        ("r2_adj".into(), Value::num(fit.r2_adj())),
    ]);
    Table::record(fields)
}

fn predict_table(data: &Dataset, fit: &FitResult, at: &[Point], level: Level, method: PiMethod) -> Result<Table> {
    let mut cols: Vec<&str> = data.predictor_names().iter().map(String::as_str).collect();
    cols.extend(["method", "level", "lower", "center", "upper", "width"]);
    let mut t = Table::new(&cols);
    for point in at {
        let iv = match method {
            PiMethod::Exact => intervals::pi_exact(fit, &point.0, level)?,
            PiMethod::Approx => intervals::pi_approx(fit, &point.0, level)?,
        };
        let mut row: Vec<Value> = point.0.iter().map(|&v| Value::num(v)).collect();
        row.extend(interval_values(&iv));
        t.push(row);
    }
    Ok(t)
}

fn interval_values(iv: &Interval) -> [Value; 6] {
    [
        Value::text(iv.method.name()),
        Value::num(iv.level.gamma()),
        Value::num(iv.lower),
        Value::num(iv.center),
        Value::num(iv.upper),
        Value::num(iv.width()),
    ]
}

fn table_of(rhos: &[f64], precision: Option<usize>) -> Result<Table> {
    let rhos = if rhos.is_empty() { &DEFAULT_TABLE_RHOS[..] } else { rhos };
    let mut t = Table::new(&["rho", "rho2", "pir"]);
    for row in table1(rhos)? {
        let classic = DEFAULT_TABLE_RHOS.iter().position(|&r| r == row.rho).map(|i| DEFAULT_TABLE_DECIMALS[i]);
        match (classic, precision) {
            (Some((a, b, c)), None) => {
                t.push(vec![Value::fixed(row.rho, a), Value::fixed(row.rho2, b), Value::fixed(row.pir, c)])
            }
            _ => t.push(vec![Value::shortest(row.rho), Value::num(row.rho2), Value::num(row.pir)]),
        }
    }
    Ok(t)
}

fn coverage_table(data: &Dataset, level: Level, method: CoverageMethod) -> Result<Table> {
    let (design, fit) = fit_data(data)?;
    let y = data.y();
    let methods: Vec<CoverageMethod> = match method {
        CoverageMethod::All => {
            let mut m = vec![CoverageMethod::PiExact, CoverageMethod::PiApprox, CoverageMethod::MpiExact, CoverageMethod::MpiApprox];
            if data.n() >= intervals::empirical_min_size(level) {
                m.push(CoverageMethod::MpiEmpirical);
            }
            m
        }
        m => vec![m],
    };
    let mut t = Table::new(&["method", "level", "covered", "n", "fraction"]);
    for m in methods {
        let ivs: Vec<Interval> = match m {
            CoverageMethod::PiExact => intervals::pi_exact_at_rows(&fit, &design, level)?,
            CoverageMethod::PiApprox => (0..data.n())
                .map(|i| intervals::pi_approx(&fit, data.predictors(i), level))
                .collect::<pir_core::Result<_>>()?,
            CoverageMethod::MpiExact => vec![intervals::mpi_exact(y, level)?; y.len()],
            CoverageMethod::MpiApprox => vec![intervals::mpi_approx(y, level)?; y.len()],
            CoverageMethod::MpiEmpirical => vec![intervals::mpi_empirical(y, level)?; y.len()],
            CoverageMethod::All => unreachable!("expanded above"),
        };
        let covered = intervals::coverage_count(&ivs, y)?;
        t.push(vec![
            Value::text(ivs[0].method.name()),
            Value::num(level.gamma()),
            Value::int(covered),
            Value::int(y.len()),
            Value::num(covered as f64 / y.len() as f64),
        ]);
    }
    Ok(t)
}

fn summary_table(result: &SimulationResult) -> Result<Table> {
    let mut t = Table::new(&[
        "rho_x", "n", "p", "rho2", "population_pir", "estimator", "replications", "missing", "min", "q1", "median",
        "q3", "max", "mean",
    ]);
    for c in &result.cells {
        for e in Estimator::ALL {
            let b = c.summary(e)?;
            t.push(vec![
                Value::shortest(c.cell.rho_x),
                Value::int(c.cell.n),
                Value::int(c.cell.p),
                Value::shortest(c.cell.rho2),
                Value::num(c.population_pir),
                Value::text(e.name()),
                Value::int(c.values(e).len()),
                Value::int(c.missing),
                Value::num(b.min),
                Value::num(b.q1),
                Value::num(b.median),
                Value::num(b.q3),
                Value::num(b.max),
                Value::num(b.mean),
            ]);
        }
    }
    Ok(t)
}

/// One line per successful replication, in replication order.
pub fn replications_table(result: &SimulationResult) -> Table {
    let mut t = Table::new(&["rho_x", "n", "p", "rho2", "index", "pir_s", "pir_tilde", "pir_hat", "r2"]);
    for c in &result.cells {
        for i in 0..c.pir_s.len() {
            t.push(vec![
                Value::shortest(c.cell.rho_x),
                Value::int(c.cell.n),
                Value::int(c.cell.p),
                Value::shortest(c.cell.rho2),
                Value::int(i),
                Value::num(c.pir_s[i]),
                Value::num(c.pir_tilde[i]),
                Value::num(c.pir_hat[i]),
                Value::num(c.r2[i]),
            ]);
        }
    }
    t
}

fn example_table(r: &dataio::ExampleReport) -> Table {
    let mut f: Vec<(String, Value)> = vec![
        ("n".into(), Value::int(r.n)),
        ("beta0".into(), Value::num(r.beta0)),
        ("beta1".into(), Value::num(r.beta1)),
        ("rho_hat".into(), Value::num(r.rho_hat)),
        ("r2".into(), Value::num(r.r2)),
        ("r2_adj".into(), Value::num(r.r2_adj)),
        ("sigma_eps".into(), Value::num(r.sigma_eps)),
        ("sigma_y".into(), Value::num(r.sigma_y)),
        ("mu_y".into(), Value::num(r.mu_y)),
    ];
    for (k, x) in dataio::EXAMPLE_POINTS.iter().enumerate() {
        for (tag, iv) in [("approx", &r.pi_approx[k]), ("exact", &r.pi_exact[k])] {
            f.push((format!("pi_{tag}_{x}_lower"), Value::num(iv.lower)));
            f.push((format!("pi_{tag}_{x}_upper"), Value::num(iv.upper)));
        }
    }
    f.extend([
        ("mpi_approx_lower".into(), Value::num(r.mpi_approx.lower)),
        ("mpi_approx_upper".into(), Value::num(r.mpi_approx.upper)),
        ("mpi_exact_lower".into(), Value::num(r.mpi_exact.lower)),
        ("mpi_exact_upper".into(), Value::num(r.mpi_exact.upper)),
        ("covered_conditional_exact".into(), Value::int(r.covered_conditional_exact)),
        ("covered_conditional_approx".into(), Value::int(r.covered_conditional_approx)),
        ("covered_marginal_exact".into(), Value::int(r.covered_marginal_exact)),
        ("covered_marginal_approx".into(), Value::int(r.covered_marginal_approx)),
        ("width_pi_approx".into(), Value::num(r.width_pi_approx)),
        ("width_mpi_approx".into(), Value::num(r.width_mpi_approx)),
        ("pir_s".into(), Value::num(r.pir_s)),
        ("pir_tilde".into(), Value::num(r.pir_tilde)),
        ("pir_hat".into(), Value::num(r.pir_hat)),
    ]);
    Table::record(f)
}

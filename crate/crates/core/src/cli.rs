//! Command-line front end. Data goes to stdout or `--out`, diagnostics to
//! stderr. Every numeral in JSON and CSV output is a string.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::family::FamilySpec;
use crate::momentgf::derive_all;
use crate::oracle::{check_pipeline, oracle_factorial_moments, HeightTable, DEFAULT_CAP};
use crate::pipeline::{estimate_limits, factorial_moment_series, Backend, GridConfig, MomentSeries};
use crate::series::solve_counting_series;
use crate::stats::{Decimal, FitConfig, FitModel, LimitRecord, TableRecord};

#[derive(Debug, Parser)]
#[command(name = "treeheight", version, about = "Exact moments of the total height of degree-restricted ordered trees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coefficients of f and of the factorial-moment series g_1..g_k.
    Solve(SolveArgs),
    /// Exact moment tables for chosen sizes.
    Stats(StatsArgs),
    /// Extrapolated scaled moments compared with the Brownian excursion area.
    Limits(LimitsArgs),
    /// Brute-force height distributions, optionally checked against both pipelines.
    Oracle(OracleArgs),
    /// g_0..g_k as elements of Q(x)[F]/(Q).
    Gf(GfArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Symbolic,
    Numeric,
    Auto,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Symbolic => Backend::Symbolic,
            BackendArg::Numeric => Backend::Numeric,
            BackendArg::Auto => Backend::Auto,
        }
    }
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    /// Allowed child counts, e.g. `2` or `1,2`.
    #[arg(long)]
    pub degrees: FamilySpec,
    /// Highest factorial moment k.
    #[arg(long, default_value_t = 9)]
    pub order: usize,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write data here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Truncation order N: coefficients x^0..x^N.
    #[arg(long, default_value_t = 2000)]
    pub terms: usize,
    #[arg(long, value_enum, default_value_t = BackendArg::Auto)]
    pub backend: BackendArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Sizes to tabulate, comma separated.
    #[arg(long = "n", value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    #[arg(long, value_enum, default_value_t = BackendArg::Auto)]
    pub backend: BackendArg,
    /// Fractional digits of the scaled moments.
    #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u32).range(10..))]
    pub precision: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct LimitsArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Largest size N considered.
    #[arg(long, default_value_t = 2000)]
    pub terms: usize,
    #[arg(long, value_enum, default_value_t = BackendArg::Auto)]
    pub backend: BackendArg,
    #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u32).range(10..))]
    pub precision: u32,
    /// Number of grid points.
    #[arg(long, default_value_t = 16)]
    pub samples: usize,
    /// Smallest grid size (default N/16).
    #[arg(long)]
    pub min_n: Option<usize>,
    /// Fraction of the samples, from the largest n, used by the fit.
    #[arg(long, default_value_t = 0.5)]
    pub window: f64,
    #[arg(long, default_value_t = FitModel::TwoTerm)]
    pub model: FitModel,
    /// Fail unless every extrapolated value is within `--tol` of its target.
    #[arg(long)]
    pub assert: bool,
    #[arg(long, default_value = "0.02")]
    pub tol: Decimal,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Enumerate sizes 1..=max-n.
    #[arg(long, default_value_t = 12)]
    pub max_n: usize,
    /// Refuse sizes beyond this.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
    /// Compare both pipelines with the enumeration.
    #[arg(long)]
    pub check: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GfArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {}", .0.module(), .0)]
    Engine(#[from] Error),
    #[error("io: {0}")]
    Io(#[from] io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("assertion failed: {0}")]
    Assertion(String),
}

/// A command's data, renderable in every output format.
pub trait Report: Serialize {
    fn write_csv(&self, w: &mut csv::Writer<Vec<u8>>) -> csv::Result<()>;
    fn text(&self) -> String;

    fn render(&self, format: Format) -> Result<String, CliError> {
        Ok(match format {
            Format::Json => to_canonical_json(self)?,
            Format::Text => self.text(),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                self.write_csv(&mut w)?;
                let bytes = w.into_inner().map_err(|e| io::Error::other(e.to_string()))?;
                String::from_utf8(bytes).expect("csv output is utf-8")
            }
        })
    }
}

/// Pretty JSON with a trailing newline; field order follows the record types.
pub fn to_canonical_json<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub name: String,
    pub coeffs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    pub family: Vec<u32>,
    pub backend: String,
    pub terms: usize,
    pub series: Vec<SeriesRecord>,
}

impl Report for SolveReport {
    fn write_csv(&self, w: &mut csv::Writer<Vec<u8>>) -> csv::Result<()> {
        let mut header = vec!["n".to_string()];
        header.extend(self.series.iter().map(|s| s.name.clone()));
        w.write_record(&header)?;
        for n in 0..=self.terms {
            let mut row = vec![n.to_string()];
            row.extend(self.series.iter().map(|s| s.coeffs[n].clone()));
            w.write_record(&row)?;
        }
        Ok(())
    }

    fn text(&self) -> String {
        self.series
            .iter()
            .map(|s| format!("{} = [{}]\n", s.name, s.coeffs.join(", ")))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsReport {
    pub family: Vec<u32>,
    pub backend: String,
    pub tables: Vec<TableRecord>,
    /// Requested sizes with no trees.
    pub unsupported: Vec<usize>,
}

impl Report for StatsReport {
    fn write_csv(&self, w: &mut csv::Writer<Vec<u8>>) -> csv::Result<()> {
        let k_m = self.tables.iter().map(|t| t.m.len()).max().unwrap_or(0);
        let mut header: Vec<String> = ["n", "f_n", "mu"].map(String::from).to_vec();
        header.extend((0..k_m).map(|j| format!("m_{}", j + 2)));
        header.extend((1..k_m).map(|j| format!("alpha_{}", j + 2)));
        header.push("notice".into());
        w.write_record(&header)?;
        for t in &self.tables {
            let mut row = vec![t.n.to_string(), t.f_n.clone(), t.mu.clone()];
            row.extend(padded(&t.m, k_m));
            row.extend(padded(&t.alpha, k_m.saturating_sub(1)));
            row.push(t.notice.clone().unwrap_or_default());
            w.write_record(&row)?;
        }
        Ok(())
    }

    fn text(&self) -> String {
        let mut out = String::new();
        for t in &self.tables {
            out += &format!("n = {}  f_n = {}  mu = {}\n", t.n, t.f_n, t.mu);
            for (j, m) in t.m.iter().enumerate() {
                out += &format!("  m_{} = {m}\n", j + 2);
            }
            for (j, a) in t.alpha.iter().enumerate() {
                out += &format!("  alpha_{} = {a}\n", j + 3);
            }
            if let Some(notice) = &t.notice {
                out += &format!("  notice: {notice}\n");
            }
        }
        for n in &self.unsupported {
            out += &format!("n = {n}  unsupported (f_n = 0)\n");
        }
        out
    }
}

fn padded(v: &[String], len: usize) -> Vec<String> {
    let mut v = v.to_vec();
    v.resize(len, String::new());
    v
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitsReport {
    pub family: Vec<u32>,
    pub backend: String,
    pub terms: usize,
    pub grid: Vec<usize>,
    pub estimates: Vec<LimitRecord>,
}

impl Report for LimitsReport {
    fn write_csv(&self, w: &mut csv::Writer<Vec<u8>>) -> csv::Result<()> {
        w.write_record(["i", "extrapolated", "target", "abs_error", "residual", "method", "samples"])?;
        for e in &self.estimates {
            let samples: Vec<String> = e.samples.iter().map(|(n, a)| format!("{n}:{a}")).collect();
            w.write_record([
                e.i.to_string(),
                e.extrapolated.clone(),
                e.target.clone().unwrap_or_default(),
                e.abs_error.clone().unwrap_or_default(),
                e.residual.clone(),
                e.method.clone(),
                samples.join(" "),
            ])?;
        }
        Ok(())
    }

    fn text(&self) -> String {
        let mut out = format!("grid: {:?}\n", self.grid);
        for e in &self.estimates {
            out += &format!(
                "alpha_{}: extrapolated {}  target {}  |error| {}\n",
                e.i,
                e.extrapolated,
                e.target.as_deref().unwrap_or("-"),
                e.abs_error.as_deref().unwrap_or("-"),
            );
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleRow {
    pub n: usize,
    pub f_n: String,
    /// Sorted `height:count` pairs.
    pub distribution: String,
    pub factorial: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub pipelines: Vec<String>,
    pub comparisons: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub family: Vec<u32>,
    pub k: usize,
    pub sizes: Vec<OracleRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<CheckRecord>,
}

impl Report for OracleReport {
    fn write_csv(&self, w: &mut csv::Writer<Vec<u8>>) -> csv::Result<()> {
        let mut header: Vec<String> = ["n", "f_n", "distribution"].map(String::from).to_vec();
        header.extend((0..=self.k).map(|r| format!("F_{r}")));
        w.write_record(&header)?;
        for row in &self.sizes {
            let mut rec = vec![row.n.to_string(), row.f_n.clone(), row.distribution.clone()];
            rec.extend(row.factorial.iter().cloned());
            w.write_record(&rec)?;
        }
        Ok(())
    }

    fn text(&self) -> String {
        let mut out = String::new();
        for row in &self.sizes {
            out += &format!("n = {}: {}\n  F = [{}]\n", row.n, row.distribution, row.factorial.join(", "));
        }
        if let Some(c) = &self.check {
            out += &format!("check passed: {} comparisons ({})\n", c.comparisons, c.pipelines.join(", "));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GfRecord {
    pub r: usize,
    pub expr: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GfReport {
    pub family: Vec<u32>,
    pub g: Vec<GfRecord>,
}

impl Report for GfReport {
    fn write_csv(&self, w: &mut csv::Writer<Vec<u8>>) -> csv::Result<()> {
        w.write_record(["r", "expr"])?;
        for g in &self.g {
            w.write_record([g.r.to_string(), g.expr.clone()])?;
        }
        Ok(())
    }

    fn text(&self) -> String {
        self.g.iter().map(|g| format!("g_{} = {}\n", g.r, g.expr)).collect()
    }
}

fn moment_series(spec: &FamilySpec, k: usize, order: usize, backend: BackendArg) -> Result<MomentSeries, CliError> {
    let ms = factorial_moment_series(spec, k, order, backend.into())?;
    if let Some(reason) = &ms.fallback {
        eprintln!("notice: symbolic backend unavailable ({reason}); used numeric");
    }
    Ok(ms)
}

pub fn solve(args: &SolveArgs) -> Result<SolveReport, CliError> {
    let spec = &args.family.degrees;
    let k = args.family.order;
    let f = solve_counting_series(spec, args.terms);
    let mut series = vec![SeriesRecord {
        name: "f".into(),
        coeffs: f.coeffs().iter().map(ToString::to_string).collect(),
    }];
    let mut backend = Backend::from(args.backend);
    if k > 0 {
        let ms = moment_series(spec, k, args.terms, args.backend)?;
        backend = ms.backend;
        series.extend(ms.series.iter().enumerate().skip(1).map(|(r, s)| SeriesRecord {
            name: format!("g_{r}"),
            coeffs: s.coeffs().iter().map(ToString::to_string).collect(),
        }));
    }
    Ok(SolveReport {
        family: spec.degrees().to_vec(),
        backend: backend.to_string(),
        terms: args.terms,
        series,
    })
}

pub fn stats(args: &StatsArgs) -> Result<StatsReport, CliError> {
    let spec = &args.family.degrees;
    let mut sizes = args.sizes.clone();
    sizes.sort_unstable();
    sizes.dedup();
    let order = sizes.last().copied().unwrap_or(0);
    let ms = moment_series(spec, args.family.order, order, args.backend)?;
    let mut tables = Vec::new();
    let mut unsupported = Vec::new();
    for &n in &sizes {
        match ms.table(n, args.precision)? {
            Some(t) => {
                if t.degenerate {
                    eprintln!("notice: n = {n}: {}", Error::DegenerateDistribution);
                }
                tables.push(t.to_record());
            }
            None => {
                eprintln!("notice: n = {n} unsupported (f_n = 0)");
                unsupported.push(n);
            }
        }
    }
    Ok(StatsReport {
        family: spec.degrees().to_vec(),
        backend: ms.backend.to_string(),
        tables,
        unsupported,
    })
}

pub fn limits(args: &LimitsArgs) -> Result<LimitsReport, CliError> {
    let spec = &args.family.degrees;
    let k = args.family.order;
    if k < 3 {
        return Err(Error::InvalidConfig("limits need --order of at least 3".into()).into());
    }
    let ms = moment_series(spec, k, args.terms, args.backend)?;
    let grid = GridConfig {
        min_n: args.min_n,
        samples: args.samples,
    };
    let fit = FitConfig {
        model: args.model,
        window: args.window,
        digits: args.precision,
    };
    let moments: Vec<usize> = (3..=k).collect();
    let estimates = estimate_limits(&ms, &moments, &grid, &fit)?;
    Ok(LimitsReport {
        family: spec.degrees().to_vec(),
        backend: ms.backend.to_string(),
        terms: args.terms,
        grid: grid.sizes(&ms),
        estimates: estimates.iter().map(|e| e.to_record()).collect(),
    })
}

/// Checks every estimate that has a target against `tol`, one line per moment on stderr.
pub fn assert_limits(report: &LimitsReport, tol: &Decimal) -> Result<(), CliError> {
    let tol = tol.to_rational();
    let mut failed = Vec::new();
    for e in &report.estimates {
        let Some(err) = &e.abs_error else { continue };
        let err: Decimal = err.parse().expect("rendered by Decimal");
        let ok = err.to_rational() <= tol;
        eprintln!("assert alpha_{}: |error| = {err} {}", e.i, if ok { "pass" } else { "FAIL" });
        if !ok {
            failed.push(format!("alpha_{}", e.i));
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Assertion(format!("{} outside tolerance", failed.join(", "))))
    }
}

pub fn oracle(args: &OracleArgs) -> Result<OracleReport, CliError> {
    let spec = &args.family.degrees;
    let k = args.family.order;
    let table = HeightTable::build(spec, args.max_n, args.cap)?;
    let sizes = (1..=args.max_n)
        .map(|n| table.get(n))
        .filter(|hp| !hp.counts.is_empty())
        .map(|hp| OracleRow {
            n: hp.n,
            f_n: hp.total().to_string(),
            distribution: hp.render(),
            factorial: oracle_factorial_moments(&hp, k).iter().map(ToString::to_string).collect(),
        })
        .collect();
    let check = if args.check {
        let report = check_pipeline(spec, args.max_n, k, args.cap)?;
        Some(CheckRecord {
            pipelines: report.pipelines,
            comparisons: report.comparisons,
        })
    } else {
        None
    };
    Ok(OracleReport {
        family: spec.degrees().to_vec(),
        k,
        sizes,
        check,
    })
}

pub fn gf(args: &GfArgs) -> Result<GfReport, CliError> {
    let spec = &args.family.degrees;
    let bundle = derive_all(spec, args.family.order)?;
    Ok(GfReport {
        family: spec.degrees().to_vec(),
        g: bundle
            .all()
            .iter()
            .enumerate()
            .map(|(r, g)| GfRecord { r, expr: g.to_string() })
            .collect(),
    })
}

fn emit(report: &impl Report, output: &OutputArgs) -> Result<(), CliError> {
    let data = report.render(output.format)?;
    match &output.out {
        Some(path) => fs::write(path, data)?,
        None => io::stdout().lock().write_all(data.as_bytes())?,
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Solve(a) => emit(&solve(a)?, &a.output),
        Command::Stats(a) => emit(&stats(a)?, &a.output),
        Command::Limits(a) => {
            let report = limits(a)?;
            emit(&report, &a.output)?;
            if a.assert {
                assert_limits(&report, &a.tol)?;
            }
            Ok(())
        }
        Command::Oracle(a) => emit(&oracle(a)?, &a.output),
        Command::Gf(a) => emit(&gf(a)?, &a.output),
    }
}

/// Parses the process arguments and runs; usage errors exit with status 2.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

//! Command-line front end for `casorati-core`.

pub mod document;
pub mod specfile;
pub mod sweep;

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use casorati_core::fixtures::{by_name, catalog};
use casorati_core::numkit::sphere::DEFAULT_SEED;
use casorati_core::report::{evaluate, Options, PointReport};
use casorati_core::submersion::{analyze, Submersion, SubmersionSpec};
use casorati_core::theorems::TheoremKind;
use casorati_core::tolerances;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::Value;

use specfile::SpecFile;
use sweep::{grid, Axis};

#[derive(Debug, Parser)]
#[command(
    name = "casorati",
    version,
    about = "Curvature, O'Neill tensors and δ-Casorati inequalities for Riemannian submersions given in a chart"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the inequality at one or more points.
    Check {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        points: PointArgs,
        #[command(flatten)]
        engine: Engine,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Dump the adapted frame and the O'Neill tensor components.
    Tensors {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        points: PointArgs,
    },
    /// Evaluate a coordinate grid and write CSV.
    Sweep {
        #[command(flatten)]
        source: Source,
        /// Axis `NAME=LO:HI:COUNT`; repeat for more axes. Other coordinates come from --point.
        #[arg(long, required = true)]
        grid: Vec<String>,
        /// Base point for coordinates not on the grid (default: the first default point).
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        #[command(flatten)]
        engine: Engine,
    },
    /// List the built-in fixtures.
    List,
    /// Write a fixture (or a normalized spec file) as a spec file.
    Export {
        #[command(flatten)]
        source: Source,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Built-in fixture name (see `list`).
    #[arg(long)]
    pub fixture: Option<String>,
    /// Spec file in JSON.
    #[arg(long)]
    pub spec: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    /// Comma-separated coordinates of a single point.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "points")]
    pub point: Option<String>,
    /// File of points: a JSON array of arrays, or one comma-separated point per line.
    #[arg(long)]
    pub points: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Engine {
    /// general | rsf | csf | gssf | corollary:CLASS
    #[arg(long, default_value = "general")]
    pub theorem: String,
    /// Relative slack of the inequality verdict.
    #[arg(long, default_value_t = tolerances::REPORT)]
    pub tol: f64,
    /// Seed of the hyperplane optimizer's sampling.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads for point-level parallelism (0 picks a default).
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// What the process should exit with when no error occurred.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    Violation,
}

impl Outcome {
    pub fn code(self) -> i32 {
        match self {
            Outcome::Ok => 0,
            Outcome::Violation => 2,
        }
    }
}

pub struct Loaded {
    pub label: String,
    pub spec: SubmersionSpec,
    pub points: Vec<Vec<f64>>,
}

impl Source {
    pub fn load(&self) -> Result<Loaded> {
        match (&self.fixture, &self.spec) {
            (Some(name), _) => {
                let f = by_name(name).ok_or_else(|| {
                    let names: Vec<_> = catalog().iter().map(|f| f.name).collect();
                    anyhow!("unknown fixture `{name}`; available: {}", names.join(", "))
                })?;
                Ok(Loaded { label: format!("fixture:{name}"), spec: f.spec, points: f.default_points })
            }
            (None, Some(path)) => {
                let file = SpecFile::read(path)?;
                Ok(Loaded {
                    label: format!("spec:{}", path.display()),
                    spec: file.to_spec().with_context(|| format!("in {}", path.display()))?,
                    points: file.points,
                })
            }
            (None, None) => bail!("one of --fixture or --spec is required"),
        }
    }
}

pub fn parse_point(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|x| {
            let x = x.trim();
            x.parse::<f64>().with_context(|| format!("bad coordinate `{x}` in point `{text}`"))
        })
        .collect()
}

pub fn read_points(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if text.trim_start().starts_with('[') {
        return serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()));
    }
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(parse_point)
        .collect()
}

impl PointArgs {
    fn resolve(&self, defaults: Vec<Vec<f64>>) -> Result<Vec<Vec<f64>>> {
        let points = match (&self.point, &self.points) {
            (Some(p), _) => vec![parse_point(p)?],
            (None, Some(path)) => read_points(path)?,
            (None, None) => defaults,
        };
        if points.is_empty() {
            bail!("no points given and the source has no default points");
        }
        Ok(points)
    }
}

impl Engine {
    fn kind(&self) -> Result<TheoremKind> {
        TheoremKind::parse(&self.theorem).map_err(|e| anyhow!("--theorem {}: {e}", self.theorem))
    }

    fn options(&self) -> Result<Options> {
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            bail!("--tol must be a non-negative number");
        }
        let mut opts = Options { tol_report: self.tol, ..Options::default() };
        opts.sphere.seed = self.seed;
        Ok(opts)
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .context("starting worker threads")
    }
}

fn compile(spec: &SubmersionSpec) -> Result<Submersion> {
    spec.compile().map_err(|e| anyhow!("compiling `{}`: {e}", spec.name))
}

/// Shortest round-trip decimal, switching to exponent form for tiny or huge values.
pub fn fmt_num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) || !x.is_finite() {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

fn point_label(p: &[f64]) -> String {
    p.iter().map(|x| fmt_num(*x)).collect::<Vec<_>>().join(",")
}

/// Evaluates every point in parallel, keeping the input order.
fn evaluate_points(
    sub: &Submersion,
    points: &[Vec<f64>],
    engine: &Engine,
) -> Result<Vec<PointReport>> {
    let kind = engine.kind()?;
    let opts = engine.options()?;
    engine.pool()?.install(|| {
        points
            .par_iter()
            .map(|p| {
                sub.check_point(p)
                    .and_then(|_| evaluate(sub, p, &kind, &opts))
                    .map_err(|e| anyhow!("at point ({}): {e}", point_label(p)))
            })
            .collect()
    })
}

pub const CSV_METRICS: [&str; 11] = [
    "lhs",
    "rhs_delta",
    "rhs_hat",
    "gap_delta",
    "gap_hat",
    "quasi_umbilical",
    "off_diagonal_zero",
    "a_zero",
    "holds",
    "verdict",
    "max_residual",
];

fn write_csv(out: &mut dyn Write, coords: &[String], reports: &[PointReport]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(coords.iter().map(String::as_str).chain(CSV_METRICS))?;
    for r in reports {
        let v = &r.verdict;
        let mut row: Vec<String> = r.analysis.point.iter().map(|x| fmt_num(*x)).collect();
        row.extend(
            [v.lhs, v.rhs_delta, v.rhs_hat, v.gap_delta, v.gap_hat]
                .iter()
                .map(|x| fmt_num(*x)),
        );
        row.extend(
            [v.flags.quasi_umbilical, v.flags.off_diagonal_zero, v.flags.a_zero, v.holds()]
                .iter()
                .map(|b| b.to_string()),
        );
        row.push(v.verdict.name().to_string());
        row.push(fmt_num(r.analysis.residuals.max_required()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn write_json(out: &mut dyn Write, doc: &Value) -> Result<()> {
    document::ensure_finite(doc)?;
    serde_json::to_writer_pretty(&mut *out, doc)?;
    writeln!(out)?;
    Ok(())
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<Outcome> {
    match cli.command {
        Command::Check { source, points, engine, format } => {
            let loaded = source.load()?;
            let sub = compile(&loaded.spec)?;
            let points = points.resolve(loaded.points)?;
            let reports = evaluate_points(&sub, &points, &engine)?;
            match format {
                Format::Json => {
                    let items = reports.iter().map(document::point_report).collect();
                    let kind = engine.kind()?.label();
                    write_json(out, &document::envelope(&loaded.label, Some(&kind), "reports", items))?;
                }
                Format::Csv => write_csv(out, &sub.coords, &reports)?,
            }
            let violated = reports.iter().filter(|r| !r.verdict.holds()).count();
            if violated > 0 {
                writeln!(err, "inequality violated at {violated} of {} points", reports.len())?;
                return Ok(Outcome::Violation);
            }
            Ok(Outcome::Ok)
        }
        Command::Tensors { source, points } => {
            let loaded = source.load()?;
            let sub = compile(&loaded.spec)?;
            let points = points.resolve(loaded.points)?;
            let mut items = Vec::with_capacity(points.len());
            for p in &points {
                let a = sub
                    .check_point(p)
                    .and_then(|_| analyze(&sub, p))
                    .map_err(|e| anyhow!("at point ({}): {e}", point_label(p)))?;
                items.push(document::tensor_dump(&a));
            }
            write_json(out, &document::envelope(&loaded.label, None, "points", items))?;
            Ok(Outcome::Ok)
        }
        Command::Sweep { source, grid: axes, point, engine } => {
            let loaded = source.load()?;
            let sub = compile(&loaded.spec)?;
            let base = match point {
                Some(p) => parse_point(&p)?,
                None => loaded
                    .points
                    .first()
                    .cloned()
                    .ok_or_else(|| anyhow!("sweep needs --point: the source has no default points"))?,
            };
            if base.len() != sub.coords.len() {
                bail!("base point has {} coordinates, expected {}", base.len(), sub.coords.len());
            }
            let axes = axes.iter().map(|a| Axis::parse(a, &sub.coords)).collect::<Result<Vec<_>>>()?;
            let all = grid(&base, &axes);
            let (inside, outside): (Vec<_>, Vec<_>) = all.into_iter().partition(|p| sub.check_point(p).is_ok());
            if !outside.is_empty() {
                writeln!(err, "skipped {} grid points outside the domain", outside.len())?;
            }
            let reports = evaluate_points(&sub, &inside, &engine)?;
            write_csv(out, &sub.coords, &reports)?;
            Ok(Outcome::Ok)
        }
        Command::List => {
            for f in catalog() {
                writeln!(out, "{:<14} {}", f.name, f.summary)?;
            }
            Ok(Outcome::Ok)
        }
        Command::Export { source } => {
            let loaded = source.load()?;
            compile(&loaded.spec)?;
            let file = SpecFile::from_spec(&loaded.spec, &loaded.points);
            serde_json::to_writer_pretty(&mut *out, &file)?;
            writeln!(out)?;
            Ok(Outcome::Ok)
        }
    }
}

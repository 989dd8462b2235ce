use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use heat_content::coeffs::{beta_closed, beta_mixed, beta_spectral, CoefficientResult};
use heat_content::oracle::{
    compare, fit_asymptotics, solve_closed, solve_heat, solve_heat_extrapolated, write_csv, BoundarySpec, Complex,
    HeatContentCurve, HeatContentReport, RadialGrid, SolverMetadata, SCHEMA_VERSION,
};
use heat_content::suites::{run_suite, Suite};
use heat_content::{Error, C64};
use serde::Serialize;

use crate::config::{BoundaryKind, ConfigError, Geometry, RunConfig};

/// Everything that ends a run early, with its exit code.
#[derive(Debug)]
pub enum Failure {
    Config(ConfigError),
    Engine(Error),
    Io(PathBuf, std::io::Error),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Engine(e) if e.is_math_domain() => 3,
            _ => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Config(e) => write!(f, "{e}"),
            Failure::Engine(e) if e.is_math_domain() => write!(f, "math-domain error: {e}"),
            Failure::Engine(e) => write!(f, "error: {e}"),
            Failure::Io(p, e) => write!(f, "cannot write {}: {e}", p.display()),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

pub type Outcome = Result<bool, Failure>;

pub fn load(path: &Path) -> Result<RunConfig, Failure> {
    let src = std::fs::read_to_string(path).map_err(|e| {
        Failure::Config(ConfigError {
            path: "<file>".into(),
            line: None,
            message: format!("cannot read {}: {e}", path.display()),
        })
    })?;
    Ok(crate::config::parse(&src)?)
}

fn fmt_c(z: C64) -> String {
    if z.im == 0.0 {
        format!("{:+.12e}", z.re)
    } else {
        format!("{:+.12e} {:+.12e}i", z.re, z.im)
    }
}

fn heading(cfg: &RunConfig) -> String {
    match cfg.geometry {
        Geometry::Closed(_) => format!("{} (no boundary)", cfg.label),
        _ => format!("{} ({} boundary)", cfg.label, boundary_label(&cfg.geometry)),
    }
}

fn boundary_label(g: &Geometry) -> &'static str {
    match g {
        Geometry::Collar { boundary: BoundaryKind::Spectral, .. } => "spectral",
        Geometry::Collar { boundary: BoundaryKind::Mixed, .. } => "mixed",
        Geometry::Closed(_) => "none",
    }
}

/// β₀, β₁, β₂ for the configured problem.
fn coefficients(cfg: &RunConfig) -> Result<Vec<CoefficientResult>, Error> {
    (0..3)
        .map(|n| match &cfg.geometry {
            Geometry::Collar { model, boundary: BoundaryKind::Spectral } => beta_spectral(n, &cfg.phi, &cfg.rho, model),
            Geometry::Collar { model, boundary: BoundaryKind::Mixed } => {
                beta_mixed(n, &cfg.phi, &cfg.rho, model, &Geometry::mixed_endo(model))
            }
            Geometry::Closed(c) => {
                let v = beta_closed(n, &cfg.phi, &cfg.rho, c)?;
                Ok(CoefficientResult { n, value: v, interior: v, boundary: [C64::new(0.0, 0.0); 2] })
            }
        })
        .collect()
}

#[derive(Serialize)]
struct CoefficientRow {
    n: usize,
    value: Complex,
    interior: Complex,
    inner: Complex,
    outer: Complex,
}

#[derive(Serialize)]
struct CoefficientReport<'a> {
    schema_version: u32,
    model: &'a str,
    boundary: &'a str,
    coefficients: Vec<CoefficientRow>,
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let io = |e| Failure::Io(path.to_path_buf(), e);
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Failure::Io(path.to_path_buf(), e.into()))?;
    writeln!(w).and_then(|_| w.flush()).map_err(io)
}

pub fn cmd_coeffs(cfg: &RunConfig, json: Option<&Path>) -> Outcome {
    let results = coefficients(cfg)?;
    println!("{}", heading(cfg));
    println!("{:>2}  {:>22}  {:>22}  {:>22}  {:>22}", "n", "beta_n", "interior", "r=0", "r=1");
    for r in &results {
        println!(
            "{:>2}  {:>22}  {:>22}  {:>22}  {:>22}",
            r.n,
            fmt_c(r.value),
            fmt_c(r.interior),
            fmt_c(r.boundary[0]),
            fmt_c(r.boundary[1])
        );
    }
    if let Some(path) = json.or(cfg.json.as_deref()) {
        let report = CoefficientReport {
            schema_version: SCHEMA_VERSION,
            model: &cfg.label,
            boundary: boundary_label(&cfg.geometry),
            coefficients: results
                .iter()
                .map(|r| CoefficientRow {
                    n: r.n,
                    value: r.value.into(),
                    interior: r.interior.into(),
                    inner: r.boundary[0].into(),
                    outer: r.boundary[1].into(),
                })
                .collect(),
        };
        write_json(path, &report)?;
    }
    Ok(true)
}

fn run_oracle(cfg: &RunConfig, grid_factor: usize) -> Result<HeatContentCurve, Failure> {
    let o = &cfg.oracle;
    match &cfg.geometry {
        Geometry::Closed(c) => Ok(solve_closed(c, &cfg.phi, &cfg.rho, &o.time)?),
        Geometry::Collar { model, boundary } => {
            let spec = match boundary {
                BoundaryKind::Spectral => BoundarySpec::Spectral,
                BoundaryKind::Mixed => BoundarySpec::Mixed(Geometry::mixed_endo(model)),
            };
            let grid = RadialGrid::new(o.n * grid_factor)?;
            let curve = if o.richardson {
                solve_heat_extrapolated(model, &cfg.phi, &cfg.rho, &spec, grid, &o.time)?
            } else {
                solve_heat(model, &cfg.phi, &cfg.rho, &spec, grid, &o.time)?
            };
            Ok(curve)
        }
    }
}

#[derive(Serialize)]
struct SimulationReport<'a> {
    schema_version: u32,
    model: &'a str,
    solver: &'a SolverMetadata,
    points: usize,
}

pub fn cmd_simulate(cfg: &RunConfig, csv: Option<&Path>, json: Option<&Path>, grid_factor: usize) -> Outcome {
    let Some(csv) = csv.or(cfg.csv.as_deref()) else {
        return Err(Failure::Config(ConfigError {
            path: "output.csv".into(),
            line: None,
            message: "no CSV path (use --csv)".into(),
        }));
    };
    let curve = run_oracle(cfg, grid_factor)?;
    let io = |e| Failure::Io(csv.to_path_buf(), e);
    let mut w = BufWriter::new(File::create(csv).map_err(io)?);
    write_csv(&curve, &mut w).and_then(|_| w.flush()).map_err(io)?;
    let meta = &curve.meta;
    println!(
        "{}: {} points, N = {}{}, {} steps, {} modes -> {}",
        cfg.label,
        curve.len(),
        meta.n,
        if meta.richardson { " (extrapolated)" } else { "" },
        meta.steps,
        meta.modes,
        csv.display()
    );
    if let Some(path) = json.or(cfg.json.as_deref()) {
        write_json(
            path,
            &SimulationReport { schema_version: SCHEMA_VERSION, model: &cfg.label, solver: meta, points: curve.len() },
        )?;
    }
    Ok(true)
}

pub fn cmd_compare(cfg: &RunConfig, json: Option<&Path>, grid_factor: usize) -> Outcome {
    let closed: Vec<C64> = coefficients(cfg)?.iter().map(|r| r.value).collect();
    let curve = run_oracle(cfg, grid_factor)?;
    let fit = fit_asymptotics(&curve, cfg.oracle.fit_order, cfg.oracle.window())?;
    let report: HeatContentReport =
        compare(&[closed[0], closed[1], closed[2]], &fit, cfg.oracle.tolerances).with_solver(curve.meta.clone());
    match cfg.geometry {
        Geometry::Closed(_) => println!("{}", heading(cfg)),
        _ => println!("{}, N = {}", heading(cfg), curve.meta.n),
    }
    println!("{:>2}  {:>22}  {:>22}  {:>10}  {:>8}  verdict", "n", "closed form", "fitted", "error", "tol");
    for c in &report.coefficients {
        println!(
            "{:>2}  {:>22}  {:>22}  {:>10.3e}  {:>8.1e}  {}",
            c.n,
            fmt_c(C64::new(c.closed.re, c.closed.im)),
            fmt_c(C64::new(c.fitted.re, c.fitted.im)),
            c.error,
            c.tolerance,
            if c.pass { "PASS" } else { "FAIL" }
        );
    }
    println!("fit: {} points, condition {:.2e}, residual {:.2e}", fit.points, fit.condition_number, fit.residual);
    if let Some(path) = json.or(cfg.json.as_deref()) {
        write_json(path, &report)?;
    }
    Ok(report.pass)
}

pub fn cmd_verify(suite: Suite) -> Outcome {
    let checks = run_suite(suite);
    let failed = checks.iter().filter(|c| !c.pass).count();
    for c in &checks {
        println!("{c}");
    }
    println!("{} checks, {failed} failed", checks.len());
    Ok(failed == 0)
}

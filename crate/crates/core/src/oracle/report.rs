//! Engine vs oracle comparison and machine-readable output.

use std::io::Write;

use serde::Serialize;

use super::{AsymptoticFit, FitWindow, HeatContentCurve, SolverMetadata};
use crate::C64;

/// Bumped whenever a field of [`HeatContentReport`] changes.
pub const SCHEMA_VERSION: u32 = 1;

/// Relative tolerances for `b₀, b₁, b₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances(pub [f64; 3]);

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances([1e-3, 1e-2, 2e-2])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for Complex {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientCheck {
    pub n: usize,
    pub closed: Complex,
    pub fitted: Complex,
    /// `|b_n − β_n| / max(1, |β_n|)`.
    pub error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitSummary {
    pub coefficients: Vec<Complex>,
    pub residual: f64,
    pub condition_number: f64,
    pub points: usize,
    pub window: FitWindow,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeatContentReport {
    pub schema_version: u32,
    pub coefficients: Vec<CoefficientCheck>,
    pub fit: FitSummary,
    pub solver: Option<SolverMetadata>,
    pub pass: bool,
}

impl HeatContentReport {
    pub fn with_solver(mut self, meta: SolverMetadata) -> Self {
        self.solver = Some(meta);
        self
    }

    /// Worst `error / tolerance` over the checked coefficients.
    pub fn worst_ratio(&self) -> f64 {
        self.coefficients.iter().map(|c| c.error / c.tolerance).fold(0.0, f64::max)
    }
}

pub fn relative_error(fitted: C64, closed: C64) -> f64 {
    (fitted - closed).norm() / closed.norm().max(1.0)
}

pub fn compare(closed: &[C64; 3], fit: &AsymptoticFit, tol: Tolerances) -> HeatContentReport {
    let coefficients: Vec<CoefficientCheck> = (0..3)
        .map(|n| {
            let error = relative_error(fit.b(n), closed[n]);
            CoefficientCheck {
                n,
                closed: closed[n].into(),
                fitted: fit.b(n).into(),
                error,
                tolerance: tol.0[n],
                pass: error <= tol.0[n],
            }
        })
        .collect();
    let pass = coefficients.iter().all(|c| c.pass);
    HeatContentReport {
        schema_version: SCHEMA_VERSION,
        coefficients,
        fit: FitSummary {
            coefficients: fit.coeffs.iter().map(|&z| z.into()).collect(),
            residual: fit.residual,
            condition_number: fit.condition_number,
            points: fit.points,
            window: fit.window,
        },
        solver: None,
        pass,
    }
}

/// Columns `t, beta_real, beta_imag`.
pub fn write_csv<W: Write>(curve: &HeatContentCurve, mut out: W) -> std::io::Result<()> {
    writeln!(out, "t,beta_real,beta_imag")?;
    for (t, v) in curve.points() {
        writeln!(out, "{t:e},{:e},{:e}", v.re, v.im)?;
    }
    Ok(())
}

//! Numerical heat flow: solve `(∂_t + D)u = 0`, `ℬu = 0`, `u(0) = φ` mode by
//! mode on a uniform radial grid, and record `β(t) = ∫_M⟨u, ρ⟩ dx`.
//!
//! Boundary values are eliminated: at each end the `ℓ` conditions
//! `R u_∂ = 0`, `T u_∂′ + V u_∂ = 0` (with a one-sided second order stencil for
//! `u_∂′`) express `u_∂` through the two nearest interior nodes. Time stepping
//! is Crank–Nicolson on a geometric mesh.

mod blocktri;
mod fit;
mod reference;
mod report;

pub use blocktri::{BlockTridiag, Workspace};
pub use fit::{fit_asymptotics, fit_points, AsymptoticFit, FitWindow, MAX_CONDITION, MIN_FIT_POINTS};
pub use reference::{dirichlet_interval_series, observed_order};
pub use report::{
    compare, write_csv, CoefficientCheck, Complex, FitSummary, HeatContentReport, Tolerances, SCHEMA_VERSION,
};

use rayon::prelude::*;
use serde::Serialize;

use crate::fields::{negated, DualField, Field, Mode};
use crate::linalg::{c, eye};
use crate::model::{ClosedModel, Component, DiracModel};
use crate::spectral::{laplace_coefficients, xi, BoundaryEndo, ProjectorCache, DEFAULT_GAP_TOL};
use crate::{CMat, Error, Result, C64};

/// Smallest admissible number of interior nodes.
pub const MIN_NODES: usize = 64;

/// Smallest `σ_min/σ_max` of the elimination system before it counts as
/// rank deficient.
pub const CONSTRAINT_RATIO_TOL: f64 = 1e-10;

/// Uniform grid `r_j = jh`, `h = 1/(N+1)`, interior nodes `j = 1..=N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RadialGrid {
    n: usize,
}

impl RadialGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < MIN_NODES {
            return Err(Error::InvalidParameter(format!("grid needs at least {MIN_NODES} interior nodes, got {n}")));
        }
        Ok(Self { n })
    }

    pub fn interior(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        1.0 / (self.n as f64 + 1.0)
    }

    /// Node `j ∈ 0..=N+1`.
    pub fn node(&self, j: usize) -> f64 {
        j as f64 * self.h()
    }

    /// The grid with half the spacing, `2N + 1` interior nodes.
    pub fn refined(&self) -> Self {
        Self { n: 2 * self.n + 1 }
    }
}

/// Output times and the graded step policy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeSpec {
    /// First and last output time.
    pub t_min: f64,
    pub t_max: f64,
    /// Number of geometrically spaced output times.
    pub outputs: usize,
    /// Growth factor of consecutive steps.
    pub ratio: f64,
    /// The first step is `t_min / start_divisor`.
    pub start_divisor: f64,
}

impl Default for TimeSpec {
    fn default() -> Self {
        Self { t_min: 1e-5, t_max: 1e-2, outputs: 40, ratio: 1.01, start_divisor: 50.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Step {
    dt: f64,
    output: bool,
}

impl TimeSpec {
    fn validate(&self) -> Result<()> {
        let ok = self.t_min > 0.0
            && self.t_max > self.t_min
            && self.outputs >= 2
            && self.ratio >= 1.0
            && self.start_divisor >= 1.0
            && self.t_max.is_finite();
        if !ok {
            return Err(Error::InvalidParameter(format!("bad time settings {self:?}")));
        }
        Ok(())
    }

    /// `t_min·(t_max/t_min)^{i/(outputs−1)}`.
    pub fn output_times(&self) -> Vec<f64> {
        let q = (self.t_max / self.t_min).ln() / (self.outputs - 1) as f64;
        (0..self.outputs)
            .map(|i| if i + 1 == self.outputs { self.t_max } else { self.t_min * (q * i as f64).exp() })
            .collect()
    }

    /// Geometric steps, clipped so that each output time is hit exactly.
    fn steps(&self) -> Vec<Step> {
        let mut steps = Vec::new();
        let mut t = 0.0;
        let mut dt = self.t_min / self.start_divisor;
        for target in self.output_times() {
            loop {
                let left = target - t;
                if dt >= left * (1.0 - 1e-12) {
                    steps.push(Step { dt: left, output: true });
                    t = target;
                    dt *= self.ratio;
                    break;
                }
                steps.push(Step { dt, output: false });
                t += dt;
                dt *= self.ratio;
            }
        }
        steps
    }

    pub fn step_count(&self) -> usize {
        self.steps().len()
    }
}

/// How `ℬ` is imposed.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundarySpec {
    /// `Π_A⁺u = 0`, `Π_A⁺Pu = 0`.
    Spectral,
    /// `Ξ₊u = 0`, `Ξ₋(∇^D_{e_m} + S)u = 0`.
    Mixed(BoundaryEndo),
}

impl BoundarySpec {
    fn label(&self) -> &'static str {
        match self {
            BoundarySpec::Spectral => "spectral",
            BoundarySpec::Mixed(_) => "mixed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverMetadata {
    /// Interior nodes of the base grid (0 for closed models).
    pub n: usize,
    pub richardson: bool,
    pub boundary: String,
    pub time: TimeSpec,
    pub steps: usize,
    pub modes: usize,
}

/// `(t_j, β(t_j))`, starting with `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatContentCurve {
    pub times: Vec<f64>,
    pub values: Vec<C64>,
    pub meta: SolverMetadata,
}

impl HeatContentCurve {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, C64)> + '_ {
        self.times.iter().copied().zip(self.values.iter().copied())
    }
}

/// Constraint rows at one end: `R u = 0` and `T u′ + V u = 0`.
struct ConstraintRows {
    r: CMat,
    t: CMat,
    v: CMat,
    rank_r: usize,
}

fn constraint_rows(
    model: &DiracModel,
    spec: &BoundarySpec,
    cache: &ProjectorCache,
    comp: Component,
    k: &[i64],
) -> Result<ConstraintRows> {
    let r = comp.r();
    match spec {
        BoundarySpec::Spectral => {
            let entry =
                cache.get(comp, k).ok_or_else(|| Error::InvalidModel(format!("no projector for {comp} mode {k:?}")))?;
            let pi = &entry.pi.proj;
            Ok(ConstraintRows {
                r: pi.clone(),
                t: pi * model.gamma_m(),
                v: pi * model.tangential_part(k).eval(r),
                rank_r: entry.pi.rank,
            })
        }
        BoundarySpec::Mixed(s) => {
            let eps = comp.epsilon();
            let (xp, xm) = (xi(model, true), xi(model, false));
            let w = model.natural_radial_connection().eval(r);
            // Ξ₊ is a projection, so its rank is its trace
            let rank_r = xp.trace().re.round() as usize;
            Ok(ConstraintRows { r: xp, t: &xm * c(eps), v: &xm * (w * c(eps) + s.at(comp)), rank_r })
        }
    }
}

/// `u_∂ = E₁u_near + E₂u_next` from the constraint rows and the stencil
/// `u_∂′ ≈ (a₀u_∂ + a₁u_near + a₂u_next)/(2h)`.
fn eliminate(rows: &ConstraintRows, comp: Component, h: f64, a: [f64; 3]) -> Result<[CMat; 2]> {
    let l = rows.r.nrows();
    if 2 * rows.rank_r != l {
        return Err(Error::ConstraintCount { component: comp, rank: 2 * rows.rank_r, expected: l });
    }
    let mut m = CMat::zeros(2 * l, l);
    m.view_mut((0, 0), (l, l)).copy_from(&rows.r);
    m.view_mut((l, 0), (l, l)).copy_from(&(&rows.t * c(a[0]) + &rows.v * c(2.0 * h)));
    let svd = m.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let ratio = if smax > 0.0 { smin / smax } else { 0.0 };
    if ratio < CONSTRAINT_RATIO_TOL {
        return Err(Error::SingularConstraint { component: comp, ratio });
    }
    let solve = |ai: f64| -> Result<CMat> {
        let mut rhs = CMat::zeros(2 * l, l);
        rhs.view_mut((l, 0), (l, l)).copy_from(&(&rows.t * c(-ai)));
        svd.solve(&rhs, smax * 1e-14).map_err(|_| Error::Singular("boundary elimination"))
    };
    Ok([solve(a[1])?, solve(a[2])?])
}

/// One Fourier mode: discretized `D_k` with boundary values eliminated.
struct ModeSystem {
    a: BlockTridiag,
    left: [CMat; 2],
    right: [CMat; 2],
    /// `φ_k` at the interior nodes, flat.
    init: Vec<C64>,
    /// Row vectors `w_j g(r_j) ρ_{−k}(r_j)ᵀ`, `j = 0..=N+1`.
    weights: Vec<CMat>,
}

impl ModeSystem {
    /// `β_k` from the interior values, boundary values reconstructed.
    fn pairing(&self, interior: &[C64]) -> C64 {
        let l = self.a.block_size();
        let n = interior.len() / l;
        let node = |j: usize| CMat::from_column_slice(l, 1, &interior[j * l..(j + 1) * l]);
        let u0 = &self.left[0] * node(0) + &self.left[1] * node(1);
        let un = &self.right[0] * node(n - 1) + &self.right[1] * node(n - 2);
        let mut total = (&self.weights[0] * u0)[(0, 0)] + (&self.weights[n + 1] * un)[(0, 0)];
        for j in 0..n {
            let w = &self.weights[j + 1];
            total += (0..l).map(|i| w[(0, i)] * interior[j * l + i]).sum::<C64>();
        }
        total
    }
}

fn build_mode(
    model: &DiracModel,
    spec: &BoundarySpec,
    cache: &ProjectorCache,
    grid: RadialGrid,
    phi: &Field,
    rho: &DualField,
    k: &Mode,
) -> Result<ModeSystem> {
    let l = model.rank();
    let n = grid.interior();
    let h = grid.h();
    let (c1, c0) = laplace_coefficients(model, k)?;
    let id = eye(l);
    let mut lower = Vec::with_capacity(n);
    let mut diag = Vec::with_capacity(n);
    let mut upper = Vec::with_capacity(n);
    for j in 1..=n {
        let r = grid.node(j);
        let c1r = c1.eval(r) * c(1.0 / (2.0 * h));
        lower.push(&id * c(-1.0 / (h * h)) - &c1r);
        diag.push(&id * c(2.0 / (h * h)) + c0.eval(r));
        upper.push(&id * c(-1.0 / (h * h)) + c1r);
    }
    let left =
        eliminate(&constraint_rows(model, spec, cache, Component::Inner, k)?, Component::Inner, h, [-3.0, 4.0, -1.0])?;
    let right =
        eliminate(&constraint_rows(model, spec, cache, Component::Outer, k)?, Component::Outer, h, [3.0, -4.0, 1.0])?;
    // fold u_0 into row 1 and u_{N+1} into row N
    let l0 = lower[0].clone();
    diag[0] += &l0 * &left[0];
    upper[0] += &l0 * &left[1];
    let un = upper[n - 1].clone();
    diag[n - 1] += &un * &right[0];
    lower[n - 1] += &un * &right[1];

    let init = (1..=n).flat_map(|j| phi.eval(k, grid.node(j)).iter().copied().collect::<Vec<_>>()).collect();
    let km = negated(k);
    let vol = model.torus_volume();
    let weights = (0..=n + 1)
        .map(|j| {
            let r = grid.node(j);
            let w = if j == 0 || j == n + 1 { 0.5 * h } else { h };
            rho.eval(&km, r).transpose() * c(w * model.density(r) * vol)
        })
        .collect();
    Ok(ModeSystem { a: BlockTridiag::from_blocks(&lower, &diag, &upper), left, right, init, weights })
}

fn run_mode(sys: &ModeSystem, steps: &[Step], initial: C64) -> Result<Vec<C64>> {
    let mut out = vec![initial];
    let mut u = sys.init.clone();
    let mut ws = Workspace::default();
    for step in steps {
        sys.a.crank_nicolson_step(&mut u, step.dt, &mut ws)?;
        if step.output {
            out.push(sys.pairing(&u));
        }
    }
    Ok(out)
}

fn check_fields(model_rank: usize, phi: &Field, rho: &DualField) -> Result<()> {
    if phi.rank() != model_rank || rho.rank() != model_rank {
        return Err(Error::DimensionMismatch(format!(
            "field ranks ({}, {}) on a model of rank {model_rank}",
            phi.rank(),
            rho.rank()
        )));
    }
    Ok(())
}

fn sum_modes(per_mode: Vec<Vec<C64>>, len: usize) -> Vec<C64> {
    let mut total = vec![C64::new(0.0, 0.0); len];
    for values in per_mode {
        for (t, v) in total.iter_mut().zip(values) {
            *t += v;
        }
    }
    total
}

/// `β(t)` on one grid, without extrapolation.
pub fn solve_heat(
    model: &DiracModel,
    phi: &Field,
    rho: &DualField,
    spec: &BoundarySpec,
    grid: RadialGrid,
    time: &TimeSpec,
) -> Result<HeatContentCurve> {
    check_fields(model.rank(), phi, rho)?;
    time.validate()?;
    let modes: Vec<Mode> = phi.modes().map(|(k, _)| k.clone()).collect();
    for k in &modes {
        model.check_mode(k)?;
    }
    let cache = match spec {
        BoundarySpec::Spectral => ProjectorCache::build(model, &modes, DEFAULT_GAP_TOL)?,
        BoundarySpec::Mixed(_) => ProjectorCache::default(),
    };
    let steps = time.steps();
    let per_mode: Vec<Vec<C64>> = modes
        .par_iter()
        .map(|k| {
            let sys = build_mode(model, spec, &cache, grid, phi, rho, k)?;
            // exact trapezoid pairing of φ itself, boundary values included
            let initial: C64 =
                (0..=grid.interior() + 1).map(|j| (&sys.weights[j] * phi.eval(k, grid.node(j)))[(0, 0)]).sum();
            run_mode(&sys, &steps, initial)
        })
        .collect::<Result<_>>()?;
    let mut times = vec![0.0];
    times.extend(time.output_times());
    let values = sum_modes(per_mode, times.len());
    Ok(HeatContentCurve {
        times,
        values,
        meta: SolverMetadata {
            n: grid.interior(),
            richardson: false,
            boundary: spec.label().into(),
            time: time.clone(),
            steps: steps.len(),
            modes: modes.len(),
        },
    })
}

/// `(4β_{h/2} − β_h)/3` from grids with `N` and `2N + 1` interior nodes.
pub fn solve_heat_extrapolated(
    model: &DiracModel,
    phi: &Field,
    rho: &DualField,
    spec: &BoundarySpec,
    grid: RadialGrid,
    time: &TimeSpec,
) -> Result<HeatContentCurve> {
    let (coarse, fine) = rayon::join(
        || solve_heat(model, phi, rho, spec, grid, time),
        || solve_heat(model, phi, rho, spec, grid.refined(), time),
    );
    let (coarse, fine) = (coarse?, fine?);
    let values = coarse.values.iter().zip(&fine.values).map(|(a, b)| (b * 4.0 - a) / 3.0).collect();
    Ok(HeatContentCurve {
        times: coarse.times,
        values,
        meta: SolverMetadata { richardson: true, steps: coarse.meta.steps, ..coarse.meta },
    })
}

/// Heat flow on a closed torus: `u_k′ = −D_k u_k` per mode, Crank–Nicolson
/// on the same time mesh. Fields must be constant in `r`.
pub fn solve_closed(model: &ClosedModel, phi: &Field, rho: &DualField, time: &TimeSpec) -> Result<HeatContentCurve> {
    check_fields(model.rank(), phi, rho)?;
    time.validate()?;
    let steps = time.steps();
    let l = model.rank();
    let mut per_mode = Vec::new();
    let mut modes = 0;
    for (k, p) in phi.modes() {
        model.check_mode(k)?;
        if p.degree().unwrap_or(0) > 0 {
            return Err(Error::InvalidModel(format!("closed-model field in mode {k:?} depends on r")));
        }
        modes += 1;
        let d = model.d_symbol(k);
        let q = rho.eval(&negated(k), 0.0).transpose() * c(model.torus_volume());
        let mut u = p.eval(0.0);
        let mut values = vec![(&q * &u)[(0, 0)]];
        for step in &steps {
            let half = &d * c(0.5 * step.dt);
            let lhs = eye(l) + &half;
            let rhs = (eye(l) - &half) * &u;
            u = lhs.lu().solve(&rhs).ok_or(Error::Singular("closed Crank–Nicolson step"))?;
            if step.output {
                values.push((&q * &u)[(0, 0)]);
            }
        }
        per_mode.push(values);
    }
    let mut times = vec![0.0];
    times.extend(time.output_times());
    let values = sum_modes(per_mode, times.len());
    Ok(HeatContentCurve {
        times,
        values,
        meta: SolverMetadata {
            n: 0,
            richardson: false,
            boundary: "closed".into(),
            time: time.clone(),
            steps: steps.len(),
            modes,
        },
    })
}

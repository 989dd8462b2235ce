//! Sections `φ ∈ C^∞(V)` and `ρ ∈ C^∞(V*)` as finite Fourier sums
//! `Σ_k e^{ik·θ} p_k(r)` with `ℂ^ℓ`-valued polynomial coefficients.
//!
//! Both kinds store columns: a covector is its coordinate column in the dual
//! basis, so `⟨φ, ρ⟩ = ρᵀφ`. Mode maps are ordered, which fixes the summation
//! order of every reduction over modes.

use std::collections::BTreeMap;
use std::marker::PhantomData;

use crate::model::{Component, DiracModel};
use crate::poly::MatPoly;
use crate::quadrature::radial_rule;
use crate::{CMat, Error, Result, C64};

/// Fourier mode `k ∈ ℤ^{m−1}` (or `ℤ^m` on a closed torus).
pub type Mode = Vec<i64>;

/// Maximum radial degree accepted by the constructors.
pub const MAX_DEGREE: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Primal;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dual;

/// Mode sum with a marker for the bundle it lives in.
#[derive(Debug)]
pub struct ModeField<R> {
    rank: usize,
    modes: BTreeMap<Mode, MatPoly>,
    _role: PhantomData<R>,
}

impl<R> Clone for ModeField<R> {
    fn clone(&self) -> Self {
        Self { rank: self.rank, modes: self.modes.clone(), _role: PhantomData }
    }
}

impl<R> PartialEq for ModeField<R> {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.modes == other.modes
    }
}

/// Section of `V`.
pub type Field = ModeField<Primal>;
/// Section of `V*`.
pub type DualField = ModeField<Dual>;

pub fn negated(k: &[i64]) -> Mode {
    k.iter().map(|x| -x).collect()
}

impl<R> ModeField<R> {
    pub fn zero(rank: usize) -> Self {
        Self { rank, modes: BTreeMap::new(), _role: PhantomData }
    }

    /// A single mode with constant value `v`.
    pub fn constant(k: Mode, v: &[C64]) -> Self {
        let col = CMat::from_column_slice(v.len(), 1, v);
        Self::zero(v.len()).with_mode(k, MatPoly::constant(col))
    }

    /// Real constant vector, convenient for fixtures.
    pub fn constant_real(k: Mode, v: &[f64]) -> Self {
        let v: Vec<C64> = v.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::constant(k, &v)
    }

    /// `coeffs[d]` is the `ℂ^ℓ` coefficient of `r^d`.
    pub fn from_coeffs(k: Mode, coeffs: &[Vec<C64>]) -> Result<Self> {
        let rank = coeffs.first().map_or(0, Vec::len);
        if rank == 0 || coeffs.iter().any(|c| c.len() != rank) {
            return Err(Error::DimensionMismatch("radial coefficients must be non-empty ℓ-vectors".into()));
        }
        if coeffs.len() > MAX_DEGREE + 1 {
            return Err(Error::DimensionMismatch(format!("radial degree {} exceeds {MAX_DEGREE}", coeffs.len() - 1)));
        }
        let mats = coeffs.iter().map(|c| CMat::from_column_slice(rank, 1, c)).collect();
        Ok(Self::zero(rank).with_mode(k, MatPoly::from_coeffs(rank, 1, mats)))
    }

    /// Adds `p` to mode `k`.
    pub fn with_mode(mut self, k: Mode, p: MatPoly) -> Self {
        self.add_mode(k, p);
        self
    }

    pub fn add_mode(&mut self, k: Mode, p: MatPoly) {
        assert_eq!(p.shape(), (self.rank, 1), "mode coefficient must be ℓ × 1");
        let sum = match self.modes.remove(&k) {
            Some(old) => old.add(&p),
            None => p,
        };
        if !sum.is_zero() {
            self.modes.insert(k, sum);
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn modes(&self) -> impl Iterator<Item = (&Mode, &MatPoly)> {
        self.modes.iter()
    }

    pub fn mode(&self, k: &[i64]) -> Option<&MatPoly> {
        self.modes.get(k)
    }

    pub fn is_zero(&self) -> bool {
        self.modes.is_empty()
    }

    /// Value of mode `k` at `r` (zero if the mode is absent).
    pub fn eval(&self, k: &[i64], r: f64) -> CMat {
        self.modes.get(k).map_or_else(|| CMat::zeros(self.rank, 1), |p| p.eval(r))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.rank, other.rank, "field rank mismatch");
        let mut out = self.clone();
        for (k, p) in &other.modes {
            out.add_mode(k.clone(), p.clone());
        }
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|_, p| p.scale(s))
    }

    fn map(&self, f: impl Fn(&Mode, &MatPoly) -> MatPoly) -> Self {
        let mut out = Self::zero(self.rank);
        for (k, p) in &self.modes {
            out.add_mode(k.clone(), f(k, p));
        }
        out
    }

    /// Apply a per-mode linear map that may fail (operators of the model).
    pub fn try_map_modes<F>(&self, rank: usize, f: F) -> Result<Self>
    where
        F: Fn(&Mode, &MatPoly) -> Result<MatPoly>,
    {
        let mut out = Self::zero(rank);
        for (k, p) in &self.modes {
            out.add_mode(k.clone(), f(k, p)?);
        }
        Ok(out)
    }

    /// `∂_r`, exact.
    pub fn d_r(&self) -> Self {
        self.map(|_, p| p.derivative())
    }

    /// `∂_{θ_a}` (zero-based `a`): multiplies mode `k` by `ik_a`.
    pub fn d_theta(&self, a: usize) -> Self {
        self.map(|k, p| p.scale(C64::new(0.0, k[a] as f64)))
    }

    pub fn max_coeff(&self) -> f64 {
        self.modes.values().map(MatPoly::max_coeff).fold(0.0, f64::max)
    }

    /// Reinterpret as a section of the other bundle (used when a covector
    /// field is fed to the dual model as its primal section).
    pub fn retag<S>(self) -> ModeField<S> {
        ModeField { rank: self.rank, modes: self.modes, _role: PhantomData }
    }

    /// Embed as a `θ_m`-independent section of `V ⊕ V` over `M × S¹`:
    /// mode `k ↦ (k, 0)`, value `v ↦ s·(v, 0)`.
    pub fn lift(&self, s: f64) -> Self {
        let mut out = Self::zero(2 * self.rank);
        for (k, p) in &self.modes {
            let mut k2 = k.clone();
            k2.push(0);
            let coeffs = p
                .coeffs()
                .iter()
                .map(|cf| {
                    let mut v = CMat::zeros(2 * self.rank, 1);
                    v.view_mut((0, 0), (self.rank, 1)).copy_from(&(cf * C64::new(s, 0.0)));
                    v
                })
                .collect();
            out.add_mode(k2, MatPoly::from_coeffs(2 * self.rank, 1, coeffs));
        }
        out
    }
}

fn check_pair(phi: &Field, rho: &DualField, model: &DiracModel) -> Result<()> {
    if phi.rank() != model.rank() || rho.rank() != model.rank() {
        return Err(Error::DimensionMismatch(format!(
            "fields of rank {}/{} on a model of rank {}",
            phi.rank(),
            rho.rank(),
            model.rank()
        )));
    }
    for k in phi.modes.keys().chain(rho.modes.keys()) {
        if k.len() != model.m() - 1 {
            return Err(Error::DimensionMismatch(format!("mode {k:?} on a model with m = {}", model.m())));
        }
    }
    Ok(())
}

/// `∫_M ⟨φ, ρ⟩ dx = (2π)^{m−1} Σ_k ∫₀¹ ρ_{−k}ᵀφ_k g dr`.
pub fn integrate_m(phi: &Field, rho: &DualField, model: &DiracModel) -> Result<C64> {
    check_pair(phi, rho, model)?;
    let rule = radial_rule();
    let mut total = C64::new(0.0, 0.0);
    for (k, p) in phi.modes() {
        if let Some(q) = rho.mode(&negated(k)) {
            let integrand = q.transpose().mul(p);
            total += rule.integrate(|r| integrand.eval(r)[(0, 0)] * model.density(r));
        }
    }
    Ok(total * model.torus_volume())
}

/// Mode-summed pointwise pairing at one boundary component, before the
/// torus measure is applied.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BoundaryPairing {
    pub values: [C64; 2],
}

impl BoundaryPairing {
    pub fn at(comp: Component, v: C64) -> Self {
        let mut values = [C64::new(0.0, 0.0); 2];
        values[comp.index()] = v;
        Self { values }
    }
}

/// `∫_{∂M} (…) dy`: the torus measure `(2π)^{m−1}` times each component's
/// pointwise pairing (`g = 1` on the boundary). Returns the per-component
/// contributions.
pub fn integrate_boundary(v: &BoundaryPairing, model: &DiracModel) -> [C64; 2] {
    v.values.map(|x| x * model.torus_volume())
}

/// `Σ_k f(k, φ_k(r), ρ_{−k}(r))` over modes of `φ` with a partner in `ρ`.
pub fn pair_modes<F>(phi: &Field, rho: &DualField, r: f64, mut f: F) -> Result<C64>
where
    F: FnMut(&Mode, &CMat, &CMat) -> Result<C64>,
{
    let mut total = C64::new(0.0, 0.0);
    for (k, p) in phi.modes() {
        if let Some(q) = rho.mode(&negated(k)) {
            total += f(k, &p.eval(r), &q.eval(r))?;
        }
    }
    Ok(total)
}

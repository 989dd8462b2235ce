//! Closed-form heat content coefficients β₀, β₁, β₂ and the identities
//! relating them.
//!
//! Boundary integrals are `(2π)^{m−1}` times mode sums of pointwise pairings.
//! A tangential operator acting on the `ρ` side of a pairing is moved to the
//! `φ` side as a transpose: `⟨Ã^#φ, ρ⟩ = ρ_{−k}ᵀ(A^#_{−k})ᵀφ_k`.

use std::f64::consts::FRAC_2_SQRT_PI;

use crate::fields::{integrate_m, negated, pair_modes, DualField, Field, Mode};
use crate::linalg::{c, eye};
use crate::model::{ClosedModel, Component, DiracModel};
use crate::spectral::{
    apply_b, apply_d, apply_p, apply_p_dual, normal_derivative, normal_derivative_dual, sharp_psi, xi, BoundaryEndo,
    ProjectorCache, DEFAULT_GAP_TOL,
};
use crate::{CMat, Error, Result, C64};

/// Universal constants of the β₁ and β₂ boundary integrands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniversalConstants {
    /// β₁ weight, `−2/√π`.
    pub c0: f64,
    /// coefficient of `A + Ã^#`
    pub c2: f64,
    /// coefficient of `L_aa`
    pub c3: f64,
    /// coefficient of `γ_mψ_P − ψ_Pγ_m`
    pub c4: f64,
    /// coefficient of `ψ_A + ψ̃_{A^#}`
    pub c5: f64,
}

pub const CONSTANTS: UniversalConstants =
    UniversalConstants { c0: -FRAC_2_SQRT_PI, c2: 0.5, c3: 0.5, c4: -0.5, c5: -0.5 };

impl UniversalConstants {
    /// Residuals of the linear relations obtained by matching the flat
    /// twisted model against the mixed formula:
    /// `2c₂ + 2c₅ = 0`, `2c₅ − 2c₄ = 0`, `2c₄ = −1`.
    pub fn flat_relations(&self) -> [f64; 3] {
        [2.0 * self.c2 + 2.0 * self.c5, 2.0 * self.c5 - 2.0 * self.c4, 2.0 * self.c4 + 1.0]
    }
}

/// A coefficient with its interior and per-component boundary parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientResult {
    pub n: usize,
    pub value: C64,
    pub interior: C64,
    pub boundary: [C64; 2],
}

impl CoefficientResult {
    fn new(n: usize, interior: C64, boundary: [C64; 2]) -> Self {
        Self { n, value: interior + boundary[0] + boundary[1], interior, boundary }
    }

    /// `|value − (interior + Σ boundary)|`, zero by construction.
    pub fn bookkeeping_defect(&self) -> f64 {
        (self.value - self.interior - self.boundary[0] - self.boundary[1]).norm()
    }
}

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

fn scalar(m: CMat) -> C64 {
    m[(0, 0)]
}

/// Weight-one endomorphism of the β₂ boundary integrand on mode `k`:
/// `c₂(A + Ã^#) + c₃L_aa + c₄(γ_mψ_P − ψ_Pγ_m) + c₅(ψ_A + ψ̃_{A^#})`.
pub fn weight_one_endo(
    model: &DiracModel,
    cache: &ProjectorCache,
    comp: Component,
    k: &[i64],
    consts: &UniversalConstants,
) -> Result<CMat> {
    let l = model.rank();
    let entry = cache.get(comp, k).ok_or_else(|| missing(comp, k))?;
    let partner = cache.get(comp, &negated(k)).ok_or_else(|| missing(comp, &negated(k)))?;
    let gm = model.inward_gamma(comp);
    let psi_p = model.psi_p().eval(comp.r());
    let psi_a = model.psi_a(comp);
    let psi_sharp = sharp_psi(model, comp)?;
    Ok((&entry.a + partner.sharp.transpose()) * c(consts.c2)
        + eye(l) * c(consts.c3 * model.second_ff(comp))
        + (&gm * &psi_p - &psi_p * &gm) * c(consts.c4)
        + (psi_a + psi_sharp.transpose()) * c(consts.c5))
}

fn missing(comp: Component, k: &[i64]) -> Error {
    Error::InvalidModel(format!("no projector cached for {comp} mode {k:?}"))
}

/// βₙ under the spectral boundary operator `ℬ = Π_A⁺ ⊕ Π_A⁺P`, `n ≤ 2`.
pub fn beta_spectral(n: usize, phi: &Field, rho: &DualField, model: &DiracModel) -> Result<CoefficientResult> {
    beta_spectral_with(n, phi, rho, model, DEFAULT_GAP_TOL, &CONSTANTS)
}

pub fn beta_spectral_with(
    n: usize,
    phi: &Field,
    rho: &DualField,
    model: &DiracModel,
    tol: f64,
    consts: &UniversalConstants,
) -> Result<CoefficientResult> {
    if n > 2 {
        return Err(Error::UnsupportedIndex(n));
    }
    if n == 0 {
        return Ok(CoefficientResult::new(0, integrate_m(phi, rho, model)?, [zero(); 2]));
    }
    let vol = model.torus_volume();
    let cache = ProjectorCache::for_pair(model, phi, rho, tol)?;
    let proj = |comp: Component, k: &[i64]| cache.get(comp, k).ok_or_else(|| missing(comp, k));
    if n == 1 {
        let mut boundary = [zero(); 2];
        for comp in Component::ALL {
            boundary[comp.index()] = pair_modes(phi, rho, comp.r(), |k, pk, qk| {
                let pi = &proj(comp, k)?.pi.proj;
                let pi_sharp = &proj(comp, &negated(k))?.pi_sharp.proj;
                Ok(scalar(qk.transpose() * pi_sharp.transpose() * pi * pk))
            })? * (consts.c0 * vol);
        }
        return Ok(CoefficientResult::new(1, zero(), boundary));
    }

    let d_phi = apply_d(model, phi)?;
    let interior = -integrate_m(&d_phi, rho, model)?;
    let p_phi = apply_p(model, phi)?;
    let pt_rho = apply_p_dual(model, rho)?;
    let mut boundary = [zero(); 2];
    for comp in Component::ALL {
        let r = comp.r();
        let gm = model.inward_gamma(comp);
        boundary[comp.index()] = pair_modes(phi, rho, r, |k, pk, qk| {
            let km = negated(k);
            let pi = &proj(comp, k)?.pi.proj;
            let pi_sharp = &proj(comp, &km)?.pi_sharp.proj;
            let p_val = p_phi.eval(k, r);
            let pt_val = pt_rho.eval(&km, r);
            let w = weight_one_endo(model, &cache, comp, k, consts)?;
            let t1 = -scalar(qk.transpose() * &gm * pi * p_val);
            let t2 = -scalar(pt_val.transpose() * &gm * pi * pk);
            let t3 = scalar((pi_sharp * qk).transpose() * w * pi * pk);
            Ok(t1 + t2 + t3)
        })? * vol;
    }
    Ok(CoefficientResult::new(2, interior, boundary))
}

/// βₙ under the mixed operator `ℬ_{γ₀,S} = Ξ₋(∇^D_{e_m} + S) ⊕ Ξ₊`, `n ≤ 2`.
/// `∇^D` is the connection determined by `D` (see
/// [`DiracModel::natural_radial_connection`]).
pub fn beta_mixed(
    n: usize,
    phi: &Field,
    rho: &DualField,
    model: &DiracModel,
    s: &BoundaryEndo,
) -> Result<CoefficientResult> {
    if n > 2 {
        return Err(Error::UnsupportedIndex(n));
    }
    if s.s.iter().any(|m| m.shape() != (model.rank(), model.rank())) {
        return Err(Error::DimensionMismatch("S must be ℓ × ℓ".into()));
    }
    if n == 0 {
        return Ok(CoefficientResult::new(0, integrate_m(phi, rho, model)?, [zero(); 2]));
    }
    let vol = model.torus_volume();
    let (xp, xm) = (xi(model, true), xi(model, false));
    for (k, _) in phi.modes().chain(rho.modes()) {
        model.check_mode(k)?;
    }
    if n == 1 {
        let mut boundary = [zero(); 2];
        for comp in Component::ALL {
            // ⟨Ξ₊φ, Ξ̃₊ρ⟩ = ρᵀΞ₊Ξ₊φ
            boundary[comp.index()] =
                pair_modes(phi, rho, comp.r(), |_, pk, qk| Ok(scalar(qk.transpose() * &xp * &xp * pk)))?
                    * (CONSTANTS.c0 * vol);
        }
        return Ok(CoefficientResult::new(1, zero(), boundary));
    }
    let interior = -integrate_m(&apply_d(model, phi)?, rho, model)?;
    let dphi = phi.d_r();
    let drho = rho.d_r();
    let mut boundary = [zero(); 2];
    for comp in Component::ALL {
        let r = comp.r();
        let l_aa = model.second_ff(comp);
        boundary[comp.index()] = pair_modes(phi, rho, r, |k, pk, qk| {
            let km = negated(k);
            let nabla_phi = normal_derivative(model, comp, pk, &dphi.eval(k, r)) + s.at(comp) * pk;
            let nabla_rho = normal_derivative_dual(model, comp, qk, &drho.eval(&km, r));
            let t1 = scalar(qk.transpose() * &xm * nabla_phi);
            let t2 = scalar(qk.transpose() * &xp * pk) * (0.5 * l_aa);
            let t3 = -scalar(nabla_rho.transpose() * &xp * pk);
            Ok(t1 + t2 + t3)
        })? * vol;
    }
    Ok(CoefficientResult::new(2, interior, boundary))
}

/// `β_n` on a closed torus: `β_{2j} = (−1)^j/j! ∫⟨D^jφ, ρ⟩`, odd ones vanish.
/// Fields must be constant in `r` (there is no radial direction).
pub fn beta_closed(n: usize, phi: &Field, rho: &DualField, model: &ClosedModel) -> Result<C64> {
    if phi.rank() != model.rank() || rho.rank() != model.rank() {
        return Err(Error::DimensionMismatch("field rank differs from the closed model".into()));
    }
    for (k, p) in phi.modes().chain(rho.modes()) {
        model.check_mode(k)?;
        if p.degree().unwrap_or(0) > 0 {
            return Err(Error::InvalidModel(format!("closed-model field in mode {k:?} depends on r")));
        }
    }
    if n % 2 == 1 {
        return Ok(zero());
    }
    let j = n / 2;
    let factorial: f64 = (1..=j).map(|i| i as f64).product();
    let sign = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
    let total = pair_modes(phi, rho, 0.0, |k, pk, qk| {
        let d = model.d_symbol(k);
        let mut v = pk.clone();
        for _ in 0..j {
            v = &d * v;
        }
        Ok(scalar(qk.transpose() * v))
    })?;
    Ok(total * (sign / factorial * model.torus_volume()))
}

/// Both sides of the Green formula
/// `∫⟨Dφ,ρ⟩ − ⟨φ,D̃ρ⟩ = −∫_∂ {⟨γ_mΠ⁺Pφ,ρ⟩ + ⟨Pφ,γ̃_mΠ^#ρ⟩ + ⟨φ,γ̃_mΠ^#P̃ρ⟩ + ⟨γ_mΠ⁺φ,P̃ρ⟩}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenSides {
    pub interior: C64,
    pub boundary: C64,
}

impl GreenSides {
    pub fn defect(&self) -> f64 {
        (self.interior - self.boundary).norm()
    }
}

pub fn green_sides(phi: &Field, rho: &DualField, model: &DiracModel) -> Result<GreenSides> {
    let d_phi = apply_d(model, phi)?;
    let dt_rho = apply_p_dual(model, &apply_p_dual(model, rho)?)?;
    let interior = integrate_m(&d_phi, rho, model)? - integrate_m(phi, &dt_rho, model)?;
    let cache = ProjectorCache::for_pair(model, phi, rho, DEFAULT_GAP_TOL)?;
    let p_phi = apply_p(model, phi)?;
    let pt_rho = apply_p_dual(model, rho)?;
    let mut boundary = zero();
    for comp in Component::ALL {
        let r = comp.r();
        let gm = model.inward_gamma(comp);
        let gt = gm.transpose();
        boundary -= pair_modes(phi, rho, r, |k, pk, qk| {
            let km = negated(k);
            let pi = &cache.get(comp, k).ok_or_else(|| missing(comp, k))?.pi.proj;
            let pi_sharp = &cache.get(comp, &km).ok_or_else(|| missing(comp, &km))?.pi_sharp.proj;
            let p_val = p_phi.eval(k, r);
            let pt_val = pt_rho.eval(&km, r);
            Ok(scalar(qk.transpose() * &gm * pi * &p_val)
                + scalar((&gt * pi_sharp * qk).transpose() * &p_val)
                + scalar((&gt * pi_sharp * &pt_val).transpose() * pk)
                + scalar(pt_val.transpose() * &gm * pi * pk))
        })? * model.torus_volume();
    }
    Ok(GreenSides { interior, boundary })
}

/// `|LHS − RHS|` of the Green formula.
pub fn greens_defect(phi: &Field, rho: &DualField, model: &DiracModel) -> Result<f64> {
    Ok(green_sides(phi, rho, model)?.defect())
}

/// `|βₙ(φ, ρ, D, ℬ) − βₙ(ρ, φ, D̃, ℬ̃)|`.
pub fn symmetry_defect(n: usize, phi: &Field, rho: &DualField, model: &DiracModel) -> Result<f64> {
    let forward = beta_spectral(n, phi, rho, model)?.value;
    let dual = model.dual();
    let backward = beta_spectral(n, &rho.clone().retag(), &phi.clone().retag(), &dual)?.value;
    Ok((forward - backward).norm())
}

/// Largest boundary residual `‖ℬφ‖` that still counts as `ℬφ = 0`.
pub const COMPATIBILITY_TOL: f64 = 1e-10;

/// `|β₂(φ, ρ) + β₀(Dφ, ρ)|`, requiring `ℬφ = 0`.
pub fn recursion_defect(phi: &Field, rho: &DualField, model: &DiracModel) -> Result<f64> {
    let residual = apply_b(model, phi, DEFAULT_GAP_TOL)?.iter().map(|r| r.max()).fold(0.0, f64::max);
    if residual > COMPATIBILITY_TOL * phi.max_coeff().max(1.0) {
        return Err(Error::BoundaryIncompatible(residual));
    }
    let b2 = beta_spectral(2, phi, rho, model)?.value;
    let b0 = beta_spectral(0, &apply_d(model, phi)?, rho, model)?.value;
    Ok((b2 + b0).norm())
}

/// `|βₙ(flip φ…) − βₙ(φ…)|` for `P ↦ −P`.
pub fn sign_defect(n: usize, phi: &Field, rho: &DualField, model: &DiracModel) -> Result<f64> {
    let a = beta_spectral(n, phi, rho, model)?.value;
    let b = beta_spectral(n, phi, rho, &model.flip_sign())?.value;
    Ok((a - b).norm())
}

/// The model on `M × S¹`.
pub fn lift_dimension(model: &DiracModel) -> DiracModel {
    model.lift()
}

/// `(lift φ, lift ρ/(2π))`.
pub fn lift_pair(phi: &Field, rho: &DualField) -> (Field, DualField) {
    (phi.lift(1.0), rho.lift(1.0 / (2.0 * std::f64::consts::PI)))
}

/// `|βₙ(lift φ, lift ρ/2π, lifted) − βₙ(φ, ρ, model)|`.
pub fn lift_defect(n: usize, phi: &Field, rho: &DualField, model: &DiracModel) -> Result<f64> {
    let (lp, lr) = lift_pair(phi, rho);
    let lifted = beta_spectral(n, &lp, &lr, &lift_dimension(model))?.value;
    Ok((lifted - beta_spectral(n, phi, rho, model)?.value).norm())
}

/// Largest entry of `½W Π_A⁺φ` at the boundary, where `W` is the weight-one
/// endomorphism; vanishes for radial fields on warped models with `δ₁ = 0`.
pub fn degeneracy_defect(phi: &Field, model: &DiracModel, consts: &UniversalConstants) -> Result<f64> {
    let modes: Vec<Mode> = phi.modes().flat_map(|(k, _)| [k.clone(), negated(k)]).collect();
    let cache = ProjectorCache::build(model, &modes, DEFAULT_GAP_TOL)?;
    let mut worst: f64 = 0.0;
    for comp in Component::ALL {
        for (k, _) in phi.modes() {
            let w = weight_one_endo(model, &cache, comp, k, consts)?;
            let pi = &cache.get(comp, k).ok_or_else(|| missing(comp, k))?.pi.proj;
            let v = w * pi * phi.eval(k, comp.r());
            worst = worst.max(crate::linalg::max_abs(&v));
        }
    }
    Ok(worst)
}

/// `β_spectral(full) − (2π)^{m−1}β_mixed(reduced, S = δ₁γ₀)` for radial data
/// on a flat model.
pub fn reduction_defect(n: usize, phi: &Field, rho: &DualField, model: &DiracModel) -> Result<f64> {
    let reduced = model.radial_reduction()?;
    let strip = |k: &Mode| -> Result<Mode> {
        if k.iter().any(|&x| x != 0) {
            return Err(Error::InvalidModel(format!("reduction needs radial data, found mode {k:?}")));
        }
        Ok(Vec::new())
    };
    let mut phi0 = Field::zero(phi.rank());
    for (k, p) in phi.modes() {
        phi0.add_mode(strip(k)?, p.clone());
    }
    let mut rho0 = DualField::zero(rho.rank());
    for (k, p) in rho.modes() {
        rho0.add_mode(strip(k)?, p.clone());
    }
    let s = BoundaryEndo::from_radial(&(model.gamma0() * c(model.delta1())));
    let full = beta_spectral(n, phi, rho, model)?.value;
    let red = beta_mixed(n, &phi0, &rho0, &reduced, &s)?.value;
    Ok((full - red * model.torus_volume()).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::build_rep;
    use crate::model::{assemble_flat_model, assemble_warped_model, WarpProfile};
    use crate::poly::MatPoly;
    use std::f64::consts::PI;

    fn flat1(d1: f64, d2: f64) -> DiracModel {
        assemble_flat_model(1, &build_rep(1), d1, d2, &[]).unwrap()
    }

    fn e(i: usize, l: usize) -> Vec<f64> {
        (0..l).map(|j| if i == j { 1.0 } else { 0.0 }).collect()
    }

    #[test]
    fn constants_table() {
        assert!((CONSTANTS.c0 + 2.0 / PI.sqrt()).abs() < 1e-15);
        assert_eq!((CONSTANTS.c2, CONSTANTS.c3, CONSTANTS.c4, CONSTANTS.c5), (0.5, 0.5, -0.5, -0.5));
        assert_eq!(CONSTANTS.flat_relations(), [0.0; 3]);
    }

    #[test]
    fn flat_m1_plus_sector() {
        let model = flat1(0.0, 1.0);
        let phi = Field::constant_real(vec![], &e(0, 2));
        let rho = DualField::constant_real(vec![], &e(0, 2));
        let b0 = beta_spectral(0, &phi, &rho, &model).unwrap();
        assert!((b0.value - c(1.0)).norm() < 1e-14);
        let b1 = beta_spectral(1, &phi, &rho, &model).unwrap();
        assert!((b1.value.re + 4.0 / PI.sqrt()).abs() < 1e-14);
        assert!((b1.boundary[0] - b1.boundary[1]).norm() < 1e-15);
        let b2 = beta_spectral(2, &phi, &rho, &model).unwrap();
        assert!(b2.value.norm() < 1e-14);
        assert_eq!(b2.bookkeeping_defect(), 0.0);
    }

    #[test]
    fn minus_sector_has_no_boundary_layer() {
        let model = flat1(0.0, 1.0);
        let phi = Field::constant_real(vec![], &e(1, 2));
        let rho = DualField::constant_real(vec![], &e(1, 2));
        assert_eq!(beta_spectral(1, &phi, &rho, &model).unwrap().value, c(0.0));
    }

    #[test]
    fn index_out_of_range() {
        let model = flat1(0.0, 1.0);
        let phi = Field::constant_real(vec![], &e(0, 2));
        let rho = DualField::constant_real(vec![], &e(0, 2));
        assert!(matches!(beta_spectral(3, &phi, &rho, &model), Err(Error::UnsupportedIndex(3))));
    }

    #[test]
    fn zero_delta2_reports_component_and_mode() {
        let model = flat1(0.0, 0.0);
        let phi = Field::constant_real(vec![], &e(0, 2));
        let rho = DualField::constant_real(vec![], &e(0, 2));
        match beta_spectral(1, &phi, &rho, &model) {
            Err(Error::ProjectorAt { component, mode, source }) => {
                assert_eq!(component, Component::Inner);
                assert!(mode.is_empty());
                assert!(matches!(*source, Error::ImaginaryAxisEigenvalue { .. }));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn mixed_matches_spectral_on_flat_m1() {
        let model = flat1(0.5, 1.0);
        let s = BoundaryEndo::from_radial(&(model.gamma0() * c(0.5)));
        let phi =
            Field::from_coeffs(vec![], &[vec![c(1.0), c(0.3)], vec![c(-0.2), c(0.5)], vec![c(0.4), c(0.0)]]).unwrap();
        let rho = DualField::from_coeffs(vec![], &[vec![c(0.7), c(-1.0)], vec![c(0.0), c(0.6)]]).unwrap();
        for n in 0..=2 {
            let a = beta_spectral(n, &phi, &rho, &model).unwrap().value;
            let b = beta_mixed(n, &phi, &rho, &model, &s).unwrap().value;
            assert!((a - b).norm() < 1e-12, "n = {n}: {a} vs {b}");
        }
    }

    #[test]
    fn warped_mixed_matches_spectral_and_has_curvature_term() {
        let model = assemble_warped_model(2, &build_rep(2), &WarpProfile::bump(0.4), 1.0).unwrap();
        let phi = Field::constant_real(vec![0], &e(0, 4));
        let rho = DualField::constant_real(vec![0], &e(0, 4));
        let s = BoundaryEndo::zero(4);
        let spectral = beta_spectral(2, &phi, &rho, &model).unwrap().value;
        let mixed = beta_mixed(2, &phi, &rho, &model, &s).unwrap().value;
        assert!((spectral - mixed).norm() < 1e-12);
        assert!((spectral.re + 0.8 * 2.0 * PI).abs() < 1e-12, "{spectral}");
        let wrong = model.with_curvature_sign(-CURVATURE_SIGN_FOR_TEST);
        let flipped = beta_spectral(2, &phi, &rho, &wrong).unwrap().value;
        assert!(flipped.norm() < 1e-12, "{flipped}");
    }

    const CURVATURE_SIGN_FOR_TEST: f64 = crate::model::CURVATURE_SIGN;

    #[test]
    fn closed_eigenfunction() {
        let closed = ClosedModel::new(build_rep(1), CMat::zeros(2, 2)).unwrap();
        let phi = Field::constant_real(vec![1], &[1.0, 0.0]);
        let rho = DualField::constant_real(vec![-1], &[1.0 / (2.0 * PI), 0.0]);
        let expect = [1.0, 0.0, -1.0, 0.0, 0.5, 0.0, -1.0 / 6.0];
        for (n, &x) in expect.iter().enumerate() {
            assert!((beta_closed(n, &phi, &rho, &closed).unwrap() - c(x)).norm() < 1e-14, "n = {n}");
        }
        let bad = Field::zero(2)
            .with_mode(vec![1], MatPoly::from_coeffs(2, 1, vec![CMat::zeros(2, 1), CMat::from_element(2, 1, c(1.0))]));
        assert!(beta_closed(0, &bad, &rho, &closed).is_err());
    }

    #[test]
    fn green_formula_for_constants() {
        let model = flat1(0.0, 1.0);
        let phi = Field::constant_real(vec![], &[1.0, 2.0]);
        let rho = DualField::constant_real(vec![], &[0.5, -1.0]);
        let sides = green_sides(&phi, &rho, &model).unwrap();
        assert_eq!(sides.interior, c(0.0));
        assert!(sides.boundary.norm() < 1e-15);
    }

    #[test]
    fn recursion_precondition() {
        let model = flat1(0.0, 1.0);
        let phi = Field::from_coeffs(vec![], &[vec![c(0.0), c(0.0)], vec![c(0.0), c(1.0)]]).unwrap();
        let rho = DualField::constant_real(vec![], &[1.0, 1.0]);
        // e₋·r: Ξ₊φ = 0 but Ξ₊Pφ ≠ 0
        assert!(matches!(recursion_defect(&phi, &rho, &model), Err(Error::BoundaryIncompatible(_))));
        // e₋·(r²(1 − r)² + 1)
        let z = vec![c(0.0), c(0.0)];
        let em = |x: f64| vec![c(0.0), c(x)];
        let phi = Field::from_coeffs(vec![], &[em(1.0), z.clone(), em(1.0), em(-2.0), em(1.0)]).unwrap();
        assert!(recursion_defect(&phi, &rho, &model).unwrap() < 1e-10);
        assert!(beta_spectral(1, &phi, &rho, &model).unwrap().value.norm() < 1e-14);
    }

    #[test]
    fn degeneracy_on_warped_radial_model() {
        let model = assemble_warped_model(3, &build_rep(3), &WarpProfile::new(vec![0.0, 0.3, 0.2, -0.5]).unwrap(), 1.0)
            .unwrap();
        let phi = Field::from_coeffs(
            vec![0, 0],
            &[vec![c(1.0), c(0.2), c(-0.4), c(0.3)], vec![c(0.5), c(0.0), c(1.0), c(0.0)]],
        )
        .unwrap();
        assert!(degeneracy_defect(&phi, &model, &CONSTANTS).unwrap() < 1e-12);
        let perturbed = UniversalConstants { c3: 0.4, ..CONSTANTS };
        assert!(degeneracy_defect(&phi, &model, &perturbed).unwrap() > 1e-3);
    }
}

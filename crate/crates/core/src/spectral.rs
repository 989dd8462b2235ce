//! The tangential operator `A`, its dual `A^#`, positive spectral projectors,
//! and the action of `P`, `P̃`, `D` and the boundary operators on fields.
//!
//! On mode `k` at a component with inward sign `ε`:
//!
//! ```text
//! A_k   = −εΘ_mΘ_a(ik_a + ω_a) + ψ_A
//! Ã_k   = −εΘ_mᵀΘ_aᵀ(ik_a − ω_aᵀ) + ψ_Aᵀ        (on covector mode k)
//! A^#_k = γ̃_m Ã_k γ̃_m,   γ̃_m = εΘ_mᵀ
//! ```

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::fields::{negated, DualField, Field, Mode};
use crate::linalg::{c, eigenvalues, eye, inverse, max_abs};
use crate::model::{Component, DiracModel};
use crate::poly::MatPoly;
use crate::{CMat, Error, Result, C64};

/// Default distance of the spectrum from the imaginary axis.
pub const DEFAULT_GAP_TOL: f64 = 1e-8;
const SIGN_TOL: f64 = 1e-13;
const SIGN_MAX_ITER: usize = 60;

/// `Π = ½(Id + sign(A))`, the projection onto generalized eigenspaces with
/// positive real part.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralProjector {
    pub proj: CMat,
    /// `min |Re λ|` over the spectrum of the generating matrix.
    pub gap: f64,
    /// Number of eigenvalues with positive real part.
    pub rank: usize,
}

/// Matrix sign function by the Newton iteration `S ← ½(S + S⁻¹)`.
pub fn matrix_sign(a: &CMat) -> Result<CMat> {
    let mut s = a.clone();
    for _ in 0..SIGN_MAX_ITER {
        let next = (&s + inverse(&s, "matrix sign iteration")?) * c(0.5);
        let step = max_abs(&(&next - &s));
        s = next;
        if step <= SIGN_TOL * max_abs(&s).max(1.0) {
            return Ok(s);
        }
    }
    Err(Error::NonConvergence { iterations: SIGN_MAX_ITER })
}

pub fn pos_projector(a: &CMat, tol: f64) -> Result<SpectralProjector> {
    let eig = eigenvalues(a);
    let gap = eig.iter().map(|z| z.re.abs()).fold(f64::INFINITY, f64::min);
    if gap < tol {
        return Err(Error::ImaginaryAxisEigenvalue { gap, tol });
    }
    let rank = eig.iter().filter(|z| z.re > 0.0).count();
    let s = matrix_sign(a)?;
    Ok(SpectralProjector { proj: (eye(a.nrows()) + s) * c(0.5), gap, rank })
}

/// `Ξ_± = ½(Id ± γ₀)`.
pub fn xi(model: &DiracModel, plus: bool) -> CMat {
    let s = if plus { 1.0 } else { -1.0 };
    (eye(model.rank()) + model.gamma0() * c(s)) * c(0.5)
}

fn tangential_symbol(model: &DiracModel, comp: Component, k: &[i64], dual: bool) -> Result<CMat> {
    model.check_mode(k)?;
    let eps = comp.epsilon();
    let r = comp.r();
    let l = model.rank();
    let mut out = CMat::zeros(l, l);
    for (a, &ka) in k.iter().enumerate() {
        let w = model.connection(a).eval(r);
        let ik = eye(l) * C64::new(0.0, ka as f64);
        out -= if dual {
            model.gamma_m().transpose() * model.theta(a).transpose() * (ik - w.transpose()) * c(eps)
        } else {
            model.gamma_m() * model.theta(a) * (ik + w) * c(eps)
        };
    }
    Ok(out)
}

/// `A_k` at a component.
pub fn boundary_a(model: &DiracModel, comp: Component, k: &[i64]) -> Result<CMat> {
    Ok(tangential_symbol(model, comp, k, false)? + model.psi_a(comp))
}

/// `Ã_k`, the formal adjoint of `A`, on covector mode `k`.
pub fn dual_boundary_a(model: &DiracModel, comp: Component, k: &[i64]) -> Result<CMat> {
    Ok(tangential_symbol(model, comp, k, true)? + model.psi_a(comp).transpose())
}

/// `A^#_k = γ̃_m Ã_k γ̃_m` on covector mode `k`.
pub fn sharp_a(model: &DiracModel, comp: Component, k: &[i64]) -> Result<CMat> {
    let gt = model.inward_gamma(comp).transpose();
    Ok(&gt * dual_boundary_a(model, comp, k)? * &gt)
}

/// Endomorphism part of `A^#` in the decomposition
/// `A^# = −γ̃_mγ̃_a∇̃_{e_a} + ψ_{A^#}`, read off from the matrix of `A^#`.
/// The tangential part of `A^#` on mode `k` is the same as that of `Ã`.
pub fn sharp_psi(model: &DiracModel, comp: Component) -> Result<CMat> {
    let zero = vec![0; model.m() - 1];
    Ok(sharp_a(model, comp, &zero)? - tangential_symbol(model, comp, &zero, true)?)
}

/// Projectors `Π_{A,k}⁺` for field modes and `Π_{A^#,k}⁺` for covector modes.
#[derive(Debug, Clone)]
pub struct ProjectorEntry {
    pub a: CMat,
    pub pi: SpectralProjector,
    pub sharp: CMat,
    pub pi_sharp: SpectralProjector,
}

/// Immutable cache keyed by `(component, k)`.
#[derive(Debug, Clone, Default)]
pub struct ProjectorCache {
    entries: BTreeMap<(Component, Mode), ProjectorEntry>,
}

fn at(comp: Component, k: &[i64], e: Error) -> Error {
    match e {
        Error::ImaginaryAxisEigenvalue { .. } | Error::NonConvergence { .. } | Error::Singular(_) => {
            Error::ProjectorAt { component: comp, mode: k.to_vec(), source: Box::new(e) }
        }
        other => other,
    }
}

impl ProjectorCache {
    /// Builds entries for every mode and both components, in parallel.
    pub fn build<'a, I>(model: &DiracModel, modes: I, tol: f64) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Mode>,
    {
        let mut keys: Vec<(Component, Mode)> = Vec::new();
        for k in modes {
            for comp in Component::ALL {
                keys.push((comp, k.clone()));
            }
        }
        keys.sort();
        keys.dedup();
        let built: Vec<Result<((Component, Mode), ProjectorEntry)>> = keys
            .into_par_iter()
            .map(|(comp, k)| {
                let entry = (|| {
                    let a = boundary_a(model, comp, &k)?;
                    let pi = pos_projector(&a, tol)?;
                    let sharp = sharp_a(model, comp, &k)?;
                    let pi_sharp = pos_projector(&sharp, tol)?;
                    Ok(ProjectorEntry { a, pi, sharp, pi_sharp })
                })()
                .map_err(|e| at(comp, &k, e))?;
                Ok(((comp, k), entry))
            })
            .collect();
        let mut entries = BTreeMap::new();
        for item in built {
            let (key, entry) = item?;
            entries.insert(key, entry);
        }
        Ok(Self { entries })
    }

    /// Cache covering the field modes of `φ` and the partners `−k` of `ρ`.
    pub fn for_pair(model: &DiracModel, phi: &Field, rho: &DualField, tol: f64) -> Result<Self> {
        let mut modes: Vec<Mode> = phi.modes().map(|(k, _)| k.clone()).collect();
        modes.extend(rho.modes().map(|(k, _)| k.clone()));
        modes.extend(phi.modes().map(|(k, _)| negated(k)));
        modes.extend(rho.modes().map(|(k, _)| negated(k)));
        Self::build(model, &modes, tol)
    }

    pub fn get(&self, comp: Component, k: &[i64]) -> Option<&ProjectorEntry> {
        self.entries.get(&(comp, k.to_vec()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn check_rank(model: &DiracModel, rank: usize) -> Result<()> {
    if rank != model.rank() {
        return Err(Error::DimensionMismatch(format!("field rank {rank} on a model of rank {}", model.rank())));
    }
    Ok(())
}

/// `(Pφ)_k = Θ_m∂_rφ_k + B_kφ_k`.
pub fn apply_p(model: &DiracModel, phi: &Field) -> Result<Field> {
    check_rank(model, phi.rank())?;
    phi.try_map_modes(model.rank(), |k, p| {
        model.check_mode(k)?;
        Ok(p.derivative().left_mul(model.gamma_m()).add(&model.tangential_part(k).mul(p)))
    })
}

/// `(P̃ρ)_k = −Θ_mᵀ∂_rρ_k + B̃_kρ_k`.
pub fn apply_p_dual(model: &DiracModel, rho: &DualField) -> Result<DualField> {
    check_rank(model, rho.rank())?;
    let gt = model.gamma_m().transpose();
    rho.try_map_modes(model.rank(), |k, q| {
        model.check_mode(k)?;
        Ok(q.derivative().left_mul(&gt).neg().add(&model.dual_tangential_part(k).mul(q)))
    })
}

pub fn apply_d(model: &DiracModel, phi: &Field) -> Result<Field> {
    apply_p(model, &apply_p(model, phi)?)
}

pub fn apply_d_dual(model: &DiracModel, rho: &DualField) -> Result<DualField> {
    apply_p_dual(model, &apply_p_dual(model, rho)?)
}

/// Coefficients of `D_k = −∂_r² + C₁∂_r + C₀` on mode `k`:
/// `C₁ = {Θ_m, B_k}`, `C₀ = Θ_mB_k′ + B_k²`.
pub fn laplace_coefficients(model: &DiracModel, k: &[i64]) -> Result<(MatPoly, MatPoly)> {
    model.check_mode(k)?;
    let b = model.tangential_part(k);
    let tm = model.gamma_m();
    let c1 = b.left_mul(tm).add(&b.right_mul(tm));
    let c0 = b.derivative().left_mul(tm).add(&b.mul(&b));
    Ok((c1, c0))
}

/// Boundary residual of a field at one component: largest Euclidean norm
/// over modes of each of the two components of the boundary operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryResidual {
    pub component: Component,
    pub value: f64,
    pub derivative: f64,
}

impl BoundaryResidual {
    pub fn max(&self) -> f64 {
        self.value.max(self.derivative)
    }
}

fn col_norm(v: &CMat) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `ℬφ = Π_A⁺φ|_∂ ⊕ Π_A⁺(Pφ)|_∂` per component.
pub fn apply_b(model: &DiracModel, phi: &Field, tol: f64) -> Result<[BoundaryResidual; 2]> {
    let p_phi = apply_p(model, phi)?;
    let modes: Vec<Mode> = phi.modes().map(|(k, _)| k.clone()).collect();
    let cache = ProjectorCache::build(model, &modes, tol)?;
    Ok(Component::ALL.map(|comp| {
        let mut res = BoundaryResidual { component: comp, value: 0.0, derivative: 0.0 };
        for k in &modes {
            let pi = &cache.get(comp, k).expect("cached").pi.proj;
            res.value = res.value.max(col_norm(&(pi * phi.eval(k, comp.r()))));
            res.derivative = res.derivative.max(col_norm(&(pi * p_phi.eval(k, comp.r()))));
        }
        res
    }))
}

/// `ℬ̃ρ = Π_{A^#}⁺ρ|_∂ ⊕ Π_{A^#}⁺(P̃ρ)|_∂` per component.
pub fn apply_b_dual(model: &DiracModel, rho: &DualField, tol: f64) -> Result<[BoundaryResidual; 2]> {
    let pt_rho = apply_p_dual(model, rho)?;
    let modes: Vec<Mode> = rho.modes().map(|(k, _)| k.clone()).collect();
    let mut out = Component::ALL.map(|comp| BoundaryResidual { component: comp, value: 0.0, derivative: 0.0 });
    for comp in Component::ALL {
        for k in &modes {
            let sharp = sharp_a(model, comp, k)?;
            let pi = pos_projector(&sharp, tol).map_err(|e| at(comp, k, e))?.proj;
            let res = &mut out[comp.index()];
            res.value = res.value.max(col_norm(&(&pi * rho.eval(k, comp.r()))));
            res.derivative = res.derivative.max(col_norm(&(&pi * pt_rho.eval(k, comp.r()))));
        }
    }
    Ok(out)
}

/// Endomorphism `S_c` of the mixed condition at each component.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryEndo {
    pub s: [CMat; 2],
}

impl BoundaryEndo {
    pub fn zero(rank: usize) -> Self {
        Self { s: [CMat::zeros(rank, rank), CMat::zeros(rank, rank)] }
    }

    /// `S_c = ε_c·s`, for conditions written as `Ξ₋(∂_r + s)φ = 0` in the
    /// radial coordinate (so that `∇_{e_m} + S_c = ε(∂_r + s)`).
    pub fn from_radial(s: &CMat) -> Self {
        Self { s: Component::ALL.map(|comp| s * c(comp.epsilon())) }
    }

    pub fn at(&self, comp: Component) -> &CMat {
        &self.s[comp.index()]
    }
}

/// `ω^D_r(r_c)` and `∇^D_{e_m} = ε(∂_r + ω^D_r)` applied to a mode value.
pub fn normal_derivative(model: &DiracModel, comp: Component, value: &CMat, radial_derivative: &CMat) -> CMat {
    let w = model.natural_radial_connection().eval(comp.r());
    (radial_derivative + w * value) * c(comp.epsilon())
}

/// Dual connection `∇̃^D_{e_m} = ε(∂_r − (ω^D_r)ᵀ)` on a covector mode value.
pub fn normal_derivative_dual(model: &DiracModel, comp: Component, value: &CMat, radial_derivative: &CMat) -> CMat {
    let w = model.natural_radial_connection().eval(comp.r());
    (radial_derivative - w.transpose() * value) * c(comp.epsilon())
}

/// `ℬ_{γ₀,S}φ = Ξ₋(∇^D_{e_m} + S)φ|_∂ ⊕ Ξ₊φ|_∂` per component.
pub fn apply_mixed(model: &DiracModel, phi: &Field, s: &BoundaryEndo) -> Result<[BoundaryResidual; 2]> {
    check_rank(model, phi.rank())?;
    let (xp, xm) = (xi(model, true), xi(model, false));
    let dphi = phi.d_r();
    let mut out = Component::ALL.map(|comp| BoundaryResidual { component: comp, value: 0.0, derivative: 0.0 });
    for comp in Component::ALL {
        let res = &mut out[comp.index()];
        for (k, _) in phi.modes() {
            model.check_mode(k)?;
            let v = phi.eval(k, comp.r());
            let nd = normal_derivative(model, comp, &v, &dphi.eval(k, comp.r())) + s.at(comp) * &v;
            res.value = res.value.max(col_norm(&(&xp * &v)));
            res.derivative = res.derivative.max(col_norm(&(&xm * nd)));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{build_rep, pauli_rep_m2};
    use crate::linalg::{commutator, max_diff};
    use crate::model::{assemble_flat_model, assemble_warped_model, WarpProfile};

    fn diag(v: &[f64]) -> CMat {
        CMat::from_diagonal(&nalgebra::DVector::from_iterator(v.len(), v.iter().map(|&x| c(x))))
    }

    #[test]
    fn diagonal_projector() {
        let p = pos_projector(&diag(&[1.0, -1.0]), DEFAULT_GAP_TOL).unwrap();
        assert!(max_diff(&p.proj, &diag(&[1.0, 0.0])) < 1e-15);
        assert_eq!(p.rank, 1);
        assert!((p.gap - 1.0).abs() < 1e-14);
    }

    #[test]
    fn grading_projector_is_xi_plus() {
        let model = assemble_flat_model(2, &build_rep(2), 0.0, 1.7, &[0.0]).unwrap();
        let p = pos_projector(&(model.gamma0() * c(1.7)), DEFAULT_GAP_TOL).unwrap();
        assert!(max_diff(&p.proj, &xi(&model, true)) < 1e-15);
    }

    #[test]
    fn imaginary_spectrum_is_rejected() {
        let a = CMat::from_row_slice(2, 2, &[c(0.0), c(1.0), c(-1.0), c(0.0)]);
        assert!(matches!(pos_projector(&a, DEFAULT_GAP_TOL), Err(Error::ImaginaryAxisEigenvalue { .. })));
    }

    #[test]
    fn jordan_block_projector() {
        // non-diagonalizable with eigenvalues 2, 2, −1
        let a = CMat::from_row_slice(3, 3, &[c(2.0), c(1.0), c(0.3), c(0.0), c(2.0), c(-0.5), c(0.0), c(0.0), c(-1.0)]);
        let p = pos_projector(&a, DEFAULT_GAP_TOL).unwrap();
        assert_eq!(p.rank, 2);
        assert!(max_diff(&(&p.proj * &p.proj), &p.proj) < 1e-12);
        assert!(max_abs(&commutator(&p.proj, &a)) < 1e-12);
        assert!((p.proj.trace() - c(2.0)).norm() < 1e-12);
    }

    #[test]
    fn pauli_boundary_operator() {
        let model = assemble_flat_model(2, &pauli_rep_m2(), 0.0, 1.0, &[0.0]).unwrap();
        let a = boundary_a(&model, Component::Inner, &[1]).unwrap();
        // γ_mγ₁ = iσ_z, so A = 2σ_z
        assert!(max_diff(&a, &diag(&[2.0, -2.0])) < 1e-15);
        let singular = assemble_flat_model(2, &pauli_rep_m2(), 0.0, -1.0, &[0.0]).unwrap();
        let a = boundary_a(&singular, Component::Inner, &[1]).unwrap();
        assert!(max_abs(&a) < 1e-15);
        assert!(ProjectorCache::build(&singular, &[vec![1]], DEFAULT_GAP_TOL).is_err());
    }

    #[test]
    fn zero_mode_is_grading() {
        let model = assemble_flat_model(3, &build_rep(3), 0.2, 0.6, &[0.3, -0.1]).unwrap();
        for comp in Component::ALL {
            let a = boundary_a(&model, comp, &[0, 0]).unwrap();
            assert!(max_diff(&a, &(model.gamma0() * c(0.6))) < 1e-15);
            let s = sharp_a(&model, comp, &[0, 0]).unwrap();
            let mut eig: Vec<f64> = eigenvalues(&s).iter().map(|z| z.re).collect();
            eig.sort_by(f64::total_cmp);
            assert!((eig[0] + 0.6).abs() < 1e-12 && (eig[3] - 0.6).abs() < 1e-12);
        }
    }

    #[test]
    fn twist_cancels_in_boundary_operator() {
        let rep = build_rep(2);
        let twisted = assemble_flat_model(2, &rep, 0.0, 1.0, &[0.3]).unwrap();
        let plain = assemble_flat_model(2, &rep, 0.0, 1.0, &[0.0]).unwrap();
        for comp in Component::ALL {
            for k in -2..=2 {
                let a = boundary_a(&twisted, comp, &[k]).unwrap();
                let b = boundary_a(&plain, comp, &[k]).unwrap();
                assert!(max_diff(&a, &b) < 1e-15);
                let sa = sharp_a(&twisted, comp, &[k]).unwrap();
                let sb = sharp_a(&plain, comp, &[k]).unwrap();
                assert!(max_diff(&sa, &sb) < 1e-15);
            }
        }
    }

    #[test]
    fn sharp_decomposition_on_warped_model() {
        let rep = build_rep(2);
        let model = assemble_warped_model(2, &rep, &WarpProfile::bump(0.4), 1.0).unwrap();
        for comp in Component::ALL {
            let gt = model.inward_gamma(comp).transpose();
            let expect = &gt * model.psi_a(comp).transpose() * &gt + eye(4) * c(model.second_ff(comp));
            assert!(max_diff(&sharp_psi(&model, comp).unwrap(), &expect) < 1e-13);
            // the dual model's own boundary operator is A^#
            let dual = model.dual();
            let via_dual = boundary_a(&dual, comp, &[0]).unwrap();
            assert!(max_diff(&via_dual, &sharp_a(&model, comp, &[0]).unwrap()) < 1e-13);
        }
    }

    #[test]
    fn sharp_decomposition_on_twisted_model() {
        let model = assemble_flat_model(2, &build_rep(2), 0.5, 0.7, &[0.3]).unwrap();
        for comp in Component::ALL {
            let gt = model.inward_gamma(comp).transpose();
            let expect = &gt * model.psi_a(comp).transpose() * &gt;
            assert!(max_diff(&sharp_psi(&model, comp).unwrap(), &expect) < 1e-13);
        }
    }

    #[test]
    fn dual_model_boundary_operator_is_sharp_for_flat_models() {
        let model = assemble_flat_model(3, &build_rep(3), 0.5, 0.8, &[0.3, -0.2]).unwrap();
        let dual = model.dual();
        for comp in Component::ALL {
            for k in [[0, 0], [1, -2], [3, 1]] {
                let a = boundary_a(&dual, comp, &k).unwrap();
                assert!(max_diff(&a, &sharp_a(&model, comp, &k).unwrap()) < 1e-13);
            }
        }
    }

    #[test]
    fn operators_on_simple_fields() {
        let flat = assemble_flat_model(2, &build_rep(2), 0.0, 1.0, &[0.0]).unwrap();
        let phi = Field::constant_real(vec![0], &[1.0, 0.0, 0.0, 0.0]);
        assert!(apply_p(&flat, &phi).unwrap().is_zero());

        // D = −∂_r² + δ₁² on the flat m = 1 model
        let m1 = assemble_flat_model(1, &build_rep(1), 0.5, 1.0, &[]).unwrap();
        let phi =
            Field::from_coeffs(vec![], &[vec![c(1.0), c(2.0)], vec![c(0.0), c(-1.0)], vec![c(3.0), c(0.5)]]).unwrap();
        let d = apply_d(&m1, &phi).unwrap();
        let expect = phi.d_r().d_r().scale(c(-1.0)).add(&phi.scale(c(0.25)));
        assert!(d.add(&expect.scale(c(-1.0))).max_coeff() < 1e-14);

        // warped radial: Pφ = Θ_m∂_rφ
        let warped = assemble_warped_model(2, &build_rep(2), &WarpProfile::bump(0.4), 1.0).unwrap();
        let phi =
            Field::from_coeffs(vec![0], &[vec![c(1.0), c(0.0), c(2.0), c(0.0)], vec![c(0.0), c(1.0), c(0.0), c(-1.0)]])
                .unwrap();
        let p = apply_p(&warped, &phi).unwrap();
        let direct = phi.d_r().try_map_modes(4, |_, q| Ok(q.left_mul(warped.gamma_m()))).unwrap();
        assert!(p.add(&direct.scale(c(-1.0))).max_coeff() < 1e-15);
    }

    #[test]
    fn laplace_coefficients_reproduce_d() {
        let model = assemble_flat_model(2, &build_rep(2), 0.5, 1.0, &[0.3]).unwrap();
        let phi = Field::from_coeffs(
            vec![2],
            &[
                vec![c(1.0), c(0.0), c(2.0), c(0.0)],
                vec![c(0.0), c(1.0), c(0.0), c(-1.0)],
                vec![c(0.2), c(0.0), c(0.0), c(0.7)],
            ],
        )
        .unwrap();
        let d = apply_d(&model, &phi).unwrap();
        let (c1, c0) = laplace_coefficients(&model, &[2]).unwrap();
        let p = phi.mode(&[2]).unwrap();
        let manual = p.derivative().derivative().neg().add(&c1.mul(&p.derivative())).add(&c0.mul(p));
        assert!(d.mode(&[2]).unwrap().sub(&manual).max_coeff() < 1e-13);
    }

    #[test]
    fn boundary_residuals() {
        let flat = assemble_flat_model(1, &build_rep(1), 0.0, 1.0, &[]).unwrap();
        let minus = Field::constant_real(vec![], &[0.0, 1.0]);
        let r = apply_b(&flat, &minus, DEFAULT_GAP_TOL).unwrap();
        assert!(r.iter().all(|x| x.max() == 0.0));
        let generic = Field::from_coeffs(vec![], &[vec![c(0.3), c(1.0)], vec![c(1.0), c(-0.4)]]).unwrap();
        assert!(apply_b(&flat, &generic, DEFAULT_GAP_TOL).unwrap().iter().all(|x| x.max() > 0.1));
    }

    #[test]
    fn natural_connection_vanishes_on_flat_models() {
        let model = assemble_flat_model(3, &build_rep(3), 0.5, 1.0, &[0.3, 0.2]).unwrap();
        assert!(model.natural_radial_connection().max_coeff() < 1e-15);
    }
}

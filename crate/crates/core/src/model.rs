//! Model geometries on `𝕋^{m−1} × [0, 1]`.
//!
//! Coordinates are `θ₁ … θ_{m−1}` on the torus and `r` on the interval, with
//! metric `e^{2f(r)}|dθ|² + dr²`. All endomorphism data is kept in the
//! orthonormal frame `e_a = e^{−f}∂_a`, `e_m = ∂_r`, and the radial direction is
//! the last generator. Two regimes are assembled:
//!
//! - flat twisted: `f ≡ 0`, `ω(e_a) = ϱ_a·Id`, `ψ_P = δ₁Θ_mγ₀ − ϱ_aΘ_a`;
//! - warped: `ω(e_a) = ½f′Θ_mΘ_a`, `ψ_P = −½(m−1)f′Θ_m`, `δ₁ = 0`.
//!
//! Dual models, dimension lifts and radial reductions are derived from these.

use std::fmt;

use serde::Serialize;

use crate::clifford::CliffordRep;
use crate::linalg::{block_diag, c, commutator, eye, max_abs};
use crate::poly::{MatPoly, Poly};
use crate::{CMat, Error, Result, C64};

/// Warp profiles must vanish at both ends to this tolerance.
pub const WARP_BOUNDARY_TOL: f64 = 1e-14;

/// Sign `σ` in `L_aa = σ·ε·(m−1)·f′(r_c)`.
///
/// With the boundary operator written `A = −γ_mγ_a∇_{e_a} + ψ_A` and `γ_m`
/// pointing inward, expanding `A^# = γ̃_mÃγ̃_m` in the dual connection gives
/// an endomorphism part `γ̃_mψ̃_Aγ̃_m − ε(m−1)f′`, hence `σ = −1`.
pub const CURVATURE_SIGN: f64 = -1.0;

/// A boundary component of `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Component {
    /// `r = 0`, inward normal `+∂_r`.
    Inner,
    /// `r = 1`, inward normal `−∂_r`.
    Outer,
}

impl Component {
    pub const ALL: [Component; 2] = [Component::Inner, Component::Outer];

    pub fn r(self) -> f64 {
        match self {
            Component::Inner => 0.0,
            Component::Outer => 1.0,
        }
    }

    /// `ε = +1` at `r = 0` and `−1` at `r = 1`.
    pub fn epsilon(self) -> f64 {
        match self {
            Component::Inner => 1.0,
            Component::Outer => -1.0,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Inner => write!(f, "r=0"),
            Component::Outer => write!(f, "r=1"),
        }
    }
}

/// Polynomial warp function `f` with `f(0) = f(1) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct WarpProfile {
    f: Poly,
    df: Poly,
    d2f: Poly,
}

impl WarpProfile {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        let f = Poly::new(coeffs);
        let (f0, f1) = (f.eval(0.0), f.eval(1.0));
        if f0.abs() > WARP_BOUNDARY_TOL || f1.abs() > WARP_BOUNDARY_TOL {
            return Err(Error::WarpBoundary { f0, f1 });
        }
        let df = f.derivative();
        let d2f = df.derivative();
        Ok(Self { f, df, d2f })
    }

    pub fn flat() -> Self {
        Self { f: Poly::zero(), df: Poly::zero(), d2f: Poly::zero() }
    }

    /// `s·r(1 − r)`, the standard bump.
    pub fn bump(s: f64) -> Self {
        Self::new(vec![0.0, s, -s]).expect("r(1-r) vanishes at both ends")
    }

    pub fn is_flat(&self) -> bool {
        self.f.is_zero()
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn df(&self) -> &Poly {
        &self.df
    }

    pub fn d2f(&self) -> &Poly {
        &self.d2f
    }
}

/// Boundary data at one component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryComponent {
    pub component: Component,
    pub epsilon: f64,
    /// Trace of the second fundamental form with respect to the inward normal.
    pub l_aa: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConnectionKind {
    FlatTwisted,
    WarpedCompatible,
}

/// Everything needed to assemble a model in one place (used by the CLI).
#[derive(Debug, Clone)]
pub struct ModelConfig {
    pub kind: ConnectionKind,
    pub rep: CliffordRep,
    pub delta1: f64,
    pub delta2: f64,
    pub twist: Vec<f64>,
    pub warp: WarpProfile,
}

/// An operator of Dirac type `P = γ_i∇_{e_i} + ψ_P` on a model, together with
/// its boundary operator data `ψ_A` and the second fundamental form.
#[derive(Debug, Clone)]
pub struct DiracModel {
    rep: CliffordRep,
    profile: WarpProfile,
    /// Number of leading tangential directions carrying the warp factor.
    warped_dirs: usize,
    kind: ConnectionKind,
    delta1: f64,
    delta2: f64,
    twist: Vec<f64>,
    /// `ω(e_a)` for the tangential frame vectors.
    connection: Vec<MatPoly>,
    psi_p: MatPoly,
    psi_a: [CMat; 2],
    l_aa: [f64; 2],
    curvature_sign: f64,
    sign_flip: f64,
}

fn check_rep(m: usize, rep: &CliffordRep) -> Result<()> {
    if rep.m() != m {
        return Err(Error::DimensionMismatch(format!(
            "representation has {} generators, model needs m = {m}",
            rep.m()
        )));
    }
    Ok(())
}

/// Flat twisted model: `ω_a = ϱ_a Id`, `ψ_P = δ₁γ_mγ₀ − ϱ_aγ_a`,
/// `ψ_A = δ₂γ₀ + εγ_mγ_aϱ_a`.
pub fn assemble_flat_model(m: usize, rep: &CliffordRep, delta1: f64, delta2: f64, twist: &[f64]) -> Result<DiracModel> {
    check_rep(m, rep)?;
    if twist.len() != m - 1 {
        return Err(Error::DimensionMismatch(format!("expected {} twist constants, got {}", m - 1, twist.len())));
    }
    if delta1 < 0.0 || !delta1.is_finite() || !delta2.is_finite() {
        return Err(Error::InvalidModel(format!("need finite δ₁ ≥ 0 and δ₂, got δ₁ = {delta1}, δ₂ = {delta2}")));
    }
    let l = rep.rank();
    let tm = rep.gamma_m();
    let g0 = rep.gamma0();
    let mut psi_p = tm * g0 * c(delta1);
    let mut tangential = CMat::zeros(l, l);
    for (a, &rho) in twist.iter().enumerate() {
        psi_p -= rep.theta(a) * c(rho);
        tangential += tm * rep.theta(a) * c(rho);
    }
    let psi_a = Component::ALL.map(|comp| g0 * c(delta2) + &tangential * c(comp.epsilon()));
    Ok(DiracModel {
        rep: rep.clone(),
        profile: WarpProfile::flat(),
        warped_dirs: m - 1,
        kind: ConnectionKind::FlatTwisted,
        delta1,
        delta2,
        twist: twist.to_vec(),
        connection: twist.iter().map(|&rho| MatPoly::constant(eye(l) * c(rho))).collect(),
        psi_p: MatPoly::constant(psi_p),
        psi_a,
        l_aa: [0.0; 2],
        curvature_sign: CURVATURE_SIGN,
        sign_flip: 1.0,
    })
}

/// Warped product with the compatible connection `ω_a = ½f′γ_mγ_a`,
/// `ψ_P = −½(m−1)f′γ_m` and `ψ_A = −½ε(m−1)f′ + δ₂γ₀`.
pub fn assemble_warped_model(m: usize, rep: &CliffordRep, profile: &WarpProfile, delta2: f64) -> Result<DiracModel> {
    check_rep(m, rep)?;
    if !delta2.is_finite() {
        return Err(Error::InvalidModel("δ₂ must be finite".into()));
    }
    let l = rep.rank();
    let tm = rep.gamma_m();
    let half_df = profile.df().scaled(0.5);
    let connection = (0..m - 1).map(|a| MatPoly::scalar_times(&half_df, &(tm * rep.theta(a)))).collect();
    let dims = (m - 1) as f64;
    let psi_p = MatPoly::scalar_times(&profile.df().scaled(-0.5 * dims), tm);
    let psi_a = Component::ALL.map(|comp| {
        let shift = -0.5 * comp.epsilon() * dims * profile.df().eval(comp.r());
        rep.gamma0() * c(delta2) + eye(l) * c(shift)
    });
    let mut model = DiracModel {
        rep: rep.clone(),
        profile: profile.clone(),
        warped_dirs: m - 1,
        kind: ConnectionKind::WarpedCompatible,
        delta1: 0.0,
        delta2,
        twist: vec![0.0; m - 1],
        connection,
        psi_p,
        psi_a,
        l_aa: [0.0; 2],
        curvature_sign: CURVATURE_SIGN,
        sign_flip: 1.0,
    };
    model.l_aa = Component::ALL.map(|comp| model.curvature_trace(comp, CURVATURE_SIGN));
    Ok(model)
}

impl ModelConfig {
    /// Assemble with the regime guard: flat twisted models carry no warp and
    /// warped models have `δ₁ = 0` and no twist.
    pub fn assemble(&self) -> Result<DiracModel> {
        let m = self.rep.m();
        match self.kind {
            ConnectionKind::FlatTwisted => {
                if !self.warp.is_flat() {
                    return Err(Error::InvalidModel("flat twisted models require f ≡ 0".into()));
                }
                assemble_flat_model(m, &self.rep, self.delta1, self.delta2, &self.twist)
            }
            ConnectionKind::WarpedCompatible => {
                if self.delta1 != 0.0 {
                    return Err(Error::InvalidModel("warped models require δ₁ = 0".into()));
                }
                if self.twist.iter().any(|&t| t != 0.0) {
                    return Err(Error::InvalidModel("warped models carry no twist".into()));
                }
                assemble_warped_model(m, &self.rep, &self.warp, self.delta2)
            }
        }
    }
}

/// Christoffel symbols of `e^{2f}|dθ|² + dr²` in coordinates, radial index last.
#[derive(Debug, Clone, PartialEq)]
pub struct Christoffel {
    m: usize,
    /// `Γ_ij^k`
    upper: Vec<f64>,
    /// `Γ_ijk = g_kl Γ_ij^l`
    lower: Vec<f64>,
}

impl Christoffel {
    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.m + j) * self.m + k
    }

    pub fn upper(&self, i: usize, j: usize, k: usize) -> f64 {
        self.upper[self.idx(i, j, k)]
    }

    pub fn lower(&self, i: usize, j: usize, k: usize) -> f64 {
        self.lower[self.idx(i, j, k)]
    }

    pub fn dim(&self) -> usize {
        self.m
    }
}

impl DiracModel {
    pub fn m(&self) -> usize {
        self.rep.m()
    }

    /// Fiber rank `ℓ`.
    pub fn rank(&self) -> usize {
        self.rep.rank()
    }

    pub fn rep(&self) -> &CliffordRep {
        &self.rep
    }

    pub fn kind(&self) -> ConnectionKind {
        self.kind
    }

    pub fn profile(&self) -> &WarpProfile {
        &self.profile
    }

    pub fn delta1(&self) -> f64 {
        self.delta1
    }

    pub fn delta2(&self) -> f64 {
        self.delta2
    }

    pub fn twist(&self) -> &[f64] {
        &self.twist
    }

    pub fn sign_flip(&self) -> f64 {
        self.sign_flip
    }

    pub fn curvature_sign(&self) -> f64 {
        self.curvature_sign
    }

    /// `Θ_i`; the radial generator is `Θ_m`.
    pub fn theta(&self, i: usize) -> &CMat {
        self.rep.theta(i)
    }

    pub fn gamma_m(&self) -> &CMat {
        self.rep.gamma_m()
    }

    /// `γ(ν)` for the inward unit normal at a component, `εΘ_m`.
    pub fn inward_gamma(&self, comp: Component) -> CMat {
        self.gamma_m() * c(comp.epsilon())
    }

    pub fn gamma0(&self) -> &CMat {
        self.rep.gamma0()
    }

    /// Connection one-form on the frame vector `e_a`, `a < m − 1`.
    pub fn connection(&self, a: usize) -> &MatPoly {
        &self.connection[a]
    }

    pub fn psi_p(&self) -> &MatPoly {
        &self.psi_p
    }

    pub fn psi_a(&self, comp: Component) -> &CMat {
        &self.psi_a[comp.index()]
    }

    pub fn boundary(&self, comp: Component) -> BoundaryComponent {
        BoundaryComponent { component: comp, epsilon: comp.epsilon(), l_aa: self.l_aa[comp.index()] }
    }

    /// `L_aa` at a component.
    pub fn second_ff(&self, comp: Component) -> f64 {
        self.l_aa[comp.index()]
    }

    /// Number of warped tangential directions, `m − 1` for assembled models.
    pub fn warped_dirs(&self) -> usize {
        self.warped_dirs
    }

    /// Volume density `g = e^{(m−1)f}`.
    pub fn density(&self, r: f64) -> f64 {
        (self.warped_dirs as f64 * self.profile.f().eval(r)).exp()
    }

    /// `(2π)^{m−1}`, the torus volume.
    pub fn torus_volume(&self) -> f64 {
        (2.0 * std::f64::consts::PI).powi(self.m() as i32 - 1)
    }

    fn curvature_trace(&self, comp: Component, sigma: f64) -> f64 {
        sigma * comp.epsilon() * self.warped_dirs as f64 * self.profile.df().eval(comp.r())
    }

    /// Reject modes of the wrong length and tangential dependence on warped
    /// directions (the frame factor `e^{−f}` is not polynomial).
    pub fn check_mode(&self, k: &[i64]) -> Result<()> {
        if k.len() != self.m() - 1 {
            return Err(Error::DimensionMismatch(format!(
                "mode {k:?} has length {}, model needs {}",
                k.len(),
                self.m() - 1
            )));
        }
        if !self.profile.is_flat() && k[..self.warped_dirs].iter().any(|&ka| ka != 0) {
            return Err(Error::NonRadialWarped(k.to_vec()));
        }
        Ok(())
    }

    /// Tangential and zeroth order part of `P` on mode `k`:
    /// `B_k = Σ_a Θ_a(ik_a + ω_a) + ψ_P`, so that `P = Θ_m∂_r + B_k`.
    pub fn tangential_part(&self, k: &[i64]) -> MatPoly {
        let l = self.rank();
        let mut b = self.psi_p.clone();
        for (a, &ka) in k.iter().enumerate() {
            let th = self.theta(a);
            b = b.add(&MatPoly::constant(th * C64::new(0.0, ka as f64)));
            b = b.add(&self.connection[a].left_mul(th));
        }
        debug_assert_eq!(b.shape(), (l, l));
        b
    }

    /// Same for the formal adjoint on `V*`:
    /// `P̃ = −Θ_mᵀ∂_r + B̃_k`, `B̃_k = −Σ_a Θ_aᵀ(ik_a − ω_aᵀ) + ψ_Pᵀ`.
    pub fn dual_tangential_part(&self, k: &[i64]) -> MatPoly {
        let mut b = self.psi_p.transpose();
        for (a, &ka) in k.iter().enumerate() {
            let tht = self.theta(a).transpose();
            b = b.sub(&MatPoly::constant(&tht * C64::new(0.0, ka as f64)));
            b = b.add(&self.connection[a].transpose().left_mul(&tht));
        }
        b
    }

    /// Radial part `ω^D_r` of the connection determined by `D = P²`.
    ///
    /// Writing `D = −(∂_r² + E∂_r) + …` on a mode, `∇^D_{∂_r} = ∂_r + ω^D_r`
    /// with `2ω^D_r = E − (m−1)f′`; here `E = −{Θ_m, B_k}`, independent of `k`.
    pub fn natural_radial_connection(&self) -> MatPoly {
        let zero_mode = vec![0; self.m() - 1];
        let b = self.tangential_part(&zero_mode);
        let tm = self.gamma_m();
        let first_order = b.left_mul(tm).add(&b.right_mul(tm));
        let mean_curv = MatPoly::scalar_times(&self.profile.df().scaled(self.warped_dirs as f64), &eye(self.rank()));
        first_order.add(&mean_curv).scale(c(-0.5))
    }

    /// `P ↦ −P`: negates the generators and `ψ_P`; `A` is unchanged.
    pub fn flip_sign(&self) -> Self {
        let thetas = self.rep.thetas().iter().map(|t| -t).collect();
        let rep = CliffordRep::from_matrices_unchecked(thetas, self.rep.gamma0().clone()).expect("same shapes");
        Self { rep, psi_p: self.psi_p.neg(), sign_flip: -self.sign_flip, ..self.clone() }
    }

    /// The same model with `L_aa` recomputed for another sign convention.
    pub fn with_curvature_sign(&self, sigma: f64) -> Self {
        let mut out = self.clone();
        out.curvature_sign = sigma;
        out.l_aa = Component::ALL.map(|comp| self.curvature_trace(comp, sigma));
        out
    }

    /// The adjoint structure on `V*`: generators `−Θᵀ`, grading `γ₀ᵀ`,
    /// connection `−ωᵀ`, `ψ_P ↦ ψ_Pᵀ` and `ψ_{A^#} = γ̃_mψ̃_Aγ̃_m + L_aa`.
    /// The construction is an involution.
    pub fn dual(&self) -> Self {
        let thetas = self.rep.thetas().iter().map(|t| -t.transpose()).collect();
        let rep = CliffordRep::from_matrices_unchecked(thetas, self.rep.gamma0().transpose()).expect("same shapes");
        let l = self.rank();
        let psi_a = Component::ALL.map(|comp| {
            let gt = self.inward_gamma(comp).transpose();
            &gt * self.psi_a(comp).transpose() * &gt + eye(l) * c(self.second_ff(comp))
        });
        Self {
            rep,
            connection: self.connection.iter().map(|w| w.transpose().neg()).collect(),
            psi_p: self.psi_p.transpose(),
            psi_a,
            ..self.clone()
        }
    }

    /// Product with a circle: `P = diag(P₀, −P₀) + γ₀′∂_θ` on `V₀ ⊕ V₀` with
    /// `γ₀′ = [[0, −Id], [Id, 0]]`, `A = A₀ − γ_mγ₀′∂_θ`.
    pub fn lift(&self) -> Self {
        let l = self.rank();
        let m = self.m();
        let mut new_gen = CMat::zeros(2 * l, 2 * l);
        new_gen.view_mut((0, l), (l, l)).copy_from(&(-eye(l)));
        new_gen.view_mut((l, 0), (l, l)).copy_from(&eye(l));
        let doubled = |t: &CMat| block_diag(t, &(-t));
        let mut thetas: Vec<CMat> = (0..m - 1).map(|a| doubled(self.theta(a))).collect();
        thetas.push(new_gen);
        thetas.push(doubled(self.gamma_m()));
        let grading = block_diag(self.gamma0(), self.gamma0());
        let rep = CliffordRep::from_matrices_unchecked(thetas, grading).expect("block shapes");
        let mut connection: Vec<MatPoly> = self
            .connection
            .iter()
            .map(|w| {
                let coeffs = w.coeffs().iter().map(|cf| block_diag(cf, cf)).collect();
                MatPoly::from_coeffs(2 * l, 2 * l, coeffs)
            })
            .collect();
        connection.push(MatPoly::zero(2 * l, 2 * l));
        let psi_p =
            MatPoly::from_coeffs(2 * l, 2 * l, self.psi_p.coeffs().iter().map(|cf| block_diag(cf, &(-cf))).collect());
        let mut twist = self.twist.clone();
        twist.push(0.0);
        Self {
            rep,
            connection,
            psi_p,
            psi_a: Component::ALL.map(|comp| block_diag(self.psi_a(comp), self.psi_a(comp))),
            twist,
            ..self.clone()
        }
    }

    /// The interval operator `D₀` acting on radial sections: generator `Θ_m`,
    /// `ψ_P = B₀` (tangential part at `k = 0`) and `ψ_A = A₀`, flat measure.
    /// For the flat model this is `P₀ = γ_m(∂_r + δ₁γ₀)`.
    pub fn radial_reduction(&self) -> Result<Self> {
        if !self.profile.is_flat() {
            return Err(Error::InvalidModel("radial reduction needs a flat model".into()));
        }
        let rep = CliffordRep::from_matrices_unchecked(vec![self.gamma_m().clone()], self.gamma0().clone())?;
        let zero_mode = vec![0; self.m() - 1];
        let psi_a = Component::ALL.map(|comp| {
            let gt = self.inward_gamma(comp);
            let mut a = self.psi_a(comp).clone();
            for (i, w) in self.connection.iter().enumerate() {
                a -= &gt * self.theta(i) * w.eval(comp.r());
            }
            a
        });
        Ok(Self {
            rep,
            profile: WarpProfile::flat(),
            warped_dirs: 0,
            twist: Vec::new(),
            connection: Vec::new(),
            psi_p: self.tangential_part(&zero_mode),
            psi_a,
            l_aa: [0.0; 2],
            ..self.clone()
        })
    }

    /// Christoffel symbols at `r`, computed from the metric
    /// `g = diag(e^{2f}, …, e^{2f}, 1)` (unwarped directions have `g = 1`).
    pub fn christoffel(&self, r: f64) -> Christoffel {
        let m = self.m();
        let f = self.profile.f().eval(r);
        let df = self.profile.df().eval(r);
        let rad = m - 1;
        let metric = |i: usize| if i < self.warped_dirs { (2.0 * f).exp() } else { 1.0 };
        // only ∂_r of the metric is nonzero
        let dmetric = |i: usize| if i < self.warped_dirs { 2.0 * df * (2.0 * f).exp() } else { 0.0 };
        let dg = |d: usize, i: usize, j: usize| if d == rad && i == j { dmetric(i) } else { 0.0 };
        let mut table = Christoffel { m, upper: vec![0.0; m * m * m], lower: vec![0.0; m * m * m] };
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let first = 0.5 * (dg(i, j, k) + dg(j, i, k) - dg(k, i, j));
                    let idx = table.idx(i, j, k);
                    table.lower[idx] = first;
                    table.upper[idx] = first / metric(k);
                }
            }
        }
        table
    }

    /// Max-norm of the covariant derivatives `γ_{m;m}`, `γ_{a;m}`, `γ_{m;a}`,
    /// `γ_{a;b}` of the Clifford symbol at `r`, in coordinates.
    pub fn compatibility_defects(&self, r: f64) -> [f64; 4] {
        let m = self.m();
        let rad = m - 1;
        let f = self.profile.f().eval(r);
        let df = self.profile.df().eval(r);
        let scale = |i: usize| if i < self.warped_dirs && i != rad { f.exp() } else { 1.0 };
        let dscale = |i: usize| if i < self.warped_dirs && i != rad { df * f.exp() } else { 0.0 };
        let gamma: Vec<CMat> = (0..m).map(|i| self.theta(i) * c(scale(i))).collect();
        let l = self.rank();
        let omega: Vec<CMat> = (0..m)
            .map(|i| if i == rad { CMat::zeros(l, l) } else { self.connection[i].eval(r) * c(scale(i)) })
            .collect();
        let gamma_table = self.christoffel(r);
        let cov = |i: usize, j: usize| {
            let mut out = if i == rad { self.theta(j) * c(dscale(j)) } else { CMat::zeros(l, l) };
            for (k, gk) in gamma.iter().enumerate() {
                out -= gk * c(gamma_table.upper(i, j, k));
            }
            out + commutator(&omega[i], &gamma[j])
        };
        let mut d = [0.0f64; 4];
        d[0] = max_abs(&cov(rad, rad));
        for a in 0..rad {
            d[1] = d[1].max(max_abs(&cov(rad, a)));
            d[2] = d[2].max(max_abs(&cov(a, rad)));
            for b in 0..rad {
                d[3] = d[3].max(max_abs(&cov(b, a)));
            }
        }
        d
    }
}

/// `P = Θ_a∂_a + ψ` on the flat torus `𝕋^m`, no boundary.
#[derive(Debug, Clone)]
pub struct ClosedModel {
    rep: CliffordRep,
    psi: CMat,
}

impl ClosedModel {
    pub fn new(rep: CliffordRep, psi: CMat) -> Result<Self> {
        if psi.shape() != (rep.rank(), rep.rank()) {
            return Err(Error::DimensionMismatch("ψ must be ℓ × ℓ".into()));
        }
        Ok(Self { rep, psi })
    }

    pub fn m(&self) -> usize {
        self.rep.m()
    }

    pub fn rank(&self) -> usize {
        self.rep.rank()
    }

    pub fn rep(&self) -> &CliffordRep {
        &self.rep
    }

    pub fn torus_volume(&self) -> f64 {
        (2.0 * std::f64::consts::PI).powi(self.m() as i32)
    }

    pub fn check_mode(&self, k: &[i64]) -> Result<()> {
        if k.len() != self.m() {
            return Err(Error::DimensionMismatch(format!("closed mode {k:?} must have length {}", self.m())));
        }
        Ok(())
    }

    /// Symbol of `P` on mode `k`: `iΣk_aΘ_a + ψ`.
    pub fn p_symbol(&self, k: &[i64]) -> CMat {
        k.iter().enumerate().fold(self.psi.clone(), |acc, (a, &ka)| acc + self.rep.theta(a) * C64::new(0.0, ka as f64))
    }

    /// `D = P²` on mode `k`.
    pub fn d_symbol(&self, k: &[i64]) -> CMat {
        let p = self.p_symbol(k);
        &p * &p
    }
}

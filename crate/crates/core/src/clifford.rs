//! Finite-dimensional Clifford representations with a grading endomorphism.
//!
//! Generators satisfy `Θ_iΘ_j + Θ_jΘ_i = −2δ_ij` and the grading `γ₀` is an
//! involution anticommuting with every `Θ_i`. Covectors in `V*` are stored as
//! column vectors of the dual basis and the pairing is the bilinear
//! `⟨v, w⟩ = wᵀv`, so the dual of an endomorphism is its plain transpose.

use crate::linalg::{anticommutator, c, eye, kron, max_abs};
use crate::{CMat, Error, Result, C64};

/// Tolerance used when validating user-supplied generators.
pub const RELATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct CliffordRep {
    thetas: Vec<CMat>,
    gamma0: CMat,
}

fn pauli() -> [CMat; 3] {
    let z = c(0.0);
    let o = c(1.0);
    let i = C64::new(0.0, 1.0);
    [
        CMat::from_row_slice(2, 2, &[z, o, o, z]),
        CMat::from_row_slice(2, 2, &[z, -i, i, z]),
        CMat::from_row_slice(2, 2, &[o, z, z, -o]),
    ]
}

/// `count` pairwise anticommuting Hermitian involutions on `q` qubits
/// (`count ≤ 2q + 1`), built as `σ_z^{⊗j} ⊗ σ_{x,y} ⊗ I` plus `σ_z^{⊗q}`.
fn hermitian_generators(q: usize, count: usize) -> Vec<CMat> {
    assert!(count <= 2 * q + 1);
    let [sx, sy, sz] = pauli();
    let chain = |j: usize, mid: &CMat| {
        let mut out = CMat::identity(1, 1);
        for _ in 0..j {
            out = kron(&out, &sz);
        }
        out = kron(&out, mid);
        kron(&out, &eye(1 << (q - j - 1)))
    };
    let mut gens = Vec::with_capacity(count);
    for j in 0..q {
        gens.push(chain(j, &sx));
        gens.push(chain(j, &sy));
    }
    let mut top = CMat::identity(1, 1);
    for _ in 0..q {
        top = kron(&top, &sz);
    }
    gens.push(top);
    gens.truncate(count);
    gens
}

/// Default representation of rank `ℓ = 2^⌈(m+1)/2⌉`.
///
/// `γ₀ = σ_z ⊗ I` is real diagonal, so `e₊` and `e₋` are standard basis
/// vectors, and `Θ_i = σ_x ⊗ iF_i` for anticommuting Hermitian involutions
/// `F_i`. Equivalently `γ₀ = iΘ_{m+1}` with `Θ_{m+1} = −iσ_z ⊗ I`, an extra
/// generator anticommuting with the others.
pub fn build_rep(m: usize) -> CliffordRep {
    assert!(m >= 1, "Clifford representation needs m ≥ 1");
    let q = m / 2;
    let [sx, _, sz] = pauli();
    let i = C64::new(0.0, 1.0);
    let thetas = hermitian_generators(q, m).into_iter().map(|f| kron(&sx, &(f * i))).collect();
    let gamma0 = kron(&sz, &eye(1 << q));
    CliffordRep { thetas, gamma0 }
}

/// The 2 × 2 representation `Θ₁ = iσ_x`, `Θ₂ = iσ_y`, `γ₀ = σ_z` for `m = 2`.
pub fn pauli_rep_m2() -> CliffordRep {
    let [sx, sy, sz] = pauli();
    let i = C64::new(0.0, 1.0);
    CliffordRep { thetas: vec![sx * i, sy * i], gamma0: sz }
}

/// Dual endomorphism on `V*` under the bilinear pairing: the transpose.
pub fn dual_endo(e: &CMat) -> CMat {
    e.transpose()
}

impl CliffordRep {
    /// Validated construction from explicit matrices.
    pub fn from_matrices(thetas: Vec<CMat>, gamma0: CMat) -> Result<Self> {
        let rep = Self::from_matrices_unchecked(thetas, gamma0)?;
        let defect = relation_defect(&rep);
        if defect > RELATION_TOL {
            return Err(Error::InvalidModel(format!("Clifford relations violated (defect {defect:.3e})")));
        }
        Ok(rep)
    }

    /// Construction that only checks shapes; used to build deliberately
    /// broken representations.
    pub fn from_matrices_unchecked(thetas: Vec<CMat>, gamma0: CMat) -> Result<Self> {
        if thetas.is_empty() {
            return Err(Error::InvalidModel("no Clifford generators".into()));
        }
        let l = gamma0.nrows();
        if !gamma0.is_square() || thetas.iter().any(|t| t.shape() != (l, l)) {
            return Err(Error::DimensionMismatch("Clifford generators must be square ℓ × ℓ".into()));
        }
        Ok(Self { thetas, gamma0 })
    }

    pub fn m(&self) -> usize {
        self.thetas.len()
    }

    pub fn rank(&self) -> usize {
        self.gamma0.nrows()
    }

    pub fn thetas(&self) -> &[CMat] {
        &self.thetas
    }

    pub fn theta(&self, i: usize) -> &CMat {
        &self.thetas[i]
    }

    /// `γ_m := Θ_m`, the generator along the radial direction.
    pub fn gamma_m(&self) -> &CMat {
        self.thetas.last().expect("non-empty generators")
    }

    pub fn gamma0(&self) -> &CMat {
        &self.gamma0
    }

    /// Change of basis `X ↦ U X U⁻¹` on every generator.
    pub fn conjugated(&self, u: &CMat) -> Result<Self> {
        let inv = crate::linalg::inverse(u, "basis change")?;
        Ok(Self { thetas: self.thetas.iter().map(|t| u * t * &inv).collect(), gamma0: u * &self.gamma0 * &inv })
    }
}

/// Max-norm violation of all Clifford and grading relations.
pub fn relation_defect(rep: &CliffordRep) -> f64 {
    let l = rep.rank();
    let id = eye(l);
    let mut worst: f64 = 0.0;
    for (i, ti) in rep.thetas.iter().enumerate() {
        for (j, tj) in rep.thetas.iter().enumerate() {
            let target = if i == j { &id * c(-2.0) } else { CMat::zeros(l, l) };
            worst = worst.max(max_abs(&(anticommutator(ti, tj) - target)));
        }
        worst = worst.max(max_abs(&anticommutator(&rep.gamma0, ti)));
    }
    worst.max(max_abs(&(&rep.gamma0 * &rep.gamma0 - id)))
}

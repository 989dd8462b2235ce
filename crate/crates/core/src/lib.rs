//! Heat content asymptotics for operators of Laplace type `D = P²` under
//! spectral (Atiyah–Patodi–Singer type) boundary conditions.
//!
//! The crate evaluates the closed-form coefficients β₀, β₁, β₂ of the small
//! time expansion
//!
//! ```text
//! β(φ, ρ, D, ℬ)(t) ~ Σₙ βₙ(φ, ρ, D, ℬ) t^{n/2}
//! ```
//!
//! on flat and warped product models `𝕋^{m−1} × [0, 1]`, and checks them
//! against an independent Crank–Nicolson solution of the heat equation.
//!
//! Module map:
//!
//! - [`clifford`]: Clifford representations `Θ₁ … Θ_m` with a grading `γ₀`.
//! - [`model`]: model geometries, connections, `ψ_P`, `ψ_A`, boundary data.
//! - [`fields`]: Fourier-mode sums of radial polynomials for `φ` and `ρ`.
//! - [`spectral`]: the tangential operator `A`, its dual `A^#`, positive
//!   spectral projectors and the action of `P`, `P̃`, `D`, `ℬ`.
//! - [`coeffs`]: closed-form βₙ and the executable identities.
//! - [`oracle`]: heat equation solver, asymptotic fit and comparison.
//! - [`suites`]: invariant suites over a built-in fixture grid.

pub mod clifford;
pub mod coeffs;
mod error;
pub mod fields;
pub mod linalg;
pub mod model;
pub mod oracle;
pub mod poly;
pub mod quadrature;
pub mod spectral;
pub mod suites;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
/// Dense complex matrix (endomorphisms of the fiber `ℂ^ℓ`, and vectors as `ℓ × 1`).
pub type CMat = nalgebra::DMatrix<C64>;

//! Polynomials in the radial variable `r`.
//!
//! [`Poly`] is real scalar (warp profiles). [`MatPoly`] has complex matrix
//! coefficients and carries endomorphism-valued functions of `r` (`ψ_P`,
//! connection forms) as well as vector-valued field profiles, which are
//! stored as `ℓ × 1` matrices.

use crate::{CMat, C64};

/// Real polynomial, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &a| acc * r + a)
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, &a)| k as f64 * a).collect())
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * s).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0.0) {
            self.coeffs.pop();
        }
    }
}

/// Polynomial with `rows × cols` complex matrix coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct MatPoly {
    rows: usize,
    cols: usize,
    coeffs: Vec<CMat>,
}

impl MatPoly {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self { rows, cols, coeffs: Vec::new() }
    }

    pub fn constant(m: CMat) -> Self {
        let (rows, cols) = m.shape();
        let mut p = Self { rows, cols, coeffs: vec![m] };
        p.trim();
        p
    }

    pub fn from_coeffs(rows: usize, cols: usize, coeffs: Vec<CMat>) -> Self {
        assert!(coeffs.iter().all(|c| c.shape() == (rows, cols)), "coefficient shape mismatch");
        let mut p = Self { rows, cols, coeffs };
        p.trim();
        p
    }

    /// `p(r)·m` for a real scalar polynomial `p` and constant matrix `m`.
    pub fn scalar_times(p: &Poly, m: &CMat) -> Self {
        let (rows, cols) = m.shape();
        Self::from_coeffs(rows, cols, p.coeffs().iter().map(|&a| m * C64::new(a, 0.0)).collect())
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn coeffs(&self) -> &[CMat] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, r: f64) -> CMat {
        let rr = C64::new(r, 0.0);
        self.coeffs.iter().rev().fold(CMat::zeros(self.rows, self.cols), |acc, a| acc * rr + a)
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.rows,
            self.cols,
            self.coeffs.iter().enumerate().skip(1).map(|(k, a)| a * C64::new(k as f64, 0.0)).collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "MatPoly::add shape mismatch");
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = CMat::zeros(self.rows, self.cols);
        let coeffs =
            (0..n).map(|k| self.coeffs.get(k).unwrap_or(&zero) + other.coeffs.get(k).unwrap_or(&zero)).collect();
        Self::from_coeffs(self.rows, self.cols, coeffs)
    }

    pub fn neg(&self) -> Self {
        self.scale(C64::new(-1.0, 0.0))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_coeffs(self.rows, self.cols, self.coeffs.iter().map(|a| a * s).collect())
    }

    /// Polynomial product `self · other` (matrix product of coefficients).
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "MatPoly::mul inner dimension mismatch");
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.rows, other.cols);
        }
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        let mut coeffs = vec![CMat::zeros(self.rows, other.cols); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::from_coeffs(self.rows, other.cols, coeffs)
    }

    /// Left multiplication by a constant matrix.
    pub fn left_mul(&self, m: &CMat) -> Self {
        Self::from_coeffs(m.nrows(), self.cols, self.coeffs.iter().map(|a| m * a).collect())
    }

    pub fn right_mul(&self, m: &CMat) -> Self {
        Self::from_coeffs(self.rows, m.ncols(), self.coeffs.iter().map(|a| a * m).collect())
    }

    pub fn transpose(&self) -> Self {
        Self::from_coeffs(self.cols, self.rows, self.coeffs.iter().map(|a| a.transpose()).collect())
    }

    /// Largest coefficient modulus, a cheap size measure.
    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(crate::linalg::max_abs).fold(0.0, f64::max)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.iter().all(|z| *z == C64::new(0.0, 0.0))) {
            self.coeffs.pop();
        }
    }
}

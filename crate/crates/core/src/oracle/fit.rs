//! Least-squares fit of `β(t) ≈ Σ_{n ≤ n_max} b_n t^{n/2}` on a time window.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::HeatContentCurve;
use crate::{Error, Result, C64};

pub const MIN_FIT_POINTS: usize = 12;
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitWindow {
    pub t_min: f64,
    pub t_max: f64,
}

impl Default for FitWindow {
    fn default() -> Self {
        Self { t_min: 1e-5, t_max: 1e-2 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticFit {
    /// `b₀ … b_{n_max}`.
    pub coeffs: Vec<C64>,
    /// Euclidean norm of the residual over the fitted points.
    pub residual: f64,
    /// Condition number of the (column-scaled) design matrix.
    pub condition_number: f64,
    pub points: usize,
    pub window: FitWindow,
}

impl AsymptoticFit {
    pub fn b(&self, n: usize) -> C64 {
        self.coeffs[n]
    }
}

pub fn fit_asymptotics(curve: &HeatContentCurve, n_max: usize, window: FitWindow) -> Result<AsymptoticFit> {
    fit_points(&curve.times, &curve.values, n_max, window)
}

/// Columns are `(t/t_max)^{n/2}` so that they are of unit size at the right
/// end of the window; every point has the same weight.
pub fn fit_points(times: &[f64], values: &[C64], n_max: usize, window: FitWindow) -> Result<AsymptoticFit> {
    let pts: Vec<(f64, C64)> = times
        .iter()
        .zip(values)
        .filter(|(t, _)| **t >= window.t_min * (1.0 - 1e-12) && **t <= window.t_max * (1.0 + 1e-12) && **t > 0.0)
        .map(|(t, v)| (*t, *v))
        .collect();
    let cols = n_max + 1;
    let required = MIN_FIT_POINTS.max(cols);
    if pts.len() < required {
        return Err(Error::TooFewPoints { found: pts.len(), required });
    }
    let x = DMatrix::from_fn(pts.len(), cols, |i, n| (pts[i].0 / window.t_max).powf(n as f64 / 2.0));
    let svd = x.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if cond > MAX_CONDITION {
        return Err(Error::IllConditioned(cond));
    }
    let re = DVector::from_iterator(pts.len(), pts.iter().map(|p| p.1.re));
    let im = DVector::from_iterator(pts.len(), pts.iter().map(|p| p.1.im));
    let solve = |y: &DVector<f64>| svd.solve(y, 0.0).map_err(|_| Error::Singular("asymptotic fit"));
    let (a_re, a_im) = (solve(&re)?, solve(&im)?);
    let (r_re, r_im) = (&x * &a_re - &re, &x * &a_im - &im);
    let residual = (r_re.norm_squared() + r_im.norm_squared()).sqrt();
    let coeffs = (0..cols).map(|n| C64::new(a_re[n], a_im[n]) / window.t_max.powf(n as f64 / 2.0)).collect();
    Ok(AsymptoticFit { coeffs, residual, condition_number: cond, points: pts.len(), window })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    fn geometric(n: usize) -> Vec<f64> {
        (0..n).map(|i| 1e-5 * 1000f64.powf(i as f64 / (n - 1) as f64)).collect()
    }

    #[test]
    fn recovers_model_in_span() {
        let ts = geometric(40);
        let vs: Vec<C64> = ts.iter().map(|t| C64::new(1.0 - 4.0 * (t / PI).sqrt(), 0.0)).collect();
        let fit = fit_points(&ts, &vs, 5, FitWindow::default()).unwrap();
        assert!((fit.b(0).re - 1.0).abs() < 1e-10);
        assert!((fit.b(1).re + 4.0 / PI.sqrt()).abs() < 1e-10);
        assert!(fit.b(2).norm() < 1e-10);
        assert!(fit.condition_number < 1e6);
        assert_eq!(fit.points, 40);
    }

    #[test]
    fn noise_stability() {
        let ts = geometric(40);
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let vs: Vec<C64> =
            ts.iter().map(|t| C64::new(1.0 - 4.0 * (t / PI).sqrt() + rng.random_range(-1e-9..1e-9), 0.0)).collect();
        let fit = fit_points(&ts, &vs, 5, FitWindow::default()).unwrap();
        assert!((fit.b(1).re + 4.0 / PI.sqrt()).abs() < 1e-5);
    }

    #[test]
    fn complex_values_fit_componentwise() {
        let ts = geometric(30);
        let vs: Vec<C64> = ts.iter().map(|t| C64::new(2.0, -1.0) + C64::new(0.5, 3.0) * *t).collect();
        let fit = fit_points(&ts, &vs, 5, FitWindow::default()).unwrap();
        assert!((fit.b(0) - C64::new(2.0, -1.0)).norm() < 1e-10);
        assert!((fit.b(2) - C64::new(0.5, 3.0)).norm() < 1e-6);
    }

    #[test]
    fn too_few_points() {
        let ts = geometric(11);
        let vs = vec![C64::new(1.0, 0.0); 11];
        assert!(matches!(
            fit_points(&ts, &vs, 5, FitWindow::default()),
            Err(Error::TooFewPoints { found: 11, required: 12 })
        ));
    }

    #[test]
    fn narrow_window_is_ill_conditioned() {
        let ts: Vec<f64> = (0..40).map(|i| 1e-2 * (1.0 + 1e-4 * i as f64)).collect();
        let vs = vec![C64::new(1.0, 0.0); 40];
        let w = FitWindow { t_min: 1e-2, t_max: 1.1e-2 };
        assert!(matches!(fit_points(&ts, &vs, 5, w), Err(Error::IllConditioned(_))));
    }
}

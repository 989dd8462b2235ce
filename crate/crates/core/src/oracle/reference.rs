//! Reference curves for solver validation.

use std::f64::consts::PI;

/// `∫₀¹u(r,t)dr` for `u_t = u_rr`, `u(0) = u(1) = 0`, `u(·,0) = 1`:
/// `Σ_{n odd} 8/(n²π²) e^{−n²π²t}`.
///
/// For tiny `t` the series converges slowly; terms are summed until the
/// exponential factor drops below `1e−18`.
pub fn dirichlet_interval_series(t: f64) -> f64 {
    assert!(t > 0.0, "series needs t > 0");
    let mut sum = 0.0;
    let mut n = 1u64;
    loop {
        let k = (n as f64) * PI;
        let decay = (-k * k * t).exp();
        sum += 8.0 / (k * k) * decay;
        if decay < 1e-18 {
            return sum;
        }
        n += 2;
    }
}

/// `log(e_coarse/e_fine)/log(h_coarse/h_fine)`.
pub fn observed_order(err_coarse: f64, err_fine: f64, h_coarse: f64, h_fine: f64) -> f64 {
    (err_coarse / err_fine).ln() / (h_coarse / h_fine).ln()
}

//! Heat equation oracle on small grids: boundary handling, errors, output.

use heat_content::clifford::build_rep;
use heat_content::fields::{DualField, Field};
use heat_content::linalg::eye;
use heat_content::model::{assemble_flat_model, assemble_warped_model, ClosedModel, WarpProfile};
use heat_content::oracle::{
    fit_asymptotics, solve_closed, solve_heat, write_csv, BoundarySpec, FitWindow, RadialGrid, TimeSpec,
};
use heat_content::spectral::BoundaryEndo;
use heat_content::{CMat, Error, C64};

fn coarse_time() -> TimeSpec {
    TimeSpec { outputs: 20, ratio: 1.05, ..TimeSpec::default() }
}

#[test]
fn closed_circle_without_potential_keeps_its_content() {
    let rep = build_rep(2);
    let model = ClosedModel::new(rep, CMat::zeros(4, 4)).unwrap();
    let phi = Field::constant_real(vec![0, 0], &[1.0, 0.0, 0.5, 0.0]);
    let rho = DualField::constant_real(vec![0, 0], &[1.0, 0.0, 2.0, 0.0]);
    let curve = solve_closed(&model, &phi, &rho, &coarse_time()).unwrap();
    let b0 = curve.values[0];
    assert!((b0.re - 2.0 * (2.0 * std::f64::consts::PI).powi(2)).abs() < 1e-11, "{b0}");
    for v in &curve.values {
        assert!((v - b0).norm() < 1e-12);
    }
}

#[test]
fn spectral_and_mixed_curves_agree_on_a_flat_interval() {
    let rep = build_rep(1);
    let d1 = 0.5;
    let model = assemble_flat_model(1, &rep, d1, 1.0, &[]).unwrap();
    let s = BoundaryEndo::from_radial(&(rep.gamma0() * C64::new(d1, 0.0)));
    let phi = Field::constant_real(vec![], &[1.0, 0.7]);
    let rho = DualField::constant_real(vec![], &[0.4, 1.0]);
    let grid = RadialGrid::new(128).unwrap();
    let a = solve_heat(&model, &phi, &rho, &BoundarySpec::Spectral, grid, &coarse_time()).unwrap();
    let b = solve_heat(&model, &phi, &rho, &BoundarySpec::Mixed(s), grid, &coarse_time()).unwrap();
    assert_eq!(a.meta.boundary, "spectral");
    assert_eq!(b.meta.boundary, "mixed");
    for (x, y) in a.values.iter().zip(&b.values) {
        assert!((x - y).norm() < 1e-12);
    }
}

#[test]
fn degenerate_mixed_constraint_is_reported() {
    // Ξ₋(ε·a₀ + 2h·ε·s) vanishes on the lower block when s = 3/(2h)
    let rep = build_rep(1);
    let model = assemble_flat_model(1, &rep, 0.0, 1.0, &[]).unwrap();
    let grid = RadialGrid::new(99).unwrap();
    let s = BoundaryEndo::from_radial(&(eye(2) * C64::new(1.5 / grid.h(), 0.0)));
    let phi = Field::constant_real(vec![], &[1.0, 1.0]);
    let rho = DualField::constant_real(vec![], &[1.0, 1.0]);
    match solve_heat(&model, &phi, &rho, &BoundarySpec::Mixed(s), grid, &coarse_time()) {
        Err(Error::SingularConstraint { .. }) => {}
        other => panic!("expected a singular constraint, got {other:?}"),
    }
}

#[test]
fn spectral_gap_failure_names_the_mode() {
    let model = assemble_flat_model(2, &build_rep(2), 0.0, 0.0, &[0.0]).unwrap();
    let phi = Field::constant_real(vec![0], &[1.0, 0.0, 0.0, 0.0]);
    let rho = DualField::constant_real(vec![0], &[1.0, 0.0, 0.0, 0.0]);
    let grid = RadialGrid::new(64).unwrap();
    match solve_heat(&model, &phi, &rho, &BoundarySpec::Spectral, grid, &coarse_time()) {
        Err(Error::ProjectorAt { mode, .. }) => assert_eq!(mode, vec![0]),
        other => panic!("expected a projector failure, got {other:?}"),
    }
}

#[test]
fn warped_models_reject_tangential_modes() {
    let model = assemble_warped_model(2, &build_rep(2), &WarpProfile::bump(0.4), 1.0).unwrap();
    let phi = Field::constant_real(vec![1], &[1.0, 0.0, 0.0, 0.0]);
    let rho = DualField::constant_real(vec![-1], &[1.0, 0.0, 0.0, 0.0]);
    let grid = RadialGrid::new(64).unwrap();
    assert!(matches!(
        solve_heat(&model, &phi, &rho, &BoundarySpec::Spectral, grid, &coarse_time()),
        Err(Error::NonRadialWarped(_))
    ));
}

#[test]
fn grid_must_be_fine_enough() {
    assert!(matches!(RadialGrid::new(10), Err(Error::InvalidParameter(_))));
}

#[test]
fn csv_has_header_and_one_row_per_time() {
    let model = assemble_flat_model(1, &build_rep(1), 0.0, 1.0, &[]).unwrap();
    let phi = Field::constant_real(vec![], &[1.0, 0.0]);
    let rho = DualField::constant_real(vec![], &[1.0, 0.0]);
    let curve =
        solve_heat(&model, &phi, &rho, &BoundarySpec::Spectral, RadialGrid::new(64).unwrap(), &coarse_time()).unwrap();
    let mut buf = Vec::new();
    write_csv(&curve, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,beta_real,beta_imag");
    assert_eq!(lines.len(), curve.len() + 1);
    let first: Vec<f64> = lines[1].split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(first[0], 0.0);
    assert!((first[1] - 1.0).abs() < 1e-3);
}

#[test]
fn coarse_dirichlet_fit_sees_the_boundary_term() {
    // Dirichlet entry: β = 1 − (4/√π)√t up to exponentially small terms
    let model = assemble_flat_model(1, &build_rep(1), 0.0, 1.0, &[]).unwrap();
    let phi = Field::constant_real(vec![], &[1.0, 0.0]);
    let rho = DualField::constant_real(vec![], &[1.0, 0.0]);
    let curve =
        solve_heat(&model, &phi, &rho, &BoundarySpec::Spectral, RadialGrid::new(256).unwrap(), &TimeSpec::default())
            .unwrap();
    let fit = fit_asymptotics(&curve, 2, FitWindow::default()).unwrap();
    assert!((fit.b(0).re - 1.0).abs() < 1e-3);
    assert!((fit.b(1).re + 4.0 / std::f64::consts::PI.sqrt()).abs() < 3e-2, "{:?}", fit.coeffs);
}

//! Randomized invariants over model parameters and fields.

use heat_content::clifford::{build_rep, dual_endo, relation_defect};
use heat_content::coeffs::{beta_spectral, greens_defect, symmetry_defect};
use heat_content::fields::Mode;
use heat_content::linalg::{eye, max_abs};
use heat_content::model::{assemble_flat_model, assemble_warped_model, Component, WarpProfile};
use heat_content::oracle::{fit_points, BlockTridiag, FitWindow, Workspace};
use heat_content::spectral::{boundary_a, pos_projector, DEFAULT_GAP_TOL};
use heat_content::suites::{compatible_dual_field, compatible_field, duality_defect, random_dual_field, random_field};
use heat_content::{CMat, C64};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn modes() -> Vec<Mode> {
    vec![vec![0], vec![1], vec![-2]]
}

fn random_matrix(l: usize, rng: &mut StdRng) -> CMat {
    CMat::from_fn(l, l, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // δ₂ stays away from the integers |k|, where A_k loses its gap.
    #[test]
    fn greens_formula_on_compatible_fields(
        d1 in 0.0f64..1.0, d2 in 0.1f64..0.9, tw in -0.6f64..0.6, seed in any::<u64>()
    ) {
        let model = assemble_flat_model(2, &build_rep(2), d1, d2, &[tw]).unwrap();
        let mut rng = StdRng::seed_from_u64(seed);
        let phi = compatible_field(4, &modes(), &mut rng);
        let rho = compatible_dual_field(4, &modes(), &mut rng);
        prop_assert!(greens_defect(&phi, &rho, &model).unwrap() < 1e-9);
    }

    #[test]
    fn coefficients_are_symmetric(
        d1 in 0.0f64..1.0, d2 in 0.1f64..0.9, tw in -0.6f64..0.6, seed in any::<u64>()
    ) {
        let model = assemble_flat_model(2, &build_rep(2), d1, d2, &[tw]).unwrap();
        let mut rng = StdRng::seed_from_u64(seed);
        let phi = random_field(4, &modes(), 3, &mut rng);
        let rho = random_dual_field(4, &modes(), 3, &mut rng);
        for n in 0..3 {
            prop_assert!(symmetry_defect(n, &phi, &rho, &model).unwrap() < 1e-9);
        }
    }

    #[test]
    fn warped_coefficients_are_symmetric(s in -0.8f64..0.8, d2 in 0.2f64..2.0, seed in any::<u64>()) {
        let model = assemble_warped_model(2, &build_rep(2), &WarpProfile::bump(s), d2).unwrap();
        let mut rng = StdRng::seed_from_u64(seed);
        let phi = random_field(4, &[vec![0]], 3, &mut rng);
        let rho = random_dual_field(4, &[vec![0]], 3, &mut rng);
        for n in 0..3 {
            prop_assert!(symmetry_defect(n, &phi, &rho, &model).unwrap() < 1e-9);
        }
    }

    #[test]
    fn coefficients_are_bilinear(d2 in 0.1f64..0.9, a in -2.0f64..2.0, seed in any::<u64>()) {
        let model = assemble_flat_model(2, &build_rep(2), 0.3, d2, &[0.2]).unwrap();
        let mut rng = StdRng::seed_from_u64(seed);
        let phi = random_field(4, &modes(), 2, &mut rng);
        let psi = random_field(4, &modes(), 2, &mut rng);
        let rho = random_dual_field(4, &modes(), 2, &mut rng);
        let s = C64::new(a, 0.5);
        for n in 0..3 {
            let lhs = beta_spectral(n, &phi.add(&psi.scale(s)), &rho, &model).unwrap().value;
            let rhs = beta_spectral(n, &phi, &rho, &model).unwrap().value
                + beta_spectral(n, &psi, &rho, &model).unwrap().value * s;
            prop_assert!((lhs - rhs).norm() < 1e-10 * lhs.norm().max(1.0));
        }
    }

    #[test]
    fn duality_holds_off_the_singular_set(d1 in 0.0f64..1.0, d2 in 0.05f64..0.95, k in -3i64..=3) {
        let model = assemble_flat_model(2, &build_rep(2), d1, d2, &[0.3]).unwrap();
        for comp in Component::ALL {
            prop_assert!(duality_defect(&model, comp, &[k]).unwrap() < 1e-10);
        }
    }

    #[test]
    fn projector_is_idempotent_and_commutes(d2 in 0.1f64..0.9, k in -3i64..=3, tw in -0.6f64..0.6) {
        let model = assemble_flat_model(2, &build_rep(2), 0.0, d2, &[tw]).unwrap();
        for comp in Component::ALL {
            let a = boundary_a(&model, comp, &[k]).unwrap();
            let p = pos_projector(&a, DEFAULT_GAP_TOL).unwrap();
            prop_assert!(max_abs(&(&p.proj * &p.proj - &p.proj)) < 1e-10);
            prop_assert!(max_abs(&(&p.proj * &a - &a * &p.proj)) < 1e-10);
            prop_assert_eq!(p.rank, 2);
        }
    }

    #[test]
    fn conjugated_reps_satisfy_the_relations(seed in any::<u64>(), m in 1usize..=4) {
        let mut rng = StdRng::seed_from_u64(seed);
        let rep = build_rep(m);
        let u = random_matrix(rep.rank(), &mut rng).qr().q();
        prop_assert!(relation_defect(&rep.conjugated(&u).unwrap()) < 1e-12);
    }

    #[test]
    fn dual_reverses_products(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (a, b) = (random_matrix(3, &mut rng), random_matrix(3, &mut rng));
        prop_assert!(max_abs(&(dual_endo(&(&a * &b)) - dual_endo(&b) * dual_endo(&a))) < 1e-13);
    }

    #[test]
    fn fit_recovers_expansion_coefficients(b in proptest::array::uniform5(-3.0f64..3.0)) {
        let times: Vec<f64> = (0..40).map(|i| 1e-5 * 1000f64.powf(i as f64 / 39.0)).collect();
        let values: Vec<C64> = times
            .iter()
            .map(|t| (0..5).map(|n| C64::new(b[n] * t.powf(n as f64 / 2.0), 0.0)).sum())
            .collect();
        let fit = fit_points(&times, &values, 4, FitWindow::default()).unwrap();
        for (n, bn) in b.iter().enumerate().take(3) {
            prop_assert!((fit.b(n).re - bn).abs() < 1e-6 * bn.abs().max(1.0));
        }
    }

    #[test]
    fn block_solve_inverts_the_shifted_operator(seed in any::<u64>(), l in 1usize..=4, n in 2usize..12) {
        let mut rng = StdRng::seed_from_u64(seed);
        let lower: Vec<CMat> = (0..n).map(|_| random_matrix(l, &mut rng)).collect();
        let diag: Vec<CMat> = (0..n).map(|_| random_matrix(l, &mut rng) + eye(l) * C64::new(8.0, 0.0)).collect();
        let upper: Vec<CMat> = (0..n).map(|_| random_matrix(l, &mut rng)).collect();
        let t = BlockTridiag::from_blocks(&lower, &diag, &upper);
        let x: Vec<C64> = (0..n * l).map(|_| C64::new(rng.random_range(-1.0..1.0), 0.0)).collect();
        let s = C64::new(0.25, 0.0);
        let mut b = vec![C64::new(0.0, 0.0); n * l];
        t.apply(&x, &mut b);
        for (bi, xi) in b.iter_mut().zip(&x) {
            *bi = xi + *bi * s;
        }
        t.solve_shifted(s, &mut b, &mut Workspace::default()).unwrap();
        for (y, x) in b.iter().zip(&x) {
            prop_assert!((y - x).norm() < 1e-10);
        }
    }
}

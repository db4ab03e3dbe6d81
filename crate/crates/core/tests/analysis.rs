mod common;

use common::*;
use neurodyn::analysis::{
    asymptotic_residual, attach_lyapunov, check_decay_bound, convergence_time, fit_decay_rate,
    is_non_increasing, late_window, lyapunov_degenerate, lyapunov_series, lyapunov_unique,
    theoretical_rates, AnalysisError, LyapunovKind,
};
use neurodyn::experiments::{gen_prescribed, initial_states};
use neurodyn::integrator::{prefactorize, SolvableModel};
use neurodyn::linalg::{least_squares, null_space, DenseMatrix, DenseVector};
use neurodyn::models::{LinearProblem, ModelKind, NeuralModel};
use proptest::prelude::*;
use rand::Rng;

fn ignn(p: &LinearProblem, gamma: f64) -> SolvableModel {
    prefactorize(NeuralModel::new(ModelKind::Ignn, p.clone(), gamma).unwrap()).unwrap()
}

fn random_problem(seed: u64) -> LinearProblem {
    let mut r = rng(seed);
    let n = r.random_range(1..=5);
    let singular = n > 1 && r.random_bool(0.5);
    let a = if singular {
        let k = r.random_range(1..n);
        random_matrix(&mut r, n, k)
            .matmul(&random_matrix(&mut r, k, n))
            .unwrap()
    } else {
        random_matrix(&mut r, n, n).shift_diagonal(2.0).unwrap()
    };
    LinearProblem::new(a, random_vector(&mut r, n, 1.0)).unwrap()
}

/// `½·Σᵢ (Σⱼ Wᵢⱼ·eⱼ)²` with `W = AᵀA + I` assembled entry by entry.
fn weighted_energy(a: &DenseMatrix, e: &[f64]) -> f64 {
    let n = a.rows();
    let mut total = 0.0;
    for i in 0..n {
        let mut s = 0.0;
        for j in 0..n {
            let mut w = if i == j { 1.0 } else { 0.0 };
            for k in 0..n {
                w += a[(k, i)] * a[(k, j)];
            }
            s += w * e[j];
        }
        total += s * s;
    }
    0.5 * total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn lyapunov_never_increases_along_ignn(seed in any::<u64>()) {
        let p = random_problem(seed);
        let x0 = random_vector(&mut rng(seed ^ 3), p.n(), 2.0);
        let s = ignn(&p, 1000.0);
        let h = s.default_step();
        let traj = attach_lyapunov(s.integrate(&x0, 400.0 * h, h, 1).unwrap(), &p).unwrap();
        let phi = traj.lyapunov.as_ref().unwrap();
        prop_assert!(is_non_increasing(phi, 1e-12 * phi[0].max(1.0)));
    }

    #[test]
    fn error_weighted_energy_matches_direct_sum(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(1..=5);
        let a = random_matrix(&mut r, n, n).shift_diagonal(2.0).unwrap();
        let p = LinearProblem::new(a.clone(), random_vector(&mut r, n, 1.0)).unwrap();
        let x = random_vector(&mut r, n, 2.0);
        let e: Vec<f64> = x.iter().zip(p.x_star().unwrap().iter()).map(|(a, b)| a - b).collect();
        let want = weighted_energy(&a, &e);
        let got = lyapunov_unique(&p, &x).unwrap();
        prop_assert!((got - want).abs() <= 1e-10 * want.max(1.0));
    }

    #[test]
    fn both_candidates_vanish_only_at_solutions(seed in any::<u64>()) {
        let p = random_problem(seed);
        let mut r = rng(seed ^ 5);
        let ls = least_squares(p.a(), p.b()).unwrap();
        let floor = lyapunov_degenerate(&p, &ls.solution).unwrap();
        // flat along the null space, minimal at the least-squares set
        for v in null_space(p.a()).unwrap() {
            let moved = ls.solution.add_scaled(r.random_range(-3.0..3.0), &v).unwrap();
            let val = lyapunov_degenerate(&p, &moved).unwrap();
            prop_assert!((val - floor).abs() <= 1e-9 * floor.max(1.0));
        }
        for _ in 0..50 {
            let x = random_vector(&mut r, p.n(), 3.0);
            prop_assert!(lyapunov_degenerate(&p, &x).unwrap() >= floor - 1e-12);
        }
        if let Some(x_star) = p.x_star() {
            prop_assert!(lyapunov_unique(&p, x_star).unwrap() <= 1e-20);
            prop_assert!(lyapunov_degenerate(&p, x_star).unwrap() <= 1e-20);
            prop_assert!(ls.solution.sub(x_star).unwrap().norm() <= 1e-9);
        } else {
            prop_assert!(lyapunov_unique(&p, &ls.solution).is_err());
        }
    }
}

#[test]
fn decay_bound_holds_on_random_problems() {
    for seed in 0..20u64 {
        let mut r = rng(seed);
        let n = r.random_range(2..=5);
        let a = random_matrix(&mut r, n, n).shift_diagonal(1.5).unwrap();
        let p = LinearProblem::new(a, random_vector(&mut r, n, 1.0)).unwrap();
        let x0 = random_vector(&mut r, n, 2.0);
        let s = ignn(&p, 1000.0);
        // stop while the error is still far above rounding level
        let t_end = 10.0 / theoretical_rates(&p, 1000.0).unwrap().modal_rate;
        let traj = s.integrate(&x0, t_end, s.default_step(), 1).unwrap();
        let check = check_decay_bound(&traj, &p, 1000.0, 1e-3).unwrap();
        assert!(check.samples_checked > 50);
        assert!(
            check.passed(),
            "seed {seed}: shortfall {}",
            check.worst_shortfall
        );
    }
}

#[test]
fn fitted_rate_matches_slowest_mode() {
    for seed in 0..20u64 {
        let mut r = rng(1000 + seed);
        let n = r.random_range(2..=5);
        let s_min = r.random_range(0.1..0.5);
        let mut sigma = vec![s_min];
        for _ in 1..n {
            sigma.push(r.random_range(3.0 * s_min..3.0));
        }
        sigma.sort_by(f64::total_cmp);
        let p = gen_prescribed(n, &sigma, seed).unwrap();
        let gamma = 1000.0;
        let rates = theoretical_rates(&p, gamma).unwrap();
        assert!((rates.alpha - s_min * s_min).abs() <= 1e-9);
        assert!((rates.modal_rate - gamma * rates.alpha / (1.0 + rates.alpha)).abs() < 1e-9);

        let x0 = &initial_states(n, 1, seed)[0];
        let traj = ignn(&p, gamma)
            .integrate_default(x0, 20.0 / rates.modal_rate)
            .unwrap();
        let fitted = fit_decay_rate(&traj, late_window(&traj)).unwrap();
        let rel = (fitted - rates.modal_rate).abs() / rates.modal_rate;
        assert!(
            rel <= 0.03,
            "seed {seed}: fitted {fitted} vs modal {}",
            rates.modal_rate
        );
    }
}

#[test]
fn rates_for_figure_spectrum() {
    let p = gen_prescribed(3, &[0.2345f64.sqrt(), 1.0, 1.5], 1).unwrap();
    let rates = theoretical_rates(&p, 1000.0).unwrap();
    assert!((rates.alpha - 0.2345).abs() < 1e-12);
    assert!((rates.beta - 1.2345).abs() < 1e-12);
    assert!((rates.paper_rate - 234.5).abs() < 1e-9);
    assert!((rates.modal_rate - 234.5 / 1.2345).abs() < 1e-9);
}

#[test]
fn singular_rates_are_zero() {
    let p = LinearProblem::new(a_s(), vector(&[1.0, 1.0, 1.0])).unwrap();
    let rates = theoretical_rates(&p, 1000.0).unwrap();
    assert_eq!(rates.alpha, 0.0);
    assert_eq!(rates.paper_rate, 0.0);
    assert_eq!(rates.modal_rate, 0.0);
    assert!((rates.beta - 1.0).abs() < 1e-12);
    assert!(theoretical_rates(&p, 0.0).is_err());
}

#[test]
fn convergence_time_matches_scalar_decay() {
    // residual = ‖b‖·exp(−γt/2) exactly for A = I
    let b = vector(&[1.0, 2.0, 2.0]);
    let p = LinearProblem::new(DenseMatrix::identity(3), b).unwrap();
    let gamma = 1000.0;
    let traj = ignn(&p, gamma)
        .integrate_default(&DenseVector::zeros(3), 0.05)
        .unwrap();
    for thr in [1e-1, 1e-3, (-7.0f64).exp()] {
        let want = 2.0 * (3.0 / thr).ln() / gamma;
        let got = convergence_time(&traj, thr).unwrap();
        assert!((got - want).abs() <= 1e-4 * want, "{got} vs {want}");
    }
    assert_eq!(convergence_time(&traj, 1e-30), None);
    assert_eq!(convergence_time(&traj, 10.0), Some(0.0));
}

#[test]
fn asymptotic_residual_needs_a_plateau() {
    let p = LinearProblem::new(a_s(), vector(&[1.0, 1.0, 1.0])).unwrap();
    let s = ignn(&p, 1000.0);
    let x0 = vector(&[2.0, -1.0, 0.5]);
    let short = s.integrate_default(&x0, 0.002).unwrap();
    assert!(matches!(
        asymptotic_residual(&short),
        Err(AnalysisError::NotSettled { .. })
    ));
    let long = s.integrate_default(&x0, 0.1).unwrap();
    let r = asymptotic_residual(&long).unwrap();
    assert!((r - 1.0 / 3f64.sqrt()).abs() <= 1e-9);
}

#[test]
fn candidate_choice_follows_solvability() {
    let unique = LinearProblem::new(DenseMatrix::identity(2), vector(&[1.0, 1.0])).unwrap();
    let singular = LinearProblem::new(a_s(), vector(&[0.0, 1.0, 1.0])).unwrap();
    assert_eq!(
        LyapunovKind::for_problem(&unique),
        LyapunovKind::ErrorWeighted
    );
    assert_eq!(
        LyapunovKind::for_problem(&singular),
        LyapunovKind::GradientResidual
    );
    let s = ignn(&singular, 10.0);
    let traj = s.integrate_default(&DenseVector::zeros(3), 0.01).unwrap();
    assert!(lyapunov_series(&traj, &singular, LyapunovKind::ErrorWeighted).is_err());
    assert!(check_decay_bound(&traj, &singular, 10.0, 0.0).is_err());
}

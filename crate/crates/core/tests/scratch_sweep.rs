use gks_core::operators::{build_gaussian_blur, build_gradient_1d};
use gks_core::solver::{cr_lq_rmm_gks, SolverConfig};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
#[ignore]
fn sweep_epsilon_l1() {
    let n = 80;
    let a = build_gaussian_blur(n, 1.5, 6).unwrap();
    let l = build_gradient_1d(n).unwrap();
    let x_true = DVector::from_fn(n, |i, _| {
        if i < n / 3 {
            0.0
        } else if i < 2 * n / 3 {
            1.0
        } else {
            0.3
        }
    });
    let clean = a.apply(&x_true);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut g = DVector::from_fn(n, |_, _| rng.gen_range(-1.0_f64..1.0));
    g /= g.norm();
    let delta = 0.01 * clean.norm();
    let b = &clean + delta * &g;

    for eps in [1e-4_f64, 1e-3, 1e-2, 3e-2, 1e-1] {
        for n_outer in [1usize, 10] {
            let config = SolverConfig {
                q: 1.0,
                epsilon: eps,
                n_outer,
                total_budget: 300,
                inner_tol: if n_outer == 1 { 0.0 } else { 1e-5 },
                ..SolverConfig::default()
            };
            let out = cr_lq_rmm_gks(&a, &l, &b, &config, delta, Some(&x_true), 13);
            let best = out
                .log
                .records()
                .iter()
                .filter_map(|r| r.rre)
                .fold(f64::INFINITY, f64::min);
            eprintln!(
                "eps={eps:.0e} n_outer={n_outer}: final_rre={:.5} best={best:.5} outers={} iters={}",
                out.log.final_rre().unwrap(),
                out.outer_iterations,
                out.iterations
            );
        }
    }
}

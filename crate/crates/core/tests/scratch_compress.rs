use gks_core::operators::{build_gradient_1d, LinearOperator};
use gks_core::solver::{
    basis_combination, golub_kahan_basis, operator_times_basis, scale_block_rows,
    ProjectedProblem, SubspaceState,
};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
#[ignore]
fn sweep_compress_configs() {
    for decay in [0.3_f64, 0.5, 0.7] {
        for lambda in [0.001_f64, 0.01, 0.1, 1.0] {
            for seed in [101_u64, 202, 303] {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let n = 20;
                let u = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0_f64..1.0)).qr().q();
                let vt = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0_f64..1.0)).qr().q();
                let mut s = DMatrix::zeros(n, n);
                s.set_diagonal(&DVector::from_fn(n, |i, _| decay.powi(i as i32)));
                let a_mat = u * s * vt.transpose();
                let a = LinearOperator::from_dense(a_mat.clone());
                let l_op = build_gradient_1d(n).unwrap();
                let x_true = DVector::from_fn(n, |i, _| if i < n / 2 { 1.0 } else { 0.2 });
                let clean = &a_mat * &x_true;
                let mut g = DVector::from_fn(n, |_, _| rng.gen_range(-1.0_f64..1.0));
                g /= g.norm();
                let b = &clean + 0.01 * clean.norm() * g;
                let w = DVector::from_element(n - 1, 1.0);

                let basis = golub_kahan_basis(&a, &b, 10, &mut rng);
                let k_min = 4;

                let objective = |cols: &[DVector<f64>]| -> f64 {
                    let g_a = operator_times_basis(&a, cols);
                    let g_l =
                        scale_block_rows(&operator_times_basis(l_op.operator(), cols), &w);
                    let sol = ProjectedProblem::new(g_a, g_l, &b).solve(lambda);
                    let x = basis_combination(cols, &sol.z);
                    let fit = &a_mat * &x - &b;
                    let mut lx = l_op.apply(&x);
                    for i in 0..lx.len() {
                        lx[i] *= w[i];
                    }
                    fit.norm_squared() + lambda * lx.norm_squared()
                };

                let mut st = SubspaceState::new(basis.clone(), n, w.clone());
                st.compress_with_operators(&a, l_op.operator(), &w, lambda, k_min);
                let j_c = objective(st.basis());

                let mut violations = 0;
                let mut worst: f64 = 0.0;
                for _ in 0..50 {
                    let mix = DMatrix::from_fn(10, k_min, |_, _| rng.gen_range(-1.0_f64..1.0))
                        .qr()
                        .q();
                    let cols: Vec<DVector<f64>> = (0..k_min)
                        .map(|j| {
                            let mut c = DVector::zeros(n);
                            for i in 0..10 {
                                c.axpy(mix[(i, j)], &basis[i], 1.0);
                            }
                            c
                        })
                        .collect();
                    let j_r = objective(&cols);
                    if j_c > j_r + 1e-9 {
                        violations += 1;
                        worst = worst.max((j_c - j_r) / j_r);
                    }
                }
                eprintln!(
                    "decay={decay} lambda={lambda} seed={seed}: violations={violations}/50 worst_rel={worst:.3}"
                );
            }
        }
    }
}

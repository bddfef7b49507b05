use num_complex::Complex64;
use proptest::prelude::*;

use numrad::bounds::{self, BoundId, FunctionPair, MatrixContext, Probe};
use numrad::io::{parse_json, to_json};
use numrad::linalg::{
    abs_left, abs_right, apply_herm_fn, cartesian_decomp, herm_eigen, herm_norm, m_min,
    operator_norm, svd, ComplexMatrix,
};
use numrad::radius::{radius_sample_oracle, RadiusConfig};
use numrad::rng;
use numrad::tolerance;

fn cfg() -> RadiusConfig {
    RadiusConfig {
        grid_points: 64,
        ..RadiusConfig::default()
    }
}

fn square(max_n: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), n * n).prop_map(move |v| {
            let data = v
                .into_iter()
                .map(|(re, im)| Complex64::new(re, im))
                .collect();
            ComplexMatrix::new(n, n, data).unwrap()
        })
    })
}

fn square_pair(max_n: usize) -> impl Strategy<Value = (ComplexMatrix, ComplexMatrix)> {
    (1..=max_n).prop_flat_map(|n| {
        let entries = || prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), n * n);
        (entries(), entries()).prop_map(move |(a, b)| {
            let mk = |v: Vec<(f64, f64)>| {
                ComplexMatrix::new(
                    n,
                    n,
                    v.into_iter()
                        .map(|(re, im)| Complex64::new(re, im))
                        .collect(),
                )
                .unwrap()
            };
            (mk(a), mk(b))
        })
    })
}

fn psd(g: &ComplexMatrix) -> ComplexMatrix {
    g.adjoint().matmul(g).unwrap().hermitian_part()
}

fn omega(a: &ComplexMatrix) -> (f64, f64) {
    bounds::radius_enclosure(a, &cfg()).unwrap()
}

/// Enclosures agree up to `tol`.
fn overlap(x: (f64, f64), y: (f64, f64), tol: f64) -> bool {
    x.0 <= y.1 + tol && y.0 <= x.1 + tol
}

fn assert_close(label: &str, got: f64, want: f64, tol: f64) -> Result<(), TestCaseError> {
    prop_assert!(
        (got - want).abs() <= tol,
        "{}: {} vs {} (tol {:e})",
        label,
        got,
        want,
        tol
    );
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn eigendecomposition_reconstructs(g in square(8)) {
        let h = g.hermitian_part();
        let eig = herm_eigen(&h).unwrap();
        let back = eig.reconstruct_with(&eig.eigenvalues);
        prop_assert!((&back - &h).max_abs() <= 1e-12 * h.max_abs().max(1.0));
        prop_assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn svd_reconstructs(a in square(8)) {
        let s = svd(&a).unwrap();
        prop_assert!((&s.reconstruct() - &a).max_abs() <= 1e-12 * a.max_abs().max(1.0));
        prop_assert!(s.singular_values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn function_of_abs_commutes_with_norm(a in square(8)) {
        let abs = abs_left(&a).unwrap();
        let norm = operator_norm(&a).unwrap();
        let fs: [(&str, fn(f64) -> f64); 4] = [
            ("x^2", |x| x * x),
            ("x^3", |x| x.powi(3)),
            ("x^4", |x| x.powi(4)),
            ("x+sqrt(x)", |x| x + x.sqrt()),
        ];
        for (name, f) in fs {
            let lhs = herm_norm(&apply_herm_fn(&abs, |x| f(x.max(0.0))).unwrap()).unwrap();
            assert_close(name, lhs, f(norm), tolerance(f(norm)))?;
        }
    }

    #[test]
    fn parallelogram_law((a, b) in square_pair(8)) {
        let sq = |x: &ComplexMatrix| {
            let m = abs_left(x).unwrap();
            m.matmul(&m).unwrap()
        };
        let lhs = &sq(&(&a + &b)) + &sq(&(&a - &b));
        let rhs = (&sq(&a) + &sq(&b)).scale_real(2.0);
        let scale = herm_norm(&rhs.hermitian_part()).unwrap();
        prop_assert!(herm_norm(&(&lhs - &rhs).hermitian_part()).unwrap() <= tolerance(scale));
    }

    #[test]
    fn positive_sum_dominates((g, h) in square_pair(8)) {
        let (p, q) = (psd(&g), psd(&h));
        let (np, nq) = (herm_norm(&p).unwrap(), herm_norm(&q).unwrap());
        let sum = herm_norm(&(&p + &q)).unwrap();
        prop_assert!(np.max(nq) <= sum + tolerance(sum));
    }

    #[test]
    fn cartesian_identities(a in square(8), seed in any::<u64>()) {
        let (b, c) = cartesian_decomp(&a).unwrap();
        let left = (&abs_left(&a).unwrap().matmul(&abs_left(&a).unwrap()).unwrap()
            + &abs_right(&a).unwrap().matmul(&abs_right(&a).unwrap()).unwrap())
            .scale_real(0.25);
        let right = (&b.matmul(&b).unwrap() + &c.matmul(&c).unwrap()).scale_real(0.5);
        let scale = operator_norm(&a).unwrap().powi(2);
        prop_assert!((&left - &right).frobenius_norm() <= tolerance(scale));

        let mut r = rng::stream(seed, 0, 0);
        for _ in 0..100 {
            let x = rng::haar_unit_vector(&mut r, a.rows());
            let q = a.quadratic_form(&x).norm_sqr();
            let (qb, qc) = (b.quadratic_form(&x).re, c.quadratic_form(&x).re);
            assert_close("|<Ax,x>|^2", q, qb * qb + qc * qc, tolerance(scale))?;
        }
    }

    #[test]
    fn absolute_values_are_positive(a in square(8)) {
        let tau = tolerance(operator_norm(&a).unwrap());
        prop_assert!(m_min(&abs_left(&a).unwrap()).unwrap() >= -tau);
        prop_assert!(m_min(&abs_right(&a).unwrap()).unwrap() >= -tau);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn enclosure_is_sound(a in square(8), seed in any::<u64>()) {
        let est = numrad::numerical_radius(&a, &cfg()).unwrap();
        prop_assert!(est.lower <= est.upper);
        prop_assert!(est.width() <= 1e-9 * operator_norm(&a).unwrap().max(1.0));
        let oracle = radius_sample_oracle(&a, 2000, seed).unwrap();
        prop_assert!(oracle <= est.upper + tolerance(est.upper));
        let witness = a.quadratic_form(&est.witness).norm();
        assert_close("witness", witness, est.lower, tolerance(est.lower))?;
    }

    #[test]
    fn norm_sandwich(a in square(8)) {
        let norm = operator_norm(&a).unwrap();
        let (lo, hi) = omega(&a);
        let tau = tolerance(norm);
        prop_assert!(0.5 * norm - tau <= hi && lo <= norm + tau);
    }

    #[test]
    fn power_inequality(a in square(6)) {
        let (_, hi) = omega(&a);
        for k in [2u32, 3, 4] {
            let (lo_k, _) = omega(&a.pow(k).unwrap());
            let rhs = hi.powi(k as i32);
            prop_assert!(lo_k <= rhs + tolerance(rhs), "k = {}: {} > {}", k, lo_k, rhs);
        }
    }

    #[test]
    fn scale_and_adjoint_invariance(a in square(6), re in -4.0..4.0f64, im in -4.0..4.0f64) {
        let alpha = Complex64::new(re, im);
        let w = omega(&a);
        let scaled = omega(&a.scale(alpha));
        let m = alpha.norm();
        let tau = tolerance(m * w.1);
        prop_assert!(overlap(scaled, (m * w.0, m * w.1), tau));
        prop_assert!(overlap(omega(&a.adjoint()), w, tolerance(w.1)));
    }

    #[test]
    fn unitary_invariance((a, g) in square_pair(6)) {
        let u = herm_eigen(&g.hermitian_part()).unwrap().eigenvectors;
        let conj = u.adjoint().matmul(&a).unwrap().matmul(&u).unwrap();
        let w = omega(&a);
        prop_assert!(overlap(omega(&conj), w, tolerance(w.1)));
    }

    #[test]
    fn chains_hold(a in square(6)) {
        let ctx = MatrixContext::new(&a, &cfg()).unwrap();
        let ids: Vec<BoundId> = BoundId::ALL
            .into_iter()
            .filter(|id| id.arity() == 1 && !id.is_diagnostic())
            .collect();
        for probe in Probe::expand(&ids, &[2.0, 3.0, 4.0]) {
            let out = bounds::evaluate(&ctx, &probe, None).unwrap();
            prop_assert!(!out.violated(), "{}: {:?}", probe.label(), out);
        }
    }

    #[test]
    fn refinement_ordering(a in square(6)) {
        let ctx = MatrixContext::new(&a, &cfg()).unwrap();
        let t1 = bounds::chain_t1(&ctx).unwrap();
        let t3 = bounds::bound_t3(&ctx).unwrap();
        let sq = bounds::chain_sq(&ctx).unwrap();
        prop_assert!(t1.terms[1] >= t1.terms[0] - tolerance(t1.terms[1]));
        prop_assert!(t3.rhs <= sq.terms[2] + tolerance(sq.terms[2]));
    }

    #[test]
    fn corollary_matches_functional_chain(a in square(6)) {
        let ctx = MatrixContext::new(&a, &cfg()).unwrap();
        for r in [2.0, 3.0, 4.0] {
            let cor = bounds::chain_cor(&ctx, r).unwrap();
            let func = bounds::chain_functional(&ctx, &FunctionPair::power_sqrt(r)).unwrap();
            assert_close("middle", cor.terms[1], func.terms[1], tolerance(cor.terms[2]))?;
        }
    }

    #[test]
    fn identity_pair_reduces_to_kit(a in square(6)) {
        let ctx = MatrixContext::new(&a, &cfg()).unwrap();
        let func = bounds::chain_functional(&ctx, &FunctionPair::identity()).unwrap();
        let kit = bounds::bound_kit(&ctx).unwrap();
        assert_close("lhs", func.terms[0], kit.lhs, tolerance(kit.rhs))?;
        assert_close("rhs", func.terms[2], kit.rhs, tolerance(kit.rhs))?;
    }

    #[test]
    fn hermitian_middle_terms(g in square(6)) {
        let h = g.hermitian_part();
        let n2 = operator_norm(&h).unwrap().powi(2);
        let ctx = MatrixContext::new(&h, &cfg()).unwrap();
        let t1 = bounds::chain_t1(&ctx).unwrap();
        let t2 = bounds::chain_t2(&ctx).unwrap();
        assert_close("T2 middle", t2.terms[1], 0.5 * 2f64.sqrt() * n2, tolerance(n2))?;
        assert_close("T1 middle", t1.terms[1], 0.5 * n2, tolerance(n2))?;
        prop_assert!(t2.terms[1] >= t1.terms[1] - tolerance(n2));
    }

    #[test]
    fn cartesian_product_identity(a in square(6)) {
        let t2 = bounds::eval_chain_t2(&a, &cfg()).unwrap();
        prop_assert!(t2.checks.iter().all(|c| c.holds), "{:?}", t2.checks);
    }

    #[test]
    fn lemmas_hold((a, b) in square_pair(6)) {
        let sum = bounds::eval_lemma_norm_sum(&a, &b, &cfg()).unwrap();
        prop_assert!(!sum.violated, "{:?}", sum);
        let diff = bounds::eval_lemma_pos_diff(&psd(&a), &psd(&b)).unwrap();
        prop_assert!(!diff.violated, "{:?}", diff);
    }

    #[test]
    fn json_round_trip_is_exact(a in square(6)) {
        let back = parse_json(&to_json(&a)).unwrap();
        prop_assert_eq!(back.as_slice(), a.as_slice());
    }
}

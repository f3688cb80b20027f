//! Property tests for the structural invariants.

use num_complex::Complex64;
use proptest::prelude::*;

use bohr_szego_core::bohr::{
    factorize, index_of, lift, multiply, unlift, DirichletSeries, LiftedPolynomial, MultiIndex,
};
use bohr_szego_core::szego::{
    build_index_set, exact_grid, fourier_coeff, szego_p2, SignedIndex, WeightSpec,
};
use bohr_szego_core::torus::{metric_p, radial_dilate};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn arb_coeff() -> impl Strategy<Value = Complex64> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(re, im)| c(re, im))
}

fn arb_series(max_n: u64, max_terms: usize) -> impl Strategy<Value = DirichletSeries> {
    prop::collection::btree_map(1..=max_n, arb_coeff(), 1..=max_terms)
        .prop_map(|m| DirichletSeries::from_terms(m).unwrap())
}

fn arb_poly(k: usize, deg: u32, max_terms: usize) -> impl Strategy<Value = LiftedPolynomial> {
    prop::collection::vec(
        (prop::collection::vec(0..=deg, k), arb_coeff()),
        1..=max_terms,
    )
    .prop_map(|terms| {
        LiftedPolynomial::from_monomials(
            terms
                .into_iter()
                .map(|(e, c)| (MultiIndex::from_exponents(&e), c)),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn round_trip_on_random_integers(n in 1u64..1_000_000) {
        prop_assert_eq!(index_of(&factorize(n).unwrap()).unwrap(), n);
    }

    #[test]
    fn factorize_additive_on_products(m in 1u64..50_000, n in 1u64..50_000) {
        let lhs = factorize(m * n).unwrap();
        let rhs = factorize(m).unwrap().plus(&factorize(n).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn lift_round_trip_and_homomorphism(
        f in arb_series(5_000, 8),
        g in arb_series(5_000, 8),
    ) {
        prop_assert_eq!(unlift(&lift(&f)).unwrap(), f.clone());
        let lhs = lift(&multiply(&f, &g).unwrap());
        let rhs = &lift(&f) * &lift(&g);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn vertical_shift_semigroup(
        f in arb_series(10_000, 8),
        s1 in 0.0..2.0f64,
        s2 in 0.0..2.0f64,
    ) {
        let a = f.vertical_shift(s1).vertical_shift(s2);
        let b = f.vertical_shift(s1 + s2);
        for (n, cb) in b.terms() {
            prop_assert!((a.coefficient(n) - cb).norm() <= 1e-14 * cb.norm().max(1e-30));
        }
    }

    #[test]
    fn line_and_lift_evaluations_agree(
        f in arb_series(10_000, 10),
        sigma in 0.0..2.0f64,
        t in -50.0..50.0f64,
    ) {
        let lifted = lift(&f);
        let k = lifted.vars();
        let coords: Vec<Complex64> = (1..=k)
            .map(|j| {
                let p = bohr_szego_core::primes::prime(j) as f64;
                Complex64::from_polar(p.powf(-sigma), -t * p.ln())
            })
            .collect();
        let a = lifted.evaluate_at(&coords);
        let b = f.evaluate_line(sigma, t);
        prop_assert!((a - b).norm() <= 1e-12 * b.norm().max(1.0));
    }

    #[test]
    fn parseval_for_the_two_norm(f in arb_poly(3, 3, 10)) {
        let l2: f64 = f.monomials().map(|(_, c)| c.norm_sqr()).sum();
        let v = metric_p(&f, 2.0).unwrap();
        prop_assert!((v * v - l2).abs() <= 1e-12 * l2.max(1.0));
    }

    #[test]
    fn dilation_is_a_semigroup(f in arb_poly(3, 3, 8), r in 0.0..1.0f64, s in 0.0..1.0f64) {
        prop_assert_eq!(radial_dilate(&f, 1.0).unwrap(), f.clone());
        let a = radial_dilate(&radial_dilate(&f, r).unwrap(), s).unwrap();
        let b = radial_dilate(&f, r * s).unwrap();
        for (alpha, cb) in b.monomials() {
            prop_assert!((a.coefficient(alpha) - cb).norm() <= 1e-13 * cb.norm().max(1e-30));
        }
    }

    #[test]
    fn fourier_coefficients_are_hermitian(h in arb_poly(2, 2, 5), e1 in -2i32..=2, e2 in -2i32..=2) {
        prop_assume!(!h.is_empty());
        let weight = WeightSpec::modulus_power(h, 2.0).unwrap();
        let grid = exact_grid(&weight, 2, 2).unwrap();
        let idx = SignedIndex::new([(1, e1), (2, e2)]).unwrap();
        let a = fourier_coeff(&weight, &idx, &grid).unwrap();
        let b = fourier_coeff(&weight, &idx.negate(), &grid).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-12 * a.norm().max(1.0));
    }

    #[test]
    fn solve_scales_linearly_in_the_weight(lambda in 0.1..10.0f64) {
        // S(lambda K) = lambda S(K), lower bound likewise
        let h = LiftedPolynomial::from_monomials([
            (MultiIndex::zero(), c(1.0, 0.0)),
            (MultiIndex::from_exponents(&[1]), c(-0.5, 0.25)),
        ]);
        let scaled = h.scale(c(lambda.sqrt(), 0.0));
        let k1 = WeightSpec::modulus_power(h, 2.0).unwrap();
        let k2 = WeightSpec::modulus_power(scaled, 2.0).unwrap();
        let grid = exact_grid(&k1, 1, 4).unwrap();
        let a = szego_p2(&k1, &build_index_set(1, 4), &grid).unwrap();
        let b = szego_p2(&k2, &build_index_set(1, 4), &grid).unwrap();
        prop_assert!((b.value - lambda * a.value).abs() <= 1e-10 * lambda.max(1.0));
        prop_assert!((b.lower - lambda * a.lower).abs() <= 1e-10 * lambda.max(1.0));
        prop_assert!((b.upper - lambda * a.upper).abs() <= 1e-10 * lambda.max(1.0));
    }
}

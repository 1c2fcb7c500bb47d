// Index loops mirror matrix notation.
#![allow(clippy::needless_range_loop)]

use dqd_dynamics::model::{build_driven, build_undriven, RateParams, PRESETS, REFERENCE_RATES};
use dqd_dynamics::quantum::{
    generator_apply, validate_density, vectorized_liouvillian, ComplexMatrix, DensityMatrix,
    Generator, LindbladTerm, C64,
};
use dqd_dynamics::validation::random_state;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn empty_generator_maps_everything_to_zero() {
    let gen = Generator::zero(3);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10 {
        let rho = random_state(&mut rng, 3);
        assert_eq!(generator_apply(&gen, rho.matrix()).unwrap().max_abs(), 0.0);
    }
    assert_eq!(vectorized_liouvillian(&gen).dim(), 9);
    assert_eq!(vectorized_liouvillian(&gen).max_abs(), 0.0);
}

#[test]
fn undriven_rhs_on_ground_state() {
    let gen = build_undriven(&REFERENCE_RATES).unwrap();
    let d = gen
        .apply(DensityMatrix::basis_state(3, 0).matrix())
        .unwrap();
    let expected = [-0.4, 0.4, 0.0];
    for i in 0..3 {
        for j in 0..3 {
            let want = if i == j { expected[i] } else { 0.0 };
            assert!(
                (d.get(i, j) - C64::new(want, 0.0)).norm() < 1e-15,
                "({i},{j})"
            );
        }
    }
    // The Liouvillian row sums over the population columns agree.
    let l = gen.liouvillian();
    for (i, want) in expected.iter().enumerate() {
        assert!((l.get(4 * i, 0).re - want).abs() < 1e-15);
    }
}

#[test]
fn drive_creates_imaginary_coherence() {
    let p = 0.4;
    let gen = build_driven(&REFERENCE_RATES.with_p(p).unwrap()).unwrap();
    let d = gen
        .apply(DensityMatrix::basis_state(3, 0).matrix())
        .unwrap();
    let (a, b) = (d.get(0, 1), d.get(1, 0));
    assert!(a.re.abs() < 1e-15 && b.re.abs() < 1e-15);
    assert!((a.im.abs() - p).abs() < 1e-15 && (b.im.abs() - p).abs() < 1e-15);
    assert!((a + b).norm() < 1e-15);
}

#[test]
fn population_block_is_the_rate_matrix() {
    let RateParams { l, m, n, .. } = REFERENCE_RATES;
    let lv = vectorized_liouvillian(&build_undriven(&REFERENCE_RATES).unwrap());
    let want = [[-m, l, 0.0], [m, -(l + n), n], [0.0, n, -n]];
    for i in 0..3 {
        for j in 0..3 {
            assert!((lv.get(4 * i, 4 * j) - C64::new(want[i][j], 0.0)).norm() < 1e-15);
        }
    }
    // Populations never feed coherences and vice versa.
    for i in 0..3 {
        for k in [1, 2, 3, 5, 6, 7] {
            assert_eq!(lv.get(4 * i, k), C64::new(0.0, 0.0));
            assert_eq!(lv.get(k, 4 * i), C64::new(0.0, 0.0));
        }
    }
}

#[test]
fn validity_reports() {
    let mixed = validate_density(DensityMatrix::maximally_mixed(3).matrix(), 1e-12);
    assert!(mixed.is_valid());
    let ground = validate_density(DensityMatrix::basis_state(3, 0).matrix(), 1e-12);
    assert!(ground.is_valid());

    let heavy = ComplexMatrix::from_real_diagonal(&[0.51, 0.25, 0.25]);
    let r = validate_density(&heavy, 1e-12);
    assert!(!r.unit_trace && r.hermitian && r.positive);
    assert!((r.trace_defect - 0.01).abs() < 1e-12);
    assert!(DensityMatrix::new(heavy).is_err());
}

#[test]
fn column_stacking_convention() {
    let mut m = ComplexMatrix::zeros(3);
    m.set(2, 0, C64::new(7.0, 0.0));
    m.set(0, 1, C64::new(0.0, 5.0));
    let v = m.stack();
    assert_eq!(v[2], C64::new(7.0, 0.0));
    assert_eq!(v[3], C64::new(0.0, 5.0));
    assert_eq!(ComplexMatrix::unstack(&v).unwrap(), m);
}

fn arb_term() -> impl Strategy<Value = LindbladTerm> {
    (
        prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 9),
        0.0..3.0f64,
    )
        .prop_map(|(entries, rate)| {
            let jump = ComplexMatrix::from_fn(3, |i, j| {
                let (re, im) = entries[i * 3 + j];
                C64::new(re, im)
            });
            LindbladTerm::new(jump, rate).unwrap()
        })
}

fn arb_generator() -> impl Strategy<Value = Generator> {
    (
        prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 9),
        prop::collection::vec(arb_term(), 0..4),
    )
        .prop_map(|(entries, terms)| {
            let g = ComplexMatrix::from_fn(3, |i, j| {
                let (re, im) = entries[i * 3 + j];
                C64::new(re, im)
            });
            Generator::new(g.hermitian_part(), terms).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generators_are_trace_free_and_hermiticity_preserving(gen in arb_generator(), seed in any::<u64>()) {
        let rho = random_state(&mut ChaCha8Rng::seed_from_u64(seed), 3);
        let out = gen.apply(rho.matrix()).unwrap();
        prop_assert!(out.trace().norm() <= 1e-12);
        prop_assert!(out.hermiticity_defect() <= 1e-12);
    }

    #[test]
    fn liouvillian_agrees_with_direct_application(gen in arb_generator(), seed in any::<u64>()) {
        let rho = random_state(&mut ChaCha8Rng::seed_from_u64(seed), 3);
        let via = ComplexMatrix::unstack(&gen.liouvillian().mul_vec(&rho.matrix().stack()).unwrap()).unwrap();
        prop_assert!((via - gen.apply(rho.matrix()).unwrap()).max_abs() <= 1e-12);
    }

    #[test]
    fn generator_is_linear(gen in arb_generator(), seed in any::<u64>(), a in -2.0..2.0f64, b in -2.0..2.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r1 = random_state(&mut rng, 3).into_matrix();
        let r2 = random_state(&mut rng, 3).into_matrix();
        let lhs = gen.apply(&(r1.scale_real(a) + r2.scale_real(b))).unwrap();
        let rhs = gen.apply(&r1).unwrap().scale_real(a) + gen.apply(&r2).unwrap().scale_real(b);
        prop_assert!((lhs - rhs).max_abs() <= 1e-12);
    }

    #[test]
    fn shipped_models_preserve_structure(idx in 0..PRESETS.len(), seed in any::<u64>()) {
        let gen = PRESETS[idx].generator().unwrap();
        let rho = random_state(&mut ChaCha8Rng::seed_from_u64(seed), 3);
        let out = gen.apply(rho.matrix()).unwrap();
        prop_assert!(out.trace().norm() <= 1e-12);
        prop_assert!(out.hermiticity_defect() <= 1e-12);
    }
}

// Index loops mirror matrix notation.
#![allow(clippy::needless_range_loop)]

use dqd_dynamics::analytic::{eval_populations, undriven_solution};
use dqd_dynamics::model::{
    build_driven, build_undriven, Preset, RateParams, FIGURE_RATIOS, PRESETS, REFERENCE_RATES,
};
use dqd_dynamics::propagator::{
    count_extrema, count_oscillations, integrate, integrate_fixed_step, long_time_agreement,
    relaxation_time, spectral_gap, steady_state, IntegratorConfig, RELAXATION_BALL,
};
use dqd_dynamics::quantum::{DensityMatrix, Generator};
use dqd_dynamics::validation::{convergence_errors, random_state};
use dqd_dynamics::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ground() -> DensityMatrix {
    DensityMatrix::basis_state(3, 0)
}

fn preset_run(name: &str) -> dqd_dynamics::propagator::Trajectory {
    let p = Preset::by_name(name).unwrap();
    integrate(
        &p.generator().unwrap(),
        &ground(),
        p.t_end,
        &IntegratorConfig::default(),
    )
    .unwrap()
}

#[test]
fn zero_generator_freezes_state() {
    let rho0 = random_state(&mut ChaCha8Rng::seed_from_u64(9), 3);
    let traj = integrate(
        &Generator::zero(3),
        &rho0,
        10.0,
        &IntegratorConfig::with_dt(1.0),
    )
    .unwrap();
    assert_eq!(traj.samples.len(), 11);
    assert!(traj.samples.iter().all(|s| s.state == rho0));
}

#[test]
fn undriven_preset_settles() {
    let traj = preset_run("fig2-4");
    let fin = traj.final_state().populations();
    for (got, want) in fin.iter().zip([0.5, 0.25, 0.25]) {
        assert!((got - want).abs() <= 1e-6);
    }
    let times = traj.times();
    assert_eq!(times[0], 0.0);
    assert!(times.windows(2).all(|w| w[1] > w[0]));
    assert_eq!(*times.last().unwrap(), 30.0);
}

#[test]
fn trajectories_stay_physical() {
    for p in PRESETS {
        let traj = preset_run(p.name);
        assert!(traj.stats.max_trace_drift <= 1e-9, "{}", p.name);
        assert!(traj.stats.max_hermiticity_drift <= 1e-9, "{}", p.name);
        assert!(traj.min_eigenvalue() >= -1e-8, "{}", p.name);
        assert!(traj
            .samples
            .iter()
            .all(|s| (s.state.matrix().trace().re - 1.0).abs() <= 1e-9));
    }
}

#[test]
fn invalid_inputs_rejected() {
    let gen = build_undriven(&REFERENCE_RATES).unwrap();
    assert!(integrate(&gen, &ground(), 0.0, &IntegratorConfig::default()).is_err());
    assert!(integrate(&gen, &ground(), 10.0, &IntegratorConfig::with_dt(0.0)).is_err());
    let bad = IntegratorConfig {
        rel_tol: -1.0,
        ..IntegratorConfig::default()
    };
    assert!(integrate(&gen, &ground(), 10.0, &bad).is_err());
    assert!(integrate(
        &gen,
        &DensityMatrix::basis_state(2, 0),
        10.0,
        &IntegratorConfig::default()
    )
    .is_err());
}

#[test]
fn steady_state_examples() {
    let ss = steady_state(&build_undriven(&REFERENCE_RATES).unwrap()).unwrap();
    for (got, want) in ss.populations().iter().zip([0.5, 0.25, 0.25]) {
        assert!((got - want).abs() <= 1e-10);
    }
    let cold = RateParams::new(0.8, 0.0, 0.5, 0.0).unwrap();
    let ss = steady_state(&build_undriven(&cold).unwrap()).unwrap();
    assert!((ss.get(0, 0).re - 1.0).abs() <= 1e-10);

    let gen = build_driven(&REFERENCE_RATES.with_p(8.0).unwrap()).unwrap();
    let ss = steady_state(&gen).unwrap();
    assert!(ss
        .populations()
        .iter()
        .all(|x| (x - 1.0 / 3.0).abs() < 0.02));
    let c = ss.get(0, 1);
    assert!(c.re.abs() < 1e-10 && c.im != 0.0 && c.im.abs() < 0.1);
    assert!(gen.apply(ss.matrix()).unwrap().max_abs() <= 1e-10);
    assert!(ss.report(1e-8).is_valid());
}

#[test]
fn degenerate_null_spaces() {
    assert!(matches!(
        steady_state(&Generator::zero(3)),
        Err(Error::DegenerateNullSpace(9))
    ));
    assert!(matches!(
        long_time_agreement(&Generator::zero(3), &ground(), Some(10.0)),
        Err(Error::DegenerateNullSpace(_))
    ));
    let split = RateParams::new(0.8, 0.4, 0.0, 0.0).unwrap();
    assert!(matches!(
        steady_state(&build_undriven(&split).unwrap()),
        Err(Error::DegenerateNullSpace(2))
    ));
}

#[test]
fn long_time_agreement_examples() {
    let undriven = long_time_agreement(
        &build_undriven(&REFERENCE_RATES).unwrap(),
        &ground(),
        Some(50.0),
    )
    .unwrap();
    assert!(undriven.distance <= 1e-8 && undriven.passed);
    let strong = RateParams::with_ratio(0.8, 0.4, 0.5, 0.1).unwrap();
    let driven =
        long_time_agreement(&build_driven(&strong).unwrap(), &ground(), Some(100.0)).unwrap();
    assert!(driven.distance <= 1e-6 && driven.passed);
}

#[test]
fn closed_form_oracle_triangle() {
    let sol = undriven_solution(&REFERENCE_RATES).unwrap();
    let traj = integrate(
        &build_undriven(&REFERENCE_RATES).unwrap(),
        &ground(),
        30.0,
        &IntegratorConfig::with_dt(30.0 / 49.0),
    )
    .unwrap();
    assert_eq!(traj.samples.len(), 50);
    for s in &traj.samples {
        let cf = eval_populations(&sol, s.t);
        for k in 0..3 {
            assert!((s.state.get(k, k).re - cf[k]).abs() <= 1e-8, "t = {}", s.t);
        }
    }
}

#[test]
fn undriven_population_is_monotone() {
    assert_eq!(count_oscillations(&preset_run("fig2-4"), 0), 0);
}

#[test]
fn weakest_drive_rho00_shows_slight_oscillation() {
    assert!(count_oscillations(&preset_run("fig5-7"), 0) >= 1);
}

#[test]
fn weakest_drive_rho11_overshoots() {
    assert_eq!(count_oscillations(&preset_run("fig5-7"), 1), 1);
}

#[test]
fn oscillations_grow_with_drive() {
    let counts: Vec<usize> = PRESETS[1..]
        .iter()
        .map(|p| count_oscillations(&preset_run(p.name), 0))
        .collect();
    assert_eq!(counts.len(), FIGURE_RATIOS.len());
    assert!(counts.windows(2).all(|w| w[1] >= w[0]), "{counts:?}");
}

#[test]
fn relaxation_time_grows_with_drive() {
    let times: Vec<Option<f64>> = PRESETS[1..]
        .iter()
        .map(|p| {
            let ss = steady_state(&p.generator().unwrap()).unwrap();
            relaxation_time(&preset_run(p.name), &ss, RELAXATION_BALL)
        })
        .collect();
    assert!(times.iter().all(Option::is_some));
    assert!(times.windows(2).all(|w| w[1] >= w[0]), "{times:?}");
}

#[test]
fn extremum_counting() {
    assert_eq!(count_extrema(&[0.0, 1.0, 0.0, 1.0, 0.0], 1e-4), 3);
    assert_eq!(count_extrema(&[0.0, 1e-5, 0.0, 1e-5, 0.0], 1e-4), 0);
    assert_eq!(count_extrema(&[3.0, 2.0, 1.0], 1e-4), 0);
    assert_eq!(count_extrema(&[1.0, 1.0], 1e-4), 0);
}

#[test]
fn fixed_step_is_fourth_order() {
    let gen = build_undriven(&REFERENCE_RATES).unwrap();
    let errs = convergence_errors(&gen, &REFERENCE_RATES).unwrap();
    assert!(
        errs[0] / errs[1] >= 8.0 && errs[1] / errs[2] >= 8.0,
        "{errs:?}"
    );
    assert!(integrate_fixed_step(&gen, &ground(), 1.0, 0).is_err());
}

#[test]
fn undriven_gap_is_set_by_coherences() {
    let gap = spectral_gap(&build_undriven(&REFERENCE_RATES).unwrap()).unwrap();
    assert!((gap - 0.45).abs() < 1e-10);
}

#[test]
fn liouvillian_spectra_contain_zero() {
    for p in PRESETS {
        let spec = dqd_dynamics::propagator::liouvillian_spectrum(&p.generator().unwrap());
        assert_eq!(spec.len(), 9);
        assert!(spec.iter().any(|z| z.norm() <= 1e-10), "{}", p.name);
        assert!(spec.iter().all(|z| z.re <= 1e-10));
    }
}

//! The invariant and cross-check suite behind `dqd validate`.
//!
//! Each check is deterministic (fixed seeds) and reports a one-line detail with the measured
//! worst case next to its tolerance.

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analytic::{
    driven_steady_oracle, driven_steady_printed, eigenvalues, eval_populations, rate_matrix,
    undriven_solution, undriven_steady,
};
use crate::cli::{simulate, write_simulation, Format, RunConfig};
use crate::error::Result;
use crate::model::{
    build_driven, build_undriven, rates_from_physical, PhysicalParams, Preset, RateParams,
    FIGURE_RATIOS, PRESETS, REFERENCE_RATES,
};
use crate::propagator::{
    count_oscillations, integrate, integrate_fixed_step, long_time_agreement, relaxation_time,
    steady_state, IntegratorConfig, Trajectory, RELAXATION_BALL,
};
use crate::quantum::{dissipator, ComplexMatrix, DensityMatrix, Generator, C64};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Deliberate defects for exercising the suite itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Every generator the suite builds has its dissipators negated.
    DissipatorSignFlip,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SuiteOptions {
    pub fault: Option<Fault>,
}

/// Random density matrix `G G† / tr(G G†)` with Gaussian-ish complex entries.
pub fn random_state<R: Rng>(rng: &mut R, dim: usize) -> DensityMatrix {
    let g = ComplexMatrix::from_fn(dim, |_, _| {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let rho = &g * &g.adjoint();
    let rho = rho.scale_real(1.0 / rho.trace().re).hermitian_part();
    DensityMatrix::new(rho).expect("G G† is a valid state after normalization")
}

/// Random `(l, m, n)` in `(0, hi]³` with `l ≥ m`, undriven.
pub fn random_rates<R: Rng>(rng: &mut R, hi: f64) -> RateParams {
    loop {
        let l = hi * (1.0 - rng.gen::<f64>());
        let m = hi * (1.0 - rng.gen::<f64>());
        let n = hi * (1.0 - rng.gen::<f64>());
        if let Ok(r) = RateParams::new(l, m, n, 0.0) {
            return r;
        }
    }
}

struct Models {
    fault: Option<Fault>,
}

impl Models {
    fn wrap(&self, gen: Generator) -> Generator {
        match self.fault {
            Some(Fault::DissipatorSignFlip) => gen.with_inverted_dissipators(),
            None => gen,
        }
    }

    fn undriven(&self, rates: &RateParams) -> Result<Generator> {
        Ok(self.wrap(build_undriven(rates)?))
    }

    fn driven(&self, rates: &RateParams) -> Result<Generator> {
        Ok(self.wrap(build_driven(rates)?))
    }

    fn preset(&self, preset: &Preset) -> Result<Generator> {
        Ok(self.wrap(preset.generator()?))
    }

    fn shipped(&self) -> Result<Vec<(&'static str, Generator)>> {
        PRESETS
            .iter()
            .map(|p| Ok((p.name, self.preset(p)?)))
            .collect()
    }
}

type Outcome = Result<(bool, String)>;

fn within(value: f64, tol: f64, what: &str) -> (bool, String) {
    (value <= tol, format!("{what} {value:.3e} (tol {tol:.0e})"))
}

const STATES: usize = 100;

fn check_dissipators(models: &Models, rng: &mut ChaCha8Rng) -> Outcome {
    let mut herm = 0.0_f64;
    let mut tr = 0.0_f64;
    for (_, gen) in models.shipped()? {
        for term in gen.terms() {
            for _ in 0..STATES {
                let d = dissipator(term, random_state(rng, 3).matrix())?;
                herm = herm.max(d.hermiticity_defect());
                tr = tr.max(d.trace().norm());
            }
        }
    }
    let worst = herm.max(tr);
    Ok(within(worst, 1e-12, "max hermiticity/trace defect"))
}

fn for_random_states(
    models: &Models,
    rng: &mut ChaCha8Rng,
    mut f: impl FnMut(&Generator, &DensityMatrix) -> Result<f64>,
) -> Result<f64> {
    let mut gens = models.shipped()?;
    gens.push(("zero", Generator::zero(3)));
    let mut worst = 0.0_f64;
    for _ in 0..STATES {
        let rho = random_state(rng, 3);
        for (_, gen) in &gens {
            worst = worst.max(f(gen, &rho)?);
        }
    }
    Ok(worst)
}

fn check_trace_preservation(models: &Models, rng: &mut ChaCha8Rng) -> Outcome {
    let worst = for_random_states(models, rng, |g, r| Ok(g.apply(r.matrix())?.trace().norm()))?;
    Ok(within(worst, 1e-12, "max |tr L(ρ)|"))
}

fn check_hermiticity(models: &Models, rng: &mut ChaCha8Rng) -> Outcome {
    let worst = for_random_states(models, rng, |g, r| {
        Ok(g.apply(r.matrix())?.hermiticity_defect())
    })?;
    Ok(within(worst, 1e-12, "max |L(ρ) − L(ρ)†|"))
}

fn check_vectorization(models: &Models, rng: &mut ChaCha8Rng) -> Outcome {
    let worst = for_random_states(models, rng, |g, r| {
        let via_l = ComplexMatrix::unstack(&g.liouvillian().mul_vec(&r.matrix().stack())?)?;
        Ok((via_l - g.apply(r.matrix())?).max_abs())
    })?;
    Ok(within(worst, 1e-12, "max |unstack(L·vec ρ) − L(ρ)|"))
}

fn check_linearity(models: &Models, rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0_f64;
    for (_, gen) in models.shipped()? {
        for _ in 0..STATES {
            let (a, b) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let r1 = random_state(rng, 3).into_matrix();
            let r2 = random_state(rng, 3).into_matrix();
            let lhs = gen.apply(&(r1.scale_real(a) + r2.scale_real(b)))?;
            let rhs = gen.apply(&r1)?.scale_real(a) + gen.apply(&r2)?.scale_real(b);
            worst = worst.max((lhs - rhs).max_abs());
        }
    }
    Ok(within(worst, 1e-12, "max linearity defect"))
}

fn check_null_vector(models: &Models, _: &mut ChaCha8Rng) -> Outcome {
    let mut smallest_sv = 0.0_f64;
    let mut min_eig = f64::INFINITY;
    for (_, gen) in models.shipped()? {
        let sv = gen.liouvillian().as_nalgebra().singular_values();
        smallest_sv = smallest_sv.max(sv.min());
        min_eig = min_eig.min(steady_state(&gen)?.matrix().hermitian_eigenvalues()[0]);
    }
    let ok = smallest_sv <= 1e-10 && min_eig >= -1e-10;
    Ok((ok, format!("largest smallest-singular-value {smallest_sv:.3e} (tol 1e-10), min steady eigenvalue {min_eig:.3e} (tol -1e-10)")))
}

fn check_rate_identity(_: &Models, rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0_f64;
    for _ in 0..1000 {
        let phys = PhysicalParams::new(
            rng.gen_range(0.0..5.0),
            rng.gen_range(0.0..5.0),
            rng.gen_range(0.0..2.0),
            rng.gen_range(0.0..4.0),
        )?;
        let r = rates_from_physical(&phys);
        worst = worst.max(((r.l - r.m) - phys.gamma01).abs() / r.l.max(1.0));
    }
    Ok(within(
        worst,
        4.0 * f64::EPSILON,
        "max |(l − m) − γ01| / max(l, 1)",
    ))
}

fn check_p0_reduction(models: &Models, rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0_f64;
    for _ in 0..10 {
        let rates = random_rates(rng, 2.0);
        let a = models.driven(&rates)?;
        let b = models.undriven(&rates)?;
        for _ in 0..10 {
            let rho = random_state(rng, 3);
            worst = worst.max((a.apply(rho.matrix())? - b.apply(rho.matrix())?).max_abs());
        }
    }
    Ok(within(worst, 1e-14, "max |driven(p=0) − undriven|"))
}

fn check_detailed_balance(models: &Models, rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let rates = random_rates(rng, 2.0);
        let pops = steady_state(&models.undriven(&rates)?)?.populations();
        worst = worst
            .max((rates.l * pops[1] - rates.m * pops[0]).abs())
            .max((pops[1] - pops[2]).abs());
    }
    Ok(within(worst, 1e-10, "max |lρ11 − mρ00|, |ρ11 − ρ22|"))
}

fn check_population_closure(models: &Models, rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0_f64;
    for _ in 0..10 {
        let rates = random_rates(rng, 2.0);
        let w: Vec<f64> = (0..3).map(|_| rng.gen::<f64>()).collect();
        let total: f64 = w.iter().sum();
        let mut d: Vec<f64> = w.iter().map(|x| x / total).collect();
        d[2] = 1.0 - d[0] - d[1];
        let rho0 = DensityMatrix::diagonal(&d)?;
        let traj = integrate(
            &models.undriven(&rates)?,
            &rho0,
            20.0,
            &IntegratorConfig::with_dt(0.5),
        )?;
        for s in &traj.samples {
            let m = s.state.matrix();
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                worst = worst.max(m.get(i, j).norm());
            }
        }
    }
    Ok(within(worst, 1e-12, "max off-diagonal modulus"))
}

const MONOTONE_P: [f64; 5] = [0.0, 0.4, 0.8, 1.6, 8.0];
const LIMIT_P: [f64; 5] = [0.4, 0.8, 1.6, 8.0, 80.0];

fn steady_rho00(models: &Models, p: f64) -> Result<f64> {
    Ok(steady_state(&models.driven(&REFERENCE_RATES.with_p(p)?)?)?
        .get(0, 0)
        .re)
}

fn check_drive_monotone(models: &Models, _: &mut ChaCha8Rng) -> Outcome {
    let vals = MONOTONE_P
        .iter()
        .map(|&p| steady_rho00(models, p))
        .collect::<Result<Vec<_>>>()?;
    let ok = vals.windows(2).all(|w| w[1] <= w[0]);
    Ok((ok, format!("ρ00 over p = {MONOTONE_P:?}: {vals:.6?}")))
}

fn check_population_block(models: &Models, rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0_f64;
    let mut cases = vec![REFERENCE_RATES];
    cases.extend((0..20).map(|_| random_rates(rng, 2.0)));
    for rates in cases {
        let l = models.undriven(&rates)?.liouvillian();
        let m = rate_matrix(&rates);
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((l.get(4 * i, 4 * j) - C64::new(m[(i, j)], 0.0)).norm());
            }
        }
    }
    Ok(within(worst, 1e-15, "max |population block − rate matrix|"))
}

/// Nonzero eigenvalues of the rate matrix by numerical decomposition, ascending.
pub fn numeric_rate_eigenvalues(rates: &RateParams) -> [f64; 2] {
    let mut ev: Vec<f64> = rate_matrix(rates)
        .complex_eigenvalues()
        .iter()
        .map(|z| z.re)
        .collect();
    ev.sort_by(f64::total_cmp);
    [ev[0], ev[1]]
}

fn check_eigen_identity(_: &Models, rng: &mut ChaCha8Rng) -> Outcome {
    let mut eig_err = 0.0_f64;
    let mut vieta_err = 0.0_f64;
    for _ in 0..1000 {
        let r = random_rates(rng, 10.0);
        let e = eigenvalues(&r)?;
        let [n0, n1] = numeric_rate_eigenvalues(&r);
        eig_err = eig_err
            .max((e.lambda0 - n0).abs())
            .max((e.lambda1 - n1).abs());
        vieta_err = vieta_err
            .max((e.lambda0 + e.lambda1 + r.l + r.m + 2.0 * r.n).abs())
            .max((e.lambda0 * e.lambda1 - (r.l * r.n + 2.0 * r.m * r.n)).abs());
    }
    let ok = eig_err <= 1e-12 && vieta_err <= 1e-12;
    Ok((
        ok,
        format!("closed vs numeric {eig_err:.3e}, Vieta {vieta_err:.3e} (tol 1e-12)"),
    ))
}

/// 50 samples on `[0, 30]`.
const CF_T_END: f64 = 30.0;
const CF_SAMPLES: usize = 50;

/// Largest componentwise gap between the closed form and the propagated generator.
pub fn closed_form_gap(gen: &Generator, rates: &RateParams) -> Result<f64> {
    let sol = undriven_solution(rates)?;
    let cfg = IntegratorConfig::with_dt(CF_T_END / (CF_SAMPLES - 1) as f64);
    let traj = integrate(gen, &DensityMatrix::basis_state(3, 0), CF_T_END, &cfg)?;
    let mut worst = 0.0_f64;
    for s in &traj.samples {
        let cf = eval_populations(&sol, s.t);
        for (k, v) in cf.iter().enumerate() {
            worst = worst.max((s.state.get(k, k).re - v).abs());
        }
    }
    Ok(worst)
}

fn check_closed_form_vs_ode(models: &Models, rng: &mut ChaCha8Rng) -> Outcome {
    let mut cases = vec![REFERENCE_RATES];
    cases.extend((0..20).map(|_| random_rates(rng, 2.0)));
    let mut worst = 0.0_f64;
    for rates in &cases {
        worst = worst.max(closed_form_gap(&models.undriven(rates)?, rates)?);
    }
    Ok(within(worst, 1e-8, "max |closed form − propagated|"))
}

fn check_closed_form_odes(_: &Models, rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0_f64;
    let h = 1e-4;
    let mut cases = vec![REFERENCE_RATES];
    cases.extend((0..20).map(|_| random_rates(rng, 2.0)));
    for rates in cases {
        let sol = undriven_solution(&rates)?;
        let m = rate_matrix(&rates);
        for k in 0..=60 {
            let t = 0.1 + k as f64 * 0.25;
            let plus = Vector3::from(eval_populations(&sol, t + h));
            let minus = Vector3::from(eval_populations(&sol, t - h));
            let fd = (plus - minus) / (2.0 * h);
            let rhs = m * Vector3::from(eval_populations(&sol, t));
            worst = worst.max((fd - rhs).amax());
        }
    }
    Ok(within(
        worst,
        1e-6,
        "max |finite difference − rate equations|",
    ))
}

fn check_steady_fixed_point(_: &Models, rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let r = random_rates(rng, 10.0);
        let v = Vector3::from(undriven_steady(&r)?);
        worst = worst.max((rate_matrix(&r) * v).amax());
    }
    Ok(within(worst, 1e-12, "max |M · steady|"))
}

fn check_oracle_p0(_: &Models, rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let r = random_rates(rng, 2.0);
        let a = driven_steady_oracle(&r)?;
        let b = undriven_steady(&r)?;
        for k in 0..3 {
            worst = worst.max((a[k] - b[k]).abs());
        }
    }
    Ok(within(worst, 1e-10, "max |oracle(p=0) − closed form|"))
}

fn check_high_intensity_limit(models: &Models, _: &mut ChaCha8Rng) -> Outcome {
    let mut dev = Vec::new();
    for p in LIMIT_P {
        let pops = steady_state(&models.driven(&REFERENCE_RATES.with_p(p)?)?)?.populations();
        dev.push(
            pops.iter()
                .map(|x| (x - 1.0 / 3.0).abs())
                .fold(0.0, f64::max),
        );
    }
    let ok = dev[3] <= 0.05 && dev[4] <= 0.005 && dev.windows(2).all(|w| w[1] < w[0]);
    Ok((ok, format!("max |ρii − 1/3| over p = {LIMIT_P:?}: [{}] (p=8 ≤ 5e-2, p=80 ≤ 5e-3, strictly decreasing)", dev.iter().map(|d| format!("{d:.3e}")).collect::<Vec<_>>().join(", "))))
}

fn check_rho00_floor(models: &Models, _: &mut ChaCha8Rng) -> Outcome {
    let vals = LIMIT_P
        .iter()
        .map(|&p| steady_rho00(models, p))
        .collect::<Result<Vec<_>>>()?;
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    Ok((
        min >= 1.0 / 3.0 - 1e-9,
        format!("min stationary ρ00 {min:.12} over p = {LIMIT_P:?} (floor 1/3 − 1e-9)"),
    ))
}

struct PresetRuns {
    runs: Vec<(&'static str, Trajectory)>,
}

impl PresetRuns {
    fn new(models: &Models) -> Result<Self> {
        let cfg = IntegratorConfig::default();
        let runs = PRESETS
            .iter()
            .map(|p| {
                Ok((
                    p.name,
                    integrate(
                        &models.preset(p)?,
                        &DensityMatrix::basis_state(3, 0),
                        p.t_end,
                        &cfg,
                    )?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { runs })
    }
}

fn check_trace_drift(runs: &PresetRuns) -> Outcome {
    let worst = runs
        .runs
        .iter()
        .map(|(_, t)| t.stats.max_trace_drift)
        .fold(0.0, f64::max);
    Ok(within(worst, 1e-9, "max |tr ρ(t) − 1|"))
}

fn check_hermiticity_drift(runs: &PresetRuns) -> Outcome {
    let worst = runs
        .runs
        .iter()
        .map(|(_, t)| t.stats.max_hermiticity_drift)
        .fold(0.0, f64::max);
    Ok(within(worst, 1e-9, "max per-step hermiticity drift"))
}

fn check_positivity(runs: &PresetRuns) -> Outcome {
    let min = runs
        .runs
        .iter()
        .map(|(_, t)| t.min_eigenvalue())
        .fold(f64::INFINITY, f64::min);
    Ok((
        min >= -1e-8,
        format!("min sample eigenvalue {min:.3e} (floor -1e-8)"),
    ))
}

/// RK4 endpoint errors against the closed form for 20, 40 and 80 steps on `[0, 10]`.
pub fn convergence_errors(gen: &Generator, rates: &RateParams) -> Result<[f64; 3]> {
    let t_end = 10.0;
    let exact = eval_populations(&undriven_solution(rates)?, t_end);
    let rho0 = DensityMatrix::basis_state(3, 0);
    let mut errs = [0.0; 3];
    for (e, steps) in errs.iter_mut().zip([20, 40, 80]) {
        let fin = integrate_fixed_step(gen, &rho0, t_end, steps)?;
        *e = (0..3)
            .map(|k| (fin.get(k, k).re - exact[k]).abs())
            .fold(0.0, f64::max);
    }
    Ok(errs)
}

fn check_convergence(models: &Models, _: &mut ChaCha8Rng) -> Outcome {
    let errs = convergence_errors(&models.undriven(&REFERENCE_RATES)?, &REFERENCE_RATES)?;
    let r1 = errs[0] / errs[1];
    let r2 = errs[1] / errs[2];
    Ok((
        r1 >= 8.0 && r2 >= 8.0,
        format!(
            "errors {:.3e} {:.3e} {:.3e}, ratios {r1:.2} {r2:.2} (min 8)",
            errs[0], errs[1], errs[2]
        ),
    ))
}

fn check_oracle_triangle(models: &Models, _: &mut ChaCha8Rng) -> Outcome {
    let undriven = models.undriven(&REFERENCE_RATES)?;
    let cf = closed_form_gap(&undriven, &REFERENCE_RATES)?;
    let lt = long_time_agreement(&undriven, &DensityMatrix::basis_state(3, 0), Some(50.0))?;
    let ss = steady_state(&undriven)?.populations();
    let limit = undriven_steady(&REFERENCE_RATES)?;
    let an_ss = (0..3).map(|k| (ss[k] - limit[k]).abs()).fold(0.0, f64::max);
    let mut driven_worst = 0.0_f64;
    for preset in PRESETS.iter().filter(|p| p.driven) {
        let a = long_time_agreement(
            &models.preset(preset)?,
            &DensityMatrix::basis_state(3, 0),
            None,
        )?;
        driven_worst = driven_worst.max(a.distance);
    }
    let ok = cf <= 1e-8 && lt.distance <= 1e-8 && an_ss <= 1e-10 && driven_worst <= 1e-6;
    Ok((
        ok,
        format!(
            "analytic↔ode {cf:.2e} (1e-8), ode↔nullspace {:.2e} (1e-8), analytic↔nullspace {an_ss:.2e} (1e-10), driven ode↔nullspace {driven_worst:.2e} (1e-6)",
            lt.distance
        ),
    ))
}

struct SweepRuns {
    undriven: Trajectory,
    driven: Vec<(f64, Trajectory, DensityMatrix)>,
}

impl SweepRuns {
    fn new(models: &Models) -> Result<Self> {
        let cfg = IntegratorConfig::default();
        let rho0 = DensityMatrix::basis_state(3, 0);
        let undriven = integrate(&models.undriven(&REFERENCE_RATES)?, &rho0, 30.0, &cfg)?;
        let driven = FIGURE_RATIOS
            .iter()
            .map(|&ratio| {
                let rates = RateParams::with_ratio(
                    REFERENCE_RATES.l,
                    REFERENCE_RATES.m,
                    REFERENCE_RATES.n,
                    ratio,
                )?;
                let gen = models.driven(&rates)?;
                let ss = steady_state(&gen)?;
                Ok((ratio, integrate(&gen, &rho0, 30.0, &cfg)?, ss))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { undriven, driven })
    }
}

fn check_oscillation_trend(runs: &SweepRuns) -> Outcome {
    let base = count_oscillations(&runs.undriven, 0);
    let counts: Vec<usize> = runs
        .driven
        .iter()
        .map(|(_, t, _)| count_oscillations(t, 0))
        .collect();
    let ok = base == 0 && counts.windows(2).all(|w| w[1] >= w[0]);
    Ok((
        ok,
        format!("ρ00 extrema: undriven {base}, l/p = {FIGURE_RATIOS:?}: {counts:?}"),
    ))
}

fn check_relaxation_trend(runs: &SweepRuns) -> Outcome {
    let times: Vec<Option<f64>> = runs
        .driven
        .iter()
        .map(|(_, t, ss)| relaxation_time(t, ss, RELAXATION_BALL))
        .collect();
    let ok = times.iter().all(Option::is_some) && times.windows(2).all(|w| w[1] >= w[0]);
    let shown: Vec<String> = times
        .iter()
        .map(|t| t.map_or("never".into(), |t| format!("{t:.2}")))
        .collect();
    Ok((ok, format!("time to stay within {RELAXATION_BALL:.0e} of steady state, l/p = {FIGURE_RATIOS:?}: [{}]", shown.join(", "))))
}

fn check_printed_audit(_: &Models, _: &mut ChaCha8Rng) -> Outcome {
    let at_zero = driven_steady_printed(&REFERENCE_RATES)?;
    let flagged = at_zero.p0_inconsistency.is_some();
    let mut worst = 0.0_f64;
    for p in [8.0, 80.0] {
        let rates = REFERENCE_RATES.with_p(p)?;
        let printed = driven_steady_printed(&rates)?.values;
        let oracle = driven_steady_oracle(&rates)?;
        for k in 0..3 {
            worst = worst.max((printed[k] - oracle[k]).abs());
        }
    }
    let far = driven_steady_printed(&REFERENCE_RATES.with_p(1e4)?)?.values;
    let limit = far
        .iter()
        .map(|x| (x - 1.0 / 3.0).abs())
        .fold(0.0, f64::max);
    let ok = flagged && worst <= 0.05 && limit <= 1e-6;
    Ok((
        ok,
        format!("p=0 flagged: {flagged}; max |printed − oracle| for p ≥ 10l: {worst:.3e} (tol 0.05); |printed − 1/3| at p=1e4: {limit:.3e} (tol 1e-6)"),
    ))
}

fn check_csv_determinism(_: &Models, _: &mut ChaCha8Rng) -> Outcome {
    let cfg = crate::cli::ConfigFile {
        preset: Some("fig5-7".into()),
        ..Default::default()
    };
    let render = || -> std::result::Result<Vec<u8>, crate::cli::CliError> {
        let rc = RunConfig::resolve(&cfg)?;
        let traj = simulate(&rc)?;
        let mut buf = Vec::new();
        write_simulation(&rc, &traj, Format::Csv, &mut buf)?;
        Ok(buf)
    };
    match (render(), render()) {
        (Ok(a), Ok(b)) => Ok((
            a == b,
            format!("two fig5-7 runs, {} bytes, identical: {}", a.len(), a == b),
        )),
        (Err(e), _) | (_, Err(e)) => Ok((false, format!("error: {e}"))),
    }
}

type Check = fn(&Models, &mut ChaCha8Rng) -> Outcome;
type Named<T> = (&'static str, fn(&T) -> Outcome);

const CHECKS: [(&str, Check); 21] = [
    ("dissipator-hermitian-traceless", check_dissipators),
    ("generator-trace-preservation", check_trace_preservation),
    ("generator-hermiticity", check_hermiticity),
    ("liouvillian-vectorization", check_vectorization),
    ("generator-linearity", check_linearity),
    ("liouvillian-null-vector", check_null_vector),
    ("rate-conversion-identity", check_rate_identity),
    ("driven-p0-reduction", check_p0_reduction),
    ("detailed-balance", check_detailed_balance),
    ("population-closure", check_population_closure),
    ("drive-monotone-rho00", check_drive_monotone),
    ("population-block-rate-matrix", check_population_block),
    ("eigenvalue-identity", check_eigen_identity),
    ("closed-form-vs-ode", check_closed_form_vs_ode),
    ("closed-form-rate-equations", check_closed_form_odes),
    ("undriven-fixed-point", check_steady_fixed_point),
    ("oracle-p0-reduction", check_oracle_p0),
    ("high-intensity-limit", check_high_intensity_limit),
    ("rho00-floor", check_rho00_floor),
    ("fourth-order-convergence", check_convergence),
    ("oracle-triangle", check_oracle_triangle),
];

const TAIL_CHECKS: [(&str, Check); 2] = [
    ("printed-formula-audit", check_printed_audit),
    ("csv-determinism", check_csv_determinism),
];

fn record(name: &'static str, outcome: Outcome) -> CheckResult {
    match outcome {
        Ok((passed, detail)) => CheckResult {
            name,
            passed,
            detail,
        },
        Err(e) => CheckResult {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

pub fn run_suite(opts: &SuiteOptions) -> SuiteReport {
    let models = Models { fault: opts.fault };
    let mut checks = Vec::new();
    for (seed, (name, check)) in CHECKS.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed as u64);
        checks.push(record(name, check(&models, &mut rng)));
    }

    let preset_checks: [Named<PresetRuns>; 3] = [
        ("trajectory-trace-conservation", check_trace_drift),
        ("trajectory-hermiticity-drift", check_hermiticity_drift),
        ("trajectory-positivity", check_positivity),
    ];
    match PresetRuns::new(&models) {
        Ok(runs) => checks.extend(preset_checks.iter().map(|(n, c)| record(n, c(&runs)))),
        Err(e) => checks.extend(preset_checks.iter().map(|(n, _)| record(n, Err(e.clone())))),
    }

    let sweep_checks: [Named<SweepRuns>; 2] = [
        ("oscillation-count-trend", check_oscillation_trend),
        ("relaxation-time-trend", check_relaxation_trend),
    ];
    match SweepRuns::new(&models) {
        Ok(runs) => checks.extend(sweep_checks.iter().map(|(n, c)| record(n, c(&runs)))),
        Err(e) => checks.extend(sweep_checks.iter().map(|(n, _)| record(n, Err(e.clone())))),
    }

    for (i, (name, check)) in TAIL_CHECKS.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64((CHECKS.len() + i) as u64);
        checks.push(record(name, check(&models, &mut rng)));
    }
    SuiteReport { checks }
}

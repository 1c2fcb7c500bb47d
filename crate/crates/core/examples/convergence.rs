//! Fixed-step RK4 endpoint error against the closed form as the step halves.

use dqd_dynamics::analytic::{eval_populations, undriven_solution};
use dqd_dynamics::model::{build_undriven, REFERENCE_RATES};
use dqd_dynamics::propagator::integrate_fixed_step;
use dqd_dynamics::quantum::DensityMatrix;

fn main() -> dqd_dynamics::Result<()> {
    let t_end = 10.0;
    let gen = build_undriven(&REFERENCE_RATES)?;
    let exact = eval_populations(&undriven_solution(&REFERENCE_RATES)?, t_end);
    let mut prev: Option<f64> = None;
    for steps in [10, 20, 40, 80, 160] {
        let fin = integrate_fixed_step(&gen, &DensityMatrix::basis_state(3, 0), t_end, steps)?;
        let err = (0..3)
            .map(|k| (fin.get(k, k).re - exact[k]).abs())
            .fold(0.0, f64::max);
        let ratio = prev.map_or(String::new(), |p| format!("  ×{:.2}", p / err));
        println!("h = {:<7} error {err:.3e}{ratio}", t_end / steps as f64);
        prev = Some(err);
    }
    Ok(())
}

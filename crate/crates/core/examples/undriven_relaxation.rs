//! Undriven relaxation from the ground state: closed form against the integrated master equation.

use dqd_dynamics::analytic::{eval_populations, undriven_solution};
use dqd_dynamics::model::{build_undriven, REFERENCE_RATES};
use dqd_dynamics::propagator::{integrate, IntegratorConfig};
use dqd_dynamics::quantum::DensityMatrix;

fn main() -> dqd_dynamics::Result<()> {
    let sol = undriven_solution(&REFERENCE_RATES)?;
    println!("λ0 = {:.6}, λ1 = {:.6}", sol.eigs.lambda0, sol.eigs.lambda1);
    println!(
        "A = {:.6}, B = {:.6}, C = {:.6}",
        sol.a_const, sol.b_const, sol.c_const
    );

    let gen = build_undriven(&REFERENCE_RATES)?;
    let traj = integrate(
        &gen,
        &DensityMatrix::basis_state(3, 0),
        30.0,
        &IntegratorConfig::with_dt(2.5),
    )?;

    println!(
        "{:>6} {:>10} {:>10} {:>10} {:>10}",
        "t", "ρ00", "ρ11", "ρ22", "|Δ|max"
    );
    for s in &traj.samples {
        let cf = eval_populations(&sol, s.t);
        let pops = s.state.populations();
        let gap = (0..3).map(|k| (pops[k] - cf[k]).abs()).fold(0.0, f64::max);
        println!(
            "{:>6.1} {:>10.6} {:>10.6} {:>10.6} {:>10.1e}",
            s.t, pops[0], pops[1], pops[2], gap
        );
    }
    Ok(())
}

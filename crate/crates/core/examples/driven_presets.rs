//! Runs each figure preset and summarises the oscillatory approach to the steady state.

use dqd_dynamics::model::PRESETS;
use dqd_dynamics::propagator::{
    count_oscillations, integrate, relaxation_time, steady_state, IntegratorConfig, RELAXATION_BALL,
};
use dqd_dynamics::quantum::DensityMatrix;

fn main() -> dqd_dynamics::Result<()> {
    println!(
        "{:<9} {:>6} {:>8} {:>8} {:>8} {:>11}",
        "preset", "l/p", "ρ00(∞)", "osc ρ00", "osc ρ11", "relax time"
    );
    for preset in PRESETS {
        let gen = preset.generator()?;
        let traj = integrate(
            &gen,
            &DensityMatrix::basis_state(3, 0),
            preset.t_end,
            &IntegratorConfig::default(),
        )?;
        let ss = steady_state(&gen)?;
        let ratio = if preset.driven {
            format!("{}", preset.rates.l / preset.rates.p)
        } else {
            "—".into()
        };
        let relax = relaxation_time(&traj, &ss, RELAXATION_BALL)
            .map_or("—".into(), |t| format!("{t:.2}"));
        println!(
            "{:<9} {:>6} {:>8.5} {:>8} {:>8} {:>11}",
            preset.name,
            ratio,
            ss.get(0, 0).re,
            count_oscillations(&traj, 0),
            count_oscillations(&traj, 1),
            relax
        );
    }
    Ok(())
}

use crate::error::Result;
use crate::quantum::{DensityMatrix, Generator};

use super::integrator::{integrate, IntegratorConfig, Trajectory};
use super::steady::{spectral_gap, steady_state};

/// Swings smaller than this are not counted as oscillations.
pub const EXTREMUM_PROMINENCE: f64 = 1e-4;
/// Radius of the ball used by [`relaxation_time`].
pub const RELAXATION_BALL: f64 = 1e-3;
/// Maximum deviation accepted by [`long_time_agreement`].
pub const AGREEMENT_TOL: f64 = 1e-6;
/// Default horizon of [`long_time_agreement`], in units of `1 / spectral gap`.
pub const RELAXATION_TIMES: f64 = 20.0;

/// Counts turning points of a series whose swing to the following reversal is at least
/// `prominence`. Changes of direction smaller than `prominence` are absorbed into the current
/// run, so numerical jitter around a plateau does not register.
pub fn count_extrema(series: &[f64], prominence: f64) -> usize {
    if series.len() < 3 {
        return 0;
    }
    let start = series[0];
    let mut direction = 0i8;
    let mut pivot = start;
    let mut count = 0;
    for &x in &series[1..] {
        match direction {
            0 => {
                if x - start >= prominence {
                    direction = 1;
                    pivot = x;
                } else if start - x >= prominence {
                    direction = -1;
                    pivot = x;
                }
            }
            1 => {
                if x > pivot {
                    pivot = x;
                } else if pivot - x >= prominence {
                    count += 1;
                    direction = -1;
                    pivot = x;
                }
            }
            _ => {
                if x < pivot {
                    pivot = x;
                } else if x - pivot >= prominence {
                    count += 1;
                    direction = 1;
                    pivot = x;
                }
            }
        }
    }
    count
}

/// Number of oscillation extrema of population `component` along `traj`.
pub fn count_oscillations(traj: &Trajectory, component: usize) -> usize {
    count_extrema(&traj.population(component), EXTREMUM_PROMINENCE)
}

/// First sample time after which every sample stays within `ball` of `target` (entrywise max
/// norm). `None` if the last sample is still outside.
pub fn relaxation_time(traj: &Trajectory, target: &DensityMatrix, ball: f64) -> Option<f64> {
    let outside: Vec<bool> = traj
        .samples
        .iter()
        .map(|s| (s.state.matrix() - target.matrix()).max_abs() > ball)
        .collect();
    match outside.iter().rposition(|&o| o) {
        None => Some(traj.samples[0].t),
        Some(i) if i + 1 < traj.samples.len() => Some(traj.samples[i + 1].t),
        Some(_) => None,
    }
}

#[derive(Debug, Clone)]
pub struct AgreementReport {
    pub t_end: f64,
    /// `max |ρ(t_end) − ρ_ss|` over entries.
    pub distance: f64,
    pub passed: bool,
    pub steady: DensityMatrix,
    pub propagated: DensityMatrix,
}

/// Compares the propagated state at `t_end` with the null-space steady state. Without an
/// explicit horizon, integrates for 20 relaxation times of the slowest Liouvillian mode.
pub fn long_time_agreement(
    gen: &Generator,
    rho0: &DensityMatrix,
    t_end: Option<f64>,
) -> Result<AgreementReport> {
    let steady = steady_state(gen)?;
    let t_end = match t_end {
        Some(t) => t,
        None => RELAXATION_TIMES / spectral_gap(gen).unwrap_or(1.0),
    };
    let traj = integrate(gen, rho0, t_end, &IntegratorConfig::with_dt(t_end))?;
    let propagated = traj.final_state().clone();
    let distance = (propagated.matrix() - steady.matrix()).max_abs();
    Ok(AgreementReport {
        t_end,
        distance,
        passed: distance <= AGREEMENT_TOL,
        steady,
        propagated,
    })
}

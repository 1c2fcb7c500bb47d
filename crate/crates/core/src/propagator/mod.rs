//! Numerical propagation and steady states: the independent oracle for the closed forms.

mod analysis;
mod integrator;
mod steady;

pub use analysis::{
    count_extrema, count_oscillations, long_time_agreement, relaxation_time, AgreementReport,
    AGREEMENT_TOL, EXTREMUM_PROMINENCE, RELAXATION_BALL, RELAXATION_TIMES,
};
pub use integrator::{
    integrate, integrate_fixed_step, IntegrationStats, IntegratorConfig, Sample, Trajectory,
};
pub use steady::{
    liouvillian_spectrum, spectral_gap, steady_state, NULL_SPACE_RTOL, STEADY_POSITIVITY_TOL,
};

//! From temperature and dipole strength to the rate parameters of the model.

use dqd_dynamics::model::{decay_rate, planck_occupation, rates_from_physical, PhysicalParams};

fn main() -> dqd_dynamics::Result<()> {
    let gamma = decay_rate(1.0, 0.3)?;
    for beta_hbar_omega in [0.5, std::f64::consts::LN_2, 1.0, 3.0, 10.0] {
        let n_occ = planck_occupation(beta_hbar_omega)?;
        let rates = rates_from_physical(&PhysicalParams::new(gamma, n_occ, 0.5, 0.8)?);
        println!(
            "βħω = {beta_hbar_omega:<6.3} N = {n_occ:<8.4} l = {:.4} m = {:.4} n = {} p = {}",
            rates.l, rates.m, rates.n, rates.p
        );
    }
    Ok(())
}

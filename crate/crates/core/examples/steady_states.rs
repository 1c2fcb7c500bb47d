//! Stationary populations three ways: closed form, Liouvillian null space, and the published
//! driven formula (which is shown next to its consistency flags).

use dqd_dynamics::analytic::{driven_steady_oracle, driven_steady_printed, undriven_steady};
use dqd_dynamics::model::REFERENCE_RATES;

fn main() -> dqd_dynamics::Result<()> {
    println!(
        "undriven closed form: {:.6?}",
        undriven_steady(&REFERENCE_RATES)?
    );
    for p in [0.0, 0.4, 0.8, 1.6, 8.0, 80.0] {
        let rates = REFERENCE_RATES.with_p(p)?;
        let oracle = driven_steady_oracle(&rates)?;
        let printed = driven_steady_printed(&rates)?;
        println!(
            "p = {p:>5}: null space {oracle:.6?}  printed {:.6?}",
            printed.values
        );
        for flag in printed.flags() {
            println!("           ! {flag}");
        }
    }
    Ok(())
}

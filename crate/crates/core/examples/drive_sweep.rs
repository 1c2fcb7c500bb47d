//! Sweeps the drive strength l/p and reports the trends in stationary value, oscillation count
//! and relaxation time.

use dqd_dynamics::cli::{sweep, trend_lines, write_sweep, Format};
use dqd_dynamics::model::REFERENCE_RATES;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ratios = [4.0, 2.0, 1.0, 0.5, 0.25, 0.1];
    let outcome = sweep(&REFERENCE_RATES, &ratios, 40.0, 0.01)?;
    write_sweep(&outcome, Format::Csv, &mut std::io::stdout())?;
    for line in trend_lines(&outcome.trends) {
        println!("{line}");
    }
    Ok(())
}

//! Compares the published expression for the constant B with the value forced by ρ00(0) = 1.

use dqd_dynamics::analytic::{audit_constants, printed_rate_matrix, rate_matrix};
use dqd_dynamics::model::{RateParams, REFERENCE_RATES};

fn main() -> dqd_dynamics::Result<()> {
    for rates in [
        REFERENCE_RATES,
        RateParams::new(1.0, 0.2, 0.3, 0.0)?,
        RateParams::new(1.5, 1.0, 2.0, 0.0)?,
    ] {
        let a = audit_constants(&rates)?;
        println!(
            "(l, m, n) = ({}, {}, {}): B published {:+.6}, B fitted {:+.6}, C {:+.6}, A+B+C−1 with published B {:+.3e}",
            rates.l, rates.m, rates.n, a.printed_b, a.fitted_b, a.c_const, a.printed_initial_residual
        );
    }

    // Column sums of a generator of probability flow must vanish.
    let col_sums = |m: nalgebra::Matrix3<f64>| m.row_sum();
    println!(
        "rate-matrix column sums: {:?}",
        col_sums(rate_matrix(&REFERENCE_RATES)).as_slice()
    );
    println!(
        "as published:            {:?}",
        col_sums(printed_rate_matrix(&REFERENCE_RATES)).as_slice()
    );
    Ok(())
}

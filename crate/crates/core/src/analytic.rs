//! Closed-form populations and stationary values.
//!
//! Without the laser the populations obey the trace-preserving rate equations
//!
//! ```text
//! ρ̇00 = l ρ11 − m ρ00
//! ρ̇11 = m ρ00 − (l + n) ρ11 + n ρ22
//! ρ̇22 = n (ρ11 − ρ22)
//! ```
//!
//! which follow directly from the Lindblad generator of [`crate::model::build_undriven`].
//! Starting from `|0⟩⟨0|`, `ρ00(t) = A + B e^{λ0 t} + C e^{λ1 t}` with `A = l/(2m+l)`, and
//! `ρ11` follows from the first equation.
//!
//! Some published coefficient formulas do not survive these checks; they are kept here only
//! behind audit reports ([`audit_constants`], [`driven_steady_printed`],
//! [`printed_rate_matrix`]) so the discrepancies stay visible.

use nalgebra::Matrix3;

use crate::error::{Error, Result};
use crate::model::{build_driven, RateParams};
use crate::propagator::steady_state;

/// Corrected population rate matrix acting on `(ρ00, ρ11, ρ22)`. Columns sum to zero.
pub fn rate_matrix(rates: &RateParams) -> Matrix3<f64> {
    let RateParams { l, m, n, .. } = *rates;
    Matrix3::new(
        -m,
        l,
        0.0, //
        m,
        -(l + n),
        n, //
        0.0,
        n,
        -n,
    )
}

/// Rate matrix with the `ρ̇11` row in its published form `−(l+n)ρ00 + mρ11 + nρ22`.
/// Its columns do not sum to zero, so it does not conserve the trace.
pub fn printed_rate_matrix(rates: &RateParams) -> Matrix3<f64> {
    let RateParams { l, m, n, .. } = *rates;
    Matrix3::new(
        -m,
        l,
        0.0, //
        -(l + n),
        m,
        n, //
        0.0,
        n,
        -n,
    )
}

/// Nonzero eigenvalues of the rate matrix, `λ0 ≤ λ1 ≤ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair {
    pub lambda0: f64,
    pub lambda1: f64,
}

/// `λ = [−(l+m+2n) ∓ √((l+m+2n)² − 4(ln+2mn))] / 2`.
///
/// `λ1` is evaluated as `(ln+2mn)/λ0` to avoid cancellation when the product is small.
pub fn eigenvalues(rates: &RateParams) -> Result<EigenPair> {
    let RateParams { l, m, n, .. } = *rates;
    let sum = l + m + 2.0 * n;
    let product = l * n + 2.0 * m * n;
    let discriminant = sum * sum - 4.0 * product;
    if discriminant < 0.0 {
        return Err(Error::ComplexEigenvalues { discriminant });
    }
    let lambda0 = -(sum + discriminant.sqrt()) / 2.0;
    let lambda1 = if lambda0 != 0.0 {
        product / lambda0
    } else {
        0.0
    };
    Ok(EigenPair { lambda0, lambda1 })
}

/// Closed-form undriven trajectory from `|0⟩⟨0|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UndrivenSolution {
    pub a_const: f64,
    pub b_const: f64,
    pub c_const: f64,
    pub eigs: EigenPair,
    pub rates: RateParams,
}

fn stationary_a(rates: &RateParams) -> Result<f64> {
    let denom = 2.0 * rates.m + rates.l;
    if denom <= 0.0 {
        return Err(Error::UndefinedSteadyState);
    }
    Ok(rates.l / denom)
}

fn c_constant(eigs: &EigenPair, rates: &RateParams) -> f64 {
    let RateParams { l, m, .. } = *rates;
    let EigenPair { lambda0, lambda1 } = *eigs;
    m * (l + 2.0 * (lambda0 + m)) / ((2.0 * m + l) * (lambda0 - lambda1))
}

/// Fits `A`, `B`, `C` to `ρ00(0) = 1`, `ρ11(0) = 0`.
///
/// `C = m(l + 2(λ0+m)) / ((2m+l)(λ0−λ1))` and `B = 1 − A − C`.
pub fn undriven_solution(rates: &RateParams) -> Result<UndrivenSolution> {
    if !(rates.l > 0.0) {
        return Err(Error::Domain(format!(
            "closed form requires l > 0, got {}",
            rates.l
        )));
    }
    let eigs = eigenvalues(rates)?;
    let gap = eigs.lambda1 - eigs.lambda0;
    if gap <= 1e-14 * eigs.lambda0.abs().max(1.0) {
        return Err(Error::DegenerateEigenvalues(eigs.lambda0));
    }
    let a_const = stationary_a(rates)?;
    let c_const = c_constant(&eigs, rates);
    let b_const = 1.0 - a_const - c_const;
    Ok(UndrivenSolution {
        a_const,
        b_const,
        c_const,
        eigs,
        rates: *rates,
    })
}

/// `(ρ00, ρ11, ρ22)` at time `t`; `ρ22` is fixed by the unit trace.
pub fn eval_populations(sol: &UndrivenSolution, t: f64) -> [f64; 3] {
    let RateParams { l, m, .. } = sol.rates;
    let EigenPair { lambda0, lambda1 } = sol.eigs;
    let e0 = (lambda0 * t).exp();
    let e1 = (lambda1 * t).exp();
    let rho00 = sol.a_const + sol.b_const * e0 + sol.c_const * e1;
    let rho11 =
        (m * sol.a_const + (lambda0 + m) * sol.b_const * e0 + (lambda1 + m) * sol.c_const * e1) / l;
    [rho00, rho11, 1.0 - rho00 - rho11]
}

/// `(l, m, m) / (2m + l)`, independent of `n`.
pub fn undriven_steady(rates: &RateParams) -> Result<[f64; 3]> {
    let a = stationary_a(rates)?;
    let b = rates.m / (2.0 * rates.m + rates.l);
    Ok([a, b, b])
}

/// Published `B` next to the value fitted to the initial condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantsAudit {
    pub printed_b: f64,
    pub fitted_b: f64,
    pub c_const: f64,
    /// `A + B + C − 1` with the published `B`; zero if it met `ρ00(0) = 1`.
    pub printed_initial_residual: f64,
}

/// Evaluates the published expression
/// `B = 1 − [l(m + (2m+l)(λ0−λ1)) − 2m(λ0+m)] / ((2m+l)(λ0−λ1))`
/// and compares it with the fitted constant.
pub fn audit_constants(rates: &RateParams) -> Result<ConstantsAudit> {
    let sol = undriven_solution(rates)?;
    let RateParams { l, m, .. } = *rates;
    let EigenPair { lambda0, lambda1 } = sol.eigs;
    let d = lambda0 - lambda1;
    let printed_b =
        1.0 - (l * (m + (2.0 * m + l) * d) - 2.0 * m * (lambda0 + m)) / ((2.0 * m + l) * d);
    Ok(ConstantsAudit {
        printed_b,
        fitted_b: sol.b_const,
        c_const: sol.c_const,
        printed_initial_residual: sol.a_const + printed_b + sol.c_const - 1.0,
    })
}

/// Published driven stationary values and what is wrong with them.
#[derive(Debug, Clone, PartialEq)]
pub struct PrintedSteadyReport {
    /// `(ρ00, ρ11, ρ22)` as printed; not normalized.
    pub values: [f64; 3],
    pub population_sum: f64,
    /// Set when the printed `ρ00` at `p = 0` differs from the undriven `l/(2m+l)`.
    pub p0_inconsistency: Option<P0Inconsistency>,
    pub trace_violation: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct P0Inconsistency {
    /// `l/(2l+m)`.
    pub printed: f64,
    /// `l/(2m+l)`.
    pub expected: f64,
}

impl PrintedSteadyReport {
    pub fn is_consistent(&self) -> bool {
        self.p0_inconsistency.is_none() && !self.trace_violation
    }

    pub fn flags(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(p0) = self.p0_inconsistency {
            out.push(format!(
                "p=0 inconsistency: printed rho00 = {:.17e}, undriven stationary value = {:.17e}",
                p0.printed, p0.expected
            ));
        }
        if self.trace_violation {
            out.push(format!(
                "trace violation: printed populations sum to {:.17e}",
                self.population_sum
            ));
        }
        out
    }
}

const PRINTED_CONSISTENCY_TOL: f64 = 1e-12;

/// Evaluates the published driven stationary formulas verbatim:
///
/// ```text
/// K   = 1/(m+n) + 1/(l+m+n)
/// ρ00 = (l + 2p²K) / (2l + m + 6p²K)
/// ρ11 = ρ22 = 1 − 2(l + 2p²K) / (2l + m + 6p²K)
/// ```
///
/// Each tends to 1/3 as `p → ∞`, but for finite `p` they are not normalized and at `p = 0`
/// they disagree with the undriven fixed point. Use [`driven_steady_oracle`] for physics.
pub fn driven_steady_printed(rates: &RateParams) -> Result<PrintedSteadyReport> {
    let RateParams { l, m, n, p } = *rates;
    if !(m + n > 0.0) || !(l + m + n > 0.0) {
        return Err(Error::Domain(
            "printed stationary values need m + n > 0".into(),
        ));
    }
    let k = 1.0 / (m + n) + 1.0 / (l + m + n);
    let num = l + 2.0 * p * p * k;
    let den = 2.0 * l + m + 6.0 * p * p * k;
    let rho00 = num / den;
    let rho11 = 1.0 - 2.0 * num / den;
    let values = [rho00, rho11, rho11];
    let population_sum = values.iter().sum::<f64>();
    let p0_inconsistency = if p == 0.0 {
        let expected = stationary_a(rates)?;
        ((rho00 - expected).abs() > PRINTED_CONSISTENCY_TOL).then_some(P0Inconsistency {
            printed: rho00,
            expected,
        })
    } else {
        None
    };
    Ok(PrintedSteadyReport {
        values,
        population_sum,
        p0_inconsistency,
        trace_violation: (population_sum - 1.0).abs() > PRINTED_CONSISTENCY_TOL,
    })
}

/// Driven stationary populations from the null space of the full generator.
pub fn driven_steady_oracle(rates: &RateParams) -> Result<[f64; 3]> {
    let ss = steady_state(&build_driven(rates)?)?;
    let pops = ss.populations();
    Ok([pops[0], pops[1], pops[2]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::REFERENCE_RATES;

    fn rates(l: f64, m: f64, n: f64) -> RateParams {
        RateParams::new(l, m, n, 0.0).unwrap()
    }

    #[test]
    fn reference_eigenvalues() {
        let e = eigenvalues(&REFERENCE_RATES).unwrap();
        // numpy: eigvals of the rate matrix at (0.8, 0.4, 0.5)
        assert!((e.lambda0 + 1.740_312_423_743_285).abs() < 1e-12);
        assert!((e.lambda1 + 0.459_687_576_256_715).abs() < 1e-12);
    }

    #[test]
    fn eigenvalues_without_tunneling() {
        let e = eigenvalues(&rates(0.8, 0.4, 0.0)).unwrap();
        assert!((e.lambda0 + 1.2).abs() < 1e-15);
        assert_eq!(e.lambda1, 0.0);
        let e = eigenvalues(&rates(0.7, 0.0, 0.0)).unwrap();
        assert!((e.lambda0 + 0.7).abs() < 1e-15);
        assert_eq!(e.lambda1, 0.0);
    }

    #[test]
    fn complex_branch_reports_discriminant() {
        // The discriminant equals (l+m)² + 4n(n−m) ≥ l² + 2lm, so only l < 0 reaches this branch.
        let r = RateParams {
            l: -0.5,
            m: 1.0,
            n: 0.5,
            p: 0.0,
        };
        match eigenvalues(&r) {
            Err(Error::ComplexEigenvalues { discriminant }) => assert!(discriminant < 0.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn reference_steady_values() {
        assert_eq!(
            undriven_steady(&REFERENCE_RATES).unwrap(),
            [0.5, 0.25, 0.25]
        );
        assert_eq!(
            undriven_steady(&rates(1.0, 0.0, 0.3)).unwrap(),
            [1.0, 0.0, 0.0]
        );
        let eq = undriven_steady(&rates(0.6, 0.6, 0.3)).unwrap();
        assert!(eq.iter().all(|&x| (x - 1.0 / 3.0).abs() < 1e-15));
        assert_eq!(
            undriven_steady(&rates(0.0, 0.0, 0.3)),
            Err(Error::UndefinedSteadyState)
        );
    }

    #[test]
    fn steady_values_independent_of_n() {
        let a = undriven_steady(&rates(0.8, 0.4, 0.1)).unwrap();
        let b = undriven_steady(&rates(0.8, 0.4, 5.0)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn solution_initial_and_final() {
        let sol = undriven_solution(&REFERENCE_RATES).unwrap();
        assert!((sol.a_const - 0.5).abs() < 1e-15);
        assert!((sol.a_const + sol.b_const + sol.c_const - 1.0).abs() < 1e-12);
        let p0 = eval_populations(&sol, 0.0);
        for (got, want) in p0.iter().zip([1.0, 0.0, 0.0]) {
            assert!((got - want).abs() < 1e-10);
        }
        let late = eval_populations(&sol, 200.0);
        for (got, want) in late.iter().zip([0.5, 0.25, 0.25]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn rho11_leads_rho22() {
        let sol = undriven_solution(&REFERENCE_RATES).unwrap();
        for k in 0..=600 {
            let [_, r11, r22] = eval_populations(&sol, k as f64 * 0.05);
            assert!(r11 >= r22 - 1e-15, "t = {}", k as f64 * 0.05);
        }
    }

    #[test]
    fn degenerate_and_domain_errors() {
        assert!(matches!(
            undriven_solution(&rates(0.0, 0.0, 0.2)),
            Err(Error::Domain(_))
        ));
        // λ0 = λ1 needs a vanishing discriminant, which only occurs with l = 0.
        let r = RateParams {
            l: 1e-300,
            m: 0.0,
            n: 0.0,
            p: 0.0,
        };
        assert!(matches!(
            undriven_solution(&r),
            Err(Error::DegenerateEigenvalues(_))
        ));
    }

    #[test]
    fn printed_b_misses_initial_condition() {
        let audit = audit_constants(&REFERENCE_RATES).unwrap();
        assert!(audit.printed_initial_residual.abs() > 0.1);
        assert!((audit.printed_b - audit.fitted_b).abs() > 0.1);
    }

    #[test]
    fn printed_rate_matrix_breaks_trace() {
        let m = printed_rate_matrix(&REFERENCE_RATES);
        let col_sums = m.row_sum();
        assert!(col_sums.iter().any(|s| s.abs() > 0.1));
        assert!(rate_matrix(&REFERENCE_RATES)
            .row_sum()
            .iter()
            .all(|s| s.abs() < 1e-15));
    }

    #[test]
    fn printed_driven_values_at_zero_drive() {
        let report = driven_steady_printed(&REFERENCE_RATES).unwrap();
        assert!((report.values[0] - 0.4).abs() < 1e-15);
        let p0 = report.p0_inconsistency.unwrap();
        assert!((p0.printed - 0.4).abs() < 1e-15 && (p0.expected - 0.5).abs() < 1e-15);
        assert!(report.trace_violation);
        assert!(!report.is_consistent());
        assert_eq!(report.flags().len(), 2);
    }

    #[test]
    fn printed_driven_values_large_drive() {
        let report = driven_steady_printed(&REFERENCE_RATES.with_p(1e4).unwrap()).unwrap();
        for v in report.values {
            assert!((v - 1.0 / 3.0).abs() < 1e-6);
        }
        assert!(report.p0_inconsistency.is_none());
    }

    #[test]
    fn printed_driven_needs_m_plus_n() {
        assert!(driven_steady_printed(&rates(1.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn oracle_reduces_to_undriven() {
        let pops = driven_steady_oracle(&REFERENCE_RATES).unwrap();
        for (got, want) in pops.iter().zip([0.5, 0.25, 0.25]) {
            assert!((got - want).abs() < 1e-10);
        }
    }

    #[test]
    fn oracle_under_drive() {
        let strong = driven_steady_oracle(&REFERENCE_RATES.with_p(8.0).unwrap()).unwrap();
        assert!(strong.iter().all(|&x| (x - 1.0 / 3.0).abs() < 0.02));
        let weak = driven_steady_oracle(&REFERENCE_RATES.with_p(0.4).unwrap()).unwrap();
        assert!(weak[0] > 1.0 / 3.0 && weak[0] < 0.5);
        // Null-space value at l/p = 2, from an independent numpy computation.
        assert!((weak[0] - 0.431_034_482_758_620_7).abs() < 1e-10);
        assert!((weak[1] - weak[2]).abs() < 1e-10);
    }
}

//! The double-quantum-dot model: three levels `|0⟩` (valence band, left dot),
//! `|1⟩` (conduction band, left dot) and `|2⟩` (conduction band, right dot).
//!
//! The 0↔1 transition couples to a thermal photon bath with emission rate `l = γ01(N+1)` and
//! absorption rate `m = γ01·N`. The resonant 1↔2 tunneling channel is modelled by a pair of
//! jump operators with the same phenomenological rate `n` in both directions. An optional
//! resonant laser on 0↔1 enters in the rotating frame as `H = −p(σ+01 + σ−01)` with `p = Ω/2`.
//! There is no direct 0↔2 transition.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{ComplexMatrix, Generator, LindbladTerm};

pub const LEVELS: usize = 3;

/// Physical inputs. Rates are in a common inverse-time unit with ħ = c = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// Spontaneous emission rate of the 0↔1 transition.
    pub gamma01: f64,
    /// Planck occupation `N(ω01)`.
    pub n_occ: f64,
    /// Tunneling rate constant between `|1⟩` and `|2⟩`.
    pub n_tunnel: f64,
    /// Rabi frequency Ω.
    pub omega_rabi: f64,
}

impl PhysicalParams {
    pub fn new(gamma01: f64, n_occ: f64, n_tunnel: f64, omega_rabi: f64) -> Result<Self> {
        for (name, v) in [
            ("gamma01", gamma01),
            ("n_occ", n_occ),
            ("n_tunnel", n_tunnel),
            ("omega_rabi", omega_rabi),
        ] {
            check_nonneg(name, v)?;
        }
        Ok(Self {
            gamma01,
            n_occ,
            n_tunnel,
            omega_rabi,
        })
    }
}

/// Rates entering the master equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateParams {
    /// Emission 1 → 0 (spontaneous plus thermally induced).
    pub l: f64,
    /// Thermal absorption 0 → 1.
    pub m: f64,
    /// Tunneling 1 ↔ 2.
    pub n: f64,
    /// Half the Rabi frequency.
    pub p: f64,
}

impl RateParams {
    pub fn new(l: f64, m: f64, n: f64, p: f64) -> Result<Self> {
        for (name, v) in [("l", l), ("m", m), ("n", n), ("p", p)] {
            check_nonneg(name, v)?;
        }
        if m > l {
            return Err(Error::InvalidParameter(format!(
                "emission rate l = {l} must be >= absorption rate m = {m}"
            )));
        }
        Ok(Self { l, m, n, p })
    }

    /// Drive given as the ratio `l/p`.
    pub fn with_ratio(l: f64, m: f64, n: f64, l_over_p: f64) -> Result<Self> {
        if !(l_over_p > 0.0) || !l_over_p.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "l/p ratio must be positive, got {l_over_p}"
            )));
        }
        Self::new(l, m, n, l / l_over_p)
    }

    pub fn undriven(self) -> Self {
        Self { p: 0.0, ..self }
    }

    pub fn with_p(self, p: f64) -> Result<Self> {
        Self::new(self.l, self.m, self.n, p)
    }
}

fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if !(v >= 0.0) || !v.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "{name} must be finite and >= 0, got {v}"
        )));
    }
    Ok(())
}

/// Mean thermal photon number `1/(e^x − 1)` for `x = βħω`.
pub fn planck_occupation(beta_hbar_omega: f64) -> Result<f64> {
    if !(beta_hbar_omega > 0.0) {
        return Err(Error::Domain(format!(
            "βħω must be positive, got {beta_hbar_omega}"
        )));
    }
    Ok(1.0 / beta_hbar_omega.exp_m1())
}

/// Dipole decay rate `4ω³|d|²/3` (ħ = c = 1).
pub fn decay_rate(omega: f64, dipole_sq: f64) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::Domain(format!(
            "transition frequency must be positive, got {omega}"
        )));
    }
    if !(dipole_sq >= 0.0) || !dipole_sq.is_finite() {
        return Err(Error::Domain(format!(
            "|d|² must be nonnegative, got {dipole_sq}"
        )));
    }
    Ok(4.0 * omega.powi(3) * dipole_sq / 3.0)
}

pub fn rates_from_physical(phys: &PhysicalParams) -> RateParams {
    RateParams {
        l: phys.gamma01 * (phys.n_occ + 1.0),
        m: phys.gamma01 * phys.n_occ,
        n: phys.n_tunnel,
        p: phys.omega_rabi / 2.0,
    }
}

/// σ−01 = |0⟩⟨1|
pub fn sigma_minus_01() -> ComplexMatrix {
    ComplexMatrix::transition(LEVELS, 0, 1)
}

/// σ+01 = |1⟩⟨0|
pub fn sigma_plus_01() -> ComplexMatrix {
    ComplexMatrix::transition(LEVELS, 1, 0)
}

/// σ−12 = |1⟩⟨2|
pub fn sigma_minus_12() -> ComplexMatrix {
    ComplexMatrix::transition(LEVELS, 1, 2)
}

/// σ+12 = |2⟩⟨1|
pub fn sigma_plus_12() -> ComplexMatrix {
    ComplexMatrix::transition(LEVELS, 2, 1)
}

fn dissipative_terms(rates: &RateParams) -> Result<Vec<LindbladTerm>> {
    Ok(vec![
        LindbladTerm::new(sigma_minus_01(), rates.l)?,
        LindbladTerm::new(sigma_plus_01(), rates.m)?,
        LindbladTerm::new(sigma_minus_12(), rates.n)?,
        LindbladTerm::new(sigma_plus_12(), rates.n)?,
    ])
}

/// Bath-only generator in the interaction frame (`H = 0`); `rates.p` is ignored.
pub fn build_undriven(rates: &RateParams) -> Result<Generator> {
    Generator::new(ComplexMatrix::zeros(LEVELS), dissipative_terms(rates)?)
}

/// Laser-driven generator with `H = −p(σ+01 + σ−01)` in the rotating frame.
///
/// With this sign, starting from `|0⟩⟨0|` the coherence `ρ01` initially moves along `−i`
/// for `p > 0`. Populations do not depend on the sign of `p`.
pub fn drive_hamiltonian(p: f64) -> ComplexMatrix {
    (sigma_plus_01() + sigma_minus_01()).scale_real(-p)
}

pub fn build_driven(rates: &RateParams) -> Result<Generator> {
    Generator::new(drive_hamiltonian(rates.p), dissipative_terms(rates)?)
}

/// Builds the driven generator when `driven` is set, otherwise the undriven one.
pub fn build(rates: &RateParams, driven: bool) -> Result<Generator> {
    if driven {
        build_driven(rates)
    } else {
        build_undriven(rates)
    }
}

/// Tunneling rate used by every figure preset. The figures only fix `l` and `m`.
pub const REFERENCE_N: f64 = 0.5;
pub const REFERENCE_L: f64 = 0.8;
pub const REFERENCE_M: f64 = 0.4;

/// `(l, m, n) = (0.8, 0.4, 0.5)` without drive.
pub const REFERENCE_RATES: RateParams = RateParams {
    l: REFERENCE_L,
    m: REFERENCE_M,
    n: REFERENCE_N,
    p: 0.0,
};

/// Drive ratios `l/p` of the driven figure sets, strongest last.
pub const FIGURE_RATIOS: [f64; 4] = [2.0, 1.0, 0.5, 0.1];

/// A named parameter set reproducing one group of figures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub rates: RateParams,
    pub driven: bool,
    pub t_end: f64,
}

const PRESET_T_END: f64 = 30.0;

pub const PRESETS: [Preset; 5] = [
    Preset {
        name: "fig2-4",
        rates: REFERENCE_RATES,
        driven: false,
        t_end: PRESET_T_END,
    },
    Preset {
        name: "fig5-7",
        rates: RateParams {
            p: 0.4,
            ..REFERENCE_RATES
        },
        driven: true,
        t_end: PRESET_T_END,
    },
    Preset {
        name: "fig8-9",
        rates: RateParams {
            p: 0.8,
            ..REFERENCE_RATES
        },
        driven: true,
        t_end: PRESET_T_END,
    },
    Preset {
        name: "fig10-11",
        rates: RateParams {
            p: 1.6,
            ..REFERENCE_RATES
        },
        driven: true,
        t_end: PRESET_T_END,
    },
    Preset {
        name: "fig12-13",
        rates: RateParams {
            p: 8.0,
            ..REFERENCE_RATES
        },
        driven: true,
        t_end: PRESET_T_END,
    },
];

impl Preset {
    pub fn by_name(name: &str) -> Option<Preset> {
        PRESETS.iter().copied().find(|p| p.name == name)
    }

    pub fn generator(&self) -> Result<Generator> {
        build(&self.rates, self.driven)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::DensityMatrix;

    #[test]
    fn planck_values() {
        assert!((planck_occupation(std::f64::consts::LN_2).unwrap() - 1.0).abs() < 1e-15);
        assert!(
            (planck_occupation(1.0).unwrap() - 1.0 / (std::f64::consts::E - 1.0)).abs() < 1e-15
        );
        assert!((planck_occupation(1.0).unwrap() - 0.5820).abs() < 5e-5);
        assert!(planck_occupation(800.0).unwrap() < 1e-300);
        assert!(planck_occupation(0.0).is_err());
        assert!(planck_occupation(-1.0).is_err());
    }

    #[test]
    fn planck_is_decreasing() {
        let xs = [0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 20.0];
        let ns: Vec<f64> = xs.iter().map(|&x| planck_occupation(x).unwrap()).collect();
        assert!(ns.windows(2).all(|w| w[0] > w[1]));
        assert!(ns.iter().all(|&n| n > 0.0));
    }

    #[test]
    fn decay_rate_values() {
        assert_eq!(decay_rate(1.0, 0.0).unwrap(), 0.0);
        assert!((decay_rate(1.0, 0.75).unwrap() - 1.0).abs() < 1e-15);
        assert!((decay_rate(2.0, 0.75).unwrap() - 8.0).abs() < 1e-14);
        assert!(
            (decay_rate(1.5, 1.2).unwrap() / decay_rate(1.5, 0.6).unwrap() - 2.0).abs() < 1e-14
        );
        assert!(decay_rate(0.0, 1.0).is_err());
        assert!(decay_rate(1.0, -1.0).is_err());
    }

    #[test]
    fn reference_rates_from_physical() {
        let r = rates_from_physical(&PhysicalParams::new(0.4, 1.0, 0.5, 0.8).unwrap());
        assert!((r.l - 0.8).abs() < 1e-15 && (r.m - 0.4).abs() < 1e-15);
        assert_eq!((r.n, r.p), (0.5, 0.4));

        let r = rates_from_physical(&PhysicalParams::new(1.0, 0.0, 0.0, 0.0).unwrap());
        assert_eq!((r.l, r.m, r.n, r.p), (1.0, 0.0, 0.0, 0.0));

        let r = rates_from_physical(&PhysicalParams::new(0.4, 1.0, 0.5, 8.0).unwrap());
        assert_eq!(r.p, 4.0);
        let r = rates_from_physical(&PhysicalParams::new(0.4, 1.0, 0.5, 16.0).unwrap());
        assert!((r.l / r.p - 0.1).abs() < 1e-15);
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(PhysicalParams::new(-0.1, 1.0, 0.5, 0.0).is_err());
        assert!(RateParams::new(0.4, 0.8, 0.5, 0.0).is_err());
        assert!(RateParams::new(0.8, 0.4, f64::NAN, 0.0).is_err());
        assert!(RateParams::with_ratio(0.8, 0.4, 0.5, 0.0).is_err());
    }

    #[test]
    fn ratio_constructor() {
        let r = RateParams::with_ratio(0.8, 0.4, 0.5, 0.1).unwrap();
        assert!((r.p - 8.0).abs() < 1e-14);
    }

    #[test]
    fn undriven_rhs_on_ground_state() {
        let gen = build_undriven(&REFERENCE_RATES).unwrap();
        let d = gen
            .apply(DensityMatrix::basis_state(3, 0).matrix())
            .unwrap();
        assert!((d.get(0, 0).re + 0.4).abs() < 1e-15);
        assert!((d.get(1, 1).re - 0.4).abs() < 1e-15);
        assert_eq!(d.get(2, 2).norm(), 0.0);
        assert!(
            (d.clone() - ComplexMatrix::from_real_diagonal(&d.diagonal_real())).max_abs() < 1e-15
        );
    }

    #[test]
    fn driven_rhs_creates_imaginary_coherence() {
        let rates = RateParams {
            p: 0.4,
            ..REFERENCE_RATES
        };
        let gen = build_driven(&rates).unwrap();
        let d = gen
            .apply(DensityMatrix::basis_state(3, 0).matrix())
            .unwrap();
        // −i[−p(σ+ + σ−), |0⟩⟨0|] puts ∓ip on (0,1)/(1,0).
        assert!(d.get(0, 1).re.abs() < 1e-15 && (d.get(0, 1).im + 0.4).abs() < 1e-15);
        assert!(d.get(1, 0).re.abs() < 1e-15 && (d.get(1, 0).im - 0.4).abs() < 1e-15);
    }

    #[test]
    fn presets_are_named_and_consistent() {
        assert_eq!(PRESETS.len(), 5);
        for (preset, ratio) in PRESETS[1..].iter().zip(FIGURE_RATIOS) {
            assert!((preset.rates.l / preset.rates.p - ratio).abs() < 1e-12);
            assert!(preset.driven);
        }
        assert!(Preset::by_name("fig12-13").is_some());
        assert!(Preset::by_name("fig1").is_none());
    }
}

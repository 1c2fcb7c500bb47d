//! Run configuration: defaults, presets, an optional JSON document and command-line flags,
//! merged in that order so later sources win.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::model::{rates_from_physical, PhysicalParams, Preset, RateParams, REFERENCE_RATES};
use crate::quantum::DensityMatrix;

use super::CliError;

pub const DEFAULT_T_END: f64 = 30.0;
pub const DEFAULT_DT: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum InitialKind {
    /// |0⟩⟨0|
    Ground,
    /// I/3
    Mixed,
    /// Diagonal state given by --diag
    Custom,
}

/// JSON run manifest. Every field is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub preset: Option<String>,
    pub l: Option<f64>,
    pub m: Option<f64>,
    pub n: Option<f64>,
    pub p: Option<f64>,
    pub ratio: Option<f64>,
    /// Physical parameters converted to rates; explicit rate fields override them.
    pub physical: Option<PhysicalParams>,
    pub driven: Option<bool>,
    pub t_end: Option<f64>,
    pub dt: Option<f64>,
    pub initial: Option<InitialKind>,
    pub diag: Option<Vec<f64>>,
    pub ratios: Option<Vec<f64>>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("bad config {}: {e}", path.display())))
    }

    /// Fields of `other` that are set replace those of `self`.
    pub fn overlay(self, other: ConfigFile) -> ConfigFile {
        ConfigFile {
            preset: other.preset.or(self.preset),
            l: other.l.or(self.l),
            m: other.m.or(self.m),
            n: other.n.or(self.n),
            p: other.p.or(self.p),
            ratio: other.ratio.or(self.ratio),
            physical: other.physical.or(self.physical),
            driven: other.driven.or(self.driven),
            t_end: other.t_end.or(self.t_end),
            dt: other.dt.or(self.dt),
            initial: other.initial.or(self.initial),
            diag: other.diag.or(self.diag),
            ratios: other.ratios.or(self.ratios),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialState {
    Ground,
    Mixed,
    Custom(Vec<f64>),
}

impl InitialState {
    pub fn density(&self) -> Result<DensityMatrix, CliError> {
        match self {
            InitialState::Ground => Ok(DensityMatrix::basis_state(3, 0)),
            InitialState::Mixed => Ok(DensityMatrix::maximally_mixed(3)),
            InitialState::Custom(d) => {
                DensityMatrix::diagonal(d).map_err(|e| CliError::Config(e.to_string()))
            }
        }
    }
}

/// Fully resolved configuration of a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub preset: Option<String>,
    pub rates: RateParams,
    pub driven: bool,
    pub t_end: f64,
    pub output_dt: f64,
    pub initial: InitialState,
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Config(format!(
            "{name} must be positive, got {v}"
        )))
    }
}

impl RunConfig {
    pub fn resolve(cfg: &ConfigFile) -> Result<Self, CliError> {
        let preset = match &cfg.preset {
            Some(name) => Some(Preset::by_name(name).ok_or_else(|| {
                CliError::Config(format!("unknown preset {name:?} (expected fig2-4, fig5-7, fig8-9, fig10-11 or fig12-13)"))
            })?),
            None => None,
        };

        let mut base = preset.map(|p| p.rates).unwrap_or(REFERENCE_RATES);
        if let Some(phys) = &cfg.physical {
            let phys =
                PhysicalParams::new(phys.gamma01, phys.n_occ, phys.n_tunnel, phys.omega_rabi)
                    .map_err(|e| CliError::Config(e.to_string()))?;
            base = rates_from_physical(&phys);
        }
        let l = cfg.l.unwrap_or(base.l);
        let m = cfg.m.unwrap_or(base.m);
        let n = cfg.n.unwrap_or(base.n);
        let p = match (cfg.p, cfg.ratio) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config("give either p or ratio, not both".into()))
            }
            (Some(p), None) => p,
            (None, Some(r)) => l / positive("ratio", r)?,
            (None, None) => base.p,
        };
        let rates = RateParams::new(l, m, n, p).map_err(|e| CliError::Config(e.to_string()))?;

        // An explicit drive strength implies the driven model unless told otherwise.
        let drive_given = cfg.p.is_some()
            || cfg.ratio.is_some()
            || cfg.physical.is_some_and(|ph| ph.omega_rabi > 0.0);
        let driven = cfg.driven.unwrap_or_else(|| {
            if drive_given {
                rates.p > 0.0
            } else {
                preset.is_some_and(|p| p.driven)
            }
        });

        let t_end = positive(
            "t_end",
            cfg.t_end
                .unwrap_or(preset.map_or(DEFAULT_T_END, |p| p.t_end)),
        )?;
        let output_dt = positive("dt", cfg.dt.unwrap_or(DEFAULT_DT))?;

        let initial = match (cfg.initial, &cfg.diag) {
            (Some(InitialKind::Custom), Some(d)) | (None, Some(d)) => {
                if d.len() != 3 {
                    return Err(CliError::Config(format!(
                        "custom diagonal needs 3 entries, got {}",
                        d.len()
                    )));
                }
                if d.iter().any(|&x| !(x >= 0.0)) {
                    return Err(CliError::Config(
                        "custom diagonal entries must be nonnegative".into(),
                    ));
                }
                let sum: f64 = d.iter().sum();
                if (sum - 1.0).abs() > 1e-12 {
                    return Err(CliError::Config(format!(
                        "custom diagonal must sum to 1, got {sum}"
                    )));
                }
                InitialState::Custom(d.clone())
            }
            (Some(InitialKind::Custom), None) => {
                return Err(CliError::Config("--initial custom requires --diag".into()))
            }
            (Some(InitialKind::Mixed), _) => InitialState::Mixed,
            (Some(InitialKind::Ground), _) | (None, None) => InitialState::Ground,
        };

        Ok(RunConfig {
            preset: preset.map(|p| p.name.to_string()),
            rates,
            driven,
            t_end,
            output_dt,
            initial,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_reference_undriven() {
        let rc = RunConfig::resolve(&ConfigFile::default()).unwrap();
        assert_eq!(rc.rates, REFERENCE_RATES);
        assert!(!rc.driven);
        assert_eq!(rc.initial, InitialState::Ground);
        assert_eq!((rc.t_end, rc.output_dt), (DEFAULT_T_END, DEFAULT_DT));
    }

    #[test]
    fn preset_then_overrides() {
        let cfg = ConfigFile {
            preset: Some("fig8-9".into()),
            t_end: Some(5.0),
            ..Default::default()
        };
        let rc = RunConfig::resolve(&cfg).unwrap();
        assert!(rc.driven);
        assert_eq!(rc.rates.p, 0.8);
        assert_eq!(rc.t_end, 5.0);
    }

    #[test]
    fn overlay_prefers_later_source() {
        let file = ConfigFile {
            l: Some(1.0),
            n: Some(0.2),
            ..Default::default()
        };
        let flags = ConfigFile {
            l: Some(2.0),
            ..Default::default()
        };
        let merged = file.overlay(flags);
        assert_eq!((merged.l, merged.n), (Some(2.0), Some(0.2)));
    }

    #[test]
    fn ratio_implies_drive() {
        let rc = RunConfig::resolve(&ConfigFile {
            ratio: Some(0.1),
            ..Default::default()
        })
        .unwrap();
        assert!(rc.driven);
        assert!((rc.rates.p - 8.0).abs() < 1e-12);
        let rc = RunConfig::resolve(&ConfigFile {
            ratio: Some(0.1),
            driven: Some(false),
            ..Default::default()
        })
        .unwrap();
        assert!(!rc.driven);
    }

    #[test]
    fn physical_conversion() {
        let phys = PhysicalParams {
            gamma01: 0.4,
            n_occ: 1.0,
            n_tunnel: 0.5,
            omega_rabi: 1.6,
        };
        let rc = RunConfig::resolve(&ConfigFile {
            physical: Some(phys),
            ..Default::default()
        })
        .unwrap();
        assert!((rc.rates.l - 0.8).abs() < 1e-15);
        assert_eq!(rc.rates.p, 0.8);
        assert!(rc.driven);
    }

    #[test]
    fn rejects_bad_values() {
        let bad = [
            ConfigFile {
                t_end: Some(0.0),
                ..Default::default()
            },
            ConfigFile {
                dt: Some(-1.0),
                ..Default::default()
            },
            ConfigFile {
                preset: Some("fig1".into()),
                ..Default::default()
            },
            ConfigFile {
                p: Some(1.0),
                ratio: Some(1.0),
                ..Default::default()
            },
            ConfigFile {
                m: Some(2.0),
                ..Default::default()
            },
            ConfigFile {
                diag: Some(vec![0.5, 0.5, 0.1]),
                ..Default::default()
            },
            ConfigFile {
                diag: Some(vec![1.5, -0.5, 0.0]),
                ..Default::default()
            },
            ConfigFile {
                initial: Some(InitialKind::Custom),
                ..Default::default()
            },
        ];
        for cfg in bad {
            assert!(RunConfig::resolve(&cfg).is_err(), "{cfg:?}");
        }
    }

    #[test]
    fn custom_diagonal() {
        let cfg = ConfigFile {
            diag: Some(vec![0.2, 0.3, 0.5]),
            ..Default::default()
        };
        let rc = RunConfig::resolve(&cfg).unwrap();
        assert_eq!(
            rc.initial.density().unwrap().populations(),
            vec![0.2, 0.3, 0.5]
        );
    }

    #[test]
    fn json_document_parses() {
        let cfg: ConfigFile =
            serde_json::from_str(r#"{"preset": "fig5-7", "dt": 0.05, "initial": "mixed"}"#)
                .unwrap();
        assert_eq!(cfg.initial, Some(InitialKind::Mixed));
        assert!(serde_json::from_str::<ConfigFile>(r#"{"bogus": 1}"#).is_err());
    }
}

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{driven_steady_oracle, driven_steady_printed, undriven_steady};
use crate::model::{build, build_driven, RateParams};
use crate::propagator::{
    count_oscillations, integrate, relaxation_time, steady_state, IntegratorConfig, Trajectory,
    RELAXATION_BALL,
};
use crate::validation::SuiteReport;

use super::config::RunConfig;
use super::{CliError, Format};

pub const CSV_HEADER: [&str; 10] = [
    "t", "rho00", "rho11", "rho22", "re_rho01", "im_rho01", "re_rho12", "im_rho12", "re_rho02",
    "im_rho02",
];

/// 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "NaN".to_string(), fmt_f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleRow {
    pub t: f64,
    pub rho00: f64,
    pub rho11: f64,
    pub rho22: f64,
    pub re_rho01: f64,
    pub im_rho01: f64,
    pub re_rho12: f64,
    pub im_rho12: f64,
    pub re_rho02: f64,
    pub im_rho02: f64,
}

impl SampleRow {
    fn values(&self) -> [f64; 10] {
        [
            self.t,
            self.rho00,
            self.rho11,
            self.rho22,
            self.re_rho01,
            self.im_rho01,
            self.re_rho12,
            self.im_rho12,
            self.re_rho02,
            self.im_rho02,
        ]
    }
}

pub fn sample_rows(traj: &Trajectory) -> Vec<SampleRow> {
    traj.samples
        .iter()
        .map(|s| {
            let r = |i, j| s.state.get(i, j);
            SampleRow {
                t: s.t,
                rho00: r(0, 0).re,
                rho11: r(1, 1).re,
                rho22: r(2, 2).re,
                re_rho01: r(0, 1).re,
                im_rho01: r(0, 1).im,
                re_rho12: r(1, 2).re,
                im_rho12: r(1, 2).im,
                re_rho02: r(0, 2).re,
                im_rho02: r(0, 2).im,
            }
        })
        .collect()
}

pub fn simulate(rc: &RunConfig) -> Result<Trajectory, CliError> {
    let gen = build(&rc.rates, rc.driven)?;
    let rho0 = rc.initial.density()?;
    Ok(integrate(
        &gen,
        &rho0,
        rc.t_end,
        &IntegratorConfig::with_dt(rc.output_dt),
    )?)
}

fn csv_writer(out: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

pub fn write_simulation(
    rc: &RunConfig,
    traj: &Trajectory,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let rows = sample_rows(traj);
    match format {
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(CSV_HEADER)?;
            for row in &rows {
                w.write_record(row.values().iter().map(|&x| fmt_f64(x)))?;
            }
            w.flush()?;
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Meta<'a> {
                tool: &'static str,
                version: &'static str,
                config: &'a RunConfig,
                steps: usize,
                rejected_steps: usize,
                max_trace_drift: f64,
                max_hermiticity_drift: f64,
            }
            #[derive(Serialize)]
            struct Doc<'a> {
                meta: Meta<'a>,
                samples: &'a [SampleRow],
            }
            let doc = Doc {
                meta: Meta {
                    tool: env!("CARGO_PKG_NAME"),
                    version: env!("CARGO_PKG_VERSION"),
                    config: rc,
                    steps: traj.stats.steps,
                    rejected_steps: traj.stats.rejected_steps,
                    max_trace_drift: traj.stats.max_trace_drift,
                    max_hermiticity_drift: traj.stats.max_hermiticity_drift,
                },
                samples: &rows,
            };
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Analytic,
    Nullspace,
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SteadyRow {
    pub method: String,
    pub rho00: f64,
    pub rho11: f64,
    pub rho22: f64,
    pub flags: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SteadyOutcome {
    pub rates: RateParams,
    pub driven: bool,
    pub rows: Vec<SteadyRow>,
    /// `max |printed − null space|` when both driven values are available.
    pub printed_vs_nullspace: Option<f64>,
}

impl SteadyOutcome {
    pub fn row(&self, method: &str) -> Option<&SteadyRow> {
        self.rows.iter().find(|r| r.method == method)
    }

    pub fn flagged(&self) -> bool {
        self.rows.iter().any(|r| !r.flags.is_empty())
    }
}

pub fn steady(rates: &RateParams, driven: bool, method: Method) -> Result<SteadyOutcome, CliError> {
    let mut rows = Vec::new();
    if matches!(method, Method::Analytic | Method::Both) {
        if driven {
            let report = driven_steady_printed(rates)?;
            let [a, b, c] = report.values;
            rows.push(SteadyRow {
                method: "analytic-printed".into(),
                rho00: a,
                rho11: b,
                rho22: c,
                flags: report.flags(),
            });
            let [a, b, c] = driven_steady_oracle(rates)?;
            rows.push(SteadyRow {
                method: "analytic-oracle".into(),
                rho00: a,
                rho11: b,
                rho22: c,
                flags: vec![],
            });
        } else {
            let [a, b, c] = undriven_steady(rates)?;
            rows.push(SteadyRow {
                method: "analytic".into(),
                rho00: a,
                rho11: b,
                rho22: c,
                flags: vec![],
            });
        }
    }
    if matches!(method, Method::Nullspace | Method::Both) {
        let pops = steady_state(&build(rates, driven)?)?.populations();
        rows.push(SteadyRow {
            method: "nullspace".into(),
            rho00: pops[0],
            rho11: pops[1],
            rho22: pops[2],
            flags: vec![],
        });
    }
    let printed_vs_nullspace = match (
        rows.iter().find(|r| r.method == "analytic-printed"),
        rows.iter().find(|r| r.method == "nullspace"),
    ) {
        (Some(a), Some(b)) => Some(
            [
                (a.rho00 - b.rho00).abs(),
                (a.rho11 - b.rho11).abs(),
                (a.rho22 - b.rho22).abs(),
            ]
            .into_iter()
            .fold(0.0, f64::max),
        ),
        _ => None,
    };
    Ok(SteadyOutcome {
        rates: *rates,
        driven,
        rows,
        printed_vs_nullspace,
    })
}

pub fn write_steady(
    outcome: &SteadyOutcome,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["method", "rho00", "rho11", "rho22", "flags"])?;
            for r in &outcome.rows {
                w.write_record([
                    r.method.clone(),
                    fmt_f64(r.rho00),
                    fmt_f64(r.rho11),
                    fmt_f64(r.rho22),
                    r.flags.join("; "),
                ])?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, outcome)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub ratio: f64,
    pub p: f64,
    pub rho00: f64,
    pub rho11: f64,
    pub rho22: f64,
    pub osc_rho00: usize,
    pub osc_rho11: usize,
    /// Time to enter and stay within the relaxation ball; `None` if not reached by `t_end`.
    pub relaxation_time: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SweepTrends {
    pub rho00_strictly_decreasing: bool,
    pub oscillations_non_decreasing: bool,
    pub relaxation_non_decreasing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepOutcome {
    pub base: RateParams,
    pub t_end: f64,
    pub dt: f64,
    pub rows: Vec<SweepRow>,
    pub trends: SweepTrends,
}

fn sweep_point(
    base: &RateParams,
    ratio: f64,
    cfg: &IntegratorConfig,
    t_end: f64,
) -> Result<SweepRow, CliError> {
    let rates = RateParams::with_ratio(base.l, base.m, base.n, ratio)?;
    let gen = build_driven(&rates)?;
    let ss = steady_state(&gen)?;
    let traj = integrate(
        &gen,
        &crate::quantum::DensityMatrix::basis_state(3, 0),
        t_end,
        cfg,
    )?;
    let pops = ss.populations();
    Ok(SweepRow {
        ratio,
        p: rates.p,
        rho00: pops[0],
        rho11: pops[1],
        rho22: pops[2],
        osc_rho00: count_oscillations(&traj, 0),
        osc_rho11: count_oscillations(&traj, 1),
        relaxation_time: relaxation_time(&traj, &ss, RELAXATION_BALL),
    })
}

/// Runs every ratio in parallel; rows come back ordered by descending `l/p`.
pub fn sweep(
    base: &RateParams,
    ratios: &[f64],
    t_end: f64,
    dt: f64,
) -> Result<SweepOutcome, CliError> {
    if ratios.is_empty() {
        return Err(CliError::Config("sweep needs at least one ratio".into()));
    }
    if let Some(bad) = ratios.iter().find(|&&r| !(r > 0.0) || !r.is_finite()) {
        return Err(CliError::Config(format!(
            "ratios must be positive, got {bad}"
        )));
    }
    let mut ordered = ratios.to_vec();
    ordered.sort_by(|a, b| b.total_cmp(a));
    let cfg = IntegratorConfig::with_dt(dt);
    let rows = ordered
        .par_iter()
        .map(|&r| sweep_point(base, r, &cfg, t_end))
        .collect::<Result<Vec<_>, _>>()?;
    let trends = SweepTrends {
        rho00_strictly_decreasing: rows.windows(2).all(|w| w[1].rho00 < w[0].rho00),
        oscillations_non_decreasing: rows.windows(2).all(|w| w[1].osc_rho00 >= w[0].osc_rho00),
        relaxation_non_decreasing: rows.windows(2).all(|w| {
            match (w[0].relaxation_time, w[1].relaxation_time) {
                (Some(a), Some(b)) => b >= a,
                (_, None) => true,
                (None, Some(_)) => false,
            }
        }),
    };
    Ok(SweepOutcome {
        base: *base,
        t_end,
        dt,
        rows,
        trends,
    })
}

pub fn write_sweep(
    outcome: &SweepOutcome,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record([
                "ratio",
                "p",
                "rho00",
                "rho11",
                "rho22",
                "osc_rho00",
                "osc_rho11",
                "relaxation_time",
            ])?;
            for r in &outcome.rows {
                w.write_record([
                    fmt_f64(r.ratio),
                    fmt_f64(r.p),
                    fmt_f64(r.rho00),
                    fmt_f64(r.rho11),
                    fmt_f64(r.rho22),
                    r.osc_rho00.to_string(),
                    r.osc_rho11.to_string(),
                    fmt_opt(r.relaxation_time),
                ])?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, outcome)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

pub fn trend_lines(trends: &SweepTrends) -> Vec<String> {
    let verdict = |ok: bool| if ok { "holds" } else { "violated" };
    vec![
        format!(
            "trend rho00 strictly decreasing as l/p decreases: {}",
            verdict(trends.rho00_strictly_decreasing)
        ),
        format!(
            "trend oscillation count non-decreasing as l/p decreases: {}",
            verdict(trends.oscillations_non_decreasing)
        ),
        format!(
            "trend relaxation time non-decreasing as l/p decreases: {}",
            verdict(trends.relaxation_non_decreasing)
        ),
    ]
}

pub fn write_validation(
    report: &SuiteReport,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["check", "status", "detail"])?;
            for c in &report.checks {
                w.write_record([
                    c.name,
                    if c.passed { "PASS" } else { "FAIL" },
                    c.detail.as_str(),
                ])?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, report)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

//! One function per subcommand. Each returns the CSV bytes it produced.

use std::f64::consts::PI;

use anyhow::{bail, Context, Result};
use log::{info, warn};
use smoothmusic::montecarlo::{table1, ExperimentPlan};
use smoothmusic::subspace::{Objective, SeparationPolicy};
use smoothmusic::verify::verification_suite;
use smoothmusic::{
    hankelize, noise_variance_estimate, run_plan, sample_covariance_eig, synthesize_snapshots, Estimator,
    PseudoSpectrum,
};

use crate::config::RunConfig;

pub fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

fn db(x: f64) -> f64 {
    10.0 * x.log10()
}

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>> {
    w.into_inner().context("flushing csv")
}

fn policy(strict: bool) -> SeparationPolicy {
    if strict {
        SeparationPolicy::Strict
    } else {
        SeparationPolicy::Clamp
    }
}

/// Grid minima of `v`; wraps around when `periodic`.
fn grid_minima(v: &[f64], periodic: bool) -> Vec<bool> {
    let n = v.len();
    (0..n)
        .map(|i| {
            let left = if i > 0 {
                Some(v[i - 1])
            } else if periodic && n > 1 {
                Some(v[n - 1])
            } else {
                None
            };
            let right = if i + 1 < n {
                Some(v[i + 1])
            } else if periodic && n > 1 {
                Some(v[0])
            } else {
                None
            };
            // a flat spectrum has no minima
            left.is_some_and(|l| v[i] < l) && right.is_some_and(|r| v[i] <= r)
        })
        .collect()
}

/// Both pseudo-spectra of one realisation on a uniform grid.
pub fn spectrum(cfg: &RunConfig, strict: bool) -> Result<Vec<u8>> {
    let sc = cfg.scenario()?;
    let sp = &cfg.spectrum;
    if sp.grid_points == 0 {
        bail!("spectrum.grid_points must be positive");
    }
    let (lo, hi, periodic) = match &sp.window {
        None => (-PI, PI, true),
        Some([a, b]) => {
            let (a, b) = (a.radians()?, b.radians()?);
            if !(a < b) {
                bail!("spectrum.window: need lo < hi, got [{a}, {b}]");
            }
            (a, b, false)
        }
    };
    let y = synthesize_snapshots(&sc)?;
    let sm = hankelize(&y.entries, sc.l)?;
    let eig = sample_covariance_eig(&sm, sc.num_sources())?;
    let sigma2 = noise_variance_estimate(&eig)?;
    let objective: Objective = sp.objective.into();
    let trad = PseudoSpectrum::traditional(&eig).with_objective(objective);
    let gm = PseudoSpectrum::gmusic(&eig, sigma2, sm.c_n(), policy(strict))?.with_objective(objective);
    if gm.low_confidence() {
        warn!("signal eigenvalues {:?} are inside the estimated bulk; their G-MUSIC weights were set to 1", gm.clamped);
    }
    info!("spectrum: sigma2_hat={sigma2:.4e} c_N={:.4}", sm.c_n());

    let n = sp.grid_points;
    // half-open on the circle, closed on a window
    let step = if periodic { (hi - lo) / n as f64 } else if n > 1 { (hi - lo) / (n - 1) as f64 } else { 0.0 };
    let grid: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
    let et: Vec<f64> = grid.iter().map(|&t| trad.eval(t)).collect();
    let eg: Vec<f64> = grid.iter().map(|&t| gm.eval(t)).collect();
    let ot: Vec<f64> = grid.iter().map(|&t| trad.objective_value(t)).collect();
    let og: Vec<f64> = grid.iter().map(|&t| gm.objective_value(t)).collect();
    let (mt, mg) = (grid_minima(&ot, periodic), grid_minima(&og, periodic));

    let mut w = writer();
    w.write_record(["theta_rad", "eta_traditional", "eta_gmusic", "is_minimum_trad", "is_minimum_gmusic"])?;
    for i in 0..n {
        w.write_record([fmt_f(grid[i]), fmt_f(et[i]), fmt_f(eg[i]), mt[i].to_string(), mg[i].to_string()])?;
    }
    finish(w)
}

pub fn montecarlo(cfg: &RunConfig, strict: bool) -> Result<Vec<u8>> {
    let Some(mc) = &cfg.montecarlo else { bail!("missing [montecarlo] section") };
    let estimators = mc
        .estimators
        .iter()
        .map(|s| s.parse::<Estimator>().map_err(|e| anyhow::anyhow!("{e}")))
        .collect::<Result<Vec<_>>>()?;
    let mut plan = ExperimentPlan::new(cfg.scenario()?, cfg.sweep()?, mc.trials, estimators)
        .with_seed(cfg.seed)
        .with_layout(cfg.layout()?)
        .with_search(cfg.search());
    plan.include_failures = mc.include_failures;
    plan.separation = policy(strict);
    plan.objective = mc.objective.into();
    info!("montecarlo: {} sweep points x {} trials", plan.sweep.len(), plan.trials);
    let table = run_plan(&plan)?;

    let mut w = writer();
    w.write_record(["sweep_value", "estimator", "source_index", "trials", "failures", "mse", "mse_db", "crb", "crb_db"])?;
    for r in &table.rows {
        if r.failures > 0 {
            info!("{} at {}: {} of {} trials failed", r.estimator, r.sweep_value, r.failures, r.trials);
        }
        w.write_record([
            fmt_f(r.sweep_value),
            r.estimator.name().to_string(),
            r.source_index.to_string(),
            r.trials.to_string(),
            r.failures.to_string(),
            fmt_f(r.mse),
            fmt_f(db(r.mse)),
            fmt_f(r.crb),
            fmt_f(db(r.crb)),
        ])?;
    }
    finish(w)
}

pub fn septable(cfg: &RunConfig) -> Result<Vec<u8>> {
    let Some(st) = &cfg.septable else { bail!("missing [septable] section") };
    let rows = table1(&cfg.scenario()?, &st.l_values, st.realizations, cfg.seed)?;
    let mut w = writer();
    w.write_record(["L", "min_snr_db_median", "min_snr_db_iqr"])?;
    for r in rows {
        w.write_record([r.l.to_string(), fmt_f(r.median_db), fmt_f(r.iqr_db)])?;
    }
    finish(w)
}

pub fn verify(cfg: &RunConfig) -> Result<Vec<u8>> {
    let s = &cfg.scenario;
    let rows = verification_suite(s.m, s.n, s.l, cfg.verify.sigma2, cfg.seed, cfg.suite_settings());
    let mut w = writer();
    w.write_record(["check", "M", "N", "L", "statistic", "threshold", "pass"])?;
    for r in rows {
        if !r.pass {
            warn!("check {} did not pass: {} vs {}", r.check, r.statistic, r.threshold);
        }
        w.write_record([
            r.check.clone(),
            r.m.to_string(),
            r.n.to_string(),
            r.l.to_string(),
            fmt_f(r.statistic),
            fmt_f(r.threshold),
            r.pass.to_string(),
        ])?;
    }
    finish(w)
}

//! Monte Carlo experiments: MSE sweeps, minimum-SNR tables, consistency
//! trends and the Cramer-Rao reference.
//!
//! Trial `t` of sweep point `p` draws all of its randomness from
//! `derive_seed(master, [p, t])`, and results are reduced in `(p, t)` order,
//! so tables do not depend on the number of worker threads.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::array_model::{hankelize, steering_matrix, synthesize_snapshots, ArrayScenario};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};
use crate::rng::derive_seed;
use crate::stats::{median, quartiles};
use crate::subspace::{
    find_doas, noise_variance_estimate, sample_covariance_eig, separation_report, DoaEstimate, GridPolicy,
    Objective, PseudoSpectrum, SearchMode, SeparationPolicy,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Estimator {
    /// Traditional MUSIC on the unsmoothed data.
    Music,
    /// G-MUSIC on the unsmoothed data (`c = M/N`).
    GMusic,
    MusicSs,
    GMusicSs,
}

impl Estimator {
    pub const ALL: [Estimator; 4] = [Estimator::Music, Estimator::GMusic, Estimator::MusicSs, Estimator::GMusicSs];

    pub fn name(&self) -> &'static str {
        match self {
            Estimator::Music => "music",
            Estimator::GMusic => "gmusic",
            Estimator::MusicSs => "music-ss",
            Estimator::GMusicSs => "gmusic-ss",
        }
    }

    pub fn smoothed(&self) -> bool {
        matches!(self, Estimator::MusicSs | Estimator::GMusicSs)
    }

    pub fn generalized(&self) -> bool {
        matches!(self, Estimator::GMusic | Estimator::GMusicSs)
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Estimator::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::InvalidPlan(format!("unknown estimator {s:?}")))
    }
}

/// How the pseudo-spectrum is searched in each trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SearchSpec {
    /// Whole circle.
    Full { points_per_beamwidth: usize },
    /// The true DoAs padded by `pad_beams` beamwidths.
    Window { pad_beams: f64, points_per_beamwidth: usize },
    /// One interval per source, centred on the true DoA.
    KnownIntervals,
}

impl Default for SearchSpec {
    fn default() -> Self {
        SearchSpec::Window { pad_beams: 2.0, points_per_beamwidth: 32 }
    }
}

fn min_spacing(doas: &[f64]) -> Option<f64> {
    let mut d = doas.to_vec();
    d.sort_by(f64::total_cmp);
    d.windows(2).map(|w| w[1] - w[0]).min_by(f64::total_cmp)
}

impl SearchSpec {
    pub fn mode(&self, m: usize, doas: &[f64]) -> SearchMode {
        match *self {
            SearchSpec::Full { points_per_beamwidth } => {
                SearchMode::DeepestMinima(GridPolicy::full(m).with_density(points_per_beamwidth))
            }
            SearchSpec::Window { pad_beams, points_per_beamwidth } => {
                SearchMode::DeepestMinima(GridPolicy::around(m, doas, pad_beams).with_density(points_per_beamwidth))
            }
            SearchSpec::KnownIntervals => {
                let bw = 2.0 * PI / m as f64;
                let hw = min_spacing(doas).map_or(bw, |s| (0.45 * s).min(bw));
                SearchMode::intervals_around(m, doas, hw)
            }
        }
    }
}

/// Estimate the DoAs of one realisation of `scenario` with `estimator`.
pub fn estimate_from_snapshots(
    y: &CMatrix,
    scenario: &ArrayScenario,
    estimator: Estimator,
    search: &SearchSpec,
    policy: SeparationPolicy,
    objective: Objective,
) -> Result<DoaEstimate> {
    let k = scenario.num_sources();
    let l = if estimator.smoothed() { scenario.l } else { 1 };
    let sm = hankelize(y, l)?;
    let eig = sample_covariance_eig(&sm, k)?;
    let spectrum = if estimator.generalized() {
        PseudoSpectrum::gmusic(&eig, noise_variance_estimate(&eig)?, sm.c_n(), policy)?
    } else {
        PseudoSpectrum::traditional(&eig)
    }
    .with_objective(objective);
    find_doas(&spectrum, k, &search.mode(scenario.m, &scenario.doas))
}

/// Synthesize `scenario` and estimate its DoAs with the default search.
pub fn estimate_doas(scenario: &ArrayScenario, estimator: Estimator) -> Result<DoaEstimate> {
    let y = synthesize_snapshots(scenario)?;
    estimate_from_snapshots(&y.entries, scenario, estimator, &SearchSpec::default(), SeparationPolicy::Clamp, Objective::default())
}

/// Conditional Cramer-Rao bound on each DoA,
/// `σ²/(2N) [Re((D^* Π^⊥ D) ∘ R^T)]^{-1}` with `R = S S^*/N` and
/// `D = [∂a_M/∂θ_k]`.
pub fn crb(scenario: &ArrayScenario) -> Result<Vec<f64>> {
    let k = scenario.num_sources();
    if k == 0 {
        return Err(Error::NoSignal);
    }
    let m = scenario.m;
    let a = steering_matrix(m, &scenario.doas)?;
    let d = CMatrix::from_fn(m, k, |i, j| a[(i, j)] * C64::new(0.0, i as f64));
    let gram = a.adjoint() * &a;
    let gi = gram.try_inverse().ok_or(Error::SingularFim)?;
    let proj = CMatrix::identity(m, m) - &a * gi * a.adjoint();
    let h = d.adjoint() * proj * &d;
    let r = scenario.signal_covariance()?;
    let fim = DMatrix::<f64>::from_fn(k, k, |i, j| (h[(i, j)] * r[(j, i)]).re);
    let inv = fim.try_inverse().ok_or(Error::SingularFim)?;
    let scale = scenario.sigma2() / (2.0 * scenario.n as f64);
    let out: Vec<f64> = (0..k).map(|i| scale * inv[(i, i)]).collect();
    if out.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::SingularFim);
    }
    Ok(out)
}

/// How DoAs are derived from the array size.
#[derive(Debug, Clone, PartialEq)]
pub enum DoaLayout {
    Fixed(Vec<f64>),
    /// `θ_k = κ_k / M`
    Scaled(Vec<f64>),
}

impl DoaLayout {
    pub fn doas(&self, m: usize) -> Vec<f64> {
        match self {
            DoaLayout::Fixed(d) => d.clone(),
            DoaLayout::Scaled(k) => k.iter().map(|x| x / m as f64).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Sweep {
    SnrDb(Vec<f64>),
    Smoothing(Vec<usize>),
    /// `(M, N, L)` triples; the sweep value is `M`.
    Dims(Vec<(usize, usize, usize)>),
}

impl Sweep {
    pub fn len(&self) -> usize {
        match self {
            Sweep::SnrDb(v) => v.len(),
            Sweep::Smoothing(v) => v.len(),
            Sweep::Dims(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPlan {
    pub base: ArrayScenario,
    pub sweep: Sweep,
    /// Overrides `base.doas`, re-evaluated for each `M`.
    pub layout: Option<DoaLayout>,
    pub trials: usize,
    pub estimators: Vec<Estimator>,
    pub master_seed: u64,
    pub search: SearchSpec,
    /// Count trials with an outlying (but resolved) estimate in the MSE.
    pub include_failures: bool,
    pub separation: SeparationPolicy,
    pub objective: Objective,
}

impl ExperimentPlan {
    pub fn new(base: ArrayScenario, sweep: Sweep, trials: usize, estimators: Vec<Estimator>) -> Self {
        Self {
            base,
            sweep,
            layout: None,
            trials,
            estimators,
            master_seed: 0,
            search: SearchSpec::default(),
            include_failures: false,
            separation: SeparationPolicy::Clamp,
            objective: Objective::default(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    pub fn with_layout(mut self, layout: DoaLayout) -> Self {
        self.layout = Some(layout);
        self
    }

    pub fn with_search(mut self, search: SearchSpec) -> Self {
        self.search = search;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.sweep.is_empty() {
            return Err(Error::InvalidPlan("empty sweep".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidPlan("trials must be at least 1".into()));
        }
        if self.estimators.is_empty() {
            return Err(Error::InvalidPlan("no estimators".into()));
        }
        self.points().map(|_| ())
    }

    /// `(sweep value, scenario)` for every sweep point.
    pub fn points(&self) -> Result<Vec<(f64, ArrayScenario)>> {
        let with_doas = |mut sc: ArrayScenario| -> Result<ArrayScenario> {
            if let Some(l) = &self.layout {
                sc.doas = l.doas(sc.m);
            }
            sc.validate()?;
            if sc.num_sources() == 0 {
                return Err(Error::NoSignal);
            }
            Ok(sc)
        };
        match &self.sweep {
            Sweep::SnrDb(v) => v
                .iter()
                .map(|&s| Ok((s, with_doas(self.base.clone().with_snr_db(s)?)?)))
                .collect(),
            Sweep::Smoothing(v) => v
                .iter()
                .map(|&l| {
                    let mut sc = self.base.clone();
                    sc.l = l;
                    Ok((l as f64, with_doas(sc)?))
                })
                .collect(),
            Sweep::Dims(v) => v
                .iter()
                .map(|&(m, n, l)| {
                    let mut sc = self.base.clone();
                    sc.m = m;
                    sc.n = n;
                    sc.l = l;
                    Ok((m as f64, with_doas(sc)?))
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MseRow {
    pub sweep_value: f64,
    pub estimator: Estimator,
    pub source_index: usize,
    pub trials: usize,
    /// Under-resolved trials plus trials with an error above half the
    /// source spacing.
    pub failures: usize,
    /// NaN when no trial contributed.
    pub mse: f64,
    /// Mean over trials of the conditional CRB.
    pub crb: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MseTable {
    pub rows: Vec<MseRow>,
}

impl MseTable {
    pub fn series(&self, estimator: Estimator, source_index: usize) -> Vec<&MseRow> {
        self.rows
            .iter()
            .filter(|r| r.estimator == estimator && r.source_index == source_index)
            .collect()
    }
}

enum Outcome {
    /// Signed errors after matching, and whether any exceeds the outlier limit.
    Resolved(Vec<f64>, bool),
    Failed,
}

/// Pair sorted estimates with sorted truths; in one dimension this is the
/// assignment minimising the total squared error.
pub fn match_errors(estimates: &[f64], truth: &[f64]) -> Vec<f64> {
    let mut e = estimates.to_vec();
    e.sort_by(f64::total_cmp);
    let mut order: Vec<usize> = (0..truth.len()).collect();
    order.sort_by(|&a, &b| truth[a].total_cmp(&truth[b]));
    let mut out = vec![f64::NAN; truth.len()];
    for (rank, &k) in order.iter().enumerate() {
        if let Some(&x) = e.get(rank) {
            out[k] = x - truth[k];
        }
    }
    out
}

pub fn run_plan(plan: &ExperimentPlan) -> Result<MseTable> {
    plan.validate()?;
    let points = plan.points()?;
    let trials = plan.trials;
    let jobs: Vec<(usize, usize)> = (0..points.len()).flat_map(|p| (0..trials).map(move |t| (p, t))).collect();
    let results = jobs
        .par_iter()
        .map(|&(p, t)| -> Result<(Vec<Outcome>, Vec<f64>)> {
            let sc = points[p].1.clone().with_seed(derive_seed(plan.master_seed, &[p as u64, t as u64]));
            let y = synthesize_snapshots(&sc)?;
            let limit = min_spacing(&sc.doas).map_or(PI / sc.m as f64, |s| 0.5 * s);
            let outs = plan
                .estimators
                .iter()
                .map(|&e| match estimate_from_snapshots(&y.entries, &sc, e, &plan.search, plan.separation, plan.objective) {
                    Ok(est) => {
                        let err = match_errors(&est.angles, &sc.doas);
                        let outlier = err.iter().any(|x| !(x.abs() <= limit));
                        Ok(Outcome::Resolved(err, outlier))
                    }
                    Err(Error::UnderResolved { .. } | Error::NotSeparated(_)) => Ok(Outcome::Failed),
                    Err(e) => Err(e),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((outs, crb(&sc)?))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::new();
    for (p, (value, sc)) in points.iter().enumerate() {
        let chunk = &results[p * trials..(p + 1) * trials];
        let k = sc.num_sources();
        for (ei, &est) in plan.estimators.iter().enumerate() {
            for src in 0..k {
                let (mut sum, mut used, mut failures, mut crb_sum) = (0.0, 0usize, 0usize, 0.0);
                for (outs, c) in chunk {
                    crb_sum += c[src];
                    match &outs[ei] {
                        Outcome::Resolved(err, outlier) => {
                            if *outlier {
                                failures += 1;
                            }
                            if !*outlier || plan.include_failures {
                                sum += err[src] * err[src];
                                used += 1;
                            }
                        }
                        Outcome::Failed => failures += 1,
                    }
                }
                rows.push(MseRow {
                    sweep_value: *value,
                    estimator: est,
                    source_index: src,
                    trials,
                    failures,
                    mse: if used > 0 { sum / used as f64 } else { f64::NAN },
                    crb: crb_sum / trials as f64,
                });
            }
        }
    }
    Ok(MseTable { rows })
}

/// One line of the minimum-SNR table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table1Row {
    pub l: usize,
    pub median_db: f64,
    pub iqr_db: f64,
    /// Per realisation, in realisation order.
    pub values: Vec<f64>,
}

/// For each `L`, the median over `realizations` signal draws of the smallest
/// SNR at which the finite-size separation condition holds. Realisation `r`
/// uses the same `S` for every `L`.
pub fn table1(template: &ArrayScenario, ls: &[usize], realizations: usize, master_seed: u64) -> Result<Vec<Table1Row>> {
    if ls.is_empty() || realizations == 0 {
        return Err(Error::InvalidPlan("table needs at least one L and one realisation".into()));
    }
    let per_real = (0..realizations)
        .into_par_iter()
        .map(|r| {
            let sc = template.clone().with_seed(derive_seed(master_seed, &[r as u64]));
            ls.iter()
                .map(|&l| Ok(separation_report(&sc.clone().with_smoothing(l)?)?.min_snr_db))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ls
        .iter()
        .enumerate()
        .map(|(i, &l)| {
            let values: Vec<f64> = per_real.iter().map(|v| v[i]).collect();
            let (q1, q3) = quartiles(&values);
            Table1Row { l, median_db: median(&values), iqr_db: q3 - q1, values }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyRow {
    pub m: usize,
    pub n: usize,
    pub l: usize,
    pub c_n: f64,
    /// Median over trials and sources of `M |θ̂_k - θ_k|`.
    pub median_scaled_error: f64,
}

/// `M |θ̂ - θ|` trend over array sizes, with the argmin taken in one interval
/// per source.
pub fn consistency_sweep(
    dims: &[(usize, usize, usize)],
    layout: &DoaLayout,
    snr_db: f64,
    estimator: Estimator,
    trials: usize,
    seed: u64,
    objective: Objective,
) -> Result<Vec<ConsistencyRow>> {
    dims.iter()
        .enumerate()
        .map(|(p, &(m, n, l))| {
            let sc = ArrayScenario::new(m, n, l, layout.doas(m), snr_db)?;
            let errs = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let s = sc.clone().with_seed(derive_seed(seed, &[p as u64, t as u64]));
                    let y = synthesize_snapshots(&s)?;
                    let est = estimate_from_snapshots(&y.entries, &s, estimator, &SearchSpec::KnownIntervals, SeparationPolicy::Clamp, objective)?;
                    Ok(match_errors(&est.angles, &s.doas).into_iter().map(|e| m as f64 * e.abs()).collect::<Vec<_>>())
                })
                .collect::<Result<Vec<_>>>()?;
            let all: Vec<f64> = errs.into_iter().flatten().collect();
            Ok(ConsistencyRow { m, n, l, c_n: sc.c_n(), median_scaled_error: median(&all) })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array_model::{steering_vector, SignalPolicy};
    use approx::assert_relative_eq;

    /// CRB on the DoAs from the full Fisher information of the deterministic
    /// model, assembled entry by entry with central differences over
    /// `(θ_k, Re s_kn, Im s_kn)`.
    fn brute_force_crb(sc: &ArrayScenario) -> Vec<f64> {
        let (m, n, k) = (sc.m, sc.n, sc.num_sources());
        let s = sc.signal_matrix().unwrap();
        let np = k + 2 * k * n;
        let mean = |params: &[f64]| -> Vec<C64> {
            let mut out = vec![C64::new(0.0, 0.0); m * n];
            for src in 0..k {
                let a = steering_vector(m, params[src]).unwrap();
                for t in 0..n {
                    let base = k + 2 * (src * n + t);
                    let st = C64::new(params[base], params[base + 1]);
                    for i in 0..m {
                        out[t * m + i] += a[i] * st;
                    }
                }
            }
            out
        };
        let mut p0 = sc.doas.clone();
        for src in 0..k {
            for t in 0..n {
                p0.push(s[(src, t)].re);
                p0.push(s[(src, t)].im);
            }
        }
        let h = 1e-6;
        let derivs: Vec<Vec<C64>> = (0..np)
            .map(|q| {
                let mut up = p0.clone();
                let mut dn = p0.clone();
                up[q] += h;
                dn[q] -= h;
                mean(&up).iter().zip(mean(&dn)).map(|(a, b)| (a - b) / (2.0 * h)).collect()
            })
            .collect();
        let sigma2 = sc.sigma2();
        let fim = DMatrix::<f64>::from_fn(np, np, |i, j| {
            2.0 / sigma2 * derivs[i].iter().zip(&derivs[j]).map(|(a, b)| (a.conj() * b).re).sum::<f64>()
        });
        let inv = fim.try_inverse().unwrap();
        (0..k).map(|i| inv[(i, i)]).collect()
    }

    #[test]
    fn crb_matches_brute_force_fim() {
        for doas in [vec![0.4], vec![-0.3, 0.5]] {
            let sc = ArrayScenario::new(8, 5, 2, doas, 10.0).unwrap().with_seed(3);
            let a = crb(&sc).unwrap();
            let b = brute_force_crb(&sc);
            for (x, y) in a.iter().zip(&b) {
                assert_relative_eq!(x, y, max_relative = 1e-5);
            }
        }
    }

    #[test]
    fn crb_single_source_closed_form() {
        let (m, n) = (8usize, 5usize);
        let sc = ArrayScenario::new(m, n, 2, vec![0.4], 10.0)
            .unwrap()
            .with_signal(SignalPolicy::IdentityCovariance)
            .unwrap();
        let v = crb(&sc).unwrap()[0];
        let want = 6.0 * sc.sigma2() / (n as f64 * ((m * m) as f64 - 1.0));
        assert_relative_eq!(v, want, max_relative = 1e-10);
    }

    #[test]
    fn crb_scaling() {
        let s = CMatrix::from_fn(2, 4, |i, j| C64::new(((i + 2 * j) as f64).cos(), (i as f64 - j as f64).sin()));
        let mut s2 = CMatrix::zeros(2, 8);
        s2.columns_mut(0, 4).copy_from(&s);
        s2.columns_mut(4, 4).copy_from(&s);
        let sc = ArrayScenario::new(10, 4, 2, vec![0.0, 0.7], 5.0).unwrap().with_signal(SignalPolicy::FixedMatrix(s)).unwrap();
        let sc2 = ArrayScenario::new(10, 8, 2, vec![0.0, 0.7], 5.0).unwrap().with_signal(SignalPolicy::FixedMatrix(s2)).unwrap();
        let a = crb(&sc).unwrap();
        let b = crb(&sc2).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_relative_eq!(*x, 2.0 * y, max_relative = 1e-10);
        }
        let c = crb(&sc.clone().with_snr_db(15.0).unwrap()).unwrap();
        for (x, y) in a.iter().zip(&c) {
            assert_relative_eq!(*x, 10.0 * y, max_relative = 1e-10);
            assert!(*y > 0.0);
        }
    }

    #[test]
    fn crb_needs_sources() {
        let sc = ArrayScenario::new(8, 4, 2, vec![], 10.0).unwrap();
        assert_eq!(crb(&sc), Err(Error::NoSignal));
    }

    #[test]
    fn matching_is_label_free() {
        let e = match_errors(&[0.52, 0.01], &[0.5, 0.0]);
        assert_relative_eq!(e[0], 0.02, epsilon = 1e-15);
        assert_relative_eq!(e[1], 0.01, epsilon = 1e-15);
        let e = match_errors(&[0.01, 0.52], &[0.5, 0.0]);
        assert_relative_eq!(e[0], 0.02, epsilon = 1e-15);
    }

    #[test]
    fn estimator_names_round_trip() {
        for e in Estimator::ALL {
            assert_eq!(e.name().parse::<Estimator>().unwrap(), e);
        }
        assert!("esprit".parse::<Estimator>().is_err());
    }

    fn small_plan() -> ExperimentPlan {
        let base = ArrayScenario::new(24, 6, 4, vec![-0.4, 0.5], 15.0).unwrap();
        ExperimentPlan::new(base, Sweep::SnrDb(vec![5.0, 15.0]), 6, Estimator::ALL.to_vec()).with_seed(42)
    }

    #[test]
    fn plan_validation() {
        let mut p = small_plan();
        p.trials = 0;
        assert!(matches!(p.validate(), Err(Error::InvalidPlan(_))));
        let mut p = small_plan();
        p.sweep = Sweep::SnrDb(vec![]);
        assert!(matches!(p.validate(), Err(Error::InvalidPlan(_))));
        let mut p = small_plan();
        p.sweep = Sweep::Smoothing(vec![30]);
        assert!(p.validate().is_err());
    }

    #[test]
    fn run_plan_accounting_and_determinism() {
        let p = small_plan();
        let a = run_plan(&p).unwrap();
        let b = run_plan(&p).unwrap();
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
        assert_eq!(a.rows.len(), 2 * 4 * 2);
        for r in &a.rows {
            assert!(r.failures <= r.trials);
            assert!(r.mse.is_nan() || r.mse >= 0.0);
            assert!(r.crb > 0.0);
        }
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c = pool.install(|| run_plan(&p)).unwrap();
        assert_eq!(format!("{a:?}"), format!("{c:?}"));
    }

    #[test]
    fn noiseless_limit_hits_refinement_floor() {
        let base = ArrayScenario::new(32, 8, 4, vec![-0.6, 0.4], 200.0).unwrap();
        let p = ExperimentPlan::new(base, Sweep::SnrDb(vec![200.0]), 3, Estimator::ALL.to_vec()).with_seed(1);
        let tol = 1e-4 * 2.0 * PI / 32.0;
        for r in run_plan(&p).unwrap().rows {
            assert_eq!(r.failures, 0);
            assert!(r.mse < tol * tol, "{r:?}");
        }
    }

    #[test]
    fn scaled_layout() {
        let l = DoaLayout::Scaled(vec![0.0, PI / 2.0]);
        assert_eq!(l.doas(160), vec![0.0, PI / 320.0]);
    }

    #[test]
    fn table1_single_l_and_common_signals() {
        let sc = ArrayScenario::new(40, 10, 2, vec![0.0, PI / 80.0], 0.0).unwrap();
        let t = table1(&sc, &[4], 5, 7).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].values.len(), 5);
        let t2 = table1(&sc, &[2, 4], 5, 7).unwrap();
        assert_eq!(t2[1].values, t[0].values);
    }

    #[test]
    fn consistency_noiseless_floor() {
        let rows = consistency_sweep(&[(40, 8, 4), (80, 12, 8)], &DoaLayout::Fixed(vec![0.0, 1.0]), 250.0, Estimator::GMusicSs, 2, 3, Objective::default()).unwrap();
        for r in rows {
            assert!(r.median_scaled_error < 1e-3, "{r:?}");
        }
    }
}

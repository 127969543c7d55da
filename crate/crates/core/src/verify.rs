//! Finite-size checks of the large random matrix behaviour of block-Hankel
//! noise `Z = V^(L) / √(NL)`, with `V` an `M x N` matrix of i.i.d. `CN(0, σ²)`
//! entries.
//!
//! All statements behind these checks are almost-sure limits, so every check
//! here fixes sizes, trial counts and a tolerance and reports a statistic
//! rather than asserting anything itself.

use rayon::prelude::*;

use crate::array_model::hankelize;
use crate::error::{Error, Result};
use crate::linalg::{gram, hermitian_eig, hermitian_eigenvalues, orthonormal_columns, CMatrix, CVector, C64};
use crate::quad::simpson;
use crate::rmt::{h_star, mp_atom, mp_density, mp_stieltjes, mp_stieltjes_tilde, spike_forward, w_star, MpParams};
use crate::rng::{complex_normal_matrix, rng_for, TrialRng};
use crate::stats::{iqr_overlap, median};

/// Relative slack above `x⁺` used for the support confinement count.
pub const EDGE_SLACK: f64 = 0.05;

fn check_sizes(m: usize, n: usize, l: usize) -> Result<(usize, usize)> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidDimension(format!("M={m}, N={n}")));
    }
    if l == 0 || l >= m {
        return Err(Error::InvalidSmoothing { m, l });
    }
    Ok((m + 1 - l, n * l))
}

/// One draw of `Z = V^(L)/√(NL)`.
pub fn hankel_noise(rng: &mut TrialRng, m: usize, n: usize, l: usize, sigma2: f64) -> Result<CMatrix> {
    let v = complex_normal_matrix(rng, m, n, sigma2);
    let mut z = hankelize(&v, l)?.entries;
    z.unscale_mut(((n * l) as f64).sqrt());
    Ok(z)
}

/// `(M-L+1) x NL` matrix of i.i.d. `CN(0, σ²/(NL))` entries.
pub fn iid_noise(rng: &mut TrialRng, m: usize, n: usize, l: usize, sigma2: f64) -> Result<CMatrix> {
    let (p, nl) = check_sizes(m, n, l)?;
    Ok(complex_normal_matrix(rng, p, nl, sigma2 / nl as f64))
}

/// Distribution function of `μ_{σ²,c}`, including the atom at 0 when `c > 1`.
pub fn mp_cdf(x: f64, p: &MpParams) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    let (a, b) = (p.edge_minus(), p.edge_plus());
    let atom = mp_atom(p);
    if x <= a {
        return atom;
    }
    if x >= b {
        return 1.0;
    }
    // x = a + (b-a)(1 - cos t)/2 removes the square-root edges
    let half = 0.5 * (b - a);
    let t = (1.0 - (x - a) / half).clamp(-1.0, 1.0).acos();
    let g = |t: f64| mp_density(a + half * (1.0 - t.cos()), p) * half * t.sin();
    (atom + simpson(g, 0.0, t, 400)).min(1.0)
}

/// Pooled noise-only spectrum compared with the Marcenko-Pastur law.
#[derive(Debug, Clone, PartialEq)]
pub struct EsdReport {
    /// All eigenvalues of all trials, ascending.
    pub eigenvalues: Vec<f64>,
    pub params: MpParams,
    pub ks_distance: f64,
    pub max_eigenvalues: Vec<f64>,
    /// Per trial, eigenvalues above `(1 + EDGE_SLACK) x⁺`.
    pub exceedances: Vec<usize>,
}

impl EsdReport {
    /// Fraction of trials with no eigenvalue above `(1 + EDGE_SLACK) x⁺`.
    pub fn confined_fraction(&self) -> f64 {
        let ok = self.exceedances.iter().filter(|&&e| e == 0).count();
        ok as f64 / self.exceedances.len().max(1) as f64
    }
}

/// Kolmogorov-Smirnov distance between a sample and `μ_{σ²,c}`.
pub fn ks_distance(sample: &[f64], p: &MpParams) -> f64 {
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let scale = p.edge_plus();
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        // rounding leaves the null eigenvalues at ±1e-16 or so
        let x = if x.abs() <= 1e-10 * scale { 0.0 } else { x };
        let f = mp_cdf(x, p);
        let f_left = if x == 0.0 { 0.0 } else { f };
        d = d.max((i + 1) as f64 / n - f).max(f_left - i as f64 / n);
    }
    d.clamp(0.0, 1.0)
}

/// Eigenvalues of `Z Z^*` pooled over `trials` block-Hankel draws.
pub fn esd_vs_mp(m: usize, n: usize, l: usize, sigma2: f64, trials: usize, seed: u64) -> Result<EsdReport> {
    let (p, nl) = check_sizes(m, n, l)?;
    let params = MpParams::new(sigma2, p as f64 / nl as f64)?;
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng_for(seed, &[t as u64]);
            let z = hankel_noise(&mut rng, m, n, l, sigma2)?;
            hermitian_eigenvalues(&gram(&z, 1.0))
        })
        .collect::<Result<Vec<_>>>()?;
    let limit = (1.0 + EDGE_SLACK) * params.edge_plus();
    let max_eigenvalues: Vec<f64> = per_trial.iter().map(|v| v.first().copied().unwrap_or(0.0)).collect();
    let exceedances = per_trial.iter().map(|v| v.iter().filter(|&&x| x > limit).count()).collect();
    let mut eigenvalues: Vec<f64> = per_trial.into_iter().flatten().collect();
    eigenvalues.sort_by(f64::total_cmp);
    let ks = ks_distance(&eigenvalues, &params);
    Ok(EsdReport { eigenvalues, params, ks_distance: ks, max_eigenvalues, exceedances })
}

/// Deviations of resolvent quadratic forms from their deterministic
/// equivalents for one noise draw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticFormResiduals {
    /// `|a^*(Q - m I) b|`
    pub resolvent: f64,
    /// `|ã^*(Q̃ - m̃ I) b̃|`
    pub co_resolvent: f64,
    /// `a^* Q Z b̃`
    pub mixed: C64,
}

fn unit_vector(rng: &mut TrialRng, dim: usize) -> CVector {
    let g = complex_normal_matrix(rng, dim, 1, 1.0);
    let nrm = g.norm();
    CVector::from_iterator(dim, g.iter().map(|z| z / nrm))
}

/// Draw `Z` and random unit vectors, and compare `Q = (ZZ^* - z)^{-1}` and
/// `Q̃ = (Z^*Z - z)^{-1}` with `m(z) I` and `m̃(z) I`.
///
/// `z` must lie in the upper half plane or on the real axis beyond `x⁺`.
pub fn quadratic_form_check(
    m: usize,
    n: usize,
    l: usize,
    sigma2: f64,
    z: C64,
    seed: u64,
) -> Result<QuadraticFormResiduals> {
    let (p, nl) = check_sizes(m, n, l)?;
    let params = MpParams::new(sigma2, p as f64 / nl as f64)?;
    if !(z.im > 0.0 || (z.im == 0.0 && z.re > params.edge_plus())) {
        return Err(Error::Domain { what: "resolvent argument must be in C+ or beyond the bulk", value: z.re });
    }
    let mz = mp_stieltjes(z, &params)?;
    let mtz = mp_stieltjes_tilde(z, &params)?;
    let mut rng = rng_for(seed, &[]);
    let zm = hankel_noise(&mut rng, m, n, l, sigma2)?;
    let a = unit_vector(&mut rng, p);
    let b = unit_vector(&mut rng, p);
    let at = unit_vector(&mut rng, nl);
    let bt = unit_vector(&mut rng, nl);

    let mut r = gram(&zm, 1.0);
    for i in 0..p {
        r[(i, i)] -= z;
    }
    let lu = r.lu();
    let solve = |v: &CVector| lu.solve(v).ok_or(Error::NonFinite);
    let qb = solve(&b)?;
    let resolvent = (a.dotc(&qb) - mz * a.dotc(&b)).norm();
    // Q̃ = (Z^* Q Z - I) / z
    let zbt = &zm * &bt;
    let zat = &zm * &at;
    let qzbt = solve(&zbt)?;
    let at_qt_bt = (zat.dotc(&qzbt) - at.dotc(&bt)) / z;
    let co_resolvent = (at_qt_bt - mtz * at.dotc(&bt)).norm();
    let mixed = a.dotc(&qzbt);
    Ok(QuadraticFormResiduals { resolvent, co_resolvent, mixed })
}

/// Which noise model to add to the planted low-rank part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NoiseKind {
    #[default]
    BlockHankel,
    Iid,
}

/// Planted spikes `B = Σ √λ_k u_k ũ_k^*` observed through `X = B + Z`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpikeExperiment {
    pub lambdas: Vec<f64>,
    pub params: MpParams,
    pub noise: NoiseKind,
    /// `φ(λ_k)` for detached spikes, `x⁺` otherwise.
    pub predicted_rho: Vec<f64>,
    /// `h(ρ_k)` for detached spikes, 0 otherwise.
    pub predicted_h: Vec<f64>,
    pub detached: Vec<bool>,
    /// `observed[trial][k]`: k-th largest eigenvalue of `X X^*`.
    pub observed: Vec<Vec<f64>>,
    /// `projections[trial][k] = |u_k^* û_k|²`.
    pub projections: Vec<Vec<f64>>,
}

impl SpikeExperiment {
    /// `|λ̂_k / ρ_k - 1|` over trials.
    pub fn eigenvalue_errors(&self, k: usize) -> Vec<f64> {
        self.observed.iter().map(|o| (o[k] / self.predicted_rho[k] - 1.0).abs()).collect()
    }

    /// `||u_k^* û_k|² - h(ρ_k)|` over trials.
    pub fn projection_errors(&self, k: usize) -> Vec<f64> {
        self.projections.iter().map(|pr| (pr[k] - self.predicted_h[k]).abs()).collect()
    }

    pub fn median_eigenvalue(&self, k: usize) -> f64 {
        median(&self.observed.iter().map(|o| o[k]).collect::<Vec<_>>())
    }
}

pub fn spike_experiment(
    m: usize,
    n: usize,
    l: usize,
    sigma2: f64,
    lambdas: &[f64],
    trials: usize,
    seed: u64,
    noise: NoiseKind,
) -> Result<SpikeExperiment> {
    let (p, nl) = check_sizes(m, n, l)?;
    let k = lambdas.len();
    if k == 0 || k > p.min(nl) {
        return Err(Error::InvalidDimension(format!("{k} spikes in a {p}x{nl} model")));
    }
    if lambdas.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::Assumption("planted spike strengths must be positive".into()));
    }
    let mut sorted = lambdas.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Assumption("planted spike strengths must be distinct".into()));
    }
    let params = MpParams::new(sigma2, p as f64 / nl as f64)?;
    let locs: Vec<_> = sorted.iter().map(|&x| spike_forward(x, &params)).collect();
    let predicted_rho: Vec<f64> = locs.iter().map(|s| s.value()).collect();
    let detached: Vec<bool> = locs.iter().map(|s| s.is_detached()).collect();
    let predicted_h = predicted_rho
        .iter()
        .zip(&detached)
        .map(|(&r, &d)| if d { h_star(r, &params) } else { Ok(0.0) })
        .collect::<Result<Vec<_>>>()?;

    let runs = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng_for(seed, &[t as u64]);
            let u = orthonormal_columns(complex_normal_matrix(&mut rng, p, k, 1.0));
            let ut = orthonormal_columns(complex_normal_matrix(&mut rng, nl, k, 1.0));
            let mut x = match noise {
                NoiseKind::BlockHankel => hankel_noise(&mut rng, m, n, l, sigma2)?,
                NoiseKind::Iid => iid_noise(&mut rng, m, n, l, sigma2)?,
            };
            for (q, lam) in sorted.iter().enumerate() {
                x += u.column(q) * ut.column(q).adjoint() * C64::new(lam.sqrt(), 0.0);
            }
            let (vals, vecs) = hermitian_eig(&gram(&x, 1.0))?;
            let proj = (0..k).map(|q| u.column(q).dotc(&vecs.column(q)).norm_sqr()).collect();
            Ok((vals[..k].to_vec(), proj))
        })
        .collect::<Result<Vec<(Vec<f64>, Vec<f64>)>>>()?;
    let (observed, projections) = runs.into_iter().unzip();
    Ok(SpikeExperiment { lambdas: sorted, params, noise, predicted_rho, predicted_h, detached, observed, projections })
}

/// `s(x) = Π_k (1 - λ_k x m(x) m̃(x)) = Π_k (1 - λ_k / w(x))` for real `x > x⁺`.
pub fn s_star(x: f64, p: &MpParams, lambdas: &[f64]) -> Result<f64> {
    let w = w_star(x, p)?;
    Ok(lambdas.iter().map(|l| 1.0 - l / w).product())
}

/// Roots of [`s_star`] above `x⁺`, ascending, located by a scan followed by
/// bisection. Spikes at or below `σ²√c` produce no root.
pub fn determinant_root_check(p: &MpParams, lambdas: &[f64]) -> Result<Vec<f64>> {
    if lambdas.is_empty() {
        return Ok(Vec::new());
    }
    let edge = p.edge_plus();
    let lmax = lambdas.iter().copied().fold(0.0, f64::max);
    // w(x) < x, so every root lies below this
    let span = 4.0 * (lmax + edge);
    let steps = 20_000;
    let grid = |i: usize| edge + span * (1e-12f64).powf(1.0 - i as f64 / steps as f64);
    let f = |x: f64| s_star(x, p, lambdas);
    let mut roots = Vec::new();
    let mut x0 = grid(0);
    let mut f0 = f(x0)?;
    for i in 1..=steps {
        let x1 = grid(i);
        let f1 = f(x1)?;
        if f1 == 0.0 {
            roots.push(x1);
        } else if f0 * f1 < 0.0 {
            let (mut a, mut b, mut fa) = (x0, x1, f0);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                let fm = f(mid)?;
                if fm == 0.0 {
                    a = mid;
                    b = mid;
                    break;
                }
                if fa * fm < 0.0 {
                    b = mid;
                } else {
                    a = mid;
                    fa = fm;
                }
            }
            roots.push(0.5 * (a + b));
        }
        x0 = x1;
        f0 = f1;
    }
    Ok(roots)
}

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub check: String,
    pub m: usize,
    pub n: usize,
    pub l: usize,
    pub statistic: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl CheckRow {
    fn below(check: &str, (m, n, l): (usize, usize, usize), statistic: f64, threshold: f64) -> Self {
        Self { check: check.into(), m, n, l, statistic, threshold, pass: statistic < threshold }
    }

    fn at_least(check: &str, (m, n, l): (usize, usize, usize), statistic: f64, threshold: f64) -> Self {
        Self { check: check.into(), m, n, l, statistic, threshold, pass: statistic >= threshold }
    }
}

/// Trial counts for [`verification_suite`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteSettings {
    pub esd_trials: usize,
    pub quadratic_trials: usize,
    pub spike_trials: usize,
}

impl Default for SuiteSettings {
    fn default() -> Self {
        Self { esd_trials: 50, quadratic_trials: 50, spike_trials: 100 }
    }
}

fn quadratic_medians(m: usize, n: usize, l: usize, sigma2: f64, trials: usize, seed: u64) -> Result<(f64, f64, Vec<C64>)> {
    let z = C64::new(sigma2, 0.5 * sigma2);
    let runs = (0..trials)
        .into_par_iter()
        .map(|t| quadratic_form_check(m, n, l, sigma2, z, crate::rng::derive_seed(seed, &[t as u64])))
        .collect::<Result<Vec<_>>>()?;
    let r: Vec<f64> = runs.iter().map(|q| q.resolvent).collect();
    let rt: Vec<f64> = runs.iter().map(|q| q.co_resolvent).collect();
    Ok((median(&r), median(&rt), runs.iter().map(|q| q.mixed).collect()))
}

/// `|mean| / stderr` of a complex sample.
pub fn mean_to_stderr(xs: &[C64]) -> f64 {
    let n = xs.len() as f64;
    if n < 2.0 {
        return f64::NAN;
    }
    let mean: C64 = xs.iter().sum::<C64>() / n;
    let var = xs.iter().map(|x| (x - mean).norm_sqr()).sum::<f64>() / (n - 1.0);
    mean.norm() / (var / n).sqrt()
}

/// Run every check at `(M, N, L)`. A check whose sizes are infeasible is
/// reported with a NaN statistic and `pass = false` instead of aborting.
pub fn verification_suite(m: usize, n: usize, l: usize, sigma2: f64, seed: u64, settings: SuiteSettings) -> Vec<CheckRow> {
    let dims = (m, n, l);
    let mut rows = Vec::new();
    let failed = |check: &str, dims: (usize, usize, usize), threshold: f64| CheckRow {
        check: check.into(),
        m: dims.0,
        n: dims.1,
        l: dims.2,
        statistic: f64::NAN,
        threshold,
        pass: false,
    };

    match esd_vs_mp(m, n, l, sigma2, settings.esd_trials, crate::rng::derive_seed(seed, &[1])) {
        Ok(r) => {
            rows.push(CheckRow::below("esd_ks", dims, r.ks_distance, 0.05));
            rows.push(CheckRow::at_least("support_confinement", dims, r.confined_fraction(), 0.95));
        }
        Err(_) => {
            rows.push(failed("esd_ks", dims, 0.05));
            rows.push(failed("support_confinement", dims, 0.95));
        }
    }

    // residuals shrink like 1/√M: compare M/2 with 2M at roughly fixed c
    let small = (m / 2, (n / 2).max(1), l);
    let large = (2 * m, 2 * n, l);
    let qs = quadratic_medians(small.0, small.1, small.2, sigma2, settings.quadratic_trials, crate::rng::derive_seed(seed, &[2]));
    let ql = quadratic_medians(large.0, large.1, large.2, sigma2, settings.quadratic_trials, crate::rng::derive_seed(seed, &[3]));
    match (qs, ql) {
        (Ok(s), Ok(lg)) => {
            rows.push(CheckRow::below("quadratic_form_decay", dims, lg.0 / s.0, 0.6));
            rows.push(CheckRow::below("co_resolvent_decay", dims, lg.1 / s.1, 0.6));
            rows.push(CheckRow::below("mixed_term_mean", dims, mean_to_stderr(&lg.2), 3.0));
        }
        _ => {
            rows.push(failed("quadratic_form_decay", dims, 0.6));
            rows.push(failed("co_resolvent_decay", dims, 0.6));
            rows.push(failed("mixed_term_mean", dims, 3.0));
        }
    }

    let c = check_sizes(m, n, l).map(|(p, nl)| p as f64 / nl as f64);
    let strong = c.clone().map(|c| 4.0 * sigma2 * c.sqrt());
    let weak = c.clone().map(|c| 0.5 * sigma2 * c.sqrt());
    let run = |lam: Result<f64>, kind: NoiseKind, stream: u64| {
        lam.and_then(|x| spike_experiment(m, n, l, sigma2, &[x], settings.spike_trials, crate::rng::derive_seed(seed, &[stream]), kind))
    };
    let hank = run(strong.clone(), NoiseKind::BlockHankel, 4);
    let iid = run(strong, NoiseKind::Iid, 5);
    match &hank {
        Ok(e) => {
            rows.push(CheckRow::below("spike_eigenvalue", dims, median(&e.eigenvalue_errors(0)), 0.05));
            rows.push(CheckRow::below("spike_projection", dims, median(&e.projection_errors(0)), 0.05));
        }
        Err(_) => {
            rows.push(failed("spike_eigenvalue", dims, 0.05));
            rows.push(failed("spike_projection", dims, 0.05));
        }
    }
    match run(weak, NoiseKind::BlockHankel, 6) {
        Ok(e) => rows.push(CheckRow::below(
            "bulk_edge_sticking",
            dims,
            (e.median_eigenvalue(0) / e.params.edge_plus() - 1.0).abs(),
            0.10,
        )),
        Err(_) => rows.push(failed("bulk_edge_sticking", dims, 0.10)),
    }
    match (&hank, &iid) {
        (Ok(h), Ok(i)) => {
            rows.push(CheckRow::at_least(
                "iid_equivalence_eigenvalue",
                dims,
                iqr_overlap(&h.eigenvalue_errors(0), &i.eigenvalue_errors(0)),
                0.0,
            ));
            rows.push(CheckRow::at_least(
                "iid_equivalence_projection",
                dims,
                iqr_overlap(&h.projection_errors(0), &i.projection_errors(0)),
                0.0,
            ));
        }
        _ => {
            rows.push(failed("iid_equivalence_eigenvalue", dims, 0.0));
            rows.push(failed("iid_equivalence_projection", dims, 0.0));
        }
    }

    let det = c.and_then(|c| {
        let p = MpParams::new(sigma2, c)?;
        let lams = [4.0 * p.threshold(), 2.0 * p.threshold()];
        let roots = determinant_root_check(&p, &lams)?;
        let mut want: Vec<f64> = lams.iter().map(|&x| spike_forward(x, &p).value()).collect();
        want.sort_by(f64::total_cmp);
        if roots.len() != want.len() {
            return Ok(f64::INFINITY);
        }
        Ok(roots.iter().zip(&want).map(|(a, b)| (a - b).abs() / b).fold(0.0, f64::max))
    });
    rows.push(match det {
        Ok(s) => CheckRow::below("determinant_roots", dims, s, 1e-8),
        Err(_) => failed("determinant_roots", dims, 1e-8),
    });
    rows
}

//! Subspace DoA estimation on the smoothed sample covariance
//! `Ŕ = Y^(L) Y^(L)* / (NL)`.
//!
//! Both pseudo-spectra share the form
//!
//! ```text
//! η̂(θ) = 1 - Σ_{k≤K} w_k |a(θ)^* û_k|²
//! ```
//!
//! with `a = a_{M-L+1}` of unit norm. MUSIC uses `w_k = 1`, i.e. the projector
//! onto the `M-L+1-K` smallest eigenvectors. G-MUSIC uses `w_k = 1 / h(λ̂_k)`,
//! which undoes the attenuation of the sample eigenvectors predicted by the
//! spiked model when `M-L+1` and `NL` are of the same order.

use std::f64::consts::PI;

use crate::array_model::{smoothed_steering, steering_matrix, ArrayScenario, SmoothedMatrix};
use crate::error::{Error, Result};
use crate::linalg::{gram, hermitian_eig, hermitian_eigenvalues, CMatrix, C64, ZERO};
use crate::rmt::{h_star, MpParams};

/// Eigenvalues (decreasing) and orthonormal eigenvectors of a Hermitian
/// covariance, with the number of sources used to split signal and noise
/// subspaces.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    /// Column `k` goes with `values[k]`.
    pub vectors: CMatrix,
    pub num_sources: usize,
}

impl EigenSystem {
    pub fn from_covariance(c: &CMatrix, num_sources: usize) -> Result<Self> {
        let (values, vectors) = hermitian_eig(c)?;
        if num_sources > values.len() {
            return Err(Error::NoNoiseSubspace { k: num_sources, dim: values.len() });
        }
        Ok(Self { values, vectors, num_sources })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn signal_values(&self) -> &[f64] {
        &self.values[..self.num_sources]
    }

    /// `dim x K` matrix of the leading eigenvectors.
    pub fn signal_vectors(&self) -> CMatrix {
        self.vectors.columns(0, self.num_sources).into_owned()
    }

    /// Re-split the same decomposition with another source count.
    pub fn with_sources(&self, num_sources: usize) -> Result<Self> {
        if num_sources > self.dim() {
            return Err(Error::NoNoiseSubspace { k: num_sources, dim: self.dim() });
        }
        Ok(Self { num_sources, ..self.clone() })
    }
}

/// Eigendecomposition of `Y^(L) Y^(L)* / (NL)`.
pub fn sample_covariance_eig(smoothed: &SmoothedMatrix, num_sources: usize) -> Result<EigenSystem> {
    let c = gram(&smoothed.entries, smoothed.virtual_snapshots() as f64);
    EigenSystem::from_covariance(&c, num_sources)
}

/// Mean of the `dim - K` smallest eigenvalues.
pub fn noise_variance_estimate(eig: &EigenSystem) -> Result<f64> {
    let (k, dim) = (eig.num_sources, eig.dim());
    if k >= dim {
        return Err(Error::NoNoiseSubspace { k, dim });
    }
    Ok(eig.values[k..].iter().sum::<f64>() / (dim - k) as f64)
}

/// Which estimator a pseudo-spectrum comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpectrumMethod {
    Traditional,
    GMusic,
}

impl SpectrumMethod {
    pub fn name(&self) -> &'static str {
        match self {
            SpectrumMethod::Traditional => "traditional",
            SpectrumMethod::GMusic => "g-music",
        }
    }
}

/// Outcome of the G-MUSIC weight for one sample eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GmusicWeight {
    Weight(f64),
    /// `λ̂` does not exceed the estimated bulk edge carried here.
    NotSeparated { edge: f64 },
}

/// `1 / h(λ̂)` under the plug-in law `MP(σ², c)`.
pub fn gmusic_weight(lambda_hat: f64, sigma2: f64, c: f64) -> GmusicWeight {
    if sigma2 <= 0.0 {
        // noiseless limit: h → 1
        return GmusicWeight::Weight(1.0);
    }
    let p = match MpParams::new(sigma2, c) {
        Ok(p) => p,
        Err(_) => return GmusicWeight::NotSeparated { edge: f64::NAN },
    };
    match h_star(lambda_hat, &p) {
        Ok(h) => GmusicWeight::Weight(1.0 / h),
        Err(_) => GmusicWeight::NotSeparated { edge: p.edge_plus() },
    }
}

/// What to do with signal eigenvalues that sit inside the estimated bulk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeparationPolicy {
    /// Use weight 1 (MUSIC behaviour) for those eigenvectors and flag the
    /// spectrum as low confidence.
    #[default]
    Clamp,
    /// Refuse to build the spectrum.
    Strict,
}

/// Empirical separation status of the `K` leading sample eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalSeparation {
    pub lambda_hat: Vec<f64>,
    pub sigma2: f64,
    pub c: f64,
    /// `σ²(1 + √c)²`
    pub edge: f64,
    /// Zero-based indices of eigenvalues at or below the edge.
    pub failed: Vec<usize>,
}

/// Function whose local minima [`find_doas`] looks for.
///
/// The two agree for MUSIC, whose pseudo-spectrum is nonnegative. A G-MUSIC
/// pseudo-spectrum may dip below zero around a source; `|η̂|` then has two
/// minima at the zero crossings and the source can be picked twice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Objective {
    /// `|η̂(θ)|`
    Absolute,
    /// `η̂(θ)` itself, so a negative dip counts as one minimum.
    #[default]
    Signed,
}

/// A pseudo-spectrum `θ ↦ 1 - Σ w_k |a(θ)^* û_k|²` ready for evaluation.
#[derive(Debug, Clone)]
pub struct PseudoSpectrum {
    pub method: SpectrumMethod,
    pub objective: Objective,
    vectors: CMatrix,
    pub weights: Vec<f64>,
    /// Signal indices whose G-MUSIC weight was clamped to 1.
    pub clamped: Vec<usize>,
}

impl PseudoSpectrum {
    pub fn traditional(eig: &EigenSystem) -> Self {
        Self {
            method: SpectrumMethod::Traditional,
            objective: Objective::default(),
            vectors: eig.signal_vectors(),
            weights: vec![1.0; eig.num_sources],
            clamped: Vec::new(),
        }
    }

    pub fn gmusic(eig: &EigenSystem, sigma2: f64, c: f64, policy: SeparationPolicy) -> Result<Self> {
        let mut weights = Vec::with_capacity(eig.num_sources);
        let mut failed = Vec::new();
        let mut edge = f64::NAN;
        for (k, &lam) in eig.signal_values().iter().enumerate() {
            match gmusic_weight(lam, sigma2, c) {
                GmusicWeight::Weight(w) => weights.push(w),
                GmusicWeight::NotSeparated { edge: e } => {
                    edge = e;
                    failed.push(k);
                    weights.push(1.0);
                }
            }
        }
        if !failed.is_empty() && policy == SeparationPolicy::Strict {
            return Err(Error::NotSeparated(Box::new(EmpiricalSeparation {
                lambda_hat: eig.signal_values().to_vec(),
                sigma2,
                c,
                edge,
                failed,
            })));
        }
        Ok(Self {
            method: SpectrumMethod::GMusic,
            objective: Objective::default(),
            vectors: eig.signal_vectors(),
            weights,
            clamped: failed,
        })
    }

    /// G-MUSIC form with caller-chosen weights.
    pub fn with_weights(eig: &EigenSystem, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != eig.num_sources {
            return Err(Error::InvalidDimension(format!(
                "{} weights for {} sources",
                weights.len(),
                eig.num_sources
            )));
        }
        Ok(Self {
            method: SpectrumMethod::GMusic,
            objective: Objective::default(),
            vectors: eig.signal_vectors(),
            weights,
            clamped: Vec::new(),
        })
    }

    pub fn with_objective(mut self, objective: Objective) -> Self {
        self.objective = objective;
        self
    }

    pub fn dim(&self) -> usize {
        self.vectors.nrows()
    }

    /// The value minimised by [`find_doas`].
    pub fn objective_value(&self, theta: f64) -> f64 {
        match self.objective {
            Objective::Absolute => self.eval(theta).abs(),
            Objective::Signed => self.eval(theta),
        }
    }

    pub fn low_confidence(&self) -> bool {
        !self.clamped.is_empty()
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let k = self.weights.len();
        if k == 0 {
            return 1.0;
        }
        let p = self.dim();
        // a(θ)^* u = Σ_j e^{-ijθ} u_j / √p
        let step = C64::from_polar(1.0, -theta);
        let mut ph = C64::new(1.0, 0.0);
        let mut acc = [ZERO; 8];
        let mut big = if k > acc.len() { vec![ZERO; k] } else { Vec::new() };
        for j in 0..p {
            if k <= acc.len() {
                for (q, a) in acc.iter_mut().take(k).enumerate() {
                    *a += ph * self.vectors[(j, q)];
                }
            } else {
                for (q, a) in big.iter_mut().enumerate() {
                    *a += ph * self.vectors[(j, q)];
                }
            }
            ph *= step;
        }
        let proj: &[C64] = if k <= acc.len() { &acc[..k] } else { &big };
        let s: f64 = proj
            .iter()
            .zip(&self.weights)
            .map(|(z, w)| w * z.norm_sqr())
            .sum();
        let eta = 1.0 - s / p as f64;
        if self.method == SpectrumMethod::Traditional {
            eta.max(0.0)
        } else {
            eta
        }
    }
}

/// `a_{M-L+1}(θ)^* Π̂ a_{M-L+1}(θ)` with `Π̂` the noise-subspace projector.
pub fn traditional_pseudospectrum(eig: &EigenSystem, theta: f64) -> f64 {
    PseudoSpectrum::traditional(eig).eval(theta)
}

/// G-MUSIC pseudo-spectrum value; errors if any signal eigenvalue is not
/// separated from the plug-in bulk.
pub fn gmusic_pseudospectrum(eig: &EigenSystem, sigma2: f64, c: f64, theta: f64) -> Result<f64> {
    Ok(PseudoSpectrum::gmusic(eig, sigma2, c, SeparationPolicy::Strict)?.eval(theta))
}

/// Sampling grid for the DoA search.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPolicy {
    pub window: (f64, f64),
    pub points_per_beamwidth: usize,
    /// `2π / M` of the full array.
    pub beamwidth: f64,
    /// Golden-section stopping width.
    pub tolerance: f64,
}

impl GridPolicy {
    pub const MIN_POINTS_PER_BEAMWIDTH: usize = 16;

    /// Whole circle `[-π, π)` for an `M`-sensor array.
    pub fn full(m: usize) -> Self {
        Self::window(m, -PI, PI)
    }

    pub fn window(m: usize, lo: f64, hi: f64) -> Self {
        let beamwidth = 2.0 * PI / m as f64;
        Self {
            window: (lo, hi),
            points_per_beamwidth: Self::MIN_POINTS_PER_BEAMWIDTH,
            beamwidth,
            tolerance: 1e-4 * beamwidth,
        }
    }

    /// Window covering `doas` padded by `pad_beams` beamwidths on each side.
    pub fn around(m: usize, doas: &[f64], pad_beams: f64) -> Self {
        let bw = 2.0 * PI / m as f64;
        let lo = doas.iter().copied().fold(f64::INFINITY, f64::min) - pad_beams * bw;
        let hi = doas.iter().copied().fold(f64::NEG_INFINITY, f64::max) + pad_beams * bw;
        if hi - lo >= 2.0 * PI {
            Self::full(m)
        } else {
            Self::window(m, lo, hi)
        }
    }

    pub fn with_density(mut self, points_per_beamwidth: usize) -> Self {
        self.points_per_beamwidth = points_per_beamwidth.max(Self::MIN_POINTS_PER_BEAMWIDTH);
        self
    }

    fn periodic(&self) -> bool {
        self.window.1 - self.window.0 >= 2.0 * PI - 1e-12
    }

    fn grid(&self) -> Vec<f64> {
        let (lo, hi) = self.window;
        let span = hi - lo;
        let cells = ((span / self.beamwidth) * self.points_per_beamwidth as f64).ceil().max(2.0) as usize;
        let h = span / cells as f64;
        let count = if self.periodic() { cells } else { cells + 1 };
        (0..count).map(|i| lo + h * i as f64).collect()
    }
}

/// How the `K` angles are picked from `|η̂|`.
#[derive(Debug, Clone, PartialEq)]
pub enum SearchMode {
    /// The `K` deepest strict local minima over the grid window.
    DeepestMinima(GridPolicy),
    /// One argmin per interval `I_k` (intervals assumed disjoint).
    KnownIntervals {
        intervals: Vec<(f64, f64)>,
        points_per_beamwidth: usize,
        beamwidth: f64,
        tolerance: f64,
    },
}

impl SearchMode {
    /// Intervals `[θ_k - hw, θ_k + hw]` for an `M`-sensor array.
    pub fn intervals_around(m: usize, doas: &[f64], half_width: f64) -> Self {
        let bw = 2.0 * PI / m as f64;
        SearchMode::KnownIntervals {
            intervals: doas.iter().map(|&t| (t - half_width, t + half_width)).collect(),
            points_per_beamwidth: 64,
            beamwidth: bw,
            tolerance: 1e-4 * bw,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub theta: f64,
    pub depth: f64,
}

/// Sampled objective and the minima picked from it.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTrace {
    pub grid: Vec<f64>,
    /// Objective values on `grid`.
    pub values: Vec<f64>,
    pub minima: Vec<Minimum>,
    pub method: SpectrumMethod,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DoaEstimate {
    /// Ascending.
    pub angles: Vec<f64>,
    pub trace: SpectrumTrace,
    /// The spectrum was built with clamped (non-separated) weights.
    pub low_confidence: bool,
}

fn golden_section(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

fn wrap_angle(t: f64) -> f64 {
    let w = (t + PI).rem_euclid(2.0 * PI) - PI;
    if w >= PI {
        -PI
    } else {
        w
    }
}

/// Locate `K` DoAs as local minima of the spectrum's [`Objective`].
pub fn find_doas(spectrum: &PseudoSpectrum, k: usize, mode: &SearchMode) -> Result<DoaEstimate> {
    if k == 0 {
        return Err(Error::InvalidDimension("find_doas needs K >= 1".into()));
    }
    let f = |t: f64| spectrum.objective_value(t);
    let (grid, values, minima) = match mode {
        SearchMode::DeepestMinima(policy) => {
            let grid = policy.grid();
            let values: Vec<f64> = grid.iter().map(|&t| f(t)).collect();
            let n = grid.len();
            let periodic = policy.periodic();
            let h = grid[1] - grid[0];
            let mut cands: Vec<usize> = (0..n)
                .filter(|&i| {
                    let (prev, next) = if periodic {
                        ((i + n - 1) % n, (i + 1) % n)
                    } else if i == 0 || i + 1 == n {
                        return false;
                    } else {
                        (i - 1, i + 1)
                    };
                    values[i] < values[prev] && values[i] <= values[next]
                })
                .collect();
            if cands.len() < k {
                return Err(Error::UnderResolved { found: cands.len(), wanted: k });
            }
            cands.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
            cands.truncate(k);
            let minima = cands
                .iter()
                .map(|&i| {
                    let (t, v) = golden_section(&f, grid[i] - h, grid[i] + h, policy.tolerance);
                    if v <= values[i] {
                        Minimum { theta: if periodic { wrap_angle(t) } else { t }, depth: v }
                    } else {
                        Minimum { theta: grid[i], depth: values[i] }
                    }
                })
                .collect::<Vec<_>>();
            (grid, values, minima)
        }
        SearchMode::KnownIntervals { intervals, points_per_beamwidth, beamwidth, tolerance } => {
            if intervals.len() != k {
                return Err(Error::InvalidDimension(format!(
                    "{} intervals for {} sources",
                    intervals.len(),
                    k
                )));
            }
            let ppb = (*points_per_beamwidth).max(GridPolicy::MIN_POINTS_PER_BEAMWIDTH) as f64;
            let mut grid = Vec::new();
            let mut values = Vec::new();
            let mut minima = Vec::new();
            for &(lo, hi) in intervals {
                let cells = ((hi - lo) / beamwidth * ppb).ceil().max(2.0) as usize;
                let h = (hi - lo) / cells as f64;
                let pts: Vec<f64> = (0..=cells).map(|i| lo + h * i as f64).collect();
                let vals: Vec<f64> = pts.iter().map(|&t| f(t)).collect();
                let best = (0..pts.len()).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap_or(0);
                let a = (pts[best] - h).max(lo);
                let b = (pts[best] + h).min(hi);
                let (t, v) = golden_section(&f, a, b, *tolerance);
                minima.push(if v <= vals[best] {
                    Minimum { theta: t, depth: v }
                } else {
                    Minimum { theta: pts[best], depth: vals[best] }
                });
                grid.extend(pts);
                values.extend(vals);
            }
            (grid, values, minima)
        }
    };
    let mut angles: Vec<f64> = minima.iter().map(|m| m.theta).collect();
    angles.sort_by(f64::total_cmp);
    Ok(DoaEstimate {
        angles,
        trace: SpectrumTrace { grid, values, minima, method: spectrum.method },
        low_confidence: spectrum.low_confidence(),
    })
}

/// `(1/L) A^(L) (R ⊗ I_L) A^(L)*` for source covariance `R = S S^*/N`.
pub fn signal_covariance_kron(doas: &[f64], m: usize, l: usize, r: &CMatrix) -> Result<CMatrix> {
    let k = doas.len();
    if r.shape() != (k, k) {
        return Err(Error::InvalidDimension(format!("source covariance is {:?}, K={k}", r.shape())));
    }
    let blocks = doas
        .iter()
        .map(|&t| smoothed_steering(t, m, l))
        .collect::<Result<Vec<_>>>()?;
    let p = m + 1 - l;
    let mut c = CMatrix::zeros(p, p);
    for (i, bi) in blocks.iter().enumerate() {
        for (j, bj) in blocks.iter().enumerate() {
            c += (bi * bj.adjoint()) * (r[(i, j)] / l as f64);
        }
    }
    Ok(c)
}

/// `((M-L+1)/M) A_{M-L+1} (R ∘ A_L^T conj(A_L)) A_{M-L+1}^*`, an equivalent
/// form of [`signal_covariance_kron`] through a Hadamard product.
pub fn signal_covariance_hadamard(doas: &[f64], m: usize, l: usize, r: &CMatrix) -> Result<CMatrix> {
    if l == 0 || l >= m {
        return Err(Error::InvalidSmoothing { m, l });
    }
    let p = m + 1 - l;
    let ap = steering_matrix(p, doas)?;
    let al = steering_matrix(l, doas)?;
    let g = al.transpose() * al.map(|z| z.conj());
    let had = r.component_mul(&g);
    Ok(&ap * had * ap.adjoint() * C64::new(p as f64 / m as f64, 0.0))
}

/// The `K` nonzero eigenvalues of [`signal_covariance_kron`], decreasing.
///
/// With `A_P^* A_P = C C^*` (Cholesky), the nonzero spectrum of
/// `A_P X A_P^*` is that of the `K x K` matrix `C^* X C`.
pub fn signal_eigenvalues(doas: &[f64], m: usize, l: usize, r: &CMatrix) -> Result<Vec<f64>> {
    if l == 0 || l >= m {
        return Err(Error::InvalidSmoothing { m, l });
    }
    let k = doas.len();
    if r.shape() != (k, k) {
        return Err(Error::InvalidDimension(format!("source covariance is {:?}, K={k}", r.shape())));
    }
    let p = m + 1 - l;
    let ap = steering_matrix(p, doas)?;
    let al = steering_matrix(l, doas)?;
    let x = r.component_mul(&(al.transpose() * al.map(|z| z.conj())));
    match (ap.adjoint() * &ap).cholesky() {
        Some(ch) => {
            let c = ch.l();
            let red = c.adjoint() * x * &c * C64::new(p as f64 / m as f64, 0.0);
            hermitian_eigenvalues(&red)
        }
        None => {
            let full = signal_covariance_hadamard(doas, m, l, r)?;
            Ok(hermitian_eigenvalues(&full)?[..k].to_vec())
        }
    }
}

/// Finite-sample separation status of a scenario's realised signals.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparationReport {
    /// The `K` nonzero eigenvalues of `(1/L) A^(L)(S S^*/N ⊗ I_L) A^(L)*`, decreasing.
    pub lambda_signal: Vec<f64>,
    /// `σ²√c_N`
    pub threshold: f64,
    pub separated: bool,
    /// `λ_K - σ²√c_N`
    pub margin: f64,
    /// Smallest SNR for which `λ_K > σ²√c_N`, i.e. `10 log10(√c_N / λ_K)`.
    pub min_snr_db: f64,
}

pub fn separation_report(scenario: &ArrayScenario) -> Result<SeparationReport> {
    let k = scenario.num_sources();
    if k == 0 {
        return Err(Error::NoSignal);
    }
    let r = scenario.signal_covariance()?;
    let lambda_signal = signal_eigenvalues(&scenario.doas, scenario.m, scenario.l, &r)?;
    let lk = lambda_signal[k - 1];
    let cn = scenario.c_n();
    let threshold = scenario.sigma2() * cn.sqrt();
    let margin = lk - threshold;
    Ok(SeparationReport {
        lambda_signal,
        threshold,
        separated: margin > 0.0,
        margin,
        min_snr_db: 10.0 * (cn.sqrt() / lk).log10(),
    })
}

/// Outcome of a separation inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationCheck {
    pub holds: bool,
    /// Left side minus right side.
    pub margin: f64,
}

/// `λ_K(A^* A D) > σ² √d* / √L` for widely spaced sources whose covariance
/// tends to `diag(d)`.
pub fn separation_widely_spaced(
    a: &CMatrix,
    d: &[f64],
    sigma2: f64,
    d_star: f64,
    l: usize,
) -> Result<SeparationCheck> {
    let k = a.ncols();
    if d.len() != k || k == 0 {
        return Err(Error::InvalidDimension(format!("{} powers for {k} steering vectors", d.len())));
    }
    if d.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::Domain { what: "source powers must be positive", value: d.iter().copied().fold(f64::INFINITY, f64::min) });
    }
    if l == 0 {
        return Err(Error::InvalidSmoothing { m: a.nrows() + 1, l });
    }
    // A^*A D is similar to the Hermitian D^{1/2} A^*A D^{1/2}
    let sq: Vec<f64> = d.iter().map(|x| x.sqrt()).collect();
    let g = a.adjoint() * a;
    let h = CMatrix::from_fn(k, k, |i, j| g[(i, j)] * (sq[i] * sq[j]));
    let lk = hermitian_eigenvalues(&h)?[k - 1];
    let margin = lk - sigma2 * d_star.sqrt() / (l as f64).sqrt();
    Ok(SeparationCheck { holds: margin > 0.0, margin })
}

pub(crate) fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

/// `1 - |sinc(κ/2)| > σ² c*` for two sources `κ/M` apart.
pub fn separation_closely_spaced(kappa: f64, sigma2: f64, c_star: f64) -> SeparationCheck {
    let margin = 1.0 - sinc(kappa / 2.0).abs() - sigma2 * c_star;
    SeparationCheck { holds: margin > 0.0, margin }
}

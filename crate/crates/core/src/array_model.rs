//! Uniform linear array signal model and spatial-smoothing (block-Hankel)
//! structures.
//!
//! Angles are electrical phase increments per sensor: the steering vector of
//! an `m`-sensor array is `a_m(θ) = [1, e^{iθ}, …, e^{i(m-1)θ}]^T / √m`.
//!
//! Snapshots `Y = A S + V` are `M x N`. Spatial smoothing with parameter `L`
//! stacks, for each snapshot, the `L` overlapping subarrays of `M - L + 1`
//! sensors side by side, which yields the `(M-L+1) x NL` block-Hankel matrix
//!
//! ```text
//! Y^(L)[i, l + n L] = Y[i + l, n]      0 <= i <= M-L, 0 <= l < L, 0 <= n < N
//! ```

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, orthonormal_columns, CMatrix, CVector, C64, ZERO};
use crate::rng::{complex_normal_matrix, rng_for};

/// `a_m(θ)`; component `j` is `e^{ijθ}/√m`.
pub fn steering_vector(m: usize, theta: f64) -> Result<CVector> {
    if m == 0 {
        return Err(Error::InvalidDimension("steering vector of length 0".into()));
    }
    let s = 1.0 / (m as f64).sqrt();
    Ok(CVector::from_fn(m, |j, _| C64::from_polar(s, j as f64 * theta)))
}

/// Steering matrix `[a_m(θ_1), …, a_m(θ_K)]`; every column has unit norm.
pub fn steering_matrix(m: usize, doas: &[f64]) -> Result<CMatrix> {
    if m == 0 {
        return Err(Error::InvalidDimension("steering matrix with 0 rows".into()));
    }
    let s = 1.0 / (m as f64).sqrt();
    Ok(CMatrix::from_fn(m, doas.len(), |j, k| C64::from_polar(s, j as f64 * doas[k])))
}

/// How the `K x N` source matrix `S_N` is produced.
#[derive(Debug, Clone, PartialEq)]
pub enum SignalPolicy {
    /// Caller-supplied `K x N` matrix of full row rank.
    FixedMatrix(CMatrix),
    /// i.i.d. CN(0, 1) entries, each row rescaled to empirical power
    /// `‖s_k‖² / N = 1`.
    RandomGaussianNormalized,
    /// Rows orthonormalised and scaled so that `S S^* / N = I_K` exactly.
    IdentityCovariance,
}

/// Complete description of one array experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayScenario {
    /// Number of sensors `M`.
    pub m: usize,
    /// Number of snapshots `N`.
    pub n: usize,
    /// Smoothing parameter `L` (`L = 1` is no smoothing).
    pub l: usize,
    /// Directions of arrival in `[-π, π)`.
    pub doas: Vec<f64>,
    /// `10 log10(1 / σ²)`; `+∞` gives a noiseless scenario.
    pub snr_db: f64,
    pub signal: SignalPolicy,
    pub seed: u64,
}

impl ArrayScenario {
    pub fn new(m: usize, n: usize, l: usize, doas: Vec<f64>, snr_db: f64) -> Result<Self> {
        let s = Self {
            m,
            n,
            l,
            doas,
            snr_db,
            signal: SignalPolicy::RandomGaussianNormalized,
            seed: 0,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_signal(mut self, signal: SignalPolicy) -> Result<Self> {
        self.signal = signal;
        self.validate()?;
        Ok(self)
    }

    pub fn with_snr_db(mut self, snr_db: f64) -> Result<Self> {
        self.snr_db = snr_db;
        self.validate()?;
        Ok(self)
    }

    /// Same scenario (same seed, hence same `S` and `V`) with another
    /// smoothing parameter.
    pub fn with_smoothing(mut self, l: usize) -> Result<Self> {
        self.l = l;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.n == 0 {
            return Err(Error::InvalidDimension(format!("M={} N={}", self.m, self.n)));
        }
        if self.l == 0 || self.l >= self.m {
            return Err(Error::InvalidSmoothing { m: self.m, l: self.l });
        }
        let k = self.doas.len();
        if k >= self.subarray_len() {
            return Err(Error::NoNoiseSubspace { k, dim: self.subarray_len() });
        }
        if let Some(t) = self.doas.iter().find(|t| !(-PI..PI).contains(*t)) {
            return Err(Error::InvalidScenario(format!("DoA {t} outside [-pi, pi)")));
        }
        for (i, a) in self.doas.iter().enumerate() {
            if self.doas[i + 1..].contains(a) {
                return Err(Error::InvalidScenario(format!("repeated DoA {a}")));
            }
        }
        if self.snr_db.is_nan() || self.snr_db == f64::NEG_INFINITY {
            return Err(Error::InvalidScenario(format!("SNR {} dB", self.snr_db)));
        }
        if let SignalPolicy::FixedMatrix(s) = &self.signal {
            if s.nrows() != k || s.ncols() != self.n {
                return Err(Error::InvalidScenario(format!(
                    "signal matrix is {}x{}, expected {}x{}",
                    s.nrows(),
                    s.ncols(),
                    k,
                    self.n
                )));
            }
        }
        Ok(())
    }

    pub fn num_sources(&self) -> usize {
        self.doas.len()
    }

    /// `M - L + 1`, the size of each subarray.
    pub fn subarray_len(&self) -> usize {
        self.m + 1 - self.l
    }

    /// Number of virtual snapshots `N L`.
    pub fn virtual_snapshots(&self) -> usize {
        self.n * self.l
    }

    pub fn sigma2(&self) -> f64 {
        10f64.powf(-self.snr_db / 10.0)
    }

    /// `c_N = (M - L + 1) / (N L)`.
    pub fn c_n(&self) -> f64 {
        self.subarray_len() as f64 / self.virtual_snapshots() as f64
    }

    /// The realised `K x N` source matrix. Deterministic in the seed and
    /// independent of the noise stream.
    pub fn signal_matrix(&self) -> Result<CMatrix> {
        self.validate()?;
        let (k, n) = (self.num_sources(), self.n);
        let mut rng = rng_for(self.seed, &[0]);
        let s = match &self.signal {
            SignalPolicy::FixedMatrix(s) => {
                if k > 0 {
                    let r = hermitian_eigenvalues(&(s * s.adjoint()))?;
                    if r[k - 1] <= 1e-12 * r[0].max(f64::MIN_POSITIVE) {
                        return Err(Error::RankInfeasible { k, n });
                    }
                }
                s.clone()
            }
            SignalPolicy::RandomGaussianNormalized => {
                if k > n {
                    return Err(Error::RankInfeasible { k, n });
                }
                let mut s = complex_normal_matrix(&mut rng, k, n, 1.0);
                for mut row in s.row_iter_mut() {
                    let p = row.iter().map(|z| z.norm_sqr()).sum::<f64>() / n as f64;
                    row.unscale_mut(p.sqrt());
                }
                s
            }
            SignalPolicy::IdentityCovariance => {
                if k > n {
                    return Err(Error::RankInfeasible { k, n });
                }
                let g = complex_normal_matrix(&mut rng, n, k, 1.0);
                orthonormal_columns(g).adjoint() * C64::new((n as f64).sqrt(), 0.0)
            }
        };
        Ok(s)
    }

    /// `S S^* / N`.
    pub fn signal_covariance(&self) -> Result<CMatrix> {
        let s = self.signal_matrix()?;
        Ok((&s * s.adjoint()).unscale(self.n as f64))
    }
}

/// `Y_N = A_M S_N + V_N` with both parts retained.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotMatrix {
    /// `A_M S_N`
    pub signal: CMatrix,
    /// `V_N`
    pub noise: CMatrix,
    /// `signal + noise`
    pub entries: CMatrix,
}

impl SnapshotMatrix {
    pub fn sensors(&self) -> usize {
        self.entries.nrows()
    }

    pub fn snapshots(&self) -> usize {
        self.entries.ncols()
    }
}

pub fn synthesize_snapshots(scenario: &ArrayScenario) -> Result<SnapshotMatrix> {
    scenario.validate()?;
    let s = scenario.signal_matrix()?;
    let a = steering_matrix(scenario.m, &scenario.doas)?;
    let signal = if scenario.num_sources() == 0 {
        CMatrix::zeros(scenario.m, scenario.n)
    } else {
        &a * &s
    };
    let mut rng = rng_for(scenario.seed, &[1]);
    let noise = complex_normal_matrix(&mut rng, scenario.m, scenario.n, scenario.sigma2());
    let entries = &signal + &noise;
    Ok(SnapshotMatrix { signal, noise, entries })
}

/// The `(M-L+1) x NL` block-Hankel matrix `Y^(L)` together with the
/// dimensions it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothedMatrix {
    pub entries: CMatrix,
    pub m: usize,
    pub n: usize,
    pub l: usize,
}

impl SmoothedMatrix {
    pub fn subarray_len(&self) -> usize {
        self.m + 1 - self.l
    }

    pub fn virtual_snapshots(&self) -> usize {
        self.n * self.l
    }

    pub fn c_n(&self) -> f64 {
        self.subarray_len() as f64 / self.virtual_snapshots() as f64
    }
}

/// Spatial smoothing of an `M x N` matrix: block `n` is the `(M-L+1) x L`
/// Hankel matrix of column `n`, whose column `l` is the snapshot seen by
/// subarray `l`.
pub fn hankelize(y: &CMatrix, l: usize) -> Result<SmoothedMatrix> {
    let (m, n) = y.shape();
    if l == 0 || l >= m {
        return Err(Error::InvalidSmoothing { m, l });
    }
    let p = m + 1 - l;
    let entries = CMatrix::from_fn(p, n * l, |i, col| {
        let (blk, sub) = (col / l, col % l);
        y[(i + sub, blk)]
    });
    Ok(SmoothedMatrix { entries, m, n, l })
}

/// `𝒜^(L)(θ) = √(L(M-L+1)/M) a_{M-L+1}(θ) a_L(θ)^T`, the Hankel matrix of
/// `a_M(θ)`.
pub fn smoothed_steering(theta: f64, m: usize, l: usize) -> Result<CMatrix> {
    if l == 0 || l >= m {
        return Err(Error::InvalidSmoothing { m, l });
    }
    let p = m + 1 - l;
    let scale = ((l * p) as f64 / m as f64).sqrt();
    let ap = steering_vector(p, theta)?;
    let al = steering_vector(l, theta)?;
    Ok(&ap * al.transpose() * C64::new(scale, 0.0))
}

/// `B = A^(L) (S_N ⊗ I_L) / √(NL)`, the signal part of `Y^(L) / √(NL)`.
pub fn smoothed_signal_part(scenario: &ArrayScenario) -> Result<CMatrix> {
    scenario.validate()?;
    let (m, n, l) = (scenario.m, scenario.n, scenario.l);
    let p = scenario.subarray_len();
    let mut b = CMatrix::from_element(p, n * l, ZERO);
    if scenario.num_sources() == 0 {
        return Ok(b);
    }
    let s = scenario.signal_matrix()?;
    let blocks = scenario
        .doas
        .iter()
        .map(|&t| smoothed_steering(t, m, l))
        .collect::<Result<Vec<_>>>()?;
    let norm = 1.0 / ((n * l) as f64).sqrt();
    for t in 0..n {
        for (k, blk) in blocks.iter().enumerate() {
            let w = s[(k, t)] * norm;
            for sub in 0..l {
                for i in 0..p {
                    b[(i, t * l + sub)] += w * blk[(i, sub)];
                }
            }
        }
    }
    Ok(b)
}

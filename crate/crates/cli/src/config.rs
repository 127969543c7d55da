//! TOML run configuration.
//!
//! Angles are radians; a string with a `deg` suffix (`"0.5deg"`) is read as
//! degrees. Unknown keys are rejected.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use smoothmusic::montecarlo::{DoaLayout, Estimator, SearchSpec, Sweep};
use smoothmusic::subspace::Objective;
use smoothmusic::verify::SuiteSettings;
use smoothmusic::{ArrayScenario, SignalPolicy};

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Angle {
    Radians(f64),
    Text(String),
}

impl Angle {
    pub fn radians(&self) -> Result<f64> {
        match self {
            Angle::Radians(x) => Ok(*x),
            Angle::Text(s) => {
                let t = s.trim();
                let Some(num) = t.strip_suffix("deg") else {
                    bail!("angle {s:?}: strings must carry a 'deg' suffix, plain numbers are radians");
                };
                let v: f64 = num.trim().parse().with_context(|| format!("angle {s:?}"))?;
                Ok(v.to_radians())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, Default, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum SignalKind {
    #[default]
    Random,
    Identity,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    pub m: usize,
    pub n: usize,
    #[serde(default = "one")]
    pub l: usize,
    /// Fixed DoAs.
    pub doas: Option<Vec<Angle>>,
    /// DoAs `κ_k / M`; exclusive with `doas`.
    pub kappa: Option<Vec<f64>>,
    pub snr_db: f64,
    #[serde(default)]
    pub signal: SignalKind,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Copy, Deserialize, Default, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectiveKind {
    #[default]
    Signed,
    Absolute,
}

impl From<ObjectiveKind> for Objective {
    fn from(o: ObjectiveKind) -> Self {
        match o {
            ObjectiveKind::Signed => Objective::Signed,
            ObjectiveKind::Absolute => Objective::Absolute,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSection {
    #[serde(default = "default_grid")]
    pub grid_points: usize,
    /// `[lo, hi]`; the whole circle when absent.
    pub window: Option<[Angle; 2]>,
    #[serde(default)]
    pub objective: ObjectiveKind,
}

fn default_grid() -> usize {
    4096
}

impl Default for SpectrumSection {
    fn default() -> Self {
        Self { grid_points: default_grid(), window: None, objective: ObjectiveKind::default() }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum SweepKind {
    SnrDb,
    L,
    Dims,
}

#[derive(Debug, Clone, Copy, Deserialize, Default, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum SearchKind {
    Full,
    #[default]
    Window,
    Intervals,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonteCarloSection {
    pub sweep: SweepKind,
    /// SNRs in dB or `L` values.
    #[serde(default)]
    pub values: Vec<f64>,
    /// `[M, N, L]` triples for `sweep = "dims"`.
    #[serde(default)]
    pub dims: Vec<[usize; 3]>,
    pub trials: usize,
    #[serde(default = "all_estimators")]
    pub estimators: Vec<String>,
    #[serde(default)]
    pub search: SearchKind,
    #[serde(default = "default_ppb")]
    pub points_per_beamwidth: usize,
    #[serde(default = "default_pad")]
    pub pad_beams: f64,
    #[serde(default)]
    pub include_failures: bool,
    #[serde(default)]
    pub objective: ObjectiveKind,
}

fn all_estimators() -> Vec<String> {
    Estimator::ALL.iter().map(|e| e.name().to_string()).collect()
}

fn default_ppb() -> usize {
    32
}

fn default_pad() -> f64 {
    2.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SepTableSection {
    pub l_values: Vec<usize>,
    #[serde(default = "default_realizations")]
    pub realizations: usize,
}

fn default_realizations() -> usize {
    100
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    #[serde(default = "default_sigma2")]
    pub sigma2: f64,
    #[serde(default = "default_esd_trials")]
    pub esd_trials: usize,
    #[serde(default = "default_esd_trials")]
    pub quadratic_trials: usize,
    #[serde(default = "default_spike_trials")]
    pub spike_trials: usize,
}

fn default_sigma2() -> f64 {
    1.0
}

fn default_esd_trials() -> usize {
    50
}

fn default_spike_trials() -> usize {
    100
}

impl Default for VerifySection {
    fn default() -> Self {
        Self {
            sigma2: default_sigma2(),
            esd_trials: default_esd_trials(),
            quadratic_trials: default_esd_trials(),
            spike_trials: default_spike_trials(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    /// Worker threads, 0 for one per core.
    #[serde(default)]
    pub workers: usize,
    pub out_dir: Option<PathBuf>,
    /// `error`, `warn`, `info`, `debug` or `trace`.
    #[serde(default = "default_verbosity")]
    pub verbosity: String,
    #[serde(default)]
    pub strict_separation: bool,
    pub scenario: ScenarioSection,
    #[serde(default)]
    pub spectrum: SpectrumSection,
    pub montecarlo: Option<MonteCarloSection>,
    pub septable: Option<SepTableSection>,
    #[serde(default)]
    pub verify: VerifySection,
}

fn default_verbosity() -> String {
    "warn".into()
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn layout(&self) -> Result<DoaLayout> {
        match (&self.scenario.doas, &self.scenario.kappa) {
            (Some(d), None) => Ok(DoaLayout::Fixed(d.iter().map(Angle::radians).collect::<Result<_>>()?)),
            (None, Some(k)) => Ok(DoaLayout::Scaled(k.clone())),
            (None, None) => Ok(DoaLayout::Fixed(Vec::new())),
            (Some(_), Some(_)) => bail!("scenario: give either `doas` or `kappa`, not both"),
        }
    }

    pub fn scenario(&self) -> Result<ArrayScenario> {
        let s = &self.scenario;
        let doas = self.layout()?.doas(s.m);
        let sc = ArrayScenario::new(s.m, s.n, s.l, doas, s.snr_db)?.with_seed(self.seed);
        let sc = match s.signal {
            SignalKind::Random => sc,
            SignalKind::Identity => sc.with_signal(SignalPolicy::IdentityCovariance)?,
        };
        Ok(sc)
    }

    pub fn sweep(&self) -> Result<Sweep> {
        let Some(mc) = &self.montecarlo else { bail!("missing [montecarlo] section") };
        Ok(match mc.sweep {
            SweepKind::SnrDb => Sweep::SnrDb(mc.values.clone()),
            SweepKind::L => Sweep::Smoothing(
                mc.values
                    .iter()
                    .map(|&v| {
                        if v >= 1.0 && v.fract() == 0.0 {
                            Ok(v as usize)
                        } else {
                            bail!("montecarlo.values: L must be a positive integer, got {v}")
                        }
                    })
                    .collect::<Result<_>>()?,
            ),
            SweepKind::Dims => Sweep::Dims(mc.dims.iter().map(|d| (d[0], d[1], d[2])).collect()),
        })
    }

    pub fn search(&self) -> SearchSpec {
        match &self.montecarlo {
            Some(mc) => match mc.search {
                SearchKind::Full => SearchSpec::Full { points_per_beamwidth: mc.points_per_beamwidth },
                SearchKind::Window => SearchSpec::Window {
                    pad_beams: mc.pad_beams,
                    points_per_beamwidth: mc.points_per_beamwidth,
                },
                SearchKind::Intervals => SearchSpec::KnownIntervals,
            },
            None => SearchSpec::default(),
        }
    }

    pub fn suite_settings(&self) -> SuiteSettings {
        SuiteSettings {
            esd_trials: self.verify.esd_trials,
            quadratic_trials: self.verify.quadratic_trials,
            spike_trials: self.verify.spike_trials,
        }
    }
}

//! JSON analysis configuration. Every field defaults to the worked
//! DC-motor study, so an absent or empty config reproduces it end to end.

use nlbode_core::cgeom::Resolution;
use nlbode_core::lfr::log_grid;
use nlbode_core::lti::{
    dc_motor_controller, dc_motor_default_plant, LtiError, TransferFunction,
};
use nlbode_core::sim::{HarmonicTerm, ReferenceSignal};
use nlbode_core::srg::{SectorNonlinearity, SrgOptions};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

#[derive(Debug)]
pub enum ConfigError {
    Io(PathBuf, std::io::Error),
    /// serde_json's message already carries line and column.
    Parse(serde_json::Error),
    Invalid(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Io(path, e) => write!(f, "cannot read {}: {e}", path.display()),
            ConfigError::Parse(e) => write!(f, "invalid config: {e}"),
            ConfigError::Invalid(msg) => write!(f, "invalid config: {msg}"),
        }
    }
}

impl std::error::Error for ConfigError {}

/// Polynomial coefficient pair, descending powers of s.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalCoeffs {
    pub num: Vec<f64>,
    pub den: Vec<f64>,
}

impl RationalCoeffs {
    fn from_tf(tf: &TransferFunction) -> Self {
        Self {
            num: tf.num.clone(),
            den: tf.den.clone(),
        }
    }

    pub fn tf(&self) -> Result<TransferFunction, LtiError> {
        TransferFunction::new(&self.num, &self.den)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectorSpec {
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub points_per_decade: usize,
}

impl GridSpec {
    /// Log-spaced grid; a collapsed span is the single-point grid.
    pub fn values(&self) -> Vec<f64> {
        if self.lo == self.hi {
            vec![self.lo]
        } else {
            log_grid(self.lo, self.hi, self.points_per_decade)
        }
    }
}

/// Truncation and sampling knobs for the harmonic and full-space SRGs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SrgTuning {
    pub tail_rel_tol: f64,
    pub max_harmonics: usize,
    pub full_grid_lo: f64,
    pub full_grid_hi: f64,
    pub full_points_per_decade: usize,
}

impl Default for SrgTuning {
    fn default() -> Self {
        let o = SrgOptions::default();
        Self {
            tail_rel_tol: o.tail_rel_tol,
            max_harmonics: o.max_harmonics,
            full_grid_lo: o.full_grid_lo,
            full_grid_hi: o.full_grid_hi,
            full_points_per_decade: o.full_points_per_decade,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TauGridSpec {
    pub points: usize,
    pub max: f64,
}

impl Default for TauGridSpec {
    fn default() -> Self {
        Self {
            points: 20,
            max: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FourierTermSpec {
    pub n: usize,
    pub amplitude: f64,
    pub phase: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ReferenceSpec {
    Step {
        t0: f64,
        height: f64,
    },
    Ramp {
        slope: f64,
    },
    SwitchedSine {
        amplitude: f64,
        omega1: f64,
        omega2: f64,
        t_switch: f64,
    },
    FourierSeries {
        omega_base: f64,
        terms: Vec<FourierTermSpec>,
    },
}

impl ReferenceSpec {
    pub fn signal(&self) -> ReferenceSignal {
        match self {
            ReferenceSpec::Step { t0, height } => ReferenceSignal::Step {
                t0: *t0,
                height: *height,
            },
            ReferenceSpec::Ramp { slope } => ReferenceSignal::Ramp { slope: *slope },
            ReferenceSpec::SwitchedSine {
                amplitude,
                omega1,
                omega2,
                t_switch,
            } => ReferenceSignal::SwitchedSine {
                amplitude: *amplitude,
                omega1: *omega1,
                omega2: *omega2,
                t_switch: *t_switch,
            },
            ReferenceSpec::FourierSeries { omega_base, terms } => {
                ReferenceSignal::FourierSeries {
                    omega_base: *omega_base,
                    terms: terms
                        .iter()
                        .map(|t| HarmonicTerm {
                            n: t.n,
                            amplitude: t.amplitude,
                            phase: t.phase,
                        })
                        .collect(),
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimSpec {
    pub dt: f64,
    pub t_end: f64,
    /// Named references selectable from the simulate command.
    pub references: BTreeMap<String, ReferenceSpec>,
}

impl Default for SimSpec {
    fn default() -> Self {
        let mut references = BTreeMap::new();
        references.insert(
            "r1".to_string(),
            ReferenceSpec::Step {
                t0: 1.0,
                height: 1.0,
            },
        );
        references.insert("r2".to_string(), ReferenceSpec::Ramp { slope: 1.0 });
        references.insert(
            "r3".to_string(),
            ReferenceSpec::SwitchedSine {
                amplitude: 5.0,
                omega1: 1.0,
                omega2: 10.0,
                t_switch: 50.0,
            },
        );
        Self {
            dt: 1e-3,
            t_end: 100.0,
            references,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalysisConfig {
    pub plant: RationalCoeffs,
    pub controller: RationalCoeffs,
    pub nonlinearity: SectorSpec,
    pub grid: GridSpec,
    pub resolution: usize,
    pub srg: SrgTuning,
    pub tau_grid: TauGridSpec,
    pub df_amplitudes: GridSpec,
    pub sim: SimSpec,
    pub out_dir: PathBuf,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            plant: RationalCoeffs::from_tf(&dc_motor_default_plant()),
            controller: RationalCoeffs::from_tf(&dc_motor_controller()),
            nonlinearity: SectorSpec {
                alpha: -0.1,
                beta: 0.1,
            },
            grid: GridSpec {
                lo: 1e-2,
                hi: 1e2,
                points_per_decade: 50,
            },
            resolution: 720,
            srg: SrgTuning::default(),
            tau_grid: TauGridSpec::default(),
            df_amplitudes: GridSpec {
                lo: 1e-3,
                hi: 1e2,
                points_per_decade: 100,
            },
            sim: SimSpec::default(),
            out_dir: PathBuf::from("out"),
        }
    }
}

impl AnalysisConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| ConfigError::Io(path.to_path_buf(), e))?;
        let config: Self = serde_json::from_str(&text).map_err(ConfigError::Parse)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |msg: String| Err(ConfigError::Invalid(msg));
        self.plant
            .tf()
            .map_err(|e| ConfigError::Invalid(format!("plant: {e}")))?;
        self.controller
            .tf()
            .map_err(|e| ConfigError::Invalid(format!("controller: {e}")))?;
        if self.nonlinearity.alpha > self.nonlinearity.beta {
            return fail(format!(
                "nonlinearity sector is empty: alpha {} > beta {}",
                self.nonlinearity.alpha, self.nonlinearity.beta
            ));
        }
        for (name, g) in [("grid", &self.grid), ("df_amplitudes", &self.df_amplitudes)] {
            if !(g.lo > 0.0 && g.hi >= g.lo) {
                return fail(format!("{name}: need 0 < lo <= hi, got {} .. {}", g.lo, g.hi));
            }
            if g.points_per_decade == 0 {
                return fail(format!("{name}: points_per_decade must be positive"));
            }
        }
        if self.df_amplitudes.lo > 1e-3 {
            return fail(format!(
                "df_amplitudes.lo {} must be at most 1e-3 so the small-signal limit is covered",
                self.df_amplitudes.lo
            ));
        }
        if self.resolution < 16 {
            return fail(format!("resolution {} is below the minimum of 16", self.resolution));
        }
        if self.tau_grid.points == 0 || !(self.tau_grid.max > 0.0 && self.tau_grid.max <= 1.0) {
            return fail("tau_grid: need points >= 1 and 0 < max <= 1".to_string());
        }
        if !(self.sim.dt > 0.0 && self.sim.dt <= 1e-3) {
            return fail(format!(
                "sim.dt {} outside (0, 1e-3]; coarser steps under-resolve the loop",
                self.sim.dt
            ));
        }
        if self.sim.t_end <= self.sim.dt {
            return fail(format!("sim.t_end {} must exceed dt", self.sim.t_end));
        }
        Ok(())
    }

    pub fn plant_tf(&self) -> TransferFunction {
        self.plant.tf().expect("validated")
    }

    pub fn controller_tf(&self) -> TransferFunction {
        self.controller.tf().expect("validated")
    }

    pub fn phi(&self) -> SectorNonlinearity {
        SectorNonlinearity::new(self.nonlinearity.alpha, self.nonlinearity.beta)
    }

    /// Sine-feedback strength for the simulator: the sector's upper slope.
    pub fn delta(&self) -> f64 {
        self.nonlinearity.beta
    }

    pub fn srg_options(&self) -> SrgOptions {
        SrgOptions {
            resolution: Resolution::new(self.resolution),
            tail_rel_tol: self.srg.tail_rel_tol,
            max_harmonics: self.srg.max_harmonics,
            full_grid_lo: self.srg.full_grid_lo,
            full_grid_hi: self.srg.full_grid_hi,
            full_points_per_decade: self.srg.full_points_per_decade,
        }
    }

    pub fn frequency_grid(&self) -> Vec<f64> {
        self.grid.values()
    }

    pub fn amplitude_grid(&self) -> Vec<f64> {
        self.df_amplitudes.values()
    }

    pub fn tau_values(&self) -> Vec<f64> {
        let n = self.tau_grid.points;
        (1..=n)
            .map(|k| k as f64 * self.tau_grid.max / n as f64)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_round_trips() {
        let config = AnalysisConfig::default();
        let text = serde_json::to_string_pretty(&config).unwrap();
        let back: AnalysisConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(config, back);
    }

    #[test]
    fn default_config_is_the_motor_study() {
        let config = AnalysisConfig::default();
        config.validate().unwrap();
        assert_eq!(config.plant_tf(), dc_motor_default_plant());
        assert_eq!(config.controller_tf(), dc_motor_controller());
        assert_eq!(config.delta(), 0.1);
        assert_eq!(config.frequency_grid().len(), 200);
        assert_eq!(config.tau_values().len(), 20);
        assert_eq!(config.tau_values().last().copied(), Some(1.0));
        assert_eq!(config.sim.references.len(), 3);
    }

    #[test]
    fn empty_document_yields_defaults() {
        let config: AnalysisConfig = serde_json::from_str("{}").unwrap();
        assert_eq!(config, AnalysisConfig::default());
    }

    #[test]
    fn unknown_keys_are_rejected_with_location() {
        let err = serde_json::from_str::<AnalysisConfig>("{\n  \"resolutio\": 720\n}")
            .unwrap_err()
            .to_string();
        assert!(err.contains("resolutio"), "{err}");
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn validation_rejects_bad_ranges() {
        let mut config = AnalysisConfig::default();
        config.sim.dt = 0.01;
        assert!(config.validate().is_err());

        let mut config = AnalysisConfig::default();
        config.grid.lo = 10.0;
        config.grid.hi = 1.0;
        assert!(config.validate().is_err());

        let mut config = AnalysisConfig::default();
        config.nonlinearity.alpha = 0.2;
        assert!(config.validate().is_err());
    }

    #[test]
    fn single_point_grid_is_allowed() {
        let mut config = AnalysisConfig::default();
        config.grid.lo = 1.0;
        config.grid.hi = 1.0;
        config.validate().unwrap();
        assert_eq!(config.frequency_grid(), vec![1.0]);
    }

    #[test]
    fn reference_specs_map_to_signals() {
        let config = AnalysisConfig::default();
        let r3 = config.sim.references.get("r3").unwrap().signal();
        assert_eq!(r3.eval(60.0), 5.0 * 600.0f64.sin());
        let fourier = ReferenceSpec::FourierSeries {
            omega_base: 2.0,
            terms: vec![FourierTermSpec {
                n: 3,
                amplitude: 1.5,
                phase: 0.25,
            }],
        };
        assert_eq!(fourier.signal().eval(1.0), 1.5 * (6.0f64 + 0.25).sin());
    }
}

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ekf::{EkfConfig, EkfVariant};
use crate::error::ConfigError;
use crate::nav::{GateMap, NavConfig};
use crate::sim::{DetectionSchedule, SensorParams, SimParams, VisibilityModel};
use crate::vml::{FitMode, VmlConfig};

/// Estimator under test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterKind {
    /// VML with a plain least-squares fit.
    Ls,
    /// VML with basic RANSAC.
    Brf,
    /// VML with prior (ridge) RANSAC.
    Prf,
    Ekf,
    EkfOr,
    EkfDh,
}

impl FilterKind {
    pub const ALL: [FilterKind; 6] =
        [FilterKind::Ls, FilterKind::Brf, FilterKind::Prf, FilterKind::Ekf, FilterKind::EkfOr, FilterKind::EkfDh];

    pub fn name(self) -> &'static str {
        match self {
            FilterKind::Ls => "ls",
            FilterKind::Brf => "brf",
            FilterKind::Prf => "prf",
            FilterKind::Ekf => "ekf",
            FilterKind::EkfOr => "ekf_or",
            FilterKind::EkfDh => "ekf_dh",
        }
    }

    pub fn fit_mode(self) -> Option<FitMode> {
        match self {
            FilterKind::Ls => Some(FitMode::LeastSquares),
            FilterKind::Brf => Some(FitMode::Basic),
            FilterKind::Prf => Some(FitMode::Prior),
            _ => None,
        }
    }

    pub fn ekf_variant(self) -> Option<EkfVariant> {
        match self {
            FilterKind::Ekf => Some(EkfVariant::Plain),
            FilterKind::EkfOr => Some(EkfVariant::OutlierRejecting),
            FilterKind::EkfDh => Some(EkfVariant::DelayHandling),
            _ => None,
        }
    }
}

impl fmt::Display for FilterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FilterKind {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FilterKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| ConfigError::Unknown { what: "filter", value: s.to_owned() })
    }
}

/// Named gate layouts, or an explicit map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapSpec {
    Preset { preset: TrackPreset },
    Explicit(GateMap),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrackPreset {
    /// Four-gate square with varied heights.
    Square,
    /// The square with the real gates displaced from the map.
    Displaced,
}

impl Default for MapSpec {
    fn default() -> Self {
        MapSpec::Preset { preset: TrackPreset::Square }
    }
}

impl MapSpec {
    pub fn resolve(&self) -> GateMap {
        match self {
            MapSpec::Preset { preset: TrackPreset::Square } => GateMap::simulated_track(),
            MapSpec::Preset { preset: TrackPreset::Displaced } => GateMap::displaced_track(),
            MapSpec::Explicit(map) => map.clone(),
        }
    }
}

/// Initial hover pose. Without one the drone starts at the origin, at the
/// first gate's height, facing the first waypoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StartPose {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub psi: f64,
}

/// One closed-loop experiment. Every field has a default, so a scenario
/// file only lists what it changes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScenarioConfig {
    pub name: String,
    pub filter: FilterKind,
    pub seed: u64,
    /// Laps after which the run stops.
    pub laps: u32,
    /// Hard stop, s.
    pub duration_max: f64,
    pub sim: SimParams,
    pub sensors: SensorParams,
    pub schedule: DetectionSchedule,
    pub visibility: VisibilityModel,
    pub map: MapSpec,
    pub nav: NavConfig,
    pub vml: VmlConfig,
    pub ekf: EkfConfig,
    pub start: Option<StartPose>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            name: "baseline".into(),
            filter: FilterKind::Prf,
            seed: 1,
            laps: 2,
            duration_max: 60.0,
            sim: SimParams::default(),
            sensors: SensorParams::default(),
            schedule: DetectionSchedule::default(),
            visibility: VisibilityModel::default(),
            map: MapSpec::default(),
            nav: NavConfig::default(),
            vml: VmlConfig::default(),
            ekf: EkfConfig::default(),
            start: None,
        }
    }
}

impl ScenarioConfig {
    pub fn from_toml_str(s: &str) -> Result<Self, ConfigError> {
        let cfg: Self = toml::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn with_filter(&self, filter: FilterKind) -> Self {
        Self { filter, ..self.clone() }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.duration_max > 0.0 && self.duration_max.is_finite()) {
            return Err(ConfigError::invalid("duration_max", "must be > 0"));
        }
        if self.laps < 1 {
            return Err(ConfigError::invalid("laps", "must be >= 1"));
        }
        self.sim.validate()?;
        self.sensors.validate()?;
        self.map.resolve().validate()?;
        self.nav.validate()?;
        self.vml.validate()?;
        self.ekf.validate()?;
        for b in &self.schedule.bursts {
            if !(0.0..=1.0).contains(&b.p_outlier) {
                return Err(ConfigError::invalid("schedule.bursts.p_outlier", "must lie in [0, 1]"));
            }
        }
        Ok(())
    }
}

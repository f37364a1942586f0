//! JSON scenario configuration.
//!
//! Every key is optional; missing values come from the named preset. Unknown
//! keys are rejected. A fully resolved configuration is written next to the
//! outputs of every run so the run can be repeated from it.

use std::path::Path;

use lora_planner_core::phy::{ChannelModel, PRESET_EU868_SUBURBAN};
use lora_planner_core::units::noise_power;
use lora_planner_core::{
    Error, NetworkInputs, PowerPolicy, RadioLimits, Rounding, SpreadingFactorProfile, TrafficProfile,
    RING_COUNT,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const DEFAULT_RADIUS_M: f64 = 1200.0;
pub const DEFAULT_TOTAL_TARGET: f64 = 0.01;
pub const DEFAULT_TRIALS: u64 = 200_000;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_CURVE_POINTS: usize = 500;
pub const SEED_ENV: &str = "LORA_PLANNER_SEED";

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub carrier_frequency_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path_loss_exponent: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise_figure_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bandwidth_hz: Option<f64>,
    /// When absent and NF or bandwidth is given, derived as -174 + NF + 10 log10(B).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise_power_dbm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sir_threshold_db: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrafficConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message_period_s: Option<f64>,
    /// Explicit per-ring activity; otherwise time on air / period.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duty_cycles: Option<[f64; RING_COUNT]>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadioConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_power_dbm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_power_dbm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step_db: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetsConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GeometryMode {
    /// Fix the coverage radius; the disconnection target follows from it.
    RadiusFirst { radius_m: f64 },
    /// Fix the disconnection target; the ring edges follow from it.
    GeometryFirst { t_h0: f64 },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub channel: ChannelConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profiles: Option<[SpreadingFactorProfile; RING_COUNT]>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub traffic: TrafficConfig,
    #[serde(default, skip_serializing_if = "is_default")]
    pub radio: RadioConfig,
    #[serde(default, skip_serializing_if = "is_default")]
    pub targets: TargetsConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometryMode>,
    /// `allocated`, `allocated-discrete`, `fixed-max` or `fixed:<dBm>`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub policy: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rounding: Option<Rounding>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve_points: Option<usize>,
}

fn is_default<T: Default + PartialEq>(v: &T) -> bool {
    *v == T::default()
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input("config", format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::input("config", e.to_string()))
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub preset: Option<String>,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub radius_m: Option<f64>,
    pub t_c0: Option<f64>,
    pub t_h0: Option<f64>,
    pub policy: Option<String>,
    pub rounding: Option<Rounding>,
    pub curve_points: Option<usize>,
}

/// A configuration with every value decided.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub preset: String,
    pub inputs: NetworkInputs,
    pub total_target: f64,
    pub geometry: GeometryMode,
    pub policy: PowerPolicy,
    pub rounding: Rounding,
    pub trials: u64,
    pub seed: u64,
    pub curve_points: usize,
}

impl Resolved {
    /// Merges preset, file and flags. The seed is taken from the flag, then
    /// the file, then the environment.
    pub fn build(file: &ScenarioConfig, ov: &Overrides, env_seed: Option<&str>) -> Result<Self, CliError> {
        let preset = ov
            .preset
            .clone()
            .or_else(|| file.preset.clone())
            .unwrap_or_else(|| PRESET_EU868_SUBURBAN.to_string());
        let base = NetworkInputs::preset(&preset)?;

        let c = &file.channel;
        let noise_figure_db = c.noise_figure_db.unwrap_or(base.channel.noise_figure_db);
        let bandwidth_hz = c.bandwidth_hz.unwrap_or(base.channel.bandwidth_hz);
        let noise_power_dbm = match c.noise_power_dbm {
            Some(n) => n,
            None if c.noise_figure_db.is_some() || c.bandwidth_hz.is_some() => {
                noise_power(noise_figure_db, bandwidth_hz)?
            }
            None => base.channel.noise_power_dbm,
        };
        let channel = ChannelModel {
            carrier_frequency_hz: c.carrier_frequency_hz.unwrap_or(base.channel.carrier_frequency_hz),
            path_loss_exponent: c.path_loss_exponent.unwrap_or(base.channel.path_loss_exponent),
            noise_figure_db,
            bandwidth_hz,
            noise_power_dbm,
            sir_threshold_db: c.sir_threshold_db.unwrap_or(base.channel.sir_threshold_db),
        };

        let profiles = file.profiles.unwrap_or(base.profiles);
        let period = file.traffic.message_period_s.unwrap_or(base.traffic.message_period_s);
        let traffic = match file.traffic.duty_cycles {
            Some(duty_cycles) => TrafficProfile { message_period_s: period, duty_cycles },
            None => TrafficProfile::from_time_on_air(&profiles, period)?,
        };
        let r = &file.radio;
        let limits = RadioLimits {
            min_power_dbm: r.min_power_dbm.unwrap_or(base.limits.min_power_dbm),
            max_power_dbm: r.max_power_dbm.unwrap_or(base.limits.max_power_dbm),
            step_db: r.step_db.unwrap_or(base.limits.step_db),
        };
        let inputs = NetworkInputs { channel, profiles, traffic, limits };
        inputs.validate()?;

        let total_target = ov.t_c0.or(file.targets.total).unwrap_or(DEFAULT_TOTAL_TARGET);
        let geometry = match (ov.radius_m, ov.t_h0) {
            (Some(_), Some(_)) => {
                return Err(CliError::input("invalid-input", "--radius and --t-h0 are mutually exclusive"))
            }
            (Some(radius_m), None) => GeometryMode::RadiusFirst { radius_m },
            (None, Some(t_h0)) => GeometryMode::GeometryFirst { t_h0 },
            (None, None) => file
                .geometry
                .unwrap_or(GeometryMode::RadiusFirst { radius_m: DEFAULT_RADIUS_M }),
        };
        let policy_str = ov
            .policy
            .clone()
            .or_else(|| file.policy.clone())
            .unwrap_or_else(|| "allocated".to_string());
        let policy = PowerPolicy::parse_with_limits(&policy_str, &limits)?;

        let env_seed = match env_seed {
            Some(s) => Some(s.trim().parse::<u64>().map_err(|_| {
                CliError::input("invalid-input", format!("{SEED_ENV} is not a u64: '{s}'"))
            })?),
            None => None,
        };
        let curve_points = ov.curve_points.or(file.curve_points).unwrap_or(DEFAULT_CURVE_POINTS);
        if curve_points == 0 {
            return Err(CliError::input("invalid-input", "curve point count must be positive"));
        }
        Ok(Resolved {
            preset,
            inputs,
            total_target,
            geometry,
            policy,
            rounding: ov.rounding.or(file.rounding).unwrap_or_default(),
            trials: ov.trials.or(file.trials).unwrap_or(DEFAULT_TRIALS),
            seed: ov.seed.or(file.seed).or(env_seed).unwrap_or(DEFAULT_SEED),
            curve_points,
        })
    }

    /// The configuration file that reproduces this run exactly.
    pub fn to_config(&self) -> ScenarioConfig {
        let ch = &self.inputs.channel;
        ScenarioConfig {
            preset: Some(self.preset.clone()),
            channel: ChannelConfig {
                carrier_frequency_hz: Some(ch.carrier_frequency_hz),
                path_loss_exponent: Some(ch.path_loss_exponent),
                noise_figure_db: Some(ch.noise_figure_db),
                bandwidth_hz: Some(ch.bandwidth_hz),
                noise_power_dbm: Some(ch.noise_power_dbm),
                sir_threshold_db: Some(ch.sir_threshold_db),
            },
            profiles: Some(self.inputs.profiles),
            traffic: TrafficConfig {
                message_period_s: Some(self.inputs.traffic.message_period_s),
                duty_cycles: Some(self.inputs.traffic.duty_cycles),
            },
            radio: RadioConfig {
                min_power_dbm: Some(self.inputs.limits.min_power_dbm),
                max_power_dbm: Some(self.inputs.limits.max_power_dbm),
                step_db: Some(self.inputs.limits.step_db),
            },
            targets: TargetsConfig { total: Some(self.total_target) },
            geometry: Some(self.geometry),
            policy: Some(self.policy.to_string()),
            rounding: Some(self.rounding),
            trials: Some(self.trials),
            seed: Some(self.seed),
            curve_points: Some(self.curve_points),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::input(e.kind(), e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_the_preset() {
        let r = Resolved::build(&ScenarioConfig::default(), &Overrides::default(), None).unwrap();
        assert_eq!(r.inputs, NetworkInputs::eu868_suburban());
        assert_eq!(r.geometry, GeometryMode::RadiusFirst { radius_m: 1200.0 });
        assert_eq!(r.policy, PowerPolicy::AllocatedContinuous);
        assert_eq!(r.rounding, Rounding::Floor);
        assert_eq!(r.seed, DEFAULT_SEED);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(ScenarioConfig::from_json(r#"{"radius": 1000}"#).is_err());
        assert!(ScenarioConfig::from_json(r#"{"channel": {"eta": 3}}"#).is_err());
        assert!(ScenarioConfig::from_json(r#"{"geometry": {"mode": "radius-first", "radius_m": 900}}"#).is_ok());
    }

    #[test]
    fn seed_precedence() {
        let file = ScenarioConfig { seed: Some(5), ..Default::default() };
        let flag = Overrides { seed: Some(9), ..Default::default() };
        assert_eq!(Resolved::build(&file, &flag, Some("7")).unwrap().seed, 9);
        assert_eq!(Resolved::build(&file, &Overrides::default(), Some("7")).unwrap().seed, 5);
        let bare = ScenarioConfig::default();
        assert_eq!(Resolved::build(&bare, &Overrides::default(), Some("7")).unwrap().seed, 7);
        assert!(Resolved::build(&bare, &Overrides::default(), Some("x")).is_err());
    }

    #[test]
    fn noise_is_derived_when_receiver_changes() {
        let file = ScenarioConfig::from_json(r#"{"channel": {"bandwidth_hz": 250000}}"#).unwrap();
        let r = Resolved::build(&file, &Overrides::default(), None).unwrap();
        assert!((r.inputs.channel.noise_power_dbm - -114.02).abs() < 0.01);
    }

    #[test]
    fn resolved_config_round_trips() {
        let file = ScenarioConfig::from_json(
            r#"{"channel": {"path_loss_exponent": 3.1}, "policy": "fixed-max", "rounding": "ceil"}"#,
        )
        .unwrap();
        let r = Resolved::build(&file, &Overrides::default(), None).unwrap();
        let text = serde_json::to_string_pretty(&r.to_config()).unwrap();
        let again = Resolved::build(&ScenarioConfig::from_json(&text).unwrap(), &Overrides::default(), None).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn conflicting_geometry_flags() {
        let ov = Overrides { radius_m: Some(1000.0), t_h0: Some(0.005), ..Default::default() };
        assert!(Resolved::build(&ScenarioConfig::default(), &ov, None).is_err());
    }
}

//! PHY parameter tables and the radio channel model.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_positive, invalid, Result};
use crate::units::{duty_cycle, noise_power};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Number of SF rings (SF7 through SF12).
pub const RING_COUNT: usize = 6;

/// Name of the built-in parameter preset.
pub const PRESET_EU868_SUBURBAN: &str = "eu868-suburban";

/// Uplink characteristics of one spreading factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpreadingFactorProfile {
    /// 1-based ring index; ring 1 uses SF7.
    pub ring: usize,
    pub sf: u8,
    pub time_on_air_s: f64,
    pub snr_threshold_db: f64,
    pub sensitivity_dbm: f64,
    /// Informational only.
    pub bitrate_kbps: f64,
}

impl SpreadingFactorProfile {
    /// SNR threshold as a linear power ratio.
    pub fn snr_threshold(&self) -> f64 {
        10f64.powf(self.snr_threshold_db / 10.0)
    }
}

const EU868_TABLE: [(f64, f64, f64, f64); RING_COUNT] = [
    // ToA (s), bitrate (kbps), sensitivity (dBm), SNR threshold (dB)
    (0.051_46, 5.46, -123.0, -6.0),
    (0.102_91, 3.12, -126.0, -9.0),
    (0.185_34, 1.75, -129.0, -12.0),
    (0.329_73, 0.97, -132.0, -15.0),
    (0.741_38, 0.53, -134.5, -17.5),
    (1.318_91, 0.29, -137.0, -20.0),
];

/// SF7..SF12 uplink figures for 19-byte packets on a 125 kHz channel.
pub fn eu868_profiles() -> [SpreadingFactorProfile; RING_COUNT] {
    std::array::from_fn(|i| {
        let (toa, rb, sens, snr) = EU868_TABLE[i];
        SpreadingFactorProfile {
            ring: i + 1,
            sf: (i + 7) as u8,
            time_on_air_s: toa,
            snr_threshold_db: snr,
            sensitivity_dbm: sens,
            bitrate_kbps: rb,
        }
    })
}

/// Checks the per-row and cross-row invariants of a profile table.
pub fn validate_profiles(profiles: &[SpreadingFactorProfile; RING_COUNT]) -> Result<()> {
    for (i, p) in profiles.iter().enumerate() {
        if p.ring != i + 1 {
            return Err(invalid(format!("profile {i} has ring index {}", p.ring)));
        }
        if usize::from(p.sf) != p.ring + 6 {
            return Err(invalid(format!("ring {} must use SF{}, got SF{}", p.ring, p.ring + 6, p.sf)));
        }
        ensure_positive("time on air", p.time_on_air_s)?;
        ensure_finite("SNR threshold", p.snr_threshold_db)?;
        ensure_finite("sensitivity", p.sensitivity_dbm)?;
    }
    for w in profiles.windows(2) {
        if w[1].time_on_air_s <= w[0].time_on_air_s {
            return Err(invalid("time on air must strictly increase with ring index"));
        }
        if w[1].snr_threshold_db >= w[0].snr_threshold_db {
            return Err(invalid("SNR threshold must strictly decrease with ring index"));
        }
    }
    Ok(())
}

/// Largest deviation (dB) between a row's sensitivity and `noise + SNR threshold`.
pub fn sensitivity_mismatch_db(profiles: &[SpreadingFactorProfile], noise_power_dbm: f64) -> f64 {
    profiles
        .iter()
        .map(|p| (p.sensitivity_dbm - (noise_power_dbm + p.snr_threshold_db)).abs())
        .fold(0.0, f64::max)
}

/// Large-scale propagation and receiver parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelModel {
    pub carrier_frequency_hz: f64,
    pub path_loss_exponent: f64,
    pub noise_figure_db: f64,
    pub bandwidth_hz: f64,
    pub noise_power_dbm: f64,
    /// Capture (SIR) threshold.
    pub sir_threshold_db: f64,
}

impl ChannelModel {
    /// Builds a channel whose noise power is derived from NF and bandwidth.
    pub fn with_derived_noise(
        carrier_frequency_hz: f64,
        path_loss_exponent: f64,
        noise_figure_db: f64,
        bandwidth_hz: f64,
        sir_threshold_db: f64,
    ) -> Result<Self> {
        let ch = ChannelModel {
            carrier_frequency_hz,
            path_loss_exponent,
            noise_figure_db,
            bandwidth_hz,
            noise_power_dbm: noise_power(noise_figure_db, bandwidth_hz)?,
            sir_threshold_db,
        };
        ch.validate()?;
        Ok(ch)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("carrier frequency", self.carrier_frequency_hz)?;
        ensure_positive("bandwidth", self.bandwidth_hz)?;
        ensure_finite("noise figure", self.noise_figure_db)?;
        ensure_finite("noise power", self.noise_power_dbm)?;
        ensure_finite("SIR threshold", self.sir_threshold_db)?;
        if !(self.path_loss_exponent.is_finite() && self.path_loss_exponent > 2.0) {
            return Err(invalid(format!(
                "path loss exponent must exceed 2, got {}",
                self.path_loss_exponent
            )));
        }
        Ok(())
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_frequency_hz
    }

    pub fn noise_w(&self) -> f64 {
        10f64.powf((self.noise_power_dbm - 30.0) / 10.0)
    }

    /// Capture threshold as a linear ratio.
    pub fn sir_threshold(&self) -> f64 {
        10f64.powf(self.sir_threshold_db / 10.0)
    }

    /// Power gain `(λ / 4πd)^η` at distance `d_m`.
    pub fn path_loss_gain(&self, d_m: f64) -> Result<f64> {
        path_loss_gain(d_m, self)
    }
}

pub fn path_loss_gain(d_m: f64, channel: &ChannelModel) -> Result<f64> {
    ensure_positive("distance", d_m)?;
    Ok(gain_unchecked(d_m, channel.wavelength(), channel.path_loss_exponent))
}

#[inline]
pub(crate) fn gain_unchecked(d_m: f64, wavelength: f64, eta: f64) -> f64 {
    (wavelength / (4.0 * std::f64::consts::PI * d_m)).powf(eta)
}

/// Application traffic: one packet per period, activity probability per ring.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrafficProfile {
    pub message_period_s: f64,
    pub duty_cycles: [f64; RING_COUNT],
}

impl TrafficProfile {
    pub fn from_time_on_air(
        profiles: &[SpreadingFactorProfile; RING_COUNT],
        message_period_s: f64,
    ) -> Result<Self> {
        let mut duty_cycles = [0.0; RING_COUNT];
        for (p, out) in profiles.iter().zip(duty_cycles.iter_mut()) {
            *out = duty_cycle(p.time_on_air_s, message_period_s)?;
        }
        let t = TrafficProfile { message_period_s, duty_cycles };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("message period", self.message_period_s)?;
        for &p in &self.duty_cycles {
            if !(p > 0.0 && p <= 1.0) {
                return Err(invalid(format!("duty cycle must lie in (0, 1], got {p}")));
            }
        }
        if self.duty_cycles.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("duty cycles must strictly increase with ring index"));
        }
        Ok(())
    }
}

/// Transmit power range of the radio and its programmable step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadioLimits {
    pub min_power_dbm: f64,
    pub max_power_dbm: f64,
    pub step_db: f64,
}

impl RadioLimits {
    pub fn new(min_power_dbm: f64, max_power_dbm: f64, step_db: f64) -> Result<Self> {
        let l = RadioLimits { min_power_dbm, max_power_dbm, step_db };
        l.validate()?;
        Ok(l)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("min power", self.min_power_dbm)?;
        ensure_finite("max power", self.max_power_dbm)?;
        ensure_positive("power step", self.step_db)?;
        if self.min_power_dbm > self.max_power_dbm {
            return Err(invalid("min power exceeds max power"));
        }
        let steps = (self.max_power_dbm - self.min_power_dbm) / self.step_db;
        if (steps - steps.round()).abs() > 1e-9 {
            return Err(invalid("power range is not a whole number of steps"));
        }
        Ok(())
    }

    pub fn level_count(&self) -> usize {
        ((self.max_power_dbm - self.min_power_dbm) / self.step_db).round() as usize + 1
    }

    /// All programmable levels in dBm, ascending.
    pub fn levels(&self) -> Vec<f64> {
        (0..self.level_count())
            .map(|k| self.min_power_dbm + k as f64 * self.step_db)
            .collect()
    }

    pub fn max_power_w(&self) -> f64 {
        10f64.powf((self.max_power_dbm - 30.0) / 10.0)
    }
}

/// Everything about the radio network that does not depend on the plan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkInputs {
    pub channel: ChannelModel,
    pub profiles: [SpreadingFactorProfile; RING_COUNT],
    pub traffic: TrafficProfile,
    pub limits: RadioLimits,
}

impl NetworkInputs {
    /// EU868 single-cell suburban deployment: 868 MHz, 125 kHz, NF 6 dB,
    /// -117 dBm noise, 15 min reporting, -1..14 dBm in 1 dB steps, 6 dB capture,
    /// path loss exponent 2.75.
    pub fn eu868_suburban() -> Self {
        let profiles = eu868_profiles();
        let channel = ChannelModel {
            carrier_frequency_hz: 868e6,
            path_loss_exponent: 2.75,
            noise_figure_db: 6.0,
            bandwidth_hz: 125e3,
            noise_power_dbm: -117.0,
            sir_threshold_db: 6.0,
        };
        let traffic = TrafficProfile::from_time_on_air(&profiles, 900.0)
            .expect("preset traffic is valid");
        NetworkInputs {
            channel,
            profiles,
            traffic,
            limits: RadioLimits { min_power_dbm: -1.0, max_power_dbm: 14.0, step_db: 1.0 },
        }
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            PRESET_EU868_SUBURBAN => Ok(Self::eu868_suburban()),
            other => Err(invalid(format!("unknown preset '{other}'"))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.channel.validate()?;
        validate_profiles(&self.profiles)?;
        self.traffic.validate()?;
        self.limits.validate()
    }

    pub fn profile(&self, ring: usize) -> Result<&SpreadingFactorProfile> {
        ring.checked_sub(1)
            .and_then(|i| self.profiles.get(i))
            .ok_or_else(|| invalid(format!("ring index {ring} outside 1..={RING_COUNT}")))
    }
}

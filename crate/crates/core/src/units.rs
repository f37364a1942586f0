//! Decibel conversions and the two link-budget helpers built on them.
//!
//! Everything downstream works in linear units (watts, power ratios); these
//! functions are the only place where dB quantities are converted.

use crate::error::{ensure_finite, ensure_positive, invalid, Result};

/// Thermal noise density at room temperature, dBm/Hz.
pub const THERMAL_NOISE_DBM_PER_HZ: f64 = -174.0;

pub fn dbm_to_watt(p_dbm: f64) -> Result<f64> {
    ensure_finite("power (dBm)", p_dbm)?;
    Ok(10f64.powf((p_dbm - 30.0) / 10.0))
}

pub fn watt_to_dbm(p_w: f64) -> Result<f64> {
    ensure_positive("power (W)", p_w)?;
    Ok(10.0 * p_w.log10() + 30.0)
}

pub fn db_to_linear(x_db: f64) -> Result<f64> {
    ensure_finite("ratio (dB)", x_db)?;
    Ok(10f64.powf(x_db / 10.0))
}

pub fn linear_to_db(x: f64) -> Result<f64> {
    ensure_positive("ratio", x)?;
    Ok(10.0 * x.log10())
}

/// Receiver noise power in dBm for a noise figure (dB) and bandwidth (Hz).
pub fn noise_power(noise_figure_db: f64, bandwidth_hz: f64) -> Result<f64> {
    ensure_finite("noise figure", noise_figure_db)?;
    ensure_positive("bandwidth", bandwidth_hz)?;
    Ok(THERMAL_NOISE_DBM_PER_HZ + noise_figure_db + 10.0 * bandwidth_hz.log10())
}

/// Per-period activity probability of a node whose packets last `toa_s`
/// and which transmits once every `period_s`.
pub fn duty_cycle(toa_s: f64, period_s: f64) -> Result<f64> {
    ensure_positive("time on air", toa_s)?;
    ensure_positive("message period", period_s)?;
    if toa_s > period_s {
        return Err(invalid(format!(
            "time on air {toa_s} s exceeds message period {period_s} s"
        )));
    }
    Ok(toa_s / period_s)
}

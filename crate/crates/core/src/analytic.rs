//! Closed-form outage, power allocation and load equations for a cell whose
//! nodes run steady-state ADR (truncated channel inversion within SF rings).
//!
//! Probabilities near zero are evaluated with `expm1`/`ln_1p` so that
//! compositions such as `1 - (1 - a)(1 - b)` keep full precision at the
//! 1e-2 scale the planner works at.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, ensure_probability, invalid, Error, Result};
use crate::phy::{gain_unchecked, ChannelModel, RadioLimits, SpreadingFactorProfile, RING_COUNT};

/// Reliability targets: total outage and its disconnection share.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutageTargets {
    pub total: f64,
    pub disconnection: f64,
}

impl OutageTargets {
    pub fn new(total: f64, disconnection: f64) -> Result<Self> {
        let t = OutageTargets { total, disconnection };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.total > 0.0 && self.total < 1.0) {
            return Err(invalid(format!("total outage target must lie in (0, 1), got {}", self.total)));
        }
        if !(self.disconnection > 0.0 && self.disconnection < 1.0) {
            return Err(invalid(format!(
                "disconnection target must lie in (0, 1), got {}",
                self.disconnection
            )));
        }
        if self.disconnection > self.total {
            return Err(Error::InfeasibleTargets(format!(
                "disconnection target {} exceeds total target {}",
                self.disconnection, self.total
            )));
        }
        Ok(())
    }
}

/// SF ring edges `l_0 = 0 < l_1 < ... < l_6 = R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellGeometry {
    pub edges: [f64; RING_COUNT + 1],
}

impl CellGeometry {
    pub fn new(edges: [f64; RING_COUNT + 1]) -> Result<Self> {
        let g = CellGeometry { edges };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.edges[0] != 0.0 {
            return Err(invalid("innermost ring edge must be 0"));
        }
        if self.edges.iter().any(|e| !e.is_finite()) {
            return Err(invalid("ring edges must be finite"));
        }
        if self.edges.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("ring edges must be strictly increasing"));
        }
        Ok(())
    }

    pub fn radius(&self) -> f64 {
        self.edges[RING_COUNT]
    }

    /// Inner and outer edge of ring `ring` (1-based).
    pub fn bounds(&self, ring: usize) -> Result<(f64, f64)> {
        if !(1..=RING_COUNT).contains(&ring) {
            return Err(invalid(format!("ring index {ring} outside 1..={RING_COUNT}")));
        }
        Ok((self.edges[ring - 1], self.edges[ring]))
    }

    pub fn ring_area(&self, ring: usize) -> Result<f64> {
        let (a, b) = self.bounds(ring)?;
        Ok(PI * (b * b - a * a))
    }

    pub fn area(&self) -> f64 {
        PI * self.radius() * self.radius()
    }
}

/// Per-ring node population and its active-interferer load.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingLoad {
    pub ring: usize,
    /// Mean number of simultaneously active interferers.
    pub beta: f64,
    /// Mean number of nodes in the ring.
    pub node_count: f64,
    /// Nodes per square metre.
    pub density: f64,
    /// Active nodes per square metre.
    pub intensity: f64,
}

impl RingLoad {
    /// Load of ring `ring` carrying `beta` active interferers on average.
    pub fn from_beta(ring: usize, beta: f64, duty_cycle: f64, geometry: &CellGeometry) -> Result<Self> {
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(invalid(format!("load must be non-negative, got {beta}")));
        }
        ensure_positive("duty cycle", duty_cycle)?;
        let area = geometry.ring_area(ring)?;
        let node_count = beta / duty_cycle;
        let density = node_count / area;
        Ok(RingLoad { ring, beta, node_count, density, intensity: duty_cycle * density })
    }
}

/// Probability that a packet sent with `power_w` from `d_m` falls below the
/// ring's SNR threshold under Rayleigh fading.
pub fn disconnection_probability(
    d_m: f64,
    power_w: f64,
    ring: &SpreadingFactorProfile,
    channel: &ChannelModel,
) -> Result<f64> {
    ensure_positive("distance", d_m)?;
    ensure_positive("transmit power", power_w)?;
    let g = gain_unchecked(d_m, channel.wavelength(), channel.path_loss_exponent);
    let x = ring.snr_threshold() * channel.noise_w() / (power_w * g);
    Ok(-(-x).exp_m1())
}

/// Outer edge of a ring: the distance at which maximum power yields exactly
/// the disconnection target.
pub fn ring_edge(
    ring: &SpreadingFactorProfile,
    targets: &OutageTargets,
    limits: &RadioLimits,
    channel: &ChannelModel,
) -> Result<f64> {
    let t = targets.disconnection;
    if !(t > 0.0 && t < 1.0) {
        return Err(invalid(format!("disconnection target must lie in (0, 1), got {t}")));
    }
    let neg_log = -(-t).ln_1p();
    let arg = limits.max_power_w() * neg_log / (channel.noise_w() * ring.snr_threshold());
    Ok(channel.wavelength() / (4.0 * PI) * arg.powf(1.0 / channel.path_loss_exponent))
}

/// Least transmit power (W) keeping a node at `d_m` at the disconnection target.
pub fn min_transmit_power(
    d_m: f64,
    ring: &SpreadingFactorProfile,
    targets: &OutageTargets,
    channel: &ChannelModel,
) -> Result<f64> {
    ensure_positive("distance", d_m)?;
    let t = targets.disconnection;
    if !(t > 0.0 && t < 1.0) {
        return Err(invalid(format!("disconnection target must lie in (0, 1), got {t}")));
    }
    let g = gain_unchecked(d_m, channel.wavelength(), channel.path_loss_exponent);
    Ok(-channel.noise_w() * ring.snr_threshold() / ((-t).ln_1p() * g))
}

/// Area average of [`min_transmit_power`] over a uniformly populated cell, in W.
pub fn average_power(
    geometry: &CellGeometry,
    targets: &OutageTargets,
    profiles: &[SpreadingFactorProfile; RING_COUNT],
    channel: &ChannelModel,
) -> Result<f64> {
    geometry.validate()?;
    let t = targets.disconnection;
    if !(t > 0.0 && t < 1.0) {
        return Err(invalid(format!("disconnection target must lie in (0, 1), got {t}")));
    }
    let eta = channel.path_loss_exponent;
    let e = eta + 2.0;
    let sum: f64 = profiles
        .iter()
        .zip(geometry.edges.windows(2))
        .map(|(p, w)| p.snr_threshold() / e * (w[1].powf(e) - w[0].powf(e)))
        .sum();
    let prefactor = -(2.0 * PI * channel.noise_w()) / (geometry.area() * (-t).ln_1p())
        * (4.0 * PI / channel.wavelength()).powf(eta);
    Ok(prefactor * sum)
}

/// Collision probability of a power-controlled ring with mean load `beta`.
///
/// Under channel inversion every received power is equal, so the result
/// depends on the load and the capture threshold only.
pub fn collision_probability(beta: f64, channel: &ChannelModel) -> Result<f64> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(invalid(format!("load must be non-negative, got {beta}")));
    }
    let delta = channel.sir_threshold();
    Ok(-(-(delta / (delta + 1.0)) * beta).exp_m1())
}

/// Combined outage of independent disconnection and collision events.
pub fn total_outage(h0: f64, q0: f64) -> Result<f64> {
    ensure_probability("disconnection probability", h0)?;
    ensure_probability("collision probability", q0)?;
    Ok(h0 + q0 * (1.0 - h0))
}

/// Largest mean load per ring that keeps total outage at the target.
pub fn max_ring_load(targets: &OutageTargets, channel: &ChannelModel) -> Result<f64> {
    let (tc, th) = (targets.total, targets.disconnection);
    if !(tc > 0.0 && tc < 1.0 && th > 0.0) {
        return Err(invalid("outage targets must lie in (0, 1)"));
    }
    if th > tc {
        return Err(Error::InfeasibleTargets(format!(
            "disconnection target {th} leaves no interference budget under total target {tc}"
        )));
    }
    let delta = channel.sir_threshold();
    // ln((1 - tc) / (1 - th)) evaluated without forming the near-one ratio.
    let log_ratio = (-tc).ln_1p() - (-th).ln_1p();
    Ok((-(delta + 1.0) / delta * log_ratio).max(0.0))
}

/// Disconnection budget left once a collision probability `q0` is spent.
pub fn residual_disconnection_target(total_target: f64, q0: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&total_target) {
        return Err(invalid(format!("total target must lie in [0, 1), got {total_target}")));
    }
    ensure_probability("collision probability", q0)?;
    if q0 > total_target {
        return Err(Error::InfeasibleTargets(format!(
            "collision probability {q0} exceeds total target {total_target}"
        )));
    }
    Ok((total_target - q0) / (1.0 - q0))
}

/// Ring edges for a disconnection target, all rings at maximum power.
pub fn geometry_for_target(
    targets: &OutageTargets,
    profiles: &[SpreadingFactorProfile; RING_COUNT],
    limits: &RadioLimits,
    channel: &ChannelModel,
) -> Result<CellGeometry> {
    let mut edges = [0.0; RING_COUNT + 1];
    for (p, e) in profiles.iter().zip(edges.iter_mut().skip(1)) {
        *e = ring_edge(p, targets, limits, channel)?;
    }
    CellGeometry::new(edges)
}

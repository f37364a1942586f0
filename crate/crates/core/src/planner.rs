//! Cell planning: ring geometry, per-ring node capacity and the power map.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analytic::{
    average_power, collision_probability, disconnection_probability, geometry_for_target,
    max_ring_load, min_transmit_power, total_outage, CellGeometry, OutageTargets, RingLoad,
};
use crate::error::{ensure_positive, invalid, Error, Result};
use crate::phy::{NetworkInputs, RadioLimits, RING_COUNT};
use crate::units::{dbm_to_watt, watt_to_dbm};

/// Slack (dB) when comparing a required power against grid levels.
const LEVEL_TOLERANCE_DB: f64 = 1e-9;

/// Transmit power regime of the nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum PowerPolicy {
    /// Exact channel inversion inside each ring.
    AllocatedContinuous,
    /// Channel inversion rounded up to the radio's power grid.
    AllocatedDiscrete,
    /// Every node transmits at the same power.
    Fixed { power_dbm: f64 },
}

impl PowerPolicy {
    pub fn validate(&self, limits: &RadioLimits) -> Result<()> {
        if let PowerPolicy::Fixed { power_dbm } = *self {
            if !(limits.min_power_dbm - LEVEL_TOLERANCE_DB..=limits.max_power_dbm + LEVEL_TOLERANCE_DB)
                .contains(&power_dbm)
            {
                return Err(invalid(format!(
                    "fixed power {power_dbm} dBm outside [{}, {}] dBm",
                    limits.min_power_dbm, limits.max_power_dbm
                )));
            }
        }
        Ok(())
    }

    /// Parses `allocated`, `allocated-discrete`, `fixed-max` or `fixed:<dBm>`,
    /// resolving `fixed-max` against the radio limits.
    pub fn parse_with_limits(s: &str, limits: &RadioLimits) -> Result<Self> {
        let policy = match s {
            "fixed-max" => PowerPolicy::Fixed { power_dbm: limits.max_power_dbm },
            other => other.parse()?,
        };
        policy.validate(limits)?;
        Ok(policy)
    }

    pub fn is_allocated(&self) -> bool {
        !matches!(self, PowerPolicy::Fixed { .. })
    }
}

impl fmt::Display for PowerPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PowerPolicy::AllocatedContinuous => f.write_str("allocated"),
            PowerPolicy::AllocatedDiscrete => f.write_str("allocated-discrete"),
            PowerPolicy::Fixed { power_dbm } => write!(f, "fixed:{power_dbm}"),
        }
    }
}

impl FromStr for PowerPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "allocated" => Ok(PowerPolicy::AllocatedContinuous),
            "allocated-discrete" => Ok(PowerPolicy::AllocatedDiscrete),
            _ => {
                let value = s
                    .strip_prefix("fixed:")
                    .ok_or_else(|| invalid(format!("unknown power policy '{s}'")))?;
                let power_dbm: f64 = value
                    .parse()
                    .map_err(|_| invalid(format!("bad fixed power '{value}'")))?;
                if !power_dbm.is_finite() {
                    return Err(invalid(format!("bad fixed power '{value}'")));
                }
                Ok(PowerPolicy::Fixed { power_dbm })
            }
        }
    }
}

impl TryFrom<String> for PowerPolicy {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<PowerPolicy> for String {
    fn from(p: PowerPolicy) -> String {
        p.to_string()
    }
}

/// How fractional node counts become integer capacities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rounding {
    #[default]
    Floor,
    Nearest,
    Ceil,
}

impl Rounding {
    pub fn apply(self, x: f64) -> u64 {
        let r = match self {
            Rounding::Floor => x.floor(),
            Rounding::Nearest => x.round(),
            Rounding::Ceil => x.ceil(),
        };
        r.max(0.0) as u64
    }
}

impl FromStr for Rounding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "floor" => Ok(Rounding::Floor),
            "nearest" => Ok(Rounding::Nearest),
            "ceil" => Ok(Rounding::Ceil),
            other => Err(invalid(format!("unknown rounding '{other}'"))),
        }
    }
}

impl fmt::Display for Rounding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rounding::Floor => "floor",
            Rounding::Nearest => "nearest",
            Rounding::Ceil => "ceil",
        })
    }
}

/// A deployable single-cell plan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellPlan {
    pub inputs: NetworkInputs,
    pub geometry: CellGeometry,
    pub targets: OutageTargets,
    pub ring_loads: [RingLoad; RING_COUNT],
    pub capacities: [u64; RING_COUNT],
    pub total_capacity: u64,
    pub average_power_dbm: f64,
    pub policy: PowerPolicy,
    pub rounding: Rounding,
}

impl CellPlan {
    /// Sum of the per-ring node counts before rounding.
    pub fn unrounded_total(&self) -> f64 {
        self.ring_loads.iter().map(|l| l.node_count).sum()
    }

    pub fn capacities_with(&self, rounding: Rounding) -> [u64; RING_COUNT] {
        std::array::from_fn(|i| rounding.apply(self.ring_loads[i].node_count))
    }

    /// Mean load common to all rings.
    pub fn beta(&self) -> f64 {
        self.ring_loads[0].beta
    }

    /// Fractional reduction of the average power relative to maximum power.
    pub fn power_reduction(&self) -> f64 {
        1.0 - 10f64.powf((self.average_power_dbm - self.inputs.limits.max_power_dbm) / 10.0)
    }

    /// Analytic total outage of ring `ring` when it holds `nodes` nodes.
    pub fn outage_with_nodes(&self, ring: usize, nodes: u64) -> Result<f64> {
        let p = self.inputs.traffic.duty_cycles[ring - 1];
        let q0 = collision_probability(nodes as f64 * p, &self.inputs.channel)?;
        total_outage(self.targets.disconnection, q0)
    }

    pub fn with_policy(mut self, policy: PowerPolicy) -> Result<Self> {
        policy.validate(&self.inputs.limits)?;
        self.policy = policy;
        Ok(self)
    }
}

/// Ring containing distance `d_m`; an edge belongs to its inner ring.
pub fn assign_ring(d_m: f64, geometry: &CellGeometry) -> Result<usize> {
    ensure_positive("distance", d_m)?;
    let radius = geometry.radius();
    if d_m > radius {
        return Err(Error::OutOfCoverage { distance_m: d_m, radius_m: radius });
    }
    Ok(geometry.edges[1..]
        .iter()
        .position(|&edge| d_m <= edge)
        .map(|i| i + 1)
        .unwrap_or(RING_COUNT))
}

/// Lowest programmable level (dBm) not below the required power `p_w`.
pub fn quantize_power(p_w: f64, limits: &RadioLimits) -> Result<f64> {
    let required = watt_to_dbm(p_w)?;
    if required > limits.max_power_dbm + LEVEL_TOLERANCE_DB {
        return Err(Error::InfeasiblePower { required_dbm: required, max_dbm: limits.max_power_dbm });
    }
    let steps = ((required - limits.min_power_dbm) / limits.step_db - LEVEL_TOLERANCE_DB).ceil();
    let steps = steps.clamp(0.0, (limits.level_count() - 1) as f64);
    Ok(limits.min_power_dbm + steps * limits.step_db)
}

fn build_plan(
    geometry: CellGeometry,
    targets: OutageTargets,
    inputs: &NetworkInputs,
    rounding: Rounding,
) -> Result<CellPlan> {
    let beta = max_ring_load(&targets, &inputs.channel)?;
    let mut loads = Vec::with_capacity(RING_COUNT);
    for ring in 1..=RING_COUNT {
        loads.push(RingLoad::from_beta(ring, beta, inputs.traffic.duty_cycles[ring - 1], &geometry)?);
    }
    let ring_loads: [RingLoad; RING_COUNT] = loads.try_into().expect("one load per ring");
    let capacities = std::array::from_fn(|i| rounding.apply(ring_loads[i].node_count));
    let avg_w = average_power(&geometry, &targets, &inputs.profiles, &inputs.channel)?;
    Ok(CellPlan {
        inputs: *inputs,
        geometry,
        targets,
        ring_loads,
        capacities,
        total_capacity: capacities.iter().sum(),
        average_power_dbm: watt_to_dbm(avg_w)?,
        policy: PowerPolicy::AllocatedContinuous,
        rounding,
    })
}

/// Plans from a disconnection target: edges follow from maximum power, the
/// remaining outage budget becomes interference load.
pub fn plan_geometry_first(
    targets: &OutageTargets,
    inputs: &NetworkInputs,
    rounding: Rounding,
) -> Result<CellPlan> {
    targets.validate()?;
    inputs.validate()?;
    let geometry = geometry_for_target(targets, &inputs.profiles, &inputs.limits, &inputs.channel)?;
    build_plan(geometry, *targets, inputs, rounding)
}

/// Plans for a required coverage radius. The disconnection target is what
/// the outermost (SF12) node achieves at maximum power.
pub fn plan_radius_first(
    radius_m: f64,
    total_target: f64,
    inputs: &NetworkInputs,
    rounding: Rounding,
) -> Result<CellPlan> {
    ensure_positive("radius", radius_m)?;
    inputs.validate()?;
    if !(total_target > 0.0 && total_target < 1.0) {
        return Err(invalid(format!("total target must lie in (0, 1), got {total_target}")));
    }
    let outer = &inputs.profiles[RING_COUNT - 1];
    let h0 = disconnection_probability(radius_m, inputs.limits.max_power_w(), outer, &inputs.channel)?;
    if h0 >= total_target {
        return Err(Error::InfeasibleRadius { radius_m, h0, target: total_target });
    }
    let targets = OutageTargets::new(total_target, h0)?;
    let eta = inputs.channel.path_loss_exponent;
    let psi_outer = outer.snr_threshold();
    let mut edges = [0.0; RING_COUNT + 1];
    for (p, e) in inputs.profiles.iter().zip(edges.iter_mut().skip(1)) {
        *e = radius_m * (psi_outer / p.snr_threshold()).powf(1.0 / eta);
    }
    edges[RING_COUNT] = radius_m;
    build_plan(CellGeometry::new(edges)?, targets, inputs, rounding)
}

/// Transmit power (W) a node at `d_m` uses under `policy`.
pub fn power_map_w(plan: &CellPlan, policy: &PowerPolicy, d_m: f64) -> Result<f64> {
    let ring = assign_ring(d_m, &plan.geometry)?;
    power_in_ring_w(plan, policy, ring, d_m)
}

/// Like [`power_map_w`] with the ring already known.
pub fn power_in_ring_w(plan: &CellPlan, policy: &PowerPolicy, ring: usize, d_m: f64) -> Result<f64> {
    let profile = plan.inputs.profile(ring)?;
    match *policy {
        PowerPolicy::AllocatedContinuous => {
            min_transmit_power(d_m, profile, &plan.targets, &plan.inputs.channel)
        }
        PowerPolicy::AllocatedDiscrete => {
            let p = min_transmit_power(d_m, profile, &plan.targets, &plan.inputs.channel)?;
            dbm_to_watt(quantize_power(p, &plan.inputs.limits)?)
        }
        PowerPolicy::Fixed { power_dbm } => dbm_to_watt(power_dbm),
    }
}

/// Transmit power (dBm) a node at `d_m` uses under `policy`.
pub fn power_map(plan: &CellPlan, policy: &PowerPolicy, d_m: f64) -> Result<f64> {
    match *policy {
        PowerPolicy::Fixed { power_dbm } => {
            assign_ring(d_m, &plan.geometry)?;
            Ok(power_dbm)
        }
        PowerPolicy::AllocatedDiscrete => {
            let ring = assign_ring(d_m, &plan.geometry)?;
            let profile = &plan.inputs.profiles[ring - 1];
            let p = min_transmit_power(d_m, profile, &plan.targets, &plan.inputs.channel)?;
            quantize_power(p, &plan.inputs.limits)
        }
        PowerPolicy::AllocatedContinuous => watt_to_dbm(power_map_w(plan, policy, d_m)?),
    }
}

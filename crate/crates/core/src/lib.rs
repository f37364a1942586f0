//! Outage analysis and capacity planning for single-cell LoRaWAN networks
//! whose nodes run adaptive data rate.
//!
//! The cell is split into SF rings (SF7 innermost). Within a ring, ADR
//! behaves like truncated channel inversion: every node uses the least
//! power that meets a disconnection target, and the ring edge is where that
//! power reaches the radio's maximum. [`analytic`] holds the closed forms,
//! [`planner`] turns targets into ring geometry and node capacities, and
//! [`montecarlo`] checks both against a Poisson point process simulation.
//!
//! ```
//! use lora_planner_core::{plan_radius_first, NetworkInputs, Rounding};
//!
//! let inputs = NetworkInputs::eu868_suburban();
//! let plan = plan_radius_first(1200.0, 0.01, &inputs, Rounding::Ceil).unwrap();
//! assert_eq!(plan.total_capacity, 247);
//! ```

pub mod analytic;
pub mod error;
pub mod montecarlo;
pub mod phy;
pub mod planner;
pub mod units;

pub use analytic::{CellGeometry, OutageTargets, RingLoad};
pub use error::{Error, Result};
pub use montecarlo::{find_max_capacity, simulate_outage, CapacityReport, OutageEstimate, Scenario};
pub use phy::{
    ChannelModel, NetworkInputs, RadioLimits, SpreadingFactorProfile, TrafficProfile, RING_COUNT,
};
pub use planner::{
    assign_ring, plan_geometry_first, plan_radius_first, power_map, quantize_power, CellPlan,
    PowerPolicy, Rounding,
};

//! Browser bindings for the planner: a plan summary, the power allocation
//! curve and a single-point Monte Carlo run. Build with
//! `wasm-pack build crates/demo --target web --out-dir www/pkg`.
//!
//! Errors are returned as `{"error": kind, "message": ...}` JSON so that the
//! functions are also callable (and testable) off the web.

use lora_planner_core::analytic::{collision_probability, disconnection_probability, total_outage};
use lora_planner_core::planner::power_map_w;
use lora_planner_core::{
    plan_radius_first, power_map, simulate_outage, CellPlan, Error, NetworkInputs, PowerPolicy,
    Rounding, Scenario, RING_COUNT,
};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn error_json(e: &Error) -> String {
    json!({ "error": e.kind(), "message": e.to_string() }).to_string()
}

fn plan_for(radius_m: f64, t_c0: f64, eta: f64) -> Result<CellPlan, Error> {
    let mut inputs = NetworkInputs::eu868_suburban();
    inputs.channel.path_loss_exponent = eta;
    plan_radius_first(radius_m, t_c0, &inputs, Rounding::Floor)
}

/// Ring edges, loads, capacities and average power of a radius-first plan.
#[wasm_bindgen]
pub fn plan_summary(radius_m: f64, t_c0: f64, eta: f64) -> String {
    let plan = match plan_for(radius_m, t_c0, eta) {
        Ok(p) => p,
        Err(e) => return error_json(&e),
    };
    let ceil = plan.capacities_with(Rounding::Ceil);
    let rings: Vec<_> = (0..RING_COUNT)
        .map(|i| {
            json!({
                "ring": i + 1,
                "sf": plan.inputs.profiles[i].sf,
                "inner_m": plan.geometry.edges[i],
                "outer_m": plan.geometry.edges[i + 1],
                "nodes": plan.ring_loads[i].node_count,
                "capacity_floor": plan.capacities[i],
                "capacity_ceil": ceil[i],
            })
        })
        .collect();
    json!({
        "t_h0": plan.targets.disconnection,
        "beta": plan.beta(),
        "rings": rings,
        "total_floor": plan.total_capacity,
        "total_ceil": ceil.iter().sum::<u64>(),
        "total_unrounded": plan.unrounded_total(),
        "avg_power_dbm": plan.average_power_dbm,
        "power_reduction_pct": 100.0 * plan.power_reduction(),
    })
    .to_string()
}

/// Flattened `[d, continuous dBm, discrete dBm]` triples on `points` grid
/// positions up to the radius; empty when the plan is infeasible.
#[wasm_bindgen]
pub fn power_curve(radius_m: f64, t_c0: f64, eta: f64, points: u32) -> Vec<f64> {
    let Ok(plan) = plan_for(radius_m, t_c0, eta) else {
        return Vec::new();
    };
    let mut out = Vec::with_capacity(3 * points as usize);
    for k in 1..=points {
        let d = plan.geometry.radius() * f64::from(k) / f64::from(points);
        let cont = power_map(&plan, &PowerPolicy::AllocatedContinuous, d);
        let disc = power_map(&plan, &PowerPolicy::AllocatedDiscrete, d);
        if let (Ok(c), Ok(q)) = (cont, disc) {
            out.extend_from_slice(&[d, c, q]);
        }
    }
    out
}

/// Monte Carlo outage at one distance, next to the closed forms where they exist.
#[wasm_bindgen]
pub fn simulate_point(
    radius_m: f64,
    t_c0: f64,
    eta: f64,
    policy: &str,
    distance_m: f64,
    trials: u32,
    seed: u32,
) -> String {
    let run = || -> Result<String, Error> {
        let plan = plan_for(radius_m, t_c0, eta)?;
        let policy = PowerPolicy::parse_with_limits(policy, &plan.inputs.limits)?;
        let scenario = Scenario::new(plan.clone(), policy, distance_m)?;
        let est = simulate_outage(&scenario, u64::from(trials), u64::from(seed))?;
        let ch = &plan.inputs.channel;
        let profile = &plan.inputs.profiles[scenario.probe_ring - 1];
        let h0 = disconnection_probability(distance_m, power_map_w(&plan, &policy, distance_m)?, profile, ch)?;
        let q0 = match policy {
            PowerPolicy::AllocatedContinuous => Some(collision_probability(scenario.beta, ch)?),
            _ => None,
        };
        let c0 = q0.map(|q| total_outage(h0, q)).transpose()?;
        Ok(json!({
            "ring": scenario.probe_ring,
            "beta": scenario.beta,
            "estimate": est,
            "h0": h0,
            "q0": q0,
            "c0": c0,
        })
        .to_string())
    };
    run().unwrap_or_else(|e| error_json(&e))
}

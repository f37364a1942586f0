//! Simulation-based search for the largest per-ring load meeting the outage
//! target at the ring's outer edge.

use std::cell::Cell;

use serde::{Deserialize, Serialize};

use super::{ci_halfwidth, mix_seed, simulate_outage, OutageEstimate, Scenario, Z95};
use crate::analytic::max_ring_load;
use crate::error::{invalid, Error, Result};
use crate::phy::RING_COUNT;
use crate::planner::{CellPlan, PowerPolicy};

/// Bisection stops once the bracket is narrower than this fraction of β.
const RELATIVE_BRACKET: f64 = 0.01;
const MAX_STEPS: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RingCapacity {
    pub ring: usize,
    /// Largest load whose edge outage stays within the target.
    pub beta_star: f64,
    pub capacity: u64,
    /// Outage estimate at the edge probe with `beta_star`.
    pub c0_hat: f64,
    pub ci_halfwidth: f64,
    pub evaluations: usize,
    pub diagnostic: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityReport {
    pub policy: PowerPolicy,
    pub target: f64,
    pub trials: u64,
    pub seed: u64,
    pub rings: Vec<RingCapacity>,
    pub total: u64,
}

impl CapacityReport {
    /// Σ β*/p over the rings, before flooring.
    pub fn unrounded_total(&self, duty_cycles: &[f64; RING_COUNT]) -> f64 {
        self.rings.iter().map(|r| r.beta_star / duty_cycles[r.ring - 1]).sum()
    }
}

/// Fewest trials for which the 95% half-width at the target is below 10% of it.
pub fn min_search_trials(target: f64) -> u64 {
    (Z95 * Z95 * (1.0 - target) / (0.01 * target)).ceil() as u64 + 1
}

/// Per ring, bisects on the load until the simulated total outage at the
/// outer edge equals `target`. Every evaluation within a ring reuses the
/// same seed, so the estimate is monotone in the load.
pub fn find_max_capacity(
    plan: &CellPlan,
    policy: PowerPolicy,
    target: f64,
    trials: u64,
    seed: u64,
) -> Result<CapacityReport> {
    if !(target > 0.0 && target < 1.0) {
        return Err(invalid(format!("outage target must lie in (0, 1), got {target}")));
    }
    let min = min_search_trials(target);
    if trials < min {
        return Err(Error::TrialBudget { trials, min });
    }
    policy.validate(&plan.inputs.limits)?;
    let reference = max_ring_load(&plan.targets, &plan.inputs.channel).unwrap_or(0.0);
    let mut rings = Vec::with_capacity(RING_COUNT);
    for ring in 1..=RING_COUNT {
        rings.push(search_ring(plan, policy, ring, target, reference, trials, mix_seed(seed, ring as u64))?);
    }
    let total = rings.iter().map(|r| r.capacity).sum();
    Ok(CapacityReport { policy, target, trials, seed, rings, total })
}

fn search_ring(
    plan: &CellPlan,
    policy: PowerPolicy,
    ring: usize,
    target: f64,
    reference_beta: f64,
    trials: u64,
    seed: u64,
) -> Result<RingCapacity> {
    let edge = plan.geometry.edges[ring];
    let base = Scenario::new(plan.clone(), policy, edge)?;
    let evaluations = Cell::new(0usize);
    let eval = |beta: f64| -> Result<OutageEstimate> {
        evaluations.set(evaluations.get() + 1);
        simulate_outage(&base.clone().with_beta(beta)?, trials, seed)
    };
    let p = plan.inputs.traffic.duty_cycles[ring - 1];

    let empty = eval(0.0)?;
    if empty.c0_hat > target {
        return Ok(RingCapacity {
            ring,
            beta_star: 0.0,
            capacity: 0,
            c0_hat: empty.c0_hat,
            ci_halfwidth: empty.c0_ci,
            evaluations: evaluations.get(),
            diagnostic: Some(format!(
                "edge outage {:.6} exceeds the target {target} without interference",
                empty.c0_hat
            )),
        });
    }

    let mut lo = (0.0, empty);
    let mut hi = if reference_beta > 0.0 { 2.0 * reference_beta } else { 1e-3 };
    loop {
        let est = eval(hi)?;
        if est.c0_hat > target {
            break;
        }
        lo = (hi, est);
        hi *= 2.0;
        if evaluations.get() > MAX_STEPS {
            return Err(invalid(format!("ring {ring}: no load upper bound found")));
        }
    }
    while hi - lo.0 > RELATIVE_BRACKET * hi && evaluations.get() < MAX_STEPS {
        let mid = 0.5 * (lo.0 + hi);
        let est = eval(mid)?;
        if est.c0_hat <= target {
            lo = (mid, est);
        } else {
            hi = mid;
        }
    }
    let (beta_star, est) = lo;
    Ok(RingCapacity {
        ring,
        beta_star,
        capacity: (beta_star / p).floor() as u64,
        c0_hat: est.c0_hat,
        ci_halfwidth: ci_halfwidth(est.c0_hat, trials),
        evaluations: evaluations.get(),
        diagnostic: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phy::NetworkInputs;
    use crate::planner::{plan_radius_first, Rounding};

    #[test]
    fn trial_floor_for_target() {
        let n = min_search_trials(0.01);
        assert!(ci_halfwidth(0.01, n) < 0.001);
        assert!(ci_halfwidth(0.01, n - 2) >= 0.001 * 0.999);
    }

    #[test]
    fn rejects_thin_budgets() {
        let plan = plan_radius_first(1200.0, 0.01, &NetworkInputs::eu868_suburban(), Rounding::Floor).unwrap();
        let err = find_max_capacity(&plan, PowerPolicy::AllocatedContinuous, 0.01, 20_000, 1).unwrap_err();
        assert_eq!(err.kind(), "trial-budget");
    }

    #[test]
    fn infeasible_edge_gives_zero() {
        // At -1 dBm the outer edges are far beyond reach.
        let plan = plan_radius_first(1200.0, 0.01, &NetworkInputs::eu868_suburban(), Rounding::Floor).unwrap();
        let report = find_max_capacity(&plan, PowerPolicy::Fixed { power_dbm: -1.0 }, 0.01, 40_000, 1).unwrap();
        assert_eq!(report.total, 0);
        assert!(report.rings.iter().all(|r| r.diagnostic.is_some()));
    }
}

//! Times the capacity search for the allocated and two fixed-power policies.
//!
//! `cargo run --release -p lora-planner-core --example capacity_timing -- 2000000`

use std::time::Instant;

use lora_planner_core::{find_max_capacity, plan_radius_first, NetworkInputs, PowerPolicy, Rounding};

fn main() {
    let trials: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200_000);
    let inputs = NetworkInputs::eu868_suburban();
    let plan = plan_radius_first(1200.0, 0.01, &inputs, Rounding::Floor).unwrap();
    for policy in [
        PowerPolicy::AllocatedContinuous,
        PowerPolicy::Fixed { power_dbm: 14.0 },
        PowerPolicy::Fixed { power_dbm: 12.63 },
    ] {
        let t = Instant::now();
        let r = find_max_capacity(&plan, policy, 0.01, trials, 1).unwrap();
        println!(
            "{policy}: total {} unrounded {:.2} evals {:?} in {:.1?}",
            r.total,
            r.unrounded_total(&inputs.traffic.duty_cycles),
            r.rings.iter().map(|x| x.evaluations).collect::<Vec<_>>(),
            t.elapsed()
        );
    }
}

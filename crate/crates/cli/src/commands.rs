//! The four subcommands. Each writes its CSV files into the output directory
//! together with `config.json`, the resolved configuration of the run.

use std::path::Path;

use lora_planner_core::analytic::{
    collision_probability, disconnection_probability, min_transmit_power, total_outage,
    OutageTargets,
};
use lora_planner_core::montecarlo::{mix_seed, std_error};
use lora_planner_core::units::{dbm_to_watt, watt_to_dbm};
use lora_planner_core::{
    assign_ring, find_max_capacity, plan_geometry_first, plan_radius_first, quantize_power,
    simulate_outage, CapacityReport, CellPlan, PowerPolicy, Rounding, Scenario, RING_COUNT,
};

use crate::config::{GeometryMode, Resolved};
use crate::output::{num, opt_num, write_file, Table};
use crate::CliError;

/// Relative probe positions inside each ring used by `simulate`.
pub const SIM_RING_FRACTIONS: [f64; 3] = [0.2, 0.5, 0.9];

/// Agreement threshold, in standard errors.
pub const AGREEMENT_SIGMAS: f64 = 3.0;

/// Human-readable lines for stdout and warnings for stderr.
#[derive(Debug, Default, Clone)]
pub struct Report {
    pub lines: Vec<String>,
    pub warnings: Vec<String>,
}

pub fn build_plan(cfg: &Resolved) -> Result<CellPlan, CliError> {
    let plan = match cfg.geometry {
        GeometryMode::RadiusFirst { radius_m } => {
            plan_radius_first(radius_m, cfg.total_target, &cfg.inputs, cfg.rounding)?
        }
        GeometryMode::GeometryFirst { t_h0 } => {
            let targets = OutageTargets::new(cfg.total_target, t_h0)?;
            plan_geometry_first(&targets, &cfg.inputs, cfg.rounding)?
        }
    };
    Ok(plan.with_policy(cfg.policy)?)
}

fn write_config(cfg: &Resolved, out: &Path) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(&cfg.to_config())
        .map_err(|e| CliError::internal(e.to_string()))?;
    write_file(out, "config.json", &(text + "\n"))
}

/// Per-ring loads a policy is evaluated at. Power-allocated policies use the
/// analytic plan; fixed power has no closed form, so its loads come from the
/// simulated capacity search.
pub fn policy_loads(
    plan: &CellPlan,
    cfg: &Resolved,
) -> Result<([f64; RING_COUNT], Option<CapacityReport>), CliError> {
    match cfg.policy {
        PowerPolicy::Fixed { .. } => {
            let report = find_max_capacity(plan, cfg.policy, plan.targets.total, cfg.trials, cfg.seed)?;
            let betas = std::array::from_fn(|i| report.rings[i].beta_star);
            Ok((betas, Some(report)))
        }
        _ => Ok((std::array::from_fn(|i| plan.ring_loads[i].beta), None)),
    }
}

pub fn cmd_plan(cfg: &Resolved, out: &Path) -> Result<Report, CliError> {
    let plan = build_plan(cfg)?;
    let floor = plan.capacities_with(Rounding::Floor);
    let ceil = plan.capacities_with(Rounding::Ceil);

    let mut rings = Table::new(&["ring", "l_inner_m", "l_outer_m", "beta", "capacity_floor", "capacity_ceil"]);
    for i in 0..RING_COUNT {
        rings.push(vec![
            (i + 1).to_string(),
            num(plan.geometry.edges[i]),
            num(plan.geometry.edges[i + 1]),
            num(plan.ring_loads[i].beta),
            floor[i].to_string(),
            ceil[i].to_string(),
        ]);
    }
    let mut summary = Table::new(&["T_H0", "avg_power_dbm", "total_capacity", "power_reduction_pct"]);
    summary.push(vec![
        num(plan.targets.disconnection),
        num(plan.average_power_dbm),
        plan.total_capacity.to_string(),
        num(100.0 * plan.power_reduction()),
    ]);

    rings.write(out, "plan.csv")?;
    summary.write(out, "summary.csv")?;
    let plan_json = serde_json::to_string_pretty(&plan).map_err(|e| CliError::internal(e.to_string()))?;
    write_file(out, "plan.json", &(plan_json + "\n"))?;
    write_config(cfg, out)?;

    let mut report = Report::default();
    report.lines.push(format!(
        "radius {:.1} m, T_H0 {:.6}, beta {:.6}, total capacity {} ({}), average power {:.2} dBm",
        plan.geometry.radius(),
        plan.targets.disconnection,
        plan.beta(),
        plan.total_capacity,
        plan.rounding,
        plan.average_power_dbm
    ));
    if plan.total_capacity == 0 {
        report
            .warnings
            .push("no interference budget left: every ring has zero capacity".to_string());
    }
    Ok(report)
}

pub fn cmd_curves(cfg: &Resolved, out: &Path) -> Result<Report, CliError> {
    let plan = build_plan(cfg)?;
    let (betas, search) = policy_loads(&plan, cfg)?;
    let ch = &plan.inputs.channel;
    let n = cfg.curve_points;
    let radius = plan.geometry.radius();

    let mut table = Table::new(&["d_m", "ring", "p_cont_dbm", "p_disc_dbm", "h0", "q0", "c0"]);
    for k in 1..=n {
        let d = radius * k as f64 / n as f64;
        let ring = assign_ring(d, &plan.geometry)?;
        let profile = &plan.inputs.profiles[ring - 1];
        let p_cont_w = min_transmit_power(d, profile, &plan.targets, ch)?;
        let p_disc = quantize_power(p_cont_w, &plan.inputs.limits)?;
        let (h0, q0, c0) = match cfg.policy {
            PowerPolicy::AllocatedContinuous => {
                let h0 = disconnection_probability(d, p_cont_w, profile, ch)?;
                let q0 = collision_probability(betas[ring - 1], ch)?;
                (h0, q0, total_outage(h0, q0)?)
            }
            policy => {
                let power_w = match policy {
                    PowerPolicy::Fixed { power_dbm } => dbm_to_watt(power_dbm)?,
                    _ => dbm_to_watt(p_disc)?,
                };
                let h0 = disconnection_probability(d, power_w, profile, ch)?;
                let scenario = Scenario::new(plan.clone(), policy, d)?.with_beta(betas[ring - 1])?;
                let est = simulate_outage(&scenario, cfg.trials, mix_seed(cfg.seed, k as u64))?;
                (h0, est.q0_hat, total_outage(h0, est.q0_hat)?)
            }
        };
        table.push(vec![
            num(d),
            ring.to_string(),
            num(watt_to_dbm(p_cont_w)?),
            num(p_disc),
            num(h0),
            num(q0),
            num(c0),
        ]);
    }
    table.write(out, "curves.csv")?;
    write_config(cfg, out)?;

    let mut report = Report::default();
    report.lines.push(format!("{n} points over 0..{radius:.1} m, policy {}", cfg.policy));
    if let Some(search) = search {
        report.lines.push(format!("ring loads from capacity search: total {} nodes", search.total));
    }
    Ok(report)
}

/// One `simulate` row checked against whatever closed form applies.
#[derive(Debug, Clone, PartialEq)]
pub struct SimRow {
    pub d_m: f64,
    pub ring: usize,
    pub h0_hat: f64,
    pub q0_hat: f64,
    pub c0_hat: f64,
    pub ci: f64,
    pub h0: f64,
    pub q0: Option<f64>,
    pub c0: Option<f64>,
    pub trials: u64,
}

impl SimRow {
    /// Largest deviation between estimate and closed form, in standard errors.
    pub fn max_z(&self) -> f64 {
        let z = |hat: f64, exact: f64| {
            let se = std_error(exact, self.trials);
            if se == 0.0 {
                if hat == exact { 0.0 } else { f64::INFINITY }
            } else {
                (hat - exact).abs() / se
            }
        };
        let mut m = z(self.h0_hat, self.h0);
        if let Some(q0) = self.q0 {
            m = m.max(z(self.q0_hat, q0));
        }
        if let Some(c0) = self.c0 {
            m = m.max(z(self.c0_hat, c0));
        }
        m
    }
}

pub fn simulate_rows(cfg: &Resolved, plan: &CellPlan, betas: &[f64; RING_COUNT]) -> Result<Vec<SimRow>, CliError> {
    let ch = &plan.inputs.channel;
    let mut rows = Vec::new();
    for ring in 1..=RING_COUNT {
        let (a, b) = plan.geometry.bounds(ring)?;
        for f in SIM_RING_FRACTIONS {
            let d = a + f * (b - a);
            let scenario = Scenario::new(plan.clone(), cfg.policy, d)?.with_beta(betas[ring - 1])?;
            let est = simulate_outage(&scenario, cfg.trials, mix_seed(cfg.seed, rows.len() as u64))?;
            let profile = &plan.inputs.profiles[ring - 1];
            let power_w = lora_planner_core::planner::power_map_w(plan, &cfg.policy, d)?;
            let h0 = disconnection_probability(d, power_w, profile, ch)?;
            let (q0, c0) = if cfg.policy == PowerPolicy::AllocatedContinuous {
                let q0 = collision_probability(betas[ring - 1], ch)?;
                (Some(q0), Some(total_outage(h0, q0)?))
            } else {
                (None, None)
            };
            rows.push(SimRow {
                d_m: d,
                ring,
                h0_hat: est.h0_hat,
                q0_hat: est.q0_hat,
                c0_hat: est.c0_hat,
                ci: est.c0_ci,
                h0,
                q0,
                c0,
                trials: est.trials,
            });
        }
    }
    Ok(rows)
}

pub fn cmd_simulate(cfg: &Resolved, out: &Path) -> Result<Report, CliError> {
    let plan = build_plan(cfg)?;
    let (betas, _) = policy_loads(&plan, cfg)?;
    let rows = simulate_rows(cfg, &plan, &betas)?;

    let mut table = Table::new(&[
        "d_m", "ring", "h0_hat", "q0_hat", "c0_hat", "ci", "trials", "seed", "h0", "q0", "c0",
    ]);
    for r in &rows {
        table.push(vec![
            num(r.d_m),
            r.ring.to_string(),
            num(r.h0_hat),
            num(r.q0_hat),
            num(r.c0_hat),
            num(r.ci),
            r.trials.to_string(),
            cfg.seed.to_string(),
            num(r.h0),
            opt_num(r.q0),
            opt_num(r.c0),
        ]);
    }
    table.write(out, "sim.csv")?;
    write_config(cfg, out)?;

    let mut report = Report::default();
    for ring in 1..=RING_COUNT {
        let z = rows
            .iter()
            .filter(|r| r.ring == ring)
            .map(SimRow::max_z)
            .fold(0.0, f64::max);
        let verdict = if z <= AGREEMENT_SIGMAS { "agree" } else { "DISAGREE" };
        report.lines.push(format!("ring {ring} (SF{}): {verdict} (max |z| = {z:.2})", ring + 6));
    }
    Ok(report)
}

pub fn cmd_capacity_search(cfg: &Resolved, out: &Path) -> Result<Report, CliError> {
    let plan = build_plan(cfg)?;
    let search = find_max_capacity(&plan, cfg.policy, plan.targets.total, cfg.trials, cfg.seed)?;

    let mut table = Table::new(&["ring", "beta_star", "capacity", "ci_halfwidth"]);
    for r in &search.rings {
        table.push(vec![r.ring.to_string(), num(r.beta_star), r.capacity.to_string(), num(r.ci_halfwidth)]);
    }
    table.push(vec!["total".into(), String::new(), search.total.to_string(), String::new()]);
    table.write(out, "capacity.csv")?;
    write_config(cfg, out)?;

    let mut report = Report::default();
    let analytic = plan.unrounded_total();
    report.lines.push(format!(
        "policy {}: {} nodes (analytic power-allocated plan: {:.2}, gain of allocation {:+.1}%)",
        cfg.policy,
        search.total,
        analytic,
        100.0 * (analytic / search.total as f64 - 1.0)
    ));
    for r in &search.rings {
        if let Some(d) = &r.diagnostic {
            report.warnings.push(format!("ring {}: {d}", r.ring));
        }
    }
    Ok(report)
}

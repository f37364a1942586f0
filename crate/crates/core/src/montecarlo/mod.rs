//! Stochastic-geometry simulation of a single SF ring.
//!
//! Each trial places a probe node at a fixed distance, draws its Rayleigh
//! fade, then draws a Poisson number of same-ring interferers uniformly over
//! the ring annulus, each with its own fade and the transmit power dictated by
//! the power policy. The trial records disconnection (SNR below the ring's
//! threshold) and collision (aggregate SIR below the capture threshold).

mod capacity;
mod oracle;
mod sampling;

pub use capacity::{find_max_capacity, CapacityReport, RingCapacity};
pub use oracle::collision_oracle_gamma_poisson;
pub use sampling::{block_rng, mix_seed, sample_active_count, sample_annulus, BLOCK_SIZE};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::phy::gain_unchecked;
use crate::planner::{assign_ring, power_in_ring_w, power_map_w, CellPlan, PowerPolicy};
use sampling::{annulus_radius, open_unit, poisson_inverse};

/// Smallest trial budget accepted by [`simulate_outage`].
pub const MIN_TRIALS: u64 = 10_000;

/// z-value of the two-sided 95% normal interval.
pub const Z95: f64 = 1.96;

/// One probe position inside a plan, with the load of its ring.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub plan: CellPlan,
    pub policy: PowerPolicy,
    pub probe_distance: f64,
    pub probe_ring: usize,
    /// Mean number of active interferers in the probe's ring.
    pub beta: f64,
}

impl Scenario {
    /// Probe at `probe_distance` with the plan's own ring load.
    pub fn new(plan: CellPlan, policy: PowerPolicy, probe_distance: f64) -> Result<Self> {
        policy.validate(&plan.inputs.limits)?;
        let probe_ring = assign_ring(probe_distance, &plan.geometry)?;
        let beta = plan.ring_loads[probe_ring - 1].beta;
        Ok(Scenario { plan, policy, probe_distance, probe_ring, beta })
    }

    pub fn with_beta(mut self, beta: f64) -> Result<Self> {
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(invalid(format!("load must be non-negative, got {beta}")));
        }
        self.beta = beta;
        Ok(self)
    }
}

/// Monte Carlo outage estimates with 95% normal-approximation half-widths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutageEstimate {
    pub h0_hat: f64,
    pub q0_hat: f64,
    pub c0_hat: f64,
    pub h0_ci: f64,
    pub q0_ci: f64,
    pub c0_ci: f64,
    pub trials: u64,
    pub seed: u64,
}

/// Standard error of a proportion estimate.
pub fn std_error(p_hat: f64, trials: u64) -> f64 {
    (p_hat * (1.0 - p_hat) / trials as f64).sqrt()
}

pub fn ci_halfwidth(p_hat: f64, trials: u64) -> f64 {
    Z95 * std_error(p_hat, trials)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct FlagCounts {
    disconnected: u64,
    collided: u64,
    either: u64,
}

impl std::ops::Add for FlagCounts {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        FlagCounts {
            disconnected: self.disconnected + o.disconnected,
            collided: self.collided + o.collided,
            either: self.either + o.either,
        }
    }
}

/// Per-scenario constants, resolved once before the trial loop.
struct TrialModel<'a> {
    scenario: &'a Scenario,
    probe_rx_w: f64,
    snr_floor_w: f64,
    delta: f64,
    inner: f64,
    outer: f64,
    wavelength: f64,
    eta: f64,
}

impl<'a> TrialModel<'a> {
    fn new(scenario: &'a Scenario) -> Result<Self> {
        let plan = &scenario.plan;
        let ch = &plan.inputs.channel;
        let (inner, outer) = plan.geometry.bounds(scenario.probe_ring)?;
        let wavelength = ch.wavelength();
        let eta = ch.path_loss_exponent;
        let probe_power = power_map_w(plan, &scenario.policy, scenario.probe_distance)?;
        let profile = &plan.inputs.profiles[scenario.probe_ring - 1];
        // Power grows with distance, so the outer edge bounds every interferer.
        power_in_ring_w(plan, &scenario.policy, scenario.probe_ring, outer)?;
        Ok(TrialModel {
            scenario,
            probe_rx_w: probe_power * gain_unchecked(scenario.probe_distance, wavelength, eta),
            snr_floor_w: profile.snr_threshold() * ch.noise_w(),
            delta: ch.sir_threshold(),
            inner,
            outer,
            wavelength,
            eta,
        })
    }

    fn interferer_rx_w(&self, d: f64) -> f64 {
        let s = self.scenario;
        let p = power_in_ring_w(&s.plan, &s.policy, s.probe_ring, d)
            .expect("power validated for the ring");
        p * gain_unchecked(d, self.wavelength, self.eta)
    }

    fn run_block(&self, seed: u64, block: u64, trials: u64) -> FlagCounts {
        let mut rng = block_rng(seed, block);
        let mut counts = FlagCounts::default();
        let beta = self.scenario.beta;
        for _ in 0..trials {
            let fade: f64 = Exp1.sample(&mut rng);
            let u: f64 = rng.random();
            let sub_seed: u64 = rng.random();
            let signal = self.probe_rx_w * fade;
            let disconnected = signal < self.snr_floor_w;
            let n = poisson_inverse(u, beta);
            let collided = n > 0 && {
                let mut sub = ChaCha8Rng::seed_from_u64(sub_seed);
                let mut interference = 0.0;
                for _ in 0..n {
                    let d = annulus_radius(self.inner, self.outer, open_unit(&mut sub));
                    let h: f64 = Exp1.sample(&mut sub);
                    interference += self.interferer_rx_w(d) * h;
                }
                signal < self.delta * interference
            };
            counts.disconnected += u64::from(disconnected);
            counts.collided += u64::from(collided);
            counts.either += u64::from(disconnected || collided);
        }
        counts
    }
}

/// Estimates disconnection, collision and total outage at the probe.
///
/// A trial with no active interferer never collides. The estimate is a
/// deterministic function of `(scenario, trials, seed)`.
pub fn simulate_outage(scenario: &Scenario, trials: u64, seed: u64) -> Result<OutageEstimate> {
    if trials < MIN_TRIALS {
        return Err(Error::TrialBudget { trials, min: MIN_TRIALS });
    }
    if scenario.beta > 500.0 {
        return Err(invalid(format!("load {} too large to simulate", scenario.beta)));
    }
    let model = TrialModel::new(scenario)?;
    let blocks = trials.div_ceil(BLOCK_SIZE);
    let block_trials = move |b: u64| BLOCK_SIZE.min(trials - b * BLOCK_SIZE);

    #[cfg(feature = "parallel")]
    let counts = {
        use rayon::prelude::*;
        (0..blocks)
            .into_par_iter()
            .map(|b| model.run_block(seed, b, block_trials(b)))
            .reduce(FlagCounts::default, |a, b| a + b)
    };
    #[cfg(not(feature = "parallel"))]
    let counts = (0..blocks)
        .map(|b| model.run_block(seed, b, block_trials(b)))
        .fold(FlagCounts::default(), |a, b| a + b);

    let n = trials as f64;
    let (h, q, c) = (
        counts.disconnected as f64 / n,
        counts.collided as f64 / n,
        counts.either as f64 / n,
    );
    Ok(OutageEstimate {
        h0_hat: h,
        q0_hat: q,
        c0_hat: c,
        h0_ci: ci_halfwidth(h, trials),
        q0_ci: ci_halfwidth(q, trials),
        c0_ci: ci_halfwidth(c, trials),
        trials,
        seed,
    })
}

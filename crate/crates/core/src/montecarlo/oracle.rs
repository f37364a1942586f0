use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Exp1, Poisson};

use crate::error::{invalid, Result};

/// Collision probability of an equal-received-power ring, estimated without
/// any geometry: the interference is a Gamma(N, 1) sum of unit exponentials
/// with N ~ Poisson(`beta`), compared against the desired fade times `delta`
/// (linear). Shares no code path with the spatial simulator.
pub fn collision_oracle_gamma_poisson(beta: f64, delta: f64, trials: u64, seed: u64) -> Result<f64> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(invalid(format!("load must be non-negative, got {beta}")));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(invalid(format!("capture threshold must be positive, got {delta}")));
    }
    if trials == 0 {
        return Err(invalid("oracle needs at least one trial"));
    }
    if beta == 0.0 {
        return Ok(0.0);
    }
    let count = Poisson::new(beta).map_err(|e| invalid(e.to_string()))?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    for _ in 0..trials {
        let n = count.sample(&mut rng) as u64;
        if n == 0 {
            continue;
        }
        let x: f64 = (0..n).map(|_| -> f64 { Exp1.sample(&mut rng) }).sum();
        let h: f64 = Exp1.sample(&mut rng);
        if h < delta * x {
            hits += 1;
        }
    }
    Ok(hits as f64 / trials as f64)
}

//! Random variate generation and the stream derivation rule.
//!
//! Trials are grouped into blocks of [`BLOCK_SIZE`]. Block `b` of a run with
//! master seed `s` draws from `ChaCha8Rng::seed_from_u64(s)` switched to
//! stream `b`, so each block is reproducible on its own and the result does
//! not depend on how blocks are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{invalid, Result};

pub const BLOCK_SIZE: u64 = 4096;

/// Above this mean, counts come from `rand_distr::Poisson` instead of inversion.
const INVERSION_LIMIT: f64 = 500.0;

pub fn block_rng(master_seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(block);
    rng
}

/// SplitMix64 finaliser, used to derive independent child seeds.
pub fn mix_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Distance of a point uniform over the annulus `inner..outer`.
pub fn sample_annulus<R: Rng + ?Sized>(inner: f64, outer: f64, rng: &mut R) -> Result<f64> {
    if !(inner >= 0.0 && outer.is_finite() && inner < outer) {
        return Err(invalid(format!("annulus needs 0 <= inner < outer, got {inner}..{outer}")));
    }
    Ok(annulus_radius(inner, outer, open_unit(rng)))
}

#[inline]
pub(crate) fn annulus_radius(inner: f64, outer: f64, u: f64) -> f64 {
    (inner * inner + u * (outer * outer - inner * inner)).sqrt()
}

/// Uniform on (0, 1].
#[inline]
pub(crate) fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

/// Number of active interferers, Poisson with mean `beta`.
pub fn sample_active_count<R: Rng + ?Sized>(beta: f64, rng: &mut R) -> Result<u64> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(invalid(format!("load must be non-negative, got {beta}")));
    }
    if beta > INVERSION_LIMIT {
        let d = Poisson::new(beta).map_err(|e| invalid(e.to_string()))?;
        return Ok(d.sample(rng) as u64);
    }
    Ok(poisson_inverse(rng.random::<f64>(), beta))
}

/// Inverse Poisson CDF at `u`. For a fixed `u` the count is non-decreasing
/// in `beta`, which keeps capacity searches monotone under a fixed seed.
#[inline]
pub(crate) fn poisson_inverse(u: f64, beta: f64) -> u64 {
    if beta == 0.0 {
        return 0;
    }
    let mut k = 0u64;
    let mut pmf = (-beta).exp();
    let mut cdf = pmf;
    while u >= cdf {
        k += 1;
        pmf *= beta / k as f64;
        let next = cdf + pmf;
        if next == cdf {
            break;
        }
        cdf = next;
    }
    k
}

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How measurement expectations are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EstimatorMode {
    /// Exact Born probabilities.
    Exact,
    /// Frequencies over `shots` simulated measurements, drawn from a ChaCha20
    /// stream seeded with `seed`.
    Sampled { shots: u64, seed: u64 },
}

impl EstimatorMode {
    pub fn sampled(shots: u64, seed: u64) -> Result<Self> {
        if shots == 0 {
            return Err(Error::InvalidConfig("sampled mode needs at least one shot".into()));
        }
        Ok(Self::Sampled { shots, seed })
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Self::Exact)
    }

    /// Independent child mode for a sub-measurement. Children with distinct
    /// `stream` labels draw from unrelated generator seeds.
    pub fn fork(&self, stream: u64) -> Self {
        match *self {
            Self::Exact => Self::Exact,
            Self::Sampled { shots, seed } => Self::Sampled {
                shots,
                seed: splitmix64(seed ^ splitmix64(stream.wrapping_add(0x5851_F42D_4C95_7F2D))),
            },
        }
    }

    pub(crate) fn rng(&self) -> ChaCha20Rng {
        match *self {
            Self::Exact => ChaCha20Rng::seed_from_u64(0),
            Self::Sampled { seed, .. } => ChaCha20Rng::seed_from_u64(seed),
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Draws `shots` outcomes from a discrete distribution and returns the
/// per-outcome counts.
pub(crate) fn sample_counts(probs: &[f64], shots: u64, rng: &mut ChaCha20Rng) -> Vec<u64> {
    let mut counts = vec![0u64; probs.len()];
    // marginals come from a normalized state, so at least one weight is positive
    let dist = WeightedIndex::new(probs.iter().map(|p| p.max(0.0))).expect("valid weights");
    for _ in 0..shots {
        counts[dist.sample(rng)] += 1;
    }
    counts
}

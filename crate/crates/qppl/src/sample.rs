//! Seeded sampling of worlds from an exact output distribution.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::state::{Distribution, Environment};

/// Draw `shots` i.i.d. worlds from `dist`. The stream depends only on
/// `seed`, so equal inputs give equal outputs on every platform.
pub fn sample(dist: &Distribution, seed: u64, shots: usize) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let probs = dist.probs();
    let last = probs.iter().rposition(|p| *p > 0.0).unwrap_or(0);
    (0..shots)
        .map(|_| {
            let u: f64 = rng.gen();
            let mut acc = 0.0;
            for (k, p) in probs.iter().enumerate() {
                acc += p;
                if u < acc {
                    return k;
                }
            }
            // rounding left the cumulative sum just short of 1
            last
        })
        .collect()
}

/// Bit string for a sampled world; `()` when no variables are live.
pub fn render_outcome(env: &Environment, world: usize) -> String {
    if env.is_empty() {
        "()".to_string()
    } else {
        env.bits(world)
    }
}

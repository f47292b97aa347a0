//! Seeded random generation of constructible triples: every "choose" step
//! picks uniformly among its legal options, so the draw is uniform over
//! choice paths (not over the generated graphs).

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{is_block_start, ConstructibleTriple, ConstructionError, TripleError};

/// Draws the `index`-th triple of a seeded batch. One master seed fans out
/// through independent ChaCha streams, so batch members are reproducible
/// under any worker partitioning.
pub fn sample_triple_indexed(
    n: usize,
    k: usize,
    s: usize,
    seed: u64,
    index: u64,
) -> Result<ConstructibleTriple, ConstructionError> {
    sample_with(n, k, s, {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        rng
    })
}

/// Draws one constructible triple; identical seeds give identical triples.
pub fn sample_triple(n: usize, k: usize, s: usize, seed: u64) -> Result<ConstructibleTriple, ConstructionError> {
    sample_with(n, k, s, ChaCha8Rng::seed_from_u64(seed))
}

fn sample_with(n: usize, k: usize, s: usize, mut rng: ChaCha8Rng) -> Result<ConstructibleTriple, ConstructionError> {
    if !(2..=crate::graph::MAX_VERTICES).contains(&n) {
        return Err(TripleError::BadN { n }.into());
    }
    if k <= 1 || k > n {
        return Err(TripleError::BadK { k, n }.into());
    }
    if s == 0 {
        return Err(TripleError::BadS { s }.into());
    }
    let mut sigma: Vec<usize> = (2..=n).collect();
    sigma.shuffle(&mut rng);
    sigma.insert(0, 1);

    let mut f = BTreeMap::new();
    let mut neighbors = BTreeMap::new();
    for i in 2..=n.min(k + 1) {
        // Any subset of {1..i-1} containing 1.
        let mut set = BTreeSet::from([1]);
        for j in 2..i {
            if rng.gen::<bool>() {
                set.insert(j);
            }
        }
        neighbors.insert(i, set);
    }
    if n >= k + 2 {
        let mut active: BTreeSet<usize> = (1..=k).collect();
        let mut anchor = 1usize;
        for i in k + 2..=n {
            let frozen = if is_block_start(i, k, s) {
                anchor
            } else {
                let pool: Vec<usize> = active
                    .iter()
                    .copied()
                    .filter(|&v| v != anchor && neighbors[&(i - 1)].contains(&v))
                    .collect();
                // |N(i-1)| >= 2 and at most one of its members is the anchor,
                // so the pool is never empty.
                pool[rng.gen_range(0..pool.len())]
            };
            f.insert(i, frozen);
            active.remove(&frozen);
            active.insert(i - 1);
            if is_block_start(i, k, s) {
                anchor = *active.first().expect("active window never empties");
            }
            let optional: Vec<usize> = active.iter().copied().filter(|&v| v != anchor).collect();
            let legal: Vec<u32> = (0..1u32 << optional.len())
                .filter(|sub| 2 * (sub.count_ones() as usize + 1) > k)
                .collect();
            let sub = legal[rng.gen_range(0..legal.len())];
            let mut set = BTreeSet::from([anchor]);
            for (pos, &v) in optional.iter().enumerate() {
                if sub >> pos & 1 == 1 {
                    set.insert(v);
                }
            }
            neighbors.insert(i, set);
        }
    }
    let triple = ConstructibleTriple::new(n, k, s, sigma, f, neighbors);
    debug_assert!(triple.validate().is_ok());
    Ok(triple)
}

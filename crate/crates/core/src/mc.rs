//! Monte Carlo estimation of k-reliability by independent edge retention.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::counts;
use crate::error::{Error, Result};
use crate::graph::{DisjointSets, SimpleGraph};

/// Trials per independently seeded batch. Fixed so results do not depend on
/// the number of worker threads.
const BATCH: u64 = 1024;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub trials: u64,
    pub seed: u64,
    pub successes: u64,
}

/// `floor(p * 2^53)`; an edge survives when a 53-bit uniform draw is below it.
fn retention_threshold(p: &BigRational) -> Result<u64> {
    if p.is_negative() || p > &BigRational::one() {
        return Err(Error::invalid(format!("probability {p} is outside [0, 1]")));
    }
    let scaled = p.numer().magnitude() << 53u32;
    let t: BigUint = scaled / p.denom().magnitude();
    Ok(t.to_u64().expect("threshold fits in 54 bits"))
}

/// Fraction of `trials` random spanning subgraphs with at most `k` components.
pub fn estimate(
    g: &SimpleGraph,
    k: usize,
    p: &BigRational,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    let threshold = retention_threshold(p)?;
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let n = g.n();
    let successes: u64 = (0..trials.div_ceil(BATCH))
        .into_par_iter()
        .map(|batch| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(batch);
            let mut dsu = DisjointSets::new(n);
            let count = BATCH.min(trials - batch * BATCH);
            let mut hits = 0;
            for _ in 0..count {
                dsu.reset(n);
                for &(u, v) in &edges {
                    if rng.next_u64() >> 11 < threshold {
                        dsu.union(u, v);
                    }
                }
                if dsu.set_count() <= k {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    let mean = successes as f64 / trials as f64;
    Ok(McEstimate {
        mean,
        stderr: (mean * (1.0 - mean) / trials as f64).sqrt(),
        trials,
        seed,
        successes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheck {
    pub estimate: McEstimate,
    pub exact: f64,
    /// `max(estimate stderr, sqrt(exact (1 - exact) / trials))`.
    pub sigma: f64,
    pub deviation_sigmas: f64,
    pub pass: bool,
}

/// Compares an estimate against `exact`. The tolerance uses the larger of the
/// empirical standard error and the one implied by the exact value, so a
/// degenerate sample (all successes or all failures) cannot claim zero error.
pub fn compare_to_exact(
    estimate: McEstimate,
    exact: &BigRational,
    tolerance_sigmas: f64,
) -> CrossCheck {
    let exact_f = counts::rational_to_f64(exact);
    let null_se = (exact_f * (1.0 - exact_f)).max(0.0) / estimate.trials as f64;
    let sigma = estimate.stderr.max(null_se.sqrt());
    let diff = (estimate.mean - exact_f).abs();
    let deviation_sigmas = if sigma > 0.0 {
        diff / sigma
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    CrossCheck {
        pass: diff <= tolerance_sigmas * sigma,
        estimate,
        exact: exact_f,
        sigma,
        deviation_sigmas,
    }
}

/// Estimates `R^(k)(p)` and checks it against the exact value from the
/// count table.
pub fn cross_check(
    g: &SimpleGraph,
    k: usize,
    p: &BigRational,
    trials: u64,
    seed: u64,
    tolerance_sigmas: f64,
) -> Result<CrossCheck> {
    let table = counts::ntable(g)?;
    let exact = counts::rel_eval(&counts::reliability(&table, k)?, p)?;
    Ok(compare_to_exact(
        estimate(g, k, p, trials, seed)?,
        &exact,
        tolerance_sigmas,
    ))
}

//! Deterministic random data for the property suites: partitions of a fixed
//! total for dominance checks, and standard-module inducing data drawn from
//! a small cuspidal pool containing both self-dual labels and dual pairs.
//!
//! Everything is driven by a caller-owned ChaCha stream so that suites and
//! reports are reproducible from a single seed.

use num::Rational64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::Partition;
use crate::rep::{CuspidalLabel, EssSqInt, GenericTau};

/// A fresh deterministic generator for the given seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The cuspidal labels the samplers draw from: self-dual characters, a dual
/// pair of characters, and square-integrable-ready labels of ranks 2 and 3
/// (again one self-dual, one dual pair).
pub fn label_pool() -> Vec<CuspidalLabel> {
    vec![
        CuspidalLabel::character("chi_1").expect("valid label"),
        CuspidalLabel::character("chi_2").expect("valid label"),
        CuspidalLabel::new("eta", 1, "eta_dual", true).expect("valid label"),
        CuspidalLabel::new("eta_dual", 1, "eta", true).expect("valid label"),
        CuspidalLabel::new("sigma", 2, "sigma", true).expect("valid label"),
        CuspidalLabel::new("pi", 2, "pi_dual", true).expect("valid label"),
        CuspidalLabel::new("pi_dual", 2, "pi", true).expect("valid label"),
        CuspidalLabel::new("omega", 3, "omega", true).expect("valid label"),
    ]
}

/// A uniform-ish random partition of exactly `total`: a random composition,
/// sorted into weakly decreasing order. `total` = 0 gives the empty
/// partition.
pub fn random_partition_of(rng: &mut ChaCha8Rng, total: u64) -> Partition {
    let mut parts = Vec::new();
    let mut left = total;
    while left > 0 {
        let p = rng.gen_range(1..=left);
        parts.push(p);
        left -= p;
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Partition::new(parts).expect("sorted positive parts")
}

/// Random standard-module data of total rank `k`: segments (cuspidal,
/// length, exponent) with Σ r·d = k and weakly decreasing exponents drawn
/// from a small half-integer set (so equal-exponent clusters actually occur).
pub fn random_generic_tau(rng: &mut ChaCha8Rng, k: usize) -> GenericTau {
    assert!(k > 0, "rank must be positive");
    let pool = label_pool();
    let exponent_menu: Vec<Rational64> = (-3..=3).map(|n| Rational64::new(n, 2)).collect();

    let mut budgets = Vec::new();
    let mut left = k;
    while left > 0 {
        let part = rng.gen_range(1..=left);
        budgets.push(part);
        left -= part;
    }

    let mut segments = Vec::new();
    for part in budgets {
        // Pick (label rank r, length d) with r·d = part, from the ranks the
        // pool actually offers.
        let choices: Vec<&CuspidalLabel> = pool
            .iter()
            .filter(|l| part % l.rank() == 0)
            .collect();
        let label = (*choices.choose(rng).expect("rank-1 labels always fit")).clone();
        let d = part / label.rank();
        let a = *exponent_menu.choose(rng).expect("nonempty menu");
        segments.push(EssSqInt::new(label, d, a).expect("positive length"));
    }
    segments.sort_by(|s, t| t.exponent().cmp(&s.exponent()));
    GenericTau::new(segments).expect("sorted exponents")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pool_duality_is_involutive() {
        for label in label_pool() {
            assert_eq!(label.dual().dual(), label);
        }
        assert!(label_pool().iter().any(|l| !l.is_self_dual()));
        assert!(label_pool().iter().any(CuspidalLabel::is_self_dual));
    }

    #[test]
    fn partitions_hit_the_total() {
        let mut rng = rng_from_seed(7);
        for total in 0..20u64 {
            let p = random_partition_of(&mut rng, total);
            assert_eq!(p.total(), total);
        }
    }

    #[test]
    fn sampled_taus_have_requested_rank() {
        let mut rng = rng_from_seed(11);
        let mut saw_cluster = false;
        let mut saw_long_segment = false;
        for _ in 0..200 {
            let k = rng.gen_range(1..=4);
            let tau = random_generic_tau(&mut rng, k);
            assert_eq!(tau.k(), k);
            if tau.clusters().iter().any(|(_, segs)| segs.len() > 1) {
                saw_cluster = true;
            }
            if tau.segments().iter().any(|s| s.length() > 1) {
                saw_long_segment = true;
            }
        }
        assert!(saw_cluster, "sampler never produced a tempered cluster");
        assert!(saw_long_segment, "sampler never produced a length > 1 segment");
    }

    #[test]
    fn sampling_is_reproducible() {
        let mut a = rng_from_seed(5);
        let mut b = rng_from_seed(5);
        for _ in 0..20 {
            assert_eq!(random_generic_tau(&mut a, 4), random_generic_tau(&mut b, 4));
        }
    }
}

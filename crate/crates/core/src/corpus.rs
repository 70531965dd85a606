//! Test families: exhaustive enumerations for small `(r, k)`, all pairs of
//! subsets, and seeded random families.

use std::ops::RangeInclusive;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::family::SimplexFamily;

pub const DEFAULT_SEED: u64 = 0x6d69_6e6b;

fn mask_to_set(mask: u32) -> Vec<usize> {
    (0..32).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect()
}

/// Nonempty subsets of `[r]` in bitmask order.
pub fn nonempty_subsets(r: usize) -> Vec<Vec<usize>> {
    (1u32..1 << r).map(mask_to_set).collect()
}

/// Every family of `k` nonempty subsets of `[r]` up to reordering of the
/// sets (multisets, so repeated sets are included).
pub fn exhaustive_families(r: usize, k: usize) -> Vec<SimplexFamily> {
    let subsets = nonempty_subsets(r);
    let mut out = Vec::new();
    let mut pick = vec![0usize; k];
    loop {
        let sets = pick.iter().map(|&i| subsets[i].clone()).collect();
        out.push(SimplexFamily::new(r, sets).expect("subsets of [r] are valid"));
        let Some(pos) = (0..k).rev().find(|&p| pick[p] + 1 < subsets.len()) else {
            break;
        };
        let next = pick[pos] + 1;
        pick[pos..].iter_mut().for_each(|p| *p = next);
    }
    out
}

/// Unordered pairs `{F, F'}` of nonempty subsets of `[r]`, `F = F'` allowed.
pub fn two_set_pairs(r: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let subsets = nonempty_subsets(r);
    let mut out = Vec::new();
    for (i, f) in subsets.iter().enumerate() {
        for g in &subsets[i..] {
            out.push((f.clone(), g.clone()));
        }
    }
    out
}

fn random_subset(rng: &mut ChaCha8Rng, r: usize) -> Vec<usize> {
    loop {
        let set: Vec<usize> = (1..=r).filter(|_| rng.random_bool(0.5)).collect();
        if !set.is_empty() {
            return set;
        }
    }
}

pub fn random_family(rng: &mut ChaCha8Rng, r: usize, k: usize) -> SimplexFamily {
    let sets = (0..k).map(|_| random_subset(rng, r)).collect();
    SimplexFamily::new(r, sets).expect("random subsets are valid")
}

pub fn random_families(
    seed: u64,
    count: usize,
    r: RangeInclusive<usize>,
    k: RangeInclusive<usize>,
) -> Vec<SimplexFamily> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let rr = rng.random_range(r.clone());
            let kk = rng.random_range(k.clone());
            random_family(&mut rng, rr, kk)
        })
        .collect()
}

/// Random families in which some ground element has a twin with the same
/// nonempty signature: a random family on `[r-1]` with element `r` copied
/// from a covered element.
pub fn duplicated_signature_families(
    seed: u64,
    count: usize,
    r: RangeInclusive<usize>,
    k: RangeInclusive<usize>,
) -> Vec<SimplexFamily> {
    assert!(*r.start() >= 2, "need room for a twin");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let rr = rng.random_range(r.clone());
            let kk = rng.random_range(k.clone());
            let base = random_family(&mut rng, rr - 1, kk);
            let support = base.support();
            let twin = support[rng.random_range(0..support.len())];
            let sets = base
                .sets()
                .iter()
                .map(|s| {
                    let mut s = s.clone();
                    if s.contains(&twin) {
                        s.push(rr);
                    }
                    s
                })
                .collect();
            SimplexFamily::new(rr, sets).expect("twin extension stays valid")
        })
        .collect()
}

/// Mixed corpus for skeleton-level properties: every family on `[3]` with
/// up to three sets, plus random families on `[4..=6]` with two to four sets.
pub fn skeleton_corpus(seed: u64) -> Vec<SimplexFamily> {
    let mut out: Vec<SimplexFamily> = (1..=3).flat_map(|k| exhaustive_families(3, k)).collect();
    out.extend(random_families(seed, 40, 4..=6, 2..=4));
    out.extend(duplicated_signature_families(seed ^ 1, 20, 4..=6, 2..=3));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn exhaustive_counts_are_multiset_coefficients() {
        for r in 1..=4 {
            let s = (1 << r) - 1;
            for k in 1..=3 {
                assert_eq!(exhaustive_families(r, k).len(), binom(s + k - 1, k), "r={r} k={k}");
            }
        }
    }

    #[test]
    fn pairs_count() {
        assert_eq!(two_set_pairs(3).len(), 7 * 8 / 2);
        assert_eq!(nonempty_subsets(2), vec![vec![1], vec![2], vec![1, 2]]);
    }

    #[test]
    fn random_is_seeded() {
        let a = random_families(7, 10, 3..=5, 1..=3);
        let b = random_families(7, 10, 3..=5, 1..=3);
        assert_eq!(a, b);
        assert!(a.iter().all(|f| (3..=5).contains(&f.ground_size()) && (1..=3).contains(&f.len())));
    }

    #[test]
    fn twins_share_signatures() {
        for f in duplicated_signature_families(3, 20, 3..=6, 1..=3) {
            assert!(f.signature_classes().iter().any(|c| c.len() >= 2), "{f}");
        }
    }
}

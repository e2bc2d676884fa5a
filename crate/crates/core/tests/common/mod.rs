//! Naive oracles shared by the property and acceptance tests. They collect
//! plain `Scalar` arithmetic into a `HashSet` and use none of the library's
//! batched or scaled code paths.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use sumprod::cube::CubeCertificate;
use sumprod::distinct::{BlockPartition, WeightVector};
use sumprod::{FiniteSet, Scalar};

pub fn naive_sumset(a: &FiniteSet, b: &FiniteSet) -> FiniteSet {
    let mut out = HashSet::new();
    for x in a {
        for y in b {
            out.insert(x + y);
        }
    }
    FiniteSet::new(out)
}

pub fn naive_productset(a: &FiniteSet, b: &FiniteSet) -> FiniteSet {
    let mut out = HashSet::new();
    for x in a {
        for y in b {
            out.insert(x * y);
        }
    }
    FiniteSet::new(out)
}

pub fn naive_k_fold(a: &FiniteSet, k: usize) -> FiniteSet {
    let mut acc = a.clone();
    for _ in 1..k {
        acc = naive_sumset(&acc, a);
    }
    acc
}

pub fn naive_signed(k: usize, l: usize, a: &FiniteSet) -> FiniteSet {
    let zero = FiniteSet::from_integers([0]);
    let plus = if k == 0 { zero.clone() } else { naive_k_fold(a, k) };
    let minus = if l == 0 { zero } else { naive_k_fold(a, l) };
    let neg = FiniteSet::new(minus.iter().map(|x| -x));
    naive_sumset(&plus, &neg)
}

/// Re-derives every greedy step: the chosen pair must reach the maximal
/// survivor count among admissible pairs, and be the first pair in
/// lexicographic `(s, t)` order that does.
pub fn greedy_rescan(a: &FiniteSet, b: &FiniteSet, cert: &CubeCertificate) -> bool {
    let mut live: BTreeSet<Scalar> = a.iter().cloned().collect();
    let mut used: Vec<Scalar> = Vec::new();
    for step in &cert.steps {
        let mut best: Option<(usize, Scalar, Scalar)> = None;
        for (si, s) in b.iter().enumerate() {
            for t in &b.elements()[..si] {
                let theta = s / t;
                if used.contains(&theta) {
                    continue;
                }
                let count = live.iter().filter(|d| live.contains(&(*d * &theta))).count();
                if best.as_ref().is_none_or(|bst| count > bst.0) {
                    best = Some((count, s.clone(), t.clone()));
                }
            }
        }
        let Some((count, s, t)) = best else { return false };
        if count != step.survivors || s != step.s || t != step.t {
            return false;
        }
        let theta = &s / &t;
        live = live.iter().filter(|d| live.contains(&(*d * &theta))).cloned().collect();
        used.push(theta);
    }
    live.into_iter().collect::<Vec<_>>() == cert.survivors.elements()
}

/// Enumerates every tuple and compares all sums pairwise.
pub fn brute_all_distinct(p: &BlockPartition, w: &WeightVector) -> bool {
    let mut sums: Vec<Scalar> = vec![Scalar::zero()];
    for (block, d) in p.blocks.iter().zip(w.deltas()) {
        sums = sums.iter().flat_map(|s| block.iter().map(move |c| s + &(c * d))).collect();
    }
    let n = sums.len();
    sums.sort();
    sums.dedup();
    sums.len() == n
}

/// Rationals `p/q` from raw parts.
pub fn rationals(parts: &[(i64, u64)]) -> FiniteSet {
    FiniteSet::new(parts.iter().map(|&(p, q)| Scalar::new(p, q.max(1)).expect("nonzero denominator")))
}

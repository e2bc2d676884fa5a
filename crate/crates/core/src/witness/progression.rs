use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Stage, WitnessError};
use crate::setcore::{productset, ratio_set, FiniteSet, Scalar};

/// `y, yd, ..., yd^ℓ`, all in the designated product set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgressionWitness {
    pub y: Scalar,
    pub d: Scalar,
    pub length_ell: usize,
    pub members: Vec<Scalar>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgressionReport {
    /// At most `budget` witnesses, ordered by `d` then `y`.
    pub witnesses: Vec<ProgressionWitness>,
    /// Every witness found, including those past the budget.
    pub total_found: usize,
    pub truncated: bool,
}

/// For each element `y` of sorted `p`, the length of the longest run
/// `y, yd, yd^2, ...` inside `p` (at least 1).
pub(crate) fn chain_lengths(p: &FiniteSet, d: &Scalar) -> Vec<usize> {
    let xs = p.elements();
    let mut len = vec![1usize; xs.len()];
    // d > 1, so successors sit further right; fill from the top
    for i in (0..xs.len()).rev() {
        if let Some(j) = p.index_of(&(&xs[i] * d)) {
            len[i] = len[j] + 1;
        }
    }
    len
}

/// Ratios `d > 1` of `B / B`, ascending.
pub(crate) fn ratios_above_one(b: &FiniteSet) -> Result<Vec<Scalar>, WitnessError> {
    let r = ratio_set(b).map_err(|e| WitnessError::at(Stage::Input, e))?;
    let one = Scalar::one();
    Ok(r.into_elements().into_iter().filter(|x| *x > one).collect())
}

/// All `(y, d)` with `d ∈ B/B`, `d > 1`, `y ∈ A.A` and `y d^i ∈ A.A` for
/// `i = 0..=ell`, each re-checked by membership.
pub fn progression_search(
    a: &FiniteSet,
    b: &FiniteSet,
    ell: usize,
    budget: usize,
) -> Result<ProgressionReport, WitnessError> {
    if !a.is_positive() || !b.is_positive() {
        return Err(WitnessError::at(Stage::Input, "sets must be positive"));
    }
    let aa = productset(a, a);
    let ratios = ratios_above_one(b)?;
    let per_ratio: Vec<(usize, Vec<ProgressionWitness>)> = ratios
        .par_iter()
        .map(|d| {
            let lens = chain_lengths(&aa, d);
            let hits: Vec<usize> = (0..lens.len()).filter(|&i| lens[i] > ell).collect();
            let take: Vec<ProgressionWitness> = hits
                .iter()
                .take(budget)
                .map(|&i| {
                    let y = aa.elements()[i].clone();
                    let mut members = Vec::with_capacity(ell + 1);
                    let mut v = y.clone();
                    for _ in 0..=ell {
                        members.push(v.clone());
                        v = v * d;
                    }
                    ProgressionWitness { y, d: d.clone(), length_ell: ell, members }
                })
                .collect();
            (hits.len(), take)
        })
        .collect();
    let total_found = per_ratio.iter().map(|(n, _)| n).sum();
    let mut witnesses: Vec<ProgressionWitness> = per_ratio.into_iter().flat_map(|(_, w)| w).take(budget).collect();
    witnesses.retain(|w| w.members.iter().all(|m| aa.contains(m)));
    let truncated = total_found > witnesses.len();
    Ok(ProgressionReport { witnesses, total_found, truncated })
}

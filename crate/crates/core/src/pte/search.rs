use std::collections::HashMap;

use num_bigint::BigInt;

use super::{PteError, PteSolution};

/// Limits for [`search_pte_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Largest accepted `range_max`.
    pub range_limit: u64,
    /// Total number of candidate subsets examined before giving up.
    pub budget: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { range_limit: 64, budget: 2_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PteSearch {
    pub solution: Option<PteSolution>,
    /// Set when the budget ran out before every size up to the cap was
    /// exhausted. A missing solution is then inconclusive.
    pub budget_exhausted: bool,
    pub subsets_examined: u64,
}

pub fn search_pte(k: u32, range_max: u64, size_cap: usize) -> Result<PteSearch, PteError> {
    search_pte_with(k, range_max, size_cap, &SearchOptions::default())
}

/// Smallest-size pair of disjoint lists in `[0, range_max]` with equal power
/// sums for `j = 1..=k`.
///
/// Sizes are tried in increasing order. Minimal solutions are disjoint (shared
/// elements can be cancelled) and translation invariant, so one side is
/// required to contain 0. Within a size the answer is the lexicographically
/// first `(xs, ys)`.
pub fn search_pte_with(
    k: u32,
    range_max: u64,
    size_cap: usize,
    opts: &SearchOptions,
) -> Result<PteSearch, PteError> {
    if k == 0 {
        return Err(PteError::DegreeOutOfRange { k, max: u32::MAX });
    }
    if range_max > opts.range_limit {
        return Err(PteError::RangeTooLarge { range: range_max, limit: opts.range_limit });
    }
    let universe = range_max as usize + 1;
    let mut examined = 0u64;
    for s in 2..=size_cap.min(universe / 2) {
        let mut groups: HashMap<Vec<BigInt>, Vec<Vec<u64>>> = HashMap::new();
        let mut order: Vec<(Vec<BigInt>, Vec<u64>)> = Vec::new();
        let mut combo: Vec<usize> = (0..s).collect();
        loop {
            examined += 1;
            if examined > opts.budget {
                return Ok(PteSearch { solution: None, budget_exhausted: true, subsets_examined: examined - 1 });
            }
            let subset: Vec<u64> = combo.iter().map(|&i| i as u64).collect();
            let sig: Vec<BigInt> = (1..=k).map(|j| super::power_sum(&subset, j)).collect();
            groups.entry(sig.clone()).or_default().push(subset.clone());
            if subset[0] == 0 {
                order.push((sig, subset));
            }
            if !next_combination(&mut combo, universe) {
                break;
            }
        }
        for (sig, xs) in &order {
            let partner = groups[sig].iter().find(|ys| ys[0] != 0 && disjoint(xs, ys));
            if let Some(ys) = partner {
                let sol = PteSolution::new(xs.clone(), ys.clone())?;
                return Ok(PteSearch { solution: Some(sol), budget_exhausted: false, subsets_examined: examined });
            }
        }
    }
    Ok(PteSearch { solution: None, budget_exhausted: false, subsets_examined: examined })
}

fn disjoint(a: &[u64], b: &[u64]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

/// Advance to the next increasing index tuple below `n`, lexicographically.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let s = c.len();
    let mut i = s;
    while i > 0 {
        i -= 1;
        if c[i] < n - s + i {
            c[i] += 1;
            for t in i + 1..s {
                c[t] = c[t - 1] + 1;
            }
            return true;
        }
    }
    false
}

//! Distinct-sum engines: spread subsets with distinct k-fold sums, and the
//! weighted block certifier `c_1 + c_2 δ_1 + ⋯ + c_k δ_{k-1}`.

use serde::{Deserialize, Serialize};

use crate::setcore::{dilate, dyadic_profile, sumset, FiniteSet, Scalar};

/// Default limit on enumerated tuples or sums.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DistinctError {
    #[error("dyadic bucket too full: {max_bucket} elements in one bucket, need fewer than {m}")]
    DyadicBucketTooFull { max_bucket: usize, m: usize },
    #[error("set too small: need at least {need} elements, have {have}")]
    TooSmall { need: usize, have: usize },
    #[error("set must be positive")]
    NotPositive,
    #[error("enumeration budget exceeded: {needed} > {budget}")]
    Budget { needed: u128, budget: u64 },
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("{blocks} blocks but {weights} weights")]
    ArityMismatch { blocks: usize, weights: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Weights `(δ_0 = 1, δ_1, ..., δ_{k-1})`, all positive.
///
/// Monotonicity is not part of the type; [`WeightVector::is_nonincreasing`]
/// and [`WeightVector::is_strictly_decreasing`] report it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawWeights", into = "RawWeights")]
pub struct WeightVector {
    deltas: Vec<Scalar>,
}

#[derive(Serialize, Deserialize)]
struct RawWeights {
    deltas: Vec<Scalar>,
    #[serde(default, skip_deserializing)]
    alphas: Vec<Scalar>,
}

impl From<WeightVector> for RawWeights {
    fn from(w: WeightVector) -> Self {
        let alphas = w.alphas();
        RawWeights { deltas: w.deltas, alphas }
    }
}

impl TryFrom<RawWeights> for WeightVector {
    type Error = DistinctError;
    fn try_from(raw: RawWeights) -> Result<Self, DistinctError> {
        WeightVector::new(raw.deltas)
    }
}

impl WeightVector {
    pub fn new(deltas: Vec<Scalar>) -> Result<Self, DistinctError> {
        match deltas.first() {
            None => return Err(DistinctError::InvalidWeights("empty weight vector".into())),
            Some(d) if *d != Scalar::one() => {
                return Err(DistinctError::InvalidWeights(format!("first weight is {d}, not 1")))
            }
            _ => {}
        }
        if let Some(d) = deltas.iter().find(|d| !d.is_positive()) {
            return Err(DistinctError::InvalidWeights(format!("weight {d} is not positive")));
        }
        Ok(WeightVector { deltas })
    }

    /// All weights equal to 1.
    pub fn uniform(k: usize) -> Self {
        WeightVector { deltas: vec![Scalar::one(); k.max(1)] }
    }

    pub fn deltas(&self) -> &[Scalar] {
        &self.deltas
    }

    pub fn len(&self) -> usize {
        self.deltas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.deltas.is_empty()
    }

    /// `α_i = δ_i / δ_{i-1}` for `i = 1..k-1`.
    pub fn alphas(&self) -> Vec<Scalar> {
        self.deltas.windows(2).map(|w| &w[1] / &w[0]).collect()
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.deltas.windows(2).all(|w| w[1] <= w[0])
    }

    pub fn is_strictly_decreasing(&self) -> bool {
        self.deltas.windows(2).all(|w| w[1] < w[0])
    }
}

/// Blocks `C_1 > C_2 > ⋯ > C_k`: every element of an earlier block exceeds
/// every element of a later one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockPartition {
    pub blocks: Vec<FiniteSet>,
}

impl BlockPartition {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Product of the block sizes.
    pub fn tuple_count(&self) -> u128 {
        self.blocks.iter().map(|b| b.len() as u128).product()
    }

    /// Nonempty blocks in strict domination order.
    pub fn is_valid(&self) -> bool {
        self.blocks.iter().all(|b| !b.is_empty())
            && self.blocks.windows(2).all(|w| w[0].min() > w[1].max())
    }
}

/// Every `(2m)`-th element of sorted `A` from the smallest, at 1-based
/// indices `1, 2m+1, 4m+1, ...` not exceeding `m^2`.
///
/// Requires `|A| >= m^2` and fewer than `m` elements in every anchored dyadic
/// interval; then consecutive picks differ by a factor of at least 2.
pub fn spread_subset(a: &FiniteSet, m: usize) -> Result<FiniteSet, DistinctError> {
    if m == 0 {
        return Err(DistinctError::InvalidArgument("m must be at least 1".into()));
    }
    if !a.is_positive() {
        return Err(DistinctError::NotPositive);
    }
    let need = m.saturating_mul(m);
    if a.len() < need {
        return Err(DistinctError::TooSmall { need, have: a.len() });
    }
    let profile = dyadic_profile(a).map_err(|_| DistinctError::NotPositive)?;
    if profile.max_bucket >= m {
        return Err(DistinctError::DyadicBucketTooFull { max_bucket: profile.max_bucket, m });
    }
    Ok(FiniteSet::new((0..need).step_by(2 * m).map(|i| a.elements()[i].clone())))
}

/// Which k-tuples [`distinct_ksum_check_with`] compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KSumMode {
    /// Strictly increasing tuples `b_1 < ⋯ < b_k`.
    Increasing,
    /// All multisets of size `k`.
    Multiset,
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Whether all increasing `k`-tuples of `B` have pairwise distinct sums.
pub fn distinct_ksum_check(b: &FiniteSet, k: usize) -> Result<bool, DistinctError> {
    distinct_ksum_check_with(b, k, KSumMode::Increasing, DEFAULT_ENUMERATION_BUDGET)
}

pub fn distinct_ksum_check_with(b: &FiniteSet, k: usize, mode: KSumMode, budget: u64) -> Result<bool, DistinctError> {
    if k == 0 {
        return Err(DistinctError::InvalidArgument("k must be at least 1".into()));
    }
    if b.is_empty() || (b.len() < k && mode == KSumMode::Increasing) {
        return Err(DistinctError::TooSmall { need: k, have: b.len() });
    }
    let n = b.len() as u128;
    let needed = match mode {
        KSumMode::Increasing => binomial(n, k as u128),
        KSumMode::Multiset => binomial(n + k as u128 - 1, k as u128),
    };
    if needed > budget as u128 {
        return Err(DistinctError::Budget { needed, budget });
    }
    let xs = b.elements();
    let mut sums: Vec<Scalar> = Vec::with_capacity(needed as usize);
    let mut idx: Vec<usize> = match mode {
        KSumMode::Increasing => (0..k).collect(),
        KSumMode::Multiset => vec![0; k],
    };
    loop {
        sums.push(idx.iter().map(|&i| xs[i].clone()).sum());
        // advance to the next tuple in lexicographic order
        let mut pos = k;
        let advanced = loop {
            if pos == 0 {
                break false;
            }
            pos -= 1;
            let limit = match mode {
                KSumMode::Increasing => xs.len() - k + pos,
                KSumMode::Multiset => xs.len() - 1,
            };
            if idx[pos] < limit {
                idx[pos] += 1;
                for t in pos + 1..k {
                    idx[t] = match mode {
                        KSumMode::Increasing => idx[t - 1] + 1,
                        KSumMode::Multiset => idx[t - 1],
                    };
                }
                break true;
            }
        };
        if !advanced {
            break;
        }
    }
    let total = sums.len();
    sums.sort_unstable();
    sums.dedup();
    Ok(sums.len() == total)
}

/// The separation hypothesis of the weighted certifier: for every `i` in
/// `1..k`, every ratio `c/d > 1` of elements of `C` satisfies
/// `c/d - 1 > 2k α_i`, where `α_i = max_{j >= i} δ_j / δ_{i-1}`.
///
/// For non-increasing weights `α_i` is the plain ratio `δ_i / δ_{i-1}`.
/// Only consecutive ratios of sorted `C` are scanned; the smallest of them
/// bounds all the others.
pub fn separation_check(c: &FiniteSet, w: &WeightVector, k: usize) -> bool {
    if k != w.len() || !c.is_positive() {
        return false;
    }
    match min_ratio_gap(c) {
        None => true,
        Some(gap) => gap > separation_threshold(w),
    }
}

/// `max_i 2k α_i` with `α_i` as in [`separation_check`]; 0 for one weight.
pub fn separation_threshold(w: &WeightVector) -> Scalar {
    let d = w.deltas();
    let k = d.len();
    let two_k = Scalar::from(2 * k);
    let mut best = Scalar::zero();
    let mut suffix_max: Option<&Scalar> = None;
    for i in (1..k).rev() {
        suffix_max = Some(match suffix_max {
            Some(m) if m >= &d[i] => m,
            _ => &d[i],
        });
        let alpha = suffix_max.expect("set above") / &d[i - 1];
        let t = &two_k * &alpha;
        if t > best {
            best = t;
        }
    }
    best
}

/// `min c_{i+1}/c_i - 1` over consecutive elements of a positive set; `None`
/// for fewer than two elements.
pub fn min_ratio_gap(c: &FiniteSet) -> Option<Scalar> {
    c.elements().windows(2).map(|w| &w[1] / &w[0] - Scalar::one()).min()
}

/// Split `C` into `k` blocks of `floor(|C|/k)` elements, `C_1` holding the
/// largest; the leftover smallest elements are dropped.
pub fn block_partition(c: &FiniteSet, k: usize) -> Result<BlockPartition, DistinctError> {
    if k == 0 {
        return Err(DistinctError::InvalidArgument("k must be at least 1".into()));
    }
    if c.len() < k {
        return Err(DistinctError::TooSmall { need: k, have: c.len() });
    }
    let size = c.len() / k;
    let xs = c.elements();
    let blocks = (0..k)
        .map(|i| {
            let hi = xs.len() - i * size;
            FiniteSet::new(xs[hi - size..hi].iter().cloned())
        })
        .collect();
    Ok(BlockPartition { blocks })
}

/// All weighted sums `c_1 δ_0 + c_2 δ_1 + ⋯ + c_k δ_{k-1}` with `c_i ∈ C_i`,
/// and whether they are pairwise distinct.
pub fn enumerate_sums(p: &BlockPartition, w: &WeightVector) -> Result<(FiniteSet, bool), DistinctError> {
    enumerate_sums_with(p, w, DEFAULT_ENUMERATION_BUDGET)
}

pub fn enumerate_sums_with(
    p: &BlockPartition,
    w: &WeightVector,
    budget: u64,
) -> Result<(FiniteSet, bool), DistinctError> {
    if p.len() != w.len() {
        return Err(DistinctError::ArityMismatch { blocks: p.len(), weights: w.len() });
    }
    let needed = p.tuple_count();
    if needed > budget as u128 {
        return Err(DistinctError::Budget { needed, budget });
    }
    let mut acc = FiniteSet::from_integers([0]);
    for (block, delta) in p.blocks.iter().zip(w.deltas()) {
        let scaled = dilate(delta, block).expect("weights are positive");
        acc = sumset(&acc, &scaled);
    }
    let distinct = acc.len() as u128 == needed;
    Ok((acc, distinct))
}

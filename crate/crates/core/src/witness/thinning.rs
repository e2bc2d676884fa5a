use serde::{Deserialize, Serialize};

use super::{Stage, WitnessError};
use crate::setcore::{FiniteSet, Scalar};

/// How a pool of candidates is thinned to a well-separated set `C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Thinning {
    /// Keep every `stride`-th element only.
    Stride,
    /// Walk upwards keeping each element whose ratio to the last kept one
    /// exceeds `1 + threshold`.
    Separated,
    /// Stride first; fall back to `Separated` when the stride leaves fewer
    /// than `k` elements, violates the threshold, or keeps fewer elements
    /// than `Separated` would.
    #[default]
    StrideThenSeparated,
}

/// The rule actually applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThinningRule {
    Stride,
    Separated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThinningRecord {
    pub rule: ThinningRule,
    pub stride: usize,
    /// `C` must satisfy `c'/c - 1 > threshold` for consecutive elements.
    pub threshold: Scalar,
    pub pool_size: usize,
    pub kept: usize,
}

fn stride_pick(pool: &FiniteSet, stride: usize) -> FiniteSet {
    FiniteSet::new(pool.iter().step_by(stride.max(1)).cloned())
}

fn separated_pick(pool: &FiniteSet, threshold: &Scalar) -> FiniteSet {
    let bound = Scalar::one() + threshold;
    let mut kept: Vec<Scalar> = Vec::new();
    for x in pool {
        match kept.last() {
            Some(last) if !(x / last > bound) => {}
            _ => kept.push(x.clone()),
        }
    }
    FiniteSet::new(kept)
}

fn separated(c: &FiniteSet, threshold: &Scalar) -> bool {
    crate::distinct::min_ratio_gap(c).is_none_or(|g| g > *threshold)
}

/// Thin a positive `pool` to at least `k` elements.
pub(crate) fn thin(
    pool: &FiniteSet,
    stride: usize,
    threshold: &Scalar,
    k: usize,
    mode: Thinning,
) -> Result<(FiniteSet, ThinningRecord), WitnessError> {
    let record = |rule, c: &FiniteSet| ThinningRecord {
        rule,
        stride,
        threshold: threshold.clone(),
        pool_size: pool.len(),
        kept: c.len(),
    };
    let too_small = |c: &FiniteSet| {
        WitnessError::at(Stage::Thinning, format!("C too small: {} elements after thinning, need {k}", c.len()))
    };
    if mode != Thinning::Separated {
        let c = stride_pick(pool, stride);
        let ok = c.len() >= k && separated(&c, threshold);
        let beaten = mode == Thinning::StrideThenSeparated && separated_pick(pool, threshold).len() > c.len();
        if ok && !beaten {
            let r = record(ThinningRule::Stride, &c);
            return Ok((c, r));
        }
        if mode == Thinning::Stride {
            return Err(if c.len() < k {
                too_small(&c)
            } else {
                WitnessError::at(Stage::Separation, format!("stride {stride} leaves a ratio gap at or below {threshold}"))
            });
        }
    }
    let c = separated_pick(pool, threshold);
    if c.len() < k {
        return Err(too_small(&c));
    }
    let r = record(ThinningRule::Separated, &c);
    Ok((c, r))
}

use serde::{Deserialize, Serialize};

use super::{Stage, WitnessError};
use crate::setcore::{floor_rational_power, FiniteSet, Scalar};

/// The window `a_j, ..., a_{j+s}` of sorted `A` with the smallest ratio
/// `a_{j+s} / a_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinGapBlock {
    /// 1-based index of the smallest element.
    pub start_index: usize,
    pub length_s: usize,
    /// The `s + 1` elements of the window.
    pub elements: FiniteSet,
    pub ratio: Scalar,
    /// Whether the window fits in `[x, 2x]`, `x` its smallest element.
    pub dyadic: bool,
}

pub(crate) fn check_delta(delta: &Scalar) -> Result<(), WitnessError> {
    let half = Scalar::new(1, 2).expect("nonzero");
    if !delta.is_positive() || *delta >= half {
        return Err(WitnessError::at(Stage::Input, format!("delta {delta} outside (0, 1/2)")));
    }
    Ok(())
}

/// Minimal window for `s = floor(n^delta)`.
pub fn min_gap_block(a: &FiniteSet, delta: &Scalar) -> Result<MinGapBlock, WitnessError> {
    check_delta(delta)?;
    let s = floor_rational_power(a.len() as u64, delta).map_err(|e| WitnessError::at(Stage::Block, e))?;
    min_gap_window(a, s as usize)
}

/// Minimal window of `s + 1` consecutive elements; ties go to the smallest `j`.
pub fn min_gap_window(a: &FiniteSet, s: usize) -> Result<MinGapBlock, WitnessError> {
    if !a.is_positive() {
        return Err(WitnessError::at(Stage::Input, "set must be positive"));
    }
    if s == 0 || a.len() < s + 1 {
        return Err(WitnessError::at(
            Stage::Block,
            format!("set too small: window of {} elements in a set of {}", s + 1, a.len()),
        ));
    }
    let xs = a.elements();
    let mut best_j = 0;
    let mut best = &xs[s] / &xs[0];
    for j in 1..xs.len() - s {
        let r = &xs[j + s] / &xs[j];
        if r < best {
            best = r;
            best_j = j;
        }
    }
    let dyadic = best <= Scalar::from(2);
    Ok(MinGapBlock {
        start_index: best_j + 1,
        length_s: s,
        elements: FiniteSet::new(xs[best_j..=best_j + s].iter().cloned()),
        ratio: best,
        dyadic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_examples() {
        let gp = FiniteSet::new((0..16).map(|i| Scalar::from(1u64 << i)));
        let b = min_gap_window(&gp, 3).unwrap();
        assert_eq!((b.start_index, b.ratio.clone(), b.dyadic), (1, Scalar::from(8), false));
        let b = min_gap_window(&FiniteSet::from_integers([1, 2, 3, 100]), 2).unwrap();
        assert_eq!(b.elements, FiniteSet::from_integers([1, 2, 3]));
        assert_eq!(b.ratio, Scalar::from(3));
        assert!(min_gap_window(&FiniteSet::from_integers([1, 2, 3]), 3).is_err());
    }

    #[test]
    fn block_from_delta() {
        let gp = FiniteSet::new((0..256).map(|i| Scalar::from_integer(num_bigint::BigInt::from(2u8).pow(i))));
        let b = min_gap_block(&gp, &"1/4".parse().unwrap()).unwrap();
        assert_eq!(b.length_s, 4);
        let b = min_gap_block(&gp, &"3/8".parse().unwrap()).unwrap();
        assert_eq!(b.length_s, 8);
        assert!(min_gap_block(&gp, &"1/2".parse().unwrap()).is_err());
        assert!(min_gap_block(&gp, &Scalar::zero()).is_err());
    }
}

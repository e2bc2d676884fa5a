use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::scalar::{common_denominator, Scalar};
use super::scaled::{pairwise_dedup, Scaled};
use super::set::FiniteSet;
use super::SetError;

/// Default bound on the cardinality of any iterated sumset or product set.
pub const DEFAULT_ELEMENT_CAP: usize = 10_000_000;

/// Cardinality limits for the iterated operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Caps {
    pub max_elements: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_elements: DEFAULT_ELEMENT_CAP }
    }
}

impl Caps {
    pub fn new(max_elements: usize) -> Self {
        Caps { max_elements }
    }
}

/// Anchored dyadic histogram: `buckets[m]` counts elements in `[2^m, 2^(m+1))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicProfile {
    pub buckets: BTreeMap<i64, usize>,
    pub max_bucket: usize,
}

impl DyadicProfile {
    pub fn total(&self) -> usize {
        self.buckets.values().sum()
    }
}

fn shared(a: &FiniteSet, b: &FiniteSet) -> (Scaled, Scaled) {
    let den = common_denominator(a.iter().chain(b.iter()));
    (Scaled::with_denominator(a.elements(), &den), Scaled::with_denominator(b.elements(), &den))
}

fn to_set(s: &Scaled) -> FiniteSet {
    FiniteSet::from_sorted_unchecked(s.to_scalars())
}

fn blowup(cap: usize) -> SetError {
    SetError::Blowup { cap }
}

/// Past this many denominator bits, rescaling every product and reducing it
/// back costs more than multiplying the reduced rationals directly.
const DIRECT_PRODUCT_DEN_BITS: u64 = 64;

fn products(a: &[Scalar], b: &[Scalar], cap: usize) -> Result<Vec<Scalar>, SetError> {
    let (da, db) = (common_denominator(a), common_denominator(b));
    if da.bits() + db.bits() > DIRECT_PRODUCT_DEN_BITS {
        return pairwise_dedup(a, b, cap, |x, y| x * y).map_err(|_| blowup(cap));
    }
    let sa = Scaled::with_denominator(a, &da);
    let sb = Scaled::with_denominator(b, &db);
    Ok(sa.product(&sb, cap).map_err(|_| blowup(cap))?.to_scalars())
}

/// Keep the larger sign class of `a` (negatives are negated), dropping zero.
/// Ties go to the positive class.
pub fn normalize_positive(a: &FiniteSet) -> Result<FiniteSet, SetError> {
    let positives: Vec<Scalar> = a.iter().filter(|x| x.is_positive()).cloned().collect();
    let negatives = a.iter().filter(|x| x.is_negative()).count();
    if positives.is_empty() && negatives == 0 {
        return Err(SetError::NoNonzero);
    }
    if positives.len() >= negatives {
        Ok(FiniteSet::from_sorted_unchecked(positives))
    } else {
        let flipped: Vec<Scalar> = a.iter().rev().filter(|x| x.is_negative()).map(|x| -x).collect();
        Ok(FiniteSet::from_sorted_unchecked(flipped))
    }
}

/// `A + B`.
pub fn sumset(a: &FiniteSet, b: &FiniteSet) -> FiniteSet {
    let (sa, sb) = shared(a, b);
    to_set(&sa.sum(&sb, usize::MAX).expect("uncapped"))
}

/// `A - B`.
pub fn difference_set(a: &FiniteSet, b: &FiniteSet) -> FiniteSet {
    let (sa, sb) = shared(a, b);
    to_set(&sa.sum(&sb.neg(), usize::MAX).expect("uncapped"))
}

/// `A . B`.
pub fn productset(a: &FiniteSet, b: &FiniteSet) -> FiniteSet {
    FiniteSet::from_sorted_unchecked(products(a.elements(), b.elements(), usize::MAX).expect("uncapped"))
}

fn check_fold(k: usize) -> Result<(), SetError> {
    if k == 0 {
        Err(SetError::InvalidArgument("fold count must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn fold_sum_scaled(base: &Scaled, k: usize, cap: usize) -> Result<Scaled, SetError> {
    if base.len() > cap {
        return Err(blowup(cap));
    }
    let mut acc = base.clone();
    for _ in 1..k {
        acc = acc.sum(base, cap).map_err(|_| blowup(cap))?;
    }
    Ok(acc)
}

/// `kA`, deduplicating after each fold, with the default element cap.
pub fn k_fold_sum(a: &FiniteSet, k: usize) -> Result<FiniteSet, SetError> {
    k_fold_sum_capped(a, k, DEFAULT_ELEMENT_CAP)
}

pub fn k_fold_sum_capped(a: &FiniteSet, k: usize, cap: usize) -> Result<FiniteSet, SetError> {
    check_fold(k)?;
    let base = Scaled::from_sorted(a.elements());
    Ok(to_set(&fold_sum_scaled(&base, k, cap)?))
}

/// `A^(k)`, the k-fold product set, with the default element cap.
pub fn k_fold_product(a: &FiniteSet, k: usize) -> Result<FiniteSet, SetError> {
    k_fold_product_capped(a, k, DEFAULT_ELEMENT_CAP)
}

pub fn k_fold_product_capped(a: &FiniteSet, k: usize, cap: usize) -> Result<FiniteSet, SetError> {
    check_fold(k)?;
    if a.len() > cap {
        return Err(blowup(cap));
    }
    let mut acc = a.elements().to_vec();
    for _ in 1..k {
        acc = products(&acc, a.elements(), cap)?;
    }
    Ok(FiniteSet::from_sorted_unchecked(acc))
}

/// `A / A`. Always contains 1 for nonempty `A` and is closed under reciprocal.
pub fn ratio_set(a: &FiniteSet) -> Result<FiniteSet, SetError> {
    if a.contains_zero() {
        return Err(SetError::ZeroElement);
    }
    // over a shared denominator a/b reduces to a ratio of numerators
    let den = common_denominator(a.elements());
    let nums: Vec<BigInt> = a.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    let mut out = Vec::with_capacity(nums.len() * nums.len());
    for p in &nums {
        for q in &nums {
            out.push(Scalar::from_ratio(BigRational::new(p.clone(), q.clone())));
        }
    }
    Ok(FiniteSet::new(out))
}

/// `d * A`.
pub fn dilate(d: &Scalar, a: &FiniteSet) -> Result<FiniteSet, SetError> {
    if d.is_zero() {
        return Err(SetError::ZeroDilation);
    }
    let mut out: Vec<Scalar> = a.iter().map(|x| x * d).collect();
    if d.is_negative() {
        out.reverse();
    }
    Ok(FiniteSet::from_sorted_unchecked(out))
}

/// `KA - LA`; a zero count contributes `{0}`.
pub fn signed_combination(k_plus: usize, l_minus: usize, a: &FiniteSet) -> Result<FiniteSet, SetError> {
    signed_combination_capped(k_plus, l_minus, a, DEFAULT_ELEMENT_CAP)
}

pub fn signed_combination_capped(
    k_plus: usize,
    l_minus: usize,
    a: &FiniteSet,
    cap: usize,
) -> Result<FiniteSet, SetError> {
    if k_plus + l_minus == 0 {
        return Err(SetError::InvalidArgument("K + L must be at least 1".into()));
    }
    let base = Scaled::from_sorted(a.elements());
    let zero = Scaled::with_denominator(&[Scalar::zero()], &base.den);
    let plus = if k_plus == 0 { zero.clone() } else { fold_sum_scaled(&base, k_plus, cap)? };
    let minus = if l_minus == 0 { zero } else { fold_sum_scaled(&base, l_minus, cap)? };
    let out = plus.sum(&minus.neg(), cap).map_err(|_| blowup(cap))?;
    Ok(to_set(&out))
}

/// Dyadic histogram of a positive set.
pub fn dyadic_profile(a: &FiniteSet) -> Result<DyadicProfile, SetError> {
    let mut buckets = BTreeMap::new();
    for x in a {
        let m = x.floor_log2().ok_or(SetError::NotPositive { op: "dyadic_profile" })?;
        *buckets.entry(m).or_insert(0usize) += 1;
    }
    let max_bucket = buckets.values().copied().max().unwrap_or(0);
    Ok(DyadicProfile { buckets, max_bucket })
}

/// `floor(n^(p/q))` computed exactly: the largest `s` with `s^q <= n^p`.
pub fn floor_rational_power(n: u64, exponent: &Scalar) -> Result<u64, SetError> {
    if exponent.is_negative() {
        return Err(SetError::InvalidArgument("negative exponent".into()));
    }
    let p: u32 = exponent
        .numer()
        .try_into()
        .map_err(|_| SetError::InvalidArgument("exponent numerator too large".into()))?;
    let q: u32 = exponent
        .denom()
        .try_into()
        .map_err(|_| SetError::InvalidArgument("exponent denominator too large".into()))?;
    let target = num_traits::pow(BigInt::from(n), p as usize);
    let fits = |s: u64| num_traits::pow(BigInt::from(s), q as usize) <= target;
    // n^(p/q) <= n^p, and the answer is monotone in s
    let (mut lo, mut hi) = (0u64, 1u64);
    while fits(hi) {
        lo = hi;
        hi = hi.saturating_mul(2);
        if hi == u64::MAX {
            break;
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[i64]) -> FiniteSet {
        FiniteSet::from_integers(v.iter().copied())
    }

    fn rset(v: &[&str]) -> FiniteSet {
        FiniteSet::new(v.iter().map(|x| x.parse::<Scalar>().unwrap()))
    }

    fn gp(n: u32) -> FiniteSet {
        FiniteSet::new((0..n).map(|i| Scalar::from_integer(BigInt::from(1) << i)))
    }

    #[test]
    fn normalize_positive_examples() {
        assert_eq!(normalize_positive(&set(&[-3, -1, 0, 2])).unwrap(), set(&[1, 3]));
        assert_eq!(normalize_positive(&set(&[1, 2, 3])).unwrap(), set(&[1, 2, 3]));
        assert!(matches!(normalize_positive(&set(&[0])), Err(SetError::NoNonzero)));
        // tie goes to the positives
        assert_eq!(normalize_positive(&set(&[-5, 7])).unwrap(), set(&[7]));
    }

    #[test]
    fn sumset_examples() {
        assert_eq!(sumset(&set(&[1, 2, 4]), &set(&[1, 2, 4])), set(&[2, 3, 4, 5, 6, 8]));
        let a = rset(&["1/3", "5/7", "2"]);
        assert_eq!(sumset(&set(&[0]), &a), a);
        assert_eq!(sumset(&gp(8), &gp(8)).len(), 36);
    }

    #[test]
    fn productset_examples() {
        assert_eq!(productset(&set(&[1, 2, 4]), &set(&[1, 2, 4])), set(&[1, 2, 4, 8, 16]));
        let a = rset(&["-1/3", "5/7", "2"]);
        assert_eq!(productset(&set(&[1]), &a), a);
        assert_eq!(productset(&gp(100), &gp(100)).len(), 199);
    }

    #[test]
    fn fold_examples() {
        assert_eq!(k_fold_sum(&set(&[0, 1]), 3).unwrap(), set(&[0, 1, 2, 3]));
        let a = rset(&["1/2", "3"]);
        assert_eq!(k_fold_sum(&a, 1).unwrap(), a);
        assert_eq!(k_fold_sum(&gp(8), 2).unwrap().len(), 36);
        assert_eq!(k_fold_product(&set(&[1, 2]), 3).unwrap(), set(&[1, 2, 4, 8]));
        assert_eq!(k_fold_product(&a, 1).unwrap(), a);
        assert_eq!(k_fold_product(&gp(10), 3).unwrap().len(), 28);
        assert!(k_fold_sum(&a, 0).is_err());
    }

    #[test]
    fn fold_cap_aborts() {
        let a = set(&[1, 10, 100, 1000, 10000]);
        assert!(matches!(k_fold_sum_capped(&a, 3, 20), Err(SetError::Blowup { cap: 20 })));
        assert!(k_fold_sum_capped(&a, 3, 35).is_ok());
        assert!(matches!(k_fold_product_capped(&gp(10), 3, 27), Err(SetError::Blowup { .. })));
    }

    #[test]
    fn ratio_set_examples() {
        assert_eq!(ratio_set(&set(&[1, 2, 4])).unwrap(), rset(&["1/4", "1/2", "1", "2", "4"]));
        assert_eq!(ratio_set(&rset(&["7/3"])).unwrap(), set(&[1]));
        assert_eq!(ratio_set(&gp(20)).unwrap().len(), 39);
        assert!(matches!(ratio_set(&set(&[0, 1])), Err(SetError::ZeroElement)));
    }

    #[test]
    fn dilate_examples() {
        assert_eq!(dilate(&Scalar::from(3), &set(&[1, 2])).unwrap(), set(&[3, 6]));
        let a = rset(&["1/2", "3"]);
        assert_eq!(dilate(&Scalar::one(), &a).unwrap(), a);
        assert_eq!(dilate(&"1/2".parse().unwrap(), &set(&[2, 4])).unwrap(), set(&[1, 2]));
        assert_eq!(dilate(&Scalar::from(-1), &set(&[1, 2])).unwrap(), set(&[-2, -1]));
        assert!(dilate(&Scalar::zero(), &a).is_err());
    }

    #[test]
    fn signed_combination_examples() {
        assert_eq!(signed_combination(1, 1, &set(&[1, 2, 4])).unwrap(), set(&[-3, -2, -1, 0, 1, 2, 3]));
        let a = rset(&["1/2", "3"]);
        assert_eq!(signed_combination(1, 0, &a).unwrap(), a);
        assert_eq!(signed_combination(0, 1, &a).unwrap(), rset(&["-3", "-1/2"]));
        assert_eq!(signed_combination(2, 1, &set(&[1, 2, 3])).unwrap().len(), 7);
        assert!(signed_combination(0, 0, &a).is_err());
    }

    #[test]
    fn dyadic_examples() {
        let p = dyadic_profile(&set(&[1, 2, 3, 5, 9])).unwrap();
        assert_eq!(p.buckets, BTreeMap::from([(0, 1), (1, 2), (2, 1), (3, 1)]));
        assert_eq!(p.max_bucket, 2);
        let g = dyadic_profile(&gp(12)).unwrap();
        assert!(g.buckets.values().all(|&c| c == 1));
        let h = dyadic_profile(&rset(&["1", "3/2"])).unwrap();
        assert_eq!(h.buckets[&0], 2);
        assert!(dyadic_profile(&set(&[0, 1])).is_err());
        let r = dyadic_profile(&rset(&["1/3", "1/2", "3/4"])).unwrap();
        assert_eq!(r.buckets, BTreeMap::from([(-2, 1), (-1, 2)]));
        assert_eq!(r.total(), 3);
    }

    #[test]
    fn floor_powers() {
        let d = |s: &str| s.parse::<Scalar>().unwrap();
        assert_eq!(floor_rational_power(256, &d("1/4")).unwrap(), 4);
        assert_eq!(floor_rational_power(256, &d("3/8")).unwrap(), 8);
        assert_eq!(floor_rational_power(255, &d("1/4")).unwrap(), 3);
        assert_eq!(floor_rational_power(36, &d("1/3")).unwrap(), 3);
        assert_eq!(floor_rational_power(1, &d("1/3")).unwrap(), 1);
        assert_eq!(floor_rational_power(10, &d("0")).unwrap(), 1);
    }
}

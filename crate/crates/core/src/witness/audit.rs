use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::setcore::{signed_combination_capped, sumset, FiniteSet, Scalar, SetError, DEFAULT_ELEMENT_CAP};

/// Both sides of `|kA - ℓA| <= K^{k+ℓ} |A|` with `K = |A+A| / |A|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub n: usize,
    pub k: usize,
    pub ell: usize,
    pub sumset_size: usize,
    pub doubling: Scalar,
    pub combination_size: usize,
    /// `K^{k+ℓ} |A|`.
    pub bound: Scalar,
    pub holds: bool,
}

pub fn ruzsa_plunnecke_audit(a: &FiniteSet, k: usize, ell: usize) -> Result<AuditReport, SetError> {
    ruzsa_plunnecke_audit_capped(a, k, ell, DEFAULT_ELEMENT_CAP)
}

/// The comparison is done on integers:
/// `|A+A|^{k+ℓ} >= |kA - ℓA| · |A|^{k+ℓ-1}`.
pub fn ruzsa_plunnecke_audit_capped(a: &FiniteSet, k: usize, ell: usize, cap: usize) -> Result<AuditReport, SetError> {
    if k + ell == 0 {
        return Err(SetError::InvalidArgument("k + ell must be at least 1".into()));
    }
    if a.is_empty() {
        return Err(SetError::InvalidArgument("audit needs a nonempty set".into()));
    }
    let n = a.len();
    let sumset_size = sumset(a, a).len();
    let combination_size = signed_combination_capped(k, ell, a, cap)?.len();
    let e = k + ell;
    let lhs = num_traits::pow(BigInt::from(sumset_size), e);
    let rhs = BigInt::from(combination_size) * num_traits::pow(BigInt::from(n), e - 1);
    let doubling = Scalar::new(sumset_size, n).expect("n > 0");
    let bound = doubling.pow(e as i32) * Scalar::from(n);
    Ok(AuditReport { n, k, ell, sumset_size, doubling, combination_size, bound, holds: lhs >= rhs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        let r = ruzsa_plunnecke_audit(&FiniteSet::from_integers([1, 2, 3]), 2, 1).unwrap();
        assert_eq!(r.combination_size, 7);
        assert_eq!(r.bound, Scalar::new(125, 9).unwrap());
        assert!(r.holds);
        let ap = FiniteSet::from_integers((0..10).map(|i| 3 * i + 1));
        let r = ruzsa_plunnecke_audit(&ap, 2, 2).unwrap();
        assert_eq!(r.combination_size, 4 * 9 + 1);
        assert_eq!(r.doubling, Scalar::new(19, 10).unwrap());
        let r = ruzsa_plunnecke_audit(&ap, 1, 0).unwrap();
        assert!(r.holds && r.combination_size == 10);
        assert!(ruzsa_plunnecke_audit(&ap, 0, 0).is_err());
    }
}

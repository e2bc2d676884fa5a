//! Prouhet–Tarry–Escott solutions and the polynomials built from them.
//!
//! A solution is a pair of equal-size integer lists whose power sums agree
//! up to some degree `k`. The difference of the monomial sums
//! `sum x^{x_i} - sum x^{y_i}` then has a root of multiplicity exactly
//! `k + 1` at `x = 1`, which is what the growth pipelines consume.

mod polynomial;
mod search;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use polynomial::{taylor_at_one, vanishing_order, IntPolynomial, TaylorAtOne};
pub use search::{search_pte, search_pte_with, PteSearch, SearchOptions};

/// Largest `k` accepted by [`prouhet_solution`]; the solution has `2^k`
/// elements per side.
pub const DEFAULT_MAX_PROUHET_K: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PteError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("degree {k} outside 1..={max}")]
    DegreeOutOfRange { k: u32, max: u32 },
    #[error("identical multisets")]
    IdenticalSets,
    #[error("lists have different sizes ({0} vs {1})")]
    SizeMismatch(usize, usize),
    #[error("empty list")]
    Empty,
    #[error("repeated element {0}")]
    Repeated(u64),
    #[error("power sums disagree already at degree 1")]
    NoAgreement,
    #[error("search range {range} exceeds limit {limit}")]
    RangeTooLarge { range: u64, limit: u64 },
    #[error("vanishing order {found} where {expected} was expected")]
    OrderMismatch { expected: usize, found: usize },
}

/// Two equal-size lists of distinct nonnegative integers with equal power
/// sums `sum x^j = sum y^j` for `j = 1..=degree_k`, differing at `degree_k + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSolution", into = "RawSolution")]
pub struct PteSolution {
    pub xs: Vec<u64>,
    pub ys: Vec<u64>,
    pub degree_k: u32,
    pub size_s: usize,
}

#[derive(Serialize, Deserialize)]
struct RawSolution {
    xs: Vec<u64>,
    ys: Vec<u64>,
    k: u32,
}

impl From<PteSolution> for RawSolution {
    fn from(s: PteSolution) -> Self {
        RawSolution { xs: s.xs, ys: s.ys, k: s.degree_k }
    }
}

impl TryFrom<RawSolution> for PteSolution {
    type Error = PteError;
    fn try_from(raw: RawSolution) -> Result<Self, PteError> {
        let sol = PteSolution::new(raw.xs, raw.ys)?;
        if sol.degree_k != raw.k {
            return Err(PteError::OrderMismatch { expected: raw.k as usize, found: sol.degree_k as usize });
        }
        Ok(sol)
    }
}

impl PteSolution {
    /// Validates the lists and records their exact degree.
    pub fn new(xs: Vec<u64>, ys: Vec<u64>) -> Result<Self, PteError> {
        let degree_k = verify_lists(&xs, &ys)?;
        if degree_k == 0 {
            return Err(PteError::NoAgreement);
        }
        let size_s = xs.len();
        Ok(PteSolution { xs, ys, degree_k, size_s })
    }
}

fn power_sum(v: &[u64], j: u32) -> BigInt {
    v.iter().map(|&x| num_traits::pow(BigInt::from(x), j as usize)).sum()
}

fn check_distinct(v: &[u64]) -> Result<BTreeSet<u64>, PteError> {
    let mut seen = BTreeSet::new();
    for &x in v {
        if !seen.insert(x) {
            return Err(PteError::Repeated(x));
        }
    }
    Ok(seen)
}

/// Exact degree of agreement of two lists: the largest `k` with equal power
/// sums for `j = 1..=k`. Returns 0 when they already differ at `j = 1`.
pub fn verify_lists(xs: &[u64], ys: &[u64]) -> Result<u32, PteError> {
    if xs.is_empty() || ys.is_empty() {
        return Err(PteError::Empty);
    }
    if xs.len() != ys.len() {
        return Err(PteError::SizeMismatch(xs.len(), ys.len()));
    }
    if check_distinct(xs)? == check_distinct(ys)? {
        return Err(PteError::IdenticalSets);
    }
    // Newton's identities: agreement for j = 1..=s would force equal sets,
    // so this loop stops by j = s.
    let mut j = 1u32;
    while power_sum(xs, j) == power_sum(ys, j) {
        j += 1;
    }
    Ok(j - 1)
}

/// Exact degree of a solution, recomputed from its lists.
pub fn verify_pte(sol: &PteSolution) -> Result<u32, PteError> {
    verify_lists(&sol.xs, &sol.ys)
}

fn thue_morse_parity(n: u64) -> bool {
    n.count_ones() % 2 == 1
}

/// The Thue–Morse split of `{0, ..., 2^{k+1} - 1}`: `xs` holds the numbers
/// with an even binary digit sum, `ys` the rest.
pub fn prouhet_solution(k: u32) -> Result<PteSolution, PteError> {
    prouhet_solution_bounded(k, DEFAULT_MAX_PROUHET_K)
}

pub fn prouhet_solution_bounded(k: u32, max_k: u32) -> Result<PteSolution, PteError> {
    if k == 0 || k > max_k || k > 30 {
        return Err(PteError::DegreeOutOfRange { k, max: max_k.min(30) });
    }
    let (xs, ys): (Vec<u64>, Vec<u64>) = (0..1u64 << (k + 1)).partition(|&n| !thue_morse_parity(n));
    let sol = PteSolution::new(xs, ys)?;
    debug_assert!(sol.degree_k >= k);
    Ok(sol)
}

/// `sum x^{x_i} - sum x^{y_i}`, with the global sign chosen so the leading
/// coefficient is `+1`.
pub fn pte_polynomial(sol: &PteSolution) -> IntPolynomial {
    let f = IntPolynomial::from_terms(
        sol.xs
            .iter()
            .map(|&e| (e, BigInt::one()))
            .chain(sol.ys.iter().map(|&e| (e, -BigInt::one()))),
    );
    match f.leading_coefficient() {
        Some(c) if c.is_negative() => f.negated(),
        _ => f,
    }
}

/// One member `f_j` of a polynomial family, vanishing at 1 to order `j`.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyMember {
    pub order: usize,
    pub polynomial: IntPolynomial,
    pub taylor: TaylorAtOne,
    /// The solution `f_j` was built from; absent for `f_1 = x - 1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution: Option<PteSolution>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PolynomialFamily {
    pub members: Vec<FamilyMember>,
    /// Largest degree among the members.
    pub max_degree: u64,
}

impl PolynomialFamily {
    pub fn polynomials(&self) -> impl Iterator<Item = &IntPolynomial> {
        self.members.iter().map(|m| &m.polynomial)
    }

    /// Total number of nonzero coefficients over the family.
    pub fn term_count(&self) -> usize {
        self.members.iter().map(|m| m.polynomial.term_count()).sum()
    }
}

/// `f_1, ..., f_{k-1}` with `f_j` vanishing at 1 to order exactly `j`:
/// `f_1 = x - 1` and `f_j` is the polynomial of the degree-`(j-1)` Prouhet
/// solution for `j >= 2`.
pub fn polynomial_family(k: u32) -> Result<PolynomialFamily, PteError> {
    if k < 2 {
        return Err(PteError::DegreeOutOfRange { k, max: DEFAULT_MAX_PROUHET_K + 1 });
    }
    let mut members = Vec::with_capacity(k as usize - 1);
    for j in 1..k {
        let (polynomial, solution) = if j == 1 {
            (IntPolynomial::from_terms([(1, BigInt::one()), (0, -BigInt::one())]), None)
        } else {
            let sol = prouhet_solution(j - 1)?;
            (pte_polynomial(&sol), Some(sol))
        };
        let order = vanishing_order(&polynomial)?;
        if order != j as usize {
            return Err(PteError::OrderMismatch { expected: j as usize, found: order });
        }
        let taylor = taylor_at_one(&polynomial)?;
        members.push(FamilyMember { order, polynomial, taylor, solution });
    }
    let max_degree = members.iter().filter_map(|m| m.polynomial.degree()).max().unwrap_or(0);
    Ok(PolynomialFamily { members, max_degree })
}

/// `f(1) = 0`.
pub fn vanishes_at_one(f: &IntPolynomial) -> bool {
    f.value_at_one().is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prouhet_small_cases() {
        let s1 = prouhet_solution(1).unwrap();
        assert_eq!((s1.xs.clone(), s1.ys.clone()), (vec![0, 3], vec![1, 2]));
        assert_eq!(s1.degree_k, 1);
        let s2 = prouhet_solution(2).unwrap();
        assert_eq!((s2.xs.clone(), s2.ys.clone()), (vec![0, 3, 5, 6], vec![1, 2, 4, 7]));
        assert_eq!(power_sum(&s2.xs, 3), BigInt::from(368));
        assert_eq!(power_sum(&s2.ys, 3), BigInt::from(416));
        assert!(verify_pte(&prouhet_solution(3).unwrap()).unwrap() >= 3);
        assert!(prouhet_solution(0).is_err());
        assert!(prouhet_solution(9).is_err());
    }

    #[test]
    fn verify_examples() {
        assert_eq!(verify_lists(&[0, 3], &[1, 2]).unwrap(), 1);
        assert_eq!(verify_lists(&[0, 3, 5, 6], &[1, 2, 4, 7]).unwrap(), 2);
        assert_eq!(verify_lists(&[1, 2], &[2, 1]), Err(PteError::IdenticalSets));
        assert_eq!(verify_lists(&[0, 5], &[1, 2]).unwrap(), 0);
        assert_eq!(verify_lists(&[0, 1], &[1]), Err(PteError::SizeMismatch(2, 1)));
        assert_eq!(verify_lists(&[0, 0], &[1, 2]), Err(PteError::Repeated(0)));
    }

    #[test]
    fn polynomial_examples() {
        let f = pte_polynomial(&prouhet_solution(1).unwrap());
        assert_eq!(f.to_string(), "x^3 - x^2 - x + 1");
        let g = pte_polynomial(&prouhet_solution(2).unwrap());
        assert!(g.is_monic() && g.has_unit_coefficients());
        assert_eq!(g.term_count(), 8);
        assert_eq!(g.degree(), Some(7));
        assert!(vanishes_at_one(&g));
    }

    #[test]
    fn family_orders() {
        let f2 = polynomial_family(2).unwrap();
        assert_eq!(f2.members.len(), 1);
        assert_eq!(f2.members[0].polynomial.to_string(), "x - 1");
        assert_eq!(f2.max_degree, 1);
        let f3 = polynomial_family(3).unwrap();
        assert_eq!(f3.members[1].polynomial.to_string(), "x^3 - x^2 - x + 1");
        assert_eq!(f3.max_degree, 3);
        assert_eq!(f3.term_count(), 6);
        let f6 = polynomial_family(6).unwrap();
        let orders: Vec<usize> = f6.members.iter().map(|m| m.order).collect();
        assert_eq!(orders, vec![1, 2, 3, 4, 5]);
        assert!(polynomial_family(1).is_err());
    }

    #[test]
    fn solution_json() {
        let s = prouhet_solution(1).unwrap();
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"xs":[0,3],"ys":[1,2],"k":1}"#);
        let back: PteSolution = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<PteSolution>(r#"{"xs":[0,3],"ys":[1,2],"k":2}"#).is_err());
    }
}

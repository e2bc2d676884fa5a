//! Greedy multiplicative cubes.
//!
//! Starting from `D_0 = A`, each step picks a ratio `θ = s/t` with `s > t`
//! in `B` and keeps `D_i = D_{i-1} ∩ θ^{-1} D_{i-1}`, the elements `d` with
//! `θ d` still present. After `k` steps every `d ∈ D_k` spans a full cube
//! `{θ^γ d : γ ∈ {0,1}^k} ⊆ A`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::setcore::{common_denominator, FiniteSet, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CubeError {
    #[error("B too small for k: no admissible ratio left at step {step}")]
    BTooSmall { step: usize },
    #[error("cube collapsed: no survivors at step {step}")]
    Collapsed { step: usize },
    #[error("{0} must be a positive set")]
    NotPositive(&'static str),
    #[error("cube dimension must be at least 1")]
    ZeroDimension,
}

/// One greedy step: the chosen pair, its ratio and the surviving count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeStep {
    pub s: Scalar,
    pub t: Scalar,
    pub theta: Scalar,
    pub survivors: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeCertificate {
    pub thetas: Vec<Scalar>,
    pub survivors: FiniteSet,
    pub source_card: usize,
    pub steps: Vec<CubeStep>,
}

impl CubeCertificate {
    pub fn dimension(&self) -> usize {
        self.thetas.len()
    }
}

/// Numerators of `A` over one shared denominator, in the narrowest
/// representation that holds them.
enum Numerators {
    Small(Vec<i128>),
    Big(Vec<BigInt>),
}

const SMALL_LIMIT_BITS: u64 = 126;

impl Numerators {
    fn of(a: &FiniteSet) -> (Numerators, u64) {
        let den = common_denominator(a.elements());
        let nums: Vec<BigInt> = a.iter().map(|x| x.numer() * (&den / x.denom())).collect();
        let bits = nums.iter().map(BigInt::bits).max().unwrap_or(0);
        if bits <= 62 {
            (Numerators::Small(nums.iter().map(|n| n.to_i128().expect("fits")).collect()), bits)
        } else {
            (Numerators::Big(nums), bits)
        }
    }

    /// Indices `d` in `live` (ascending) with `u * n[d] = v * n[e]` for some
    /// `e` in `live`; `u/v > 1` is the ratio in lowest terms.
    fn survivors(&self, live: &[usize], u: &BigInt, v: &BigInt, bits: u64) -> Vec<usize> {
        let fits = bits + u.bits().max(v.bits()) <= SMALL_LIMIT_BITS;
        match self {
            Numerators::Small(n) if fits => {
                let (u, v) = (u.to_i128().expect("fits"), v.to_i128().expect("fits"));
                merge_hits(live, |i| u * n[i], |i| v * n[i])
            }
            Numerators::Small(n) => {
                merge_hits(live, |i| u * BigInt::from(n[i]), |i| v * BigInt::from(n[i]))
            }
            Numerators::Big(n) => merge_hits(live, |i| u * &n[i], |i| v * &n[i]),
        }
    }
}

/// Two-pointer intersection of the increasing sequences `lhs(live[·])` and
/// `rhs(live[·])`, returning the `live` entries whose `lhs` value matched.
fn merge_hits<T: Ord>(live: &[usize], lhs: impl Fn(usize) -> T, rhs: impl Fn(usize) -> T) -> Vec<usize> {
    let mut out = Vec::new();
    let mut j = 0;
    for &d in live {
        let x = lhs(d);
        while j < live.len() && rhs(live[j]) < x {
            j += 1;
        }
        if j == live.len() {
            break;
        }
        if rhs(live[j]) == x {
            out.push(d);
        }
    }
    out
}

/// Greedy cube of dimension `k` in `A` with ratios from `B / B`.
///
/// Every step scans the pairs `s > t` of `B` whose ratio is not already used
/// and keeps the one with the most survivors; ties go to the
/// lexicographically smallest `(s, t)`.
pub fn greedy_cube(a: &FiniteSet, b: &FiniteSet, k: usize) -> Result<CubeCertificate, CubeError> {
    if k == 0 {
        return Err(CubeError::ZeroDimension);
    }
    if !a.is_positive() || a.is_empty() {
        return Err(CubeError::NotPositive("A"));
    }
    if !b.is_positive() {
        return Err(CubeError::NotPositive("B"));
    }
    // pairs in lexicographic (s, t) order
    let mut pairs: Vec<(usize, usize, Scalar)> = Vec::new();
    for si in 0..b.len() {
        for ti in 0..si {
            let theta = &b.elements()[si] / &b.elements()[ti];
            pairs.push((si, ti, theta));
        }
    }
    let (nums, bits) = Numerators::of(a);
    let mut live: Vec<usize> = (0..a.len()).collect();
    let mut thetas: Vec<Scalar> = Vec::with_capacity(k);
    let mut steps = Vec::with_capacity(k);
    for step in 1..=k {
        let admissible: Vec<&(usize, usize, Scalar)> =
            pairs.iter().filter(|(_, _, th)| !thetas.contains(th)).collect();
        if admissible.is_empty() {
            return Err(CubeError::BTooSmall { step });
        }
        // one evaluation per distinct ratio; the first pair carrying it is kept
        let mut distinct: Vec<(usize, &Scalar)> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (pos, (_, _, th)) in admissible.iter().enumerate() {
            if seen.insert(th) {
                distinct.push((pos, th));
            }
        }
        let scored: Vec<(usize, Vec<usize>)> = distinct
            .par_iter()
            .map(|&(pos, th)| (pos, nums.survivors(&live, th.numer(), th.denom(), bits)))
            .collect();
        // max count, earliest pair on ties
        let best = scored
            .into_iter()
            .reduce(|x, y| if y.1.len() > x.1.len() || (y.1.len() == x.1.len() && y.0 < x.0) { y } else { x })
            .expect("nonempty");
        let (si, ti, theta) = admissible[best.0].clone();
        live = best.1;
        if live.is_empty() {
            return Err(CubeError::Collapsed { step });
        }
        steps.push(CubeStep {
            s: b.elements()[si].clone(),
            t: b.elements()[ti].clone(),
            theta: theta.clone(),
            survivors: live.len(),
        });
        thetas.push(theta);
    }
    let survivors = FiniteSet::new(live.iter().map(|&i| a.elements()[i].clone()));
    Ok(CubeCertificate { thetas, survivors, source_card: a.len(), steps })
}

/// All `2^k` products `θ_1^{γ_1} ⋯ θ_k^{γ_k}`, in binary counting order of `γ`.
pub fn cube_vertices(thetas: &[Scalar]) -> Vec<Scalar> {
    let mut out = vec![Scalar::one()];
    for th in thetas {
        let next: Vec<Scalar> = out.iter().map(|v| v * th).collect();
        out.extend(next);
    }
    out
}

/// Checks every one of the `|D| · 2^k` cube memberships in `A`, and that the
/// ratios exceed 1 and are pairwise distinct.
pub fn verify_cube(cert: &CubeCertificate, a: &FiniteSet) -> bool {
    let one = Scalar::one();
    if cert.thetas.iter().any(|t| *t <= one) {
        return false;
    }
    for (i, t) in cert.thetas.iter().enumerate() {
        if cert.thetas[..i].contains(t) {
            return false;
        }
    }
    if cert.thetas.len() >= usize::BITS as usize {
        return false;
    }
    let vertices = cube_vertices(&cert.thetas);
    cert.survivors.iter().all(|d| vertices.iter().all(|v| a.contains(&(v * d))))
}

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::setcore::{FiniteSet, Scalar, SetError};

/// `{a r^i : 0 <= i < n}`.
pub fn gen_gp(a: &Scalar, r: &Scalar, n: usize) -> Result<FiniteSet, SetError> {
    if n == 0 {
        return Err(SetError::InvalidArgument("gp needs n >= 1".into()));
    }
    if *r <= Scalar::one() {
        return Err(SetError::InvalidArgument(format!("gp ratio must exceed 1, got {r}")));
    }
    if a.is_zero() {
        return Err(SetError::ZeroElement);
    }
    let mut out = Vec::with_capacity(n);
    let mut x = a.clone();
    for _ in 0..n {
        let next = &x * r;
        out.push(x);
        x = next;
    }
    Ok(FiniteSet::new(out).with_name(format!("gp({a},{r},{n})")))
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `{∏ p_i^{e_i} : 0 <= e_i < dims_i}`.
pub fn gen_multiplicative_cube(primes: &[u64], dims: &[usize]) -> Result<FiniteSet, SetError> {
    if primes.is_empty() || primes.len() != dims.len() {
        return Err(SetError::InvalidArgument("cube needs one dimension per prime".into()));
    }
    if let Some(p) = primes.iter().find(|&&p| !is_prime(p)) {
        return Err(SetError::InvalidArgument(format!("{p} is not a prime")));
    }
    if primes.iter().collect::<BTreeSet<_>>().len() != primes.len() {
        return Err(SetError::InvalidArgument("cube primes must be distinct".into()));
    }
    if dims.contains(&0) {
        return Err(SetError::InvalidArgument("cube dimensions must be at least 1".into()));
    }
    let mut values = vec![BigInt::from(1u8)];
    for (&p, &d) in primes.iter().zip(dims) {
        let mut next = Vec::with_capacity(values.len() * d);
        for v in &values {
            let mut x = v.clone();
            for _ in 0..d {
                next.push(x.clone());
                x *= p;
            }
        }
        values = next;
    }
    let name = format!(
        "cube({})",
        primes.iter().zip(dims).map(|(p, d)| format!("{p}^{d}")).collect::<Vec<_>>().join(",")
    );
    Ok(FiniteSet::new(values.into_iter().map(Scalar::from_integer)).with_name(name))
}

/// `n` distinct integers from `[lo, hi]`.
///
/// The stream is `ChaCha8Rng::seed_from_u64(seed)`. Each draw takes one
/// `next_u64`, rejects it when it falls in the top `2^64 mod (hi - lo + 1)`
/// values, and otherwise maps it to `lo + x mod (hi - lo + 1)`. Repeats are
/// skipped until `n` distinct values are collected.
pub fn gen_random_integers(n: usize, lo: i64, hi: i64, seed: u64) -> Result<FiniteSet, SetError> {
    if hi < lo {
        return Err(SetError::InvalidArgument(format!("empty range [{lo}, {hi}]")));
    }
    let width = (hi as i128 - lo as i128 + 1) as u128;
    if (n as u128) > width {
        return Err(SetError::InvalidArgument(format!("cannot draw {n} distinct values from [{lo}, {hi}]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let span = 1u128 << 64;
    let zone = span - span % width;
    while seen.len() < n {
        let x = rng.next_u64() as u128;
        if x >= zone {
            continue;
        }
        seen.insert((lo as i128 + (x % width) as i128) as i64);
    }
    Ok(FiniteSet::from_integers(seen).with_name(format!("random({n},{lo},{hi},seed={seed})")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setcore::productset;

    #[test]
    fn gp_examples() {
        let a = gen_gp(&Scalar::one(), &Scalar::from(2), 8).unwrap();
        assert_eq!(a, FiniteSet::from_integers([1, 2, 4, 8, 16, 32, 64, 128]));
        assert!(gen_gp(&Scalar::from(3), &"1/2".parse().unwrap(), 4).is_err());
        assert!(gen_gp(&Scalar::from(3), &Scalar::one(), 4).is_err());
        let b = gen_gp(&Scalar::one(), &Scalar::from(2), 20).unwrap();
        assert_eq!(productset(&b, &b).len(), 39);
    }

    #[test]
    fn cube_examples() {
        let a = gen_multiplicative_cube(&[2, 3], &[3, 3]).unwrap();
        assert_eq!(a.len(), 9);
        assert_eq!(productset(&a, &a).len(), 25);
        assert_eq!(gen_multiplicative_cube(&[2, 3, 5], &[2, 2, 2]).unwrap().len(), 8);
        let gp = gen_gp(&Scalar::one(), &Scalar::from(5), 6).unwrap();
        assert_eq!(gen_multiplicative_cube(&[5], &[6]).unwrap(), gp);
        assert!(gen_multiplicative_cube(&[2, 4], &[2, 2]).is_err());
        assert!(gen_multiplicative_cube(&[2, 2], &[2, 2]).is_err());
        assert!(gen_multiplicative_cube(&[2], &[0]).is_err());
    }

    #[test]
    fn random_examples() {
        let x = gen_random_integers(5, 1, 100, 7).unwrap();
        assert_eq!(x, gen_random_integers(5, 1, 100, 7).unwrap());
        assert_eq!(x, FiniteSet::from_integers([36, 41, 44, 46, 95]));
        assert!(x.iter().all(|v| *v >= Scalar::from(1) && *v <= Scalar::from(100)));
        assert_eq!(gen_random_integers(10, -4, 5, 3).unwrap(), FiniteSet::from_integers(-4..=5));
        let y = gen_random_integers(10, 1, 1000, 7).unwrap();
        assert!(productset(&y, &y).len() >= 19);
        assert!(gen_random_integers(11, 1, 10, 0).is_err());
        assert!(gen_random_integers(1, i64::MIN, i64::MAX, 0).is_ok());
    }
}

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::PteError;
use crate::setcore::Scalar;

/// Sparse polynomial with arbitrary-precision integer coefficients.
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: BTreeMap<u64, BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        IntPolynomial::default()
    }

    pub fn monomial(exp: u64, coeff: impl Into<BigInt>) -> Self {
        IntPolynomial::from_terms([(exp, coeff.into())])
    }

    /// Sums repeated exponents; drops zeros.
    pub fn from_terms<I: IntoIterator<Item = (u64, BigInt)>>(terms: I) -> Self {
        let mut coeffs: BTreeMap<u64, BigInt> = BTreeMap::new();
        for (e, c) in terms {
            *coeffs.entry(e).or_default() += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        IntPolynomial { coeffs }
    }

    /// `dense[i]` is the coefficient of `x^i`.
    pub fn from_dense(dense: &[BigInt]) -> Self {
        IntPolynomial::from_terms(dense.iter().enumerate().map(|(i, c)| (i as u64, c.clone())))
    }

    pub fn to_dense(&self) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.degree().map_or(0, |d| d as usize + 1)];
        for (&e, c) in &self.coeffs {
            out[e as usize] = c.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<u64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, exp: u64) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigInt)> {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    pub fn leading_coefficient(&self) -> Option<&BigInt> {
        self.coeffs.values().next_back()
    }

    pub fn negated(&self) -> Self {
        IntPolynomial { coeffs: self.coeffs.iter().map(|(&e, c)| (e, -c)).collect() }
    }

    /// Multiply by `x^m`.
    pub fn shifted(&self, m: u64) -> Self {
        IntPolynomial { coeffs: self.coeffs.iter().map(|(&e, c)| (e + m, c.clone())).collect() }
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coefficient().is_some_and(One::is_one)
    }

    pub fn has_unit_coefficients(&self) -> bool {
        self.coeffs.values().all(|c| c.abs().is_one())
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        let mut terms = Vec::with_capacity(self.term_count() * other.term_count());
        for (&a, ca) in &self.coeffs {
            for (&b, cb) in &other.coeffs {
                terms.push((a + b, ca * cb));
            }
        }
        IntPolynomial::from_terms(terms)
    }

    /// Exact evaluation at a rational point (Horner over the dense form).
    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        let mut prev: Option<u64> = None;
        for (&e, c) in self.coeffs.iter().rev() {
            if let Some(p) = prev {
                acc = acc * x.pow((p - e) as i32);
            }
            acc = acc + Scalar::from_integer(c.clone());
            prev = Some(e);
        }
        if let Some(p) = prev {
            acc = acc * x.pow(p as i32);
        }
        acc
    }

    /// Sum of coefficients, i.e. `f(1)`.
    pub fn value_at_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }
}

/// Multiplicity of the root `x = 1`, by exact repeated synthetic division by
/// `(x - 1)`.
pub fn vanishing_order(f: &IntPolynomial) -> Result<usize, PteError> {
    if f.is_zero() {
        return Err(PteError::ZeroPolynomial);
    }
    let mut dense = f.to_dense();
    let mut order = 0;
    loop {
        // remainder of division by (x - 1) is f(1)
        let rem: BigInt = dense.iter().sum();
        if !rem.is_zero() {
            return Ok(order);
        }
        // quotient: q_{i-1} = a_i + q_i, from the top
        let n = dense.len();
        let mut quotient = vec![BigInt::zero(); n - 1];
        let mut carry = BigInt::zero();
        for i in (1..n).rev() {
            carry += &dense[i];
            quotient[i - 1] = carry.clone();
        }
        dense = quotient;
        order += 1;
    }
}

/// Coefficients of `f` expanded in powers of `(x - 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaylorAtOne {
    pub order_j: usize,
    /// `i -> c_i` for every nonzero `c_i`.
    pub coeffs: BTreeMap<usize, BigInt>,
}

impl TaylorAtOne {
    pub fn leading(&self) -> &BigInt {
        &self.coeffs[&self.order_j]
    }

    /// Expand `sum c_i (x - 1)^i` back into the monomial basis.
    pub fn reconstruct(&self) -> IntPolynomial {
        let mut terms = Vec::new();
        for (&i, c) in &self.coeffs {
            // (x - 1)^i = sum_e C(i, e) (-1)^(i - e) x^e
            let mut binom = BigInt::one();
            for e in 0..=i {
                let sign = if (i - e) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                terms.push((e as u64, c * &binom * sign));
                binom = binom * BigInt::from(i - e) / BigInt::from(e + 1);
            }
        }
        IntPolynomial::from_terms(terms)
    }
}

/// Taylor coefficients at `x = 1`: `c_i = sum_e a_e C(e, i)`.
pub fn taylor_at_one(f: &IntPolynomial) -> Result<TaylorAtOne, PteError> {
    let degree = f.degree().ok_or(PteError::ZeroPolynomial)? as usize;
    let mut coeffs = vec![BigInt::zero(); degree + 1];
    for (e, a) in f.terms() {
        let e = e as usize;
        let mut binom = BigInt::one();
        for (i, slot) in coeffs.iter_mut().enumerate().take(e + 1) {
            *slot += a * &binom;
            binom = binom * BigInt::from(e - i) / BigInt::from(i + 1);
        }
    }
    let coeffs: BTreeMap<usize, BigInt> =
        coeffs.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
    let order_j = *coeffs.keys().next().expect("nonzero polynomial has a nonzero Taylor coefficient");
    Ok(TaylorAtOne { order_j, coeffs })
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (&e, c)) in self.coeffs.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let show_coeff = !mag.is_one() || e == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match e {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// JSON form: {"<exponent>": "<coefficient>", ...}
impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        // emitted in exponent order, not string order
        use serde::ser::SerializeMap;
        let mut m = serializer.serialize_map(Some(self.coeffs.len()))?;
        for (e, c) in &self.coeffs {
            m.serialize_entry(&e.to_string(), &c.to_string())?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw: BTreeMap<String, String> = BTreeMap::deserialize(deserializer)?;
        let mut terms = Vec::with_capacity(raw.len());
        for (e, c) in raw {
            let e: u64 = e.parse().map_err(serde::de::Error::custom)?;
            let c: BigInt = c.parse().map_err(serde::de::Error::custom)?;
            terms.push((e, c));
        }
        Ok(IntPolynomial::from_terms(terms))
    }
}

impl Serialize for TaylorAtOne {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let coeffs: Vec<(usize, String)> = self.coeffs.iter().map(|(i, c)| (*i, c.to_string())).collect();
        let mut s = serializer.serialize_struct("TaylorAtOne", 2)?;
        s.serialize_field("order", &self.order_j)?;
        s.serialize_field("coeffs", &coeffs)?;
        s.end()
    }
}

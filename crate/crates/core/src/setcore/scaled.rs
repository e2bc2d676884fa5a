//! Common-denominator integer representation used on the hot paths.
//!
//! A sorted list of rationals `v_i` is stored as integers `n_i` over one
//! shared positive denominator `den`, so `v_i = n_i / den`. Sums of two such
//! lists over the same denominator and products (denominator `den_a * den_b`)
//! then reduce to integer arithmetic, with no gcd per pair. Numerators stay in
//! `i128` while the operands are small enough that the result cannot overflow.
//! Larger sums run on fixed-width two's-complement limbs, up to 2048 bits,
//! and only beyond that on `BigInt`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::slice::ParallelSliceMut;

use super::scalar::Scalar;

/// Headroom kept below `i128::MAX` for the small path.
const SMALL_BITS: u64 = 125;
/// Pair results buffered before an intermediate sort-and-merge.
const BATCH: usize = 1 << 22;
/// Pair additions allowed per capped output element. Sums that collide so
/// heavily that this runs out are reported as overflowing the cap.
const WORK_PER_ELEMENT: usize = 64;
/// Widest output range, in values, that the bitmap sum path will allocate.
const DENSE_SPAN: u128 = 1 << 30;

#[derive(Clone, Debug)]
pub(crate) enum Nums {
    Small(Vec<i128>),
    Big(Vec<BigInt>),
}

#[derive(Clone, Debug)]
pub(crate) struct Scaled {
    pub den: BigInt,
    pub nums: Nums,
}

/// Result size exceeded the cap, or a capped sum ran out of work budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Overflowed;

fn bits_i128(v: &[i128]) -> u64 {
    v.iter().map(|x| 128 - x.unsigned_abs().leading_zeros() as u64).max().unwrap_or(0)
}

fn bits_big(v: &[BigInt]) -> u64 {
    v.iter().map(|x| x.bits()).max().unwrap_or(0)
}

impl Nums {
    pub fn len(&self) -> usize {
        match self {
            Nums::Small(v) => v.len(),
            Nums::Big(v) => v.len(),
        }
    }

    pub fn to_big(&self) -> Vec<BigInt> {
        match self {
            Nums::Small(v) => v.iter().map(|&x| BigInt::from(x)).collect(),
            Nums::Big(v) => v.clone(),
        }
    }

    fn from_big(v: Vec<BigInt>) -> Nums {
        if bits_big(&v) <= SMALL_BITS {
            Nums::Small(v.iter().map(|x| x.to_i128().expect("fits")).collect())
        } else {
            Nums::Big(v)
        }
    }

    fn negated_reversed(&self) -> Nums {
        match self {
            Nums::Small(v) => Nums::Small(v.iter().rev().map(|x| -x).collect()),
            Nums::Big(v) => Nums::Big(v.iter().rev().map(|x| -x).collect()),
        }
    }
}

impl Scaled {
    /// Rescale sorted `values` onto `den`, which must be a multiple of every
    /// denominator present.
    pub fn with_denominator(values: &[Scalar], den: &BigInt) -> Scaled {
        let nums: Vec<BigInt> = values
            .iter()
            .map(|v| {
                if v.denom() == den {
                    v.numer().clone()
                } else {
                    v.numer() * (den / v.denom())
                }
            })
            .collect();
        Scaled { den: den.clone(), nums: Nums::from_big(nums) }
    }

    pub fn from_sorted(values: &[Scalar]) -> Scaled {
        let den = super::scalar::common_denominator(values);
        Scaled::with_denominator(values, &den)
    }

    pub fn len(&self) -> usize {
        self.nums.len()
    }

    pub fn to_scalars(&self) -> Vec<Scalar> {
        let unit = self.den.is_one();
        let make = |n: BigInt| -> Scalar {
            if unit {
                Scalar::from_integer(n)
            } else {
                Scalar::from_ratio(BigRational::new(n, self.den.clone()))
            }
        };
        match &self.nums {
            Nums::Small(v) => v.iter().map(|&x| make(BigInt::from(x))).collect(),
            Nums::Big(v) => v.iter().cloned().map(make).collect(),
        }
    }

    pub fn neg(&self) -> Scaled {
        Scaled { den: self.den.clone(), nums: self.nums.negated_reversed() }
    }

    /// Both operands must share a denominator.
    pub fn sum(&self, other: &Scaled, cap: usize) -> Result<Scaled, Overflowed> {
        debug_assert_eq!(self.den, other.den);
        let nums = match (&self.nums, &other.nums) {
            (Nums::Small(a), Nums::Small(b)) if bits_i128(a).max(bits_i128(b)) < SMALL_BITS => {
                Nums::Small(small_sum(a, b, cap)?)
            }
            _ => {
                let (a, b) = (self.nums.to_big(), other.nums.to_big());
                let need = bits_big(&a).max(bits_big(&b)) + 2;
                let out = match need {
                    0..=256 => wide_sum::<4>(&a, &b, cap)?,
                    257..=512 => wide_sum::<8>(&a, &b, cap)?,
                    513..=1024 => wide_sum::<16>(&a, &b, cap)?,
                    1025..=2048 => wide_sum::<32>(&a, &b, cap)?,
                    _ => sorted_sum_merge(&a, &b, cap, |x, y| x + y)?,
                };
                Nums::from_big(out)
            }
        };
        Ok(Scaled { den: self.den.clone(), nums })
    }

    /// Products; the result lives over `den_a * den_b` and is re-sorted,
    /// since multiplying by a negative flips order.
    pub fn product(&self, other: &Scaled, cap: usize) -> Result<Scaled, Overflowed> {
        let den = &self.den * &other.den;
        let nums = match (&self.nums, &other.nums) {
            (Nums::Small(a), Nums::Small(b)) if bits_i128(a) + bits_i128(b) <= SMALL_BITS => {
                Nums::Small(pairwise_dedup(a, b, cap, |x, y| x * y)?)
            }
            _ => {
                let (a, b) = (self.nums.to_big(), other.nums.to_big());
                Nums::from_big(pairwise_dedup(&a, &b, cap, |x, y| x * y)?)
            }
        };
        Ok(Scaled { den, nums }.reduced())
    }

    /// Divide numerators and denominator by their common gcd, keeping
    /// repeated products from inflating the representation.
    fn reduced(self) -> Scaled {
        if self.den.is_one() {
            return self;
        }
        let mut g = self.den.clone();
        match &self.nums {
            Nums::Small(v) => {
                for x in v {
                    if g.is_one() {
                        break;
                    }
                    g = g.gcd(&BigInt::from(*x));
                }
            }
            Nums::Big(v) => {
                for x in v {
                    if g.is_one() {
                        break;
                    }
                    g = g.gcd(x);
                }
            }
        }
        if g.is_one() || g.is_zero() {
            return self;
        }
        let den = &self.den / &g;
        let nums = match self.nums {
            // a gcd beyond i128 divides only zero numerators
            Nums::Small(v) => match g.to_i128() {
                Some(gi) => Nums::Small(v.into_iter().map(|x| x / gi).collect()),
                None => Nums::Small(v),
            },
            Nums::Big(v) => Nums::from_big(v.into_iter().map(|x| x / &g).collect()),
        };
        Scaled { den, nums }
    }
}

/// A `64 W`-bit integer stored offset by `2^(64W - 1)`, limbs most
/// significant first, so the derived lexicographic order is numeric order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Wide<const W: usize>([u64; W]);

impl<const W: usize> Wide<W> {
    const BIAS: u64 = 1 << 63;

    fn from_big(x: &BigInt) -> Self {
        let bytes = x.to_signed_bytes_le();
        let fill = if x.sign() == num_bigint::Sign::Minus { 0xff } else { 0 };
        let mut limbs = [0u64; W];
        for (i, limb) in limbs.iter_mut().rev().enumerate() {
            let mut b = [fill; 8];
            for (j, slot) in b.iter_mut().enumerate() {
                if let Some(&v) = bytes.get(8 * i + j) {
                    *slot = v;
                }
            }
            *limb = u64::from_le_bytes(b);
        }
        limbs[0] ^= Self::BIAS;
        Wide(limbs)
    }

    fn to_big(mut self) -> BigInt {
        self.0[0] ^= Self::BIAS;
        let bytes: Vec<u8> = self.0.iter().rev().flat_map(|l| l.to_le_bytes()).collect();
        BigInt::from_signed_bytes_le(&bytes)
    }

    /// Biased addition: the two offsets sum to one extra `2^(64W - 1)`.
    fn add(&self, other: &Self) -> Self {
        let mut out = [0u64; W];
        let mut carry = false;
        for i in (0..W).rev() {
            let (s, c1) = self.0[i].overflowing_add(other.0[i]);
            let (s, c2) = s.overflowing_add(carry as u64);
            out[i] = s;
            carry = c1 || c2;
        }
        out[0] ^= Self::BIAS;
        Wide(out)
    }
}

/// Caller guarantees every sum fits in `64 W - 1` bits.
fn wide_sum<const W: usize>(a: &[BigInt], b: &[BigInt], cap: usize) -> Result<Vec<BigInt>, Overflowed> {
    let wa: Vec<Wide<W>> = a.iter().map(Wide::from_big).collect();
    let wb: Vec<Wide<W>> = b.iter().map(Wide::from_big).collect();
    let out = sorted_sum_merge(&wa, &wb, cap, Wide::add)?;
    Ok(out.into_iter().map(Wide::to_big).collect())
}

/// Sums of small sorted numerators. Heavily colliding inputs, where the
/// pair count dwarfs the output range, go through a bitmap over that range;
/// everything else through the heap merge.
fn small_sum(a: &[i128], b: &[i128], cap: usize) -> Result<Vec<i128>, Overflowed> {
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    let lo = a[0] + b[0];
    let hi = a[a.len() - 1] + b[b.len() - 1];
    let span = (hi - lo) as u128 + 1;
    let pairs = a.len() as u128 * b.len() as u128;
    if span > DENSE_SPAN || pairs < 4 * span || pairs < 1 << 20 {
        return sorted_sum_merge(a, b, cap, |x, y| x + y);
    }
    if pairs > work_budget(cap) as u128 {
        return Err(Overflowed);
    }
    dense_sum(a, b, lo, span as usize, cap)
}

fn work_budget(cap: usize) -> usize {
    if cap == usize::MAX {
        usize::MAX
    } else {
        cap.saturating_mul(WORK_PER_ELEMENT)
    }
}

fn dense_sum(a: &[i128], b: &[i128], lo: i128, span: usize, cap: usize) -> Result<Vec<i128>, Overflowed> {
    let mut bits = vec![0u64; span.div_ceil(64)];
    for &x in a {
        let base = x - lo;
        for &y in b {
            let at = (base + y) as usize;
            bits[at >> 6] |= 1 << (at & 63);
        }
    }
    let count: usize = bits.iter().map(|w| w.count_ones() as usize).sum();
    if count > cap {
        return Err(Overflowed);
    }
    let mut out = Vec::with_capacity(count);
    for (i, &w) in bits.iter().enumerate() {
        let mut w = w;
        while w != 0 {
            out.push(lo + (64 * i + w.trailing_zeros() as usize) as i128);
            w &= w - 1;
        }
    }
    Ok(out)
}

/// `{x + y}` for sorted `xs`, `ys`: every row `x + ys` is already sorted, so
/// the rows are merged through a heap instead of sorting all pairs. Under a
/// finite cap, more than `WORK_PER_ELEMENT * cap` pairs is refused outright.
pub(crate) fn sorted_sum_merge<T, F>(xs: &[T], ys: &[T], cap: usize, add: F) -> Result<Vec<T>, Overflowed>
where
    T: Ord + Clone,
    F: Fn(&T, &T) -> T,
{
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;
    let (rows, cols) = if xs.len() <= ys.len() { (xs, ys) } else { (ys, xs) };
    if rows.is_empty() {
        return Ok(Vec::new());
    }
    if rows.len().saturating_mul(cols.len()) > work_budget(cap) {
        return Err(Overflowed);
    }
    let mut heap: BinaryHeap<Reverse<(T, usize, usize)>> =
        rows.iter().enumerate().map(|(i, r)| Reverse((add(r, &cols[0]), i, 0))).collect();
    let mut out: Vec<T> = Vec::new();
    while let Some(mut top) = heap.peek_mut() {
        let (v, i, j) = &mut top.0;
        if out.last() != Some(v) {
            if out.len() == cap {
                return Err(Overflowed);
            }
            out.push(v.clone());
        }
        if *j + 1 < cols.len() {
            *j += 1;
            *v = add(&rows[*i], &cols[*j]);
        } else {
            std::collections::binary_heap::PeekMut::pop(top);
        }
    }
    Ok(out)
}

/// All values `op(x, y)`, sorted and deduplicated. Results are buffered in
/// batches which are sorted and merged into the accumulator; the cap is
/// checked after every merge so blowups stop early.
pub(crate) fn pairwise_dedup<T, F>(xs: &[T], ys: &[T], cap: usize, op: F) -> Result<Vec<T>, Overflowed>
where
    T: Ord + Clone + Send,
    F: Fn(&T, &T) -> T,
{
    let total = xs.len().saturating_mul(ys.len());
    let batch = BATCH.min(cap.saturating_add(1)).max(ys.len());
    let mut acc: Vec<T> = Vec::new();
    let mut buf: Vec<T> = Vec::with_capacity(total.min(batch));
    for x in xs {
        for y in ys {
            buf.push(op(x, y));
        }
        if buf.len() >= batch {
            flush(&mut acc, &mut buf);
            if acc.len() > cap {
                return Err(Overflowed);
            }
        }
    }
    flush(&mut acc, &mut buf);
    if acc.len() > cap {
        return Err(Overflowed);
    }
    Ok(acc)
}

fn flush<T: Ord + Clone + Send>(acc: &mut Vec<T>, buf: &mut Vec<T>) {
    if buf.is_empty() {
        return;
    }
    buf.par_sort_unstable();
    buf.dedup();
    if acc.is_empty() {
        std::mem::swap(acc, buf);
        return;
    }
    let old = std::mem::take(acc);
    *acc = merge_dedup(old, std::mem::take(buf));
}

/// Union of two sorted, deduplicated vectors.
pub(crate) fn merge_dedup<T: Ord>(a: Vec<T>, b: Vec<T>) -> Vec<T> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut ia = a.into_iter().peekable();
    let mut ib = b.into_iter().peekable();
    loop {
        match (ia.peek(), ib.peek()) {
            (Some(x), Some(y)) => match x.cmp(y) {
                std::cmp::Ordering::Less => out.push(ia.next().unwrap()),
                std::cmp::Ordering::Greater => out.push(ib.next().unwrap()),
                std::cmp::Ordering::Equal => {
                    out.push(ia.next().unwrap());
                    ib.next();
                }
            },
            (Some(_), None) => out.push(ia.next().unwrap()),
            (None, Some(_)) => out.push(ib.next().unwrap()),
            (None, None) => break,
        }
    }
    out
}

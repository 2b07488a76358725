//! Checked integer arithmetic helpers, vector utilities and the canonical
//! vector order used for all emitted lists.

use std::cmp::Ordering;

use crate::error::Error;
use crate::Result;

pub(crate) fn add(a: i64, b: i64, ctx: &'static str) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow(ctx))
}

pub(crate) fn sub(a: i64, b: i64, ctx: &'static str) -> Result<i64> {
    a.checked_sub(b).ok_or(Error::Overflow(ctx))
}

pub(crate) fn mul(a: i64, b: i64, ctx: &'static str) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow(ctx))
}

pub(crate) fn neg(a: i64, ctx: &'static str) -> Result<i64> {
    a.checked_neg().ok_or(Error::Overflow(ctx))
}

pub(crate) fn dot(a: &[i64], b: &[i64], ctx: &'static str) -> Result<i64> {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = 0i64;
    for (x, y) in a.iter().zip(b) {
        acc = add(acc, mul(*x, *y, ctx)?, ctx)?;
    }
    Ok(acc)
}

pub(crate) fn vec_sub(a: &[i64], b: &[i64], ctx: &'static str) -> Result<Vec<i64>> {
    a.iter().zip(b).map(|(x, y)| sub(*x, *y, ctx)).collect()
}

pub(crate) fn vec_neg(a: &[i64], ctx: &'static str) -> Result<Vec<i64>> {
    a.iter().map(|x| neg(*x, ctx)).collect()
}

pub(crate) fn vec_scale(c: i64, a: &[i64], ctx: &'static str) -> Result<Vec<i64>> {
    a.iter().map(|x| mul(c, *x, ctx)).collect()
}

/// c*a + d*b, the basic double-description combination step.
pub(crate) fn vec_combine(
    c: i64,
    a: &[i64],
    d: i64,
    b: &[i64],
    ctx: &'static str,
) -> Result<Vec<i64>> {
    a.iter()
        .zip(b)
        .map(|(x, y)| add(mul(c, *x, ctx)?, mul(d, *y, ctx)?, ctx))
        .collect()
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i64
}

pub(crate) fn vec_gcd(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| gcd(g, x))
}

pub fn is_zero_vec(v: &[i64]) -> bool {
    v.iter().all(|&x| x == 0)
}

/// Divide by the gcd of the entries; the zero vector is returned unchanged.
pub(crate) fn primitive(v: &[i64]) -> Vec<i64> {
    let g = vec_gcd(v);
    if g <= 1 {
        return v.to_vec();
    }
    v.iter().map(|x| x / g).collect()
}

/// Floor division (rounds toward negative infinity).
pub(crate) fn div_floor(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    let q = a / b;
    if a % b < 0 {
        q - 1
    } else {
        q
    }
}

/// Canonical order on integer vectors: by coordinate sum, then
/// colexicographically (last differing coordinate decides). Hilbert bases,
/// rays and facet normals are sorted this way, which pins down chart
/// coordinates and all emitted lists.
pub fn graded_colex(a: &[i64], b: &[i64]) -> Ordering {
    debug_assert_eq!(a.len(), b.len());
    let sa: i64 = a.iter().sum();
    let sb: i64 = b.iter().sum();
    sa.cmp(&sb).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            match x.cmp(y) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    })
}

pub(crate) fn sort_canonical(vs: &mut Vec<Vec<i64>>) {
    vs.sort_by(|a, b| graded_colex(a, b));
    vs.dedup();
}

/// SplitMix64: the deterministic generator used for numeric sampling. Seeded
/// explicitly so sampled checks are reproducible across platforms.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in {0, 1, ..., n-1}.
    pub fn next_below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        self.next_u64() % n
    }

    /// Strictly positive sample bounded away from 0 and infinity, suitable
    /// for interior points of model spaces.
    pub fn positive(&mut self) -> f64 {
        0.25 + 1.5 * self.next_f64()
    }
}

//! Sums of three, four and five squares with prescribed gcd.
//!
//! Every positive `n` outside `4^a (8b + 7)` is a sum of three squares whose
//! gcd is `2^l` with `4^l || n`; every `n` is a sum of four squares whose gcd
//! is `2^l` with `2^(2l+1) | n`, `2^(2l+3) ∤ n` (odd `n`: `l = 0`); and every
//! `n` is a sum of five coprime squares. Witnesses are found by bounded
//! exhaustive descent and are canonical: parts in descending order, the
//! lexicographically greatest tuple among those with the required gcd.

use crate::error::{Error, Result};
use crate::scalar::{to_int, Scalar};

/// Default ceiling on `n` for every search.
pub const DEFAULT_CEILING: u64 = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SquaresConfig {
    pub ceiling: u64,
}

impl Default for SquaresConfig {
    fn default() -> Self {
        SquaresConfig { ceiling: DEFAULT_CEILING }
    }
}

/// `n = sum(parts^2)` with `gcd(parts) = 2^l` (`l = 0` for five squares).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SquaresWitness<T> {
    pub n: T,
    pub k: usize,
    pub parts: Vec<T>,
    pub gcd: T,
    pub l: u32,
}

impl<T: Scalar> SquaresWitness<T> {
    pub fn sum_holds(&self) -> bool {
        self.parts.len() == self.k
            && self.parts.iter().fold(T::zero(), |acc, p| acc + p.clone() * p.clone()) == self.n
    }

    pub fn gcd_holds(&self) -> bool {
        gcd_of(&self.parts) == self.gcd && self.gcd == pow2::<T>(self.l)
    }

    /// The exponent `l` is the one dictated by `n` for this `k`.
    pub fn exponent_holds(&self) -> bool {
        match self.k {
            3 => three_square_exponent(&self.n) == self.l,
            4 => four_square_exponent(&self.n).ok() == Some(self.l),
            5 => self.l == 0,
            _ => false,
        }
    }

    pub fn is_canonical_order(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] >= w[1]) && self.parts.iter().all(|p| !p.is_negative())
    }
}

/// Returns `(a, b)` with `n = 4^a (8b + 7)` when `n` is not a sum of three squares.
pub fn is_three_square_excluded<T: Scalar>(n: &T) -> Option<(T, T)> {
    if !n.is_positive() {
        return None;
    }
    let four = <T as Scalar>::from_i64(4);
    let eight = <T as Scalar>::from_i64(8);
    let seven = <T as Scalar>::from_i64(7);
    let mut m = n.clone();
    let mut a = T::zero();
    while m.is_multiple_of(&four) {
        m = m / four.clone();
        a = a + T::one();
    }
    if m.mod_floor(&eight) == seven {
        Some((a, (m - seven) / eight))
    } else {
        None
    }
}

pub fn three_squares<T: Scalar>(n: &T) -> Result<SquaresWitness<T>> {
    three_squares_with(n, SquaresConfig::default())
}

pub fn three_squares_with<T: Scalar>(n: &T, cfg: SquaresConfig) -> Result<SquaresWitness<T>> {
    guard(n, cfg)?;
    if let Some((a, b)) = is_three_square_excluded(n) {
        return Err(Error::LegendreExclusion { a: to_int(&a), b: to_int(&b) });
    }
    let l = three_square_exponent(n);
    scaled_search(n, 3, l)
}

pub fn four_squares<T: Scalar>(n: &T) -> Result<SquaresWitness<T>> {
    four_squares_with(n, SquaresConfig::default())
}

pub fn four_squares_with<T: Scalar>(n: &T, cfg: SquaresConfig) -> Result<SquaresWitness<T>> {
    guard(n, cfg)?;
    let l = four_square_exponent(n)?;
    scaled_search(n, 4, l)
}

pub fn five_coprime_squares<T: Scalar>(n: &T) -> Result<SquaresWitness<T>> {
    five_coprime_squares_with(n, SquaresConfig::default())
}

pub fn five_coprime_squares_with<T: Scalar>(n: &T, cfg: SquaresConfig) -> Result<SquaresWitness<T>> {
    guard(n, cfg)?;
    scaled_search(n, 5, 0)
}

/// Every five-square decomposition of `n` with gcd 1, canonical order first.
pub fn all_five_coprime_squares<T: Scalar>(n: &T, cfg: SquaresConfig) -> Result<Vec<Vec<T>>> {
    guard(n, cfg)?;
    let mut out = Vec::new();
    let mut acc = Vec::with_capacity(5);
    let cap = n.sqrt();
    collect_all(n.clone(), 5, cap, &mut acc, &mut out);
    Ok(out)
}

/// `l` with `4^l | n` and `4^(l+1) ∤ n`.
pub fn three_square_exponent<T: Scalar>(n: &T) -> u32 {
    two_adic_valuation(n) / 2
}

/// `l` with `2^(2l+1) | n` and `2^(2l+3) ∤ n`; odd `n` has `l = 0`.
pub fn four_square_exponent<T: Scalar>(n: &T) -> Result<u32> {
    let v = two_adic_valuation(n);
    if v == 0 {
        return Ok(0);
    }
    let l = (v - 1) / 2;
    if 2 * l + 1 <= v && v < 2 * l + 3 {
        Ok(l)
    } else {
        Err(Error::AmbiguousExponent(format!("no l fits 2-adic valuation {v}")))
    }
}

pub fn two_adic_valuation<T: Scalar>(n: &T) -> u32 {
    if n.is_zero() {
        return 0;
    }
    let two = T::one() + T::one();
    let mut m = n.clone();
    let mut v = 0;
    while m.is_multiple_of(&two) {
        m = m / two.clone();
        v += 1;
    }
    v
}

fn guard<T: Scalar>(n: &T, cfg: SquaresConfig) -> Result<()> {
    if !n.is_positive() {
        return Err(Error::Precondition(format!("n must be positive, got {n}")));
    }
    if n.to_u64().is_none_or(|v| v > cfg.ceiling) {
        return Err(Error::SearchCeiling { n: to_int(n), ceiling: cfg.ceiling.into() });
    }
    Ok(())
}

fn pow2<T: Scalar>(l: u32) -> T {
    let two = T::one() + T::one();
    (0..l).fold(T::one(), |acc, _| acc * two.clone())
}

fn gcd_of<T: Scalar>(parts: &[T]) -> T {
    parts.iter().fold(T::zero(), |g, p| g.gcd(p))
}

/// Searches `n / 4^l` for a coprime decomposition and scales it by `2^l`.
fn scaled_search<T: Scalar>(n: &T, k: usize, l: u32) -> Result<SquaresWitness<T>> {
    let scale = pow2::<T>(l);
    let base = n.clone() / (scale.clone() * scale.clone());
    let mut acc = Vec::with_capacity(k);
    let cap = base.sqrt();
    if !descend(base, k, cap, &mut acc) {
        return Err(Error::SearchExhausted(format!("no {k}-square decomposition of {n} with gcd 2^{l}")));
    }
    let parts: Vec<T> = acc.into_iter().map(|p| p * scale.clone()).collect();
    Ok(SquaresWitness { n: n.clone(), k, parts, gcd: scale, l })
}

/// Depth-first descent over non-increasing parts; the first leaf reached is
/// the lexicographically greatest tuple and must have gcd exactly 1.
fn descend<T: Scalar>(rest: T, k: usize, cap: T, acc: &mut Vec<T>) -> bool {
    if k == 0 {
        return rest.is_zero() && gcd_of(acc).is_one();
    }
    let top = rest.sqrt().min(cap);
    if k == 1 {
        if top.clone() * top.clone() != rest {
            return false;
        }
        acc.push(top);
        if gcd_of(acc).is_one() {
            return true;
        }
        acc.pop();
        return false;
    }
    let kk = <T as Scalar>::from_i64(k as i64);
    let mut m = top;
    loop {
        // the remaining parts are at most m each
        if kk.clone() * m.clone() * m.clone() < rest {
            return false;
        }
        acc.push(m.clone());
        if descend(rest.clone() - m.clone() * m.clone(), k - 1, m.clone(), acc) {
            return true;
        }
        acc.pop();
        if m.is_zero() {
            return false;
        }
        m = m - T::one();
    }
}

fn collect_all<T: Scalar>(rest: T, k: usize, cap: T, acc: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
    if k == 0 {
        if rest.is_zero() && gcd_of(acc).is_one() {
            out.push(acc.clone());
        }
        return;
    }
    let kk = <T as Scalar>::from_i64(k as i64);
    let mut m = rest.sqrt().min(cap);
    loop {
        if kk.clone() * m.clone() * m.clone() < rest {
            return;
        }
        acc.push(m.clone());
        collect_all(rest.clone() - m.clone() * m.clone(), k - 1, m.clone(), acc, out);
        acc.pop();
        if m.is_zero() {
            return;
        }
        m = m - T::one();
    }
}

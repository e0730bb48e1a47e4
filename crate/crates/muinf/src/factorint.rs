//! Integer factorization and pointwise evaluation of the multiplicative
//! functions built from the binary expansion of prime exponents.
//!
//! Everything here is exact 64-bit arithmetic: trial division below 2^16,
//! then deterministic Miller–Rabin plus Pollard–Brent rho for what remains.
//! Values that can outgrow 64 bits (σ∞, σ**) accumulate in 128-bit signed
//! integers and overflow is a reported error, never a silent wrap.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::{Error, Result};

/// Canonical prime-power decomposition of a positive 64-bit integer.
///
/// `factors` is strictly ascending by prime and empty exactly for n = 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Σ_p |B(ν_p)|: the total number of set bits over all exponents.
    pub fn total_bit_count(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e.count_ones()).sum()
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, &(p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// The binary support of an exponent ν ≥ 1: ν = Σ_{j ∈ bits} 2^j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryExpansion {
    pub value: u32,
    /// Ascending bit indices j with 2^j present in `value`.
    pub bits: Vec<u32>,
}

impl BinaryExpansion {
    /// |B(ν)|, the number of set bits.
    pub fn size(&self) -> u32 {
        self.bits.len() as u32
    }
}

/// Binary support of ν ≥ 1. Exponent 0 is never queried and is rejected.
pub fn bit_support(nu: u32) -> Result<BinaryExpansion> {
    if nu == 0 {
        return Err(Error::InvalidInput("exponent 0 has no binary support".into()));
    }
    Ok(BinaryExpansion {
        value: nu,
        bits: (0..32).filter(|j| nu >> j & 1 == 1).collect(),
    })
}

/// Selector for the implemented multiplicative functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArithKind {
    /// Classical Möbius μ.
    Mu,
    /// Modified Möbius μ∞(p^ν) = (−1)^{|B(ν)|}.
    MuInfinity,
    /// Number of infinitary divisors.
    TauInfinity,
    /// Sum of infinitary divisors.
    SigmaInfinity,
    /// Number of bi-unitary divisors.
    TauBiunitary,
    /// Sum of bi-unitary divisors.
    SigmaBiunitary,
}

impl ArithKind {
    pub const ALL: [ArithKind; 6] = [
        ArithKind::Mu,
        ArithKind::MuInfinity,
        ArithKind::TauInfinity,
        ArithKind::SigmaInfinity,
        ArithKind::TauBiunitary,
        ArithKind::SigmaBiunitary,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            ArithKind::Mu => "mu",
            ArithKind::MuInfinity => "mu_inf",
            ArithKind::TauInfinity => "tau_inf",
            ArithKind::SigmaInfinity => "sigma_inf",
            ArithKind::TauBiunitary => "tau_bb",
            ArithKind::SigmaBiunitary => "sigma_bb",
        }
    }
}

impl fmt::Display for ArithKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for ArithKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ArithKind::ALL
            .into_iter()
            .find(|k| k.tag() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown arithmetic function `{s}`")))
    }
}

const SMALL_PRIME_LIMIT: u32 = 1 << 16;

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| sieve_primes(SMALL_PRIME_LIMIT as u64).collect())
}

/// Primes below `limit` by a plain sieve of Eratosthenes.
pub(crate) fn sieve_primes(limit: u64) -> impl Iterator<Item = u32> {
    let limit = limit as usize;
    let mut composite = vec![false; limit];
    let mut i = 2usize;
    while i * i < limit {
        if !composite[i] {
            for m in (i * i..limit).step_by(i) {
                composite[m] = true;
            }
        }
        i += 1;
    }
    (2..limit).filter_map(move |i| (!composite[i]).then_some(i as u32))
}

fn mulmod(a: u64, b: u64, n: u64) -> u64 {
    (a as u128 * b as u128 % n as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, n: u64) -> u64 {
    let mut acc = 1u64;
    a %= n;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, n);
        }
        a = mulmod(a, a, n);
        e >>= 1;
    }
    acc
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

// Witness set valid for all 64-bit integers (Sinclair's seven bases).
const MR_BASES: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];

/// Deterministic Miller–Rabin primality test for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'base: for a in MR_BASES {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

/// Brent-cycle Pollard rho; returns a nontrivial factor of odd composite `n`.
fn pollard_brent(n: u64) -> u64 {
    debug_assert!(n > 1 && !is_prime(n) && n % 2 == 1);
    for c in 1..n {
        if let Some(d) = pollard_brent_once(n, c) {
            return d;
        }
    }
    unreachable!("rho exhausted every polynomial offset")
}

fn pollard_brent_once(n: u64, c: u64) -> Option<u64> {
    // x² + c mod n without overflowing the u64 addition.
    let f = |x: u64| {
        let y = mulmod(x, x, n);
        if y >= n - c {
            y - (n - c)
        } else {
            y + c
        }
    };
    let mut x = 2u64;
    let mut y = 2u64;
    let mut d = 1u64;
    let mut q = 1u64;
    let mut r = 1u64;
    let mut ys = y;
    const BATCH: u64 = 128;
    while d == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && d == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                q = mulmod(q, x.abs_diff(y), n);
            }
            d = gcd(q, n);
            k += BATCH;
        }
        r *= 2;
    }
    if d == n {
        // The batch skipped past the factor; replay one step at a time from
        // the last saved position.
        loop {
            ys = f(ys);
            d = gcd(x.abs_diff(ys), n);
            if d > 1 {
                break;
            }
        }
    }
    (d != n && d != 1).then_some(d)
}

/// Canonical factorization of a positive 64-bit integer.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::InvalidInput("0 has no factorization".into()));
    }
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut m = n;
    for &p in small_primes() {
        let p = p as u64;
        if p * p > m {
            break;
        }
        if m.is_multiple_of(p) {
            let mut e = 0u32;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if m > 1 {
        if m < (SMALL_PRIME_LIMIT as u64).pow(2) || is_prime(m) {
            // Below 2^32 the remaining cofactor is prime after full trial division.
            factors.push((m, 1));
        } else {
            let mut stack = vec![m];
            let mut large: Vec<u64> = Vec::new();
            while let Some(v) = stack.pop() {
                if is_prime(v) {
                    large.push(v);
                } else {
                    let d = pollard_brent(v);
                    stack.push(d);
                    stack.push(v / d);
                }
            }
            large.sort_unstable();
            for p in large {
                match factors.last_mut() {
                    Some(last) if last.0 == p => last.1 += 1,
                    _ => factors.push((p, 1)),
                }
            }
        }
    }
    factors.sort_unstable_by_key(|&(p, _)| p);
    Ok(Factorization { n, factors })
}

/// μ∞(n) ∈ {−1, +1}: the parity of Σ_p |B(ν_p)|. Never zero.
pub fn mu_infinity(n: u64) -> Result<i32> {
    Ok(mu_infinity_of(&factorize(n)?))
}

/// μ∞ from an existing factorization.
pub fn mu_infinity_of(f: &Factorization) -> i32 {
    if f.total_bit_count().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Evaluate one of the six functions at n. Values accumulate in i128 and
/// overflow reports [`Error::Range`].
pub fn pointwise(kind: ArithKind, n: u64) -> Result<i128> {
    pointwise_of(kind, &factorize(n)?)
}

/// As [`pointwise`], from an existing factorization.
pub fn pointwise_of(kind: ArithKind, f: &Factorization) -> Result<i128> {
    match kind {
        ArithKind::Mu => {
            if f.factors.iter().any(|&(_, e)| e >= 2) {
                Ok(0)
            } else if f.factors.len().is_multiple_of(2) {
                Ok(1)
            } else {
                Ok(-1)
            }
        }
        ArithKind::MuInfinity => Ok(mu_infinity_of(f) as i128),
        ArithKind::TauInfinity => Ok(1i128 << f.total_bit_count()),
        ArithKind::SigmaInfinity => {
            let mut acc: u128 = 1;
            for &(p, e) in &f.factors {
                for j in 0..32 {
                    if e >> j & 1 == 1 {
                        acc = acc
                            .checked_mul(1 + pow_2j(p, j))
                            .ok_or_else(|| range_err("sigma_inf", f.n))?;
                    }
                }
            }
            i128::try_from(acc).map_err(|_| range_err("sigma_inf", f.n))
        }
        ArithKind::TauBiunitary => {
            let mut acc: u128 = 1;
            for &(_, e) in &f.factors {
                let choices = if e % 2 == 1 { e as u128 + 1 } else { e as u128 };
                acc = acc
                    .checked_mul(choices)
                    .ok_or_else(|| range_err("tau_bb", f.n))?;
            }
            i128::try_from(acc).map_err(|_| range_err("tau_bb", f.n))
        }
        ArithKind::SigmaBiunitary => {
            let mut acc: u128 = 1;
            for &(p, e) in &f.factors {
                let mut sum: u128 = 0;
                let mut pw: u128 = 1;
                for b in 0..=e {
                    if !(e % 2 == 0 && b == e / 2) {
                        sum = sum
                            .checked_add(pw)
                            .ok_or_else(|| range_err("sigma_bb", f.n))?;
                    }
                    if b < e {
                        pw = pw
                            .checked_mul(p as u128)
                            .ok_or_else(|| range_err("sigma_bb", f.n))?;
                    }
                }
                acc = acc
                    .checked_mul(sum)
                    .ok_or_else(|| range_err("sigma_bb", f.n))?;
            }
            i128::try_from(acc).map_err(|_| range_err("sigma_bb", f.n))
        }
    }
}

fn range_err(what: &str, n: u64) -> Error {
    Error::Range(format!("{what}({n}) exceeds the 128-bit accumulator"))
}

/// p^(2^j); every intermediate square divides a 64-bit integer here, so the
/// u128 arithmetic cannot overflow for valid (p, j) pairs.
fn pow_2j(p: u64, j: u32) -> u128 {
    let mut pw = p as u128;
    for _ in 0..j {
        pw = pw * pw;
    }
    pw
}

/// Smallest-prime-factor table for fast factorization of many small n.
pub struct FactorSieve {
    spf: Vec<u32>,
}

impl FactorSieve {
    /// Build the table for 1..=limit. Memory: 4 bytes per slot.
    pub fn new(limit: u64) -> FactorSieve {
        assert!(limit >= 1 && limit < u32::MAX as u64, "sieve limit out of range");
        let len = limit as usize + 1;
        let mut spf: Vec<u32> = vec![0; len];
        for i in 2..len {
            if spf[i] == 0 {
                for m in (i..len).step_by(i) {
                    if spf[m] == 0 {
                        spf[m] = i as u32;
                    }
                }
            }
        }
        FactorSieve { spf }
    }

    pub fn limit(&self) -> u64 {
        self.spf.len() as u64 - 1
    }

    /// Factorization of n ≤ limit by repeated smallest-prime extraction.
    pub fn factorize(&self, n: u64) -> Factorization {
        assert!(n >= 1 && n <= self.limit(), "n outside sieve range");
        let mut factors = Vec::new();
        let mut m = n as usize;
        while m > 1 {
            let p = self.spf[m] as u64;
            let mut e = 0u32;
            while m > 1 && self.spf[m] as u64 == p {
                m /= p as usize;
                e += 1;
            }
            factors.push((p, e));
        }
        Factorization { n, factors }
    }

    /// μ∞(n) without materializing the factor list.
    pub fn mu_infinity(&self, n: u64) -> i32 {
        assert!(n >= 1 && n <= self.limit(), "n outside sieve range");
        let mut m = n as usize;
        let mut bits = 0u32;
        while m > 1 {
            let p = self.spf[m];
            let mut e = 0u32;
            while m > 1 && self.spf[m] == p {
                m /= p as usize;
                e += 1;
            }
            bits ^= e.count_ones();
        }
        if bits.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

/// Dense table of μ∞(1..=limit); entry 0 is a placeholder.
pub fn mu_infinity_table(limit: u64) -> Vec<i8> {
    let sieve = FactorSieve::new(limit);
    let mut out = vec![0i8; limit as usize + 1];
    for n in 1..=limit {
        out[n as usize] = sieve.mu_infinity(n) as i8;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn factorize_unit_and_small() {
        assert_eq!(factorize(1).unwrap().factors, vec![]);
        assert_eq!(factorize(12).unwrap().factors, vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(97).unwrap().factors, vec![(97, 1)]);
        assert!(factorize(0).is_err());
    }

    #[test]
    fn factorize_mersenne_prime() {
        // 2^61 - 1; primality established by the deterministic Miller–Rabin test.
        let m61 = (1u64 << 61) - 1;
        assert!(is_prime(m61));
        assert_eq!(factorize(m61).unwrap().factors, vec![(m61, 1)]);
    }

    #[test]
    fn factorize_hard_semiprimes() {
        // Products of two ~32-bit primes exercise the rho path.
        let cases = [
            (4_294_967_291u64, 4_294_967_279u64),
            (2_147_483_647, 2_147_483_629),
            (1_000_000_007, 998_244_353),
        ];
        for (p, q) in cases {
            let n = p * q;
            let f = factorize(n).unwrap();
            let mut expect = vec![(p.min(q), 1), (p.max(q), 1)];
            expect.dedup();
            assert_eq!(f.factors, expect, "n = {n}");
        }
        // A prime square above the trial-division range.
        let p = 2_147_483_647u64;
        assert_eq!(factorize(p * p).unwrap().factors, vec![(p, 2)]);
    }

    #[test]
    fn bit_support_examples() {
        let b = bit_support(3).unwrap();
        assert_eq!((b.bits.clone(), b.size()), (vec![0, 1], 2));
        let b = bit_support(4).unwrap();
        assert_eq!((b.bits.clone(), b.size()), (vec![2], 1));
        let b = bit_support(7).unwrap();
        assert_eq!((b.bits.clone(), b.size()), (vec![0, 1, 2], 3));
        assert!(bit_support(0).is_err());
        // Σ 2^j over bits recovers the value.
        for nu in 1..=200u32 {
            let b = bit_support(nu).unwrap();
            assert_eq!(b.bits.iter().map(|&j| 1u32 << j).sum::<u32>(), nu);
        }
    }

    #[test]
    fn mu_infinity_prime_power_table() {
        // ν = 1..7 ↦ −1,−1,+1,−1,+1,+1,−1 for every prime.
        let expect = [-1, -1, 1, -1, 1, 1, -1];
        for p in [2u64, 3, 5, 101] {
            for (nu, &want) in (1u32..=7).zip(&expect) {
                assert_eq!(mu_infinity(p.pow(nu)).unwrap(), want, "p={p} nu={nu}");
            }
        }
    }

    #[test]
    fn mu_infinity_examples() {
        assert_eq!(mu_infinity(1).unwrap(), 1);
        assert_eq!(mu_infinity(8).unwrap(), 1);
        assert_eq!(mu_infinity(128).unwrap(), -1);
        assert_eq!(mu_infinity(12).unwrap(), 1); // (−1)·(−1)
    }

    #[test]
    fn mu_infinity_never_zero() {
        for n in 1..=10_000u64 {
            let v = mu_infinity(n).unwrap();
            assert!(v == 1 || v == -1, "mu_inf({n}) = {v}");
        }
    }

    #[test]
    fn pointwise_examples() {
        assert_eq!(pointwise(ArithKind::TauInfinity, 16).unwrap(), 2);
        assert_eq!(pointwise(ArithKind::SigmaInfinity, 8).unwrap(), 15);
        assert_eq!(pointwise(ArithKind::TauBiunitary, 16).unwrap(), 4);
        assert_eq!(pointwise(ArithKind::Mu, 4).unwrap(), 0);
        for kind in ArithKind::ALL {
            assert_eq!(pointwise(kind, 1).unwrap(), 1, "{kind} at 1");
        }
    }

    #[test]
    fn sigma_biunitary_small() {
        // Bi-unitary divisors of 16 are {1, 2, 8, 16}.
        assert_eq!(pointwise(ArithKind::SigmaBiunitary, 16).unwrap(), 27);
        // Odd exponent keeps every power: 27 → 1+3+9+27.
        assert_eq!(pointwise(ArithKind::SigmaBiunitary, 27).unwrap(), 40);
    }

    #[test]
    fn multiplicative_on_coprime_pairs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
        let mut checked = 0u32;
        while checked < 2_000 {
            let m = rng.gen_range(2u64..=1_000);
            let n = rng.gen_range(2u64..=1_000);
            if m * n > 1_000_000 || gcd(m, n) != 1 {
                continue;
            }
            for kind in ArithKind::ALL {
                let lhs = pointwise(kind, m * n).unwrap();
                let rhs = pointwise(kind, m).unwrap() * pointwise(kind, n).unwrap();
                assert_eq!(lhs, rhs, "{kind} at {m}*{n}");
            }
            checked += 1;
        }
    }

    #[test]
    fn factor_sieve_matches_factorize() {
        let sieve = FactorSieve::new(5_000);
        for n in 1..=5_000u64 {
            assert_eq!(sieve.factorize(n), factorize(n).unwrap());
            assert_eq!(sieve.mu_infinity(n), mu_infinity(n).unwrap());
        }
    }

    #[test]
    fn mu_table_matches_pointwise() {
        let table = mu_infinity_table(2_000);
        for n in 1..=2_000u64 {
            assert_eq!(table[n as usize] as i32, mu_infinity(n).unwrap());
        }
    }

    proptest! {
        #[test]
        fn factorize_roundtrip(n in 1u64..) {
            let f = factorize(n).unwrap();
            let mut prod: u128 = 1;
            let mut last = 0u64;
            for &(p, e) in &f.factors {
                prop_assert!(p > last, "primes not ascending");
                prop_assert!(e >= 1);
                prop_assert!(is_prime(p));
                last = p;
                prod *= (p as u128).pow(e);
            }
            prop_assert_eq!(prod, n as u128);
        }

        #[test]
        fn mu_infinity_range(n in 1u64..) {
            let v = mu_infinity(n).unwrap();
            prop_assert!(v == 1 || v == -1);
        }
    }
}

//! Divisor systems: infinitary, unitary and bi-unitary enumeration, the
//! greatest common unitary divisor, and the odd-binomial divisibility rule.
//!
//! Enumeration assembles each set multiplicatively from per-prime admissible
//! powers instead of filtering the full divisor lattice, since the admissible
//! count can be far below τ(n).

use std::fmt;

use crate::factorint::{factorize, Factorization};
use crate::{Error, Result};

/// Hard cap on materialized set size per call.
const DIVISOR_CAP: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DivisorSystem {
    Infinitary,
    Unitary,
    Biunitary,
    All,
}

impl DivisorSystem {
    pub fn tag(self) -> &'static str {
        match self {
            DivisorSystem::Infinitary => "infinitary",
            DivisorSystem::Unitary => "unitary",
            DivisorSystem::Biunitary => "biunitary",
            DivisorSystem::All => "all",
        }
    }
}

impl fmt::Display for DivisorSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl std::str::FromStr for DivisorSystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            DivisorSystem::Infinitary,
            DivisorSystem::Unitary,
            DivisorSystem::Biunitary,
            DivisorSystem::All,
        ]
        .into_iter()
        .find(|sys| sys.tag() == s)
        .ok_or_else(|| Error::InvalidInput(format!("unknown divisor system `{s}`")))
    }
}

/// A fully materialized, strictly ascending divisor set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorSet {
    pub n: u64,
    pub system: DivisorSystem,
    pub divisors: Vec<u64>,
}

/// The admissible exponents b for p^b under `system`, given ν_p(n) = e.
fn admissible_exponents(e: u32, system: DivisorSystem) -> Vec<u32> {
    match system {
        DivisorSystem::All => (0..=e).collect(),
        DivisorSystem::Unitary => {
            if e == 0 {
                vec![0]
            } else {
                vec![0, e]
            }
        }
        // All b except e/2 when e is even.
        DivisorSystem::Biunitary => (0..=e).filter(|&b| !(e.is_multiple_of(2) && b == e / 2)).collect(),
        // Exactly the submasks of e: products of p^{2^j} over j ∈ B(e).
        DivisorSystem::Infinitary => (0..=e).filter(|&b| b & e == b).collect(),
    }
}

fn admissible_count(e: u32, system: DivisorSystem) -> u64 {
    match system {
        DivisorSystem::All => e as u64 + 1,
        DivisorSystem::Unitary => {
            if e == 0 {
                1
            } else {
                2
            }
        }
        DivisorSystem::Biunitary => {
            if e % 2 == 1 {
                e as u64 + 1
            } else {
                (e as u64).max(1)
            }
        }
        DivisorSystem::Infinitary => 1u64 << e.count_ones(),
    }
}

/// Sorted admissible divisors of a factored integer.
pub(crate) fn divisors_of(f: &Factorization, system: DivisorSystem) -> Result<Vec<u64>> {
    let mut count: u128 = 1;
    for &(_, e) in &f.factors {
        count *= admissible_count(e, system) as u128;
        if count > DIVISOR_CAP as u128 {
            return Err(Error::TooManyDivisors {
                n: f.n,
                system: system.tag(),
                count,
                cap: DIVISOR_CAP,
            });
        }
    }
    let mut out: Vec<u64> = Vec::with_capacity(count as usize);
    out.push(1);
    for &(p, e) in &f.factors {
        let powers: Vec<u64> = admissible_exponents(e, system)
            .into_iter()
            .map(|b| p.pow(b))
            .collect();
        let base = std::mem::take(&mut out);
        out.reserve(base.len() * powers.len());
        for &d in &base {
            for &q in &powers {
                out.push(d * q);
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

pub fn divisor_set(n: u64, system: DivisorSystem) -> Result<DivisorSet> {
    let f = factorize(n)?;
    Ok(DivisorSet {
        n,
        system,
        divisors: divisors_of(&f, system)?,
    })
}

/// The set {1} ∪ {products of p^{2^j}, j ∈ B(ν_p)}; |set| = 2^{Σ|B(ν_p)|}.
pub fn infinitary_divisors(n: u64) -> Result<DivisorSet> {
    divisor_set(n, DivisorSystem::Infinitary)
}

/// All d | n with gcd(d, n/d) = 1; 2^ω(n) of them.
pub fn unitary_divisors(n: u64) -> Result<DivisorSet> {
    divisor_set(n, DivisorSystem::Unitary)
}

/// Per prime power p^a, every p^b except b = a/2 for even a; equivalently
/// all d | n with gcud(d, n/d) = 1.
pub fn biunitary_divisors(n: u64) -> Result<DivisorSet> {
    divisor_set(n, DivisorSystem::Biunitary)
}

/// The prime-power rule behind infinitary divisibility: p^b |∞ p^a exactly
/// when b is a submask of a, i.e. when the binomial coefficient C(a, b) is odd.
pub fn exponent_divides_infinitary(b: u64, a: u64) -> bool {
    b & a == b
}

/// Whether d is an infinitary divisor of n.
pub fn divides_infinitary(d: u64, n: u64) -> Result<bool> {
    if d == 0 || n == 0 {
        return Err(Error::InvalidInput("divisibility is over positive integers".into()));
    }
    if d == 1 {
        return Ok(true);
    }
    if !n.is_multiple_of(d) {
        return Ok(false);
    }
    // Only the primes of d matter; extract their exponents in n directly.
    let fd = factorize(d)?;
    for &(p, b) in &fd.factors {
        let mut a = 0u64;
        let mut m = n;
        while m.is_multiple_of(p) {
            m /= p;
            a += 1;
        }
        if !exponent_divides_infinitary(b as u64, a) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Greatest common unitary divisor: the largest d that unitarily divides
/// both a and b. d = ∏ p^e over primes with ν_p(a) = ν_p(b) = e ≥ 1.
pub fn gcud(a: u64, b: u64) -> Result<u64> {
    if a == 0 || b == 0 {
        return Err(Error::InvalidInput("gcud is over positive integers".into()));
    }
    let g = gcd(a, b);
    if g == 1 {
        return Ok(1);
    }
    let fg = factorize(g)?;
    let mut out = 1u64;
    for &(p, e) in &fg.factors {
        let pe = p.pow(e);
        // ν_p(g) = min(ν_p(a), ν_p(b)); equality of both with e means
        // p^{e+1} divides neither side.
        if !(a / pe).is_multiple_of(p) && !(b / pe).is_multiple_of(p) {
            out *= pe;
        }
    }
    Ok(out)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

//! Convolution engine over dense value tables: the Dirichlet, infinitary and
//! bi-unitary products, inverse computation, and an associativity-witness
//! scanner.
//!
//! Tables hold exact rationals. All shipped inverses have f(1) = ±1 and stay
//! integral, but the existence condition is only f(1) ≠ 0, so the recursion
//! divides exactly rather than assuming unit leading values.

use num::{BigInt, BigRational, Zero};

use crate::divisors::{divisors_of, DivisorSystem};
use crate::factorint::{self, FactorSieve};
use crate::{Error, Result};

/// Which admissibility rule the convolution sum runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConvKind {
    /// All divisor pairs (d, n/d).
    Dirichlet,
    /// d an infinitary divisor of n.
    Infinitary,
    /// gcud(d, n/d) = 1.
    Biunitary,
}

impl ConvKind {
    pub const ALL: [ConvKind; 3] = [ConvKind::Dirichlet, ConvKind::Infinitary, ConvKind::Biunitary];

    fn system(self) -> DivisorSystem {
        match self {
            ConvKind::Dirichlet => DivisorSystem::All,
            ConvKind::Infinitary => DivisorSystem::Infinitary,
            ConvKind::Biunitary => DivisorSystem::Biunitary,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            ConvKind::Dirichlet => "dirichlet",
            ConvKind::Infinitary => "infinitary",
            ConvKind::Biunitary => "biunitary",
        }
    }
}

impl std::fmt::Display for ConvKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

impl std::str::FromStr for ConvKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ConvKind::ALL
            .into_iter()
            .find(|k| k.tag() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown convolution kind `{s}`")))
    }
}

/// Dense table of f(1..=N); the currency of the convolution engine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FnTable {
    /// values[n] = f(n); slot 0 is an unused placeholder.
    values: Vec<BigRational>,
}

impl FnTable {
    pub fn from_fn(limit: u64, mut f: impl FnMut(u64) -> BigRational) -> FnTable {
        let mut values = Vec::with_capacity(limit as usize + 1);
        values.push(BigRational::zero());
        for n in 1..=limit {
            values.push(f(n));
        }
        FnTable { values }
    }

    pub fn from_integers(limit: u64, mut f: impl FnMut(u64) -> i64) -> FnTable {
        Self::from_fn(limit, |n| BigRational::from_integer(BigInt::from(f(n))))
    }

    /// The constant function 1.
    pub fn constant_one(limit: u64) -> FnTable {
        Self::from_integers(limit, |_| 1)
    }

    /// The convolution identity δ: δ(1) = 1, δ(n) = 0 otherwise.
    pub fn delta(limit: u64) -> FnTable {
        Self::from_integers(limit, |n| if n == 1 { 1 } else { 0 })
    }

    /// f(n) = n.
    pub fn identity(limit: u64) -> FnTable {
        Self::from_integers(limit, |n| n as i64)
    }

    /// μ∞(1..=N) filled from the factor sieve.
    pub fn mu_infinity(limit: u64) -> FnTable {
        let table = factorint::mu_infinity_table(limit);
        Self::from_integers(limit, |n| table[n as usize] as i64)
    }

    pub fn limit(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    pub fn get(&self, n: u64) -> &BigRational {
        assert!(n >= 1 && n <= self.limit(), "index {n} outside table");
        &self.values[n as usize]
    }

    /// Exact integer value at n, or a range error when f(n) is not integral
    /// or does not fit 128 bits.
    pub fn to_i128(&self, n: u64) -> Result<i128> {
        let v = self.get(n);
        if !v.is_integer() {
            return Err(Error::Range(format!("table value at {n} is not an integer")));
        }
        v.to_integer()
            .try_into()
            .map_err(|_| Error::Range(format!("table value at {n} exceeds 128 bits")))
    }

    fn check_covers(&self, limit: u64) -> Result<()> {
        if self.limit() < limit {
            return Err(Error::TableTooShort {
                covered: self.limit(),
                requested: limit,
            });
        }
        Ok(())
    }
}

/// (f ⋆ g)(n) = Σ f(d) g(n/d) over the kind's admissible divisors d of n,
/// for every n ≤ limit.
pub fn convolve(kind: ConvKind, f: &FnTable, g: &FnTable, limit: u64) -> Result<FnTable> {
    f.check_covers(limit)?;
    g.check_covers(limit)?;
    let sieve = FactorSieve::new(limit.max(1));
    let mut values = Vec::with_capacity(limit as usize + 1);
    values.push(BigRational::zero());
    for n in 1..=limit {
        let fact = sieve.factorize(n);
        let mut acc = BigRational::zero();
        for d in divisors_of(&fact, kind.system())? {
            acc += f.get(d) * g.get(n / d);
        }
        values.push(acc);
    }
    Ok(FnTable { values })
}

/// The inverse of f under the kind's convolution: the unique g with
/// f ⋆ g = δ on 1..=limit. Exists exactly when f(1) ≠ 0.
pub fn inverse(kind: ConvKind, f: &FnTable, limit: u64) -> Result<FnTable> {
    f.check_covers(limit)?;
    let lead = f.get(1);
    if lead.is_zero() {
        return Err(Error::NoInverse);
    }
    let lead_inv = lead.recip();
    let sieve = FactorSieve::new(limit.max(1));
    let mut values = Vec::with_capacity(limit as usize + 1);
    values.push(BigRational::zero());
    values.push(lead_inv.clone());
    for n in 2..=limit {
        let fact = sieve.factorize(n);
        // 0 = Σ_{admissible d} f(d) g(n/d), so the d = 1 term isolates g(n).
        let mut acc = BigRational::zero();
        for d in divisors_of(&fact, kind.system())? {
            if d > 1 {
                acc += f.get(d) * &values[(n / d) as usize];
            }
        }
        values.push(-(&lead_inv * acc));
    }
    Ok(FnTable { values })
}

/// A triple and point where the two associations of a convolution differ.
#[derive(Clone, Debug, PartialEq)]
pub struct NonassocWitness {
    pub f_index: usize,
    pub g_index: usize,
    pub h_index: usize,
    pub n: u64,
    /// ((f ⋆ g) ⋆ h)(n)
    pub left: BigRational,
    /// (f ⋆ (g ⋆ h))(n)
    pub right: BigRational,
}

/// Scan pool³ in index order, n ascending within each triple, for the first
/// point where ((f ⋆ g) ⋆ h)(n) ≠ (f ⋆ (g ⋆ h))(n).
pub fn find_nonassociative_witness(
    kind: ConvKind,
    limit: u64,
    pool: &[FnTable],
) -> Result<Option<NonassocWitness>> {
    if pool.is_empty() {
        return Err(Error::InvalidInput("witness pool is empty".into()));
    }
    for (fi, f) in pool.iter().enumerate() {
        for (gi, g) in pool.iter().enumerate() {
            let fg = convolve(kind, f, g, limit)?;
            for (hi, h) in pool.iter().enumerate() {
                let left = convolve(kind, &fg, h, limit)?;
                let gh = convolve(kind, g, h, limit)?;
                let right = convolve(kind, f, &gh, limit)?;
                for n in 1..=limit {
                    if left.get(n) != right.get(n) {
                        return Ok(Some(NonassocWitness {
                            f_index: fi,
                            g_index: gi,
                            h_index: hi,
                            n,
                            left: left.get(n).clone(),
                            right: right.get(n).clone(),
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

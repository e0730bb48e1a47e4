//! Arithmetic of the modified Möbius function μ∞ and its divisor systems.
//!
//! The crate implements, end to end:
//!
//! * pointwise evaluation of μ, μ∞, τ∞, σ∞, τ**, σ** from 64-bit
//!   factorizations ([`factorint`]);
//! * infinitary, unitary and bi-unitary divisor enumeration, the greatest
//!   common unitary divisor, and the odd-binomial divisibility rule
//!   ([`divisors`]);
//! * a convolution engine over dense value tables for the Dirichlet,
//!   infinitary and bi-unitary products, with exact rational inverses
//!   ([`convolve`]);
//! * a segmented, parallel, resumable sieve for the summatory function
//!   𝔐(x) = Σ_{n≤x} μ∞(n) at 10^8-scale, with ratio extrema and the
//!   weak-Mertens integral ([`sieve`]);
//! * complex evaluation of ζ(s), the product 𝔪(s) = ∏_{j≥0} ζ(2^j s)^{-1},
//!   the difference series F(s), and the factorwise Euler-product bounds
//!   ([`zetafun`]);
//! * desk-scale truncated explicit formulas over ingested zeta-zero
//!   ordinates, classical and layered ([`explicit`]);
//! * a reproducible ±1 random-walk simulator for the Chebyshev,
//!   Moivre–Laplace and iterated-logarithm comparisons ([`walk`]).

pub mod convolve;
pub mod divisors;
mod error;
pub mod explicit;
pub mod factorint;
pub mod sieve;
pub mod walk;
pub mod zetafun;

pub use error::{Error, Result};

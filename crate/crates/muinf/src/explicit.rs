//! Desk-scale truncated explicit formulas over ingested zeta-zero ordinates:
//! the classical Σ x^ρ/(ρζ′(ρ)) for M(x), and the layered sum
//! Σ_{j<J} Σ_{|γ|<T} c_j(ρ) x^{2^{-j}ρ}/(2^{-j}ρ) for 𝔐(x).
//!
//! The layer coefficients are the residues of 𝔪(s)x^s/s at s = 2^{-j}ρ.
//! Writing 𝔪(s) = N_J(s) ∏_{ι<J} ζ(2^ι s)^{-1} and expanding the vanishing
//! factor to first order, ζ(2^j s) ≈ 2^j ζ′(ρ)(s − 2^{-j}ρ), gives
//!
//!   c_j(ρ) = [2^j ζ′(ρ)]^{-1} · N_J(2^{-j}ρ) · ∏_{ι<J, ι≠j} ζ(2^{ι-j}ρ)^{-1},
//!
//! which is what `residue_coeff` evaluates. Zeros are taken on the critical
//! line and assumed simple; a tiny |ζ′(ρ)| is reported as an error instead
//! of falling back to multiple-zero (polynomial-in-log-x) coefficients.

use std::path::{Path, PathBuf};

use num::complex::Complex64;

use crate::zetafun::{self, T_ENVELOPE};
use crate::{Error, Result};

/// Ascending positive ordinates γ of nontrivial zeros ρ = 1/2 + iγ.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroList {
    pub ordinates: Vec<f64>,
    pub source: Option<PathBuf>,
}

impl ZeroList {
    /// Validate and wrap a list of ordinates.
    pub fn from_ordinates(ordinates: Vec<f64>) -> Result<ZeroList> {
        for (i, &g) in ordinates.iter().enumerate() {
            if !g.is_finite() || g <= 0.0 {
                return Err(Error::InvalidInput(format!("ordinate {i} not positive")));
            }
            if g > T_ENVELOPE {
                return Err(Error::InvalidInput(format!(
                    "ordinate {g} beyond the accuracy envelope {T_ENVELOPE}"
                )));
            }
            if i > 0 && ordinates[i - 1] >= g {
                return Err(Error::InvalidInput(format!(
                    "ordinates not strictly ascending at index {i}"
                )));
            }
        }
        Ok(ZeroList {
            ordinates,
            source: None,
        })
    }

    /// Parse a text file: one decimal ordinate per line, `#` starts a comment.
    pub fn load(path: &Path) -> Result<ZeroList> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let parse_err = |line: usize, message: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            message,
        };
        let mut ordinates = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let g: f64 = content
                .parse()
                .map_err(|_| parse_err(line_no, format!("not a number: `{content}`")))?;
            if !g.is_finite() || g <= 0.0 {
                return Err(parse_err(line_no, "ordinate must be positive".into()));
            }
            if g > T_ENVELOPE {
                return Err(parse_err(
                    line_no,
                    format!("ordinate {g} beyond the accuracy envelope {T_ENVELOPE}"),
                ));
            }
            if let Some(&last) = ordinates.last() {
                if last >= g {
                    return Err(parse_err(line_no, "ordinates must be strictly ascending".into()));
                }
            }
            ordinates.push(g);
        }
        Ok(ZeroList {
            ordinates,
            source: Some(path.to_path_buf()),
        })
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    /// Ordinates strictly below the cutoff.
    pub fn below(&self, t_cutoff: f64) -> &[f64] {
        let end = self.ordinates.partition_point(|&g| g < t_cutoff);
        &self.ordinates[..end]
    }
}

/// Truncation parameters: layer depth J and ordinate cutoff T.
#[derive(Clone, Copy, Debug)]
pub struct ExplicitConfig {
    pub depth: u32,
    pub t_cutoff: f64,
}

impl Default for ExplicitConfig {
    /// J = 2, T = 100: deeper layers contribute at the x^{1/8} scale,
    /// invisible on desk grids.
    fn default() -> Self {
        ExplicitConfig {
            depth: 2,
            t_cutoff: 100.0,
        }
    }
}

impl ExplicitConfig {
    fn validate(&self, zeros: &ZeroList) -> Result<()> {
        if self.depth < 1 {
            return Err(Error::InvalidInput("depth J must be at least 1".into()));
        }
        if !self.t_cutoff.is_finite() || self.t_cutoff <= 0.0 {
            return Err(Error::InvalidInput("cutoff T must be positive".into()));
        }
        match zeros.ordinates.last() {
            None => Err(Error::InvalidInput(
                "empty zero list cannot support any cutoff".into(),
            )),
            Some(&max) if self.t_cutoff > max => Err(Error::InvalidInput(format!(
                "cutoff T = {} beyond the largest ingested ordinate {max}",
                self.t_cutoff
            ))),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormulaKind {
    /// Σ 2 Re x^ρ/(ρ ζ′(ρ)) — the classical truncation for M(x).
    Classical,
    /// Σ_j Σ_γ 2 Re c_j(ρ) x^{2^{-j}ρ}/(2^{-j}ρ) — the layered sum for 𝔐(x).
    Modified,
}

impl FormulaKind {
    pub fn tag(self) -> &'static str {
        match self {
            FormulaKind::Classical => "classical",
            FormulaKind::Modified => "modified",
        }
    }
}

impl std::str::FromStr for FormulaKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(FormulaKind::Classical),
            "modified" => Ok(FormulaKind::Modified),
            _ => Err(Error::InvalidInput(format!("unknown formula kind `{s}`"))),
        }
    }
}

/// The layer-j residue coefficient at ρ = 1/2 + iγ (γ may be negative for
/// the conjugate zero).
pub fn residue_coeff(j: u32, gamma: f64, depth: u32) -> Result<Complex64> {
    if j >= depth {
        return Err(Error::InvalidInput(format!(
            "layer {j} outside the truncation depth {depth}"
        )));
    }
    let rho = Complex64::new(0.5, gamma);
    let zp = zetafun::zeta_prime(rho)?;
    if zp.norm() < 1e-6 {
        return Err(Error::Singular(format!(
            "|zeta'(rho)| = {} at gamma = {gamma}; zero too close to multiple",
            zp.norm()
        )));
    }
    let scaled_rho = rho * (-(j as f64)).exp2();
    let mut coeff = (zp * (j as f64).exp2()).inv();
    coeff *= zetafun::tail_product(scaled_rho, depth)?.value;
    for layer in 0..depth {
        if layer == j {
            continue;
        }
        let arg = rho * ((layer as f64) - (j as f64)).exp2();
        let factor = zetafun::zeta(arg)?;
        if factor.norm() == 0.0 {
            return Err(Error::Singular(format!("zeta vanished at {arg}")));
        }
        coeff /= factor;
    }
    Ok(coeff)
}

/// One precomputed oscillating term 2 Re coeff·x^{exponent}/exponent.
struct Term {
    exponent: Complex64,
    coeff: Complex64,
}

impl Term {
    fn eval(&self, ln_x: f64) -> f64 {
        2.0 * (self.coeff * (self.exponent * ln_x).exp() / self.exponent).re
    }
}

/// Coefficients in deterministic order: layers ascending, ordinates
/// ascending within each layer (the classical kind has a single layer).
fn term_coeffs(kind: FormulaKind, config: &ExplicitConfig, zeros: &ZeroList) -> Result<Vec<Term>> {
    config.validate(zeros)?;
    let used = zeros.below(config.t_cutoff);
    let mut terms = Vec::new();
    match kind {
        FormulaKind::Classical => {
            for &gamma in used {
                let rho = Complex64::new(0.5, gamma);
                let zp = zetafun::zeta_prime(rho)?;
                if zp.norm() < 1e-6 {
                    return Err(Error::Singular(format!(
                        "|zeta'(rho)| too small at gamma = {gamma}"
                    )));
                }
                terms.push(Term {
                    exponent: rho,
                    coeff: zp.inv(),
                });
            }
        }
        FormulaKind::Modified => {
            for j in 0..config.depth {
                for &gamma in used {
                    terms.push(Term {
                        exponent: Complex64::new(0.5, gamma) * (-(j as f64)).exp2(),
                        coeff: residue_coeff(j, gamma, config.depth)?,
                    });
                }
            }
        }
    }
    Ok(terms)
}

/// The truncated explicit formula at one point; conjugate pairs are folded
/// into 2·Re per term, so the result is real by construction.
pub fn truncated_explicit(
    kind: FormulaKind,
    x: f64,
    config: &ExplicitConfig,
    zeros: &ZeroList,
) -> Result<f64> {
    Ok(explicit_table(kind, &[x], config, zeros)?[0])
}

/// Evaluate the formula on a grid, computing each zero's coefficients once.
pub fn explicit_table(
    kind: FormulaKind,
    xs: &[f64],
    config: &ExplicitConfig,
    zeros: &ZeroList,
) -> Result<Vec<f64>> {
    for &x in xs {
        if !x.is_finite() || x < 2.0 {
            return Err(Error::InvalidInput(format!(
                "explicit formula evaluation needs x >= 2, got {x}"
            )));
        }
    }
    let terms = term_coeffs(kind, config, zeros)?;
    Ok(xs
        .iter()
        .map(|&x| {
            let ln_x = x.ln();
            terms.iter().map(|t| t.eval(ln_x)).sum()
        })
        .collect())
}

/// Debug evaluation summing the +γ and −γ residues separately instead of
/// folding the pair into 2·Re; the imaginary part measures how real the
/// truncation actually is.
pub fn truncated_explicit_unpaired(
    kind: FormulaKind,
    x: f64,
    config: &ExplicitConfig,
    zeros: &ZeroList,
) -> Result<Complex64> {
    if !x.is_finite() || x < 2.0 {
        return Err(Error::InvalidInput("x must be at least 2".into()));
    }
    config.validate(zeros)?;
    let ln_x = x.ln();
    let mut total = Complex64::new(0.0, 0.0);
    let depth = match kind {
        FormulaKind::Classical => 1,
        FormulaKind::Modified => config.depth,
    };
    for j in 0..depth {
        for &gamma in zeros.below(config.t_cutoff) {
            for signed in [gamma, -gamma] {
                let rho = Complex64::new(0.5, signed);
                let exponent = rho * (-(j as f64)).exp2();
                let coeff = match kind {
                    FormulaKind::Classical => zetafun::zeta_prime(rho)?.inv(),
                    FormulaKind::Modified => residue_coeff(j, signed, config.depth)?,
                };
                total += coeff * (exponent * ln_x).exp() / exponent;
            }
        }
    }
    Ok(total)
}

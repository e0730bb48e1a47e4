//! Monte-Carlo simulation of the symmetric ±1 random walk S_n = Σ X_j on
//! the integers, for the Chebyshev tail bound, the Moivre–Laplace limit and
//! law-of-the-iterated-logarithm scaling.
//!
//! Each trial draws its bits from a ChaCha stream keyed by (seed, trial
//! index), so results are bit-identical for any worker count or schedule;
//! aggregation only counts and maxes, which commute.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct WalkConfig {
    /// Number of ±1 steps per trial.
    pub steps: u64,
    pub trials: u64,
    pub seed: u64,
    /// Thresholds c for P(|S_n| < c√n).
    pub thresholds: Vec<f64>,
}

#[derive(Clone, Copy, Debug)]
pub struct ThresholdStat {
    pub c: f64,
    /// Empirical P(|S_n| < c√n).
    pub inside_prob: f64,
    /// Φ(c) − Φ(−c), the Moivre–Laplace limit.
    pub gaussian_prob: f64,
}

#[derive(Clone, Debug)]
pub struct WalkStats {
    pub steps: u64,
    pub trials: u64,
    pub seed: u64,
    pub thresholds: Vec<ThresholdStat>,
}

/// Endpoint |S_n| of one trial: n random bits, counted in 64-bit blocks;
/// S_n = 2·ones − n.
fn endpoint_abs(steps: u64, seed: u64, trial: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let mut ones = 0u64;
    let full_words = steps / 64;
    for _ in 0..full_words {
        ones += rng.next_u64().count_ones() as u64;
    }
    let rem = steps % 64;
    if rem > 0 {
        ones += (rng.next_u64() & ((1u64 << rem) - 1)).count_ones() as u64;
    }
    (2 * ones as i64 - steps as i64).unsigned_abs()
}

/// Run the trials and report, per threshold, the empirical probability that
/// the endpoint stayed inside c√n.
pub fn simulate(cfg: &WalkConfig) -> Result<WalkStats> {
    if cfg.steps < 1 || cfg.trials < 1 {
        return Err(Error::InvalidInput("need steps >= 1 and trials >= 1".into()));
    }
    let endpoints: Vec<u64> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| endpoint_abs(cfg.steps, cfg.seed, trial))
        .collect();
    let sqrt_n = (cfg.steps as f64).sqrt();
    let thresholds = cfg
        .thresholds
        .iter()
        .map(|&c| {
            let inside = endpoints.iter().filter(|&&s| (s as f64) < c * sqrt_n).count();
            ThresholdStat {
                c,
                inside_prob: inside as f64 / cfg.trials as f64,
                gaussian_prob: gaussian_inside(c),
            }
        })
        .collect();
    Ok(WalkStats {
        steps: cfg.steps,
        trials: cfg.trials,
        seed: cfg.seed,
        thresholds,
    })
}

/// Φ(c) − Φ(−c) = erf(c/√2).
pub fn gaussian_inside(c: f64) -> f64 {
    statrs::function::erf::erf(c / std::f64::consts::SQRT_2)
}

#[derive(Clone, Copy, Debug)]
pub struct ChebyshevRow {
    pub c: f64,
    /// Empirical P(|S_n| ≥ c√n).
    pub empirical_tail: f64,
    /// 1/(2c²).
    pub bound: f64,
    /// Binomial standard error of the empirical tail.
    pub std_err: f64,
    /// bound + 3·std_err − empirical_tail; negative means violated.
    pub slack: f64,
}

#[derive(Clone, Debug)]
pub struct ChebyshevReport {
    pub rows: Vec<ChebyshevRow>,
    pub violations: usize,
}

/// Check every threshold's empirical tail against 1/(2c²) plus three
/// binomial standard errors of sampling slack.
pub fn chebyshev_check(stats: &WalkStats) -> ChebyshevReport {
    let mut rows = Vec::with_capacity(stats.thresholds.len());
    let mut violations = 0;
    for t in &stats.thresholds {
        let tail = 1.0 - t.inside_prob;
        let bound = 1.0 / (2.0 * t.c * t.c);
        let std_err = (tail * (1.0 - tail) / stats.trials as f64).sqrt();
        let slack = bound + 3.0 * std_err - tail;
        if slack < 0.0 {
            violations += 1;
        }
        rows.push(ChebyshevRow {
            c: t.c,
            empirical_tail: tail,
            bound,
            std_err,
            slack,
        });
    }
    ChebyshevReport { rows, violations }
}

#[derive(Clone, Debug)]
pub struct LilConfig {
    pub n_max: u64,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug)]
pub struct LilRow {
    pub n: u64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
}

#[derive(Clone, Debug)]
pub struct LilReport {
    /// Quartiles of |S_n|/√(n log log n) across trials, per sampled n.
    pub rows: Vec<LilRow>,
    /// Quartiles of the per-trial sup over the sampled grid.
    pub sup_q25: f64,
    pub sup_median: f64,
    pub sup_q75: f64,
    /// The largest ratio seen anywhere.
    pub sup_max: f64,
}

/// The geometric sampling grid: powers of two from 16 up, plus n_max.
fn lil_grid(n_max: u64) -> Vec<u64> {
    let mut grid = Vec::new();
    let mut n = 16u64;
    while n <= n_max {
        grid.push(n);
        n = match n.checked_mul(2) {
            Some(v) => v,
            None => break,
        };
    }
    if grid.last() != Some(&n_max) {
        grid.push(n_max);
    }
    grid
}

fn lil_ratio(s_abs: u64, n: u64) -> f64 {
    let nf = n as f64;
    s_abs as f64 / (nf * nf.ln().ln()).sqrt()
}

/// Walk each trial once, sampling |S_n|/√(n log log n) on the geometric
/// grid; reports per-n quartiles and the distribution of per-trial sups.
pub fn lil_scan(cfg: &LilConfig) -> Result<LilReport> {
    if cfg.n_max < 16 {
        return Err(Error::InvalidInput(
            "n_max must be at least 16 for log log n > 0".into(),
        ));
    }
    if cfg.trials < 1 {
        return Err(Error::InvalidInput("need at least one trial".into()));
    }
    let grid = lil_grid(cfg.n_max);
    let per_trial: Vec<Vec<f64>> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(trial);
            let mut ratios = Vec::with_capacity(grid.len());
            let mut ones = 0u64;
            let mut consumed = 0u64;
            let mut pending = 0u64; // bits drawn but not yet attributed
            let mut pending_len = 0u64;
            for &n in &grid {
                while consumed < n {
                    if pending_len == 0 {
                        pending = rng.next_u64();
                        pending_len = 64;
                    }
                    let take = pending_len.min(n - consumed);
                    let mask = if take == 64 { u64::MAX } else { (1u64 << take) - 1 };
                    ones += (pending & mask).count_ones() as u64;
                    pending >>= take % 64;
                    if take == 64 {
                        pending = 0;
                    }
                    pending_len -= take;
                    consumed += take;
                }
                let s_abs = (2 * ones as i64 - n as i64).unsigned_abs();
                ratios.push(lil_ratio(s_abs, n));
            }
            ratios
        })
        .collect();

    let quartiles = |values: &mut Vec<f64>| -> (f64, f64, f64) {
        values.sort_unstable_by(f64::total_cmp);
        let pick = |p: f64| values[((values.len() - 1) as f64 * p).round() as usize];
        (pick(0.25), pick(0.5), pick(0.75))
    };

    let mut rows = Vec::with_capacity(grid.len());
    for (gi, &n) in grid.iter().enumerate() {
        let mut column: Vec<f64> = per_trial.iter().map(|r| r[gi]).collect();
        let (q25, median, q75) = quartiles(&mut column);
        rows.push(LilRow { n, q25, median, q75 });
    }
    let mut sups: Vec<f64> = per_trial
        .iter()
        .map(|r| r.iter().copied().fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let sup_max = sups.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (sup_q25, sup_median, sup_q75) = quartiles(&mut sups);
    Ok(LilReport {
        rows,
        sup_q25,
        sup_median,
        sup_q75,
        sup_max,
    })
}

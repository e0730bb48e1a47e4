//! Segmented computation of summatory functions at scale: 𝔐(x) = Σ μ∞(n),
//! the classical M(x), ratio extrema against √x, and the weak-Mertens
//! integral ∫(𝔐(x)/x)² dx, resumable from text checkpoints.
//!
//! Segments are sieved in parallel by a striped worker pool; a single
//! reducer folds the per-n values in index order, so the record stream is
//! bit-identical for every thread count and segment size. The weak-Mertens
//! integral accumulates in 2^-64 fixed point (u128), which keeps that
//! guarantee exact: integer addition does not care how the range was split.

use std::path::Path;
use std::str::FromStr;
use std::sync::mpsc;

use crate::factorint::{sieve_primes, ArithKind};
use crate::{Error, Result};

/// Smallest supported segment.
pub const MIN_SEGMENT_SIZE: u64 = 1 << 16;
/// Practical scan ceiling; wm fixed-point bounds are proven below it.
pub const MAX_X: u64 = 1 << 40;

const DEFAULT_SEGMENT_SIZE: u64 = 1 << 20;
const DEFAULT_CHECKPOINT_EVERY: u64 = 1_000_000;

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub kind: ArithKind,
    pub x_max: u64,
    pub segment_size: u64,
    pub checkpoint_every: u64,
    /// 0 selects the machine parallelism.
    pub threads: usize,
}

impl ScanConfig {
    pub fn new(kind: ArithKind, x_max: u64) -> ScanConfig {
        ScanConfig {
            kind,
            x_max,
            segment_size: DEFAULT_SEGMENT_SIZE,
            checkpoint_every: DEFAULT_CHECKPOINT_EVERY,
            threads: 0,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.x_max < 1 {
            return Err(Error::InvalidInput("x_max must be at least 1".into()));
        }
        if self.x_max > MAX_X {
            return Err(Error::InvalidInput(format!(
                "x_max {} above the practical cap 2^40",
                self.x_max
            )));
        }
        if self.segment_size < MIN_SEGMENT_SIZE {
            return Err(Error::InvalidInput(format!(
                "segment_size {} below the minimum {MIN_SEGMENT_SIZE}",
                self.segment_size
            )));
        }
        if self.checkpoint_every == 0 {
            return Err(Error::InvalidInput("checkpoint_every must be positive".into()));
        }
        Ok(())
    }

    fn resolved_threads(&self) -> usize {
        if self.threads > 0 {
            self.threads
        } else {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        }
    }
}

/// One emitted checkpoint of a running scan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SummatoryRecord {
    pub x: u64,
    pub msum: i64,
    /// msum / √x.
    pub ratio: f64,
    pub min_ratio: f64,
    pub argmin: u64,
    pub max_ratio: f64,
    pub argmax: u64,
    /// ∫_1^x (𝔐(u)/u)² du as a step-function integral; 0 for the τ/σ kinds.
    pub wm_integral: f64,
}

impl SummatoryRecord {
    /// wm_integral / log x, the weak-Mertens report column.
    pub fn wm_over_log_x(&self) -> f64 {
        if self.x < 2 {
            0.0
        } else {
            self.wm_integral / (self.x as f64).ln()
        }
    }
}

/// Full resumable state of a scan, serializable as three text lines:
///
/// ```text
/// kind,x,msum
/// min_ratio,argmin,max_ratio,argmax
/// wm_integral_num
/// ```
///
/// Integer fields are decimal strings; ratios carry 17 significant digits so
/// the doubles round-trip exactly. Line 3 is the weak-Mertens accumulator
/// numerator in 2^-64 fixed point, kept exact so a resumed scan reproduces
/// the original record stream bit for bit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Checkpoint {
    pub kind: ArithKind,
    pub x: u64,
    pub msum: i64,
    pub min_ratio: f64,
    pub argmin: u64,
    pub max_ratio: f64,
    pub argmax: u64,
    /// Σ 𝔐(n)²(1/n − 1/(n+1)) over n < x, scaled by 2^64 and floored.
    pub wm_num: u128,
}

fn wm_to_f64(num: u128) -> f64 {
    num as f64 / 18446744073709551616.0
}

impl Checkpoint {
    fn fresh(kind: ArithKind) -> Checkpoint {
        Checkpoint {
            kind,
            x: 0,
            msum: 0,
            min_ratio: f64::INFINITY,
            argmin: 0,
            max_ratio: f64::NEG_INFINITY,
            argmax: 0,
            wm_num: 0,
        }
    }

    fn record(&self) -> SummatoryRecord {
        SummatoryRecord {
            x: self.x,
            msum: self.msum,
            ratio: self.msum as f64 / (self.x as f64).sqrt(),
            min_ratio: self.min_ratio,
            argmin: self.argmin,
            max_ratio: self.max_ratio,
            argmax: self.argmax,
            wm_integral: wm_to_f64(self.wm_num),
        }
    }

    pub fn to_text(&self) -> String {
        format!(
            "{},{},{}\n{:.16e},{},{:.16e},{}\n{}\n",
            self.kind, self.x, self.msum, self.min_ratio, self.argmin, self.max_ratio,
            self.argmax, self.wm_num
        )
    }

    pub fn from_text(text: &str) -> Result<Checkpoint> {
        let bad = |line: usize, msg: &str| Error::CheckpointMismatch(format!("line {line}: {msg}"));
        let mut lines = text.lines();
        let l1 = lines.next().ok_or_else(|| bad(1, "missing"))?;
        let p1: Vec<&str> = l1.split(',').collect();
        if p1.len() != 3 {
            return Err(bad(1, "expected kind,x,msum"));
        }
        let kind = ArithKind::from_str(p1[0])
            .map_err(|_| bad(1, "unknown kind tag"))?;
        let x: u64 = p1[1].parse().map_err(|_| bad(1, "bad x"))?;
        let msum: i64 = p1[2].parse().map_err(|_| bad(1, "bad msum"))?;
        let l2 = lines.next().ok_or_else(|| bad(2, "missing"))?;
        let p2: Vec<&str> = l2.split(',').collect();
        if p2.len() != 4 {
            return Err(bad(2, "expected min_ratio,argmin,max_ratio,argmax"));
        }
        let min_ratio: f64 = p2[0].parse().map_err(|_| bad(2, "bad min_ratio"))?;
        let argmin: u64 = p2[1].parse().map_err(|_| bad(2, "bad argmin"))?;
        let max_ratio: f64 = p2[2].parse().map_err(|_| bad(2, "bad max_ratio"))?;
        let argmax: u64 = p2[3].parse().map_err(|_| bad(2, "bad argmax"))?;
        let l3 = lines.next().ok_or_else(|| bad(3, "missing"))?;
        let wm_num: u128 = l3.trim().parse().map_err(|_| bad(3, "bad wm numerator"))?;
        Ok(Checkpoint {
            kind,
            x,
            msum,
            min_ratio,
            argmin,
            max_ratio,
            argmax,
            wm_num,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Checkpoint> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Checkpoint::from_text(&text)
    }
}

/// One weak-Mertens cell 𝔐(n)²(1/n − 1/(n+1)) in 2^-64 fixed point.
///
/// Exact-floor evaluation of m²·2^64/b for b ∈ {n, n+1}. |msum| ≤ n ≤ 2^40
/// for the sign kinds, so every intermediate fits u128.
fn wm_cell(msum: i64, n: u64) -> u128 {
    let m2 = (msum as i128 * msum as i128) as u128;
    let fp = |b: u64| -> u128 {
        let b = b as u128;
        ((m2 / b) << 64) + (((m2 % b) << 64) / b)
    };
    fp(n) - fp(n + 1)
}

/// Scan the kind's summatory function to x_max, invoking `on_record` at
/// every multiple of `checkpoint_every` and at x_max. Returns the final
/// state, which can be saved and later passed back as `resume`.
pub fn scan(
    cfg: &ScanConfig,
    resume: Option<&Checkpoint>,
    mut on_record: impl FnMut(&SummatoryRecord),
) -> Result<Checkpoint> {
    cfg.validate()?;
    let mut state = match resume {
        Some(c) => {
            if c.kind != cfg.kind {
                return Err(Error::CheckpointMismatch(format!(
                    "checkpoint kind {} differs from scan kind {}",
                    c.kind, cfg.kind
                )));
            }
            if c.x == 0 || c.x >= cfg.x_max {
                return Err(Error::CheckpointMismatch(format!(
                    "checkpoint at x = {} cannot resume a scan to {}",
                    c.x, cfg.x_max
                )));
            }
            *c
        }
        None => Checkpoint::fresh(cfg.kind),
    };
    let track_wm = matches!(cfg.kind, ArithKind::Mu | ArithKind::MuInfinity);
    let start = state.x + 1;
    stream_values(
        cfg.kind,
        start,
        cfg.x_max,
        cfg.segment_size,
        cfg.resolved_threads(),
        &mut |n, v| {
            state.msum = state
                .msum
                .checked_add(v)
                .ok_or_else(|| Error::Range(format!("summatory overflow at n = {n}")))?;
            state.x = n;
            let ratio = state.msum as f64 / (n as f64).sqrt();
            if ratio > state.max_ratio {
                state.max_ratio = ratio;
                state.argmax = n;
            }
            if ratio < state.min_ratio {
                state.min_ratio = ratio;
                state.argmin = n;
            }
            if n % cfg.checkpoint_every == 0 || n == cfg.x_max {
                on_record(&state.record());
            }
            // The cell [n, n+1) belongs to records strictly beyond x = n.
            if track_wm {
                state.wm_num += wm_cell(state.msum, n);
            }
            Ok(())
        },
    )?;
    Ok(state)
}

/// Convenience wrapper collecting the record stream.
pub fn scan_to_vec(
    cfg: &ScanConfig,
    resume: Option<&Checkpoint>,
) -> Result<(Vec<SummatoryRecord>, Checkpoint)> {
    let mut records = Vec::new();
    let end = scan(cfg, resume, |r| records.push(*r))?;
    Ok((records, end))
}

/// The exact step-function integral ∫_1^x (𝔐(u)/u)² du and its ratio to
/// log x_max.
pub fn weak_mertens(x_max: u64) -> Result<(f64, f64)> {
    if x_max < 2 {
        return Err(Error::InvalidInput("weak_mertens needs x_max >= 2".into()));
    }
    let cfg = ScanConfig::new(ArithKind::MuInfinity, x_max);
    // The record at x_max carries Σ_{n < x_max}; the end state also holds the
    // open cell [x_max, x_max+1), which belongs to resumed continuations.
    let mut wm = 0.0;
    scan(&cfg, None, |r| wm = r.wm_integral)?;
    Ok((wm, wm / (x_max as f64).ln()))
}

/// The largest observed |𝔐(x)|/√x and where it occurs.
pub fn omega_probe(x_max: u64) -> Result<(f64, u64)> {
    let cfg = ScanConfig::new(ArithKind::MuInfinity, x_max);
    let end = scan(&cfg, None, |_| {})?;
    if end.max_ratio >= -end.min_ratio {
        Ok((end.max_ratio, end.argmax))
    } else {
        Ok((-end.min_ratio, end.argmin))
    }
}

/// Summatory values at the given ascending points, in one streaming pass.
pub fn summatory_at_points(kind: ArithKind, points: &[u64], threads: usize) -> Result<Vec<i64>> {
    if points.is_empty() {
        return Ok(Vec::new());
    }
    if points.windows(2).any(|w| w[0] >= w[1]) || points[0] < 1 {
        return Err(Error::InvalidInput("points must be ascending and positive".into()));
    }
    let x_max = *points.last().unwrap();
    let mut out = Vec::with_capacity(points.len());
    let mut next = 0usize;
    let mut msum: i64 = 0;
    stream_values(
        kind,
        1,
        x_max,
        DEFAULT_SEGMENT_SIZE,
        if threads > 0 {
            threads
        } else {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        },
        &mut |n, v| {
            msum = msum
                .checked_add(v)
                .ok_or_else(|| Error::Range(format!("summatory overflow at n = {n}")))?;
            while next < points.len() && points[next] == n {
                out.push(msum);
                next += 1;
            }
            Ok(())
        },
    )?;
    Ok(out)
}

/// Stream f(n) for n in start..=end to `sink` in ascending order, sieving
/// segments on a worker pool. The reducer consumes segment k from worker
/// k mod threads, so arrival order never depends on scheduling.
pub fn stream_values(
    kind: ArithKind,
    start: u64,
    end: u64,
    segment_size: u64,
    threads: usize,
    sink: &mut dyn FnMut(u64, i64) -> Result<()>,
) -> Result<()> {
    match kind {
        ArithKind::Mu => stream_generic::<MuKernel>(start, end, segment_size, threads, sink),
        ArithKind::MuInfinity => {
            stream_generic::<MuInfKernel>(start, end, segment_size, threads, sink)
        }
        ArithKind::TauInfinity => {
            stream_generic::<TauInfKernel>(start, end, segment_size, threads, sink)
        }
        ArithKind::SigmaInfinity => {
            stream_generic::<SigmaInfKernel>(start, end, segment_size, threads, sink)
        }
        ArithKind::TauBiunitary => {
            stream_generic::<TauBbKernel>(start, end, segment_size, threads, sink)
        }
        ArithKind::SigmaBiunitary => {
            stream_generic::<SigmaBbKernel>(start, end, segment_size, threads, sink)
        }
    }
}

/// Per-kind accumulation of (p, ν) factor events within a segment slot.
trait Kernel: 'static {
    type Slot: Copy + Send;
    const INIT: Self::Slot;
    fn absorb(slot: &mut Self::Slot, p: u64, e: u32) -> Result<()>;
    fn finish(slot: Self::Slot) -> Result<i64>;
}

struct MuKernel;
impl Kernel for MuKernel {
    // bit 0: parity of the prime count; bit 1: a square divides n.
    type Slot = u8;
    const INIT: u8 = 0;
    fn absorb(slot: &mut u8, _p: u64, e: u32) -> Result<()> {
        if e >= 2 {
            *slot |= 2;
        } else {
            *slot ^= 1;
        }
        Ok(())
    }
    fn finish(slot: u8) -> Result<i64> {
        Ok(if slot & 2 != 0 {
            0
        } else if slot & 1 != 0 {
            -1
        } else {
            1
        })
    }
}

struct MuInfKernel;
impl Kernel for MuInfKernel {
    // Parity of Σ_p |B(ν_p)|.
    type Slot = u8;
    const INIT: u8 = 0;
    fn absorb(slot: &mut u8, _p: u64, e: u32) -> Result<()> {
        *slot ^= (e.count_ones() & 1) as u8;
        Ok(())
    }
    fn finish(slot: u8) -> Result<i64> {
        Ok(if slot & 1 != 0 { -1 } else { 1 })
    }
}

struct TauInfKernel;
impl Kernel for TauInfKernel {
    type Slot = u32;
    const INIT: u32 = 0;
    fn absorb(slot: &mut u32, _p: u64, e: u32) -> Result<()> {
        *slot += e.count_ones();
        Ok(())
    }
    fn finish(slot: u32) -> Result<i64> {
        if slot >= 63 {
            return Err(Error::Range("tau_inf exceeds an i64".into()));
        }
        Ok(1i64 << slot)
    }
}

struct SigmaInfKernel;
impl Kernel for SigmaInfKernel {
    type Slot = u128;
    const INIT: u128 = 1;
    fn absorb(slot: &mut u128, p: u64, e: u32) -> Result<()> {
        let mut pw = p as u128;
        for j in 0..32 {
            if e >> j & 1 == 1 {
                *slot = slot
                    .checked_mul(1 + pw)
                    .ok_or_else(|| Error::Range("sigma_inf overflow".into()))?;
            }
            if e >> (j + 1) != 0 {
                pw *= pw;
            } else {
                break;
            }
        }
        Ok(())
    }
    fn finish(slot: u128) -> Result<i64> {
        i64::try_from(slot).map_err(|_| Error::Range("sigma_inf exceeds an i64".into()))
    }
}

struct TauBbKernel;
impl Kernel for TauBbKernel {
    type Slot = u64;
    const INIT: u64 = 1;
    fn absorb(slot: &mut u64, _p: u64, e: u32) -> Result<()> {
        let choices = if e % 2 == 1 { e as u64 + 1 } else { e as u64 };
        *slot = slot
            .checked_mul(choices)
            .ok_or_else(|| Error::Range("tau_bb overflow".into()))?;
        Ok(())
    }
    fn finish(slot: u64) -> Result<i64> {
        i64::try_from(slot).map_err(|_| Error::Range("tau_bb exceeds an i64".into()))
    }
}

struct SigmaBbKernel;
impl Kernel for SigmaBbKernel {
    type Slot = u128;
    const INIT: u128 = 1;
    fn absorb(slot: &mut u128, p: u64, e: u32) -> Result<()> {
        let mut sum: u128 = 0;
        let mut pw: u128 = 1;
        for b in 0..=e {
            if !(e.is_multiple_of(2) && b == e / 2) {
                sum = sum
                    .checked_add(pw)
                    .ok_or_else(|| Error::Range("sigma_bb overflow".into()))?;
            }
            if b < e {
                pw = pw
                    .checked_mul(p as u128)
                    .ok_or_else(|| Error::Range("sigma_bb overflow".into()))?;
            }
        }
        *slot = slot
            .checked_mul(sum)
            .ok_or_else(|| Error::Range("sigma_bb overflow".into()))?;
        Ok(())
    }
    fn finish(slot: u128) -> Result<i64> {
        i64::try_from(slot).map_err(|_| Error::Range("sigma_bb exceeds an i64".into()))
    }
}

/// Exact per-n values over a segment: repeated division by the base primes,
/// then whatever remains above √(hi−1) is a single prime with exponent 1.
fn sieve_segment<K: Kernel>(lo: u64, hi: u64, primes: &[u32]) -> Result<Vec<i64>> {
    let len = (hi - lo) as usize;
    let mut slots = vec![K::INIT; len];
    let mut rem: Vec<u64> = (lo..hi).collect();
    for &p in primes {
        let p = p as u64;
        if p.saturating_mul(p) >= hi {
            break;
        }
        let mut m = lo.div_ceil(p) * p;
        while m < hi {
            let i = (m - lo) as usize;
            let mut e = 0u32;
            while rem[i].is_multiple_of(p) {
                rem[i] /= p;
                e += 1;
            }
            K::absorb(&mut slots[i], p, e)?;
            m += p;
        }
    }
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        let mut slot = slots[i];
        if rem[i] > 1 {
            K::absorb(&mut slot, rem[i], 1)?;
        }
        out.push(K::finish(slot)?);
    }
    Ok(out)
}

fn stream_generic<K: Kernel>(
    start: u64,
    end: u64,
    segment_size: u64,
    threads: usize,
    sink: &mut dyn FnMut(u64, i64) -> Result<()>,
) -> Result<()> {
    assert!(start >= 1 && start <= end);
    let threads = threads.max(1);
    let sqrt_end = (end as f64).sqrt() as u64 + 2;
    let primes: Vec<u32> = sieve_primes(sqrt_end.max(4)).collect();
    let n_segments = ((end - start) / segment_size + 1) as usize;

    std::thread::scope(|scope| -> Result<()> {
        let mut receivers = Vec::with_capacity(threads);
        for w in 0..threads {
            let (tx, rx) = mpsc::sync_channel::<Result<Vec<i64>>>(1);
            receivers.push(rx);
            let primes = &primes;
            scope.spawn(move || {
                let mut k = w;
                while k < n_segments {
                    let lo = start + k as u64 * segment_size;
                    let hi = (lo + segment_size).min(end + 1);
                    let values = sieve_segment::<K>(lo, hi, primes);
                    let failed = values.is_err();
                    if tx.send(values).is_err() || failed {
                        return;
                    }
                    k += threads;
                }
            });
        }
        for k in 0..n_segments {
            let values = receivers[k % threads]
                .recv()
                .expect("sieve worker dropped its channel")?;
            let lo = start + k as u64 * segment_size;
            for (i, &v) in values.iter().enumerate() {
                sink(lo + i as u64, v)?;
            }
        }
        Ok(())
    })
}

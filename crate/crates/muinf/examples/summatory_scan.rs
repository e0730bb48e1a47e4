//! Scan 𝔐(x) = Σ μ∞(n) to 10^8 and print the checkpoint trail.
//!
//!     cargo run --release --example summatory_scan

use muinf::factorint::ArithKind;
use muinf::sieve::{scan, ScanConfig};

fn main() {
    let started = std::time::Instant::now();
    let mut cfg = ScanConfig::new(ArithKind::MuInfinity, 100_000_000);
    cfg.checkpoint_every = 10_000_000;
    let end = scan(&cfg, None, |r| {
        println!(
            "x = {:>11}  M(x) = {:>6}  M/sqrt(x) = {:>9.6}  wm/log(x) = {:.6}",
            r.x,
            r.msum,
            r.ratio,
            r.wm_over_log_x()
        );
    })
    .unwrap();
    println!(
        "extrema: {:.6} at x = {} and {:.6} at x = {} ({:.2?})",
        end.min_ratio,
        end.argmin,
        end.max_ratio,
        end.argmax,
        started.elapsed()
    );
}

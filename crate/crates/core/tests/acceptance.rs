//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any
//! criterion fails or overruns its time limit.

use std::time::Duration;

use zerosum::repro::{criterion_name, run_criterion, ReproConfig, DEFAULT_SEED};

/// Wall-clock limit per criterion, in seconds.
const LIMITS: [(u8, u64); 10] = [
    (1, 60),
    (2, 120),
    (3, 60),
    (4, 600),
    (5, 900),
    (6, 900),
    (7, 600),
    (8, 300),
    (9, 300),
    (10, 120),
];

fn main() {
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    let cfg = ReproConfig {
        seed: DEFAULT_SEED,
        jobs,
    };
    let mut failed = 0;
    for (id, limit) in LIMITS {
        let limit = Duration::from_secs(limit);
        match run_criterion(id, &cfg) {
            Ok(o) => {
                let in_time = o.elapsed <= limit;
                let pass = o.pass && in_time;
                failed += usize::from(!pass);
                println!(
                    "{} criterion {id:>2} {:<24} {:>8.2}s (limit {}s) {}",
                    if pass { "PASS" } else { "FAIL" },
                    o.name,
                    o.elapsed.as_secs_f64(),
                    limit.as_secs(),
                    o.detail
                );
            }
            Err(e) => {
                failed += 1;
                println!("FAIL criterion {id:>2} {:<24} error: {e}", criterion_name(id));
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", LIMITS.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

//! The twelve acceptance criteria, one pass/fail line each.
//!
//! Runs without the libtest harness so the summary is always printed; the
//! process exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use multigauss::oracle::{criterion, OracleReport, CRITERIA};

/// Wall-clock limits for the normalization and sampler criteria.
fn time_limit(k: u32) -> Option<Duration> {
    match k {
        1 => Some(Duration::from_secs(10)),
        10 => Some(Duration::from_secs(60)),
        _ => None,
    }
}

struct Outcome {
    k: u32,
    reports: Vec<OracleReport>,
    elapsed: Duration,
}

impl Outcome {
    fn within_time(&self) -> bool {
        time_limit(self.k).is_none_or(|t| self.elapsed < t)
    }

    fn passed(&self) -> bool {
        !self.reports.is_empty() && self.reports.iter().all(|r| r.passed) && self.within_time()
    }
}

fn run(k: u32) -> Outcome {
    let start = Instant::now();
    let reports = criterion(k);
    Outcome {
        k,
        reports,
        elapsed: start.elapsed(),
    }
}

fn main() {
    let outcomes: Vec<Outcome> = (1..=12).map(run).collect();
    let mut failures = Vec::new();
    for o in &outcomes {
        let n_ok = o.reports.iter().filter(|r| r.passed).count();
        println!(
            "criterion {:>2} {:<40} {}  ({}/{} checks, {:.2?})",
            o.k,
            CRITERIA[o.k as usize - 1],
            if o.passed() { "PASS" } else { "FAIL" },
            n_ok,
            o.reports.len(),
            o.elapsed,
        );
        if !o.within_time() {
            failures.push(format!("criterion {}: took {:.2?}", o.k, o.elapsed));
        }
        for r in o.reports.iter().filter(|r| !r.passed) {
            println!("    failed: {} (library {:e}, oracle {:e}; {})", r.target_name, r.library_value, r.oracle_value, r.notes);
            failures.push(format!("criterion {}: {}", o.k, r.target_name));
        }
    }
    if failures.is_empty() {
        println!("all 12 criteria passed");
    } else {
        eprintln!("failed checks:\n{}", failures.join("\n"));
        std::process::exit(1);
    }
}

//! One line per acceptance criterion; exits nonzero if any fails.

use std::time::Instant;

use flatstrata_core::acceptance::CRITERIA;
use rayon::prelude::*;

fn main() {
    let start = Instant::now();
    let results: Vec<_> = CRITERIA
        .par_iter()
        .map(|c| {
            let t = Instant::now();
            (c(), t.elapsed())
        })
        .collect();
    let mut failed = 0;
    for (r, dt) in &results {
        println!("{r} ({:.1}s)", dt.as_secs_f64());
        failed += usize::from(!r.passed);
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        results.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

//! Runs every acceptance criterion and prints one line per criterion.
//! `ACCEPT_SCALE` scales the trial counts (default 1).

use secretary_harness::accept::{run_one, Options, NAMES};

#[test]
fn acceptance() {
    let scale = std::env::var("ACCEPT_SCALE")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(1.0);
    let opts = Options {
        scale,
        ..Options::default()
    };
    let mut failed = Vec::new();
    for id in 1..=NAMES.len() {
        let out = run_one(id, &opts);
        println!("{out}");
        if !out.passed {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

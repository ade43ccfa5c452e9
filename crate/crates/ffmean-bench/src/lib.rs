//! Benchmark-only crate; the suites live under `benches/`.
//!
//! Run with `cargo bench -p ffmean-bench`.

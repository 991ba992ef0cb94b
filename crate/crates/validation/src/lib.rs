//! Benchmark-scale acceptance runs live in `tests/acceptance.rs`.

//! Criterion benchmarks for the halfline crates; see `benches/`.

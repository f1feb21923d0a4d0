//! Criterion benchmarks for `kloos3`; see `benches/`.

//! Criterion benchmarks for the `plancherel` crate live under `benches/`.

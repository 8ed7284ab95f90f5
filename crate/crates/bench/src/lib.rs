//! Criterion benchmarks for ringmod-core live under `benches/`.

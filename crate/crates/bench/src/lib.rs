//! Criterion benchmarks for the scoring, preparation, and statistics paths. See `benches/`.

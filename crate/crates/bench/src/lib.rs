//! Criterion benchmarks for the solver engines live in `benches/`.

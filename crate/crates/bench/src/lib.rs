//! Benchmarks for perdyn live in `benches/`.

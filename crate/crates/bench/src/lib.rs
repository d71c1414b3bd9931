//! Criterion benchmarks for treeduce; see `benches/transducers.rs`.

//! Criterion benchmarks for the algebra engine; see `benches/engine.rs`.

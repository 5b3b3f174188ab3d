//! Criterion benchmarks for `necklace-core`; see `benches/engine.rs`.

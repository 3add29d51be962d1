//! Criterion benchmarks for `misere-core`; see `benches/core.rs`.

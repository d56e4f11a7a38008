//! Criterion benchmarks for `dmimo-core`; see `benches/`.

//! Benchmarks for `se2sr-core`; see `benches/`.

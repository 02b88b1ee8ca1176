//! Benchmarks for the dtmm solver live in `benches/`.

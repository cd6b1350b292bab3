//! Criterion benchmarks for the bound solvers and model runs; see `benches/`.

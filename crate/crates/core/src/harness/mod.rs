//! Graph generators, oracle cross-validation and the benchmark runner.

mod gen;

pub use gen::{gen_grid, gen_interval, gen_perturbed_grid, gen_sparse, gen_split, IntervalGraph};

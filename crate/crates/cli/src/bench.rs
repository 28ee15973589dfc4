//! Latency benchmark: unit-level and circuit-depth speedups of the
//! tree-ordered dot-product reduction, per input width.

use serde::Serialize;
use spikefp::adder::build_spatial_adder;
use spikefp::linear::{latency_report, LatencyReport};
use spikefp::multiplier::build_multiplier;

pub const BENCH_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub schema_version: u32,
    pub multiplier_depth: usize,
    pub adder_depth: usize,
    pub rows: Vec<LatencyReport>,
}

/// Measured datapath depths, taken from the built circuits.
pub fn datapath_depths() -> (usize, usize) {
    (
        build_multiplier().stats().logical_depth,
        build_spatial_adder().stats().logical_depth,
    )
}

pub fn run_linear_bench(d_in: &[usize]) -> BenchReport {
    let (mul_depth, add_depth) = datapath_depths();
    BenchReport {
        schema_version: BENCH_SCHEMA_VERSION,
        multiplier_depth: mul_depth,
        adder_depth: add_depth,
        rows: d_in.iter().map(|&d| latency_report(d, mul_depth, add_depth)).collect(),
    }
}

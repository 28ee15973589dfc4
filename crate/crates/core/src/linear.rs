//! FP8 linear layer Y = X W^T built from the spiking multiplier and adder,
//! with binary-tree accumulation, a latency model, and a sequential-order
//! reference for non-associativity analysis. Accumulation stays in FP8
//! between levels; there is no wide accumulator.

use crate::adder::SpatialAdder;
use crate::fp8::{oracle_add, oracle_mul, Fp8Code};
use crate::multiplier::{pack_inputs, Multiplier};
use crate::sim::SimConfig;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinearError {
    #[error("shape mismatch: X is {x_rows}x{x_cols}, W is {w_rows}x{w_cols}")]
    ShapeMismatch { x_rows: usize, x_cols: usize, w_rows: usize, w_cols: usize },
    #[error("tensor data length {len} does not match shape {rows}x{cols}")]
    BadShape { rows: usize, cols: usize, len: usize },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad tensor header: {0}")]
    BadHeader(String),
}

/// Row-major FP8 tensor (B x D or D_out x D_in).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fp8Tensor {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Fp8Code>,
}

impl Fp8Tensor {
    pub fn new(rows: usize, cols: usize, data: Vec<Fp8Code>) -> Result<Fp8Tensor, LinearError> {
        if data.len() != rows * cols {
            return Err(LinearError::BadShape { rows, cols, len: data.len() });
        }
        Ok(Fp8Tensor { rows, cols, data })
    }

    pub fn filled(rows: usize, cols: usize, code: Fp8Code) -> Fp8Tensor {
        Fp8Tensor { rows, cols, data: vec![code; rows * cols] }
    }

    pub fn get(&self, r: usize, c: usize) -> Fp8Code {
        self.data[r * self.cols + c]
    }

    /// Seeded random tensor over finite codes (no NaN).
    pub fn random(rows: usize, cols: usize, seed: u64) -> Fp8Tensor {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let finite: Vec<Fp8Code> = Fp8Code::finite_codes().collect();
        let data = (0..rows * cols).map(|_| finite[rng.gen_range(0..finite.len())]).collect();
        Fp8Tensor { rows, cols, data }
    }

    /// Seeded random tensor over codes with |value| <= 2 (normalized
    /// activation/weight regime, keeps long dot products away from
    /// saturation).
    pub fn random_normalized(rows: usize, cols: usize, seed: u64) -> Fp8Tensor {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let pool: Vec<Fp8Code> =
            Fp8Code::finite_codes().filter(|c| c.to_f64().abs() <= 2.0).collect();
        let data = (0..rows * cols).map(|_| pool[rng.gen_range(0..pool.len())]).collect();
        Fp8Tensor { rows, cols, data }
    }

    /// Seeded sparse tensor: each entry is nonzero with probability
    /// `density`, drawn from codes with 0 < |value| <= `cap`; `signed`
    /// selects whether negative codes are included. Models post-activation
    /// data, where long dot products stay clear of both saturation and
    /// catastrophic cancellation.
    pub fn random_sparse(
        rows: usize,
        cols: usize,
        seed: u64,
        density: f64,
        cap: f64,
        signed: bool,
    ) -> Fp8Tensor {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let pool: Vec<Fp8Code> = Fp8Code::finite_codes()
            .filter(|c| {
                let v = c.to_f64();
                (signed || !c.sign()) && v.abs() > 0.0 && v.abs() <= cap
            })
            .collect();
        let data = (0..rows * cols)
            .map(|_| {
                if rng.gen_bool(density) {
                    pool[rng.gen_range(0..pool.len())]
                } else {
                    Fp8Code::POS_ZERO
                }
            })
            .collect();
        Fp8Tensor { rows, cols, data }
    }

    /// Flat code bytes after a one-line JSON shape header.
    pub fn write_to(&self, path: &Path) -> Result<(), LinearError> {
        let header = serde_json::json!({
            "version": 1, "rows": self.rows, "cols": self.cols,
        });
        let mut f = std::fs::File::create(path)?;
        writeln!(f, "{header}")?;
        f.write_all(&self.data.iter().map(|c| c.0).collect::<Vec<u8>>())?;
        Ok(())
    }

    pub fn read_from(path: &Path) -> Result<Fp8Tensor, LinearError> {
        let mut raw = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut raw)?;
        let nl = raw
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| LinearError::BadHeader("missing newline".into()))?;
        let header: serde_json::Value = serde_json::from_slice(&raw[..nl])
            .map_err(|e| LinearError::BadHeader(e.to_string()))?;
        let rows = header["rows"].as_u64().ok_or_else(|| LinearError::BadHeader("rows".into()))?
            as usize;
        let cols = header["cols"].as_u64().ok_or_else(|| LinearError::BadHeader("cols".into()))?
            as usize;
        let data: Vec<Fp8Code> = raw[nl + 1..].iter().map(|&b| Fp8Code(b)).collect();
        Fp8Tensor::new(rows, cols, data)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OpsMode {
    /// Every elementary op runs on the spiking circuits.
    Spiking,
    /// Elementary ops use the numeric oracle (bit-identical by the
    /// exhaustive equivalence proofs); for fast desk-scale sweeps.
    FastCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReduceOrder {
    Tree,
    Sequential,
}

/// FP8 scalar ops backing the linear layer, either spiking or oracle.
pub struct Ops {
    mode: OpsMode,
    mul: Option<Multiplier>,
    add: Option<SpatialAdder>,
}

impl Ops {
    pub fn new(mode: OpsMode) -> Ops {
        match mode {
            OpsMode::Spiking => Ops {
                mode,
                mul: Some(Multiplier::new()),
                add: Some(SpatialAdder::new()),
            },
            OpsMode::FastCheck => Ops { mode, mul: None, add: None },
        }
    }

    pub fn mode(&self) -> OpsMode {
        self.mode
    }

    fn run<'a>(
        eval: &mut crate::sim::Evaluator<'a>,
        a: Fp8Code,
        b: Fp8Code,
    ) -> Fp8Code {
        let out = eval
            .evaluate(&pack_inputs(a, b), &SimConfig::ideal())
            .expect("fixed bus widths");
        Fp8Code::from_bits(&out)
    }
}

/// Number of pairwise-add levels of the balanced reduction tree; the
/// unpaired element of an odd level passes through unchanged.
pub fn tree_add_levels(d_in: usize) -> usize {
    assert!(d_in >= 1);
    (usize::BITS - (d_in - 1).leading_zeros()) as usize
}

/// Y = X W^T with the chosen reduction order. Returns the result and the
/// unit-level logical latency (1 multiply level + add levels).
pub fn linear_forward(
    x: &Fp8Tensor,
    w: &Fp8Tensor,
    order: ReduceOrder,
    ops: &Ops,
) -> Result<(Fp8Tensor, usize), LinearError> {
    if x.cols != w.cols {
        return Err(LinearError::ShapeMismatch {
            x_rows: x.rows,
            x_cols: x.cols,
            w_rows: w.rows,
            w_cols: w.cols,
        });
    }
    let d_in = x.cols;
    let mut mul_eval = ops.mul.as_ref().map(|m| m.circuit().evaluator());
    let mut add_eval = ops.add.as_ref().map(|a| a.circuit().evaluator());
    let mut mul_op = |a: Fp8Code, b: Fp8Code| match &mut mul_eval {
        Some(e) => Ops::run(e, a, b),
        None => oracle_mul(a, b),
    };
    let mut add_op = |a: Fp8Code, b: Fp8Code| match &mut add_eval {
        Some(e) => Ops::run(e, a, b),
        None => oracle_add(a, b),
    };

    let mut out = Vec::with_capacity(x.rows * w.rows);
    for bi in 0..x.rows {
        for j in 0..w.rows {
            let products: Vec<Fp8Code> =
                (0..d_in).map(|k| mul_op(x.get(bi, k), w.get(j, k))).collect();
            let y = match order {
                ReduceOrder::Tree => reduce_tree(products, &mut add_op),
                ReduceOrder::Sequential => {
                    let mut acc = products[0];
                    for &p in &products[1..] {
                        acc = add_op(acc, p);
                    }
                    acc
                }
            };
            out.push(y);
        }
    }
    let latency = 1 + match order {
        ReduceOrder::Tree => tree_add_levels(d_in),
        ReduceOrder::Sequential => d_in - 1,
    };
    Ok((Fp8Tensor { rows: x.rows, cols: w.rows, data: out }, latency))
}

fn reduce_tree<F: FnMut(Fp8Code, Fp8Code) -> Fp8Code>(
    mut level: Vec<Fp8Code>,
    add: &mut F,
) -> Fp8Code {
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        for pair in level.chunks(2) {
            next.push(if pair.len() == 2 { add(pair[0], pair[1]) } else { pair[0] });
        }
        level = next;
    }
    level[0]
}

/// Logical-latency figures under both the unit-level model (1 level per
/// elementary op) and the circuit-depth model (measured neuron depths).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LatencyReport {
    pub d_in: usize,
    pub tree_add_levels: usize,
    /// 1 + ceil(log2 d_in) unit levels.
    pub tree_unit_total: usize,
    /// d_in unit levels (1 multiply + d_in - 1 adds).
    pub sequential_unit_total: usize,
    pub unit_ratio: f64,
    pub multiplier_depth: usize,
    pub adder_depth: usize,
    pub tree_circuit_depth: usize,
    pub sequential_circuit_depth: usize,
    pub circuit_ratio: f64,
}

pub fn latency_report(d_in: usize, multiplier_depth: usize, adder_depth: usize) -> LatencyReport {
    let levels = tree_add_levels(d_in);
    let tree_unit_total = 1 + levels;
    let sequential_unit_total = d_in;
    let tree_circuit_depth = multiplier_depth + levels * adder_depth;
    let sequential_circuit_depth = multiplier_depth + (d_in - 1) * adder_depth;
    LatencyReport {
        d_in,
        tree_add_levels: levels,
        tree_unit_total,
        sequential_unit_total,
        unit_ratio: sequential_unit_total as f64 / tree_unit_total as f64,
        multiplier_depth,
        adder_depth,
        tree_circuit_depth,
        sequential_circuit_depth,
        circuit_ratio: sequential_circuit_depth as f64 / tree_circuit_depth as f64,
    }
}

/// Elementwise comparison of tree vs sequential accumulation orders.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AuditReport {
    pub elements: usize,
    pub bitwise_matches: usize,
    pub match_rate: f64,
    /// Largest code-point distance between the two orders.
    pub max_ulp_delta: u32,
}

pub fn nonassociativity_audit(
    x: &Fp8Tensor,
    w: &Fp8Tensor,
    ops: &Ops,
) -> Result<AuditReport, LinearError> {
    let (tree, _) = linear_forward(x, w, ReduceOrder::Tree, ops)?;
    let (seq, _) = linear_forward(x, w, ReduceOrder::Sequential, ops)?;
    let mut matches = 0usize;
    let mut max_ulp = 0u32;
    for (&t, &s) in tree.data.iter().zip(&seq.data) {
        if t == s {
            matches += 1;
        } else {
            let d = (t.order_index() - s.order_index()).unsigned_abs();
            max_ulp = max_ulp.max(d);
        }
    }
    let elements = tree.data.len();
    Ok(AuditReport {
        elements,
        bitwise_matches: matches,
        match_rate: matches as f64 / elements as f64,
        max_ulp_delta: max_ulp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code_of(x: f64) -> Fp8Code {
        Fp8Code::finite_codes().find(|c| c.to_f64() == x).unwrap()
    }

    #[test]
    fn single_column_is_a_bare_multiply() {
        let ops = Ops::new(OpsMode::Spiking);
        let x = Fp8Tensor::new(1, 1, vec![code_of(3.0)]).unwrap();
        let w = Fp8Tensor::new(2, 1, vec![code_of(2.0), code_of(-0.5)]).unwrap();
        let (y, latency) = linear_forward(&x, &w, ReduceOrder::Tree, &ops).unwrap();
        assert_eq!(y.get(0, 0), code_of(6.0));
        assert_eq!(y.get(0, 1), code_of(-1.5));
        assert_eq!(latency, 1);
        assert_eq!(tree_add_levels(1), 0);
    }

    #[test]
    fn all_ones_dot_product_is_order_independent() {
        let ops = Ops::new(OpsMode::Spiking);
        let x = Fp8Tensor::filled(1, 4, Fp8Code::ONE);
        let w = Fp8Tensor::filled(1, 4, Fp8Code::ONE);
        for order in [ReduceOrder::Tree, ReduceOrder::Sequential] {
            let (y, _) = linear_forward(&x, &w, order, &ops).unwrap();
            assert_eq!(y.get(0, 0), code_of(4.0));
        }
    }

    #[test]
    fn spiking_and_fast_check_agree_bitwise() {
        let spiking = Ops::new(OpsMode::Spiking);
        let fast = Ops::new(OpsMode::FastCheck);
        let x = Fp8Tensor::random(3, 16, 11);
        let w = Fp8Tensor::random(5, 16, 12);
        for order in [ReduceOrder::Tree, ReduceOrder::Sequential] {
            let (a, _) = linear_forward(&x, &w, order, &spiking).unwrap();
            let (b, _) = linear_forward(&x, &w, order, &fast).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn depth_law_for_all_small_widths() {
        for d in 1..=64usize {
            let expect = (d as f64).log2().ceil() as usize;
            assert_eq!(tree_add_levels(d), expect, "d={d}");
        }
        assert_eq!(tree_add_levels(256), 8);
    }

    #[test]
    fn latency_report_reference_points() {
        let r = latency_report(256, 105, 111);
        assert_eq!(r.tree_add_levels, 8);
        assert_eq!(r.tree_unit_total, 9);
        assert_eq!(r.sequential_unit_total, 256);
        assert!((r.unit_ratio - 256.0 / 9.0).abs() < 1e-12);
        assert!(r.circuit_ratio >= 17.0);
        let r1 = latency_report(1, 105, 111);
        assert_eq!(r1.unit_ratio, 1.0);
        assert_eq!(r1.circuit_ratio, 1.0);
    }

    #[test]
    fn speedup_law_grows_with_width() {
        for d in 1..=64 {
            let r = latency_report(d, 1, 1);
            let expect = d as f64 / (1 + tree_add_levels(d)) as f64;
            assert!((r.unit_ratio - expect).abs() < 1e-12);
        }
        // Monotone along the power-of-two widths (the ratio dips just past
        // each power of two, where the tree gains a level).
        let mut prev = 0.0;
        for k in 0..=10 {
            let r = latency_report(1 << k, 1, 1);
            assert!(r.unit_ratio >= prev, "d={}", 1 << k);
            prev = r.unit_ratio;
        }
    }

    #[test]
    fn audit_exact_inputs_match_fully() {
        let ops = Ops::new(OpsMode::FastCheck);
        // Small integers: every partial sum is exact, so order cannot matter.
        let x = Fp8Tensor::new(
            1,
            8,
            [1.0, 2.0, 1.0, 3.0, 2.0, 1.0, 1.0, 2.0].iter().map(|&v| code_of(v)).collect(),
        )
        .unwrap();
        let w = Fp8Tensor::filled(4, 8, Fp8Code::ONE);
        let audit = nonassociativity_audit(&x, &w, &ops).unwrap();
        assert_eq!(audit.match_rate, 1.0);

        // Two-element rows have a single addition order.
        let x2 = Fp8Tensor::random(4, 2, 7);
        let w2 = Fp8Tensor::random(4, 2, 8);
        let audit2 = nonassociativity_audit(&x2, &w2, &ops).unwrap();
        assert_eq!(audit2.match_rate, 1.0);
    }

    #[test]
    fn audit_wide_sparse_rows_disagree_within_one_ulp() {
        // Sparse post-activation regime: order effects appear but stay
        // within one code step.
        let ops = Ops::new(OpsMode::FastCheck);
        let x = Fp8Tensor::random_sparse(4, 256, 2, 0.1, 1.0, false);
        let w = Fp8Tensor::random_sparse(8, 256, 1002, 0.1, 1.0, true);
        let audit = nonassociativity_audit(&x, &w, &ops).unwrap();
        assert!(audit.match_rate > 0.0 && audit.match_rate < 1.0, "{}", audit.match_rate);
        assert!(audit.max_ulp_delta <= 1, "{}", audit.max_ulp_delta);
    }

    #[test]
    fn tensor_round_trips_through_file() {
        let t = Fp8Tensor::random(6, 9, 99);
        let dir = std::env::temp_dir().join("spikefp_tensor_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("t.fp8");
        t.write_to(&path).unwrap();
        let back = Fp8Tensor::read_from(&path).unwrap();
        assert_eq!(t, back);
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let ops = Ops::new(OpsMode::FastCheck);
        let x = Fp8Tensor::filled(1, 3, Fp8Code::ONE);
        let w = Fp8Tensor::filled(1, 4, Fp8Code::ONE);
        assert!(linear_forward(&x, &w, ReduceOrder::Tree, &ops).is_err());
    }
}

//! Forward-only MLP demo over the FP8 linear engine: a fixed 16→8→4 net
//! with a positive-threshold activation, run tree-ordered on the spiking
//! datapaths and checked sample-by-sample against the order-matched
//! numeric reference.

use anyhow::{bail, Context, Result};
use serde::Serialize;
use spikefp::fp8::{encode_rne, ExactReal};
use spikefp::linear::{linear_forward, Fp8Tensor, Ops, OpsMode, ReduceOrder};
use spikefp::{Fp8Class, Fp8Code, OverflowMode};
use std::path::{Path, PathBuf};

pub const MLP_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone)]
pub struct MlpOptions {
    pub samples: usize,
    pub seed: u64,
    pub fast_check: bool,
    /// IDX-format image file; synthetic samples when absent or unreadable.
    pub images: Option<PathBuf>,
    /// Directory holding mlp_w1.fp8t / mlp_w2.fp8t; defaults to the files
    /// shipped with this crate.
    pub weights_dir: Option<PathBuf>,
}

impl Default for MlpOptions {
    fn default() -> MlpOptions {
        MlpOptions { samples: 1000, seed: 0, fast_check: false, images: None, weights_dir: None }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MlpDemoReport {
    pub schema_version: u32,
    /// Inter-layer nonlinearity: strictly positive values spike to +1,
    /// everything else to +0.
    pub activation: String,
    pub mode: String,
    pub data_source: String,
    pub layer_shapes: Vec<[usize; 2]>,
    pub samples: usize,
    pub seed: u64,
    /// Spiking tree forward vs numeric tree forward, per-sample argmax.
    pub argmax_agreement: f64,
    /// Numeric tree vs numeric sequential, bitwise over all activations.
    pub tree_vs_sequential_bitwise_match: f64,
    pub warning: Option<String>,
}

fn shipped_weights_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
}

pub fn load_weights(dir: &Path) -> Result<(Fp8Tensor, Fp8Tensor)> {
    let w1 = Fp8Tensor::read_from(&dir.join("mlp_w1.fp8t"))
        .with_context(|| format!("reading mlp_w1.fp8t from {}", dir.display()))?;
    let w2 = Fp8Tensor::read_from(&dir.join("mlp_w2.fp8t"))
        .with_context(|| format!("reading mlp_w2.fp8t from {}", dir.display()))?;
    if w2.cols != w1.rows {
        bail!("weight shapes do not chain: {}x{} then {}x{}", w1.rows, w1.cols, w2.rows, w2.cols);
    }
    Ok((w1, w2))
}

/// Positive-threshold spike activation: strictly positive finite nonzero
/// codes map to +1, everything else to +0.
pub fn threshold_activation(t: &Fp8Tensor) -> Fp8Tensor {
    let data = (0..t.rows * t.cols)
        .map(|i| {
            let c = t.get(i / t.cols, i % t.cols);
            let positive = !c.sign()
                && matches!(c.classify(), Fp8Class::Normal | Fp8Class::Subnormal);
            if positive {
                Fp8Code::ONE
            } else {
                Fp8Code::POS_ZERO
            }
        })
        .collect();
    Fp8Tensor { rows: t.rows, cols: t.cols, data }
}

/// Two-layer forward pass; returns (hidden activations, outputs).
pub fn forward(
    x: &Fp8Tensor,
    w1: &Fp8Tensor,
    w2: &Fp8Tensor,
    order: ReduceOrder,
    ops: &Ops,
) -> Result<(Fp8Tensor, Fp8Tensor)> {
    let (pre_h, _) = linear_forward(x, w1, order, ops)?;
    let h = threshold_activation(&pre_h);
    let (y, _) = linear_forward(&h, w2, order, ops)?;
    Ok((pre_h, y))
}

pub fn argmax_row(t: &Fp8Tensor, row: usize) -> usize {
    (0..t.cols)
        .max_by_key(|&c| (t.get(row, c).order_index(), std::cmp::Reverse(c)))
        .unwrap()
}

/// Synthetic input batch: sparse signed magnitudes |v| ≤ 1, matching the
/// post-activation regime the datapaths see in practice.
pub fn synthetic_batch(samples: usize, d_in: usize, seed: u64) -> Fp8Tensor {
    Fp8Tensor::random_sparse(samples, d_in, seed, 0.5, 1.0, true)
}

/// Minimal IDX (MNIST-style) image reader: magic 0x00000803, u8 pixels.
/// Each image is reduced to a 4×4 grid of block means, scaled to [0,1],
/// and encoded round-to-nearest-even.
pub fn read_idx_images(path: &Path, max_samples: usize) -> Result<Fp8Tensor> {
    let raw = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    if raw.len() < 16 {
        bail!("IDX file too short");
    }
    let magic = u32::from_be_bytes(raw[0..4].try_into().unwrap());
    if magic != 0x0000_0803 {
        bail!("not an IDX u8 image file (magic {magic:#010x})");
    }
    let n = u32::from_be_bytes(raw[4..8].try_into().unwrap()) as usize;
    let h = u32::from_be_bytes(raw[8..12].try_into().unwrap()) as usize;
    let w = u32::from_be_bytes(raw[12..16].try_into().unwrap()) as usize;
    if h < 4 || w < 4 {
        bail!("images too small to pool to a 4x4 grid: {h}x{w}");
    }
    let pixels = &raw[16..];
    if pixels.len() < n * h * w {
        bail!("truncated IDX payload");
    }
    let n = n.min(max_samples);
    let mut data = Vec::with_capacity(n * 16);
    for img in 0..n {
        let base = img * h * w;
        for br in 0..4 {
            for bc in 0..4 {
                let (r0, r1) = (br * h / 4, (br + 1) * h / 4);
                let (c0, c1) = (bc * w / 4, (bc + 1) * w / 4);
                let mut sum = 0u64;
                for r in r0..r1 {
                    for c in c0..c1 {
                        sum += pixels[base + r * w + c] as u64;
                    }
                }
                let mean = sum as f64 / ((r1 - r0) * (c1 - c0)) as f64 / 255.0;
                data.push(encode_f64(mean));
            }
        }
    }
    Ok(Fp8Tensor::new(n, 16, data)?)
}

fn encode_f64(v: f64) -> Fp8Code {
    if v == 0.0 {
        return Fp8Code::POS_ZERO;
    }
    // v ∈ (0,1]: express as dyadic sig·2^exp via the f64 bit pattern.
    let bits = v.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32 - 1023 - 52;
    let sig = (bits & ((1u64 << 52) - 1)) | (1u64 << 52);
    encode_rne(&ExactReal::new(v < 0.0, sig, exp), OverflowMode::Saturate)
}

pub fn run_mlp_demo(opts: &MlpOptions) -> Result<MlpDemoReport> {
    let dir = opts.weights_dir.clone().unwrap_or_else(shipped_weights_dir);
    let (w1, w2) = load_weights(&dir)?;
    let d_in = w1.cols;

    let mut warning = None;
    let (x, data_source) = match &opts.images {
        Some(path) => match read_idx_images(path, opts.samples) {
            Ok(t) => (t, "idx".to_string()),
            Err(e) => {
                warning = Some(format!("falling back to synthetic data: {e}"));
                (synthetic_batch(opts.samples, d_in, opts.seed), "synthetic".to_string())
            }
        },
        None => (synthetic_batch(opts.samples, d_in, opts.seed), "synthetic".to_string()),
    };

    let reference = Ops::new(OpsMode::FastCheck);
    let device = if opts.fast_check {
        Ops::new(OpsMode::FastCheck)
    } else {
        Ops::new(OpsMode::Spiking)
    };

    let (_, y_ref) = forward(&x, &w1, &w2, ReduceOrder::Tree, &reference)?;
    let (_, y_dev) = forward(&x, &w1, &w2, ReduceOrder::Tree, &device)?;
    let agree = (0..x.rows)
        .filter(|&r| argmax_row(&y_dev, r) == argmax_row(&y_ref, r))
        .count();

    // Reduction-order sensitivity, numeric on both sides: bitwise match
    // over hidden pre-activations and outputs.
    let (h_tree, y_tree) = forward(&x, &w1, &w2, ReduceOrder::Tree, &reference)?;
    let (h_seq, y_seq) = forward(&x, &w1, &w2, ReduceOrder::Sequential, &reference)?;
    let acts = |h: &Fp8Tensor, y: &Fp8Tensor| -> Vec<Fp8Code> {
        h.data.iter().chain(y.data.iter()).copied().collect()
    };
    let t = acts(&h_tree, &y_tree);
    let s = acts(&h_seq, &y_seq);
    let bit_match = t.iter().zip(&s).filter(|(a, b)| a == b).count() as f64 / t.len() as f64;

    Ok(MlpDemoReport {
        schema_version: MLP_SCHEMA_VERSION,
        activation: "positive-threshold".to_string(),
        mode: if opts.fast_check { "fast-check" } else { "spiking" }.to_string(),
        data_source,
        layer_shapes: vec![[w1.rows, w1.cols], [w2.rows, w2.cols]],
        samples: x.rows,
        seed: opts.seed,
        argmax_agreement: agree as f64 / x.rows as f64,
        tree_vs_sequential_bitwise_match: bit_match,
        warning,
    })
}

//! Leak (β) and noise (σ) robustness campaigns over gates and the spatial
//! adder, with seeded Monte Carlo statistics. Results are deterministic:
//! every trial derives its own seed from (campaign seed, target, grid
//! point, case, trial), so parallel execution cannot change outcomes.

use crate::adder::{build_spatial_adder, corner_suite};
use crate::fp8::oracle_add;
use crate::gates::{build_gate, GateKind};
use crate::multiplier::pack_inputs;
use crate::sim::{derive_seed, hash_label, Circuit, SimConfig};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanTarget {
    And,
    Or,
    Xor,
    SpatialAdder,
}

impl ScanTarget {
    pub fn label(self) -> &'static str {
        match self {
            ScanTarget::And => "and",
            ScanTarget::Or => "or",
            ScanTarget::Xor => "xor",
            ScanTarget::SpatialAdder => "spatial-adder",
        }
    }

    pub const ALL: [ScanTarget; 4] =
        [ScanTarget::And, ScanTarget::Or, ScanTarget::Xor, ScanTarget::SpatialAdder];
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanSpec {
    pub targets: Vec<ScanTarget>,
    pub beta_grid: Vec<f64>,
    pub sigma_grid: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
}

impl Default for ScanSpec {
    fn default() -> ScanSpec {
        ScanSpec {
            targets: ScanTarget::ALL.to_vec(),
            beta_grid: vec![1.0, 0.5, 0.1, 0.01],
            sigma_grid: vec![0.05, 0.10, 0.15, 0.20, 0.30, 0.50],
            trials: 10_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Error)]
pub enum ScanError {
    #[error("scan spec has no targets")]
    NoTargets,
    #[error("scan grid is empty")]
    EmptyGrid,
    #[error("trials must be >= 1")]
    NoTrials,
}

impl ScanSpec {
    pub fn validate(&self, kind: ScanKind) -> Result<(), ScanError> {
        if self.targets.is_empty() {
            return Err(ScanError::NoTargets);
        }
        let grid = match kind {
            ScanKind::Beta => &self.beta_grid,
            ScanKind::Sigma => &self.sigma_grid,
        };
        if grid.is_empty() {
            return Err(ScanError::EmptyGrid);
        }
        if self.trials == 0 {
            return Err(ScanError::NoTrials);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanKind {
    Beta,
    Sigma,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointResult {
    pub target: ScanTarget,
    /// β for leak scans, σ for noise scans.
    pub param: f64,
    pub passes: u64,
    pub trials: u64,
    pub accuracy: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanResult {
    pub kind: ScanKind,
    pub seed: u64,
    pub points: Vec<PointResult>,
    /// Smallest grid σ with any observed failure, per target (σ scans).
    pub first_failure_sigma: Vec<(ScanTarget, Option<f64>)>,
}

impl ScanResult {
    pub fn accuracy(&self, target: ScanTarget, param: f64) -> Option<f64> {
        self.points
            .iter()
            .find(|p| p.target == target && p.param == param)
            .map(|p| p.accuracy)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("target,param,passes,trials,accuracy\n");
        for p in &self.points {
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                p.target.label(),
                p.param,
                p.passes,
                p.trials,
                p.accuracy
            ));
        }
        s
    }
}

/// One deterministic test case: packed input lines and expected outputs.
struct Case {
    inputs: Vec<bool>,
    expected: Vec<bool>,
}

fn gate_cases(kind: GateKind) -> Vec<Case> {
    let f: fn(bool, bool) -> bool = match kind {
        GateKind::And => |a, b| a && b,
        GateKind::Or => |a, b| a || b,
        GateKind::Xor => |a, b| a ^ b,
        _ => unreachable!("scan targets are two-input gates"),
    };
    let mut cases = Vec::new();
    for a in [false, true] {
        for b in [false, true] {
            cases.push(Case { inputs: vec![a, b], expected: vec![f(a, b)] });
        }
    }
    cases
}

fn adder_cases() -> Vec<Case> {
    corner_suite()
        .into_iter()
        .map(|(a, b, _)| Case {
            inputs: pack_inputs(a, b),
            expected: oracle_add(a, b).to_bits().to_vec(),
        })
        .collect()
}

fn target_circuit(target: ScanTarget) -> Circuit {
    match target {
        ScanTarget::And => build_gate(GateKind::And),
        ScanTarget::Or => build_gate(GateKind::Or),
        ScanTarget::Xor => build_gate(GateKind::Xor),
        ScanTarget::SpatialAdder => build_spatial_adder(),
    }
}

fn target_cases(target: ScanTarget) -> Vec<Case> {
    match target {
        ScanTarget::And => gate_cases(GateKind::And),
        ScanTarget::Or => gate_cases(GateKind::Or),
        ScanTarget::Xor => gate_cases(GateKind::Xor),
        ScanTarget::SpatialAdder => adder_cases(),
    }
}

/// Pure-leak scan (σ=0): deterministic, each case evaluated once per β.
pub fn beta_scan(spec: &ScanSpec) -> Result<ScanResult, ScanError> {
    spec.validate(ScanKind::Beta)?;
    let mut points = Vec::new();
    for &target in &spec.targets {
        let circuit = target_circuit(target);
        let cases = target_cases(target);
        for &beta in &spec.beta_grid {
            let cfg = SimConfig::lif(beta, 0.0, spec.seed);
            let mut eval = circuit.evaluator();
            let passes = cases
                .iter()
                .filter(|c| eval.evaluate(&c.inputs, &cfg).unwrap() == c.expected)
                .count() as u64;
            let trials = cases.len() as u64;
            points.push(PointResult {
                target,
                param: beta,
                passes,
                trials,
                accuracy: passes as f64 / trials as f64,
            });
        }
    }
    Ok(ScanResult { kind: ScanKind::Beta, seed: spec.seed, points, first_failure_sigma: vec![] })
}

/// Seeded Monte Carlo noise scan at β=1. Each (target, σ, case, trial)
/// derives its own noise seed; trials parallelize without changing
/// results.
pub fn sigma_scan(spec: &ScanSpec) -> Result<ScanResult, ScanError> {
    spec.validate(ScanKind::Sigma)?;
    let mut points = Vec::new();
    let mut first_failure: Vec<(ScanTarget, Option<f64>)> = Vec::new();
    for &target in &spec.targets {
        let circuit = target_circuit(target);
        let cases = target_cases(target);
        let tlabel = hash_label(target.label());
        let mut first: Option<f64> = None;
        for (pi, &sigma) in spec.sigma_grid.iter().enumerate() {
            let passes: u64 = cases
                .par_iter()
                .enumerate()
                .map(|(ci, case)| {
                    let mut eval = circuit.evaluator();
                    let mut ok = 0u64;
                    for trial in 0..spec.trials {
                        let seed = derive_seed(&[
                            spec.seed,
                            tlabel,
                            pi as u64,
                            ci as u64,
                            trial as u64,
                        ]);
                        let cfg = SimConfig::lif(1.0, sigma, seed);
                        if eval.evaluate(&case.inputs, &cfg).unwrap() == case.expected {
                            ok += 1;
                        }
                    }
                    ok
                })
                .sum();
            let trials = (cases.len() * spec.trials) as u64;
            if passes < trials && first.is_none() {
                first = Some(sigma);
            }
            points.push(PointResult {
                target,
                param: sigma,
                passes,
                trials,
                accuracy: passes as f64 / trials as f64,
            });
        }
        first_failure.push((target, first));
    }
    Ok(ScanResult { kind: ScanKind::Sigma, seed: spec.seed, points, first_failure_sigma: first_failure })
}

/// Reference temporal accumulator (V_th=2, +1 input per step): fraction of
/// steps whose spike/no-spike outcome matches the ideal β=1 pattern.
/// Demonstrates why multi-step state retention fails under leakage.
pub fn temporal_accumulator_accuracy(beta: f64, steps: usize) -> f64 {
    use crate::sim::{NeuronSpec, ResetKind, Source, Synapse};
    let neuron = NeuronSpec { id: 0, threshold: 2.0, reset: ResetKind::SoftSubtract, depth: 1 };
    let syn = Synapse { pre: Source::Input(0), post: 0, weight: 1.0 };
    let circuit = Circuit::new(
        vec!["i".to_string()],
        vec![neuron],
        vec![syn],
        vec![0],
        vec!["o".to_string()],
    )
    .unwrap();
    let stream = vec![vec![true]; steps];
    let run = |beta: f64| {
        circuit
            .evaluate_temporal_reference(&stream, &SimConfig::lif(beta, 0.0, 0))
            .unwrap()
    };
    let ideal = run(1.0);
    let leaky = run(beta);
    let matches = ideal.iter().zip(&leaky).filter(|(a, b)| a == b).count();
    matches as f64 / steps as f64
}

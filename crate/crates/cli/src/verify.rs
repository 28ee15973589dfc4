//! Exhaustive bit-exactness campaigns for the spiking multiply and add
//! datapaths, differenced against the software oracle, with per-class
//! pass-rate breakdowns.

use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;
use spikefp::adder::{corner_suite, AddOptions, SpatialAdder};
use spikefp::fp8::{oracle_add_mode, oracle_mul_mode, Fp8Class};
use spikefp::multiplier::{pack_inputs, MulOptions, Multiplier};
use spikefp::sim::{derive_seed, Circuit, SimConfig};
use spikefp::{Fp8Code, OverflowMode};
use std::collections::BTreeMap;
use std::time::Instant;

pub const SWEEP_SCHEMA_VERSION: u32 = 1;
/// Cap on counterexamples retained per campaign.
const MAX_FAILURES: usize = 32;

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub seed: u64,
    pub beta: f64,
    pub sigma: f64,
    pub saturate: bool,
    /// Multiplier debug switch: disable the shift-dependent sticky
    /// correction to expose subnormal misrounding.
    pub sticky_extra: bool,
    /// Seeded random pair trials in the adder campaign.
    pub random_trials: usize,
}

impl Default for VerifyConfig {
    fn default() -> VerifyConfig {
        VerifyConfig {
            seed: 0,
            beta: 1.0,
            sigma: 0.0,
            saturate: true,
            sticky_extra: true,
            random_trials: 100,
        }
    }
}

impl VerifyConfig {
    fn overflow(&self) -> OverflowMode {
        if self.saturate {
            OverflowMode::Saturate
        } else {
            OverflowMode::Nan
        }
    }

    fn sim(&self, a: Fp8Code, b: Fp8Code, phase: u64) -> SimConfig {
        if self.sigma == 0.0 && self.beta == 1.0 {
            SimConfig::ideal()
        } else {
            let seed = derive_seed(&[self.seed, phase, a.0 as u64, b.0 as u64]);
            SimConfig::lif(self.beta, self.sigma, seed)
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub seed: u64,
    pub beta: f64,
    pub sigma: f64,
    pub saturate: bool,
    pub sticky_extra: bool,
    pub random_trials: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassCount {
    pub class: String,
    pub total: u64,
    pub passes: u64,
    pub pass_rate: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub a: String,
    pub b: String,
    pub got: String,
    pub expected: String,
    pub class: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub schema_version: u32,
    pub campaign: String,
    pub config: ConfigEcho,
    pub classes: Vec<ClassCount>,
    pub total: u64,
    pub passes: u64,
    pub pass_rate: f64,
    /// Counterexamples, capped; nonempty whenever passes < total.
    pub failures: Vec<Failure>,
    pub mean_sparsity: f64,
    pub wall_ms: u128,
}

impl SweepReport {
    pub fn all_pass(&self) -> bool {
        self.passes == self.total
    }

    pub fn class_rate(&self, class: &str) -> Option<f64> {
        self.classes.iter().find(|c| c.class == class).map(|c| c.pass_rate)
    }

    pub fn to_csv(&self) -> anyhow::Result<String> {
        crate::io::csv_string(self.classes.iter().cloned())
    }
}

/// Table-row label for an operand pair, by operand class.
pub fn class_label(a: Fp8Code, b: Fp8Code) -> &'static str {
    use Fp8Class::*;
    match (a.classify(), b.classify()) {
        (Zero, _) => "zero*any",
        (_, Zero) => "any*zero",
        (Normal, Normal) => "normal*normal",
        (Subnormal, Normal) => "subnormal*normal",
        (Normal, Subnormal) => "normal*subnormal",
        (Subnormal, Subnormal) => "subnormal*subnormal",
        (Nan, _) | (_, Nan) => "nan*any",
    }
}

#[derive(Default)]
struct Tally {
    classes: BTreeMap<&'static str, (u64, u64)>,
    failures: Vec<Failure>,
    sparsity_sum: f64,
    evals: u64,
}

impl Tally {
    fn record(
        &mut self,
        class: &'static str,
        a: Fp8Code,
        b: Fp8Code,
        got: Fp8Code,
        expected: Fp8Code,
        sparsity: f64,
    ) {
        let entry = self.classes.entry(class).or_insert((0, 0));
        entry.0 += 1;
        if got == expected {
            entry.1 += 1;
        } else if self.failures.len() < MAX_FAILURES {
            self.failures.push(Failure {
                a: format!("{:#04x}", a.0),
                b: format!("{:#04x}", b.0),
                got: format!("{:#04x}", got.0),
                expected: format!("{:#04x}", expected.0),
                class: class.to_string(),
            });
        }
        self.sparsity_sum += sparsity;
        self.evals += 1;
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (class, (t, p)) in other.classes {
            let entry = self.classes.entry(class).or_insert((0, 0));
            entry.0 += t;
            entry.1 += p;
        }
        self.failures.extend(other.failures);
        self.failures.truncate(MAX_FAILURES);
        self.sparsity_sum += other.sparsity_sum;
        self.evals += other.evals;
        self
    }

    fn finish(self, campaign: &str, cfg: &VerifyConfig, started: Instant) -> SweepReport {
        let classes: Vec<ClassCount> = self
            .classes
            .into_iter()
            .map(|(class, (total, passes))| ClassCount {
                class: class.to_string(),
                total,
                passes,
                pass_rate: passes as f64 / total as f64,
            })
            .collect();
        let total: u64 = classes.iter().map(|c| c.total).sum();
        let passes: u64 = classes.iter().map(|c| c.passes).sum();
        SweepReport {
            schema_version: SWEEP_SCHEMA_VERSION,
            campaign: campaign.to_string(),
            config: ConfigEcho {
                seed: cfg.seed,
                beta: cfg.beta,
                sigma: cfg.sigma,
                saturate: cfg.saturate,
                sticky_extra: cfg.sticky_extra,
                random_trials: cfg.random_trials,
            },
            classes,
            total,
            passes,
            pass_rate: passes as f64 / total as f64,
            failures: self.failures,
            mean_sparsity: self.sparsity_sum / self.evals as f64,
            wall_ms: started.elapsed().as_millis(),
        }
    }
}

fn sweep_pairs<F>(circuit: &Circuit, cfg: &VerifyConfig, phase: u64, oracle: F) -> Tally
where
    F: Fn(Fp8Code, Fp8Code) -> Fp8Code + Sync,
{
    let codes: Vec<Fp8Code> = Fp8Code::finite_codes().collect();
    codes
        .par_iter()
        .map(|&a| {
            let mut eval = circuit.evaluator();
            let mut tally = Tally::default();
            for &b in &codes {
                let out = eval
                    .evaluate(&pack_inputs(a, b), &cfg.sim(a, b, phase))
                    .expect("fixed bus widths");
                let got = Fp8Code::from_bits(&out);
                tally.record(class_label(a, b), a, b, got, oracle(a, b), eval.last_sparsity());
            }
            tally
        })
        .reduce(Tally::default, Tally::merge)
}

/// Exhaustive multiply campaign: every finite pair through the spiking
/// multiplier vs the oracle, with per-class pass rates.
pub fn run_verify_mul(cfg: &VerifyConfig) -> SweepReport {
    let started = Instant::now();
    let overflow = cfg.overflow();
    let mult = Multiplier::with_options(MulOptions { sticky_extra: cfg.sticky_extra, overflow });
    let tally = sweep_pairs(mult.circuit(), cfg, 1, |a, b| oracle_mul_mode(a, b, overflow));
    tally.finish("verify-mul", cfg, started)
}

/// Add campaign: versioned corner suite, seeded random trials, and the
/// full exhaustive pair sweep.
pub fn run_verify_add(cfg: &VerifyConfig) -> SweepReport {
    let started = Instant::now();
    let overflow = cfg.overflow();
    let adder = SpatialAdder::with_options(AddOptions { overflow });
    let oracle = |a, b| oracle_add_mode(a, b, overflow);

    let mut tally = Tally::default();
    let mut eval = adder.circuit().evaluator();
    let mut run_case = |tally: &mut Tally, class, a, b| {
        let out = eval.evaluate(&pack_inputs(a, b), &cfg.sim(a, b, 2)).expect("fixed bus widths");
        tally.record(class, a, b, Fp8Code::from_bits(&out), oracle(a, b), eval.last_sparsity());
    };

    for (a, b, _) in corner_suite() {
        run_case(&mut tally, "corner-suite", a, b);
    }
    let codes: Vec<Fp8Code> = Fp8Code::finite_codes().collect();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(derive_seed(&[cfg.seed, 0xadd]));
    for _ in 0..cfg.random_trials {
        let a = codes[rng.gen_range(0..codes.len())];
        let b = codes[rng.gen_range(0..codes.len())];
        run_case(&mut tally, "random-trials", a, b);
    }
    drop(run_case);
    drop(eval);

    let tally = tally.merge(sweep_pairs(adder.circuit(), cfg, 3, oracle));
    tally.finish("verify-add", cfg, started)
}

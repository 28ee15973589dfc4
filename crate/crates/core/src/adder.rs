//! Five-stage combinational FP8 (1-4-3) adder built from spiking gates.
//!
//! Stage 1 compares magnitudes on the packed (E, M) fields, swaps the
//! operands into big/small order, and subtracts effective exponents.
//! Stage 2 aligns the small significand with a 12-line MUX-cascade barrel
//! shifter whose shifted-out bits accumulate into a sticky side-line.
//! Stage 3 adds or (via two's complement) subtracts the 12-bit wide
//! mantissas. Stage 4 renormalizes with a hierarchical leading-zero
//! detector and a left shifter, adjusting the exponent. Stage 5 rounds to
//! nearest-even, clamps overflow, bypasses NaN, and fixes the zero sign:
//! exact cancellation yields +0 while -0 + -0 stays -0.

use crate::fp8::{Fp8Code, OverflowMode};
use crate::gates::{CircuitBuilder, Signal};
use crate::multiplier::{
    assemble_output, effective_exp, emit_bus, hidden, is_nan, operand_bus_names, pack_inputs,
    round_pack, unpack,
};
use crate::sim::{Circuit, SimConfig, SimError};
use crate::word::{const_word, word_from_signals, Bit, Dp, ZERO};
use serde::Deserialize;

/// Wide mantissa line count: [h, m2, m1, m0, g0..g7].
pub const WIDE_LINES: usize = 12;

#[derive(Debug, Clone, Copy)]
pub struct AddOptions {
    pub overflow: OverflowMode,
}

impl Default for AddOptions {
    fn default() -> AddOptions {
        AddOptions { overflow: OverflowMode::Saturate }
    }
}

pub fn build_spatial_adder() -> Circuit {
    build_spatial_adder_with(AddOptions::default())
}

pub fn build_spatial_adder_with(opts: AddOptions) -> Circuit {
    build_spatial_adder_staged(opts).0
}

/// Build the adder and report neurons added per stage.
#[allow(unused_assignments)]
pub fn build_spatial_adder_staged(opts: AddOptions) -> (Circuit, Vec<(String, usize)>) {
    let mut b = CircuitBuilder::new();
    let a_bus: Vec<Signal> =
        operand_bus_names("a").into_iter().map(|n| b.input(n)).collect();
    let b_bus: Vec<Signal> =
        operand_bus_names("b").into_iter().map(|n| b.input(n)).collect();
    let a = unpack(&a_bus);
    let bo = unpack(&b_bus);

    let mut stages: Vec<(String, usize)> = Vec::new();
    let mut mark = 0usize;
    let mut dp = Dp::new(&mut b);
    macro_rules! stage {
        ($name:expr) => {{
            let now = dp.b.neuron_count();
            stages.push(($name.to_string(), now - mark));
            mark = now;
        }};
    }

    let nan_a = is_nan(&mut dp, &a);
    let nan_b = is_nan(&mut dp, &bo);
    let nan = dp.or(nan_a, nan_b);
    let sub = dp.xor(a.sign, bo.sign);
    stage!("unpack");

    // Stage 1: |A| >= |B| on the packed magnitude (E, M), which orders
    // values monotonically across the subnormal boundary. Ties pick A.
    let mut mag_a = a.m.clone();
    mag_a.extend_from_slice(&a.e);
    let mut mag_b = bo.m.clone();
    mag_b.extend_from_slice(&bo.e);
    let ge = dp.cmp_ge(&mag_a, &mag_b);

    let sign_big = dp.mux_raw(ge, a.sign, bo.sign);
    let e_big: Vec<Bit> = (0..4).map(|i| dp.mux_raw(ge, a.e[i], bo.e[i])).collect();
    let e_small: Vec<Bit> = (0..4).map(|i| dp.mux_raw(ge, bo.e[i], a.e[i])).collect();
    let m_big: Vec<Bit> = (0..3).map(|i| dp.mux_raw(ge, a.m[i], bo.m[i])).collect();
    let m_small: Vec<Bit> = (0..3).map(|i| dp.mux_raw(ge, bo.m[i], a.m[i])).collect();

    let big = crate::multiplier::Operand { sign: sign_big, e: e_big, m: m_big };
    let small = crate::multiplier::Operand { sign: ZERO, e: e_small, m: m_small };
    let h_big = hidden(&mut dp, &big);
    let h_small = hidden(&mut dp, &small);
    let ee_big = effective_exp(&mut dp, &big, h_big);
    let ee_small = effective_exp(&mut dp, &small, h_small);
    let (delta, _) = dp.ripple_sub(&ee_big, &ee_small, 4);
    stage!("stage1_compare_swap");

    // Wide mantissas, little-endian: bits 0..7 guard, 8..10 mantissa, 11 h.
    let mut w_small: Vec<Bit> = vec![ZERO; 8];
    w_small.extend_from_slice(&small.m);
    w_small.push(h_small);
    let mut w_big: Vec<Bit> = vec![ZERO; 8];
    w_big.extend_from_slice(&big.m);
    w_big.push(h_big);

    // Stage 2: alignment barrel shifter, 4 MUX layers (shifts 8/4/2/1),
    // with the shifted-out bits OR-accumulated into a sticky side-line.
    let (w_aligned, side_sticky) = dp.shift_right_raw(&w_small, &delta);
    stage!("stage2_barrel_shifter");

    // Stage 3: 12-bit add/sub core. Subtraction is two's complement; when
    // the alignment already dropped bits into the sticky side-line the true
    // small operand is slightly larger, so borrow one extra ulp (cin = 0)
    // and let the residual fraction surface through sticky.
    let inv: Vec<Bit> = w_aligned.iter().map(|&x| dp.xor(sub, x)).collect();
    let nss = dp.not(side_sticky);
    let cin = dp.and(sub, nss);
    let (sum, carry) = dp.ripple_add(&w_big, &inv, cin);
    let not_sub = dp.not(sub);
    let top = dp.and(carry, not_sub);
    let mut val: Vec<Bit> = sum;
    val.push(top); // 13 lines
    stage!("stage3_add_sub_core");

    // Stage 4: hierarchical LZD + normalization left shift + exponent
    // adjust T = E_big_eff + (15 - P); biased result exponent is T - 14.
    let (p, vzero) = dp.leading_zeros(&val); // 4 bits
    stage!("stage4_lzd");
    let nval = dp.shift_left_raw(&val, &p);
    stage!("stage4_normalize_shift");

    let np: Vec<Bit> = p.iter().map(|&x| dp.not(x)).collect();
    let (mut t, tc) = dp.ripple_add(&ee_big, &np, ZERO);
    t.push(tc); // 5 bits, value in [1, 30]

    let in_range = dp.cmp_ge_const(&t, 15);
    let nz = dp.not(vzero);
    let normal = dp.and(in_range, nz);
    let not_normal = dp.not(normal);
    let mut t6 = t.clone();
    t6.push(ZERO);
    let (e_pre, _) = dp.ripple_add(&t6, &const_word(50, 6), ZERO); // T - 14 mod 64
    // Subnormal denormalization amount s = 15 - T, clamped to 7.
    let nt: Vec<Bit> = t.iter().map(|&x| dp.not(x)).collect();
    let (s_pre, _) = dp.ripple_add(&nt, &const_word(16, 5), ZERO);
    let ge8 = dp.or(s_pre[3], s_pre[4]);
    let s: Vec<Bit> = (0..3)
        .map(|i| {
            let v = dp.or(s_pre[i], ge8);
            dp.and(v, not_normal)
        })
        .collect();
    stage!("stage4_exponent_adjust");

    // Stage 5: field extraction window [R, M0, M1, M2, H] with subnormal
    // denormalization, sticky assembly, RNE round, clamp, NaN bypass.
    let v5 = [nval[8], nval[9], nval[10], nval[11], nval[12]];
    let v5s = dp.shift_right_raw_drop(&v5, &s);
    let r = v5s[0];
    let m = [v5s[1], v5s[2], v5s[3]];

    let low_or = dp.or_word(&nval[..8]);
    // Bits the denormalization shift moves past the round position.
    let ge1 = dp.or_word(&s);
    let ge2 = dp.or(s[1], s[2]);
    let s10 = dp.and(s[1], s[0]);
    let ge3 = dp.or(s[2], s10);
    let ge4 = s[2];
    let m1c = dp.and(ge1, nval[8]);
    let m2c = dp.and(ge2, nval[9]);
    let m3c = dp.and(ge3, nval[10]);
    let m4c = dp.and(ge4, nval[11]);
    let miss_a = dp.or(m1c, m2c);
    let miss_b = dp.or(m3c, m4c);
    let miss = dp.or(miss_a, miss_b);
    let s_part = dp.or(low_or, side_sticky);
    let sticky = dp.or(s_part, miss);
    stage!("stage5_field_sticky");

    let (m_out, e_out, ovf) = round_pack(&mut dp, r, &m, sticky, &e_pre, normal);

    // Exact cancellation under effective subtraction yields +0; all other
    // zero results (zero inputs) keep the big operand's sign.
    let cancel = dp.and(vzero, sub);
    let keep = dp.not(cancel);
    let sign_res = dp.and(sign_big, keep);

    let bus = assemble_output(&mut dp, sign_res, &e_out, &m_out, nan, ovf, opts.overflow);
    emit_bus(&mut dp, "r", &bus);
    stage!("stage5_round_pack");
    drop(dp);
    let circuit = b.build().expect("adder circuit is a valid DAG");
    (circuit, stages)
}

/// Packed-operand adder with a reusable evaluation plan.
pub struct SpatialAdder {
    circuit: Circuit,
    options: AddOptions,
}

impl SpatialAdder {
    pub fn new() -> SpatialAdder {
        SpatialAdder::with_options(AddOptions::default())
    }

    pub fn with_options(options: AddOptions) -> SpatialAdder {
        SpatialAdder { circuit: build_spatial_adder_with(options), options }
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn options(&self) -> AddOptions {
        self.options
    }

    pub fn add(&self, a: Fp8Code, b: Fp8Code, cfg: &SimConfig) -> Result<Fp8Code, SimError> {
        let inputs = pack_inputs(a, b);
        let (out, _) = self.circuit.evaluate_spatial(&inputs, cfg)?;
        Ok(Fp8Code::from_bits(&out))
    }
}

impl Default for SpatialAdder {
    fn default() -> SpatialAdder {
        SpatialAdder::new()
    }
}

/// One-shot spiking add under ideal dynamics, against a process-wide
/// cached circuit.
pub fn snn_add(a: Fp8Code, b: Fp8Code) -> Fp8Code {
    use std::sync::OnceLock;
    static SHARED: OnceLock<SpatialAdder> = OnceLock::new();
    let adder = SHARED.get_or_init(SpatialAdder::new);
    adder.add(a, b, &SimConfig::ideal()).expect("valid bus widths")
}

/// Standalone 12-line alignment barrel shifter for structural testing.
/// Inputs: x11 (h, most significant) .. x0 (g7), then delta d3..d0.
/// Outputs: y11..y0 plus the sticky side-line.
pub fn build_barrel_shifter() -> Circuit {
    let mut b = CircuitBuilder::new();
    let xs: Vec<Signal> = (0..WIDE_LINES).rev().map(|i| b.input(format!("x{i}"))).collect();
    let ds: Vec<Signal> = (0..4).rev().map(|i| b.input(format!("d{i}"))).collect();
    let mut dp = Dp::new(&mut b);
    let word: Vec<Bit> = word_from_signals(&xs).into_iter().rev().collect();
    let delta: Vec<Bit> = word_from_signals(&ds).into_iter().rev().collect();
    let (out, sticky) = dp.shift_right_raw(&word, &delta);
    let mut sigs: Vec<(String, Signal)> = Vec::new();
    for i in (0..WIDE_LINES).rev() {
        let sig = dp.materialize(out[i]);
        sigs.push((format!("y{i}"), sig));
    }
    let st = dp.materialize(sticky);
    sigs.push(("sticky".to_string(), st));
    drop(dp);
    for (name, sig) in sigs {
        b.output(name, sig);
    }
    b.build().expect("barrel shifter is a valid DAG")
}

/// Standalone 12-line leading-zero detector. Outputs the 4-bit position P
/// of the most significant 1 (P=0 for x11 set, P=11 for only x0 set) and
/// an all-zero flag.
pub fn build_lzd() -> Circuit {
    let mut b = CircuitBuilder::new();
    let xs: Vec<Signal> = (0..WIDE_LINES).rev().map(|i| b.input(format!("x{i}"))).collect();
    let mut dp = Dp::new(&mut b);
    let word: Vec<Bit> = word_from_signals(&xs).into_iter().rev().collect();
    let (p, zero) = dp.leading_zeros(&word);
    let mut sigs: Vec<(String, Signal)> = Vec::new();
    for i in (0..4).rev() {
        let sig = dp.materialize(p[i]);
        sigs.push((format!("p{i}"), sig));
    }
    let z = dp.materialize(zero);
    sigs.push(("zero".to_string(), z));
    drop(dp);
    for (name, sig) in sigs {
        b.output(name, sig);
    }
    b.build().expect("lzd is a valid DAG")
}

#[derive(Debug, Clone, Deserialize)]
pub struct CornerCase {
    pub a: String,
    pub b: String,
    pub note: String,
}

#[derive(Debug, Clone, Deserialize)]
struct CornerSuite {
    version: u32,
    cases: Vec<CornerCase>,
}

/// Versioned corner-case suite: cancellation, boundary crossing,
/// saturation, alignment extremes, zeros, and rounding ties.
pub fn corner_suite() -> Vec<(Fp8Code, Fp8Code, String)> {
    let raw = include_str!("../data/adder_corner_suite.json");
    let suite: CornerSuite = serde_json::from_str(raw).expect("corner suite parses");
    assert_eq!(suite.version, 1);
    suite
        .cases
        .into_iter()
        .map(|c| (parse_code(&c.a), parse_code(&c.b), c.note))
        .collect()
}

fn parse_code(s: &str) -> Fp8Code {
    let hex = s.trim_start_matches("0x");
    Fp8Code(u8::from_str_radix(hex, 16).expect("corner suite codes are hex bytes"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp8::oracle_add;
    use crate::sim::SimConfig;

    #[test]
    fn corner_suite_matches_oracle() {
        let adder = SpatialAdder::new();
        let cfg = SimConfig::ideal();
        let suite = corner_suite();
        assert!(suite.len() >= 28);
        for (a, b, note) in suite {
            assert_eq!(
                adder.add(a, b, &cfg).unwrap(),
                oracle_add(a, b),
                "{note}: {:#04x} + {:#04x}",
                a.0,
                b.0
            );
        }
    }

    #[test]
    fn exhaustive_match_against_oracle() {
        let adder = SpatialAdder::new();
        let cfg = SimConfig::ideal();
        let mut eval = adder.circuit().evaluator();
        let mut table = vec![[0u8; 256]; 256];
        for a in Fp8Code::finite_codes() {
            for b in Fp8Code::finite_codes() {
                let out = eval.evaluate(&pack_inputs(a, b), &cfg).unwrap();
                let got = Fp8Code::from_bits(&out);
                let want = oracle_add(a, b);
                assert_eq!(got, want, "{:#04x} + {:#04x}", a.0, b.0);
                table[a.0 as usize][b.0 as usize] = got.0;
            }
        }
        for a in Fp8Code::finite_codes() {
            for b in Fp8Code::finite_codes() {
                assert_eq!(table[a.0 as usize][b.0 as usize], table[b.0 as usize][a.0 as usize]);
            }
        }
    }

    #[test]
    fn identity_and_zero_signs() {
        let adder = SpatialAdder::new();
        let cfg = SimConfig::ideal();
        let mut eval = adder.circuit().evaluator();
        for a in Fp8Code::finite_codes() {
            let out = eval.evaluate(&pack_inputs(a, Fp8Code::POS_ZERO), &cfg).unwrap();
            // -0 + +0 is +0 under RNE; everything else passes through.
            let want =
                if a == Fp8Code::NEG_ZERO { Fp8Code::POS_ZERO } else { a };
            assert_eq!(Fp8Code::from_bits(&out), want, "{:#04x} + 0", a.0);
        }
        assert_eq!(
            adder.add(Fp8Code::NEG_ZERO, Fp8Code::NEG_ZERO, &cfg).unwrap(),
            Fp8Code::NEG_ZERO
        );
    }

    #[test]
    fn resource_figures_are_frozen() {
        let (c, stages) = build_spatial_adder_staged(AddOptions::default());
        let stats = c.stats();
        // Within 15% of the ~1042-neuron reference figure.
        assert!((886..=1198).contains(&stats.neuron_count), "{}", stats.neuron_count);
        // Golden regression values for this construction.
        assert_eq!(stats.neuron_count, 1031);
        assert_eq!(stats.logical_depth, 111);
        let shifter = stages
            .iter()
            .find(|(n, _)| n == "stage2_barrel_shifter")
            .map(|(_, n)| *n)
            .unwrap();
        // 48 4-neuron MUXes plus the sticky collectors.
        assert!((192..=216).contains(&shifter), "{shifter}");
        let total: usize = stages.iter().map(|(_, n)| n).sum();
        assert_eq!(total, stats.neuron_count);
    }

    #[test]
    fn barrel_shifter_exhaustive_against_integer_shift() {
        let c = build_barrel_shifter();
        let cfg = SimConfig::ideal();
        let mut eval = c.evaluator();
        for v in 0..(1u32 << 12) {
            for d in 0..16u32 {
                let mut inputs: Vec<bool> =
                    (0..12).rev().map(|i| v >> i & 1 != 0).collect();
                inputs.extend((0..4).rev().map(|i| d >> i & 1 != 0));
                let out = eval.evaluate(&inputs, &cfg).unwrap();
                let got: u32 = (0..12).map(|i| (out[i] as u32) << (11 - i)).sum();
                let want = if d >= 12 { 0 } else { v >> d };
                assert_eq!(got, want, "v={v:012b} d={d}");
                let lost = v & ((1u32 << d.min(12)) - 1).min(0xfff);
                assert_eq!(out[12], lost != 0, "sticky v={v:012b} d={d}");
            }
        }
    }

    #[test]
    fn lzd_exhaustive_against_integer_clz() {
        let c = build_lzd();
        let cfg = SimConfig::ideal();
        let mut eval = c.evaluator();
        for v in 0..(1u32 << 12) {
            let inputs: Vec<bool> = (0..12).rev().map(|i| v >> i & 1 != 0).collect();
            let out = eval.evaluate(&inputs, &cfg).unwrap();
            let p: u32 = (0..4).map(|i| (out[i] as u32) << (3 - i)).sum();
            let zero = out[4];
            if v == 0 {
                assert!(zero);
            } else {
                assert!(!zero);
                assert_eq!(p, v.leading_zeros() - 20, "v={v:012b}");
            }
        }
    }

    #[test]
    fn leak_immune_on_corner_suite() {
        let adder = SpatialAdder::new();
        let ideal = SimConfig::ideal();
        for beta in [1.0, 0.5, 0.1, 0.01] {
            let leaky = SimConfig::lif(beta, 0.0, 0);
            for (a, b, note) in corner_suite() {
                assert_eq!(
                    adder.add(a, b, &ideal).unwrap(),
                    adder.add(a, b, &leaky).unwrap(),
                    "{note} at beta={beta}"
                );
            }
        }
    }
}

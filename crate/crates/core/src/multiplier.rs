//! Combinational FP8 (1-4-3, bias 7) multiplier built from spiking gates.
//!
//! Datapath: unpack both operands, OR-reduce the exponent field into the
//! hidden bit, multiply the 4-bit significands in an array multiplier, add
//! effective exponents, renormalize with a leading-zero detector and left
//! shifter, denormalize subnormal results with a right shifter, round to
//! nearest-even from guard/sticky lines, then clamp overflow and bypass
//! NaN. Output carries the XOR of the input signs (including for zero).

use crate::fp8::{Fp8Code, OverflowMode};
use crate::gates::{CircuitBuilder, Signal};
use crate::sim::{Circuit, SimConfig, SimError};
use crate::word::{const_word, Bit, Dp, ONE, ZERO};

/// Bus layout for one packed operand: [S, E3, E2, E1, E0, M2, M1, M0].
pub const BUS_WIDTH: usize = 8;

pub(crate) struct Operand {
    pub sign: Bit,
    /// Exponent field, little-endian.
    pub e: Vec<Bit>,
    /// Mantissa field, little-endian.
    pub m: Vec<Bit>,
}

pub(crate) fn unpack(bus: &[Signal]) -> Operand {
    assert_eq!(bus.len(), BUS_WIDTH);
    Operand {
        sign: bus[0].into(),
        e: vec![bus[4].into(), bus[3].into(), bus[2].into(), bus[1].into()],
        m: vec![bus[7].into(), bus[6].into(), bus[5].into()],
    }
}

pub(crate) fn operand_bus_names(prefix: &str) -> Vec<String> {
    ["s", "e3", "e2", "e1", "e0", "m2", "m1", "m0"]
        .iter()
        .map(|f| format!("{prefix}_{f}"))
        .collect()
}

/// All-ones field test: the operand is the NaN code.
pub(crate) fn is_nan(dp: &mut Dp, op: &Operand) -> Bit {
    let mut bits = op.e.clone();
    bits.extend_from_slice(&op.m);
    dp.and_word(&bits)
}

/// Hidden significand bit: set iff the exponent field is nonzero.
pub(crate) fn hidden(dp: &mut Dp, op: &Operand) -> Bit {
    dp.or_word(&op.e)
}

/// Effective exponent field: E for normals, 1 for zeros/subnormals.
pub(crate) fn effective_exp(dp: &mut Dp, op: &Operand, h: Bit) -> Vec<Bit> {
    let nh = dp.not(h);
    let e0 = dp.or(op.e[0], nh);
    vec![e0, op.e[1], op.e[2], op.e[3]]
}

/// Sticky correction for the subnormal denormalization shift: ORs the bits
/// that the right shift moves past the rounding position. Branches on the
/// shift amount s = (s2 s1 s0): one branch for s >= 4, one for s == 3, one
/// for 1 <= s < 3. `above` holds the four lines directly above the round
/// position before the shift.
pub(crate) fn sticky_extra(dp: &mut Dp, s: &[Bit], above: &[Bit]) -> Bit {
    let ge4 = s[2];
    let s10 = dp.and(s[1], s[0]);
    let n2 = dp.not(s[2]);
    let eq3 = dp.and(n2, s10);
    let ns10 = dp.not(s10);
    let lt3 = dp.and(n2, ns10);
    let ge1 = dp.or_word(s);
    let ge2 = dp.or(s[1], s[2]);

    let x_ge4 = dp.or_word(&above[..4]);
    let x_eq3 = dp.or_word(&above[..3]);
    let a1 = dp.and(ge2, above[1]);
    let x_lt3 = dp.or(above[0], a1);

    let b_ge4 = dp.and(ge4, x_ge4);
    let b_eq3 = dp.and(eq3, x_eq3);
    let small = dp.and(lt3, ge1);
    let b_lt3 = dp.and(small, x_lt3);
    let t = dp.or(b_ge4, b_eq3);
    dp.or(t, b_lt3)
}

/// Round-to-nearest-even and exponent adjust.
///
/// `r`/`sticky` are the guard and sticky lines, `m` the pre-round mantissa,
/// `e_pre` the candidate exponent field (valid when `normal` is set; at
/// least 5 bits, bit 4 meaning pre-round overflow). Returns the rounded
/// mantissa, the 4-bit exponent field, and the overflow flag.
pub(crate) fn round_pack(
    dp: &mut Dp,
    r: Bit,
    m: &[Bit],
    sticky: Bit,
    e_pre: &[Bit],
    normal: Bit,
) -> (Vec<Bit>, Vec<Bit>, Bit) {
    let l = m[0];
    let sl = dp.or(sticky, l);
    let trigger = dp.and(r, sl);
    let (m_rounded, c_man) = dp.increment(m, trigger);

    // Subnormal results clamp the exponent field to zero before the
    // round-carry increment (a carry then lands exactly on min-normal).
    let e_base: Vec<Bit> =
        (0..4).map(|i| dp.mux_raw(normal, e_pre[i], ZERO)).collect();
    let ovf_pre = dp.and(e_pre[4], normal);
    let (e_inc, c_exp) = dp.increment(&e_base, c_man);

    let e15 = dp.and_word(&e_inc);
    let m7 = dp.and_word(&m_rounded);
    let at_max = dp.and(e15, m7);
    let o = dp.or(ovf_pre, c_exp);
    let ovf = dp.or(o, at_max);
    (m_rounded, e_inc, ovf)
}

/// Final packing with NaN bypass and the overflow policy: saturate to the
/// max-magnitude code, or collapse to NaN. Returns the output bus
/// [S, E3, E2, E1, E0, M2, M1, M0].
pub(crate) fn assemble_output(
    dp: &mut Dp,
    sign: Bit,
    e: &[Bit],
    m: &[Bit],
    nan: Bit,
    ovf: Bit,
    mode: OverflowMode,
) -> Vec<Bit> {
    // Bus order [S, E3, E2, E1, E0, M2, M1, M0].
    let value = [sign, e[3], e[2], e[1], e[0], m[2], m[1], m[0]];
    // Canonical NaN: positive, E=15, M=7.
    let nan_code = [ZERO, ONE, ONE, ONE, ONE, ONE, ONE, ONE];
    match mode {
        OverflowMode::Saturate => {
            // Clamp stage: overflow pins the magnitude at (15, 6), sign kept.
            let sat = [sign, ONE, ONE, ONE, ONE, ONE, ONE, ZERO];
            let clamped: Vec<Bit> = (0..8)
                .map(|i| if i == 0 { sign } else { dp.mux_raw(ovf, sat[i], value[i]) })
                .collect();
            (0..8).map(|i| dp.mux_raw(nan, nan_code[i], clamped[i])).collect()
        }
        OverflowMode::Nan => {
            let force = dp.or(nan, ovf);
            (0..8).map(|i| dp.mux_raw(force, nan_code[i], value[i])).collect()
        }
    }
}

pub(crate) fn emit_bus(dp: &mut Dp, prefix: &str, bus: &[Bit]) {
    let sigs: Vec<Signal> = bus.iter().map(|&bit| dp.materialize(bit)).collect();
    for (name, sig) in operand_bus_names(prefix).into_iter().zip(sigs) {
        dp.b.output(name, sig);
    }
}

#[derive(Debug, Clone, Copy)]
pub struct MulOptions {
    /// Include the shift-dependent sticky correction for subnormal results.
    /// Disabling it is a debug aid that demonstrably misrounds some
    /// subnormal-producing products.
    pub sticky_extra: bool,
    pub overflow: OverflowMode,
}

impl Default for MulOptions {
    fn default() -> MulOptions {
        MulOptions { sticky_extra: true, overflow: OverflowMode::Saturate }
    }
}

pub fn build_multiplier() -> Circuit {
    build_multiplier_with(MulOptions::default())
}

pub fn build_multiplier_with(opts: MulOptions) -> Circuit {
    build_multiplier_staged(opts).0
}

/// Build the multiplier and report neurons added per datapath stage.
#[allow(unused_assignments)]
pub fn build_multiplier_staged(opts: MulOptions) -> (Circuit, Vec<(String, usize)>) {
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
    let sign = dp.xor(a.sign, bo.sign);

    let ha = hidden(&mut dp, &a);
    let hb = hidden(&mut dp, &bo);
    let ea = effective_exp(&mut dp, &a, ha);
    let eb = effective_exp(&mut dp, &bo, hb);
    stage!("unpack");

    // 4x4 significand array multiply: (h m2 m1 m0) x (h m2 m1 m0).
    let mut sa = a.m.clone();
    sa.push(ha);
    let mut sb = bo.m.clone();
    sb.push(hb);
    let p = dp.array_mul(&sa, &sb); // 8 bits
    stage!("significand_array");

    // Effective exponent sum, 5 bits in [2, 30].
    let (mut esum, carry) = dp.ripple_add(&ea, &eb, ZERO);
    esum.push(carry);
    stage!("exponent_sum");

    // Renormalize: left-align the product.
    let (lz, p_zero) = dp.leading_zeros(&p); // 3 bits
    stage!("leading_zero_detect");
    let q = dp.shift_left_raw(&p, &lz);
    stage!("normalize_shift");

    // T = esum + (7 - lz); biased result exponent is T - 13.
    let nlz: Vec<Bit> = lz.iter().map(|&x| dp.not(x)).collect();
    let (mut t, tc) = dp.ripple_add(&esum, &nlz, ZERO);
    t.push(tc); // 6 bits, value in [2, 37]

    // A zero product must not claim a normal exponent.
    let in_range = dp.cmp_ge_const(&t, 14);
    let nz = dp.not(p_zero);
    let normal = dp.and(in_range, nz);
    let not_normal = dp.not(normal);
    // e_pre = T - 13 mod 64 (meaningful when normal).
    let (e_pre, _) = dp.ripple_add(&t, &const_word(51, 6), ZERO);
    // s_pre = 14 - T mod 64 (meaningful when subnormal), clamped to 7.
    let nt: Vec<Bit> = t.iter().map(|&x| dp.not(x)).collect();
    let (s_pre, _) = dp.ripple_add(&nt, &const_word(15, 6), ZERO);
    let ge8 = dp.or_word(&s_pre[3..6]);
    let s: Vec<Bit> = (0..3)
        .map(|i| {
            let v = dp.or(s_pre[i], ge8);
            dp.and(v, not_normal)
        })
        .collect();
    stage!("exponent_adjust");

    // Field extraction window [R, M0, M1, M2, H], denormalized by s.
    let v5 = [q[3], q[4], q[5], q[6], q[7]];
    let v5s = dp.shift_right_raw_drop(&v5, &s);
    stage!("denormalize_shift");
    let r = v5s[0];
    let m = [v5s[1], v5s[2], v5s[3]];

    let s_base = dp.or_word(&q[..3]);
    let sticky = if opts.sticky_extra {
        let corr = sticky_extra(&mut dp, &s, &[q[3], q[4], q[5], q[6]]);
        dp.or(s_base, corr)
    } else {
        s_base
    };
    stage!("sticky");

    let (m_out, e_out, ovf) = round_pack(&mut dp, r, &m, sticky, &e_pre, normal);
    stage!("round");
    let bus = assemble_output(&mut dp, sign, &e_out, &m_out, nan, ovf, opts.overflow);
    emit_bus(&mut dp, "p", &bus);
    stage!("pack_special_values");
    drop(dp);
    let circuit = b.build().expect("multiplier circuit is a valid DAG");
    (circuit, stages)
}

/// Packed-operand multiplier with a reusable evaluation plan.
pub struct Multiplier {
    circuit: Circuit,
    options: MulOptions,
}

impl Multiplier {
    pub fn new() -> Multiplier {
        Multiplier::with_options(MulOptions::default())
    }

    pub fn with_options(options: MulOptions) -> Multiplier {
        Multiplier { circuit: build_multiplier_with(options), options }
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn options(&self) -> MulOptions {
        self.options
    }

    pub fn mul(&self, a: Fp8Code, b: Fp8Code, cfg: &SimConfig) -> Result<Fp8Code, SimError> {
        let inputs = pack_inputs(a, b);
        let (out, _) = self.circuit.evaluate_spatial(&inputs, cfg)?;
        Ok(Fp8Code::from_bits(&out))
    }
}

impl Default for Multiplier {
    fn default() -> Multiplier {
        Multiplier::new()
    }
}

/// Input line assignment for a two-operand packed bus.
pub fn pack_inputs(a: Fp8Code, b: Fp8Code) -> Vec<bool> {
    let mut v = a.to_bits().to_vec();
    v.extend(b.to_bits());
    v
}

/// One-shot spiking multiply under ideal dynamics, against a process-wide
/// cached circuit.
pub fn snn_mul(a: Fp8Code, b: Fp8Code) -> Fp8Code {
    use std::sync::OnceLock;
    static SHARED: OnceLock<Multiplier> = OnceLock::new();
    let m = SHARED.get_or_init(Multiplier::new);
    m.mul(a, b, &SimConfig::ideal()).expect("valid bus widths")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp8::{oracle_mul, oracle_mul_mode};
    use crate::sim::SimConfig;

    fn f(x: f64) -> Fp8Code {
        for c in Fp8Code::finite_codes() {
            if c.to_f64() == x {
                return c;
            }
        }
        panic!("{x} is not exactly representable");
    }

    #[test]
    fn resource_figures_are_frozen() {
        let (c, stages) = build_multiplier_staged(MulOptions::default());
        let stats = c.stats();
        assert!((600..=750).contains(&stats.neuron_count), "{}", stats.neuron_count);
        // Golden regression values for this construction.
        assert_eq!(stats.neuron_count, 604);
        assert_eq!(stats.logical_depth, 105);
        let total: usize = stages.iter().map(|(_, n)| n).sum();
        assert_eq!(total, stats.neuron_count);
    }

    #[test]
    fn known_products() {
        let m = Multiplier::new();
        let cfg = SimConfig::ideal();
        let cases = [
            (f(1.0), f(1.0), f(1.0)),
            (f(2.0), f(3.0), f(6.0)),
            (f(-2.0), f(3.0), f(-6.0)),
            (f(0.5), f(0.015625), f(0.0078125)), // crosses into subnormals
            (f(448.0), f(2.0), f(448.0)),        // saturates
            (f(448.0), f(-2.0), f(-448.0)),
            (Fp8Code::MIN_SUBNORMAL, Fp8Code::MIN_SUBNORMAL, Fp8Code::POS_ZERO),
        ];
        for (a, b, want) in cases {
            assert_eq!(m.mul(a, b, &cfg).unwrap(), want, "{} * {}", a.to_f64(), b.to_f64());
        }
    }

    #[test]
    fn zero_sign_is_xor_of_input_signs() {
        let m = Multiplier::new();
        let cfg = SimConfig::ideal();
        assert_eq!(m.mul(Fp8Code::POS_ZERO, f(448.0), &cfg).unwrap(), Fp8Code::POS_ZERO);
        assert_eq!(m.mul(Fp8Code::NEG_ZERO, f(448.0), &cfg).unwrap(), Fp8Code::NEG_ZERO);
        assert_eq!(m.mul(Fp8Code::NEG_ZERO, f(-1.0), &cfg).unwrap(), Fp8Code::POS_ZERO);
    }

    #[test]
    fn nan_propagates_canonically() {
        let m = Multiplier::new();
        let cfg = SimConfig::ideal();
        for other in [Fp8Code::POS_ZERO, f(1.0), f(-448.0), Fp8Code::NAN] {
            assert_eq!(m.mul(Fp8Code::NAN, other, &cfg).unwrap(), Fp8Code::NAN);
            assert_eq!(m.mul(other, Fp8Code::NAN, &cfg).unwrap(), Fp8Code::NAN);
        }
    }

    #[test]
    fn exhaustive_match_against_oracle() {
        let m = Multiplier::new();
        let cfg = SimConfig::ideal();
        let mut eval = m.circuit().evaluator();
        let mut table = vec![[0u8; 256]; 256];
        let mut checked = 0u32;
        for a in Fp8Code::finite_codes() {
            for b in Fp8Code::finite_codes() {
                let out = eval.evaluate(&pack_inputs(a, b), &cfg).unwrap();
                let got = Fp8Code::from_bits(&out);
                let want = oracle_mul(a, b);
                assert_eq!(got, want, "{:#04x} * {:#04x}", a.0, b.0);
                table[a.0 as usize][b.0 as usize] = got.0;
                checked += 1;
            }
        }
        assert_eq!(checked, 254 * 254);
        for a in Fp8Code::finite_codes() {
            for b in Fp8Code::finite_codes() {
                assert_eq!(table[a.0 as usize][b.0 as usize], table[b.0 as usize][a.0 as usize]);
            }
        }
    }

    #[test]
    fn nan_overflow_mode_matches_oracle_on_saturating_cases() {
        let opts = MulOptions { sticky_extra: true, overflow: OverflowMode::Nan };
        let m = Multiplier::with_options(opts);
        let cfg = SimConfig::ideal();
        for (a, b) in [(f(448.0), f(2.0)), (f(-448.0), f(448.0)), (f(16.0), f(32.0))] {
            assert_eq!(
                m.mul(a, b, &cfg).unwrap(),
                oracle_mul_mode(a, b, OverflowMode::Nan),
                "{} * {}",
                a.to_f64(),
                b.to_f64()
            );
            assert!(m.mul(a, b, &cfg).unwrap().is_nan());
        }
    }

    #[test]
    fn dropping_sticky_correction_breaks_subnormal_by_normal_products() {
        let opts = MulOptions { sticky_extra: false, overflow: OverflowMode::Saturate };
        let m = Multiplier::with_options(opts);
        let cfg = SimConfig::ideal();
        let mut eval = m.circuit().evaluator();
        let mut mismatches = 0usize;
        for a in Fp8Code::finite_codes() {
            for b in Fp8Code::finite_codes() {
                let out = eval.evaluate(&pack_inputs(a, b), &cfg).unwrap();
                if Fp8Code::from_bits(&out) != oracle_mul(a, b) {
                    mismatches += 1;
                }
            }
        }
        assert!(mismatches > 0, "sticky correction must be load-bearing");
    }

    #[test]
    fn leak_immune_on_sample_pairs() {
        let m = Multiplier::new();
        let ideal = SimConfig::ideal();
        for beta in [1.0, 0.5, 0.1, 0.01] {
            let leaky = SimConfig::lif(beta, 0.0, 0);
            for (a, b) in [
                (f(1.5), f(-3.0)),
                (Fp8Code::MIN_SUBNORMAL, f(64.0)),
                (f(448.0), f(448.0)),
                (f(0.125), f(0.125)),
            ] {
                assert_eq!(m.mul(a, b, &ideal).unwrap(), m.mul(a, b, &leaky).unwrap());
            }
        }
    }
}

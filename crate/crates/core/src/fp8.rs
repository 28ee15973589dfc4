//! FP8 E4M3 ("fn" variant: no infinities) bit-level representation and an
//! exact-arithmetic golden model for multiplication and addition.
//!
//! All spiking datapaths in this crate are verified against this module.
//! The golden model computes in exact dyadic-rational arithmetic and rounds
//! once, round-to-nearest-even, into the 8-bit code space.

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const BIAS: i32 = 7;
/// Largest finite magnitude: 2^8 * 1.75.
pub const MAX_FINITE: f64 = 448.0;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Fp8Error {
    #[error("cannot decode a nan code")]
    NanDecode,
}

/// One E4M3 byte: sign | E3..E0 | M2..M0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fp8Code(pub u8);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fp8Class {
    Zero,
    Subnormal,
    Normal,
    Nan,
}

/// Overflow handling for [`encode_rne`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverflowMode {
    /// Clamp magnitudes above 448 to +-448.
    Saturate,
    /// Emit the canonical nan code instead.
    Nan,
}

impl Fp8Code {
    pub const NAN: Fp8Code = Fp8Code(0x7f);
    pub const POS_ZERO: Fp8Code = Fp8Code(0x00);
    pub const NEG_ZERO: Fp8Code = Fp8Code(0x80);
    pub const ONE: Fp8Code = Fp8Code(0x38);
    /// +448, the saturation value.
    pub const MAX: Fp8Code = Fp8Code(0x7e);
    pub const MIN_SUBNORMAL: Fp8Code = Fp8Code(0x01);
    pub const MAX_SUBNORMAL: Fp8Code = Fp8Code(0x07);
    pub const MIN_NORMAL: Fp8Code = Fp8Code(0x08);

    pub fn from_fields(sign: bool, exp: u8, man: u8) -> Fp8Code {
        debug_assert!(exp < 16 && man < 8);
        Fp8Code(((sign as u8) << 7) | (exp << 3) | man)
    }

    pub fn sign(self) -> bool {
        self.0 & 0x80 != 0
    }

    /// The 4-bit exponent field E.
    pub fn exp_field(self) -> u8 {
        (self.0 >> 3) & 0x0f
    }

    /// The 3-bit mantissa field M.
    pub fn man_field(self) -> u8 {
        self.0 & 0x07
    }

    pub fn classify(self) -> Fp8Class {
        match (self.exp_field(), self.man_field()) {
            (15, 7) => Fp8Class::Nan,
            (0, 0) => Fp8Class::Zero,
            (0, _) => Fp8Class::Subnormal,
            _ => Fp8Class::Normal,
        }
    }

    pub fn is_nan(self) -> bool {
        self.classify() == Fp8Class::Nan
    }

    pub fn is_finite(self) -> bool {
        !self.is_nan()
    }

    /// Exponent used for alignment: 1 when the exponent field is zero.
    pub fn effective_exponent(self) -> i32 {
        if self.exp_field() == 0 {
            1
        } else {
            self.exp_field() as i32
        }
    }

    /// Bit lines in bus order [S, E3, E2, E1, E0, M2, M1, M0].
    pub fn to_bits(self) -> [bool; 8] {
        let mut bits = [false; 8];
        for (i, b) in bits.iter_mut().enumerate() {
            *b = self.0 & (0x80 >> i) != 0;
        }
        bits
    }

    pub fn from_bits(bits: &[bool]) -> Fp8Code {
        assert_eq!(bits.len(), 8, "an FP8 bus carries exactly 8 lines");
        let mut byte = 0u8;
        for (i, &b) in bits.iter().enumerate() {
            if b {
                byte |= 0x80 >> i;
            }
        }
        Fp8Code(byte)
    }

    /// Iterator over all 254 finite codes.
    pub fn finite_codes() -> impl Iterator<Item = Fp8Code> {
        (0u16..=255).map(|b| Fp8Code(b as u8)).filter(|c| c.is_finite())
    }

    /// Signed code-point index used for ULP distances: +-(E<<3|M),
    /// monotone in the decoded value over finite codes.
    pub fn order_index(self) -> i32 {
        let mag = (self.0 & 0x7f) as i32;
        if self.sign() {
            -mag
        } else {
            mag
        }
    }

    pub fn to_f64(self) -> f64 {
        match self.classify() {
            Fp8Class::Nan => f64::NAN,
            _ => decode(self).expect("finite").to_f64(),
        }
    }
}

/// An exact dyadic rational: (-1)^sign * sig * 2^exp.
///
/// Canonical form keeps `sig` odd (or zero with exp 0). The sign is
/// meaningful for zero so that -0 survives decode/encode round trips.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactReal {
    pub sign: bool,
    pub sig: u64,
    pub exp: i32,
}

impl ExactReal {
    pub fn zero(sign: bool) -> ExactReal {
        ExactReal { sign, sig: 0, exp: 0 }
    }

    pub fn new(sign: bool, sig: u64, exp: i32) -> ExactReal {
        let mut v = ExactReal { sign, sig, exp };
        v.canonicalize();
        v
    }

    fn canonicalize(&mut self) {
        if self.sig == 0 {
            self.exp = 0;
            return;
        }
        let tz = self.sig.trailing_zeros();
        self.sig >>= tz;
        self.exp += tz as i32;
    }

    pub fn is_zero(&self) -> bool {
        self.sig == 0
    }

    pub fn to_f64(&self) -> f64 {
        let mag = self.sig as f64 * (self.exp as f64).exp2();
        if self.sign {
            -mag
        } else {
            mag
        }
    }
}

/// L/R/sticky bits driving the RNE decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RoundFlags {
    pub l: bool,
    pub r: bool,
    pub sticky: bool,
}

/// Round_Trigger = R and (S or L).
pub fn rne_round_up(flags: RoundFlags) -> bool {
    flags.r && (flags.sticky || flags.l)
}

/// Decode a finite code into its exact value.
pub fn decode(code: Fp8Code) -> Result<ExactReal, Fp8Error> {
    match code.classify() {
        Fp8Class::Nan => Err(Fp8Error::NanDecode),
        Fp8Class::Zero => Ok(ExactReal::zero(code.sign())),
        Fp8Class::Subnormal => {
            // (-1)^S * 2^(1-bias) * (M/8)
            Ok(ExactReal::new(code.sign(), code.man_field() as u64, 1 - BIAS - 3))
        }
        Fp8Class::Normal => {
            // (-1)^S * 2^(E-bias) * (1 + M/8)
            let sig = 8 + code.man_field() as u64;
            Ok(ExactReal::new(code.sign(), sig, code.exp_field() as i32 - BIAS - 3))
        }
    }
}

/// Round an exact value to the nearest E4M3 code, ties to even.
///
/// Underflow rounds through the subnormals to a signed zero; overflow is
/// handled per `mode`.
pub fn encode_rne(x: &ExactReal, mode: OverflowMode) -> Fp8Code {
    if x.is_zero() {
        return Fp8Code::from_fields(x.sign, 0, 0);
    }
    let bitlen = 64 - x.sig.leading_zeros() as i32;
    let e_unb = bitlen - 1 + x.exp; // floor(log2 |x|)
    // Quantum exponent of the target grid: normals keep 3 fraction bits,
    // subnormals bottom out at 2^-9.
    let qe = (e_unb - 3).max(1 - BIAS - 3); // max(e_unb - 3, -9)
    let (mut n, flags) = shift_rne(x.sig, x.exp - qe);
    let mut qe = qe;
    if rne_round_up(flags) {
        n += 1;
    }
    if n >= 16 {
        // Rounded across the binade boundary; n == 16 exactly.
        n >>= 1;
        qe += 1;
    }
    if n == 0 {
        return Fp8Code::from_fields(x.sign, 0, 0);
    }
    // Magnitude is n * 2^qe with n in [1, 15].
    let overflow = qe > 5 || (qe == 5 && n > 14);
    if overflow {
        return match mode {
            OverflowMode::Saturate => Fp8Code::from_fields(x.sign, 15, 6),
            OverflowMode::Nan => Fp8Code::NAN,
        };
    }
    if qe == -9 && n < 8 {
        Fp8Code::from_fields(x.sign, 0, n as u8)
    } else {
        // Normal: n in [8, 15], field E = e_unb + bias = qe + 3 + 7.
        debug_assert!((8..16).contains(&n));
        Fp8Code::from_fields(x.sign, (qe + 10) as u8, (n - 8) as u8)
    }
}

/// sig * 2^k truncated toward zero, with the discarded-bit flags.
fn shift_rne(sig: u64, k: i32) -> (u64, RoundFlags) {
    if k >= 0 {
        let kept = sig << k;
        return (kept, RoundFlags { l: kept & 1 != 0, r: false, sticky: false });
    }
    let sh = (-k) as u32;
    if sh > 64 {
        return (0, RoundFlags { l: false, r: false, sticky: sig != 0 });
    }
    let kept = if sh == 64 { 0 } else { sig >> sh };
    let r = sig >> (sh - 1) & 1 != 0;
    let below = if sh >= 2 { sig & ((1u64 << (sh - 1)) - 1) } else { 0 };
    (kept, RoundFlags { l: kept & 1 != 0, r, sticky: below != 0 })
}

/// Golden-model FP8 product, exact arithmetic then one RNE step.
///
/// The sign of a zero result is S_a xor S_b.
pub fn oracle_mul(a: Fp8Code, b: Fp8Code) -> Fp8Code {
    oracle_mul_mode(a, b, OverflowMode::Saturate)
}

pub fn oracle_mul_mode(a: Fp8Code, b: Fp8Code, mode: OverflowMode) -> Fp8Code {
    if a.is_nan() || b.is_nan() {
        return Fp8Code::NAN;
    }
    let da = decode(a).unwrap();
    let db = decode(b).unwrap();
    let prod = ExactReal::new(da.sign ^ db.sign, da.sig * db.sig, da.exp + db.exp);
    encode_rne(&prod, mode)
}

/// Golden-model FP8 sum. Exact cancellation yields +0; -0 + -0 stays -0.
pub fn oracle_add(a: Fp8Code, b: Fp8Code) -> Fp8Code {
    oracle_add_mode(a, b, OverflowMode::Saturate)
}

pub fn oracle_add_mode(a: Fp8Code, b: Fp8Code, mode: OverflowMode) -> Fp8Code {
    if a.is_nan() || b.is_nan() {
        return Fp8Code::NAN;
    }
    let da = decode(a).unwrap();
    let db = decode(b).unwrap();
    let common = da.exp.min(db.exp);
    let ia = signed_sig(&da, common);
    let ib = signed_sig(&db, common);
    let sum = ia + ib;
    if sum == 0 {
        // +0 unless both operands are negative (covers -0 + -0 = -0).
        let sign = da.sign && db.sign;
        return Fp8Code::from_fields(sign, 0, 0);
    }
    let exact = ExactReal::new(sum < 0, sum.unsigned_abs(), common);
    encode_rne(&exact, mode)
}

fn signed_sig(v: &ExactReal, common: i32) -> i64 {
    let mag = (v.sig << (v.exp - common)) as i64;
    if v.sign {
        -mag
    } else {
        mag
    }
}

/// CSV dump of all 256 codes: byte, fields, class, decoded value.
pub fn code_table_csv() -> String {
    let mut out = String::from("byte,sign,exp_field,man_field,class,value\n");
    for b in 0u16..=255 {
        let c = Fp8Code(b as u8);
        let class = match c.classify() {
            Fp8Class::Zero => "zero",
            Fp8Class::Subnormal => "subnormal",
            Fp8Class::Normal => "normal",
            Fp8Class::Nan => "nan",
        };
        let val = if c.is_nan() {
            "nan".to_string()
        } else {
            format!("{}", c.to_f64())
        };
        out.push_str(&format!(
            "0x{:02x},{},{},{},{},{}\n",
            c.0,
            c.sign() as u8,
            c.exp_field(),
            c.man_field(),
            class,
            val
        ));
    }
    out
}

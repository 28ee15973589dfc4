//! Word-level datapath construction on top of the gate library.
//!
//! A [`Bit`] is either a live signal or a compile-time constant; the logic
//! helpers fold constants so that known-zero lines (guard bits, vacated
//! shifter positions) cost no neurons. Words are little-endian bit vectors.

use crate::gates::{CircuitBuilder, Signal};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bit {
    Const(bool),
    Sig(Signal),
}

pub const ZERO: Bit = Bit::Const(false);
pub const ONE: Bit = Bit::Const(true);

impl From<Signal> for Bit {
    fn from(s: Signal) -> Bit {
        Bit::Sig(s)
    }
}

pub fn word_from_signals(sigs: &[Signal]) -> Vec<Bit> {
    sigs.iter().map(|&s| Bit::Sig(s)).collect()
}

pub fn const_word(value: u64, width: usize) -> Vec<Bit> {
    (0..width).map(|i| Bit::Const(value >> i & 1 != 0)).collect()
}

/// Logic over [`Bit`]s with constant folding.
pub struct Dp<'a> {
    pub b: &'a mut CircuitBuilder,
    zero_line: Option<Signal>,
}

impl<'a> Dp<'a> {
    pub fn new(b: &'a mut CircuitBuilder) -> Dp<'a> {
        Dp { b, zero_line: None }
    }

    pub fn and(&mut self, a: Bit, b: Bit) -> Bit {
        match (a, b) {
            (Bit::Const(false), _) | (_, Bit::Const(false)) => ZERO,
            (Bit::Const(true), x) | (x, Bit::Const(true)) => x,
            (Bit::Sig(x), Bit::Sig(y)) => Bit::Sig(self.b.and(x, y)),
        }
    }

    pub fn or(&mut self, a: Bit, b: Bit) -> Bit {
        match (a, b) {
            (Bit::Const(true), _) | (_, Bit::Const(true)) => ONE,
            (Bit::Const(false), x) | (x, Bit::Const(false)) => x,
            (Bit::Sig(x), Bit::Sig(y)) => Bit::Sig(self.b.or(x, y)),
        }
    }

    pub fn not(&mut self, a: Bit) -> Bit {
        match a {
            Bit::Const(v) => Bit::Const(!v),
            Bit::Sig(x) => Bit::Sig(self.b.not(x)),
        }
    }

    pub fn xor(&mut self, a: Bit, b: Bit) -> Bit {
        match (a, b) {
            (Bit::Const(false), x) | (x, Bit::Const(false)) => x,
            (Bit::Const(true), x) | (x, Bit::Const(true)) => self.not(x),
            (Bit::Sig(x), Bit::Sig(y)) => Bit::Sig(self.b.xor(x, y)),
        }
    }

    /// sel ? a : b.
    pub fn mux(&mut self, sel: Bit, a: Bit, b: Bit) -> Bit {
        match sel {
            Bit::Const(true) => a,
            Bit::Const(false) => b,
            Bit::Sig(s) => match (a, b) {
                _ if a == b => a,
                (Bit::Const(true), x) => self.or(Bit::Sig(s), x),
                (Bit::Const(false), x) => {
                    let ns = self.b.not(s);
                    self.and(Bit::Sig(ns), x)
                }
                (x, Bit::Const(true)) => {
                    let ns = self.b.not(s);
                    self.or(Bit::Sig(ns), x)
                }
                (x, Bit::Const(false)) => self.and(Bit::Sig(s), x),
                (Bit::Sig(x), Bit::Sig(y)) => Bit::Sig(self.b.mux(s, x, y)),
            },
        }
    }

    /// Full 4-neuron MUX regardless of constant operands, matching the
    /// physical layered-shifter structure. Constants become real lines.
    pub fn mux_raw(&mut self, sel: Bit, a: Bit, b: Bit) -> Bit {
        match sel {
            Bit::Const(true) => a,
            Bit::Const(false) => b,
            Bit::Sig(s) => {
                let x = self.materialize(a);
                let y = self.materialize(b);
                Bit::Sig(self.b.mux(s, x, y))
            }
        }
    }

    /// Turn a constant into a physical line: bias for 1, a shared
    /// never-firing neuron for 0.
    pub fn materialize(&mut self, bit: Bit) -> Signal {
        match bit {
            Bit::Sig(s) => s,
            Bit::Const(true) => self.b.bias(),
            Bit::Const(false) => {
                if self.zero_line.is_none() {
                    self.zero_line = Some(self.b.unit(0.5, &[]));
                }
                self.zero_line.unwrap()
            }
        }
    }

    pub fn half_add(&mut self, a: Bit, b: Bit) -> (Bit, Bit) {
        match (a, b) {
            (Bit::Const(false), x) | (x, Bit::Const(false)) => (x, ZERO),
            (Bit::Const(true), x) | (x, Bit::Const(true)) => (self.not(x), x),
            (Bit::Sig(x), Bit::Sig(y)) => {
                let (s, c) = self.b.half_adder(x, y);
                (Bit::Sig(s), Bit::Sig(c))
            }
        }
    }

    pub fn full_add(&mut self, a: Bit, b: Bit, c: Bit) -> (Bit, Bit) {
        // Fold any constant operand down to a half adder.
        let mut sigs = Vec::new();
        let mut ones = 0;
        for bit in [a, b, c] {
            match bit {
                Bit::Const(true) => ones += 1,
                Bit::Const(false) => {}
                Bit::Sig(s) => sigs.push(s),
            }
        }
        match (sigs.len(), ones) {
            (0, n) => (Bit::Const(n & 1 == 1), Bit::Const(n >= 2)),
            (1, 0) => (Bit::Sig(sigs[0]), ZERO),
            (1, 1) => {
                let s = Bit::Sig(sigs[0]);
                (self.not(s), s)
            }
            (1, 2) => (Bit::Sig(sigs[0]), ONE),
            (2, 0) => {
                let (s, c) = self.b.half_adder(sigs[0], sigs[1]);
                (Bit::Sig(s), Bit::Sig(c))
            }
            (2, 1) => {
                // a + b + 1: sum = XNOR, carry = OR.
                let x = self.b.xor(sigs[0], sigs[1]);
                let s = self.b.not(x);
                let c = self.b.or(sigs[0], sigs[1]);
                (Bit::Sig(s), Bit::Sig(c))
            }
            (3, 0) => {
                let (s, c) = self.b.full_adder(sigs[0], sigs[1], sigs[2]);
                (Bit::Sig(s), Bit::Sig(c))
            }
            _ => unreachable!(),
        }
    }

    /// Little-endian ripple-carry addition; returns (sum, carry_out).
    /// Operands may differ in width; the shorter is zero-extended.
    pub fn ripple_add(&mut self, a: &[Bit], b: &[Bit], cin: Bit) -> (Vec<Bit>, Bit) {
        let width = a.len().max(b.len());
        let get = |w: &[Bit], i: usize| w.get(i).copied().unwrap_or(ZERO);
        let mut carry = cin;
        let mut sum = Vec::with_capacity(width);
        for i in 0..width {
            let (s, c) = self.full_add(get(a, i), get(b, i), carry);
            sum.push(s);
            carry = c;
        }
        (sum, carry)
    }

    /// a - b as a + ~b + 1 over `width` bits; returns (diff, no_borrow).
    /// no_borrow = 1 means a >= b (unsigned).
    pub fn ripple_sub(&mut self, a: &[Bit], b: &[Bit], width: usize) -> (Vec<Bit>, Bit) {
        let ext = |w: &[Bit], i: usize| w.get(i).copied().unwrap_or(ZERO);
        let nb: Vec<Bit> = (0..width).map(|i| ext(b, i)).collect();
        let nb: Vec<Bit> = nb.into_iter().map(|x| self.not_owned(x)).collect();
        let a_ext: Vec<Bit> = (0..width).map(|i| ext(a, i)).collect();
        self.ripple_add(&a_ext, &nb, ONE)
    }

    fn not_owned(&mut self, a: Bit) -> Bit {
        self.not(a)
    }

    /// Unsigned a >= b via the borrow chain only (no sum bits).
    pub fn cmp_ge(&mut self, a: &[Bit], b: &[Bit]) -> Bit {
        let width = a.len().max(b.len());
        let get = |w: &[Bit], i: usize| w.get(i).copied().unwrap_or(ZERO);
        let mut carry = ONE;
        for i in 0..width {
            let ai = get(a, i);
            let nbi = get(b, i);
            let nbi = self.not(nbi);
            // carry' = ai&nbi | carry&(ai|nbi)
            let g = self.and(ai, nbi);
            let p = self.or(ai, nbi);
            let pc = self.and(p, carry);
            carry = self.or(g, pc);
        }
        carry
    }

    pub fn cmp_ge_const(&mut self, a: &[Bit], value: u64) -> Bit {
        let c = const_word(value, a.len());
        self.cmp_ge(a, &c)
    }

    /// word + inc over the word's width; returns (sum, carry_out).
    pub fn increment(&mut self, a: &[Bit], inc: Bit) -> (Vec<Bit>, Bit) {
        let mut carry = inc;
        let mut out = Vec::with_capacity(a.len());
        for &bit in a {
            let s = self.xor(bit, carry);
            let c = self.and(bit, carry);
            out.push(s);
            carry = c;
        }
        (out, carry)
    }

    pub fn or_word(&mut self, bits: &[Bit]) -> Bit {
        let mut acc = ZERO;
        let mut level: Vec<Bit> = bits.iter().copied().filter(|b| *b != ZERO).collect();
        if level.iter().any(|b| *b == ONE) {
            return ONE;
        }
        while level.len() > 1 {
            let mut next = Vec::with_capacity(level.len().div_ceil(2));
            for pair in level.chunks(2) {
                next.push(if pair.len() == 2 {
                    self.or(pair[0], pair[1])
                } else {
                    pair[0]
                });
            }
            level = next;
        }
        if let Some(&b) = level.first() {
            acc = b;
        }
        acc
    }

    pub fn and_word(&mut self, bits: &[Bit]) -> Bit {
        let mut level: Vec<Bit> = Vec::new();
        for &b in bits {
            match b {
                Bit::Const(false) => return ZERO,
                Bit::Const(true) => {}
                _ => level.push(b),
            }
        }
        if level.is_empty() {
            return ONE;
        }
        while level.len() > 1 {
            let mut next = Vec::with_capacity(level.len().div_ceil(2));
            for pair in level.chunks(2) {
                next.push(if pair.len() == 2 {
                    self.and(pair[0], pair[1])
                } else {
                    pair[0]
                });
            }
            level = next;
        }
        level[0]
    }

    pub fn mux_word(&mut self, sel: Bit, a: &[Bit], b: &[Bit]) -> Vec<Bit> {
        let width = a.len().max(b.len());
        let get = |w: &[Bit], i: usize| w.get(i).copied().unwrap_or(ZERO);
        (0..width).map(|i| self.mux(sel, get(a, i), get(b, i))).collect()
    }

    /// Layered right shifter (toward bit 0), optimized: constant lines fold
    /// away. `amount` is little-endian; layers apply largest stride first.
    /// Returns (shifted, sticky-OR of every bit shifted past position 0).
    pub fn shift_right(&mut self, word: &[Bit], amount: &[Bit]) -> (Vec<Bit>, Bit) {
        self.shift_right_impl(word, amount, false, true)
    }

    /// As [`Dp::shift_right`] but with one physical 4-neuron MUX per line
    /// per layer, the layered-cascade structure of the hardware shifter.
    pub fn shift_right_raw(&mut self, word: &[Bit], amount: &[Bit]) -> (Vec<Bit>, Bit) {
        self.shift_right_impl(word, amount, true, true)
    }

    /// Right shift without the sticky side-line (bits past position 0 are
    /// simply dropped).
    pub fn shift_right_drop(&mut self, word: &[Bit], amount: &[Bit]) -> Vec<Bit> {
        self.shift_right_impl(word, amount, false, false).0
    }

    /// Physical MUX-cascade right shift, no sticky side-line.
    pub fn shift_right_raw_drop(&mut self, word: &[Bit], amount: &[Bit]) -> Vec<Bit> {
        self.shift_right_impl(word, amount, true, false).0
    }

    fn shift_right_impl(
        &mut self,
        word: &[Bit],
        amount: &[Bit],
        raw: bool,
        collect: bool,
    ) -> (Vec<Bit>, Bit) {
        let n = word.len();
        let mut cur: Vec<Bit> = word.to_vec();
        let mut lost: Vec<Bit> = Vec::new();
        for k in (0..amount.len()).rev() {
            let stride = 1usize << k;
            let sel = amount[k];
            if collect {
                // Bits that exit the window if this layer is active.
                let exiting: Vec<Bit> = cur.iter().take(stride.min(n)).copied().collect();
                let any_exit = self.or_word(&exiting);
                let l = self.and(sel, any_exit);
                if l != ZERO {
                    lost.push(l);
                }
            }
            let mut next = Vec::with_capacity(n);
            for i in 0..n {
                let shifted_in = cur.get(i + stride).copied().unwrap_or(ZERO);
                let out = if raw {
                    self.mux_raw(sel, shifted_in, cur[i])
                } else {
                    self.mux(sel, shifted_in, cur[i])
                };
                next.push(out);
            }
            cur = next;
        }
        let sticky = self.or_word(&lost);
        (cur, sticky)
    }

    /// Layered left shifter (toward the MSB); vacated low lines are zero.
    /// Bits shifted beyond the top line are dropped (callers size windows
    /// so that a data-driven shift never loses information).
    pub fn shift_left(&mut self, word: &[Bit], amount: &[Bit]) -> Vec<Bit> {
        self.shift_left_impl(word, amount, false)
    }

    /// As [`Dp::shift_left`] but with one physical 4-neuron MUX per line
    /// per layer.
    pub fn shift_left_raw(&mut self, word: &[Bit], amount: &[Bit]) -> Vec<Bit> {
        self.shift_left_impl(word, amount, true)
    }

    fn shift_left_impl(&mut self, word: &[Bit], amount: &[Bit], raw: bool) -> Vec<Bit> {
        let n = word.len();
        let mut cur: Vec<Bit> = word.to_vec();
        for k in (0..amount.len()).rev() {
            let stride = 1usize << k;
            let sel = amount[k];
            let mut next = Vec::with_capacity(n);
            for i in 0..n {
                let shifted_in =
                    if i >= stride { cur[i - stride] } else { ZERO };
                let out = if raw {
                    self.mux_raw(sel, shifted_in, cur[i])
                } else {
                    self.mux(sel, shifted_in, cur[i])
                };
                next.push(out);
            }
            cur = next;
        }
        cur
    }

    /// Hierarchical leading-zero detector over a little-endian word.
    /// Returns (count of leading zeros from the MSB side, all_zero flag),
    /// scanning in O(log n) depth. For an all-zero input the count reads
    /// next_pow2(n)-1 and the flag is set.
    pub fn leading_zeros(&mut self, word: &[Bit]) -> (Vec<Bit>, Bit) {
        let mut msb_first: Vec<Bit> = word.iter().rev().copied().collect();
        let target = word.len().next_power_of_two();
        msb_first.resize(target, ZERO);
        let (count, zero) = self.lzd_rec(&msb_first);
        (count, zero)
    }

    fn lzd_rec(&mut self, msb_first: &[Bit]) -> (Vec<Bit>, Bit) {
        if msb_first.len() == 1 {
            let zero = self.not(msb_first[0]);
            return (Vec::new(), zero);
        }
        let half = msb_first.len() / 2;
        let (cu, zu) = self.lzd_rec(&msb_first[..half]);
        let (cl, zl) = self.lzd_rec(&msb_first[half..]);
        let zero = self.and(zu, zl);
        let mut count = self.mux_word(zu, &cl, &cu);
        count.push(zu);
        (count, zero)
    }

    /// Sum a multiplication partial-product matrix given per-column bit
    /// lists (column i has weight 2^i). Greedy full/half-adder compression.
    pub fn column_compress(&mut self, mut cols: Vec<Vec<Bit>>) -> Vec<Bit> {
        let mut i = 0;
        while i < cols.len() {
            while cols[i].len() > 1 {
                if cols[i].len() >= 3 {
                    let a = cols[i].pop().unwrap();
                    let b = cols[i].pop().unwrap();
                    let c = cols[i].pop().unwrap();
                    let (s, carry) = self.full_add(a, b, c);
                    cols[i].push(s);
                    if i + 1 == cols.len() {
                        cols.push(Vec::new());
                    }
                    cols[i + 1].push(carry);
                } else {
                    let a = cols[i].pop().unwrap();
                    let b = cols[i].pop().unwrap();
                    let (s, carry) = self.half_add(a, b);
                    cols[i].push(s);
                    if i + 1 == cols.len() {
                        cols.push(Vec::new());
                    }
                    cols[i + 1].push(carry);
                }
            }
            i += 1;
        }
        cols.into_iter().map(|mut c| c.pop().unwrap_or(ZERO)).collect()
    }

    /// Unsigned array multiply of little-endian words.
    pub fn array_mul(&mut self, a: &[Bit], b: &[Bit]) -> Vec<Bit> {
        let mut cols: Vec<Vec<Bit>> = vec![Vec::new(); a.len() + b.len()];
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                let pp = self.and(ai, bj);
                if pp != ZERO {
                    cols[i + j].push(pp);
                }
            }
        }
        let mut out = self.column_compress(cols);
        out.truncate(a.len() + b.len());
        out
    }
}

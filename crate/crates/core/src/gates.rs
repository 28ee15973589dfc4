//! The spiking gate library: AND, OR, NOT, XOR, MUX2 and derived adder
//! cells, plus the [`CircuitBuilder`] used to compose them into circuits.
//!
//! Thresholds follow the standard constants: AND fires at 1.5 over two
//! unit-weight inputs, OR at 0.5, NOT at 0.5 over (bias +1, input -1).
//! Constant inputs are modeled as always-on bias sources, never as a
//! special neuron class. Gate fan-in is fixed at two; wider reductions are
//! built as balanced trees.

use crate::sim::{Circuit, NeuronId, NeuronSpec, ResetKind, SimError, Source, Synapse};

pub type Signal = Source;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    And,
    Or,
    Not,
    Xor,
    Mux2,
    HalfAdder,
    FullAdder,
}

impl GateKind {
    pub fn port_names(self) -> (&'static [&'static str], &'static [&'static str]) {
        match self {
            GateKind::And | GateKind::Or | GateKind::Xor => (&["a", "b"], &["y"]),
            GateKind::Not => (&["a"], &["y"]),
            GateKind::Mux2 => (&["s", "a", "b"], &["y"]),
            GateKind::HalfAdder => (&["a", "b"], &["sum", "carry"]),
            GateKind::FullAdder => (&["a", "b", "cin"], &["sum", "carry"]),
        }
    }
}

/// Boundary view of one instantiated gate template.
#[derive(Debug, Clone)]
pub struct SubcircuitHandle {
    pub kind: GateKind,
    pub inputs: Vec<(String, Signal)>,
    pub outputs: Vec<(String, Signal)>,
    pub neuron_ids: Vec<NeuronId>,
}

impl SubcircuitHandle {
    pub fn output(&self, name: &str) -> Signal {
        self.outputs
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| *s)
            .unwrap_or_else(|| panic!("no output port '{name}'"))
    }
}

/// Single-use builder for neuron DAGs. Produces an immutable [`Circuit`].
#[derive(Debug, Default)]
pub struct CircuitBuilder {
    input_names: Vec<String>,
    neurons: Vec<NeuronSpec>,
    synapses: Vec<Synapse>,
    outputs: Vec<(String, NeuronId)>,
}

impl CircuitBuilder {
    pub fn new() -> CircuitBuilder {
        CircuitBuilder::default()
    }

    pub fn input(&mut self, name: impl Into<String>) -> Signal {
        self.input_names.push(name.into());
        Source::Input(self.input_names.len() - 1)
    }

    pub fn inputs(&mut self, prefix: &str, n: usize) -> Vec<Signal> {
        (0..n).map(|i| self.input(format!("{prefix}{i}"))).collect()
    }

    /// The always-on constant-1 line.
    pub fn bias(&self) -> Signal {
        Source::Bias
    }

    pub fn neuron_count(&self) -> usize {
        self.neurons.len()
    }

    /// One threshold neuron fed by the given weighted sources.
    pub fn unit(&mut self, threshold: f64, fanin: &[(Signal, f64)]) -> Signal {
        let id = self.neurons.len();
        self.neurons.push(NeuronSpec { id, threshold, reset: ResetKind::SoftSubtract, depth: 0 });
        for &(pre, weight) in fanin {
            self.synapses.push(Synapse { pre, post: id, weight });
        }
        Source::Neuron(id)
    }

    pub fn and(&mut self, a: Signal, b: Signal) -> Signal {
        self.unit(1.5, &[(a, 1.0), (b, 1.0)])
    }

    pub fn or(&mut self, a: Signal, b: Signal) -> Signal {
        self.unit(0.5, &[(a, 1.0), (b, 1.0)])
    }

    pub fn not(&mut self, a: Signal) -> Signal {
        self.unit(0.5, &[(self.bias(), 1.0), (a, -1.0)])
    }

    /// XOR(a,b) = AND(OR(a,b), NOT(AND(a,b))); 4 neurons, depth 3.
    pub fn xor(&mut self, a: Signal, b: Signal) -> Signal {
        let any = self.or(a, b);
        let both = self.and(a, b);
        let not_both = self.not(both);
        self.and(any, not_both)
    }

    /// MUX(s,a,b) = OR(AND(s,a), AND(NOT s, b)); selects a when s=1.
    pub fn mux(&mut self, s: Signal, a: Signal, b: Signal) -> Signal {
        let ns = self.not(s);
        let sa = self.and(s, a);
        let nsb = self.and(ns, b);
        self.or(sa, nsb)
    }

    /// (sum, carry); the XOR's inner AND doubles as the carry.
    pub fn half_adder(&mut self, a: Signal, b: Signal) -> (Signal, Signal) {
        let any = self.or(a, b);
        let both = self.and(a, b);
        let not_both = self.not(both);
        let sum = self.and(any, not_both);
        (sum, both)
    }

    /// (sum, carry) over three inputs; 9 neurons.
    pub fn full_adder(&mut self, a: Signal, b: Signal, cin: Signal) -> (Signal, Signal) {
        let (s1, c1) = self.half_adder(a, b);
        let (sum, c2) = self.half_adder(s1, cin);
        let carry = self.or(c1, c2);
        (sum, carry)
    }

    /// Balanced OR tree over any number of lines (empty -> constant 0 via a
    /// never-firing neuron is avoided; callers must pass at least one line).
    pub fn or_tree(&mut self, lines: &[Signal]) -> Signal {
        assert!(!lines.is_empty(), "or_tree needs at least one line");
        let mut level: Vec<Signal> = lines.to_vec();
        while level.len() > 1 {
            let mut next = Vec::with_capacity(level.len().div_ceil(2));
            for pair in level.chunks(2) {
                next.push(if pair.len() == 2 { self.or(pair[0], pair[1]) } else { pair[0] });
            }
            level = next;
        }
        level[0]
    }

    pub fn and_tree(&mut self, lines: &[Signal]) -> Signal {
        assert!(!lines.is_empty(), "and_tree needs at least one line");
        let mut level: Vec<Signal> = lines.to_vec();
        while level.len() > 1 {
            let mut next = Vec::with_capacity(level.len().div_ceil(2));
            for pair in level.chunks(2) {
                next.push(if pair.len() == 2 { self.and(pair[0], pair[1]) } else { pair[0] });
            }
            level = next;
        }
        level[0]
    }

    /// Instantiate a gate template onto existing signals. This is the
    /// composition primitive: wiring gate outputs into later gate inputs
    /// yields a flat circuit with recomputed depths at build time.
    pub fn instantiate(&mut self, kind: GateKind, inputs: &[Signal]) -> SubcircuitHandle {
        let (in_names, out_names) = kind.port_names();
        assert_eq!(inputs.len(), in_names.len(), "{kind:?} takes {} inputs", in_names.len());
        let first = self.neurons.len();
        let outs: Vec<Signal> = match kind {
            GateKind::And => vec![self.and(inputs[0], inputs[1])],
            GateKind::Or => vec![self.or(inputs[0], inputs[1])],
            GateKind::Not => vec![self.not(inputs[0])],
            GateKind::Xor => vec![self.xor(inputs[0], inputs[1])],
            GateKind::Mux2 => vec![self.mux(inputs[0], inputs[1], inputs[2])],
            GateKind::HalfAdder => {
                let (s, c) = self.half_adder(inputs[0], inputs[1]);
                vec![s, c]
            }
            GateKind::FullAdder => {
                let (s, c) = self.full_adder(inputs[0], inputs[1], inputs[2]);
                vec![s, c]
            }
        };
        SubcircuitHandle {
            kind,
            inputs: in_names.iter().map(|n| n.to_string()).zip(inputs.iter().copied()).map(|(n, s)| (n, s)).collect(),
            outputs: out_names.iter().map(|n| n.to_string()).zip(outs).collect(),
            neuron_ids: (first..self.neurons.len()).collect(),
        }
    }

    /// Mark a signal as a circuit output. Outputs must be neurons; a raw
    /// input or bias line gets a pass-through buffer (OR with one input).
    pub fn output(&mut self, name: impl Into<String>, sig: Signal) {
        let id = match sig {
            Source::Neuron(id) => id,
            other => {
                let buf = self.unit(0.5, &[(other, 1.0)]);
                match buf {
                    Source::Neuron(id) => id,
                    _ => unreachable!(),
                }
            }
        };
        self.outputs.push((name.into(), id));
    }

    pub fn build(self) -> Result<Circuit, SimError> {
        let (names, ids): (Vec<String>, Vec<NeuronId>) = self.outputs.into_iter().unzip();
        Circuit::new(self.input_names, self.neurons, self.synapses, ids, names)
    }
}

/// Standalone circuit for one gate template, ports named per
/// [`GateKind::port_names`].
pub fn build_gate(kind: GateKind) -> Circuit {
    let mut b = CircuitBuilder::new();
    let (in_names, _) = kind.port_names();
    let ins: Vec<Signal> = in_names.iter().map(|n| b.input(*n)).collect();
    let handle = b.instantiate(kind, &ins);
    for (name, sig) in handle.outputs.clone() {
        b.output(name, sig);
    }
    b.build().expect("gate templates are acyclic")
}

/// Ripple-carry adder over little-endian bit vectors; returns (sum, carry).
pub fn ripple_carry(
    b: &mut CircuitBuilder,
    a: &[Signal],
    x: &[Signal],
    carry_in: Option<Signal>,
) -> (Vec<Signal>, Signal) {
    assert_eq!(a.len(), x.len());
    let mut carry = carry_in;
    let mut sum = Vec::with_capacity(a.len());
    for (&ai, &xi) in a.iter().zip(x) {
        let (s, c) = match carry {
            None => b.half_adder(ai, xi),
            Some(cin) => b.full_adder(ai, xi, cin),
        };
        sum.push(s);
        carry = Some(c);
    }
    (sum, carry.expect("nonempty operands"))
}

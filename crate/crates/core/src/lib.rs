//! Spiking-neuron combinational logic and FP8 arithmetic circuits.
//!
//! Integrate-and-fire neurons with soft reset are composed into feed-forward
//! Boolean circuits, scaled up to IEEE-style 8-bit floating-point (E4M3)
//! multiply and add datapaths, and benchmarked for latency, numerical
//! fidelity, and robustness to leak and noise.

pub mod adder;
pub mod fp8;
pub mod gates;
pub mod linear;
pub mod multiplier;
pub mod netlist;
pub mod robustness;
pub mod sim;
pub mod word;

pub use fp8::{Fp8Class, Fp8Code, OverflowMode};
pub use gates::{CircuitBuilder, GateKind, Signal};
pub use sim::{Circuit, EvalTrace, Mode, SimConfig, SimError};

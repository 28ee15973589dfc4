//! Netlist export for named circuit units.

use anyhow::{bail, Result};
use spikefp::adder::{build_barrel_shifter, build_lzd, build_spatial_adder};
use spikefp::gates::build_gate;
use spikefp::multiplier::build_multiplier;
use spikefp::{Circuit, GateKind};

pub const UNITS: &[&str] = &[
    "and",
    "or",
    "not",
    "xor",
    "mux",
    "half-adder",
    "full-adder",
    "mul",
    "add",
    "barrel-shifter",
    "lzd",
];

pub fn unit_circuit(name: &str) -> Result<Circuit> {
    Ok(match name {
        "and" => build_gate(GateKind::And),
        "or" => build_gate(GateKind::Or),
        "not" => build_gate(GateKind::Not),
        "xor" => build_gate(GateKind::Xor),
        "mux" => build_gate(GateKind::Mux2),
        "half-adder" => build_gate(GateKind::HalfAdder),
        "full-adder" => build_gate(GateKind::FullAdder),
        "mul" => build_multiplier(),
        "add" => build_spatial_adder(),
        "barrel-shifter" => build_barrel_shifter(),
        "lzd" => build_lzd(),
        other => bail!("unknown unit '{other}' (known: {})", UNITS.join(", ")),
    })
}

//! Netlist export: JSON document and a DOT graph-description text.

use crate::sim::{Circuit, Source};
use serde::{Deserialize, Serialize};

#[derive(Debug, Serialize, Deserialize)]
pub struct NetlistNeuron {
    pub id: usize,
    pub threshold: f64,
    pub depth: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct NetlistSynapse {
    pub pre: String,
    pub post: usize,
    pub weight: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Netlist {
    pub neurons: Vec<NetlistNeuron>,
    pub synapses: Vec<NetlistSynapse>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
}

fn pre_label(circuit: &Circuit, src: Source) -> String {
    match src {
        Source::Input(i) => format!("in:{}", circuit.input_names()[i]),
        Source::Bias => "bias".to_string(),
        Source::Neuron(id) => format!("n{id}"),
    }
}

pub fn to_netlist(circuit: &Circuit) -> Netlist {
    Netlist {
        neurons: circuit
            .neurons()
            .iter()
            .map(|n| NetlistNeuron { id: n.id, threshold: n.threshold, depth: n.depth })
            .collect(),
        synapses: circuit
            .synapses()
            .iter()
            .map(|s| NetlistSynapse {
                pre: pre_label(circuit, s.pre),
                post: s.post,
                weight: s.weight,
            })
            .collect(),
        inputs: circuit.input_names().to_vec(),
        outputs: circuit
            .outputs()
            .iter()
            .zip(circuit.output_names())
            .map(|(&id, name)| format!("n{id}:{name}"))
            .collect(),
    }
}

pub fn to_json(circuit: &Circuit) -> String {
    serde_json::to_string_pretty(&to_netlist(circuit)).expect("netlist serialization")
}

/// DOT text for visualization tools.
pub fn to_graph_text(circuit: &Circuit) -> String {
    let mut s = String::from("digraph circuit {\n  rankdir=LR;\n");
    for name in circuit.input_names() {
        s.push_str(&format!("  \"in:{name}\" [shape=box];\n"));
    }
    for n in circuit.neurons() {
        s.push_str(&format!(
            "  \"n{}\" [label=\"n{} th={} d={}\"];\n",
            n.id, n.id, n.threshold, n.depth
        ));
    }
    for syn in circuit.synapses() {
        s.push_str(&format!(
            "  \"{}\" -> \"n{}\" [label=\"{}\"];\n",
            pre_label(circuit, syn.pre),
            syn.post,
            syn.weight
        ));
    }
    for (&id, name) in circuit.outputs().iter().zip(circuit.output_names()) {
        s.push_str(&format!("  \"n{id}\" -> \"out:{name}\" ;\n  \"out:{name}\" [shape=box];\n"));
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{build_gate, GateKind};

    #[test]
    fn netlist_round_trips_through_serde() {
        let c = build_gate(GateKind::Mux2);
        let json = to_json(&c);
        let back: Netlist = serde_json::from_str(&json).unwrap();
        assert_eq!(back.neurons.len(), 4);
        assert_eq!(back.inputs, vec!["s", "a", "b"]);
    }

    #[test]
    fn graph_text_mentions_every_neuron() {
        let c = build_gate(GateKind::Xor);
        let dot = to_graph_text(&c);
        for n in c.neurons() {
            assert!(dot.contains(&format!("\"n{}\"", n.id)));
        }
    }
}

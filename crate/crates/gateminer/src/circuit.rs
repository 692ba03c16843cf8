//! Gate-level netlists from SOP expressions, state graphs from per-state
//! output strings, and deterministic DOT emission for both.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{var_name, SopExpression, SopKind};
use crate::recording::InputState;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CircuitError {
    #[error("constant expression has no gates to build")]
    ConstantExpression,
    #[error("output strings have unequal widths: {0} vs {1}")]
    WidthMismatch(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE", tag = "kind")]
pub enum GateKind {
    Input { variable: usize },
    Not,
    And,
    Or,
    Output,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gate {
    pub id: usize,
    #[serde(flatten)]
    pub kind: GateKind,
    pub inputs: Vec<usize>,
}

/// Acyclic gate list in topological order; INPUT and OUTPUT nodes do not
/// count toward the gate-count metric.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Netlist {
    pub n_inputs: usize,
    pub gates: Vec<Gate>,
    pub output: usize,
}

impl Netlist {
    /// NOT/AND/OR count.
    pub fn gate_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g.kind, GateKind::Not | GateKind::And | GateKind::Or))
            .count()
    }

    pub fn eval_ordinal(&self, ordinal: u32) -> bool {
        let mut values = vec![false; self.gates.len()];
        for gate in &self.gates {
            values[gate.id] = match &gate.kind {
                GateKind::Input { variable } => ordinal >> (self.n_inputs - 1 - variable) & 1 == 1,
                GateKind::Not => !values[gate.inputs[0]],
                GateKind::And => gate.inputs.iter().all(|&i| values[i]),
                GateKind::Or => gate.inputs.iter().any(|&i| values[i]),
                GateKind::Output => values[gate.inputs[0]],
            };
        }
        values[self.output]
    }
}

/// Structural netlist for a non-constant SOP: one NOT per negated literal
/// (shared per variable when `share_not`), one AND per multi-literal term,
/// one OR when the sum has several terms, one OUTPUT.
pub fn netlist_from_sop(sop: &SopExpression, share_not: bool) -> Result<Netlist, CircuitError> {
    let terms = match sop.kind() {
        SopKind::Constant(_) => return Err(CircuitError::ConstantExpression),
        SopKind::Terms(terms) => terms,
    };
    let mut gates: Vec<Gate> = Vec::new();
    let mut input_ids: BTreeMap<usize, usize> = BTreeMap::new();
    let mut shared_not: BTreeMap<usize, usize> = BTreeMap::new();

    // inputs for every used variable, in variable order
    let mut used: Vec<usize> = terms
        .iter()
        .flat_map(|t| t.literals().iter().map(|l| l.variable))
        .collect();
    used.sort_unstable();
    used.dedup();
    for v in used {
        let id = gates.len();
        gates.push(Gate {
            id,
            kind: GateKind::Input { variable: v },
            inputs: vec![],
        });
        input_ids.insert(v, id);
    }

    let mut term_ids = Vec::with_capacity(terms.len());
    for term in terms {
        let mut literal_ids = Vec::with_capacity(term.literal_count());
        for lit in term.literals() {
            let src = input_ids[&lit.variable];
            let id = if lit.negated {
                if share_not {
                    *shared_not.entry(lit.variable).or_insert_with(|| {
                        let id = gates.len();
                        gates.push(Gate {
                            id,
                            kind: GateKind::Not,
                            inputs: vec![src],
                        });
                        id
                    })
                } else {
                    let id = gates.len();
                    gates.push(Gate {
                        id,
                        kind: GateKind::Not,
                        inputs: vec![src],
                    });
                    id
                }
            } else {
                src
            };
            literal_ids.push(id);
        }
        let term_id = if literal_ids.len() == 1 {
            literal_ids[0]
        } else {
            let id = gates.len();
            gates.push(Gate {
                id,
                kind: GateKind::And,
                inputs: literal_ids,
            });
            id
        };
        term_ids.push(term_id);
    }

    let sum_id = if term_ids.len() == 1 {
        term_ids[0]
    } else {
        let id = gates.len();
        gates.push(Gate {
            id,
            kind: GateKind::Or,
            inputs: term_ids,
        });
        id
    };
    let out_id = gates.len();
    gates.push(Gate {
        id: out_id,
        kind: GateKind::Output,
        inputs: vec![sum_id],
    });
    Ok(Netlist {
        n_inputs: sop.n_inputs(),
        gates,
        output: out_id,
    })
}

/// Circuit size metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SizeMetric {
    /// Product-term count; the default, matching the smallest/largest
    /// comparisons in the source tables.
    Terms,
    /// NOT/AND/OR count of the shared-NOT netlist.
    Gates,
}

pub fn circuit_size(sop: &SopExpression, metric: SizeMetric) -> usize {
    match metric {
        SizeMetric::Terms => sop.term_count(),
        SizeMetric::Gates => match sop.kind() {
            SopKind::Constant(_) => 0,
            SopKind::Terms(_) => netlist_from_sop(sop, true)
                .expect("non-constant")
                .gate_count(),
        },
    }
}

/// Directed graph over observed output strings; one edge per consecutive
/// pair in the counting schedule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateGraph {
    /// Distinct output strings, in first-observation order.
    pub nodes: Vec<String>,
    pub edges: Vec<StateEdge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateEdge {
    pub from: usize,
    pub to: usize,
    /// Input transition, e.g. "00->01".
    pub label: String,
}

pub fn build_state_graph(
    per_state_outputs: &[(InputState, String)],
) -> Result<StateGraph, CircuitError> {
    let mut nodes: Vec<String> = Vec::new();
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    for (_, out) in per_state_outputs {
        if let Some((_, first)) = per_state_outputs.first() {
            if out.len() != first.len() {
                return Err(CircuitError::WidthMismatch(first.len(), out.len()));
            }
        }
        index.entry(out.clone()).or_insert_with(|| {
            nodes.push(out.clone());
            nodes.len() - 1
        });
    }
    let mut edges = Vec::new();
    for pair in per_state_outputs.windows(2) {
        let (from_state, from_out) = &pair[0];
        let (to_state, to_out) = &pair[1];
        edges.push(StateEdge {
            from: index[from_out],
            to: index[to_out],
            label: format!("{}->{}", from_state.bits, to_state.bits),
        });
    }
    Ok(StateGraph { nodes, edges })
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// DOT digraph for a netlist. Shapes: INPUT=plaintext, NOT=invtriangle,
/// AND/OR=box, OUTPUT=doublecircle. Node naming is stable across runs.
pub fn netlist_to_dot(netlist: &Netlist) -> String {
    let mut out = String::from("digraph netlist {\n");
    for gate in &netlist.gates {
        let (shape, label) = match &gate.kind {
            GateKind::Input { variable } => ("plaintext", var_name(*variable).to_string()),
            GateKind::Not => ("invtriangle", "NOT".to_string()),
            GateKind::And => ("box", "AND".to_string()),
            GateKind::Or => ("box", "OR".to_string()),
            GateKind::Output => ("doublecircle", "OUT".to_string()),
        };
        let _ = writeln!(
            out,
            "  g{} [shape={shape}, label=\"{}\"];",
            gate.id,
            dot_escape(&label)
        );
    }
    for gate in &netlist.gates {
        for &src in &gate.inputs {
            let _ = writeln!(out, "  g{src} -> g{};", gate.id);
        }
    }
    out.push_str("}\n");
    out
}

/// DOT digraph for a state graph; nodes labeled with output strings, edges
/// with input transitions.
pub fn state_graph_to_dot(graph: &StateGraph) -> String {
    let mut out = String::from("digraph states {\n");
    for (i, node) in graph.nodes.iter().enumerate() {
        let _ = writeln!(out, "  n{i} [label=\"{}\"];", dot_escape(node));
    }
    for edge in &graph.edges {
        let _ = writeln!(
            out,
            "  n{} -> n{} [label=\"{}\"];",
            edge.from,
            edge.to,
            dot_escape(&edge.label)
        );
    }
    out.push_str("}\n");
    out
}

//! Re-parse emitted DOT with a small validator for the subset we generate:
//! `digraph <name> { <stmt>* }` where a statement is either a node
//! (`id [k=v, ...];`) or an edge (`a -> b [k=v, ...];`). Checks that every
//! edge endpoint was declared and that attribute strings are well-quoted.

use std::collections::BTreeSet;

use gateminer::circuit::{build_state_graph, netlist_from_sop, netlist_to_dot, state_graph_to_dot};
use gateminer::logic::{minimize, TruthTable};
use gateminer::recording::InputState;

struct DotGraph {
    nodes: BTreeSet<String>,
    edges: Vec<(String, String)>,
}

fn parse_dot(text: &str) -> Result<DotGraph, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty input")?;
    let name = header
        .strip_prefix("digraph ")
        .and_then(|r| r.strip_suffix(" {"))
        .ok_or_else(|| format!("bad header {header:?}"))?;
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(format!("bad graph name {name:?}"));
    }

    let mut graph = DotGraph {
        nodes: BTreeSet::new(),
        edges: Vec::new(),
    };
    let mut closed = false;
    for line in lines {
        if closed {
            return Err(format!("content after closing brace: {line:?}"));
        }
        if line == "}" {
            closed = true;
            continue;
        }
        let stmt = line
            .strip_prefix("  ")
            .and_then(|s| s.strip_suffix(';'))
            .ok_or_else(|| format!("bad statement {line:?}"))?;
        let (head, attrs) = match stmt.find(" [") {
            Some(i) => {
                let attrs = stmt[i + 2..]
                    .strip_suffix(']')
                    .ok_or_else(|| format!("unterminated attribute list in {line:?}"))?;
                (&stmt[..i], Some(attrs))
            }
            None => (stmt, None),
        };
        if let Some(attrs) = attrs {
            check_attrs(attrs).map_err(|e| format!("{e} in {line:?}"))?;
        }
        match head.split_once(" -> ") {
            Some((from, to)) => {
                for id in [from, to] {
                    check_id(id)?;
                    if !graph.nodes.contains(id) {
                        return Err(format!("edge references undeclared node {id:?}"));
                    }
                }
                graph.edges.push((from.to_string(), to.to_string()));
            }
            None => {
                check_id(head)?;
                if !graph.nodes.insert(head.to_string()) {
                    return Err(format!("duplicate node {head:?}"));
                }
            }
        }
    }
    if !closed {
        return Err("missing closing brace".into());
    }
    Ok(graph)
}

fn check_id(id: &str) -> Result<(), String> {
    if id.is_empty() || !id.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(format!("bad node id {id:?}"));
    }
    Ok(())
}

fn check_attrs(attrs: &str) -> Result<(), String> {
    for pair in attrs.split(", ") {
        let (key, value) = pair
            .split_once('=')
            .ok_or(format!("bad attribute {pair:?}"))?;
        check_id(key)?;
        let bare = value.chars().all(|c| c.is_ascii_alphanumeric());
        let quoted = value.len() >= 2 && value.starts_with('"') && value.ends_with('"') && {
            // reject unescaped interior quotes
            let mut escaped = false;
            let mut ok = true;
            for c in value[1..value.len() - 1].chars() {
                match (escaped, c) {
                    (false, '\\') => escaped = true,
                    (false, '"') => ok = false,
                    _ => escaped = false,
                }
            }
            ok && !escaped
        };
        if !bare && !quoted {
            return Err(format!("bad attribute value {value:?}"));
        }
    }
    Ok(())
}

#[test]
fn netlist_dot_reparses() {
    for bits in ["1110", "0110", "1001", "0001", "0100"] {
        let sop = minimize(&TruthTable::from_bits(2, bits).unwrap());
        let netlist = netlist_from_sop(&sop, true).unwrap();
        let dot = netlist_to_dot(&netlist);
        let parsed = parse_dot(&dot).unwrap();
        assert_eq!(parsed.nodes.len(), netlist.gates.len(), "{bits}");
        let edge_count: usize = netlist.gates.iter().map(|g| g.inputs.len()).sum();
        assert_eq!(parsed.edges.len(), edge_count, "{bits}");
    }
}

#[test]
fn nand_netlist_dot_shape() {
    // A' + B': inputs A and B, a shared NOT each, an OR, and the output tap
    let sop = minimize(&TruthTable::from_bits(2, "1110").unwrap());
    let dot = netlist_to_dot(&netlist_from_sop(&sop, true).unwrap());
    let parsed = parse_dot(&dot).unwrap();
    assert_eq!(parsed.nodes.len(), 6);
    assert_eq!(dot.matches("invtriangle").count(), 2);
    assert_eq!(dot.matches("label=\"OR\"").count(), 1);
    assert!(!dot.contains("label=\"AND\""));
}

#[test]
fn state_graph_dot_reparses() {
    let per_state: Vec<(InputState, String)> = "0111"
        .chars()
        .enumerate()
        .map(|(i, c)| (InputState::new(2, i as u32), c.to_string()))
        .collect();
    let graph = build_state_graph(&per_state).unwrap();
    let parsed = parse_dot(&state_graph_to_dot(&graph)).unwrap();
    assert_eq!(parsed.nodes.len(), graph.nodes.len());
    assert_eq!(parsed.edges.len(), 3); // 00->01, 01->10, 10->11
}

#[test]
fn validator_rejects_malformed() {
    assert!(parse_dot("graph g {\n}\n").is_err());
    assert!(parse_dot("digraph g {\n  a -> b;\n}\n").is_err()); // undeclared nodes
    assert!(parse_dot("digraph g {\n  a [label=\"un\"escaped\"];\n}\n").is_err());
    assert!(parse_dot("digraph g {\n  a;\n").is_err()); // no closing brace
}

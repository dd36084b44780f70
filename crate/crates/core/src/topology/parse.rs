//! Line-oriented network files.
//!
//! ```text
//! # comment
//! node v0 source
//! node a
//! node t dest
//! edge e1 v0 a [capacity]
//! adversary node-based z=1
//! adversary set e1 e2
//! ```

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use super::{AdversarySpec, Edge, Network, Node, NodeId, Role, TopologyError};

/// A parsed network file: the graph and, when present, its adversary spec.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkFile {
    pub network: Network,
    pub adversary: Option<AdversarySpec>,
}

fn err(line: usize, msg: impl Into<String>) -> TopologyError {
    TopologyError::Parse {
        line,
        msg: msg.into(),
    }
}

/// Parses the network file format. Errors carry 1-based line numbers.
pub fn parse_network(text: &str) -> Result<NetworkFile, TopologyError> {
    let mut nodes: Vec<Node> = Vec::new();
    let mut node_lines: HashMap<String, usize> = HashMap::new();
    // (name, tail, head, capacity, line)
    let mut raw_edges: Vec<(String, String, String, u64, usize)> = Vec::new();
    let mut z: Option<(usize, usize)> = None;
    let mut sets: Vec<(Vec<String>, usize)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        match words[0] {
            "node" => {
                let (name, role) = match words.as_slice() {
                    [_, name] => (*name, Role::Internal),
                    [_, name, "source"] => (*name, Role::Source),
                    [_, name, "dest"] => (*name, Role::Destination),
                    [_, _, other] => {
                        return Err(err(line, format!("unknown node role '{other}'")));
                    }
                    _ => return Err(err(line, "expected: node <id> [source|dest]")),
                };
                if node_lines.insert(name.to_string(), line).is_some() {
                    return Err(err(line, format!("duplicate node id {name}")));
                }
                nodes.push(Node {
                    name: name.to_string(),
                    role,
                });
            }
            "edge" => {
                let (name, tail, head, cap) = match words.as_slice() {
                    [_, name, tail, head] => (*name, *tail, *head, 1),
                    [_, name, tail, head, cap] => (*name, *tail, *head, parse_capacity(cap, line)?),
                    _ => return Err(err(line, "expected: edge <id> <tail> <head> [capacity]")),
                };
                if raw_edges.iter().any(|e| e.0 == name) {
                    return Err(err(line, format!("duplicate edge id {name}")));
                }
                raw_edges.push((name.into(), tail.into(), head.into(), cap, line));
            }
            "adversary" => match words.as_slice() {
                [_, "node-based", zs] => {
                    let value = zs
                        .strip_prefix("z=")
                        .and_then(|v| v.parse::<usize>().ok())
                        .ok_or_else(|| err(line, "expected z=<non-negative integer>"))?;
                    if z.is_some() {
                        return Err(err(line, "node-based adversary given twice"));
                    }
                    z = Some((value, line));
                }
                [_, "set", members @ ..] => {
                    sets.push((members.iter().map(|s| s.to_string()).collect(), line));
                }
                _ => {
                    return Err(err(
                        line,
                        "expected: adversary node-based z=<int> | adversary set <edge-id>...",
                    ))
                }
            },
            other => return Err(err(line, format!("unknown directive '{other}'"))),
        }
    }

    let lookup = |name: &str, line: usize| {
        nodes
            .iter()
            .position(|n| n.name == name)
            .map(NodeId)
            .ok_or_else(|| err(line, format!("unknown node {name}")))
    };
    let mut edges = Vec::with_capacity(raw_edges.len());
    for (name, tail, head, capacity, line) in &raw_edges {
        edges.push(Edge {
            name: name.clone(),
            tail: lookup(tail, *line)?,
            head: lookup(head, *line)?,
            capacity: *capacity,
        });
    }

    let network = Network::new(nodes, edges).map_err(|e| match e {
        TopologyError::Cycle { ref edge, .. } => {
            let line = raw_edges.iter().find(|r| &r.0 == edge).map_or(0, |r| r.4);
            err(line, e.to_string())
        }
        other => err(0, other.to_string()),
    })?;

    let adversary = match (z, sets.is_empty()) {
        (Some((_, line)), false) => {
            return Err(err(line, "cannot mix node-based and explicit adversary sets"));
        }
        (Some((z, _)), true) => Some(AdversarySpec::NodeBased { z }),
        (None, false) => {
            let mut resolved = Vec::with_capacity(sets.len());
            for (members, line) in &sets {
                let set: BTreeSet<_> = members
                    .iter()
                    .map(|m| {
                        network
                            .edge_by_name(m)
                            .ok_or_else(|| err(*line, format!("unknown edge {m}")))
                    })
                    .collect::<Result<_, _>>()?;
                resolved.push(set);
            }
            Some(AdversarySpec::General { sets: resolved })
        }
        (None, true) => None,
    };

    Ok(NetworkFile { network, adversary })
}

fn parse_capacity(word: &str, line: usize) -> Result<u64, TopologyError> {
    match word.parse::<u64>() {
        Ok(0) => Err(err(line, "capacity must be a positive integer")),
        Ok(c) => Ok(c),
        Err(_) if word.contains('.') || word.contains('/') => Err(err(
            line,
            format!(
                "non-integer capacity '{word}': scale rational capacities to integers before loading"
            ),
        )),
        Err(_) => Err(err(line, format!("invalid capacity '{word}'"))),
    }
}

impl NetworkFile {
    /// Serializes back to the file format; `parse_network` of the output
    /// reproduces `self`.
    pub fn to_text(&self) -> String {
        let net = &self.network;
        let mut out = String::new();
        for n in net.nodes() {
            let role = match n.role {
                Role::Source => " source",
                Role::Destination => " dest",
                Role::Internal => "",
            };
            let _ = writeln!(out, "node {}{}", n.name, role);
        }
        for e in net.edges() {
            let _ = write!(
                out,
                "edge {} {} {}",
                e.name,
                net.node(e.tail).name,
                net.node(e.head).name
            );
            if e.capacity != 1 {
                let _ = write!(out, " {}", e.capacity);
            }
            out.push('\n');
        }
        match &self.adversary {
            Some(AdversarySpec::NodeBased { z }) => {
                let _ = writeln!(out, "adversary node-based z={z}");
            }
            Some(AdversarySpec::General { sets }) => {
                for set in sets {
                    let names: Vec<_> = set.iter().map(|&e| net.edge(e).name.as_str()).collect();
                    let _ = writeln!(out, "adversary set {}", names.join(" "));
                }
            }
            None => {}
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::fixtures;

    #[test]
    fn parses_fixture_text() {
        let file = parse_network(fixtures::ILLUSTRATIVE_TEXT).unwrap();
        assert_eq!(file.network, fixtures::illustrative());
        assert_eq!(file.adversary, Some(AdversarySpec::NodeBased { z: 1 }));
    }

    #[test]
    fn round_trip_through_exporter() {
        let (net, spec) = fixtures::unequal_capacity();
        let file = NetworkFile {
            network: net,
            adversary: Some(spec),
        };
        assert_eq!(parse_network(&file.to_text()).unwrap(), file);
        let file = parse_network(fixtures::ILLUSTRATIVE_TEXT).unwrap();
        assert_eq!(parse_network(&file.to_text()).unwrap(), file);
    }

    #[test]
    fn line_numbered_errors() {
        let cases = [
            ("node v0 source\nnode t dest\nedge e v0 x\n", 3, "unknown node x"),
            ("node v0 source\nnode t dest\nedge e v0 t 1.5\n", 3, "non-integer capacity"),
            ("node v0 source\nnode t dest\nedge e v0 t 0\n", 3, "positive integer"),
            ("node v0 source\nfoo bar\n", 2, "unknown directive"),
            ("node v0 source\nnode t dest\nedge e v0 t\nadversary set nope\n", 4, "unknown edge nope"),
            ("node v0 source\nnode v0\n", 2, "duplicate node"),
            ("node v0 source\nnode t\n\nnode t dest\n", 4, "duplicate node"),
            ("node v0 source\nnode t sink\n", 2, "unknown node role"),
            ("node v0 source\nnode t dest\nadversary node-based z=x\n", 3, "z=<non-negative"),
        ];
        for (text, line, needle) in cases {
            match parse_network(text) {
                Err(TopologyError::Parse { line: l, msg }) => {
                    assert_eq!(l, line, "{text}");
                    assert!(msg.contains(needle), "{msg} does not contain {needle}");
                }
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn cycle_error_points_at_back_edge_line() {
        let text = "node v0 source\nnode a\nnode t dest\nedge e1 v0 a\nedge e2 a v0 # loop\nedge e3 a t\n";
        match parse_network(text) {
            Err(TopologyError::Parse { line, msg }) => {
                assert_eq!(line, 5);
                assert!(msg.contains("cycle"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = "# header\n\nnode v0 source # the source\nnode t dest\nedge e v0 t 3\n";
        let file = parse_network(text).unwrap();
        assert_eq!(file.network.edge(file.network.edge_ids().next().unwrap()).capacity, 3);
        assert_eq!(file.adversary, None);
    }
}

//! Directed acyclic network model, min-cut computations, adversary-set
//! enumeration and the unequal-capacity reduction.

mod flow;
pub mod fixtures;
mod parse;

use std::collections::{BTreeSet, BinaryHeap, HashMap};
use std::cmp::Reverse;
use std::fmt;

use thiserror::Error;

pub use flow::Flow;
pub use parse::{parse_network, NetworkFile};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopologyError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("network has a cycle through edge {edge} ({tail} -> {head})")]
    Cycle {
        edge: String,
        tail: String,
        head: String,
    },
    #[error("network must have exactly one source, found {0}")]
    SourceCount(usize),
    #[error("network has no destination")]
    NoDestination,
    #[error("duplicate node id {0}")]
    DuplicateNode(String),
    #[error("duplicate edge id {0}")]
    DuplicateEdge(String),
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("unknown edge {0}")]
    UnknownEdge(String),
    #[error("edge {0} has zero capacity")]
    ZeroCapacity(String),
    #[error("source and sink are the same node ({0})")]
    SameEndpoints(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Source,
    Destination,
    Internal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub name: String,
    pub role: Role,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub tail: NodeId,
    pub head: NodeId,
    pub capacity: u64,
}

/// A validated directed acyclic multigraph with one source and at least one
/// destination. Node and edge ids are positions in declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    source: NodeId,
    destinations: Vec<NodeId>,
    order: Vec<NodeId>,
}

impl Network {
    pub fn new(nodes: Vec<Node>, edges: Vec<Edge>) -> Result<Self, TopologyError> {
        let mut seen = HashMap::new();
        for (i, n) in nodes.iter().enumerate() {
            if seen.insert(n.name.as_str(), i).is_some() {
                return Err(TopologyError::DuplicateNode(n.name.clone()));
            }
        }
        let mut seen_edges = HashMap::new();
        for e in &edges {
            if seen_edges.insert(e.name.as_str(), ()).is_some() {
                return Err(TopologyError::DuplicateEdge(e.name.clone()));
            }
            if e.tail.0 >= nodes.len() || e.head.0 >= nodes.len() {
                return Err(TopologyError::UnknownNode(format!("endpoint of {}", e.name)));
            }
            if e.capacity == 0 {
                return Err(TopologyError::ZeroCapacity(e.name.clone()));
            }
        }
        let sources: Vec<_> = nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.role == Role::Source)
            .map(|(i, _)| NodeId(i))
            .collect();
        if sources.len() != 1 {
            return Err(TopologyError::SourceCount(sources.len()));
        }
        let destinations: Vec<_> = nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.role == Role::Destination)
            .map(|(i, _)| NodeId(i))
            .collect();
        if destinations.is_empty() {
            return Err(TopologyError::NoDestination);
        }
        let order = sort_topologically(&nodes, &edges)?;
        Ok(Network {
            nodes,
            edges,
            source: sources[0],
            destinations,
            order,
        })
    }

    pub fn builder() -> NetworkBuilder {
        NetworkBuilder::default()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id.0]
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len()).map(NodeId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn edges_with_ids(&self) -> impl Iterator<Item = (EdgeId, &Edge)> {
        self.edges.iter().enumerate().map(|(i, e)| (EdgeId(i), e))
    }

    pub fn node_by_name(&self, name: &str) -> Option<NodeId> {
        self.nodes.iter().position(|n| n.name == name).map(NodeId)
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edges.iter().position(|e| e.name == name).map(EdgeId)
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn destinations(&self) -> &[NodeId] {
        &self.destinations
    }

    pub fn is_destination(&self, v: NodeId) -> bool {
        self.node(v).role == Role::Destination
    }

    /// Nodes that are neither the source nor a destination, sorted by id.
    pub fn internal_nodes(&self) -> Vec<NodeId> {
        self.sorted_by_name(|n| n.role == Role::Internal)
    }

    /// Every node except the source, sorted by id.
    pub fn non_source_nodes(&self) -> Vec<NodeId> {
        self.sorted_by_name(|n| n.role != Role::Source)
    }

    fn sorted_by_name(&self, keep: impl Fn(&Node) -> bool) -> Vec<NodeId> {
        let mut ids: Vec<_> = self.node_ids().filter(|&v| keep(self.node(v))).collect();
        ids.sort_by(|a, b| self.node(*a).name.cmp(&self.node(*b).name));
        ids
    }

    /// Incoming edges of `v` in edge-id order.
    pub fn in_edges(&self, v: NodeId) -> Vec<EdgeId> {
        self.edge_ids().filter(|&e| self.edge(e).head == v).collect()
    }

    /// Outgoing edges of `v` in edge-id order.
    pub fn out_edges(&self, v: NodeId) -> Vec<EdgeId> {
        self.edge_ids().filter(|&e| self.edge(e).tail == v).collect()
    }

    /// Largest in-degree plus out-degree over all nodes.
    pub fn max_degree(&self) -> usize {
        let mut deg = vec![0usize; self.nodes.len()];
        for e in &self.edges {
            deg[e.tail.0] += 1;
            deg[e.head.0] += 1;
        }
        deg.into_iter().max().unwrap_or(0)
    }

    pub fn max_in_degree(&self) -> usize {
        let mut deg = vec![0usize; self.nodes.len()];
        for e in &self.edges {
            deg[e.head.0] += 1;
        }
        deg.into_iter().max().unwrap_or(0)
    }

    /// Topological order fixed at construction.
    pub fn topo_order(&self) -> &[NodeId] {
        &self.order
    }

    pub fn edge_set_label(&self, set: &BTreeSet<EdgeId>) -> String {
        let names: Vec<_> = set.iter().map(|&e| self.edge(e).name.as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Resolves edge names to ids.
    pub fn resolve_edges<S: AsRef<str>>(
        &self,
        names: &[S],
    ) -> Result<BTreeSet<EdgeId>, TopologyError> {
        names
            .iter()
            .map(|n| {
                self.edge_by_name(n.as_ref())
                    .ok_or_else(|| TopologyError::UnknownEdge(n.as_ref().to_string()))
            })
            .collect()
    }
}

/// Incremental constructor for networks built in code.
#[derive(Debug, Default, Clone)]
pub struct NetworkBuilder {
    nodes: Vec<Node>,
    edges: Vec<(String, String, String, u64)>,
}

impl NetworkBuilder {
    fn push_node(mut self, name: &str, role: Role) -> Self {
        self.nodes.push(Node {
            name: name.to_string(),
            role,
        });
        self
    }

    pub fn source(self, name: &str) -> Self {
        self.push_node(name, Role::Source)
    }

    pub fn destination(self, name: &str) -> Self {
        self.push_node(name, Role::Destination)
    }

    pub fn node(self, name: &str) -> Self {
        self.push_node(name, Role::Internal)
    }

    pub fn edge(self, name: &str, tail: &str, head: &str) -> Self {
        self.edge_with_capacity(name, tail, head, 1)
    }

    pub fn edge_with_capacity(mut self, name: &str, tail: &str, head: &str, capacity: u64) -> Self {
        self.edges
            .push((name.to_string(), tail.to_string(), head.to_string(), capacity));
        self
    }

    pub fn build(self) -> Result<Network, TopologyError> {
        let lookup = |name: &str| {
            self.nodes
                .iter()
                .position(|n| n.name == name)
                .map(NodeId)
                .ok_or_else(|| TopologyError::UnknownNode(name.to_string()))
        };
        let edges = self
            .edges
            .iter()
            .map(|(name, tail, head, capacity)| {
                Ok(Edge {
                    name: name.clone(),
                    tail: lookup(tail)?,
                    head: lookup(head)?,
                    capacity: *capacity,
                })
            })
            .collect::<Result<Vec<_>, TopologyError>>()?;
        Network::new(self.nodes, edges)
    }
}

fn sort_topologically(nodes: &[Node], edges: &[Edge]) -> Result<Vec<NodeId>, TopologyError> {
    let n = nodes.len();
    let mut indegree = vec![0usize; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in edges {
        indegree[e.head.0] += 1;
        out[e.tail.0].push(e.head.0);
    }
    let mut ready: BinaryHeap<Reverse<(&str, usize)>> = (0..n)
        .filter(|&v| indegree[v] == 0)
        .map(|v| Reverse((nodes[v].name.as_str(), v)))
        .collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse((_, v))) = ready.pop() {
        order.push(NodeId(v));
        for &w in &out[v] {
            indegree[w] -= 1;
            if indegree[w] == 0 {
                ready.push(Reverse((nodes[w].name.as_str(), w)));
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }
    Err(find_back_edge(nodes, edges))
}

/// Depth-first search for an edge closing a cycle.
fn find_back_edge(nodes: &[Node], edges: &[Edge]) -> TopologyError {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        White,
        Grey,
        Black,
    }
    let n = nodes.len();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in edges.iter().enumerate() {
        out[e.tail.0].push(i);
    }
    let mut mark = vec![Mark::White; n];
    for root in 0..n {
        if mark[root] != Mark::White {
            continue;
        }
        // (node, next outgoing index)
        let mut stack = vec![(root, 0usize)];
        mark[root] = Mark::Grey;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next < out[v].len() {
                let ei = out[v][*next];
                *next += 1;
                let w = edges[ei].head.0;
                match mark[w] {
                    Mark::Grey => {
                        let e = &edges[ei];
                        return TopologyError::Cycle {
                            edge: e.name.clone(),
                            tail: nodes[e.tail.0].name.clone(),
                            head: nodes[e.head.0].name.clone(),
                        };
                    }
                    Mark::White => {
                        mark[w] = Mark::Grey;
                        stack.push((w, 0));
                    }
                    Mark::Black => {}
                }
            } else {
                mark[v] = Mark::Black;
                stack.pop();
            }
        }
    }
    unreachable!("topological sort failed on an acyclic graph")
}

/// Topological order of the network's nodes; ties are broken by node id.
pub fn topo_order(net: &Network) -> Vec<NodeId> {
    net.order.clone()
}

/// The subgraph G_A = (V, E \ A). Remaining edges keep their names and
/// relative order, so edge ids are renumbered.
pub fn delete_edges(net: &Network, removed: &BTreeSet<EdgeId>) -> Result<Network, TopologyError> {
    if let Some(bad) = removed.iter().find(|e| e.0 >= net.edge_count()) {
        return Err(TopologyError::UnknownEdge(format!("#{}", bad.0)));
    }
    let edges = net
        .edges_with_ids()
        .filter(|(id, _)| !removed.contains(id))
        .map(|(_, e)| e.clone())
        .collect();
    Network::new(net.nodes.clone(), edges)
}

/// Value of a minimum s-t edge cut (equal to the max s-t flow).
pub fn min_cut(net: &Network, s: NodeId, t: NodeId) -> Result<u64, TopologyError> {
    min_cut_excluding(net, s, t, &BTreeSet::new())
}

/// min-cut(s, t; G_A) without materializing G_A.
pub fn min_cut_excluding(
    net: &Network,
    s: NodeId,
    t: NodeId,
    excluded: &BTreeSet<EdgeId>,
) -> Result<u64, TopologyError> {
    Ok(max_flow(net, s, t, excluded)?.value)
}

/// Full max-flow result including the residual-reachability cut.
pub fn max_flow(
    net: &Network,
    s: NodeId,
    t: NodeId,
    excluded: &BTreeSet<EdgeId>,
) -> Result<Flow, TopologyError> {
    if s == t {
        return Err(TopologyError::SameEndpoints(net.node(s).name.clone()));
    }
    Ok(flow::max_flow(net, s, t, excluded))
}

/// Which edge sets the adversary may seize.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdversarySpec {
    /// Outgoing edges of any at most `z` internal nodes.
    NodeBased { z: usize },
    /// An explicit collection of edge sets.
    General { sets: Vec<BTreeSet<EdgeId>> },
}

impl AdversarySpec {
    pub fn validate(&self, net: &Network) -> Result<(), TopologyError> {
        if let AdversarySpec::General { sets } = self {
            for set in sets {
                if let Some(bad) = set.iter().find(|e| e.0 >= net.edge_count()) {
                    return Err(TopologyError::UnknownEdge(format!("#{}", bad.0)));
                }
            }
        }
        Ok(())
    }

    pub fn describe(&self, net: &Network) -> String {
        match self {
            AdversarySpec::NodeBased { z } => format!("node-based z={z}"),
            AdversarySpec::General { sets } => {
                let parts: Vec<_> = sets.iter().map(|s| net.edge_set_label(s)).collect();
                format!("sets [{}]", parts.join(", "))
            }
        }
    }
}

/// One member of the adversary collection: the seized edges, plus the
/// controlled nodes when the set came from a node-based spec.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackSet {
    pub nodes: Vec<NodeId>,
    pub edges: BTreeSet<EdgeId>,
}

impl AttackSet {
    pub fn empty() -> Self {
        AttackSet {
            nodes: Vec::new(),
            edges: BTreeSet::new(),
        }
    }

    pub fn from_edges(edges: BTreeSet<EdgeId>) -> Self {
        AttackSet {
            nodes: Vec::new(),
            edges,
        }
    }

    /// Outgoing edges of the given nodes.
    pub fn of_nodes(net: &Network, nodes: &[NodeId]) -> Self {
        let edges = nodes.iter().flat_map(|&v| net.out_edges(v)).collect();
        AttackSet {
            nodes: nodes.to_vec(),
            edges,
        }
    }

    pub fn label(&self, net: &Network) -> String {
        if self.nodes.is_empty() {
            net.edge_set_label(&self.edges)
        } else {
            let names: Vec<_> = self.nodes.iter().map(|&v| net.node(v).name.as_str()).collect();
            format!("nodes{{{}}}", names.join(","))
        }
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "node#{}", self.0)
    }
}

/// Enumerates the adversary collection in a deterministic order. Node-based
/// specs yield every subset of at most z internal nodes, smallest first and
/// lexicographic within a size, starting with the empty attack.
pub fn adversary_sets(net: &Network, spec: &AdversarySpec) -> Result<Vec<AttackSet>, TopologyError> {
    spec.validate(net)?;
    match spec {
        AdversarySpec::General { sets } => {
            Ok(sets.iter().cloned().map(AttackSet::from_edges).collect())
        }
        AdversarySpec::NodeBased { z } => {
            let internal = net.internal_nodes();
            let z = if *z > internal.len() {
                log::warn!(
                    "z = {} exceeds the {} internal nodes; clamping",
                    z,
                    internal.len()
                );
                internal.len()
            } else {
                *z
            };
            let mut out = Vec::new();
            for size in 0..=z {
                for combo in combinations(internal.len(), size) {
                    let chosen: Vec<_> = combo.iter().map(|&i| internal[i]).collect();
                    out.push(AttackSet::of_nodes(net, &chosen));
                }
            }
            Ok(out)
        }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// min over A in the adversary collection and destinations t of
/// min-cut(v0, t; G_A).
pub fn residual_rate(net: &Network, spec: &AdversarySpec) -> Result<u64, TopologyError> {
    let sets = adversary_sets(net, spec)?;
    let mut best = u64::MAX;
    for set in &sets {
        best = best.min(destination_min_cut(net, &set.edges)?);
    }
    Ok(if best == u64::MAX { 0 } else { best })
}

/// min over destinations of min-cut(v0, t; G_A).
pub fn destination_min_cut(net: &Network, removed: &BTreeSet<EdgeId>) -> Result<u64, TopologyError> {
    net.destinations()
        .iter()
        .map(|&t| min_cut_excluding(net, net.source(), t, removed))
        .try_fold(u64::MAX, |acc, c| c.map(|c| acc.min(c)))
}

/// Replaces every capacity-c edge by c parallel unit edges and rewrites the
/// adversary collection onto the replacement edges. Replacement names append
/// one prime per copy: e, e', e'', ...
pub fn expand_capacities(
    net: &Network,
    spec: &AdversarySpec,
) -> Result<(Network, AdversarySpec), TopologyError> {
    let sets = adversary_sets(net, spec)?;
    let mut edges = Vec::new();
    let mut replacements: Vec<Vec<EdgeId>> = Vec::with_capacity(net.edge_count());
    for e in net.edges() {
        let mut ids = Vec::new();
        for copy in 0..e.capacity {
            let name = if e.capacity == 1 {
                e.name.clone()
            } else {
                format!("{}{}", e.name, "'".repeat(copy as usize + 1))
            };
            ids.push(EdgeId(edges.len()));
            edges.push(Edge {
                name,
                tail: e.tail,
                head: e.head,
                capacity: 1,
            });
        }
        replacements.push(ids);
    }
    let expanded = Network::new(net.nodes.clone(), edges)?;
    let new_sets = sets
        .iter()
        .map(|s| {
            s.edges
                .iter()
                .flat_map(|e| replacements[e.0].iter().copied())
                .collect()
        })
        .collect();
    Ok((expanded, AdversarySpec::General { sets: new_sets }))
}

/// Whether removing `edges` disconnects the source from some destination,
/// returning the first such destination.
pub fn covers_cut(net: &Network, edges: &BTreeSet<EdgeId>) -> Option<NodeId> {
    net.destinations()
        .iter()
        .copied()
        .find(|&t| flow::max_flow(net, net.source(), t, edges).value == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fixture() -> Network {
        fixtures::illustrative()
    }

    fn names(net: &Network, set: &BTreeSet<EdgeId>) -> Vec<String> {
        set.iter().map(|&e| net.edge(e).name.clone()).collect()
    }

    #[test]
    fn topo_order_examples() {
        let single = Network::builder()
            .source("v0")
            .destination("t")
            .edge("e", "v0", "t")
            .build()
            .unwrap();
        let order: Vec<_> = topo_order(&single)
            .iter()
            .map(|&v| single.node(v).name.clone())
            .collect();
        assert_eq!(order, ["v0", "t"]);

        let net = fixture();
        let order: Vec<_> = topo_order(&net)
            .iter()
            .map(|&v| net.node(v).name.clone())
            .collect();
        assert_eq!(order, ["v0", "a", "b", "c", "t"]);
        for e in net.edges() {
            let pos = |v: NodeId| topo_order(&net).iter().position(|&x| x == v).unwrap();
            assert!(pos(e.tail) < pos(e.head));
        }
    }

    #[test]
    fn cycle_is_rejected_with_back_edge() {
        let err = Network::builder()
            .source("v0")
            .node("a")
            .destination("t")
            .edge("e1", "v0", "a")
            .edge("e2", "a", "v0")
            .edge("e3", "a", "t")
            .build()
            .unwrap_err();
        assert_eq!(
            err,
            TopologyError::Cycle {
                edge: "e2".into(),
                tail: "a".into(),
                head: "v0".into()
            }
        );
    }

    #[test]
    fn structural_validation() {
        assert_eq!(
            Network::builder().node("a").destination("t").build(),
            Err(TopologyError::SourceCount(0))
        );
        assert_eq!(
            Network::builder().source("v0").node("a").build(),
            Err(TopologyError::NoDestination)
        );
        assert_eq!(
            Network::builder().source("v0").destination("v0").build(),
            Err(TopologyError::DuplicateNode("v0".into()))
        );
        assert_eq!(
            Network::builder()
                .source("v0")
                .destination("t")
                .edge("e", "v0", "x")
                .build(),
            Err(TopologyError::UnknownNode("x".into()))
        );
        assert_eq!(
            Network::builder()
                .source("v0")
                .destination("t")
                .edge_with_capacity("e", "v0", "t", 0)
                .build(),
            Err(TopologyError::ZeroCapacity("e".into()))
        );
    }

    #[test]
    fn fixture_cut_values() {
        let net = fixture();
        let t = net.node_by_name("t").unwrap();
        assert_eq!(min_cut(&net, net.source(), t).unwrap(), 3);
        let a = net.node_by_name("a").unwrap();
        let out_a: BTreeSet<_> = net.out_edges(a).into_iter().collect();
        let g_a = delete_edges(&net, &out_a).unwrap();
        assert_eq!(min_cut(&g_a, g_a.source(), t).unwrap(), 2);
        assert_eq!(min_cut_excluding(&net, net.source(), t, &out_a).unwrap(), 2);
        // every single internal node deletion leaves 2
        for v in net.internal_nodes() {
            let out: BTreeSet<_> = net.out_edges(v).into_iter().collect();
            assert_eq!(min_cut_excluding(&net, net.source(), t, &out).unwrap(), 2);
        }
    }

    #[test]
    fn delete_edges_examples() {
        let net = fixture();
        assert_eq!(delete_edges(&net, &BTreeSet::new()).unwrap(), net);
        let all: BTreeSet<_> = net.edge_ids().collect();
        let bare = delete_edges(&net, &all).unwrap();
        assert_eq!(bare.edge_count(), 0);
        assert_eq!(bare.node_count(), net.node_count());
        for &t in bare.destinations() {
            assert_eq!(min_cut(&bare, bare.source(), t).unwrap(), 0);
        }
        let bad: BTreeSet<_> = [EdgeId(99)].into();
        assert!(matches!(delete_edges(&net, &bad), Err(TopologyError::UnknownEdge(_))));
    }

    #[test]
    fn min_cut_errors_and_disconnection() {
        let net = Network::builder()
            .source("v0")
            .node("x")
            .destination("t")
            .edge("e", "v0", "x")
            .build()
            .unwrap();
        let t = net.node_by_name("t").unwrap();
        assert_eq!(min_cut(&net, net.source(), t).unwrap(), 0);
        assert!(matches!(
            min_cut(&net, t, t),
            Err(TopologyError::SameEndpoints(_))
        ));
    }

    #[test]
    fn adversary_set_enumeration() {
        let net = fixture();
        let zero = adversary_sets(&net, &AdversarySpec::NodeBased { z: 0 }).unwrap();
        assert_eq!(zero, vec![AttackSet::empty()]);

        let one = adversary_sets(&net, &AdversarySpec::NodeBased { z: 1 }).unwrap();
        let listed: Vec<Vec<String>> = one.iter().map(|s| names(&net, &s.edges)).collect();
        assert_eq!(
            listed,
            vec![
                vec![],
                vec!["e4".to_string(), "e5".to_string()],
                vec!["e6".to_string()],
                vec!["e7".to_string()],
            ]
        );

        let general = AdversarySpec::General {
            sets: vec![[EdgeId(0)].into(), [EdgeId(1), EdgeId(2)].into()],
        };
        let sets = adversary_sets(&net, &general).unwrap();
        assert_eq!(sets.len(), 2);
        assert_eq!(sets[1].edges, [EdgeId(1), EdgeId(2)].into());

        let bad = AdversarySpec::General {
            sets: vec![[EdgeId(42)].into()],
        };
        assert!(adversary_sets(&net, &bad).is_err());

        // clamped: 3 internal nodes -> 2^3 subsets
        let clamp = adversary_sets(&net, &AdversarySpec::NodeBased { z: 10 }).unwrap();
        assert_eq!(clamp.len(), 8);
    }

    #[test]
    fn residual_rate_examples() {
        let net = fixture();
        assert_eq!(residual_rate(&net, &AdversarySpec::NodeBased { z: 1 }).unwrap(), 2);
        assert_eq!(residual_rate(&net, &AdversarySpec::NodeBased { z: 0 }).unwrap(), 3);
        let src_edges: BTreeSet<_> = net.out_edges(net.source()).into_iter().collect();
        let spec = AdversarySpec::General {
            sets: vec![src_edges],
        };
        assert_eq!(residual_rate(&net, &spec).unwrap(), 0);
    }

    #[test]
    fn expand_capacities_examples() {
        let (two, spec) = fixtures::unequal_capacity();
        let (expanded, new_spec) = expand_capacities(&two, &spec).unwrap();
        let edge_names: Vec<_> = expanded.edges().iter().map(|e| e.name.as_str()).collect();
        assert_eq!(edge_names, ["e1", "e2'", "e2''"]);
        let AdversarySpec::General { sets } = new_spec else {
            panic!("expected general spec");
        };
        let listed: Vec<Vec<String>> = sets.iter().map(|s| names(&expanded, s)).collect();
        assert_eq!(listed, vec![vec!["e1".to_string()], vec!["e2'".into(), "e2''".into()]]);

        let net = fixture();
        let (same, spec) = expand_capacities(&net, &AdversarySpec::NodeBased { z: 1 }).unwrap();
        assert_eq!(same, net);
        let originals: Vec<_> = adversary_sets(&net, &AdversarySpec::NodeBased { z: 1 })
            .unwrap()
            .into_iter()
            .map(|s| s.edges)
            .collect();
        assert_eq!(spec, AdversarySpec::General { sets: originals });

        let triple = Network::builder()
            .source("v0")
            .destination("t")
            .edge_with_capacity("e", "v0", "t", 3)
            .build()
            .unwrap();
        let (unit, _) = expand_capacities(&triple, &AdversarySpec::NodeBased { z: 0 }).unwrap();
        assert_eq!(unit.edge_count(), 3);
        let t = unit.node_by_name("t").unwrap();
        assert_eq!(min_cut(&unit, unit.source(), t).unwrap(), 3);
    }

    #[test]
    fn covers_cut_detects_source_destination_separation() {
        let net = fixture();
        let into_t: BTreeSet<_> = net.in_edges(net.node_by_name("t").unwrap()).into_iter().collect();
        assert!(covers_cut(&net, &into_t).is_some());
        let partial: BTreeSet<_> = into_t.iter().take(2).copied().collect();
        assert!(covers_cut(&net, &partial).is_none());
    }

    #[test]
    fn degrees() {
        let net = fixture();
        assert_eq!(net.max_degree(), 3);
        assert_eq!(net.max_in_degree(), 3);
    }

    fn arb_dag() -> impl Strategy<Value = Network> {
        (3usize..8, prop::collection::vec((0usize..8, 0usize..8, 1u64..4), 1..16)).prop_map(
            |(n, raw)| {
                let mut b = Network::builder().source("n0");
                for i in 1..n - 1 {
                    b = b.node(&format!("n{i}"));
                }
                b = b.destination(&format!("n{}", n - 1));
                for (k, (x, y, c)) in raw.into_iter().enumerate() {
                    let (x, y) = (x % n, y % n);
                    if x < y {
                        b = b.edge_with_capacity(&format!("e{k}"), &format!("n{x}"), &format!("n{y}"), c);
                    }
                }
                b.build().unwrap()
            },
        )
    }

    proptest! {
        #[test]
        fn deleting_edges_never_raises_cut(net in arb_dag(), mask in any::<u16>()) {
            let t = net.destinations()[0];
            let full = min_cut(&net, net.source(), t).unwrap();
            let removed: BTreeSet<_> = net.edge_ids().filter(|e| mask >> (e.0 % 16) & 1 == 1).collect();
            prop_assert!(min_cut_excluding(&net, net.source(), t, &removed).unwrap() <= full);
        }

        #[test]
        fn node_based_set_count(net in arb_dag(), z in 0usize..4) {
            let k = net.internal_nodes().len();
            let z = z.min(k);
            let expected: usize = (0..=z).map(|j| binomial(k, j)).sum();
            let sets = adversary_sets(&net, &AdversarySpec::NodeBased { z }).unwrap();
            prop_assert_eq!(sets.len(), expected);
            let r = residual_rate(&net, &AdversarySpec::NodeBased { z }).unwrap();
            prop_assert!(r <= destination_min_cut(&net, &BTreeSet::new()).unwrap());
        }
    }

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }
}

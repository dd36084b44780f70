//! Edmonds-Karp max-flow over the network's edges, with parallel edges kept
//! as independent arcs.

use std::collections::{BTreeSet, VecDeque};

use super::{EdgeId, Network, NodeId};

/// Result of a max-flow computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flow {
    pub value: u64,
    /// Nodes reachable from the source in the final residual graph.
    pub source_side: Vec<bool>,
    /// Edges leaving `source_side`; their capacities sum to `value`.
    pub cut: Vec<EdgeId>,
}

struct Arc {
    to: usize,
    residual: u64,
}

pub(crate) fn max_flow(net: &Network, s: NodeId, t: NodeId, excluded: &BTreeSet<EdgeId>) -> Flow {
    let n = net.node_count();
    let mut arcs: Vec<Arc> = Vec::new();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (id, edge) in net.edges_with_ids() {
        if excluded.contains(&id) {
            continue;
        }
        adj[edge.tail.0].push(arcs.len());
        arcs.push(Arc {
            to: edge.head.0,
            residual: edge.capacity,
        });
        adj[edge.head.0].push(arcs.len());
        arcs.push(Arc {
            to: edge.tail.0,
            residual: 0,
        });
    }

    let mut value = 0u64;
    loop {
        let mut parent: Vec<Option<usize>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[s.0] = true;
        let mut queue = VecDeque::from([s.0]);
        while let Some(u) = queue.pop_front() {
            if u == t.0 {
                break;
            }
            for &a in &adj[u] {
                let v = arcs[a].to;
                if !seen[v] && arcs[a].residual > 0 {
                    seen[v] = true;
                    parent[v] = Some(a);
                    queue.push_back(v);
                }
            }
        }
        if !seen[t.0] {
            let cut = net
                .edges_with_ids()
                .filter(|(id, e)| !excluded.contains(id) && seen[e.tail.0] && !seen[e.head.0])
                .map(|(id, _)| id)
                .collect();
            return Flow {
                value,
                source_side: seen,
                cut,
            };
        }
        let mut bottleneck = u64::MAX;
        let mut v = t.0;
        while let Some(a) = parent[v] {
            bottleneck = bottleneck.min(arcs[a].residual);
            v = arcs[a ^ 1].to;
        }
        let mut v = t.0;
        while let Some(a) = parent[v] {
            arcs[a].residual -= bottleneck;
            arcs[a ^ 1].residual += bottleneck;
            v = arcs[a ^ 1].to;
        }
        value += bottleneck;
    }
}

#![allow(dead_code)]

use std::collections::BTreeSet;

use advnet::topology::{EdgeId, Network, NodeId};
use rand::Rng;

/// A random DAG on `nodes` vertices: v0 is the source, the last one or two
/// are destinations, every edge points from a lower to a higher index.
pub fn random_dag<R: Rng>(rng: &mut R, nodes: usize) -> Network {
    let dests = rng.gen_range(1..=2.min(nodes - 1));
    let mut b = Network::builder().source("v0");
    for i in 1..nodes {
        let name = format!("v{i}");
        b = if i >= nodes - dests { b.destination(&name) } else { b.node(&name) };
    }
    let mut k = 0;
    for i in 0..nodes {
        for j in i + 1..nodes {
            // Parallel edges now and then, varied capacities.
            for _ in 0..rng.gen_range(0..=2u32).saturating_sub(u32::from(rng.gen_bool(0.4))) {
                k += 1;
                let cap = rng.gen_range(1..=3);
                b = b.edge_with_capacity(&format!("e{k}"), &format!("v{i}"), &format!("v{j}"), cap);
            }
        }
    }
    b.build().expect("random DAG is valid")
}

/// min over vertex sets S with s in S, t not in S, of the capacity leaving S,
/// ignoring `removed`.
pub fn brute_force_cut(net: &Network, s: NodeId, t: NodeId, removed: &BTreeSet<EdgeId>) -> u64 {
    let n = net.node_count();
    assert!(n <= 20);
    (0u32..1 << n)
        .filter(|mask| mask >> s.0 & 1 == 1 && mask >> t.0 & 1 == 0)
        .map(|mask| {
            net.edges_with_ids()
                .filter(|(id, e)| !removed.contains(id) && mask >> e.tail.0 & 1 == 1 && mask >> e.head.0 & 1 == 0)
                .map(|(_, e)| e.capacity)
                .sum()
        })
        .min()
        .unwrap()
}

/// Brute-force counterpart of the destination min-cut.
pub fn brute_force_destination_cut(net: &Network, removed: &BTreeSet<EdgeId>) -> u64 {
    net.destinations()
        .iter()
        .map(|&t| brute_force_cut(net, net.source(), t, removed))
        .min()
        .unwrap()
}

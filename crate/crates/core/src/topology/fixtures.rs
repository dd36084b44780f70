//! Canonical small networks.

use super::{AdversarySpec, Network};

/// The five-node example network: source v0, relays a, b, c and sink t.
///
/// Edges in id order: e1 v0->a, e2 v0->b, e3 v0->c, e4 a->t, e5 a->c,
/// e6 b->t, e7 c->t. The v0-t min-cut is 3, removing the outgoing edges of
/// any one relay leaves 2, relays have out-degree at most 2 and c hears
/// from a.
pub fn illustrative() -> Network {
    Network::builder()
        .source("v0")
        .node("a")
        .node("b")
        .node("c")
        .destination("t")
        .edge("e1", "v0", "a")
        .edge("e2", "v0", "b")
        .edge("e3", "v0", "c")
        .edge("e4", "a", "t")
        .edge("e5", "a", "c")
        .edge("e6", "b", "t")
        .edge("e7", "c", "t")
        .build()
        .expect("fixture is valid")
}

/// Text form of [`illustrative`] in the network file format.
pub const ILLUSTRATIVE_TEXT: &str = "\
# five-node example network
node v0 source
node a
node b
node c
node t dest
edge e1 v0 a
edge e2 v0 b
edge e3 v0 c
edge e4 a t
edge e5 a c
edge e6 b t
edge e7 c t
adversary node-based z=1
";

/// Two parallel links from source to sink with capacities 1 and 2, each
/// one a possible adversary target.
pub fn unequal_capacity() -> (Network, AdversarySpec) {
    let net = Network::builder()
        .source("v0")
        .destination("t")
        .edge_with_capacity("e1", "v0", "t", 1)
        .edge_with_capacity("e2", "v0", "t", 2)
        .build()
        .expect("fixture is valid");
    let sets = net
        .edge_ids()
        .map(|e| [e].into_iter().collect())
        .collect();
    (net, AdversarySpec::General { sets })
}

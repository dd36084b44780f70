mod common;

use std::collections::BTreeSet;

use advnet::harness::erasure_bound;
use advnet::topology::{
    adversary_sets, destination_min_cut, expand_capacities, min_cut_excluding, parse_network, residual_rate,
    AdversarySpec, EdgeId, NetworkFile,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn max_flow_matches_cut_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for _ in 0..200 {
        let nodes = rng.gen_range(2..=10);
        let net = common::random_dag(&mut rng, nodes);
        let removed: BTreeSet<EdgeId> = net.edge_ids().filter(|_| rng.gen_bool(0.2)).collect();
        for &t in net.destinations() {
            let flow = min_cut_excluding(&net, net.source(), t, &removed).unwrap();
            assert_eq!(flow, common::brute_force_cut(&net, net.source(), t, &removed));
        }
    }
}

#[test]
fn residual_rate_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..50 {
        let nodes = rng.gen_range(3..=9);
        let net = common::random_dag(&mut rng, nodes);
        let internal = net.internal_nodes().len();
        let z = rng.gen_range(0..=2.min(internal));
        let spec = AdversarySpec::NodeBased { z };
        let expected = adversary_sets(&net, &spec)
            .unwrap()
            .iter()
            .map(|s| common::brute_force_destination_cut(&net, &s.edges))
            .min()
            .unwrap();
        assert_eq!(residual_rate(&net, &spec).unwrap(), expected);
    }
}

#[test]
fn erasure_bound_at_zero_error_is_the_cut() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for _ in 0..100 {
        let nodes = rng.gen_range(2..=10);
        let net = common::random_dag(&mut rng, nodes);
        let attack: BTreeSet<EdgeId> = net.edge_ids().filter(|_| rng.gen_bool(0.3)).collect();
        let bits = rng.gen_range(1.0..1e6);
        let cut = common::brute_force_destination_cut(&net, &attack) as f64;
        assert_eq!(erasure_bound(&net, &attack, bits, 0.0).unwrap(), cut);
        // A positive error rate only loosens the bound.
        assert!(erasure_bound(&net, &attack, bits, 0.2).unwrap() >= cut);
    }
}

#[test]
fn capacity_expansion_preserves_cuts() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for _ in 0..60 {
        let nodes = rng.gen_range(3..=8);
        let net = common::random_dag(&mut rng, nodes);
        let internal = net.internal_nodes().len();
        let spec = AdversarySpec::NodeBased {
            z: rng.gen_range(0..=1.min(internal)),
        };
        let (wide, wide_spec) = expand_capacities(&net, &spec).unwrap();
        let total: u64 = net.edges().iter().map(|e| e.capacity).sum();
        assert_eq!(wide.edge_count() as u64, total);
        assert!(wide.edges().iter().all(|e| e.capacity == 1));
        assert_eq!(destination_min_cut(&wide, &BTreeSet::new()).unwrap(), destination_min_cut(&net, &BTreeSet::new()).unwrap());
        assert_eq!(residual_rate(&wide, &wide_spec).unwrap(), residual_rate(&net, &spec).unwrap());

        // Each expanded set removes exactly the copies of the original set.
        let orig = adversary_sets(&net, &spec).unwrap();
        let AdversarySpec::General { sets } = &wide_spec else { panic!("expansion yields explicit sets") };
        assert_eq!(orig.len(), sets.len());
        for (a, b) in orig.iter().zip(sets) {
            let cap: u64 = a.edges.iter().map(|&e| net.edge(e).capacity).sum();
            assert_eq!(b.len() as u64, cap);
        }
    }
}

#[test]
fn network_text_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for _ in 0..30 {
        let nodes = rng.gen_range(2..=10);
        let file = NetworkFile {
            network: common::random_dag(&mut rng, nodes),
            adversary: Some(AdversarySpec::NodeBased { z: 1 }),
        };
        let back = parse_network(&file.to_text()).unwrap();
        assert_eq!(back.to_text(), file.to_text());
        assert_eq!(back.network.edges(), file.network.edges());
    }
}

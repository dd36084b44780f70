//! One block through the network: the source encodes, every other node
//! verifies what it hears and forwards random combinations of the valid
//! packets, destinations decode.

use std::collections::BTreeSet;

use rand::Rng;

use super::decode::{decode, DecodeFailure};
use super::encode::{combine, originals};
use super::verify::{accept_unverified, verify_packet, Verdict};
use super::{CodeError, CodeParams, MessageMatrix, Packet, Secrets};
use crate::galois::FieldElement;
use crate::topology::{EdgeId, Network, NodeId};

/// Mixing coefficients for every edge. A source edge carries r coefficients
/// over the original packets; any other edge carries one coefficient per
/// in-edge of its tail, in edge-id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientTable {
    rows: Vec<Vec<FieldElement>>,
}

impl CoefficientTable {
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, net: &Network, params: &CodeParams) -> Self {
        let rows = net
            .edge_ids()
            .map(|e| {
                let k = Self::arity(net, params, e);
                (0..k).map(|_| params.field.random(rng)).collect()
            })
            .collect();
        CoefficientTable { rows }
    }

    pub fn from_rows(net: &Network, params: &CodeParams, rows: Vec<Vec<FieldElement>>) -> Result<Self, CodeError> {
        if rows.len() != net.edge_count() {
            return Err(CodeError::CoefficientCount {
                expected: net.edge_count(),
                got: rows.len(),
            });
        }
        for (e, row) in net.edge_ids().zip(&rows) {
            let expected = Self::arity(net, params, e);
            if row.len() != expected {
                return Err(CodeError::CoefficientCount {
                    expected,
                    got: row.len(),
                });
            }
        }
        Ok(CoefficientTable { rows })
    }

    /// Number of coefficients edge `e` needs.
    pub fn arity(net: &Network, params: &CodeParams, e: EdgeId) -> usize {
        let tail = net.edge(e).tail;
        if tail == net.source() {
            params.r
        } else {
            net.in_edges(tail).len()
        }
    }

    pub fn get(&self, e: EdgeId) -> &[FieldElement] {
        &self.rows[e.0]
    }
}

/// Hook for controlled edges. `sent` holds what has been transmitted so far,
/// indexed by edge id; edges not yet reached are `None`.
pub trait Tamper {
    fn tamper(&mut self, edge: EdgeId, honest: &Packet, sent: &[Option<Packet>]) -> Packet;
}

/// Forwards the honest packet.
pub struct Passthrough;

impl Tamper for Passthrough {
    fn tamper(&mut self, _edge: EdgeId, honest: &Packet, _sent: &[Option<Packet>]) -> Packet {
        honest.clone()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeRecord {
    /// What the tail's code produced from its actual inputs.
    pub honest: Packet,
    /// What went on the wire.
    pub sent: Packet,
    /// The head's verdict on `sent`.
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub edges: Vec<EdgeRecord>,
    pub decoded: Vec<(NodeId, Result<Vec<FieldElement>, DecodeFailure>)>,
}

impl Transcript {
    pub fn edge(&self, e: EdgeId) -> &EdgeRecord {
        &self.edges[e.0]
    }
}

/// Propagates one block. With `secrets` absent every node uses
/// [`accept_unverified`]; `params` must then have no hash header.
pub fn relay(
    net: &Network,
    params: &CodeParams,
    x: &MessageMatrix,
    secrets: Option<&Secrets>,
    table: &CoefficientTable,
    controlled: &BTreeSet<EdgeId>,
    tamper: &mut dyn Tamper,
) -> Result<Transcript, CodeError> {
    let orig = originals(x, secrets, params)?;
    let orig_refs: Vec<&Packet> = orig.iter().collect();
    let mut sent: Vec<Option<Packet>> = vec![None; net.edge_count()];
    let mut honest: Vec<Option<Packet>> = vec![None; net.edge_count()];
    let mut verdicts: Vec<Verdict> = vec![Verdict::Invalid; net.edge_count()];
    let mut decoded = Vec::new();

    for &u in net.topo_order() {
        let valid: Vec<(usize, &Packet)> = if u == net.source() {
            Vec::new()
        } else {
            let check = |pkt: &Packet| match secrets {
                Some(s) => match params.slot(u) {
                    Some(slot) => verify_packet(pkt, s.get(slot), slot, params),
                    None => Verdict::Invalid,
                },
                None => accept_unverified(pkt, params),
            };
            let mut valid = Vec::new();
            for (k, e) in net.in_edges(u).into_iter().enumerate() {
                let pkt = sent[e.0].as_ref().expect("in-edges precede in topological order");
                let v = check(pkt);
                verdicts[e.0] = v;
                if v.is_valid() {
                    valid.push((k, pkt));
                }
            }
            valid
        };

        let mut outgoing = Vec::new();
        for e in net.out_edges(u) {
            let coeffs = table.get(e);
            let pkt = if u == net.source() {
                combine(&orig_refs, coeffs, params)?
            } else if valid.is_empty() {
                Packet::null(params)
            } else {
                let pkts: Vec<&Packet> = valid.iter().map(|&(_, p)| p).collect();
                let cs: Vec<FieldElement> = valid.iter().map(|&(k, _)| coeffs[k]).collect();
                combine(&pkts, &cs, params)?
            };
            outgoing.push((e, pkt));
        }

        if net.is_destination(u) {
            let pkts: Vec<&Packet> = valid.iter().map(|&(_, p)| p).collect();
            decoded.push((u, decode(&pkts, params)));
        }

        for (e, pkt) in outgoing {
            let out = if controlled.contains(&e) {
                tamper.tamper(e, &pkt, &sent)
            } else {
                pkt.clone()
            };
            honest[e.0] = Some(pkt);
            sent[e.0] = Some(out);
        }
    }

    let edges = honest
        .into_iter()
        .zip(sent)
        .zip(verdicts)
        .map(|((h, s), verdict)| EdgeRecord {
            honest: h.expect("every edge has a tail in the order"),
            sent: s.expect("every edge has a tail in the order"),
            verdict,
        })
        .collect();
    Ok(Transcript { edges, decoded })
}

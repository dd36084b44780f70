//! The shared-secret network code.
//!
//! Every non-source node v shares r + r^2 uniform field symbols with the
//! source: s_{v,1..r} and d_{v,i,j}. The source turns an n*r symbol message
//! into r original packets [U_i | e_i] and appends one hash header h built
//! from r x r blocks, one per non-source node in sorted id order:
//!
//! ```text
//! h_{v,i,j} = d_{v,i,j} - sum_{l=1}^{n+r} x_{il} s_{v,j}^{p^l}
//! ```
//!
//! A node u accepts a packet W with coefficient header c when
//!
//! ```text
//! Q1 = sum_l w_l (sum_{i'} 1[c_{i'} != 0] s_{u,i'})^{p^l}
//! Q2 = sum_i c_i sum_{i'} 1[c_{i'} != 0] (d_{u,i,i'} - h_{u,i,i'})
//! ```
//!
//! agree. Q1 - Q2 is a linearized polynomial of degree at most p^n in the
//! secrets whenever the payload deviates from the claimed combination, so a
//! forgery survives with probability at most p^n / p^m.

mod decode;
mod encode;
pub mod relay;
mod verify;

use std::collections::BTreeSet;

use rand::Rng;
use thiserror::Error;

use crate::galois::{Field, FieldElement, FieldError};
use crate::topology::{self, AdversarySpec, Network, NodeId, TopologyError};

pub use decode::{decode, DecodeFailure};
pub use encode::{
    combine, compute_hash_block, compute_hash_block_entrywise, emit_linear_combination,
    source_packets,
};
pub use verify::{accept_unverified, check_sums, verify_packet, Verdict};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("no rate achievable: residual min-cut is 0")]
    NoRate,
    #[error("payload length n and rate r must both be at least 1")]
    EmptyDimensions,
    #[error("message has {got} symbols, expected n*r = {expected}")]
    MessageLength { expected: usize, got: usize },
    #[error("packets have mismatched lengths")]
    LengthMismatch,
    #[error("{expected} coefficients required, got {got}")]
    CoefficientCount { expected: usize, got: usize },
    #[error("hash headers are enabled but no secrets were supplied")]
    MissingSecrets,
    #[error("node {0} has no hash-header slot")]
    NoSlot(String),
    #[error("malformed packet bytes: {0}")]
    Bytes(String),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Code dimensions and hash-header layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeParams {
    pub field: Field,
    /// Payload symbols per packet.
    pub n: usize,
    /// Number of original packets.
    pub r: usize,
    /// Non-source nodes in header order.
    pub node_order: Vec<NodeId>,
    /// Hash-header length: node_order.len() * r^2, or 0 for the secret-free code.
    pub delta: usize,
}

impl CodeParams {
    pub fn new(field: Field, n: usize, r: usize, node_order: Vec<NodeId>) -> Result<Self, CodeError> {
        if n == 0 || r == 0 {
            return Err(CodeError::EmptyDimensions);
        }
        if field.degree() as usize <= n {
            log::warn!(
                "m = {} <= n = {}: the forgery bound p^n/p^m is vacuous",
                field.degree(),
                n
            );
        }
        let delta = node_order.len() * r * r;
        Ok(CodeParams {
            field,
            n,
            r,
            node_order,
            delta,
        })
    }

    /// The same dimensions with no shared secrets and no hash header.
    pub fn without_secrets(&self) -> Self {
        CodeParams {
            delta: 0,
            ..self.clone()
        }
    }

    pub fn secrets_enabled(&self) -> bool {
        self.delta > 0
    }

    /// n + r: payload plus coefficient header.
    pub fn width(&self) -> usize {
        self.n + self.r
    }

    /// Field symbols per packet, n + r + delta.
    pub fn packet_len(&self) -> usize {
        self.n + self.r + self.delta
    }

    /// Position of `v` in the header layout.
    pub fn slot(&self, v: NodeId) -> Option<usize> {
        self.node_order.iter().position(|&u| u == v)
    }

    /// Range of h occupied by the block at `slot`.
    pub fn block_range(&self, slot: usize) -> std::ops::Range<usize> {
        let size = self.r * self.r;
        slot * size..(slot + 1) * size
    }
}

/// Builds code parameters over GF(2^m) for a network and adversary spec.
pub fn derive_params(
    net: &Network,
    spec: &AdversarySpec,
    n: usize,
    m: u32,
) -> Result<CodeParams, CodeError> {
    let field = Field::binary(m)?;
    derive_params_in(net, spec, n, field)
}

/// As [`derive_params`] over an arbitrary field.
pub fn derive_params_in(
    net: &Network,
    spec: &AdversarySpec,
    n: usize,
    field: Field,
) -> Result<CodeParams, CodeError> {
    let r = topology::residual_rate(net, spec)?;
    if r == 0 {
        return Err(CodeError::NoRate);
    }
    CodeParams::new(field, n, r as usize, net.non_source_nodes())
}

/// Secret shared between the source and one node: r symbols s_j and an
/// r x r matrix d (row-major).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecretBundle {
    pub s: Vec<FieldElement>,
    pub d: Vec<FieldElement>,
}

impl SecretBundle {
    pub fn random<R: Rng + ?Sized>(rng: &mut R, field: &Field, r: usize) -> Self {
        let s = (0..r).map(|_| field.random(rng)).collect();
        let d = (0..r * r).map(|_| field.random(rng)).collect();
        SecretBundle { s, d }
    }

    pub fn r(&self) -> usize {
        self.s.len()
    }

    pub fn d_at(&self, i: usize, j: usize) -> FieldElement {
        self.d[i * self.r() + j]
    }

    /// Number of field symbols, r^2 + r.
    pub fn dimension(&self) -> usize {
        self.s.len() + self.d.len()
    }
}

/// All bundles, aligned with `CodeParams::node_order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Secrets {
    pub bundles: Vec<SecretBundle>,
}

impl Secrets {
    pub fn get(&self, slot: usize) -> &SecretBundle {
        &self.bundles[slot]
    }

    /// Copies of the bundles for the given nodes only.
    pub fn restricted_to(&self, params: &CodeParams, nodes: &BTreeSet<NodeId>) -> Vec<(NodeId, SecretBundle)> {
        params
            .node_order
            .iter()
            .zip(&self.bundles)
            .filter(|(v, _)| nodes.contains(v))
            .map(|(&v, b)| (v, b.clone()))
            .collect()
    }
}

/// Independent uniform bundles for every non-source node, drawn in header order.
pub fn sample_secrets<R: Rng + ?Sized>(rng: &mut R, params: &CodeParams) -> Secrets {
    let bundles = params
        .node_order
        .iter()
        .map(|_| SecretBundle::random(rng, &params.field, params.r))
        .collect();
    Secrets { bundles }
}

/// X = [U | I], r x (n + r).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MessageMatrix {
    n: usize,
    r: usize,
    rows: Vec<Vec<FieldElement>>,
}

impl MessageMatrix {
    /// Lays out an n*r symbol message row-major into U and appends I.
    pub fn from_message(message: &[FieldElement], n: usize, r: usize) -> Result<Self, CodeError> {
        if message.len() != n * r {
            return Err(CodeError::MessageLength {
                expected: n * r,
                got: message.len(),
            });
        }
        let rows = message
            .chunks(n)
            .enumerate()
            .map(|(i, chunk)| {
                let mut row = chunk.to_vec();
                row.extend((0..r).map(|j| {
                    if i == j {
                        FieldElement::ONE
                    } else {
                        FieldElement::ZERO
                    }
                }));
                row
            })
            .collect();
        Ok(MessageMatrix { n, r, rows })
    }

    /// Arbitrary r x (n + r) matrix, for exercising the hash directly.
    pub fn from_rows(rows: Vec<Vec<FieldElement>>, n: usize) -> Result<Self, CodeError> {
        let r = rows.len();
        if r == 0 || rows.iter().any(|row| row.len() != n + r) {
            return Err(CodeError::LengthMismatch);
        }
        Ok(MessageMatrix { n, r, rows })
    }

    pub fn rows(&self) -> &[Vec<FieldElement>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.rows[i]
    }

    /// The information part U flattened row-major.
    pub fn message(&self) -> Vec<FieldElement> {
        self.rows
            .iter()
            .flat_map(|row| row[..self.n].iter().copied())
            .collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }
}

pub fn random_message<R: Rng + ?Sized>(rng: &mut R, params: &CodeParams) -> Vec<FieldElement> {
    (0..params.n * params.r)
        .map(|_| params.field.random(rng))
        .collect()
}

/// A packet (W, h): n payload symbols, r coefficient-header symbols and the
/// hash header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Packet {
    pub w: Vec<FieldElement>,
    pub h: Vec<FieldElement>,
}

impl Packet {
    /// The all-zero packet sent by nodes with nothing valid to forward.
    pub fn null(params: &CodeParams) -> Self {
        Packet {
            w: vec![FieldElement::ZERO; params.width()],
            h: vec![FieldElement::ZERO; params.delta],
        }
    }

    pub fn is_null(&self) -> bool {
        self.w.iter().chain(&self.h).all(|x| x.is_zero())
    }

    pub fn payload(&self, n: usize) -> &[FieldElement] {
        &self.w[..n]
    }

    pub fn header(&self, n: usize) -> &[FieldElement] {
        &self.w[n..]
    }

    /// w_1..w_{n+r} then h, each element little-endian.
    pub fn to_bytes(&self, field: &Field) -> Vec<u8> {
        let mut out = Vec::with_capacity((self.w.len() + self.h.len()) * field.byte_len());
        field.write_elements(&self.w, &mut out);
        field.write_elements(&self.h, &mut out);
        out
    }

    pub fn from_bytes(bytes: &[u8], params: &CodeParams) -> Result<Self, CodeError> {
        let elems = params
            .field
            .read_elements(bytes)
            .map_err(|e| CodeError::Bytes(e.to_string()))?;
        if elems.len() != params.packet_len() {
            return Err(CodeError::Bytes(format!(
                "expected {} symbols, got {}",
                params.packet_len(),
                elems.len()
            )));
        }
        let (w, h) = elems.split_at(params.width());
        Ok(Packet {
            w: w.to_vec(),
            h: h.to_vec(),
        })
    }
}

//! Omniscient adversaries: strategies applied on seized edges, and the
//! symmetrization construction that defeats every secret-free code.
//!
//! An adversary sees the message, the code (including the pre-drawn mixing
//! coefficients) and the link transmissions up to its own step. It never
//! sees the secrets of honest nodes: [`AttackContext`] has no path to them.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

use crate::galois::FieldElement;
use crate::secretcode::relay::{relay, CoefficientTable, Passthrough, Tamper, Transcript};
use crate::secretcode::{CodeError, CodeParams, MessageMatrix, Packet, SecretBundle, Secrets, Verdict};
use crate::topology::{covers_cut, AttackSet, EdgeId, Network, NodeId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AdversaryError {
    #[error("symmetrize needs the code's coefficient table")]
    NoCoefficientTable,
    #[error("A1 ∪ A2 = {0} does not cut the source off from any destination")]
    NotCovering(String),
    #[error("unknown strategy '{0}'")]
    UnknownStrategy(String),
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// Which part of the packet a header-preserving forgery rewrites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TamperTarget {
    /// One payload symbol.
    Payload,
    /// One entry of the next hop's hash block.
    OwnHash,
    /// One entry of a hash block belonging to neither endpoint.
    ForeignHash,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Strategy {
    Silent,
    EraseZeros,
    RandomNoise,
    ForgeValidHeader(TamperTarget),
    /// Send what the code would carry under `alt_message`. `None` draws the
    /// alternative from the adversary's randomness.
    Symmetrize { alt_message: Option<Vec<FieldElement>> },
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Silent => "silent",
            Strategy::EraseZeros => "erase",
            Strategy::RandomNoise => "random",
            Strategy::ForgeValidHeader(TamperTarget::Payload) => "forge-payload",
            Strategy::ForgeValidHeader(TamperTarget::OwnHash) => "forge-own-hash",
            Strategy::ForgeValidHeader(TamperTarget::ForeignHash) => "forge-foreign-hash",
            Strategy::Symmetrize { .. } => "symmetrize",
        }
    }

    /// Every strategy the CLI accepts, in its listing order.
    pub fn shipped() -> Vec<Strategy> {
        vec![
            Strategy::Silent,
            Strategy::EraseZeros,
            Strategy::RandomNoise,
            Strategy::ForgeValidHeader(TamperTarget::Payload),
            Strategy::ForgeValidHeader(TamperTarget::OwnHash),
            Strategy::ForgeValidHeader(TamperTarget::ForeignHash),
            Strategy::Symmetrize { alt_message: None },
        ]
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = AdversaryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Strategy::shipped()
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| AdversaryError::UnknownStrategy(s.to_string()))
    }
}

/// Everything an adversary may know.
pub struct AttackContext<'a> {
    pub net: &'a Network,
    pub params: &'a CodeParams,
    pub message: &'a MessageMatrix,
    pub table: Option<&'a CoefficientTable>,
    pub attack: &'a AttackSet,
    /// Bundles of the seized nodes only.
    pub own_secrets: Vec<(NodeId, SecretBundle)>,
}

impl<'a> AttackContext<'a> {
    /// Builds a context, keeping only the controlled nodes' bundles.
    pub fn new(
        net: &'a Network,
        params: &'a CodeParams,
        message: &'a MessageMatrix,
        table: Option<&'a CoefficientTable>,
        attack: &'a AttackSet,
        secrets: Option<&Secrets>,
    ) -> Self {
        let own: BTreeSet<NodeId> = attack.nodes.iter().copied().collect();
        let own_secrets = secrets.map_or_else(Vec::new, |s| s.restricted_to(params, &own));
        AttackContext {
            net,
            params,
            message,
            table,
            attack,
            own_secrets,
        }
    }
}

/// Payload-and-header vectors on every edge of an attack-free, secret-free
/// run of the same code under `alt`.
fn induced_payloads(ctx: &AttackContext<'_>, alt: &MessageMatrix) -> Result<Vec<Vec<FieldElement>>, AdversaryError> {
    let table = ctx.table.ok_or(AdversaryError::NoCoefficientTable)?;
    let bare = ctx.params.without_secrets();
    let t = relay(ctx.net, &bare, alt, None, table, &BTreeSet::new(), &mut Passthrough)?;
    Ok(t.edges.into_iter().map(|r| r.sent.w).collect())
}

/// A strategy bound to its context and randomness; plugs into
/// [`relay`] as the tamper hook.
pub struct Adversary<'a, R: Rng> {
    ctx: AttackContext<'a>,
    strategy: Strategy,
    rng: R,
    induced: Option<Vec<Vec<FieldElement>>>,
}

impl<'a, R: Rng> Adversary<'a, R> {
    pub fn new(ctx: AttackContext<'a>, strategy: Strategy, mut rng: R) -> Result<Self, AdversaryError> {
        let induced = match &strategy {
            Strategy::Symmetrize { alt_message } => {
                let p = ctx.params;
                let alt = match alt_message {
                    Some(m) => MessageMatrix::from_message(m, p.n, p.r)?,
                    None => {
                        let m: Vec<_> = (0..p.n * p.r).map(|_| p.field.random(&mut rng)).collect();
                        MessageMatrix::from_message(&m, p.n, p.r)?
                    }
                };
                Some(induced_payloads(&ctx, &alt)?)
            }
            _ => None,
        };
        Ok(Adversary {
            ctx,
            strategy,
            rng,
            induced,
        })
    }

    pub fn context(&self) -> &AttackContext<'a> {
        &self.ctx
    }

    /// The packet put on `edge` in place of `honest`.
    pub fn corrupt(&mut self, edge: EdgeId, honest: &Packet) -> Packet {
        let p = self.ctx.params;
        let f = &p.field;
        match &self.strategy {
            Strategy::Silent => honest.clone(),
            Strategy::EraseZeros => Packet::null(p),
            Strategy::RandomNoise => {
                let mut out = honest.clone();
                for w in out.w[..p.n].iter_mut() {
                    *w = f.random(&mut self.rng);
                }
                out
            }
            Strategy::ForgeValidHeader(target) => {
                let mut out = honest.clone();
                let slot = match target {
                    TamperTarget::Payload => {
                        let l = self.rng.gen_range(0..p.n);
                        out.w[l] = f.add(out.w[l], f.random_nonzero(&mut self.rng));
                        return out;
                    }
                    TamperTarget::OwnHash => p.slot(self.ctx.net.edge(edge).head),
                    TamperTarget::ForeignHash => {
                        let e = self.ctx.net.edge(edge);
                        let others: Vec<usize> = p
                            .node_order
                            .iter()
                            .enumerate()
                            .filter(|&(_, &v)| v != e.head && v != e.tail)
                            .map(|(i, _)| i)
                            .collect();
                        if others.is_empty() {
                            None
                        } else {
                            Some(others[self.rng.gen_range(0..others.len())])
                        }
                    }
                };
                if let (Some(slot), true) = (slot, p.secrets_enabled()) {
                    let range = p.block_range(slot);
                    let k = self.rng.gen_range(range);
                    out.h[k] = f.add(out.h[k], f.random_nonzero(&mut self.rng));
                }
                out
            }
            Strategy::Symmetrize { .. } => {
                let induced = self.induced.as_ref().expect("computed at construction");
                Packet {
                    w: induced[edge.0].clone(),
                    h: honest.h.clone(),
                }
            }
        }
    }
}

impl<R: Rng> Tamper for Adversary<'_, R> {
    fn tamper(&mut self, edge: EdgeId, honest: &Packet, _sent: &[Option<Packet>]) -> Packet {
        self.corrupt(edge, honest)
    }
}

/// What a destination side observes on the covered cut in one scenario.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observation {
    /// Cut edges in id order with the serialized packet and its verdict.
    pub edges: Vec<(EdgeId, Vec<u8>, Verdict)>,
    pub transcript: Transcript,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetrizeOutcome {
    pub destination: NodeId,
    pub cut: BTreeSet<EdgeId>,
    /// Edges overwritten in each scenario: A1, then A2 minus A1.
    pub overwritten: (BTreeSet<EdgeId>, BTreeSet<EdgeId>),
    /// w1 sent, A1 carries w2's packets.
    pub first: Observation,
    /// w2 sent, A2 minus A1 carries w1's packets.
    pub second: Observation,
}

impl SymmetrizeOutcome {
    /// Per cut edge: whether the two observations agree byte for byte and in
    /// verdict.
    pub fn per_edge(&self) -> Vec<(EdgeId, bool)> {
        self.first
            .edges
            .iter()
            .zip(&self.second.edges)
            .map(|(a, b)| (a.0, a.1 == b.1 && a.2 == b.2))
            .collect()
    }

    pub fn identical(&self) -> bool {
        self.first.edges == self.second.edges
    }

    /// Whether some overwritten packet was rejected in either scenario.
    pub fn forgery_detected(&self) -> bool {
        let rejected = |obs: &Observation, set: &BTreeSet<EdgeId>| {
            set.iter().any(|&e| obs.transcript.edge(e).verdict == Verdict::Invalid)
        };
        rejected(&self.first, &self.overwritten.0) || rejected(&self.second, &self.overwritten.1)
    }
}

/// Runs both symmetrization scenarios with a fixed coefficient table. With
/// `secrets` absent this is the secret-free code, where the two observations
/// coincide on the cut.
///
/// Target observation on the cut is w2's packets on A1 and w1's elsewhere.
/// Edges in both A1 and A2 already carry w2's packets when w2 is sent, so the
/// second scenario overwrites only A2 minus A1.
#[allow(clippy::too_many_arguments)]
pub fn symmetrize_transcripts(
    net: &Network,
    params: &CodeParams,
    table: &CoefficientTable,
    secrets: Option<&Secrets>,
    a1: &BTreeSet<EdgeId>,
    a2: &BTreeSet<EdgeId>,
    w1: &[FieldElement],
    w2: &[FieldElement],
) -> Result<SymmetrizeOutcome, AdversaryError> {
    let cut: BTreeSet<EdgeId> = a1.union(a2).copied().collect();
    let destination =
        covers_cut(net, &cut).ok_or_else(|| AdversaryError::NotCovering(net.edge_set_label(&cut)))?;
    let params = if secrets.is_some() {
        params.clone()
    } else {
        params.without_secrets()
    };
    let x1 = MessageMatrix::from_message(w1, params.n, params.r)?;
    let x2 = MessageMatrix::from_message(w2, params.n, params.r)?;

    let scenario = |sent: &MessageMatrix, alt: &[FieldElement], seized: &BTreeSet<EdgeId>| {
        let attack = AttackSet::from_edges(seized.clone());
        let ctx = AttackContext::new(net, &params, sent, Some(table), &attack, secrets);
        let strategy = Strategy::Symmetrize {
            alt_message: Some(alt.to_vec()),
        };
        // Symmetrize with an explicit alternative draws no randomness.
        let mut adv = Adversary::new(ctx, strategy, rand::rngs::mock::StepRng::new(0, 0))?;
        let transcript = relay(net, &params, sent, secrets, table, seized, &mut adv)?;
        let edges = cut
            .iter()
            .map(|&e| {
                let r = transcript.edge(e);
                (e, r.sent.to_bytes(&params.field), r.verdict)
            })
            .collect();
        Ok::<_, AdversaryError>(Observation { edges, transcript })
    };

    let a2_only: BTreeSet<EdgeId> = a2.difference(a1).copied().collect();
    let first = scenario(&x1, w2, a1)?;
    let second = scenario(&x2, w1, &a2_only)?;
    Ok(SymmetrizeOutcome {
        destination,
        cut,
        overwritten: (a1.clone(), a2_only),
        first,
        second,
    })
}

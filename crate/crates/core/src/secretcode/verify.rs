use super::{CodeError, CodeParams, Packet, SecretBundle};
use crate::galois::FieldElement;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Valid,
    Invalid,
}

impl Verdict {
    pub fn is_valid(self) -> bool {
        self == Verdict::Valid
    }
}

/// (Q1, Q2) for `pkt` checked against the bundle at header position `slot`.
pub fn check_sums(
    pkt: &Packet,
    bundle: &SecretBundle,
    slot: usize,
    params: &CodeParams,
) -> Result<(FieldElement, FieldElement), CodeError> {
    let (n, r) = (params.n, params.r);
    if pkt.w.len() != params.width() || pkt.h.len() != params.delta || bundle.r() != r {
        return Err(CodeError::LengthMismatch);
    }
    if slot >= params.node_order.len() {
        return Err(CodeError::NoSlot(slot.to_string()));
    }
    let f = &params.field;
    let header = pkt.header(n);
    let block = &pkt.h[params.block_range(slot)];

    let sigma = header
        .iter()
        .zip(&bundle.s)
        .filter(|(c, _)| !c.is_zero())
        .fold(f.zero(), |acc, (_, &s)| f.add(acc, s));
    let q1 = f.dot(&pkt.w, &f.frobenius_chain(sigma, params.width()));

    let mut q2 = f.zero();
    for (i, &ci) in header.iter().enumerate() {
        if ci.is_zero() {
            continue;
        }
        let mut inner = f.zero();
        for (j, &cj) in header.iter().enumerate() {
            if !cj.is_zero() {
                inner = f.add(inner, f.sub(bundle.d_at(i, j), block[i * r + j]));
            }
        }
        q2 = f.add(q2, f.mul(ci, inner));
    }
    Ok((q1, q2))
}

/// Valid iff Q1 = Q2. A zero coefficient header or a malformed packet is
/// Invalid.
pub fn verify_packet(pkt: &Packet, bundle: &SecretBundle, slot: usize, params: &CodeParams) -> Verdict {
    if pkt.w.len() != params.width() || pkt.header(params.n).iter().all(|c| c.is_zero()) {
        return Verdict::Invalid;
    }
    match check_sums(pkt, bundle, slot, params) {
        Ok((q1, q2)) if q1 == q2 => Verdict::Valid,
        _ => Verdict::Invalid,
    }
}

/// The secret-free code's check: anything with a nonzero coefficient header
/// passes.
pub fn accept_unverified(pkt: &Packet, params: &CodeParams) -> Verdict {
    if pkt.w.len() == params.width() && pkt.header(params.n).iter().any(|c| !c.is_zero()) {
        Verdict::Valid
    } else {
        Verdict::Invalid
    }
}

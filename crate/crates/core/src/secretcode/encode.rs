use rand::Rng;

use super::{CodeError, CodeParams, MessageMatrix, Packet, SecretBundle, Secrets};
use crate::galois::FieldElement;

/// [h_v] = [d_v] - X [s_v], where column j of [s_v] is the Frobenius chain
/// s_{v,j}^{p^1..p^{n+r}}. Each chain is computed once and reused across rows.
/// Returns the r x r block row-major.
pub fn compute_hash_block(x: &MessageMatrix, bundle: &SecretBundle, params: &CodeParams) -> Vec<FieldElement> {
    let f = &params.field;
    let r = x.r();
    let width = x.n() + r;
    let chains: Vec<Vec<FieldElement>> = bundle
        .s
        .iter()
        .map(|&s| f.frobenius_chain(s, width))
        .collect();
    let mut block = Vec::with_capacity(r * r);
    for (i, row) in x.rows().iter().enumerate() {
        for (j, chain) in chains.iter().enumerate() {
            block.push(f.sub(bundle.d_at(i, j), f.dot(row, chain)));
        }
    }
    block
}

/// Same block computed entry by entry through the SLP hash,
/// h_{v,i,j} = psi(X_i, s_{v,j}, d_{v,i,j}).
pub fn compute_hash_block_entrywise(
    x: &MessageMatrix,
    bundle: &SecretBundle,
    params: &CodeParams,
) -> Result<Vec<FieldElement>, CodeError> {
    let f = &params.field;
    let r = x.r();
    let mut block = Vec::with_capacity(r * r);
    for i in 0..r {
        for j in 0..r {
            block.push(f.slp_hash(x.row(i), bundle.s[j], bundle.d_at(i, j))?);
        }
    }
    Ok(block)
}

/// The r original packets (X_i, h), all carrying the same hash header.
/// With `secrets` absent the code must be the secret-free variant (delta = 0).
pub fn source_packets(
    message: &[FieldElement],
    secrets: Option<&Secrets>,
    params: &CodeParams,
) -> Result<Vec<Packet>, CodeError> {
    let x = MessageMatrix::from_message(message, params.n, params.r)?;
    originals(&x, secrets, params)
}

pub(crate) fn originals(
    x: &MessageMatrix,
    secrets: Option<&Secrets>,
    params: &CodeParams,
) -> Result<Vec<Packet>, CodeError> {
    let h = match (params.secrets_enabled(), secrets) {
        (false, _) => Vec::new(),
        (true, None) => return Err(CodeError::MissingSecrets),
        (true, Some(secrets)) => {
            let mut h = Vec::with_capacity(params.delta);
            for slot in 0..params.node_order.len() {
                h.extend(compute_hash_block(x, secrets.get(slot), params));
            }
            h
        }
    };
    Ok(x
        .rows()
        .iter()
        .map(|row| Packet {
            w: row.clone(),
            h: h.clone(),
        })
        .collect())
}

/// sum_i coeffs[i] * W_i with the hash header of the first packet.
pub fn combine(
    packets: &[&Packet],
    coeffs: &[FieldElement],
    params: &CodeParams,
) -> Result<Packet, CodeError> {
    if packets.len() != coeffs.len() {
        return Err(CodeError::CoefficientCount {
            expected: packets.len(),
            got: coeffs.len(),
        });
    }
    let Some(first) = packets.first() else {
        return Ok(Packet::null(params));
    };
    let width = first.w.len();
    if packets.iter().any(|p| p.w.len() != width || p.h.len() != first.h.len()) {
        return Err(CodeError::LengthMismatch);
    }
    let f = &params.field;
    let mut w = vec![f.zero(); width];
    for (pkt, &a) in packets.iter().zip(coeffs) {
        if a.is_zero() {
            continue;
        }
        for (acc, &x) in w.iter_mut().zip(&pkt.w) {
            *acc = f.add(*acc, f.mul(a, x));
        }
    }
    Ok(Packet {
        w,
        h: first.h.clone(),
    })
}

/// A fresh uniformly random combination of `packets`. An empty input gives
/// the null packet.
pub fn emit_linear_combination<R: Rng + ?Sized>(
    rng: &mut R,
    packets: &[&Packet],
    params: &CodeParams,
) -> Result<Packet, CodeError> {
    let coeffs: Vec<_> = packets.iter().map(|_| params.field.random(rng)).collect();
    combine(packets, &coeffs, params)
}

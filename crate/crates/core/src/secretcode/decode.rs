use std::fmt;

use super::{CodeParams, Packet};
use crate::galois::FieldElement;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeFailure {
    Insufficient { got: usize, need: usize },
    RankDeficient { rank: usize },
}

impl fmt::Display for DecodeFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecodeFailure::Insufficient { got, need } => {
                write!(f, "insufficient packets: {got} valid, {need} needed")
            }
            DecodeFailure::RankDeficient { rank } => write!(f, "rank-deficient transform (rank {rank})"),
        }
    }
}

impl std::error::Error for DecodeFailure {}

/// Solves Y = T X for the message. Rows of the augmented matrix are the
/// packets' [header | payload]; Gauss-Jordan on the header columns.
pub fn decode(packets: &[&Packet], params: &CodeParams) -> Result<Vec<FieldElement>, DecodeFailure> {
    let (n, r) = (params.n, params.r);
    if packets.len() < r {
        return Err(DecodeFailure::Insufficient {
            got: packets.len(),
            need: r,
        });
    }
    let f = &params.field;
    let mut rows: Vec<Vec<FieldElement>> = packets
        .iter()
        .map(|p| {
            let mut row = p.header(n).to_vec();
            row.extend_from_slice(p.payload(n));
            row
        })
        .collect();

    let mut rank = 0;
    for col in 0..r {
        let Some(pivot) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = f.inv(rows[rank][col]).expect("pivot is nonzero");
        for x in rows[rank].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col];
            for (x, &p) in row.iter_mut().zip(&pivot_row) {
                *x = f.sub(*x, f.mul(factor, p));
            }
        }
        rank += 1;
    }
    if rank < r {
        return Err(DecodeFailure::RankDeficient { rank });
    }
    Ok(rows[..r].iter().flat_map(|row| row[r..].iter().copied()).collect())
}

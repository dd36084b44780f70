use std::fmt;
use std::str::FromStr;

use super::stats::binary_entropy;
use super::HarnessError;
use crate::secretcode::CodeParams;
use crate::topology::{self, AdversarySpec, EdgeId, Network};
use std::collections::BTreeSet;

/// A non-negative rational num/den, parsed exactly from "0.1", "1/10" or "2".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    pub num: u128,
    pub den: u128,
}

impl Ratio {
    pub fn new(num: u128, den: u128) -> Option<Self> {
        (den != 0).then_some(Ratio { num, den })
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

impl FromStr for Ratio {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || HarnessError::Usage(format!("'{s}' is not a non-negative decimal or fraction"));
        let s = s.trim();
        if let Some((a, b)) = s.split_once('/') {
            let num = a.trim().parse().map_err(|_| bad())?;
            let den = b.trim().parse().map_err(|_| bad())?;
            return Ratio::new(num, den).ok_or_else(bad);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if (int.is_empty() && frac.is_empty())
            || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
            || frac.len() > 30
        {
            return Err(bad());
        }
        let den = 10u128.pow(frac.len() as u32);
        let int: u128 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let frac: u128 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let num = int.checked_mul(den).and_then(|v| v.checked_add(frac)).ok_or_else(bad)?;
        Ok(Ratio { num, den })
    }
}

/// Number of corrupted packets that can reach an honest verifier in one
/// block: z times the largest out-degree for node-based specs, the largest
/// set for explicit ones.
pub fn union_edge_count(net: &Network, spec: &AdversarySpec) -> usize {
    match spec {
        AdversarySpec::NodeBased { z } => z * net.max_degree(),
        AdversarySpec::General { sets } => sets.iter().map(|s| s.len()).max().unwrap_or(0),
    }
}

/// p^n / p^m.
pub fn forgery_bound(params: &CodeParams) -> f64 {
    let p = params.field.characteristic() as f64;
    p.powf(params.n as f64 - params.field.degree() as f64)
}

/// Union bound on the probability that some corrupted packet survives its
/// next hop: edges * p^{n-m}, capped at 1.
pub fn union_bound(net: &Network, spec: &AdversarySpec, params: &CodeParams) -> f64 {
    (union_edge_count(net, spec) as f64 * forgery_bound(params)).min(1.0)
}

/// Rate of the code in symbols per channel use, nr / (n + r + delta), and
/// the same rate computed in bits, nr log2 q / N with N = (n + r + delta) log2 q.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AchievedRate {
    pub symbols: f64,
    pub bits: f64,
    /// Block length N in bits.
    pub block_bits: f64,
}

pub fn achieved_rate(params: &CodeParams) -> AchievedRate {
    rate_of(params.n, params.r, params.delta, params.field.bits())
}

fn rate_of(n: usize, r: usize, delta: usize, log_q: f64) -> AchievedRate {
    let len = (n + r + delta) as f64;
    let block_bits = len * log_q;
    AchievedRate {
        symbols: (n * r) as f64 / len,
        bits: (n * r) as f64 * log_q / block_bits,
        block_bits,
    }
}

/// Outer bound (1 / (1 - pe)) [min_k min-cut(v0, t_k; G_A) + H(pe) / N].
pub fn erasure_bound(
    net: &Network,
    attack: &BTreeSet<EdgeId>,
    block_bits: f64,
    pe: f64,
) -> Result<f64, HarnessError> {
    if !(0.0..1.0).contains(&pe) {
        return Err(HarnessError::Usage(format!("error probability {pe} must lie in [0, 1)")));
    }
    if block_bits <= 0.0 {
        return Err(HarnessError::Usage("block length must be positive".into()));
    }
    let cut = topology::destination_min_cut(net, attack)? as f64;
    Ok((cut + binary_entropy(pe) / block_bits) / (1.0 - pe))
}

/// Smallest binary code satisfying both design conditions for slack eps.
#[derive(Debug, Clone, PartialEq)]
pub struct Theorem1Params {
    pub n: usize,
    pub m: usize,
    pub r: usize,
    pub delta: usize,
    /// z * d_max (or the largest explicit set).
    pub union_edges: usize,
    /// N = (n + r + delta) * m bits.
    pub block_bits: u128,
    pub rate: AchievedRate,
}

/// Smallest n, with m = 2n and p = 2, such that
/// union_edges * 2^{-n} < eps and nr / (n + r + delta) > r - eps.
pub fn theorem1_params(net: &Network, spec: &AdversarySpec, eps: Ratio) -> Result<Theorem1Params, HarnessError> {
    let r = topology::residual_rate(net, spec)? as u128;
    if r == 0 {
        return Err(HarnessError::Usage("no rate achievable: residual min-cut is 0".into()));
    }
    let (a, b) = (eps.num, eps.den);
    if a == 0 || a >= r * b {
        return Err(HarnessError::Usage(format!("epsilon must satisfy 0 < eps < r = {r}")));
    }
    let delta = (net.node_count() as u128 - 1) * r * r;
    let edges = union_edge_count(net, spec);

    // n a > (r b - a)(r + delta)
    let n_rate = (r * b - a) * (r + delta) / a + 1;
    // edges * b < a * 2^n
    let union_ok = |n: u32| match a.checked_mul(1u128 << n) {
        Some(rhs) => (edges as u128) * b < rhs,
        None => true,
    };
    let n_union = (1..127).find(|&n| union_ok(n)).unwrap_or(127) as u128;
    let n = n_rate.max(n_union) as usize;
    let (r, delta) = (r as usize, delta as usize);
    let m = 2 * n;
    Ok(Theorem1Params {
        n,
        m,
        r,
        delta,
        union_edges: edges,
        block_bits: (n + r + delta) as u128 * m as u128,
        rate: rate_of(n, r, delta, m as f64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::Field;
    use crate::topology::fixtures;

    #[test]
    fn ratio_parsing() {
        assert_eq!("0.1".parse::<Ratio>().unwrap(), Ratio { num: 1, den: 10 });
        assert_eq!("1/10".parse::<Ratio>().unwrap(), Ratio { num: 1, den: 10 });
        assert_eq!("2".parse::<Ratio>().unwrap(), Ratio { num: 2, den: 1 });
        assert_eq!(".25".parse::<Ratio>().unwrap(), Ratio { num: 25, den: 100 });
        for bad in ["", ".", "-1", "1/0", "abc", "1e-3"] {
            assert!(bad.parse::<Ratio>().is_err(), "{bad}");
        }
    }

    #[test]
    fn fixture_eps_tenth() {
        // 2n/(n+18) > 1.9 first holds at n = 343 (n = 342 gives equality);
        // 3 * 2^{-n} < 0.1 already holds from n = 5.
        let net = fixtures::illustrative();
        let spec = AdversarySpec::NodeBased { z: 1 };
        let t = theorem1_params(&net, &spec, "0.1".parse().unwrap()).unwrap();
        assert_eq!((t.n, t.m, t.r, t.delta), (343, 686, 2, 16));
        assert_eq!(t.union_edges, 3);
        assert_eq!(t.block_bits, (343 + 18) * 686);
        assert_eq!(2 * 342 * 10, 19 * 360);
        assert!(t.rate.symbols > 1.9);
    }

    #[test]
    fn monotone_in_eps_and_rate_met() {
        let net = fixtures::illustrative();
        let spec = AdversarySpec::NodeBased { z: 1 };
        let mut last = 0;
        for k in (1..=199).rev() {
            let eps = Ratio::new(k, 100).unwrap();
            let t = theorem1_params(&net, &spec, eps).unwrap();
            assert!(t.n >= last, "eps={eps}");
            last = t.n;
            assert!(t.rate.symbols > 2.0 - eps.to_f64());
            assert!(t.union_edges as f64 * 2f64.powi(-(t.n as i32)) < eps.to_f64());
            if t.n > 1 {
                let n = t.n - 1;
                let rate_ok = (n as u128) * 2 * 100 > (200 - k) * (n as u128 + 18);
                let union_ok = 3 * 100 < k * (1u128 << n.min(100));
                assert!(!(rate_ok && union_ok), "n - 1 = {n} already works for eps={eps}");
            }
        }
        assert!(theorem1_params(&net, &spec, "2".parse().unwrap()).is_err());
        assert!(theorem1_params(&net, &spec, "0".parse().unwrap()).is_err());
    }

    #[test]
    fn erasure_bound_cases() {
        let net = fixtures::illustrative();
        let a = net.node_by_name("a").unwrap();
        let out_a: BTreeSet<_> = net.out_edges(a).into_iter().collect();
        assert_eq!(erasure_bound(&net, &out_a, 100.0, 0.0).unwrap(), 2.0);
        assert_eq!(erasure_bound(&net, &BTreeSet::new(), 100.0, 0.0).unwrap(), 3.0);
        let big = erasure_bound(&net, &out_a, 1e12, 0.5).unwrap();
        assert!((big - 4.0).abs() < 1e-9);
        assert!(erasure_bound(&net, &out_a, 100.0, 1.0).is_err());
    }

    #[test]
    fn achieved_rate_formula() {
        let params = CodeParams::new(
            Field::binary(8).unwrap(),
            2,
            2,
            (1..=4).map(crate::topology::NodeId).collect(),
        )
        .unwrap();
        let rate = achieved_rate(&params);
        assert_eq!(params.delta, 16);
        assert!((rate.symbols - 0.2).abs() < 1e-12);
        assert!((rate.bits - rate.symbols).abs() < 1e-12);
        assert_eq!(rate.block_bits, 20.0 * 8.0);
        let mut prev = 0.0;
        for n in [10, 100, 1000, 100_000] {
            let r = rate_of(n, 2, 16, 8.0).symbols;
            assert!(r > prev && r < 2.0);
            prev = r;
        }
        assert!(2.0 - prev < 1e-3);
    }
}

//! Symmetrization scenario files: a network in the usual format plus
//!
//! ```text
//! a1 e6 e7          # edges seized in the first scenario
//! a2 e4             # edges seized in the second
//! n 8
//! m 16
//! p 2               # optional, default 2
//! w1 <hex>          # n*r field elements, little-endian
//! w2 <hex>
//! code-seed 7       # optional: seed of the fixed coefficient table
//! coeff e7 1 0      # optional per-edge override, decimal field elements
//! ```

use std::collections::BTreeSet;

use crate::galois::{Field, FieldElement};
use crate::secretcode::relay::CoefficientTable;
use crate::secretcode::{derive_params_in, CodeParams};
use crate::topology::{parse_network, AdversarySpec, EdgeId, Network, TopologyError};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct Scenario {
    pub net: Network,
    pub params: CodeParams,
    pub a1: BTreeSet<EdgeId>,
    pub a2: BTreeSet<EdgeId>,
    pub w1: Vec<FieldElement>,
    pub w2: Vec<FieldElement>,
    pub table: CoefficientTable,
}

fn err(line: usize, msg: impl Into<String>) -> TopologyError {
    TopologyError::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario, TopologyError> {
    let mut net_text = String::new();
    let mut directives: Vec<(usize, Vec<String>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim();
        let first = content.split_whitespace().next().unwrap_or("");
        if matches!(first, "node" | "edge" | "adversary" | "") {
            net_text.push_str(raw);
        } else {
            directives.push((idx + 1, content.split_whitespace().map(str::to_string).collect()));
        }
        // Keep line numbers aligned for network errors.
        net_text.push('\n');
    }
    let file = parse_network(&net_text)?;
    let net = file.network;

    let mut a1 = None;
    let mut a2 = None;
    let mut n = None;
    let mut m = None;
    let mut p = 2u64;
    let mut w1 = None;
    let mut w2 = None;
    let mut code_seed = 0u64;
    let mut overrides: Vec<(usize, EdgeId, Vec<u64>)> = Vec::new();

    let edge_set = |line: usize, names: &[String]| -> Result<BTreeSet<EdgeId>, TopologyError> {
        names
            .iter()
            .map(|s| net.edge_by_name(s).ok_or_else(|| err(line, format!("unknown edge {s}"))))
            .collect()
    };
    let number = |line: usize, words: &[String]| -> Result<u64, TopologyError> {
        match words {
            [v] => v.parse().map_err(|_| err(line, format!("'{v}' is not a non-negative integer"))),
            _ => Err(err(line, "expected one integer")),
        }
    };
    for (line, words) in &directives {
        let line = *line;
        let rest = &words[1..];
        match words[0].as_str() {
            "a1" => a1 = Some(edge_set(line, rest)?),
            "a2" => a2 = Some(edge_set(line, rest)?),
            "n" => n = Some((number(line, rest)? as usize, line)),
            "m" => m = Some(number(line, rest)? as u32),
            "p" => p = number(line, rest)?,
            "w1" => w1 = Some((rest.join(""), line)),
            "w2" => w2 = Some((rest.join(""), line)),
            "code-seed" => code_seed = number(line, rest)?,
            "coeff" => {
                let (name, vals) = rest.split_first().ok_or_else(|| err(line, "expected: coeff <edge> <values>"))?;
                let e = net.edge_by_name(name).ok_or_else(|| err(line, format!("unknown edge {name}")))?;
                let vals = vals
                    .iter()
                    .map(|v| v.parse().map_err(|_| err(line, format!("bad coefficient '{v}'"))))
                    .collect::<Result<_, _>>()?;
                overrides.push((line, e, vals));
            }
            other => return Err(err(line, format!("unknown directive '{other}'"))),
        }
    }

    let missing = |what: &str| err(0, format!("scenario is missing '{what}'"));
    let a1 = a1.ok_or_else(|| missing("a1"))?;
    let a2 = a2.ok_or_else(|| missing("a2"))?;
    let (n, n_line) = n.ok_or_else(|| missing("n"))?;
    let m = m.ok_or_else(|| missing("m"))?;
    let field = Field::new(p, m).map_err(|e| err(0, e.to_string()))?;
    // The rate comes from the file's adversary spec when given, otherwise
    // from the plain min-cut.
    let spec = file.adversary.unwrap_or(AdversarySpec::NodeBased { z: 0 });
    let params = derive_params_in(&net, &spec, n, field).map_err(|e| err(n_line, e.to_string()))?;

    let message = |w: Option<(String, usize)>, name: &str| -> Result<Vec<FieldElement>, TopologyError> {
        let (hex_text, line) = w.ok_or_else(|| missing(name))?;
        let bytes = hex::decode(&hex_text).map_err(|e| err(line, format!("bad hex: {e}")))?;
        let elems = params.field.read_elements(&bytes).map_err(|e| err(line, e.to_string()))?;
        if elems.len() != params.n * params.r {
            return Err(err(
                line,
                format!("message has {} symbols, expected n*r = {}", elems.len(), params.n * params.r),
            ));
        }
        Ok(elems)
    };
    let w1 = message(w1, "w1")?;
    let w2 = message(w2, "w2")?;

    let sampled = CoefficientTable::sample(&mut ChaCha8Rng::seed_from_u64(code_seed), &net, &params);
    let mut rows: Vec<Vec<FieldElement>> = net.edge_ids().map(|e| sampled.get(e).to_vec()).collect();
    for (line, e, vals) in overrides {
        rows[e.0] = vals
            .into_iter()
            .map(|v| params.field.element(v).map_err(|x| err(line, x.to_string())))
            .collect::<Result<_, _>>()?;
    }
    let table = CoefficientTable::from_rows(&net, &params, rows).map_err(|e| err(0, e.to_string()))?;

    Ok(Scenario {
        net,
        params,
        a1,
        a2,
        w1,
        w2,
        table,
    })
}

/// The five-node example with the link adversary of the worked example:
/// A1 = {(b,t), (c,t)}, A2 = {(a,t)}.
pub const ILLUSTRATIVE_SCENARIO: &str = "\
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
a1 e6 e7
a2 e4
n 8
m 16
w1 0100020003000400050006000700080009000a000b000c000d000e000f001000
w2 1100120013001400150016001700180019001a001b001c001d001e001f002000
code-seed 7
";

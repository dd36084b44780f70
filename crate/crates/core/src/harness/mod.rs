//! Trial engine, Monte-Carlo aggregation, and the rate and error bounds the
//! empirical numbers are compared against.

mod bounds;
mod report;
mod stats;

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::adversary::{Adversary, AdversaryError, AttackContext, Strategy};
use crate::galois::FieldElement;
use crate::secretcode::relay::{relay, CoefficientTable};
use crate::secretcode::{
    compute_hash_block, sample_secrets, CodeError, CodeParams, DecodeFailure, MessageMatrix, Packet,
    Verdict,
};
use crate::topology::{AdversarySpec, AttackSet, EdgeId, Network, NodeId, TopologyError};

pub use bounds::{
    achieved_rate, erasure_bound, forgery_bound, theorem1_params, union_bound, union_edge_count,
    AchievedRate, Ratio, Theorem1Params,
};
pub use report::{write_csv, write_text, Report, CSV_HEADER};
pub use stats::{binary_entropy, binomial_sigma, wilson_half_width, wilson_interval};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Adversary(#[from] AdversaryError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// One experiment cell: a network, one attack set and one strategy.
#[derive(Debug, Clone)]
pub struct TrialConfig {
    pub net: Network,
    pub spec: AdversarySpec,
    pub attack: AttackSet,
    pub strategy: Strategy,
    /// `delta = 0` runs the secret-free code.
    pub params: CodeParams,
    pub seed: u64,
}

impl TrialConfig {
    pub fn secrets_enabled(&self) -> bool {
        self.params.secrets_enabled()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeOutcome {
    Correct,
    Wrong,
    Failed(DecodeFailure),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialResult {
    pub outcomes: Vec<(NodeId, DecodeOutcome)>,
    /// Verdict of each edge's head, by edge id.
    pub verdicts: Vec<Verdict>,
    /// Corrupted packets that reached an honest verifier.
    pub corrupted_delivered: u64,
    /// Of those, how many were accepted.
    pub false_accepts: u64,
    /// Non-null packets on honest edges rejected by an honest verifier.
    pub isolation_events: u64,
}

impl TrialResult {
    /// Some destination did not recover the message.
    pub fn decode_error(&self) -> bool {
        self.outcomes.iter().any(|(_, o)| *o != DecodeOutcome::Correct)
    }

    /// Some destination failed for lack of rank, and none decoded wrongly.
    pub fn rank_failure(&self) -> bool {
        self.outcomes.iter().any(|(_, o)| matches!(o, DecodeOutcome::Failed(_)))
            && !self.outcomes.iter().any(|(_, o)| *o == DecodeOutcome::Wrong)
    }
}

/// Independent sub-seeds for one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialSeeds {
    pub message: u64,
    pub secrets: u64,
    pub coefficients: u64,
    pub adversary: u64,
}

impl TrialSeeds {
    /// Trial `index` of the run seeded by `master`: ChaCha stream `index`.
    pub fn derive(master: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master);
        rng.set_stream(index);
        TrialSeeds {
            message: rng.gen(),
            secrets: rng.gen(),
            coefficients: rng.gen(),
            adversary: rng.gen(),
        }
    }
}

/// One block with the trial seeded directly by `cfg.seed`.
pub fn run_trial(cfg: &TrialConfig) -> Result<TrialResult, HarnessError> {
    simulate(cfg, TrialSeeds::derive(cfg.seed, 0))
}

/// One block with explicit sub-seeds.
pub fn simulate(cfg: &TrialConfig, seeds: TrialSeeds) -> Result<TrialResult, HarnessError> {
    let net = &cfg.net;
    let params = &cfg.params;
    let f = &params.field;

    let mut rng = ChaCha8Rng::seed_from_u64(seeds.message);
    let message: Vec<FieldElement> = (0..params.n * params.r).map(|_| f.random(&mut rng)).collect();
    let x = MessageMatrix::from_message(&message, params.n, params.r)?;
    let secrets = cfg
        .secrets_enabled()
        .then(|| sample_secrets(&mut ChaCha8Rng::seed_from_u64(seeds.secrets), params));
    let table = CoefficientTable::sample(&mut ChaCha8Rng::seed_from_u64(seeds.coefficients), net, params);

    let ctx = AttackContext::new(net, params, &x, Some(&table), &cfg.attack, secrets.as_ref());
    let mut adversary = Adversary::new(ctx, cfg.strategy.clone(), ChaCha8Rng::seed_from_u64(seeds.adversary))?;
    let transcript = relay(net, params, &x, secrets.as_ref(), &table, &cfg.attack.edges, &mut adversary)?;

    // True hash blocks, for deciding what counts as corrupted.
    let true_blocks: Vec<Vec<FieldElement>> = match &secrets {
        Some(s) => s.bundles.iter().map(|b| compute_hash_block(&x, b, params)).collect(),
        None => Vec::new(),
    };
    let seized: BTreeSet<NodeId> = cfg.attack.nodes.iter().copied().collect();

    let mut result = TrialResult {
        outcomes: Vec::new(),
        verdicts: transcript.edges.iter().map(|r| r.verdict).collect(),
        corrupted_delivered: 0,
        false_accepts: 0,
        isolation_events: 0,
    };
    for (e, record) in net.edge_ids().zip(&transcript.edges) {
        let head = net.edge(e).head;
        if seized.contains(&head) || record.sent.header(params.n).iter().all(|c| c.is_zero()) {
            continue;
        }
        let slot = params.slot(head);
        let block = slot.and_then(|s| true_blocks.get(s).map(|b| (s, b.as_slice())));
        if is_corrupted(&record.sent, &x, block, params) {
            result.corrupted_delivered += 1;
            if record.verdict.is_valid() {
                result.false_accepts += 1;
            }
        } else if !cfg.attack.edges.contains(&e) && !record.verdict.is_valid() {
            result.isolation_events += 1;
        }
    }
    result.outcomes = transcript
        .decoded
        .into_iter()
        .map(|(t, d)| {
            let outcome = match d {
                Ok(m) if m == message => DecodeOutcome::Correct,
                Ok(_) => DecodeOutcome::Wrong,
                Err(e) => DecodeOutcome::Failed(e),
            };
            (t, outcome)
        })
        .collect();
    Ok(result)
}

/// W differs from the combination its header claims, or an entry of the
/// verifier's hash block that enters its check has been altered.
fn is_corrupted(
    pkt: &Packet,
    x: &MessageMatrix,
    block: Option<(usize, &[FieldElement])>,
    params: &CodeParams,
) -> bool {
    let f = &params.field;
    let header = pkt.header(params.n);
    for l in 0..params.n {
        let claimed = header
            .iter()
            .zip(x.rows())
            .fold(f.zero(), |acc, (&c, row)| f.add(acc, f.mul(c, row[l])));
        if claimed != pkt.w[l] {
            return true;
        }
    }
    let Some((slot, truth)) = block else {
        return false;
    };
    let got = &pkt.h[params.block_range(slot)];
    let r = params.r;
    (0..r).any(|i| {
        !header[i].is_zero()
            && (0..r).any(|j| !header[j].is_zero() && got[i * r + j] != truth[i * r + j])
    })
}

/// Integer tallies over many trials; summing is order-insensitive.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Tally {
    pub trials: u64,
    pub decode_errors: u64,
    pub rank_failures: u64,
    pub wrong_decodes: u64,
    pub corrupted_delivered: u64,
    pub false_accepts: u64,
    pub isolation_events: u64,
}

impl Tally {
    fn of(r: &TrialResult) -> Self {
        Tally {
            trials: 1,
            decode_errors: r.decode_error() as u64,
            rank_failures: r.rank_failure() as u64,
            wrong_decodes: r.outcomes.iter().any(|(_, o)| *o == DecodeOutcome::Wrong) as u64,
            corrupted_delivered: r.corrupted_delivered,
            false_accepts: r.false_accepts,
            isolation_events: r.isolation_events,
        }
    }

    fn merge(self, o: Tally) -> Tally {
        Tally {
            trials: self.trials + o.trials,
            decode_errors: self.decode_errors + o.decode_errors,
            rank_failures: self.rank_failures + o.rank_failures,
            wrong_decodes: self.wrong_decodes + o.wrong_decodes,
            corrupted_delivered: self.corrupted_delivered + o.corrupted_delivered,
            false_accepts: self.false_accepts + o.false_accepts,
            isolation_events: self.isolation_events + o.isolation_events,
        }
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool, HarnessError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| HarnessError::Usage(format!("cannot start {workers} workers: {e}")))
}

/// Runs `trials` independent blocks, trial i seeded from (cfg.seed, i).
pub fn monte_carlo(cfg: &TrialConfig, trials: u64, workers: usize) -> Result<Report, HarnessError> {
    if trials == 0 {
        return Err(HarnessError::Usage("trials must be at least 1".into()));
    }
    let tally = pool(workers)?.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|i| simulate(cfg, TrialSeeds::derive(cfg.seed, i)).map(|r| Tally::of(&r)))
            .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))
    })?;
    Report::new(cfg, tally)
}

/// Every attack set of `spec` crossed with every strategy, sets outermost.
#[allow(clippy::too_many_arguments)]
pub fn run_grid(
    net: &Network,
    spec: &AdversarySpec,
    params: &CodeParams,
    strategies: &[Strategy],
    seed: u64,
    trials: u64,
    workers: usize,
    include_empty: bool,
) -> Result<Vec<Report>, HarnessError> {
    let mut out = Vec::new();
    for attack in crate::topology::adversary_sets(net, spec)? {
        if attack.edges.is_empty() && !include_empty {
            continue;
        }
        for strategy in strategies {
            let cfg = TrialConfig {
                net: net.clone(),
                spec: spec.clone(),
                attack: attack.clone(),
                strategy: strategy.clone(),
                params: params.clone(),
                seed,
            };
            out.push(monte_carlo(&cfg, trials, workers)?);
        }
    }
    Ok(out)
}

/// Edges seized by `attack`, as names.
pub fn attack_edge_names(net: &Network, attack: &BTreeSet<EdgeId>) -> Vec<String> {
    attack.iter().map(|&e| net.edge(e).name.clone()).collect()
}

use std::io::Write;

use super::bounds::{achieved_rate, erasure_bound, forgery_bound, union_bound, AchievedRate};
use super::stats::{binomial_sigma, wilson_interval};
use super::{HarnessError, Tally, TrialConfig};

pub const CSV_HEADER: [&str; 12] = [
    "adversary_set",
    "strategy",
    "trials",
    "decode_errors",
    "false_accepts",
    "isolation_events",
    "empirical_pe",
    "lemma1_bound",
    "thm2_bound",
    "rate_symbols",
    "rank_failures",
    "corrupted_delivered",
];

/// Aggregated outcome of one (attack set, strategy) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub adversary_set: String,
    pub strategy: String,
    pub secrets: bool,
    pub tally: Tally,
    pub empirical_pe: f64,
    pub rank_failure_rate: f64,
    /// False accepts per corrupted delivery, with its Wilson interval at z = 1.
    pub false_accept_rate: f64,
    pub false_accept_interval: (f64, f64),
    /// p^{n-m}.
    pub lemma1_bound: f64,
    /// Union bound over the corrupted packets one block can carry.
    pub union_bound: f64,
    /// Erasure outer bound for this set at the empirical error rate.
    pub thm2_bound: f64,
    /// Residual rate r.
    pub residual_rate: usize,
    pub rate: AchievedRate,
}

impl Report {
    pub(super) fn new(cfg: &TrialConfig, tally: Tally) -> Result<Self, HarnessError> {
        let trials = tally.trials as f64;
        let empirical_pe = tally.decode_errors as f64 / trials;
        let false_accept_rate = if tally.corrupted_delivered == 0 {
            0.0
        } else {
            tally.false_accepts as f64 / tally.corrupted_delivered as f64
        };
        let rate = achieved_rate(&cfg.params);
        // pe = 1 makes the outer bound vacuous.
        let thm2_bound = if empirical_pe < 1.0 {
            erasure_bound(&cfg.net, &cfg.attack.edges, rate.block_bits, empirical_pe)?
        } else {
            f64::INFINITY
        };
        Ok(Report {
            adversary_set: cfg.attack.label(&cfg.net),
            strategy: cfg.strategy.name().to_string(),
            secrets: cfg.secrets_enabled(),
            tally,
            empirical_pe,
            rank_failure_rate: tally.rank_failures as f64 / trials,
            false_accept_rate,
            false_accept_interval: wilson_interval(tally.false_accepts, tally.corrupted_delivered, 1.0),
            lemma1_bound: forgery_bound(&cfg.params),
            union_bound: union_bound(&cfg.net, &cfg.spec, &cfg.params),
            thm2_bound,
            residual_rate: cfg.params.r,
            rate,
        })
    }

    /// Union bound plus the measured rank-failure rate.
    pub fn pe_threshold(&self) -> f64 {
        (self.union_bound + self.rank_failure_rate).min(1.0)
    }

    /// Checks against the bounds, with `k` standard deviations of slack.
    /// Returns a description of each violation. Only meaningful with
    /// hashing enabled.
    pub fn violations(&self, k: f64) -> Vec<String> {
        let mut out = Vec::new();
        if !self.secrets {
            return out;
        }
        let limit = self.pe_threshold();
        let slack = k * binomial_sigma(self.union_bound.max(1.0 / self.tally.trials as f64), self.tally.trials);
        if self.empirical_pe > limit + slack {
            out.push(format!(
                "{} / {}: empirical P_e {:.6} exceeds {:.6} + {:.6}",
                self.adversary_set, self.strategy, self.empirical_pe, limit, slack
            ));
        }
        let (lo, hi) = self.false_accept_interval;
        let half = (hi - lo) / 2.0;
        if self.tally.corrupted_delivered > 0 && self.false_accept_rate > self.lemma1_bound + k * half {
            out.push(format!(
                "{} / {}: false-accept rate {:.6} exceeds {:.6e} + {:.6}",
                self.adversary_set, self.strategy, self.false_accept_rate, self.lemma1_bound, k * half
            ));
        }
        out
    }
}

/// One CSV row per report, columns as in [`CSV_HEADER`].
pub fn write_csv<W: Write>(out: W, reports: &[Report]) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in reports {
        w.write_record([
            r.adversary_set.clone(),
            r.strategy.clone(),
            r.tally.trials.to_string(),
            r.tally.decode_errors.to_string(),
            r.tally.false_accepts.to_string(),
            r.tally.isolation_events.to_string(),
            format!("{:.6}", r.empirical_pe),
            format!("{:.6e}", r.lemma1_bound),
            format!("{:.6}", r.thm2_bound),
            format!("{:.6}", r.rate.symbols),
            r.tally.rank_failures.to_string(),
            r.tally.corrupted_delivered.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_text<W: Write>(mut out: W, reports: &[Report]) -> Result<(), HarnessError> {
    if let Some(first) = reports.first() {
        writeln!(
            out,
            "residual rate r = {}, achieved R = {:.6} symbols ({:.6} bits per {:.0}-bit block), slack r - R = {:.6}",
            first.residual_rate,
            first.rate.symbols,
            first.rate.bits,
            first.rate.block_bits,
            first.residual_rate as f64 - first.rate.symbols
        )?;
        writeln!(
            out,
            "hash headers {}; forgery bound p^(n-m) = {:.6e}; union bound = {:.6e}",
            if first.secrets { "on" } else { "off" },
            first.lemma1_bound,
            first.union_bound
        )?;
    }
    for r in reports {
        let (lo, hi) = r.false_accept_interval;
        writeln!(out)?;
        writeln!(out, "[{} / {}] {} trials", r.adversary_set, r.strategy, r.tally.trials)?;
        writeln!(
            out,
            "  decode errors      {} (P_e = {:.6}; rank failures {}, wrong decodes {})",
            r.tally.decode_errors, r.empirical_pe, r.tally.rank_failures, r.tally.wrong_decodes
        )?;
        writeln!(
            out,
            "  false accepts      {} of {} corrupted deliveries (rate {:.6}, Wilson [{:.6}, {:.6}])",
            r.tally.false_accepts, r.tally.corrupted_delivered, r.false_accept_rate, lo, hi
        )?;
        writeln!(out, "  isolation events   {}", r.tally.isolation_events)?;
        writeln!(
            out,
            "  bounds             P_e <= {:.6e} + rank; erasure outer bound on R {:.6}",
            r.union_bound, r.thm2_bound
        )?;
    }
    Ok(())
}

//! Command-line front end. `run_cli` is the whole program minus process
//! exit, so tests drive it with in-memory output.
//!
//! Exit codes: 0 success, 1 a checked bound was violated (or the
//! symmetrization demo did not behave as predicted), 2 usage or input error.

mod scenario;

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::adversary::{symmetrize_transcripts, Strategy};
use crate::galois::Field;
use crate::harness::{self, erasure_bound, theorem1_params, HarnessError, Ratio, Report};
use crate::secretcode::{derive_params_in, sample_secrets};
use crate::topology::{self, adversary_sets, parse_network, AdversarySpec, EdgeId, Network};

pub use scenario::{parse_scenario, Scenario, ILLUSTRATIVE_SCENARIO};

#[derive(Debug, Parser)]
#[command(name = "advnet", version, about = "Shared-secret network coding against node-based adversaries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Min-cut from the source to each destination.
    Mincut {
        #[arg(long)]
        network: PathBuf,
        /// Comma-separated edge ids to delete first.
        #[arg(long, value_delimiter = ',')]
        deleted_edges: Vec<String>,
        /// Delete the outgoing edges of these nodes (comma-separated).
        #[arg(long, value_delimiter = ',')]
        deleted_nodes: Vec<String>,
    },
    /// Residual rate, hash-header length and the adversary collection.
    Rate {
        #[arg(long)]
        network: PathBuf,
        #[arg(long)]
        adversary: Option<String>,
    },
    /// Monte-Carlo run over every attack set.
    Run(RunArgs),
    /// Smallest code meeting both design conditions for slack epsilon.
    Params {
        #[arg(long)]
        network: PathBuf,
        #[arg(long)]
        adversary: Option<String>,
        /// Exact decimal or fraction, e.g. 0.1 or 1/10.
        #[arg(long)]
        epsilon: String,
    },
    /// Erasure outer bound on the rate for one attack set.
    Bound {
        #[arg(long)]
        network: PathBuf,
        /// Comma-separated edge ids seized by the adversary.
        #[arg(long, value_delimiter = ',')]
        deleted_edges: Vec<String>,
        #[arg(long, default_value_t = 0.0)]
        pe: f64,
        /// Block length N in bits.
        #[arg(long, default_value_t = 1.0e6)]
        block_bits: f64,
    },
    /// Run both symmetrization scenarios and compare what the destination sees.
    DemoSymmetrize {
        scenario: PathBuf,
        /// Turn on hash headers; resample secrets `runs` times.
        #[arg(long)]
        secrets: bool,
        #[arg(long, default_value_t = 1)]
        runs: u64,
        #[arg(long, env = "ADVNET_SEED", default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

#[derive(Debug, Clone, clap::Args)]
pub struct RunArgs {
    #[arg(long)]
    pub network: PathBuf,
    /// node-based:z=K or sets:FILE; defaults to the network file's directive.
    #[arg(long)]
    pub adversary: Option<String>,
    /// One of the shipped strategies, or "all".
    #[arg(long, default_value = "silent")]
    pub strategy: String,
    #[arg(long, default_value_t = 16)]
    pub n: usize,
    #[arg(long, default_value_t = 32)]
    pub m: u32,
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, env = "ADVNET_SEED", default_value_t = 1)]
    pub seed: u64,
    /// Also write PREFIX.csv and PREFIX.txt.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Run the secret-free code.
    #[arg(long)]
    pub no_secrets: bool,
    /// Exit 1 when a report exceeds its bound by more than 3 sigma.
    #[arg(long)]
    pub check_bounds: bool,
    /// Include the empty attack set.
    #[arg(long)]
    pub include_empty: bool,
}

/// Parses and runs; returns the exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 2;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32, HarnessError> {
    match cmd {
        Command::Mincut {
            network,
            deleted_edges,
            deleted_nodes,
        } => cmd_mincut(&network, &deleted_edges, &deleted_nodes, out),
        Command::Rate { network, adversary } => cmd_rate(&network, adversary.as_deref(), out),
        Command::Run(args) => cmd_run(&args, out),
        Command::Params {
            network,
            adversary,
            epsilon,
        } => cmd_params(&network, adversary.as_deref(), &epsilon, out),
        Command::Bound {
            network,
            deleted_edges,
            pe,
            block_bits,
        } => cmd_bound(&network, &deleted_edges, pe, block_bits, out),
        Command::DemoSymmetrize {
            scenario,
            secrets,
            runs,
            seed,
        } => cmd_demo_symmetrize(&scenario, secrets, runs, seed, out),
    }
}

fn read(path: &Path) -> Result<String, HarnessError> {
    fs::read_to_string(path)
        .map_err(|e| HarnessError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_network(path: &Path) -> Result<(Network, Option<AdversarySpec>), HarnessError> {
    let file = parse_network(&read(path)?)
        .map_err(|e| HarnessError::Usage(format!("{}: {e}", path.display())))?;
    Ok((file.network, file.adversary))
}

/// `node-based:z=K`, `sets:FILE`, or the file's own directive.
pub fn resolve_adversary(
    net: &Network,
    flag: Option<&str>,
    from_file: Option<AdversarySpec>,
) -> Result<AdversarySpec, HarnessError> {
    let Some(flag) = flag else {
        return from_file
            .ok_or_else(|| HarnessError::Usage("no --adversary given and the network file has none".into()));
    };
    if let Some(z) = flag.strip_prefix("node-based:z=") {
        let z = z
            .parse()
            .map_err(|_| HarnessError::Usage(format!("bad z in '{flag}'")))?;
        return Ok(AdversarySpec::NodeBased { z });
    }
    if let Some(path) = flag.strip_prefix("sets:") {
        let text = read(Path::new(path))?;
        let mut sets = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            let line = line.strip_prefix("adversary set").unwrap_or(line).trim();
            if line.is_empty() {
                continue;
            }
            let set = net
                .resolve_edges(&line.split_whitespace().collect::<Vec<_>>())
                .map_err(|e| HarnessError::Usage(format!("{path}:{}: {e}", i + 1)))?;
            sets.push(set);
        }
        if sets.is_empty() {
            return Err(HarnessError::Usage(format!("{path} lists no edge sets")));
        }
        return Ok(AdversarySpec::General { sets });
    }
    Err(HarnessError::Usage(format!(
        "--adversary must be node-based:z=K or sets:FILE, got '{flag}'"
    )))
}

fn edge_set(net: &Network, names: &[String]) -> Result<BTreeSet<EdgeId>, HarnessError> {
    net.resolve_edges(&names.iter().filter(|s| !s.is_empty()).collect::<Vec<_>>())
        .map_err(|e| HarnessError::Usage(e.to_string()))
}

pub fn cmd_mincut(
    network: &Path,
    deleted_edges: &[String],
    deleted_nodes: &[String],
    out: &mut dyn Write,
) -> Result<i32, HarnessError> {
    let (net, _) = load_network(network)?;
    let mut removed = edge_set(&net, deleted_edges)?;
    for name in deleted_nodes.iter().filter(|s| !s.is_empty()) {
        let v = net
            .node_by_name(name)
            .ok_or_else(|| HarnessError::Usage(format!("unknown node {name}")))?;
        removed.extend(net.out_edges(v));
    }
    for &t in net.destinations() {
        let cut = topology::min_cut_excluding(&net, net.source(), t, &removed)?;
        writeln!(out, "{}\t{}", net.node(t).name, cut)?;
    }
    Ok(0)
}

pub fn cmd_rate(network: &Path, adversary: Option<&str>, out: &mut dyn Write) -> Result<i32, HarnessError> {
    let (net, file_spec) = load_network(network)?;
    let spec = resolve_adversary(&net, adversary, file_spec)?;
    let sets = adversary_sets(&net, &spec)?;
    let r = topology::residual_rate(&net, &spec)? as usize;
    let delta = (net.node_count() - 1) * r * r;
    writeln!(out, "adversary: {}", spec.describe(&net))?;
    writeln!(out, "r = {r}")?;
    writeln!(out, "delta = {delta}")?;
    writeln!(out, "|A| = {}", sets.len())?;
    for set in &sets {
        let cut = topology::destination_min_cut(&net, &set.edges)?;
        writeln!(out, "  {}\tmin-cut {}", set.label(&net), cut)?;
    }
    Ok(0)
}

/// Reports produced by a run, before any output is written.
pub fn run_reports(args: &RunArgs) -> Result<Vec<Report>, HarnessError> {
    let (net, file_spec) = load_network(&args.network)?;
    let spec = resolve_adversary(&net, args.adversary.as_deref(), file_spec)?;
    if args.trials == 0 || args.workers == 0 || args.n == 0 || args.m == 0 {
        return Err(HarnessError::Usage("--trials, --workers, --n and --m must be positive".into()));
    }
    let strategies = if args.strategy == "all" {
        Strategy::shipped()
    } else {
        vec![args.strategy.parse::<Strategy>()?]
    };
    let field = Field::new(args.p, args.m).map_err(|e| HarnessError::Usage(e.to_string()))?;
    let mut params = derive_params_in(&net, &spec, args.n, field)?;
    if args.no_secrets {
        params = params.without_secrets();
    }
    harness::run_grid(
        &net,
        &spec,
        &params,
        &strategies,
        args.seed,
        args.trials,
        args.workers,
        args.include_empty,
    )
}

pub fn cmd_run(args: &RunArgs, out: &mut dyn Write) -> Result<i32, HarnessError> {
    let reports = run_reports(args)?;
    match args.format {
        Format::Text => harness::write_text(&mut *out, &reports)?,
        Format::Csv => harness::write_csv(&mut *out, &reports)?,
    }
    if let Some(prefix) = &args.out {
        let with_ext = |ext: &str| {
            let mut p = prefix.clone().into_os_string();
            p.push(ext);
            PathBuf::from(p)
        };
        harness::write_csv(fs::File::create(with_ext(".csv"))?, &reports)?;
        harness::write_text(fs::File::create(with_ext(".txt"))?, &reports)?;
    }
    if args.check_bounds {
        let problems: Vec<String> = reports.iter().flat_map(|r| r.violations(3.0)).collect();
        for p in &problems {
            log::error!("{p}");
        }
        if !problems.is_empty() {
            return Ok(1);
        }
    }
    Ok(0)
}

pub fn cmd_params(
    network: &Path,
    adversary: Option<&str>,
    epsilon: &str,
    out: &mut dyn Write,
) -> Result<i32, HarnessError> {
    let (net, file_spec) = load_network(network)?;
    let spec = resolve_adversary(&net, adversary, file_spec)?;
    let eps: Ratio = epsilon.parse()?;
    let t = theorem1_params(&net, &spec, eps)?;
    writeln!(out, "epsilon = {epsilon}")?;
    writeln!(out, "r = {}, delta = {}, union edges = {}", t.r, t.delta, t.union_edges)?;
    writeln!(out, "n = {}, m = {}, N = {} bits", t.n, t.m, t.block_bits)?;
    writeln!(out, "rate = {:.6} (target > {:.6})", t.rate.symbols, t.r as f64 - eps.to_f64())?;
    Ok(0)
}

pub fn cmd_bound(
    network: &Path,
    deleted_edges: &[String],
    pe: f64,
    block_bits: f64,
    out: &mut dyn Write,
) -> Result<i32, HarnessError> {
    let (net, _) = load_network(network)?;
    let attack = edge_set(&net, deleted_edges)?;
    let bound = erasure_bound(&net, &attack, block_bits, pe)?;
    writeln!(out, "{bound}")?;
    Ok(0)
}

fn hex_of(bytes: &[u8]) -> String {
    hex::encode(bytes)
}

pub fn cmd_demo_symmetrize(
    path: &Path,
    secrets: bool,
    runs: u64,
    seed: u64,
    out: &mut dyn Write,
) -> Result<i32, HarnessError> {
    let sc = parse_scenario(&read(path)?).map_err(|e| HarnessError::Usage(format!("{}: {e}", path.display())))?;
    let net = &sc.net;
    writeln!(
        out,
        "A1 = {}, A2 = {}",
        net.edge_set_label(&sc.a1),
        net.edge_set_label(&sc.a2)
    )?;

    if !secrets {
        let outcome =
            symmetrize_transcripts(net, &sc.params, &sc.table, None, &sc.a1, &sc.a2, &sc.w1, &sc.w2)?;
        writeln!(out, "destination {}; secret-free code", net.node(outcome.destination).name)?;
        for ((e, same), (a, b)) in outcome
            .per_edge()
            .into_iter()
            .zip(outcome.first.edges.iter().zip(&outcome.second.edges))
        {
            writeln!(
                out,
                "{}\t{}\t{}\t{}",
                net.edge(e).name,
                if same { "IDENTICAL" } else { "DIFFERENT" },
                hex_of(&a.1),
                hex_of(&b.1)
            )?;
        }
        let identical = outcome.identical();
        writeln!(out, "{}", if identical { "IDENTICAL" } else { "DIFFERENT" })?;
        return Ok(if identical { 0 } else { 1 });
    }

    let mut detected = 0;
    let mut differ = 0;
    for i in 0..runs.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i);
        let s = sample_secrets(&mut rng, &sc.params);
        let outcome =
            symmetrize_transcripts(net, &sc.params, &sc.table, Some(&s), &sc.a1, &sc.a2, &sc.w1, &sc.w2)?;
        if i == 0 {
            writeln!(out, "destination {}; hash headers on", net.node(outcome.destination).name)?;
            for ((e, same), (a, b)) in outcome
                .per_edge()
                .into_iter()
                .zip(outcome.first.edges.iter().zip(&outcome.second.edges))
            {
                writeln!(
                    out,
                    "{}\t{}\t{:?}/{:?}",
                    net.edge(e).name,
                    if same { "IDENTICAL" } else { "DIFFERENT" },
                    a.2,
                    b.2
                )?;
            }
        }
        detected += outcome.forgery_detected() as u64;
        differ += (!outcome.identical()) as u64;
    }
    let runs = runs.max(1);
    writeln!(out, "runs {runs}: transcripts differ in {differ}, forgery rejected in {detected}")?;
    writeln!(out, "{}", if differ == runs { "DIFFERENT" } else { "IDENTICAL" })?;
    Ok(if detected as f64 >= 0.99 * runs as f64 { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::fixtures;

    fn net_file(dir: &tempfile::TempDir) -> PathBuf {
        let p = dir.path().join("fixture.net");
        fs::write(&p, fixtures::ILLUSTRATIVE_TEXT).unwrap();
        p
    }

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_cli(std::iter::once("advnet").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn mincut_examples() {
        let dir = tempfile::tempdir().unwrap();
        let p = net_file(&dir);
        let p = p.to_str().unwrap();
        assert_eq!(call(&["mincut", "--network", p]).1, "t\t3\n");
        assert_eq!(call(&["mincut", "--network", p, "--deleted-edges", "e4,e5"]).1, "t\t2\n");
        assert_eq!(call(&["mincut", "--network", p, "--deleted-nodes", "a"]).1, "t\t2\n");
        let (code, _, err) = call(&["mincut", "--network", p, "--deleted-edges", "e42"]);
        assert_eq!(code, 2);
        assert!(err.contains("e42"));
    }

    #[test]
    fn rate_examples() {
        let dir = tempfile::tempdir().unwrap();
        let p = net_file(&dir);
        let p = p.to_str().unwrap();
        let (code, out, _) = call(&["rate", "--network", p]);
        assert_eq!(code, 0);
        assert!(out.contains("r = 2\n") && out.contains("delta = 16\n") && out.contains("|A| = 4\n"));
        let (_, out, _) = call(&["rate", "--network", p, "--adversary", "node-based:z=0"]);
        assert!(out.contains("r = 3\n"));
        let sets = dir.path().join("sets.txt");
        fs::write(&sets, "e4 e5\n# comment\nadversary set e6\n").unwrap();
        let flag = format!("sets:{}", sets.display());
        let (_, out, _) = call(&["rate", "--network", p, "--adversary", &flag]);
        assert!(out.contains("{e4,e5}") && out.contains("{e6}"), "{out}");
        assert!(out.contains("r = 2\n"));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["run", "--network", "/nonexistent"]).0, 2);
        let dir = tempfile::tempdir().unwrap();
        let p = net_file(&dir);
        let p = p.to_str().unwrap();
        assert_eq!(call(&["run", "--network", p, "--strategy", "teleport"]).0, 2);
        assert_eq!(call(&["run", "--network", p, "--adversary", "z=1"]).0, 2);
        assert_eq!(call(&["params", "--network", p, "--epsilon", "3"]).0, 2);
        assert_eq!(call(&["bound", "--network", p, "--pe", "1"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn run_silent_has_no_errors() {
        let dir = tempfile::tempdir().unwrap();
        let p = net_file(&dir);
        let prefix = dir.path().join("out");
        let (code, out, err) = call(&[
            "run",
            "--network",
            p.to_str().unwrap(),
            "--trials",
            "100",
            "--format",
            "csv",
            "--out",
            prefix.to_str().unwrap(),
            "--check-bounds",
        ]);
        assert_eq!(code, 0, "{err}");
        let lines: Vec<_> = out.lines().collect();
        assert_eq!(lines.len(), 4);
        for row in &lines[1..] {
            let cols: Vec<_> = row.split(',').collect();
            assert_eq!(cols[1], "silent");
            assert_eq!(cols[3], "0");
            assert_eq!(cols[6], "0.000000");
        }
        assert_eq!(fs::read_to_string(dir.path().join("out.csv")).unwrap(), out);
        assert!(dir.path().join("out.txt").exists());
    }

    #[test]
    fn params_and_bound() {
        let dir = tempfile::tempdir().unwrap();
        let p = net_file(&dir);
        let p = p.to_str().unwrap();
        let (code, out, _) = call(&["params", "--network", p, "--epsilon", "0.1"]);
        assert_eq!(code, 0);
        assert!(out.contains("n = 343, m = 686"), "{out}");
        assert_eq!(call(&["bound", "--network", p, "--deleted-edges", "e4,e5"]).1, "2\n");
    }

    #[test]
    fn demo_symmetrize_outcomes() {
        let dir = tempfile::tempdir().unwrap();
        let sc = dir.path().join("demo.scn");
        fs::write(&sc, ILLUSTRATIVE_SCENARIO).unwrap();
        let s = sc.to_str().unwrap();
        let (code, out, _) = call(&["demo-symmetrize", s]);
        assert_eq!(code, 0);
        assert_eq!(out.matches("\tIDENTICAL\t").count(), 3);
        assert!(out.trim_end().ends_with("IDENTICAL"));

        let (code, out, _) = call(&["demo-symmetrize", s, "--secrets", "--runs", "50"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.trim_end().ends_with("DIFFERENT"));

        let same = ILLUSTRATIVE_SCENARIO.replace(
            "w2 1100120013001400150016001700180019001a001b001c001d001e001f002000",
            "w2 0100020003000400050006000700080009000a000b000c000d000e000f001000",
        );
        fs::write(&sc, same).unwrap();
        assert_eq!(call(&["demo-symmetrize", s]).0, 0);

        let uncovered = ILLUSTRATIVE_SCENARIO.replace("a1 e6 e7", "a1 e6");
        fs::write(&sc, uncovered).unwrap();
        let (code, _, err) = call(&["demo-symmetrize", s]);
        assert_eq!(code, 2);
        assert!(err.contains("does not cut"), "{err}");
    }
}

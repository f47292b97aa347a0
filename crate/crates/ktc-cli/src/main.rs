//! `ktc`: batch front end for the partial k-tree toolkit.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 capacity refusal.

mod output;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use ktc_core::acceptance::{all_passed, run_all};
use ktc_core::bounds::{bound_report, choose_block_size, LogBase};
use ktc_core::census::{
    census_ktrees, census_partial_ktrees_resumable, census_proper_linear_ktrees, CensusError,
    CensusOptions, CensusProgress,
};
use ktc_core::construction::{
    enumerate_summary, for_each_triple, preimage_bound, sample_triple_indexed, ConstructionError,
};
use ktc_core::bounds::{labeled_ktree_count, proper_linear_ktree_closed_form};
use ktc_core::graph::LabeledGraph;

use output::{OutputSink, Table};

/// Inclusive integer range: `a..b` or a single value.
#[derive(Debug, Clone, Copy)]
struct RangeArg {
    lo: usize,
    hi: usize,
}

impl RangeArg {
    fn values(&self) -> impl Iterator<Item = usize> {
        self.lo..=self.hi
    }
}

impl FromStr for RangeArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |t: &str| t.parse::<usize>().map_err(|e| format!("bad number {t:?}: {e}"));
        if let Some((a, b)) = s.split_once("..") {
            let (lo, hi) = (parse(a)?, parse(b)?);
            if lo > hi {
                return Err(format!("empty range {s:?}"));
            }
            Ok(RangeArg { lo, hi })
        } else {
            let v = parse(s)?;
            Ok(RangeArg { lo: v, hi: v })
        }
    }
}

#[derive(Debug, Args)]
struct CommonOut {
    /// Worker threads for parallel scans.
    #[arg(long, env = "KTC_WORKERS", default_value_t = 8, global = true)]
    workers: usize,
    /// Output format for tables.
    #[arg(long, value_parser = ["csv", "json"], default_value = "csv", global = true)]
    format: String,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Suppress the timestamp header line.
    #[arg(long, global = true)]
    no_header: bool,
}

#[derive(Debug, Parser)]
#[command(name = "ktc", version, about = "Exact counting, construction, and bound verification for labeled partial k-trees")]
struct Cli {
    #[command(flatten)]
    common: CommonOut,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count labeled graphs of treewidth at most k by exhaustive scan.
    Census {
        #[arg(long)]
        n: RangeArg,
        #[arg(long)]
        k: RangeArg,
        /// Checkpoint file (single-cell runs only); resumes when present.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Permit the hours-scale n = 8 scan.
        #[arg(long)]
        long_run: bool,
    },
    /// Count labeled k-trees and compare with the closed form.
    Ktrees {
        #[arg(long)]
        n: RangeArg,
        #[arg(long)]
        k: RangeArg,
    },
    /// Count labeled proper linear k-trees and compare with the closed form.
    Plk {
        #[arg(long)]
        n: RangeArg,
        #[arg(long)]
        k: RangeArg,
    },
    /// Emit generated graphs as graph6 lines.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        s: usize,
        /// Emit each distinct graph once instead of once per triple.
        #[arg(long)]
        dedup: bool,
        /// Emit this many seeded random triples instead of enumerating.
        #[arg(long)]
        sample: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// JSON-lines sidecar with the triple and decomposition certificate
        /// for each emitted graph.
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Per-cell duplicate analysis of the construction.
    Preimages {
        #[arg(long)]
        n: RangeArg,
        #[arg(long)]
        k: RangeArg,
        #[arg(long)]
        s: RangeArg,
    },
    /// Evaluate the count bounds over a parameter grid.
    Bounds {
        #[arg(long)]
        n: Option<RangeArg>,
        #[arg(long)]
        k: RangeArg,
        /// Block size; chosen per k when absent.
        #[arg(long)]
        s: Option<RangeArg>,
        /// Logarithm convention for the construction bound.
        #[arg(long, value_parser = ["binary", "natural"], default_value = "binary")]
        log_base: String,
        /// Report the optimal block size per k instead of bound rows.
        #[arg(long)]
        choose_s: bool,
        /// Fill the census column by brute force (rows within the census cap).
        #[arg(long)]
        with_census: bool,
    },
    /// Run the full verification suite; nonzero exit on any failure.
    Verify {
        /// Restrict to sandwich checks over this vertex-count range instead
        /// of running the full suite (requires --k).
        #[arg(long)]
        n: Option<RangeArg>,
        #[arg(long)]
        k: Option<RangeArg>,
        /// Golden report to diff against (stable columns only).
        #[arg(long)]
        golden: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = classify_error(&err);
            ExitCode::from(code)
        }
    }
}

/// Map refusals to exit 3, usage problems to 2, everything else to 1.
fn classify_error(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(c) = cause.downcast_ref::<CensusError>() {
            match c {
                CensusError::NeedsLongRun { .. } | CensusError::CapacityExceeded { .. } => return 3,
                CensusError::BadK { .. } => return 2,
                _ => {}
            }
        }
        if let Some(c) = cause.downcast_ref::<ConstructionError>() {
            match c {
                ConstructionError::Budget { .. } => return 3,
                ConstructionError::Invalid(_) => return 2,
                _ => {}
            }
        }
        if cause.downcast_ref::<UsageError>().is_some() {
            return 2;
        }
    }
    1
}

#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn run(cli: Cli) -> Result<ExitCode> {
    let sink = OutputSink::new(cli.common.out.clone(), cli.common.format.clone(), cli.common.no_header);
    let workers = cli.common.workers.max(1);
    match cli.command {
        Command::Census { n, k, checkpoint, long_run } => {
            cmd_census(sink, workers, n, k, checkpoint, long_run)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Ktrees { n, k } => {
            cmd_ktrees(sink, workers, n, k)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Plk { n, k } => {
            cmd_plk(sink, n, k)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Generate { n, k, s, dedup, sample, seed, sidecar } => {
            cmd_generate(sink, n, k, s, dedup, sample, seed, sidecar)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Preimages { n, k, s } => {
            cmd_preimages(sink, workers, n, k, s)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bounds { n, k, s, log_base, choose_s, with_census } => {
            cmd_bounds(sink, workers, n, k, s, &log_base, choose_s, with_census)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { n, k, golden } => match (n, k) {
            (Some(n), Some(k)) => cmd_verify_scoped(sink, workers, n, k),
            (None, None) => cmd_verify(sink, workers, golden),
            _ => bail!(UsageError("scoped verification needs both --n and --k".into())),
        },
    }
}

fn cells(n: RangeArg, k: RangeArg) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for n in n.values() {
        for k in k.values() {
            if k <= n {
                out.push((n, k));
            }
        }
    }
    out
}

fn require_nonempty<T>(cells: &[T], what: &str) -> Result<()> {
    if cells.is_empty() {
        bail!(UsageError(format!("no valid {what} cells in the given ranges")));
    }
    Ok(())
}

fn cmd_census(
    sink: OutputSink,
    workers: usize,
    n: RangeArg,
    k: RangeArg,
    checkpoint: Option<PathBuf>,
    long_run: bool,
) -> Result<()> {
    let grid = cells(n, k);
    require_nonempty(&grid, "census")?;
    if checkpoint.is_some() && grid.len() != 1 {
        bail!(UsageError("--checkpoint requires a single (n, k) cell".into()));
    }
    let mut table = Table::new(vec!["n", "k", "T", "elapsed_ms", "method"]);
    for (n, k) in grid {
        let opts = CensusOptions { workers, long_run, chunk_limit: None };
        let row = match census_partial_ktrees_resumable(n, k, &opts, checkpoint.as_deref())? {
            CensusProgress::Complete(row) => row,
            CensusProgress::Paused(_) => unreachable!("no chunk limit configured"),
        };
        table.push(vec![
            n.to_string(),
            k.to_string(),
            row.count.to_string(),
            row.elapsed_ms.to_string(),
            row.method,
        ]);
    }
    sink.write_table("census", &table)
}

fn cmd_ktrees(sink: OutputSink, workers: usize, n: RangeArg, k: RangeArg) -> Result<()> {
    let grid = cells(n, k);
    require_nonempty(&grid, "k-tree census")?;
    let mut table = Table::new(vec!["n", "k", "count", "closed_form", "match"]);
    for (n, k) in grid {
        let count = census_ktrees(n, k, workers)?;
        let formula = if n > k {
            labeled_ktree_count(n, k).map(|v| v.to_string()).unwrap_or_default()
        } else {
            "0".into()
        };
        let matches = formula == count.to_string()
            || (n == k + 1 && count.to_string() == "1")
            || (n <= k && count.to_string() == "0");
        table.push(vec![n.to_string(), k.to_string(), count.to_string(), formula, matches.to_string()]);
    }
    sink.write_table("ktrees", &table)
}

fn cmd_plk(sink: OutputSink, n: RangeArg, k: RangeArg) -> Result<()> {
    let grid = cells(n, k);
    require_nonempty(&grid, "proper-linear census")?;
    let mut table = Table::new(vec!["n", "k", "count", "closed_form", "match"]);
    for (n, k) in grid {
        let count = census_proper_linear_ktrees(n, k)?;
        // The closed form applies from n = k+2 on.
        let (formula, matches) = match proper_linear_ktree_closed_form(n, k) {
            Ok(v) => {
                let matched = v == count;
                (v.to_string(), matched.to_string())
            }
            Err(_) => ("-".into(), "-".into()),
        };
        table.push(vec![n.to_string(), k.to_string(), count.to_string(), formula, matches]);
    }
    sink.write_table("plk", &table)
}

#[allow(clippy::too_many_arguments)]
fn cmd_generate(
    sink: OutputSink,
    n: usize,
    k: usize,
    s: usize,
    dedup: bool,
    sample: Option<u64>,
    seed: u64,
    sidecar: Option<PathBuf>,
) -> Result<()> {
    let mut lines: Vec<String> = Vec::new();
    let mut sidecar_lines: Vec<String> = Vec::new();
    let mut emit = |g: &LabeledGraph, t: &ktc_core::construction::ConstructibleTriple| -> Result<()> {
        lines.push(g.to_graph6());
        if sidecar.is_some() {
            let certificate = if n > k {
                Some(t.ppd_witness().map_err(|e| anyhow!("{e}"))?)
            } else {
                None
            };
            sidecar_lines.push(serde_json::to_string(&serde_json::json!({
                "graph6": g.to_graph6(),
                "triple": t,
                "decomposition": certificate.map(|d| d.bags),
            }))?);
        }
        Ok(())
    };
    if let Some(count) = sample {
        for index in 0..count {
            let t = sample_triple_indexed(n, k, s, seed, index)?;
            let g = t.build_graph()?;
            emit(&g, &t)?;
        }
    } else if dedup {
        let mut firsts: BTreeMap<LabeledGraph, ktc_core::construction::ConstructibleTriple> = BTreeMap::new();
        for_each_triple(n, k, s, None, |t| {
            let g = t.build_graph().expect("enumerated triples are valid");
            firsts.entry(g).or_insert(t);
        })?;
        for (g, t) in &firsts {
            emit(g, t)?;
        }
    } else {
        let mut pending: Result<()> = Ok(());
        for_each_triple(n, k, s, None, |t| {
            if pending.is_err() {
                return;
            }
            let g = t.build_graph().expect("enumerated triples are valid");
            pending = emit(&g, &t);
        })?;
        pending?;
    }
    if let Some(path) = sidecar {
        std::fs::write(&path, sidecar_lines.join("\n") + "\n")
            .with_context(|| format!("writing sidecar {}", path.display()))?;
    }
    sink.write_lines("generate", &lines)
}

fn cmd_preimages(sink: OutputSink, workers: usize, n: RangeArg, k: RangeArg, s: RangeArg) -> Result<()> {
    let mut table = Table::new(vec![
        "n",
        "k",
        "s",
        "triple_count",
        "distinct_graphs",
        "max_preimages",
        "preimage_bound",
        "oversized_block",
    ]);
    let mut any = false;
    for (n, k) in cells(n, k) {
        if k < 2 {
            continue;
        }
        for s in s.values() {
            any = true;
            let summary = enumerate_summary(n, k, s, workers, None)?;
            let bound = preimage_bound(n, k, s)?;
            table.push(vec![
                n.to_string(),
                k.to_string(),
                s.to_string(),
                summary.triple_count.to_string(),
                summary.distinct_count().to_string(),
                summary.max_preimages().to_string(),
                bound.to_string(),
                summary.oversized_block.to_string(),
            ]);
        }
    }
    if !any {
        bail!(UsageError("no valid preimage cells in the given ranges (k must be at least 2)".into()));
    }
    sink.write_table("preimages", &table)
}

#[allow(clippy::too_many_arguments)]
fn cmd_bounds(
    sink: OutputSink,
    workers: usize,
    n: Option<RangeArg>,
    k: RangeArg,
    s: Option<RangeArg>,
    log_base: &str,
    choose_s: bool,
    with_census: bool,
) -> Result<()> {
    let base = match log_base {
        "natural" => LogBase::Natural,
        _ => LogBase::Binary,
    };
    if choose_s {
        let mut table = Table::new(vec![
            "k",
            "s",
            "round_ln_k",
            "ln_k_lo",
            "ln_k_hi",
            "cost_prev",
            "cost_at",
            "cost_next",
        ]);
        for k in k.values() {
            let choice = choose_block_size(k)?;
            let cost_of = |s: usize| {
                choice
                    .neighborhood
                    .iter()
                    .find(|(cand, _)| *cand == s)
                    .map(|(_, iv)| {
                        format!(
                            "[{},{}]",
                            ktc_core::bignum::rational_to_string(&iv.lo),
                            ktc_core::bignum::rational_to_string(&iv.hi)
                        )
                    })
                    .unwrap_or_else(|| "-".into())
            };
            table.push(vec![
                k.to_string(),
                choice.s.to_string(),
                choice.rounded_continuous.to_string(),
                ktc_core::bignum::rational_to_string(&choice.continuous_optimum.lo),
                ktc_core::bignum::rational_to_string(&choice.continuous_optimum.hi),
                cost_of(choice.s.saturating_sub(1)),
                cost_of(choice.s),
                cost_of(choice.s + 1),
            ]);
        }
        return sink.write_table("bounds", &table);
    }
    let n = n.ok_or_else(|| anyhow!(UsageError("--n is required unless --choose-s is given".into())))?;
    let mut table = Table::new(vec![
        "n",
        "k",
        "s",
        "ktree_ub",
        "ktree_ub_guarded",
        "dominant_ub",
        "apex_lb",
        "asymptotic_apex_lb",
        "construction_lb_lo",
        "construction_lb_hi",
        "ratio_lb",
        "simplified_lb_lo",
        "simplified_lb_hi",
        "census",
    ]);
    let grid = cells(n, k);
    require_nonempty(&grid, "bounds")?;
    for (n, k) in grid {
        let s_values: Vec<usize> = match s {
            Some(r) => r.values().collect(),
            None => vec![if k >= 2 { choose_block_size(k)?.s } else { 1 }],
        };
        for s in s_values {
            let mut report = bound_report(n, k, s, base)?;
            if with_census && n <= ktc_core::limits::CENSUS_MAX_N {
                let row = ktc_core::census::census_partial_ktrees(n, k, workers)?;
                report.census = Some(ktc_core::bignum::BigNumber::from_biguint(row.count));
            }
            let interval_cells = |v: &Option<ktc_core::bignum::BigNumber>| match v {
                Some(ktc_core::bignum::BigNumber::Interval(iv)) => (
                    ktc_core::bignum::rational_to_string(&iv.lo),
                    ktc_core::bignum::rational_to_string(&iv.hi),
                ),
                Some(other) => (other.to_decimal_string(), other.to_decimal_string()),
                None => ("-".into(), "-".into()),
            };
            let (clo, chi) = interval_cells(&report.construction_lb);
            let (slo, shi) = interval_cells(&report.simplified_ratio_lb);
            table.push(vec![
                n.to_string(),
                k.to_string(),
                s.to_string(),
                report.ktree_ub.to_decimal_string(),
                report.ktree_ub_guarded.to_string(),
                report.dominant_ub.to_decimal_string(),
                report.apex_lb.to_decimal_string(),
                report.asymptotic_apex_lb.to_decimal_string(),
                clo,
                chi,
                report.ratio_lb.as_ref().map(|v| v.to_decimal_string()).unwrap_or_else(|| "-".into()),
                slo,
                shi,
                report.census.as_ref().map(|v| v.to_decimal_string()).unwrap_or_else(|| "-".into()),
            ]);
        }
    }
    sink.write_table("bounds", &table)
}

/// Sandwich verification over a parameter grid: one row per cell with every
/// inequality's operands. Capacity refusals become skipped rows, not
/// failures.
fn cmd_verify_scoped(sink: OutputSink, workers: usize, n: RangeArg, k: RangeArg) -> Result<ExitCode> {
    let grid = cells(n, k);
    require_nonempty(&grid, "verification")?;
    let mut table = Table::new(vec!["n", "k", "status", "sandwich", "construction_lb_lo"]);
    let mut failed = false;
    for (n, k) in grid {
        match ktc_core::bounds::verify_sandwich(n, k, workers) {
            Ok(report) => {
                let status = if report.holds { "PASS" } else { "FAIL" };
                failed |= !report.holds;
                let construction = report
                    .construction_lb
                    .as_ref()
                    .map(|b| match b {
                        ktc_core::bignum::BigNumber::Interval(iv) => {
                            ktc_core::bignum::rational_to_string(&iv.lo)
                        }
                        other => other.to_decimal_string(),
                    })
                    .unwrap_or_else(|| "-".into());
                println!("sandwich ({n},{k}): {} {status}", report.summary_line());
                table.push(vec![
                    n.to_string(),
                    k.to_string(),
                    status.into(),
                    report.summary_line(),
                    construction,
                ]);
            }
            Err(err) if is_capacity(&err) => {
                println!("sandwich ({n},{k}): skipped ({err})");
                table.push(vec![n.to_string(), k.to_string(), "SKIP".into(), err.to_string(), "-".into()]);
            }
            Err(err) => return Err(err.into()),
        }
    }
    sink.write_table("verify", &table)?;
    Ok(if failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn is_capacity(err: &ktc_core::bounds::BoundsError) -> bool {
    matches!(
        err,
        ktc_core::bounds::BoundsError::Census(
            CensusError::NeedsLongRun { .. } | CensusError::CapacityExceeded { .. }
        )
    )
}

fn cmd_verify(sink: OutputSink, workers: usize, golden: Option<PathBuf>) -> Result<ExitCode> {
    let outcomes = run_all(workers);
    for outcome in &outcomes {
        println!("{}", outcome.line());
    }
    let mut table = Table::new(vec!["id", "name", "status", "detail", "elapsed_ms"]);
    for o in &outcomes {
        table.push(vec![
            o.id.to_string(),
            o.name.to_string(),
            if o.passed { "PASS".into() } else { "FAIL".into() },
            o.detail.clone(),
            o.elapsed_ms.to_string(),
        ]);
    }
    sink.write_table("verify", &table)?;
    if let Some(path) = golden {
        let stable: Vec<String> = outcomes
            .iter()
            .map(|o| format!("{}:{}:{}", o.id, o.name, if o.passed { "PASS" } else { "FAIL" }))
            .collect();
        let want = std::fs::read_to_string(&path)
            .with_context(|| format!("reading golden file {}", path.display()))?;
        let want_lines: Vec<&str> = want.lines().filter(|l| !l.is_empty()).collect();
        let mut diffs = Vec::new();
        for i in 0..stable.len().max(want_lines.len()) {
            let got = stable.get(i).map(String::as_str).unwrap_or("<missing>");
            let expect = want_lines.get(i).copied().unwrap_or("<missing>");
            if got != expect {
                diffs.push(format!("line {}: expected {expect:?}, got {got:?}", i + 1));
            }
        }
        if !diffs.is_empty() {
            eprintln!("golden mismatch:\n{}", diffs.join("\n"));
            return Ok(ExitCode::from(1));
        }
    }
    if all_passed(&outcomes) {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

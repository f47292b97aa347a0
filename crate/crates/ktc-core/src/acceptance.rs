//! The verification suite: nine criteria covering the k-tree census closed
//! form, the forest dual oracle, the count sandwich, construction
//! soundness, triple counting, preimage bounds, the distinct-graph ratio,
//! the proper-linear-k-tree closed form, and determinism under parallelism.
//!
//! `run_all` powers both the `acceptance` integration test target and the
//! command-line `verify` subcommand.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;

use crate::bounds::{
    apex_forest_lower_bound, construction_lower_bound, ktree_subgraph_upper_bound,
    labeled_ktree_count, proper_linear_ktree_closed_form, ratio_lower_bound, refine_interval,
    LogBase,
};
use crate::census::{census_forests, census_ktrees, census_partial_ktrees, census_proper_linear_ktrees};
use crate::construction::{
    enumerate_summary, for_each_triple, preimage_bound, settled_sets, triple_count_lower_bound,
};
use crate::limits::INTERVAL_PRECISION_BITS;
use crate::width::{check_ppd, proper_pathwidth_exact, treewidth_exact};

/// Outcome of one criterion.
#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        format!(
            "criterion {}: {:<32} {} ({}; {} ms)",
            self.id, self.name, status, self.detail, self.elapsed_ms
        )
    }
}

/// The construction grid every enumeration-backed criterion runs over:
/// k in {2,3}, k <= n <= 7, s in {1,2,3}.
pub fn triple_grid() -> Vec<(usize, usize, usize)> {
    let mut cells = Vec::new();
    for k in [2usize, 3] {
        for n in k..=7 {
            for s in 1..=3 {
                cells.push((n, k, s));
            }
        }
    }
    cells
}

/// Every parallel-path number the criteria consume; computed per worker
/// count for the determinism criterion.
#[derive(Debug, Clone, PartialEq)]
struct Numbers {
    /// (n, k) -> k-tree census, for 1 <= k <= 4, k+2 <= n <= 7.
    ktrees: BTreeMap<(usize, usize), BigUint>,
    /// n -> treewidth-based forest count, n <= 6.
    partial_k1: BTreeMap<usize, BigUint>,
    /// n -> acyclicity-based forest count, n <= 6.
    forests: BTreeMap<usize, BigUint>,
    /// (n, k) -> partial-k-tree census for 1 <= k < n <= 6.
    partial: BTreeMap<(usize, usize), BigUint>,
    /// (n, k) -> proper linear k-tree census for k in {2,3}, k+2 <= n <= 6.
    proper_linear: BTreeMap<(usize, usize), BigUint>,
    /// (n, k, s) -> (triple count, distinct graphs, max preimages).
    cells: BTreeMap<(usize, usize, usize), (u64, u64, u64)>,
}

struct Timings {
    ktrees_ms: u128,
    sandwich_census_ms: u128,
}

fn compute_numbers(workers: usize) -> Result<(Numbers, Timings), String> {
    let t0 = Instant::now();
    let mut ktrees = BTreeMap::new();
    for k in 1..=4usize {
        for n in k + 2..=7 {
            let count = census_ktrees(n, k, workers).map_err(|e| e.to_string())?;
            ktrees.insert((n, k), count);
        }
    }
    let ktrees_ms = t0.elapsed().as_millis();

    let mut partial_k1 = BTreeMap::new();
    let mut forests = BTreeMap::new();
    for n in 1..=6usize {
        partial_k1.insert(n, census_partial_ktrees(n, 1, workers).map_err(|e| e.to_string())?.count);
        forests.insert(n, census_forests(n, workers).map_err(|e| e.to_string())?);
    }

    let t1 = Instant::now();
    let mut partial = BTreeMap::new();
    for n in 2..=6usize {
        for k in 1..n {
            let row = census_partial_ktrees(n, k, workers).map_err(|e| e.to_string())?;
            partial.insert((n, k), row.count);
        }
    }
    let sandwich_census_ms = t1.elapsed().as_millis();

    let mut proper_linear = BTreeMap::new();
    for k in [2usize, 3] {
        for n in k + 2..=6 {
            proper_linear.insert((n, k), census_proper_linear_ktrees(n, k).map_err(|e| e.to_string())?);
        }
    }

    let mut cells = BTreeMap::new();
    for (n, k, s) in triple_grid() {
        let summary = enumerate_summary(n, k, s, workers, None).map_err(|e| e.to_string())?;
        cells.insert((n, k, s), (summary.triple_count, summary.distinct_count(), summary.max_preimages()));
    }
    Ok((
        Numbers { ktrees, partial_k1, forests, partial, proper_linear, cells },
        Timings { ktrees_ms, sandwich_census_ms },
    ))
}

fn criterion<T>(
    id: usize,
    name: &'static str,
    body: impl FnOnce() -> Result<(bool, String), T>,
) -> CriterionOutcome
where
    T: std::fmt::Display,
{
    let start = Instant::now();
    let (passed, detail) = match body() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionOutcome { id, name, passed, detail, elapsed_ms: start.elapsed().as_millis() }
}

/// Runs all nine criteria at the given default parallelism.
pub fn run_all(workers: usize) -> Vec<CriterionOutcome> {
    let mut outcomes = Vec::new();
    let computed = compute_numbers(workers);
    let (numbers, timings) = match computed {
        Ok(pair) => pair,
        Err(e) => {
            outcomes.push(CriterionOutcome {
                id: 0,
                name: "shared computation",
                passed: false,
                detail: format!("error: {e}"),
                elapsed_ms: 0,
            });
            return outcomes;
        }
    };

    outcomes.push(criterion::<String>(1, "k-tree census closed form", || {
        let mut mismatches = Vec::new();
        for (&(n, k), count) in &numbers.ktrees {
            let formula = labeled_ktree_count(n, k).map_err(|e| e.to_string())?;
            if *count != formula {
                mismatches.push(format!("({n},{k}): census {count} vs formula {formula}"));
            }
        }
        for (n, k, want) in [(4, 2, 6u32), (5, 2, 70), (6, 2, 1215), (6, 3, 200)] {
            if numbers.ktrees[&(n, k)] != BigUint::from(want) {
                mismatches.push(format!("({n},{k}) expected {want}"));
            }
        }
        let within_budget = timings.ktrees_ms < 60_000;
        if !within_budget {
            mismatches.push(format!("census took {} ms >= 60 s", timings.ktrees_ms));
        }
        let detail = if mismatches.is_empty() {
            format!("{} (n,k) pairs exact, census in {} ms", numbers.ktrees.len(), timings.ktrees_ms)
        } else {
            mismatches.join("; ")
        };
        Ok((mismatches.is_empty(), detail))
    }));

    outcomes.push(criterion::<String>(2, "forest dual oracle", || {
        let mut mismatches = Vec::new();
        for (&n, via_width) in &numbers.partial_k1 {
            let via_acyclicity = &numbers.forests[&n];
            if via_width != via_acyclicity {
                mismatches.push(format!("n={n}: treewidth count {via_width} vs acyclic count {via_acyclicity}"));
            }
        }
        let detail = if mismatches.is_empty() {
            format!("both recognizers agree for n <= 6 (F(6) = {})", numbers.forests[&6])
        } else {
            mismatches.join("; ")
        };
        Ok((mismatches.is_empty(), detail))
    }));

    outcomes.push(criterion::<String>(3, "count sandwich", || {
        let mut failures = Vec::new();
        for (&(n, k), census) in &numbers.partial {
            let lb = apex_forest_lower_bound(n, k).map_err(|e| e.to_string())?;
            let ub = ktree_subgraph_upper_bound(n, k).map_err(|e| e.to_string())?;
            if &lb > census {
                failures.push(format!("({n},{k}): apex lb {lb} > census {census}"));
            }
            if census > &ub.value {
                failures.push(format!("({n},{k}): census {census} > ktree ub {}", ub.value));
            }
            if k >= 2 {
                let iv = refine_interval(INTERVAL_PRECISION_BITS, |p| {
                    construction_lower_bound(n, k, LogBase::default(), p)
                })
                .map_err(|e| e.to_string())?;
                let census_rat = BigRational::from_integer(census.clone().into());
                if iv.lo > census_rat {
                    failures.push(format!("({n},{k}): construction lb exceeds census {census}"));
                }
            }
        }
        if timings.sandwich_census_ms >= 300_000 {
            failures.push(format!("census sweep took {} ms >= 5 min", timings.sandwich_census_ms));
        }
        let detail = if failures.is_empty() {
            format!("{} (n,k) pairs sandwiched, sweep in {} ms", numbers.partial.len(), timings.sandwich_census_ms)
        } else {
            failures.join("; ")
        };
        Ok((failures.is_empty(), detail))
    }));

    outcomes.push(criterion::<String>(4, "construction soundness", || {
        let mut failures = 0usize;
        let mut first = String::new();
        let mut triples_seen = 0u64;
        let mut graphs_checked = 0usize;
        for (n, k, s) in triple_grid() {
            let mut witness_issue = None;
            for_each_triple(n, k, s, None, |t| {
                triples_seen += 1;
                if n > k && witness_issue.is_none() {
                    match t.ppd_witness() {
                        Ok(d) => {
                            if d.width() != k {
                                witness_issue = Some(format!("witness width {} != {k}", d.width()));
                            } else if let Err(v) = check_ppd(&t.build_graph().expect("valid triple"), &d) {
                                witness_issue = Some(format!("witness rejected: {v}"));
                            }
                        }
                        Err(e) => witness_issue = Some(format!("no witness: {e}")),
                    }
                }
            })
            .map_err(|e| e.to_string())?;
            if let Some(issue) = witness_issue {
                failures += 1;
                if first.is_empty() {
                    first = format!("({n},{k},{s}): {issue}");
                }
            }
            let summary = enumerate_summary(n, k, s, workers, None).map_err(|e| e.to_string())?;
            for g in summary.preimages.keys() {
                graphs_checked += 1;
                let tw = treewidth_exact(g).map_err(|e| e.to_string())?;
                let ppw = proper_pathwidth_exact(g).map_err(|e| e.to_string())?;
                if tw > k || ppw > k {
                    failures += 1;
                    if first.is_empty() {
                        first = format!("({n},{k},{s}): graph {g} has tw={tw}, ppw={ppw}");
                    }
                }
            }
        }
        let detail = if failures == 0 {
            format!("{triples_seen} triples witnessed, {graphs_checked} distinct graphs width-confirmed")
        } else {
            format!("{failures} failures, first: {first}")
        };
        Ok((failures == 0, detail))
    }));

    outcomes.push(criterion::<String>(5, "triple count lower bound", || {
        let mut failures = Vec::new();
        for (&(n, k, s), &(count, _, _)) in &numbers.cells {
            let bound = triple_count_lower_bound(n, k, s).map_err(|e| e.to_string())?;
            if BigUint::from(count) < bound {
                failures.push(format!("({n},{k},{s}): count {count} < bound {bound}"));
            }
        }
        let smallest = numbers.cells[&(3, 2, 1)].0;
        let smallest_bound = triple_count_lower_bound(3, 2, 1).map_err(|e| e.to_string())?;
        if smallest != 4 || smallest_bound != BigUint::from(4u32) {
            failures.push(format!("(3,2,1): count {smallest}, bound {smallest_bound}, expected 4 = 4"));
        }
        let detail = if failures.is_empty() {
            format!("{} cells above the closed-form bound; (3,2,1) = 4 exactly", numbers.cells.len())
        } else {
            failures.join("; ")
        };
        Ok((failures.is_empty(), detail))
    }));

    outcomes.push(criterion::<String>(6, "preimage bound", || {
        let mut failures = 0usize;
        let mut first = String::new();
        let mut triples_checked = 0u64;
        for (n, k, s) in triple_grid() {
            let bound = preimage_bound(n, k, s).map_err(|e| e.to_string())?;
            let (_, _, max_pre) = numbers.cells[&(n, k, s)];
            if BigUint::from(max_pre) > bound {
                failures += 1;
                if first.is_empty() {
                    first = format!("({n},{k},{s}): max preimages {max_pre} > bound {bound}");
                }
            }
            let ambiguity_cap = BigUint::from(1u32) << k;
            let mut cell_issue = None;
            for_each_triple(n, k, s, None, |t| {
                triples_checked += 1;
                if cell_issue.is_some() {
                    return;
                }
                let h = t.build_graph().expect("valid triple");
                match settled_sets(&t, &h) {
                    Ok(d) => {
                        if d.ambiguity_product() > ambiguity_cap {
                            cell_issue = Some(format!("ambiguity product beyond 2^{k}"));
                        }
                        if d.post_window_total() > n {
                            cell_issue = Some(format!("settled totals beyond n={n}"));
                        }
                    }
                    Err(e) => cell_issue = Some(e.to_string()),
                }
            })
            .map_err(|e| e.to_string())?;
            if let Some(issue) = cell_issue {
                failures += 1;
                if first.is_empty() {
                    first = format!("({n},{k},{s}): {issue}");
                }
            }
        }
        let detail = if failures == 0 {
            format!("{triples_checked} triples: settled sets disjoint, products within 2^k, preimages bounded")
        } else {
            format!("{failures} failures, first: {first}")
        };
        Ok((failures == 0, detail))
    }));

    outcomes.push(criterion::<String>(7, "distinct-graph ratio bound", || {
        let mut failures = Vec::new();
        for (&(n, k, s), &(count, distinct, _)) in &numbers.cells {
            let ratio = ratio_lower_bound(n, k, s).map_err(|e| e.to_string())?;
            let distinct_rat = BigRational::from_integer((distinct as i64).into());
            if ratio >= BigRational::from_integer(1.into()) && distinct_rat < ratio {
                failures.push(format!("({n},{k},{s}): R={distinct} below ratio bound {ratio}"));
            }
            // R is also at least the triple count over the preimage cap.
            let bound = preimage_bound(n, k, s).map_err(|e| e.to_string())?;
            let implied = BigUint::from(count).div_ceil(&bound);
            if BigUint::from(distinct) < implied {
                failures.push(format!("({n},{k},{s}): R={distinct} below count/preimage quotient {implied}"));
            }
        }
        let detail = if failures.is_empty() {
            format!("{} cells satisfy the ratio bound", numbers.cells.len())
        } else {
            failures.join("; ")
        };
        Ok((failures.is_empty(), detail))
    }));

    outcomes.push(criterion::<String>(8, "proper linear k-tree closed form", || {
        let mut failures = Vec::new();
        for (&(n, k), count) in &numbers.proper_linear {
            let formula = proper_linear_ktree_closed_form(n, k).map_err(|e| e.to_string())?;
            if count != &formula {
                failures.push(format!("({n},{k}): census {count} vs formula {formula}"));
            }
        }
        for (n, k, want) in [(4usize, 2usize, 6u32), (5, 2, 60), (6, 2, 720), (6, 3, 180)] {
            if numbers.proper_linear[&(n, k)] != BigUint::from(want) {
                failures.push(format!("({n},{k}) expected {want}"));
            }
        }
        let detail = if failures.is_empty() {
            format!("{} (n,k) pairs exact", numbers.proper_linear.len())
        } else {
            failures.join("; ")
        };
        Ok((failures.is_empty(), detail))
    }));

    outcomes.push(criterion::<String>(9, "determinism under parallelism", || {
        let mut variants: Vec<(usize, Numbers)> = Vec::new();
        for w in [1usize, 2, 8] {
            let nums = if w == workers { numbers.clone() } else { compute_numbers(w)?.0 };
            variants.push((w, nums));
        }
        let (_, reference) = &variants[0];
        let mut failures = Vec::new();
        for (w, nums) in &variants[1..] {
            if nums != reference {
                failures.push(format!("worker count {w} changed the numbers"));
            }
        }
        let detail = if failures.is_empty() {
            "identical numbers at 1, 2, and 8 workers".to_string()
        } else {
            failures.join("; ")
        };
        Ok((failures.is_empty(), detail))
    }));

    outcomes
}

/// True when every criterion passed.
pub fn all_passed(outcomes: &[CriterionOutcome]) -> bool {
    !outcomes.is_empty() && outcomes.iter().all(|o| o.passed)
}

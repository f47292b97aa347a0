//! Brute-force exact censuses over all labeled graphs at small n.
//!
//! Every census scans graph indices in fixed-size chunks; chunks are
//! processed in parallel and reduced in index order, so the result does not
//! depend on the worker count. The partial-k-tree census can checkpoint its
//! cursor and resume.

use std::collections::HashSet;
use std::path::Path;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{pair_count, LabeledGraph};
use crate::limits::{CENSUS_CHUNK, CENSUS_LONG_RUN_MAX_N, CENSUS_MAX_N};
use crate::width::is_partial_ktree;

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("census over n={n} needs the long-run flag (cap {max_n} beyond it)")]
    NeedsLongRun { n: usize, max_n: usize },
    #[error("census over n={n} exceeds even the long-run cap of {max_n}")]
    CapacityExceeded { n: usize, max_n: usize },
    #[error("parameter k={k} out of range 1..={n}")]
    BadK { k: usize, n: usize },
    #[error("checkpoint at {path} belongs to a different census (found n={found_n}, k={found_k})")]
    CheckpointMismatch { path: String, found_n: usize, found_k: usize },
    #[error("checkpoint io: {0}")]
    Io(#[from] std::io::Error),
    #[error("checkpoint parse: {0}")]
    Parse(#[from] serde_json::Error),
}

/// One census result row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    pub n: usize,
    pub k: usize,
    pub count: BigUint,
    pub elapsed_ms: u128,
    pub method: String,
}

/// Scan cursor persisted between long runs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub n: usize,
    pub k: usize,
    pub next_index: u128,
    pub partial_count: u64,
}

#[derive(Debug, Clone, Default)]
pub struct CensusOptions {
    pub workers: usize,
    pub long_run: bool,
    /// Stop after this many chunks (forces a paused checkpoint); test hook
    /// for resume behavior.
    pub chunk_limit: Option<usize>,
}

pub enum CensusProgress {
    Complete(CensusRow),
    Paused(Checkpoint),
}

/// Counts codes in `[start, total)` satisfying `pred`, chunked and parallel,
/// stopping early after `chunk_limit` chunks.
fn scan_codes(
    n: usize,
    start: u128,
    workers: usize,
    chunk_limit: Option<usize>,
    pred: impl Fn(&LabeledGraph) -> bool + Sync,
) -> (u64, u128) {
    let total = 1u128 << pair_count(n);
    let mut chunks: Vec<(u128, u128)> = Vec::new();
    let mut at = start;
    while at < total {
        let end = (at + CENSUS_CHUNK).min(total);
        chunks.push((at, end));
        at = end;
        if let Some(limit) = chunk_limit {
            if chunks.len() >= limit {
                break;
            }
        }
    }
    let scanned_to = chunks.last().map(|&(_, end)| end).unwrap_or(start);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool construction");
    let counts: Vec<u64> = pool.install(|| {
        chunks
            .par_iter()
            .map(|&(lo, hi)| {
                let mut c = 0u64;
                for code in lo..hi {
                    let g = LabeledGraph::from_index(n, code).expect("code < 2^C(n,2)");
                    if pred(&g) {
                        c += 1;
                    }
                }
                c
            })
            .collect()
    });
    (counts.iter().sum(), scanned_to)
}

fn check_census_caps(n: usize, k: usize, long_run: bool) -> Result<(), CensusError> {
    if k == 0 || k > n {
        return Err(CensusError::BadK { k, n });
    }
    if n > CENSUS_LONG_RUN_MAX_N {
        return Err(CensusError::CapacityExceeded { n, max_n: CENSUS_LONG_RUN_MAX_N });
    }
    if n > CENSUS_MAX_N && !long_run {
        return Err(CensusError::NeedsLongRun { n, max_n: CENSUS_LONG_RUN_MAX_N });
    }
    Ok(())
}

/// Exact number of n-vertex labeled graphs with treewidth at most k, by
/// testing every graph index. Resumes from `checkpoint_path` when the file
/// exists; writes the cursor there when pausing.
pub fn census_partial_ktrees_resumable(
    n: usize,
    k: usize,
    opts: &CensusOptions,
    checkpoint_path: Option<&Path>,
) -> Result<CensusProgress, CensusError> {
    check_census_caps(n, k, opts.long_run)?;
    let started = Instant::now();
    let mut start = 0u128;
    let mut carried = 0u64;
    if let Some(path) = checkpoint_path {
        if path.exists() {
            let cp: Checkpoint = serde_json::from_str(&std::fs::read_to_string(path)?)?;
            if cp.n != n || cp.k != k {
                return Err(CensusError::CheckpointMismatch {
                    path: path.display().to_string(),
                    found_n: cp.n,
                    found_k: cp.k,
                });
            }
            start = cp.next_index;
            carried = cp.partial_count;
        }
    }
    let (found, scanned_to) = scan_codes(n, start, opts.workers, opts.chunk_limit, |g| {
        is_partial_ktree(g, k).expect("census caps keep n within solver range")
    });
    let count = carried + found;
    if scanned_to < (1u128 << pair_count(n)) {
        let cp = Checkpoint { n, k, next_index: scanned_to, partial_count: count };
        if let Some(path) = checkpoint_path {
            std::fs::write(path, serde_json::to_string_pretty(&cp)?)?;
        }
        return Ok(CensusProgress::Paused(cp));
    }
    if let Some(path) = checkpoint_path {
        if path.exists() {
            std::fs::remove_file(path)?;
        }
    }
    Ok(CensusProgress::Complete(CensusRow {
        n,
        k,
        count: BigUint::from(count),
        elapsed_ms: started.elapsed().as_millis(),
        method: "index-scan/treewidth-dp".into(),
    }))
}

/// Convenience wrapper: full scan, no checkpoint.
pub fn census_partial_ktrees(n: usize, k: usize, workers: usize) -> Result<CensusRow, CensusError> {
    let opts = CensusOptions { workers, long_run: false, chunk_limit: None };
    match census_partial_ktrees_resumable(n, k, &opts, None)? {
        CensusProgress::Complete(row) => Ok(row),
        CensusProgress::Paused(_) => unreachable!("no chunk limit was set"),
    }
}

/// Union-find acyclicity test; the treewidth-free forest recognizer.
pub fn is_forest(g: &LabeledGraph) -> bool {
    let n = g.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for (u, v) in g.edges() {
        let (ru, rv) = (find(&mut parent, u - 1), find(&mut parent, v - 1));
        if ru == rv {
            return false;
        }
        parent[ru] = rv;
    }
    true
}

/// Exact number of labeled forests on n vertices, via acyclicity alone.
/// Deliberately shares no machinery with the treewidth path so the two can
/// cross-check each other at k = 1.
pub fn census_forests(n: usize, workers: usize) -> Result<BigUint, CensusError> {
    check_census_caps(n, 1, false)?;
    let (count, _) = scan_codes(n, 0, workers, None, is_forest);
    Ok(BigUint::from(count))
}

/// k-tree recognizer: peel simplicial degree-k vertices down to K_{k+1}.
/// In a k-tree the simplicial vertices are exactly the degree-k ones and
/// peeling any of them keeps a k-tree, so greedy peeling is complete.
pub fn is_ktree(g: &LabeledGraph, k: usize) -> bool {
    let n = g.n();
    if n < k + 1 {
        return false;
    }
    if g.edge_count() != k * n - k * (k + 1) / 2 {
        return false;
    }
    let adj = g.adjacency_masks();
    let mut alive: u16 = ((1u32 << n) - 1) as u16;
    let mut remaining = n;
    while remaining > k + 1 {
        let mut peeled = None;
        let mut vs = alive;
        'next: while vs != 0 {
            let v = vs.trailing_zeros() as usize;
            vs &= vs - 1;
            let nb = adj[v] & alive;
            if nb.count_ones() as usize != k {
                continue;
            }
            let mut check = nb;
            while check != 0 {
                let u = check.trailing_zeros() as usize;
                check &= check - 1;
                if adj[u] & nb & !(1 << u) != nb & !(1 << u) {
                    continue 'next;
                }
            }
            peeled = Some(v);
            break;
        }
        match peeled {
            Some(v) => {
                alive &= !(1 << v);
                remaining -= 1;
            }
            None => return false,
        }
    }
    // The residue must be K_{k+1}.
    let mut vs = alive;
    while vs != 0 {
        let v = vs.trailing_zeros() as usize;
        vs &= vs - 1;
        if (adj[v] & alive).count_ones() as usize != k {
            return false;
        }
    }
    true
}

/// Simplicial-elimination chordality test (any-degree peeling).
pub fn is_chordal(g: &LabeledGraph) -> bool {
    let n = g.n();
    let adj = g.adjacency_masks();
    let mut alive: u16 = ((1u32 << n) - 1) as u16;
    for _ in 0..n {
        let mut vs = alive;
        let mut found = None;
        'next: while vs != 0 {
            let v = vs.trailing_zeros() as usize;
            vs &= vs - 1;
            let nb = adj[v] & alive;
            let mut check = nb;
            while check != 0 {
                let u = check.trailing_zeros() as usize;
                check &= check - 1;
                if adj[u] & nb & !(1 << u) != nb & !(1 << u) {
                    continue 'next;
                }
            }
            found = Some(v);
            break;
        }
        match found {
            Some(v) => alive &= !(1 << v),
            None => return false,
        }
    }
    true
}

/// Exact count of labeled k-trees on n vertices by scanning every index.
pub fn census_ktrees(n: usize, k: usize, workers: usize) -> Result<BigUint, CensusError> {
    check_census_caps(n, k, false)?;
    let (count, _) = scan_codes(n, 0, workers, None, |g| is_ktree(g, k));
    Ok(BigUint::from(count))
}

/// Exact count of labeled proper linear k-trees: graphs grown from a
/// (k+1)-clique by joining each new vertex v_i to a k-clique K_i that
/// contains v_{i-1} and otherwise sits inside K_{i-1}. Enumerates every
/// vertex ordering and every clique chain, deduplicating the results.
pub fn census_proper_linear_ktrees(n: usize, k: usize) -> Result<BigUint, CensusError> {
    check_census_caps(n, k, false)?;
    if n < k + 1 {
        return Ok(BigUint::from(0u32));
    }
    let mut graphs: HashSet<LabeledGraph> = HashSet::new();
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n + 1];
    permute_orders(n, &mut order, &mut used, &mut |order| {
        let mut g = LabeledGraph::empty(n).expect("n within cap");
        for a in 0..=k {
            for b in a + 1..=k {
                g.add_edge(order[a], order[b]);
            }
        }
        // K of the (k+1)-th vertex is the first k vertices.
        let clique: Vec<usize> = order[..k].to_vec();
        extend_chain(n, order, k + 1, clique, g, &mut graphs);
    });
    Ok(BigUint::from(graphs.len() as u64))
}

fn permute_orders(n: usize, order: &mut Vec<usize>, used: &mut [bool], visit: &mut impl FnMut(&[usize])) {
    if order.len() == n {
        visit(order);
        return;
    }
    for v in 1..=n {
        if !used[v] {
            used[v] = true;
            order.push(v);
            permute_orders(n, order, used, visit);
            order.pop();
            used[v] = false;
        }
    }
}

fn extend_chain(
    n: usize,
    order: &[usize],
    placed: usize,
    prev_clique: Vec<usize>,
    g: LabeledGraph,
    graphs: &mut HashSet<LabeledGraph>,
) {
    if placed == n {
        graphs.insert(g);
        return;
    }
    let newcomer = order[placed];
    let prev_vertex = order[placed - 1];
    // K_new = {prev_vertex} ∪ (prev_clique \ {drop}): k choices of drop.
    for drop in 0..prev_clique.len() {
        let mut clique: Vec<usize> = prev_clique
            .iter()
            .enumerate()
            .filter(|&(idx, _)| idx != drop)
            .map(|(_, &v)| v)
            .collect();
        clique.push(prev_vertex);
        let mut next = g;
        for &c in &clique {
            next.add_edge(newcomer, c);
        }
        extend_chain(n, order, placed + 1, clique, next, graphs);
    }
}

/// Apex-over-forest construction count: forests on the low n-k+1 labels
/// plus k-1 apices on the top labels, each apex wired arbitrarily into the
/// forest part (apex-apex pairs stay non-adjacent). The (forest,
/// neighborhoods) -> graph map is injective because the apex labels are
/// fixed, so the exact count is the number of such combinations; the report
/// also confirms that every generated graph has treewidth at most k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApexForestReport {
    pub n: usize,
    pub k: usize,
    pub exact: BigUint,
    pub lower_bound: BigUint,
    pub all_within_width: bool,
}

pub fn apex_forest_count(n: usize, k: usize, workers: usize) -> Result<ApexForestReport, CensusError> {
    check_census_caps(n, k, false)?;
    if k > n {
        return Err(CensusError::BadK { k, n });
    }
    let m = n - k + 1; // forest part
    let apices = k - 1;
    let forests: Vec<u128> = {
        let mut out = Vec::new();
        for code in 0..1u128 << pair_count(m) {
            if is_forest(&LabeledGraph::from_index(m, code).expect("in range")) {
                out.push(code);
            }
        }
        out
    };
    let combos_per_forest = 1u128 << (apices * m);
    let exact = BigUint::from(forests.len() as u64) * BigUint::from(combos_per_forest);

    // Width verification over every generated graph, in parallel per forest.
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool construction");
    let all_within_width = pool.install(|| {
        forests.par_iter().all(|&code| {
            let forest = LabeledGraph::from_index(m, code).expect("in range");
            (0..combos_per_forest).all(|combo| {
                let mut g = LabeledGraph::empty(n).expect("n within cap");
                for (u, v) in forest.edges() {
                    g.add_edge(u, v);
                }
                for a in 0..apices {
                    let label = m + 1 + a;
                    let hood = (combo >> (a * m)) & ((1u128 << m) - 1);
                    for v in 1..=m {
                        if hood >> (v - 1) & 1 == 1 {
                            g.add_edge(label, v);
                        }
                    }
                }
                is_partial_ktree(&g, k).expect("n within solver range")
            })
        })
    });

    // (n-k+1)^(n-k-1) * 2^((k-1)(n-k+1)); tree count drops to 1 for m <= 2.
    let tree_part = if m >= 2 {
        BigUint::from(m as u64).pow((m - 2) as u32)
    } else {
        BigUint::one()
    };
    let lower_bound = tree_part << (apices * m);
    Ok(ApexForestReport { n, k, exact, lower_bound, all_within_width })
}

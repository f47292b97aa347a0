//! Constructible triples and everything derived from them.
//!
//! A triple `(sigma, f, N)` with block size `s` encodes one run of the
//! generative algorithm: vertices `v_1..v_n` are introduced in the order
//! given by the labeling permutation `sigma`; at each step `i` a window
//! `A_i` of k *active* indices is maintained, one active index (the
//! *frozen* vertex `f(i)`) leaves the window permanently, blocks of `s`
//! consecutive steps share an *anchor* `a_i = min A_i` chosen at block
//! start, and the new vertex is joined to the left-neighbor set `N(i)`.
//! Replaying the algorithm deterministically derives `A_i` and `a_i`, so
//! validation is a pure replay that either produces the full trace or
//! reports the first violated constraint and step.

mod enumerate;
mod preimage;
mod sample;

pub use enumerate::{
    choice_space_estimate, distinct_graphs, enumerate_summary, enumerate_triples, for_each_triple,
    preimage_bound, triple_count_lower_bound, EnumerationSummary,
};
pub use preimage::{
    count_preimages, reconstruct_initial_set, reconstruct_next_block, settled_sets,
    ReconstructError, ReconstructedBlock, SettledSets,
};
pub use sample::{sample_triple, sample_triple_indexed};

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, LabeledGraph};
use crate::width::ProperPathDecomposition;

/// Named constraints of the construction algorithm, used in rejection
/// reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Constraint {
    /// `N(i) ⊆ {j | j < i}` for the start-up steps.
    NeighborsBeforeStep,
    /// `1 ∈ N(i)` for the start-up steps.
    NeighborsContainFirst,
    /// `f(i) = a_{i-1}` at a block start.
    FrozenIsPreviousAnchor,
    /// `f(i) ∈ A_{i-1} \ {a_{i-1}}` off block starts.
    FrozenActiveNotAnchor,
    /// `f(i) ∈ N(i-1)` off block starts.
    FrozenWasNeighbor,
    /// `N(i) ⊆ A_i` from step k+2 on.
    NeighborsActive,
    /// `a_i ∈ N(i)` from step k+2 on.
    NeighborsContainAnchor,
    /// `|N(i)| ≥ ⌈(k+1)/2⌉` from step k+2 on (the reading under which the
    /// closed-form triple-count lower bound holds).
    NeighborsLargeEnough,
}

impl std::fmt::Display for Constraint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let text = match self {
            Constraint::NeighborsBeforeStep => "N(i) ⊆ {j | j < i}",
            Constraint::NeighborsContainFirst => "1 ∈ N(i)",
            Constraint::FrozenIsPreviousAnchor => "f(i) = a_{i-1}",
            Constraint::FrozenActiveNotAnchor => "f(i) ∈ A_{i-1} \\ {a_{i-1}}",
            Constraint::FrozenWasNeighbor => "f(i) ∈ N(i-1)",
            Constraint::NeighborsActive => "N(i) ⊆ A_i",
            Constraint::NeighborsContainAnchor => "a_i ∈ N(i)",
            Constraint::NeighborsLargeEnough => "2|N(i)| ≥ k+1",
        };
        f.write_str(text)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TripleError {
    #[error("vertex count n={n} out of range 2..=16")]
    BadN { n: usize },
    #[error("width parameter k={k} out of range 2..={n}")]
    BadK { k: usize, n: usize },
    #[error("block size s={s} must be at least 1")]
    BadS { s: usize },
    #[error("sigma is not a permutation of 1..={n} with sigma(1) = 1")]
    BadSigma { n: usize },
    #[error("f must be defined exactly on {{k+2..=n}}; problem at index {index}")]
    BadFrozenDomain { index: usize },
    #[error("N must be defined exactly on {{2..=n}}; problem at index {index}")]
    BadNeighborDomain { index: usize },
    #[error("constraint \"{constraint}\" violated at step {step}")]
    Violated { constraint: Constraint, step: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructionError {
    #[error(transparent)]
    Invalid(#[from] TripleError),
    #[error("enumeration budget exceeded: estimated {estimate} choice paths, cap {cap}")]
    Budget { estimate: u128, cap: u128 },
    #[error("decomposition witness needs n >= k+1 (got n={n}, k={k})")]
    NoBags { n: usize, k: usize },
    #[error("graph is not the one built from the triple")]
    GraphMismatch,
    #[error("derived-set consistency failure: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// The `(sigma, f, N)` data plus the block size `s`.
///
/// `sigma[i-1]` is the label of the i-th introduced vertex; `f` maps the
/// steps `k+2..=n` to the index frozen at that step; `neighbors` maps each
/// step `2..=n` to the indices of the earlier-introduced neighbors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructibleTriple {
    pub n: usize,
    pub k: usize,
    pub s: usize,
    pub sigma: Vec<usize>,
    pub f: BTreeMap<usize, usize>,
    #[serde(rename = "N")]
    pub neighbors: BTreeMap<usize, BTreeSet<usize>>,
}

/// One derived step of a validated triple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub i: usize,
    /// Active index window `A_i`, sorted.
    pub active: Vec<usize>,
    pub anchor: usize,
    pub frozen: Option<usize>,
    /// 0 for the start-up step k+1, then 1-based block numbers.
    pub block: usize,
}

/// Per-step derived state for steps `k+1..=n` (empty when n <= k).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionTrace {
    pub steps: Vec<TraceStep>,
}

impl ConstructionTrace {
    pub fn step(&self, i: usize) -> Option<&TraceStep> {
        self.steps.iter().find(|s| s.i == i)
    }

    /// Index runs of the blocks: `[k+2..k+1+s], [k+2+s..k+1+2s], ...` with a
    /// possibly shorter final run.
    pub fn block_index_runs(&self) -> Vec<Vec<usize>> {
        let mut runs: Vec<Vec<usize>> = Vec::new();
        for step in &self.steps {
            if step.block == 0 {
                continue;
            }
            if step.block > runs.len() {
                runs.push(Vec::new());
            }
            runs[step.block - 1].push(step.i);
        }
        runs
    }
}

/// Whether step `i` opens a new block: `i ≡ k+2 (mod s)`. With s = 1 every
/// step opens one.
#[inline]
pub fn is_block_start(i: usize, k: usize, s: usize) -> bool {
    (i - (k + 2)).is_multiple_of(s)
}

impl ConstructibleTriple {
    pub fn new(
        n: usize,
        k: usize,
        s: usize,
        sigma: Vec<usize>,
        f: BTreeMap<usize, usize>,
        neighbors: BTreeMap<usize, BTreeSet<usize>>,
    ) -> Self {
        Self { n, k, s, sigma, f, neighbors }
    }

    /// Label of the i-th introduced vertex (1-based step).
    pub fn sigma_at(&self, i: usize) -> usize {
        self.sigma[i - 1]
    }

    /// Replays the construction algorithm. Returns the full derived trace,
    /// or the first violated constraint with the step where it failed.
    pub fn validate(&self) -> Result<ConstructionTrace, TripleError> {
        let (n, k, s) = (self.n, self.k, self.s);
        if !(2..=crate::graph::MAX_VERTICES).contains(&n) {
            return Err(TripleError::BadN { n });
        }
        if k <= 1 || k > n {
            return Err(TripleError::BadK { k, n });
        }
        if s == 0 {
            return Err(TripleError::BadS { s });
        }
        // sigma: permutation of 1..=n fixing 1.
        if self.sigma.len() != n || self.sigma.first() != Some(&1) {
            return Err(TripleError::BadSigma { n });
        }
        let mut seen = vec![false; n + 1];
        for &v in &self.sigma {
            if v == 0 || v > n || seen[v] {
                return Err(TripleError::BadSigma { n });
            }
            seen[v] = true;
        }
        // Domains.
        for i in k + 2..=n {
            if !self.f.contains_key(&i) {
                return Err(TripleError::BadFrozenDomain { index: i });
            }
        }
        if let Some((&i, _)) = self.f.iter().find(|(&i, _)| i < k + 2 || i > n) {
            return Err(TripleError::BadFrozenDomain { index: i });
        }
        for i in 2..=n {
            if !self.neighbors.contains_key(&i) {
                return Err(TripleError::BadNeighborDomain { index: i });
            }
        }
        if let Some((&i, _)) = self.neighbors.iter().find(|(&i, _)| i < 2 || i > n) {
            return Err(TripleError::BadNeighborDomain { index: i });
        }

        // Start-up steps 2..=min(k+1, n): N(i) ⊆ {1..i-1} with 1 ∈ N(i).
        for i in 2..=n.min(k + 1) {
            let ns = &self.neighbors[&i];
            if ns.iter().any(|&j| j == 0 || j >= i) {
                return Err(TripleError::Violated { constraint: Constraint::NeighborsBeforeStep, step: i });
            }
            if !ns.contains(&1) {
                return Err(TripleError::Violated { constraint: Constraint::NeighborsContainFirst, step: i });
            }
        }

        let mut steps = Vec::new();
        if n > k {
            let mut active: BTreeSet<usize> = (1..=k).collect();
            let mut anchor = 1usize;
            steps.push(TraceStep { i: k + 1, active: active.iter().copied().collect(), anchor, frozen: None, block: 0 });
            for i in k + 2..=n {
                let frozen = self.f[&i];
                let block_start = is_block_start(i, k, s);
                if block_start {
                    if frozen != anchor {
                        return Err(TripleError::Violated { constraint: Constraint::FrozenIsPreviousAnchor, step: i });
                    }
                } else {
                    if !active.contains(&frozen) || frozen == anchor {
                        return Err(TripleError::Violated { constraint: Constraint::FrozenActiveNotAnchor, step: i });
                    }
                    if !self.neighbors[&(i - 1)].contains(&frozen) {
                        return Err(TripleError::Violated { constraint: Constraint::FrozenWasNeighbor, step: i });
                    }
                }
                active.remove(&frozen);
                active.insert(i - 1);
                debug_assert_eq!(active.len(), k);
                if block_start {
                    anchor = *active.first().expect("active window is never empty");
                }
                let ns = &self.neighbors[&i];
                if !ns.is_subset(&active) {
                    return Err(TripleError::Violated { constraint: Constraint::NeighborsActive, step: i });
                }
                if !ns.contains(&anchor) {
                    return Err(TripleError::Violated { constraint: Constraint::NeighborsContainAnchor, step: i });
                }
                if 2 * ns.len() < k + 1 {
                    return Err(TripleError::Violated { constraint: Constraint::NeighborsLargeEnough, step: i });
                }
                let block = 1 + (i - (k + 2)) / s;
                steps.push(TraceStep {
                    i,
                    active: active.iter().copied().collect(),
                    anchor,
                    frozen: Some(frozen),
                    block,
                });
            }
        }
        Ok(ConstructionTrace { steps })
    }

    /// Expands the edge definition: for each step `i` and each `j ∈ N(i)`,
    /// the edge `{v_sigma(i), v_sigma(j)}`.
    pub fn build_graph(&self) -> Result<LabeledGraph, ConstructionError> {
        self.validate()?;
        let mut g = LabeledGraph::empty(self.n)?;
        let mut edges = 0usize;
        for (&i, ns) in &self.neighbors {
            for &j in ns {
                g.add_edge(self.sigma_at(i), self.sigma_at(j));
                edges += 1;
            }
        }
        debug_assert_eq!(g.edge_count(), edges, "each (i, j ∈ N(i)) pair contributes a distinct edge");
        Ok(g)
    }

    /// The decomposition witness: bags `X_i = {v_sigma(j) | j ∈ A_i ∪ {i}}`
    /// for `i = k+1..=n`, each of size exactly k+1.
    pub fn ppd_witness(&self) -> Result<ProperPathDecomposition, ConstructionError> {
        let trace = self.validate()?;
        if self.n < self.k + 1 {
            return Err(ConstructionError::NoBags { n: self.n, k: self.k });
        }
        let bags = trace
            .steps
            .iter()
            .map(|step| {
                step.active
                    .iter()
                    .chain(std::iter::once(&step.i))
                    .map(|&j| self.sigma_at(j))
                    .collect::<BTreeSet<usize>>()
            })
            .collect();
        Ok(ProperPathDecomposition::new(bags))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::width::check_ppd;

    fn nset(vs: &[usize]) -> BTreeSet<usize> {
        vs.iter().copied().collect()
    }

    fn small_triple(n3: &[usize]) -> ConstructibleTriple {
        ConstructibleTriple::new(
            3,
            2,
            1,
            vec![1, 2, 3],
            BTreeMap::new(),
            BTreeMap::from([(2, nset(&[1])), (3, nset(n3))]),
        )
    }

    #[test]
    fn hand_replayed_triple_validates() {
        let trace = small_triple(&[1]).validate().unwrap();
        // No steps beyond k+1 = 3 at n = 3: single start-up window.
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(trace.steps[0], TraceStep { i: 3, active: vec![1, 2], anchor: 1, frozen: None, block: 0 });
    }

    #[test]
    fn missing_first_vertex_is_rejected_at_step_two() {
        let mut t = small_triple(&[1]);
        t.neighbors.insert(2, BTreeSet::new());
        assert_eq!(
            t.validate(),
            Err(TripleError::Violated { constraint: Constraint::NeighborsContainFirst, step: 2 })
        );
    }

    #[test]
    fn block_start_forces_the_frozen_vertex() {
        // n=5, k=2, s=1: every step from 4 on is a block start, so f(4) must
        // equal a_3 = 1.
        let t = ConstructibleTriple::new(
            5,
            2,
            1,
            vec![1, 2, 3, 4, 5],
            BTreeMap::from([(4, 2), (5, 2)]),
            BTreeMap::from([
                (2, nset(&[1])),
                (3, nset(&[1])),
                (4, nset(&[2, 3])),
                (5, nset(&[3, 4])),
            ]),
        );
        assert_eq!(
            t.validate(),
            Err(TripleError::Violated { constraint: Constraint::FrozenIsPreviousAnchor, step: 4 })
        );
        let mut good = t.clone();
        good.f.insert(4, 1);
        good.validate().expect("f(4) = 1 makes the triple constructible");
    }

    #[test]
    fn build_graph_expands_the_edge_definition() {
        let k3 = small_triple(&[1, 2]).build_graph().unwrap();
        assert_eq!(k3, LabeledGraph::complete(3).unwrap());

        let star = small_triple(&[1]).build_graph().unwrap();
        assert_eq!(star, LabeledGraph::from_edges(3, &[(1, 2), (1, 3)]).unwrap());

        // Swapping sigma on {2,3} yields the same star: a duplicate witness.
        let mut swapped = small_triple(&[1]);
        swapped.sigma = vec![1, 3, 2];
        assert_eq!(swapped.build_graph().unwrap(), star);
    }

    #[test]
    fn witness_is_a_single_full_bag_at_n_equals_k_plus_one() {
        let t = small_triple(&[1, 2]);
        let d = t.ppd_witness().unwrap();
        assert_eq!(d.bags, vec![nset(&[1, 2, 3])]);
        assert_eq!(d.width(), 2);
        assert_eq!(check_ppd(&t.build_graph().unwrap(), &d), Ok(()));
    }

    #[test]
    fn trace_blocks_and_active_windows() {
        // n=7, k=2, s=2: blocks {4,5} and {6,7}.
        let t = ConstructibleTriple::new(
            7,
            2,
            2,
            vec![1, 2, 3, 4, 5, 6, 7],
            BTreeMap::from([(4, 1), (5, 3), (6, 2), (7, 5)]),
            BTreeMap::from([
                (2, nset(&[1])),
                (3, nset(&[1, 2])),
                (4, nset(&[2, 3])),
                (5, nset(&[2, 4])),
                (6, nset(&[4, 5])),
                (7, nset(&[4, 6])),
            ]),
        );
        let trace = t.validate().unwrap();
        assert_eq!(trace.block_index_runs(), vec![vec![4, 5], vec![6, 7]]);
        // Active windows stay at size k and frozen vertices never return.
        for step in &trace.steps {
            assert_eq!(step.active.len(), 2);
        }
        assert_eq!(trace.step(5).unwrap().anchor, 2);
        assert_eq!(trace.step(6).unwrap().anchor, 4);
        let d = t.ppd_witness().unwrap();
        assert!(d.bags.iter().all(|b| b.len() == 3));
        assert_eq!(check_ppd(&t.build_graph().unwrap(), &d), Ok(()));
    }

    #[test]
    fn serde_shape_uses_capital_n() {
        let t = small_triple(&[1]);
        let json = serde_json::to_string(&t).unwrap();
        assert!(json.contains("\"N\""), "{json}");
        let back: ConstructibleTriple = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
    }
}

//! Duplicate analysis: how many triples can build one graph.
//!
//! The settled sets drive the bound: for each step `i`, the left-neighbors
//! of `v_sigma(i)` with no edges to any later-introduced vertex. The frozen
//! vertex of step `i` always lies in the settled set of step `i-1`, settled
//! sets of distinct post-window steps are disjoint, and the product of
//! their sizes caps the number of frozen-vertex functions compatible with a
//! graph. Block reconstruction recovers the labeling blockwise: the anchor
//! of the next block is the smallest introduced index that still has
//! not-yet-introduced neighbors, and its not-yet-introduced neighbors are exactly the
//! next block.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use thiserror::Error;

use crate::graph::LabeledGraph;

use super::{enumerate_summary, ConstructibleTriple, ConstructionError};

/// Per-step settled left-neighbor sets of a triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SettledSets {
    pub k: usize,
    /// Step `i >= 2` -> settled subset of `N(i)`.
    pub sets: BTreeMap<usize, BTreeSet<usize>>,
}

impl SettledSets {
    /// Product of the sizes of the post-window settled sets with at least
    /// two elements; bounded by `2^k`.
    pub fn ambiguity_product(&self) -> BigUint {
        let mut prod = BigUint::from(1u32);
        for (&i, set) in &self.sets {
            if i > self.k + 1 && set.len() >= 2 {
                prod *= BigUint::from(set.len() as u64);
            }
        }
        prod
    }

    /// Total size over steps `i >= k+1`; bounded by n.
    pub fn post_window_total(&self) -> usize {
        self.sets.iter().filter(|(&i, _)| i > self.k).map(|(_, s)| s.len()).sum()
    }
}

/// Computes the settled sets of `t` against its built graph `h` and verifies
/// the structural facts they must satisfy (disjointness of post-window sets,
/// total size at most n, frozen vertices settled one step earlier).
pub fn settled_sets(t: &ConstructibleTriple, h: &LabeledGraph) -> Result<SettledSets, ConstructionError> {
    let built = t.build_graph()?;
    if built != *h {
        return Err(ConstructionError::GraphMismatch);
    }
    let n = t.n;
    let mut sets = BTreeMap::new();
    for i in 2..=n {
        let mut settled = BTreeSet::new();
        for &j in &t.neighbors[&i] {
            let vj = t.sigma_at(j);
            let has_later_edge = (i + 1..=n).any(|later| h.has_edge(vj, t.sigma_at(later)));
            if !has_later_edge {
                settled.insert(j);
            }
        }
        sets.insert(i, settled);
    }
    let out = SettledSets { k: t.k, sets };

    // Disjointness for distinct post-window steps.
    let post: Vec<(&usize, &BTreeSet<usize>)> = out.sets.iter().filter(|(&i, _)| i > t.k + 1).collect();
    for (ai, a) in &post {
        for (bi, b) in &post {
            if ai < bi && a.intersection(b).next().is_some() {
                return Err(ConstructionError::Inconsistent(format!(
                    "settled sets of steps {ai} and {bi} intersect"
                )));
            }
        }
    }
    if out.post_window_total() > n {
        return Err(ConstructionError::Inconsistent(format!(
            "settled sets from step k+1 on hold more than n = {n} indices"
        )));
    }
    for i in t.k + 2..=n {
        let frozen = t.f[&i];
        if !out.sets[&(i - 1)].contains(&frozen) {
            return Err(ConstructionError::Inconsistent(format!(
                "frozen vertex {frozen} of step {i} not settled at step {}",
                i - 1
            )));
        }
    }
    Ok(out)
}

/// Exact number of constructible triples building `h`, by filtering the
/// exhaustive enumeration of the `(n, k, s)` cell.
pub fn count_preimages(
    h: &LabeledGraph,
    n: usize,
    k: usize,
    s: usize,
    workers: usize,
    budget: Option<u128>,
) -> Result<u64, ConstructionError> {
    let summary = enumerate_summary(n, k, s, workers, budget)?;
    Ok(summary.preimages.get(h).copied().unwrap_or(0))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReconstructError {
    #[error("prefix must list distinct vertices of the graph starting at 1; problem at position {position}")]
    BadPrefix { position: usize },
    #[error("prefix length {len} is not k+1+p*s for any p >= 0 below n")]
    BadPrefixLength { len: usize },
    #[error("vertex 1 has {found} neighbors, expected {expected}")]
    FirstVertexDegree { expected: usize, found: usize },
    #[error("no introduced vertex has edges toward the rest: not generated by any triple extending the prefix")]
    NoAnchor,
    #[error("anchor {anchor} reaches {found} not-yet-introduced vertices, expected a block of {expected}")]
    BlockSizeMismatch { anchor: usize, expected: usize, found: usize },
}

/// One recovered block of the labeling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReconstructedBlock {
    /// Index (step number) of the anchor within the prefix.
    pub anchor_index: usize,
    /// Vertex label of the anchor.
    pub anchor_vertex: usize,
    /// Vertex labels forming the next block (unordered; their relative
    /// introduction order is not determined by the graph).
    pub vertices: BTreeSet<usize>,
    /// The index run the block occupies.
    pub first_index: usize,
    pub last_index: usize,
}

/// The forced image set of the start-up steps `2..=k+1`: exactly the
/// neighborhood of vertex 1. Fails on graphs no triple generates.
pub fn reconstruct_initial_set(h: &LabeledGraph, k: usize) -> Result<BTreeSet<usize>, ReconstructError> {
    let n = h.n();
    let expected = if n >= k + 2 { k } else { n - 1 };
    let nb = h.neighbors(1);
    if nb.len() != expected {
        return Err(ReconstructError::FirstVertexDegree { expected, found: nb.len() });
    }
    Ok(nb.into_iter().collect())
}

/// Given the labeling on indices `1..=k+1+p*s`, recovers the vertex set of
/// the next block together with the anchor that determines it.
pub fn reconstruct_next_block(
    h: &LabeledGraph,
    k: usize,
    s: usize,
    prefix: &[usize],
) -> Result<ReconstructedBlock, ReconstructError> {
    let n = h.n();
    let m = prefix.len();
    if m < k + 1 || m >= n || !(m - (k + 1)).is_multiple_of(s) {
        return Err(ReconstructError::BadPrefixLength { len: m });
    }
    let mut seen = vec![false; n + 1];
    for (pos, &v) in prefix.iter().enumerate() {
        if v == 0 || v > n || seen[v] || (pos == 0 && v != 1) {
            return Err(ReconstructError::BadPrefix { position: pos + 1 });
        }
        seen[v] = true;
    }
    let introduced: BTreeSet<usize> = prefix.iter().copied().collect();
    // Anchor: smallest index whose vertex still has not-yet-introduced neighbors.
    let anchor_index = (1..=m)
        .find(|&idx| {
            h.neighbors(prefix[idx - 1]).iter().any(|u| !introduced.contains(u))
        })
        .ok_or(ReconstructError::NoAnchor)?;
    let anchor_vertex = prefix[anchor_index - 1];
    let block: BTreeSet<usize> = h
        .neighbors(anchor_vertex)
        .into_iter()
        .filter(|u| !introduced.contains(u))
        .collect();
    let expected = s.min(n - m);
    if block.len() != expected {
        return Err(ReconstructError::BlockSizeMismatch {
            anchor: anchor_vertex,
            expected,
            found: block.len(),
        });
    }
    Ok(ReconstructedBlock {
        anchor_index,
        anchor_vertex,
        vertices: block,
        first_index: m + 1,
        last_index: m + expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::enumerate_triples;

    #[test]
    fn triangle_triple_settles_everything_at_the_last_step() {
        let triples = enumerate_triples(3, 2, 1, None).unwrap();
        let k3 = triples
            .iter()
            .find(|t| t.sigma == vec![1, 2, 3] && t.neighbors[&3].len() == 2)
            .unwrap();
        let h = k3.build_graph().unwrap();
        let d = settled_sets(k3, &h).unwrap();
        assert_eq!(d.sets[&3], BTreeSet::from([1, 2]));
        // Vertex 1 gains the later edge {v1, v3}, so nothing settles at step 2.
        assert_eq!(d.sets[&2], BTreeSet::new());
    }

    #[test]
    fn settled_sets_reject_foreign_graphs() {
        let triples = enumerate_triples(3, 2, 1, None).unwrap();
        let wrong = LabeledGraph::empty(3).unwrap();
        assert_eq!(settled_sets(&triples[0], &wrong), Err(ConstructionError::GraphMismatch));
    }

    #[test]
    fn preimage_counts_of_the_smallest_cell() {
        let k3 = LabeledGraph::complete(3).unwrap();
        let star = LabeledGraph::from_edges(3, &[(1, 2), (1, 3)]).unwrap();
        assert_eq!(count_preimages(&k3, 3, 2, 1, 1, None).unwrap(), 2);
        assert_eq!(count_preimages(&star, 3, 2, 1, 1, None).unwrap(), 2);
        let absent = LabeledGraph::empty(3).unwrap();
        assert_eq!(count_preimages(&absent, 3, 2, 1, 1, None).unwrap(), 0);
    }

    #[test]
    fn initial_set_is_the_first_neighborhood() {
        let triples = enumerate_triples(5, 2, 1, None).unwrap();
        for t in &triples {
            let h = t.build_graph().unwrap();
            let images: BTreeSet<usize> = (2..=3).map(|i| t.sigma_at(i)).collect();
            assert_eq!(reconstruct_initial_set(&h, 2).unwrap(), images);
        }
    }

    #[test]
    fn garbage_graphs_fail_reconstruction() {
        let edgeless = LabeledGraph::empty(5).unwrap();
        assert_eq!(
            reconstruct_initial_set(&edgeless, 2),
            Err(ReconstructError::FirstVertexDegree { expected: 2, found: 0 })
        );
        assert_eq!(
            reconstruct_next_block(&edgeless, 2, 1, &[1, 2, 3]),
            Err(ReconstructError::NoAnchor)
        );
    }

    #[test]
    fn blocks_replay_from_true_prefixes() {
        for s in 1..=2 {
            for t in enumerate_triples(6, 2, s, None).unwrap() {
                let h = t.build_graph().unwrap();
                let trace = t.validate().unwrap();
                for run in trace.block_index_runs() {
                    let m = run[0] - 1;
                    let prefix: Vec<usize> = (1..=m).map(|i| t.sigma_at(i)).collect();
                    let block = reconstruct_next_block(&h, 2, s, &prefix).unwrap();
                    let expected: BTreeSet<usize> = run.iter().map(|&i| t.sigma_at(i)).collect();
                    assert_eq!(block.vertices, expected, "triple {t:?} block {run:?}");
                    assert_eq!(block.first_index, run[0]);
                    assert_eq!(block.last_index, *run.last().unwrap());
                }
            }
        }
    }
}

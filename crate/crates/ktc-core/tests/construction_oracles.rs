//! Construction-module checks against independent recomputation: a second
//! enumerator built by brute-force filtering, trace-replay of the block
//! reconstruction, and the derived-state invariants.

use std::collections::{BTreeMap, BTreeSet};

use ktc_core::construction::{
    enumerate_triples, reconstruct_initial_set, reconstruct_next_block, ConstructibleTriple,
};

/// Filter-style enumerator: generate every (sigma, f, N) shape from raw
/// ranges and keep the ones the validator accepts. Shares nothing with the
/// choice-tree enumerator it cross-checks.
fn enumerate_by_filtering(n: usize, k: usize, s: usize) -> Vec<ConstructibleTriple> {
    let mut sigmas: Vec<Vec<usize>> = Vec::new();
    let mut sigma = vec![1];
    collect_permutations(n, &mut sigma, &mut sigmas);

    let f_domain: Vec<usize> = (k + 2..=n).collect();
    let mut f_choices: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new()];
    for &i in &f_domain {
        let mut next = Vec::new();
        for partial in &f_choices {
            for v in 1..=n {
                let mut m = partial.clone();
                m.insert(i, v);
                next.push(m);
            }
        }
        f_choices = next;
    }

    let mut n_choices: Vec<BTreeMap<usize, BTreeSet<usize>>> = vec![BTreeMap::new()];
    for i in 2..=n {
        let mut next = Vec::new();
        for partial in &n_choices {
            for bits in 0..(1u32 << (i - 1)) {
                let set: BTreeSet<usize> = (1..i).filter(|j| bits >> (j - 1) & 1 == 1).collect();
                let mut m = partial.clone();
                m.insert(i, set);
                next.push(m);
            }
        }
        n_choices = next;
    }

    let mut out = Vec::new();
    for sg in &sigmas {
        for fc in &f_choices {
            for nc in &n_choices {
                let t = ConstructibleTriple::new(n, k, s, sg.clone(), fc.clone(), nc.clone());
                if t.validate().is_ok() {
                    out.push(t);
                }
            }
        }
    }
    out
}

fn collect_permutations(n: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if prefix.len() == n {
        out.push(prefix.clone());
        return;
    }
    for v in 2..=n {
        if !prefix.contains(&v) {
            prefix.push(v);
            collect_permutations(n, prefix, out);
            prefix.pop();
        }
    }
}

#[test]
fn choice_tree_and_filter_enumerators_agree() {
    for (n, k, s) in [(4, 2, 1), (5, 2, 2), (5, 3, 2), (4, 4, 1)] {
        let from_tree: BTreeSet<String> = enumerate_triples(n, k, s, None)
            .unwrap()
            .iter()
            .map(|t| serde_json::to_string(t).unwrap())
            .collect();
        let from_filter: BTreeSet<String> = enumerate_by_filtering(n, k, s)
            .iter()
            .map(|t| serde_json::to_string(t).unwrap())
            .collect();
        assert_eq!(from_tree.len(), from_filter.len(), "counts differ at ({n},{k},{s})");
        assert_eq!(from_tree, from_filter, "triple sets differ at ({n},{k},{s})");
    }
}

#[test]
fn enumeration_order_is_stable() {
    let a = enumerate_triples(5, 2, 2, None).unwrap();
    let b = enumerate_triples(5, 2, 2, None).unwrap();
    assert_eq!(a, b);
}

#[test]
fn derived_state_invariants_across_the_grid() {
    for k in [2usize, 3] {
        for n in k..=6 {
            for s in 1..=3 {
                for t in enumerate_triples(n, k, s, None).unwrap() {
                    let trace = t.validate().unwrap();
                    let mut frozen_seen: BTreeSet<usize> = BTreeSet::new();
                    for step in &trace.steps {
                        assert_eq!(step.active.len(), k, "window size at step {} of {t:?}", step.i);
                        if let Some(f) = step.frozen {
                            frozen_seen.insert(f);
                        }
                        for f in &frozen_seen {
                            assert!(
                                !step.active.contains(f),
                                "frozen index {f} re-entered the window at step {}",
                                step.i
                            );
                        }
                        assert!(step.active.contains(&step.anchor) || step.frozen.is_none());
                    }
                }
            }
        }
    }
}

#[test]
fn block_reconstruction_replays_every_grid_triple() {
    for k in [2usize, 3] {
        for n in k + 2..=7 {
            for s in 1..=3 {
                for t in enumerate_triples(n, k, s, None).unwrap() {
                    let h = t.build_graph().unwrap();
                    let images: BTreeSet<usize> = (2..=k + 1).map(|i| t.sigma_at(i)).collect();
                    assert_eq!(
                        reconstruct_initial_set(&h, k).unwrap(),
                        images,
                        "initial set of {t:?}"
                    );
                    let trace = t.validate().unwrap();
                    for run in trace.block_index_runs() {
                        let prefix: Vec<usize> = (1..run[0]).map(|i| t.sigma_at(i)).collect();
                        let block = reconstruct_next_block(&h, k, s, &prefix).unwrap();
                        let expected: BTreeSet<usize> = run.iter().map(|&i| t.sigma_at(i)).collect();
                        assert_eq!(block.vertices, expected, "block {run:?} of {t:?}");
                    }
                }
            }
        }
    }
}

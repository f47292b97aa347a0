//! Cross-validation of the width solvers against definitional brute force.

mod common;

use common::{
    definitional_decide, pathwidth_by_layouts, proper_pathwidth_definitional, treewidth_by_elimination,
};
use ktc_core::graph::{pair_count, LabeledGraph};
use ktc_core::width::{
    embeds_in_ktree, is_partial_ktree, pathwidth_exact, proper_pathwidth_exact, treewidth_exact,
};

fn all_graphs(n: usize) -> impl Iterator<Item = LabeledGraph> {
    (0..1u128 << pair_count(n)).map(move |code| LabeledGraph::from_index(n, code).unwrap())
}

#[test]
fn treewidth_matches_elimination_oracle_exhaustively() {
    for n in 1..=5 {
        for g in all_graphs(n) {
            assert_eq!(
                treewidth_exact(&g).unwrap(),
                treewidth_by_elimination(&g),
                "disagreement on {g:?}"
            );
        }
    }
}

#[test]
fn pathwidth_matches_layout_oracle_exhaustively() {
    for n in 1..=5 {
        for g in all_graphs(n) {
            assert_eq!(pathwidth_exact(&g).unwrap(), pathwidth_by_layouts(&g), "disagreement on {g:?}");
        }
    }
}

#[test]
fn pathwidth_oracle_settles_the_seven_vertex_trees() {
    let cbt = LabeledGraph::from_edges(7, &[(1, 2), (1, 3), (2, 4), (2, 5), (3, 6), (3, 7)]).unwrap();
    assert_eq!(pathwidth_by_layouts(&cbt), 1);
    assert_eq!(pathwidth_exact(&cbt).unwrap(), 1);
    let spider = LabeledGraph::from_edges(7, &[(1, 2), (2, 3), (1, 4), (4, 5), (1, 6), (6, 7)]).unwrap();
    assert_eq!(pathwidth_by_layouts(&spider), 2);
    assert_eq!(pathwidth_exact(&spider).unwrap(), 2);
}

#[test]
fn proper_pathwidth_matches_definitional_search_exhaustively() {
    // Every graph on up to six vertices: the swap-normalized solver and the
    // five-condition definitional search must agree, which is the evidence
    // backing the normal form.
    for n in 1..=6 {
        for g in all_graphs(n) {
            let fast = proper_pathwidth_exact(&g).unwrap();
            let slow = proper_pathwidth_definitional(&g);
            assert_eq!(fast, slow, "disagreement on {g:?}");
        }
    }
}

#[test]
fn proper_pathwidth_definitional_spot_values() {
    assert_eq!(proper_pathwidth_definitional(&LabeledGraph::path(4).unwrap()), 1);
    assert_eq!(proper_pathwidth_definitional(&LabeledGraph::cycle(4).unwrap()), 2);
    assert_eq!(proper_pathwidth_definitional(&LabeledGraph::complete(4).unwrap()), 3);
    // Edgeless graphs on three or more vertices cannot use singleton bags
    // (condition 5 forbids them as middle bags), hence width 1.
    assert_eq!(proper_pathwidth_definitional(&LabeledGraph::empty(4).unwrap()), 1);
    assert!(!definitional_decide(&LabeledGraph::empty(4).unwrap(), 0));
}

#[test]
fn width_chain_and_extremes_exhaustively() {
    for n in 1..=5 {
        let complete = LabeledGraph::complete(n).unwrap();
        for g in all_graphs(n) {
            let tw = treewidth_exact(&g).unwrap();
            let pw = pathwidth_exact(&g).unwrap();
            let ppw = proper_pathwidth_exact(&g).unwrap();
            assert!(ppw >= pw && pw >= tw, "chain broken on {g:?}: {ppw} {pw} {tw}");
            assert_eq!(tw == n - 1, g == complete, "clique extreme on {g:?}");
            assert_eq!(tw == 0, g.edge_count() == 0, "edgeless extreme on {g:?}");
        }
    }
}

#[test]
fn removing_an_edge_never_increases_any_width() {
    for n in 2..=5 {
        for g in all_graphs(n) {
            let tw = treewidth_exact(&g).unwrap();
            let pw = pathwidth_exact(&g).unwrap();
            let ppw = proper_pathwidth_exact(&g).unwrap();
            for (u, v) in g.edges() {
                let mut h = g;
                h.remove_edge(u, v);
                assert!(treewidth_exact(&h).unwrap() <= tw);
                assert!(pathwidth_exact(&h).unwrap() <= pw);
                assert!(proper_pathwidth_exact(&h).unwrap() <= ppw);
            }
        }
    }
}

#[test]
fn partial_ktree_recognizers_agree_exhaustively() {
    // Treewidth test vs k-tree supergraph embedding: the equivalence the
    // forest/k-tree theory rests on, checked on every graph with n <= 6.
    for n in 1..=6usize {
        for g in all_graphs(n) {
            for k in 1..=n {
                let by_width = is_partial_ktree(&g, k).unwrap();
                let by_embedding = embeds_in_ktree(&g, k);
                assert_eq!(by_width, by_embedding, "disagreement on {g:?} at k={k}");
            }
        }
    }
}

//! Exact pathwidth via the vertex separation number, which coincides with
//! pathwidth. Subset DP over layout prefixes: the boundary cost of a prefix
//! depends only on the prefix as a set.

use crate::graph::LabeledGraph;
use crate::limits::PATHWIDTH_MAX_N;

use super::WidthError;

pub fn pathwidth_exact(g: &LabeledGraph) -> Result<usize, WidthError> {
    let n = g.n();
    if n > PATHWIDTH_MAX_N {
        return Err(WidthError::CapacityExceeded { solver: "pathwidth", n, max_n: PATHWIDTH_MAX_N });
    }
    let adj = g.adjacency_masks();
    let full = (1u32 << n) - 1;
    let mut best = vec![u8::MAX; 1 << n];
    best[0] = 0;
    for s in 1..=full {
        let outside = !s & full;
        let mut boundary = 0u8;
        let mut rest = s;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if adj[u] as u32 & outside != 0 {
                boundary += 1;
            }
        }
        let mut acc = u8::MAX;
        let mut vs = s;
        while vs != 0 {
            let v = vs.trailing_zeros() as usize;
            vs &= vs - 1;
            acc = acc.min(best[(s & !(1 << v)) as usize]);
        }
        best[s as usize] = acc.max(boundary);
    }
    Ok(best[full as usize] as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::LabeledGraph;

    #[test]
    fn clique_star_and_trees() {
        assert_eq!(pathwidth_exact(&LabeledGraph::complete(4).unwrap()).unwrap(), 3);
        assert_eq!(pathwidth_exact(&LabeledGraph::star(4).unwrap()).unwrap(), 1);
        // The complete binary tree on 7 vertices is a caterpillar (stripping
        // its leaves leaves the path 2-1-3), so its pathwidth is 1; value
        // confirmed by exhaustive layout search.
        let t = LabeledGraph::from_edges(7, &[(1, 2), (1, 3), (2, 4), (2, 5), (3, 6), (3, 7)]).unwrap();
        assert_eq!(pathwidth_exact(&t).unwrap(), 1);
        // Spider with three legs of length two: the smallest tree of
        // pathwidth 2 (not a caterpillar); same oracle.
        let spider = LabeledGraph::from_edges(7, &[(1, 2), (2, 3), (1, 4), (4, 5), (1, 6), (6, 7)]).unwrap();
        assert_eq!(pathwidth_exact(&spider).unwrap(), 2);
        assert_eq!(pathwidth_exact(&LabeledGraph::cycle(5).unwrap()).unwrap(), 2);
    }

    #[test]
    fn degenerate_single_vertex() {
        assert_eq!(pathwidth_exact(&LabeledGraph::empty(1).unwrap()).unwrap(), 0);
    }
}

//! Exact treewidth by subset dynamic programming over elimination orderings.
//!
//! `best[s]` is the smallest width achievable when the vertex set `s` has
//! already been eliminated: eliminating `v` after `s` costs the number of
//! vertices outside `s ∪ {v}` reachable from `v` through `s`, i.e. the
//! back-degree of `v` after iterated neighborhood filling. The treewidth is
//! `best[full]`.

use crate::graph::LabeledGraph;
use crate::limits::TREEWIDTH_MAX_N;

use super::WidthError;

/// Vertices outside `through | bit(v)` adjacent to the component of `v`
/// within `through`.
#[inline]
fn fill_degree(adj: &[u16], v: usize, through: u16) -> u32 {
    let mut reach = 1u16 << v;
    let mut seen_nb = adj[v];
    loop {
        let inside = seen_nb & through & !reach;
        if inside == 0 {
            break;
        }
        let mut f = inside;
        while f != 0 {
            let u = f.trailing_zeros() as usize;
            f &= f - 1;
            seen_nb |= adj[u];
        }
        reach |= inside;
    }
    (seen_nb & !through & !(1 << v)).count_ones()
}

pub fn treewidth_exact(g: &LabeledGraph) -> Result<usize, WidthError> {
    let n = g.n();
    if n > TREEWIDTH_MAX_N {
        return Err(WidthError::CapacityExceeded { solver: "treewidth", n, max_n: TREEWIDTH_MAX_N });
    }
    let adj = g.adjacency_masks();
    let full = (1u32 << n) - 1;
    let mut best = vec![u8::MAX; 1 << n];
    best[0] = 0;
    for s in 1..=full {
        let mut acc = u8::MAX;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let prev = s & !(1 << v);
            let cost = best[prev as usize].max(fill_degree(&adj, v, prev as u16) as u8);
            acc = acc.min(cost);
        }
        best[s as usize] = acc;
    }
    Ok(best[full as usize] as usize)
}

/// Treewidth test: true iff `treewidth(g) <= k`.
pub fn is_partial_ktree(g: &LabeledGraph, k: usize) -> Result<bool, WidthError> {
    if k == 0 || k > g.n() {
        return Err(WidthError::BadK { k, n: g.n() });
    }
    Ok(treewidth_exact(g)? <= k)
}

/// Independent recognizer: searches for a k-tree supergraph on the same
/// vertex set by repeatedly detaching a vertex and completing a k-clique
/// over a superset of its neighborhood. Agrees with [`is_partial_ktree`]
/// on every graph at small n, which is exactly the classical equivalence
/// between treewidth at most k and being a partial k-tree.
pub fn embeds_in_ktree(g: &LabeledGraph, k: usize) -> bool {
    let n = g.n();
    if n <= k + 1 {
        // Any graph on at most k+1 vertices is a subgraph of K_{k+1}.
        return true;
    }
    let adj = g.adjacency_masks();
    let mut memo = std::collections::HashMap::new();
    search(&adj, (1u16 << n) - 1, k, &mut memo)
}

fn search(adj: &[u16], alive: u16, k: usize, memo: &mut std::collections::HashMap<(u16, Vec<u16>), bool>) -> bool {
    if alive.count_ones() as usize <= k + 1 {
        return true;
    }
    let key = (alive, adj.to_vec());
    if let Some(&hit) = memo.get(&key) {
        return hit;
    }
    let mut found = false;
    let mut vs = alive;
    'outer: while vs != 0 {
        let v = vs.trailing_zeros() as usize;
        vs &= vs - 1;
        let nb = adj[v] & alive;
        if nb.count_ones() as usize > k {
            continue;
        }
        // Candidate attachment cliques: k-subsets of alive \ {v} containing nb.
        let pool: Vec<usize> = bits(alive & !(1 << v) & !nb);
        let need = k - nb.count_ones() as usize;
        for extra in subsets_of_size(&pool, need) {
            let clique = nb | extra;
            let mut next_adj = adj.to_vec();
            let mut cs = clique;
            while cs != 0 {
                let a = cs.trailing_zeros() as usize;
                cs &= cs - 1;
                next_adj[a] |= clique & !(1 << a);
            }
            next_adj[v] = 0;
            for m in next_adj.iter_mut() {
                *m &= !(1 << v);
            }
            if search(&next_adj, alive & !(1 << v), k, memo) {
                found = true;
                break 'outer;
            }
        }
    }
    memo.insert(key, found);
    found
}

fn bits(mask: u16) -> Vec<usize> {
    let mut out = Vec::new();
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

fn subsets_of_size(pool: &[usize], size: usize) -> Vec<u16> {
    let mut out = Vec::new();
    if size > pool.len() {
        return out;
    }
    let mut stack = vec![(0usize, 0u16, 0usize)];
    while let Some((idx, mask, taken)) = stack.pop() {
        if taken == size {
            out.push(mask);
            continue;
        }
        if idx >= pool.len() || pool.len() - idx < size - taken {
            continue;
        }
        stack.push((idx + 1, mask, taken));
        stack.push((idx + 1, mask | (1 << pool[idx]), taken + 1));
    }
    out
}

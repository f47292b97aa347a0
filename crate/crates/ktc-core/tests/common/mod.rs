//! Independent brute-force oracles the solver tests check against. Nothing
//! here shares code with the solvers under test: treewidth is recomputed by
//! eliminating vertices in every order, pathwidth by scoring every layout,
//! and proper-pathwidth by searching arbitrary bag sequences straight from
//! the five conditions.

use ktc_core::graph::LabeledGraph;

/// Treewidth as the minimum over all elimination orders of the largest
/// fill-in neighborhood.
pub fn treewidth_by_elimination(g: &LabeledGraph) -> usize {
    let n = g.n();
    let mut adj = vec![0u16; n];
    for (u, v) in g.edges() {
        adj[u - 1] |= 1 << (v - 1);
        adj[v - 1] |= 1 << (u - 1);
    }
    let mut best = n; // > n-1
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    eliminate(&adj, &mut order, &mut used, 0, &mut best);
    best
}

fn eliminate(adj: &[u16], order: &mut Vec<usize>, used: &mut [bool], width_so_far: usize, best: &mut usize) {
    let n = adj.len();
    if width_so_far >= *best {
        return;
    }
    if order.len() == n {
        *best = width_so_far;
        return;
    }
    for v in 0..n {
        if used[v] {
            continue;
        }
        // Eliminate v: connect its remaining neighbors into a clique.
        let mut next_adj = adj.to_vec();
        let nb = next_adj[v] & !used_mask(used);
        let degree = nb.count_ones() as usize;
        let mut bits = nb;
        while bits != 0 {
            let u = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            next_adj[u] |= nb & !(1 << u);
        }
        used[v] = true;
        order.push(v);
        eliminate(&next_adj, order, used, width_so_far.max(degree), best);
        order.pop();
        used[v] = false;
    }
}

fn used_mask(used: &[bool]) -> u16 {
    used.iter().enumerate().filter(|&(_, &u)| u).fold(0u16, |m, (i, _)| m | (1 << i))
}

/// Pathwidth as the minimum over all layouts of the maximum boundary size.
pub fn pathwidth_by_layouts(g: &LabeledGraph) -> usize {
    let n = g.n();
    let mut adj = vec![0u16; n];
    for (u, v) in g.edges() {
        adj[u - 1] |= 1 << (v - 1);
        adj[v - 1] |= 1 << (u - 1);
    }
    let full: u16 = ((1u32 << n) - 1) as u16;
    let mut best = n;
    lay_out(&adj, full, 0, 0, &mut best);
    best
}

fn lay_out(adj: &[u16], full: u16, placed: u16, width_so_far: usize, best: &mut usize) {
    if width_so_far >= *best {
        return;
    }
    if placed == full {
        *best = width_so_far;
        return;
    }
    let mut rest = full & !placed;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let next = placed | (1 << v);
        let mut boundary = 0usize;
        let mut inside = next;
        while inside != 0 {
            let u = inside.trailing_zeros() as usize;
            inside &= inside - 1;
            if adj[u] & full & !next != 0 {
                boundary += 1;
            }
        }
        lay_out(adj, full, next, width_so_far.max(boundary), best);
    }
}

/// Proper-pathwidth straight from the definition: searches sequences of
/// arbitrary bags of size at most w+1 for increasing w. The only
/// normalization applied is forced by conditions 1 and 4 themselves: a bag
/// adding no new vertex would be contained in its predecessor, so every bag
/// introduces at least one fresh vertex (hence at most n bags).
pub fn proper_pathwidth_definitional(g: &LabeledGraph) -> usize {
    for w in 0.. {
        if definitional_decide(g, w) {
            return w;
        }
    }
    unreachable!("a single bag of all vertices is always a valid decomposition")
}

pub fn definitional_decide(g: &LabeledGraph, w: usize) -> bool {
    let n = g.n();
    let cap = w + 1;
    let full: u32 = (1 << n) - 1;
    let edges: Vec<(usize, usize)> = g.edges().iter().map(|&(u, v)| (u - 1, v - 1)).collect();
    let mut bags: Vec<u32> = Vec::new();
    for first in 1..=full {
        if (first.count_ones() as usize) <= cap {
            bags.push(first);
            if extend(&edges, n, cap, full, &mut bags) {
                return true;
            }
            bags.pop();
        }
    }
    false
}

fn covered(edges: &[(usize, usize)], bags: &[u32]) -> bool {
    edges
        .iter()
        .all(|&(u, v)| bags.iter().any(|&b| b >> u & 1 == 1 && b >> v & 1 == 1))
}

fn extend(edges: &[(usize, usize)], n: usize, cap: usize, full: u32, bags: &mut Vec<u32>) -> bool {
    let _ = n;
    let introduced = bags.iter().fold(0u32, |m, &b| m | b);
    if introduced == full && covered(edges, bags) {
        return true;
    }
    let prev = *bags.last().expect("extend starts with one bag");
    let fresh_pool = full & !introduced;
    if fresh_pool == 0 {
        // Every further bag must introduce a new vertex (condition 1 + 4).
        return false;
    }
    // An uncovered edge is only completable if each endpoint is still
    // available: in the current bag or not yet introduced.
    for &(u, v) in edges {
        let available =
            |x: usize| prev >> x & 1 == 1 || fresh_pool >> x & 1 == 1;
        if !bags.iter().any(|&b| b >> u & 1 == 1 && b >> v & 1 == 1) && (!available(u) || !available(v)) {
            return false;
        }
    }
    for old_part in submasks(prev) {
        // Nonempty submasks of the fresh pool; the oracle only decides, so
        // iteration order is irrelevant.
        let mut new_part = fresh_pool;
        while new_part != 0 {
            let bag = old_part | new_part;
            let size = bag.count_ones() as usize;
            if size <= cap && condition_one(bags, bag) && condition_five(bags, bag) {
                bags.push(bag);
                if extend(edges, n, cap, full, bags) {
                    return true;
                }
                bags.pop();
            }
            new_part = (new_part - 1) & fresh_pool;
        }
    }
    false
}

fn condition_one(bags: &[u32], bag: u32) -> bool {
    bags.iter().all(|&earlier| earlier & bag != earlier && earlier & bag != bag)
}

fn condition_five(bags: &[u32], bag: u32) -> bool {
    let r = bags.len();
    for a in 0..r.saturating_sub(1) {
        let inter = (bags[a] & bag).count_ones() as i64;
        for between in &bags[a + 1..r] {
            if inter > between.count_ones() as i64 - 2 {
                return false;
            }
        }
    }
    true
}

fn submasks(mask: u32) -> Vec<u32> {
    let mut out = vec![0u32];
    let mut sub = mask;
    while sub != 0 {
        out.push(sub);
        sub = (sub - 1) & mask;
    }
    out
}

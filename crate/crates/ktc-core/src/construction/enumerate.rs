//! Exhaustive enumeration of constructible triples.
//!
//! Triples are emitted exactly once each, in a documented deterministic
//! order: the labeling permutation ascending lexicographically (position 2
//! first), then within each permutation the per-step choices in step order,
//! the frozen vertex ascending before the neighbor set as an ascending
//! bitmask. Work is partitioned over permutation prefixes; partial results
//! merge by summation and keyed union, so the outcome is identical for any
//! worker count.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::graph::LabeledGraph;
use crate::limits::ENUMERATION_BUDGET;

use super::{is_block_start, ConstructibleTriple, ConstructionError};

/// Multiset of generated graphs for one `(n, k, s)` cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationSummary {
    pub n: usize,
    pub k: usize,
    pub s: usize,
    /// Exact number of constructible triples.
    pub triple_count: u64,
    /// Built graph -> number of triples building it.
    pub preimages: BTreeMap<LabeledGraph, u64>,
    /// Set when the block size exceeds the number of post-window steps, so
    /// the run consists of a single partial block.
    pub oversized_block: bool,
}

impl EnumerationSummary {
    /// Number of distinct generated graphs (`R`).
    pub fn distinct_count(&self) -> u64 {
        self.preimages.len() as u64
    }

    pub fn max_preimages(&self) -> u64 {
        self.preimages.values().copied().max().unwrap_or(0)
    }
}

/// Upper bound on the number of enumeration paths, for the budget refusal.
pub fn choice_space_estimate(n: usize, k: usize, s: usize) -> u128 {
    let _ = s;
    let mut est: u128 = 1;
    for v in 2..n {
        est = est.saturating_mul(v as u128); // (n-1)! permutations
    }
    for i in 2..=n.min(k + 1) {
        est = est.saturating_mul(1u128 << (i - 2).min(120));
    }
    if n > k + 1 {
        let steps = (n - k - 1) as u32;
        let per_step = ((k - 1).max(1) as u128).saturating_mul(1u128 << (k - 1).min(120));
        for _ in 0..steps {
            est = est.saturating_mul(per_step);
        }
    }
    est
}

fn check_params(n: usize, k: usize, s: usize) -> Result<(), ConstructionError> {
    if !(2..=crate::graph::MAX_VERTICES).contains(&n) {
        return Err(super::TripleError::BadN { n }.into());
    }
    if k <= 1 || k > n {
        return Err(super::TripleError::BadK { k, n }.into());
    }
    if s == 0 {
        return Err(super::TripleError::BadS { s }.into());
    }
    Ok(())
}

fn check_budget(n: usize, k: usize, s: usize, budget: Option<u128>) -> Result<(), ConstructionError> {
    let cap = budget.unwrap_or(ENUMERATION_BUDGET);
    let estimate = choice_space_estimate(n, k, s);
    if estimate > cap {
        return Err(ConstructionError::Budget { estimate, cap });
    }
    Ok(())
}

/// Borrowed view of the enumerator's current triple; cheap to inspect,
/// materialized only on demand.
pub(crate) struct TripleView<'a> {
    pub n: usize,
    pub k: usize,
    pub s: usize,
    /// 1-based; index 0 unused.
    pub sigma: &'a [usize],
    /// 1-based; 0 where undefined.
    pub frozen: &'a [usize],
    /// 1-based; bit j set when j ∈ N(i).
    pub neighbor_masks: &'a [u32],
}

impl TripleView<'_> {
    pub fn graph(&self) -> LabeledGraph {
        let mut g = LabeledGraph::empty(self.n).expect("n checked by the enumerator");
        for i in 2..=self.n {
            let mut m = self.neighbor_masks[i];
            while m != 0 {
                let j = m.trailing_zeros() as usize;
                m &= m - 1;
                g.add_edge(self.sigma[i], self.sigma[j]);
            }
        }
        g
    }

    pub fn to_triple(&self) -> ConstructibleTriple {
        let mut f = BTreeMap::new();
        for i in self.k + 2..=self.n {
            f.insert(i, self.frozen[i]);
        }
        let mut neighbors = BTreeMap::new();
        for i in 2..=self.n {
            let mut set = BTreeSet::new();
            let mut m = self.neighbor_masks[i];
            while m != 0 {
                set.insert(m.trailing_zeros() as usize);
                m &= m - 1;
            }
            neighbors.insert(i, set);
        }
        ConstructibleTriple::new(self.n, self.k, self.s, self.sigma[1..=self.n].to_vec(), f, neighbors)
    }
}

/// Submasks of `mask` in ascending numeric order (0 and `mask` included).
fn submasks_ascending(mask: u32) -> impl Iterator<Item = u32> {
    let mut cur = Some(0u32);
    std::iter::from_fn(move || {
        let out = cur?;
        let next = out.wrapping_sub(mask) & mask;
        cur = if next == 0 { None } else { Some(next) };
        Some(out)
    })
}

struct Enumerator<'v> {
    n: usize,
    k: usize,
    s: usize,
    sigma: Vec<usize>,
    frozen: Vec<usize>,
    neighbor_masks: Vec<u32>,
    visitor: &'v mut dyn FnMut(&TripleView<'_>),
}

impl Enumerator<'_> {
    fn emit(&mut self) {
        let view = TripleView {
            n: self.n,
            k: self.k,
            s: self.s,
            sigma: &self.sigma,
            frozen: &self.frozen,
            neighbor_masks: &self.neighbor_masks,
        };
        (self.visitor)(&view);
    }

    /// Fills permutation positions `pos..=n` from `unused`, lex ascending.
    fn permute(&mut self, pos: usize, unused: u32) {
        if pos > self.n {
            self.steps(2, 0, 0);
            return;
        }
        let mut rest = unused;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            self.sigma[pos] = v;
            self.permute(pos + 1, unused & !(1 << v));
        }
    }

    /// Runs the choice steps for `i..=n`; `active`/`anchor` are meaningful
    /// once `i > k+1`.
    fn steps(&mut self, i: usize, active: u32, anchor: usize) {
        let (n, k) = (self.n, self.k);
        if i > n {
            self.emit();
            return;
        }
        if i <= k + 1 {
            // Start-up: N(i) is any subset of {1..i-1} containing 1.
            let pool: u32 = ((1u32 << i) - 1) & !0b11; // bits 2..=i-1
            for sub in submasks_ascending(pool) {
                self.neighbor_masks[i] = sub | 0b10;
                let (next_active, next_anchor) = if i == k + 1 {
                    (((1u32 << (k + 1)) - 1) & !1, 1) // A_{k+1} = {1..k}
                } else {
                    (0, 0)
                };
                self.steps(i + 1, next_active, next_anchor);
            }
            self.neighbor_masks[i] = 0;
            return;
        }
        let block_start = is_block_start(i, k, self.s);
        let frozen_pool = if block_start {
            1u32 << anchor
        } else {
            active & !(1 << anchor) & self.neighbor_masks[i - 1]
        };
        let mut fs = frozen_pool;
        while fs != 0 {
            let fv = fs.trailing_zeros() as usize;
            fs &= fs - 1;
            let next_active = (active & !(1 << fv)) | (1 << (i - 1));
            let next_anchor = if block_start { next_active.trailing_zeros() as usize } else { anchor };
            self.frozen[i] = fv;
            let pool = next_active & !(1 << next_anchor);
            for sub in submasks_ascending(pool) {
                let size = sub.count_ones() as usize + 1;
                if 2 * size < k + 1 {
                    continue;
                }
                self.neighbor_masks[i] = sub | (1 << next_anchor);
                self.steps(i + 1, next_active, next_anchor);
            }
            self.neighbor_masks[i] = 0;
        }
        self.frozen[i] = 0;
    }
}

/// Runs `visitor` over every constructible triple for the cell, restricted
/// to permutations whose position-2 value falls in `second_values`.
fn run_enumeration(
    n: usize,
    k: usize,
    s: usize,
    second_values: Option<u32>,
    visitor: &mut dyn FnMut(&TripleView<'_>),
) {
    let all: u32 = ((2u32 << n) - 2) & !0b10; // values 2..=n as bits, bit 1 excluded
    let mut e = Enumerator {
        n,
        k,
        s,
        sigma: vec![0; n + 1],
        frozen: vec![0; n + 1],
        neighbor_masks: vec![0; n + 1],
        visitor,
    };
    e.sigma[1] = 1;
    if n == 1 {
        return;
    }
    match second_values {
        None => e.permute(2, all),
        Some(chosen) => {
            let mut rest = chosen & all;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                e.sigma[2] = v;
                e.permute(3, all & !(1 << v));
            }
        }
    }
}

/// Streams every constructible triple in the documented order (serial).
pub fn for_each_triple(
    n: usize,
    k: usize,
    s: usize,
    budget: Option<u128>,
    mut visitor: impl FnMut(ConstructibleTriple),
) -> Result<(), ConstructionError> {
    check_params(n, k, s)?;
    check_budget(n, k, s, budget)?;
    run_enumeration(n, k, s, None, &mut |view| visitor(view.to_triple()));
    Ok(())
}

/// Materializes the full triple list (test- and CLI-scale cells only).
pub fn enumerate_triples(
    n: usize,
    k: usize,
    s: usize,
    budget: Option<u128>,
) -> Result<Vec<ConstructibleTriple>, ConstructionError> {
    let mut out = Vec::new();
    for_each_triple(n, k, s, budget, |t| out.push(t))?;
    Ok(out)
}

/// Exhaustive enumeration reduced to the graph multiset, in parallel over
/// permutation prefixes.
pub fn enumerate_summary(
    n: usize,
    k: usize,
    s: usize,
    workers: usize,
    budget: Option<u128>,
) -> Result<EnumerationSummary, ConstructionError> {
    check_params(n, k, s)?;
    check_budget(n, k, s, budget)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool construction");
    let tasks: Vec<u32> = (2..=n).map(|v| 1u32 << v).collect();
    let partials: Vec<(u64, BTreeMap<LabeledGraph, u64>)> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&chosen| {
                let mut count = 0u64;
                let mut map: BTreeMap<LabeledGraph, u64> = BTreeMap::new();
                run_enumeration(n, k, s, Some(chosen), &mut |view| {
                    count += 1;
                    *map.entry(view.graph()).or_insert(0) += 1;
                });
                (count, map)
            })
            .collect()
    });
    let mut triple_count = 0u64;
    let mut preimages: BTreeMap<LabeledGraph, u64> = BTreeMap::new();
    for (count, map) in partials {
        triple_count += count;
        for (g, c) in map {
            *preimages.entry(g).or_insert(0) += c;
        }
    }
    Ok(EnumerationSummary {
        n,
        k,
        s,
        triple_count,
        preimages,
        oversized_block: n > k + 1 && s > n - (k + 1),
    })
}

/// Distinct generated graphs and their number `R`.
pub fn distinct_graphs(
    n: usize,
    k: usize,
    s: usize,
    workers: usize,
    budget: Option<u128>,
) -> Result<(BTreeSet<LabeledGraph>, u64), ConstructionError> {
    let summary = enumerate_summary(n, k, s, workers, budget)?;
    let set: BTreeSet<LabeledGraph> = summary.preimages.keys().copied().collect();
    let count = set.len() as u64;
    Ok((set, count))
}

fn factorial(m: usize) -> BigUint {
    (1..=m as u64).map(BigUint::from).fold(BigUint::one(), |a, b| a * b)
}

/// Closed-form lower bound on the number of constructible triples:
/// `(n-1)! * ((k-1)/2)^(n-(k+1)-ceil((n-(k+1))/s)) * 2^(k(k-1)/2) *
/// 2^((n-(k+1))(k-2))`, evaluated as an exact rational and floored.
///
/// The closed form presumes the full start-up window exists (n >= k+1); at
/// n = k the exact choice-product `(n-1)! * 2^((n-1)(n-2)/2)` is returned
/// instead, since the formula would overshoot the true count there.
pub fn triple_count_lower_bound(n: usize, k: usize, s: usize) -> Result<BigUint, ConstructionError> {
    check_params(n, k, s)?;
    if n < k + 1 {
        return Ok(factorial(n - 1) << ((n - 1) * (n - 2) / 2));
    }
    let m = n - (k + 1);
    let exponent = m - m.div_ceil(s);
    let half_base = BigRational::new((k as i64 - 1).into(), 2.into());
    let mut value = BigRational::from_integer(factorial(n - 1).into());
    for _ in 0..exponent {
        value *= &half_base;
    }
    let pow2 = k * (k - 1) / 2 + m * (k - 2);
    value *= BigRational::from_integer(num_bigint::BigInt::one() << pow2);
    let floored = value.floor().to_integer();
    Ok(floored.to_biguint().unwrap_or_else(BigUint::zero))
}

/// Upper bound on the number of triples building any one graph:
/// `2^k * k! * (s!)^floor((n-k-1)/s) * t!` with
/// `t = n-k-1 - s*floor((n-k-1)/s)`.
pub fn preimage_bound(n: usize, k: usize, s: usize) -> Result<BigUint, ConstructionError> {
    check_params(n, k, s)?;
    let m = n.saturating_sub(k + 1);
    let full_blocks = m / s;
    let t = m - s * full_blocks;
    let mut bound = BigUint::one() << k;
    bound *= factorial(k);
    let sf = factorial(s);
    for _ in 0..full_blocks {
        bound *= &sf;
    }
    bound *= factorial(t);
    Ok(bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn smallest_cell_has_exactly_four_triples() {
        let triples = enumerate_triples(3, 2, 1, None).unwrap();
        assert_eq!(triples.len(), 4);
        for t in &triples {
            t.validate().expect("enumerated triples are constructible");
        }
        // Documented order: identity permutation first, N(3) ascending.
        assert_eq!(triples[0].sigma, vec![1, 2, 3]);
        assert_eq!(triples[0].neighbors[&3], BTreeSet::from([1]));
        assert_eq!(triples[1].neighbors[&3], BTreeSet::from([1, 2]));
        assert_eq!(triples[2].sigma, vec![1, 3, 2]);
    }

    #[test]
    fn window_only_cells_match_the_closed_form() {
        // n = k+1: (k)! would overcount; the product of the choice counts is
        // k! * 2^(k(k-1)/2) over sigma and the start-up neighbor sets.
        for k in 2..=4 {
            let n = k + 1;
            let expected = factorial(k).to_u64().unwrap() << (k * (k - 1) / 2);
            let triples = enumerate_triples(n, k, 1, None).unwrap();
            assert_eq!(triples.len() as u64, expected, "n={n} k={k}");
        }
    }

    #[test]
    fn summary_matches_serial_enumeration() {
        for workers in [1, 2, 8] {
            let summary = enumerate_summary(5, 2, 2, workers, None).unwrap();
            assert_eq!(summary.triple_count, 48);
            let serial = enumerate_triples(5, 2, 2, None).unwrap();
            assert_eq!(serial.len(), 48);
            let mut map: BTreeMap<LabeledGraph, u64> = BTreeMap::new();
            for t in &serial {
                *map.entry(t.build_graph().unwrap()).or_insert(0) += 1;
            }
            assert_eq!(summary.preimages, map);
            assert!(!summary.oversized_block);
        }
    }

    #[test]
    fn distinct_graphs_of_the_smallest_cell() {
        let (set, r) = distinct_graphs(3, 2, 1, 2, None).unwrap();
        assert_eq!(r, 2);
        let star = LabeledGraph::from_edges(3, &[(1, 2), (1, 3)]).unwrap();
        let k3 = LabeledGraph::complete(3).unwrap();
        assert_eq!(set, BTreeSet::from([star, k3]));
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(triple_count_lower_bound(3, 2, 1).unwrap(), BigUint::from(4u32));
        assert_eq!(triple_count_lower_bound(4, 3, 1).unwrap(), BigUint::from(48u32));
        // Exponent rounding: (5,2,2) keeps one factor of 1/2.
        assert_eq!(triple_count_lower_bound(5, 2, 2).unwrap(), BigUint::from(24u32));
        // n = k guard returns the exact product.
        assert_eq!(triple_count_lower_bound(3, 3, 1).unwrap(), BigUint::from(4u32));
        assert_eq!(enumerate_triples(3, 3, 1, None).unwrap().len(), 4);
    }

    #[test]
    fn preimage_bound_examples() {
        // (3,2,1): 2^2 * 2! * (1!)^0 * 0! = 8.
        assert_eq!(preimage_bound(3, 2, 1).unwrap(), BigUint::from(8u32));
        // (7,3,2): m=3, one full block of 2, t=1: 2^3*6*2*1 = 96.
        assert_eq!(preimage_bound(7, 3, 2).unwrap(), BigUint::from(96u32));
    }

    #[test]
    fn budget_refusal_reports_estimate() {
        let err = enumerate_triples(5, 2, 1, Some(10)).unwrap_err();
        match err {
            ConstructionError::Budget { estimate, cap } => {
                assert!(estimate > 10);
                assert_eq!(cap, 10);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn oversized_final_block_is_flagged() {
        let summary = enumerate_summary(5, 2, 3, 1, None).unwrap();
        assert!(summary.oversized_block);
        assert_eq!(summary.triple_count, 48);
    }
}

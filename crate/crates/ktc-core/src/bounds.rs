//! Arbitrary-precision evaluation of the count bounds.
//!
//! Every formula closed under rational arithmetic is evaluated exactly
//! (no floating point anywhere on those paths); formulas involving `e`,
//! logarithms, or fractional powers produce certified intervals whose lower
//! endpoint is a sound lower bound on the expression.

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bignum::{euler_number, ln_interval, log2_interval, rational_to_string, BigNumber, Interval};
use crate::census::{census_partial_ktrees, CensusError};
use crate::limits::INTERVAL_PRECISION_BITS;

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Census(#[from] CensusError),
}

/// Logarithm convention for the construction lower bound and the block-size
/// optimization.
///
/// Binary is the default: substituting the block size `s = log2 k` into the
/// simplified ratio bound turns its `64e * k^(1/s) * s` denominator into
/// exactly `128e * log2 k`, which is the headline constant. With natural
/// logarithms the same substitution gives `64 e^2 * ln k` instead, so the
/// natural-log variant is offered for sensitivity reporting only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum LogBase {
    #[default]
    Binary,
    Natural,
}

fn log_of(k: usize, base: LogBase, precision: u32) -> Interval {
    let x = BigRational::from_integer(BigInt::from(k as u64));
    match base {
        LogBase::Binary => log2_interval(&x, precision),
        LogBase::Natural => ln_interval(&x, precision),
    }
}

fn factorial(m: usize) -> BigUint {
    (1..=m as u64).map(BigUint::from).fold(BigUint::one(), |a, b| a * b)
}

fn rat_int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

/// `base^exp` for integer exp of either sign.
fn rat_pow(base: &BigRational, exp: i64) -> BigRational {
    if exp == 0 {
        return BigRational::one();
    }
    let mag = exp.unsigned_abs() as u32;
    let powed = BigRational::new(base.numer().pow(mag), base.denom().pow(mag));
    if exp < 0 {
        powed.recip()
    } else {
        powed
    }
}

/// Exact integer with a flag for rows where the defining formula did not
/// apply and a trivially correct substitute was used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuardedBound {
    pub value: BigUint,
    pub guarded: bool,
}

/// Closed-form count of n-vertex labeled k-trees:
/// `C(n,k) * (kn - k^2 + 1)^(n-k-2)`. Defined for n >= k+1 (the negative
/// exponent at n = k+1 still yields the exact value 1).
pub fn labeled_ktree_count(n: usize, k: usize) -> Result<BigUint, BoundsError> {
    if k == 0 || n < k + 1 {
        return Err(BoundsError::Domain(format!("k-tree count needs 1 <= k < n+1; got n={n}, k={k}")));
    }
    if n == k + 1 {
        return Ok(BigUint::one());
    }
    let choose = binomial(BigUint::from(n as u64), BigUint::from(k as u64));
    let base = BigUint::from((k * n - k * k + 1) as u64);
    Ok(choose * base.pow((n - k - 2) as u32))
}

/// Upper bound from edge subsets of k-trees:
/// `2^(kn - k(k+1)/2) * C(n,k) * (kn - k^2 + 1)^(n-k-2)`, exact.
/// For n < k+2 the exponent turns negative; the evaluator substitutes the
/// trivially correct `2^C(n,2)` and flags the row.
pub fn ktree_subgraph_upper_bound(n: usize, k: usize) -> Result<GuardedBound, BoundsError> {
    if k == 0 || k > n {
        return Err(BoundsError::Domain(format!("need 0 < k <= n; got n={n}, k={k}")));
    }
    if n < k + 2 {
        return Ok(GuardedBound { value: BigUint::one() << (n * (n - 1) / 2), guarded: true });
    }
    let value = (labeled_ktree_count(n, k)?) << (k * n - k * (k + 1) / 2);
    Ok(GuardedBound { value, guarded: false })
}

/// Relaxed upper bound `(k * 2^k * n)^n * 2^(-k(k+1)/2) * k^(-k)`, exact
/// rational.
pub fn dominant_upper_bound(n: usize, k: usize) -> Result<BigRational, BoundsError> {
    if k == 0 || k > n {
        return Err(BoundsError::Domain(format!("need 0 < k <= n; got n={n}, k={k}")));
    }
    let lead = rat_int((k as u64 * n as u64) as i64) * rat_int(BigInt::one() << k);
    let value = rat_pow(&lead, n as i64)
        * rat_pow(&rat_int(2), -((k * (k + 1) / 2) as i64))
        * rat_pow(&rat_int(k as i64), -(k as i64));
    Ok(value)
}

/// Lower bound from forests plus apices:
/// `(n-k+1)^(n-k-1) * 2^((k-1)(n-k+1))`, exact integer.
pub fn apex_forest_lower_bound(n: usize, k: usize) -> Result<BigUint, BoundsError> {
    if k == 0 || n < k {
        return Err(BoundsError::Domain(format!("need 1 <= k <= n; got n={n}, k={k}")));
    }
    let m = n - k + 1;
    let tree_part = if m >= 2 { BigUint::from(m as u64).pow((m - 2) as u32) } else { BigUint::one() };
    Ok(tree_part << ((k - 1) * m))
}

/// Asymptotic-conditional relaxation of the apex bound:
/// `(2^k * n / 4)^n * 2^(-k^2)`, exact rational. Only claimed when n/k is
/// large; reports must carry the flag.
pub fn asymptotic_apex_lower_bound(n: usize, k: usize) -> Result<BigRational, BoundsError> {
    if k == 0 || k > n {
        return Err(BoundsError::Domain(format!("need 0 < k <= n; got n={n}, k={k}")));
    }
    let lead = rat_int(n as i64) * rat_int(BigInt::one() << k) / rat_int(4);
    Ok(rat_pow(&lead, n as i64) * rat_pow(&rat_int(2), -((k * k) as i64)))
}

/// The headline construction lower bound:
/// `(k * 2^k * n / (128 e log k))^n * 2^(-k(k+3)/2) * k^(-2k-2)`,
/// as a certified interval. Requires k > 1 (log k must be positive).
pub fn construction_lower_bound(
    n: usize,
    k: usize,
    base: LogBase,
    precision: u32,
) -> Result<Interval, BoundsError> {
    if k <= 1 {
        return Err(BoundsError::Domain(format!("log k requires k > 1; got k={k}")));
    }
    if k > n {
        return Err(BoundsError::Domain(format!("need k <= n; got n={n}, k={k}")));
    }
    let numer = Interval::from_rational(&(rat_int((k * n) as i64) * rat_int(BigInt::one() << k)), precision);
    let denom = Interval::from_int(128, precision)
        .mul(&euler_number(precision))
        .mul(&log_of(k, base, precision));
    let lead = numer.div(&denom).pow(n as u32);
    let tail = rat_pow(&rat_int(2), -((k * (k + 3) / 2) as i64)) * rat_pow(&rat_int(k as i64), -(2 * k as i64 + 2));
    Ok(lead.mul(&Interval::from_rational(&tail, precision)))
}

/// Unfloored triple-count expression over the preimage bound, as an exact
/// rational:
/// `(n-1)! ((k-1)/2)^(n-(k+1)-ceil((n-(k+1))/s)) 2^(k(k-1)/2) 2^((n-(k+1))(k-2))`
/// divided by `2^k k! (s!)^floor((n-k-1)/s) t!`. At n = k the start-up
/// window is truncated and the exact choice product replaces the numerator
/// (mirroring the guard on the integer lower bound).
pub fn ratio_lower_bound(n: usize, k: usize, s: usize) -> Result<BigRational, BoundsError> {
    if k <= 1 || k > n || s == 0 {
        return Err(BoundsError::Domain(format!("need 1 < k <= n and s >= 1; got n={n}, k={k}, s={s}")));
    }
    let numerator = if n < k + 1 {
        rat_int(BigInt::from(factorial(n - 1))) * rat_pow(&rat_int(2), ((n - 1) * (n - 2) / 2) as i64)
    } else {
        let m = n - (k + 1);
        let exponent = (m - m.div_ceil(s)) as i64;
        rat_int(BigInt::from(factorial(n - 1)))
            * rat_pow(&BigRational::new((k as i64 - 1).into(), 2.into()), exponent)
            * rat_pow(&rat_int(2), (k * (k - 1) / 2 + m * (k - 2)) as i64)
    };
    let m = n.saturating_sub(k + 1);
    let full_blocks = m / s;
    let t = m - s * full_blocks;
    let mut denominator = rat_int(BigInt::one() << k) * rat_int(BigInt::from(factorial(k)));
    let sf = rat_int(BigInt::from(factorial(s)));
    for _ in 0..full_blocks {
        denominator *= &sf;
    }
    denominator *= rat_int(BigInt::from(factorial(t)));
    Ok(numerator / denominator)
}

/// Simplified form of the ratio bound:
/// `(k * 2^k * n / (64 e k^(1/s) s))^n * 2^(-k(k+3)/2) * k^(-2k-2)`.
pub fn simplified_ratio_lower_bound(
    n: usize,
    k: usize,
    s: usize,
    precision: u32,
) -> Result<Interval, BoundsError> {
    if k <= 1 || k > n || s == 0 {
        return Err(BoundsError::Domain(format!("need 1 < k <= n and s >= 1; got n={n}, k={k}, s={s}")));
    }
    let numer = Interval::from_rational(&(rat_int((k * n) as i64) * rat_int(BigInt::one() << k)), precision);
    let root = Interval::from_int(k as i64, precision).root(s as u32);
    let denom = Interval::from_int(64, precision)
        .mul(&euler_number(precision))
        .mul(&root)
        .mul(&Interval::from_int(s as i64, precision));
    let lead = numer.div(&denom).pow(n as u32);
    let tail = rat_pow(&rat_int(2), -((k * (k + 3) / 2) as i64)) * rat_pow(&rat_int(k as i64), -(2 * k as i64 + 2));
    Ok(lead.mul(&Interval::from_rational(&tail, precision)))
}

/// `g(s) = k^(1/s) * s` comparison without irrationals: `g(s1) < g(s2)` iff
/// `k^s2 * s1^(s1 s2) < k^s1 * s2^(s1 s2)`.
fn block_cost_less(k: usize, s1: usize, s2: usize) -> std::cmp::Ordering {
    let kb = BigUint::from(k as u64);
    let lhs = kb.pow(s2 as u32) * BigUint::from(s1 as u64).pow((s1 * s2) as u32);
    let rhs = kb.pow(s1 as u32) * BigUint::from(s2 as u64).pow((s1 * s2) as u32);
    lhs.cmp(&rhs)
}

/// Outcome of the block-size optimization for one k.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockSizeChoice {
    pub k: usize,
    /// Exact integer minimizer of `k^(1/s) * s` (smallest on ties).
    pub s: usize,
    /// The continuous optimum `ln k` as a certified enclosure.
    pub continuous_optimum: Interval,
    /// `max(1, round(ln k))`, reported for comparison with the integer
    /// minimizer (the two differ for some k, e.g. k = 12).
    pub rounded_continuous: usize,
    /// `(s, enclosure of k^(1/s) * s)` at s-1, s, s+1 where defined.
    pub neighborhood: Vec<(usize, Interval)>,
}

/// Selects the block size minimizing `k^(1/s) * s` by exact integer
/// comparison over `1..=max(3, ceil(3 ln k))`.
pub fn choose_block_size(k: usize) -> Result<BlockSizeChoice, BoundsError> {
    if k < 2 {
        return Err(BoundsError::Domain(format!("block-size choice requires k >= 2; got k={k}")));
    }
    let precision = INTERVAL_PRECISION_BITS;
    let ln_k = ln_interval(&rat_int(k as i64), precision);
    let hi_limit = ln_k.hi.to_f64().unwrap_or(5.0);
    let sweep_max = (3.0 * hi_limit).ceil().max(3.0) as usize;
    let mut best = 1usize;
    for s in 2..=sweep_max {
        if block_cost_less(k, s, best) == std::cmp::Ordering::Less {
            best = s;
        }
    }
    let rounded = {
        let half = BigRational::new(1.into(), 2.into());
        let down = (&ln_k.lo + &half).floor().to_integer().to_usize().unwrap_or(1);
        let up = (&ln_k.hi + &half).floor().to_integer().to_usize().unwrap_or(1);
        assert_eq!(down, up, "enclosure of ln {k} straddles a rounding boundary; raise precision");
        down.max(1)
    };
    let cost = |s: usize| {
        Interval::from_int(k as i64, precision)
            .root(s as u32)
            .mul(&Interval::from_int(s as i64, precision))
    };
    let mut neighborhood = Vec::new();
    if best > 1 {
        neighborhood.push((best - 1, cost(best - 1)));
    }
    neighborhood.push((best, cost(best)));
    neighborhood.push((best + 1, cost(best + 1)));
    Ok(BlockSizeChoice { k, s: best, continuous_optimum: ln_k, rounded_continuous: rounded, neighborhood })
}

/// Closed-form count of proper linear k-trees: `n! k^(n-k-1) / (2k k!)`.
/// The quotient must be an integer; a remainder would mean the formula was
/// transcribed wrong, so it is asserted.
pub fn proper_linear_ktree_closed_form(n: usize, k: usize) -> Result<BigUint, BoundsError> {
    if k == 0 || n < k + 2 {
        return Err(BoundsError::Domain(format!("closed form needs n >= k+2, k >= 1; got n={n}, k={k}")));
    }
    let numerator = factorial(n) * BigUint::from(k as u64).pow((n - k - 1) as u32);
    let denominator = BigUint::from(2 * k as u64) * factorial(k);
    assert!(
        (&numerator % &denominator).is_zero(),
        "proper-linear-k-tree count must divide exactly (n={n}, k={k})"
    );
    Ok(numerator / denominator)
}

/// Edge-subset upper bound on graphs of proper-pathwidth at most k:
/// `2^(kn - k(k+1)/2)` times the proper linear k-tree count.
pub fn proper_pathwidth_count_upper_bound(n: usize, k: usize) -> Result<BigUint, BoundsError> {
    Ok(proper_linear_ktree_closed_form(n, k)? << (k * n - k * (k + 1) / 2))
}

/// Doubles precision until the enclosure is tight (relative width below
/// 1e-6) or the precision cap is reached.
pub fn refine_interval(
    mut precision: u32,
    eval: impl Fn(u32) -> Result<Interval, BoundsError>,
) -> Result<Interval, BoundsError> {
    let tolerance = BigRational::new(1.into(), 1_000_000.into());
    loop {
        let iv = eval(precision)?;
        if iv.lo.is_positive() && iv.width() / &iv.lo <= tolerance {
            return Ok(iv);
        }
        if precision >= 2048 {
            return Ok(iv);
        }
        precision *= 2;
    }
}

/// All bound columns for one `(n, k, s)` cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub k: usize,
    pub s: usize,
    pub ktree_ub: BigNumber,
    pub ktree_ub_guarded: bool,
    pub dominant_ub: BigNumber,
    pub apex_lb: BigNumber,
    /// Valid only in the n/k -> infinity regime; evaluated, never asserted.
    pub asymptotic_apex_lb: BigNumber,
    pub construction_lb: Option<BigNumber>,
    pub ratio_lb: Option<BigNumber>,
    pub simplified_ratio_lb: Option<BigNumber>,
    pub census: Option<BigNumber>,
}

/// Assembles the bound table row; interval cells are refined on demand.
/// `k = 1` rows omit the log-dependent bounds.
pub fn bound_report(n: usize, k: usize, s: usize, base: LogBase) -> Result<BoundReport, BoundsError> {
    let p = INTERVAL_PRECISION_BITS;
    let ktree = ktree_subgraph_upper_bound(n, k)?;
    let log_backed = if k >= 2 {
        let construction = refine_interval(p, |prec| construction_lower_bound(n, k, base, prec))?;
        let simplified = refine_interval(p, |prec| simplified_ratio_lower_bound(n, k, s, prec))?;
        Some((construction, ratio_lower_bound(n, k, s)?, simplified))
    } else {
        None
    };
    let (construction_lb, ratio_lb, simplified_ratio_lb) = match log_backed {
        Some((c, r, sr)) => (
            Some(BigNumber::Interval(c)),
            Some(BigNumber::Exact(r)),
            Some(BigNumber::Interval(sr)),
        ),
        None => (None, None, None),
    };
    Ok(BoundReport {
        n,
        k,
        s,
        ktree_ub: BigNumber::from_biguint(ktree.value),
        ktree_ub_guarded: ktree.guarded,
        dominant_ub: BigNumber::Exact(dominant_upper_bound(n, k)?),
        apex_lb: BigNumber::from_biguint(apex_forest_lower_bound(n, k)?),
        asymptotic_apex_lb: BigNumber::Exact(asymptotic_apex_lower_bound(n, k)?),
        construction_lb,
        ratio_lb,
        simplified_ratio_lb,
        census: None,
    })
}

/// One verified sandwich `apex_lb <= census <= ktree_ub` (plus the
/// construction lower bound when k > 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub n: usize,
    pub k: usize,
    pub census: BigNumber,
    pub apex_lb: BigNumber,
    pub ktree_ub: BigNumber,
    pub ktree_ub_guarded: bool,
    pub construction_lb: Option<BigNumber>,
    pub holds: bool,
    pub failures: Vec<String>,
}

impl SandwichReport {
    pub fn summary_line(&self) -> String {
        let lb = self.apex_lb.to_decimal_string();
        let t = self.census.to_decimal_string();
        let ub = self.ktree_ub.to_decimal_string();
        format!("{lb} <= {t} <= {ub}")
    }
}

/// Computes the census value by brute force and checks it against the
/// bounds; every violated inequality is reported.
pub fn verify_sandwich(n: usize, k: usize, workers: usize) -> Result<SandwichReport, BoundsError> {
    let census = census_partial_ktrees(n, k, workers)?.count;
    let apex = apex_forest_lower_bound(n, k)?;
    let ktree = ktree_subgraph_upper_bound(n, k)?;
    let construction = if k >= 2 {
        Some(refine_interval(INTERVAL_PRECISION_BITS, |p| {
            construction_lower_bound(n, k, LogBase::default(), p)
        })?)
    } else {
        None
    };
    let mut failures = Vec::new();
    if apex > census {
        failures.push(format!("apex lower bound {apex} exceeds census {census}"));
    }
    if census > ktree.value {
        failures.push(format!("census {census} exceeds k-tree upper bound {}", ktree.value));
    }
    if let Some(iv) = &construction {
        let census_rat = BigRational::from_integer(BigInt::from(census.clone()));
        if iv.lo > census_rat {
            failures.push(format!(
                "construction lower bound {} exceeds census {census}",
                rational_to_string(&iv.lo)
            ));
        }
    }
    Ok(SandwichReport {
        n,
        k,
        census: BigNumber::from_biguint(census),
        apex_lb: BigNumber::from_biguint(apex),
        ktree_ub: BigNumber::from_biguint(ktree.value),
        ktree_ub_guarded: ktree.guarded,
        construction_lb: construction.map(BigNumber::Interval),
        holds: failures.is_empty(),
        failures,
    })
}

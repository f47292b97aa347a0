//! Arbitrary-precision values for the bound evaluators: exact rationals
//! wherever a formula is closed under rational arithmetic, and directed-
//! rounded real intervals where `e`, logarithms, or fractional powers
//! appear.
//!
//! Interval endpoints are dyadic rationals, outward-rounded to a grid of
//! `2^-precision` after every operation. Transcendental constants come from
//! truncated series with explicit remainder bounds folded into the upper
//! endpoint, so `lo <= true value <= hi` holds unconditionally. Evaluating
//! the same expression at a doubled precision yields a nested, narrower
//! interval: partial sums only grow, remainder bounds only shrink, and the
//! finer rounding grid refines the coarser one.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::limits::INTERVAL_PRECISION_BITS;

/// An exact rational or a certified real enclosure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum BigNumber {
    Exact(BigRational),
    Interval(Interval),
}

impl BigNumber {
    pub fn from_int(v: impl Into<BigInt>) -> Self {
        BigNumber::Exact(BigRational::from_integer(v.into()))
    }

    pub fn from_biguint(v: BigUint) -> Self {
        BigNumber::Exact(BigRational::from_integer(v.into()))
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            BigNumber::Exact(r) => Some(r),
            BigNumber::Interval(_) => None,
        }
    }

    pub fn as_interval(&self) -> Option<&Interval> {
        match self {
            BigNumber::Interval(i) => Some(i),
            BigNumber::Exact(_) => None,
        }
    }

    /// Certified lower end: the value itself for exact numbers.
    pub fn lower(&self) -> BigRational {
        match self {
            BigNumber::Exact(r) => r.clone(),
            BigNumber::Interval(i) => i.lo.clone(),
        }
    }

    pub fn upper(&self) -> BigRational {
        match self {
            BigNumber::Exact(r) => r.clone(),
            BigNumber::Interval(i) => i.hi.clone(),
        }
    }

    /// Decimal rendering: integers verbatim, other exact rationals as
    /// `num/den`, intervals as `[lo,hi]`. Never scientific notation.
    pub fn to_decimal_string(&self) -> String {
        match self {
            BigNumber::Exact(r) => rational_to_string(r),
            BigNumber::Interval(i) => format!("[{},{}]", rational_to_string(&i.lo), rational_to_string(&i.hi)),
        }
    }
}

impl std::fmt::Display for BigNumber {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

/// Renders an exact rational without precision loss. Dyadic denominators
/// expand to a finite decimal; anything else stays `num/den`.
pub fn rational_to_string(r: &BigRational) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    let den = r.denom().to_biguint().expect("denominators are positive");
    let two_adic = den.trailing_zeros().unwrap_or(0);
    if den == BigUint::one() << two_adic as usize {
        // a / 2^p == a * 5^p / 10^p: finite decimal expansion.
        let p = two_adic as usize;
        let scaled = (r.numer() * BigInt::from(5u8).pow(p as u32)).abs();
        let digits = scaled.to_string();
        let digits = format!("{:0>width$}", digits, width = p + 1);
        let point = digits.len() - p;
        let mut out = String::new();
        if r.is_negative() {
            out.push('-');
        }
        out.push_str(&digits[..point]);
        out.push('.');
        out.push_str(&digits[point..]);
        while out.ends_with('0') {
            out.pop();
        }
        if out.ends_with('.') {
            out.pop();
        }
        out
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Closed real interval with dyadic endpoints bracketing a true value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
    /// Rounding grid exponent the endpoints were rounded at.
    pub precision: u32,
}

impl Interval {
    /// Exact point interval (endpoints rounded outward onto the grid).
    pub fn from_rational(r: &BigRational, precision: u32) -> Self {
        Self { lo: r.clone(), hi: r.clone(), precision }.round_out()
    }

    pub fn from_int(v: impl Into<BigInt>, precision: u32) -> Self {
        Self::from_rational(&BigRational::from_integer(v.into()), precision)
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, r: &BigRational) -> bool {
        self.lo <= *r && *r <= self.hi
    }

    pub fn is_subinterval_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    fn round_out(self) -> Self {
        Self {
            lo: floor_to_grid(&self.lo, self.precision),
            hi: ceil_to_grid(&self.hi, self.precision),
            precision: self.precision,
        }
    }

    pub fn add(&self, other: &Interval) -> Self {
        Self {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
            precision: self.precision.min(other.precision),
        }
        .round_out()
    }

    /// Product; both operands must be nonnegative (every quantity in the
    /// bound formulas is).
    pub fn mul(&self, other: &Interval) -> Self {
        assert!(!self.lo.is_negative() && !other.lo.is_negative(), "interval arithmetic restricted to nonnegative values");
        Self {
            lo: &self.lo * &other.lo,
            hi: &self.hi * &other.hi,
            precision: self.precision.min(other.precision),
        }
        .round_out()
    }

    /// Quotient; the divisor must be strictly positive.
    pub fn div(&self, other: &Interval) -> Self {
        assert!(other.lo.is_positive(), "division requires a strictly positive divisor");
        assert!(!self.lo.is_negative());
        Self {
            lo: &self.lo / &other.hi,
            hi: &self.hi / &other.lo,
            precision: self.precision.min(other.precision),
        }
        .round_out()
    }

    /// Integer power of a nonnegative interval.
    pub fn pow(&self, exp: u32) -> Self {
        assert!(!self.lo.is_negative());
        Self { lo: pow_rational(&self.lo, exp), hi: pow_rational(&self.hi, exp), precision: self.precision }
            .round_out()
    }

    /// `deg`-th root of a nonnegative interval, by dyadic bisection against
    /// exact rational powers.
    pub fn root(&self, deg: u32) -> Self {
        assert!(deg >= 1 && !self.lo.is_negative());
        Self {
            lo: root_down(&self.lo, deg, self.precision),
            hi: root_up(&self.hi, deg, self.precision),
            precision: self.precision,
        }
    }

    pub fn midpoint_f64(&self) -> Option<f64> {
        ((&self.lo + &self.hi) / BigRational::from_integer(2.into())).to_f64()
    }
}

fn pow_rational(base: &BigRational, exp: u32) -> BigRational {
    if exp == 0 {
        return BigRational::one();
    }
    BigRational::new(base.numer().pow(exp), base.denom().pow(exp))
}

fn floor_to_grid(r: &BigRational, precision: u32) -> BigRational {
    let scale = BigInt::one() << precision as usize;
    let scaled = r * BigRational::from_integer(scale.clone());
    BigRational::new(scaled.floor().to_integer(), scale)
}

fn ceil_to_grid(r: &BigRational, precision: u32) -> BigRational {
    let scale = BigInt::one() << precision as usize;
    let scaled = r * BigRational::from_integer(scale.clone());
    BigRational::new(scaled.ceil().to_integer(), scale)
}

/// Largest dyadic `m / 2^precision` with `d^deg <= x`.
fn root_down(x: &BigRational, deg: u32, precision: u32) -> BigRational {
    if x.is_zero() {
        return BigRational::zero();
    }
    let scale = BigInt::one() << precision as usize;
    // Binary search on the numerator m of d = m / scale.
    let mut lo = BigInt::zero();
    let mut hi = upper_root_seed(x) * &scale + 1;
    while &lo + 1 < hi {
        let mid: BigInt = (&lo + &hi) >> 1;
        let cand = BigRational::new(mid.clone(), scale.clone());
        if pow_rational(&cand, deg) <= *x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    BigRational::new(lo, scale)
}

fn root_up(x: &BigRational, deg: u32, precision: u32) -> BigRational {
    if x.is_zero() {
        return BigRational::zero();
    }
    let scale = BigInt::one() << precision as usize;
    let mut lo = BigInt::zero();
    let mut hi = upper_root_seed(x) * &scale + 1;
    // Smallest m with (m/scale)^deg >= x.
    while &lo + 1 < hi {
        let mid: BigInt = (&lo + &hi) >> 1;
        let cand = BigRational::new(mid.clone(), scale.clone());
        if pow_rational(&cand, deg) >= *x {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    BigRational::new(hi, scale)
}

/// Any integer upper bound for every deg-th root of x (deg >= 1): max(x, 1)
/// rounded up works since root(x) <= x for x >= 1.
fn upper_root_seed(x: &BigRational) -> BigInt {
    let ceil = x.ceil().to_integer();
    if ceil < BigInt::one() {
        BigInt::one()
    } else {
        ceil
    }
}

/// Enclosure of Euler's number from the factorial series; the tail after m
/// terms is below 2/(m+1)!.
pub fn euler_number(precision: u32) -> Interval {
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    let mut m = 0u32;
    let threshold = BigRational::new(BigInt::one(), BigInt::one() << (precision as usize + 2));
    loop {
        sum += &term;
        m += 1;
        term /= BigRational::from_integer(BigInt::from(m));
        // term is now 1/m!; the tail 1/m! + 1/(m+1)! + ... < 2/m!.
        let tail = &term * BigRational::from_integer(2.into());
        if tail < threshold {
            return Interval {
                lo: floor_to_grid(&sum, precision),
                hi: ceil_to_grid(&(sum + tail), precision),
                precision,
            };
        }
    }
}

/// Enclosure of ln(x) for rational x > 0 via range reduction to [1,2) and
/// the atanh series: ln y = 2 * sum z^(2i+1)/(2i+1) with z = (y-1)/(y+1).
pub fn ln_interval(x: &BigRational, precision: u32) -> Interval {
    assert!(x.is_positive(), "ln requires a positive argument");
    let one = BigRational::one();
    if *x < one {
        let inv = ln_interval(&(BigRational::one() / x), precision);
        return Interval { lo: -inv.hi, hi: -inv.lo, precision };
    }
    // x = y * 2^t with y in [1,2).
    let two = BigRational::from_integer(2.into());
    let mut t = 0u32;
    let mut y = x.clone();
    while y >= two {
        y /= &two;
        t += 1;
    }
    let ln_y = ln_via_atanh(&y, precision);
    if t == 0 {
        return Interval { lo: floor_to_grid(&ln_y.0, precision), hi: ceil_to_grid(&ln_y.1, precision), precision };
    }
    let ln2 = ln_via_atanh(&two, precision);
    let t_big = BigRational::from_integer(BigInt::from(t));
    Interval {
        lo: floor_to_grid(&(&ln_y.0 + &t_big * &ln2.0), precision),
        hi: ceil_to_grid(&(&ln_y.1 + &t_big * &ln2.1), precision),
        precision,
    }
}

/// Exact-rational bracket of ln(y) for 1 <= y <= 2.
fn ln_via_atanh(y: &BigRational, precision: u32) -> (BigRational, BigRational) {
    let one = BigRational::one();
    if y.is_one() {
        return (BigRational::zero(), BigRational::zero());
    }
    let z = (y - &one) / (y + &one); // in (0, 1/3] for y in (1, 2]
    let z2 = &z * &z;
    let threshold = BigRational::new(BigInt::one(), BigInt::one() << (precision as usize + 2));
    let mut sum = BigRational::zero();
    let mut power = z.clone(); // z^(2i+1)
    let mut i = 0u32;
    loop {
        sum += &power / BigRational::from_integer(BigInt::from(2 * i + 1));
        power *= &z2;
        i += 1;
        // Tail below power/(2i+1) * 1/(1 - z^2) <= power * 9/8 / (2i+1).
        let tail = &power * BigRational::new(9.into(), (8 * (2 * i + 1)).into());
        if tail < threshold {
            let lo = &sum * BigRational::from_integer(2.into());
            let hi = (&sum + tail) * BigRational::from_integer(2.into());
            return (lo, hi);
        }
    }
}

/// Binary logarithm enclosure: ln(x)/ln(2).
pub fn log2_interval(x: &BigRational, precision: u32) -> Interval {
    let lnx = ln_interval(x, precision);
    let ln2 = ln_interval(&BigRational::from_integer(2.into()), precision);
    assert!(!lnx.lo.is_negative(), "log2 supported for x >= 1 only");
    lnx.div(&ln2)
}

/// Default-precision helpers.
pub fn default_precision() -> u32 {
    INTERVAL_PRECISION_BITS
}

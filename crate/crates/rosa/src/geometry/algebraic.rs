//! Real numbers built from rationals and `cos(jπ/n)` with refinable enclosures.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Result, RosaError};

/// Largest precision, in bits, tried by [`compare_exact`].
pub const DEFAULT_MAX_BITS: u32 = 4096;
const START_BITS: u32 = 64;
const GUARD_BITS: u32 = 32;

/// Closed dyadic interval `[lo, hi] * 2^-prec`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

fn shr_floor(x: &BigInt, d: u32) -> BigInt {
    x >> d
}

fn shr_ceil(x: &BigInt, d: u32) -> BigInt {
    -((-x) >> d)
}

impl Interval {
    /// Re-expresses the interval at another precision, rounding outward.
    fn at(&self, prec: u32) -> Interval {
        match self.prec.cmp(&prec) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let d = self.prec - prec;
                Interval {
                    lo: shr_floor(&self.lo, d),
                    hi: shr_ceil(&self.hi, d),
                    prec,
                }
            }
            Ordering::Less => {
                let d = prec - self.prec;
                Interval {
                    lo: &self.lo << d,
                    hi: &self.hi << d,
                    prec,
                }
            }
        }
    }

    fn add(&self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
            prec: self.prec,
        }
    }

    fn neg(&self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
            prec: self.prec,
        }
    }

    fn mul(&self, o: &Interval) -> Interval {
        let p = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let mut min = p[0].clone();
        let mut max = p[0].clone();
        for v in &p[1..] {
            if *v < min {
                min = v.clone();
            }
            if *v > max {
                max = v.clone();
            }
        }
        Interval {
            lo: shr_floor(&min, self.prec),
            hi: shr_ceil(&max, self.prec),
            prec: self.prec,
        }
    }

    fn recip(&self) -> Option<Interval> {
        if self.lo.is_positive() {
            let one = BigInt::one() << (2 * self.prec);
            Some(Interval {
                lo: one.div_floor(&self.hi),
                hi: one.div_ceil(&self.lo),
                prec: self.prec,
            })
        } else if self.hi.is_negative() {
            self.neg().recip().map(|r| r.neg())
        } else {
            None
        }
    }

    /// Lower endpoint as a float (rounded to nearest).
    pub fn lo_f64(&self) -> f64 {
        scaled_to_f64(&self.lo, self.prec)
    }

    /// Upper endpoint as a float (rounded to nearest).
    pub fn hi_f64(&self) -> f64 {
        scaled_to_f64(&self.hi, self.prec)
    }

    /// Precision in bits.
    pub fn precision(&self) -> u32 {
        self.prec
    }
}

fn scaled_to_f64(v: &BigInt, prec: u32) -> f64 {
    let bits = v.bits() as i64;
    let shift = (bits - 60).max(0) as u32;
    let head = (v >> shift).to_f64().unwrap_or(0.0);
    head * 2f64.powi(shift as i32 - prec as i32)
}

#[derive(Debug)]
enum Expr {
    Rational(BigInt, BigInt),
    Cos(i64, i64),
    Neg(AlgebraicReal),
    Add(AlgebraicReal, AlgebraicReal),
    Sub(AlgebraicReal, AlgebraicReal),
    Mul(AlgebraicReal, AlgebraicReal),
    Div(AlgebraicReal, AlgebraicReal),
}

#[derive(Debug)]
struct Node {
    expr: Expr,
    cache: Mutex<Option<Interval>>,
}

/// An exact real number over the rationals and the values `cos(jπ/n)`.
///
/// Values are immutable expression trees. Every node remembers its best
/// enclosure so repeated comparisons refine instead of recomputing.
#[derive(Clone, Debug)]
pub struct AlgebraicReal(Arc<Node>);

impl AlgebraicReal {
    fn from_expr(expr: Expr) -> Self {
        AlgebraicReal(Arc::new(Node {
            expr,
            cache: Mutex::new(None),
        }))
    }

    /// The rational number `num / den`.
    ///
    /// # Panics
    /// Panics when `den` is zero.
    pub fn rational(num: i64, den: i64) -> Self {
        Self::big_rational(BigInt::from(num), BigInt::from(den))
    }

    /// The integer `v`.
    pub fn integer(v: i64) -> Self {
        Self::rational(v, 1)
    }

    fn big_rational(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_zero() {
            (num, den)
        } else {
            (num / &g, den / &g)
        };
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        if num.is_zero() {
            den = BigInt::one();
        }
        Self::from_expr(Expr::Rational(num, den))
    }

    /// `cos(jπ/n)`, normalised so that equal angles give identical expressions.
    ///
    /// # Panics
    /// Panics when `n` is not positive.
    pub fn cos_pi(j: i64, n: i64) -> Self {
        assert!(n > 0, "cos_pi needs a positive denominator");
        let two_n = 2 * n;
        let mut j = j.rem_euclid(two_n);
        if j > n {
            j = two_n - j;
        }
        if 2 * j == n {
            return Self::integer(0);
        }
        if 2 * j > n {
            return Self::cos_pi(n - j, n).neg();
        }
        if j == 0 {
            return Self::integer(1);
        }
        let g = j.gcd(&n);
        Self::from_expr(Expr::Cos(j / g, n / g))
    }

    fn as_rational(&self) -> Option<(&BigInt, &BigInt)> {
        match &self.0.expr {
            Expr::Rational(a, b) => Some((a, b)),
            _ => None,
        }
    }

    fn as_neg(&self) -> Option<&AlgebraicReal> {
        match &self.0.expr {
            Expr::Neg(a) => Some(a),
            _ => None,
        }
    }

    /// `-self`.
    pub fn neg(&self) -> Self {
        if let Some((a, b)) = self.as_rational() {
            return Self::big_rational(-a, b.clone());
        }
        if let Some(inner) = self.as_neg() {
            return inner.clone();
        }
        Self::from_expr(Expr::Neg(self.clone()))
    }

    /// `self + o`.
    pub fn add(&self, o: &Self) -> Self {
        if let (Some((a, b)), Some((c, d))) = (self.as_rational(), o.as_rational()) {
            return Self::big_rational(a * d + c * b, b * d);
        }
        Self::from_expr(Expr::Add(self.clone(), o.clone()))
    }

    /// `self - o`.
    pub fn sub(&self, o: &Self) -> Self {
        if let (Some((a, b)), Some((c, d))) = (self.as_rational(), o.as_rational()) {
            return Self::big_rational(a * d - c * b, b * d);
        }
        Self::from_expr(Expr::Sub(self.clone(), o.clone()))
    }

    /// `self * o`.
    pub fn mul(&self, o: &Self) -> Self {
        if let (Some((a, b)), Some((c, d))) = (self.as_rational(), o.as_rational()) {
            return Self::big_rational(a * c, b * d);
        }
        if let (Some(x), Some(y)) = (self.as_neg(), o.as_neg()) {
            return x.mul(y);
        }
        Self::from_expr(Expr::Mul(self.clone(), o.clone()))
    }

    /// `self / o`.
    ///
    /// # Panics
    /// Panics when `o` is the rational zero.
    pub fn div(&self, o: &Self) -> Self {
        if let (Some((a, b)), Some((c, d))) = (self.as_rational(), o.as_rational()) {
            return Self::big_rational(a * d, b * c);
        }
        if let (Some(x), Some(y)) = (self.as_neg(), o.as_neg()) {
            return x.div(y);
        }
        if let Some((c, _)) = o.as_rational() {
            assert!(!c.is_zero(), "division by the rational zero");
        }
        Self::from_expr(Expr::Div(self.clone(), o.clone()))
    }

    /// True when both values are built from the same expression.
    pub fn same_expression(&self, o: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &o.0) {
            return true;
        }
        match (&self.0.expr, &o.0.expr) {
            (Expr::Rational(a, b), Expr::Rational(c, d)) => a == c && b == d,
            (Expr::Cos(a, b), Expr::Cos(c, d)) => a == c && b == d,
            (Expr::Neg(a), Expr::Neg(b)) => a.same_expression(b),
            (Expr::Add(a, b), Expr::Add(c, d))
            | (Expr::Sub(a, b), Expr::Sub(c, d))
            | (Expr::Mul(a, b), Expr::Mul(c, d))
            | (Expr::Div(a, b), Expr::Div(c, d)) => a.same_expression(c) && b.same_expression(d),
            _ => false,
        }
    }

    /// An enclosure at `bits` bits of fixed-point precision, or `None` when
    /// a divisor enclosure still contains zero at this precision.
    pub fn interval(&self, bits: u32) -> Option<Interval> {
        if let Ok(guard) = self.0.cache.lock() {
            if let Some(iv) = guard.as_ref() {
                if iv.prec >= bits {
                    return Some(iv.at(bits));
                }
            }
        }
        let iv = self.compute(bits)?;
        if let Ok(mut guard) = self.0.cache.lock() {
            *guard = Some(iv.clone());
        }
        Some(iv)
    }

    fn compute(&self, p: u32) -> Option<Interval> {
        Some(match &self.0.expr {
            Expr::Rational(a, b) => {
                let s = a << p;
                Interval {
                    lo: s.div_floor(b),
                    hi: s.div_ceil(b),
                    prec: p,
                }
            }
            Expr::Cos(j, n) => cos_interval(*j, *n, p),
            Expr::Neg(a) => a.interval(p)?.neg(),
            Expr::Add(a, b) => a.interval(p)?.add(&b.interval(p)?),
            Expr::Sub(a, b) => a.interval(p)?.add(&b.interval(p)?.neg()),
            Expr::Mul(a, b) => a.interval(p)?.mul(&b.interval(p)?),
            Expr::Div(a, b) => a.interval(p)?.mul(&b.interval(p)?.recip()?),
        })
    }

    /// Midpoint of a 64-bit enclosure.
    pub fn to_f64(&self) -> f64 {
        let mut bits = START_BITS;
        loop {
            if let Some(iv) = self.interval(bits) {
                return 0.5 * (iv.lo_f64() + iv.hi_f64());
            }
            if bits >= DEFAULT_MAX_BITS {
                return f64::NAN;
            }
            bits *= 2;
        }
    }
}

impl fmt::Display for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.expr {
            Expr::Rational(a, b) if b.is_one() => write!(f, "{a}"),
            Expr::Rational(a, b) => write!(f, "{a}/{b}"),
            Expr::Cos(j, n) => write!(f, "cos({j}π/{n})"),
            Expr::Neg(a) => write!(f, "-({a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
        }
    }
}

/// Compares two values, refining until their enclosures separate.
///
/// Values with identical expressions compare `Equal`; any other pair that
/// cannot be separated within [`DEFAULT_MAX_BITS`] bits is an error.
pub fn compare_exact(a: &AlgebraicReal, b: &AlgebraicReal) -> Result<Ordering> {
    compare_exact_with(a, b, DEFAULT_MAX_BITS)
}

/// [`compare_exact`] with an explicit precision cap.
pub fn compare_exact_with(a: &AlgebraicReal, b: &AlgebraicReal, max_bits: u32) -> Result<Ordering> {
    if a.same_expression(b) {
        return Ok(Ordering::Equal);
    }
    let mut bits = START_BITS.min(max_bits.max(1));
    loop {
        if let (Some(x), Some(y)) = (a.interval(bits), b.interval(bits)) {
            if x.hi < y.lo {
                return Ok(Ordering::Less);
            }
            if x.lo > y.hi {
                return Ok(Ordering::Greater);
            }
        }
        if bits >= max_bits {
            return Err(RosaError::PrecisionExhausted { bits: max_bits });
        }
        bits = (bits * 2).min(max_bits);
    }
}

fn atan_inv(m: u32, w: u32) -> BigInt {
    let m = BigInt::from(m);
    let m2 = &m * &m;
    let mut power = (BigInt::one() << w) / &m;
    let mut sum = power.clone();
    let mut k: u64 = 1;
    loop {
        power = &power / &m2;
        if power.is_zero() {
            break;
        }
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    sum
}

/// π to `w` bits with an error of at most two units in the last place.
fn pi_fixed(w: u32) -> BigInt {
    let wide = w + 32;
    let pi = atan_inv(5, wide) * 16 - atan_inv(239, wide) * 4;
    pi >> 32
}

/// Enclosure of `cos(jπ/n)` for `0 < 2j < n`.
fn cos_interval(j: i64, n: i64, p: u32) -> Interval {
    let w = p + GUARD_BITS;
    let one = BigInt::one() << w;
    let x = (pi_fixed(w) * j).div_floor(&BigInt::from(n));
    let x2 = (&x * &x) >> w;
    let mut term = one.clone();
    let mut sum = one;
    let mut m: i64 = 1;
    loop {
        term = ((&term * &x2) >> w) / BigInt::from((2 * m - 1) * (2 * m));
        if term.is_zero() {
            break;
        }
        if m % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
        m += 1;
    }
    let err = BigInt::from(16 * (m + 4));
    Interval {
        lo: &sum - &err,
        hi: &sum + &err,
        prec: w,
    }
    .at(p)
}

//! Interval arithmetic with outward rounding on `f64` endpoints.
//!
//! Directed rounding is implemented without touching the FPU rounding mode:
//! every operation computes the round-to-nearest result together with an
//! exact (or sign-exact) residual via two-sum / FMA tricks, then steps one
//! ulp outward only when the residual shows the result is inexact. This
//! keeps operations pure and thread-safe, and keeps exact results exact
//! (`[1,1] + [2,2]` is `[3,3]`, `sqrt([4,4])` is `[2,2]`).

use once_cell::sync::Lazy;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntervalError {
    #[error("division by an interval containing zero")]
    DivisionByIntervalContainingZero,
    #[error("square root of an interval with a negative lower endpoint")]
    NegativeOperand,
    #[error("arccos operand outside [-1, 1] beyond the one-ulp clamp tolerance")]
    OperandOutsideMinusOneOne,
    #[error("unsupported endpoint precision {0} bits (this build uses 53-bit binary endpoints)")]
    UnsupportedPrecision(u32),
}

/// Named constants with cached verified enclosures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstantName {
    Pi,
    Sqrt2,
    Sqrt3,
    /// r = sqrt(2) - 1, the small disc radius.
    R,
    /// r^2 = 3 - 2 sqrt(2).
    RSquared,
}

/// Residual signs from two-sum / two-product are only trusted in a magnitude
/// band where a nonzero exact residual cannot round to zero.
#[inline]
fn in_safe_range(x: f64) -> bool {
    x == 0.0 || (1e-120..=1e120).contains(&x.abs())
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn add_down(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if !s.is_finite() {
        return if s == f64::INFINITY { f64::MAX } else { s };
    }
    if e < 0.0 {
        s.next_down()
    } else {
        s
    }
}

#[inline]
fn add_up(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if !s.is_finite() {
        return if s == f64::NEG_INFINITY { f64::MIN } else { s };
    }
    if e > 0.0 {
        s.next_up()
    } else {
        s
    }
}

/// Sign-exact residual of `a * b - p` for `p = a * b` rounded to nearest.
#[inline]
fn prod_err(a: f64, b: f64, p: f64) -> f64 {
    a.mul_add(b, -p)
}

#[inline]
fn mul_down(a: f64, b: f64) -> f64 {
    let p = a * b;
    if !p.is_finite() {
        return if p == f64::INFINITY { f64::MAX } else { p };
    }
    let e = prod_err(a, b, p);
    if e < 0.0 {
        p.next_down()
    } else if e > 0.0 {
        p
    } else if (p != 0.0 || a == 0.0 || b == 0.0) && in_safe_range(a) && in_safe_range(b) {
        p
    } else {
        p.next_down()
    }
}

#[inline]
fn mul_up(a: f64, b: f64) -> f64 {
    let p = a * b;
    if !p.is_finite() {
        return if p == f64::NEG_INFINITY { f64::MIN } else { p };
    }
    let e = prod_err(a, b, p);
    if e > 0.0 {
        p.next_up()
    } else if e < 0.0 {
        p
    } else if (p != 0.0 || a == 0.0 || b == 0.0) && in_safe_range(a) && in_safe_range(b) {
        p
    } else {
        p.next_up()
    }
}

#[inline]
fn div_down(a: f64, b: f64) -> f64 {
    debug_assert!(b != 0.0);
    let q = a / b;
    if !q.is_finite() {
        return if q == f64::INFINITY { f64::MAX } else { q };
    }
    // sign(q - a/b) = sign(q*b - a) * sign(b)
    let e = prod_err(q, b, a) * b.signum();
    if e > 0.0 {
        q.next_down()
    } else if e < 0.0 {
        q
    } else if in_safe_range(a) && in_safe_range(b) && in_safe_range(q) {
        q
    } else {
        q.next_down()
    }
}

#[inline]
fn div_up(a: f64, b: f64) -> f64 {
    debug_assert!(b != 0.0);
    let q = a / b;
    if !q.is_finite() {
        return if q == f64::NEG_INFINITY { f64::MIN } else { q };
    }
    let e = prod_err(q, b, a) * b.signum();
    if e < 0.0 {
        q.next_up()
    } else if e > 0.0 {
        q
    } else if in_safe_range(a) && in_safe_range(b) && in_safe_range(q) {
        q
    } else {
        q.next_up()
    }
}

#[inline]
fn sqrt_down(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    let s = x.sqrt();
    let e = prod_err(s, s, x);
    if e > 0.0 {
        s.next_down()
    } else if e < 0.0 {
        s
    } else if in_safe_range(x) {
        s
    } else {
        s.next_down().max(0.0)
    }
}

#[inline]
fn sqrt_up(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    let s = x.sqrt();
    let e = prod_err(s, s, x);
    if e < 0.0 {
        s.next_up()
    } else if e > 0.0 {
        s
    } else if in_safe_range(x) {
        s
    } else {
        s.next_up()
    }
}

/// A closed interval `[lo, hi]` of exactly representable binary endpoints.
#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    /// `lo` and `hi` must be finite with `lo <= hi`.
    #[inline]
    pub fn new(lo: f64, hi: f64) -> Interval {
        assert!(lo <= hi, "invalid interval [{lo}, {hi}]");
        assert!(lo.is_finite() && hi.is_finite(), "non-finite endpoint");
        Interval { lo, hi }
    }

    #[inline]
    pub fn point(x: f64) -> Interval {
        Interval::new(x, x)
    }

    #[inline]
    pub fn from_int(n: i64) -> Interval {
        // |n| <= 2^53 is exact in f64; larger values get an outward pad.
        let x = n as f64;
        if x as i64 == n && n.abs() <= (1i64 << 53) {
            Interval::point(x)
        } else {
            Interval::new(x.next_down(), x.next_up())
        }
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn width(self) -> f64 {
        add_up(self.hi, -self.lo)
    }

    /// Midpoint for box splitting; not rounded outward.
    #[inline]
    pub fn midpoint(self) -> f64 {
        let m = 0.5 * (self.lo + self.hi);
        if m.is_finite() {
            m.clamp(self.lo, self.hi)
        } else {
            self.lo + 0.5 * (self.hi - self.lo)
        }
    }

    #[inline]
    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    #[inline]
    pub fn contains_interval(self, other: Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    #[inline]
    pub fn contains_zero(self) -> bool {
        self.contains(0.0)
    }

    #[inline]
    pub fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: add_down(self.lo, rhs.lo),
            hi: add_up(self.hi, rhs.hi),
        }
    }

    #[inline]
    pub fn sub(self, rhs: Interval) -> Interval {
        Interval {
            lo: add_down(self.lo, -rhs.hi),
            hi: add_up(self.hi, -rhs.lo),
        }
    }

    #[inline]
    pub fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    pub fn mul(self, rhs: Interval) -> Interval {
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        // Sign-case split keeps the common paths to two rounded products.
        let (lo, hi) = if a >= 0.0 {
            if c >= 0.0 {
                (mul_down(a, c), mul_up(b, d))
            } else if d <= 0.0 {
                (mul_down(b, c), mul_up(a, d))
            } else {
                (mul_down(b, c), mul_up(b, d))
            }
        } else if b <= 0.0 {
            if c >= 0.0 {
                (mul_down(a, d), mul_up(b, c))
            } else if d <= 0.0 {
                (mul_down(b, d), mul_up(a, c))
            } else {
                (mul_down(a, d), mul_up(a, c))
            }
        } else if c >= 0.0 {
            (mul_down(a, d), mul_up(b, d))
        } else if d <= 0.0 {
            (mul_down(b, c), mul_up(a, c))
        } else {
            (
                mul_down(a, d).min(mul_down(b, c)),
                mul_up(a, c).max(mul_up(b, d)),
            )
        };
        Interval { lo, hi }
    }

    /// Tight enclosure of `{x^2 : x in self}`; never dips below zero.
    pub fn square(self) -> Interval {
        let (a, b) = (self.lo, self.hi);
        if a >= 0.0 {
            Interval {
                lo: mul_down(a, a),
                hi: mul_up(b, b),
            }
        } else if b <= 0.0 {
            Interval {
                lo: mul_down(b, b),
                hi: mul_up(a, a),
            }
        } else {
            let m = (-a).max(b);
            Interval {
                lo: 0.0,
                hi: mul_up(m, m),
            }
        }
    }

    pub fn div(self, rhs: Interval) -> Result<Interval, IntervalError> {
        if rhs.contains_zero() {
            return Err(IntervalError::DivisionByIntervalContainingZero);
        }
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        let (lo, hi) = if c > 0.0 {
            if a >= 0.0 {
                (div_down(a, d), div_up(b, c))
            } else if b <= 0.0 {
                (div_down(a, c), div_up(b, d))
            } else {
                (div_down(a, c), div_up(b, c))
            }
        } else {
            // d < 0
            if a >= 0.0 {
                (div_down(b, d), div_up(a, c))
            } else if b <= 0.0 {
                (div_down(b, c), div_up(a, d))
            } else {
                (div_down(b, d), div_up(a, d))
            }
        };
        Ok(Interval { lo, hi })
    }

    pub fn sqrt(self) -> Result<Interval, IntervalError> {
        if self.lo < 0.0 {
            return Err(IntervalError::NegativeOperand);
        }
        Ok(Interval {
            lo: sqrt_down(self.lo),
            hi: sqrt_up(self.hi),
        })
    }

    /// Square root of the nonnegative part; enclosure of `{sqrt(x) : x in self, x >= 0}`.
    /// Used where a box may contain infeasible (negative) corners.
    pub fn sqrt_clamped(self) -> Interval {
        let lo = self.lo.max(0.0);
        let hi = self.hi.max(0.0);
        Interval {
            lo: sqrt_down(lo),
            hi: sqrt_up(hi),
        }
    }

    #[inline]
    pub fn abs(self) -> Interval {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            self.neg()
        } else {
            Interval {
                lo: 0.0,
                hi: self.hi.max(-self.lo),
            }
        }
    }

    #[inline]
    pub fn hull(self, rhs: Interval) -> Interval {
        Interval {
            lo: self.lo.min(rhs.lo),
            hi: self.hi.max(rhs.hi),
        }
    }

    #[inline]
    pub fn intersect(self, rhs: Interval) -> Option<Interval> {
        let lo = self.lo.max(rhs.lo);
        let hi = self.hi.min(rhs.hi);
        if lo <= hi {
            Some(Interval { lo, hi })
        } else {
            None
        }
    }

    #[inline]
    pub fn min_i(self, rhs: Interval) -> Interval {
        Interval {
            lo: self.lo.min(rhs.lo),
            hi: self.hi.min(rhs.hi),
        }
    }

    #[inline]
    pub fn max_i(self, rhs: Interval) -> Interval {
        Interval {
            lo: self.lo.max(rhs.lo),
            hi: self.hi.max(rhs.hi),
        }
    }

    /// max(self, 0) applied pointwise: encloses `{max(x, 0)}`.
    #[inline]
    pub fn clamp_min_zero(self) -> Interval {
        Interval {
            lo: self.lo.max(0.0),
            hi: self.hi.max(0.0),
        }
    }

    #[inline]
    pub fn scale(self, k: f64) -> Interval {
        self.mul(Interval::point(k))
    }

    /// `self >= rhs` holds for every pair of points.
    #[inline]
    pub fn certainly_ge(self, rhs: Interval) -> bool {
        self.lo >= rhs.hi
    }

    #[inline]
    pub fn certainly_gt(self, rhs: Interval) -> bool {
        self.lo > rhs.hi
    }

    #[inline]
    pub fn certainly_lt(self, rhs: Interval) -> bool {
        self.hi < rhs.lo
    }
}

/// arccos with outward rounding.
///
/// The operand may exceed `[-1, 1]` by at most one ulp on either side (the
/// law of cosines at tight triangles lands exactly on the boundary); it is
/// clamped. Larger excursions are an error.
pub fn acos_i(a: Interval) -> Result<Interval, IntervalError> {
    if a.lo > 1.0 || a.hi < -1.0 || a.hi > 1.0f64.next_up() || a.lo < (-1.0f64).next_down() {
        return Err(IntervalError::OperandOutsideMinusOneOne);
    }
    let x = Interval::new(a.lo.max(-1.0), a.hi.min(1.0));
    Ok(acos_core(x))
}

/// arccos of the part of `a` that lies in `[-1, 1]`.
///
/// Sound when the operand is a law-of-cosines value over a box whose
/// infeasible corners push the cosine out of range: clipping restricts to
/// the feasible configurations. Returns `None` if the operand is entirely
/// out of range.
pub fn acos_clipped(a: Interval) -> Option<Interval> {
    let x = a.intersect(Interval::new(-1.0, 1.0))?;
    Some(acos_core(x))
}

fn acos_core(x: Interval) -> Interval {
    debug_assert!(x.lo >= -1.0 && x.hi <= 1.0);
    // arccos is decreasing: lower endpoint from x.hi, upper from x.lo.
    let lo = acos_point(x.hi).lo;
    let hi = acos_point(x.lo).hi;
    Interval::new(lo.max(0.0), hi)
}

/// Enclosure of arccos at a single point in [-1, 1].
fn acos_point(x: f64) -> Interval {
    if x == 1.0 {
        return Interval::ZERO;
    }
    if x == -1.0 {
        return constant(ConstantName::Pi);
    }
    if x >= 0.0 {
        acos_kernel(Interval::point(x))
    } else {
        constant(ConstantName::Pi).sub(acos_kernel(Interval::point(-x)))
    }
}

/// arccos on [0, 1] via two half-angle reductions and the arcsin series:
/// acos(x) = 4 asin(t),  t = sqrt((1-u)/2),  u = sqrt((1+x)/2).
/// After the reduction t^2 <= (1 - sqrt(1/2))/2 < 0.147, so the series
/// converges geometrically with an explicit tail bound.
fn acos_kernel(x: Interval) -> Interval {
    let half = Interval::point(0.5);
    let one = Interval::ONE;
    let u = one.add(x).mul(half).sqrt_clamped();
    let t2 = one.sub(u).mul(half).clamp_min_zero();
    let t = t2.sqrt_clamped();
    asin_series(t, t2).scale(4.0)
}

/// arcsin(t) for t^2 <= 0.26 via the Taylor series with a rigorous tail.
fn asin_series(t: Interval, t2: Interval) -> Interval {
    debug_assert!(t2.hi < 0.26);
    let coeffs = asin_coefficients();
    let n = coeffs.len();
    // Horner over t^2 with interval coefficients.
    let mut s = coeffs[n - 1];
    for k in (0..n - 1).rev() {
        s = s.mul(t2).add(coeffs[k]);
    }
    // Tail: coefficients decrease, term ratio <= t2, so
    // sum_{k>=n} c_k t2^k <= c_n t2^n / (1 - t2).
    let cn = coeffs[n - 1]; // c_{n-1} >= c_n
    let t2n = pow_interval(t2, n as u32);
    let denom = Interval::ONE.sub(t2);
    let tail_hi = cn.mul(t2n).div(denom).expect("1 - t2 > 0").hi;
    let tail = Interval::new(0.0, tail_hi.max(0.0));
    t.mul(s.add(tail))
}

fn pow_interval(x: Interval, n: u32) -> Interval {
    let mut acc = Interval::ONE;
    for _ in 0..n {
        acc = acc.mul(x);
    }
    acc
}

/// Enclosures of the arcsin Taylor coefficients c_k = C(2k,k) / (4^k (2k+1)),
/// built by the exact integer recurrence c_k = c_{k-1} (2k-1)^2 / (2k (2k+1)).
fn asin_coefficients() -> &'static [Interval] {
    static COEFFS: Lazy<Vec<Interval>> = Lazy::new(|| {
        let mut v = Vec::with_capacity(24);
        let mut c = Interval::ONE;
        v.push(c);
        for k in 1u32..24 {
            let k = k as i64;
            let num = Interval::from_int((2 * k - 1) * (2 * k - 1));
            let den = Interval::from_int(2 * k * (2 * k + 1));
            c = c.mul(num).div(den).expect("nonzero denominator");
            v.push(c);
        }
        v
    });
    &COEFFS
}

struct Constants {
    pi: Interval,
    sqrt2: Interval,
    sqrt3: Interval,
    r: Interval,
    r_squared: Interval,
}

static CONSTANTS: Lazy<Constants> = Lazy::new(|| {
    // pi: the f64 constant is the nearest double, known to lie below pi,
    // so [PI, next_up(PI)] is the optimal 1-ulp enclosure (checked against
    // the independent series enclosure in tests).
    let pi = Interval::new(std::f64::consts::PI, std::f64::consts::PI.next_up());
    let sqrt2 = Interval::point(2.0).sqrt().expect("sqrt(2)");
    let sqrt3 = Interval::point(3.0).sqrt().expect("sqrt(3)");
    // r = sqrt2 - 1 is an exact shift: sqrt2's endpoints lie in [1, 2], so
    // subtracting 1 is exact.
    let r = Interval::new(sqrt2.lo - 1.0, sqrt2.hi - 1.0);
    // r^2 refined by intersecting two outward evaluations.
    let alg = Interval::point(3.0).sub(sqrt2.scale(2.0));
    let r_squared = r
        .square()
        .intersect(alg)
        .expect("r*r and 3-2sqrt2 must overlap");
    Constants {
        pi,
        sqrt2,
        sqrt3,
        r,
        r_squared,
    }
});

/// Cached enclosure of a named constant at the default 53-bit precision.
pub fn constant(name: ConstantName) -> Interval {
    match name {
        ConstantName::Pi => CONSTANTS.pi,
        ConstantName::Sqrt2 => CONSTANTS.sqrt2,
        ConstantName::Sqrt3 => CONSTANTS.sqrt3,
        ConstantName::R => CONSTANTS.r,
        ConstantName::RSquared => CONSTANTS.r_squared,
    }
}

/// Enclosure of a named constant with `precision_bits`-bit endpoints.
///
/// Endpoints are IEEE-754 binary64, so only 53-bit precision is available;
/// other requests are rejected rather than silently widened.
pub fn const_enclosure(name: ConstantName, precision_bits: u32) -> Result<Interval, IntervalError> {
    if precision_bits != 53 {
        return Err(IntervalError::UnsupportedPrecision(precision_bits));
    }
    Ok(constant(name))
}

/// pi/2 enclosure (exact halving of the cached pi).
pub fn pi_half() -> Interval {
    let pi = constant(ConstantName::Pi);
    Interval::new(pi.lo * 0.5, pi.hi * 0.5)
}

/// 2*pi enclosure (exact doubling of the cached pi).
pub fn two_pi() -> Interval {
    let pi = constant(ConstantName::Pi);
    Interval::new(pi.lo * 2.0, pi.hi * 2.0)
}

/// Independent pi enclosure from the arcsin series: pi = 6 asin(1/2).
/// Exposed for cross-checks.
pub fn pi_from_series() -> Interval {
    let half = Interval::point(0.5);
    asin_series(half, Interval::point(0.25)).scale(6.0)
}

/// sin(theta) for theta in [0, pi] given an enclosure of cos(theta).
pub fn sin_from_cos(cos_theta: Interval) -> Interval {
    Interval::ONE
        .sub(cos_theta.square())
        .clamp_min_zero()
        .sqrt_clamped()
}

//! Real intervals with exact dyadic endpoints and outward rounding.
//!
//! Every operation returns an interval containing the exact image of its
//! argument intervals. Comparisons against zero are three-valued: an interval
//! either proves a sign, refutes it, or is inconclusive.

use crate::bigfloat::{BigFloat, Dir};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use std::cmp::Ordering;
use std::fmt;

/// Result of a rigorous comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truth {
    True,
    False,
    Unknown,
}

/// Closed real interval `[lo, hi]` at a working precision in bits.
#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    lo: BigFloat,
    hi: BigFloat,
    prec: u32,
}

impl Interval {
    pub fn new(lo: BigFloat, hi: BigFloat, prec: u32) -> Self {
        debug_assert!(lo.cmp_value(&hi) != Ordering::Greater, "interval endpoints out of order");
        Interval { lo, hi, prec }
    }

    pub fn point(v: BigFloat, prec: u32) -> Self {
        Interval { lo: v.clone(), hi: v, prec }
    }

    pub fn zero(prec: u32) -> Self {
        Interval::point(BigFloat::zero(), prec)
    }

    pub fn one(prec: u32) -> Self {
        Interval::point(BigFloat::one(), prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Interval::point(BigFloat::from_i64(v), prec)
    }

    pub fn from_f64(v: f64, prec: u32) -> Self {
        Interval::point(BigFloat::from_f64(v), prec)
    }

    /// Tight enclosure of the rational `n/d`.
    pub fn from_ratio_parts(n: &BigInt, d: &BigInt, prec: u32) -> Self {
        let (n, d) = if d.is_negative() { (-n.clone(), -d.clone()) } else { (n.clone(), d.clone()) };
        Interval {
            lo: BigFloat::from_ratio(&n, &d, prec, Dir::Down),
            hi: BigFloat::from_ratio(&n, &d, prec, Dir::Up),
            prec,
        }
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        Self::from_ratio_parts(q.numer(), q.denom(), prec)
    }

    pub fn lo(&self) -> &BigFloat {
        &self.lo
    }

    pub fn hi(&self) -> &BigFloat {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Interval {
            lo: self.lo.round(prec, Dir::Down),
            hi: self.hi.round(prec, Dir::Up),
            prec,
        }
    }

    fn p2(&self, other: &Self) -> u32 {
        self.prec.max(other.prec)
    }

    pub fn neg(&self) -> Self {
        Interval { lo: self.hi.neg(), hi: self.lo.neg(), prec: self.prec }
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.p2(other);
        Interval {
            lo: self.lo.add(&other.lo, p, Dir::Down),
            hi: self.hi.add(&other.hi, p, Dir::Up),
            prec: p,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.p2(other);
        // Sign-based case analysis keeps this to at most four exact products.
        let (a, b, c, d) = (&self.lo, &self.hi, &other.lo, &other.hi);
        let (lo, hi) = if !a.is_negative() {
            if !c.is_negative() {
                (a.mul_exact(c), b.mul_exact(d))
            } else if !d.is_positive() {
                (b.mul_exact(c), a.mul_exact(d))
            } else {
                (b.mul_exact(c), b.mul_exact(d))
            }
        } else if !b.is_positive() {
            if !c.is_negative() {
                (a.mul_exact(d), b.mul_exact(c))
            } else if !d.is_positive() {
                (b.mul_exact(d), a.mul_exact(c))
            } else {
                (a.mul_exact(d), a.mul_exact(c))
            }
        } else {
            if !c.is_negative() {
                (a.mul_exact(d), b.mul_exact(d))
            } else if !d.is_positive() {
                (b.mul_exact(c), a.mul_exact(c))
            } else {
                let lo = BigFloat::min_value(&a.mul_exact(d), &b.mul_exact(c));
                let hi = BigFloat::max_value(&a.mul_exact(c), &b.mul_exact(d));
                (lo, hi)
            }
        };
        Interval { lo: lo.round(p, Dir::Down), hi: hi.round(p, Dir::Up), prec: p }
    }

    /// Tight square (never dips below zero when the interval straddles it).
    pub fn sqr(&self) -> Self {
        let p = self.prec;
        if self.contains_zero() {
            let m = BigFloat::max_value(&self.lo.abs(), &self.hi.abs());
            Interval {
                lo: BigFloat::zero(),
                hi: m.mul_exact(&m).round(p, Dir::Up),
                prec: p,
            }
        } else {
            self.mul(self)
        }
    }

    /// Division. Panics if `other` contains zero.
    pub fn div(&self, other: &Self) -> Self {
        assert!(
            !other.contains_zero(),
            "interval division by an interval containing zero: {self} / {other}"
        );
        let p = self.p2(other);
        let (a, b, c, d) = (&self.lo, &self.hi, &other.lo, &other.hi);
        let (lo, hi) = if c.is_positive() {
            if !a.is_negative() {
                (a.div(d, p, Dir::Down), b.div(c, p, Dir::Up))
            } else if !b.is_positive() {
                (a.div(c, p, Dir::Down), b.div(d, p, Dir::Up))
            } else {
                (a.div(c, p, Dir::Down), b.div(c, p, Dir::Up))
            }
        } else {
            if !a.is_negative() {
                (b.div(d, p, Dir::Down), a.div(c, p, Dir::Up))
            } else if !b.is_positive() {
                (b.div(c, p, Dir::Down), a.div(d, p, Dir::Up))
            } else {
                (b.div(d, p, Dir::Down), a.div(d, p, Dir::Up))
            }
        };
        Interval { lo, hi, prec: p }
    }

    pub fn recip(&self) -> Self {
        Interval::one(self.prec).div(self)
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        self.mul(&Interval::from_i64(k, self.prec))
    }

    pub fn div_i64(&self, k: i64) -> Self {
        self.div(&Interval::from_i64(k, self.prec))
    }

    /// Exact multiplication by `2^k`.
    pub fn shl(&self, k: i64) -> Self {
        Interval { lo: self.lo.shl(k), hi: self.hi.shl(k), prec: self.prec }
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            Interval {
                lo: BigFloat::zero(),
                hi: BigFloat::max_value(&self.lo.abs(), &self.hi.abs()),
                prec: self.prec,
            }
        }
    }

    /// Square root; panics if the interval contains negative values.
    pub fn sqrt(&self) -> Self {
        let p = self.prec;
        Interval {
            lo: self.lo.sqrt(p, Dir::Down),
            hi: self.hi.sqrt(p, Dir::Up),
            prec: p,
        }
    }

    /// `x^n` for n >= 0, tight on sign-definite intervals and even powers.
    pub fn powi(&self, n: u32) -> Self {
        match n {
            0 => Interval::one(self.prec),
            1 => self.clone(),
            _ => {
                if n % 2 == 0 {
                    self.sqr().powi_monotone(n / 2)
                } else {
                    self.mul(&self.sqr().powi_monotone(n / 2))
                }
            }
        }
    }

    // Power of a nonnegative interval (monotone case).
    fn powi_monotone(&self, n: u32) -> Self {
        let mut acc = Interval::one(self.prec);
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.sqr();
            k >>= 1;
        }
        acc
    }

    pub fn hull(&self, other: &Self) -> Self {
        Interval {
            lo: BigFloat::min_value(&self.lo, &other.lo),
            hi: BigFloat::max_value(&self.hi, &other.hi),
            prec: self.p2(other),
        }
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let lo = BigFloat::max_value(&self.lo, &other.lo);
        let hi = BigFloat::min_value(&self.hi, &other.hi);
        if lo.cmp_value(&hi) == Ordering::Greater {
            None
        } else {
            Some(Interval { lo, hi, prec: self.p2(other) })
        }
    }

    pub fn contains(&self, v: &BigFloat) -> bool {
        self.lo.cmp_value(v) != Ordering::Greater && self.hi.cmp_value(v) != Ordering::Less
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        // lo <= q <= hi, checked exactly.
        let (ln, ld) = self.lo.to_ratio();
        let (hn, hd) = self.hi.to_ratio();
        let lo = BigRational::new(ln, ld);
        let hi = BigRational::new(hn, hd);
        lo <= *q && *q <= hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains_interval(&self, other: &Self) -> bool {
        self.lo.cmp_value(&other.lo) != Ordering::Greater
            && self.hi.cmp_value(&other.hi) != Ordering::Less
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Three-valued test of `self < 0`.
    pub fn lt_zero(&self) -> Truth {
        if self.hi.is_negative() {
            Truth::True
        } else if !self.lo.is_negative() {
            Truth::False
        } else {
            Truth::Unknown
        }
    }

    /// Three-valued test of `self > 0`.
    pub fn gt_zero(&self) -> Truth {
        if self.lo.is_positive() {
            Truth::True
        } else if !self.hi.is_positive() {
            Truth::False
        } else {
            Truth::Unknown
        }
    }

    /// Three-valued `self < other`.
    pub fn lt(&self, other: &Self) -> Truth {
        self.sub(other).lt_zero()
    }

    pub fn width(&self) -> BigFloat {
        self.hi.sub_exact(&self.lo)
    }

    pub fn midpoint(&self) -> BigFloat {
        self.lo.add_exact(&self.hi).shl(-1).round(self.prec, Dir::Down)
    }

    /// Largest absolute value over the interval.
    pub fn mag(&self) -> BigFloat {
        BigFloat::max_value(&self.lo.abs(), &self.hi.abs())
    }

    /// Smallest absolute value over the interval (zero when it straddles).
    pub fn mig(&self) -> BigFloat {
        if self.contains_zero() {
            BigFloat::zero()
        } else if self.lo.is_positive() {
            self.lo.clone()
        } else {
            self.hi.abs()
        }
    }

    /// Symmetric interval `[-r, r]` from a nonnegative bound.
    pub fn symmetric(r: &BigFloat, prec: u32) -> Self {
        debug_assert!(!r.is_negative());
        Interval { lo: r.neg(), hi: r.clone(), prec }
    }

    /// Widen both endpoints outward by `r >= 0`.
    pub fn widen(&self, r: &BigFloat) -> Self {
        debug_assert!(!r.is_negative());
        Interval {
            lo: self.lo.sub(r, self.prec, Dir::Down),
            hi: self.hi.add(r, self.prec, Dir::Up),
            prec: self.prec,
        }
    }

    pub fn to_f64_mid(&self) -> f64 {
        self.midpoint().to_f64()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.*e}, {:.*e}]", 17, self.lo.to_f64(), 17, self.hi.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn third_is_enclosed() {
        let x = Interval::from_ratio_parts(&BigInt::from(1), &BigInt::from(3), 64);
        assert!(x.contains_rational(&rat(1, 3)));
        assert!(!x.contains_rational(&rat(1, 2)));
        assert!(x.width().to_f64() < 1e-18);
    }

    #[test]
    fn three_valued_comparisons() {
        let p = 64;
        let neg = Interval::from_ratio_parts(&BigInt::from(-3), &BigInt::from(2), p);
        let pos = Interval::from_i64(2, p);
        let straddle = Interval::new(BigFloat::from_i64(-1), BigFloat::from_i64(1), p);
        assert_eq!(neg.lt_zero(), Truth::True);
        assert_eq!(pos.lt_zero(), Truth::False);
        assert_eq!(straddle.lt_zero(), Truth::Unknown);
        assert_eq!(pos.gt_zero(), Truth::True);
    }

    proptest! {
        // Containment: rational sample points stay inside through +,-,*,/.
        #[test]
        fn ops_enclose_rationals(an in -200i64..200, ad in 1i64..40,
                                 bn in -200i64..200, bd in 1i64..40) {
            let p = 64u32;
            let a = rat(an, ad);
            let b = rat(bn, bd);
            let ia = Interval::from_rational(&a, p);
            let ib = Interval::from_rational(&b, p);
            prop_assert!(ia.add(&ib).contains_rational(&(a.clone() + b.clone())));
            prop_assert!(ia.sub(&ib).contains_rational(&(a.clone() - b.clone())));
            prop_assert!(ia.mul(&ib).contains_rational(&(a.clone() * b.clone())));
            if bn != 0 {
                prop_assert!(ia.div(&ib).contains_rational(&(a.clone() / b.clone())));
            }
            prop_assert!(ia.sqr().contains_rational(&(a.clone() * a.clone())));
        }

        // Inclusion monotonicity for multiplication on nested boxes.
        #[test]
        fn mul_inclusion_monotone(a in -50i64..50, b in -50i64..50,
                                  c in -50i64..50, d in -50i64..50) {
            let p = 64u32;
            let mk = |x: i64, y: i64| {
                let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
                Interval::new(BigFloat::from_i64(lo), BigFloat::from_i64(hi), p)
            };
            let outer_a = mk(a, b);
            let inner_a = Interval::point(outer_a.midpoint(), p);
            let outer_b = mk(c, d);
            let inner_b = Interval::point(outer_b.midpoint(), p);
            prop_assert!(outer_a.mul(&outer_b).contains_interval(&inner_a.mul(&inner_b)));
        }
    }
}

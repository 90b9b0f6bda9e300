//! Arbitrary-precision dyadic floating point with directed rounding.
//!
//! A [`BigFloat`] is an exact dyadic rational `mant * 2^exp` with an
//! arbitrary-precision integer mantissa. Arithmetic is exact where possible
//! (add, sub, mul) and explicitly rounded toward -inf or +inf where not
//! (div, sqrt, precision clamping). Interval arithmetic is built on top of
//! this type; every rounding step here is what makes the enclosures sound.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

/// Rounding direction for inexact operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dir {
    /// Toward negative infinity.
    Down,
    /// Toward positive infinity.
    Up,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Down => Dir::Up,
            Dir::Up => Dir::Down,
        }
    }
}

/// Exact dyadic rational `mant * 2^exp`.
///
/// Zero is canonically `mant = 0, exp = 0`. Mantissas are normalized to have
/// no trailing zero bits, so equality of values is equality of fields.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
}

impl BigFloat {
    pub fn zero() -> Self {
        BigFloat { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        BigFloat { mant: BigInt::one(), exp: 0 }
    }

    pub fn from_i64(v: i64) -> Self {
        BigFloat { mant: BigInt::from(v), exp: 0 }.normalized()
    }

    pub fn from_bigint(v: BigInt) -> Self {
        BigFloat { mant: v, exp: 0 }.normalized()
    }

    /// `mant * 2^exp`, normalizing trailing zero bits.
    pub fn from_parts(mant: BigInt, exp: i64) -> Self {
        BigFloat { mant, exp }.normalized()
    }

    /// Exact conversion from an `f64`. Panics on NaN or infinity.
    pub fn from_f64(v: f64) -> Self {
        assert!(v.is_finite(), "BigFloat::from_f64 requires a finite value");
        if v == 0.0 {
            return Self::zero();
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        BigFloat { mant: BigInt::from(sign * m as i64), exp: e }.normalized()
    }

    fn normalized(mut self) -> Self {
        if self.mant.is_zero() {
            self.exp = 0;
            return self;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    /// Number of significant bits of the mantissa.
    pub fn mant_bits(&self) -> u64 {
        self.mant.magnitude().bits()
    }

    /// Exponent of the value viewed as `0.5 <= m < 1` times `2^k`, i.e.
    /// `bits(mant) + exp`. Meaningless for zero.
    pub fn exponent(&self) -> i64 {
        self.mant_bits() as i64 + self.exp
    }

    pub fn neg(&self) -> Self {
        BigFloat { mant: -self.mant.clone(), exp: self.exp }
    }

    pub fn abs(&self) -> Self {
        BigFloat { mant: self.mant.abs(), exp: self.exp }
    }

    /// Exact multiplication by `2^k`.
    pub fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        BigFloat { mant: self.mant.clone(), exp: self.exp + k }
    }

    /// Round to at most `prec` mantissa bits in direction `dir`.
    pub fn round(&self, prec: u32, dir: Dir) -> Self {
        let bits = self.mant_bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let k = (bits - prec as u64) as i64;
        let m = match dir {
            // BigInt >> is a floor (sign-extending) shift.
            Dir::Down => self.mant.clone() >> k,
            Dir::Up => -((-self.mant.clone()) >> k),
        };
        BigFloat { mant: m, exp: self.exp + k }.normalized()
    }

    /// Exact addition.
    pub fn add_exact(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = self.mant.clone() << (self.exp - e) as u64;
        let b = other.mant.clone() << (other.exp - e) as u64;
        BigFloat { mant: a + b, exp: e }.normalized()
    }

    pub fn sub_exact(&self, other: &Self) -> Self {
        self.add_exact(&other.neg())
    }

    /// Exact multiplication.
    pub fn mul_exact(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        BigFloat {
            mant: &self.mant * &other.mant,
            exp: self.exp + other.exp,
        }
    }

    pub fn add(&self, other: &Self, prec: u32, dir: Dir) -> Self {
        self.add_exact(other).round(prec, dir)
    }

    pub fn sub(&self, other: &Self, prec: u32, dir: Dir) -> Self {
        self.sub_exact(other).round(prec, dir)
    }

    pub fn mul(&self, other: &Self, prec: u32, dir: Dir) -> Self {
        self.mul_exact(other).round(prec, dir)
    }

    /// Directed division to `prec` bits. Panics if `other` is zero.
    pub fn div(&self, other: &Self, prec: u32, dir: Dir) -> Self {
        assert!(!other.is_zero(), "BigFloat division by zero");
        if self.is_zero() {
            return Self::zero();
        }
        // Scale the numerator so the integer quotient has ~prec+2 bits.
        let want = prec as i64 + 2;
        let shift = (want + other.mant_bits() as i64 - self.mant_bits() as i64).max(0) as u64;
        let num = self.mant.clone() << shift;
        let q = match dir {
            Dir::Down => num.div_floor(&other.mant),
            Dir::Up => -((-num).div_floor(&other.mant)),
        };
        BigFloat { mant: q, exp: self.exp - other.exp - shift as i64 }
            .normalized()
            .round(prec, dir)
    }

    /// Directed square root to `prec` bits. Panics on negative input.
    pub fn sqrt(&self, prec: u32, dir: Dir) -> Self {
        assert!(!self.is_negative(), "BigFloat sqrt of negative value");
        if self.is_zero() {
            return Self::zero();
        }
        // Write self = M * 2^(2f) with M having at least 2*prec+4 bits.
        let bits = self.mant_bits() as i64;
        let mut s = (2 * prec as i64 + 4 - bits).max(0);
        if (self.exp - s) % 2 != 0 {
            s += 1;
        }
        let f = (self.exp - s) / 2;
        let m: BigUint = (self.mant.clone() << s as u64).magnitude().clone();
        let r = m.sqrt(); // floor sqrt
        let m_is_square = &r * &r == m;
        let root = match dir {
            Dir::Down => r,
            Dir::Up => {
                if m_is_square {
                    r
                } else {
                    r + BigUint::one()
                }
            }
        };
        BigFloat { mant: BigInt::from_biguint(Sign::Plus, root), exp: f }
            .normalized()
            .round(prec, dir)
    }

    /// Exact integer power of the magnitude.
    pub fn powi_exact(&self, n: u32) -> Self {
        let mut acc = BigFloat::one();
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_exact(&base);
            }
            base = base.mul_exact(&base);
            k >>= 1;
        }
        acc
    }

    /// Exact comparison of values.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        match (self.mant.sign(), other.mant.sign()) {
            (Sign::Minus, Sign::Plus) | (Sign::Minus, Sign::NoSign) | (Sign::NoSign, Sign::Plus) => {
                return Ordering::Less
            }
            (Sign::Plus, Sign::Minus) | (Sign::Plus, Sign::NoSign) | (Sign::NoSign, Sign::Minus) => {
                return Ordering::Greater
            }
            (Sign::NoSign, Sign::NoSign) => return Ordering::Equal,
            _ => {}
        }
        // Same nonzero sign; quick exponent comparison before exact subtraction.
        let (ea, eb) = (self.exponent(), other.exponent());
        if ea != eb {
            let ord = ea.cmp(&eb);
            return if self.is_positive() { ord } else { ord.reverse() };
        }
        self.sub_exact(other).mant.sign().partial_cmp(&Sign::NoSign).map_or(Ordering::Equal, |o| o)
    }

    pub fn min_value(a: &Self, b: &Self) -> Self {
        if a.cmp_value(b) == Ordering::Greater {
            b.clone()
        } else {
            a.clone()
        }
    }

    pub fn max_value(a: &Self, b: &Self) -> Self {
        if a.cmp_value(b) == Ordering::Less {
            b.clone()
        } else {
            a.clone()
        }
    }

    /// Nearest-ish `f64` (correct to a few ulps; for display and heuristics only).
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant_bits();
        let (m, e) = if bits > 63 {
            let k = bits - 63;
            (self.mant.clone() >> k, self.exp + k as i64)
        } else {
            (self.mant.clone(), self.exp)
        };
        let m_f = m.to_string().parse::<f64>().unwrap_or(0.0);
        if e > 1023 {
            if m_f > 0.0 {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            }
        } else if e < -1400 {
            0.0
        } else {
            m_f * 2f64.powi(e as i32)
        }
    }

    /// Exact numerator/denominator pair (num, den) with den a power of two.
    pub fn to_ratio(&self) -> (BigInt, BigInt) {
        if self.exp >= 0 {
            (self.mant.clone() << self.exp as u64, BigInt::one())
        } else {
            (self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Directed conversion of an integer fraction `n/d` (d > 0).
    pub fn from_ratio(n: &BigInt, d: &BigInt, prec: u32, dir: Dir) -> Self {
        assert!(d.is_positive(), "from_ratio requires positive denominator");
        BigFloat::from_bigint(n.clone()).div(&BigFloat::from_bigint(d.clone()), prec, dir)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn bf(v: i64, e: i64) -> BigFloat {
        BigFloat::from_parts(BigInt::from(v), e)
    }

    #[test]
    fn bigint_shr_is_floor() {
        // The rounding code relies on sign-extending right shift.
        assert_eq!(BigInt::from(-5) >> 1, BigInt::from(-3));
        assert_eq!(BigInt::from(5) >> 1, BigInt::from(2));
    }

    #[test]
    fn round_directions() {
        // 0b10101 = 21; nearest 3-bit-representable neighbours are 20 and 24.
        let x = bf(21, 0);
        assert_eq!(x.round(3, Dir::Down), bf(20, 0));
        assert_eq!(x.round(3, Dir::Up), bf(24, 0));
        let y = bf(-21, 0);
        assert_eq!(y.round(3, Dir::Down), bf(-24, 0));
        assert_eq!(y.round(3, Dir::Up), bf(-20, 0));
    }

    #[test]
    fn div_brackets_exact_value() {
        // 1/3 rounded down then up must bracket the true value.
        let one = BigFloat::one();
        let three = bf(3, 0);
        let lo = one.div(&three, 50, Dir::Down);
        let hi = one.div(&three, 50, Dir::Up);
        assert_eq!(lo.cmp_value(&hi), Ordering::Less);
        // lo*3 <= 1 <= hi*3
        assert!(lo.mul_exact(&three).cmp_value(&one) == Ordering::Less);
        assert!(hi.mul_exact(&three).cmp_value(&one) == Ordering::Greater);
    }

    #[test]
    fn sqrt_brackets() {
        let two = bf(2, 0);
        let lo = two.sqrt(60, Dir::Down);
        let hi = two.sqrt(60, Dir::Up);
        assert!(lo.mul_exact(&lo).cmp_value(&two) == Ordering::Less);
        assert!(hi.mul_exact(&hi).cmp_value(&two) == Ordering::Greater);
        assert!(bf(9, 0).sqrt(60, Dir::Down) == bf(3, 0));
        assert!(bf(9, 0).sqrt(60, Dir::Up) == bf(3, 0));
    }

    #[test]
    fn f64_round_trip() {
        for v in [0.0, 1.0, -1.5, 0.1, 123456.789, -3.0e-10] {
            let x = BigFloat::from_f64(v);
            assert_eq!(x.to_f64(), v);
        }
    }
}

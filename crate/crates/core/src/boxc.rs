//! Rectangular complex enclosures: a pair of real intervals for the real and
//! imaginary parts.

use crate::interval::Interval;
use crate::transcend;

#[derive(Debug, Clone)]
pub struct BoxC {
    pub re: Interval,
    pub im: Interval,
}

impl BoxC {
    pub fn new(re: Interval, im: Interval) -> Self {
        BoxC { re, im }
    }

    pub fn from_real(re: Interval) -> Self {
        let p = re.prec();
        BoxC { re, im: Interval::zero(p) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn add(&self, other: &Self) -> Self {
        BoxC { re: self.re.add(&other.re), im: self.im.add(&other.im) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        BoxC { re: self.re.sub(&other.re), im: self.im.sub(&other.im) }
    }

    pub fn neg(&self) -> Self {
        BoxC { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        BoxC {
            re: self.re.mul(&other.re).sub(&self.im.mul(&other.im)),
            im: self.re.mul(&other.im).add(&self.im.mul(&other.re)),
        }
    }

    pub fn scale(&self, k: &Interval) -> Self {
        BoxC { re: self.re.mul(k), im: self.im.mul(k) }
    }

    /// |z|^2 as an interval.
    pub fn norm2(&self) -> Interval {
        self.re.sqr().add(&self.im.sqr())
    }

    /// |z| as an interval.
    pub fn abs(&self) -> Interval {
        self.norm2().sqrt()
    }

    /// Reciprocal; panics if the box may contain zero.
    pub fn recip(&self) -> Self {
        let n2 = self.norm2();
        assert!(n2.is_positive(), "complex reciprocal of a box containing zero");
        BoxC { re: self.re.div(&n2), im: self.im.neg().div(&n2) }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.recip())
    }

    /// Principal logarithm for boxes in the right half-plane.
    pub fn log(&self) -> Self {
        assert!(
            self.re.is_positive(),
            "complex log implemented only for boxes with Re z > 0"
        );
        let half = transcend::ln(&self.norm2()).shl(-1);
        let arg = transcend::atan(&self.im.div(&self.re));
        BoxC { re: half, im: arg }
    }

    /// Widen both components outward by `r >= 0` (encloses any disc of radius
    /// r around any point of the box).
    pub fn widen(&self, r: &crate::bigfloat::BigFloat) -> Self {
        BoxC { re: self.re.widen(r), im: self.im.widen(r) }
    }

    /// Exact scaling by `2^k` on both components.
    pub fn shl(&self, k: i64) -> Self {
        BoxC { re: self.re.shl(k), im: self.im.shl(k) }
    }

    pub fn contains_f64(&self, re: f64, im: f64) -> bool {
        self.re.contains(&crate::bigfloat::BigFloat::from_f64(re))
            && self.im.contains(&crate::bigfloat::BigFloat::from_f64(im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_and_recip() {
        let p = 96;
        let z = BoxC::new(Interval::from_i64(3, p), Interval::from_i64(4, p));
        let w = z.mul(&z.recip());
        assert!(w.contains_f64(1.0, 0.0));
        assert!(z.abs().contains(&crate::bigfloat::BigFloat::from_i64(5)));
    }

    #[test]
    fn log_of_i_ish() {
        let p = 96;
        // log(1 + i) = (log 2)/2 + i pi/4
        let z = BoxC::new(Interval::one(p), Interval::one(p));
        let l = z.log();
        let half_ln2 = transcend::ln2(p).shl(-1);
        assert!(l.re.intersect(&half_ln2).is_some());
        let quarter_pi = transcend::pi(p).shl(-2);
        assert!(l.im.intersect(&quarter_pi).is_some());
    }
}

//! Rapidly converging series attached to the explicit-formula kernels.
//!
//! `r(z) = 2 pi^2 e^{-z} / (z^2 + pi^2)^2` and the two sums
//! `s1(b, l) = l * sum_{n>=0} r(l(b+n))` and
//! `s2(l) = l * sum_{n>=0} (-1)^n r(l(n+1/2))`.
//!
//! Tail bounds. For z > 0 the function r is positive and decreasing, and
//! `r(l(b+n)) <= r(l(b+N)) e^{-l(n-N)}` for `n >= N` because the exponential
//! factor decays by `e^{-l}` per step while the denominator only grows; hence
//! `sum_{n>N} l r(l(b+n)) <= l r(l(b+N+1)) / (1 - e^{-l})` (geometric bound).
//! For s2 the terms alternate with decreasing magnitude, so the tail is
//! bounded by the first omitted term.

use crate::bigfloat::{BigFloat, Dir};
use crate::interval::Interval;
use crate::transcend;

/// `r(z) = 2 pi^2 e^{-z} / (z^2 + pi^2)^2` on a nonnegative interval.
pub fn r_kernel(z: &Interval) -> Interval {
    let p = z.prec();
    let pi2 = transcend::pi(p).sqr();
    let num = transcend::exp(&z.neg()).mul(&pi2).shl(1);
    let den = z.sqr().add(&pi2).sqr();
    num.div(&den)
}

/// `s1(b, l) = l * sum_{n>=0} r(l(b+n))` for positive b and l.
pub fn kernel_series_s1(b: &Interval, ell: &Interval) -> Interval {
    let p = b.prec().max(ell.prec());
    assert!(b.lo().is_positive() && ell.lo().is_positive(), "s1 requires b, l > 0");
    let eps = BigFloat::from_parts(1.into(), -(p as i64) - 8);
    let mut sum = Interval::zero(p);
    let mut n = 0i64;
    loop {
        let term = ell.mul(&r_kernel(&ell.mul(&b.add(&Interval::from_i64(n, p)))));
        sum = sum.add(&term);
        // Geometric tail starting at n+1.
        let head = ell.mul(&r_kernel(&ell.mul(&b.add(&Interval::from_i64(n + 1, p)))));
        let ratio = transcend::exp(&ell.neg());
        let tail = head
            .div(&Interval::one(p).sub(&ratio))
            .mag();
        if tail.cmp_value(&eps) == std::cmp::Ordering::Less || n > 8 * p as i64 {
            return sum.widen(&tail);
        }
        n += 1;
    }
}

/// `s2(l) = l * sum_{n>=0} (-1)^n r(l(n+1/2))` for positive l.
pub fn kernel_series_s2(ell: &Interval) -> Interval {
    let p = ell.prec();
    assert!(ell.lo().is_positive(), "s2 requires l > 0");
    let eps = BigFloat::from_parts(1.into(), -(p as i64) - 8);
    let half = Interval::one(p).shl(-1);
    let mut sum = Interval::zero(p);
    let mut n = 0i64;
    loop {
        let arg = ell.mul(&Interval::from_i64(n, p).add(&half));
        let term = ell.mul(&r_kernel(&arg));
        sum = if n % 2 == 0 { sum.add(&term) } else { sum.sub(&term) };
        // Alternating with decreasing terms: tail bounded by first omitted.
        let next_arg = ell.mul(&Interval::from_i64(n + 1, p).add(&half));
        let tail = ell.mul(&r_kernel(&next_arg)).mag();
        if tail.cmp_value(&eps) == std::cmp::Ordering::Less || n > 8 * p as i64 {
            return sum.widen(&tail);
        }
        n += 1;
    }
}

/// `T(b, l) = int_l^inf e^{-bx} / (1 - e^{-x}) dx = sum_{n>=0} e^{-(b+n)l}/(b+n)`,
/// the tail of the J-functional integrand past the support of the test
/// function. Terms decay geometrically with ratio `e^{-l}`.
pub fn j_tail(b: &Interval, ell: &Interval) -> Interval {
    let p = b.prec().max(ell.prec());
    assert!(b.lo().is_positive() && ell.lo().is_positive());
    let eps = BigFloat::from_parts(1.into(), -(p as i64) - 8);
    let ratio = transcend::exp(&ell.neg());
    let mut sum = Interval::zero(p);
    let mut n = 0i64;
    loop {
        let bn = b.add(&Interval::from_i64(n, p));
        let term = transcend::exp(&bn.mul(ell).neg()).div(&bn);
        sum = sum.add(&term);
        let bn1 = b.add(&Interval::from_i64(n + 1, p));
        let head = transcend::exp(&bn1.mul(ell).neg()).div(&bn1);
        let tail = head.div(&Interval::one(p).sub(&ratio)).mag();
        if tail.cmp_value(&eps) == std::cmp::Ordering::Less || n > 8 * p as i64 {
            return sum.widen(&tail);
        }
        n += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_at_zero_is_two_over_pi_squared() {
        let p = 128;
        let v = r_kernel(&Interval::zero(p));
        let target = transcend::pi(p).sqr().recip().shl(1);
        assert!(v.intersect(&target).is_some());
    }

    #[test]
    fn s1_matches_direct_summation_oracle() {
        // Oracle: direct summation to n = 200 at 512 bits; the dropped tail
        // only makes the oracle a lower bound, so bracket it with the same
        // geometric tail bound evaluated at 512 bits.
        let p512 = 512u32;
        let b = Interval::one(p512);
        let ell = Interval::from_i64(10, p512);
        let mut oracle = Interval::zero(p512);
        for n in 0..=200i64 {
            oracle = oracle.add(&ell.mul(&r_kernel(&ell.mul(&b.add(&Interval::from_i64(n, p512))))));
        }
        let s = kernel_series_s1(&Interval::one(128), &Interval::from_i64(10, 128));
        assert!(
            s.intersect(&oracle.with_prec(128)).is_some(),
            "s1(1,10) = {s} vs oracle {oracle}"
        );
        assert!(s.width().to_f64() < 1e-20, "width {}", s.width().to_f64());
        assert!(s.is_positive());
    }

    #[test]
    fn s2_alternating_tail() {
        let p = 128;
        let s = kernel_series_s2(&Interval::from_i64(1, p));
        // Verified enclosure is finite and small; compare against a crude
        // partial sum bracket: first term minus second term bounds below.
        let half = Interval::one(p).shl(-1);
        let t0 = r_kernel(&half);
        let t1 = r_kernel(&Interval::from_i64(1, p).add(&half));
        assert!(s.lt(&t0) == crate::interval::Truth::True);
        assert!(t0.sub(&t1).lt(&s) == crate::interval::Truth::True);
    }

    #[test]
    fn j_tail_small_cases() {
        // T(b, l) with b = 1: sum e^{-nl-l}/(n+1) = -log(1 - e^{-l}) * ...
        // check against the closed form -log(1-e^{-l}) ... shifted:
        // sum_{n>=0} e^{-(1+n)l}/(1+n) = -log(1 - e^{-l}).
        let p = 128;
        let ell = Interval::from_i64(3, p);
        let t = j_tail(&Interval::one(p), &ell);
        let closed = transcend::ln(&Interval::one(p).sub(&transcend::exp(&ell.neg()))).neg();
        assert!(t.intersect(&closed).is_some(), "{t} vs {closed}");
    }
}

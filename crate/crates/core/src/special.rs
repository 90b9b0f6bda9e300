//! Certified digamma and trigamma on complex boxes in the right half-plane.
//!
//! Strategy: push the argument to `Re z >= SHIFT_THRESHOLD` with the
//! recurrences `psi(z) = psi(z+1) - 1/z` and `psi'(z) = psi'(z+1) + 1/z^2`,
//! then sum the asymptotic Bernoulli series with a rigorous remainder bound.
//!
//! Remainder bounds (derived from Binet's second integral, see below): with
//! `theta = arg w`, the error after truncating the digamma series at the
//! `B_{2K}` term is at most `|B_{2K+2}| / ((2K+2) |w|^{2K+2} cos(theta))`,
//! i.e. the first omitted term divided by `cos(theta)`; for trigamma it is at
//! most `|B_{2K+2}| / (|w|^{2K+3} cos^2(theta))`. Derivation: expand
//! `1/(t^2+w^2)` (resp. its square) under the integral
//! `psi(w) = log w - 1/(2w) - 2 I(w)`, `I(w) = int_0^inf t dt /
//! ((t^2+w^2)(e^{2 pi t}-1))`, and bound `|t^2+w^2| >= (t^2+|w|^2) cos(theta)`
//! (the minimum of `|1+u e^{-2 i theta}|/(1+u)` over `u >= 0` is `cos theta`),
//! together with `int_0^inf t^{2k+1}/(e^{2 pi t}-1) dt = |B_{2k+2}|/(2(2k+2))`.

use crate::bigfloat::{BigFloat, Dir};
use crate::boxc::BoxC;
use crate::interval::Interval;
use crate::transcend;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;
use std::sync::Mutex;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecialError {
    #[error("argument box must satisfy Re z > 0 (may contain a pole)")]
    Domain,
}

// Push Re z at least this far before the asymptotic series. The optimal
// truncation error behaves like e^(-2 pi Re w), so the threshold scales with
// the working precision to keep the series floor below one unit in the last
// place.
fn shift_threshold(work: u32) -> i64 {
    (work as f64 * 0.12).ceil() as i64 + 4
}

// Bernoulli numbers B_0, B_2, B_4, ... by the standard recurrence
// sum_{j=0}^{m} C(m+1, j) B_j = 0, computed once and extended on demand.
static BERNOULLI: Lazy<Mutex<Vec<BigRational>>> =
    Lazy::new(|| Mutex::new(vec![BigRational::one()]));

/// `B_{2k}` as an exact rational.
pub fn bernoulli(k2: usize) -> BigRational {
    assert!(k2 % 2 == 0, "only even Bernoulli indices are stored");
    let idx = k2 / 2;
    let mut cache = BERNOULLI.lock().unwrap();
    while cache.len() <= idx {
        // Compute B_m for m = 2*len via sum_{j<m+1} C(m+1,j) B_j = 0,
        // with odd B_j = 0 except B_1 = -1/2.
        let m = 2 * cache.len();
        let mut acc = BigRational::zero();
        // j = 0, 2, 4, ..., m-2 from the cache
        for (i, b) in cache.iter().enumerate() {
            acc += b * BigRational::from_integer(binomial(m + 1, 2 * i));
        }
        // j = 1 term: C(m+1,1) * (-1/2)
        acc += BigRational::new(BigInt::from(-(m as i64 + 1)), BigInt::from(2));
        let bm = -acc / BigRational::from_integer(binomial(m + 1, m));
        cache.push(bm);
    }
    cache[idx].clone()
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k.min(n - k) {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

fn check_domain(z: &BoxC) -> Result<(), SpecialError> {
    if z.re.lo().is_positive() {
        Ok(())
    } else {
        Err(SpecialError::Domain)
    }
}

/// Digamma `psi(z)` on a box with `Re z > 0`.
pub fn digamma(z: &BoxC) -> Result<BoxC, SpecialError> {
    check_domain(z)?;
    let p = z.prec();
    let work = p + 24;
    let z = BoxC::new(z.re.with_prec(work), z.im.with_prec(work));
    // Recurrence steps to reach Re w >= SHIFT_THRESHOLD.
    let shift = (shift_threshold(work) - z.re.lo().to_f64().floor() as i64).max(0) as u32;
    let mut sum = BoxC::from_real(Interval::zero(work));
    for j in 0..shift {
        let zj = z.add(&BoxC::from_real(Interval::from_i64(j as i64, work)));
        sum = sum.add(&zj.recip());
    }
    let w = z.add(&BoxC::from_real(Interval::from_i64(shift as i64, work)));
    let head = digamma_asymptotic(&w, work);
    Ok(head.sub(&sum))
}

/// Trigamma `psi'(z)` on a box with `Re z > 0`.
pub fn trigamma(z: &BoxC) -> Result<BoxC, SpecialError> {
    check_domain(z)?;
    let p = z.prec();
    let work = p + 24;
    let z = BoxC::new(z.re.with_prec(work), z.im.with_prec(work));
    let shift = (shift_threshold(work) - z.re.lo().to_f64().floor() as i64).max(0) as u32;
    let mut sum = BoxC::from_real(Interval::zero(work));
    for j in 0..shift {
        let zj = z.add(&BoxC::from_real(Interval::from_i64(j as i64, work)));
        sum = sum.add(&zj.recip().mul(&zj.recip()));
    }
    let w = z.add(&BoxC::from_real(Interval::from_i64(shift as i64, work)));
    let head = trigamma_asymptotic(&w, work);
    Ok(head.add(&sum))
}

// 1/cos(arg w) as an interval upper-bound quantity: |w| / Re w.
fn sec_theta(w: &BoxC) -> Interval {
    w.abs().div(&w.re)
}

fn digamma_asymptotic(w: &BoxC, work: u32) -> BoxC {
    // log w - 1/(2w) - sum_{k>=1} B_2k / (2k w^2k) + R
    let mut out = w.log().sub(&w.recip().shl(-1));
    let w2_inv = w.mul(w).recip();
    let sec = sec_theta(w);
    let eps = BigFloat::from_parts(BigInt::one(), -(work as i64) - 8);
    let mut pw = w2_inv.clone(); // w^{-2k}
    let mut prev_bound: Option<BigFloat> = None;
    let mut k = 1usize;
    loop {
        // Remainder bound if we stop after the B_{2k-2} term (k-1 terms so
        // far): |B_{2k}|/((2k)|w|^{2k}) * sec(theta). The asymptotic series
        // diverges, so stop as soon as the bound stops improving.
        let bn = bernoulli(2 * k).abs();
        let bound = pw
            .abs()
            .mul(&Interval::from_rational(
                &(bn.clone() / BigRational::from_integer(BigInt::from(2 * k))),
                work,
            ))
            .mul(&sec)
            .mag();
        if let Some(prev) = &prev_bound {
            if bound.cmp_value(prev) != std::cmp::Ordering::Less {
                // `out` holds k-1 terms; `bound` is exactly the remainder
                // bound for that truncation point.
                return out.widen(&bound);
            }
        }
        let coeff =
            Interval::from_rational(&(bernoulli(2 * k) / BigRational::from_integer(BigInt::from(2 * k))), work);
        out = out.sub(&pw.scale(&coeff));
        if bound.cmp_value(&eps) == std::cmp::Ordering::Less || k >= work as usize {
            return out.widen(&bound);
        }
        prev_bound = Some(bound);
        pw = pw.mul(&w2_inv);
        k += 1;
    }
}

fn trigamma_asymptotic(w: &BoxC, work: u32) -> BoxC {
    // 1/w + 1/(2w^2) + sum_{k>=1} B_2k / w^{2k+1} + R
    let w_inv = w.recip();
    let w2_inv = w_inv.mul(&w_inv);
    let mut out = w_inv.add(&w2_inv.shl(-1));
    let sec2 = sec_theta(w).sqr();
    let eps = BigFloat::from_parts(BigInt::one(), -(work as i64) - 8);
    let mut pw = w2_inv.mul(&w_inv); // w^{-(2k+1)}
    let mut prev_bound: Option<BigFloat> = None;
    let mut k = 1usize;
    loop {
        // Remainder bound if we stop before the B_{2k} term:
        // |B_{2k}|/|w|^{2k+1} * sec^2(theta); stop once it stops improving.
        let bn = bernoulli(2 * k).abs();
        let bound = pw
            .abs()
            .mul(&Interval::from_rational(&bn, work))
            .mul(&sec2)
            .mag();
        if let Some(prev) = &prev_bound {
            if bound.cmp_value(prev) != std::cmp::Ordering::Less {
                return out.widen(&bound);
            }
        }
        let term = pw.scale(&Interval::from_rational(&bernoulli(2 * k), work));
        out = out.add(&term);
        if bound.cmp_value(&eps) == std::cmp::Ordering::Less || k >= work as usize {
            return out.widen(&bound);
        }
        prev_bound = Some(bound);
        pw = pw.mul(&w2_inv);
        k += 1;
    }
}

/// Digamma restricted to a positive real interval.
pub fn digamma_real(x: &Interval) -> Result<Interval, SpecialError> {
    Ok(digamma(&BoxC::from_real(x.clone()))?.re)
}

/// Trigamma restricted to a positive real interval.
pub fn trigamma_real(x: &Interval) -> Result<Interval, SpecialError> {
    Ok(trigamma(&BoxC::from_real(x.clone()))?.re)
}

/// `phi(z) = (psi((z+1)/2) - psi(z/2)) / 2`, the alternating-sum kernel.
pub fn phi(z: &BoxC) -> Result<BoxC, SpecialError> {
    let p = z.prec();
    let one = BoxC::from_real(Interval::one(p));
    let a = digamma(&z.add(&one).shl(-1))?;
    let b = digamma(&z.shl(-1))?;
    Ok(a.sub(&b).shl(-1))
}

/// `phi'(z) = (psi'((z+1)/2) - psi'(z/2)) / 4`.
pub fn phi_prime(z: &BoxC) -> Result<BoxC, SpecialError> {
    let p = z.prec();
    let one = BoxC::from_real(Interval::one(p));
    let a = trigamma(&z.add(&one).shl(-1))?;
    let b = trigamma(&z.shl(-1))?;
    Ok(a.sub(&b).shl(-2))
}



#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn ival(v: i64, prec: u32) -> Interval {
        Interval::from_i64(v, prec)
    }

    // Euler-Mascheroni constant, 40 correct digits.
    const GAMMA_40: &str = "0.5772156649015328606065120900824024310421";

    fn dec_to_rational(dec: &str) -> BigRational {
        let neg = dec.starts_with('-');
        let s = dec.trim_start_matches('-');
        let (i, f) = s.split_once('.').unwrap_or((s, ""));
        let num: BigInt = format!("{i}{f}").parse().unwrap();
        let num = if neg { -num } else { num };
        BigRational::new(num, BigInt::from(10u32).pow(f.len() as u32))
    }

    fn bracket(dec: &str, prec: u32) -> Interval {
        let q = dec_to_rational(dec);
        let ulp = BigRational::new(BigInt::one(), q.denom().clone());
        Interval::from_rational(&(q.clone() - ulp.clone()), prec)
            .hull(&Interval::from_rational(&(q + ulp), prec))
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(2), BigRational::new(1.into(), 6.into()));
        assert_eq!(bernoulli(4), BigRational::new((-1).into(), 30.into()));
        assert_eq!(bernoulli(12), BigRational::new((-691).into(), 2730.into()));
    }

    #[test]
    fn digamma_at_one_is_minus_gamma() {
        let p = 160;
        let d = digamma_real(&ival(1, p)).unwrap();
        let mg = bracket(&format!("-{GAMMA_40}"), p);
        assert!(d.intersect(&mg).is_some(), "psi(1) = {d} missed -gamma");
        assert!(d.width().to_f64() < 1e-35);
    }

    #[test]
    fn digamma_recurrence_psi2() {
        // psi(2) = psi(1) + 1
        let p = 160;
        let d1 = digamma_real(&ival(1, p)).unwrap();
        let d2 = digamma_real(&ival(2, p)).unwrap();
        assert!(d2.sub(&d1).intersect(&Interval::one(p)).is_some());
    }

    #[test]
    fn trigamma_at_one_is_pi2_over_6() {
        let p = 160;
        let t = trigamma_real(&ival(1, p)).unwrap();
        let target = transcend::pi(p).sqr().div_i64(6);
        assert!(t.intersect(&target).is_some());
        assert!(t.width().to_f64() < 1e-35);
    }

    #[test]
    fn series_oracle_agreement() {
        // Independent oracle: psi(z) + gamma = sum_{n>=0} (1/(n+1) - 1/(n+z)),
        // truncated after N terms with tail in [0, (z-1)/N] for real z > 1.
        let p = 128;
        let n_terms = 4000i64;
        for (num, den) in [(3i64, 2i64), (5, 2), (7, 3), (4, 1)] {
            let z = Interval::from_ratio_parts(&num.into(), &den.into(), p);
            let mut s = Interval::zero(p);
            for n in 0..n_terms {
                let a = Interval::from_i64(n + 1, p).recip();
                let b = z.add(&Interval::from_i64(n, p)).recip();
                s = s.add(&a.sub(&b));
            }
            // 0 <= tail <= (z-1)/N for z >= 1
            let tail_hi = z
                .sub(&Interval::one(p))
                .div(&Interval::from_i64(n_terms, p));
            let oracle = s.hull(&s.add(&tail_hi)); // psi(z) + gamma in here
            let gamma = bracket(GAMMA_40, p);
            let got = digamma_real(&z).unwrap().add(&gamma);
            assert!(
                got.intersect(&oracle).is_some(),
                "digamma series oracle mismatch at {num}/{den}: {got} vs {oracle}"
            );
        }
    }

    #[test]
    fn complex_point_reference() {
        // psi(1+i) and psi'(1+i), 37 digits (mpmath 1.3).
        let p = 128;
        let z = BoxC::new(ival(1, p), ival(1, p));
        let d = digamma(&z).unwrap();
        let re = bracket("0.0946503206224769772718784827219107224762", p);
        let im = bracket("1.0766740474685811741340507947500004904", p);
        assert!(d.re.intersect(&re).is_some(), "Re psi(1+i) = {}", d.re);
        assert!(d.im.intersect(&im).is_some(), "Im psi(1+i) = {}", d.im);
        let t = trigamma(&z).unwrap();
        let re = bracket("0.4630000966227637862983265181841857944108", p);
        let im = bracket("-0.7942335427593188655830136171569029959051", p);
        assert!(t.re.intersect(&re).is_some(), "Re psi'(1+i) = {}", t.re);
        assert!(t.im.intersect(&im).is_some(), "Im psi'(1+i) = {}", t.im);
    }

    #[test]
    fn domain_error() {
        let p = 64;
        let z = BoxC::new(
            Interval::new(BigFloat::from_i64(-1), BigFloat::from_i64(1), p),
            Interval::zero(p),
        );
        assert!(digamma(&z).is_err());
    }

    #[test]
    fn width_shrinks_with_precision() {
        for p in [64u32, 128, 256] {
            let w1 = digamma_real(&ival(1, p)).unwrap().width();
            let w2 = digamma_real(&ival(1, 2 * p)).unwrap().width();
            assert!(w2.shl(1).cmp_value(&w1) != std::cmp::Ordering::Greater);
        }
    }
}

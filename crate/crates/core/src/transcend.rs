//! Elementary functions on intervals: exp, log, sin, cos, atan, and the
//! constants pi and log 2, all with certified enclosures.
//!
//! Each function range-reduces with an enclosure of the relevant constant and
//! then sums a Taylor series in interval arithmetic with an explicit tail
//! bound, so the result contains the exact image of the input interval.

use crate::bigfloat::{BigFloat, Dir};
use crate::interval::Interval;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::Mutex;

#[derive(Clone)]
struct Consts {
    pi: Interval,
    ln2: Interval,
}

static CONST_CACHE: Lazy<Mutex<HashMap<u32, Consts>>> = Lazy::new(|| Mutex::new(HashMap::new()));

fn rational_interval(lo: &BigRational, hi: &BigRational, prec: u32) -> Interval {
    Interval::new(
        BigFloat::from_ratio(lo.numer(), lo.denom(), prec, Dir::Down),
        BigFloat::from_ratio(hi.numer(), hi.denom(), prec, Dir::Up),
        prec,
    )
}

// atan(1/n) by the alternating Gregory series, bracketed by consecutive
// partial sums, in exact rational arithmetic.
fn atan_inv_rational(n: u64, prec: u32) -> Interval {
    let nn = BigRational::new(BigInt::one(), BigInt::from(n));
    let n2 = nn.clone() * nn.clone();
    let mut term = nn.clone();
    let mut sum = BigRational::zero();
    let mut k = 0u32;
    let eps = BigRational::new(BigInt::one(), BigInt::one() << (prec as usize + 8));
    loop {
        let signed = if k % 2 == 0 { term.clone() } else { -term.clone() };
        let next = sum.clone() + signed;
        // Alternating series: the sum lies between consecutive partials.
        if term < eps {
            let (lo, hi) = if sum < next { (sum, next) } else { (next, sum) };
            return rational_interval(&lo, &hi, prec);
        }
        sum = next;
        term = term * n2.clone() / BigRational::from_integer(BigInt::from(2 * k + 3))
            * BigRational::from_integer(BigInt::from(2 * k + 1));
        k += 1;
    }
}

// atanh(1/n) = sum 1/((2k+1) n^{2k+1}), positive terms with geometric tail.
fn atanh_inv_rational(n: u64, prec: u32) -> Interval {
    let nn = BigRational::new(BigInt::one(), BigInt::from(n));
    let n2 = nn.clone() * nn.clone();
    let mut pow = nn.clone();
    let mut sum = BigRational::zero();
    let mut k = 0u64;
    let eps = BigRational::new(BigInt::one(), BigInt::one() << (prec as usize + 8));
    loop {
        sum += pow.clone() / BigRational::from_integer(BigInt::from(2 * k + 1));
        pow *= n2.clone();
        let next = pow.clone() / BigRational::from_integer(BigInt::from(2 * k + 3));
        if next < eps {
            // Remaining terms are dominated by a geometric series of ratio 1/n^2.
            let tail = next / (BigRational::one() - n2.clone());
            return rational_interval(&sum, &(sum.clone() + tail), prec);
        }
        k += 1;
    }
}

fn consts(prec: u32) -> Consts {
    if let Some(c) = CONST_CACHE.lock().unwrap().get(&prec) {
        return c.clone();
    }
    let work = prec + 16;
    // Machin: pi = 16 atan(1/5) - 4 atan(1/239).
    let pi = atan_inv_rational(5, work)
        .mul_i64(16)
        .sub(&atan_inv_rational(239, work).mul_i64(4))
        .with_prec(prec);
    // log 2 = 2 atanh(1/3).
    let ln2 = atanh_inv_rational(3, work).mul_i64(2).with_prec(prec);
    let c = Consts { pi, ln2 };
    CONST_CACHE.lock().unwrap().insert(prec, c.clone());
    c
}

/// Enclosure of pi.
pub fn pi(prec: u32) -> Interval {
    consts(prec).pi
}

/// Enclosure of log 2.
pub fn ln2(prec: u32) -> Interval {
    consts(prec).ln2
}

/// Enclosure of exp(x). Monotone, so wide intervals are evaluated at their
/// endpoints; the series kernel only ever sees thin arguments.
pub fn exp(x: &Interval) -> Interval {
    let p = x.prec();
    if x.lo() == x.hi() {
        return exp_thin(x, p);
    }
    let lo = exp_thin(&Interval::point(x.lo().clone(), p), p);
    let hi = exp_thin(&Interval::point(x.hi().clone(), p), p);
    Interval::new(lo.lo().clone(), hi.hi().clone(), p)
}

fn exp_thin(x: &Interval, p: u32) -> Interval {
    let work = p + 16;
    let l2 = ln2(work);
    let k = (x.to_f64_mid() / std::f64::consts::LN_2).round();
    let k = if k.is_finite() { k as i64 } else { 0 };
    let r = x.with_prec(work).sub(&l2.mul_i64(k));
    exp_series(&r, work).shl(k).with_prec(p)
}

// exp on |r| <= 1 via Taylor with explicit tail.
fn exp_series(r: &Interval, work: u32) -> Interval {
    let mut sum = Interval::one(work);
    let mut term = Interval::one(work);
    let eps = BigFloat::from_parts(BigInt::one(), -(work as i64) - 8);
    let mut n = 1i64;
    loop {
        term = term.mul(r).div_i64(n);
        sum = sum.add(&term);
        let t = term.mag();
        if t.cmp_value(&eps) == std::cmp::Ordering::Less && n as f64 > r.mag().to_f64() + 2.0 {
            // |tail| <= |term| * mag/(n+1) / (1 - mag/(n+1)) <= |term| for mag <= (n+1)/2
            let m = r.mag();
            let next = t.mul_exact(&m).div(&BigFloat::from_i64(n + 1), work, Dir::Up);
            let denom = BigFloat::one().sub_exact(
                &m.div(&BigFloat::from_i64(n + 1), work, Dir::Up),
            );
            let tail = next.div(&denom, work, Dir::Up);
            return sum.widen(&tail);
        }
        n += 1;
    }
}

/// Enclosure of log(x) for an interval with positive lower endpoint.
/// Monotone; evaluated at the endpoints.
pub fn ln(x: &Interval) -> Interval {
    assert!(x.lo().is_positive(), "ln requires a strictly positive interval");
    let p = x.prec();
    if x.lo() == x.hi() {
        return ln_thin(x, p);
    }
    let lo = ln_thin(&Interval::point(x.lo().clone(), p), p);
    let hi = ln_thin(&Interval::point(x.hi().clone(), p), p);
    Interval::new(lo.lo().clone(), hi.hi().clone(), p)
}

fn ln_thin(x: &Interval, p: u32) -> Interval {
    let work = p + 16;
    // x = m * 2^e with m near 1.
    let e = x.midpoint().exponent();
    let m = x.with_prec(work).shl(-e);
    let one = Interval::one(work);
    let t = m.sub(&one).div(&m.add(&one));
    let series = atanh_series(&t, work).mul_i64(2);
    series.add(&ln2(work).mul_i64(e)).with_prec(p)
}

fn atanh_series(t: &Interval, work: u32) -> Interval {
    let t2 = t.sqr();
    let mut pow = t.clone();
    let mut sum = Interval::zero(work);
    let eps = BigFloat::from_parts(BigInt::one(), -(work as i64) - 8);
    let mut k = 0i64;
    loop {
        sum = sum.add(&pow.div_i64(2 * k + 1));
        pow = pow.mul(&t2);
        let t_next = pow.mag().div(&BigFloat::from_i64(2 * k + 3), work, Dir::Up);
        if t_next.cmp_value(&eps) == std::cmp::Ordering::Less {
            // geometric tail with ratio mag(t)^2
            let denom = BigFloat::one().sub_exact(&t2.mag());
            let tail = t_next.div(&denom, work, Dir::Up);
            return sum.widen(&tail);
        }
        k += 1;
    }
}

/// Enclosure of atan(x). Monotone; evaluated at the endpoints.
pub fn atan(x: &Interval) -> Interval {
    let p = x.prec();
    if x.lo() == x.hi() {
        return atan_thin(x, p);
    }
    let lo = atan_thin(&Interval::point(x.lo().clone(), p), p);
    let hi = atan_thin(&Interval::point(x.hi().clone(), p), p);
    Interval::new(lo.lo().clone(), hi.hi().clone(), p)
}

fn atan_thin(x: &Interval, p: u32) -> Interval {
    let work = p + 16;
    let mut r = x.with_prec(work);
    let mut scale = 1i64;
    // Halve the angle until |r| <= 1/4: atan x = 2 atan(x / (1 + sqrt(1+x^2))).
    while r.mag().to_f64() > 0.25 {
        let denom = Interval::one(work).add(&Interval::one(work).add(&r.sqr()).sqrt());
        r = r.div(&denom);
        scale *= 2;
        if scale > 1 << 12 {
            break;
        }
    }
    let t2 = r.sqr();
    let mut pow = r.clone();
    let mut sum = Interval::zero(work);
    let eps = BigFloat::from_parts(BigInt::one(), -(work as i64) - 8);
    let mut k = 0i64;
    loop {
        let term = pow.div_i64(2 * k + 1);
        sum = if k % 2 == 0 { sum.add(&term) } else { sum.sub(&term) };
        pow = pow.mul(&t2);
        let t_next = pow.mag().div(&BigFloat::from_i64(2 * k + 3), work, Dir::Up);
        if t_next.cmp_value(&eps) == std::cmp::Ordering::Less {
            let denom = BigFloat::one().sub_exact(&t2.mag());
            let tail = t_next.div(&denom, work, Dir::Up);
            return sum.widen(&tail).mul_i64(scale).with_prec(p);
        }
        k += 1;
    }
}

/// Enclosures of (sin x, cos x). A wide argument is range-reduced once (the
/// quadrant is taken from the midpoint) and then handled by monotonicity of
/// sin and the peak-aware range of cos on the reduced interval.
pub fn sin_cos(x: &Interval) -> (Interval, Interval) {
    let p = x.prec();
    let work = p + 16;
    let unit = Interval::new(BigFloat::from_i64(-1), BigFloat::from_i64(1), p);
    let half_pi = pi(work).shl(-1);
    let k = (x.to_f64_mid() / (std::f64::consts::PI / 2.0)).round();
    if !k.is_finite() || k.abs() > 1e15 {
        return (unit.clone(), unit);
    }
    let k = k as i64;
    let r = x.with_prec(work).sub(&half_pi.mul_i64(k));
    if r.mag().to_f64() > 1.1 {
        // Too wide for a single quadrant; fall back to the trivial hull.
        return (unit.clone(), unit);
    }
    // On |r| <= 1.1 < pi/2, sin is increasing and cos peaks at 0.
    let (s_lo, c_lo) = sin_cos_series(&Interval::point(r.lo().clone(), work), work);
    let (s_hi, c_hi) = sin_cos_series(&Interval::point(r.hi().clone(), work), work);
    let s = Interval::new(s_lo.lo().clone(), s_hi.hi().clone(), work);
    let c = if r.contains_zero() {
        Interval::new(
            BigFloat::min_value(c_lo.lo(), c_hi.lo()),
            BigFloat::one(),
            work,
        )
    } else {
        c_lo.hull(&c_hi)
    };
    let (s, c) = match k.rem_euclid(4) {
        0 => (s, c),
        1 => (c, s.neg()),
        2 => (s.neg(), c.neg()),
        _ => (c.neg(), s),
    };
    (
        s.with_prec(p).intersect(&unit).expect("sin out of range"),
        c.with_prec(p).intersect(&unit).expect("cos out of range"),
    )
}

pub fn sin(x: &Interval) -> Interval {
    sin_cos(x).0
}

pub fn cos(x: &Interval) -> Interval {
    sin_cos(x).1
}

fn sin_cos_series(r: &Interval, work: u32) -> (Interval, Interval) {
    let r2 = r.sqr();
    let eps = BigFloat::from_parts(BigInt::one(), -(work as i64) - 8);
    // sin
    let mut sum_s = r.clone();
    let mut term = r.clone();
    let mut n = 1i64;
    loop {
        term = term.mul(&r2).div_i64((2 * n) * (2 * n + 1)).neg();
        sum_s = sum_s.add(&term);
        if term.mag().cmp_value(&eps) == std::cmp::Ordering::Less {
            let tail = term
                .mag()
                .mul_exact(&r2.mag())
                .div(&BigFloat::from_i64((2 * n + 2) * (2 * n + 3)), work, Dir::Up);
            sum_s = sum_s.widen(&tail);
            break;
        }
        n += 1;
    }
    // cos
    let mut sum_c = Interval::one(work);
    let mut term = Interval::one(work);
    let mut n = 1i64;
    loop {
        term = term.mul(&r2).div_i64((2 * n - 1) * (2 * n)).neg();
        sum_c = sum_c.add(&term);
        if term.mag().cmp_value(&eps) == std::cmp::Ordering::Less {
            let tail = term
                .mag()
                .mul_exact(&r2.mag())
                .div(&BigFloat::from_i64((2 * n + 1) * (2 * n + 2)), work, Dir::Up);
            sum_c = sum_c.widen(&tail);
            break;
        }
        n += 1;
    }
    (sum_s, sum_c)
}

/// Enclosure of cosh(x).
pub fn cosh(x: &Interval) -> Interval {
    let e = exp(x);
    e.add(&e.recip()).shl(-1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigfloat::BigFloat;

    fn assert_contains_dec(x: &Interval, dec: &str) {
        // dec is a decimal reference correct to its last digit. The true value
        // lies within one last-place unit of it, so the enclosure must meet
        // the bracket [dec - ulp, dec + ulp].
        let neg = dec.starts_with('-');
        let s = dec.trim_start_matches('-');
        let (int_part, frac_part) = s.split_once('.').unwrap_or((s, ""));
        let digits: String = format!("{int_part}{frac_part}");
        let num: num_bigint::BigInt = digits.parse().unwrap();
        let num = if neg { -num } else { num };
        let den = num_bigint::BigInt::from(10u32).pow(frac_part.len() as u32);
        let prec = x.prec();
        let lo = num_rational::BigRational::new(num.clone() - 1, den.clone());
        let hi = num_rational::BigRational::new(num + 1, den);
        let bracket = Interval::from_rational(&lo, prec).hull(&Interval::from_rational(&hi, prec));
        assert!(
            x.intersect(&bracket).is_some(),
            "interval {x} misses the reference bracket around {dec}"
        );
    }

    #[test]
    fn pi_matches_reference() {
        // 50 digits of pi.
        let x = pi(192);
        assert_contains_dec(&x, "3.14159265358979323846264338327950288419716939937510");
        assert!(x.width().to_f64() < 1e-50);
    }

    #[test]
    fn ln2_matches_reference() {
        let x = ln2(192);
        assert_contains_dec(&x, "0.69314718055994530941723212145817656807550013436026");
    }

    #[test]
    fn exp_log_references() {
        let p = 128u32;
        let e1 = exp(&Interval::one(p));
        assert_contains_dec(&e1, "2.71828182845904523536028747135266249775724709369996");
        let l3 = ln(&Interval::from_i64(3, p));
        assert_contains_dec(&l3, "1.09861228866810969139524523692252570464749055782275");
        // exp(log x) contains x
        let x = Interval::from_ratio_parts(&7.into(), &3.into(), p);
        assert!(exp(&ln(&x)).contains_rational(&num_rational::BigRational::new(
            7.into(),
            3.into()
        )));
    }

    #[test]
    fn trig_references() {
        let p = 128u32;
        let s1 = sin(&Interval::one(p));
        assert_contains_dec(&s1, "0.84147098480789650665250232163029899962256306079837");
        let c1 = cos(&Interval::one(p));
        assert_contains_dec(&c1, "0.54030230586813971740093660744297660373231042061792");
        // sin(pi) contains 0
        let sp = sin(&pi(p));
        assert!(sp.contains_zero());
        assert!(sp.width().to_f64() < 1e-30);
        // atan(1) = pi/4
        let a1 = atan(&Interval::one(p));
        assert!(a1.intersect(&pi(p).shl(-2)).is_some());
        assert!(pi(p).shl(-2).contains_interval(&a1.intersect(&pi(p).shl(-2)).unwrap()));
    }

    #[test]
    fn width_halves_with_precision() {
        // Doubling precision at least halves the enclosure width.
        for f in [64u32, 128, 256] {
            let w1 = exp(&Interval::one(f)).width();
            let w2 = exp(&Interval::one(2 * f)).width();
            assert!(
                w2.shl(1).cmp_value(&w1) != std::cmp::Ordering::Greater,
                "width did not halve at {f} bits"
            );
        }
    }

    #[test]
    fn exp_wide_interval_is_sound() {
        let p = 64u32;
        let x = Interval::new(BigFloat::from_i64(-3), BigFloat::from_i64(4), p);
        let e = exp(&x);
        // Contains e^-3 and e^4 approximations.
        assert!(e.lo().to_f64() < 0.0498);
        assert!(e.hi().to_f64() > 54.598);
        assert!(e.lo().is_positive());
    }
}

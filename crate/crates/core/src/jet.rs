//! Truncated Taylor ("jet") arithmetic with interval coefficients.
//!
//! A `Jet` of order d at a base point x0 stores enclosures of the scaled
//! derivatives `f^{(j)}(x0)/j!` for `j = 0..=d`. Evaluating the recurrences
//! at an interval base point gives coefficient enclosures valid across the
//! whole panel, which is exactly what the quadrature remainder needs.

use crate::interval::Interval;
use crate::transcend;

#[derive(Debug, Clone)]
pub struct Jet {
    pub c: Vec<Interval>,
}

impl Jet {
    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn prec(&self) -> u32 {
        self.c[0].prec()
    }

    pub fn constant(v: Interval, order: usize) -> Jet {
        let p = v.prec();
        let mut c = vec![Interval::zero(p); order + 1];
        c[0] = v;
        Jet { c }
    }

    /// The identity function `x` expanded at `x0`.
    pub fn variable(x0: Interval, order: usize) -> Jet {
        let p = x0.prec();
        let mut c = vec![Interval::zero(p); order + 1];
        c[0] = x0;
        if order >= 1 {
            c[1] = Interval::one(p);
        }
        Jet { c }
    }

    pub fn add(&self, o: &Jet) -> Jet {
        Jet { c: self.c.iter().zip(&o.c).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &Jet) -> Jet {
        Jet { c: self.c.iter().zip(&o.c).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn neg(&self) -> Jet {
        Jet { c: self.c.iter().map(|a| a.neg()).collect() }
    }

    pub fn add_scalar(&self, v: &Interval) -> Jet {
        let mut c = self.c.clone();
        c[0] = c[0].add(v);
        Jet { c }
    }

    pub fn scale(&self, v: &Interval) -> Jet {
        Jet { c: self.c.iter().map(|a| a.mul(v)).collect() }
    }

    pub fn mul(&self, o: &Jet) -> Jet {
        let d = self.order();
        let p = self.prec();
        let mut c = vec![Interval::zero(p); d + 1];
        for i in 0..=d {
            for j in 0..=(d - i) {
                c[i + j] = c[i + j].add(&self.c[i].mul(&o.c[j]));
            }
        }
        Jet { c }
    }

    /// Division; the constant coefficient of `o` must exclude zero.
    pub fn div(&self, o: &Jet) -> Jet {
        let d = self.order();
        let p = self.prec();
        let mut c = vec![Interval::zero(p); d + 1];
        for k in 0..=d {
            let mut acc = self.c[k].clone();
            for j in 1..=k {
                acc = acc.sub(&o.c[j].mul(&c[k - j]));
            }
            c[k] = acc.div(&o.c[0]);
        }
        Jet { c }
    }

    pub fn recip(&self) -> Jet {
        Jet::constant(Interval::one(self.prec()), self.order()).div(self)
    }

    /// exp(u) via the standard convolution recurrence.
    pub fn exp(&self) -> Jet {
        let d = self.order();
        let p = self.prec();
        let mut c = vec![Interval::zero(p); d + 1];
        c[0] = transcend::exp(&self.c[0]);
        for k in 1..=d {
            let mut acc = Interval::zero(p);
            for j in 1..=k {
                acc = acc.add(&self.c[j].mul_i64(j as i64).mul(&c[k - j]));
            }
            c[k] = acc.div_i64(k as i64);
        }
        Jet { c }
    }

    /// (sin u, cos u) via the coupled recurrence.
    pub fn sin_cos(&self) -> (Jet, Jet) {
        let d = self.order();
        let p = self.prec();
        let (s0, c0) = transcend::sin_cos(&self.c[0]);
        let mut s = vec![Interval::zero(p); d + 1];
        let mut c = vec![Interval::zero(p); d + 1];
        s[0] = s0;
        c[0] = c0;
        for k in 1..=d {
            let mut acc_s = Interval::zero(p);
            let mut acc_c = Interval::zero(p);
            for j in 1..=k {
                let ju = self.c[j].mul_i64(j as i64);
                acc_s = acc_s.add(&ju.mul(&c[k - j]));
                acc_c = acc_c.add(&ju.mul(&s[k - j]));
            }
            s[k] = acc_s.div_i64(k as i64);
            c[k] = acc_c.div_i64(k as i64).neg();
        }
        (Jet { c: s }, Jet { c })
    }

    /// Evaluate the polynomial part at `t` (offset from the base point).
    pub fn eval(&self, t: &Interval) -> Interval {
        let mut acc = Interval::zero(self.prec());
        for c in self.c.iter().rev() {
            acc = acc.mul(t).add(c);
        }
        acc
    }

    /// Single convolution coefficient `sum_{i+j=k} self_i * o_j` of the
    /// product, without forming the whole product jet.
    pub fn conv_coeff(&self, o: &Jet, k: usize) -> Interval {
        let mut acc = Interval::zero(self.prec());
        for i in 0..=k.min(self.order()) {
            let j = k - i;
            if j <= o.order() {
                acc = acc.add(&self.c[i].mul(&o.c[j]));
            }
        }
        acc
    }

    /// `int_{-r}^{r} (self * o)(t) dt` using only the even product
    /// coefficients below `order`: `sum_{j even} c_j * 2 r^{j+1}/(j+1)`.
    pub fn integrate_product_sym(&self, o: &Jet, r: &Interval, order: usize) -> Interval {
        let p = self.prec();
        let mut acc = Interval::zero(p);
        let r2 = r.sqr();
        let mut rpow = r.clone(); // r^{j+1} for even j
        let mut j = 0usize;
        while j < order {
            acc = acc.add(&self.conv_coeff(o, j).mul(&rpow).shl(1).div_i64(j as i64 + 1));
            rpow = rpow.mul(&r2);
            j += 2;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigfloat::BigFloat;

    #[test]
    fn exp_jet_matches_point_values() {
        let p = 96;
        let order = 8;
        // f(x) = exp(2x) at base 0.5: coefficients are e^1 2^j / j!.
        let x = Jet::variable(Interval::from_f64(0.5, p), order).scale(&Interval::from_i64(2, p));
        let e = x.exp();
        let e1 = transcend::exp(&Interval::one(p));
        let mut fact = 1i64;
        for j in 0..=order {
            if j > 0 {
                fact *= j as i64;
            }
            let expect = e1.shl(j as i64).div_i64(fact);
            assert!(
                e.c[j].intersect(&expect).is_some(),
                "coefficient {j}: {} vs {}",
                e.c[j],
                expect
            );
        }
    }

    #[test]
    fn division_recovers_product() {
        let p = 96;
        let order = 6;
        let x = Jet::variable(Interval::from_f64(0.3, p), order);
        let a = x.exp();
        let b = x.add_scalar(&Interval::from_i64(2, p));
        let q = a.mul(&b).div(&b);
        for j in 0..=order {
            assert!(q.c[j].intersect(&a.c[j]).is_some());
        }
    }

    #[test]
    fn sin_cos_jet_derivative_structure() {
        let p = 96;
        let order = 5;
        let x = Jet::variable(Interval::zero(p), order);
        let (s, c) = x.sin_cos();
        // sin: 0, 1, 0, -1/6, 0, 1/120
        assert!(s.c[0].contains(&BigFloat::zero()));
        assert!(s.c[1].contains(&BigFloat::one()));
        assert!(s.c[3]
            .intersect(&Interval::from_ratio_parts(&(-1).into(), &6.into(), p))
            .is_some());
        assert!(c.c[2]
            .intersect(&Interval::from_ratio_parts(&(-1).into(), &2.into(), p))
            .is_some());
    }
}

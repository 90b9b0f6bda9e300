//! The ring spanned by `1`, `eps` and the induced characters `I_w` (w > 0),
//! with the product rules `I_w I_w' = I_{|w+w'|} + I_{|w-w'|}`,
//! `eps I_w = I_w`, `eps^2 = 1`, and `I_0` normalized to `1 + eps` on
//! construction. Carries the epsilon-factor, weight multiset, determinant and
//! motivic-weight calculus used everywhere else.

use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Fourth root of unity `i^k`, stored by the exponent k mod 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FourthRoot(u8);

impl FourthRoot {
    pub const ONE: FourthRoot = FourthRoot(0);
    pub const I: FourthRoot = FourthRoot(1);
    pub const MINUS_ONE: FourthRoot = FourthRoot(2);
    pub const MINUS_I: FourthRoot = FourthRoot(3);

    pub fn i_pow(k: i64) -> FourthRoot {
        FourthRoot(k.rem_euclid(4) as u8)
    }

    pub fn mul(self, other: FourthRoot) -> FourthRoot {
        FourthRoot((self.0 + other.0) % 4)
    }

    pub fn pow(self, e: u32) -> FourthRoot {
        FourthRoot(((self.0 as u32 * (e % 4)) % 4) as u8)
    }

    /// Some(+1/-1) when real, None for +-i.
    pub fn as_sign(self) -> Option<i32> {
        match self.0 {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }
}

impl fmt::Display for FourthRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            0 => "1",
            1 => "i",
            2 => "-1",
            _ => "-i",
        })
    }
}

/// Element `c_one * 1 + c_eps * eps + sum_w c_I(w) * I_w` with integer
/// coefficients. `I_0` never appears as a key.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KInfElement {
    c_one: i64,
    c_eps: i64,
    c_i: BTreeMap<u32, i64>,
}

#[derive(Debug, Error)]
pub enum KInfError {
    #[error("parse error in K-infinity expression at `{0}`")]
    Parse(String),
    #[error("operation requires an effective element, got {0}")]
    NotEffective(String),
}

impl KInfElement {
    pub fn zero() -> Self {
        KInfElement { c_one: 0, c_eps: 0, c_i: BTreeMap::new() }
    }

    pub fn one() -> Self {
        KInfElement { c_one: 1, c_eps: 0, c_i: BTreeMap::new() }
    }

    pub fn eps() -> Self {
        KInfElement { c_one: 0, c_eps: 1, c_i: BTreeMap::new() }
    }

    /// `I_w`; `I_0` is normalized to `1 + eps`.
    pub fn i_w(w: u32) -> Self {
        if w == 0 {
            KInfElement { c_one: 1, c_eps: 1, c_i: BTreeMap::new() }
        } else {
            let mut m = BTreeMap::new();
            m.insert(w, 1);
            KInfElement { c_one: 0, c_eps: 0, c_i: m }
        }
    }

    pub fn coeff_one(&self) -> i64 {
        self.c_one
    }

    pub fn coeff_eps(&self) -> i64 {
        self.c_eps
    }

    pub fn coeff_i(&self, w: u32) -> i64 {
        if w == 0 {
            0
        } else {
            *self.c_i.get(&w).unwrap_or(&0)
        }
    }

    pub fn i_coeffs(&self) -> impl Iterator<Item = (u32, i64)> + '_ {
        self.c_i.iter().map(|(w, c)| (*w, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.c_one == 0 && self.c_eps == 0 && self.c_i.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut c_i = self.c_i.clone();
        for (w, c) in &other.c_i {
            let e = c_i.entry(*w).or_insert(0);
            *e += c;
            if *e == 0 {
                c_i.remove(w);
            }
        }
        KInfElement { c_one: self.c_one + other.c_one, c_eps: self.c_eps + other.c_eps, c_i }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero();
        }
        KInfElement {
            c_one: self.c_one * k,
            c_eps: self.c_eps * k,
            c_i: self.c_i.iter().map(|(w, c)| (*w, c * k)).collect(),
        }
    }

    fn add_iw(&mut self, w: u32, c: i64) {
        if c == 0 {
            return;
        }
        if w == 0 {
            self.c_one += c;
            self.c_eps += c;
        } else {
            let e = self.c_i.entry(w).or_insert(0);
            *e += c;
            if *e == 0 {
                self.c_i.remove(&w);
            }
        }
    }

    /// Ring product, bilinear over the relations.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = KInfElement {
            c_one: self.c_one * other.c_one + self.c_eps * other.c_eps,
            c_eps: self.c_one * other.c_eps + self.c_eps * other.c_one,
            c_i: BTreeMap::new(),
        };
        let scalar_a = self.c_one + self.c_eps;
        let scalar_b = other.c_one + other.c_eps;
        for (w, c) in &other.c_i {
            out.add_iw(*w, scalar_a * c);
        }
        for (w, c) in &self.c_i {
            out.add_iw(*w, scalar_b * c);
        }
        for (w1, c1) in &self.c_i {
            for (w2, c2) in &other.c_i {
                let c = c1 * c2;
                out.add_iw(w1 + w2, c);
                out.add_iw(w1.abs_diff(*w2), c);
            }
        }
        out
    }

    /// All coefficients nonnegative.
    pub fn is_effective(&self) -> bool {
        self.c_one >= 0 && self.c_eps >= 0 && self.c_i.values().all(|c| *c >= 0)
    }

    /// Dimension of the underlying virtual representation.
    pub fn dim(&self) -> i64 {
        self.c_one + self.c_eps + 2 * self.c_i.values().sum::<i64>()
    }

    /// Epsilon factor: multiplicative on sums, `eps(1) = 1`,
    /// `eps(I_w) = i^{w+1}`, and `eps(eps) = i` (forced by `I_0 = 1 + eps`).
    pub fn epsilon_factor(&self) -> FourthRoot {
        let mut k: i64 = self.c_eps;
        for (w, c) in &self.c_i {
            k += (*w as i64 + 1) * c;
        }
        FourthRoot::i_pow(k)
    }

    /// Weight multiset as doubled half-integers: each copy of `I_w`
    /// contributes `+w` and `-w`; each copy of `1` or `eps` contributes `0`.
    /// Requires effectivity.
    pub fn weights_doubled(&self) -> Result<Vec<i64>, KInfError> {
        if !self.is_effective() {
            return Err(KInfError::NotEffective(self.to_string()));
        }
        let mut out = Vec::new();
        for (w, c) in &self.c_i {
            for _ in 0..*c {
                out.push(*w as i64);
                out.push(-(*w as i64));
            }
        }
        for _ in 0..(self.c_one + self.c_eps) {
            out.push(0);
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        Ok(out)
    }

    /// Determinant: `det I_v = eps^{v+1}`, `det eps = eps`; returns true when
    /// the determinant is trivial.
    pub fn det_is_one(&self) -> bool {
        let mut k: i64 = self.c_eps;
        for (w, c) in &self.c_i {
            k += (*w as i64 + 1) * c;
        }
        k % 2 == 0
    }

    /// Largest w with a nonzero `I_w` coefficient (0 if none).
    pub fn motivic_weight(&self) -> u32 {
        self.c_i.keys().next_back().copied().unwrap_or(0)
    }

    /// All stored coefficients at most one.
    pub fn is_multiplicity_free(&self) -> bool {
        self.c_one <= 1 && self.c_eps <= 1 && self.c_i.values().all(|c| *c <= 1)
    }

    /// Self-duality type read off the motivic-weight parity (meaningful for
    /// effective multiplicity-free elements with some weight of multiplicity
    /// one): odd motivic weight is symplectic, even is orthogonal.
    pub fn parity_type(&self) -> DualityType {
        if self.motivic_weight() % 2 == 1 {
            DualityType::Symplectic
        } else {
            DualityType::Orthogonal
        }
    }

    /// Render in the `I22+I16+1` text form.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (w, c) in self.c_i.iter().rev() {
            parts.push(term(*c, &format!("I{w}")));
        }
        if self.c_one != 0 {
            parts.push(term(self.c_one, "1"));
        }
        if self.c_eps != 0 {
            parts.push(term(self.c_eps, "eps"));
        }
        parts.join("+")
    }

    /// Parse the `I22+I16+1` / `2*I23+eps` text form. `I0` is rejected:
    /// write `1+eps` instead.
    pub fn parse(s: &str) -> Result<Self, KInfError> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let mut out = Self::zero();
        for raw in s.split('+') {
            let raw = raw.trim();
            let (mult, body) = match raw.split_once('*') {
                Some((m, b)) => (
                    m.trim()
                        .parse::<i64>()
                        .map_err(|_| KInfError::Parse(raw.into()))?,
                    b.trim(),
                ),
                None => (1, raw),
            };
            let unit = if body == "1" {
                Self::one()
            } else if body == "eps" {
                Self::eps()
            } else if let Some(w) = body.strip_prefix('I') {
                let w: u32 = w.parse().map_err(|_| KInfError::Parse(raw.into()))?;
                if w == 0 {
                    return Err(KInfError::Parse("I0 is disallowed; write 1+eps".into()));
                }
                Self::i_w(w)
            } else {
                return Err(KInfError::Parse(raw.into()));
            };
            out = out.add(&unit.scale(mult));
        }
        Ok(out)
    }
}

fn term(c: i64, unit: &str) -> String {
    if c == 1 {
        unit.to_string()
    } else {
        format!("{c}*{unit}")
    }
}

impl fmt::Display for KInfElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DualityType {
    Symplectic,
    Orthogonal,
    None,
}

impl fmt::Display for DualityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DualityType::Symplectic => "S",
            DualityType::Orthogonal => "O",
            DualityType::None => "N",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iw(w: u32) -> KInfElement {
        KInfElement::i_w(w)
    }

    #[test]
    fn product_relations() {
        // I3 * I5 = I8 + I2
        assert_eq!(iw(3).mul(&iw(5)), iw(8).add(&iw(2)));
        // eps * I7 = I7
        assert_eq!(KInfElement::eps().mul(&iw(7)), iw(7));
        // I2 * I2 = I4 + 1 + eps
        assert_eq!(
            iw(2).mul(&iw(2)),
            iw(4).add(&KInfElement::one()).add(&KInfElement::eps())
        );
        // eps^2 = 1
        assert_eq!(KInfElement::eps().mul(&KInfElement::eps()), KInfElement::one());
    }

    #[test]
    fn epsilon_factor_values() {
        assert_eq!(KInfElement::one().epsilon_factor(), FourthRoot::ONE);
        assert_eq!(iw(21).epsilon_factor(), FourthRoot::MINUS_ONE);
        assert_eq!(KInfElement::eps().epsilon_factor(), FourthRoot::I);
        // eps(I11 * (I22 + eps)) = -1
        let u = iw(11).mul(&iw(22).add(&KInfElement::eps()));
        assert_eq!(u.epsilon_factor(), FourthRoot::MINUS_ONE);
        // eps(Delta_w) = (-1)^{(w+1)/2} for odd w
        for w in [11u32, 15, 17, 19, 21, 23] {
            let expect = if ((w + 1) / 2) % 2 == 0 { FourthRoot::ONE } else { FourthRoot::MINUS_ONE };
            assert_eq!(iw(w).epsilon_factor(), expect, "w = {w}");
        }
    }

    #[test]
    fn weights_det_motivic() {
        let u = iw(24).add(&iw(16)).add(&iw(8)).add(&KInfElement::eps());
        assert!(u.det_is_one());
        assert_eq!(u.motivic_weight(), 24);
        assert_eq!(u.weights_doubled().unwrap(), vec![24, 16, 8, 0, -8, -16, -24]);
        let v = iw(22).add(&KInfElement::eps());
        assert_eq!(v.motivic_weight(), 22);
        assert_eq!(v.parity_type(), DualityType::Orthogonal);
        assert_eq!(iw(1).weights_doubled().unwrap(), vec![1, -1]);
        assert_eq!(iw(11).parity_type(), DualityType::Symplectic);
        assert!(!iw(23).scale(2).add(&iw(7)).is_multiplicity_free());
    }

    #[test]
    fn dim_multiplicative() {
        let u = iw(5).add(&KInfElement::one());
        let v = iw(3).scale(2).add(&KInfElement::eps());
        assert_eq!(u.mul(&v).dim(), u.dim() * v.dim());
    }

    #[test]
    fn ring_axioms_exhaustive_small() {
        // All elements of dim <= 6 supported on {1, eps, I_w <= 8} with
        // coefficients in {0, 1, 2}: associativity and distributivity.
        let mut gens = vec![KInfElement::one(), KInfElement::eps()];
        for w in 1..=8u32 {
            gens.push(iw(w));
        }
        let mut elems = vec![KInfElement::zero()];
        for g in &gens {
            let mut next = Vec::new();
            for e in &elems {
                for c in 0..=2i64 {
                    let cand = e.add(&g.scale(c));
                    if cand.dim() <= 6 {
                        next.push(cand);
                    }
                }
            }
            elems = next;
            elems.sort();
            elems.dedup();
        }
        // Spot-check the axioms on a deterministic subsample (the full
        // triple product over all elements would be enormous).
        let sample: Vec<_> = elems.iter().step_by(37).cloned().collect();
        for a in sample.iter().take(12) {
            for b in sample.iter().take(12) {
                assert_eq!(a.mul(b), b.mul(a));
                for c in sample.iter().take(6) {
                    assert_eq!(a.mul(b).mul(c), a.mul(&b.mul(c)));
                    assert_eq!(a.mul(&b.add(c)), a.mul(b).add(&a.mul(c)));
                }
            }
        }
        // eps and det are multiplicative over sums for all sampled pairs.
        for a in sample.iter().take(20) {
            for b in sample.iter().take(20) {
                assert_eq!(
                    a.add(b).epsilon_factor(),
                    a.epsilon_factor().mul(b.epsilon_factor())
                );
                assert_eq!(a.add(b).det_is_one(), a.det_is_one() == b.det_is_one());
            }
        }
    }

    #[test]
    fn text_round_trip() {
        for s in ["I22+I16+1", "2*I23+I21+eps", "1+eps", "I11", "0", "3*1"] {
            let u = KInfElement::parse(s).unwrap();
            assert_eq!(u.to_text(), s, "canonical form mismatch");
            assert_eq!(KInfElement::parse(&u.to_text()).unwrap(), u);
        }
        assert!(KInfElement::parse("I0").is_err());
        assert!(KInfElement::parse("eps+bogus").is_err());
    }
}

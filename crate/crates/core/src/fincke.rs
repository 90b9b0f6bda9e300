//! Enumeration of all effective elements of the weight-bounded subring
//! inside a norm ball of the explicit-formula form: the plain Fincke-Pohst
//! short-vector recursion specialized to nonnegative coordinates.
//!
//! The Gram matrix of `B(u, v) = J(u v)` on the standard basis is replaced
//! entrywise by rational lower bounds in `10^-6 Z`; on the nonnegative cone
//! this only shrinks the quadratic form, so the enumerated set is a superset,
//! which is then re-tested with certified intervals. Boundary cases whose
//! certified value straddles the bound are included and flagged.

use crate::interval::Interval;
use crate::kinf::{FourthRoot, KInfElement};
use crate::testfn::{jtable, JTable, TestFnError, TestFunctionSpec};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

/// One basis symbol of the weight-bounded subring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisSym {
    I(u32),
    One,
    Eps,
}

impl BasisSym {
    fn element(&self) -> KInfElement {
        match self {
            BasisSym::I(w) => KInfElement::i_w(*w),
            BasisSym::One => KInfElement::one(),
            BasisSym::Eps => KInfElement::eps(),
        }
    }
}

/// Basis of the subring generated by the `I_v` with `0 < v <= w`,
/// `v = w mod 2`, plus `1` and `eps` when `w` is even; heavy weights first.
pub fn basis(wmax: u32) -> Vec<BasisSym> {
    let mut out = Vec::new();
    let mut v = wmax;
    loop {
        if v == 0 {
            break;
        }
        out.push(BasisSym::I(v));
        if v < 2 {
            break;
        }
        v -= 2;
    }
    if wmax % 2 == 0 {
        out.push(BasisSym::One);
        out.push(BasisSym::Eps);
    }
    out
}

#[derive(Debug, Clone)]
pub enum Bound {
    /// `Fhat(i/4pi) / k`.
    Ratio(i64),
    /// An absolute rational bound.
    Absolute(BigRational),
    /// No norm bound; requires the multiplicity-free filter.
    None,
}

#[derive(Debug, Clone, Default)]
pub struct Filters {
    pub contains: Option<u32>,
    pub det_one: bool,
    pub eps_one: bool,
    pub multiplicity_free: bool,
    /// Keep only elements with `dim > min_dim_exclusive`.
    pub min_dim_exclusive: Option<i64>,
}

impl Filters {
    fn accept(&self, u: &KInfElement) -> bool {
        if let Some(w) = self.contains {
            if u.coeff_i(w) < 1 {
                return false;
            }
        }
        if self.det_one && !u.det_is_one() {
            return false;
        }
        if self.eps_one && u.epsilon_factor() != FourthRoot::ONE {
            return false;
        }
        if self.multiplicity_free && !u.is_multiplicity_free() {
            return false;
        }
        if let Some(d) = self.min_dim_exclusive {
            if u.dim() <= d {
                return false;
            }
        }
        true
    }
}

#[derive(Debug, Clone)]
pub struct EnumerationQuery {
    pub wmax: u32,
    pub spec: TestFunctionSpec,
    pub bound: Bound,
    pub filters: Filters,
    pub prec: u32,
}

#[derive(Debug, Error)]
pub enum EnumerationError {
    #[error(transparent)]
    TestFn(#[from] TestFnError),
    #[error("the rational lower-bound Gram matrix is not positive definite; change ell")]
    NotPositiveDefinite,
    #[error("an unbounded enumeration requires the multiplicity-free filter")]
    Unbounded,
    #[error("brute-force oracle refuses wmax > 8 (got {0})")]
    OracleTooLarge(u32),
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    pub elements: Vec<KInfElement>,
    /// Elements whose certified norm straddles the bound (included above).
    pub borderline: Vec<KInfElement>,
}

fn floor_to_millionth(x: &Interval) -> BigRational {
    let (n, d) = x.lo().to_ratio();
    let q = BigRational::new(n, d) * BigRational::from_integer(1_000_000.into());
    BigRational::new(q.floor().to_integer(), 1_000_000.into())
}

/// Interval Gram matrix of `B(u,v) = J(uv)` on the given basis.
pub fn gram_interval(table: &JTable, syms: &[BasisSym]) -> Result<Vec<Vec<Interval>>, TestFnError> {
    let n = syms.len();
    let mut g = vec![vec![Interval::zero(table.prec); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = table.b_inf(&syms[i].element(), &syms[j].element())?;
            g[i][j] = v.clone();
            g[j][i] = v;
        }
    }
    Ok(g)
}

/// Entrywise rational lower bounds (in 10^-6 Z) of the interval Gram.
pub fn gram_lower(g: &[Vec<Interval>]) -> Vec<Vec<BigRational>> {
    g.iter()
        .map(|row| row.iter().map(floor_to_millionth).collect())
        .collect()
}

/// Exact rational Cholesky: `q(x) = sum_i d_i (x_i + sum_{j>i} mu_ij x_j)^2`.
/// Returns None when the matrix is not positive definite.
pub fn rational_cholesky(a: &[Vec<BigRational>]) -> Option<(Vec<BigRational>, Vec<Vec<BigRational>>)> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a.to_vec();
    let mut d = vec![BigRational::zero(); n];
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        if !m[i][i].is_positive() {
            return None;
        }
        d[i] = m[i][i].clone();
        for j in (i + 1)..n {
            mu[i][j] = &m[i][j] / &m[i][i];
        }
        for j in (i + 1)..n {
            for k in j..n {
                let upd = &m[j][k] - &m[i][j] * &m[i][k] / &m[i][i];
                m[j][k] = upd.clone();
                m[k][j] = upd;
            }
        }
    }
    Some((d, mu))
}

// Depth-first Fincke-Pohst over nonnegative integer coordinates, assigning
// the *last* coordinate of `d`/`mu` first. Coordinates arrive reversed so
// that heavy basis symbols are assigned at the top of the tree.
fn fp_recurse(
    d: &[BigRational],
    mu: &[Vec<BigRational>],
    level: isize,
    budget: &BigRational,
    coords: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) {
    if level < 0 {
        out.push(coords.clone());
        return;
    }
    let i = level as usize;
    let n = d.len();
    // Center: c_i = -sum_{j>i} mu_ij x_j; x_j lives at coords[n-1-j].
    let mut center = BigRational::zero();
    for j in (i + 1)..n {
        center -= &mu[i][j] * BigRational::from_integer(coords[n - 1 - j].into());
    }
    // Integer x >= 0 with d_i (x - c)^2 <= budget.
    let c_f = center.to_f64().unwrap_or(0.0);
    let r_f = (budget.to_f64().unwrap_or(0.0) / d[i].to_f64().unwrap_or(1.0)).max(0.0).sqrt();
    let mut x = ((c_f - r_f).floor() as i64 - 1).max(0);
    // Walk right past any exact violations at the left edge.
    loop {
        let dx = BigRational::from_integer(x.into()) - center.clone();
        let cost = &d[i] * &dx * &dx;
        if cost <= *budget {
            break;
        }
        if (dx.is_positive() || dx.is_zero()) && cost > *budget {
            return; // already past the right edge
        }
        x += 1;
    }
    loop {
        let dx = BigRational::from_integer(x.into()) - center.clone();
        let cost = &d[i] * &dx * &dx;
        if cost > *budget {
            if dx.is_positive() {
                break;
            }
        } else {
            coords[n - 1 - i] = x;
            let rem = budget - &cost;
            fp_recurse(d, mu, level - 1, &rem, coords, out);
            coords[n - 1 - i] = 0;
        }
        x += 1;
    }
}

fn element_from_coords(syms: &[BasisSym], coords: &[i64]) -> KInfElement {
    let mut u = KInfElement::zero();
    for (s, c) in syms.iter().zip(coords) {
        if *c != 0 {
            u = u.add(&s.element().scale(*c));
        }
    }
    u
}

fn q_rational(g: &[Vec<BigRational>], x: &[i64]) -> BigRational {
    let mut acc = BigRational::zero();
    for (i, xi) in x.iter().enumerate() {
        if *xi == 0 {
            continue;
        }
        for (j, xj) in x.iter().enumerate() {
            if *xj == 0 {
                continue;
            }
            acc += &g[i][j] * BigRational::from_integer((xi * xj).into());
        }
    }
    acc
}

fn bound_interval(q: &EnumerationQuery, table: &JTable) -> Option<Interval> {
    match &q.bound {
        Bound::Ratio(k) => Some(table.fhat_i4pi.div_i64(*k)),
        Bound::Absolute(b) => Some(Interval::from_rational(b, q.prec)),
        Bound::None => None,
    }
}

fn finish(
    q: &EnumerationQuery,
    table: &JTable,
    candidates: Vec<Vec<i64>>,
    syms: &[BasisSym],
    bound: Option<&Interval>,
) -> Result<Enumeration, EnumerationError> {
    let mut elements = Vec::new();
    let mut borderline = Vec::new();
    let mut seen = BTreeSet::new();
    for coords in candidates {
        let u = element_from_coords(syms, &coords);
        if u.is_zero() || !q.filters.accept(&u) {
            continue;
        }
        if !seen.insert(u.clone()) {
            continue;
        }
        if let Some(b) = bound {
            // Certified re-test of B(u, u) <= bound.
            let val = table.b_inf(&u, &u)?;
            let diff = val.sub(b);
            match diff.lt_zero() {
                crate::interval::Truth::True => elements.push(u),
                crate::interval::Truth::False => {
                    if diff.contains_zero() {
                        // Exactly at the bound is inside (<=).
                        elements.push(u);
                    }
                }
                crate::interval::Truth::Unknown => {
                    elements.push(u.clone());
                    borderline.push(u);
                }
            }
        } else {
            elements.push(u);
        }
    }
    elements.sort();
    borderline.sort();
    Ok(Enumeration { elements, borderline })
}

/// All effective elements within the norm ball, post-filtered.
pub fn enumerate_effective(q: &EnumerationQuery) -> Result<Enumeration, EnumerationError> {
    let syms = basis(q.wmax);
    let table = jtable(&q.spec, 2 * q.wmax.max(1), q.prec)?;
    let bound = bound_interval(q, &table);
    let Some(bound) = bound else {
        if !q.filters.multiplicity_free {
            return Err(EnumerationError::Unbounded);
        }
        // Multiplicity-free coordinates form a finite box.
        let mut candidates = vec![vec![]];
        for _ in &syms {
            let mut next = Vec::new();
            for c in &candidates {
                for v in 0..=1i64 {
                    let mut c2 = c.clone();
                    c2.push(v);
                    next.push(c2);
                }
            }
            candidates = next;
        }
        return finish(q, &table, candidates, &syms, None);
    };
    let g_int = gram_interval(&table, &syms)?;
    let g_lo = gram_lower(&g_int);
    // Assign heavy coordinates first: run the completion on the reversed
    // basis so the deepest recursion level is the lightest symbol.
    let n = syms.len();
    let reversed: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| g_lo[n - 1 - i][n - 1 - j].clone()).collect())
        .collect();
    let (d, mu) = rational_cholesky(&reversed).ok_or(EnumerationError::NotPositiveDefinite)?;
    // Rational upper bound of the certified bound interval.
    let (bn, bd) = bound.hi().to_ratio();
    let budget = BigRational::new(bn, bd);
    let mut coords = vec![0i64; n];
    let mut raw = Vec::new();
    fp_recurse(&d, &mu, n as isize - 1, &budget, &mut coords, &mut raw);
    // The lower-bound form may slightly overshoot: pre-filter exactly, then
    // certify against the true form.
    let kept: Vec<Vec<i64>> = raw
        .into_iter()
        .filter(|x| {
            let rev: Vec<i64> = x.clone();
            q_rational(&g_lo, &rev) <= budget
        })
        .collect();
    finish(q, &table, kept, &syms, Some(&bound))
}

/// Exhaustive coordinate-box oracle for small `wmax` (testing only).
pub fn brute_force_oracle(q: &EnumerationQuery) -> Result<Enumeration, EnumerationError> {
    if q.wmax > 8 {
        return Err(EnumerationError::OracleTooLarge(q.wmax));
    }
    let syms = basis(q.wmax);
    let table = jtable(&q.spec, 2 * q.wmax.max(1), q.prec)?;
    let bound = bound_interval(q, &table);
    let Some(bound) = bound else {
        if !q.filters.multiplicity_free {
            return Err(EnumerationError::Unbounded);
        }
        let mut candidates = vec![vec![]];
        for _ in &syms {
            let mut next = Vec::new();
            for c in &candidates {
                for v in 0..=1i64 {
                    let mut c2 = c.clone();
                    c2.push(v);
                    next.push(c2);
                }
            }
            candidates = next;
        }
        return finish(q, &table, candidates, &syms, None);
    };
    let g_int = gram_interval(&table, &syms)?;
    let g_lo = gram_lower(&g_int);
    let (bn, bd) = bound.hi().to_ratio();
    let budget = BigRational::new(bn, bd);
    // Per-coordinate caps from the diagonal entries: d_ii x^2 <= budget.
    let mut caps = Vec::new();
    for (i, row) in g_lo.iter().enumerate() {
        if !row[i].is_positive() {
            return Err(EnumerationError::NotPositiveDefinite);
        }
        let m = (budget.to_f64().unwrap_or(0.0) / row[i].to_f64().unwrap_or(1.0)).sqrt();
        caps.push(m.floor() as i64 + 1);
    }
    let mut candidates: Vec<Vec<i64>> = vec![vec![]];
    for cap in &caps {
        let mut next = Vec::new();
        for c in &candidates {
            for v in 0..=*cap {
                let mut c2 = c.clone();
                c2.push(v);
                // prune by the partial diagonal cost
                next.push(c2);
            }
        }
        candidates = next;
    }
    let kept: Vec<Vec<i64>> = candidates
        .into_iter()
        .filter(|x| q_rational(&g_lo, x) <= budget)
        .collect();
    finish(q, &table, kept, &syms, Some(&bound))
}

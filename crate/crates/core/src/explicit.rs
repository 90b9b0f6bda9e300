//! The explicit-formula quadratic form: Gram matrices, the cone minimizer,
//! certificate search, and rigorous certificate verification.
//!
//! A quadruple fixes the minimization instance; the bilinear form on the
//! standard basis is
//!
//! `beta(e_i, e_j) = Fhat(i/4pi)/m_i [i=j] - J(U_i U_j)
//!                   - Fhat(0) delta_i delta_j (1 - eps(U_i U_j))/4`.
//!
//! A negative value on the nonnegative cone contradicts the existence of the
//! representations encoded by the entries. Search is heuristic (floating
//! point Jacobi on interval midpoints); only `verify_certificate` confers
//! validity, by a single interval evaluation of `beta(t, t)`.

use crate::catalog::Catalog;
use crate::interval::Interval;
use crate::jacobi;
use crate::kinf::KInfElement;
use crate::testfn::{jtable, JTable, TestFamily, TestFunctionSpec, TestFnError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadrupleEntry {
    pub u: KInfElement,
    pub self_dual: bool,
    pub mult: i64,
    /// Catalog name when the entry references a known parameter.
    pub label: Option<String>,
}

impl QuadrupleEntry {
    pub fn literal(u: KInfElement, self_dual: bool, mult: i64) -> Self {
        QuadrupleEntry { u, self_dual, mult, label: None }
    }
}

/// The minimization instance `(r, U, delta, m)`; entry 0 is by convention the
/// unknown slot in searches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quadruple {
    pub entries: Vec<QuadrupleEntry>,
}

impl Quadruple {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn wmax_needed(&self) -> u32 {
        let mut m = 0u32;
        for a in &self.entries {
            for b in &self.entries {
                m = m.max(a.u.motivic_weight() + b.u.motivic_weight());
            }
        }
        m.max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictKind {
    Proven,
    Refuted,
    Inconclusive,
}

impl std::fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            VerdictKind::Proven => "Proven",
            VerdictKind::Refuted => "Refuted",
            VerdictKind::Inconclusive => "Inconclusive",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub witness: Interval,
}

#[derive(Debug, Error)]
pub enum ExplicitError {
    #[error(transparent)]
    TestFn(#[from] TestFnError),
    #[error("epsilon factor of a self-dual pair is not real (inconsistent input)")]
    EpsilonNotReal,
    #[error("certificate parse error at line {0}: {1}")]
    Parse(usize, String),
    #[error("certificate references unknown catalog entry `{0}`")]
    Resolve(String),
    #[error("certificate coordinates must be nonnegative and not all zero")]
    BadCoordinates,
    #[error("certificate claimed bound must be negative")]
    BadBound,
    #[error("subset index {0} out of range")]
    BadIndex(usize),
}

/// Certified Gram matrix of the quadratic form on the standard basis.
pub fn gram(q: &Quadruple, table: &JTable) -> Result<Vec<Vec<Interval>>, ExplicitError> {
    let n = q.len();
    let prec = table.prec;
    let mut g = vec![vec![Interval::zero(prec); n]; n];
    for i in 0..n {
        for j in i..n {
            let prod = q.entries[i].u.mul(&q.entries[j].u);
            let mut v = table.j_value(&prod)?.neg();
            if i == j {
                v = v.add(&table.fhat_i4pi.div_i64(q.entries[i].mult));
            }
            if q.entries[i].self_dual && q.entries[j].self_dual {
                match prod.epsilon_factor().as_sign() {
                    Some(1) => {}
                    Some(_) => {
                        // (1 - (-1))/4 = 1/2
                        v = v.sub(&table.fhat0.shl(-1));
                    }
                    None => return Err(ExplicitError::EpsilonNotReal),
                }
            }
            g[i][j] = v.clone();
            g[j][i] = v;
        }
    }
    Ok(g)
}

/// Interval evaluation of `beta(t, t)` for rational coordinates supported on
/// the subset `idx`.
pub fn beta_value(
    g: &[Vec<Interval>],
    idx: &[usize],
    t: &[BigRational],
    prec: u32,
) -> Result<Interval, ExplicitError> {
    let mut acc = Interval::zero(prec);
    for (a, &i) in idx.iter().enumerate() {
        if i >= g.len() {
            return Err(ExplicitError::BadIndex(i));
        }
        for (b, &j) in idx.iter().enumerate() {
            let coeff = Interval::from_rational(&(&t[a] * &t[b]), prec);
            acc = acc.add(&g[i][j].mul(&coeff));
        }
    }
    Ok(acc)
}

/// The basic inequality: nonexistence of `m` distinct parameters equal to `u`
/// is certified when `J(u*u) - Fhat(i/4pi)/m` is provably positive.
pub fn basic_bounds(u: &KInfElement, table: &JTable, m: i64) -> Result<Verdict, ExplicitError> {
    let j = table.j_value(&u.mul(u))?;
    let w = j.sub(&table.fhat_i4pi.div_i64(m));
    let kind = match w.gt_zero() {
        crate::interval::Truth::True => VerdictKind::Proven,
        crate::interval::Truth::False => VerdictKind::Refuted,
        crate::interval::Truth::Unknown => VerdictKind::Inconclusive,
    };
    Ok(Verdict { kind, witness: w })
}

// ---------------------------------------------------------------------------
// Heuristic face minimization.

#[derive(Debug, Clone, Copy)]
pub struct SubsetBudget {
    pub max_cardinality: usize,
    pub max_subsets: usize,
}

impl Default for SubsetBudget {
    fn default() -> Self {
        SubsetBudget { max_cardinality: 4, max_subsets: 4096 }
    }
}

#[derive(Debug, Clone)]
pub struct FaceCandidate {
    pub lambda: f64,
    pub subset: Vec<usize>,
    pub t: Vec<f64>,
}

const JACOBI_TOL: f64 = 1e-12;
const FACE_TOL: f64 = 1e-9;

// Enumerate subsets of {0..n-1} by increasing cardinality; when
// `require_zero` is set only subsets containing index 0 are produced.
fn subsets_by_cardinality(n: usize, budget: &SubsetBudget, require_zero: bool) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for card in 1..=budget.max_cardinality.min(n) {
        let mut idx: Vec<usize> = (0..card).collect();
        loop {
            if !require_zero || idx[0] == 0 {
                out.push(idx.clone());
                if out.len() >= budget.max_subsets {
                    return out;
                }
            }
            // next combination
            let mut i = card;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if idx[i] != i + n - card {
                    idx[i] += 1;
                    for j in (i + 1)..card {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
                if i == 0 {
                    idx.clear();
                    break;
                }
            }
            if idx.is_empty() {
                break;
            }
        }
    }
    out
}

fn face_minimum_on_subset(mid: &[Vec<f64>], subset: &[usize]) -> Option<FaceCandidate> {
    let k = subset.len();
    let sub: Vec<Vec<f64>> = subset
        .iter()
        .map(|&i| subset.iter().map(|&j| mid[i][j]).collect())
        .collect();
    let eig = jacobi::jacobi_symmetric(&sub, JACOBI_TOL);
    let (mut best, mut best_vec) = (f64::INFINITY, None);
    for (i, lam) in eig.values.iter().enumerate() {
        if *lam < best {
            best = *lam;
            best_vec = Some(eig.vectors[i].clone());
        }
    }
    let mut v = best_vec?;
    // Sign-normalize on the dominant coordinate and demand the open face.
    let dominant = v.iter().cloned().fold(0.0f64, |a, b| if b.abs() > a.abs() { b } else { a });
    if dominant < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
    if v.iter().any(|x| *x <= FACE_TOL) {
        return None;
    }
    let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in v.iter_mut() {
        *x /= norm;
    }
    Some(FaceCandidate { lambda: best, subset: subset.to_vec(), t: v })
}

/// Heuristic minimizer of `beta(x, x)` over the nonnegative part of the unit
/// sphere: tries faces by increasing cardinality and keeps the most negative
/// eigenvalue whose eigenvector lies in the open face. Returns None when no
/// negative candidate is found.
pub fn minimize(
    q: &Quadruple,
    table: &JTable,
    budget: &SubsetBudget,
    require_zero: bool,
) -> Result<Option<FaceCandidate>, ExplicitError> {
    let g = gram(q, table)?;
    let mid: Vec<Vec<f64>> = g
        .iter()
        .map(|row| row.iter().map(|v| v.to_f64_mid()).collect())
        .collect();
    let mut best: Option<FaceCandidate> = None;
    for subset in subsets_by_cardinality(q.len(), budget, require_zero) {
        if let Some(c) = face_minimum_on_subset(&mid, &subset) {
            if c.lambda < 0.0 && best.as_ref().map_or(true, |b| c.lambda < b.lambda) {
                best = Some(c);
            }
        }
    }
    Ok(best)
}

// ---------------------------------------------------------------------------
// Certificates.

/// A replayable negativity witness `(family, ell, I, t)` for a quadruple.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub quadruple: Quadruple,
    pub spec: TestFunctionSpec,
    /// 1-based indices into the quadruple, sorted.
    pub subset: Vec<usize>,
    /// Nonnegative rational coordinates aligned with `subset`.
    pub t: Vec<BigRational>,
    /// Claimed upper bound on `beta(t, t)`, a negative decimal.
    pub claimed_bound: BigRational,
    /// The bound exactly as written in the file (kept for round-trips).
    pub claimed_text: String,
}

/// Round a floating-point candidate to rationals with denominator 10^6.
pub fn round_coordinates(t: &[f64]) -> Vec<BigRational> {
    t.iter()
        .map(|x| BigRational::new(BigInt::from((x * 1e6).round() as i64), BigInt::from(1_000_000)))
        .collect()
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let neg = s.starts_with('-');
    let body = s.trim_start_matches('-');
    let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
    if ip.is_empty() && fp.is_empty() {
        return None;
    }
    let digits = format!("{}{}", if ip.is_empty() { "0" } else { ip }, fp);
    let num: BigInt = digits.parse().ok()?;
    let num = if neg { -num } else { num };
    Some(BigRational::new(num, BigInt::from(10u32).pow(fp.len() as u32)))
}

fn parse_rational(s: &str) -> Option<BigRational> {
    if let Some((n, d)) = s.split_once('/') {
        Some(BigRational::new(n.parse().ok()?, d.parse().ok()?))
    } else {
        Some(BigRational::from_integer(s.parse().ok()?))
    }
}

fn rational_text(q: &BigRational) -> String {
    if q.denom() == &BigInt::from(1) {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl Certificate {
    /// Canonical text rendering (the on-disk format).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("family {}\n", self.spec.family));
        out.push_str(&format!("ell {}\n", rational_text(&self.spec.ell)));
        for e in &self.quadruple.entries {
            match &e.label {
                Some(name) => {
                    if e.mult == 1 {
                        out.push_str(&format!("entry ref={name}\n"));
                    } else {
                        out.push_str(&format!("entry ref={name} m={}\n", e.mult));
                    }
                }
                None => {
                    out.push_str(&format!(
                        "entry L={} delta={} m={}\n",
                        e.u,
                        if e.self_dual { 1 } else { 0 },
                        e.mult
                    ));
                }
            }
        }
        out.push_str("I");
        for i in &self.subset {
            out.push_str(&format!(" {i}"));
        }
        out.push('\n');
        out.push_str("t");
        for t in &self.t {
            out.push_str(&format!(" {}", rational_text(t)));
        }
        out.push('\n');
        out.push_str(&format!("bound {}\n", self.claimed_text));
        out
    }

    /// Parse the canonical text format, resolving `ref=` entries against the
    /// catalog.
    pub fn parse(text: &str, catalog: &Catalog) -> Result<Self, ExplicitError> {
        let mut family = None;
        let mut ell = None;
        let mut entries = Vec::new();
        let mut subset = None;
        let mut t = None;
        let mut bound = None;
        let mut bound_text = String::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, rest) = line
                .split_once(' ')
                .ok_or_else(|| ExplicitError::Parse(ln + 1, format!("bad line `{line}`")))?;
            match key {
                "family" => {
                    family = Some(match rest.trim() {
                        "F" => TestFamily::F,
                        "G" => TestFamily::G,
                        other => {
                            return Err(ExplicitError::Parse(ln + 1, format!("bad family `{other}`")))
                        }
                    });
                }
                "ell" => {
                    ell = Some(
                        parse_rational(rest.trim())
                            .filter(|q| q.is_positive())
                            .ok_or_else(|| ExplicitError::Parse(ln + 1, "bad ell".into()))?,
                    );
                }
                "entry" => {
                    let mut u = None;
                    let mut name = None;
                    let mut delta = None;
                    let mut mult = 1i64;
                    for tok in rest.split_whitespace() {
                        let (k, v) = tok
                            .split_once('=')
                            .ok_or_else(|| ExplicitError::Parse(ln + 1, format!("bad token `{tok}`")))?;
                        match k {
                            "ref" => name = Some(v.to_string()),
                            "L" => {
                                u = Some(KInfElement::parse(v).map_err(|e| {
                                    ExplicitError::Parse(ln + 1, e.to_string())
                                })?)
                            }
                            "delta" => delta = Some(v == "1"),
                            "m" => {
                                mult = v
                                    .parse()
                                    .map_err(|_| ExplicitError::Parse(ln + 1, "bad m".into()))?
                            }
                            _ => return Err(ExplicitError::Parse(ln + 1, format!("bad key `{k}`"))),
                        }
                    }
                    let entry = match name {
                        Some(name) => {
                            let ce = catalog
                                .get(&name)
                                .map_err(|_| ExplicitError::Resolve(name.clone()))?;
                            QuadrupleEntry {
                                u: ce.l_param.clone(),
                                self_dual: ce.self_dual,
                                mult,
                                label: Some(name),
                            }
                        }
                        None => QuadrupleEntry {
                            u: u.ok_or_else(|| ExplicitError::Parse(ln + 1, "entry needs L or ref".into()))?,
                            self_dual: delta
                                .ok_or_else(|| ExplicitError::Parse(ln + 1, "entry needs delta".into()))?,
                            mult,
                        label: None,
                        },
                    };
                    entries.push(entry);
                }
                "I" => {
                    subset = Some(
                        rest.split_whitespace()
                            .map(|x| x.parse::<usize>())
                            .collect::<Result<Vec<_>, _>>()
                            .map_err(|_| ExplicitError::Parse(ln + 1, "bad subset".into()))?,
                    );
                }
                "t" => {
                    t = Some(
                        rest.split_whitespace()
                            .map(|x| parse_rational(x).ok_or(()))
                            .collect::<Result<Vec<_>, _>>()
                            .map_err(|_| ExplicitError::Parse(ln + 1, "bad coordinates".into()))?,
                    );
                }
                "bound" => {
                    bound_text = rest.trim().to_string();
                    bound = Some(
                        parse_decimal(&bound_text)
                            .ok_or_else(|| ExplicitError::Parse(ln + 1, "bad bound".into()))?,
                    );
                }
                _ => return Err(ExplicitError::Parse(ln + 1, format!("unknown key `{key}`"))),
            }
        }
        let spec = TestFunctionSpec::new(
            family.ok_or_else(|| ExplicitError::Parse(0, "missing family".into()))?,
            ell.ok_or_else(|| ExplicitError::Parse(0, "missing ell".into()))?,
        );
        Ok(Certificate {
            quadruple: Quadruple { entries },
            spec,
            subset: subset.ok_or_else(|| ExplicitError::Parse(0, "missing I".into()))?,
            t: t.ok_or_else(|| ExplicitError::Parse(0, "missing t".into()))?,
            claimed_bound: bound.ok_or_else(|| ExplicitError::Parse(0, "missing bound".into()))?,
            claimed_text: bound_text,
        })
    }
}

/// Replay a certificate: one interval evaluation of `beta(t, t)` decides.
/// Proven requires the whole witness interval to sit at or below the claimed
/// (negative) bound; a witness provably above the bound refutes it; anything
/// else is inconclusive (retry at higher precision).
pub fn verify_certificate(cert: &Certificate, prec: u32) -> Result<Verdict, ExplicitError> {
    if cert.t.iter().any(|x| x.is_negative()) || cert.t.iter().all(|x| x.is_zero()) {
        return Err(ExplicitError::BadCoordinates);
    }
    if !cert.claimed_bound.is_negative() {
        return Err(ExplicitError::BadBound);
    }
    if cert.subset.len() != cert.t.len() || cert.subset.is_empty() {
        return Err(ExplicitError::BadCoordinates);
    }
    let table = jtable(&cert.spec, cert.quadruple.wmax_needed(), prec)?;
    let g = gram(&cert.quadruple, &table)?;
    let idx: Vec<usize> = cert
        .subset
        .iter()
        .map(|i| i.checked_sub(1).ok_or(ExplicitError::BadIndex(0)))
        .collect::<Result<_, _>>()?;
    let witness = beta_value(&g, &idx, &cert.t, prec)?;
    let bound = Interval::from_rational(&cert.claimed_bound, prec);
    let kind = match witness.lt(&bound) {
        crate::interval::Truth::True => VerdictKind::Proven,
        _ if witness.hi().cmp_value(bound.lo()) != std::cmp::Ordering::Greater => VerdictKind::Proven,
        _ if witness.lo().cmp_value(bound.hi()) == std::cmp::Ordering::Greater => VerdictKind::Refuted,
        _ => VerdictKind::Inconclusive,
    };
    Ok(Verdict { kind, witness })
}

// ---------------------------------------------------------------------------
// Search.

/// Collapse known parameters with equal `(L, sd)` into multiplicity slots.
pub fn collapse_known(known: &[(KInfElement, bool, Option<String>)]) -> Vec<QuadrupleEntry> {
    let mut out: Vec<QuadrupleEntry> = Vec::new();
    for (u, sd, label) in known {
        if let Some(e) = out.iter_mut().find(|e| &e.u == u && e.self_dual == *sd) {
            e.mult += 1;
            if e.label.is_some() && e.label != *label {
                // Distinct names sharing one Archimedean parameter collapse
                // into an anonymous multiplicity slot.
                e.label = None;
            }
        } else {
            out.push(QuadrupleEntry { u: u.clone(), self_dual: *sd, mult: 1, label: label.clone() });
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub grid: Vec<BigRational>,
    pub budget: SubsetBudget,
    pub family: TestFamily,
    pub prec: u32,
}

/// Standard grid `[1/2, 20] cap (1/4)Z`.
pub fn default_grid() -> Vec<BigRational> {
    (2..=80).map(|k| BigRational::new(k.into(), 4.into())).collect()
}

/// Search for a verified negativity certificate for the instance
/// `(u, delta, m)` against the collapsed known entries. Every returned
/// certificate has already passed `verify_certificate`.
pub fn search(
    u: &KInfElement,
    delta: bool,
    m: i64,
    known: &[QuadrupleEntry],
    cfg: &SearchConfig,
) -> Result<Option<Certificate>, ExplicitError> {
    let mut entries = vec![QuadrupleEntry::literal(u.clone(), delta, m)];
    entries.extend_from_slice(known);
    let q = Quadruple { entries };
    let wmax = q.wmax_needed();
    for ell in &cfg.grid {
        let spec = TestFunctionSpec::new(cfg.family, ell.clone());
        let table = jtable(&spec, wmax, cfg.prec)?;
        let Some(cand) = minimize(&q, &table, &cfg.budget, true)? else {
            continue;
        };
        let t = round_coordinates(&cand.t);
        if t.iter().any(|x| !x.is_positive()) {
            continue;
        }
        // Claim a bound slightly above the heuristic value.
        let slack = BigRational::new(1.into(), 1000.into());
        let claimed = BigRational::new(
            BigInt::from((cand.lambda * 1e6).floor() as i64),
            BigInt::from(1_000_000),
        ) + slack;
        if !claimed.is_negative() {
            continue;
        }
        let cert = Certificate {
            quadruple: q.clone(),
            spec,
            subset: cand.subset.iter().map(|i| i + 1).collect(),
            t,
            claimed_bound: claimed.clone(),
            claimed_text: format!("{}", decimal_text(&claimed)),
        };
        if let VerdictKind::Proven = verify_certificate(&cert, cfg.prec)?.kind {
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

// Render an exact rational with denominator 10^k as a plain decimal.
fn decimal_text(q: &BigRational) -> String {
    let mut den = q.denom().clone();
    let mut k = 0u32;
    while (&den % BigInt::from(10)).is_zero() {
        den /= BigInt::from(10);
        k += 1;
    }
    if den != BigInt::from(1) {
        // Not a power of ten; fall back to p/q (parse_decimal won't see it,
        // but search always produces powers of ten).
        return rational_text(q);
    }
    let neg = q.is_negative();
    let num = q.numer().abs().to_string();
    let digits = if num.len() <= k as usize {
        format!("0.{}{}", "0".repeat(k as usize - num.len()), num)
    } else if k == 0 {
        num
    } else {
        let (ip, fp) = num.split_at(num.len() - k as usize);
        format!("{ip}.{fp}")
    };
    if neg {
        format!("-{digits}")
    } else {
        digits
    }
}

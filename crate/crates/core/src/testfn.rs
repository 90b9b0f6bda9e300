//! The explicit-formula functionals `J_F`, `F^(0)` and `F^(i/4pi)` for the
//! two Odlyzko test-function families, as certified intervals.
//!
//! Family F is `F_l(x) = g(x/l) / cosh(x/2)`, family G is `G_l(x) = g(x/l)`,
//! where `g` is twice the convolution square of `x -> cos(pi x) 1_{|x|<=1/2}`;
//! on `[0, 1]` it has the closed form `g(u) = (1-u) cos(pi u) + sin(pi u)/pi`
//! (verified against the convolution in the tests). F satisfies the
//! positivity hypothesis unconditionally; G only has `F, F^ >= 0` on the real
//! line and is meaningful under GRH.
//!
//! The J-values use the splitting
//!
//! `J(I_w) = log 2pi - psi(b) + int_0^l (F(x)-1) e^{-bx}/(1-e^{-x}) dx - T(b, l)`
//!
//! with `b = (1+w)/2` and `T(b, l) = int_l^inf e^{-bx}/(1-e^{-x}) dx`, which
//! follows from Gauss's integral for the digamma function; and
//!
//! `J(1 - eps) = int_0^l F(x) e^{-x/2}/(1+e^{-x}) dx`.
//!
//! For family G these are intersected with the independent closed forms in
//! terms of psi and psi' at `b + i pi / l`; disjoint enclosures abort.

use crate::bigfloat::{BigFloat, Dir};
use crate::boxc::BoxC;
use crate::interval::Interval;
use crate::jet::Jet;
use crate::kernels;
use crate::kinf::KInfElement;
use crate::quad::{self, Integrand};
use crate::special;
use crate::transcend;
use num_bigint::BigInt;
use num_rational::BigRational;
use once_cell::sync::Lazy;
use std::collections::{BinaryHeap, HashMap};
use std::sync::{Arc, Mutex};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TestFamily {
    /// Unconditional family `F_l`.
    F,
    /// GRH family `G_l`.
    G,
}

impl std::fmt::Display for TestFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TestFamily::F => "F",
            TestFamily::G => "G",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TestFunctionSpec {
    pub family: TestFamily,
    /// The support parameter, an exact positive rational.
    pub ell: BigRational,
}

impl TestFunctionSpec {
    pub fn new(family: TestFamily, ell: BigRational) -> Self {
        assert!(ell.numer().sign() == num_bigint::Sign::Plus, "ell must be positive");
        TestFunctionSpec { family, ell }
    }

    pub fn grh_only(&self) -> bool {
        self.family == TestFamily::G
    }
}

#[derive(Debug, Error)]
pub enum TestFnError {
    #[error("dual-route enclosures are disjoint for {0} (internal inconsistency)")]
    RouteMismatch(String),
    #[error("requested I_{0} exceeds table range {1}")]
    OutOfRange(u32, u32),
    #[error(transparent)]
    Special(#[from] special::SpecialError),
}

/// Certified values of the linear functional `J` on the basis elements, plus
/// `F^(0)` and `F^(i/4pi)`.
#[derive(Debug, Clone)]
pub struct JTable {
    pub spec: TestFunctionSpec,
    pub wmax: u32,
    pub prec: u32,
    j_iw: Vec<Interval>,
    j_one: Interval,
    j_eps: Interval,
    pub fhat0: Interval,
    pub fhat_i4pi: Interval,
}

impl JTable {
    pub fn j_i(&self, w: u32) -> Result<&Interval, TestFnError> {
        if w == 0 || w > self.wmax {
            return Err(TestFnError::OutOfRange(w, self.wmax));
        }
        Ok(&self.j_iw[w as usize])
    }

    pub fn j_one(&self) -> &Interval {
        &self.j_one
    }

    pub fn j_eps(&self) -> &Interval {
        &self.j_eps
    }

    /// `J(I_0)` (equals `j_one + j_eps` by construction).
    pub fn j_i0(&self) -> &Interval {
        &self.j_iw[0]
    }

    /// Linear extension of `J` to the whole ring.
    pub fn j_value(&self, u: &KInfElement) -> Result<Interval, TestFnError> {
        let mut out = self
            .j_one
            .mul_i64(u.coeff_one())
            .add(&self.j_eps.mul_i64(u.coeff_eps()));
        for (w, c) in u.i_coeffs() {
            out = out.add(&self.j_i(w)?.mul_i64(c));
        }
        Ok(out)
    }

    /// `B_inf(u, v) = J(u * v)`.
    pub fn b_inf(&self, u: &KInfElement, v: &KInfElement) -> Result<Interval, TestFnError> {
        self.j_value(&u.mul(v))
    }
}

// ---------------------------------------------------------------------------
// Test-function jets.

fn ell_interval(spec: &TestFunctionSpec, prec: u32) -> Interval {
    Interval::from_rational(&spec.ell, prec)
}

// g(u) = (1-u) cos(pi u) + sin(pi u)/pi on a jet with values in [0, 1].
fn g_jet(u: &Jet, prec: u32) -> Jet {
    let pi = transcend::pi(prec);
    let (s, c) = u.scale(&pi).sin_cos();
    let one_minus = u.neg().add_scalar(&Interval::one(prec));
    one_minus.mul(&c).add(&s.scale(&pi.recip()))
}

// Jet of the test function itself at base x (assumed within [0, l]).
fn testfn_jet(spec: &TestFunctionSpec, x: &Jet, prec: u32) -> Jet {
    let ell = ell_interval(spec, prec);
    let u = x.scale(&ell.recip());
    let g = g_jet(&u, prec);
    match spec.family {
        TestFamily::G => g,
        TestFamily::F => {
            // sech(x/2) = 2 e^{-x/2} / (1 + e^{-x})
            let em_half = x.scale(&Interval::from_ratio_parts(&(-1).into(), &2.into(), prec)).exp();
            let em = em_half.mul(&em_half);
            let sech = em_half
                .scale(&Interval::from_i64(2, prec))
                .div(&em.add_scalar(&Interval::one(prec)));
            g.mul(&sech)
        }
    }
}

// Interval evaluation of F'(x) over [0, h]; used for the crude panel at the
// removable singularity of (F-1)/(1-e^{-x}).
fn testfn_derivative_range(spec: &TestFunctionSpec, x: &Interval, prec: u32) -> Interval {
    let ell = ell_interval(spec, prec);
    let u = x.div(&ell);
    let pi = transcend::pi(prec);
    let (s, c) = transcend::sin_cos(&u.mul(&pi));
    let one_minus = Interval::one(prec).sub(&u);
    // g'(u) = -pi (1-u) sin(pi u)
    let gp = one_minus.mul(&s).mul(&pi).neg();
    let g = one_minus.mul(&c).add(&s.div(&pi));
    match spec.family {
        TestFamily::G => gp.div(&ell),
        TestFamily::F => {
            let em_half = transcend::exp(&x.shl(-1).neg());
            let em = em_half.sqr();
            let denom = Interval::one(prec).add(&em);
            let sech = em_half.shl(1).div(&denom);
            // tanh(x/2) = (1 - e^{-x}) / (1 + e^{-x})
            let tanh = Interval::one(prec).sub(&em).div(&denom);
            gp.div(&ell).mul(&sech).sub(&g.mul(&sech).mul(&tanh).shl(-1))
        }
    }
}

/// The test function as a plain integrand (for `F^(0)` and the examples).
pub struct TestFnIntegrand<'a>(pub &'a TestFunctionSpec);

impl Integrand for TestFnIntegrand<'_> {
    fn jet(&self, x: &Interval, order: usize, prec: u32) -> Jet {
        testfn_jet(self.0, &Jet::variable(x.with_prec(prec), order), prec)
    }
}

// F(x) e^{-x/2} / (1 + e^{-x}), the J(1-eps) integrand.
struct OneMinusEpsIntegrand<'a>(&'a TestFunctionSpec);

impl Integrand for OneMinusEpsIntegrand<'_> {
    fn jet(&self, x: &Interval, order: usize, prec: u32) -> Jet {
        let xj = Jet::variable(x.with_prec(prec), order);
        let f = testfn_jet(self.0, &xj, prec);
        let em_half = xj
            .scale(&Interval::from_ratio_parts(&(-1).into(), &2.into(), prec))
            .exp();
        let em = em_half.mul(&em_half);
        f.mul(&em_half).div(&em.add_scalar(&Interval::one(prec)))
    }
}

// ---------------------------------------------------------------------------
// Shared-prefactor panels for the family of kernel integrals over b.

#[derive(Clone)]
struct PanelJets {
    // (F(x)-1) / (1 - e^{-x}) at the midpoint and over the whole panel.
    point: Jet,
    wide: Jet,
}

struct KernelPanels {
    spec: TestFunctionSpec,
    prec: u32,
    order: usize,
    cache: Mutex<HashMap<(BigFloat, BigFloat), Arc<PanelJets>>>,
}

impl KernelPanels {
    fn prefactor_jet(&self, x: &Interval) -> Jet {
        let xj = Jet::variable(x.with_prec(self.prec), self.order);
        let f = testfn_jet(&self.spec, &xj, self.prec);
        let em = xj.neg().exp();
        let denom = em.neg().add_scalar(&Interval::one(self.prec));
        f.add_scalar(&Interval::from_i64(-1, self.prec)).div(&denom)
    }

    fn panel(&self, a: &BigFloat, b: &BigFloat) -> Arc<PanelJets> {
        debug_assert!(!a.is_negative() && a.cmp_value(b) == std::cmp::Ordering::Less,
            "bad panel [{}, {}]", a.to_f64(), b.to_f64());
        let key = (a.clone(), b.clone());
        if let Some(p) = self.cache.lock().unwrap().get(&key) {
            return p.clone();
        }
        let m = a.add_exact(b).shl(-1);
        let jets = Arc::new(PanelJets {
            point: self.prefactor_jet(&Interval::point(m, self.prec)),
            wide: self.prefactor_jet(&Interval::new(a.clone(), b.clone(), self.prec)),
        });
        self.cache.lock().unwrap().insert(key, jets.clone());
        jets
    }
}

// e^{-b x} jet at base (interval) point x0: coefficients e^{-b x0} (-b)^j/j!.
fn exp_decay_jet(b: &Interval, x0: &Interval, order: usize, prec: u32) -> Jet {
    let mut c = Vec::with_capacity(order + 1);
    c.push(transcend::exp(&b.mul(x0).neg()));
    for j in 1..=order {
        let prev = c[j - 1].clone();
        c.push(prev.mul(&b.neg()).div_i64(j as i64));
    }
    Jet { c }
}

struct HeapItem(f64, usize);
impl PartialEq for HeapItem {
    fn eq(&self, o: &Self) -> bool {
        self.0 == o.0
    }
}
impl Eq for HeapItem {}
impl PartialOrd for HeapItem {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for HeapItem {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.0.partial_cmp(&o.0).unwrap_or(std::cmp::Ordering::Equal)
    }
}

// One panel of the per-b adaptive integration.
struct BPanel {
    a: BigFloat,
    b: BigFloat,
    value: Interval,
    err: BigFloat,
}

fn integrate_kernel_panel(panels: &KernelPanels, bexp: &Interval, a: &BigFloat, bb: &BigFloat) -> BPanel {
    let prec = panels.prec;
    let order = panels.order;
    let jets = panels.panel(a, bb);
    let m = a.add_exact(bb).shl(-1);
    let r = bb.sub_exact(a).shl(-1);
    let rp = Interval::point(r, prec);
    let exp_point = exp_decay_jet(bexp, &Interval::point(m, prec), order, prec);
    let acc = jets.point.integrate_product_sym(&exp_point, &rp, order);
    let wide_coeff = {
        let x = Interval::new(a.clone(), bb.clone(), prec);
        jets.wide.conv_coeff(&exp_decay_jet(bexp, &x, order, prec), order)
    };
    let err = wide_coeff
        .mag()
        .mul_exact(&rp.mag().powi_exact(order as u32 + 1))
        .shl(1)
        .div(&BigFloat::from_i64(order as i64 + 1), prec, Dir::Up);
    BPanel { a: a.clone(), b: bb.clone(), value: acc.widen(&err), err }
}

// Crude enclosure of int_0^h (F(x)-1) e^{-bx} / (1-e^{-x}) dx via the mean
// value theorem: (F(x)-1)/x lies in the range of F' over [0, h], and
// x/(1-e^{-x}) lies in [1, h/(1-e^{-h})].
fn crude_head(spec: &TestFunctionSpec, bexp: &Interval, h: &BigFloat, prec: u32) -> Interval {
    let hx = Interval::new(BigFloat::zero(), h.clone(), prec);
    let d = testfn_derivative_range(spec, &hx, prec);
    let e_lo = transcend::exp(&bexp.mul(&Interval::point(h.clone(), prec)).neg());
    let e = e_lo.hull(&Interval::one(prec));
    let hpt = Interval::point(h.clone(), prec);
    let w_hi = hpt.div(&Interval::one(prec).sub(&transcend::exp(&hpt.neg())));
    let w = Interval::one(prec).hull(&w_hi);
    d.mul(&e).mul(&w).mul(&hpt).hull(&Interval::zero(prec))
}

// Adaptive integral of (F-1) e^{-bx}/(1-e^{-x}) over [0, l_lo] for one b.
fn kernel_integral(
    panels: &KernelPanels,
    bexp: &Interval,
    ell_lo: &BigFloat,
    target: &BigFloat,
    max_panels: usize,
) -> Interval {
    let prec = panels.prec;
    // First-panel width: shrink until the crude bound is within budget.
    let mut h = BigFloat::from_parts(BigInt::from(1), -8);
    let mut head;
    loop {
        head = crude_head(&panels.spec, bexp, &h, prec);
        if head.width().cmp_value(&target.shl(-2)) != std::cmp::Ordering::Greater
            || h.exponent() < -(prec as i64)
        {
            break;
        }
        h = h.shl(-4);
    }
    if h.cmp_value(ell_lo) == std::cmp::Ordering::Greater {
        h = ell_lo.shl(-4);
        head = crude_head(&panels.spec, bexp, &h, prec);
    }
    let first = integrate_kernel_panel(panels, bexp, &h, ell_lo);
    let mut total_err = first.err.clone();
    let mut list = vec![first];
    let mut heap = BinaryHeap::new();
    heap.push(HeapItem(list[0].err.to_f64(), 0));
    while total_err.cmp_value(target) == std::cmp::Ordering::Greater && list.len() < max_panels {
        let Some(HeapItem(_, idx)) = heap.pop() else { break };
        let (pa, pb) = (list[idx].a.clone(), list[idx].b.clone());
        let m = pa.add_exact(&pb).shl(-1);
        let left = integrate_kernel_panel(panels, bexp, &pa, &m);
        let right = integrate_kernel_panel(panels, bexp, &m, &pb);
        total_err = total_err
            .sub_exact(&list[idx].err)
            .add_exact(&left.err)
            .add_exact(&right.err);
        heap.push(HeapItem(left.err.to_f64(), idx));
        heap.push(HeapItem(right.err.to_f64(), list.len()));
        list[idx] = left;
        list.push(right);
    }
    let mut out = head;
    for p in &list {
        out = out.add(&p.value);
    }
    out
}

// Contribution of the non-dyadic sliver [l_lo, l] for a generic integrand
// jet evaluator: width * hull(range, 0).
fn sliver(range: Interval, lo: &BigFloat, hi: &BigFloat, prec: u32) -> Interval {
    let w = Interval::new(BigFloat::zero(), hi.sub_exact(lo), prec);
    range.mul(&w).hull(&Interval::zero(prec))
}

// ---------------------------------------------------------------------------
// Table construction.

fn quad_target(prec: u32) -> BigFloat {
    BigFloat::from_parts(BigInt::from(1), -((prec as i64) / 2 + 16))
}

const QUAD_ORDER: usize = 20;
const MAX_PANELS: usize = 20_000;

/// Closed forms for the GRH family.
mod g_closed {
    use super::*;

    // psi-based value of J_G(I_w).
    pub fn j_iw(spec: &TestFunctionSpec, w: u32, prec: u32) -> Result<Interval, TestFnError> {
        let b = Interval::from_ratio_parts(&BigInt::from(1 + w as i64), &BigInt::from(2), prec);
        let ell = ell_interval(spec, prec);
        let pi_over_ell = transcend::pi(prec).div(&ell);
        let z = BoxC::new(b.clone(), pi_over_ell);
        let psi = special::digamma(&z)?;
        let psi1 = special::trigamma(&z)?;
        let log2pi = transcend::ln(&transcend::pi(prec).shl(1));
        let s1 = kernels::kernel_series_s1(&b, &ell);
        Ok(log2pi
            .sub(&psi.re)
            .add(&psi.im.div(&transcend::pi(prec)))
            .sub(&psi1.re.div(&ell))
            .add(&s1))
    }

    // psi-based value of J_G(1 - eps).
    pub fn j_one_minus_eps(spec: &TestFunctionSpec, prec: u32) -> Result<Interval, TestFnError> {
        let ell = ell_interval(spec, prec);
        let half = Interval::one(prec).shl(-1);
        let z = BoxC::new(half, transcend::pi(prec).div(&ell));
        let phi = special::phi(&z)?;
        let phi1 = special::phi_prime(&z)?;
        let s2 = kernels::kernel_series_s2(&ell);
        Ok(phi
            .re
            .sub(&phi.im.div(&transcend::pi(prec)))
            .add(&phi1.re.div(&ell))
            .add(&s2))
    }

    // G^(i/4pi) = 4 pi^2 l (1 + cosh(l/2)) / (l^2/4 + pi^2)^2.
    pub fn fhat_i4pi(spec: &TestFunctionSpec, prec: u32) -> Interval {
        let ell = ell_interval(spec, prec);
        let pi2 = transcend::pi(prec).sqr();
        let num = pi2
            .shl(2)
            .mul(&ell)
            .mul(&Interval::one(prec).add(&transcend::cosh(&ell.shl(-1))));
        let den = ell.sqr().shl(-2).add(&pi2).sqr();
        num.div(&den)
    }
}

fn eight_ell_over_pi2(spec: &TestFunctionSpec, prec: u32) -> Interval {
    ell_interval(spec, prec)
        .shl(3)
        .div(&transcend::pi(prec).sqr())
}

fn intersect_routes(a: Interval, b: Interval, what: &str) -> Result<Interval, TestFnError> {
    a.intersect(&b)
        .ok_or_else(|| TestFnError::RouteMismatch(format!("{what}: {a} vs {b}")))
}

/// Build the table of certified J-values for `I_w`, `w <= wmax`, plus the
/// one/eps split and the two Fourier values.
pub fn build_jtable(spec: &TestFunctionSpec, wmax: u32, prec: u32) -> Result<JTable, TestFnError> {
    let work = prec + 16;
    let target = quad_target(prec);
    let ell_lo = BigFloat::from_ratio(spec.ell.numer(), spec.ell.denom(), work, Dir::Down);
    let ell_hi = BigFloat::from_ratio(spec.ell.numer(), spec.ell.denom(), work, Dir::Up);
    let panels = KernelPanels {
        spec: spec.clone(),
        prec: work,
        order: QUAD_ORDER,
        cache: Mutex::new(HashMap::new()),
    };
    let log2pi = transcend::ln(&transcend::pi(work).shl(1));
    let ell = ell_interval(spec, work);

    let j_for = |w: u32| -> Result<Interval, TestFnError> {
        let b = Interval::from_ratio_parts(&BigInt::from(1 + w as i64), &BigInt::from(2), work);
        let psi_b = special::digamma_real(&b)?;
        let integral = kernel_integral(&panels, &b, &ell_lo, &target, MAX_PANELS);
        // Sliver [l_lo, l]: |F-1| <= 1 there and the rest of the integrand is
        // bounded by e^{-b l_lo}/(1-e^{-l_lo}).
        let bound = transcend::exp(&b.mul(&Interval::point(ell_lo.clone(), work)).neg())
            .div(&Interval::one(work).sub(&transcend::exp(&Interval::point(ell_lo.clone(), work).neg())));
        let sl = sliver(bound.hull(&bound.neg()), &ell_lo, &ell_hi, work);
        let tail = kernels::j_tail(&b, &ell);
        let kernel_route = log2pi.sub(&psi_b).add(&integral).add(&sl).sub(&tail);
        match spec.family {
            TestFamily::F => Ok(kernel_route),
            TestFamily::G => {
                let closed = g_closed::j_iw(spec, w, work)?;
                intersect_routes(kernel_route, closed, &format!("J(I_{w}) at ell={}", spec.ell))
            }
        }
    };

    use rayon::prelude::*;
    let j_iw: Vec<Interval> = (0..=wmax)
        .into_par_iter()
        .map(|w| j_for(w))
        .collect::<Result<_, _>>()?;

    // J(1 - eps) by quadrature (plus G closed form).
    let ome = OneMinusEpsIntegrand(spec);
    let mut j_1me = quad::integrate(&ome, &BigFloat::zero(), &ell_lo, work, &target, MAX_PANELS, QUAD_ORDER).value;
    {
        let x = Interval::new(ell_lo.clone(), ell_hi.clone(), work);
        let range = ome.jet(&x, 0, work).c[0].clone();
        j_1me = j_1me.add(&sliver(range, &ell_lo, &ell_hi, work));
    }
    let j_1me = match spec.family {
        TestFamily::F => j_1me,
        TestFamily::G => intersect_routes(
            j_1me,
            g_closed::j_one_minus_eps(spec, work)?,
            &format!("J(1-eps) at ell={}", spec.ell),
        )?,
    };

    let j_one = j_iw[0].add(&j_1me).shl(-1);
    let j_eps = j_iw[0].sub(&j_1me).shl(-1);

    // F^(0) = 2 int_0^l F(x) dx; for G also the closed form 8 l / pi^2.
    let plain = TestFnIntegrand(spec);
    let mut fhat0 = quad::integrate(&plain, &BigFloat::zero(), &ell_lo, work, &target, MAX_PANELS, QUAD_ORDER)
        .value;
    {
        let x = Interval::new(ell_lo.clone(), ell_hi.clone(), work);
        let range = plain.jet(&x, 0, work).c[0].clone();
        fhat0 = fhat0.add(&sliver(range, &ell_lo, &ell_hi, work));
    }
    let fhat0 = fhat0.shl(1);
    let fhat0 = match spec.family {
        TestFamily::F => fhat0,
        TestFamily::G => intersect_routes(
            fhat0,
            eight_ell_over_pi2(spec, work),
            &format!("Fhat(0) at ell={}", spec.ell),
        )?,
    };

    let fhat_i4pi = match spec.family {
        TestFamily::F => eight_ell_over_pi2(spec, work),
        TestFamily::G => g_closed::fhat_i4pi(spec, work),
    };

    Ok(JTable {
        spec: spec.clone(),
        wmax,
        prec,
        j_iw: j_iw.into_iter().map(|v| v.with_prec(prec)).collect(),
        j_one: j_one.with_prec(prec),
        j_eps: j_eps.with_prec(prec),
        fhat0: fhat0.with_prec(prec),
        fhat_i4pi: fhat_i4pi.with_prec(prec),
    })
}

// ---------------------------------------------------------------------------
// Process-wide table cache (tables are immutable once built).

type TableKey = (TestFamily, BigRational, u32, u32);

static TABLE_CACHE: Lazy<Mutex<HashMap<TableKey, Arc<JTable>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Cached table lookup; builds (and caches) on first use. Tables with a
/// larger `wmax` satisfy smaller requests.
pub fn jtable(spec: &TestFunctionSpec, wmax: u32, prec: u32) -> Result<Arc<JTable>, TestFnError> {
    {
        let cache = TABLE_CACHE.lock().unwrap();
        for ((fam, ell, w, p), t) in cache.iter() {
            if *fam == spec.family && ell == &spec.ell && *w >= wmax && *p == prec {
                return Ok(t.clone());
            }
        }
    }
    let t = Arc::new(build_jtable(spec, wmax, prec)?);
    TABLE_CACHE
        .lock()
        .unwrap()
        .insert((spec.family, spec.ell.clone(), wmax, prec), t.clone());
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(fam: TestFamily, num: i64, den: i64) -> TestFunctionSpec {
        TestFunctionSpec::new(fam, BigRational::new(num.into(), den.into()))
    }

    #[test]
    fn g_closed_form_square_against_convolution() {
        // g(u) = (1-u) cos(pi u) + sin(pi u)/pi must equal twice the
        // convolution square of c(t) = cos(pi t) 1_{|t|<=1/2} at sample
        // points: g(u) = 2 int_{u-1/2}^{1/2} c(t) c(u-t) dt for 0 <= u <= 1.
        struct Conv {
            u: BigRational,
        }
        impl Integrand for Conv {
            fn jet(&self, x: &Interval, order: usize, prec: u32) -> Jet {
                let pi = transcend::pi(prec);
                let t = Jet::variable(x.with_prec(prec), order);
                let ct = t.scale(&pi).sin_cos().1;
                let u = Interval::from_rational(&self.u, prec);
                let cut = t.neg().add_scalar(&u).scale(&pi).sin_cos().1;
                ct.mul(&cut)
            }
        }
        let prec = 96u32;
        for (num, den) in [(1i64, 4i64), (1, 2), (3, 4), (1, 3)] {
            let u = BigRational::new(num.into(), den.into());
            let a = Interval::from_rational(&(u.clone() - BigRational::new(1.into(), 2.into())), prec);
            let half = BigFloat::one().shl(-1);
            let r = quad::integrate(
                &Conv { u: u.clone() },
                a.lo(),
                &half,
                prec,
                &BigFloat::from_parts(1.into(), -70),
                512,
                10,
            );
            // The dyadic lower endpoint shifts the integral by at most
            // width * max|c c| <= width.
            let conv2 = r.value.shl(1).widen(&BigFloat::from_parts(1.into(), -90));
            let uu = Interval::from_rational(&u, prec);
            let pi = transcend::pi(prec);
            let g = Interval::one(prec)
                .sub(&uu)
                .mul(&transcend::cos(&uu.mul(&pi)))
                .add(&transcend::sin(&uu.mul(&pi)).div(&pi));
            assert!(
                conv2.intersect(&g).is_some(),
                "g closed form vs convolution at u={num}/{den}: {conv2} vs {g}"
            );
        }
    }

    #[test]
    fn g_family_fourier_values() {
        let prec = 128;
        // Ghat_1(0) = 8/pi^2.
        let t = build_jtable(&spec(TestFamily::G, 1, 1), 2, prec).unwrap();
        let target = Interval::from_i64(8, prec).div(&transcend::pi(prec).sqr());
        assert!(t.fhat0.intersect(&target).is_some(), "{} vs {target}", t.fhat0);
        // Ghat_4(i/4pi) = 16 pi^2 (1 + cosh 2) / (4 + pi^2)^2.
        let t4 = build_jtable(&spec(TestFamily::G, 4, 1), 2, prec).unwrap();
        let pi2 = transcend::pi(prec).sqr();
        let expect = Interval::from_i64(16, prec)
            .mul(&pi2)
            .mul(&Interval::one(prec).add(&transcend::cosh(&Interval::from_i64(2, prec))))
            .div(&Interval::from_i64(4, prec).add(&pi2).sqr());
        assert!(t4.fhat_i4pi.intersect(&expect).is_some());
        // Positivity for both families.
        for fam in [TestFamily::F, TestFamily::G] {
            let t = build_jtable(&spec(fam, 4, 1), 2, prec).unwrap();
            assert!(!t.fhat0.lo().is_negative());
            assert!(t.fhat_i4pi.is_positive());
        }
    }

    #[test]
    fn f_family_fhat_i4pi_is_exactly_8l_over_pi2() {
        let prec = 128;
        let t = build_jtable(&spec(TestFamily::F, 4, 1), 2, prec).unwrap();
        let expect = Interval::from_i64(32, prec).div(&transcend::pi(prec).sqr());
        assert!(t.fhat_i4pi.intersect(&expect).is_some());
    }

    #[test]
    fn integral_of_g1_over_half_support() {
        // int_0^1 G_1(x) dx = 4/pi^2 (half of Ghat_1(0) by evenness).
        let prec = 128;
        let s = spec(TestFamily::G, 1, 1);
        let r = quad::integrate(
            &TestFnIntegrand(&s),
            &BigFloat::zero(),
            &BigFloat::one(),
            prec,
            &BigFloat::from_parts(1.into(), -80),
            4096,
            12,
        );
        let target = Interval::from_i64(4, prec).div(&transcend::pi(prec).sqr());
        assert!(r.value.intersect(&target).is_some(), "{} vs {}", r.value, target);
    }

    #[test]
    fn dual_routes_overlap_for_g() {
        // The kernel-integral route and the closed-form route must agree;
        // build_jtable already intersects them and errors on mismatch.
        let prec = 128;
        for (num, den) in [(1i64, 1i64), (4, 1), (487, 50)] {
            let t = build_jtable(&spec(TestFamily::G, num, den), 24, prec);
            assert!(t.is_ok(), "route mismatch at ell={num}/{den}: {:?}", t.err());
        }
    }

    #[test]
    fn j_value_linearity_and_consistency() {
        let prec = 128;
        let t = build_jtable(&spec(TestFamily::F, 4, 1), 24, prec).unwrap();
        // j_one + j_eps ~ J(I_0)
        assert!(t.j_one().add(t.j_eps()).intersect(t.j_i0()).is_some());
        // J(2 I_11) = 2 J(I_11)
        let u = KInfElement::i_w(11).scale(2);
        let direct = t.j_i(11).unwrap().shl(1);
        assert!(t.j_value(&u).unwrap().intersect(&direct).is_some());
        // Out-of-range w errors.
        assert!(t.j_value(&KInfElement::i_w(40)).is_err());
    }

    #[test]
    fn table_widths_are_small() {
        let prec = 128;
        let t = build_jtable(&spec(TestFamily::F, 219, 50), 8, prec).unwrap();
        for w in 1..=8 {
            let width = t.j_i(w).unwrap().width().to_f64();
            assert!(width < 1e-18, "J(I_{w}) width {width}");
        }
        assert!(t.fhat0.width().to_f64() < 1e-18);
    }
}

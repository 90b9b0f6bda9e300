//! Certified adaptive quadrature via interval Taylor models.
//!
//! A panel `[a, b]` with exact dyadic midpoint `m` and radius `r` is
//! integrated as
//!
//! `int = sum_{j even < d} c_j(m) * 2 r^{j+1}/(j+1)  +  E`,
//!
//! where `c_j(m)` are jet coefficients at the thin point `m`, and
//! `|E| <= |c_d([a,b])| * 2 r^{d+1}/(d+1)` with `c_d([a,b])` the order-d
//! coefficient of the jet expanded at the whole panel (which encloses
//! `f^{(d)}(xi)/d!` for every `xi` in the panel). Panels are bisected
//! adaptively, worst error first, until the total width target or the panel
//! budget is reached. A spent budget yields a wide but still correct result.

use crate::bigfloat::{BigFloat, Dir};
use crate::interval::Interval;
use crate::jet::Jet;
use num_bigint::BigInt;
use num_rational::BigRational;
use std::collections::BinaryHeap;

/// Interval evaluation of jets of the integrand at a panel base point.
pub trait Integrand: Sync {
    fn jet(&self, x: &Interval, order: usize, prec: u32) -> Jet;
}

#[derive(Debug, Clone)]
pub struct QuadResult {
    pub value: Interval,
    /// Number of panels used.
    pub panels: usize,
    /// False when the budget ran out before the width target was met; the
    /// value is then wide but still a correct enclosure.
    pub converged: bool,
}

struct Panel {
    a: BigFloat,
    b: BigFloat,
    value: Interval,
    err: BigFloat,
}

fn integrate_panel<I: Integrand>(f: &I, a: &BigFloat, b: &BigFloat, order: usize, prec: u32) -> Panel {
    let m = a.add_exact(b).shl(-1);
    let r = b.sub_exact(a).shl(-1);
    let rp = Interval::point(r.clone(), prec);
    let point = f.jet(&Interval::point(m, prec), order, prec);
    let wide = f.jet(
        &Interval::new(a.clone(), b.clone(), prec),
        order,
        prec,
    );
    let mut acc = Interval::zero(prec);
    let mut rpow = rp.clone(); // r^{j+1}
    for j in 0..order {
        if j % 2 == 0 {
            acc = acc.add(&point.c[j].mul(&rpow).shl(1).div_i64(j as i64 + 1));
        }
        rpow = rpow.mul(&rp);
    }
    let err = wide.c[order]
        .mag()
        .mul_exact(&rpow.mag())
        .shl(1)
        .div(&BigFloat::from_i64(order as i64 + 1), prec, Dir::Up);
    Panel { a: a.clone(), b: b.clone(), value: acc.widen(&err), err }
}

struct HeapEntry(f64, usize);

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.partial_cmp(&other.0).unwrap_or(std::cmp::Ordering::Equal)
    }
}

/// Integrate over `[a, b]` (exact dyadic endpoints) to the requested total
/// error width, bisecting adaptively within the panel budget.
pub fn integrate<I: Integrand>(
    f: &I,
    a: &BigFloat,
    b: &BigFloat,
    prec: u32,
    target: &BigFloat,
    max_panels: usize,
    order: usize,
) -> QuadResult {
    assert!(a.cmp_value(b) != std::cmp::Ordering::Greater);
    if a == b {
        return QuadResult { value: Interval::zero(prec), panels: 0, converged: true };
    }
    let first = integrate_panel(f, a, b, order, prec);
    let mut total_err = first.err.clone();
    let mut panels: Vec<Panel> = vec![first];
    let mut heap = BinaryHeap::new();
    heap.push(HeapEntry(panels[0].err.to_f64(), 0));
    while total_err.cmp_value(target) == std::cmp::Ordering::Greater && panels.len() < max_panels {
        let Some(HeapEntry(_, idx)) = heap.pop() else { break };
        let (pa, pb) = (panels[idx].a.clone(), panels[idx].b.clone());
        let m = pa.add_exact(&pb).shl(-1);
        let left = integrate_panel(f, &pa, &m, order, prec);
        let right = integrate_panel(f, &m, &pb, order, prec);
        total_err = total_err
            .sub_exact(&panels[idx].err)
            .add_exact(&left.err)
            .add_exact(&right.err);
        heap.push(HeapEntry(left.err.to_f64(), idx));
        heap.push(HeapEntry(right.err.to_f64(), panels.len()));
        panels[idx] = left;
        panels.push(right);
    }
    let mut value = Interval::zero(prec);
    for p in &panels {
        value = value.add(&p.value);
    }
    QuadResult {
        value,
        panels: panels.len(),
        converged: total_err.cmp_value(target) != std::cmp::Ordering::Greater,
    }
}

/// Integrate from an exact dyadic `a` to a rational upper endpoint `b`,
/// absorbing the non-dyadic sliver `[b_lo, b]` into a one-panel bound built
/// from an interval evaluation (the order-0 jet) over the sliver.
pub fn integrate_to_rational<I: Integrand>(
    f: &I,
    a: &BigFloat,
    b: &BigRational,
    prec: u32,
    target: &BigFloat,
    max_panels: usize,
    order: usize,
) -> QuadResult {
    let b_lo = BigFloat::from_ratio(b.numer(), b.denom(), prec, Dir::Down);
    let b_hi = BigFloat::from_ratio(b.numer(), b.denom(), prec, Dir::Up);
    let mut out = integrate(f, a, &b_lo, prec, target, max_panels, order);
    if b_lo.cmp_value(&b_hi) == std::cmp::Ordering::Less {
        let sliver = Interval::new(b_lo.clone(), b_hi.clone(), prec);
        let range = f.jet(&sliver, 0, prec).c[0].clone();
        let w = b_hi.sub_exact(&b_lo);
        let contrib = range.mul(&Interval::new(BigFloat::zero(), w, prec));
        out.value = out.value.add(&contrib.hull(&Interval::zero(prec)));
    }
    out
}

/// Simple named integrands for tests and the command-line examples.
pub enum BasicIntegrand {
    /// f(x) = x
    Identity,
    /// f(x) = cos(pi x)
    CosPiX,
}

impl Integrand for BasicIntegrand {
    fn jet(&self, x: &Interval, order: usize, prec: u32) -> Jet {
        let v = Jet::variable(x.with_prec(prec), order);
        match self {
            BasicIntegrand::Identity => v,
            BasicIntegrand::CosPiX => v.scale(&crate::transcend::pi(prec)).sin_cos().1,
        }
    }
}

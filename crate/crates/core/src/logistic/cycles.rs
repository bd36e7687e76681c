//! Attracting cycles of `f_d` certified by the derivative criterion, and
//! parameter boxes on which one attracting cycle persists.

use crate::interval_maps::QuadMap;
use crate::numkit::{refine_root, root_isolate_with, IterMapExpr, Precision, RatInterval, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CycleVerdict {
    /// A primitive period-`p` point inside `point` with `|(f^p)'| < 1`.
    Attracting { point: RatInterval, multiplier: RatInterval },
    /// Every period-`p` root was checked and none is attracting.
    NotAttracting,
    /// Some root could not be classified at the precision cap.
    Unresolved,
}

impl CycleVerdict {
    pub fn is_attracting(&self) -> bool {
        matches!(self, CycleVerdict::Attracting { .. })
    }
}

/// Enclosures of `f_D^k(X)` for `k = 0..=n` and of `(f_D^n)'` over `D × X`.
fn orbit_and_multiplier(d: &RatInterval, x: &RatInterval, n: u32, prec: Precision) -> (Vec<RatInterval>, RatInterval) {
    let q = QuadMap::with_enclosure(d.clone()).expect("parameter checked by caller");
    let one = RatInterval::point(Rational::one());
    let two = Rational::int(2);
    let mut orbit = vec![x.clone()];
    let mut deriv = one.clone();
    for _ in 0..n {
        let last = orbit.last().expect("nonempty");
        deriv = deriv.mul(&d.mul(&one.sub(&last.mul_scalar(&two)))).rounded(prec);
        let next = q.iterate_enclosure(last, 1, prec);
        orbit.push(next);
    }
    (orbit, deriv)
}

fn inside_unit_disc(m: &RatInterval) -> bool {
    m.mag() < Rational::one()
}

/// Whether `f_d` has an attracting cycle of primitive period `p`.
pub fn attracting_cycle_at(d: &Rational, p: u32, bits: u32) -> CycleVerdict {
    if !d.is_positive() || *d >= 4 || p == 0 {
        return CycleVerdict::NotAttracting;
    }
    let expr = IterMapExpr::periodic_defect(d.clone(), p);
    let width = Rational::pow2(-i64::from(bits.clamp(16, 256) / 2));
    let iso = root_isolate_with(&expr, &RatInterval::unit(), &width, bits.max(64));
    let mut unresolved = !iso.is_complete();
    let dd = RatInterval::point(d.clone());
    for root in iso.roots {
        let mut x = root;
        let mut b = bits.max(64);
        let verdict = loop {
            let prec = Precision::Bits(b);
            let (orbit, m) = orbit_and_multiplier(&dd, &x, p, prec);
            let divisors: Vec<u32> = (1..p).filter(|k| p.is_multiple_of(*k)).collect();
            let primitive = divisors.iter().all(|&k| !orbit[k as usize].intersects(&x));
            if inside_unit_disc(&m) && primitive {
                break Some(CycleVerdict::Attracting { point: x, multiplier: m });
            }
            if m.lo() >= &Rational::one() || m.hi() <= &-Rational::one() {
                break None;
            }
            if divisors.iter().any(|&k| lower_period_root(d, k, p, &x, prec)) {
                break None;
            }
            if x.is_point() || b >= 2048 {
                unresolved = true;
                break None;
            }
            let w = x.width() * Rational::pow2(-16);
            x = refine_root(&expr, &x, &w, b);
            b *= 2;
        };
        if let Some(v) = verdict {
            return v;
        }
    }
    if unresolved {
        CycleVerdict::Unresolved
    } else {
        CycleVerdict::NotAttracting
    }
}

/// Whether `x` certainly holds a point of period dividing `k` and no other
/// root of `f^p(x) - x`.
fn lower_period_root(d: &Rational, k: u32, p: u32, x: &RatInterval, prec: Precision) -> bool {
    let lower = IterMapExpr::periodic_defect(d.clone(), k);
    if x.is_point() {
        return lower.eval_exact(x.lo()).is_zero();
    }
    let full = IterMapExpr::periodic_defect(d.clone(), p);
    let sa = lower.sign_at(x.lo(), 64);
    let sb = lower.sign_at(x.hi(), 64);
    sa * sb < 0 && !full.eval_jet(x, prec).deriv.contains_zero()
}

/// Certify that for every parameter in `d` the map has a unique attracting
/// cycle of primitive period `p` meeting `x`: `f^p(X) ⊂ int X`,
/// `|(f^p)'| < 1` on `D × X` and `f^k(X) ∩ X = ∅` for `0 < k < p`.
pub fn certify_component_box(d: &RatInterval, x: &RatInterval, p: u32, bits: u32) -> bool {
    if !d.lo().is_positive() || *d.hi() > 4 || p == 0 {
        return false;
    }
    let (orbit, m) = orbit_and_multiplier(d, x, p, Precision::Bits(bits));
    x.strictly_encloses(&orbit[p as usize])
        && inside_unit_disc(&m)
        && (1..p as usize).all(|k| !orbit[k].intersects(x))
}

/// Floating-point estimate of the point of the attracting cycle of `f_d`
/// that attracts the critical point, sampled every `p` steps. Proposal only.
fn cycle_point_estimate(d: f64, p: u32) -> f64 {
    let mut x = 0.5f64;
    for _ in 0..4000 {
        for _ in 0..p {
            x = d * x * (1.0 - x);
        }
    }
    x
}

/// A certified box around parameter interval `d`, trying a few state widths.
fn certify_near(d: &RatInterval, p: u32, bits: u32) -> bool {
    let xm = cycle_point_estimate(d.mid().to_f64(), p);
    let Some(xm) = Rational::from_f64(xm).map(|x| x.floor_dyadic(bits.min(60))) else {
        return false;
    };
    (3..=30).step_by(3).any(|k| {
        let w = Rational::pow2(-k);
        let x = RatInterval::new(&xm - &w, &xm + &w).expect("ordered");
        certify_component_box(d, &x, p, bits)
    })
}

/// Grow a chain of certified boxes from a center enclosure toward `target`.
/// Consecutive boxes share an endpoint, so the attracting cycle continues
/// along the chain and every parameter reached lies in the center's
/// hyperbolic component. Returns the far end of the chain, or `None` when
/// not even the center enclosure certifies.
pub fn widen_component(r_enc: &RatInterval, p: u32, target: &Rational, max_steps: u32, bits: u32) -> Option<Rational> {
    let c = RatInterval::point(Rational::half());
    let base_ok = (2..=40).step_by(2).any(|k| {
        let w = Rational::pow2(-k);
        let x = RatInterval::new(c.lo() - &w, c.hi() + &w).expect("ordered");
        certify_component_box(r_enc, &x, p, bits)
    });
    if !base_ok {
        return None;
    }
    let up = target > r_enc.hi();
    let mut front = if up { r_enc.hi().clone() } else { r_enc.lo().clone() };
    if r_enc.contains(target) {
        return Some(target.clone());
    }
    let floor = Rational::pow2(-48);
    let mut step = (target - &front).abs();
    for _ in 0..max_steps {
        let remaining = (target - &front).abs();
        if remaining.is_zero() || step < floor {
            break;
        }
        let s = step.clone().min(remaining);
        let next = if up { &front + &s } else { &front - &s };
        let d = RatInterval::spanning(front.clone(), next.clone());
        if certify_near(&d, p, bits) {
            front = next;
            step = s * Rational::int(2);
        } else {
            step = s * Rational::half();
        }
    }
    Some(front)
}

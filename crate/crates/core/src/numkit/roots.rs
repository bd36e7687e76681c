//! Real-root isolation by interval bisection with certified sign changes.

use super::{IterMapExpr, Precision, RatInterval, Rational};

const DEFAULT_BITS: u32 = 96;

/// Outcome of a root isolation run.
#[derive(Clone, Debug, Default)]
pub struct RootIsolation {
    /// Pairwise-disjoint intervals, sorted, each with a certified sign change
    /// at its endpoints or a degenerate `[q,q]` with an exact zero at `q`.
    pub roots: Vec<RatInterval>,
    /// Cells of width `<= min_width` whose sign behavior could not be
    /// certified (possible even-multiplicity roots). Never silently dropped.
    pub unresolved: Vec<RatInterval>,
}

impl RootIsolation {
    pub fn is_complete(&self) -> bool {
        self.unresolved.is_empty()
    }
}

/// Isolate the roots of `expr` on `domain` with the default working precision.
pub fn root_isolate(expr: &IterMapExpr, domain: &RatInterval, min_width: &Rational) -> RootIsolation {
    root_isolate_with(expr, domain, min_width, DEFAULT_BITS)
}

/// Isolate the roots of `expr` on `domain`.
///
/// Cells whose enclosure excludes zero are discarded; cells where the
/// derivative enclosure excludes zero hold at most one root and are refined by
/// plain bisection; everything else is bisected down to `min_width`.
pub fn root_isolate_with(
    expr: &IterMapExpr,
    domain: &RatInterval,
    min_width: &Rational,
    bits: u32,
) -> RootIsolation {
    assert!(min_width.is_positive(), "min_width must be positive");
    let prec = Precision::Bits(bits);
    let mut out = RootIsolation::default();

    let (a, b) = (domain.lo().clone(), domain.hi().clone());
    let sa = expr.sign_at(&a, bits);
    if sa == 0 {
        out.roots.push(RatInterval::point(a.clone()));
    }
    if domain.is_point() {
        return out;
    }
    let sb = expr.sign_at(&b, bits);
    if sb == 0 {
        out.roots.push(RatInterval::point(b.clone()));
    }

    let mut stack = vec![(a, sa, b, sb)];
    while let Some((a, sa, b, sb)) = stack.pop() {
        let cell = RatInterval::new(a.clone(), b.clone()).expect("ordered cell");
        let enclosure = expr.eval_tight(&cell, prec);
        if !enclosure.contains_zero() {
            continue;
        }
        let monotone = !expr.eval_jet(&cell, prec).deriv.contains_zero();
        if monotone {
            // at most one root in the cell
            if sa != 0 && sb != 0 && sa != sb {
                out.roots.push(shrink_sign_change(expr, a, sa, b, min_width, bits));
            }
            continue;
        }
        if &b - &a <= *min_width {
            if sa != 0 && sb != 0 && sa != sb {
                out.roots.push(cell);
            } else {
                out.unresolved.push(cell);
            }
            continue;
        }
        let m = a.midpoint(&b);
        let sm = expr.sign_at(&m, bits);
        if sm == 0 {
            out.roots.push(RatInterval::point(m.clone()));
        }
        stack.push((m.clone(), sm, b, sb));
        stack.push((a, sa, m, sm));
    }

    out.roots.sort_by(|x, y| x.lo().cmp(y.lo()).then(x.hi().cmp(y.hi())));
    out.unresolved.sort_by(|x, y| x.lo().cmp(y.lo()));
    separate(expr, &mut out.roots, bits);
    out
}

/// Bisect a sign-change bracket down to `min_width`.
fn shrink_sign_change(
    expr: &IterMapExpr,
    mut a: Rational,
    sa: i32,
    mut b: Rational,
    min_width: &Rational,
    bits: u32,
) -> RatInterval {
    while &b - &a > *min_width {
        let m = a.midpoint(&b);
        let sm = expr.sign_at(&m, bits);
        if sm == 0 {
            return RatInterval::point(m);
        }
        if sm == sa {
            a = m;
        } else {
            b = m;
        }
    }
    RatInterval::new(a, b).expect("ordered bracket")
}

/// Make neighboring sign-change intervals that share an endpoint disjoint.
/// A shared endpoint is never a root (its sign is nonzero), so each side can
/// be bisected away from it.
fn separate(expr: &IterMapExpr, roots: &mut [RatInterval], bits: u32) {
    for i in 1..roots.len() {
        while roots[i - 1].hi() >= roots[i].lo() {
            if roots[i - 1].is_point() && roots[i].is_point() {
                break;
            }
            let target = if roots[i - 1].is_point() { i } else { i - 1 };
            roots[target] = halve_towards_root(expr, &roots[target], bits);
        }
    }
}

/// Shrink a root enclosure from [`root_isolate`] until its width is at most
/// `width`. Degenerate intervals are returned unchanged.
pub fn refine_root(expr: &IterMapExpr, iv: &RatInterval, width: &Rational, bits: u32) -> RatInterval {
    let mut iv = iv.clone();
    while !iv.is_point() && iv.width() > *width {
        iv = halve_towards_root(expr, &iv, bits);
    }
    iv
}

fn halve_towards_root(expr: &IterMapExpr, iv: &RatInterval, bits: u32) -> RatInterval {
    let sa = expr.sign_at(iv.lo(), bits);
    let m = iv.mid();
    let sm = expr.sign_at(&m, bits);
    if sm == 0 {
        RatInterval::point(m)
    } else if sm == sa {
        RatInterval::new(m, iv.hi().clone()).expect("ordered")
    } else {
        RatInterval::new(iv.lo().clone(), m).expect("ordered")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dom(a: &str, b: &str) -> RatInterval {
        RatInterval::new(a.parse().unwrap(), b.parse().unwrap()).unwrap()
    }

    fn check_sound(expr: &IterMapExpr, iso: &RootIsolation) {
        for w in iso.roots.windows(2) {
            assert!(w[0].hi() < w[1].lo(), "overlap {:?} {:?}", w[0], w[1]);
        }
        for r in &iso.roots {
            if r.is_point() {
                assert!(expr.eval_exact(r.lo()).is_zero());
            } else {
                let sa = expr.eval_exact(r.lo()).signum();
                let sb = expr.eval_exact(r.hi()).signum();
                assert!(sa * sb < 0, "no sign change on {r:?}");
            }
        }
    }

    #[test]
    fn first_return_root_is_exact_two() {
        let p1 = IterMapExpr::critical_return(1);
        let iso = root_isolate(&p1, &dom("0", "4"), &"1e-3".parse().unwrap());
        assert!(iso.is_complete());
        assert_eq!(iso.roots, vec![RatInterval::point(Rational::int(2))]);
    }

    #[test]
    fn second_return_roots() {
        let p2 = IterMapExpr::critical_return(2);
        let iso = root_isolate(&p2, &dom("0", "4"), &"1e-6".parse().unwrap());
        assert!(iso.is_complete());
        check_sound(&p2, &iso);
        assert_eq!(iso.roots.len(), 2);
        assert_eq!(iso.roots[0], RatInterval::point(Rational::int(2)));
        let golden = 1.0 + 5f64.sqrt();
        let r = &iso.roots[1];
        assert!(r.lo().to_f64() <= golden && golden <= r.hi().to_f64());
        assert!(r.width() <= "1e-6".parse::<Rational>().unwrap());
    }

    #[test]
    fn period_three_window_root() {
        let p3 = IterMapExpr::critical_return(3);
        let iso = root_isolate(&p3, &dom("3.8", "3.9"), &"1e-6".parse().unwrap());
        assert!(iso.is_complete());
        check_sound(&p3, &iso);
        assert_eq!(iso.roots.len(), 1);
        assert!(dom("3.8318", "3.8319").encloses(&iso.roots[0]));
    }

    #[test]
    fn state_role_finds_two_cycle() {
        // f_{16/5}^2(x) - x: roots 0, the fixed point 11/16, and the 2-cycle
        let e = IterMapExpr::periodic_defect("16/5".parse().unwrap(), 2);
        let iso = root_isolate(&e, &RatInterval::unit(), &"1e-9".parse().unwrap());
        assert!(iso.is_complete());
        check_sound(&e, &iso);
        assert_eq!(iso.roots.len(), 4);
        assert_eq!(iso.roots[0], RatInterval::point(Rational::zero()));
        assert!(iso.roots.iter().any(|r| r.contains(&Rational::frac(11, 16))));
    }

    #[test]
    fn tangential_root_is_unresolved() {
        // f_1^2(x) - x ≈ -2x^2 near 0: a double root with no sign change.
        // The bisection grid of [-1/7, 1/2] never lands on 0 exactly.
        let e = IterMapExpr::periodic_defect(Rational::one(), 2);
        let iso = root_isolate(&e, &dom("-1/7", "1/2"), &"1e-4".parse().unwrap());
        assert!(iso.roots.is_empty(), "{:?}", iso.roots);
        assert!(iso.unresolved.iter().any(|r| r.contains(&Rational::zero())));
    }
}

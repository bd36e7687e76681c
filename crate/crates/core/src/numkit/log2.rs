//! Certified base-2 logarithms and powers of two.
//!
//! `log2(m)` for `m ∈ [1,2)` is produced one binary digit at a time by
//! repeated squaring. Two chains run side by side, one rounding every square
//! down and one rounding up, which makes the digit sums rigorous lower and
//! upper bounds without any floating point.

use super::{NumError, RatInterval, Rational};

/// Enclosure of `log2(t)` for every `t` in `x`.
///
/// The result has dyadic endpoints and width at most
/// `log2(x.hi) - log2(x.lo) + 2^-bits`.
pub fn log2_enclosure(x: &RatInterval, bits: u32) -> Result<RatInterval, NumError> {
    if !x.lo().is_positive() {
        return Err(NumError::Domain(format!(
            "log2 needs a positive argument, got lower end {}",
            x.lo()
        )));
    }
    let lo = log2_lower(x.lo(), bits);
    let hi = log2_upper(x.hi(), bits);
    RatInterval::new(lo, hi)
}

fn digits(bits: u32) -> u32 {
    bits + 2
}

fn guard(bits: u32) -> u32 {
    bits + 6
}

/// Split `x > 0` as `2^e * m` with `m ∈ [1,2)`.
fn normalize(x: &Rational) -> (i64, Rational) {
    let e = x.floor_log2();
    (e, x * &Rational::pow2(-e))
}

/// A value `<= log2(x)`.
pub(crate) fn log2_lower(x: &Rational, bits: u32) -> Rational {
    let (e, mut m) = normalize(x);
    let one = Rational::one();
    let two = Rational::int(2);
    let prec = guard(bits);
    let mut acc = Rational::int(e);
    if m == one {
        return acc;
    }
    for k in 1..=digits(bits) {
        // m'_{k} = round_down(m'_{k-1}^2 / 2^b) keeps log2 m'_{k-1} >= (b + log2 m'_k)/2
        let sq = (&m * &m).floor_dyadic(prec);
        if sq >= two {
            acc = acc + Rational::pow2(-(k as i64));
            m = &sq / &two;
        } else {
            m = sq;
        }
        if m == one {
            break;
        }
    }
    acc
}

/// A value `>= log2(x)`.
pub(crate) fn log2_upper(x: &Rational, bits: u32) -> Rational {
    let (e, mut m) = normalize(x);
    let one = Rational::one();
    let two = Rational::int(2);
    let prec = guard(bits);
    let mut acc = Rational::int(e);
    if m == one {
        return acc;
    }
    let n = digits(bits);
    for k in 1..=n {
        let sq = (&m * &m).ceil_dyadic(prec);
        if sq >= two {
            acc = acc + Rational::pow2(-(k as i64));
            m = &sq / &two;
        } else {
            m = sq;
        }
        if m == one {
            return acc;
        }
    }
    // remaining tail: 2^-n * log2(m) with m in [1,2), and log2(m) <= 2(m-1) there
    let tail = (Rational::int(2) * (&m - &one)).min(one);
    acc + tail * Rational::pow2(-(n as i64))
}

/// Enclosure of `2^t` for every `t` in `h`. Requires `h.lo >= 0`.
///
/// Endpoints are found by bisection against `log2_enclosure`, so every
/// returned bound is certified by the same digit machinery.
pub fn pow2_enclosure(h: &RatInterval, bits: u32) -> Result<RatInterval, NumError> {
    if h.lo().is_negative() {
        return Err(NumError::Domain(format!(
            "pow2 enclosure expects a nonnegative exponent, got {}",
            h.lo()
        )));
    }
    let inner = bits + 4;
    let lo = pow2_below(h.lo(), inner);
    let hi = pow2_above(h.hi(), inner);
    RatInterval::new(lo, hi)
}

fn pow2_bracket(t: &Rational) -> (Rational, Rational) {
    let k = t.floor();
    let k = i64::try_from(k).unwrap_or(i64::MAX / 4);
    (Rational::pow2(k), Rational::pow2(k + 1))
}

/// Largest dyadic found with certified `log2(s) <= t`.
fn pow2_below(t: &Rational, bits: u32) -> Rational {
    let (mut a, mut b) = pow2_bracket(t);
    if log2_upper(&b, bits + 4) <= *t {
        return b;
    }
    let scale = a.clone();
    let stop = &scale * &Rational::pow2(-(bits as i64) - 1);
    while &b - &a > stop {
        let m = a.midpoint(&b);
        if log2_upper(&m, bits + 4) <= *t {
            a = m;
        } else {
            b = m;
        }
    }
    a
}

/// Smallest dyadic found with certified `log2(s) >= t`.
fn pow2_above(t: &Rational, bits: u32) -> Rational {
    let (mut a, mut b) = pow2_bracket(t);
    if log2_lower(&a, bits + 4) >= *t {
        return a;
    }
    let scale = a.clone();
    let stop = &scale * &Rational::pow2(-(bits as i64) - 1);
    while &b - &a > stop {
        let m = a.midpoint(&b);
        if log2_lower(&m, bits + 4) >= *t {
            b = m;
        } else {
            a = m;
        }
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(p: i64, q: i64) -> RatInterval {
        RatInterval::point(Rational::frac(p, q))
    }

    #[test]
    fn powers_of_two_are_exact() {
        let e = log2_enclosure(&pt(2, 1), 20).unwrap();
        assert_eq!(e, RatInterval::point(Rational::one()));
        let e = log2_enclosure(&pt(1, 1), 20).unwrap();
        assert!(e.contains(&Rational::zero()));
        let e = log2_enclosure(&pt(1, 8), 5).unwrap();
        assert_eq!(e, RatInterval::point(Rational::int(-3)));
    }

    #[test]
    fn golden_ratio_enclosure() {
        let x = RatInterval::new("1.61803".parse().unwrap(), "1.61804".parse().unwrap()).unwrap();
        let e = log2_enclosure(&x, 30).unwrap();
        // log2(1.61803) = 0.6942383..., log2(1.61804) = 0.6942472...
        assert!(e.lo().to_f64() <= 0.6942384 && e.hi().to_f64() >= 0.6942472);
        assert!(e.contains(&"0.69424".parse().unwrap()));
        assert!(e.width().to_f64() < 1e-5 + 1e-9);
    }

    #[test]
    fn width_bound_on_point_inputs() {
        for (p, q) in [(3, 2), (5, 3), (7, 1), (1, 3), (1000, 999)] {
            for bits in [4u32, 12, 24, 40] {
                let e = log2_enclosure(&pt(p, q), bits).unwrap();
                assert!(e.width() <= Rational::pow2(-(bits as i64)), "{p}/{q} at {bits}");
                let f = (p as f64 / q as f64).log2();
                assert!(e.lo().to_f64() <= f + 1e-12 && f - 1e-12 <= e.hi().to_f64());
            }
        }
    }

    #[test]
    fn nonpositive_rejected() {
        let x = RatInterval::new(Rational::zero(), Rational::one()).unwrap();
        assert!(matches!(log2_enclosure(&x, 8), Err(NumError::Domain(_))));
    }

    #[test]
    fn pow2_brackets_exact_cases() {
        let s = pow2_enclosure(&RatInterval::point(Rational::one()), 20).unwrap();
        assert!(s.contains(&Rational::int(2)));
        assert!(s.width() <= Rational::pow2(-20));
        let s = pow2_enclosure(&RatInterval::point(Rational::zero()), 20).unwrap();
        assert!(s.contains(&Rational::one()));
        let s = pow2_enclosure(&RatInterval::point(Rational::half()), 30).unwrap();
        let sqrt2 = std::f64::consts::SQRT_2;
        assert!(s.lo().to_f64() <= sqrt2 && sqrt2 <= s.hi().to_f64());
        assert!(s.width() <= Rational::pow2(-30));
    }
}

//! Closed intervals with rational endpoints.
//!
//! Arithmetic here is exact; outward rounding to a dyadic grid is a separate,
//! explicit step (`rounded`) so callers decide where precision is traded for
//! speed.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{NumError, Rational};

/// Precision policy for interval computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    /// No rounding; endpoint sizes may grow without bound.
    Exact,
    /// Round endpoints outward to multiples of `2^-bits`.
    Bits(u32),
}

/// A closed interval `[lo, hi]` with `lo <= hi`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatInterval {
    lo: Rational,
    hi: Rational,
}

impl RatInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self, NumError> {
        if lo > hi {
            return Err(NumError::InvertedInterval {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(RatInterval { lo, hi })
    }

    /// Interval spanning two values in either order.
    pub fn spanning(a: Rational, b: Rational) -> Self {
        if a <= b {
            RatInterval { lo: a, hi: b }
        } else {
            RatInterval { lo: b, hi: a }
        }
    }

    pub fn point(x: Rational) -> Self {
        RatInterval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn unit() -> Self {
        RatInterval {
            lo: Rational::zero(),
            hi: Rational::one(),
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn into_bounds(self) -> (Rational, Rational) {
        (self.lo, self.hi)
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rational {
        self.lo.midpoint(&self.hi)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    /// `other ⊆ self`.
    pub fn encloses(&self, other: &RatInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// `other` lies in the open interior of `self`.
    pub fn strictly_encloses(&self, other: &RatInterval) -> bool {
        self.lo < other.lo && other.hi < self.hi
    }

    pub fn intersects(&self, other: &RatInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersection(&self, other: &RatInterval) -> Option<RatInterval> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        (lo <= hi).then_some(RatInterval { lo, hi })
    }

    pub fn hull(&self, other: &RatInterval) -> RatInterval {
        RatInterval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// Sign of every point if uniform: `Some(1)`, `Some(-1)`, `Some(0)` for
    /// the point zero, `None` when the interval straddles or touches zero.
    pub fn sign(&self) -> Option<i32> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    /// Largest absolute value over the interval.
    pub fn mag(&self) -> Rational {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn abs(&self) -> RatInterval {
        if self.lo.signum() >= 0 {
            self.clone()
        } else if self.hi.signum() <= 0 {
            RatInterval {
                lo: self.hi.abs(),
                hi: self.lo.abs(),
            }
        } else {
            RatInterval {
                lo: Rational::zero(),
                hi: self.mag(),
            }
        }
    }

    pub fn add(&self, rhs: &RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
    }

    pub fn sub(&self, rhs: &RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
    }

    pub fn neg(&self) -> RatInterval {
        RatInterval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn add_scalar(&self, c: &Rational) -> RatInterval {
        RatInterval {
            lo: &self.lo + c,
            hi: &self.hi + c,
        }
    }

    pub fn mul_scalar(&self, c: &Rational) -> RatInterval {
        RatInterval::spanning(&self.lo * c, &self.hi * c)
    }

    pub fn mul(&self, rhs: &RatInterval) -> RatInterval {
        if self.is_point() {
            return rhs.mul_scalar(&self.lo);
        }
        if rhs.is_point() {
            return self.mul_scalar(&rhs.lo);
        }
        let c = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let (lo, hi) = min_max(c);
        RatInterval { lo, hi }
    }

    pub fn div(&self, rhs: &RatInterval) -> Result<RatInterval, NumError> {
        if rhs.contains_zero() {
            return Err(NumError::DivisionByZero);
        }
        let inv = RatInterval::spanning(rhs.hi.recip()?, rhs.lo.recip()?);
        Ok(self.mul(&inv))
    }

    pub fn sqr(&self) -> RatInterval {
        let a = self.abs();
        RatInterval {
            lo: &a.lo * &a.lo,
            hi: &a.hi * &a.hi,
        }
    }

    /// Exact range of `x(1-x)` over the interval.
    pub fn logistic_core(&self) -> RatInterval {
        let half = Rational::half();
        let g = |x: &Rational| x * &(Rational::one() - x);
        let (gl, gh) = (g(&self.lo), g(&self.hi));
        if self.contains(&half) {
            RatInterval {
                lo: gl.min(gh),
                hi: Rational::frac(1, 4),
            }
        } else {
            RatInterval::spanning(gl, gh)
        }
    }

    /// Widen outward to the dyadic grid of the given precision.
    pub fn rounded(&self, prec: Precision) -> RatInterval {
        match prec {
            Precision::Exact => self.clone(),
            Precision::Bits(b) => RatInterval {
                lo: self.lo.floor_dyadic(b),
                hi: self.hi.ceil_dyadic(b),
            },
        }
    }

    /// Split at the midpoint.
    pub fn bisect(&self) -> (RatInterval, RatInterval) {
        let m = self.mid();
        (
            RatInterval {
                lo: self.lo.clone(),
                hi: m.clone(),
            },
            RatInterval {
                lo: m,
                hi: self.hi.clone(),
            },
        )
    }
}

fn min_max(vals: [Rational; 4]) -> (Rational, Rational) {
    let mut it = vals.into_iter();
    let first = it.next().expect("four values");
    let (mut lo, mut hi) = (first.clone(), first);
    for v in it {
        if v < lo {
            lo = v;
        } else if v > hi {
            hi = v;
        }
    }
    (lo, hi)
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl fmt::Debug for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for RatInterval {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [&self.lo, &self.hi].serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatInterval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [lo, hi] = <[Rational; 2]>::deserialize(d)?;
        RatInterval::new(lo, hi).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: (i64, i64), b: (i64, i64)) -> RatInterval {
        RatInterval::new(Rational::frac(a.0, a.1), Rational::frac(b.0, b.1)).unwrap()
    }

    #[test]
    fn product_covers_sign_mixes() {
        let a = iv((-1, 1), (2, 1));
        let b = iv((-3, 1), (1, 2));
        let p = a.mul(&b);
        assert_eq!(p, iv((-6, 1), (3, 1)));
    }

    #[test]
    fn logistic_core_is_exact_range() {
        assert_eq!(iv((1, 4), (3, 4)).logistic_core(), iv((3, 16), (1, 4)));
        assert_eq!(iv((0, 1), (1, 4)).logistic_core(), iv((0, 1), (3, 16)));
        assert_eq!(iv((3, 4), (1, 1)).logistic_core(), iv((0, 1), (3, 16)));
    }

    #[test]
    fn inverted_bounds_rejected() {
        assert!(RatInterval::new(Rational::one(), Rational::zero()).is_err());
    }

    #[test]
    fn serde_as_string_pair() {
        let i = iv((3, 10), (9, 20));
        let s = serde_json::to_string(&i).unwrap();
        assert_eq!(s, r#"["3/10","9/20"]"#);
        let back: RatInterval = serde_json::from_str(&s).unwrap();
        assert_eq!(back, i);
        assert!(serde_json::from_str::<RatInterval>(r#"["1","0"]"#).is_err());
    }

    #[test]
    fn division_rejects_zero_straddle() {
        assert!(iv((1, 1), (2, 1)).div(&iv((-1, 1), (1, 1))).is_err());
        let q = iv((1, 1), (2, 1)).div(&iv((2, 1), (4, 1))).unwrap();
        assert_eq!(q, iv((1, 4), (1, 1)));
    }
}

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::MapError;
use crate::numkit::{Precision, RatInterval, Rational};

/// A member `x ↦ r x (1 - x)` of the logistic family on `[0,1]`.
///
/// The parameter is an interval so that algebraic parameters (centers known
/// only through an isolating enclosure) can be handled; all evaluations then
/// enclose the values for every parameter in the interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadMap {
    r: RatInterval,
}

impl QuadMap {
    pub fn new(r: Rational) -> Result<Self, MapError> {
        Self::with_enclosure(RatInterval::point(r))
    }

    pub fn with_enclosure(r: RatInterval) -> Result<Self, MapError> {
        if r.lo().is_negative() || *r.hi() > 4 {
            return Err(MapError::InvalidArgument(format!("parameter {r} outside [0,4]")));
        }
        Ok(QuadMap { r })
    }

    pub fn param(&self) -> &RatInterval {
        &self.r
    }

    pub fn critical_point() -> Rational {
        Rational::half()
    }

    /// Enclosure of `f^n(X)` for all parameters in the enclosure.
    pub fn iterate_enclosure(&self, x: &RatInterval, n: u32, prec: Precision) -> RatInterval {
        let mut x = x.clone();
        for _ in 0..n {
            x = self.r.mul(&x.logistic_core()).rounded(prec);
        }
        x
    }

    /// Exact `f^n(x)` for a point parameter.
    pub fn iterate_exact(&self, x: &Rational, n: u32) -> Option<Rational> {
        if !self.r.is_point() {
            return None;
        }
        let r = self.r.lo();
        let one = Rational::one();
        let mut x = x.clone();
        for _ in 0..n {
            x = r * &x * (&one - &x);
        }
        Some(x)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ParamJson {
    Point(Rational),
    Enclosure(RatInterval),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuadJson {
    r: ParamJson,
}

impl Serialize for QuadMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let r = if self.r.is_point() {
            ParamJson::Point(self.r.lo().clone())
        } else {
            ParamJson::Enclosure(self.r.clone())
        };
        QuadJson { r }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = QuadJson::deserialize(d)?;
        let r = match raw.r {
            ParamJson::Point(p) => RatInterval::point(p),
            ParamJson::Enclosure(e) => e,
        };
        QuadMap::with_enclosure(r).map_err(serde::de::Error::custom)
    }
}

//! Exact piecewise-linear interval maps, the logistic family as a map
//! object, and entropy from the growth of variation.

mod pwl;
mod quad;
mod realize;

pub use pwl::{Lap, PwlMap, DEFAULT_NODE_CAP};
pub use quad::QuadMap;
pub use realize::{constant_slope_map, realization_slope, realize_computable, realize_sigma1};

use thiserror::Error;

use crate::entropy::{EntropyBound, Provenance};
use crate::numkit::{log2_enclosure, NumError, RatInterval, Rational};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MapError {
    #[error("invalid nodes: {0}")]
    InvalidNodes(String),
    #[error("point {0} outside [0,1]")]
    Domain(String),
    #[error("node count exceeded the cap of {cap}")]
    NodeCap { cap: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("precision: {0}")]
    Precision(String),
    #[error("malformed map: {0}")]
    Format(String),
    #[error(transparent)]
    Num(#[from] NumError),
}

/// Whether a variation-based bound is a proven enclosure or a finite-`n`
/// estimate of the limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VariationStatus {
    Certified,
    Estimate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariationEntropy {
    pub bound: EntropyBound,
    pub status: VariationStatus,
    /// Iterate used for the estimate; `None` for certified constant-slope bounds.
    pub iterate: Option<u32>,
}

/// Entropy from `h(f) = lim log2 V(f^n) / n`.
///
/// Maps of constant slope `±s` have `V(f^n) = s^n` exactly, so their entropy
/// `log2 max(s,1)` is returned as a certified enclosure. Otherwise the
/// finite-`n_max` quotient is returned as an estimate.
pub fn entropy_via_variation(f: &PwlMap, n_max: u32, bits: u32) -> Result<VariationEntropy, MapError> {
    entropy_via_variation_capped(f, n_max, bits, DEFAULT_NODE_CAP)
}

pub fn entropy_via_variation_capped(
    f: &PwlMap,
    n_max: u32,
    bits: u32,
    cap: usize,
) -> Result<VariationEntropy, MapError> {
    if n_max == 0 {
        return Err(MapError::InvalidArgument("n_max must be >= 1".into()));
    }
    if let Some(s) = f.slope_detect() {
        let bound = if s <= 1 {
            EntropyBound::zero().with_provenance(Provenance::Variation)
        } else {
            let enc = log2_enclosure(&RatInterval::point(s), bits)?;
            EntropyBound::from_enclosure(&enc, bits, Provenance::Variation)
        };
        return Ok(VariationEntropy {
            bound,
            status: VariationStatus::Certified,
            iterate: None,
        });
    }
    let v = f.iterate_capped(n_max, cap)?.variation();
    let bound = variation_quotient(&v, n_max, bits)?;
    Ok(VariationEntropy {
        bound,
        status: VariationStatus::Estimate,
        iterate: Some(n_max),
    })
}

/// `log2(v) / n` as an outward-rounded bound.
pub fn variation_quotient(v: &Rational, n: u32, bits: u32) -> Result<EntropyBound, MapError> {
    if !v.is_positive() {
        return Ok(EntropyBound::zero().with_provenance(Provenance::Variation));
    }
    let enc = log2_enclosure(&RatInterval::point(v.clone()), bits + 8)?;
    let n = Rational::int(i64::from(n));
    let scaled = RatInterval::new(enc.lo() / &n, enc.hi() / &n)?;
    Ok(EntropyBound::from_enclosure(&scaled, bits, Provenance::Variation))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_certified_zero() {
        let v = entropy_via_variation(&PwlMap::identity(), 7, 20).unwrap();
        assert_eq!(v.status, VariationStatus::Certified);
        assert_eq!(v.bound.lo(), &Rational::zero());
        assert_eq!(v.bound.hi(), &Rational::zero());
    }

    #[test]
    fn slope_two_is_exactly_one() {
        let f = realize_computable(&RatInterval::point(Rational::one()), 20).unwrap();
        let v = entropy_via_variation(&f, 5, 20).unwrap();
        assert_eq!(v.status, VariationStatus::Certified);
        assert_eq!(v.bound.as_interval(), RatInterval::point(Rational::one()));
    }

    #[test]
    fn three_halves_slope() {
        let f = constant_slope_map(&Rational::frac(3, 2)).unwrap();
        let v = entropy_via_variation(&f, 5, 30).unwrap();
        let expect = 1.5f64.log2();
        assert!(v.bound.lo().to_f64() <= expect && expect <= v.bound.hi().to_f64());
        assert!(v.bound.width() <= Rational::pow2(-29));
    }

    #[test]
    fn tent_like_estimate_for_mixed_slopes() {
        let f = PwlMap::new(vec![
            (Rational::zero(), Rational::zero()),
            (Rational::frac(1, 3), Rational::one()),
            (Rational::one(), Rational::zero()),
        ])
        .unwrap();
        let v = entropy_via_variation(&f, 8, 20).unwrap();
        assert_eq!(v.status, VariationStatus::Estimate);
        // every lap of f^n is full, so V(f^n) = 2^n exactly
        assert!(v.bound.contains(&Rational::one()));
    }
}

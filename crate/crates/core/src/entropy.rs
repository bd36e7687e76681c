//! Entropy enclosures shared by every method in the crate.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::numkit::{RatInterval, Rational};

/// Which computation produced a bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Provenance {
    Horseshoe,
    Variation,
    Sft,
    Sandwich,
    Exact,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Provenance::Horseshoe => "HORSESHOE",
            Provenance::Variation => "VARIATION",
            Provenance::Sft => "SFT",
            Provenance::Sandwich => "SANDWICH",
            Provenance::Exact => "EXACT",
        };
        f.write_str(s)
    }
}

/// `lo <= h <= hi` for a base-2 entropy `h`, with dyadic endpoints and
/// `0 <= lo`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawBound")]
pub struct EntropyBound {
    lo: Rational,
    hi: Rational,
    provenance: Provenance,
}

#[derive(Deserialize)]
struct RawBound {
    lo: Rational,
    hi: Rational,
    provenance: Provenance,
}

impl TryFrom<RawBound> for EntropyBound {
    type Error = String;

    fn try_from(raw: RawBound) -> Result<Self, Self::Error> {
        if raw.lo.is_negative() || raw.lo > raw.hi || !raw.lo.is_dyadic() || !raw.hi.is_dyadic() {
            return Err(format!("invalid entropy bound [{}, {}]", raw.lo, raw.hi));
        }
        Ok(EntropyBound {
            lo: raw.lo,
            hi: raw.hi,
            provenance: raw.provenance,
        })
    }
}

impl EntropyBound {
    /// Round an enclosure outward to `2^-bits` and clip it to `[0, ∞)`.
    /// Entropy is nonnegative, so clipping never loses the true value.
    pub fn from_enclosure(enc: &RatInterval, bits: u32, provenance: Provenance) -> Self {
        let lo = enc.lo().floor_dyadic(bits).max(Rational::zero());
        let hi = enc.hi().ceil_dyadic(bits).max(lo.clone());
        EntropyBound { lo, hi, provenance }
    }

    pub fn exact(value: Rational) -> Self {
        assert!(!value.is_negative() && value.is_dyadic(), "exact bound must be dyadic and >= 0");
        EntropyBound {
            lo: value.clone(),
            hi: value,
            provenance: Provenance::Exact,
        }
    }

    pub fn zero() -> Self {
        Self::exact(Rational::zero())
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn as_interval(&self) -> RatInterval {
        RatInterval::new(self.lo.clone(), self.hi.clone()).expect("lo <= hi")
    }
}

impl fmt::Display for EntropyBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "[{}, {}] {}", fmt_short(&self.lo), fmt_short(&self.hi), self.provenance)
        } else {
            write!(f, "[{}, {}] {}", self.lo.to_decimal(12), self.hi.to_decimal(12), self.provenance)
        }
    }
}

fn fmt_short(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        x.to_decimal(12)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clipping_and_rounding() {
        let enc = RatInterval::new(Rational::frac(-1, 3), Rational::frac(1, 3)).unwrap();
        let b = EntropyBound::from_enclosure(&enc, 8, Provenance::Sft);
        assert_eq!(b.lo(), &Rational::zero());
        assert!(b.hi() >= &Rational::frac(1, 3));
        assert!(b.hi().is_dyadic());
    }

    #[test]
    fn display_exact() {
        assert_eq!(EntropyBound::exact(Rational::one()).to_string(), "[1, 1] EXACT");
    }

    #[test]
    fn serde_rejects_inverted() {
        let bad = r#"{"lo":"1/2","hi":"1/4","provenance":"SFT"}"#;
        assert!(serde_json::from_str::<EntropyBound>(bad).is_err());
        let good = r#"{"lo":"1/4","hi":"1/2","provenance":"SFT"}"#;
        assert!(serde_json::from_str::<EntropyBound>(good).is_ok());
    }
}

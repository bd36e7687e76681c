//! Exact rationals backed by arbitrary-precision integers.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::NumError;

/// Largest decimal exponent accepted by the parser. Keeps hostile inputs
/// such as `1e999999999` from allocating gigabytes.
const MAX_DECIMAL_EXPONENT: i64 = 4096;
const MAX_LITERAL_LEN: usize = 1 << 16;

/// An exact fraction in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self, NumError> {
        let d = denom.into();
        if d.is_zero() {
            return Err(NumError::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(numer.into(), d)))
    }

    /// Panics on a zero denominator; for literals in code and tests.
    pub fn frac(numer: i64, denom: i64) -> Self {
        Self::new(numer, denom).expect("nonzero denominator")
    }

    pub fn int(n: i64) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn half() -> Self {
        Self::frac(1, 2)
    }

    /// `2^exp` for any integer exponent.
    pub fn pow2(exp: i64) -> Self {
        let p = BigInt::one() << exp.unsigned_abs();
        if exp >= 0 {
            Self::from_bigint(p)
        } else {
            Rational(BigRational::new_raw(BigInt::one(), p))
        }
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn signum(&self) -> i32 {
        match self.0.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self, NumError> {
        if self.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Self, NumError> {
        if rhs.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    pub fn powi(&self, exp: u32) -> Self {
        Rational(num_traits::pow(self.0.clone(), exp as usize))
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// Largest multiple of `2^-bits` that is `<= self`.
    pub fn floor_dyadic(&self, bits: u32) -> Self {
        if self.is_dyadic_within(bits) {
            return self.clone();
        }
        let scaled = &self.0 * BigRational::from_integer(BigInt::one() << bits);
        Rational(BigRational::new(scaled.floor().to_integer(), BigInt::one() << bits))
    }

    /// Smallest multiple of `2^-bits` that is `>= self`.
    pub fn ceil_dyadic(&self, bits: u32) -> Self {
        if self.is_dyadic_within(bits) {
            return self.clone();
        }
        let scaled = &self.0 * BigRational::from_integer(BigInt::one() << bits);
        Rational(BigRational::new(scaled.ceil().to_integer(), BigInt::one() << bits))
    }

    fn is_dyadic_within(&self, bits: u32) -> bool {
        let d = self.0.denom();
        // lowest terms: dyadic iff the denominator is a power of two
        d.bits() <= u64::from(bits) + 1 && (d & (d - BigInt::one())).is_zero()
    }

    pub fn is_dyadic(&self) -> bool {
        let d = self.0.denom();
        (d & (d - BigInt::one())).is_zero()
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn midpoint(&self, other: &Rational) -> Self {
        Rational((&self.0 + &other.0) / BigRational::from_integer(2.into()))
    }

    /// Nearest f64, for display and heuristics only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }

    /// Exact value of a finite f64.
    pub fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Rational)
    }

    /// Integer `e` with `2^e <= self < 2^(e+1)`. Requires `self > 0`.
    pub fn floor_log2(&self) -> i64 {
        debug_assert!(self.is_positive());
        let nb = self.numer().bits() as i64;
        let db = self.denom().bits() as i64;
        let mut e = nb - db;
        if Rational::pow2(e) > *self {
            e -= 1;
        }
        e
    }

    /// Decimal rendering with `digits` fractional digits, truncated toward zero.
    pub fn to_decimal(&self, digits: usize) -> String {
        let neg = self.is_negative();
        let a = self.0.abs();
        let scale = num_traits::pow(BigInt::from(10), digits);
        let scaled = (a * BigRational::from_integer(scale.clone())).floor().to_integer();
        let (int, frac) = scaled.div_rem(&scale);
        let mut s = String::new();
        if neg && !scaled.is_zero() {
            s.push('-');
        }
        s.push_str(&int.to_string());
        if digits > 0 {
            s.push('.');
            s.push_str(&format!("{:0>width$}", frac.to_string(), width = digits));
        }
        s
    }

    /// The rational with the smallest denominator (then smallest absolute
    /// numerator) in the closed interval `[lo, hi]`, found by descending the
    /// Stern-Brocot tree.
    pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
        debug_assert!(lo <= hi);
        if lo.signum() <= 0 && hi.signum() >= 0 {
            return Rational::zero();
        }
        if hi.is_negative() {
            return -Rational::simplest_between(&-hi.clone(), &-lo.clone());
        }
        simplest_positive(&lo.0, &hi.0)
    }

    fn parse_decimal(s: &str) -> Result<Self, NumError> {
        let bad = || NumError::Parse(truncate_for_error(s));
        let (mantissa, exponent) = match s.find(['e', 'E']) {
            Some(i) => {
                let e: i64 = s[i + 1..].parse().map_err(|_| bad())?;
                (&s[..i], e)
            }
            None => (s, 0),
        };
        if exponent.abs() > MAX_DECIMAL_EXPONENT {
            return Err(bad());
        }
        let (neg, digits) = match mantissa.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int_part, frac_part) = match digits.find('.') {
            Some(i) => (&digits[..i], &digits[i + 1..]),
            None => (digits, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.bytes().all(|b| b.is_ascii_digit())
            || !frac_part.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(bad());
        }
        let all: String = [int_part, frac_part].concat();
        let n: BigInt = if all.is_empty() {
            BigInt::zero()
        } else {
            all.parse().map_err(|_| bad())?
        };
        let shift = exponent - frac_part.len() as i64;
        if shift.abs() > 2 * MAX_DECIMAL_EXPONENT {
            return Err(bad());
        }
        let ten = num_traits::pow(BigInt::from(10), shift.unsigned_abs() as usize);
        let mut r = if shift >= 0 {
            Rational::from_bigint(n * ten)
        } else {
            Rational(BigRational::new(n, ten))
        };
        if neg {
            r = -r;
        }
        Ok(r)
    }
}

fn simplest_positive(lo: &BigRational, hi: &BigRational) -> Rational {
    // continued-fraction walk: lo <= x <= hi, 0 < lo
    let fl = lo.floor();
    if &fl == lo {
        return Rational(fl);
    }
    if fl.clone() + BigRational::one() <= *hi {
        return Rational(fl + BigRational::one());
    }
    // both in (fl, fl+1): recurse on reciprocals of fractional parts
    let lo_f = lo - &fl;
    let hi_f = hi - &fl;
    let inner = simplest_positive(&hi_f.recip(), &lo_f.recip());
    Rational(fl + inner.0.recip())
}

fn truncate_for_error(s: &str) -> String {
    s.chars().take(64).collect()
}

impl FromStr for Rational {
    type Err = NumError;

    /// Accepts `p/q`, plain integers and decimals such as `3.5` or `1e-3`.
    /// Decimals are converted exactly, never through floating point.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s.len() > MAX_LITERAL_LEN {
            return Err(NumError::Parse(truncate_for_error(s)));
        }
        if let Some((p, q)) = s.split_once('/') {
            let num: BigInt = p
                .trim()
                .parse()
                .map_err(|_| NumError::Parse(truncate_for_error(s)))?;
            let den: BigInt = q
                .trim()
                .parse()
                .map_err(|_| NumError::Parse(truncate_for_error(s)))?;
            return Rational::new(num, den);
        }
        Rational::parse_decimal(s)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::int(n)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($trait::$method(&self.0, &rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(self.0, rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($trait::$method(self.0, &rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(&self.0, rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Division panics on a zero divisor like integer division; use
// `checked_div` where the divisor is not known to be nonzero.
forward_binop!(Div, div);

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        self.0.is_integer() && self.0.numer() == &BigInt::from(*other)
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.cmp(&Rational::int(*other)))
    }
}

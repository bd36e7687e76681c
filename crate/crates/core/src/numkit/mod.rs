//! Exact and certified arithmetic: rationals, rational intervals with
//! explicit outward rounding, base-2 logarithm enclosures and root isolation
//! for iterated logistic-map expressions.

mod expr;
mod interval;
mod log2;
mod rational;
mod roots;

pub use expr::{Form, IterMapExpr, Jet, Role};
pub use interval::{Precision, RatInterval};
pub use log2::{log2_enclosure, pow2_enclosure};
pub use rational::Rational;
pub use roots::{refine_root, root_isolate, root_isolate_with, RootIsolation};

pub(crate) use log2::{log2_lower, log2_upper};

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum NumError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse {0:?} as a rational")]
    Parse(String),
    #[error("interval bounds out of order: [{lo}, {hi}]")]
    InvertedInterval { lo: String, hi: String },
    #[error("domain error: {0}")]
    Domain(String),
}

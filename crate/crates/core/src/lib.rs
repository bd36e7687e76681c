//! Certified topological-entropy bounds for one-dimensional dynamics.
//!
//! The crate is organized bottom-up:
//!
//! - [`numkit`]: exact rationals, outward-rounded intervals, `log2`
//!   enclosures and root isolation for iterated logistic expressions.
//! - [`interval_maps`]: exact piecewise-linear self-maps of `[0,1]`,
//!   their iterates and variation, and constant-slope maps realizing a
//!   requested entropy.
//! - [`horseshoe`]: checking and searching for `(p,n)`-horseshoes, which
//!   give improving lower bounds on entropy.
//! - [`symbolic`]: subshifts of finite type, word counts, Perron-root
//!   enclosures, mixing, the binary prefix recoding and map gluing.
//! - [`logistic`]: superattracting centers of `r x (1-x)`, their Markov
//!   partitions and entropies, hyperbolic-window widening and the
//!   sandwich computation of `h(r)`.

pub mod entropy;
pub mod horseshoe;
pub mod interval_maps;
pub mod logistic;
pub mod numkit;
pub mod symbolic;

pub use entropy::{EntropyBound, Provenance};
pub use numkit::{NumError, RatInterval, Rational};

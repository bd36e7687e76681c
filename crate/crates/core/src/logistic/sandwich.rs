//! Two-sided bounds on `h(r)` from centers on either side of `r`.
//!
//! `h` is nondecreasing in `r` and constant on each hyperbolic component, so
//! a center `d_l <= r` gives `h(r) >= h(d_l)` and a center `d_u >= r` gives
//! `h(r) <= h(d_u)`. Component widening turns a nearby center into a sample
//! at `r.lo` or `r.hi` itself.

use std::collections::HashSet;
use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::{widen_component, CenterCache, Center, LogisticError, DEFAULT_BITS, PERIOD_CAP};
use crate::entropy::{EntropyBound, Provenance};
use crate::numkit::{RatInterval, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Side {
    Below,
    Above,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Below => "BELOW",
            Side::Above => "ABOVE",
        })
    }
}

/// A parameter `d` with `h(d) ∈ entropy`, on one side of the query.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketSample {
    pub d: Rational,
    pub entropy: EntropyBound,
    pub side: Side,
    /// Period of the center whose component contains `d`; `None` for the
    /// boundary samples at `r = 3` and `r = 4`.
    pub witness_period: Option<u32>,
}

impl fmt::Display for BracketSample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.witness_period.map_or("-".to_string(), |p| p.to_string());
        write!(f, "{}\t{}\t{}\t{}", self.side, self.d.to_decimal(12), p, self.entropy)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SandwichBudget {
    pub max_period: u32,
    pub time_limit: Option<Duration>,
    pub bits: u32,
    /// Step limit for each component widening.
    pub widen_steps: u32,
}

impl Default for SandwichBudget {
    fn default() -> Self {
        SandwichBudget {
            max_period: PERIOD_CAP,
            time_limit: None,
            bits: DEFAULT_BITS,
            widen_steps: 80,
        }
    }
}

impl SandwichBudget {
    pub fn with_max_period(mut self, p: u32) -> Self {
        self.max_period = p;
        self
    }

    pub fn with_time_limit(mut self, t: Duration) -> Self {
        self.time_limit = Some(t);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SandwichResult {
    pub bound: EntropyBound,
    pub below: BracketSample,
    pub above: BracketSample,
    /// Periods whose centers were examined.
    pub periods: Vec<u32>,
    pub converged: bool,
}

struct Brackets<'a> {
    r: &'a RatInterval,
    bits: u32,
    widen_steps: u32,
    samples: Vec<BracketSample>,
    widened: HashSet<(u32, Rational)>,
}

impl<'a> Brackets<'a> {
    fn new(r: &'a RatInterval, budget: &SandwichBudget) -> Self {
        let three = Rational::int(3);
        let below = BracketSample {
            d: r.lo().clone().min(three),
            entropy: EntropyBound::zero(),
            side: Side::Below,
            witness_period: None,
        };
        let above = BracketSample {
            d: Rational::int(4),
            entropy: EntropyBound::exact(Rational::one()),
            side: Side::Above,
            witness_period: None,
        };
        Brackets {
            r,
            bits: budget.bits,
            widen_steps: budget.widen_steps,
            samples: vec![below, above],
            widened: HashSet::new(),
        }
    }

    fn push(&mut self, d: Rational, c: &Center, side: Side) {
        let s = BracketSample {
            d,
            entropy: c.entropy().clone(),
            side,
            witness_period: Some(c.period()),
        };
        if !self.samples.contains(&s) {
            self.samples.push(s);
        }
    }

    /// Widen `c` toward `target`; true when the whole way is certified.
    fn widen(&mut self, c: &Center, target: &Rational) -> bool {
        widen_component(c.r_enc(), c.period(), target, self.widen_steps, self.bits)
            .is_some_and(|front| &front == target)
    }

    fn add_centers(&mut self, centers: &[&Center]) {
        let (a, b) = (self.r.lo().clone(), self.r.hi().clone());
        let mut nearest_below: Option<&Center> = None;
        let mut nearest_above: Option<&Center> = None;
        for &c in centers {
            let e = c.r_enc();
            if e.hi() < &a {
                self.push(e.hi().clone(), c, Side::Below);
                if nearest_below.is_none_or(|n| n.r_enc().hi() < e.hi()) {
                    nearest_below = Some(c);
                }
            } else if e.lo() > &b {
                self.push(e.lo().clone(), c, Side::Above);
                if nearest_above.is_none_or(|n| n.r_enc().lo() > e.lo()) {
                    nearest_above = Some(c);
                }
            } else if e.is_point() && self.r.is_point() {
                self.push(a.clone(), c, Side::Below);
                self.push(b.clone(), c, Side::Above);
            } else if self.widened.insert((c.period(), e.lo().clone())) {
                if self.widen(c, &a) {
                    self.push(a.clone(), c, Side::Below);
                }
                if self.widen(c, &b) {
                    self.push(b.clone(), c, Side::Above);
                }
            }
        }
        if let Some(c) = nearest_below {
            if self.widened.insert((c.period(), c.r_enc().lo().clone())) && self.widen(c, &b) {
                self.push(b.clone(), c, Side::Above);
            }
        }
        if let Some(c) = nearest_above {
            if self.widened.insert((c.period(), c.r_enc().lo().clone())) && self.widen(c, &a) {
                self.push(a.clone(), c, Side::Below);
            }
        }
    }

    fn best(&self, side: Side) -> &BracketSample {
        let it = self.samples.iter().filter(|s| s.side == side);
        match side {
            Side::Below => it.max_by(|x, y| x.entropy.lo().cmp(y.entropy.lo())),
            Side::Above => it.min_by(|x, y| x.entropy.hi().cmp(y.entropy.hi())),
        }
        .expect("boundary samples are always present")
    }

    fn result(&self, periods: Vec<u32>, eps: &Rational) -> SandwichResult {
        let below = self.best(Side::Below).clone();
        let above = self.best(Side::Above).clone();
        let (lo, hi) = (below.entropy.lo().clone(), above.entropy.hi().clone());
        debug_assert!(lo <= hi, "inconsistent bracket [{lo}, {hi}]");
        let enc = RatInterval::spanning(lo.clone(), hi.clone());
        let converged = &(&hi - &lo) < eps;
        SandwichResult {
            bound: EntropyBound::from_enclosure(&enc, 128, Provenance::Sandwich),
            below,
            above,
            periods,
            converged,
        }
    }
}

fn check_query(r: &RatInterval) -> Result<(), LogisticError> {
    if r.lo().is_negative() || *r.hi() > 4 {
        return Err(LogisticError::InvalidArgument(format!("parameter {r} outside [0,4]")));
    }
    Ok(())
}

/// Every bracket sample for `r` from centers of period `<= p_max`, sorted by
/// parameter, including the boundary samples at `min(r.lo, 3)` and 4.
pub fn collect_brackets(
    r: &RatInterval,
    p_max: u32,
    cache: &mut CenterCache,
) -> Result<Vec<BracketSample>, LogisticError> {
    check_query(r)?;
    let budget = SandwichBudget::default();
    cache.ensure(p_max.min(PERIOD_CAP))?;
    let mut br = Brackets::new(r, &budget);
    br.add_centers(&cache.centers_up_to(p_max));
    let mut out = br.samples;
    out.sort_by(|x, y| x.d.cmp(&y.d).then(x.side.cmp(&y.side)));
    Ok(out)
}

/// Bound `h(r)` to width below `eps`, raising the period until the samples
/// on both sides agree or the budget runs out.
pub fn entropy_at(
    r: &RatInterval,
    eps: &Rational,
    budget: &SandwichBudget,
    cache: &mut CenterCache,
) -> Result<SandwichResult, LogisticError> {
    check_query(r)?;
    if !eps.is_positive() {
        return Err(LogisticError::InvalidArgument(format!("eps {eps} must be positive")));
    }
    if budget.max_period == 0 || budget.max_period > PERIOD_CAP {
        return Err(LogisticError::InvalidArgument(format!(
            "max period {} outside 1..={PERIOD_CAP}",
            budget.max_period
        )));
    }
    let start = Instant::now();
    let mut br = Brackets::new(r, budget);
    if *r.hi() <= 3 || (r.is_point() && *r.lo() == 4) {
        let value = if *r.hi() <= 3 { Rational::zero() } else { Rational::one() };
        let mut res = br.result(Vec::new(), eps);
        res.bound = EntropyBound::exact(value);
        res.converged = true;
        return Ok(res);
    }
    let mut periods = Vec::new();
    for p in 1..=budget.max_period {
        if budget.time_limit.is_some_and(|t| start.elapsed() > t) {
            break;
        }
        cache.ensure_period(p)?;
        br.add_centers(&cache.centers_up_to(p));
        periods.push(p);
        let res = br.result(periods.clone(), eps);
        if res.converged {
            return Ok(res);
        }
    }
    Err(LogisticError::BudgetExceeded(Box::new(br.result(periods, eps))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn pt(s: &str) -> RatInterval {
        RatInterval::point(q(s))
    }

    #[test]
    fn boundary_values_are_exact() {
        let mut cache = CenterCache::in_memory();
        let b = SandwichBudget::default();
        let r = entropy_at(&pt("2.9"), &q("0.001"), &b, &mut cache).unwrap();
        assert_eq!(r.bound, EntropyBound::zero());
        let r = entropy_at(&pt("4"), &q("0.001"), &b, &mut cache).unwrap();
        assert_eq!(r.bound, EntropyBound::exact(Rational::one()));
        assert!(entropy_at(&pt("4.5"), &q("0.001"), &b, &mut cache).is_err());
    }

    #[test]
    fn period_doubling_region_is_zero() {
        let mut cache = CenterCache::in_memory();
        let b = SandwichBudget::default().with_max_period(4);
        let res = entropy_at(&pt("3.5"), &q("1e-9"), &b, &mut cache).unwrap();
        assert_eq!(res.bound.lo(), &Rational::zero());
        assert_eq!(res.bound.hi(), &Rational::zero());
        assert_eq!(res.bound.provenance(), Provenance::Sandwich);
        assert_eq!(res.above.witness_period, Some(4));
    }

    #[test]
    fn inside_the_period_three_window() {
        let mut cache = CenterCache::in_memory();
        let b = SandwichBudget::default().with_max_period(3);
        let res = entropy_at(&pt("3.835"), &q("1e-6"), &b, &mut cache).unwrap();
        let golden = ((1.0 + 5f64.sqrt()) / 2.0).log2();
        assert!(res.bound.lo().to_f64() <= golden && golden <= res.bound.hi().to_f64());
        assert_eq!(res.below.witness_period, Some(3));
        assert_eq!(res.above.witness_period, Some(3));
    }

    #[test]
    fn budget_exhaustion_keeps_a_valid_bracket() {
        let mut cache = CenterCache::in_memory();
        let b = SandwichBudget::default().with_max_period(3);
        match entropy_at(&pt("3.7"), &q("1e-6"), &b, &mut cache) {
            Err(LogisticError::BudgetExceeded(res)) => {
                assert!(!res.converged);
                assert!(res.bound.lo() <= res.bound.hi());
                assert!(res.below.d <= q("3.7") && res.above.d >= q("3.7"));
            }
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
    }
}

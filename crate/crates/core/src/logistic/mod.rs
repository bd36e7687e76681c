//! The logistic family `f_r(x) = r x (1 - x)`: superattracting centers,
//! their Markov partitions and entropies, attracting-cycle detection with
//! component widening, and the sandwich algorithm for `h(r)`.

mod cache;
mod cycles;
mod sandwich;

pub use cache::{decode_line, encode_line, CacheError, CenterCache, CACHE_SCHEMA, CACHE_VERSION};
pub use cycles::{attracting_cycle_at, certify_component_box, widen_component, CycleVerdict};
pub use sandwich::{collect_brackets, entropy_at, BracketSample, SandwichBudget, SandwichResult, Side};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::entropy::EntropyBound;
use crate::interval_maps::QuadMap;
use crate::numkit::{refine_root, root_isolate_with, IterMapExpr, Precision, RatInterval, Rational};
use crate::symbolic::{Sft, SftError};

/// Largest period accepted by [`enumerate_centers`].
pub const PERIOD_CAP: u32 = 10;

/// Working precision for root isolation and orbit enclosures.
pub const DEFAULT_BITS: u32 = 96;

/// Entropy precision stored with each center.
pub fn center_eps() -> Rational {
    Rational::pow2(-32)
}

/// Root enclosure width used when none is given.
pub fn default_width() -> Rational {
    Rational::pow2(-40)
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LogisticError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("could not separate the critical orbit of the period-{period} center at {r}")]
    Refinement { period: u32, r: String },
    #[error("budget exceeded; best bracket {}", .0.bound)]
    BudgetExceeded(Box<SandwichResult>),
    #[error(transparent)]
    Sft(#[from] SftError),
    #[error(transparent)]
    Cache(#[from] CacheError),
}

/// A superattracting parameter with its critical-orbit combinatorics.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCenter")]
pub struct Center {
    r_enc: RatInterval,
    period: u32,
    /// `orbit_order[j] = k` when `f^k(c)` is the `j`-th smallest orbit point,
    /// `k` in `1..=period`.
    orbit_order: Vec<u32>,
    sft: Sft,
    entropy: EntropyBound,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCenter {
    r_enc: RatInterval,
    period: u32,
    orbit_order: Vec<u32>,
    sft: Sft,
    entropy: EntropyBound,
}

impl TryFrom<RawCenter> for Center {
    type Error = String;

    fn try_from(raw: RawCenter) -> Result<Self, String> {
        let p = raw.period;
        if p == 0 || p > 64 {
            return Err(format!("period {p} out of range"));
        }
        if !raw.r_enc.lo().is_positive() || *raw.r_enc.hi() >= 4 {
            return Err(format!("parameter {} outside (0,4)", raw.r_enc));
        }
        let mut seen = raw.orbit_order.clone();
        seen.sort_unstable();
        if seen != (1..=p).collect::<Vec<_>>() {
            return Err("orbit_order is not a permutation of 1..=period".into());
        }
        if raw.sft.alphabet() != p as usize + 1 {
            return Err("SFT alphabet must be period + 1".into());
        }
        Ok(Center {
            r_enc: raw.r_enc,
            period: p,
            orbit_order: raw.orbit_order,
            sft: raw.sft,
            entropy: raw.entropy,
        })
    }
}

impl Center {
    pub fn r_enc(&self) -> &RatInterval {
        &self.r_enc
    }

    pub fn period(&self) -> u32 {
        self.period
    }

    pub fn orbit_order(&self) -> &[u32] {
        &self.orbit_order
    }

    pub fn sft(&self) -> &Sft {
        &self.sft
    }

    pub fn entropy(&self) -> &EntropyBound {
        &self.entropy
    }

    /// Build a center from a root enclosure of `P_p`, refining it until the
    /// critical orbit separates.
    pub fn from_root(r_enc: RatInterval, period: u32) -> Result<Center, LogisticError> {
        let (r_enc, points) = separated_orbit(r_enc, period)?;
        let mut idx: Vec<usize> = (0..points.len()).collect();
        idx.sort_by(|&a, &b| points[a].lo().cmp(points[b].lo()));
        let orbit_order: Vec<u32> = idx.iter().map(|&i| i as u32 + 1).collect();
        let sft = partition_sft(&orbit_order);
        let entropy = sft.entropy(&center_eps())?;
        Ok(Center {
            r_enc,
            period,
            orbit_order,
            sft,
            entropy,
        })
    }
}

/// Enclosures of `f^k(c)`, `k = 1..=p`, pairwise disjoint and inside `(0,1)`,
/// together with the (possibly refined) parameter enclosure.
fn separated_orbit(mut r_enc: RatInterval, p: u32) -> Result<(RatInterval, Vec<RatInterval>), LogisticError> {
    let expr = IterMapExpr::critical_return(p);
    let mut bits = DEFAULT_BITS;
    for _ in 0..12 {
        let q = QuadMap::with_enclosure(r_enc.clone())
            .map_err(|e| LogisticError::InvalidArgument(e.to_string()))?;
        let prec = Precision::Bits(bits);
        let mut points = Vec::with_capacity(p as usize);
        let mut x = RatInterval::point(Rational::half());
        for k in 1..=p {
            x = q.iterate_enclosure(&x, 1, prec);
            // the orbit returns to c exactly
            points.push(if k == p { RatInterval::point(Rational::half()) } else { x.clone() });
        }
        if orbit_separated(&points) {
            return Ok((r_enc, points));
        }
        let w = r_enc.width() * Rational::pow2(-32);
        r_enc = refine_root(&expr, &r_enc, &w, bits);
        bits *= 2;
    }
    Err(LogisticError::Refinement {
        period: p,
        r: r_enc.mid().to_decimal(12),
    })
}

fn orbit_separated(points: &[RatInterval]) -> bool {
    let mut sorted: Vec<&RatInterval> = points.iter().collect();
    sorted.sort_by(|a, b| a.lo().cmp(b.lo()));
    sorted.first().is_some_and(|x| x.lo().is_positive())
        && sorted.last().is_some_and(|x| *x.hi() < 1)
        && sorted.windows(2).all(|w| w[0].hi() < w[1].lo())
}

/// The Markov SFT of a center from the ordering of its critical orbit.
///
/// Partition points are `0 < y_1 < ... < y_p < 1` with atom `A_j` between
/// the `j`-th and `(j+1)`-th point. `f` is monotone on each atom, so the image
/// of an atom is the span of the images of its endpoints, read off from
/// `f(0) = f(1) = 0` and `f(f^k(c)) = f^{k+1}(c)`. An atom maps onto the run of
/// atoms between those images; atoms meeting the image in a single point are
/// not included.
pub fn partition_sft(orbit_order: &[u32]) -> Sft {
    let p = orbit_order.len();
    // position in [0, y_1, ..., y_p, 1] of each orbit index k = 1..=p
    let mut pos = vec![0usize; p + 1];
    for (j, &k) in orbit_order.iter().enumerate() {
        pos[k as usize] = j + 1;
    }
    let image_pos = |q: usize| -> usize {
        if q == 0 || q == p + 1 {
            0
        } else {
            let k = orbit_order[q - 1] as usize;
            pos[k % p + 1]
        }
    };
    let mut allowed = vec![vec![false; p + 1]; p + 1];
    for (j, row) in allowed.iter_mut().enumerate() {
        let (a, b) = (image_pos(j), image_pos(j + 1));
        let (lo, hi) = (a.min(b), a.max(b));
        for cell in row.iter_mut().take(hi).skip(lo) {
            *cell = true;
        }
    }
    Sft::new(allowed).expect("square matrix")
}

/// Partition point enclosures `[0, y_1, ..., y_p, 1]` and the Markov SFT.
pub fn markov_partition(center: &Center) -> Result<(Vec<RatInterval>, Sft), LogisticError> {
    let (_, points) = separated_orbit(center.r_enc.clone(), center.period)?;
    let mut sorted = points;
    sorted.sort_by(|a, b| a.lo().cmp(b.lo()));
    let mut all = vec![RatInterval::point(Rational::zero())];
    all.extend(sorted);
    all.push(RatInterval::point(Rational::one()));
    Ok((all, partition_sft(&center.orbit_order)))
}

/// Entropy of the center's Markov SFT with width at most `eps`.
pub fn center_entropy(center: &Center, eps: &Rational) -> Result<EntropyBound, LogisticError> {
    Ok(center.sft.entropy(eps)?)
}

/// Centers of one period plus root cells that could not be certified.
#[derive(Clone, Debug, Default)]
pub struct CenterTable {
    pub centers: Vec<Center>,
    pub unresolved: Vec<(u32, RatInterval)>,
}

/// Primitive-period centers of period exactly `p`, given the centers of
/// every proper divisor of `p`.
pub fn centers_of_period(
    p: u32,
    divisor_centers: &[Center],
    width: &Rational,
) -> Result<CenterTable, LogisticError> {
    if p == 0 || p > PERIOD_CAP {
        return Err(LogisticError::InvalidArgument(format!("period {p} outside 1..={PERIOD_CAP}")));
    }
    if !width.is_positive() {
        return Err(LogisticError::InvalidArgument("width must be positive".into()));
    }
    let expr = IterMapExpr::critical_return(p);
    let dom = RatInterval::new(Rational::zero(), Rational::int(4)).expect("ordered");
    let iso = root_isolate_with(&expr, &dom, width, DEFAULT_BITS);
    let mut table = CenterTable {
        unresolved: iso.unresolved.into_iter().map(|c| (p, c)).collect(),
        ..CenterTable::default()
    };
    for root in iso.roots {
        if !root.lo().is_positive() || *root.hi() >= 4 {
            continue;
        }
        if is_inherited(&expr, &root, divisor_centers, p) {
            continue;
        }
        table.centers.push(Center::from_root(root, p)?);
    }
    Ok(table)
}

/// Whether a root of `P_p` is a root of `P_q` for a proper divisor `q`: the
/// two enclosures are refined together until they separate. Enclosures that
/// still overlap at `2^-256` are taken to share their root.
fn is_inherited(expr: &IterMapExpr, root: &RatInterval, divisor_centers: &[Center], p: u32) -> bool {
    let cap = Rational::pow2(-256);
    divisor_centers
        .iter()
        .filter(|c| c.period < p && p.is_multiple_of(c.period))
        .any(|c| {
            let (mut a, mut b) = (root.clone(), c.r_enc.clone());
            let other = IterMapExpr::critical_return(c.period);
            loop {
                if !a.intersects(&b) {
                    return false;
                }
                if (a.is_point() && b.is_point()) || (a.width() <= cap && b.width() <= cap) {
                    return true;
                }
                let wa = a.width() * Rational::half();
                let wb = b.width() * Rational::half();
                a = refine_root(expr, &a, &wa, DEFAULT_BITS);
                b = refine_root(&other, &b, &wb, DEFAULT_BITS);
            }
        })
}

/// All primitive-period centers with period `<= p_max`, sorted by period
/// and then by parameter.
pub fn enumerate_centers(p_max: u32, width: &Rational) -> Result<CenterTable, LogisticError> {
    if p_max == 0 || p_max > PERIOD_CAP {
        return Err(LogisticError::InvalidArgument(format!("p_max {p_max} outside 1..={PERIOD_CAP}")));
    }
    let mut all = CenterTable::default();
    for p in 1..=p_max {
        let t = centers_of_period(p, &all.centers, width)?;
        all.centers.extend(t.centers);
        all.unresolved.extend(t.unresolved);
    }
    Ok(all)
}

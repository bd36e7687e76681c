//! Horseshoe certificates for interval maps and a search that streams
//! improving entropy lower bounds `log2(p)/n`.
//!
//! A `(p,n)`-horseshoe is a family of `p` disjoint closed intervals
//! `J_1 < ... < J_p` such that every `f^n(J_i)` contains a neighborhood of
//! their convex hull. Containment is strict at both ends of the hull, in `ℝ`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interval_maps::{Lap, PwlMap, QuadMap, DEFAULT_NODE_CAP};
use crate::numkit::{log2_enclosure, Precision, RatInterval, Rational};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CertError {
    #[error("a horseshoe needs at least two intervals, got {0}")]
    TooFew(usize),
    #[error("iterate must be at least 1")]
    ZeroIterate,
    #[error("interval {0} is degenerate or leaves [0,1]")]
    BadInterval(String),
    #[error("intervals {0} and {1} are not separated by a gap")]
    NoGap(String, String),
}

/// A candidate `(p,n)`-horseshoe.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCert")]
pub struct HorseshoeCert {
    n: u32,
    intervals: Vec<RatInterval>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCert {
    n: u32,
    intervals: Vec<RatInterval>,
}

impl TryFrom<RawCert> for HorseshoeCert {
    type Error = CertError;

    fn try_from(raw: RawCert) -> Result<Self, CertError> {
        HorseshoeCert::new(raw.n, raw.intervals)
    }
}

impl HorseshoeCert {
    pub fn new(n: u32, intervals: Vec<RatInterval>) -> Result<Self, CertError> {
        if n == 0 {
            return Err(CertError::ZeroIterate);
        }
        if intervals.len() < 2 {
            return Err(CertError::TooFew(intervals.len()));
        }
        for j in &intervals {
            if j.is_point() || j.lo().is_negative() || *j.hi() > 1 {
                return Err(CertError::BadInterval(j.to_string()));
            }
        }
        for w in intervals.windows(2) {
            if w[0].hi() >= w[1].lo() {
                return Err(CertError::NoGap(w[0].to_string(), w[1].to_string()));
            }
        }
        Ok(HorseshoeCert { n, intervals })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn p(&self) -> usize {
        self.intervals.len()
    }

    pub fn intervals(&self) -> &[RatInterval] {
        &self.intervals
    }

    /// Convex hull of the intervals.
    pub fn hull(&self) -> RatInterval {
        let lo = self.intervals[0].lo().clone();
        let hi = self.intervals[self.intervals.len() - 1].hi().clone();
        RatInterval::new(lo, hi).expect("intervals are ordered")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }
}

/// A verified certificate with an enclosure of `log2(p)/n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBoundRecord {
    pub cert: HorseshoeCert,
    pub bound: RatInterval,
}

impl fmt::Display for LowerBoundRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{}\t{}\t{}",
            self.cert.p(),
            self.cert.n(),
            self.bound.lo().to_decimal(12),
            self.bound.hi().to_decimal(12)
        )
    }
}

/// Maps that horseshoes can be checked and searched on.
pub trait HorseshoeMap {
    /// Whether every `f^n(J_i)` certainly contains an open neighborhood of
    /// the hull of the certificate.
    fn certify(&self, cert: &HorseshoeCert, bits: u32) -> bool;

    /// Monotone laps of `f^n`, exact or approximate, used to propose
    /// candidates. `cache` carries the previous iterate between calls with
    /// increasing `n`. `None` ends the search (resource cap).
    fn proposal_laps(&self, n: u32, cache: &mut Option<PwlMap>, node_cap: usize) -> Option<Vec<Lap>>;

    /// Turn a lap of the proposal iterate and a target into an interval `J`
    /// with `f^n(J) ⊇ target`, or `None` when that cannot be certified.
    fn refine(&self, lap: &Lap, target: &RatInterval, n: u32, bits: u32) -> Option<RatInterval>;
}

impl HorseshoeMap for PwlMap {
    fn certify(&self, cert: &HorseshoeCert, _bits: u32) -> bool {
        let Ok(g) = self.iterate(cert.n()) else {
            return false;
        };
        let hull = cert.hull();
        cert.intervals().iter().all(|j| match g.image(j) {
            Ok(img) => img.lo() < hull.lo() && img.hi() > hull.hi(),
            Err(_) => false,
        })
    }

    fn proposal_laps(&self, n: u32, cache: &mut Option<PwlMap>, node_cap: usize) -> Option<Vec<Lap>> {
        let g = match cache.take() {
            Some(prev) if n > 1 => self.compose(&prev, node_cap).ok()?,
            _ => self.iterate_capped(n, node_cap).ok()?,
        };
        let laps = g.laps();
        *cache = Some(g);
        Some(laps)
    }

    fn refine(&self, lap: &Lap, target: &RatInterval, _n: u32, _bits: u32) -> Option<RatInterval> {
        lap_preimage(lap, target)
    }
}

const QUAD_BITS_CAP: u32 = 4096;

impl HorseshoeMap for QuadMap {
    /// Sound inner bound: by the intermediate value theorem `f^n(J)` contains
    /// every value between `f^n(lo J)` and `f^n(hi J)`. Precision doubles
    /// until the endpoint enclosures separate from the hull or a cap is hit.
    fn certify(&self, cert: &HorseshoeCert, bits: u32) -> bool {
        let hull = cert.hull();
        cert.intervals().iter().all(|j| quad_covers(self, j, cert.n(), &hull, bits))
    }

    /// Turning points of `f^n` are the preimages of `1/2` under `f^k`,
    /// `k < n`; they are located in floating point at the midpoint parameter.
    fn proposal_laps(&self, n: u32, _cache: &mut Option<PwlMap>, node_cap: usize) -> Option<Vec<Lap>> {
        let r = self.param().mid().to_f64();
        let mut level = vec![0.5f64];
        let mut cuts = vec![0.0, 0.5, 1.0];
        for _ in 1..n {
            let mut next = Vec::with_capacity(level.len() * 2);
            for y in level {
                let disc = 1.0 - 4.0 * y / r;
                if disc >= 0.0 {
                    let d = disc.sqrt();
                    next.push(0.5 * (1.0 - d));
                    next.push(0.5 * (1.0 + d));
                }
            }
            cuts.extend_from_slice(&next);
            if cuts.len() > node_cap {
                return None;
            }
            level = next;
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let g = |mut x: f64| {
            for _ in 0..n {
                x = r * x * (1.0 - x);
            }
            x.clamp(0.0, 1.0)
        };
        let rat = |x: f64| Rational::from_f64(x).expect("finite");
        let laps = cuts
            .windows(2)
            .filter(|w| w[0] < w[1])
            .map(|w| {
                let (ya, yb) = (g(w[0]), g(w[1]));
                Lap {
                    domain: RatInterval::new(rat(w[0]), rat(w[1])).expect("sorted"),
                    image: RatInterval::spanning(rat(ya), rat(yb)),
                    increasing: (ya != yb).then_some(yb > ya),
                }
            })
            .collect();
        Some(laps)
    }

    /// Proposals only: crossings are located in floating point and the
    /// resulting certificate is verified rigorously afterwards.
    fn refine(&self, lap: &Lap, target: &RatInterval, n: u32, _bits: u32) -> Option<RatInterval> {
        let inc = lap.increasing?;
        let r = self.param().mid().to_f64();
        let (x0, x1) = (lap.domain.lo().to_f64(), lap.domain.hi().to_f64());
        let lo_cross = crossing(r, n, x0, x1, target.lo().to_f64(), inc)?;
        let hi_cross = crossing(r, n, x0, x1, target.hi().to_f64(), inc)?;
        // keep the outer point on each side so the image overshoots the target
        let (a, b) = if inc {
            (lo_cross.0, hi_cross.1)
        } else {
            (hi_cross.1, lo_cross.0)
        };
        RatInterval::new(Rational::from_f64(a)?, Rational::from_f64(b)?).ok()
    }
}

fn quad_covers(f: &QuadMap, j: &RatInterval, n: u32, hull: &RatInterval, bits: u32) -> bool {
    let mut b = bits.max(16);
    loop {
        let prec = Precision::Bits(b);
        let a = f.iterate_enclosure(&RatInterval::point(j.lo().clone()), n, prec);
        let c = f.iterate_enclosure(&RatInterval::point(j.hi().clone()), n, prec);
        let below = |e: &RatInterval| e.hi() < hull.lo();
        let above = |e: &RatInterval| e.lo() > hull.hi();
        if (below(&a) && above(&c)) || (above(&a) && below(&c)) {
            return true;
        }
        let undecided = |e: &RatInterval| e.contains(hull.lo()) || e.contains(hull.hi());
        if !(undecided(&a) || undecided(&c)) || b >= QUAD_BITS_CAP {
            return false;
        }
        b *= 2;
    }
}

/// Bracket the crossing of `f^n` through level `y` on `[x0,x1]` in floating
/// point. Returns `(below, above)` with `f^n(below) < y < f^n(above)`.
fn crossing(r: f64, n: u32, x0: f64, x1: f64, y: f64, inc: bool) -> Option<(f64, f64)> {
    let g = |mut x: f64| {
        for _ in 0..n {
            x = r * x * (1.0 - x);
        }
        x
    };
    let (mut below, mut above) = if inc { (x0, x1) } else { (x1, x0) };
    if g(below) >= y || g(above) <= y {
        return None;
    }
    for _ in 0..64 {
        let m = 0.5 * (below + above);
        if m == below || m == above {
            break;
        }
        if g(m) < y {
            below = m;
        } else {
            above = m;
        }
    }
    Some((below, above))
}

fn lap_preimage(lap: &Lap, target: &RatInterval) -> Option<RatInterval> {
    let a = lap.preimage(target.lo())?;
    let b = lap.preimage(target.hi())?;
    Some(RatInterval::spanning(a, b))
}

/// Check a certificate against `f`. `true` is always sound; for the logistic
/// family `false` may only mean the precision cap was reached.
pub fn check_certificate<M: HorseshoeMap + ?Sized>(f: &M, cert: &HorseshoeCert) -> bool {
    check_certificate_with(f, cert, 64)
}

pub fn check_certificate_with<M: HorseshoeMap + ?Sized>(f: &M, cert: &HorseshoeCert, bits: u32) -> bool {
    f.certify(cert, bits)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_n: u32,
    pub max_p: usize,
    /// Depth of the dyadic grid used for fallback targets and for the
    /// logistic proposal interpolant.
    pub grid_depth: u32,
    pub bits: u32,
    pub node_cap: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_n: 12,
            max_p: 1 << 16,
            grid_depth: 4,
            bits: 32,
            node_cap: DEFAULT_NODE_CAP,
        }
    }
}

impl SearchBudget {
    pub fn with_max_n(max_n: u32) -> Self {
        SearchBudget {
            max_n,
            ..Self::default()
        }
    }
}

/// Stream of certified lower bounds with strictly increasing `bound.lo`.
pub fn search_lower_bounds<M: HorseshoeMap>(f: &M, budget: SearchBudget) -> LowerBoundSearch<'_, M> {
    LowerBoundSearch {
        f,
        budget,
        cache: None,
        n: 0,
        best: None,
        done: false,
    }
}

pub struct LowerBoundSearch<'a, M: HorseshoeMap> {
    f: &'a M,
    budget: SearchBudget,
    cache: Option<PwlMap>,
    n: u32,
    best: Option<Rational>,
    done: bool,
}

impl<M: HorseshoeMap> LowerBoundSearch<'_, M> {
    fn best_at(&self, laps: Vec<Lap>, n: u32) -> Option<HorseshoeCert> {
        let laps: Vec<Lap> = laps.into_iter().filter(|l| l.increasing.is_some()).collect();
        let mut targets = lap_targets(&laps, n);
        let mut found = self.best_for_targets(&laps, &targets, n);
        if found.is_none() {
            targets = grid_targets(self.budget.grid_depth);
            found = self.best_for_targets(&laps, &targets, n);
        }
        found
    }

    fn best_for_targets(&self, laps: &[Lap], targets: &[RatInterval], n: u32) -> Option<HorseshoeCert> {
        // rank targets by the number of intervals the proposal map offers
        let mut ranked: Vec<(usize, usize)> = targets
            .iter()
            .enumerate()
            .map(|(i, t)| (select(proposal_intervals(laps, t), t, self.budget.max_p).len(), i))
            .filter(|(p, _)| *p >= 2)
            .collect();
        ranked.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut best: Option<HorseshoeCert> = None;
        for (proposed, i) in ranked.into_iter().take(4) {
            if best.as_ref().is_some_and(|c| c.p() >= proposed) {
                break;
            }
            let t = &targets[i];
            let js: Vec<RatInterval> = laps
                .iter()
                .filter(|l| l.image.encloses(t))
                .filter_map(|l| self.f.refine(l, t, n, self.budget.bits))
                .collect();
            let js = select(js, t, self.budget.max_p);
            let Ok(cert) = HorseshoeCert::new(n, js) else {
                continue;
            };
            if !check_certificate_with(self.f, &cert, self.budget.bits) {
                continue;
            }
            if best.as_ref().is_none_or(|c| cert.p() > c.p()) {
                best = Some(cert);
            }
        }
        best
    }
}

fn proposal_intervals(laps: &[Lap], t: &RatInterval) -> Vec<RatInterval> {
    laps.iter()
        .filter(|l| l.image.encloses(t))
        .filter_map(|l| lap_preimage(l, t))
        .collect()
}

/// Keep intervals strictly inside the target, greedily enforce strict gaps
/// and cap the count. Any subfamily of a horseshoe is again one.
fn select(mut js: Vec<RatInterval>, t: &RatInterval, max_p: usize) -> Vec<RatInterval> {
    js.retain(|j| j.lo() > t.lo() && j.hi() < t.hi() && !j.is_point());
    js.sort_by(|a, b| a.lo().cmp(b.lo()).then(a.hi().cmp(b.hi())));
    let mut out: Vec<RatInterval> = Vec::new();
    for j in js {
        if out.len() >= max_p {
            break;
        }
        if out.last().is_none_or(|last| last.hi() < j.lo()) {
            out.push(j);
        }
    }
    out
}

/// Targets shrunk from the widest lap images by `width / 2^k`.
fn lap_targets(laps: &[Lap], n: u32) -> Vec<RatInterval> {
    let mut images: Vec<RatInterval> = laps.iter().map(|l| l.image.clone()).collect();
    images.sort_by(|a, b| b.width().cmp(&a.width()).then(a.lo().cmp(b.lo())));
    images.dedup();
    images.truncate(4);
    let mut out = Vec::new();
    for img in images {
        let w = img.width();
        if !w.is_positive() {
            continue;
        }
        for k in 1..=(n as i64 + 3) {
            let d = &w * &Rational::pow2(-k);
            out.push(RatInterval::new(img.lo() + &d, img.hi() - &d).expect("shrunk target"));
        }
    }
    out
}

fn grid_targets(depth: u32) -> Vec<RatInterval> {
    let m = 1i64 << depth.clamp(1, 6);
    let mut out = Vec::new();
    for i in 0..m {
        for j in (i + 1)..=m {
            out.push(RatInterval::new(Rational::frac(i, m), Rational::frac(j, m)).expect("ordered"));
        }
    }
    out
}

impl<M: HorseshoeMap> Iterator for LowerBoundSearch<'_, M> {
    type Item = LowerBoundRecord;

    fn next(&mut self) -> Option<LowerBoundRecord> {
        while !self.done && self.n < self.budget.max_n {
            self.n += 1;
            let n = self.n;
            let Some(laps) = self.f.proposal_laps(n, &mut self.cache, self.budget.node_cap) else {
                self.done = true;
                break;
            };
            let Some(cert) = self.best_at(laps, n) else {
                continue;
            };
            let bound = horseshoe_bound(cert.p(), n, self.budget.bits);
            if self.best.as_ref().is_some_and(|b| bound.lo() <= b) {
                continue;
            }
            self.best = Some(bound.lo().clone());
            return Some(LowerBoundRecord { cert, bound });
        }
        None
    }
}

/// Outward-rounded enclosure of `log2(p)/n`.
pub fn horseshoe_bound(p: usize, n: u32, bits: u32) -> RatInterval {
    let enc = log2_enclosure(&RatInterval::point(Rational::int(p as i64)), bits + 8)
        .expect("p >= 1");
    let n = Rational::int(i64::from(n));
    let lo = (enc.lo() / &n).floor_dyadic(bits).max(Rational::zero());
    let hi = (enc.hi() / &n).ceil_dyadic(bits);
    RatInterval::new(lo, hi).expect("ordered")
}

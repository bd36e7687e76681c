use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::MapError;
use crate::numkit::{RatInterval, Rational};

/// Default node cap for iterated compositions.
pub const DEFAULT_NODE_CAP: usize = 1_000_000;

/// A continuous piecewise-linear self-map of `[0,1]`, stored as the nodes of
/// its graph. The map is the linear interpolation between consecutive nodes.
///
/// Nodes are kept canonical: x-coordinates strictly increase from 0 to 1 and
/// no interior node lies on the line through its neighbors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PwlMap {
    nodes: Vec<(Rational, Rational)>,
}

/// A maximal monotone piece of a PWL map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lap {
    pub domain: RatInterval,
    pub image: RatInterval,
    /// `Some(true)` increasing, `Some(false)` decreasing, `None` constant.
    pub increasing: Option<bool>,
}

impl Lap {
    /// The unique point of the lap mapped to `y`, if `y` is in the image and
    /// the lap is strictly monotone.
    pub fn preimage(&self, y: &Rational) -> Option<Rational> {
        let inc = self.increasing?;
        if !self.image.contains(y) {
            return None;
        }
        let (y0, y1) = if inc {
            (self.image.lo(), self.image.hi())
        } else {
            (self.image.hi(), self.image.lo())
        };
        let (x0, x1) = (self.domain.lo(), self.domain.hi());
        Some(x0 + &((y - y0) * (x1 - x0) / (y1 - y0)))
    }
}

impl PwlMap {
    /// Validate and canonicalize a node list.
    pub fn new(nodes: Vec<(Rational, Rational)>) -> Result<Self, MapError> {
        if nodes.len() < 2 {
            return Err(MapError::InvalidNodes("need at least two nodes".into()));
        }
        if !nodes[0].0.is_zero() || nodes[nodes.len() - 1].0 != 1 {
            return Err(MapError::InvalidNodes("x must run from 0 to 1".into()));
        }
        for w in nodes.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(MapError::InvalidNodes(format!(
                    "x-coordinates not strictly increasing at {}",
                    w[1].0
                )));
            }
        }
        let unit = RatInterval::unit();
        if let Some((_, y)) = nodes.iter().find(|(_, y)| !unit.contains(y)) {
            return Err(MapError::InvalidNodes(format!("value {y} outside [0,1]")));
        }
        Ok(Self::from_sorted(nodes))
    }

    fn from_sorted(nodes: Vec<(Rational, Rational)>) -> Self {
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(nodes.len());
        for node in nodes {
            while out.len() >= 2 {
                let (a, b) = (&out[out.len() - 2], &out[out.len() - 1]);
                // collinear: (yb - ya)(xc - xb) == (yc - yb)(xb - xa)
                if (&b.1 - &a.1) * (&node.0 - &b.0) == (&node.1 - &b.1) * (&b.0 - &a.0) {
                    out.pop();
                } else {
                    break;
                }
            }
            out.push(node);
        }
        PwlMap { nodes: out }
    }

    pub fn identity() -> Self {
        PwlMap {
            nodes: vec![(Rational::zero(), Rational::zero()), (Rational::one(), Rational::one())],
        }
    }

    /// The full tent map `x ↦ 1 - |1 - 2x|`.
    pub fn tent() -> Self {
        PwlMap {
            nodes: vec![
                (Rational::zero(), Rational::zero()),
                (Rational::half(), Rational::one()),
                (Rational::one(), Rational::zero()),
            ],
        }
    }

    pub fn nodes(&self) -> &[(Rational, Rational)] {
        &self.nodes
    }

    pub fn segment_count(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational, MapError> {
        if x.is_negative() || *x > 1 {
            return Err(MapError::Domain(x.to_string()));
        }
        Ok(self.eval_unchecked(x))
    }

    fn eval_unchecked(&self, x: &Rational) -> Rational {
        // first node with node.x >= x
        let i = self.nodes.partition_point(|(nx, _)| nx < x);
        let (xi, yi) = &self.nodes[i];
        if xi == x {
            return yi.clone();
        }
        let (x0, y0) = &self.nodes[i - 1];
        y0 + &((yi - y0) * (x - x0) / (xi - x0))
    }

    /// Exact range of the map over `[a,b] ⊆ [0,1]`.
    pub fn image(&self, iv: &RatInterval) -> Result<RatInterval, MapError> {
        let ya = self.eval(iv.lo())?;
        let yb = self.eval(iv.hi())?;
        let mut lo = ya.clone().min(yb.clone());
        let mut hi = ya.max(yb);
        let start = self.nodes.partition_point(|(nx, _)| nx <= iv.lo());
        for (nx, ny) in &self.nodes[start..] {
            if nx >= iv.hi() {
                break;
            }
            if *ny < lo {
                lo = ny.clone();
            }
            if *ny > hi {
                hi = ny.clone();
            }
        }
        Ok(RatInterval::new(lo, hi).expect("ordered"))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PwlMap, cap: usize) -> Result<PwlMap, MapError> {
        let breaks = &self.nodes;
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(inner.nodes.len() * 2);
        for seg in inner.nodes.windows(2) {
            let ((x0, y0), (x1, y1)) = (&seg[0], &seg[1]);
            out.push((x0.clone(), self.eval_unchecked(y0)));
            if y0 == y1 {
                continue;
            }
            let (lo, hi) = if y0 < y1 { (y0, y1) } else { (y1, y0) };
            let first = breaks.partition_point(|(bx, _)| bx <= lo);
            let last = breaks.partition_point(|(bx, _)| bx < hi);
            let inside = &breaks[first..last];
            let dx_dy = (x1 - x0) / (y1 - y0);
            let mut push = |(bx, by): &(Rational, Rational)| {
                out.push((x0 + &((bx - y0) * &dx_dy), by.clone()));
            };
            if y0 < y1 {
                inside.iter().for_each(&mut push);
            } else {
                inside.iter().rev().for_each(&mut push);
            }
            if out.len() > cap {
                return Err(MapError::NodeCap { cap });
            }
        }
        let (xl, yl) = inner.nodes.last().expect("nonempty");
        out.push((xl.clone(), self.eval_unchecked(yl)));
        let composed = PwlMap::from_sorted(out);
        if composed.nodes.len() > cap {
            return Err(MapError::NodeCap { cap });
        }
        Ok(composed)
    }

    /// Exact `f^n` with the default node cap.
    pub fn iterate(&self, n: u32) -> Result<PwlMap, MapError> {
        self.iterate_capped(n, DEFAULT_NODE_CAP)
    }

    /// Exact `f^n`; fails with `NodeCap` once an intermediate iterate has more
    /// than `cap` nodes.
    pub fn iterate_capped(&self, n: u32, cap: usize) -> Result<PwlMap, MapError> {
        if n == 0 {
            return Err(MapError::InvalidArgument("iterate count must be >= 1".into()));
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = self.compose(&acc, cap)?;
        }
        Ok(acc)
    }

    /// Total variation: the sum of absolute node differences.
    pub fn variation(&self) -> Rational {
        self.nodes
            .windows(2)
            .fold(Rational::zero(), |acc, w| acc + (&w[1].1 - &w[0].1).abs())
    }

    pub fn slopes(&self) -> impl Iterator<Item = Rational> + '_ {
        self.nodes
            .windows(2)
            .map(|w| (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0))
    }

    /// `Some(s)` when every segment has slope `+s` or `-s`.
    pub fn slope_detect(&self) -> Option<Rational> {
        let mut it = self.slopes().map(|s| s.abs());
        let first = it.next()?;
        it.all(|s| s == first).then_some(first)
    }

    /// Maximal monotone pieces, left to right.
    pub fn laps(&self) -> Vec<Lap> {
        let dir = |w: &[(Rational, Rational)]| match w[1].1.cmp(&w[0].1) {
            std::cmp::Ordering::Greater => Some(true),
            std::cmp::Ordering::Less => Some(false),
            std::cmp::Ordering::Equal => None,
        };
        let mut laps = Vec::new();
        let mut start = 0;
        let n = self.nodes.len();
        while start + 1 < n {
            let d = dir(&self.nodes[start..start + 2]);
            let mut end = start + 1;
            while end + 1 < n && d.is_some() && dir(&self.nodes[end..end + 2]) == d {
                end += 1;
            }
            let (xa, ya) = &self.nodes[start];
            let (xb, yb) = &self.nodes[end];
            laps.push(Lap {
                domain: RatInterval::new(xa.clone(), xb.clone()).expect("ordered"),
                image: RatInterval::spanning(ya.clone(), yb.clone()),
                increasing: d,
            });
            start = end;
        }
        laps
    }

    /// Values of the map at the ends of its laps (turning values, plus
    /// `f(0)` and `f(1)`), sorted and deduplicated.
    pub fn turning_values(&self) -> Vec<Rational> {
        let mut v: Vec<Rational> = self
            .laps()
            .iter()
            .flat_map(|l| [l.image.lo().clone(), l.image.hi().clone()])
            .collect();
        v.sort();
        v.dedup();
        v
    }
}

impl fmt::Debug for PwlMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.nodes.iter().map(|(x, y)| format!("({x}, {y})")))
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PwlJson {
    nodes: Vec<[Rational; 2]>,
}

impl Serialize for PwlMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PwlJson {
            nodes: self.nodes.iter().map(|(x, y)| [x.clone(), y.clone()]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PwlMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = PwlJson::deserialize(d)?;
        PwlMap::new(raw.nodes.into_iter().map(|[x, y]| (x, y)).collect())
            .map_err(serde::de::Error::custom)
    }
}

impl PwlMap {
    pub fn from_json(s: &str) -> Result<Self, MapError> {
        serde_json::from_str(s).map_err(|e| MapError::Format(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("rationals always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::frac(p, q)
    }

    fn slope_two() -> PwlMap {
        PwlMap::new(vec![
            (r(0, 1), r(0, 1)),
            (r(3, 8), r(3, 4)),
            (r(5, 8), r(1, 4)),
            (r(1, 1), r(1, 1)),
        ])
        .unwrap()
    }

    #[test]
    fn eval_identity_and_nodes() {
        assert_eq!(PwlMap::identity().eval(&r(1, 3)).unwrap(), r(1, 3));
        let f = slope_two();
        assert_eq!(f.eval(&r(3, 8)).unwrap(), r(3, 4));
        assert_eq!(f.eval(&r(1, 1)).unwrap(), r(1, 1));
        assert_eq!(f.eval(&r(1, 2)).unwrap(), r(1, 2));
        assert!(matches!(f.eval(&r(3, 2)), Err(MapError::Domain(_))));
    }

    #[test]
    fn construction_rejects_bad_nodes() {
        assert!(PwlMap::new(vec![(r(0, 1), r(0, 1))]).is_err());
        assert!(PwlMap::new(vec![(r(0, 1), r(0, 1)), (r(1, 2), r(1, 1))]).is_err());
        assert!(PwlMap::new(vec![(r(0, 1), r(0, 1)), (r(0, 1), r(1, 2)), (r(1, 1), r(1, 1))]).is_err());
        assert!(PwlMap::new(vec![(r(0, 1), r(-1, 2)), (r(1, 1), r(1, 1))]).is_err());
    }

    #[test]
    fn collinear_nodes_are_dropped() {
        let f = PwlMap::new(vec![(r(0, 1), r(0, 1)), (r(1, 3), r(1, 3)), (r(1, 1), r(1, 1))]).unwrap();
        assert_eq!(f, PwlMap::identity());
    }

    #[test]
    fn iterate_identity_and_slopes() {
        assert_eq!(PwlMap::identity().iterate(5).unwrap(), PwlMap::identity());
        let f = slope_two();
        assert_eq!(f.iterate(1).unwrap(), f);
        let f2 = f.iterate(2).unwrap();
        assert!(f2.slopes().all(|s| s.abs() == Rational::int(4)));
    }

    #[test]
    fn variation_values() {
        assert_eq!(PwlMap::identity().variation(), Rational::one());
        let f = slope_two();
        assert_eq!(f.variation(), Rational::int(2));
        for n in 1..=10 {
            assert_eq!(f.iterate(n).unwrap().variation(), Rational::int(2).powi(n));
        }
    }

    #[test]
    fn slope_detection() {
        assert_eq!(slope_two().slope_detect(), Some(Rational::int(2)));
        assert_eq!(PwlMap::identity().slope_detect(), Some(Rational::one()));
        let mixed = PwlMap::new(vec![(r(0, 1), r(0, 1)), (r(1, 2), r(1, 1)), (r(1, 1), r(1, 2))]).unwrap();
        assert_eq!(mixed.slope_detect(), None);
    }

    #[test]
    fn node_cap_enforced() {
        let err = PwlMap::tent().iterate_capped(12, 100).unwrap_err();
        assert!(matches!(err, MapError::NodeCap { cap: 100 }));
    }

    #[test]
    fn tent_laps() {
        let t3 = PwlMap::tent().iterate(3).unwrap();
        let laps = t3.laps();
        assert_eq!(laps.len(), 8);
        assert!(laps.iter().all(|l| l.image == RatInterval::unit()));
        assert_eq!(laps[1].preimage(&r(1, 4)), Some(r(1, 8) + r(3, 32)));
    }

    #[test]
    fn exact_image_includes_interior_extrema() {
        let t = PwlMap::tent();
        let iv = RatInterval::new(r(1, 4), r(3, 4)).unwrap();
        assert_eq!(t.image(&iv).unwrap(), RatInterval::new(r(1, 2), r(1, 1)).unwrap());
    }

    #[test]
    fn json_shape() {
        let json = slope_two().to_json();
        assert_eq!(json, r#"{"nodes":[["0/1","0/1"],["3/8","3/4"],["5/8","1/4"],["1/1","1/1"]]}"#);
        assert_eq!(PwlMap::from_json(&json).unwrap(), slope_two());
        assert!(PwlMap::from_json(r#"{"nodes":[["0","0"],["1","2"]]}"#).is_err());
    }
}

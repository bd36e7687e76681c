//! Maps realizing a prescribed entropy.

use super::{MapError, PwlMap};
use crate::numkit::{pow2_enclosure, RatInterval, Rational};

/// The three-branch map with slopes `s, -s, s`, fixing 0 and 1.
///
/// Breakpoints sit at `(1+s)/(4s)` and `(3s-1)/(4s)` with values `(1+s)/4`
/// and `(3-s)/4`; the third branch is `s(x - (3s-1)/(4s)) + (3-s)/4`, the
/// unique line of slope `s` joining the second branch to `f(1) = 1`.
/// Requires `1 <= s <= 3`; `s = 1` degenerates to the identity.
pub fn constant_slope_map(s: &Rational) -> Result<PwlMap, MapError> {
    if *s < 1 || *s > 3 {
        return Err(MapError::InvalidArgument(format!("slope {s} outside [1,3]")));
    }
    if *s == 1 {
        return Ok(PwlMap::identity());
    }
    let one = Rational::one();
    let four = Rational::int(4);
    let x1 = (&one + s) / (&four * s);
    let x2 = (Rational::int(3) * s - &one) / (&four * s);
    let y1 = (&one + s) / &four;
    let y2 = (Rational::int(3) - s) / &four;
    PwlMap::new(vec![
        (Rational::zero(), Rational::zero()),
        (x1, y1),
        (x2, y2),
        (one.clone(), one),
    ])
}

/// A constant-slope map whose entropy lies within `2^-bits` of `h ⊆ [0,1]`.
///
/// The slope is the simplest rational inside a certified enclosure of `2^h`,
/// so exact inputs such as `h = 1` or a tight enclosure of `log2(3/2)`
/// produce the slopes 2 and 3/2 exactly.
pub fn realize_computable(h: &RatInterval, bits: u32) -> Result<PwlMap, MapError> {
    constant_slope_map(&realization_slope(h, bits)?)
}

/// The slope `s'` chosen by [`realize_computable`].
pub fn realization_slope(h: &RatInterval, bits: u32) -> Result<Rational, MapError> {
    if h.lo().is_negative() || *h.hi() > 1 {
        return Err(MapError::InvalidArgument(format!("entropy {h} outside [0,1]")));
    }
    if h.hi().is_zero() {
        return Ok(Rational::one());
    }
    let s = pow2_enclosure(h, bits)?;
    if s.width() > Rational::pow2(-(bits as i64)) {
        return Err(MapError::Precision(format!(
            "enclosure of 2^h has width {} > 2^-{bits}; supply a narrower h",
            s.width().to_decimal(12)
        )));
    }
    Ok(Rational::simplest_between(s.lo(), s.hi()))
}

/// Truncated staircase: block `k < depth` occupies `[1 - 2^-k, 1 - 2^-(k+1)]`
/// and carries a copy of the constant-slope map for `h_seq[k]`, scaled by
/// `2^-(k+1)` on both axes; the tail `[1 - 2^-depth, 1]` is the identity.
pub fn realize_sigma1(h_seq: &[RatInterval], depth: usize, bits: u32) -> Result<PwlMap, MapError> {
    if depth == 0 || depth > h_seq.len() {
        return Err(MapError::InvalidArgument(format!(
            "depth {depth} must be in 1..={}",
            h_seq.len()
        )));
    }
    for (k, h) in h_seq.iter().enumerate() {
        if !h.lo().is_positive() || *h.hi() > 1 {
            return Err(MapError::InvalidArgument(format!("h[{k}] = {h} outside (0,1]")));
        }
        if k > 0 && h.hi() < h_seq[k - 1].lo() {
            return Err(MapError::InvalidArgument(format!("sequence decreases at index {k}")));
        }
    }
    let mut nodes = vec![(Rational::zero(), Rational::zero())];
    for (k, h) in h_seq.iter().take(depth).enumerate() {
        let block = realize_computable(h, bits)?;
        let offset = Rational::one() - Rational::pow2(-(k as i64));
        let scale = Rational::pow2(-(k as i64) - 1);
        for (x, y) in block.nodes().iter().skip(1) {
            nodes.push((&offset + &(x * &scale), &offset + &(y * &scale)));
        }
    }
    nodes.push((Rational::one(), Rational::one()));
    PwlMap::new(nodes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::log2_enclosure;

    fn r(p: i64, q: i64) -> Rational {
        Rational::frac(p, q)
    }

    #[test]
    fn slope_two_nodes() {
        let f = realize_computable(&RatInterval::point(Rational::one()), 20).unwrap();
        let expect = vec![(r(0, 1), r(0, 1)), (r(3, 8), r(3, 4)), (r(5, 8), r(1, 4)), (r(1, 1), r(1, 1))];
        assert_eq!(f.nodes(), expect.as_slice());
    }

    #[test]
    fn zero_entropy_is_identity() {
        let f = realize_computable(&RatInterval::point(Rational::zero()), 20).unwrap();
        assert_eq!(f, PwlMap::identity());
    }

    #[test]
    fn three_halves_breakpoints() {
        let h = log2_enclosure(&RatInterval::point(r(3, 2)), 40).unwrap();
        let f = realize_computable(&h, 20).unwrap();
        let expect = vec![(r(0, 1), r(0, 1)), (r(5, 12), r(5, 8)), (r(7, 12), r(3, 8)), (r(1, 1), r(1, 1))];
        assert_eq!(f.nodes(), expect.as_slice());
    }

    #[test]
    fn rejects_out_of_range_and_wide_inputs() {
        assert!(realize_computable(&RatInterval::point(r(3, 2)), 10).is_err());
        let wide = RatInterval::new(r(1, 4), r(3, 4)).unwrap();
        assert!(matches!(realize_computable(&wide, 10), Err(MapError::Precision(_))));
    }

    #[test]
    fn single_block_staircase() {
        let f = realize_sigma1(&[RatInterval::point(Rational::one())], 1, 20).unwrap();
        assert_eq!(f.eval(&r(3, 16)).unwrap(), r(3, 8));
        assert_eq!(f.eval(&r(1, 2)).unwrap(), r(1, 2));
        assert_eq!(f.eval(&r(7, 8)).unwrap(), r(7, 8));
    }

    #[test]
    fn staircase_blocks_are_invariant() {
        let l = log2_enclosure(&RatInterval::point(r(3, 2)), 40).unwrap();
        let f = realize_sigma1(&[l.clone(), l, RatInterval::point(Rational::one())], 3, 20).unwrap();
        for (a, b) in [(r(0, 1), r(1, 2)), (r(1, 2), r(3, 4)), (r(3, 4), r(7, 8))] {
            let img = f.image(&RatInterval::new(a.clone(), b.clone()).unwrap()).unwrap();
            assert_eq!(img, RatInterval::new(a, b).unwrap());
        }
        assert_eq!(f.slope_detect(), None);
    }
}

use entrolab::interval_maps::{
    constant_slope_map, entropy_via_variation, realize_computable, realize_sigma1, PwlMap, VariationStatus,
};
use entrolab::numkit::{log2_enclosure, RatInterval, Rational};
use proptest::prelude::*;

fn r(p: i64, q: i64) -> Rational {
    Rational::frac(p, q)
}

fn slope_two() -> PwlMap {
    PwlMap::new(vec![(r(0, 1), r(0, 1)), (r(3, 8), r(3, 4)), (r(5, 8), r(1, 4)), (r(1, 1), r(1, 1))]).unwrap()
}

#[test]
fn evaluation_examples() {
    assert_eq!(PwlMap::identity().eval(&r(1, 3)).unwrap(), r(1, 3));
    let f = slope_two();
    assert_eq!(f.eval(&r(3, 8)).unwrap(), r(3, 4));
    assert_eq!(f.eval(&r(1, 1)).unwrap(), r(1, 1));
    assert!(f.eval(&r(3, 2)).is_err());
}

#[test]
fn iterate_examples() {
    assert_eq!(PwlMap::identity().iterate(5).unwrap(), PwlMap::identity());
    let f = slope_two();
    assert_eq!(f.iterate(1).unwrap(), f);
    let f2 = f.iterate(2).unwrap();
    assert!(f2.slopes().all(|s| s.abs() == Rational::int(4)));
    assert!(f.iterate(0).is_err());
}

#[test]
fn variation_examples() {
    assert_eq!(PwlMap::identity().variation(), Rational::one());
    let f = slope_two();
    assert_eq!(f.variation(), Rational::int(2));
    for n in 1..=10 {
        assert_eq!(f.iterate(n).unwrap().variation(), Rational::int(2).powi(n), "n = {n}");
    }
}

#[test]
fn variation_entropy_examples() {
    let id = entropy_via_variation(&PwlMap::identity(), 4, 20).unwrap();
    assert_eq!(id.status, VariationStatus::Certified);
    assert_eq!(id.bound.as_interval(), RatInterval::point(Rational::zero()));
    let two = entropy_via_variation(&slope_two(), 4, 20).unwrap();
    assert_eq!(two.status, VariationStatus::Certified);
    assert_eq!(two.bound.as_interval(), RatInterval::point(Rational::one()));
    let three_halves = entropy_via_variation(&constant_slope_map(&r(3, 2)).unwrap(), 4, 30).unwrap();
    assert!(three_halves.bound.contains(&"0.5849625007".parse().unwrap()));
}

#[test]
fn realization_examples() {
    assert_eq!(realize_computable(&RatInterval::point(Rational::zero()), 20).unwrap(), PwlMap::identity());
    assert_eq!(realize_computable(&RatInterval::point(Rational::one()), 20).unwrap(), slope_two());
    let h = log2_enclosure(&RatInterval::point(r(3, 2)), 40).unwrap();
    let f = realize_computable(&h, 20).unwrap();
    assert_eq!(
        f.nodes(),
        &[(r(0, 1), r(0, 1)), (r(5, 12), r(5, 8)), (r(7, 12), r(3, 8)), (r(1, 1), r(1, 1))]
    );
}

#[test]
fn staircase_examples() {
    let l = log2_enclosure(&RatInterval::point(r(3, 2)), 40).unwrap();
    let one = RatInterval::point(Rational::one());
    let f = realize_sigma1(&[l.clone(), l, one.clone()], 3, 20).unwrap();
    assert_eq!(f.slope_detect(), None);
    // block widths 1/2, 1/4, 1/8 and an identity tail of width 1/8
    for n in 1..=6u32 {
        let v = f.iterate(n).unwrap().variation();
        assert!(v >= Rational::int(2).powi(n) / Rational::int(4), "n = {n}");
        let expect = r(3, 2).powi(n) * r(3, 4) + Rational::int(2).powi(n) / Rational::int(8) + r(1, 8);
        assert_eq!(v, expect);
    }
    let single = realize_sigma1(&[one], 1, 20).unwrap();
    assert_eq!(single.eval(&r(3, 16)).unwrap(), r(3, 8));
    assert_eq!(single.eval(&r(3, 4)).unwrap(), r(3, 4));
}

#[test]
fn slope_detection() {
    assert_eq!(slope_two().slope_detect(), Some(Rational::int(2)));
    assert_eq!(PwlMap::identity().slope_detect(), Some(Rational::one()));
}

#[test]
fn json_format() {
    let f = PwlMap::from_json(r#"{"nodes":[["0","0"],["3/8","0.75"],["5/8","1/4"],["1","1"]]}"#).unwrap();
    assert_eq!(f, slope_two());
    assert_eq!(PwlMap::from_json(&f.to_json()).unwrap(), f);
    for bad in [
        r#"{"nodes":[["0","0"]]}"#,
        r#"{"nodes":[["0","0"],["1/2","3/2"],["1","0"]]}"#,
        r#"{"nodes":[["0","0"],["1/2","1"],["1/2","0"],["1","0"]]}"#,
        r#"{"nodes":[["1/4","0"],["1","0"]]}"#,
        r#"[1,2]"#,
    ] {
        assert!(PwlMap::from_json(bad).is_err(), "{bad}");
    }
}

fn pwl_strategy() -> impl Strategy<Value = PwlMap> {
    (1usize..5, prop::collection::vec(0i64..=8, 6), prop::collection::vec(1i64..=4, 5)).prop_map(|(k, ys, gaps)| {
        let gaps = &gaps[..k];
        let total: i64 = gaps.iter().sum();
        let mut x = 0;
        let mut nodes = vec![(Rational::zero(), r(ys[0], 8))];
        for (i, g) in gaps.iter().enumerate() {
            x += g;
            nodes.push((r(x, total), r(ys[i + 1], 8)));
        }
        PwlMap::new(nodes).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn iterates_compose_exactly(f in pwl_strategy(), n in 1u32..=3, m in 1u32..=3) {
        let lhs = f.iterate(n + m).unwrap();
        let rhs = f.iterate(n).unwrap().compose(&f.iterate(m).unwrap(), usize::MAX).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        let x = r(3, 7);
        let y = f.iterate(m).unwrap().eval(&x).unwrap();
        prop_assert_eq!(lhs.eval(&x).unwrap(), f.iterate(n).unwrap().eval(&y).unwrap());
    }

    #[test]
    fn constant_slope_variation_law(num in 4i64..=12, n in 1u32..=10) {
        let s = r(num, 4);
        let f = constant_slope_map(&s).unwrap();
        prop_assert_eq!(f.slope_detect(), Some(s.clone()));
        prop_assert_eq!(f.iterate(n).unwrap().variation(), s.powi(n));
    }

    #[test]
    fn power_law(num in 5i64..=12, n in 1u32..=6) {
        let s = r(num, 4);
        let f = constant_slope_map(&s).unwrap();
        let h = entropy_via_variation(&f, 1, 40).unwrap().bound;
        let hn = entropy_via_variation(&f.iterate(n).unwrap(), 1, 40).unwrap().bound;
        let k = Rational::int(i64::from(n));
        let slack = Rational::pow2(-30);
        prop_assert!(hn.lo() <= &(&(h.hi() * &k) + &slack));
        prop_assert!((h.lo() * &k) <= (hn.hi() + &slack));
    }

    #[test]
    fn realization_round_trip(k in 0i64..=64) {
        let h = RatInterval::point(r(k, 64));
        let f = realize_computable(&h, 24).unwrap();
        let v = entropy_via_variation(&f, 3, 24).unwrap();
        prop_assert_eq!(v.status, VariationStatus::Certified);
        let w = Rational::pow2(-20);
        let widened = RatInterval::new(h.lo() - &w, h.hi() + &w).unwrap();
        prop_assert!(v.bound.as_interval().intersects(&widened));
    }

    #[test]
    fn staircase_block_depends_on_its_own_entropy(a in 1i64..=8, b in 1i64..=8, c in 9i64..=16, t in 0i64..=64) {
        // changing h_0 leaves block 1 untouched
        let h = |k: i64| RatInterval::point(r(k, 16));
        let f = realize_sigma1(&[h(a), h(c)], 2, 24).unwrap();
        let g = realize_sigma1(&[h(b), h(c)], 2, 24).unwrap();
        let x = r(1, 2) + r(t, 64) / Rational::int(4);
        prop_assert_eq!(f.eval(&x).unwrap(), g.eval(&x).unwrap());
        // block 1 is the block-0-free map scaled into [1/2, 3/4]
        let block = realize_computable(&h(c), 24).unwrap();
        let local = r(t, 64);
        let expect = r(1, 2) + block.eval(&local).unwrap() / Rational::int(4);
        prop_assert_eq!(f.eval(&x).unwrap(), expect);
    }
}

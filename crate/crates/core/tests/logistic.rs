use std::sync::OnceLock;

use entrolab::horseshoe::{search_lower_bounds, SearchBudget};
use entrolab::interval_maps::QuadMap;
use entrolab::logistic::{
    attracting_cycle_at, center_entropy, collect_brackets, default_width, entropy_at, enumerate_centers,
    markov_partition, CenterCache, CenterTable, CycleVerdict, SandwichBudget, Side,
};
use entrolab::numkit::{root_isolate, IterMapExpr, RatInterval, Rational};
use entrolab::{EntropyBound, Provenance};

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

fn iv(a: &str, b: &str) -> RatInterval {
    RatInterval::new(q(a), q(b)).unwrap()
}

fn table() -> &'static CenterTable {
    static T: OnceLock<CenterTable> = OnceLock::new();
    T.get_or_init(|| enumerate_centers(6, &default_width()).unwrap())
}

/// Transitions of the Markov partition computed in floating point at `r`:
/// atom `j` maps to atom `i` when the image of its endpoints overlaps the
/// interior of atom `i`.
fn float_transitions(r: f64, p: u32) -> Vec<Vec<usize>> {
    let f = |x: f64| r * x * (1.0 - x);
    let mut orbit = vec![];
    let mut x = 0.5;
    for _ in 0..p {
        x = f(x);
        orbit.push(x);
    }
    orbit[p as usize - 1] = 0.5;
    orbit.sort_by(f64::total_cmp);
    let mut pts = vec![0.0];
    pts.extend(orbit);
    pts.push(1.0);
    let atoms = pts.len() - 1;
    (0..atoms)
        .map(|j| {
            let (a, b) = (f(pts[j]), f(pts[j + 1]));
            let (lo, hi) = (a.min(b), a.max(b));
            (0..atoms)
                .filter(|&i| lo < pts[i + 1] - 1e-9 && hi > pts[i] + 1e-9)
                .collect()
        })
        .collect()
}

fn rows(z: &entrolab::symbolic::Sft) -> Vec<Vec<usize>> {
    let k = z.alphabet();
    (0..k).map(|a| (0..k).filter(|&b| z.allows(a, b)).collect()).collect()
}

#[test]
fn first_three_periods() {
    let t = enumerate_centers(3, &default_width()).unwrap();
    assert!(t.unresolved.is_empty());
    let c = &t.centers;
    assert_eq!(c.len(), 3);
    assert_eq!(c[0].r_enc(), &RatInterval::point(Rational::int(2)));
    assert_eq!(c[0].period(), 1);
    assert!(iv("3.23606", "3.23608").encloses(c[1].r_enc()));
    assert_eq!(c[1].period(), 2);
    assert!(iv("3.8318", "3.8319").encloses(c[2].r_enc()));
    assert_eq!(c[2].period(), 3);
    let one = enumerate_centers(1, &default_width()).unwrap();
    assert_eq!(one.centers.len(), 1);
    assert!(enumerate_centers(0, &default_width()).is_err());
    assert!(enumerate_centers(11, &default_width()).is_err());
}

#[test]
fn center_counts_per_period() {
    // primitive superattracting parameters in (0,4) for periods 1..=6
    let counts: Vec<usize> = (1..=6).map(|p| table().centers.iter().filter(|c| c.period() == p).count()).collect();
    assert_eq!(counts, vec![1, 1, 1, 2, 3, 5]);
}

#[test]
fn fixed_point_center_partition() {
    let c = &table().centers[0];
    let (pts, z) = markov_partition(c).unwrap();
    assert_eq!(
        pts,
        vec![
            RatInterval::point(Rational::zero()),
            RatInterval::point(Rational::half()),
            RatInterval::point(Rational::one())
        ]
    );
    assert_eq!(rows(&z), vec![vec![0], vec![0]]);
    assert_eq!(center_entropy(c, &q("1e-6")).unwrap().hi(), &Rational::zero());
}

#[test]
fn period_three_partition() {
    let c = table().centers.iter().find(|c| c.period() == 3).unwrap();
    let (pts, z) = markov_partition(c).unwrap();
    let approx: Vec<f64> = pts.iter().map(|p| p.mid().to_f64()).collect();
    for (got, want) in approx.iter().zip([0.0, 0.1543, 0.5, 0.9580, 1.0]) {
        assert!((got - want).abs() < 1e-4, "{approx:?}");
    }
    // the boundary-only transition a3 -> a1 is excluded
    assert_eq!(rows(&z), vec![vec![0, 1], vec![2], vec![1, 2], vec![0]]);
    let h = center_entropy(c, &q("1e-9")).unwrap();
    assert!(h.contains(&q("0.6942419136")));
}

#[test]
fn transitions_match_floating_point_partitions() {
    for c in &table().centers {
        let z = c.sft();
        let got = rows(z);
        let want = float_transitions(c.r_enc().mid().to_f64(), c.period());
        assert_eq!(got, want, "period {} at {}", c.period(), c.r_enc());
        for row in &got {
            assert!(row.windows(2).all(|w| w[1] == w[0] + 1), "rows are contiguous runs");
        }
    }
}

#[test]
fn cascade_centers_carry_zero_entropy() {
    let eps = q("1e-6");
    for c in table().centers.iter().filter(|c| c.period().is_power_of_two() && *c.r_enc().hi() < q("3.57")) {
        let h = center_entropy(c, &eps).unwrap();
        assert!(h.contains(&Rational::zero()) && h.hi() <= &eps, "period {}", c.period());
        // polynomial word growth
        let counts: Vec<u64> = (1..=12).map(|n| c.sft().count_words(n).to_string().parse().unwrap()).collect();
        assert!(counts[11] <= 12 * 12 * 12 * 8, "{counts:?}");
    }
}

#[test]
fn no_center_sits_on_a_divisor_root() {
    for c in &table().centers {
        let p = c.period();
        for d in (1..p).filter(|d| p % d == 0) {
            let iso = root_isolate(&IterMapExpr::critical_return(d), &iv("0", "4"), &Rational::pow2(-40));
            assert!(iso.roots.iter().all(|r| !r.intersects(c.r_enc())), "period {p} center at {}", c.r_enc());
        }
    }
}

#[test]
fn entropy_is_monotone_across_centers() {
    let eps = center_eps_f64();
    let mut cs: Vec<_> = table().centers.iter().collect();
    cs.sort_by_key(|a| a.r_enc().mid());
    for w in cs.windows(2) {
        let (a, b) = (w[0].entropy().lo().to_f64(), w[1].entropy().lo().to_f64());
        assert!(b >= a - 2.0 * eps, "{} then {}", w[0].r_enc(), w[1].r_enc());
    }
}

fn center_eps_f64() -> f64 {
    entrolab::logistic::center_eps().to_f64()
}

#[test]
fn derivative_criterion_examples() {
    assert!(attracting_cycle_at(&Rational::int(2), 1, 64).is_attracting());
    assert!(attracting_cycle_at(&q("3.2"), 2, 64).is_attracting());
    assert_eq!(attracting_cycle_at(&q("3.2"), 1, 64), CycleVerdict::NotAttracting);
    // inside the period-3 window, but not the period-6 doubling
    assert!(attracting_cycle_at(&q("3.835"), 3, 64).is_attracting());
    assert!(!attracting_cycle_at(&q("3.835"), 6, 64).is_attracting());
}

#[test]
fn brackets_around_three_and_a_half() {
    let mut cache = CenterCache::in_memory();
    let s = collect_brackets(&RatInterval::point(q("3.5")), 8, &mut cache).unwrap();
    let below = s.iter().find(|b| b.side == Side::Below && b.witness_period == Some(4)).unwrap();
    assert!(below.d > q("3.49") && below.d < q("3.5"));
    let above = s.iter().find(|b| b.side == Side::Above && b.witness_period == Some(8)).unwrap();
    assert!(above.d > q("3.55") && above.d < q("3.56"));
    for b in s.iter().filter(|b| b.witness_period.is_some_and(|p| p.is_power_of_two()) && b.d < q("3.57")) {
        assert_eq!(b.entropy.hi(), &Rational::zero());
    }
}

#[test]
fn brackets_at_an_exact_center() {
    let mut cache = CenterCache::in_memory();
    let s = collect_brackets(&RatInterval::point(Rational::int(2)), 2, &mut cache).unwrap();
    let hits: Vec<_> = s.iter().filter(|b| b.d == 2 && b.witness_period == Some(1)).collect();
    assert!(!hits.is_empty());
    assert!(hits.iter().all(|b| b.entropy == EntropyBound::zero().with_provenance(Provenance::Sft)
        || b.entropy.hi() == &Rational::zero()));
}

#[test]
fn brackets_near_four_use_the_boundary_record() {
    let mut cache = CenterCache::in_memory();
    let s = collect_brackets(&RatInterval::point(q("3.99")), 3, &mut cache).unwrap();
    let above: Vec<_> = s.iter().filter(|b| b.side == Side::Above).collect();
    assert_eq!(above.len(), 1);
    assert_eq!(above[0].d, Rational::int(4));
    assert_eq!(above[0].entropy, EntropyBound::exact(Rational::one()));
}

#[test]
fn sandwich_examples() {
    let mut cache = CenterCache::in_memory();
    let b = SandwichBudget::default();
    let two = entropy_at(&RatInterval::point(Rational::int(2)), &Rational::pow2(-10), &b, &mut cache).unwrap();
    assert_eq!(two.bound.as_interval(), RatInterval::point(Rational::zero()));
    let four = entropy_at(&RatInterval::point(Rational::int(4)), &Rational::pow2(-10), &b, &mut cache).unwrap();
    assert_eq!(four.bound.as_interval(), RatInterval::point(Rational::one()));
    let eps = Rational::pow2(-5);
    let half = entropy_at(&RatInterval::point(q("7/2")), &eps, &b, &mut cache).unwrap();
    assert!(half.bound.contains(&Rational::zero()) && half.bound.width() <= eps);
}

#[test]
fn sandwich_brackets_are_sound() {
    let mut cache = CenterCache::in_memory();
    let b = SandwichBudget::default().with_max_period(6);
    for r in ["3.1", "3.52", "3.63", "3.74", "3.831", "3.86", "3.95"] {
        let r = RatInterval::point(q(r));
        let eps = q("0.01");
        let res = match entropy_at(&r, &eps, &b, &mut cache) {
            Ok(res) => {
                assert!(res.bound.width() < eps);
                res
            }
            Err(entrolab::logistic::LogisticError::BudgetExceeded(res)) => *res,
            Err(e) => panic!("{e}"),
        };
        assert!(res.below.entropy.lo() <= res.above.entropy.hi());
        assert!(&res.below.d <= r.lo() && &res.above.d >= r.hi());
        assert_eq!(res.bound.lo(), res.below.entropy.lo());
        assert_eq!(res.bound.hi(), res.above.entropy.hi());
    }
}

#[test]
fn horseshoes_at_the_period_three_center_stay_below_its_entropy() {
    let c = table().centers.iter().find(|c| c.period() == 3).unwrap();
    let f = QuadMap::new(c.r_enc().mid()).unwrap();
    let h = center_entropy(c, &q("1e-6")).unwrap();
    let cap = h.hi() + &q("1e-6");
    for rec in search_lower_bounds(&f, SearchBudget::with_max_n(6)) {
        assert!(rec.bound.lo() <= &cap, "{rec}");
    }
}

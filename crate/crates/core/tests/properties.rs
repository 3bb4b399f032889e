use proptest::prelude::*;
use voterfit::chain::{Generator, StationaryDistribution, StubbornConfig};
use voterfit::estimate::{feasible_grid, fit_stubborn, log_likelihood, ObservationSeries, SearchDomain};
use voterfit::ingest::{binarize, share_to_count, ElectionRecord};
use voterfit::transient::{expected_count, transition_row, Propagator};

fn config(max_n: u32) -> impl Strategy<Value = StubbornConfig> {
    (2..=max_n)
        .prop_flat_map(|n| (Just(n), 1..=n))
        .prop_flat_map(|(n, total)| (Just(n), Just(total), 0..=total))
        .prop_map(|(n, total, s0)| StubbornConfig::new(n, s0, total - s0).unwrap())
}

fn config_and_state(max_n: u32) -> impl Strategy<Value = (StubbornConfig, u32)> {
    config(max_n).prop_flat_map(|c| (Just(c), c.lowest()..=c.highest()))
}

fn series(max_n: u32) -> impl Strategy<Value = ObservationSeries> {
    (3..=max_n).prop_flat_map(|n| (Just(n), prop::collection::vec((0.05f64..3.0, 1..n), 2..6))).prop_map(
        |(n, steps)| {
            let mut time = 0.0;
            let pairs: Vec<(f64, u32)> = steps
                .into_iter()
                .map(|(dt, k)| {
                    time += dt;
                    (time, k)
                })
                .collect();
            ObservationSeries::from_pairs(n, &pairs).unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rows_are_distributions((c, k) in config_and_state(40), t in 0.0f64..20.0) {
        let row = transition_row(&Generator::new(c), k, t).unwrap();
        prop_assert!((row.total() - 1.0).abs() < 1e-10);
        prop_assert!(row.probs.iter().all(|&p| p >= 0.0));
        let mean = expected_count(&Generator::new(c), k, t).unwrap();
        prop_assert!(mean >= c.lowest() as f64 - 1e-9 && mean <= c.highest() as f64 + 1e-9);
    }

    #[test]
    fn mirror_symmetry((c, k) in config_and_state(30), t in 0.0f64..10.0) {
        let n = c.n();
        let row = transition_row(&Generator::new(c), k, t).unwrap();
        let mirror = transition_row(&Generator::new(c.mirrored()), n - k, t).unwrap();
        for l in c.states() {
            prop_assert!((row.prob(l) - mirror.prob(n - l)).abs() < 1e-10);
        }
    }

    #[test]
    fn semigroup((c, k) in config_and_state(25), s in 0.0f64..5.0, t in 0.0f64..5.0) {
        let p = Propagator::new(&Generator::new(c));
        let direct = p.row(k, s + t).unwrap();
        let first = p.row(k, s).unwrap();
        for l in c.states() {
            let composed: f64 = c.states().map(|j| first.prob(j) * p.probability(j, l, t).unwrap()).sum();
            prop_assert!((direct.prob(l) - composed).abs() < 1e-9);
        }
    }

    #[test]
    fn stationary_law(c in config(100)) {
        let g = Generator::new(c);
        let pi = StationaryDistribution::of(&g);
        prop_assert!((pi.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let flow = g.apply_left(pi.probs());
        prop_assert!(flow.iter().all(|x| x.abs() < 1e-10));
        for k in c.lowest()..c.highest() {
            let forward = pi.prob(k) * g.rate(k, k + 1).unwrap();
            let back = pi.prob(k + 1) * g.rate(k + 1, k).unwrap();
            prop_assert!((forward - back).abs() < 1e-12);
        }
        let expected = c.n() as f64 * c.s1() as f64 / (c.s0() + c.s1()) as f64;
        prop_assert!((pi.mean() - expected).abs() < 1e-9);
    }

    #[test]
    fn long_run_forgets_the_start(c in config(12).prop_filter("mixing", |c| c.s0() > 0 && c.s1() > 0)) {
        let g = Generator::new(c);
        let pi = StationaryDistribution::of(&g);
        let row = transition_row(&g, c.lowest(), 1e4).unwrap();
        for k in c.states() {
            prop_assert!((row.prob(k) - pi.prob(k)).abs() < 1e-8);
        }
    }

    #[test]
    fn rounding(units in 0u32..=1000) {
        let share = units as f64 / 10.0;
        let count = share_to_count(share, 100);
        prop_assert!(count <= 100);
        prop_assert!((count as f64 - share).abs() <= 0.5);
        if units % 10 == 5 {
            prop_assert_eq!(count % 2, 0);
        }
    }

    #[test]
    fn binarize_ignores_other_parties(shares in prop::collection::vec((0u32..=600, 0u32..=400), 1..8)) {
        let mut full = Vec::new();
        let mut bare = Vec::new();
        for (i, &(a, b)) in shares.iter().enumerate() {
            let time = 1900.0 + i as f64;
            let target = a as f64 / 10.0;
            let other = b as f64 / 10.0;
            full.push(ElectionRecord {
                time,
                shares: [("A".to_string(), target), ("B".to_string(), other)].into(),
            });
            bare.push(ElectionRecord { time, shares: [("A".to_string(), target)].into() });
        }
        let with = binarize(&full, "A", 100).unwrap();
        let without = binarize(&bare, "A", 100).unwrap();
        prop_assert_eq!(&with, &without);
        prop_assert!(with.points().iter().all(|p| p.count <= 100));
    }

    #[test]
    fn fit_dominates_the_grid(s in series(14)) {
        let fit = fit_stubborn(&s, SearchDomain::Admissible).unwrap();
        prop_assert!(fit.loglik <= 0.0);
        for c in feasible_grid(&s, SearchDomain::Admissible) {
            let ll = log_likelihood(&c, &s).unwrap();
            prop_assert!(ll.finite().is_none_or(|v| v <= fit.loglik));
        }
        let both = fit_stubborn(&s, SearchDomain::BothSides).unwrap();
        prop_assert!(both.loglik <= fit.loglik);
    }
}

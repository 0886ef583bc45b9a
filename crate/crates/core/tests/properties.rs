use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use secretary_core::classes::{is_k_system, is_matroid_by_augmentation, random_downward_closed};
use secretary_core::edge::simulate_buckets;
use secretary_core::format::{parse_combination, parse_system, write_combination, write_system};
use secretary_core::hull::phull_contains_brute;
use secretary_core::{
    circuits_of, contract, greedy, opt_basis, parallel_extend, restrict, CombinationSystem, ElemSet, HullSystem,
    Independence, IndependenceSystem, Part, Rational, WeightedInstance,
};

fn weights(n: usize, rng: &mut ChaCha8Rng) -> WeightedInstance {
    WeightedInstance::new((0..n).map(|_| rng.gen_range(1.0..10.0)).collect()).unwrap()
}

fn matroid(kind: u8, n: usize, rng: &mut ChaCha8Rng) -> IndependenceSystem {
    match kind % 4 {
        0 => IndependenceSystem::uniform(n, rng.gen_range(0..=n)).unwrap(),
        1 => {
            let blocks = rng.gen_range(1..=n);
            let caps = (0..blocks).map(|_| rng.gen_range(0..3)).collect();
            IndependenceSystem::partition((0..n).map(|_| rng.gen_range(0..blocks)).collect(), caps).unwrap()
        }
        2 => {
            let v = rng.gen_range(2..6);
            let ends = (0..n).map(|_| (rng.gen_range(0..v), rng.gen_range(0..v))).collect();
            IndependenceSystem::graphic(v, ends).unwrap()
        }
        _ => {
            let right = rng.gen_range(1..5);
            let nbrs = (0..n)
                .map(|_| (0..right).filter(|_| rng.gen_bool(0.5)).collect())
                .collect();
            IndependenceSystem::transversal(right, nbrs).unwrap()
        }
    }
}

/// Any system: a matroid, a knapsack or a random downward-closed family.
fn system(kind: u8, n: usize, rng: &mut ChaCha8Rng) -> IndependenceSystem {
    match kind % 6 {
        4 => {
            let sizes: Vec<Rational> = (0..n).map(|_| Rational::from_integer(rng.gen_range(1..6))).collect();
            IndependenceSystem::knapsack(sizes, Rational::from_integer(rng.gen_range(1..12))).unwrap()
        }
        5 => random_downward_closed(n, 5, rng).unwrap(),
        k => matroid(k, n, rng),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn greedy_is_optimal_on_matroids(kind in 0u8..4, n in 1usize..9, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = matroid(kind, n, &mut rng);
        let w = weights(n, &mut rng);
        let g = greedy(&m, &w, m.ground());
        let (o, wo) = opt_basis(&m, &w, m.ground()).unwrap();
        prop_assert!((w.total(g) - wo).abs() < 1e-9);
        prop_assert_eq!(g, o);
    }

    #[test]
    fn greedy_is_k_approximate_on_k_systems(n in 1usize..8, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys = random_downward_closed(n, 5, &mut rng).unwrap();
        let k = (1..=n.max(1)).find(|&k| is_k_system(&sys, k).unwrap().holds).unwrap();
        let w = weights(n, &mut rng);
        let g = w.total(greedy(&sys, &w, sys.ground()));
        let (_, o) = opt_basis(&sys, &w, sys.ground()).unwrap();
        prop_assert!(k as f64 * g >= o - 1e-9, "k={} greedy={} opt={}", k, g, o);
    }

    #[test]
    fn circuits_form_an_antichain(kind in 0u8..6, n in 1usize..9, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys = system(kind, n, &mut rng);
        let cs = circuits_of(&sys, sys.ground(), None).unwrap();
        for (i, &c) in cs.iter().enumerate() {
            prop_assert!(!sys.independent(c));
            for e in c {
                prop_assert!(sys.independent(c.without(e)));
            }
            for (j, &d) in cs.iter().enumerate() {
                prop_assert!(i == j || !c.is_subset(d));
            }
        }
    }

    #[test]
    fn matroid_operations_stay_matroids(kind in 0u8..4, n in 2usize..8, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = matroid(kind, n, &mut rng);
        let y: ElemSet = (0..n).filter(|_| rng.gen_bool(0.6)).collect();
        let (r, _) = restrict(&m, y).unwrap();
        prop_assert!(is_matroid_by_augmentation(&r).unwrap());
        let i = greedy(&m, &weights(n, &mut rng), y);
        let (c, _) = contract(&m, i).unwrap();
        prop_assert!(is_matroid_by_augmentation(&c).unwrap());
        if let Some(e) = (0..n).find(|&e| !m.is_loop(e)) {
            let (p, _) = parallel_extend(&m, e).unwrap();
            prop_assert!(is_matroid_by_augmentation(&p).unwrap());
        }
    }

    #[test]
    fn hull_fast_path_matches_definition(kind in 0u8..6, n in 1usize..8, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys = system(kind, n, &mut rng);
        for x in sys.ground().subsets() {
            for e in sys.ground() {
                prop_assert_eq!(sys.hull_contains(x, e).unwrap(), phull_contains_brute(&sys, x, e));
            }
        }
    }

    #[test]
    fn systems_are_downward_closed(kind in 0u8..6, n in 1usize..9, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys = system(kind, n, &mut rng);
        prop_assert!(sys.check_downward_closed().is_ok());
        prop_assert!(sys.independent(ElemSet::EMPTY));
    }

    #[test]
    fn system_format_round_trips(kind in 0u8..6, n in 1usize..9, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys = system(kind, n, &mut rng);
        let text = write_system(&sys).unwrap();
        let back = parse_system(&text).unwrap();
        prop_assert_eq!(back.ground_size(), n);
        for x in sys.ground().subsets() {
            prop_assert_eq!(sys.independent(x), back.independent(x));
        }
        prop_assert_eq!(write_system(&back).unwrap(), text);
    }

    #[test]
    fn combination_format_round_trips(n in 2usize..9, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let split = rng.gen_range(1..n);
        let a: ElemSet = (0..=split).collect();
        let b: ElemSet = (split..n).collect();
        let comb = CombinationSystem::combine(
            n,
            vec![
                Part::on(matroid(rng.gen(), a.len(), &mut rng), a),
                Part::on(system(rng.gen(), b.len(), &mut rng), b).with_growth(2),
            ],
        )
        .unwrap();
        let text = write_combination(&comb).unwrap();
        let back = parse_combination(&text).unwrap();
        for x in comb.ground().subsets() {
            prop_assert_eq!(comb.independent(x), back.independent(x));
        }
        prop_assert_eq!(write_combination(&back).unwrap(), text);
    }

    /// `(1-p) E|R'| = p E|R|` and `(1-p) E|N'| = p E|N|`, summed exactly over
    /// every sample.
    #[test]
    fn bucket_expectations_balance(kind in 0u8..6, n in 1usize..8, seed: u64, p in 0.05f64..0.95) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys = system(kind, n, &mut rng);
        let w = weights(n, &mut rng);
        let mut e = [0.0f64; 4];
        for y in sys.ground().subsets() {
            let pr = p.powi(y.len() as i32) * (1.0 - p).powi((n - y.len()) as i32);
            let s = simulate_buckets(&sys, &w, y).unwrap().sizes();
            for (acc, &c) in e.iter_mut().zip(&s) {
                *acc += pr * c as f64;
            }
        }
        let [r, nn, rp, np] = e;
        prop_assert!(((1.0 - p) * rp - p * r).abs() < 1e-9, "R: {} vs {}", (1.0 - p) * rp, p * r);
        prop_assert!(((1.0 - p) * np - p * nn).abs() < 1e-9, "N: {} vs {}", (1.0 - p) * np, p * nn);
    }
}

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use secretary_core::assignment::{online_assignment, AssignmentInstance, Hyperedge, OptCache};
use secretary_core::classes::{check_extendible_via_contractions, random_downward_closed, verify_hierarchy};
use secretary_core::edge::{free_order_general, free_order_matroid};
use secretary_core::{CombinationSystem, ElemSet, Independence, IndependenceSystem, Part, WeightedInstance};

fn weights(n: usize, rng: &mut ChaCha8Rng) -> WeightedInstance {
    WeightedInstance::new((0..n).map(|_| rng.gen_range(1.0..10.0)).collect()).unwrap()
}

fn unit_partition(n: usize, rng: &mut ChaCha8Rng) -> IndependenceSystem {
    let blocks = (n / 2).max(1);
    IndependenceSystem::partition((0..n).map(|_| rng.gen_range(0..blocks)).collect(), vec![1; blocks]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn free_order_outputs_are_independent(n in 2usize..12, seed: u64, p in 0.0f64..0.95) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let comb = CombinationSystem::combine(
            n,
            vec![
                Part::on(unit_partition(n, &mut rng), ElemSet::full(n)),
                Part::on(random_downward_closed(n, 4, &mut rng).unwrap(), ElemSet::full(n)),
            ],
        )
        .unwrap();
        let w = weights(n, &mut rng);
        let run = free_order_general(&comb, &w, p, &mut rng).unwrap();
        prop_assert!(comb.independent(run.alg));
        prop_assert!((run.weight - w.total(run.alg)).abs() < 1e-9);
        prop_assert!(run.alg.is_disjoint(run.phases.y));

        let m = unit_partition(n, &mut rng);
        let run = free_order_matroid(&m, &w, &mut rng).unwrap();
        prop_assert!(m.independent(run.alg));
    }

    #[test]
    fn online_assignment_is_feasible(agents in 1usize..6, goods in 1usize..6, k in 1usize..3, seed: u64, p in 0.05f64..0.95) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        let mut systems = Vec::new();
        for a in 0..agents {
            let d = rng.gen_range(1..4);
            for _ in 0..d {
                let size = rng.gen_range(1..=k.min(goods));
                let mut g = ElemSet::EMPTY;
                while g.len() < size {
                    g.insert(rng.gen_range(0..goods));
                }
                edges.push(Hyperedge { agent: a, goods: g });
            }
            systems.push(IndependenceSystem::uniform(d, rng.gen_range(1..=d)).unwrap());
        }
        let w = weights(edges.len(), &mut rng);
        let inst = AssignmentInstance::new(agents, goods, edges, w, systems).unwrap();
        let cache = OptCache::new(&inst);
        let run = online_assignment(&cache, p, &mut rng).unwrap();
        prop_assert!(inst.is_feasible(run.alg));
        let (_, opt) = cache.get(ElemSet::full(agents)).unwrap();
        prop_assert!(run.weight <= opt + 1e-9);
        for a in &run.arrivals {
            prop_assert!(a.assigned.is_subset(a.proposed));
            prop_assert!(a.time >= p || a.assigned.is_empty());
        }
    }

    #[test]
    fn class_hierarchy_is_consistent(n in 1usize..7, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys = random_downward_closed(n, 5, &mut rng).unwrap();
        let h = verify_hierarchy(&sys, 4, None).unwrap();
        prop_assert!(h.consistent(), "{:?}", h.violations);
        for k in 1..=3 {
            prop_assert!(check_extendible_via_contractions(&sys, k).unwrap().biconditional_holds());
        }
    }
}

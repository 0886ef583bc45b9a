//! A hull that claims everything must be caught by the estimator.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use secretary_core::{ElemSet, HullSystem, Independence, IndependenceSystem, Result};
use secretary_harness::estimate::{probability_estimate, run_trials, Verdict, DEFAULT_Z};
use secretary_harness::gen;
use secretary_harness::runs::{edge_trial_on, EdgeAlg};

struct BrokenHull(IndependenceSystem);

impl Independence for BrokenHull {
    fn ground_size(&self) -> usize {
        self.0.ground_size()
    }

    fn independent(&self, x: ElemSet) -> bool {
        self.0.independent(x)
    }
}

impl HullSystem for BrokenHull {
    fn hull_contains(&self, _x: ElemSet, _e: usize) -> Result<bool> {
        Ok(true)
    }
}

fn min_frequency_verdict<S: HullSystem + ?Sized>(sys: &S, graph: &IndependenceSystem) -> (f64, Verdict) {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let w = gen::weights(graph.ground_size(), &mut rng);
    let opt = secretary_core::greedy(graph, &w, graph.ground());
    let trials = 20_000;
    let picks = run_trials(trials, 9, |_, rng| {
        Ok(edge_trial_on(sys, &w, EdgeAlg::General, 0.0, None, rng)?.1)
    })
    .unwrap();
    let elems = opt.to_vec();
    let hits: Vec<u64> = elems
        .iter()
        .map(|&e| picks.iter().filter(|s| s.contains(e)).count() as u64)
        .collect();
    let est = probability_estimate(&elems, &hits, trials, 0.25, DEFAULT_Z);
    (est.mean, est.verdict)
}

#[test]
fn broken_hull_fails_the_quarter_bound() {
    let graph = gen::graphic(6, 10, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
    let (good, v) = min_frequency_verdict(&graph, &graph);
    assert_ne!(v, Verdict::Fail, "correct hull: min frequency {good}");
    let (bad, v) = min_frequency_verdict(&BrokenHull(graph.clone()), &graph);
    assert_eq!(v, Verdict::Fail, "broken hull: min frequency {bad}");
}

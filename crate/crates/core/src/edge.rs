//! Free-order selection when elements arrive one at a time.
//!
//! Each run is split into a pure core that takes the phase sets and a
//! [`RevealOrder`], and a randomized wrapper that draws arrival times and
//! shuffles with the caller's RNG. The pure core is what exhaustive tests
//! enumerate.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hull::{core, HullSystem, RelevanceContext};
use crate::ops::greedy;
use crate::set::ElemSet;
use crate::system::{Independence, IndependenceSystem};
use crate::weights::WeightedInstance;

/// Arranges each batch of elements the algorithm is about to reveal.
pub trait RevealOrder {
    fn arrange(&mut self, items: &mut [usize]);
}

/// Uniformly random order via Fisher-Yates.
pub struct RandomOrder<'a, R: Rng + ?Sized>(pub &'a mut R);

impl<R: Rng + ?Sized> RevealOrder for RandomOrder<'_, R> {
    fn arrange(&mut self, items: &mut [usize]) {
        items.shuffle(self.0);
    }
}

/// Keeps each batch in ascending id order.
pub struct IdOrder;

impl RevealOrder for IdOrder {
    fn arrange(&mut self, _items: &mut [usize]) {}
}

const MAX_ENUM_BATCH: usize = 12;

fn factorial(m: usize) -> u64 {
    (1..=m as u64).product()
}

/// Reorders `items` into the permutation with Lehmer index `idx`.
fn apply_lehmer(items: &mut [usize], mut idx: u64) {
    let m = items.len();
    for i in 0..m {
        let f = factorial(m - 1 - i);
        let d = (idx / f) as usize;
        idx %= f;
        items[i..=i + d].rotate_right(1);
    }
}

struct Scripted {
    script: Vec<u64>,
    arities: Vec<u64>,
}

impl RevealOrder for Scripted {
    fn arrange(&mut self, items: &mut [usize]) {
        assert!(items.len() <= MAX_ENUM_BATCH, "batch too large to enumerate");
        let pos = self.arities.len();
        self.arities.push(factorial(items.len()));
        apply_lehmer(items, self.script.get(pos).copied().unwrap_or(0));
    }
}

/// Runs `run` once per combination of batch orders and returns each outcome
/// with its probability under uniformly random orders. `run` must be
/// deterministic given the orders it receives.
pub fn enumerate_orders<T>(mut run: impl FnMut(&mut dyn RevealOrder) -> T) -> Vec<(f64, T)> {
    let mut out = Vec::new();
    let mut script: Vec<u64> = Vec::new();
    loop {
        let mut s = Scripted {
            script: script.clone(),
            arities: Vec::new(),
        };
        let value = run(&mut s);
        let prob = s.arities.iter().map(|&a| 1.0 / a as f64).product();
        out.push((prob, value));
        let mut choices = script.clone();
        choices.resize(s.arities.len(), 0);
        match (0..choices.len()).rev().find(|&i| choices[i] + 1 < s.arities[i]) {
            Some(i) => {
                choices.truncate(i + 1);
                choices[i] += 1;
                script = choices;
            }
            None => break,
        }
    }
    out
}

/// Phase membership derived from per-element arrival times.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArrivalTags {
    pub times: Vec<f64>,
    pub p: f64,
}

impl ArrivalTags {
    pub fn draw<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Self {
        ArrivalTags {
            times: (0..n).map(|_| rng.gen::<f64>()).collect(),
            p,
        }
    }

    fn collect(&self, f: impl Fn(f64) -> bool) -> ElemSet {
        (0..self.times.len()).filter(|&e| f(self.times[e])).collect()
    }

    /// Sampling phase `(0, p)`.
    pub fn y(&self) -> ElemSet {
        self.collect(|t| t < self.p)
    }

    /// Observation phase `[p, (1+p)/2)`.
    pub fn s1(&self) -> ElemSet {
        let mid = (1.0 + self.p) / 2.0;
        self.collect(|t| t >= self.p && t < mid)
    }

    /// Selection phase `[(1+p)/2, 1)`.
    pub fn s2(&self) -> ElemSet {
        let mid = (1.0 + self.p) / 2.0;
        self.collect(|t| t >= mid)
    }

    pub fn phases(&self) -> Phases {
        Phases {
            y: self.y(),
            s1: self.s1(),
            s2: self.s2(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Phases {
    pub y: ElemSet,
    pub s1: ElemSet,
    pub s2: ElemSet,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunResult {
    pub alg: ElemSet,
    pub weight: f64,
    pub phases: Phases,
    /// Elements of `S2` in the order they were revealed.
    pub revealed: Vec<usize>,
}

impl RunResult {
    pub fn selected(&self, e: usize) -> bool {
        self.alg.contains(e)
    }
}

struct Selection<'a, S: ?Sized> {
    sys: &'a S,
    alg: ElemSet,
    unseen: ElemSet,
    revealed: Vec<usize>,
}

impl<'a, S: Independence + ?Sized> Selection<'a, S> {
    fn new(sys: &'a S, s2: ElemSet) -> Self {
        Selection {
            sys,
            alg: ElemSet::EMPTY,
            unseen: s2,
            revealed: Vec::new(),
        }
    }

    fn reveal(&mut self, f: usize) {
        assert!(self.unseen.contains(f), "element {f} revealed twice");
        self.unseen.remove(f);
        self.revealed.push(f);
    }

    fn try_accept(&mut self, f: usize) {
        if self.sys.independent(self.alg.with(f)) {
            self.alg.insert(f);
            assert!(self.sys.independent(self.alg));
        }
    }

    fn finish(self, inst: &WeightedInstance, phases: Phases) -> RunResult {
        debug_assert!(self.unseen.is_empty());
        RunResult {
            weight: inst.total(self.alg),
            alg: self.alg,
            phases,
            revealed: self.revealed,
        }
    }
}

/// Matroid selection with a fixed half split between observation and
/// selection. `phases.y` must be empty.
pub fn free_order_matroid_on(
    sys: &IndependenceSystem,
    inst: &WeightedInstance,
    phases: Phases,
    order: &mut dyn RevealOrder,
) -> Result<RunResult> {
    if !sys.is_matroid() {
        return Err(Error::Unsupported(format!(
            "free_order_matroid needs a matroid, got {}",
            sys.kind_name()
        )));
    }
    let mut run = Selection::new(sys, phases.s2);
    let mut prefix = ElemSet::EMPTY;
    for ej in inst.sorted_desc(phases.s1) {
        prefix.insert(ej);
        let mut q = Vec::new();
        for f in run.unseen {
            if sys.hull_contains(prefix, f)? {
                q.push(f);
            }
        }
        order.arrange(&mut q);
        for f in q {
            run.reveal(f);
            if inst.heavier(f, ej) {
                run.try_accept(f);
            }
        }
    }
    let mut q = run.unseen.to_vec();
    order.arrange(&mut q);
    for f in q {
        run.reveal(f);
        run.try_accept(f);
    }
    Ok(run.finish(inst, phases))
}

pub fn free_order_matroid<R: Rng + ?Sized>(
    sys: &IndependenceSystem,
    inst: &WeightedInstance,
    rng: &mut R,
) -> Result<RunResult> {
    let phases = ArrivalTags::draw(sys.ground_size(), 0.0, rng).phases();
    free_order_matroid_on(sys, inst, phases, &mut RandomOrder(rng))
}

/// Three-phase selection for any system with a hull operator.
pub fn free_order_general_on<S: HullSystem + ?Sized>(
    sys: &S,
    inst: &WeightedInstance,
    phases: Phases,
    order: &mut dyn RevealOrder,
) -> Result<RunResult> {
    let rel = RelevanceContext::new(sys, inst, phases.y);
    let relevant = |f: usize| rel.is_greedy_relevant(f);
    let mut run = Selection::new(sys, phases.s2);
    let mut prefix = ElemSet::EMPTY;
    for ej in inst.sorted_desc(phases.s1) {
        if !relevant(ej) {
            continue;
        }
        prefix.insert(ej);
        let mut q = Vec::new();
        for f in run.unseen {
            if sys.hull_contains(prefix, f)? {
                q.push(f);
            }
        }
        order.arrange(&mut q);
        for f in q {
            run.reveal(f);
            if relevant(f) && inst.heavier(f, ej) {
                run.try_accept(f);
            }
        }
    }
    let mut q = run.unseen.to_vec();
    order.arrange(&mut q);
    for f in q {
        run.reveal(f);
        if relevant(f) {
            run.try_accept(f);
        }
    }
    Ok(run.finish(inst, phases))
}

pub fn free_order_general<S: HullSystem + ?Sized, R: Rng + ?Sized>(
    sys: &S,
    inst: &WeightedInstance,
    p: f64,
    rng: &mut R,
) -> Result<RunResult> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::Precondition(format!("p must lie in [0, 1), got {p}")));
    }
    let phases = ArrivalTags::draw(sys.ground_size(), p, rng).phases();
    free_order_general_on(sys, inst, phases, &mut RandomOrder(rng))
}

/// The four buckets of the offline simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Buckets {
    pub y: ElemSet,
    pub r: ElemSet,
    pub n: ElemSet,
    pub r_prime: ElemSet,
    pub n_prime: ElemSet,
}

impl Buckets {
    /// `w(R)`, the weight of `Core(Rel(Y))`.
    pub fn w_core_rel(&self, inst: &WeightedInstance) -> f64 {
        inst.total(self.r)
    }

    /// `w(R' ∪ N')`, the weight of `Greedy(Y)`.
    pub fn w_greedy_y(&self, inst: &WeightedInstance) -> f64 {
        inst.total(self.r_prime.union(self.n_prime))
    }

    pub fn sizes(&self) -> [usize; 4] {
        [self.r.len(), self.n.len(), self.r_prime.len(), self.n_prime.len()]
    }

    /// `|N'| ≤ k(|R| + |N|)`, or `|N'| ≤ k|R| + (k-1)|N|` when every
    /// component is a matroid.
    pub fn counting_bound_holds(&self, k: usize, matroids: bool) -> bool {
        let (r, n, np) = (self.r.len(), self.n.len(), self.n_prime.len());
        if matroids {
            np <= k * r + (k - 1) * n
        } else {
            np <= k * (r + n)
        }
    }
}

/// Simulation with a fixed sample `y` (the heads coins).
pub fn simulate_buckets<S: HullSystem + ?Sized>(
    sys: &S,
    inst: &WeightedInstance,
    y: ElemSet,
) -> Result<Buckets> {
    let mut b = Buckets {
        y,
        r: ElemSet::EMPTY,
        n: ElemSet::EMPTY,
        r_prime: ElemSet::EMPTY,
        n_prime: ElemSet::EMPTY,
    };
    for &e in inst.order() {
        let taken = b.r_prime.union(b.n_prime);
        if !sys.independent(taken.with(e)) {
            continue;
        }
        let critical = !sys.hull_contains(b.r.union(b.n), e)?;
        let heads = y.contains(e);
        match (critical, heads) {
            (true, true) => b.r_prime.insert(e),
            (true, false) => b.r.insert(e),
            (false, true) => b.n_prime.insert(e),
            (false, false) => b.n.insert(e),
        }
    }
    Ok(b)
}

pub fn core_lemma_sim<S: HullSystem + ?Sized, R: Rng + ?Sized>(
    sys: &S,
    inst: &WeightedInstance,
    p: f64,
    rng: &mut R,
) -> Result<Buckets> {
    let y = ArrivalTags::draw(sys.ground_size(), p, rng).y();
    simulate_buckets(sys, inst, y)
}

/// Checks `R ∪ N = Rel(Y)`, `R' ∪ N' = Greedy(Y)` and `R = Core(Rel(Y))`.
pub fn check_bucket_claims<S: HullSystem + ?Sized>(
    sys: &S,
    inst: &WeightedInstance,
    b: &Buckets,
) -> Result<std::result::Result<(), String>> {
    let rel = RelevanceContext::new(sys, inst, b.y).greedy_relevant();
    if b.r.union(b.n) != rel {
        return Ok(Err(format!("R ∪ N = {} but Rel(Y) = {rel}", b.r.union(b.n))));
    }
    let g = greedy(sys, inst, b.y);
    if b.r_prime.union(b.n_prime) != g {
        return Ok(Err(format!("R' ∪ N' = {} but Greedy(Y) = {g}", b.r_prime.union(b.n_prime))));
    }
    let c = core(sys, inst, rel)?;
    if b.r != c {
        return Ok(Err(format!("R = {} but Core(Rel(Y)) = {c}", b.r)));
    }
    Ok(Ok(()))
}

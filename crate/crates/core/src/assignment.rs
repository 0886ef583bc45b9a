//! Combinatorial assignment with agent arrivals.
//!
//! Agents own hyperedges (bundles of goods). A hyperedge set is feasible when
//! every agent's share is independent in that agent's own system and no good
//! is used twice.

use std::collections::HashMap;
use std::sync::Mutex;

use rand::Rng;
use serde::Serialize;

use crate::error::{input, Error, Result};
use crate::ops::opt_basis_capped;
use crate::set::{ElemSet, MAX_GROUND};
use crate::system::{Independence, IndependenceSystem, DEFAULT_BRUTE_FORCE_CAP};
use crate::weights::WeightedInstance;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperedge {
    pub agent: usize,
    pub goods: ElemSet,
}

#[derive(Debug, Clone)]
pub struct AssignmentInstance {
    agents: usize,
    goods: usize,
    edges: Vec<Hyperedge>,
    weights: WeightedInstance,
    /// `systems[a]` lives on `delta[a]` in increasing edge id order.
    systems: Vec<IndependenceSystem>,
    delta: Vec<Vec<usize>>,
    delta_set: Vec<ElemSet>,
    k: usize,
}

impl AssignmentInstance {
    pub fn new(
        agents: usize,
        goods: usize,
        edges: Vec<Hyperedge>,
        weights: WeightedInstance,
        systems: Vec<IndependenceSystem>,
    ) -> Result<Self> {
        if edges.len() > MAX_GROUND || agents > MAX_GROUND || goods > MAX_GROUND {
            return Err(input(format!("agents, goods and hyperedges are limited to {MAX_GROUND}")));
        }
        if weights.ground_size() != edges.len() {
            return Err(input(format!("{} weights for {} hyperedges", weights.ground_size(), edges.len())));
        }
        if systems.len() != agents {
            return Err(input(format!("{} agent systems for {agents} agents", systems.len())));
        }
        let mut delta = vec![Vec::new(); agents];
        let mut delta_set = vec![ElemSet::EMPTY; agents];
        let mut k = 0;
        for (e, h) in edges.iter().enumerate() {
            if h.agent >= agents {
                return Err(input(format!("hyperedge {e}: agent {} outside {agents}", h.agent)));
            }
            if h.goods.bound() > goods {
                return Err(input(format!("hyperedge {e}: goods {} outside {goods}", h.goods)));
            }
            delta[h.agent].push(e);
            delta_set[h.agent].insert(e);
            k = k.max(h.goods.len());
        }
        for (a, sys) in systems.iter().enumerate() {
            if sys.ground_size() != delta[a].len() {
                return Err(input(format!(
                    "agent {a}: system on {} elements but {} incident hyperedges",
                    sys.ground_size(),
                    delta[a].len()
                )));
            }
        }
        Ok(AssignmentInstance {
            agents,
            goods,
            edges,
            weights,
            systems,
            delta,
            delta_set,
            k,
        })
    }

    /// Every agent takes at most one hyperedge.
    pub fn unit_demand(agents: usize, goods: usize, edges: Vec<Hyperedge>, weights: WeightedInstance) -> Result<Self> {
        let mut deg = vec![0; agents];
        for h in &edges {
            if h.agent < agents {
                deg[h.agent] += 1;
            }
        }
        let systems = deg
            .into_iter()
            .map(|d| IndependenceSystem::uniform(d, 1))
            .collect::<Result<Vec<_>>>()?;
        Self::new(agents, goods, edges, weights, systems)
    }

    /// Adds agents without hyperedges until there are at least `min_agents`.
    pub fn padded(&self, min_agents: usize) -> Result<Self> {
        if self.agents >= min_agents {
            return Ok(self.clone());
        }
        let mut systems = self.systems.clone();
        for _ in self.agents..min_agents {
            systems.push(IndependenceSystem::free(0)?);
        }
        Self::new(min_agents, self.goods, self.edges.clone(), self.weights.clone(), systems)
    }

    pub fn agents(&self) -> usize {
        self.agents
    }

    pub fn goods(&self) -> usize {
        self.goods
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    pub fn weights(&self) -> &WeightedInstance {
        &self.weights
    }

    pub fn system(&self, a: usize) -> &IndependenceSystem {
        &self.systems[a]
    }

    /// Largest bundle size.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn delta(&self, a: usize) -> ElemSet {
        self.delta_set[a]
    }

    pub fn delta_of(&self, agents: ElemSet) -> ElemSet {
        agents.iter().fold(ElemSet::EMPTY, |acc, a| acc.union(self.delta_set[a]))
    }

    pub fn goods_of(&self, x: ElemSet) -> ElemSet {
        x.iter().fold(ElemSet::EMPTY, |acc, e| acc.union(self.edges[e].goods))
    }

    fn local(&self, a: usize, x: ElemSet) -> ElemSet {
        let mut out = ElemSet::EMPTY;
        for (i, &e) in self.delta[a].iter().enumerate() {
            if x.contains(e) {
                out.insert(i);
            }
        }
        out
    }

    pub fn agent_feasible(&self, a: usize, x: ElemSet) -> bool {
        self.systems[a].independent(self.local(a, x.intersection(self.delta_set[a])))
    }

    pub fn goods_disjoint(&self, x: ElemSet) -> bool {
        let mut used = ElemSet::EMPTY;
        for e in x.iter() {
            let g = self.edges[e].goods;
            if !used.is_disjoint(g) {
                return false;
            }
            used = used.union(g);
        }
        true
    }

    pub fn is_feasible(&self, x: ElemSet) -> bool {
        self.goods_disjoint(x) && (0..self.agents).all(|a| self.agent_feasible(a, x))
    }
}

impl Independence for AssignmentInstance {
    fn ground_size(&self) -> usize {
        self.edges.len()
    }

    fn independent(&self, x: ElemSet) -> bool {
        if !self.goods_disjoint(x) {
            return false;
        }
        let mut agents = ElemSet::EMPTY;
        for e in x.iter() {
            agents.insert(self.edges[e].agent);
        }
        agents.iter().all(|a| self.agent_feasible(a, x))
    }
}

/// Maximum-weight feasible hyperedge set over the agents in `subset`.
pub fn opt_assignment(inst: &AssignmentInstance, subset: ElemSet) -> Result<(ElemSet, f64)> {
    opt_assignment_capped(inst, subset, DEFAULT_BRUTE_FORCE_CAP)
}

pub fn opt_assignment_capped(inst: &AssignmentInstance, subset: ElemSet, cap: usize) -> Result<(ElemSet, f64)> {
    if subset.bound() > inst.agents {
        return Err(input(format!("agent set {subset} outside {} agents", inst.agents)));
    }
    let x = inst.delta_of(subset);
    if x.len() > cap {
        return Err(Error::CapacityExceeded {
            what: "opt_assignment",
            size: x.len(),
            cap,
        });
    }
    opt_basis_capped(inst, &inst.weights, x, cap)
}

/// Memoized [`opt_assignment`] keyed by agent subset. Shareable across
/// threads; results do not depend on the order of lookups.
pub struct OptCache<'a> {
    inst: &'a AssignmentInstance,
    cap: usize,
    map: Mutex<HashMap<ElemSet, (ElemSet, f64)>>,
}

impl<'a> OptCache<'a> {
    pub fn new(inst: &'a AssignmentInstance) -> Self {
        Self::with_cap(inst, DEFAULT_BRUTE_FORCE_CAP)
    }

    pub fn with_cap(inst: &'a AssignmentInstance, cap: usize) -> Self {
        OptCache {
            inst,
            cap,
            map: Mutex::new(HashMap::new()),
        }
    }

    pub fn instance(&self) -> &AssignmentInstance {
        self.inst
    }

    pub fn get(&self, subset: ElemSet) -> Result<(ElemSet, f64)> {
        if let Some(&hit) = self.map.lock().unwrap().get(&subset) {
            return Ok(hit);
        }
        let v = opt_assignment_capped(self.inst, subset, self.cap)?;
        self.map.lock().unwrap().insert(subset, v);
        Ok(v)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Arrival {
    pub agent: usize,
    pub time: f64,
    /// `OPT(A_a) ∩ δ(a)`; empty for arrivals before `p`.
    pub proposed: ElemSet,
    pub assigned: ElemSet,
}

#[derive(Debug, Clone, Serialize)]
pub struct AssignmentRun {
    pub alg: ElemSet,
    pub weight: f64,
    pub arrivals: Vec<Arrival>,
}

impl AssignmentRun {
    pub fn assigned_goods(&self, inst: &AssignmentInstance) -> ElemSet {
        inst.goods_of(self.alg)
    }
}

/// Runs the online rule on agents arriving at `times` (agent, time). Only
/// listed agents exist; arrivals at or after `stop` are not processed.
pub fn online_assignment_on(
    cache: &OptCache,
    times: &[(usize, f64)],
    p: f64,
    stop: f64,
) -> Result<AssignmentRun> {
    let inst = cache.inst;
    let mut order: Vec<(usize, f64)> = times.to_vec();
    order.sort_by(|x, y| x.1.total_cmp(&y.1).then(x.0.cmp(&y.0)));
    let mut arrived = ElemSet::EMPTY;
    let mut alg = ElemSet::EMPTY;
    let mut used = ElemSet::EMPTY;
    let mut arrivals = Vec::with_capacity(order.len());
    for (a, t) in order {
        if t >= stop {
            break;
        }
        if a >= inst.agents || arrived.contains(a) {
            return Err(input(format!("agent {a} unknown or listed twice")));
        }
        arrived.insert(a);
        if t < p {
            arrivals.push(Arrival {
                agent: a,
                time: t,
                proposed: ElemSet::EMPTY,
                assigned: ElemSet::EMPTY,
            });
            continue;
        }
        let (opt, _) = cache.get(arrived)?;
        let proposed = opt.intersection(inst.delta_set[a]);
        let assigned: ElemSet = proposed
            .iter()
            .filter(|&e| inst.edges[e].goods.is_disjoint(used))
            .collect();
        let goods = inst.goods_of(assigned);
        assert!(goods.is_disjoint(used), "good reassigned");
        alg = alg.union(assigned);
        used = used.union(goods);
        assert!(inst.goods_disjoint(alg), "a good is used twice");
        assert!(inst.agent_feasible(a, alg), "agent {a} share infeasible");
        arrivals.push(Arrival {
            agent: a,
            time: t,
            proposed,
            assigned,
        });
    }
    Ok(AssignmentRun {
        weight: inst.weights.total(alg),
        alg,
        arrivals,
    })
}

pub fn online_assignment<R: Rng + ?Sized>(cache: &OptCache, p: f64, rng: &mut R) -> Result<AssignmentRun> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Precondition(format!("p = {p} must lie in (0, 1)")));
    }
    let times: Vec<(usize, f64)> = (0..cache.inst.agents).map(|a| (a, rng.gen::<f64>())).collect();
    online_assignment_on(cache, &times, p, f64::INFINITY)
}

/// Guaranteed ratio `∫_p^1 (p/t)^k dt`.
pub fn ratio_bound(p: f64, k: usize) -> f64 {
    if k == 1 {
        p * (1.0 / p).ln()
    } else {
        (p - p.powi(k as i32)) / (k as f64 - 1.0)
    }
}

/// Sampling threshold maximizing [`ratio_bound`]: `1/e` for `k = 1`,
/// `k^{-1/(k-1)}` otherwise.
pub fn optimal_p(k: usize) -> f64 {
    if k <= 1 {
        (-1.0f64).exp()
    } else {
        (k as f64).powf(-1.0 / (k as f64 - 1.0))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SurvivalStats {
    pub trials: usize,
    pub frequency: f64,
    pub std_err: f64,
    pub bound: f64,
}

/// Estimates the probability that all goods of `d` are still free just
/// before `a` arrives at time `t`, given that the agents of `s` arrive first
/// and `a` is the last of them. `d` must be among the goods `OPT(s)` gives to
/// `a`. The guarantee is `(p/t)^{|d|}`.
pub fn survival_probe<R: Rng + ?Sized>(
    cache: &OptCache,
    s: ElemSet,
    a: usize,
    d: ElemSet,
    p: f64,
    t: f64,
    trials: usize,
    rng: &mut R,
) -> Result<SurvivalStats> {
    let inst = cache.inst;
    if !s.contains(a) {
        return Err(input(format!("agent {a} not in {s}")));
    }
    if !(p > 0.0 && p < t && t <= 1.0) {
        return Err(Error::Precondition(format!("need 0 < p < t ≤ 1, got p = {p}, t = {t}")));
    }
    if trials == 0 {
        return Err(Error::Precondition("trials must be positive".into()));
    }
    let (opt, _) = cache.get(s)?;
    let n_sa = inst.goods_of(opt.intersection(inst.delta_set[a]));
    if !d.is_subset(n_sa) {
        return Err(input(format!("{d} is not among the goods OPT({s}) gives agent {a}")));
    }
    if s.len() < d.len() + 1 {
        return Err(Error::Precondition(format!("need at least {} agents in S", d.len() + 1)));
    }
    let others: Vec<usize> = s.without(a).iter().collect();
    let mut hits = 0usize;
    let mut times = Vec::with_capacity(others.len());
    for _ in 0..trials {
        times.clear();
        times.extend(others.iter().map(|&b| (b, rng.gen::<f64>() * t)));
        let run = online_assignment_on(cache, &times, p, t)?;
        if run.assigned_goods(inst).is_disjoint(d) {
            hits += 1;
        }
    }
    let f = hits as f64 / trials as f64;
    Ok(SurvivalStats {
        trials,
        frequency: f,
        std_err: (f * (1.0 - f) / trials as f64).sqrt(),
        bound: (p / t).powi(d.len() as i32),
    })
}

fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// `E[C(ℓ, k)] / C(i-1, k)` for `ℓ ~ Bin(i-1, r)`, by direct summation.
pub fn binomial_moment_ratio(i: usize, k: usize, r: f64) -> f64 {
    let n = i - 1;
    let mean: f64 = (0..=n)
        .map(|l| binom(n, l) * r.powi(l as i32) * (1.0 - r).powi((n - l) as i32) * binom(l, k))
        .sum();
    mean / binom(n, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn set(xs: &[usize]) -> ElemSet {
        xs.iter().copied().collect()
    }

    fn he(agent: usize, goods: &[usize]) -> Hyperedge {
        Hyperedge {
            agent,
            goods: set(goods),
        }
    }

    /// Agent 0 wants {0,1} (5) or {0} (2); agent 1 wants {1,2} (4) or {2} (3).
    fn overlap() -> AssignmentInstance {
        let edges = vec![he(0, &[0, 1]), he(0, &[0]), he(1, &[1, 2]), he(1, &[2])];
        let w = WeightedInstance::new(vec![5.0, 2.0, 4.0, 3.0]).unwrap();
        let systems = vec![
            IndependenceSystem::free(2).unwrap(),
            IndependenceSystem::free(2).unwrap(),
        ];
        AssignmentInstance::new(2, 3, edges, w, systems).unwrap()
    }

    #[test]
    fn overlap_optimum_by_enumeration() {
        let inst = overlap();
        let mut best = (ElemSet::EMPTY, 0.0);
        for x in ElemSet::full(4).subsets() {
            let w = inst.weights().total(x);
            if inst.is_feasible(x) && w > best.1 {
                best = (x, w);
            }
        }
        assert_eq!(best, (set(&[0, 3]), 8.0));
        assert_eq!(opt_assignment(&inst, set(&[0, 1])).unwrap(), best);
        assert_eq!(opt_assignment(&inst, set(&[1])).unwrap(), (set(&[2]), 4.0));
        assert_eq!(opt_assignment(&inst, ElemSet::EMPTY).unwrap(), (ElemSet::EMPTY, 0.0));
    }

    #[test]
    fn unit_bundles_reduce_to_bipartite_matching() {
        // 2x2 with weights favoring the anti-diagonal as a pair.
        let edges = vec![he(0, &[0]), he(0, &[1]), he(1, &[0]), he(1, &[1])];
        let w = WeightedInstance::new(vec![3.0, 2.0, 2.5, 0.5]).unwrap();
        let inst = AssignmentInstance::unit_demand(2, 2, edges, w).unwrap();
        assert_eq!(opt_assignment(&inst, set(&[0, 1])).unwrap(), (set(&[1, 2]), 4.5));
    }

    #[test]
    fn opt_cap_is_enforced() {
        let edges: Vec<Hyperedge> = (0..5).map(|g| he(0, &[g])).collect();
        let inst = AssignmentInstance::new(
            1,
            5,
            edges,
            WeightedInstance::unit(5),
            vec![IndependenceSystem::free(5).unwrap()],
        )
        .unwrap();
        assert!(matches!(
            opt_assignment_capped(&inst, set(&[0]), 4),
            Err(Error::CapacityExceeded { .. })
        ));
    }

    #[test]
    fn single_agent_selected_iff_late() {
        let inst = AssignmentInstance::unit_demand(1, 1, vec![he(0, &[0])], WeightedInstance::unit(1)).unwrap();
        let cache = OptCache::new(&inst);
        let p = 0.3;
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let trials = 20_000;
        let mut hits = 0;
        for _ in 0..trials {
            let run = online_assignment(&cache, p, &mut rng).unwrap();
            let late = run.arrivals[0].time >= p;
            assert_eq!(run.alg.contains(0), late);
            hits += late as usize;
        }
        let f = hits as f64 / trials as f64;
        let sd = (0.7f64 * 0.3 / trials as f64).sqrt();
        assert!((f - 0.7).abs() < 4.0 * sd, "{f}");
    }

    #[test]
    fn assignments_come_from_prefix_optima() {
        let inst = overlap();
        let cache = OptCache::new(&inst);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let run = online_assignment(&cache, 0.25, &mut rng).unwrap();
            assert!(inst.is_feasible(run.alg));
            let proposed = run.arrivals.iter().fold(ElemSet::EMPTY, |acc, x| acc.union(x.proposed));
            assert!(run.alg.is_subset(proposed));
        }
    }

    #[test]
    fn rejects_p_outside_open_interval() {
        let inst = overlap();
        let cache = OptCache::new(&inst);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(online_assignment(&cache, 0.0, &mut rng).is_err());
        assert!(online_assignment(&cache, 1.0, &mut rng).is_err());
    }

    #[test]
    fn binomial_moment_identity() {
        let r = binomial_moment_ratio(6, 2, 0.5);
        assert!((r - 0.25).abs() < 1e-12, "{r}");
        for (i, k, x) in [(4, 1, 0.3), (7, 3, 0.8), (5, 0, 0.4)] {
            assert!((binomial_moment_ratio(i, k, x) - x.powi(k as i32)).abs() < 1e-12);
        }
    }

    #[test]
    fn ratio_bound_at_optimal_p() {
        assert!((ratio_bound(optimal_p(1), 1) - (-1.0f64).exp()).abs() < 1e-12);
        assert!((optimal_p(2) - 0.5).abs() < 1e-12);
        assert!((ratio_bound(optimal_p(2), 2) - 0.25).abs() < 1e-12);
        let k = 3;
        let kk = k as f64;
        assert!((ratio_bound(optimal_p(k), k) - kk.powf(-kk / (kk - 1.0))).abs() < 1e-12);
    }

    #[test]
    fn survival_of_empty_set_is_certain() {
        let inst = overlap().padded(3).unwrap();
        let cache = OptCache::new(&inst);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let st = survival_probe(&cache, set(&[0, 1, 2]), 0, ElemSet::EMPTY, 0.3, 0.6, 500, &mut rng).unwrap();
        assert_eq!(st.frequency, 1.0);
        assert_eq!(st.bound, 1.0);
    }

    #[test]
    fn survival_meets_bound_for_single_goods() {
        // Three agents competing for one good; agent 2 is last.
        let edges = vec![he(0, &[0]), he(1, &[0]), he(2, &[0])];
        let w = WeightedInstance::new(vec![1.0, 2.0, 3.0]).unwrap();
        let inst = AssignmentInstance::unit_demand(3, 1, edges, w).unwrap();
        let cache = OptCache::new(&inst);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let st = survival_probe(&cache, set(&[0, 1, 2]), 2, set(&[0]), 0.4, 0.8, 20_000, &mut rng).unwrap();
        assert!(st.frequency >= st.bound - 3.0 * st.std_err, "{st:?}");
        assert!(survival_probe(&cache, set(&[0, 1, 2]), 0, set(&[0]), 0.4, 0.8, 10, &mut rng).is_err());
    }
}

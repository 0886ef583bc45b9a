//! Bipartite selection where agents arrive with all their incident edges.
//!
//! Agent-side and item-side constraints are moved onto the edge set by
//! giving every vertex one parallel copy per incident edge. A set of edges is
//! independent in both transferred systems exactly when it is a feasible
//! matching of the original instance.

pub mod oocs;
pub mod reductions;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::combination::{CombinationSystem, Part};
use crate::edge::{RandomOrder, RevealOrder};
use crate::error::{input, Error, Result};
use crate::hull::{core, HullSystem, RelevanceContext};
use crate::ops::{greedy, lift};
use crate::set::{ElemSet, MAX_GROUND};
use crate::system::Independence;
use crate::weights::WeightedInstance;

use oocs::Oocs;

#[derive(Debug, Clone)]
pub struct BipartiteInstance {
    agents: usize,
    items: usize,
    /// Edge `e` joins agent `ends[e].0` and item `ends[e].1`.
    ends: Vec<(usize, usize)>,
    weights: WeightedInstance,
    fa: CombinationSystem,
    fb: CombinationSystem,
    delta_agent: Vec<ElemSet>,
    delta_item: Vec<ElemSet>,
}

impl BipartiteInstance {
    pub fn new(
        ends: Vec<(usize, usize)>,
        weights: WeightedInstance,
        fa: CombinationSystem,
        fb: CombinationSystem,
    ) -> Result<Self> {
        let (agents, items) = (fa.ground_size(), fb.ground_size());
        if ends.len() > MAX_GROUND {
            return Err(input(format!("{} edges exceed {MAX_GROUND}", ends.len())));
        }
        if weights.ground_size() != ends.len() {
            return Err(input(format!(
                "{} weights for {} edges",
                weights.ground_size(),
                ends.len()
            )));
        }
        let mut delta_agent = vec![ElemSet::EMPTY; agents];
        let mut delta_item = vec![ElemSet::EMPTY; items];
        for (e, &(a, b)) in ends.iter().enumerate() {
            if a >= agents || b >= items {
                return Err(input(format!("edge {e} = ({a}, {b}) outside {agents} agents × {items} items")));
            }
            if delta_agent[a].iter().any(|f| ends[f].1 == b) {
                return Err(input(format!("duplicate edge ({a}, {b})")));
            }
            delta_agent[a].insert(e);
            delta_item[b].insert(e);
        }
        Ok(BipartiteInstance {
            agents,
            items,
            ends,
            weights,
            fa,
            fb,
            delta_agent,
            delta_item,
        })
    }

    pub fn agents(&self) -> usize {
        self.agents
    }

    pub fn items(&self) -> usize {
        self.items
    }

    pub fn edges(&self) -> usize {
        self.ends.len()
    }

    pub fn ends(&self) -> &[(usize, usize)] {
        &self.ends
    }

    pub fn agent_of(&self, e: usize) -> usize {
        self.ends[e].0
    }

    pub fn item_of(&self, e: usize) -> usize {
        self.ends[e].1
    }

    pub fn weights(&self) -> &WeightedInstance {
        &self.weights
    }

    pub fn fa(&self) -> &CombinationSystem {
        &self.fa
    }

    pub fn fb(&self) -> &CombinationSystem {
        &self.fb
    }

    /// `δ(a)`.
    pub fn delta(&self, a: usize) -> ElemSet {
        self.delta_agent[a]
    }

    /// `δ(Y)` for a set of agents.
    pub fn delta_of(&self, agents: ElemSet) -> ElemSet {
        agents.iter().fold(ElemSet::EMPTY, |acc, a| acc.union(self.delta_agent[a]))
    }

    pub fn delta_item(&self, b: usize) -> ElemSet {
        self.delta_item[b]
    }

    /// Matching, matched agents independent in `F_A`, matched items
    /// independent in `F_B`.
    pub fn is_feasible_matching(&self, x: ElemSet) -> bool {
        let agents: ElemSet = x.iter().map(|e| self.ends[e].0).collect();
        let items: ElemSet = x.iter().map(|e| self.ends[e].1).collect();
        agents.len() == x.len() && items.len() == x.len() && self.fa.independent(agents) && self.fb.independent(items)
    }
}

/// `F_{A,E}`, `F_{B,E}` and their combination.
#[derive(Debug, Clone)]
pub struct EdgeSystems {
    pub fa_e: CombinationSystem,
    pub fb_e: CombinationSystem,
    pub both: CombinationSystem,
    /// `max_e Σ k_j + Σ ℓ_j`, when every component's growth is known.
    pub k: Option<usize>,
}

fn transfer_side(
    sides: &CombinationSystem,
    m: usize,
    vertex_of: impl Fn(usize) -> usize,
) -> Result<Vec<Part>> {
    let mut parts = Vec::new();
    for (j, comp) in sides.components().iter().enumerate() {
        let members: Vec<usize> = (0..m).filter(|&e| comp.mask().contains(vertex_of(e))).collect();
        if members.is_empty() {
            continue;
        }
        let map = members.iter().map(|&e| sides.local_id(j, vertex_of(e))).collect();
        let mut part = Part::new(lift(&comp.system, map)?, members);
        part.growth = comp.growth;
        parts.push(part);
    }
    Ok(parts)
}

/// Parallel-extends each vertex into one copy per incident edge and lifts
/// every component to the edges.
pub fn transfer_to_edges(bi: &BipartiteInstance) -> Result<EdgeSystems> {
    let m = bi.edges();
    let pa = transfer_side(&bi.fa, m, |e| bi.ends[e].0)?;
    let pb = transfer_side(&bi.fb, m, |e| bi.ends[e].1)?;
    let clone = |ps: &[Part]| -> Vec<Part> {
        ps.iter()
            .map(|p| Part {
                system: p.system.clone(),
                members: p.members.clone(),
                growth: p.growth,
            })
            .collect()
    };
    let both = CombinationSystem::combine(m, clone(&pa).into_iter().chain(clone(&pb)).collect())?;
    let fa_e = CombinationSystem::combine(m, pa)?;
    let fb_e = CombinationSystem::combine(m, pb)?;
    let k = both.growth_k().ok();
    Ok(EdgeSystems { fa_e, fb_e, both, k })
}

/// Top-relevant edge of every agent outside a sample `Y` of agents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TopRelevant {
    pub y: ElemSet,
    /// `None` for agents in `Y` and for agents without a relevant edge.
    pub top: Vec<Option<usize>>,
}

impl TopRelevant {
    pub fn compute(bi: &BipartiteInstance, sys: &EdgeSystems, y: ElemSet) -> Self {
        let ctx = RelevanceContext::new(&sys.both, &bi.weights, bi.delta_of(y));
        let top = (0..bi.agents)
            .map(|a| {
                if y.contains(a) {
                    return None;
                }
                bi.weights
                    .sorted_desc(bi.delta_agent[a])
                    .into_iter()
                    .find(|&e| ctx.is_greedy_relevant(e))
            })
            .collect();
        TopRelevant { y, top }
    }

    pub fn of(&self, a: usize) -> Option<usize> {
        self.top[a]
    }

    /// `Rel(Y)`: every top-relevant edge.
    pub fn all(&self) -> ElemSet {
        self.top.iter().flatten().collect()
    }

    /// Top-relevant edges of the agents in `agents`.
    pub fn of_agents(&self, agents: ElemSet) -> ElemSet {
        agents.iter().filter_map(|a| self.top[a]).collect()
    }
}

/// `toprel(a, Y)`.
pub fn toprel(bi: &BipartiteInstance, sys: &EdgeSystems, y: ElemSet, a: usize) -> Result<Option<usize>> {
    if a >= bi.agents {
        return Err(Error::ElementOutOfRange {
            element: a,
            ground: bi.agents,
        });
    }
    if y.contains(a) {
        return Err(Error::Precondition(format!("agent {a} is in the sample")));
    }
    Ok(TopRelevant::compute(bi, sys, y).of(a))
}

/// Buckets of the agent-arrival simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AgentBuckets {
    pub y: ElemSet,
    pub processed: ElemSet,
    pub r: ElemSet,
    pub n: ElemSet,
    pub r_prime: ElemSet,
    pub n_prime: ElemSet,
}

impl AgentBuckets {
    pub fn w_core_rel(&self, inst: &WeightedInstance) -> f64 {
        inst.total(self.r)
    }

    pub fn w_greedy_y(&self, inst: &WeightedInstance) -> f64 {
        inst.total(self.r_prime.union(self.n_prime))
    }

    pub fn counting_bound_holds(&self, k: usize, matroids: bool) -> bool {
        let (r, n, np) = (self.r.len(), self.n.len(), self.n_prime.len());
        if matroids {
            np <= k * r + (k.saturating_sub(1)) * n
        } else {
            np <= k * (r + n)
        }
    }
}

/// Simulation with a fixed set `y` of heads agents.
pub fn simulate_agent_buckets(bi: &BipartiteInstance, sys: &EdgeSystems, y: ElemSet) -> Result<AgentBuckets> {
    let mut b = AgentBuckets {
        y,
        processed: ElemSet::EMPTY,
        r: ElemSet::EMPTY,
        n: ElemSet::EMPTY,
        r_prime: ElemSet::EMPTY,
        n_prime: ElemSet::EMPTY,
    };
    for &e in bi.weights.order() {
        if !sys.both.independent(b.r_prime.union(b.n_prime).with(e)) {
            continue;
        }
        let a = bi.ends[e].0;
        if b.processed.contains(a) {
            continue;
        }
        b.processed.insert(a);
        let critical = !sys.both.hull_contains(b.r.union(b.n), e)?;
        match (critical, y.contains(a)) {
            (true, true) => b.r_prime.insert(e),
            (true, false) => b.r.insert(e),
            (false, true) => b.n_prime.insert(e),
            (false, false) => b.n.insert(e),
        }
    }
    Ok(b)
}

pub fn agent_core_lemma_sim<R: Rng + ?Sized>(
    bi: &BipartiteInstance,
    sys: &EdgeSystems,
    p: f64,
    rng: &mut R,
) -> Result<AgentBuckets> {
    let y = (0..bi.agents).filter(|_| rng.gen::<f64>() < p).collect();
    simulate_agent_buckets(bi, sys, y)
}

/// Checks `R ∪ N = Rel(Y)`, `R' ∪ N' = Greedy(δ(Y))` and `R = Core(Rel(Y))`.
pub fn check_agent_claims(
    bi: &BipartiteInstance,
    sys: &EdgeSystems,
    b: &AgentBuckets,
) -> Result<std::result::Result<(), String>> {
    let rel = TopRelevant::compute(bi, sys, b.y).all();
    if b.r.union(b.n) != rel {
        return Ok(Err(format!("R ∪ N = {} but Rel(Y) = {rel}", b.r.union(b.n))));
    }
    let g = greedy(&sys.both, &bi.weights, bi.delta_of(b.y));
    if b.r_prime.union(b.n_prime) != g {
        return Ok(Err(format!("R' ∪ N' = {} but Greedy(δ(Y)) = {g}", b.r_prime.union(b.n_prime))));
    }
    let c = core(&sys.both, &bi.weights, rel)?;
    if b.r != c {
        return Ok(Err(format!("R = {} but Core(Rel(Y)) = {c}", b.r)));
    }
    Ok(Ok(()))
}

/// Agent phases of the four-phase selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AgentPhases {
    pub y: ElemSet,
    pub s0: ElemSet,
    pub s1: ElemSet,
    pub s2: ElemSet,
}

impl AgentPhases {
    /// Thresholds `p1 = p`, `p2 = p1 + (1 - p1) q`, `p3 = (1 + p2) / 2`.
    pub fn thresholds(p: f64, q: f64) -> (f64, f64, f64) {
        let p2 = p + (1.0 - p) * q;
        (p, p2, (1.0 + p2) / 2.0)
    }

    pub fn from_times(times: &[f64], p: f64, q: f64) -> Self {
        let (p1, p2, p3) = Self::thresholds(p, q);
        let pick = |lo: f64, hi: f64| -> ElemSet {
            (0..times.len()).filter(|&a| times[a] >= lo && times[a] < hi).collect()
        };
        AgentPhases {
            y: pick(f64::NEG_INFINITY, p1),
            s0: pick(p1, p2),
            s1: pick(p2, p3),
            s2: (0..times.len()).filter(|&a| times[a] >= p3).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgentRunResult {
    pub alg: ElemSet,
    pub weight: f64,
    pub phases: AgentPhases,
    pub revealed: Vec<usize>,
}

struct AgentRun<'a> {
    bi: &'a BipartiteInstance,
    sys: &'a EdgeSystems,
    top: TopRelevant,
    alg: ElemSet,
    unseen: ElemSet,
    revealed: Vec<usize>,
}

impl AgentRun<'_> {
    /// Reveals `a`; its top-relevant edge is taken when it beats `threshold`,
    /// the OOCS accepts it and the selection stays feasible.
    fn consider(&mut self, a: usize, threshold: Option<usize>, alg_b: &mut dyn Oocs, rng: &mut dyn RngCore) {
        assert!(self.unseen.contains(a), "agent {a} revealed twice");
        self.unseen.remove(a);
        self.revealed.push(a);
        let Some(f) = self.top.of(a) else { return };
        let inst = &self.bi.weights;
        if threshold.map_or(true, |ej| inst.heavier(f, ej))
            && alg_b.offer(f, rng)
            && self.sys.both.independent(self.alg.with(f))
        {
            self.alg.insert(f);
            assert!(self.bi.is_feasible_matching(self.alg));
        }
    }
}

/// Four-phase agent-arrival selection. The OOCS is run on the top-relevant
/// edges with the `S0` agents' edges as its sample; agents of `S2` are called
/// in the `F_A`-hull order of the `S1` agents' top-relevant edges.
pub fn free_order_agent_on(
    bi: &BipartiteInstance,
    sys: &EdgeSystems,
    alg_b: &mut dyn Oocs,
    phases: AgentPhases,
    order: &mut dyn RevealOrder,
    rng: &mut dyn RngCore,
) -> Result<AgentRunResult> {
    let top = TopRelevant::compute(bi, sys, phases.y);
    alg_b.begin(top.of_agents(phases.s0), rng)?;
    let e1 = bi.weights.sorted_desc(top.of_agents(phases.s1));
    let mut run = AgentRun {
        bi,
        sys,
        top,
        alg: ElemSet::EMPTY,
        unseen: phases.s2,
        revealed: Vec::new(),
    };
    let mut prefix = ElemSet::EMPTY;
    for ej in e1 {
        prefix.insert(bi.ends[ej].0);
        let mut q = Vec::new();
        for a in run.unseen {
            if bi.fa.hull_contains(prefix, a)? {
                q.push(a);
            }
        }
        order.arrange(&mut q);
        for a in q {
            run.consider(a, Some(ej), alg_b, rng);
        }
    }
    let mut q = run.unseen.to_vec();
    order.arrange(&mut q);
    for a in q {
        run.consider(a, None, alg_b, rng);
    }
    Ok(AgentRunResult {
        weight: bi.weights.total(run.alg),
        alg: run.alg,
        phases,
        revealed: run.revealed,
    })
}

/// Arrival times and reveal orders come from `rng`; the OOCS draws from a
/// second stream seeded by it.
pub fn free_order_agent<R: RngCore>(
    bi: &BipartiteInstance,
    sys: &EdgeSystems,
    alg_b: &mut dyn Oocs,
    p: f64,
    rng: &mut R,
) -> Result<AgentRunResult> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Precondition(format!("p must lie in [0, 1], got {p}")));
    }
    let times: Vec<f64> = (0..bi.agents).map(|_| rng.gen::<f64>()).collect();
    let phases = AgentPhases::from_times(&times, p, alg_b.q());
    let mut oocs_rng = ChaCha8Rng::seed_from_u64(rng.next_u64());
    free_order_agent_on(bi, sys, alg_b, phases, &mut RandomOrder(rng), &mut oocs_rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edge::{enumerate_orders, IdOrder};
    use crate::system::IndependenceSystem;
    use oocs::{PartitionOocs, Rank1Oocs};

    fn set(v: &[usize]) -> ElemSet {
        v.iter().collect()
    }

    fn free(n: usize) -> CombinationSystem {
        CombinationSystem::single(IndependenceSystem::free(n).unwrap())
    }

    fn instance(
        agents: usize,
        items: usize,
        ends: Vec<(usize, usize)>,
        w: Vec<f64>,
        fa: CombinationSystem,
        fb: CombinationSystem,
    ) -> BipartiteInstance {
        assert_eq!((fa.ground_size(), fb.ground_size()), (agents, items));
        BipartiteInstance::new(ends, WeightedInstance::new(w).unwrap(), fa, fb).unwrap()
    }

    fn is_matching(ends: &[(usize, usize)], x: ElemSet) -> bool {
        let a: ElemSet = x.iter().map(|e| ends[e].0).collect();
        let b: ElemSet = x.iter().map(|e| ends[e].1).collect();
        a.len() == x.len() && b.len() == x.len()
    }

    #[test]
    fn free_sides_give_matchings() {
        let ends = vec![(0, 0), (0, 1), (1, 0), (1, 1), (2, 1)];
        let bi = instance(3, 2, ends.clone(), vec![1.0; 5], free(3), free(2));
        let sys = transfer_to_edges(&bi).unwrap();
        for x in ElemSet::full(5).subsets() {
            assert_eq!(sys.both.independent(x), is_matching(&ends, x), "{x}");
        }
        assert_eq!(sys.k, Some(2));
    }

    #[test]
    fn perfect_matching_mirrors_agent_side() {
        let fa = CombinationSystem::single(IndependenceSystem::uniform(4, 2).unwrap());
        let ends: Vec<_> = (0..4).map(|i| (i, i)).collect();
        let bi = instance(4, 4, ends, vec![1.0; 4], fa.clone(), free(4));
        let sys = transfer_to_edges(&bi).unwrap();
        for x in ElemSet::full(4).subsets() {
            assert_eq!(sys.both.independent(x), fa.independent(x));
        }
    }

    #[test]
    fn edge_independence_is_feasible_matching() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let mut ends = Vec::new();
            for a in 0..4 {
                for b in 0..3 {
                    if rng.gen_bool(0.6) && ends.len() < 10 {
                        ends.push((a, b));
                    }
                }
            }
            let fa = CombinationSystem::single(IndependenceSystem::partition(vec![0, 0, 1, 1], vec![1, 1]).unwrap());
            let fb = CombinationSystem::single(IndependenceSystem::uniform(3, 2).unwrap());
            let w = (0..ends.len()).map(|i| 1.0 + i as f64).collect();
            let bi = instance(4, 3, ends.clone(), w, fa, fb);
            let sys = transfer_to_edges(&bi).unwrap();
            for x in ElemSet::full(ends.len()).subsets() {
                assert_eq!(sys.both.independent(x), bi.is_feasible_matching(x));
            }
        }
    }

    #[test]
    fn toprel_cases() {
        // agent 0: edges 0 (item 0, w 5) and 1 (item 1, w 2); agent 1: edge 2 (item 0, w 9)
        let ends = vec![(0, 0), (0, 1), (1, 0)];
        let bi = instance(3, 2, ends, vec![5.0, 2.0, 9.0], free(3), free(2));
        let sys = transfer_to_edges(&bi).unwrap();
        assert_eq!(toprel(&bi, &sys, ElemSet::EMPTY, 0).unwrap(), Some(0));
        // with agent 1 sampled, item 0 is taken by a heavier edge
        assert_eq!(toprel(&bi, &sys, set(&[1]), 0).unwrap(), Some(1));
        assert_eq!(toprel(&bi, &sys, ElemSet::EMPTY, 2).unwrap(), None);
    }

    #[test]
    fn agent_sim_claims_hold() {
        let ends = vec![(0, 0), (0, 1), (1, 0), (1, 2), (2, 1), (2, 2), (3, 0), (3, 2)];
        let fa = CombinationSystem::single(IndependenceSystem::partition(vec![0, 0, 1, 1], vec![1, 1]).unwrap());
        let fb = CombinationSystem::single(IndependenceSystem::partition(vec![0, 1, 1], vec![1, 1]).unwrap());
        let w = vec![3.0, 1.0, 4.0, 1.5, 5.0, 9.0, 2.6, 5.3];
        let bi = instance(4, 3, ends, w, fa, fb);
        let sys = transfer_to_edges(&bi).unwrap();
        let k = sys.k.unwrap();
        assert_eq!(k, 2);
        for y in ElemSet::full(4).subsets() {
            let b = simulate_agent_buckets(&bi, &sys, y).unwrap();
            check_agent_claims(&bi, &sys, &b).unwrap().unwrap();
            assert!(b.counting_bound_holds(k, true));
        }
    }

    #[test]
    fn agent_sim_with_p1_is_all_sample() {
        let ends = vec![(0, 0), (1, 0)];
        let bi = instance(2, 1, ends, vec![1.0, 2.0], free(2), free(1));
        let sys = transfer_to_edges(&bi).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let b = agent_core_lemma_sim(&bi, &sys, 1.0, &mut rng).unwrap();
        assert!(b.r.is_empty() && b.n.is_empty());
    }

    #[test]
    fn single_edge_exact() {
        // accepted iff the agent lands in S2 and the rank-1 OOCS, with an
        // empty sample, takes the first offer: P = 1 - p3.
        let bi = instance(1, 1, vec![(0, 0)], vec![1.0], free(1), free(1));
        let sys = transfer_to_edges(&bi).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let (p, q) = (0.25, 0.5);
        let (_, _, p3) = AgentPhases::thresholds(p, q);
        let trials = 20_000;
        let mut hits = 0;
        for _ in 0..trials {
            let mut o = Rank1Oocs::new(bi.weights());
            let r = free_order_agent(&bi, &sys, &mut o, p, &mut rng).unwrap();
            hits += r.alg.len();
        }
        let freq = hits as f64 / trials as f64;
        let sd = ((1.0 - p3) * p3 / trials as f64).sqrt();
        assert!((freq - (1.0 - p3)).abs() < 4.0 * sd, "{freq} vs {}", 1.0 - p3);
    }

    #[test]
    fn degenerate_thresholds_select_nothing() {
        let bi = instance(2, 1, vec![(0, 0), (1, 0)], vec![1.0, 2.0], free(2), free(1));
        let sys = transfer_to_edges(&bi).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut o = Rank1Oocs::new(bi.weights());
        let r = free_order_agent(&bi, &sys, &mut o, 1.0, &mut rng).unwrap();
        assert!(r.alg.is_empty());
    }

    #[test]
    fn agents_revealed_once_and_output_feasible() {
        let ends = vec![(0, 0), (0, 1), (1, 0), (1, 2), (2, 1), (2, 2), (3, 0), (3, 2)];
        let fb_sys = IndependenceSystem::partition(vec![0, 1, 1], vec![1, 1]).unwrap();
        let fb = CombinationSystem::single(fb_sys);
        let w = vec![3.0, 1.0, 4.0, 1.5, 5.0, 9.0, 2.6, 5.3];
        let bi = instance(4, 3, ends, w, free(4), fb);
        let sys = transfer_to_edges(&bi).unwrap();
        let block_of: Vec<Option<usize>> = (0..bi.edges()).map(|e| Some([0, 1, 1][bi.item_of(e)])).collect();
        let times = [0.1, 0.45, 0.7, 0.95];
        let phases = AgentPhases::from_times(&times, 0.3, 0.5);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for (_, r) in enumerate_orders(|o| {
            let mut alg_b = PartitionOocs::new(bi.weights(), block_of.clone());
            free_order_agent_on(&bi, &sys, &mut alg_b, phases, o, &mut rng).unwrap()
        }) {
            let seen: ElemSet = r.revealed.iter().collect();
            assert_eq!(seen.len(), r.revealed.len());
            assert_eq!(seen, phases.s2);
            assert!(bi.is_feasible_matching(r.alg));
        }
        let r = free_order_agent_on(
            &bi,
            &sys,
            &mut PartitionOocs::new(bi.weights(), block_of),
            phases,
            &mut IdOrder,
            &mut rng,
        )
        .unwrap();
        assert!(bi.is_feasible_matching(r.alg));
    }
}

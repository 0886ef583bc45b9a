//! Instance generators. Every generator is a pure function of its parameters
//! and the RNG it is handed.

use rand::seq::SliceRandom;
use rand::Rng;

use secretary_core::agent::BipartiteInstance;
use secretary_core::assignment::{AssignmentInstance, Hyperedge};
use secretary_core::format::WeightedSystem;
use secretary_core::{
    CombinationSystem, ElemSet, Independence, IndependenceSystem, Part, Rational, Result, WeightedInstance,
};

/// Weights drawn uniformly from `[1, 10)`.
pub fn weights<R: Rng + ?Sized>(n: usize, rng: &mut R) -> WeightedInstance {
    WeightedInstance::new((0..n).map(|_| rng.gen_range(1.0..10.0)).collect()).expect("positive weights")
}

/// Simple graph on `vertices` with `edges` distinct random vertex pairs.
pub fn graphic<R: Rng + ?Sized>(vertices: usize, edges: usize, rng: &mut R) -> Result<IndependenceSystem> {
    let mut pairs: Vec<(usize, usize)> = (0..vertices)
        .flat_map(|u| (u + 1..vertices).map(move |v| (u, v)))
        .collect();
    pairs.shuffle(rng);
    pairs.truncate(edges);
    IndependenceSystem::graphic(vertices, pairs)
}

pub fn partition<R: Rng + ?Sized>(n: usize, blocks: usize, max_cap: usize, rng: &mut R) -> Result<IndependenceSystem> {
    let block_of = (0..n).map(|_| rng.gen_range(0..blocks)).collect();
    let capacities = (0..blocks).map(|_| rng.gen_range(1..=max_cap.max(1))).collect();
    IndependenceSystem::partition(block_of, capacities)
}

pub fn uniform<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<IndependenceSystem> {
    IndependenceSystem::uniform(n, rng.gen_range(1..=n.max(1)))
}

/// Random chain-and-sibling laminar family built by recursive splitting.
pub fn laminar<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<IndependenceSystem> {
    let mut sets = Vec::new();
    let mut caps = Vec::new();
    let mut stack = vec![ElemSet::full(n)];
    while let Some(s) = stack.pop() {
        if s.len() < 2 {
            continue;
        }
        sets.push(s);
        caps.push(rng.gen_range(1..s.len()));
        let mut ids = s.to_vec();
        ids.shuffle(rng);
        let cut = rng.gen_range(1..ids.len());
        stack.push(ids[..cut].iter().collect());
        stack.push(ids[cut..].iter().collect());
    }
    IndependenceSystem::laminar(n, sets, caps)
}

/// Each left element gets one to three random right neighbors.
pub fn transversal<R: Rng + ?Sized>(n: usize, right: usize, rng: &mut R) -> Result<IndependenceSystem> {
    let neighbors = (0..n)
        .map(|_| {
            let d = rng.gen_range(1..=3.min(right));
            let mut rs: Vec<usize> = (0..right).collect();
            rs.shuffle(rng);
            rs.truncate(d);
            rs.sort_unstable();
            rs
        })
        .collect();
    IndependenceSystem::transversal(right, neighbors)
}

/// A random matroid on `n` elements: graphic, partition, uniform, laminar or
/// transversal.
pub fn random_matroid<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<IndependenceSystem> {
    match rng.gen_range(0..5) {
        0 => {
            // Enough vertices that n distinct pairs exist.
            let mut v = 2;
            while v * (v - 1) / 2 < n {
                v += 1;
            }
            graphic(v + 1, n, rng)
        }
        1 => partition(n, (n / 3).max(1), 2, rng),
        2 => uniform(n, rng),
        3 => laminar(n, rng),
        _ => transversal(n, (n / 2).max(1), rng),
    }
}

/// Intersection of `k` random unit-capacity partition matroids on `0..n`,
/// each with about `n/2` blocks.
pub fn intersection<R: Rng + ?Sized>(k: usize, n: usize, rng: &mut R) -> Result<CombinationSystem> {
    let parts = (0..k)
        .map(|_| {
            let blocks = (n / 2).max(1);
            let sys = IndependenceSystem::partition((0..n).map(|_| rng.gen_range(0..blocks)).collect(), vec![1; blocks])?;
            Ok(Part::on(sys, ElemSet::full(n)))
        })
        .collect::<Result<Vec<_>>>()?;
    CombinationSystem::combine(n, parts)
}

/// Intersection of `k` random matroids of mixed kinds.
pub fn mixed_intersection<R: Rng + ?Sized>(k: usize, n: usize, rng: &mut R) -> Result<CombinationSystem> {
    let parts = (0..k)
        .map(|_| Ok(Part::on(random_matroid(n, rng)?, ElemSet::full(n))))
        .collect::<Result<Vec<_>>>()?;
    CombinationSystem::combine(n, parts)
}

/// Integer sizes in `[u, ratio·u]` for a fixed unit `u`, so the size ratio is
/// at most `ratio`; capacity about a third of the total.
pub fn knapsack<R: Rng + ?Sized>(n: usize, ratio: u32, rng: &mut R) -> Result<IndependenceSystem> {
    let unit = 4i64;
    let top = unit * ratio.max(1) as i64;
    let sizes: Vec<i64> = (0..n).map(|_| rng.gen_range(unit..=top)).collect();
    let max = *sizes.iter().max().unwrap_or(&1);
    let total: i64 = sizes.iter().sum();
    let cap = (total / 3).max(max);
    IndependenceSystem::knapsack(
        sizes.into_iter().map(Rational::from_integer).collect(),
        Rational::from_integer(cap),
    )
}

/// The bipartite path on `len` edges as a matching system, weights
/// decreasing from `1 + ε` to `1`.
pub fn path(len: usize) -> Result<WeightedSystem> {
    let parts = (0..=len)
        .filter_map(|v| {
            let inc: Vec<usize> = (0..len).filter(|&i| i == v || i + 1 == v).collect();
            (!inc.is_empty()).then(|| IndependenceSystem::uniform(inc.len(), 1).map(|s| Part::new(s, inc)))
        })
        .collect::<Result<Vec<_>>>()?;
    let eps = 0.1;
    let denom = (len.max(2) - 1) as f64;
    let w = (0..len).map(|i| 1.0 + eps * (len - 1 - i) as f64 / denom).collect();
    Ok(WeightedSystem {
        system: CombinationSystem::combine(len, parts)?,
        weights: WeightedInstance::new(w)?,
    })
}

fn sets(xs: &[&[usize]]) -> Vec<ElemSet> {
    xs.iter().map(|x| x.iter().collect()).collect()
}

/// 2-growth system that is not 2-circuit-bounded: bases `{0,1}`, `{0,2}`,
/// `{0,3}`, `{1,2,3}`.
pub fn separation() -> Result<IndependenceSystem> {
    IndependenceSystem::explicit_bases(4, sets(&[&[0, 1], &[0, 2], &[0, 3], &[1, 2, 3]]))
}

/// 2-system on `{x, a, b, c, d} = {0, …, 4}` whose contraction by `a` is not
/// a 2-system.
pub fn two_system() -> Result<IndependenceSystem> {
    IndependenceSystem::explicit_bases(5, sets(&[&[1, 2, 3, 4], &[0, 1], &[0, 2], &[0, 3], &[0, 4]]))
}

pub fn v33() -> Result<IndependenceSystem> {
    IndependenceSystem::interval_stable_set(8, 3, 3)
}

/// Bipartite instance with a random edge set. `F_A` is free when
/// `agent_partition` is false, otherwise a random unit partition of agents;
/// `F_B` is a unit partition of items into `item_blocks` blocks.
pub fn bipartite<R: Rng + ?Sized>(
    agents: usize,
    items: usize,
    degree: usize,
    agent_partition: bool,
    item_blocks: usize,
    rng: &mut R,
) -> Result<BipartiteInstance> {
    let mut ends = Vec::new();
    for a in 0..agents {
        let mut its: Vec<usize> = (0..items).collect();
        its.shuffle(rng);
        its.truncate(degree.min(items).max(1));
        its.sort_unstable();
        ends.extend(its.into_iter().map(|b| (a, b)));
    }
    let fa = if agent_partition {
        let blocks = (agents / 2).max(1);
        IndependenceSystem::partition((0..agents).map(|_| rng.gen_range(0..blocks)).collect(), vec![1; blocks])?
    } else {
        IndependenceSystem::free(agents)?
    };
    let blocks = item_blocks.clamp(1, items.max(1));
    let fb = IndependenceSystem::partition((0..items).map(|_| rng.gen_range(0..blocks)).collect(), vec![1; blocks])?;
    let w = weights(ends.len(), rng);
    BipartiteInstance::new(ends, w, CombinationSystem::single(fa), CombinationSystem::single(fb))
}

/// Hypergraph assignment instance: each agent gets `per_agent` bundles of
/// 1..=k distinct goods and a uniform system of random rank. Padded with
/// edgeless agents to at least `k + 1` agents.
pub fn hypergraph<R: Rng + ?Sized>(
    agents: usize,
    goods: usize,
    k: usize,
    per_agent: usize,
    rng: &mut R,
) -> Result<AssignmentInstance> {
    let mut edges = Vec::new();
    let mut systems = Vec::new();
    for a in 0..agents {
        for _ in 0..per_agent {
            let mut gs: Vec<usize> = (0..goods).collect();
            gs.shuffle(rng);
            gs.truncate(rng.gen_range(1..=k.min(goods).max(1)));
            edges.push(Hyperedge {
                agent: a,
                goods: gs.into_iter().collect(),
            });
        }
        systems.push(IndependenceSystem::uniform(per_agent, rng.gen_range(1..=per_agent.max(1)))?);
    }
    let w = weights(edges.len(), rng);
    AssignmentInstance::new(agents, goods, edges, w, systems)?.padded(k + 1)
}

/// Secretary problem with groups over a unit partition matroid on items:
/// items are split uniformly at random into `m` groups, group `g` becomes
/// agent `g`, and item `x` becomes the hyperedge `(group(x), {block(x)})`.
/// Items outside a group have no edge to it.
pub fn groups<R: Rng + ?Sized>(
    block_of: &[usize],
    item_weights: &[f64],
    m: usize,
    rng: &mut R,
) -> Result<AssignmentInstance> {
    let blocks = block_of.iter().max().map_or(0, |b| b + 1);
    let mut edges = Vec::new();
    let mut deg = vec![0; m];
    for &b in block_of {
        let g = rng.gen_range(0..m);
        deg[g] += 1;
        edges.push(Hyperedge {
            agent: g,
            goods: ElemSet::singleton(b),
        });
    }
    let systems = deg.into_iter().map(IndependenceSystem::free).collect::<Result<Vec<_>>>()?;
    AssignmentInstance::new(m, blocks, edges, WeightedInstance::new(item_weights.to_vec())?, systems)
}

/// Generator kinds accepted by [`generate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Graphic,
    Partition,
    Uniform,
    Laminar,
    Transversal,
    Intersection,
    Knapsack,
    Interval,
    Bipartite,
    Hypergraph,
    Path,
    Separation,
    TwoSystem,
    V33,
}

impl std::str::FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "graphic" => Kind::Graphic,
            "partition" => Kind::Partition,
            "uniform" => Kind::Uniform,
            "laminar" => Kind::Laminar,
            "transversal" => Kind::Transversal,
            "intersection" => Kind::Intersection,
            "knapsack" => Kind::Knapsack,
            "interval" => Kind::Interval,
            "bipartite" => Kind::Bipartite,
            "hypergraph" => Kind::Hypergraph,
            "path" => Kind::Path,
            "separation" => Kind::Separation,
            "two-system" => Kind::TwoSystem,
            "v33" => Kind::V33,
            _ => return Err(format!("unknown kind `{s}`")),
        })
    }
}

/// Size parameters for [`generate`]; kinds read only the fields they need.
#[derive(Debug, Clone)]
pub struct Params {
    pub n: usize,
    pub k: usize,
    pub vertices: usize,
    pub ratio: u32,
    pub a: usize,
    pub b: usize,
    pub len: usize,
    pub agents: usize,
    pub items: usize,
    pub degree: usize,
    pub per_agent: usize,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            n: 10,
            k: 2,
            vertices: 6,
            ratio: 2,
            a: 3,
            b: 3,
            len: 6,
            agents: 6,
            items: 6,
            degree: 2,
            per_agent: 2,
        }
    }
}

/// Instance file text for `kind`, a pure function of `(kind, params, seed)`.
/// Systems come out weighted so they can be run directly.
pub fn generate(kind: Kind, params: &Params, seed: u64) -> Result<String> {
    use rand::SeedableRng;
    use secretary_core::format::{write_assignment, write_bipartite, write_weighted};

    let rng = &mut rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let p = params;
    let single = |sys: IndependenceSystem, rng: &mut rand_chacha::ChaCha8Rng| {
        let weights = weights(sys.ground_size(), rng);
        write_weighted(&WeightedSystem {
            system: CombinationSystem::single(sys),
            weights,
        })
    };
    match kind {
        Kind::Graphic => single(graphic(p.vertices, p.n, rng)?, rng),
        Kind::Partition => single(partition(p.n, (p.n / 3).max(1), 2, rng)?, rng),
        Kind::Uniform => single(uniform(p.n, rng)?, rng),
        Kind::Laminar => single(laminar(p.n, rng)?, rng),
        Kind::Transversal => single(transversal(p.n, (p.n / 2).max(1), rng)?, rng),
        Kind::Knapsack => single(knapsack(p.n, p.ratio, rng)?, rng),
        Kind::Interval => single(IndependenceSystem::interval_stable_set(p.n, p.a, p.b)?, rng),
        Kind::Separation => single(separation()?, rng),
        Kind::TwoSystem => single(two_system()?, rng),
        Kind::V33 => single(v33()?, rng),
        Kind::Intersection => {
            let system = intersection(p.k, p.n, rng)?;
            let weights = weights(p.n, rng);
            write_weighted(&WeightedSystem { system, weights })
        }
        Kind::Path => write_weighted(&path(p.len)?),
        Kind::Bipartite => write_bipartite(&bipartite(p.agents, p.items, p.degree, true, (p.items / 2).max(1), rng)?),
        Kind::Hypergraph => write_assignment(&hypergraph(p.agents, p.items, p.k, p.per_agent, rng)?),
    }
}

//! Combinations of independence systems over overlapping ground sets.

use std::sync::Arc;

use num_integer::Integer;

use crate::error::{input, Error, Result};
use crate::set::{ElemSet, MAX_GROUND};
use crate::system::{Independence, IndependenceSystem, Kind, Rational};

/// One component: a system whose local element `i` is global `members[i]`.
#[derive(Debug, Clone)]
pub struct Component {
    pub system: Arc<IndependenceSystem>,
    pub members: Vec<usize>,
    pub growth: Option<usize>,
    mask: ElemSet,
    identity: bool,
}

impl Component {
    pub fn mask(&self) -> ElemSet {
        self.mask
    }

    /// Local ids of `x ∩ S_j`.
    pub fn to_local(&self, x: ElemSet, local_of: &[usize]) -> ElemSet {
        let x = x.intersection(self.mask);
        if self.identity {
            return x;
        }
        x.iter().map(|e| local_of[e]).collect()
    }

    pub fn to_global(&self, x: ElemSet) -> ElemSet {
        x.iter().map(|i| self.members[i]).collect()
    }
}

/// Input to [`CombinationSystem::combine`].
pub struct Part {
    pub system: Arc<IndependenceSystem>,
    pub members: Vec<usize>,
    /// `None` derives the default: 1 for matroids, ⌈ρ⌉ for knapsacks.
    pub growth: Option<usize>,
}

impl Part {
    pub fn new(system: IndependenceSystem, members: Vec<usize>) -> Self {
        Part {
            system: Arc::new(system),
            members,
            growth: None,
        }
    }

    /// Component on the members of `subset` in increasing order.
    pub fn on(system: IndependenceSystem, subset: ElemSet) -> Self {
        Self::new(system, subset.to_vec())
    }

    pub fn with_growth(mut self, k: usize) -> Self {
        self.growth = Some(k);
        self
    }
}

/// Independent iff every component sees an independent restriction.
#[derive(Debug, Clone)]
pub struct CombinationSystem {
    ground_size: usize,
    components: Vec<Component>,
    incidence: Vec<Vec<usize>>,
    /// `local_of[j][e]`: local id of global `e` in component `j`.
    local_of: Vec<Vec<usize>>,
}

/// Growth parameter implied by the kind alone.
pub fn default_growth(sys: &IndependenceSystem) -> Option<usize> {
    if sys.is_matroid() {
        return Some(1);
    }
    match sys.kind() {
        Kind::Knapsack { sizes, .. } => knapsack_ratio_ceil(sizes),
        Kind::Derived { base, .. } => default_growth(base),
        _ => None,
    }
}

/// ⌈max size / min size⌉, or `None` when a zero size makes it unbounded.
pub fn knapsack_ratio_ceil(sizes: &[Rational]) -> Option<usize> {
    let zero = Rational::from_integer(0);
    if sizes.is_empty() || sizes.iter().all(|s| *s == zero) {
        return Some(1);
    }
    let min = *sizes.iter().min()?;
    let max = *sizes.iter().max()?;
    if min == zero {
        return None;
    }
    let ratio = max / min;
    let (q, r) = ratio.numer().div_rem(ratio.denom());
    Some((q + i64::from(r != 0)).max(1) as usize)
}

impl CombinationSystem {
    pub fn combine(ground_size: usize, parts: Vec<Part>) -> Result<Self> {
        if ground_size > MAX_GROUND {
            return Err(input(format!("ground size {ground_size} exceeds {MAX_GROUND}")));
        }
        let mut components = Vec::with_capacity(parts.len());
        let mut incidence = vec![Vec::new(); ground_size];
        let mut local_of = Vec::with_capacity(parts.len());
        for (j, part) in parts.into_iter().enumerate() {
            if part.members.len() != part.system.ground_size() {
                return Err(input(format!(
                    "component {j}: {} members for a ground set of size {}",
                    part.members.len(),
                    part.system.ground_size()
                )));
            }
            let mut mask = ElemSet::EMPTY;
            let mut local = vec![usize::MAX; ground_size];
            for (i, &e) in part.members.iter().enumerate() {
                if e >= ground_size {
                    return Err(Error::ElementOutOfRange {
                        element: e,
                        ground: ground_size,
                    });
                }
                if mask.contains(e) {
                    return Err(input(format!("component {j} lists element {e} twice")));
                }
                mask.insert(e);
                local[e] = i;
                incidence[e].push(j);
            }
            let identity = part.members.iter().enumerate().all(|(i, &e)| i == e);
            let growth = part.growth.or_else(|| default_growth(&part.system));
            components.push(Component {
                system: part.system,
                members: part.members,
                growth,
                mask,
                identity,
            });
            local_of.push(local);
        }
        if let Some(e) = (0..ground_size).find(|&e| incidence[e].is_empty()) {
            return Err(input(format!("element {e} is covered by no component")));
        }
        Ok(CombinationSystem {
            ground_size,
            components,
            incidence,
            local_of,
        })
    }

    /// A single system viewed as a one-component combination.
    pub fn single(sys: IndependenceSystem) -> Self {
        let n = sys.ground_size();
        Self::combine(n, vec![Part::new(sys, (0..n).collect())]).expect("identity cover")
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// Components containing `e`.
    pub fn incidence(&self, e: usize) -> &[usize] {
        &self.incidence[e]
    }

    pub fn local(&self, j: usize, x: ElemSet) -> ElemSet {
        self.components[j].to_local(x, &self.local_of[j])
    }

    pub fn local_id(&self, j: usize, e: usize) -> usize {
        self.local_of[j][e]
    }

    /// Max number of components containing one element; matroid components only.
    pub fn matchoid_k(&self) -> Result<usize> {
        if let Some(j) = self.components.iter().position(|c| !c.system.is_matroid()) {
            return Err(Error::Unsupported(format!(
                "matchoid_k: component {j} is a {} system, not a matroid",
                self.components[j].system.kind_name()
            )));
        }
        Ok(self.incidence.iter().map(Vec::len).max().unwrap_or(0))
    }

    /// `max_e Σ_{j ∋ e} k_j`.
    pub fn growth_k(&self) -> Result<usize> {
        if let Some(j) = self.components.iter().position(|c| c.growth.is_none()) {
            return Err(Error::Unsupported(format!(
                "growth_k: component {j} has unknown growth parameter; \
                 determine it with the class checkers and pass it explicitly"
            )));
        }
        Ok(self
            .incidence
            .iter()
            .map(|js| js.iter().map(|&j| self.components[j].growth.unwrap()).sum())
            .max()
            .unwrap_or(0))
    }

    pub fn all_matroids(&self) -> bool {
        self.components.iter().all(|c| c.system.is_matroid())
    }
}

impl Independence for CombinationSystem {
    fn ground_size(&self) -> usize {
        self.ground_size
    }

    fn independent(&self, x: ElemSet) -> bool {
        self.components
            .iter()
            .zip(&self.local_of)
            .all(|(c, local)| c.system.independent(c.to_local(x, local)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> ElemSet {
        v.iter().collect()
    }

    /// Matching system of a graph: a rank-1 uniform matroid per vertex.
    fn matching(vertices: usize, edges: &[(usize, usize)]) -> CombinationSystem {
        let parts = (0..vertices)
            .filter_map(|v| {
                let inc: Vec<usize> = edges
                    .iter()
                    .enumerate()
                    .filter(|(_, &(a, b))| a == v || b == v)
                    .map(|(i, _)| i)
                    .collect();
                (!inc.is_empty())
                    .then(|| Part::new(IndependenceSystem::uniform(inc.len(), 1).unwrap(), inc))
            })
            .collect();
        CombinationSystem::combine(edges.len(), parts).unwrap()
    }

    #[test]
    fn vertex_rank1_gives_matchings() {
        let edges = [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)];
        let m = matching(4, &edges);
        for x in ElemSet::full(5).subsets() {
            let mut deg = [0; 4];
            for e in x {
                deg[edges[e].0] += 1;
                deg[edges[e].1] += 1;
            }
            assert_eq!(m.independent(x), deg.iter().all(|&d| d <= 1), "{x}");
        }
        assert_eq!(m.matchoid_k().unwrap(), 2);
        assert_eq!(m.growth_k().unwrap(), 2);
    }

    #[test]
    fn gap_feasibility() {
        // 2 agents with knapsacks, 3 jobs; edges (agent, job, size).
        let edges = [(0, 0, 3), (0, 1, 4), (0, 2, 5), (1, 0, 2), (1, 2, 6)];
        let mut parts = Vec::new();
        for a in 0..2 {
            let ids: Vec<usize> = (0..edges.len()).filter(|&i| edges[i].0 == a).collect();
            let sizes = ids.iter().map(|&i| Rational::from_integer(edges[i].2)).collect();
            parts.push(Part::new(
                IndependenceSystem::knapsack(sizes, Rational::from_integer(8)).unwrap(),
                ids,
            ));
        }
        for job in 0..3 {
            let ids: Vec<usize> = (0..edges.len()).filter(|&i| edges[i].1 == job).collect();
            parts.push(Part::new(IndependenceSystem::uniform(ids.len(), 1).unwrap(), ids));
        }
        let gap = CombinationSystem::combine(edges.len(), parts).unwrap();
        for x in ElemSet::full(edges.len()).subsets() {
            let load = |a| x.iter().filter(|&i| edges[i].0 == a).map(|i| edges[i].2).sum::<i64>();
            let jobs_ok = (0..3).all(|j| x.iter().filter(|&i| edges[i].1 == j).count() <= 1);
            assert_eq!(gap.independent(x), load(0) <= 8 && load(1) <= 8 && jobs_ok);
        }
    }

    #[test]
    fn identical_grounds_intersect() {
        let a = IndependenceSystem::partition(vec![0, 0, 1, 1], vec![1, 1]).unwrap();
        let b = IndependenceSystem::partition(vec![0, 1, 0, 1], vec![1, 1]).unwrap();
        let c = CombinationSystem::combine(
            4,
            vec![Part::on(a.clone(), ElemSet::full(4)), Part::on(b.clone(), ElemSet::full(4))],
        )
        .unwrap();
        for x in ElemSet::full(4).subsets() {
            assert_eq!(c.independent(x), a.independent(x) && b.independent(x));
        }
    }

    #[test]
    fn coverage_gap_rejected() {
        let r = CombinationSystem::combine(3, vec![Part::on(IndependenceSystem::free(2).unwrap(), set(&[0, 1]))]);
        assert!(matches!(r, Err(Error::Input(_))));
    }

    #[test]
    fn disjoint_components_matchoid_one() {
        let c = CombinationSystem::combine(
            4,
            vec![
                Part::on(IndependenceSystem::uniform(2, 1).unwrap(), set(&[0, 1])),
                Part::on(IndependenceSystem::uniform(2, 1).unwrap(), set(&[2, 3])),
            ],
        )
        .unwrap();
        assert_eq!(c.matchoid_k().unwrap(), 1);
    }

    #[test]
    fn hypergraph_matching_three() {
        // Triples over 5 vertices.
        let triples = [[0, 1, 2], [2, 3, 4], [0, 3, 4], [1, 2, 3]];
        let parts = (0..5)
            .map(|v| {
                let ids: Vec<usize> = (0..4).filter(|&t| triples[t].contains(&v)).collect();
                Part::new(IndependenceSystem::uniform(ids.len(), 1).unwrap(), ids)
            })
            .collect();
        let c = CombinationSystem::combine(4, parts).unwrap();
        assert_eq!(c.matchoid_k().unwrap(), 3);
    }

    #[test]
    fn knapsack_plus_partition_growth() {
        let sizes = vec![Rational::from_integer(1), Rational::from_integer(3), Rational::from_integer(2)];
        let k = IndependenceSystem::knapsack(sizes, Rational::from_integer(4)).unwrap();
        let p = IndependenceSystem::partition(vec![0, 0, 1], vec![1, 1]).unwrap();
        let c = CombinationSystem::combine(3, vec![Part::on(k, ElemSet::full(3)), Part::on(p, ElemSet::full(3))])
            .unwrap();
        assert_eq!(c.components()[0].growth, Some(3));
        assert_eq!(c.growth_k().unwrap(), 4);
        assert!(c.matchoid_k().is_err());
    }

    #[test]
    fn single_component_growth() {
        let s = IndependenceSystem::explicit_bases(3, vec![set(&[0, 1]), set(&[2])]).unwrap();
        let c = CombinationSystem::combine(3, vec![Part::on(s.clone(), ElemSet::full(3))]).unwrap();
        assert!(c.growth_k().is_err());
        let c = CombinationSystem::combine(3, vec![Part::on(s, ElemSet::full(3)).with_growth(2)]).unwrap();
        assert_eq!(c.growth_k().unwrap(), 2);
    }

    #[test]
    fn ratio_ceil() {
        let r = |v: &[(i64, i64)]| v.iter().map(|&(a, b)| Rational::new(a, b)).collect::<Vec<_>>();
        assert_eq!(knapsack_ratio_ceil(&r(&[(1, 1), (2, 1)])), Some(2));
        assert_eq!(knapsack_ratio_ceil(&r(&[(2, 5), (3, 5)])), Some(2));
        assert_eq!(knapsack_ratio_ceil(&r(&[(1, 3), (1, 3)])), Some(1));
        assert_eq!(knapsack_ratio_ceil(&r(&[(0, 1), (1, 3)])), None);
    }
}

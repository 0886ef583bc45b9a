//! Primitive hull, hull, (primitive) core and greedy-relevant elements.
//!
//! For a plain system `PHull(X)` is `X` plus every element that closes a
//! circuit with some independent subset of `X`. A combination takes the union
//! of its components' primitive hulls. The core of `X` keeps the elements not
//! hulled by the strictly heavier part of `X`.

use crate::combination::CombinationSystem;
use crate::error::Result;
use crate::set::ElemSet;
use crate::system::{check_element, check_in_ground, Independence, IndependenceSystem};
use crate::weights::WeightedInstance;

/// Systems with a hull operator. Plain systems use the primitive hull.
pub trait HullSystem: Independence {
    fn hull_contains(&self, x: ElemSet, e: usize) -> Result<bool>;

    fn hull(&self, x: ElemSet) -> Result<ElemSet> {
        let mut out = ElemSet::EMPTY;
        for e in self.ground() {
            if self.hull_contains(x, e)? {
                out.insert(e);
            }
        }
        Ok(out)
    }
}

/// `e ∈ PHull(x)`.
pub fn phull_contains(sys: &IndependenceSystem, x: ElemSet, e: usize) -> Result<bool> {
    check_in_ground(x, sys.ground_size())?;
    check_element(e, sys.ground_size())?;
    if x.contains(e) {
        return Ok(true);
    }
    sys.closes_circuit(x, ElemSet::EMPTY, e)
}

/// Definition-level primitive hull test by enumerating subsets of `x`.
pub fn phull_contains_brute(sys: &IndependenceSystem, x: ElemSet, e: usize) -> bool {
    x.contains(e)
        || x
            .subsets()
            .any(|i| sys.independent(i) && !sys.independent(i.with(e)))
}

impl HullSystem for IndependenceSystem {
    fn hull_contains(&self, x: ElemSet, e: usize) -> Result<bool> {
        phull_contains(self, x, e)
    }
}

impl HullSystem for CombinationSystem {
    fn hull_contains(&self, x: ElemSet, e: usize) -> Result<bool> {
        check_element(e, self.ground_size())?;
        if x.contains(e) {
            return Ok(true);
        }
        for &j in self.incidence(e) {
            let comp = &self.components()[j];
            let lx = self.local(j, x);
            if comp
                .system
                .closes_circuit(lx, ElemSet::EMPTY, self.local_id(j, e))?
            {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Elements of `x` not hulled by the strictly heavier part of `x`.
pub fn core<S: HullSystem + ?Sized>(sys: &S, inst: &WeightedInstance, x: ElemSet) -> Result<ElemSet> {
    let mut out = ElemSet::EMPTY;
    let mut heavier = ElemSet::EMPTY;
    for e in inst.sorted_desc(x) {
        if !sys.hull_contains(heavier, e)? {
            out.insert(e);
        }
        heavier.insert(e);
    }
    Ok(out)
}

/// Primitive core of a plain system.
pub fn pcore(sys: &IndependenceSystem, inst: &WeightedInstance, x: ElemSet) -> Result<ElemSet> {
    core(sys, inst, x)
}

/// Core computed componentwise: `∩_j ((X \ S_j) ∪ PCore_j(X ∩ S_j))`.
pub fn core_by_components(
    comb: &CombinationSystem,
    inst: &WeightedInstance,
    x: ElemSet,
) -> Result<ElemSet> {
    let mut out = x;
    for (j, comp) in comb.components().iter().enumerate() {
        let xj = x.intersection(comp.mask());
        let mut keep = x.difference(comp.mask());
        for e in xj {
            let heavier = comb.local(j, inst.heavier_in(xj, e));
            if !phull_contains(&comp.system, heavier, comb.local_id(j, e))? {
                keep.insert(e);
            }
        }
        out = out.intersection(keep);
    }
    Ok(out)
}

/// Greedy-relevance queries against a fixed sample `Y`.
///
/// Stores the greedy prefix after each element of `Y` (heaviest first), so a
/// query for `e` looks up the prefix of strictly heavier `Y` elements and makes
/// one oracle call.
pub struct RelevanceContext<'a, S: ?Sized> {
    sys: &'a S,
    inst: &'a WeightedInstance,
    y: ElemSet,
    positions: Vec<usize>,
    prefixes: Vec<ElemSet>,
}

impl<'a, S: Independence + ?Sized> RelevanceContext<'a, S> {
    pub fn new(sys: &'a S, inst: &'a WeightedInstance, y: ElemSet) -> Self {
        let ys = inst.sorted_desc(y);
        let mut prefixes = Vec::with_capacity(ys.len() + 1);
        let mut cur = ElemSet::EMPTY;
        prefixes.push(cur);
        for &e in &ys {
            if sys.independent(cur.with(e)) {
                cur.insert(e);
            }
            prefixes.push(cur);
        }
        RelevanceContext {
            sys,
            inst,
            y,
            positions: ys.iter().map(|&e| inst.position(e)).collect(),
            prefixes,
        }
    }

    pub fn sample(&self) -> ElemSet {
        self.y
    }

    /// `Greedy(Y)`.
    pub fn greedy(&self) -> ElemSet {
        *self.prefixes.last().unwrap()
    }

    /// Greedy prefix of the `Y` elements strictly heavier than `e`.
    pub fn prefix_before(&self, e: usize) -> ElemSet {
        let p = self.inst.position(e);
        self.prefixes[self.positions.partition_point(|&q| q < p)]
    }

    /// `e ∈ Greedy(Y + e)` for `e ∉ Y`.
    pub fn is_greedy_relevant(&self, e: usize) -> bool {
        debug_assert!(!self.y.contains(e));
        self.sys.independent(self.prefix_before(e).with(e))
    }

    /// `Rel(Y)`.
    pub fn greedy_relevant(&self) -> ElemSet {
        self.sys
            .ground()
            .difference(self.y)
            .iter()
            .filter(|&e| self.is_greedy_relevant(e))
            .collect()
    }
}

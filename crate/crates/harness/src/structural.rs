//! Exhaustive structural checks on small systems. Each check returns the
//! first counterexample it finds.

use rand::Rng;

use secretary_core::classes::random_downward_closed;
use secretary_core::format::WeightedSystem;
use secretary_core::hull::{core_by_components, phull_contains_brute};
use secretary_core::{
    core, greedy, opt_basis, pcore, CombinationSystem, ElemSet, HullSystem, Independence, IndependenceSystem, Result,
    WeightedInstance,
};

use crate::gen;

pub type Check = Result<Option<String>>;

/// Hull of every subset of the ground set, indexed by mask. `subsets`
/// enumerates in increasing mask order.
fn all_hulls<S: HullSystem + ?Sized>(sys: &S) -> Result<Vec<ElemSet>> {
    sys.ground().subsets().map(|x| sys.hull(x)).collect()
}

/// Inclusion, monotonicity and the basis-extension property.
pub fn hull_axioms<S: HullSystem + ?Sized>(sys: &S) -> Check {
    let n = sys.ground_size();
    let hulls = all_hulls(sys)?;
    let h = |x: ElemSet| hulls[x.bits() as usize];
    for x in ElemSet::full(n).subsets() {
        if !x.is_subset(h(x)) {
            return Ok(Some(format!("H1: {x} ⊄ hull({x}) = {}", h(x))));
        }
        // One-element steps give monotonicity along every chain.
        for f in ElemSet::full(n).difference(x) {
            if !h(x).is_subset(h(x.with(f))) {
                return Ok(Some(format!("H2: hull({x}) ⊄ hull({})", x.with(f))));
            }
        }
        for e in ElemSet::full(n).difference(h(x)) {
            for i in x.subsets() {
                if sys.independent(i) && !sys.independent(i.with(e)) {
                    return Ok(Some(format!("H3: {e} ∉ hull({x}) but {i} + {e} is dependent")));
                }
            }
        }
    }
    Ok(None)
}

/// `X ∩ PCore(Y) ⊆ PCore(X) ⊆ Greedy(X)` for all `X ⊆ Y`.
pub fn prim_inclusion(sys: &IndependenceSystem, inst: &WeightedInstance) -> Check {
    let n = sys.ground_size();
    let pcores: Vec<ElemSet> = ElemSet::full(n)
        .subsets()
        .map(|x| pcore(sys, inst, x))
        .collect::<Result<_>>()?;
    let pc = |x: ElemSet| pcores[x.bits() as usize];
    for y in ElemSet::full(n).subsets() {
        for x in y.subsets() {
            if !x.intersection(pc(y)).is_subset(pc(x)) {
                return Ok(Some(format!("X ∩ PCore(Y) ⊄ PCore(X) for X = {x}, Y = {y}")));
            }
        }
    }
    for x in ElemSet::full(n).subsets() {
        let g = greedy(sys, inst, x);
        if !pc(x).is_subset(g) {
            return Ok(Some(format!("PCore({x}) = {} ⊄ Greedy = {g}", pc(x))));
        }
    }
    Ok(None)
}

/// On a matroid `PCore(X) = Greedy(X) = OPT(X)` for every `X`.
pub fn matroid_cores(sys: &IndependenceSystem, inst: &WeightedInstance) -> Check {
    for x in sys.ground().subsets() {
        let (p, g) = (pcore(sys, inst, x)?, greedy(sys, inst, x));
        let o = opt_basis(sys, inst, x)?.0;
        if p != g || g != o {
            return Ok(Some(format!("X = {x}: PCore {p}, Greedy {g}, OPT {o}")));
        }
    }
    Ok(None)
}

/// On an intersection of matroids on one ground set, `Core(X)` is the
/// intersection of the per-matroid optima.
pub fn intersection_core(comb: &CombinationSystem, inst: &WeightedInstance) -> Check {
    let n = comb.ground_size();
    for x in ElemSet::full(n).subsets() {
        let mut meet = x;
        for c in comb.components() {
            assert_eq!(c.members.len(), n, "components must span the ground set");
            meet = meet.intersection(greedy(&*c.system, inst, x));
        }
        let k = core(comb, inst, x)?;
        if k != meet {
            return Ok(Some(format!("X = {x}: Core {k} but ∩ OPT_j = {meet}")));
        }
    }
    Ok(None)
}

/// `e ∈ Core(X)` iff `e ∉ Hull` of the strictly heavier part of `X`, with
/// the core computed componentwise.
pub fn core_hull_equivalence(comb: &CombinationSystem, inst: &WeightedInstance) -> Check {
    for x in comb.ground().subsets() {
        let c = core_by_components(comb, inst, x)?;
        for e in x {
            let in_hull = comb.hull_contains(inst.heavier_in(x, e), e)?;
            if c.contains(e) == in_hull {
                return Ok(Some(format!("X = {x}, e = {e}: core says {}, hull says {in_hull}", c.contains(e))));
            }
        }
    }
    Ok(None)
}

/// Fast primitive-hull paths against the subset-enumeration definition.
pub fn phull_fast_paths(sys: &IndependenceSystem) -> Check {
    for x in sys.ground().subsets() {
        for e in sys.ground() {
            let fast = sys.hull_contains(x, e)?;
            if fast != phull_contains_brute(sys, x, e) {
                return Ok(Some(format!("{}: phull({x}) ∋ {e} is {fast} by the fast path", sys.kind_name())));
            }
        }
    }
    Ok(None)
}

/// Plain systems of at most ten elements covering every kind.
pub fn corpus<R: Rng + ?Sized>(rng: &mut R) -> Result<Vec<(String, IndependenceSystem)>> {
    let mut out = vec![
        ("graphic".to_string(), gen::graphic(6, 10, rng)?),
        ("partition".into(), gen::partition(10, 4, 2, rng)?),
        ("uniform".into(), IndependenceSystem::uniform(10, 4)?),
        ("laminar".into(), gen::laminar(10, rng)?),
        ("transversal".into(), gen::transversal(10, 5, rng)?),
        ("knapsack".into(), gen::knapsack(10, 3, rng)?),
        ("interval V33".into(), gen::v33()?),
        ("separation".into(), gen::separation()?),
        ("two-system".into(), gen::two_system()?),
    ];
    for i in 0..3 {
        out.push((format!("downward-closed #{i}"), random_downward_closed(10, 6, rng)?));
    }
    Ok(out)
}

/// Matroids of at most ten elements.
pub fn matroid_corpus<R: Rng + ?Sized>(rng: &mut R) -> Result<Vec<(String, IndependenceSystem)>> {
    Ok(vec![
        ("graphic".to_string(), gen::graphic(6, 10, rng)?),
        ("partition".into(), gen::partition(10, 4, 2, rng)?),
        ("uniform".into(), IndependenceSystem::uniform(10, 4)?),
        ("laminar".into(), gen::laminar(10, rng)?),
        ("transversal".into(), gen::transversal(10, 5, rng)?),
    ])
}

/// Combinations of at most ten elements.
pub fn combination_corpus<R: Rng + ?Sized>(rng: &mut R) -> Result<Vec<(String, WeightedSystem)>> {
    let mut out = vec![("path".to_string(), gen::path(6)?)];
    for k in 2..=3 {
        out.push((
            format!("{k}-intersection"),
            WeightedSystem {
                system: gen::mixed_intersection(k, 10, rng)?,
                weights: gen::weights(10, rng),
            },
        ));
    }
    out.push((
        "knapsack + partition".into(),
        WeightedSystem {
            system: CombinationSystem::combine(
                9,
                vec![
                    secretary_core::Part::on(gen::knapsack(9, 2, rng)?, ElemSet::full(9)),
                    secretary_core::Part::on(gen::partition(9, 3, 2, rng)?, ElemSet::full(9)),
                ],
            )?,
            weights: gen::weights(9, rng),
        },
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn axioms_hold_on_small_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = gen::graphic(4, 5, &mut rng).unwrap();
        assert_eq!(hull_axioms(&g).unwrap(), None);
        assert_eq!(hull_axioms(&gen::separation().unwrap()).unwrap(), None);
        let w = gen::weights(5, &mut rng);
        assert_eq!(prim_inclusion(&g, &w).unwrap(), None);
        assert_eq!(matroid_cores(&g, &w).unwrap(), None);
    }

    #[test]
    fn broken_hull_is_caught() {
        struct Shrunk(IndependenceSystem);
        impl Independence for Shrunk {
            fn ground_size(&self) -> usize {
                self.0.ground_size()
            }
            fn independent(&self, x: ElemSet) -> bool {
                self.0.independent(x)
            }
        }
        impl HullSystem for Shrunk {
            fn hull_contains(&self, x: ElemSet, e: usize) -> Result<bool> {
                Ok(x.contains(e))
            }
        }
        let u = Shrunk(IndependenceSystem::uniform(3, 1).unwrap());
        let msg = hull_axioms(&u).unwrap().unwrap();
        assert!(msg.starts_with("H3"), "{msg}");
    }

    #[test]
    fn path_core_is_first_edge() {
        let p = gen::path(6).unwrap();
        assert_eq!(core(&p.system, &p.weights, p.system.ground()).unwrap(), ElemSet::singleton(0));
    }
}

//! Exhaustive deciders for the k-system hierarchy at desk scale.
//!
//! Every checker materializes an [`IndepTable`] over the ground set and works
//! on local bitmasks. A failing report carries a witness that
//! [`validate_witness`] re-checks against the raw oracle without the table.

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::combination::CombinationSystem;
use crate::error::{Error, Result};
use crate::ops::{contract, parallel_extend, restrict, IndepTable};
use crate::set::ElemSet;
use crate::system::{Independence, IndependenceSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Class {
    System,
    Extendible,
    CircuitBounded,
    Growth,
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Class::System => "k-system",
            Class::Extendible => "k-extendible",
            Class::CircuitBounded => "k-circuit-bounded",
            Class::Growth => "k-growth",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Witness {
    /// Two bases of `x` with `|p| > k|q|`.
    System { x: ElemSet, p: ElemSet, q: ElemSet },
    /// `a ⊆ b`, `a + e` independent, no small `Z ⊆ b \ a` repairs `b + e`.
    Extendible { a: ElemSet, b: ElemSet, e: usize },
    /// `i + e` holds more than `k` circuits.
    CircuitBounded { i: ElemSet, e: usize, circuits: Vec<ElemSet> },
    /// No split of `i \ x` works for the pair `(x, i)`.
    Growth { x: ElemSet, i: ElemSet },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassReport {
    pub class: Class,
    pub k: usize,
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl ClassReport {
    fn pass(class: Class, k: usize) -> Self {
        ClassReport {
            class,
            k,
            holds: true,
            witness: None,
        }
    }

    fn fail(class: Class, k: usize, w: Witness) -> Self {
        ClassReport {
            class,
            k,
            holds: false,
            witness: Some(w),
        }
    }
}

pub const SYSTEM_CAP: usize = 14;
pub const EXTENDIBLE_CAP: usize = 12;
pub const CIRCUIT_CAP: usize = 12;
pub const GROWTH_CAP: usize = 10;

fn table_for<S: Independence + ?Sized>(sys: &S, cap: usize, what: &'static str) -> Result<IndepTable> {
    let n = sys.ground_size();
    if n > cap {
        return Err(Error::CapacityExceeded { what, size: n, cap });
    }
    IndepTable::build(sys, sys.ground(), cap)
}

fn submasks(mask: usize) -> impl Iterator<Item = usize> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & mask) };
        Some(cur)
    })
}

fn ones(mask: usize) -> usize {
    mask.count_ones() as usize
}

/// For every `X`, all bases `P, Q` of `X` satisfy `|P| ≤ k|Q|`.
pub fn is_k_system<S: Independence + ?Sized>(sys: &S, k: usize) -> Result<ClassReport> {
    let t = table_for(sys, SYSTEM_CAP, "is_k_system")?;
    Ok(k_system_on_table(&t, k))
}

fn k_system_on_table(t: &IndepTable, k: usize) -> ClassReport {
    for x in 0..=t.full_mask() {
        let bases = t.bases_of(x);
        let p = *bases.iter().max_by_key(|b| ones(**b)).unwrap();
        let q = *bases.iter().min_by_key(|b| ones(**b)).unwrap();
        if ones(p) > k * ones(q) {
            return ClassReport::fail(
                Class::System,
                k,
                Witness::System {
                    x: t.global(x),
                    p: t.global(p),
                    q: t.global(q),
                },
            );
        }
    }
    ClassReport::pass(Class::System, k)
}

/// For `A ⊆ B ∈ I` and `e ∉ B` with `A + e ∈ I`, some `Z ⊆ B \ A` with
/// `|Z| ≤ k` has `(B + e) \ Z ∈ I`.
pub fn is_k_extendible<S: Independence + ?Sized>(sys: &S, k: usize) -> Result<ClassReport> {
    let t = table_for(sys, EXTENDIBLE_CAP, "is_k_extendible")?;
    let n = t.len();
    for b in 0..=t.full_mask() {
        if !t.independent(b) {
            continue;
        }
        for e in 0..n {
            let eb = 1 << e;
            if b & eb != 0 || t.independent(b | eb) {
                continue;
            }
            let repairs: Vec<usize> = submasks(b)
                .filter(|&z| ones(z) <= k && t.independent((b | eb) & !z))
                .collect();
            for a in submasks(b) {
                if t.independent(a | eb) && !repairs.iter().any(|&z| z & a == 0) {
                    return Ok(ClassReport::fail(
                        Class::Extendible,
                        k,
                        Witness::Extendible {
                            a: t.global(a),
                            b: t.global(b),
                            e: t.elems[e],
                        },
                    ));
                }
            }
        }
    }
    Ok(ClassReport::pass(Class::Extendible, k))
}

/// For `I ∈ I` and `e ∉ I`, `I + e` contains at most `k` circuits.
pub fn is_k_circuit_bounded<S: Independence + ?Sized>(sys: &S, k: usize) -> Result<ClassReport> {
    let t = table_for(sys, CIRCUIT_CAP, "is_k_circuit_bounded")?;
    let n = t.len();
    for i in 0..=t.full_mask() {
        if !t.independent(i) {
            continue;
        }
        for e in 0..n {
            let eb = 1 << e;
            if i & eb != 0 || t.independent(i | eb) {
                continue;
            }
            let circuits: Vec<usize> = submasks(i)
                .map(|c| c | eb)
                .filter(|&c| t.is_circuit(c))
                .collect();
            if circuits.len() > k {
                return Ok(ClassReport::fail(
                    Class::CircuitBounded,
                    k,
                    Witness::CircuitBounded {
                        i: t.global(i),
                        e: t.elems[e],
                        circuits: circuits.iter().map(|&c| t.global(c)).collect(),
                    },
                ));
            }
        }
    }
    Ok(ClassReport::pass(Class::CircuitBounded, k))
}

/// Precomputed data for the growth axiom.
struct GrowthTables {
    t: IndepTable,
    bases_of: Vec<Vec<usize>>,
}

impl GrowthTables {
    fn new<S: Independence + ?Sized>(sys: &S) -> Result<Self> {
        let t = table_for(sys, GROWTH_CAP, "is_k_growth")?;
        let bases_of = (0..=t.full_mask()).map(|x| t.bases_of(x)).collect();
        Ok(GrowthTables { t, bases_of })
    }

    /// `Q` is compatible with `X` when `P ∪ Q` is independent for every basis `P` of `X`.
    fn compatible(&self, x: usize, q: usize) -> bool {
        self.bases_of[x].iter().all(|&p| self.t.independent(p | q))
    }

    /// A split `(Q, Z)` of `i \ x` with `|Z| ≤ k|x \ i|`: the canonical greedy
    /// `Q` first, then every `Q` of the minimum admissible size.
    fn split(&self, x: usize, i: usize, k: usize) -> Option<(usize, usize)> {
        let d = i & !x;
        let allowed_z = k * ones(x & !i);
        let mut q = 0;
        let mut rest = d;
        while rest != 0 {
            let b = rest & rest.wrapping_neg();
            rest ^= b;
            if self.compatible(x, q | b) {
                q |= b;
            }
        }
        if ones(d & !q) <= allowed_z {
            return Some((q, d & !q));
        }
        let need = ones(d).saturating_sub(allowed_z);
        submasks(d)
            .filter(|&q| ones(q) == need)
            .find(|&q| self.compatible(x, q))
            .map(|q| (q, d & !q))
    }
}

/// The k-basis-growth axiom, checked for every `X` against every basis of
/// the system.
pub fn is_k_growth<S: Independence + ?Sized>(sys: &S, k: usize) -> Result<ClassReport> {
    let g = GrowthTables::new(sys)?;
    let full = g.t.full_mask();
    let system_bases = g.bases_of[full].clone();
    for x in 0..=full {
        for &i in &system_bases {
            if g.split(x, i, k).is_none() {
                return Ok(ClassReport::fail(
                    Class::Growth,
                    k,
                    Witness::Growth {
                        x: g.t.global(x),
                        i: g.t.global(i),
                    },
                ));
            }
        }
    }
    Ok(ClassReport::pass(Class::Growth, k))
}

/// The split `(Q, Z)` the growth checker finds for `(x, i)`, in global ids.
pub fn growth_split<S: Independence + ?Sized>(
    sys: &S,
    x: ElemSet,
    i: ElemSet,
    k: usize,
) -> Result<Option<(ElemSet, ElemSet)>> {
    let g = GrowthTables::new(sys)?;
    let (lx, li) = (g.t.local(x), g.t.local(i));
    Ok(g.split(lx, li, k).map(|(q, z)| (g.t.global(q), g.t.global(z))))
}

pub fn check<S: Independence + ?Sized>(sys: &S, class: Class, k: usize) -> Result<ClassReport> {
    match class {
        Class::System => is_k_system(sys, k),
        Class::Extendible => is_k_extendible(sys, k),
        Class::CircuitBounded => is_k_circuit_bounded(sys, k),
        Class::Growth => is_k_growth(sys, k),
    }
}

fn all_independent_subsets<S: Independence + ?Sized>(sys: &S, x: ElemSet) -> Vec<ElemSet> {
    x.subsets().filter(|s| sys.independent(*s)).collect()
}

fn maximal_in<S: Independence + ?Sized>(sys: &S, x: ElemSet, p: ElemSet) -> bool {
    sys.independent(p) && x.difference(p).iter().all(|e| !sys.independent(p.with(e)))
}

/// Re-check a failing report straight from the definitions.
pub fn validate_witness<S: Independence + ?Sized>(sys: &S, report: &ClassReport) -> bool {
    let k = report.k;
    match &report.witness {
        None => report.holds,
        Some(Witness::System { x, p, q }) => {
            p.is_subset(*x)
                && q.is_subset(*x)
                && maximal_in(sys, *x, *p)
                && maximal_in(sys, *x, *q)
                && p.len() > k * q.len()
        }
        Some(Witness::Extendible { a, b, e }) => {
            a.is_subset(*b)
                && !b.contains(*e)
                && sys.independent(*b)
                && sys.independent(a.with(*e))
                && b.difference(*a)
                    .subsets()
                    .filter(|z| z.len() <= k)
                    .all(|z| !sys.independent(b.with(*e).difference(z)))
        }
        Some(Witness::CircuitBounded { i, e, circuits }) => {
            let minimal_dependent = |c: &ElemSet| {
                !sys.independent(*c) && c.iter().all(|f| sys.independent(c.without(f)))
            };
            sys.independent(*i)
                && !i.contains(*e)
                && circuits.len() > k
                && circuits
                    .iter()
                    .all(|c| c.is_subset(i.with(*e)) && c.contains(*e) && minimal_dependent(c))
        }
        Some(Witness::Growth { x, i }) => {
            if !sys.independent(*i) {
                return false;
            }
            let d = i.difference(*x);
            let allowed = k * x.difference(*i).len();
            let ps = all_independent_subsets(sys, *x);
            d.subsets()
                .filter(|q| d.len() - q.len() <= allowed)
                .all(|q| ps.iter().any(|p| !sys.independent(p.union(q))))
        }
    }
}

/// Minimal passing `k` per class, up to `kmax`.
#[derive(Debug, Clone, Serialize)]
pub struct Hierarchy {
    pub kmax: usize,
    pub system: Option<usize>,
    pub extendible: Option<usize>,
    pub circuit_bounded: Option<usize>,
    pub growth: Option<usize>,
    /// Supplied from the construction; never searched for.
    pub matchoid: Option<usize>,
    pub violations: Vec<String>,
}

impl Hierarchy {
    pub fn consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

fn minimal_k<S: Independence + ?Sized>(sys: &S, class: Class, kmax: usize) -> Result<Option<usize>> {
    let mut found = None;
    for k in 1..=kmax {
        let r = check(sys, class, k)?;
        if r.holds {
            found.get_or_insert(k);
        } else if found.is_some() {
            return Err(Error::Precondition(format!(
                "{class} holds at k={} but fails at k={k}",
                found.unwrap()
            )));
        }
    }
    Ok(found)
}

/// Minimal `k` for every class and the containment checks between them.
/// A class with no passing `k ≤ kmax` counts as infinite.
pub fn verify_hierarchy<S: Independence + ?Sized>(
    sys: &S,
    kmax: usize,
    matchoid: Option<usize>,
) -> Result<Hierarchy> {
    let n = sys.ground_size();
    let system = minimal_k(sys, Class::System, kmax)?;
    let extendible = if n <= EXTENDIBLE_CAP { minimal_k(sys, Class::Extendible, kmax)? } else { None };
    let circuit_bounded = if n <= CIRCUIT_CAP {
        minimal_k(sys, Class::CircuitBounded, kmax)?
    } else {
        None
    };
    let growth = if n <= GROWTH_CAP { minimal_k(sys, Class::Growth, kmax)? } else { None };
    let inf = |v: Option<usize>| v.unwrap_or(usize::MAX);
    let mut violations = Vec::new();
    let mut chain = |lo: (&str, Option<usize>), hi: (&str, Option<usize>)| {
        if inf(lo.1) > inf(hi.1) {
            violations.push(format!("minimal {} k {:?} exceeds minimal {} k {:?}", lo.0, lo.1, hi.0, hi.1));
        }
    };
    if n <= EXTENDIBLE_CAP {
        chain(("system", system), ("extendible", extendible));
    }
    if n <= GROWTH_CAP {
        chain(("extendible", extendible), ("growth", growth));
        chain(("growth", growth), ("matchoid", matchoid));
    }
    if n <= CIRCUIT_CAP {
        chain(("extendible", extendible), ("circuit-bounded", circuit_bounded));
        chain(("circuit-bounded", circuit_bounded), ("matchoid", matchoid));
    }
    Ok(Hierarchy {
        kmax,
        system,
        extendible,
        circuit_bounded,
        growth,
        matchoid,
        violations,
    })
}

/// Both sides of "k-extendible iff every contraction is a k-system".
#[derive(Debug, Clone, Serialize)]
pub struct ContractionAudit {
    pub extendible: bool,
    pub contractions_are_k_systems: bool,
    /// First independent set whose contraction is not a k-system.
    pub failing_contraction: Option<ElemSet>,
}

impl ContractionAudit {
    pub fn biconditional_holds(&self) -> bool {
        self.extendible == self.contractions_are_k_systems
    }
}

pub fn check_extendible_via_contractions(sys: &IndependenceSystem, k: usize) -> Result<ContractionAudit> {
    if sys.ground_size() > GROWTH_CAP {
        return Err(Error::CapacityExceeded {
            what: "check_extendible_via_contractions",
            size: sys.ground_size(),
            cap: GROWTH_CAP,
        });
    }
    let extendible = is_k_extendible(sys, k)?.holds;
    let mut failing = None;
    for i in sys.ground().subsets() {
        if !sys.independent(i) {
            continue;
        }
        let (c, _) = contract(sys, i)?;
        if !is_k_system(&c, k)?.holds {
            failing = Some(i);
            break;
        }
    }
    Ok(ContractionAudit {
        extendible,
        contractions_are_k_systems: failing.is_none(),
        failing_contraction: failing,
    })
}

/// Outcome of re-running a checker after each structural operation.
#[derive(Debug, Clone, Serialize)]
pub struct ClosureReport {
    pub class: Class,
    pub k: usize,
    pub parallel_extension: bool,
    pub restriction: bool,
    pub contraction: bool,
    /// Description of the first failing derived system, if any.
    pub first_failure: Option<String>,
}

impl ClosureReport {
    pub fn holds(&self) -> bool {
        self.parallel_extension && self.restriction && self.contraction
    }
}

/// Parallel-extends every non-loop, deletes every single element and
/// contracts every nonempty independent set, re-running the checker each
/// time. The input system itself is expected to pass.
pub fn check_closure(sys: &IndependenceSystem, class: Class, k: usize) -> Result<ClosureReport> {
    let mut first_failure = None;
    let mut note = |what: String, ok: bool| {
        if !ok && first_failure.is_none() {
            first_failure = Some(what);
        }
        ok
    };
    let mut parallel = true;
    for s in sys.ground() {
        if sys.is_loop(s) {
            continue;
        }
        let (p, _) = parallel_extend(sys, s)?;
        parallel &= note(format!("parallel extension at {s}"), check(&p, class, k)?.holds);
    }
    let mut restriction = true;
    for e in sys.ground() {
        let (r, _) = restrict(sys, sys.ground().without(e))?;
        restriction &= note(format!("deletion of {e}"), check(&r, class, k)?.holds);
    }
    let mut contraction = true;
    for i in sys.ground().subsets().skip(1) {
        if !sys.independent(i) {
            continue;
        }
        let (c, _) = contract(sys, i)?;
        contraction &= note(format!("contraction by {i}"), check(&c, class, k)?.holds);
    }
    Ok(ClosureReport {
        class,
        k,
        parallel_extension: parallel,
        restriction,
        contraction,
        first_failure,
    })
}

/// Exhaustive augmentation-property check.
pub fn is_matroid_by_augmentation<S: Independence + ?Sized>(sys: &S) -> Result<bool> {
    let t = table_for(sys, SYSTEM_CAP, "is_matroid_by_augmentation")?;
    let full = t.full_mask();
    let indep: Vec<usize> = (0..=full).filter(|&m| t.independent(m)).collect();
    for &a in &indep {
        for &b in &indep {
            if ones(a) < ones(b) {
                let mut rest = b & !a;
                let mut ok = false;
                while rest != 0 {
                    let bit = rest & rest.wrapping_neg();
                    rest ^= bit;
                    if t.independent(a | bit) {
                        ok = true;
                        break;
                    }
                }
                if !ok {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Closure of a matroid combination: after parallel extension, deletion or
/// contraction applied componentwise, every component is still a matroid
/// and no element lies in more than `k` components.
pub fn check_matchoid_closure(comb: &CombinationSystem, k: usize) -> Result<bool> {
    let incidence_ok = (0..comb.ground_size()).all(|e| comb.incidence(e).len() <= k);
    if !incidence_ok {
        return Ok(false);
    }
    for comp in comb.components() {
        let sys = &comp.system;
        for s in sys.ground() {
            if !sys.is_loop(s) && !is_matroid_by_augmentation(&parallel_extend(sys, s)?.0)? {
                return Ok(false);
            }
            if !is_matroid_by_augmentation(&restrict(sys, sys.ground().without(s))?.0)? {
                return Ok(false);
            }
        }
        for i in sys.ground().subsets().skip(1) {
            if sys.independent(i) && !is_matroid_by_augmentation(&contract(sys, i)?.0)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Random downward-closed system: an antichain of up to `max_bases` random
/// sets, closed downward.
pub fn random_downward_closed<R: Rng + ?Sized>(
    n: usize,
    max_bases: usize,
    rng: &mut R,
) -> Result<IndependenceSystem> {
    let count = rng.gen_range(1..=max_bases.max(1));
    let mut sets: Vec<ElemSet> = Vec::with_capacity(count);
    for _ in 0..count {
        let density = rng.gen_range(0.2..0.8);
        sets.push((0..n).filter(|_| rng.gen_bool(density)).collect());
    }
    IndependenceSystem::explicit_bases(n, sets)
}

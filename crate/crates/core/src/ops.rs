//! Greedy, brute-force optimum, circuits, span/rank and the derived systems.

use crate::error::{Error, Result};
use crate::set::ElemSet;
use crate::system::{
    check_element, check_in_ground, Independence, IndependenceSystem, DEFAULT_BRUTE_FORCE_CAP,
};
use crate::weights::WeightedInstance;

/// Weighted greedy: scan `x` heaviest first, keep what stays independent.
pub fn greedy<S: Independence + ?Sized>(sys: &S, inst: &WeightedInstance, x: ElemSet) -> ElemSet {
    let mut out = ElemSet::EMPTY;
    for e in inst.sorted_desc(x) {
        if sys.independent(out.with(e)) {
            out.insert(e);
        }
    }
    out
}

/// Maximum-weight independent subset of `x` with the default cap.
pub fn opt_basis<S: Independence + ?Sized>(
    sys: &S,
    inst: &WeightedInstance,
    x: ElemSet,
) -> Result<(ElemSet, f64)> {
    opt_basis_capped(sys, inst, x, DEFAULT_BRUTE_FORCE_CAP)
}

/// Exact maximum-weight independent subset by branch and bound. Equal totals
/// are resolved by [`WeightedInstance::lex_cmp`].
pub fn opt_basis_capped<S: Independence + ?Sized>(
    sys: &S,
    inst: &WeightedInstance,
    x: ElemSet,
    cap: usize,
) -> Result<(ElemSet, f64)> {
    check_in_ground(x, sys.ground_size())?;
    if x.len() > cap {
        return Err(Error::CapacityExceeded {
            what: "opt_basis",
            size: x.len(),
            cap,
        });
    }
    let elems = inst.sorted_desc(x);
    let mut suffix = vec![0.0; elems.len() + 1];
    for i in (0..elems.len()).rev() {
        suffix[i] = suffix[i + 1] + inst.weight(elems[i]);
    }
    let mut search = Search {
        sys,
        inst,
        elems: &elems,
        suffix: &suffix,
        best: ElemSet::EMPTY,
        best_w: 0.0,
    };
    search.run(0, ElemSet::EMPTY, 0.0);
    Ok((search.best, search.best_w))
}

struct Search<'a, S: ?Sized> {
    sys: &'a S,
    inst: &'a WeightedInstance,
    elems: &'a [usize],
    suffix: &'a [f64],
    best: ElemSet,
    best_w: f64,
}

impl<S: Independence + ?Sized> Search<'_, S> {
    fn run(&mut self, i: usize, cur: ElemSet, w: f64) {
        if w + self.suffix[i] < self.best_w {
            return;
        }
        if i == self.elems.len() {
            if w > self.best_w
                || (w == self.best_w && self.inst.lex_cmp(cur, self.best) == std::cmp::Ordering::Less)
            {
                self.best = cur;
                self.best_w = w;
            }
            return;
        }
        let e = self.elems[i];
        if self.sys.independent(cur.with(e)) {
            self.run(i + 1, cur.with(e), w + self.inst.weight(e));
        }
        self.run(i + 1, cur, w);
    }
}

/// Independence table over all subsets of a small local ground set.
///
/// Local mask bit `i` stands for `elems[i]`. Entries are filled in increasing
/// mask order so a set with a dependent one-smaller subset is marked
/// dependent without an oracle call.
pub struct IndepTable {
    pub elems: Vec<usize>,
    indep: Vec<bool>,
}

impl IndepTable {
    pub fn build<S: Independence + ?Sized>(sys: &S, x: ElemSet, cap: usize) -> Result<Self> {
        if x.len() > cap {
            return Err(Error::CapacityExceeded {
                what: "subset table",
                size: x.len(),
                cap,
            });
        }
        let elems = x.to_vec();
        let m = elems.len();
        let mut indep = vec![false; 1 << m];
        indep[0] = sys.independent(ElemSet::EMPTY);
        for mask in 1usize..1 << m {
            let mut ok = true;
            let mut rest = mask;
            while rest != 0 {
                let b = rest & rest.wrapping_neg();
                if !indep[mask ^ b] {
                    ok = false;
                    break;
                }
                rest ^= b;
            }
            indep[mask] = ok && sys.independent(Self::global_of(&elems, mask));
        }
        Ok(IndepTable { elems, indep })
    }

    fn global_of(elems: &[usize], mask: usize) -> ElemSet {
        ElemSet::from_bits(mask as u128)
            .iter()
            .map(|i| elems[i])
            .collect()
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn full_mask(&self) -> usize {
        (1 << self.elems.len()) - 1
    }

    pub fn independent(&self, mask: usize) -> bool {
        self.indep[mask]
    }

    pub fn global(&self, mask: usize) -> ElemSet {
        Self::global_of(&self.elems, mask)
    }

    pub fn local(&self, x: ElemSet) -> usize {
        self.elems
            .iter()
            .enumerate()
            .filter(|(_, &e)| x.contains(e))
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    /// Minimal dependent mask test.
    pub fn is_circuit(&self, mask: usize) -> bool {
        if mask == 0 || self.indep[mask] {
            return false;
        }
        let mut rest = mask;
        while rest != 0 {
            let b = rest & rest.wrapping_neg();
            if !self.indep[mask ^ b] {
                return false;
            }
            rest ^= b;
        }
        true
    }

    /// Maximal independent submasks of `mask`.
    pub fn bases_of(&self, mask: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut sub = mask;
        loop {
            if self.indep[sub] {
                let mut maximal = true;
                let mut rest = mask & !sub;
                while rest != 0 {
                    let b = rest & rest.wrapping_neg();
                    if self.indep[sub | b] {
                        maximal = false;
                        break;
                    }
                    rest ^= b;
                }
                if maximal {
                    out.push(sub);
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & mask;
        }
        out
    }
}

/// All circuits inside `x`, optionally only those through `through`.
pub fn circuits_of<S: Independence + ?Sized>(
    sys: &S,
    x: ElemSet,
    through: Option<usize>,
) -> Result<Vec<ElemSet>> {
    check_in_ground(x, sys.ground_size())?;
    let table = IndepTable::build(sys, x, DEFAULT_BRUTE_FORCE_CAP)?;
    let need = through.map(|t| table.local(ElemSet::singleton(t)));
    if through.is_some() && need == Some(0) {
        return Ok(Vec::new());
    }
    let mut out: Vec<ElemSet> = (1..=table.full_mask())
        .filter(|&m| need.map_or(true, |n| m & n != 0) && table.is_circuit(m))
        .map(|m| table.global(m))
        .collect();
    out.sort_by_key(|c| (c.len(), c.to_vec()));
    Ok(out)
}

fn require_matroid(sys: &IndependenceSystem, op: &str) -> Result<()> {
    if !sys.is_matroid() {
        return Err(Error::Unsupported(format!(
            "{op} needs a matroid kind, got {}",
            sys.kind_name()
        )));
    }
    Ok(())
}

fn unit_basis(sys: &IndependenceSystem, x: ElemSet) -> ElemSet {
    let mut b = ElemSet::EMPTY;
    for e in x {
        if sys.independent(b.with(e)) {
            b.insert(e);
        }
    }
    b
}

pub fn rank(sys: &IndependenceSystem, x: ElemSet) -> Result<usize> {
    require_matroid(sys, "rank")?;
    check_in_ground(x, sys.ground_size())?;
    Ok(unit_basis(sys, x).len())
}

pub fn span(sys: &IndependenceSystem, x: ElemSet) -> Result<ElemSet> {
    require_matroid(sys, "span")?;
    check_in_ground(x, sys.ground_size())?;
    let b = unit_basis(sys, x);
    Ok(sys
        .ground()
        .iter()
        .filter(|&e| x.contains(e) || !sys.independent(b.with(e)))
        .collect())
}

/// Restriction to `y`. New element `i` is `y`'s `i`-th smallest id; the
/// returned vector maps new ids to old ones.
pub fn restrict(sys: &IndependenceSystem, y: ElemSet) -> Result<(IndependenceSystem, Vec<usize>)> {
    check_in_ground(y, sys.ground_size())?;
    let map = y.to_vec();
    Ok((IndependenceSystem::derived(sys, map.clone(), ElemSet::EMPTY)?, map))
}

/// Contraction by an independent `i`: `X` is independent iff `X ∪ i` is.
/// The ground is `S \ i`, renumbered in increasing order.
pub fn contract(sys: &IndependenceSystem, i: ElemSet) -> Result<(IndependenceSystem, Vec<usize>)> {
    check_in_ground(i, sys.ground_size())?;
    if !sys.independent(i) {
        return Err(Error::Precondition(format!(
            "cannot contract dependent set {i}"
        )));
    }
    let map = sys.ground().difference(i).to_vec();
    Ok((IndependenceSystem::derived(sys, map.clone(), i)?, map))
}

/// Parallel extension at a non-loop `s`. Old ids are kept (`s` becomes the
/// first copy) and the second copy is the new id `n`; the returned vector is
/// the projection back onto the original ground. The two copies together are
/// dependent.
pub fn parallel_extend(
    sys: &IndependenceSystem,
    s: usize,
) -> Result<(IndependenceSystem, Vec<usize>)> {
    check_element(s, sys.ground_size())?;
    if sys.is_loop(s) {
        return Err(Error::Precondition(format!("cannot parallel-extend loop {s}")));
    }
    let mut map: Vec<usize> = (0..sys.ground_size()).collect();
    map.push(s);
    Ok((IndependenceSystem::derived(sys, map.clone(), ElemSet::EMPTY)?, map))
}

/// Lift a system along an arbitrary projection `map` (new id → old id).
/// Copies of one old element are pairwise parallel.
pub fn lift(sys: &IndependenceSystem, map: Vec<usize>) -> Result<IndependenceSystem> {
    if let Some(&bad) = map.iter().find(|&&m| m >= sys.ground_size()) {
        return Err(Error::ElementOutOfRange {
            element: bad,
            ground: sys.ground_size(),
        });
    }
    IndependenceSystem::derived(sys, map, ElemSet::EMPTY)
}

//! Order-oblivious core-selecting (OOCS) algorithms.
//!
//! An OOCS sees a sample of an unknown restriction of its ground set, then
//! streamed elements in an order it does not control, and accepts or rejects
//! each one immediately. It is never told the size of the restriction.

use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::hull::core;
use crate::set::ElemSet;
use crate::system::{Independence, IndependenceSystem, Kind};
use crate::weights::WeightedInstance;

pub trait Oocs {
    /// Sampling rate `q` the guarantee is stated for.
    fn q(&self) -> f64;
    /// Guaranteed core-selection probability `α`.
    fn alpha(&self) -> f64;
    /// Observe the sample. Called once, before any offer.
    fn begin(&mut self, sample: ElemSet, rng: &mut dyn RngCore) -> Result<()>;
    /// Decide on one streamed element.
    fn offer(&mut self, e: usize, rng: &mut dyn RngCore) -> bool;
}

/// Rank-1 threshold rule: accept the first streamed element heavier than the
/// sample maximum, or the first one at all when the sample is empty.
pub struct Rank1Oocs<'a> {
    inst: &'a WeightedInstance,
    best: Option<usize>,
    done: bool,
}

impl<'a> Rank1Oocs<'a> {
    pub fn new(inst: &'a WeightedInstance) -> Self {
        Rank1Oocs {
            inst,
            best: None,
            done: false,
        }
    }
}

impl Oocs for Rank1Oocs<'_> {
    fn q(&self) -> f64 {
        0.5
    }

    fn alpha(&self) -> f64 {
        0.5
    }

    fn begin(&mut self, sample: ElemSet, _rng: &mut dyn RngCore) -> Result<()> {
        self.best = self.inst.sorted_desc(sample).first().copied();
        Ok(())
    }

    fn offer(&mut self, e: usize, _rng: &mut dyn RngCore) -> bool {
        if self.done {
            return false;
        }
        let take = self.best.map_or(true, |b| self.inst.heavier(e, b));
        self.done = take;
        take
    }
}

/// One rank-1 rule per block of a unit-capacity partition matroid.
pub struct PartitionOocs<'a> {
    block_of: Vec<Option<usize>>,
    blocks: Vec<Rank1Oocs<'a>>,
}

impl<'a> PartitionOocs<'a> {
    /// `block_of[e]` is `None` for elements outside every block (rejected).
    pub fn new(inst: &'a WeightedInstance, block_of: Vec<Option<usize>>) -> Self {
        let nblocks = block_of.iter().flatten().max().map_or(0, |b| b + 1);
        PartitionOocs {
            block_of,
            blocks: (0..nblocks).map(|_| Rank1Oocs::new(inst)).collect(),
        }
    }

    /// From a partition matroid whose capacities are all 1.
    pub fn for_system(inst: &'a WeightedInstance, sys: &IndependenceSystem) -> Result<Self> {
        match sys.kind() {
            Kind::Partition { block_of, capacities, .. } if capacities.iter().all(|&c| c == 1) => {
                Ok(Self::new(inst, block_of.iter().map(|&b| Some(b)).collect()))
            }
            _ => Err(Error::Unsupported(format!(
                "partition OOCS needs a unit-capacity partition matroid, got {}",
                sys.kind_name()
            ))),
        }
    }
}

impl Oocs for PartitionOocs<'_> {
    fn q(&self) -> f64 {
        0.5
    }

    fn alpha(&self) -> f64 {
        0.5
    }

    fn begin(&mut self, sample: ElemSet, rng: &mut dyn RngCore) -> Result<()> {
        for (b, alg) in self.blocks.iter_mut().enumerate() {
            let part = sample.iter().filter(|&e| self.block_of.get(e).copied().flatten() == Some(b)).collect();
            alg.begin(part, rng)?;
        }
        Ok(())
    }

    fn offer(&mut self, e: usize, rng: &mut dyn RngCore) -> bool {
        match self.block_of.get(e).copied().flatten() {
            Some(b) => self.blocks[b].offer(e, rng),
            None => false,
        }
    }
}

/// Resampling rounds per element before a trial is aborted.
pub const RESAMPLE_CAP: usize = 64;

/// Combination of component OOCS algorithms over overlapping subsets.
///
/// Every sampled element gets `k` fresh uniform draws, redrawn until one is
/// at most `q*`; component `j` sees the element in its own sample when the
/// draw belonging to `j` is at most `q_j`. A streamed element is accepted
/// iff every component containing it accepts.
pub struct CombinedOocs<'a> {
    parts: Vec<(Box<dyn Oocs + 'a>, ElemSet)>,
    k: usize,
    q_star: f64,
    alpha: f64,
}

impl<'a> CombinedOocs<'a> {
    pub fn new(parts: Vec<(Box<dyn Oocs + 'a>, ElemSet)>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Precondition("combining zero OOCS components".into()));
        }
        let universe = parts.iter().fold(ElemSet::EMPTY, |u, (_, s)| u.union(*s));
        let k = universe
            .iter()
            .map(|e| parts.iter().filter(|(_, s)| s.contains(e)).count())
            .max()
            .unwrap_or(1);
        let q_star = parts.iter().map(|(a, _)| a.q()).fold(0.0, f64::max);
        if q_star <= 0.0 {
            return Err(Error::Precondition("every component has q = 0".into()));
        }
        let alpha = universe
            .iter()
            .map(|e| parts.iter().filter(|(_, s)| s.contains(e)).map(|(a, _)| a.alpha()).product::<f64>())
            .fold(1.0, f64::min);
        Ok(CombinedOocs { parts, k, q_star, alpha })
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

impl Oocs for CombinedOocs<'_> {
    fn q(&self) -> f64 {
        1.0 - (1.0 - self.q_star).powi(self.k as i32)
    }

    fn alpha(&self) -> f64 {
        self.alpha
    }

    fn begin(&mut self, sample: ElemSet, rng: &mut dyn RngCore) -> Result<()> {
        let mut samples = vec![ElemSet::EMPTY; self.parts.len()];
        for e in sample {
            let mut draws = vec![0.0; self.k];
            let mut rounds = 0;
            loop {
                for d in draws.iter_mut() {
                    *d = rng.gen::<f64>();
                }
                if draws.iter().any(|&t| t <= self.q_star) {
                    break;
                }
                rounds += 1;
                if rounds >= RESAMPLE_CAP {
                    return Err(Error::Precondition(format!(
                        "element {e}: no draw below q*={} after {RESAMPLE_CAP} rounds",
                        self.q_star
                    )));
                }
            }
            let mut slot = 0;
            for (j, (alg, s)) in self.parts.iter().enumerate() {
                if s.contains(e) {
                    if draws[slot] <= alg.q() {
                        samples[j].insert(e);
                    }
                    slot += 1;
                }
            }
        }
        for ((alg, _), y) in self.parts.iter_mut().zip(samples) {
            alg.begin(y, rng)?;
        }
        Ok(())
    }

    fn offer(&mut self, e: usize, rng: &mut dyn RngCore) -> bool {
        let mut all = true;
        for (alg, s) in self.parts.iter_mut() {
            if s.contains(e) {
                all &= alg.offer(e, rng);
            }
        }
        all
    }
}

/// Exact value of `E_Y[min_σ 1{e selected}]` for a deterministic OOCS, with
/// `Y` a `q`-sample of `x - e` and `σ` ranging over every order of `x \ Y`.
pub fn exact_core_selection<'a>(
    x: ElemSet,
    e: usize,
    q: f64,
    make: &dyn Fn() -> Box<dyn Oocs + 'a>,
    rng: &mut dyn RngCore,
) -> Result<f64> {
    let rest = x.without(e);
    let n = rest.len() as i32;
    let mut total = 0.0;
    for y in rest.subsets() {
        let prob = q.powi(y.len() as i32) * (1.0 - q).powi(n - y.len() as i32);
        let stream = x.difference(y).to_vec();
        let mut worst = true;
        for (_, hit) in crate::edge::enumerate_orders(|o| {
            let mut order = stream.clone();
            o.arrange(&mut order);
            let mut alg = make();
            if alg.begin(y, rng).is_err() {
                return false;
            }
            order.into_iter().any(|f| alg.offer(f, rng) && f == e)
        }) {
            worst &= hit;
            if !worst {
                break;
            }
        }
        if worst {
            total += prob;
        }
    }
    Ok(total)
}

/// Minimum of [`exact_core_selection`] over every restriction `X` of the
/// ground set and every `e ∈ Core(X)`, with the worst pair.
pub fn certify_exact<'a>(
    sys: &IndependenceSystem,
    inst: &WeightedInstance,
    q: f64,
    make: &dyn Fn() -> Box<dyn Oocs + 'a>,
    rng: &mut dyn RngCore,
) -> Result<(f64, Option<(ElemSet, usize)>)> {
    let mut worst = (1.0, None);
    for x in sys.ground().subsets() {
        for e in core(sys, inst, x)? {
            let v = exact_core_selection(x, e, q, make, rng)?;
            if v < worst.0 {
                worst = (v, Some((x, e)));
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn set(v: &[usize]) -> ElemSet {
        v.iter().collect()
    }

    #[test]
    fn empty_sample_takes_first() {
        let inst = WeightedInstance::unit(1);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut a = Rank1Oocs::new(&inst);
        a.begin(ElemSet::EMPTY, &mut rng).unwrap();
        assert!(a.offer(0, &mut rng));
    }

    #[test]
    fn rank1_three_elements_exact() {
        // e=0 is the max; samples of {1,2} are ∅,{1},{2},{1,2} each with 1/4.
        // ∅: an adversary streams 1 before 0, so 0 is lost. {1}: 2 may come
        // first and beats 1 (w=2 > 1). {2} and {1,2}: only 0 beats the max.
        let inst = WeightedInstance::new(vec![3.0, 1.0, 2.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let make = || Box::new(Rank1Oocs::new(&inst)) as Box<dyn Oocs>;
        let v = exact_core_selection(ElemSet::full(3), 0, 0.5, &make, &mut rng).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rank1_certified_on_small_ground() {
        let inst = WeightedInstance::new(vec![4.0, 7.0, 1.0, 5.0, 3.0, 6.0]).unwrap();
        let sys = IndependenceSystem::uniform(6, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let make = || Box::new(Rank1Oocs::new(&inst)) as Box<dyn Oocs>;
        let (v, _) = certify_exact(&sys, &inst, 0.5, &make, &mut rng).unwrap();
        assert!(v >= 0.5 - 1e-12, "{v}");
    }

    #[test]
    fn combination_parameters() {
        let inst = WeightedInstance::unit(4);
        let one = CombinedOocs::new(vec![(Box::new(Rank1Oocs::new(&inst)) as Box<dyn Oocs>, set(&[0, 1]))]).unwrap();
        assert_eq!((one.q(), one.alpha()), (0.5, 0.5));
        let two = CombinedOocs::new(vec![
            (Box::new(Rank1Oocs::new(&inst)) as Box<dyn Oocs>, set(&[0, 1, 2])),
            (Box::new(Rank1Oocs::new(&inst)) as Box<dyn Oocs>, set(&[1, 2, 3])),
        ])
        .unwrap();
        assert_eq!(two.k(), 2);
        assert!((two.q() - 0.75).abs() < 1e-12);
        assert!((two.alpha() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn combination_accepts_only_when_all_accept() {
        let inst = WeightedInstance::new(vec![1.0, 2.0, 3.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut c = CombinedOocs::new(vec![
            (Box::new(Rank1Oocs::new(&inst)) as Box<dyn Oocs>, set(&[0, 1])),
            (Box::new(Rank1Oocs::new(&inst)) as Box<dyn Oocs>, set(&[1, 2])),
        ])
        .unwrap();
        c.begin(ElemSet::EMPTY, &mut rng).unwrap();
        assert!(c.offer(2, &mut rng));
        // component 2 is spent, so 1 is rejected although component 1 accepts it
        assert!(!c.offer(1, &mut rng));
        assert!(!c.offer(0, &mut rng));
    }

    #[test]
    fn partition_blocks_are_independent() {
        let inst = WeightedInstance::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let sys = IndependenceSystem::partition(vec![0, 0, 1, 1], vec![1, 1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut p = PartitionOocs::for_system(&inst, &sys).unwrap();
        p.begin(set(&[1]), &mut rng).unwrap();
        assert!(!p.offer(0, &mut rng));
        assert!(p.offer(2, &mut rng));
        assert!(!p.offer(3, &mut rng));
        let bad = IndependenceSystem::partition(vec![0, 0], vec![2]).unwrap();
        assert!(PartitionOocs::for_system(&inst, &bad).is_err());
    }
}

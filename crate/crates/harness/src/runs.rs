//! Per-trial runners for the three arrival models and their CSV rows.
//!
//! CSV columns: `trial, seed, w_alg, w_opt, ratio, selected, bound_ok`.
//! `selected` is the chosen set as ids joined by `.` (`-` when empty);
//! `bound_ok` is the per-trial counting bound for simulations and empty
//! otherwise.

use std::io::Write;

use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use secretary_core::agent::oocs::{CombinedOocs, Oocs, PartitionOocs, Rank1Oocs};
use secretary_core::agent::{agent_core_lemma_sim, free_order_agent, transfer_to_edges, BipartiteInstance, EdgeSystems};
use secretary_core::assignment::{online_assignment, AssignmentInstance, OptCache};
use secretary_core::edge::{core_lemma_sim, free_order_general, free_order_matroid};
use secretary_core::format::WeightedSystem;
use secretary_core::{opt_basis, ElemSet, Error, HullSystem, Independence, IndependenceSystem, Kind, Result, WeightedInstance};

use crate::estimate::{probability_estimate, run_trials, trial_rng, utility_estimate, RatioEstimate};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub seed: u64,
    pub w_alg: f64,
    pub w_opt: f64,
    pub ratio: f64,
    pub selected: String,
    pub bound_ok: Option<bool>,
}

fn fmt_set(x: ElemSet) -> String {
    if x.is_empty() {
        "-".into()
    } else {
        x.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(".")
    }
}

pub fn parse_set(s: &str) -> Option<ElemSet> {
    if s == "-" {
        return Some(ElemSet::EMPTY);
    }
    s.split('.').map(|x| x.parse::<usize>().ok()).collect::<Option<Vec<_>>>().map(|v| v.into_iter().collect())
}

impl TrialRecord {
    fn new(trial: u64, seed: u64, w_alg: f64, w_opt: f64, selected: ElemSet, bound_ok: Option<bool>) -> Self {
        TrialRecord {
            trial,
            seed,
            w_alg,
            w_opt,
            ratio: if w_opt > 0.0 { w_alg / w_opt } else { 1.0 },
            selected: fmt_set(selected),
            bound_ok,
        }
    }

    pub fn selected_set(&self) -> ElemSet {
        parse_set(&self.selected).expect("selected column is well formed")
    }
}

pub fn write_csv<W: Write>(out: W, rows: &[TrialRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::Input(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Input(e.to_string()))
}

pub fn read_csv(text: &str) -> Result<Vec<TrialRecord>> {
    #[derive(serde::Deserialize)]
    struct Row {
        trial: u64,
        seed: u64,
        w_alg: f64,
        w_opt: f64,
        ratio: f64,
        selected: String,
        bound_ok: Option<bool>,
    }
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    rd.deserialize::<Row>()
        .map(|r| {
            let r = r.map_err(|e| Error::Input(e.to_string()))?;
            Ok(TrialRecord {
                trial: r.trial,
                seed: r.seed,
                w_alg: r.w_alg,
                w_opt: r.w_opt,
                ratio: r.ratio,
                selected: r.selected,
                bound_ok: r.bound_ok,
            })
        })
        .collect()
}

/// Summary of a batch of trials against a fixed optimum.
#[derive(Debug, Clone)]
pub struct Batch {
    pub opt: ElemSet,
    pub w_opt: f64,
    pub records: Vec<TrialRecord>,
}

impl Batch {
    pub fn utility(&self, bound: f64, z: f64) -> RatioEstimate {
        let ratios: Vec<f64> = self.records.iter().map(|r| r.ratio).collect();
        utility_estimate(&ratios, bound, z)
    }

    /// Selection frequency of every element of the optimum.
    pub fn probability(&self, bound: f64, z: f64) -> RatioEstimate {
        let elems = self.opt.to_vec();
        let mut hits = vec![0u64; elems.len()];
        for r in &self.records {
            let s = r.selected_set();
            for (h, &e) in hits.iter_mut().zip(&elems) {
                *h += s.contains(e) as u64;
            }
        }
        probability_estimate(&elems, &hits, self.records.len() as u64, bound, z)
    }

    pub fn all_bounds_hold(&self) -> bool {
        self.records.iter().all(|r| r.bound_ok != Some(false))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeAlg {
    Matroid,
    General,
    CoreSim,
}

impl std::str::FromStr for EdgeAlg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "matroid" => Ok(EdgeAlg::Matroid),
            "general" => Ok(EdgeAlg::General),
            "core-sim" => Ok(EdgeAlg::CoreSim),
            _ => Err(format!("unknown edge algorithm `{s}` (matroid, general, core-sim)")),
        }
    }
}

/// The underlying system of a one-component identity combination.
pub fn sole_system(ws: &WeightedSystem) -> Result<&IndependenceSystem> {
    match ws.system.components() {
        [c] if c.members.iter().enumerate().all(|(i, &e)| i == e) => Ok(&c.system),
        _ => Err(Error::Unsupported("the matroid algorithm needs a single system, not a combination".into())),
    }
}

/// Counting-bound parameters `(k, matroids)` of a combination.
pub fn counting_params(ws: &WeightedSystem) -> Result<(usize, bool)> {
    let matroids = ws.system.all_matroids();
    let k = if matroids { ws.system.matchoid_k()? } else { ws.system.growth_k()? };
    Ok((k, matroids))
}

/// One trial of an edge-arrival algorithm on a generic hull system.
pub fn edge_trial_on<S: HullSystem + ?Sized>(
    sys: &S,
    weights: &WeightedInstance,
    alg: EdgeAlg,
    p: f64,
    counting: Option<(usize, bool)>,
    rng: &mut ChaCha8Rng,
) -> Result<(f64, ElemSet, Option<bool>)> {
    match alg {
        EdgeAlg::General => {
            let r = free_order_general(sys, weights, p, rng)?;
            Ok((r.weight, r.alg, None))
        }
        EdgeAlg::CoreSim => {
            let b = core_lemma_sim(sys, weights, p, rng)?;
            let ok = counting.map(|(k, m)| b.counting_bound_holds(k, m));
            Ok((b.w_core_rel(weights), b.r, ok))
        }
        EdgeAlg::Matroid => Err(Error::Unsupported("use edge_trial for the matroid algorithm".into())),
    }
}

pub fn edge_trial(ws: &WeightedSystem, alg: EdgeAlg, p: f64, seed: u64, trial: u64, w_opt: f64) -> Result<TrialRecord> {
    let mut rng = trial_rng(seed, trial);
    let (w, sel, ok) = match alg {
        EdgeAlg::Matroid => {
            let r = free_order_matroid(sole_system(ws)?, &ws.weights, &mut rng)?;
            (r.weight, r.alg, None)
        }
        _ => {
            let counting = if alg == EdgeAlg::CoreSim { Some(counting_params(ws)?) } else { None };
            edge_trial_on(&ws.system, &ws.weights, alg, p, counting, &mut rng)?
        }
    };
    Ok(TrialRecord::new(trial, seed, w, w_opt, sel, ok))
}

pub fn run_edge(ws: &WeightedSystem, alg: EdgeAlg, p: f64, trials: u64, seed: u64) -> Result<Batch> {
    let (opt, w_opt) = opt_basis(&ws.system, &ws.weights, ws.system.ground())?;
    if alg == EdgeAlg::Matroid {
        sole_system(ws)?;
    }
    let records = run_trials(trials, seed, |i, _| edge_trial(ws, alg, p, seed, i, w_opt))?;
    Ok(Batch { opt, w_opt, records })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OocsKind {
    Rank1,
    Partition,
    Combine,
}

impl std::str::FromStr for OocsKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "rank1" => Ok(OocsKind::Rank1),
            "partition" => Ok(OocsKind::Partition),
            "combine" => Ok(OocsKind::Combine),
            _ => Err(format!("unknown OOCS `{s}` (rank1, partition, combine)")),
        }
    }
}

/// Item block of every edge when the item-side component `j` is a unit
/// partition or a rank-1 uniform matroid.
fn unit_blocks(bi: &BipartiteInstance, j: usize) -> Result<Vec<Option<usize>>> {
    let comp = &bi.fb().components()[j];
    let block_of_local: Vec<usize> = match comp.system.kind() {
        Kind::Partition { block_of, capacities, .. } if capacities.iter().all(|&c| c == 1) => block_of.clone(),
        Kind::Uniform { rank: 1 } => vec![0; comp.members.len()],
        _ => {
            return Err(Error::Unsupported(format!(
                "item component {j} is a {} system; OOCS needs unit partitions or rank-1 matroids",
                comp.system.kind_name()
            )))
        }
    };
    Ok((0..bi.edges())
        .map(|e| {
            let b = bi.item_of(e);
            comp.mask().contains(b).then(|| block_of_local[bi.fb().local_id(j, b)])
        })
        .collect())
}

pub fn build_oocs<'a>(bi: &'a BipartiteInstance, kind: OocsKind) -> Result<Box<dyn Oocs + 'a>> {
    let comps = bi.fb().components().len();
    match kind {
        OocsKind::Rank1 => {
            let blocks = if comps == 1 { unit_blocks(bi, 0)? } else { vec![None] };
            if comps != 1 || blocks.iter().flatten().any(|&b| b != 0) {
                return Err(Error::Unsupported("rank1 OOCS needs a rank-1 item side".into()));
            }
            Ok(Box::new(Rank1Oocs::new(bi.weights())))
        }
        OocsKind::Partition => {
            if comps != 1 {
                return Err(Error::Unsupported("partition OOCS needs a single item-side system".into()));
            }
            Ok(Box::new(PartitionOocs::new(bi.weights(), unit_blocks(bi, 0)?)))
        }
        OocsKind::Combine => {
            let mut parts: Vec<(Box<dyn Oocs + 'a>, ElemSet)> = Vec::new();
            for j in 0..comps {
                let blocks = unit_blocks(bi, j)?;
                let members: ElemSet = (0..bi.edges()).filter(|&e| blocks[e].is_some()).collect();
                parts.push((Box::new(PartitionOocs::new(bi.weights(), blocks)), members));
            }
            Ok(Box::new(CombinedOocs::new(parts)?))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AgentAlg {
    Oocs(OocsKind),
    CoreSim,
}

pub struct AgentSetup<'a> {
    pub bi: &'a BipartiteInstance,
    pub sys: EdgeSystems,
    pub opt: ElemSet,
    pub w_opt: f64,
}

impl<'a> AgentSetup<'a> {
    pub fn new(bi: &'a BipartiteInstance) -> Result<Self> {
        let sys = transfer_to_edges(bi)?;
        let (opt, w_opt) = opt_basis(&sys.both, bi.weights(), sys.both.ground())?;
        Ok(AgentSetup { bi, sys, opt, w_opt })
    }

    pub fn trial(&self, alg: AgentAlg, p: f64, seed: u64, trial: u64) -> Result<TrialRecord> {
        let mut rng = trial_rng(seed, trial);
        let (w, sel, ok) = match alg {
            AgentAlg::Oocs(kind) => {
                let mut oocs = build_oocs(self.bi, kind)?;
                let r = free_order_agent(self.bi, &self.sys, oocs.as_mut(), p, &mut rng)?;
                (r.weight, r.alg, None)
            }
            AgentAlg::CoreSim => {
                let b = agent_core_lemma_sim(self.bi, &self.sys, p, &mut rng)?;
                let k = self.sys.k.ok_or_else(|| Error::Unsupported("unknown growth parameter".into()))?;
                let ok = b.counting_bound_holds(k, self.sys.both.all_matroids());
                (b.w_core_rel(self.bi.weights()), b.r, Some(ok))
            }
        };
        Ok(TrialRecord::new(trial, seed, w, self.w_opt, sel, ok))
    }

    pub fn run(&self, alg: AgentAlg, p: f64, trials: u64, seed: u64) -> Result<Batch> {
        let records = run_trials(trials, seed, |i, _| self.trial(alg, p, seed, i))?;
        Ok(Batch {
            opt: self.opt,
            w_opt: self.w_opt,
            records,
        })
    }
}

pub fn assignment_trial(cache: &OptCache, p: f64, seed: u64, trial: u64, w_opt: f64) -> Result<TrialRecord> {
    let mut rng = trial_rng(seed, trial);
    let r = online_assignment(cache, p, &mut rng)?;
    Ok(TrialRecord::new(trial, seed, r.weight, w_opt, r.alg, None))
}

pub fn run_assignment(inst: &AssignmentInstance, p: f64, trials: u64, seed: u64) -> Result<Batch> {
    let cache = OptCache::new(inst);
    let (opt, w_opt) = cache.get(ElemSet::full(inst.agents()))?;
    let records = run_trials(trials, seed, |i, _| assignment_trial(&cache, p, seed, i, w_opt))?;
    Ok(Batch { opt, w_opt, records })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use rand::SeedableRng;

    #[test]
    fn csv_round_trip() {
        let rows = vec![
            TrialRecord::new(0, 7, 1.5, 3.0, [1usize, 4].iter().collect(), None),
            TrialRecord::new(1, 7, 0.0, 3.0, ElemSet::EMPTY, Some(true)),
        ];
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("trial,seed,w_alg,w_opt,ratio,selected,bound_ok\n"), "{text}");
        assert_eq!(read_csv(&text).unwrap(), rows);
    }

    #[test]
    fn edge_trials_replay() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let sys = gen::graphic(5, 7, &mut rng).unwrap();
        let ws = WeightedSystem {
            weights: gen::weights(7, &mut rng),
            system: secretary_core::CombinationSystem::single(sys),
        };
        let batch = run_edge(&ws, EdgeAlg::Matroid, 0.0, 50, 99).unwrap();
        for r in &batch.records {
            assert_eq!(edge_trial(&ws, EdgeAlg::Matroid, 0.0, 99, r.trial, batch.w_opt).unwrap(), *r);
        }
    }

    #[test]
    fn matroid_alg_rejects_combinations() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let ws = WeightedSystem {
            system: gen::intersection(2, 6, &mut rng).unwrap(),
            weights: gen::weights(6, &mut rng),
        };
        assert!(run_edge(&ws, EdgeAlg::Matroid, 0.0, 5, 1).is_err());
        assert!(run_edge(&ws, EdgeAlg::General, 0.5, 5, 1).is_ok());
    }

    #[test]
    fn oocs_kinds_follow_item_side() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let bi = gen::bipartite(4, 4, 2, false, 4, &mut rng).unwrap();
        assert!(build_oocs(&bi, OocsKind::Partition).is_ok());
        assert!(build_oocs(&bi, OocsKind::Combine).is_ok());
        let single = gen::bipartite(4, 4, 2, false, 1, &mut rng).unwrap();
        assert!(build_oocs(&single, OocsKind::Rank1).is_ok());
        let blocks: std::collections::HashSet<_> = unit_blocks(&bi, 0).unwrap().into_iter().collect();
        assert_eq!(build_oocs(&bi, OocsKind::Rank1).is_ok(), blocks.len() == 1);
    }
}

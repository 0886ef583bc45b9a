//! Line-oriented text formats for systems and instances.
//!
//! Blank lines and `#` comments are ignored. Lists use `,`; a set is written
//! as ids joined by `.` with `-` for the empty set, and a family of sets is
//! joined by `;`.
//!
//! System (one line, except `derived` which is followed by its base):
//!
//! ```text
//! kind free n=4
//! kind uniform n=5 rank=2
//! kind partition block_of=0,0,1 capacities=1,1
//! kind graphic vertices=4 edges=0-1,1-2,2-0
//! kind transversal right=3 neighbors=0.1;0;-
//! kind laminar n=4 sets=0.1;0.1.2 capacities=1,2
//! kind knapsack cap=1 sizes=3/10,4/10,1/2
//! kind interval n=8 a=3 b=3
//! kind bases n=4 sets=0.1;2.3
//! kind independent n=3 sets=-;0;1
//! kind derived map=0,0,1 fixed=-
//! ```
//!
//! Combination: `combination n=N parts=P`, then per part a line
//! `part members=… [growth=k]` followed by its system. A bare system line is
//! accepted wherever a combination is expected.
//!
//! Weighted system: a combination followed by `weights w0,w1,…` and an
//! optional `ties e0,e1,…` (earlier wins ties; default id order).
//!
//! Bipartite instance:
//!
//! ```text
//! bipartite agents=A items=B edges=M
//! edge a b weight        (M lines)
//! ties …                 (optional)
//! side agents
//! <combination on 0..A>
//! side items
//! <combination on 0..B>
//! ```
//!
//! Assignment instance: `assignment agents=A goods=G edges=M`, then `M` lines
//! `edge a g… weight`, optional `ties`, then per agent `agent a` followed by
//! its system on the agent's hyperedges in id order.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::agent::BipartiteInstance;
use crate::assignment::{AssignmentInstance, Hyperedge};
use crate::combination::{default_growth, CombinationSystem, Part};
use crate::error::{Error, Result};
use crate::set::ElemSet;
use crate::system::{Independence, IndependenceSystem, Kind, Rational};
use crate::weights::WeightedInstance;

#[derive(Debug, Clone)]
pub struct WeightedSystem {
    pub system: CombinationSystem,
    pub weights: WeightedInstance,
}

struct Lines<'a> {
    items: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let items = text
            .lines()
            .enumerate()
            .filter_map(|(i, l)| {
                let l = l.split('#').next().unwrap_or("").trim();
                (!l.is_empty()).then_some((i + 1, l))
            })
            .collect();
        Lines { items, pos: 0 }
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        let item = self.items.get(self.pos).copied().ok_or_else(|| Error::Parse {
            line: self.items.last().map_or(0, |l| l.0),
            msg: format!("unexpected end of input, expected {what}"),
        })?;
        self.pos += 1;
        Ok(item)
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.items.get(self.pos).copied()
    }

    fn finish(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some((line, l)) => Err(Error::Parse {
                line,
                msg: format!("trailing content `{l}`"),
            }),
        }
    }
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// `head k1=v1 k2=v2 …` with the head word checked.
struct Fields<'a> {
    line: usize,
    map: HashMap<&'a str, &'a str>,
}

impl<'a> Fields<'a> {
    fn parse(line: usize, text: &'a str, head: &[&str]) -> Result<Self> {
        let mut toks = text.split_whitespace();
        for h in head {
            match toks.next() {
                Some(t) if t == *h => {}
                other => return Err(perr(line, format!("expected `{h}`, found `{}`", other.unwrap_or("")))),
            }
        }
        let mut map = HashMap::new();
        for t in toks {
            let (k, v) = t
                .split_once('=')
                .ok_or_else(|| perr(line, format!("expected key=value, found `{t}`")))?;
            if map.insert(k, v).is_some() {
                return Err(perr(line, format!("duplicate key `{k}`")));
            }
        }
        Ok(Fields { line, map })
    }

    fn raw(&self, key: &str) -> Result<&'a str> {
        self.map
            .get(key)
            .copied()
            .ok_or_else(|| perr(self.line, format!("missing `{key}=`")))
    }

    fn opt<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.map.get(key).map(|v| num(self.line, v)).transpose()
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<T> {
        num(self.line, self.raw(key)?)
    }

    fn list<T: FromStr>(&self, key: &str) -> Result<Vec<T>> {
        list(self.line, self.raw(key)?)
    }

    fn sets(&self, key: &str) -> Result<Vec<ElemSet>> {
        let v = self.raw(key)?;
        if v.is_empty() {
            return Ok(Vec::new());
        }
        v.split(';').map(|s| set(self.line, s)).collect()
    }
}

fn num<T: FromStr>(line: usize, s: &str) -> Result<T> {
    s.parse().map_err(|_| perr(line, format!("cannot parse `{s}`")))
}

fn list<T: FromStr>(line: usize, s: &str) -> Result<Vec<T>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|x| num(line, x)).collect()
}

fn set(line: usize, s: &str) -> Result<ElemSet> {
    if s == "-" {
        return Ok(ElemSet::EMPTY);
    }
    let ids: Vec<usize> = s.split('.').map(|x| num(line, x)).collect::<Result<_>>()?;
    if let Some(&e) = ids.iter().find(|&&e| e >= crate::set::MAX_GROUND) {
        return Err(perr(line, format!("element {e} out of range")));
    }
    Ok(ids.into_iter().collect())
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn fmt_set(x: ElemSet) -> String {
    if x.is_empty() {
        "-".into()
    } else {
        x.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(".")
    }
}

fn fmt_sets(xs: &[ElemSet]) -> String {
    xs.iter().map(|&x| fmt_set(x)).collect::<Vec<_>>().join(";")
}

pub fn write_system(sys: &IndependenceSystem) -> Result<String> {
    let mut out = String::new();
    write_system_into(sys, &mut out)?;
    Ok(out)
}

fn write_system_into(sys: &IndependenceSystem, out: &mut String) -> Result<()> {
    let n = sys.ground_size();
    let line = match sys.kind() {
        Kind::Free => format!("kind free n={n}"),
        Kind::Uniform { rank } => format!("kind uniform n={n} rank={rank}"),
        Kind::Partition {
            block_of, capacities, ..
        } => format!("kind partition block_of={} capacities={}", join(block_of), join(capacities)),
        Kind::Graphic { vertices, ends } => {
            let es: Vec<String> = ends.iter().map(|(u, v)| format!("{u}-{v}")).collect();
            format!("kind graphic vertices={vertices} edges={}", es.join(","))
        }
        Kind::Transversal { right, neighbors } => {
            let ns: Vec<ElemSet> = neighbors.iter().map(|v| v.iter().copied().collect()).collect();
            // A neighbor list may repeat an id; sets keep the same matchings.
            format!("kind transversal right={right} neighbors={}", fmt_sets(&ns))
        }
        Kind::Laminar { sets, capacities } => {
            format!("kind laminar n={n} sets={} capacities={}", fmt_sets(sets), join(capacities))
        }
        Kind::Knapsack { sizes, capacity, .. } => format!("kind knapsack cap={capacity} sizes={}", join(sizes)),
        Kind::IntervalStableSet { n, a, b, .. } => format!("kind interval n={n} a={a} b={b}"),
        Kind::ExplicitBases(bases) => format!("kind bases n={n} sets={}", fmt_sets(bases)),
        Kind::ExplicitIndependent(family) => {
            let mut sets: Vec<ElemSet> = family.iter().copied().collect();
            sets.sort();
            format!("kind independent n={n} sets={}", fmt_sets(&sets))
        }
        Kind::Derived { base, map, fixed } => {
            writeln!(out, "kind derived map={} fixed={}", join(map), fmt_set(*fixed)).unwrap();
            return write_system_into(base, out);
        }
        Kind::OracleOnly { .. } => {
            return Err(Error::Unsupported("oracle-only systems have no text form".into()));
        }
    };
    out.push_str(&line);
    out.push('\n');
    Ok(())
}

pub fn parse_system(text: &str) -> Result<IndependenceSystem> {
    let mut lines = Lines::new(text);
    let sys = read_system(&mut lines)?;
    lines.finish()?;
    Ok(sys)
}

fn read_system(lines: &mut Lines) -> Result<IndependenceSystem> {
    let (line, text) = lines.next("a `kind` line")?;
    let mut toks = text.split_whitespace();
    if toks.next() != Some("kind") {
        return Err(perr(line, format!("expected `kind …`, found `{text}`")));
    }
    let kind = toks.next().ok_or_else(|| perr(line, "missing kind name"))?;
    let f = Fields::parse(line, text, &["kind", kind])?;
    let at = |e: Error| match e {
        Error::Parse { .. } => e,
        other => perr(line, other.to_string()),
    };
    let sys = match kind {
        "free" => IndependenceSystem::free(f.get("n")?),
        "uniform" => IndependenceSystem::uniform(f.get("n")?, f.get("rank")?),
        "partition" => IndependenceSystem::partition(f.list("block_of")?, f.list("capacities")?),
        "graphic" => {
            let edges = f.raw("edges")?;
            let mut ends = Vec::new();
            if !edges.is_empty() {
                for e in edges.split(',') {
                    let (u, v) = e
                        .split_once('-')
                        .ok_or_else(|| perr(line, format!("edge `{e}` is not u-v")))?;
                    ends.push((num(line, u)?, num(line, v)?));
                }
            }
            IndependenceSystem::graphic(f.get("vertices")?, ends)
        }
        "transversal" => {
            let neighbors = f.sets("neighbors")?.into_iter().map(ElemSet::to_vec).collect();
            IndependenceSystem::transversal(f.get("right")?, neighbors)
        }
        "laminar" => IndependenceSystem::laminar(f.get("n")?, f.sets("sets")?, f.list("capacities")?),
        "knapsack" => IndependenceSystem::knapsack(f.list::<Rational>("sizes")?, f.get("cap")?),
        "interval" => IndependenceSystem::interval_stable_set(f.get("n")?, f.get("a")?, f.get("b")?),
        "bases" => IndependenceSystem::explicit_bases(f.get("n")?, f.sets("sets")?),
        "independent" => IndependenceSystem::explicit_independent(f.get("n")?, f.sets("sets")?),
        "derived" => {
            let map: Vec<usize> = f.list("map")?;
            let fixed = set(line, f.raw("fixed")?)?;
            let base = read_system(lines)?;
            let n = base.ground_size();
            if let Some(&m) = map.iter().find(|&&m| m >= n) {
                return Err(perr(line, format!("map entry {m} outside base of size {n}")));
            }
            if fixed.bound() > n {
                return Err(perr(line, format!("fixed set {fixed} outside base of size {n}")));
            }
            IndependenceSystem::derived(&base, map, fixed)
        }
        other => return Err(perr(line, format!("unknown kind `{other}`"))),
    };
    sys.map_err(at)
}

pub fn write_combination(comb: &CombinationSystem) -> Result<String> {
    let mut out = String::new();
    write_combination_into(comb, &mut out)?;
    Ok(out)
}

fn write_combination_into(comb: &CombinationSystem, out: &mut String) -> Result<()> {
    let comps = comb.components();
    if let [c] = comps {
        let identity = c.members.iter().enumerate().all(|(i, &e)| i == e);
        if identity && c.members.len() == comb.ground_size() && c.growth == default_growth(&c.system) {
            return write_system_into(&c.system, out);
        }
    }
    writeln!(out, "combination n={} parts={}", comb.ground_size(), comps.len()).unwrap();
    for c in comps {
        write!(out, "part members={}", join(&c.members)).unwrap();
        if let Some(k) = c.growth {
            write!(out, " growth={k}").unwrap();
        }
        out.push('\n');
        write_system_into(&c.system, out)?;
    }
    Ok(())
}

pub fn parse_combination(text: &str) -> Result<CombinationSystem> {
    let mut lines = Lines::new(text);
    let comb = read_combination(&mut lines)?;
    lines.finish()?;
    Ok(comb)
}

fn read_combination(lines: &mut Lines) -> Result<CombinationSystem> {
    let (line, text) = lines.peek().ok_or_else(|| perr(0, "empty input"))?;
    if text.starts_with("kind") {
        return Ok(CombinationSystem::single(read_system(lines)?));
    }
    lines.next("combination")?;
    let f = Fields::parse(line, text, &["combination"])?;
    let n: usize = f.get("n")?;
    let count: usize = f.get("parts")?;
    let mut parts = Vec::with_capacity(count);
    for _ in 0..count {
        let (pl, pt) = lines.next("a `part` line")?;
        let pf = Fields::parse(pl, pt, &["part"])?;
        let members: Vec<usize> = pf.list("members")?;
        let growth: Option<usize> = pf.opt("growth")?;
        let mut part = Part::new(read_system(lines)?, members);
        if let Some(k) = growth {
            part = part.with_growth(k);
        }
        parts.push(part);
    }
    CombinationSystem::combine(n, parts).map_err(|e| perr(line, e.to_string()))
}

fn write_ties(w: &WeightedInstance, out: &mut String) {
    let ties = w.tie_break();
    if ties.iter().enumerate().any(|(i, &e)| i != e) {
        writeln!(out, "ties {}", join(ties)).unwrap();
    }
}

/// Builds weights after an optional `ties` line.
fn read_ties(lines: &mut Lines, weights: Vec<f64>, line: usize) -> Result<WeightedInstance> {
    let w = match lines.peek() {
        Some((tl, t)) if t.starts_with("ties") => {
            lines.next("ties")?;
            let rest = t["ties".len()..].trim();
            WeightedInstance::with_tie_break(weights, list(tl, rest)?).map_err(|e| perr(tl, e.to_string()))?
        }
        _ => WeightedInstance::new(weights).map_err(|e| perr(line, e.to_string()))?,
    };
    Ok(w)
}

pub fn write_weighted(ws: &WeightedSystem) -> Result<String> {
    let mut out = String::new();
    write_combination_into(&ws.system, &mut out)?;
    writeln!(out, "weights {}", join(ws.weights.weights())).unwrap();
    write_ties(&ws.weights, &mut out);
    Ok(out)
}

pub fn parse_weighted(text: &str) -> Result<WeightedSystem> {
    let mut lines = Lines::new(text);
    let system = read_combination(&mut lines)?;
    let (line, t) = lines.next("a `weights` line")?;
    let rest = t
        .strip_prefix("weights")
        .ok_or_else(|| perr(line, format!("expected `weights …`, found `{t}`")))?;
    let weights = read_ties(&mut lines, list(line, rest.trim())?, line)?;
    lines.finish()?;
    if weights.ground_size() != system.ground_size() {
        return Err(perr(
            line,
            format!("{} weights for {} elements", weights.ground_size(), system.ground_size()),
        ));
    }
    Ok(WeightedSystem { system, weights })
}

pub fn write_bipartite(bi: &BipartiteInstance) -> Result<String> {
    let mut out = String::new();
    writeln!(
        out,
        "bipartite agents={} items={} edges={}",
        bi.agents(),
        bi.items(),
        bi.edges()
    )
    .unwrap();
    for (e, &(a, b)) in bi.ends().iter().enumerate() {
        writeln!(out, "edge {a} {b} {}", bi.weights().weight(e)).unwrap();
    }
    write_ties(bi.weights(), &mut out);
    out.push_str("side agents\n");
    write_combination_into(bi.fa(), &mut out)?;
    out.push_str("side items\n");
    write_combination_into(bi.fb(), &mut out)?;
    Ok(out)
}

fn expect(lines: &mut Lines, want: &str) -> Result<()> {
    let (line, t) = lines.next(want)?;
    if t.split_whitespace().collect::<Vec<_>>() != want.split_whitespace().collect::<Vec<_>>() {
        return Err(perr(line, format!("expected `{want}`, found `{t}`")));
    }
    Ok(())
}

pub fn parse_bipartite(text: &str) -> Result<BipartiteInstance> {
    let mut lines = Lines::new(text);
    let (line, t) = lines.next("a `bipartite` line")?;
    let f = Fields::parse(line, t, &["bipartite"])?;
    let (agents, items, m): (usize, usize, usize) = (f.get("agents")?, f.get("items")?, f.get("edges")?);
    let mut ends = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for _ in 0..m {
        let (el, et) = lines.next("an `edge` line")?;
        let toks: Vec<&str> = et.split_whitespace().collect();
        if toks.len() != 4 || toks[0] != "edge" {
            return Err(perr(el, format!("expected `edge a b weight`, found `{et}`")));
        }
        ends.push((num(el, toks[1])?, num(el, toks[2])?));
        weights.push(num(el, toks[3])?);
    }
    let weights = read_ties(&mut lines, weights, line)?;
    expect(&mut lines, "side agents")?;
    let fa = read_combination(&mut lines)?;
    expect(&mut lines, "side items")?;
    let fb = read_combination(&mut lines)?;
    lines.finish()?;
    if fa.ground_size() != agents || fb.ground_size() != items {
        return Err(perr(
            line,
            format!(
                "sides have {} agents and {} items, header says {agents} and {items}",
                fa.ground_size(),
                fb.ground_size()
            ),
        ));
    }
    BipartiteInstance::new(ends, weights, fa, fb).map_err(|e| perr(line, e.to_string()))
}

pub fn write_assignment(inst: &AssignmentInstance) -> Result<String> {
    let mut out = String::new();
    writeln!(
        out,
        "assignment agents={} goods={} edges={}",
        inst.agents(),
        inst.goods(),
        inst.edges().len()
    )
    .unwrap();
    for (e, h) in inst.edges().iter().enumerate() {
        write!(out, "edge {}", h.agent).unwrap();
        for g in h.goods.iter() {
            write!(out, " {g}").unwrap();
        }
        writeln!(out, " {}", inst.weights().weight(e)).unwrap();
    }
    write_ties(inst.weights(), &mut out);
    for a in 0..inst.agents() {
        writeln!(out, "agent {a}").unwrap();
        write_system_into(inst.system(a), &mut out)?;
    }
    Ok(out)
}

pub fn parse_assignment(text: &str) -> Result<AssignmentInstance> {
    let mut lines = Lines::new(text);
    let (line, t) = lines.next("an `assignment` line")?;
    let f = Fields::parse(line, t, &["assignment"])?;
    let (agents, goods, m): (usize, usize, usize) = (f.get("agents")?, f.get("goods")?, f.get("edges")?);
    let mut edges = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for _ in 0..m {
        let (el, et) = lines.next("an `edge` line")?;
        let toks: Vec<&str> = et.split_whitespace().collect();
        if toks.len() < 3 || toks[0] != "edge" {
            return Err(perr(el, format!("expected `edge a goods… weight`, found `{et}`")));
        }
        let gs: Vec<usize> = toks[2..toks.len() - 1]
            .iter()
            .map(|g| num(el, g))
            .collect::<Result<_>>()?;
        if let Some(&g) = gs.iter().find(|&&g| g >= crate::set::MAX_GROUND) {
            return Err(perr(el, format!("good {g} out of range")));
        }
        edges.push(Hyperedge {
            agent: num(el, toks[1])?,
            goods: gs.into_iter().collect(),
        });
        weights.push(num(el, toks[toks.len() - 1])?);
    }
    let weights = read_ties(&mut lines, weights, line)?;
    let mut systems = Vec::with_capacity(agents);
    for a in 0..agents {
        expect(&mut lines, &format!("agent {a}"))?;
        systems.push(read_system(&mut lines)?);
    }
    lines.finish()?;
    AssignmentInstance::new(agents, goods, edges, weights, systems).map_err(|e| perr(line, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::{contract, parallel_extend};

    fn same_family(a: &IndependenceSystem, b: &IndependenceSystem) -> bool {
        a.ground_size() == b.ground_size()
            && a.ground().subsets().all(|x| a.independent(x) == b.independent(x))
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn samples() -> Vec<IndependenceSystem> {
        let two = IndependenceSystem::explicit_bases(5, vec![[0usize, 1].iter().collect(), [2usize, 3, 4].iter().collect()]).unwrap();
        vec![
            IndependenceSystem::free(3).unwrap(),
            IndependenceSystem::uniform(5, 2).unwrap(),
            IndependenceSystem::partition(vec![0, 0, 1, 2], vec![1, 2, 0]).unwrap(),
            IndependenceSystem::graphic(4, vec![(0, 1), (1, 2), (2, 0), (2, 3), (3, 3)]).unwrap(),
            IndependenceSystem::transversal(3, vec![vec![0, 1], vec![0], vec![], vec![2]]).unwrap(),
            IndependenceSystem::laminar(4, vec![[0usize, 1].iter().collect(), [0usize, 1, 2].iter().collect()], vec![1, 2]).unwrap(),
            IndependenceSystem::knapsack(vec![r(3, 10), r(4, 10), r(1, 2)], r(1, 1)).unwrap(),
            IndependenceSystem::interval_stable_set(8, 3, 3).unwrap(),
            IndependenceSystem::explicit_independent(3, vec![ElemSet::EMPTY, ElemSet::singleton(0), ElemSet::singleton(1)]).unwrap(),
            contract(&two, ElemSet::singleton(1)).unwrap().0,
            parallel_extend(&two, 0).unwrap().0,
            two,
        ]
    }

    #[test]
    fn systems_round_trip() {
        for sys in samples() {
            let text = write_system(&sys).unwrap();
            let back = parse_system(&text).unwrap();
            assert!(same_family(&sys, &back), "{text}");
            assert_eq!(write_system(&back).unwrap(), text);
        }
    }

    #[test]
    fn knapsack_line_matches_documented_shape() {
        let sys = IndependenceSystem::knapsack(vec![r(3, 10), r(4, 10)], r(1, 1)).unwrap();
        assert_eq!(write_system(&sys).unwrap(), "kind knapsack cap=1 sizes=3/10,2/5\n");
    }

    #[test]
    fn combination_and_weights_round_trip() {
        let p1 = IndependenceSystem::partition(vec![0, 0, 1], vec![1, 1]).unwrap();
        let p2 = IndependenceSystem::uniform(2, 1).unwrap();
        let k = IndependenceSystem::knapsack(vec![r(1, 1), r(2, 1)], r(2, 1)).unwrap();
        let comb = CombinationSystem::combine(
            4,
            vec![Part::new(p1, vec![0, 1, 2]), Part::new(p2, vec![2, 3]), Part::new(k, vec![1, 3]).with_growth(3)],
        )
        .unwrap();
        let weights = WeightedInstance::with_tie_break(vec![1.5, 2.0, 2.0, 0.25], vec![2, 1, 0, 3]).unwrap();
        let ws = WeightedSystem { system: comb, weights };
        let text = write_weighted(&ws).unwrap();
        let back = parse_weighted(&text).unwrap();
        assert_eq!(write_weighted(&back).unwrap(), text);
        assert_eq!(back.weights.order(), ws.weights.order());
        assert_eq!(back.system.components()[2].growth, Some(3));
        for x in ElemSet::full(4).subsets() {
            assert_eq!(back.system.independent(x), ws.system.independent(x));
        }
    }

    #[test]
    fn bare_system_reads_as_combination() {
        let comb = parse_combination("# graphic triangle\nkind graphic vertices=3 edges=0-1,1-2,2-0\n").unwrap();
        assert_eq!(comb.components().len(), 1);
        assert!(!comb.independent(ElemSet::full(3)));
    }

    #[test]
    fn bipartite_round_trip() {
        let fa = CombinationSystem::single(IndependenceSystem::free(2).unwrap());
        let fb = CombinationSystem::single(IndependenceSystem::partition(vec![0, 0], vec![1]).unwrap());
        let w = WeightedInstance::new(vec![3.0, 1.0, 2.5]).unwrap();
        let bi = BipartiteInstance::new(vec![(0, 0), (0, 1), (1, 1)], w, fa, fb).unwrap();
        let text = write_bipartite(&bi).unwrap();
        let back = parse_bipartite(&text).unwrap();
        assert_eq!(write_bipartite(&back).unwrap(), text);
        assert_eq!(back.ends(), bi.ends());
    }

    #[test]
    fn assignment_round_trip() {
        let edges = vec![
            Hyperedge { agent: 0, goods: [0usize, 1].iter().collect() },
            Hyperedge { agent: 1, goods: ElemSet::singleton(2) },
            Hyperedge { agent: 1, goods: ElemSet::EMPTY },
        ];
        let w = WeightedInstance::new(vec![2.0, 1.0, 0.5]).unwrap();
        let systems = vec![IndependenceSystem::free(1).unwrap(), IndependenceSystem::uniform(2, 1).unwrap()];
        let inst = AssignmentInstance::new(2, 3, edges, w, systems).unwrap();
        let text = write_assignment(&inst).unwrap();
        assert!(text.contains("edge 0 0 1 2\n"), "{text}");
        let back = parse_assignment(&text).unwrap();
        assert_eq!(write_assignment(&back).unwrap(), text);
        assert_eq!(back.edges(), inst.edges());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_system("\n\nkind uniform n=3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_system("kind nope n=1").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_weighted("kind free n=2\nweights 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        assert!(parse_system("kind free n=2\nkind free n=2").is_err());
    }

    #[test]
    fn oracle_systems_are_not_serializable() {
        let sys = IndependenceSystem::oracle(2, true, |x| x.len() <= 1).unwrap();
        assert!(matches!(write_system(&sys), Err(Error::Unsupported(_))));
    }
}

//! Substitute systems for constraints without a good OOCS.
//!
//! Each reduction returns the substitute system together with the
//! projection from its ground set back to the original elements.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::combination::{CombinationSystem, Part};
use crate::error::{input, Result};
use crate::set::{ElemSet, MAX_GROUND};
use crate::system::IndependenceSystem;

/// Image of `x` under a copy-to-original map.
pub fn project(map: &[usize], x: ElemSet) -> ElemSet {
    x.iter().map(|c| map[c]).collect()
}

/// Graphic matroid to a unit partition matroid on the same edges: each edge
/// goes to whichever endpoint comes first in `perm`. Self-loops land in a
/// capacity-0 block. Independent sets of the result are forests.
pub fn reduce_graphic(vertices: usize, ends: &[(usize, usize)], perm: &[usize]) -> Result<IndependenceSystem> {
    let mut rank = vec![usize::MAX; vertices];
    for (i, &v) in perm.iter().enumerate() {
        if v >= vertices || rank[v] != usize::MAX {
            return Err(input(format!("perm is not a permutation of 0..{vertices}")));
        }
        rank[v] = i;
    }
    if perm.len() != vertices {
        return Err(input(format!("perm is not a permutation of 0..{vertices}")));
    }
    let mut capacities = vec![1; vertices];
    capacities.push(0);
    let mut block_of = Vec::with_capacity(ends.len());
    for &(u, v) in ends {
        if u >= vertices || v >= vertices {
            return Err(input(format!("edge ({u}, {v}) outside {vertices} vertices")));
        }
        block_of.push(if u == v {
            vertices
        } else if rank[u] < rank[v] {
            u
        } else {
            v
        });
    }
    IndependenceSystem::partition(block_of, capacities)
}

pub fn reduce_graphic_random<R: Rng + ?Sized>(
    vertices: usize,
    ends: &[(usize, usize)],
    rng: &mut R,
) -> Result<IndependenceSystem> {
    let mut perm: Vec<usize> = (0..vertices).collect();
    perm.shuffle(rng);
    reduce_graphic(vertices, ends, &perm)
}

/// Transversal presentation to the intersection of two unit partition
/// matroids on its edges `(l, r)`: one copy of `l` per edge, at most one edge
/// per left element and per right vertex. Returns the combination and the
/// map edge → left element.
pub fn reduce_transversal(right: usize, neighbors: &[Vec<usize>]) -> Result<(CombinationSystem, Vec<usize>)> {
    let mut left_of = Vec::new();
    let mut right_of = Vec::new();
    for (l, ns) in neighbors.iter().enumerate() {
        for &r in ns {
            if r >= right {
                return Err(input(format!("left {l}: neighbor {r} outside {right} right vertices")));
            }
            left_of.push(l);
            right_of.push(r);
        }
    }
    let m = left_of.len();
    if m > MAX_GROUND {
        return Err(input(format!("{m} presentation edges exceed {MAX_GROUND}")));
    }
    let p_left = IndependenceSystem::partition(left_of.clone(), vec![1; neighbors.len()])?;
    let p_right = IndependenceSystem::partition(right_of, vec![1; right])?;
    let all = ElemSet::full(m);
    let comb = CombinationSystem::combine(m, vec![Part::on(p_left, all), Part::on(p_right, all)])?;
    Ok((comb, left_of))
}

/// Integer knapsack to a hypergraph matching. Vertices are the capacity
/// slots `0..C` and one vertex `C + i` per item; copy `(i, j)` of item `i`
/// covers slots `j..j + s_i` and vertex `C + i`. Every vertex is a rank-1
/// uniform matroid on its hyperedges, so the result is a `(max s_i + 1)`-matchoid.
/// Returns the combination and the map hyperedge → item.
pub fn reduce_int_knapsack(sizes: &[u64], capacity: u64) -> Result<(CombinationSystem, Vec<usize>)> {
    if let Some(i) = sizes.iter().position(|&s| s == 0) {
        return Err(input(format!("item {i} has size 0; sizes must be positive integers")));
    }
    let c = capacity as usize;
    let mut covers: Vec<Vec<usize>> = Vec::new();
    let mut item_of = Vec::new();
    for (i, &s) in sizes.iter().enumerate() {
        let s = s as usize;
        if s > c {
            continue;
        }
        for j in 0..=c - s {
            let mut vs: Vec<usize> = (j..j + s).collect();
            vs.push(c + i);
            covers.push(vs);
            item_of.push(i);
        }
    }
    let m = covers.len();
    if m > MAX_GROUND {
        return Err(input(format!("{m} hyperedges exceed {MAX_GROUND}")));
    }
    let mut parts = Vec::new();
    for v in 0..c + sizes.len() {
        let inc: Vec<usize> = (0..m).filter(|&h| covers[h].contains(&v)).collect();
        if !inc.is_empty() {
            parts.push(Part::new(IndependenceSystem::uniform(inc.len(), 1)?, inc));
        }
    }
    if m == 0 {
        return Ok((CombinationSystem::single(IndependenceSystem::free(0)?), item_of));
    }
    Ok((CombinationSystem::combine(m, parts)?, item_of))
}

//! Weighted instances with an operationally injective order.

use serde::{Deserialize, Serialize};

use crate::error::{input, Result};
use crate::set::{ElemSet, MAX_GROUND};

/// Positive weights plus a tie-break order.
///
/// Elements are compared by `(weight, tie_break)`: larger weight is heavier,
/// and on equal weights the element listed earlier in `tie_break` is heavier.
/// `position[e]` is the rank of `e` in the resulting strict order (0 is the
/// heaviest).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance", into = "RawInstance")]
pub struct WeightedInstance {
    weights: Vec<f64>,
    tie_break: Vec<usize>,
    order: Vec<usize>,
    position: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawInstance {
    weights: Vec<f64>,
    tie_break: Vec<usize>,
}

impl TryFrom<RawInstance> for WeightedInstance {
    type Error = crate::Error;
    fn try_from(r: RawInstance) -> Result<Self> {
        WeightedInstance::with_tie_break(r.weights, r.tie_break)
    }
}

impl From<WeightedInstance> for RawInstance {
    fn from(w: WeightedInstance) -> Self {
        RawInstance {
            weights: w.weights,
            tie_break: w.tie_break,
        }
    }
}

impl WeightedInstance {
    /// Weights with the default tie-break (lower id is heavier).
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        let n = weights.len();
        Self::with_tie_break(weights, (0..n).collect())
    }

    /// `tie_break` lists every element once; earlier means heavier on ties.
    pub fn with_tie_break(weights: Vec<f64>, tie_break: Vec<usize>) -> Result<Self> {
        let n = weights.len();
        if n > MAX_GROUND {
            return Err(input(format!("ground size {n} exceeds {MAX_GROUND}")));
        }
        if let Some((e, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w > 0.0))
        {
            return Err(input(format!("weight of element {e} is {w}, must be positive")));
        }
        let mut seen = vec![false; n];
        if tie_break.len() != n {
            return Err(input("tie_break must list every element exactly once"));
        }
        let mut tie_rank = vec![0; n];
        for (r, &e) in tie_break.iter().enumerate() {
            if e >= n || seen[e] {
                return Err(input("tie_break must list every element exactly once"));
            }
            seen[e] = true;
            tie_rank[e] = r;
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            weights[b]
                .partial_cmp(&weights[a])
                .unwrap()
                .then(tie_rank[a].cmp(&tie_rank[b]))
        });
        let mut position = vec![0; n];
        for (i, &e) in order.iter().enumerate() {
            position[e] = i;
        }
        Ok(WeightedInstance {
            weights,
            tie_break,
            order,
            position,
        })
    }

    /// Unit weights; the order is the tie-break (id order).
    pub fn unit(n: usize) -> Self {
        Self::new(vec![1.0; n]).expect("unit weights are valid")
    }

    pub fn ground_size(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, e: usize) -> f64 {
        self.weights[e]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn tie_break(&self) -> &[usize] {
        &self.tie_break
    }

    /// Rank of `e` in the strict order, 0 = heaviest.
    pub fn position(&self, e: usize) -> usize {
        self.position[e]
    }

    /// All elements, heaviest first.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// `a` strictly heavier than `b`.
    pub fn heavier(&self, a: usize, b: usize) -> bool {
        self.position[a] < self.position[b]
    }

    /// Elements of `x`, heaviest first.
    pub fn sorted_desc(&self, x: ElemSet) -> Vec<usize> {
        let mut v = x.to_vec();
        v.sort_unstable_by_key(|&e| self.position[e]);
        v
    }

    /// Elements of `x` strictly heavier than `e`.
    pub fn heavier_in(&self, x: ElemSet, e: usize) -> ElemSet {
        let pe = self.position[e];
        x.iter().filter(|&f| self.position[f] < pe).collect()
    }

    /// Sum of weights, accumulated heaviest first so equal sets give equal sums.
    pub fn total(&self, x: ElemSet) -> f64 {
        self.sorted_desc(x).iter().fold(0.0, |acc, &e| acc + self.weights[e])
    }

    /// Compare two sets by the lexicographic rule used for ties: the set
    /// whose heaviest-first position sequence is lexicographically smaller
    /// wins.
    pub fn lex_cmp(&self, a: ElemSet, b: ElemSet) -> std::cmp::Ordering {
        let pa: Vec<usize> = self.sorted_desc(a).iter().map(|&e| self.position[e]).collect();
        let pb: Vec<usize> = self.sorted_desc(b).iter().map(|&e| self.position[e]).collect();
        pa.cmp(&pb)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonpositive() {
        assert!(WeightedInstance::new(vec![1.0, 0.0]).is_err());
        assert!(WeightedInstance::new(vec![1.0, f64::NAN]).is_err());
        assert!(WeightedInstance::new(vec![-1.0]).is_err());
    }

    #[test]
    fn ties_follow_tie_break() {
        let w = WeightedInstance::with_tie_break(vec![1.0, 2.0, 1.0], vec![2, 1, 0]).unwrap();
        assert_eq!(w.order(), &[1, 2, 0]);
        assert!(w.heavier(2, 0));
        let d = WeightedInstance::new(vec![1.0, 2.0, 1.0]).unwrap();
        assert_eq!(d.order(), &[1, 0, 2]);
    }

    #[test]
    fn heavier_in_is_strict() {
        let w = WeightedInstance::new(vec![3.0, 2.0, 1.0]).unwrap();
        assert_eq!(w.heavier_in(ElemSet::full(3), 1), ElemSet::singleton(0));
        assert_eq!(w.heavier_in(ElemSet::full(3), 0), ElemSet::EMPTY);
    }

    #[test]
    fn lex_prefers_heavier_prefix() {
        let w = WeightedInstance::new(vec![3.0, 2.0, 1.0]).unwrap();
        let a: ElemSet = [0, 2].iter().collect();
        let b: ElemSet = [1, 2].iter().collect();
        assert_eq!(w.lex_cmp(a, b), std::cmp::Ordering::Less);
    }
}

//! Greedy maximum-weight bases of linear matroids over real vectors.

use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_EPS_RANK: f64 = 1e-8;

/// Incremental row-echelon span used as an independence oracle.
#[derive(Clone, Debug, Default)]
pub struct Span {
    rows: Vec<(usize, Vec<f64>)>,
    eps: f64,
}

impl Span {
    pub fn new(eps: f64) -> Self {
        Span {
            rows: Vec::new(),
            eps,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[f64]) -> Vec<f64> {
        let mut r = v.to_vec();
        for (p, row) in &self.rows {
            let f = r[*p];
            if f != 0.0 {
                for (x, y) in r.iter_mut().zip(row) {
                    *x -= f * y;
                }
            }
        }
        r
    }

    /// Whether `v` lies outside the span (up to the rank tolerance).
    pub fn is_independent(&self, v: &[f64]) -> bool {
        let scale = v.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        self.reduce(v).iter().any(|x| x.abs() > self.eps * scale)
    }

    /// Adds `v` if independent; returns whether it was added.
    pub fn insert(&mut self, v: &[f64]) -> bool {
        let scale = v.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        let r = self.reduce(v);
        let (p, big) = r
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |(bp, bv), (i, x)| if x.abs() > bv { (i, x.abs()) } else { (bp, bv) });
        if big <= self.eps * scale {
            return false;
        }
        let piv = r[p];
        let row: Vec<f64> = r.iter().map(|x| x / piv).collect();
        self.rows.push((p, row));
        true
    }
}

/// An element of a matroid pool: class vector, weight, and tie-breakers.
#[derive(Clone, Debug)]
pub struct Item<'a> {
    pub class: &'a [f64],
    pub weight: f64,
    pub length: f64,
    pub angle: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GreedyResult {
    /// Indices into the pool, in selection order.
    pub basis: Vec<usize>,
    pub total_weight: f64,
}

/// Processing order: decreasing weight, then increasing length, then
/// increasing angle, then pool index.
pub fn greedy_order(items: &[Item<'_>]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| {
        let (x, y) = (&items[a], &items[b]);
        y.weight
            .total_cmp(&x.weight)
            .then(x.length.total_cmp(&y.length))
            .then(x.angle.total_cmp(&y.angle))
            .then(a.cmp(&b))
    });
    order
}

/// Greedy maximum-weight independent set of size `target_rank`, starting
/// from the span of `seed` (used to work in a quotient space).
pub fn greedy_max_basis(
    items: &[Item<'_>],
    seed: &[Vec<f64>],
    target_rank: usize,
    eps_rank: f64,
) -> Result<GreedyResult> {
    if items.iter().any(|it| !it.weight.is_finite() || it.weight < 0.0) {
        return Err(Error::ParamOutOfRange("weights must be finite and nonnegative".into()));
    }
    let mut span = Span::new(eps_rank);
    for s in seed {
        span.insert(s);
    }
    let base = span.rank();
    let mut basis = Vec::with_capacity(target_rank);
    let mut total = 0.0;
    if target_rank > 0 {
        for i in greedy_order(items) {
            if span.insert(items[i].class) {
                basis.push(i);
                total += items[i].weight;
                if basis.len() == target_rank {
                    break;
                }
            }
        }
    }
    if basis.len() < target_rank {
        return Err(Error::RankDeficient {
            needed: target_rank,
            found: span.rank() - base,
        });
    }
    Ok(GreedyResult {
        basis,
        total_weight: total,
    })
}

/// Rank of a set of vectors.
pub fn rank(vectors: &[Vec<f64>], eps_rank: f64) -> usize {
    let mut span = Span::new(eps_rank);
    for v in vectors {
        span.insert(v);
    }
    span.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn items<'a>(classes: &'a [Vec<f64>], w: &[f64]) -> Vec<Item<'a>> {
        classes
            .iter()
            .zip(w)
            .map(|(c, &weight)| Item {
                class: c,
                weight,
                length: weight.recip().sqrt(),
                angle: 0.0,
            })
            .collect()
    }

    #[test]
    fn heavier_duplicate_wins() {
        let classes = vec![vec![1.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        let pool = items(&classes, &[0.5, 2.0, 1.0]);
        let r = greedy_max_basis(&pool, &[], 2, DEFAULT_EPS_RANK).unwrap();
        assert_eq!(r.basis, vec![1, 2]);
        assert_eq!(r.total_weight, 3.0);
    }

    #[test]
    fn quotient_seed_excludes_its_span() {
        let classes = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![1.0, 1.0, 1.0]];
        let pool = items(&classes, &[10.0, 1.0, 0.5]);
        let r = greedy_max_basis(&pool, &[vec![1.0, 0.0, 0.0]], 2, DEFAULT_EPS_RANK).unwrap();
        assert_eq!(r.basis, vec![1, 2]);
    }

    #[test]
    fn deficient_pool_is_reported() {
        let classes = vec![vec![1.0, 0.0], vec![2.0, 0.0]];
        let pool = items(&classes, &[1.0, 1.0]);
        assert_eq!(
            greedy_max_basis(&pool, &[], 2, DEFAULT_EPS_RANK).unwrap_err(),
            Error::RankDeficient { needed: 2, found: 1 }
        );
    }
}

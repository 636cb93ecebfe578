#![allow(dead_code)]

use milnor_core::PlumbingGraph;
use proptest::prelude::*;

/// Negative definiteness of a symmetric integer matrix from the leading
/// principal minors of `−M`, by fraction-free elimination.
pub fn bareiss_negative_definite(rows: &[Vec<i64>]) -> bool {
    let n = rows.len();
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| -(x as i128)).collect()).collect();
    let mut previous = 1i128;
    for k in 0..n {
        if a[k][k] <= 0 {
            return false;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / previous;
            }
        }
        previous = a[k][k];
    }
    true
}

/// Connected plumbing graphs: a random spanning tree plus extra edges.
pub fn graph_strategy(
    max_r: usize,
    eulers: std::ops::RangeInclusive<i64>,
    max_genus: u32,
    max_extra: u32,
) -> impl Strategy<Value = PlumbingGraph> {
    (1..=max_r)
        .prop_flat_map(move |r| {
            (
                proptest::collection::vec((0..=max_genus, eulers.clone()), r),
                proptest::collection::vec(any::<prop::sample::Index>(), r.saturating_sub(1)),
                proptest::collection::vec(0..=max_extra, r * r.saturating_sub(1) / 2),
            )
        })
        .prop_map(|(weights, parents, extra)| {
            let r = weights.len();
            let mut edges: Vec<(usize, usize)> = parents
                .iter()
                .enumerate()
                .map(|(k, idx)| (idx.index(k + 1), k + 1))
                .collect();
            let pairs = (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j)));
            for ((i, j), m) in pairs.zip(extra) {
                for _ in 0..m {
                    edges.push((i, j));
                }
            }
            PlumbingGraph::from_weights(&weights, &edges).expect("generated graph is valid")
        })
}

pub fn fillable_strategy(max_r: usize) -> impl Strategy<Value = PlumbingGraph> {
    graph_strategy(max_r, -6..=-1, 2, 1).prop_filter("negative definite", |g| g.is_milnor_fillable())
}

pub fn all_permutations(r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in all_permutations(r - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, r - 1);
            out.push(q);
        }
    }
    out
}

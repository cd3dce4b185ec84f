//! Exhaustive enumeration of small loop-free multigraphs up to isomorphism.

use std::collections::BTreeSet;

use num_bigint::BigUint;

use super::canon::DenseGraph;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Default cap on the number of graphs held by a catalog.
pub const DEFAULT_SEARCH_BUDGET: usize = 5_000_000;

/// Loop-free multigraphs without isolated vertices, grouped by edge count,
/// one canonical representative per isomorphism class.
#[derive(Clone, Debug)]
pub struct Catalog {
    levels: Vec<Vec<DenseGraph>>,
}

impl Catalog {
    /// Builds every class with at most `max_edges` edges and `vertex_cap` vertices
    /// by adding one edge at a time and deduplicating canonical forms.
    pub fn build(max_edges: usize, vertex_cap: usize, budget: usize) -> Result<Self> {
        let mut levels = vec![vec![DenseGraph::new(0)]];
        let mut total = 1usize;
        for _ in 0..max_edges {
            let mut next = BTreeSet::new();
            for g in levels.last().expect("nonempty") {
                for child in children(g, vertex_cap) {
                    next.insert(child.canonical());
                }
                if total + next.len() > budget {
                    return Err(Error::SearchBudgetExceeded(budget));
                }
            }
            total += next.len();
            levels.push(next.into_iter().collect());
        }
        Ok(Catalog { levels })
    }

    pub fn with_edges(&self, n: usize) -> &[DenseGraph] {
        self.levels.get(n).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn max_edges(&self) -> usize {
        self.levels.len() - 1
    }

    /// Largest k-path count among graphs with `n` edges and the least
    /// canonical witness attaining it.
    pub fn max_paths(&self, n: usize, k: usize) -> Option<(u128, &DenseGraph)> {
        let mut best: Option<(u128, &DenseGraph)> = None;
        for g in self.with_edges(n) {
            let c = g.path_counts(k)[k];
            if best.map_or(true, |(b, _)| c > b) {
                best = Some((c, g));
            }
        }
        best
    }
}

fn children(g: &DenseGraph, vertex_cap: usize) -> Vec<DenseGraph> {
    let n = g.n();
    let mut out = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && !g.reaches(v, u) {
                let mut c = g.clone();
                c.add(u, v);
                out.push(c);
            }
        }
    }
    if n < vertex_cap {
        let grown = g.grow(1);
        for u in 0..n {
            let mut a = grown.clone();
            a.add(u, n);
            out.push(a);
            let mut b = grown.clone();
            b.add(n, u);
            out.push(b);
        }
    }
    if n + 2 <= vertex_cap {
        let mut c = g.grow(2);
        c.add(n, n + 1);
        out.push(c);
    }
    out
}

/// Maximum number of k-paths over all loop-free graphs with `n_edges` edges
/// on at most `vertex_cap` vertices, with a canonical witness.
pub fn brute_force_max(n_edges: usize, k: usize, vertex_cap: usize) -> Result<(BigUint, Graph)> {
    brute_force_max_with_budget(n_edges, k, vertex_cap, DEFAULT_SEARCH_BUDGET)
}

pub fn brute_force_max_with_budget(
    n_edges: usize,
    k: usize,
    vertex_cap: usize,
    budget: usize,
) -> Result<(BigUint, Graph)> {
    if k == 0 || k > n_edges {
        return Err(Error::InvalidRange(format!("need 1 <= k <= N, got k = {k}, N = {n_edges}")));
    }
    let catalog = Catalog::build(n_edges, vertex_cap, budget)?;
    let (count, witness) = catalog
        .max_paths(n_edges, k)
        .ok_or_else(|| Error::InvalidRange(format!("no graph with {n_edges} edges fits {vertex_cap} vertices")))?;
    Ok((BigUint::from(count), witness.to_graph()))
}

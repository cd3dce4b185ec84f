//! Canonical labelling of small multigraphs by colour refinement plus
//! individualization; the form is the least adjacency string among all
//! orderings compatible with the refined partitions.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};

/// Dense adjacency of a multigraph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DenseGraph {
    n: usize,
    adj: Vec<u32>,
}

impl DenseGraph {
    pub fn new(n: usize) -> Self {
        DenseGraph { n, adj: vec![0; n * n] }
    }

    pub fn from_graph(graph: &Graph) -> Result<Self> {
        if graph.has_infinite_bundles() {
            return Err(Error::InfiniteBundlePresent);
        }
        let mut d = DenseGraph::new(graph.vertex_count());
        for e in graph.raw_edges() {
            d.add(e.src, e.dst);
        }
        Ok(d)
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.adj[i * self.n + j]
    }
    pub fn add(&mut self, i: usize, j: usize) {
        self.adj[i * self.n + j] += 1;
    }
    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|&x| x as usize).sum()
    }

    /// Copy with `extra` isolated vertices appended.
    pub fn grow(&self, extra: usize) -> Self {
        let m = self.n + extra;
        let mut d = DenseGraph::new(m);
        for i in 0..self.n {
            for j in 0..self.n {
                d.adj[i * m + j] = self.get(i, j);
            }
        }
        d
    }

    /// True iff `to` is reachable from `from` (including `from == to`).
    pub fn reaches(&self, from: usize, to: usize) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(v) = stack.pop() {
            if v == to {
                return true;
            }
            for w in 0..self.n {
                if self.get(v, w) > 0 && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        false
    }

    pub fn is_weakly_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for w in 0..self.n {
                if (self.get(v, w) > 0 || self.get(w, v) > 0) && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Number of paths of each length `0..=max_len` (loop-free input).
    pub fn path_counts(&self, max_len: usize) -> Vec<u128> {
        let mut c = vec![1u128; self.n];
        let mut out = vec![self.n as u128];
        for _ in 0..max_len {
            let mut next = vec![0u128; self.n];
            for (v, slot) in next.iter_mut().enumerate() {
                for (w, cw) in c.iter().enumerate() {
                    *slot += self.get(v, w) as u128 * cw;
                }
            }
            c = next;
            out.push(c.iter().sum());
        }
        out
    }

    /// Vertices `1..=n`, edges `i:j:t`.
    pub fn to_graph(&self) -> Graph {
        let vertices = (1..=self.n).map(|i| VertexId::from(i.to_string())).collect();
        let mut edges = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                for t in 1..=self.get(i, j) {
                    edges.push((EdgeId::from(format!("{}:{}:{}", i + 1, j + 1, t)), i, j));
                }
            }
        }
        Graph::from_indexed(vertices, edges)
    }

    fn permuted(&self, pos: &[usize]) -> Vec<u32> {
        let mut adj = vec![0; self.n * self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                adj[pos[i] * self.n + pos[j]] = self.get(i, j);
            }
        }
        adj
    }

    pub fn canonical(&self) -> DenseGraph {
        let mut colors = vec![0u32; self.n];
        refine(self, &mut colors);
        let mut best: Option<Vec<u32>> = None;
        search(self, colors, &mut best);
        DenseGraph { n: self.n, adj: best.unwrap_or_default() }
    }

    /// Row-major adjacency string, e.g. `3:0,1,0|0,0,2|0,0,0`.
    pub fn code(&self) -> String {
        let rows: Vec<String> = self
            .adj
            .chunks(self.n.max(1))
            .take(self.n)
            .map(|r| r.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
            .collect();
        format!("{}:{}", self.n, rows.join("|"))
    }
}

/// Canonical form of a finite graph; equal iff the graphs are isomorphic.
pub fn canonical_form(graph: &Graph) -> Result<DenseGraph> {
    Ok(DenseGraph::from_graph(graph)?.canonical())
}

pub fn isomorphic(a: &Graph, b: &Graph) -> Result<bool> {
    Ok(a.vertex_count() == b.vertex_count()
        && a.edge_count() == b.edge_count()
        && canonical_form(a)? == canonical_form(b)?)
}

type Signature = (u32, Vec<(u32, u32)>, Vec<(u32, u32)>);

fn refine(g: &DenseGraph, colors: &mut [u32]) {
    let n = g.n;
    let mut classes = count_classes(colors);
    loop {
        let sigs: Vec<Signature> = (0..n)
            .map(|v| {
                let mut outs: Vec<(u32, u32)> = (0..n)
                    .filter(|&w| g.get(v, w) > 0)
                    .map(|w| (colors[w], g.get(v, w)))
                    .collect();
                let mut ins: Vec<(u32, u32)> = (0..n)
                    .filter(|&u| g.get(u, v) > 0)
                    .map(|u| (colors[u], g.get(u, v)))
                    .collect();
                outs.sort_unstable();
                ins.sort_unstable();
                (colors[v], outs, ins)
            })
            .collect();
        let ranks: BTreeMap<&Signature, u32> = {
            let mut m = BTreeMap::new();
            for s in &sigs {
                m.insert(s, 0);
            }
            for (i, slot) in m.values_mut().enumerate() {
                *slot = i as u32;
            }
            m
        };
        for v in 0..n {
            colors[v] = ranks[&sigs[v]];
        }
        let now = ranks.len();
        if now == classes {
            return;
        }
        classes = now;
    }
}

fn count_classes(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn search(g: &DenseGraph, colors: Vec<u32>, best: &mut Option<Vec<u32>>) {
    let n = g.n;
    let mut sizes = vec![0usize; n];
    for &c in &colors {
        sizes[c as usize] += 1;
    }
    let Some(target) = (0..n).find(|&c| sizes[c] > 1) else {
        let pos: Vec<usize> = colors.iter().map(|&c| c as usize).collect();
        let cand = g.permuted(&pos);
        if best.as_ref().map_or(true, |b| cand < *b) {
            *best = Some(cand);
        }
        return;
    };
    let cell: Vec<usize> = (0..n).filter(|&v| colors[v] as usize == target).collect();
    for &v in &cell {
        let mut next: Vec<u32> = colors
            .iter()
            .enumerate()
            .map(|(u, &c)| 2 * c + u32::from(c as usize == target && u != v))
            .collect();
        rerank(&mut next);
        refine(g, &mut next);
        search(g, next, best);
    }
}

fn rerank(colors: &mut [u32]) {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    for x in colors.iter_mut() {
        *x = c.binary_search(x).expect("present") as u32;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    #[test]
    fn relabelled_graphs_agree() {
        let a = build_graph(&["a", "b", "c"], &[("x", "a", "b"), ("y", "a", "b"), ("z", "c", "b")], &[]).unwrap();
        let b = build_graph(&["p", "q", "r"], &[("1", "q", "p"), ("2", "r", "p"), ("3", "r", "p")], &[]).unwrap();
        assert!(isomorphic(&a, &b).unwrap());
        let c = build_graph(&["p", "q", "r"], &[("1", "p", "q"), ("2", "p", "q"), ("3", "p", "r")], &[]).unwrap();
        assert!(!isomorphic(&a, &c).unwrap());
    }

    #[test]
    fn symmetric_graphs_terminate() {
        let mut d = DenseGraph::new(12);
        for i in 0..6 {
            d.add(2 * i, 2 * i + 1);
        }
        let c = d.canonical();
        assert_eq!(c.edge_count(), 6);
        let mut e = DenseGraph::new(12);
        for i in (0..6).rev() {
            e.add(2 * i + 1, 2 * i);
        }
        assert_eq!(e.canonical(), c);
    }

    #[test]
    fn canonical_is_least_over_all_orderings_on_small_graphs() {
        let g = build_graph(
            &["a", "b", "c", "d"],
            &[("1", "a", "b"), ("2", "b", "c"), ("3", "a", "c"), ("4", "d", "c"), ("5", "d", "c")],
            &[],
        )
        .unwrap();
        let d = DenseGraph::from_graph(&g).unwrap();
        let c = d.canonical();
        let mut perm: Vec<usize> = (0..4).collect();
        let mut seen = std::collections::BTreeSet::new();
        loop {
            seen.insert(DenseGraph { n: 4, adj: d.permuted(&perm) });
            if !next_permutation(&mut perm) {
                break;
            }
        }
        assert!(seen.contains(&c));
        assert!(seen.iter().all(|x| x.clone().canonical() == c));
    }

    fn next_permutation(p: &mut [usize]) -> bool {
        let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
            return false;
        };
        let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
        true
    }
}

//! Reshaping any loop-free graph into the optimal thick path while recording
//! a k-path count certificate after every step.

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::{decomposition, optimal_bound, BundleProfile};
use crate::adjacency::count_paths_matrix;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StepKind {
    RemoveIsolated,
    IdentifyUnrelated,
    ShiftE2,
    ShiftSortE3E4,
    MergeGl,
    AttachResidual,
    Redistribute,
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub kind: StepKind,
    #[serde(with = "decimal")]
    pub count: BigUint,
    pub graph: Graph,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReshapeTrace {
    pub k: usize,
    pub steps: Vec<TraceStep>,
}

/// Outcome of re-checking a trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub counts_verified: bool,
    pub monotone: bool,
    pub loop_free: bool,
    pub edge_count_invariant: bool,
    pub final_thick_path: bool,
    pub final_optimal: bool,
}

impl Certificate {
    pub fn holds(&self) -> bool {
        self.counts_verified
            && self.monotone
            && self.loop_free
            && self.edge_count_invariant
            && self.final_thick_path
            && self.final_optimal
    }
}

impl ReshapeTrace {
    pub fn initial_count(&self) -> Option<&BigUint> {
        self.steps.first().map(|s| &s.count)
    }

    pub fn final_count(&self) -> Option<&BigUint> {
        self.steps.last().map(|s| &s.count)
    }

    pub fn final_graph(&self) -> Option<&Graph> {
        self.steps.last().map(|s| &s.graph)
    }

    /// Recounts every snapshot by DFS and checks the trace invariants.
    pub fn certify(&self) -> Certificate {
        let k = self.k;
        let counts_verified = self
            .steps
            .iter()
            .all(|s| s.graph.count_paths_bruteforce(k).map_or(false, |c| c == s.count));
        let monotone = self.steps.windows(2).all(|w| w[0].count <= w[1].count);
        let loop_free = self.steps.iter().all(|s| !s.graph.has_loop());
        let n = self.steps.first().map_or(0, |s| s.graph.edge_count());
        let edge_count_invariant = self.steps.iter().all(|s| s.graph.edge_count() == n);
        let profile = self.final_graph().and_then(thick_profile);
        let final_thick_path = match (&profile, decomposition(n, k)) {
            (Some(p), Ok((q, r))) => {
                p.bundles.len() == k
                    && p.bundles.iter().filter(|&&b| b == q + 1).count() == r
                    && p.bundles.iter().all(|&b| b == q || b == q + 1)
            }
            _ => false,
        };
        let final_optimal = match (optimal_bound(n, k), self.final_count()) {
            (Ok(b), Some(c)) => &b == c,
            _ => false,
        };
        Certificate {
            counts_verified,
            monotone,
            loop_free,
            edge_count_invariant,
            final_thick_path,
            final_optimal,
        }
    }

    /// One digraph per step.
    pub fn to_dot_sequence(&self) -> String {
        self.steps
            .iter()
            .enumerate()
            .map(|(i, s)| s.graph.to_dot_named(&format!("step{}_{}_{}", i, s.kind, s.count)))
            .collect()
    }
}

/// Bundle profile of a thick path, or `None` if the graph is not one.
pub fn thick_profile(graph: &Graph) -> Option<BundleProfile> {
    if graph.has_infinite_bundles() {
        return None;
    }
    let state = State::from_graph(graph);
    let chain = state.chain().ok()?;
    let pos = positions(&chain, state.names.len());
    let mut sizes = vec![0usize; chain.len().saturating_sub(1)];
    for (_, s, t) in &state.edges {
        if pos[*t] != pos[*s] + 1 {
            return None;
        }
        sizes[pos[*s]] += 1;
    }
    Some(BundleProfile::new(sizes))
}

mod decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Mutable working copy: vertex names plus index-based edges.
#[derive(Clone, PartialEq)]
struct State {
    names: Vec<VertexId>,
    edges: Vec<(EdgeId, usize, usize)>,
}

fn positions(chain: &[usize], n: usize) -> Vec<usize> {
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in chain.iter().enumerate() {
        pos[v] = i;
    }
    pos
}

impl State {
    fn from_graph(g: &Graph) -> Self {
        State {
            names: g.vertices().to_vec(),
            edges: g.raw_edges().iter().map(|e| (e.id.clone(), e.src, e.dst)).collect(),
        }
    }

    fn graph(&self) -> Graph {
        Graph::from_indexed(self.names.clone(), self.edges.clone())
    }

    fn remove_vertex(&mut self, v: usize) {
        debug_assert!(self.edges.iter().all(|(_, s, t)| *s != v && *t != v));
        self.names.remove(v);
        for (_, s, t) in &mut self.edges {
            if *s > v {
                *s -= 1;
            }
            if *t > v {
                *t -= 1;
            }
        }
    }

    /// Redirects every edge at `drop` to `keep`, then deletes `drop`.
    fn merge(&mut self, keep: usize, drop: usize) {
        for (_, s, t) in &mut self.edges {
            if *s == drop {
                *s = keep;
            }
            if *t == drop {
                *t = keep;
            }
        }
        self.remove_vertex(drop);
    }

    fn reach(&self) -> Vec<Vec<bool>> {
        let n = self.names.len();
        let mut succ = vec![Vec::new(); n];
        for (_, s, t) in &self.edges {
            succ[*s].push(*t);
        }
        (0..n)
            .map(|v| {
                let mut seen = vec![false; n];
                let mut stack = vec![v];
                seen[v] = true;
                while let Some(x) = stack.pop() {
                    for &y in &succ[x] {
                        if !seen[y] {
                            seen[y] = true;
                            stack.push(y);
                        }
                    }
                }
                seen
            })
            .collect()
    }

    /// The vertices in their reachability order, when that order is total.
    fn chain(&self) -> Result<Vec<usize>> {
        let g = self.graph();
        let order = g.topological_order().ok_or(Error::HasLoop)?;
        let linked = order
            .windows(2)
            .all(|w| self.edges.iter().any(|(_, s, t)| *s == w[0] && *t == w[1]));
        if linked {
            Ok(order)
        } else {
            Err(Error::NotTotallyOrdered)
        }
    }

    fn bundle_sizes(&self, chain: &[usize], upto: usize) -> Vec<usize> {
        let pos = positions(chain, self.names.len());
        let mut sizes = vec![0; upto];
        for (_, s, _) in &self.edges {
            if pos[*s] < upto {
                sizes[pos[*s]] += 1;
            }
        }
        sizes
    }
}

type Observer<'a> = &'a mut dyn FnMut(StepKind, &State);

fn require_plain(graph: &Graph) -> Result<()> {
    if graph.has_infinite_bundles() {
        return Err(Error::InfiniteBundlePresent);
    }
    if graph.has_loop() {
        return Err(Error::HasLoop);
    }
    Ok(())
}

/// Drops vertices incident to no edge and no infinite bundle.
pub fn remove_isolated(graph: &Graph) -> Graph {
    let mut used = vec![false; graph.vertex_count()];
    for e in graph.raw_edges() {
        used[e.src] = true;
        used[e.dst] = true;
    }
    for &(s, t) in graph.raw_bundles() {
        used[s] = true;
        used[t] = true;
    }
    let keep = |i: usize| used[i];
    let vertices = (0..graph.vertex_count())
        .filter(|&i| keep(i))
        .map(|i| graph.vertices()[i].clone())
        .collect();
    let edges = graph
        .edges()
        .map(|(e, s, t)| (e.clone(), s.clone(), t.clone()))
        .collect();
    let bundles = graph.infinite_bundles().map(|(s, t)| (s.clone(), t.clone())).collect();
    Graph::validated(vertices, edges, bundles, true).expect("endpoints retained")
}

fn identify_steps(state: &mut State, obs: Observer<'_>) {
    loop {
        let reach = state.reach();
        let n = state.names.len();
        let pair = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| !reach[i][j] && !reach[j][i]);
        match pair {
            Some((i, j)) => {
                state.merge(i, j);
                obs(StepKind::IdentifyUnrelated, state);
            }
            None => return,
        }
    }
}

/// Repeatedly merges the first unrelated pair of vertices (no directed path
/// either way) until reachability is a total order.
pub fn identify_unrelated(graph: &Graph) -> Result<Graph> {
    require_plain(graph)?;
    let mut state = State::from_graph(graph);
    identify_steps(&mut state, &mut |_, _| {});
    Ok(state.graph())
}

fn align_steps(state: &mut State, chain: &[usize], k: usize, obs: Observer<'_>) {
    let pos = positions(chain, state.names.len());
    let before = state.clone();
    for (_, s, t) in &mut state.edges {
        if *s == chain[0] && pos[*t] >= 2 {
            *s = chain[pos[*t] - 1];
        }
    }
    if *state != before {
        obs(StepKind::ShiftE2, state);
    }
    for m in 1..k {
        let before = state.clone();
        for (_, s, t) in &mut state.edges {
            if *s == chain[m] && pos[*t] >= m + 2 {
                *s = chain[m + 1];
            }
        }
        let sizes = state.bundle_sizes(chain, m + 1);
        if let Some(p) = (0..m).find(|&i| sizes[i] > sizes[m]) {
            for (_, s, t) in &mut state.edges {
                let i = pos[*s];
                if (p..=m).contains(&i) {
                    let to = if i == m { p } else { i + 1 };
                    *s = chain[to];
                    *t = chain[to + 1];
                }
            }
        }
        if *state != before {
            obs(StepKind::ShiftSortE3E4, state);
        }
    }
}

fn chain_for(state: &State, k: usize) -> Result<Vec<usize>> {
    let chain = state.chain()?;
    let longest = chain.len().saturating_sub(1);
    if longest < k {
        return Err(Error::NoKPath { longest, k });
    }
    Ok(chain)
}

/// Brings the first `k` vertices into sorted thick-path form: each emits only
/// to its successor and the bundle sizes are non-decreasing.
pub fn align_and_sort(graph: &Graph, k: usize) -> Result<Graph> {
    require_plain(graph)?;
    let mut state = State::from_graph(graph);
    let chain = chain_for(&state, k)?;
    align_steps(&mut state, &chain, k, &mut |_, _| {});
    Ok(state.graph())
}

fn in_front_form(state: &State, chain: &[usize], k: usize) -> bool {
    let pos = positions(chain, state.names.len());
    let consecutive = state
        .edges
        .iter()
        .all(|(_, s, t)| pos[*s] >= k || pos[*t] == pos[*s] + 1);
    let sizes = state.bundle_sizes(chain, k);
    consecutive && sizes.windows(2).all(|w| w[0] <= w[1])
}

fn merge_step(state: &mut State, chain: &[usize], k: usize) {
    let (first, anchor, next) = (chain[0], chain[k], chain[k + 1]);
    for (_, s, t) in &mut state.edges {
        if *s == first {
            *s = anchor;
            *t = next;
        }
    }
    state.remove_vertex(first);
}

/// Re-attaches the first vertex's bundle at vertex `k+1` and drops the first
/// vertex, shortening the longest path by one.
pub fn merge_front(graph: &Graph, k: usize) -> Result<Graph> {
    require_plain(graph)?;
    let mut state = State::from_graph(graph);
    let chain = state.chain().map_err(|_| Error::NotInFkForm)?;
    if k == 0 || chain.len() <= k + 1 || !in_front_form(&state, &chain, k) {
        return Err(Error::NotInFkForm);
    }
    merge_step(&mut state, &chain, k);
    Ok(state.graph())
}

fn fresh_name(state: &State, counter: &mut usize) -> VertexId {
    loop {
        *counter += 1;
        let cand = VertexId::from(format!("x{counter}"));
        if !state.names.contains(&cand) {
            return cand;
        }
    }
}

/// Moves edges skipping over a vertex onto consecutive pairs, smallest bundle
/// first; extends the chain to `k` pairs when it is shorter.
fn attach_residual(state: &mut State, mut chain: Vec<usize>, k: usize) -> Vec<usize> {
    let mut counter = 0;
    while chain.len() < k + 1 {
        let name = fresh_name(state, &mut counter);
        state.names.push(name);
        chain.push(state.names.len() - 1);
    }
    let pos = positions(&chain, state.names.len());
    let residual: Vec<usize> = (0..state.edges.len())
        .filter(|&i| pos[state.edges[i].2] != pos[state.edges[i].1] + 1)
        .collect();
    for i in residual {
        let sizes = state.bundle_sizes(&chain, k);
        let lo = (0..k).min_by_key(|&j| sizes[j]).expect("k >= 1");
        state.edges[i].1 = chain[lo];
        state.edges[i].2 = chain[lo + 1];
    }
    loop {
        let sizes = state.bundle_sizes(&chain, k);
        let Some(empty) = (0..k).find(|&j| sizes[j] == 0) else { break };
        let hi = (0..k).rev().max_by_key(|&j| sizes[j]).expect("k >= 1");
        let e = last_edge_from(state, chain[hi]);
        state.edges[e].1 = chain[empty];
        state.edges[e].2 = chain[empty + 1];
    }
    chain
}

fn last_edge_from(state: &State, v: usize) -> usize {
    (0..state.edges.len())
        .rev()
        .find(|&i| state.edges[i].1 == v)
        .expect("bundle nonempty")
}

/// Runs the full reshaping: isolated vertices, unrelated pairs, repeated
/// align-and-merge until the longest path has length `k`, residual edges,
/// then balancing. Every changed state is recorded with its k-path count.
pub fn maximize_with_trace(graph: &Graph, k: usize) -> Result<ReshapeTrace> {
    require_plain(graph)?;
    let n = graph.edge_count();
    if k == 0 || k > n {
        return Err(Error::InvalidRange(format!("need 1 <= k <= N, got k = {k}, N = {n}")));
    }
    let mut steps: Vec<TraceStep> = Vec::new();
    let mut record = |kind: StepKind, st: &State| {
        let g = st.graph();
        let count = count_paths_matrix(&g, k).expect("finite graph");
        steps.push(TraceStep { kind, count, graph: g });
    };

    let mut state = State::from_graph(&remove_isolated(graph));
    record(StepKind::RemoveIsolated, &state);
    identify_steps(&mut state, &mut record);

    let mut chain = state.chain()?;
    while chain.len() > k + 1 {
        align_steps(&mut state, &chain, k, &mut record);
        merge_step(&mut state, &chain, k);
        record(StepKind::MergeGl, &state);
        chain = state.chain()?;
    }

    let before = state.clone();
    let chain = attach_residual(&mut state, chain, k);
    if state != before {
        record(StepKind::AttachResidual, &state);
    }

    loop {
        let profile = BundleProfile::new(state.bundle_sizes(&chain, k));
        let Some((hi, lo)) = profile.next_move() else { break };
        let e = last_edge_from(&state, chain[hi]);
        state.edges[e].1 = chain[lo];
        state.edges[e].2 = chain[lo + 1];
        record(StepKind::Redistribute, &state);
    }
    Ok(ReshapeTrace { k, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::maximizer_graph;
    use crate::graph::build_graph;

    fn bundle_graph(spec: &[(usize, usize, usize)], n: usize) -> Graph {
        let names: Vec<VertexId> = (1..=n).map(|i| VertexId::from(i.to_string())).collect();
        let mut edges = Vec::new();
        for &(s, t, m) in spec {
            for c in 0..m {
                edges.push((EdgeId::from(format!("{s}-{t}.{c}")), s - 1, t - 1));
            }
        }
        Graph::from_indexed(names, edges)
    }

    fn count(g: &Graph, k: usize) -> u64 {
        count_paths_matrix(g, k).unwrap().try_into().unwrap()
    }

    #[test]
    fn isolated_vertices() {
        let g = build_graph(&["a", "b", "c"], &[("e", "a", "b")], &[]).unwrap();
        let r = remove_isolated(&g);
        assert_eq!(r.vertex_count(), 2);
        assert_eq!(remove_isolated(&r), r);
        assert_eq!(remove_isolated(&Graph::empty()).vertex_count(), 0);
    }

    #[test]
    fn identify_disjoint_edges() {
        let g = build_graph(&["a", "b", "c", "d"], &[("e", "a", "b"), ("f", "c", "d")], &[]).unwrap();
        let r = identify_unrelated(&g).unwrap();
        assert!(r.vertex_count() <= 3);
        assert_eq!(count(&r, 1), 2);
        assert!(!r.has_loop());
        let chain = build_graph(&["a", "b", "c"], &[("e", "a", "b"), ("f", "b", "c")], &[]).unwrap();
        assert_eq!(identify_unrelated(&chain).unwrap(), chain);
    }

    #[test]
    fn sorting_front_bundles() {
        let g = bundle_graph(&[(1, 2, 3), (2, 3, 1), (3, 4, 2), (2, 4, 1)], 4);
        let r = align_and_sort(&g, 2).unwrap();
        assert!(count(&r, 2) >= count(&g, 2));
        let sorted = maximizer_graph(6, 3).unwrap();
        assert_eq!(align_and_sort(&sorted, 3).unwrap(), sorted);
        let short = bundle_graph(&[(1, 2, 2)], 2);
        assert_eq!(align_and_sort(&short, 2), Err(Error::NoKPath { longest: 1, k: 2 }));
    }

    #[test]
    fn merging_front() {
        let f3 = bundle_graph(
            &[(1, 2, 2), (2, 3, 3), (3, 4, 4), (4, 5, 1), (5, 6, 1), (6, 7, 2), (4, 7, 1), (5, 7, 2)],
            7,
        );
        assert_eq!(count(&f3, 3), 62);
        let g5 = merge_front(&f3, 3).unwrap();
        assert!(count(&g5, 3) >= 62);
        assert_eq!(merge_front(&maximizer_graph(6, 3).unwrap(), 3), Err(Error::NotInFkForm));
    }

    #[test]
    fn maximizer_is_fixed() {
        let m = maximizer_graph(16, 3).unwrap();
        let t = maximize_with_trace(&m, 3).unwrap();
        assert_eq!(t.steps.len(), 1);
        assert_eq!(t.final_count(), Some(&BigUint::from(150u32)));
        assert!(t.certify().holds());
    }

    #[test]
    fn short_chains_are_extended() {
        let g = bundle_graph(&[(1, 2, 5)], 2);
        let t = maximize_with_trace(&g, 3).unwrap();
        assert!(t.certify().holds(), "{:?}", t.certify());
        assert_eq!(t.final_count(), Some(&BigUint::from(4u32)));
    }

    #[test]
    fn trace_round_trips() {
        let g = bundle_graph(&[(1, 2, 1), (3, 4, 2), (1, 4, 1)], 4);
        let t = maximize_with_trace(&g, 2).unwrap();
        let text = serde_json::to_string(&t).unwrap();
        assert!(text.contains("\"kind\":\"RemoveIsolated\""));
        assert_eq!(serde_json::from_str::<ReshapeTrace>(&text).unwrap(), t);
        assert!(t.to_dot_sequence().matches("digraph").count() == t.steps.len());
    }
}

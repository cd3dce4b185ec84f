//! Finite directed multigraphs, paths, loop detection and path enumeration.

use std::borrow::Borrow;
use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the number of paths materialized by enumeration.
pub const DEFAULT_PATH_CAP: usize = 10_000_000;

/// Above this length counting switches from DFS to a vertex-vector DP.
const DFS_MAX_K: usize = 20;

macro_rules! id_type {
    ($name:ident) => {
        #[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(String);

        impl $name {
            pub fn new(s: impl Into<String>) -> Self {
                Self(s.into())
            }
            pub fn as_str(&self) -> &str {
                &self.0
            }
        }
        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self(s.to_owned())
            }
        }
        impl From<String> for $name {
            fn from(s: String) -> Self {
                Self(s)
            }
        }
        impl From<&$name> for $name {
            fn from(s: &$name) -> Self {
                s.clone()
            }
        }
        impl AsRef<str> for $name {
            fn as_ref(&self) -> &str {
                &self.0
            }
        }
        impl Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }
    };
}

id_type!(VertexId);
id_type!(EdgeId);

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Edge {
    pub id: EdgeId,
    pub src: usize,
    pub dst: usize,
}

/// Directed multigraph with ordered vertices and edges. Immutable once built.
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "GraphDoc", into = "GraphDoc")]
pub struct Graph {
    vertices: Vec<VertexId>,
    edges: Vec<Edge>,
    bundles: Vec<(usize, usize)>,
    vindex: HashMap<VertexId, usize>,
    eindex: HashMap<EdgeId, usize>,
    out: Vec<Vec<usize>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
            && self.bundles_by_id() == other.bundles_by_id()
            && self.edges.len() == other.edges.len()
            && self.edges.iter().zip(&other.edges).all(|(a, b)| {
                a.id == b.id
                    && self.vertices[a.src] == other.vertices[b.src]
                    && self.vertices[a.dst] == other.vertices[b.dst]
            })
    }
}
impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(")?;
        let doc = GraphDoc::from(self.clone());
        write!(f, "{}", serde_json::to_string(&doc).map_err(|_| fmt::Error)?)?;
        write!(f, ")")
    }
}

/// A finite path: an edge sequence with matching endpoints, or a bare vertex.
/// `base` is the source vertex of the path.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Path {
    pub base: VertexId,
    pub edges: Vec<EdgeId>,
}

impl Path {
    pub fn vertex(v: impl Into<VertexId>) -> Self {
        Path { base: v.into(), edges: Vec::new() }
    }
    pub fn len(&self) -> usize {
        self.edges.len()
    }
    pub fn is_vertex(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Paths order by length, then edge ids lexicographically, then base vertex.
impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.edges.cmp(&other.edges))
            .then_with(|| self.base.cmp(&other.base))
    }
}
impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.edges.is_empty() {
            return write!(f, "{}", self.base);
        }
        let ids: Vec<&str> = self.edges.iter().map(EdgeId::as_str).collect();
        write!(f, "{}", ids.join(" "))
    }
}

/// Convenience constructor from string slices.
pub fn build_graph(
    vertices: &[&str],
    edges: &[(&str, &str, &str)],
    infinite_bundles: &[(&str, &str)],
) -> Result<Graph> {
    Graph::from_parts(
        vertices.iter().map(|v| VertexId::from(*v)).collect(),
        edges
            .iter()
            .map(|(e, s, t)| (EdgeId::from(*e), VertexId::from(*s), VertexId::from(*t)))
            .collect(),
        infinite_bundles
            .iter()
            .map(|(s, t)| (VertexId::from(*s), VertexId::from(*t)))
            .collect(),
    )
}

impl Graph {
    pub fn empty() -> Self {
        Graph::assemble(Vec::new(), Vec::new(), Vec::new())
    }

    /// Validated constructor. Edge ids may not contain `*`.
    pub fn from_parts(
        vertices: Vec<VertexId>,
        edges: Vec<(EdgeId, VertexId, VertexId)>,
        infinite_bundles: Vec<(VertexId, VertexId)>,
    ) -> Result<Graph> {
        Self::validated(vertices, edges, infinite_bundles, false)
    }

    pub(crate) fn validated(
        vertices: Vec<VertexId>,
        edges: Vec<(EdgeId, VertexId, VertexId)>,
        infinite_bundles: Vec<(VertexId, VertexId)>,
        allow_star: bool,
    ) -> Result<Graph> {
        let mut vindex = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if v.as_str().is_empty() {
                return Err(Error::EmptyId);
            }
            if vindex.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateId(v.to_string()));
            }
        }
        let lookup = |v: &VertexId| {
            vindex
                .get(v)
                .copied()
                .ok_or_else(|| Error::DanglingEndpoint(v.to_string()))
        };
        let mut seen = BTreeSet::new();
        let mut es = Vec::with_capacity(edges.len());
        for (id, s, t) in edges {
            if id.as_str().is_empty() {
                return Err(Error::EmptyId);
            }
            if !allow_star && id.as_str().contains('*') {
                return Err(Error::ReservedId(id.to_string()));
            }
            if !seen.insert(id.clone()) {
                return Err(Error::DuplicateId(id.to_string()));
            }
            es.push(Edge { id, src: lookup(&s)?, dst: lookup(&t)? });
        }
        let mut bs: Vec<(usize, usize)> = Vec::new();
        for (s, t) in infinite_bundles {
            let b = (lookup(&s)?, lookup(&t)?);
            if !bs.contains(&b) {
                bs.push(b);
            }
        }
        Ok(Graph::assemble(vertices, es, bs))
    }

    pub(crate) fn assemble(
        vertices: Vec<VertexId>,
        edges: Vec<Edge>,
        bundles: Vec<(usize, usize)>,
    ) -> Graph {
        let vindex = vertices.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        let eindex = edges.iter().enumerate().map(|(i, e)| (e.id.clone(), i)).collect();
        let mut out = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            out[e.src].push(i);
        }
        Graph { vertices, edges, bundles, vindex, eindex, out }
    }

    /// Builds from vertex names and index-based edges; ids are trusted.
    pub(crate) fn from_indexed(
        vertices: Vec<VertexId>,
        edges: Vec<(EdgeId, usize, usize)>,
    ) -> Graph {
        let edges = edges.into_iter().map(|(id, src, dst)| Edge { id, src, dst }).collect();
        Graph::assemble(vertices, edges, Vec::new())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }
    /// Edges as `(id, src, dst)` in insertion order.
    pub fn edges(&self) -> impl Iterator<Item = (&EdgeId, &VertexId, &VertexId)> + '_ {
        self.edges
            .iter()
            .map(move |e| (&e.id, &self.vertices[e.src], &self.vertices[e.dst]))
    }
    pub fn edge_ids(&self) -> impl Iterator<Item = &EdgeId> + '_ {
        self.edges.iter().map(|e| &e.id)
    }
    pub fn infinite_bundles(&self) -> impl Iterator<Item = (&VertexId, &VertexId)> + '_ {
        self.bundles
            .iter()
            .map(move |&(s, t)| (&self.vertices[s], &self.vertices[t]))
    }
    pub fn has_infinite_bundles(&self) -> bool {
        !self.bundles.is_empty()
    }
    pub fn has_vertex(&self, v: &str) -> bool {
        self.vindex.contains_key(v)
    }
    pub fn has_edge(&self, e: &str) -> bool {
        self.eindex.contains_key(e)
    }
    pub fn source(&self, e: &str) -> Result<&VertexId> {
        let i = self.edge_index(e)?;
        Ok(&self.vertices[self.edges[i].src])
    }
    pub fn target(&self, e: &str) -> Result<&VertexId> {
        let i = self.edge_index(e)?;
        Ok(&self.vertices[self.edges[i].dst])
    }
    /// Edges leaving `v`, in insertion order.
    pub fn out_edges(&self, v: &str) -> Result<Vec<&EdgeId>> {
        let i = self.vertex_index(v)?;
        Ok(self.out[i].iter().map(|&e| &self.edges[e].id).collect())
    }

    pub(crate) fn vertex_index(&self, v: &str) -> Result<usize> {
        self.vindex
            .get(v)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(v.to_owned()))
    }
    pub(crate) fn edge_index(&self, e: &str) -> Result<usize> {
        self.eindex
            .get(e)
            .copied()
            .ok_or_else(|| Error::UnknownEdge(e.to_owned()))
    }
    pub(crate) fn raw_edges(&self) -> &[Edge] {
        &self.edges
    }
    pub(crate) fn raw_bundles(&self) -> &[(usize, usize)] {
        &self.bundles
    }
    pub(crate) fn out_indices(&self, v: usize) -> &[usize] {
        &self.out[v]
    }
    fn bundles_by_id(&self) -> BTreeSet<(&VertexId, &VertexId)> {
        self.infinite_bundles().collect()
    }

    fn require_finite(&self) -> Result<()> {
        if self.has_infinite_bundles() {
            Err(Error::InfiniteBundlePresent)
        } else {
            Ok(())
        }
    }

    pub fn is_path<S: AsRef<str>>(&self, edge_seq: &[S]) -> Result<bool> {
        let idx = edge_seq
            .iter()
            .map(|e| self.edge_index(e.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(idx
            .windows(2)
            .all(|w| self.edges[w[0]].dst == self.edges[w[1]].src))
    }

    /// Validated path from an edge sequence; an empty sequence is rejected,
    /// use [`Path::vertex`] for length-0 paths.
    pub fn path<S: AsRef<str>>(&self, edge_seq: &[S]) -> Result<Path> {
        if edge_seq.is_empty() || !self.is_path(edge_seq)? {
            return Err(Error::NotAPath);
        }
        let first = self.edge_index(edge_seq[0].as_ref())?;
        Ok(Path {
            base: self.vertices[self.edges[first].src].clone(),
            edges: edge_seq.iter().map(|e| EdgeId::from(e.as_ref())).collect(),
        })
    }

    pub(crate) fn path_from_indices(&self, base: usize, edges: &[usize]) -> Path {
        Path {
            base: self.vertices[base].clone(),
            edges: edges.iter().map(|&e| self.edges[e].id.clone()).collect(),
        }
    }

    pub fn path_source<'a>(&'a self, p: &'a Path) -> Result<&'a VertexId> {
        match p.edges.first() {
            Some(e) => self.source(e.as_str()),
            None => {
                self.vertex_index(p.base.as_str())?;
                Ok(&p.base)
            }
        }
    }

    pub fn path_target<'a>(&'a self, p: &'a Path) -> Result<&'a VertexId> {
        match p.edges.last() {
            Some(e) => self.target(e.as_str()),
            None => {
                self.vertex_index(p.base.as_str())?;
                Ok(&p.base)
            }
        }
    }

    /// True iff the path is valid in this graph with a consistent base.
    pub fn contains_path(&self, p: &Path) -> bool {
        if !self.has_vertex(p.base.as_str()) {
            return false;
        }
        match p.edges.first() {
            None => true,
            Some(e) => {
                self.source(e.as_str()).map(|s| s == &p.base).unwrap_or(false)
                    && self.is_path(&p.edges).unwrap_or(false)
            }
        }
    }

    /// Out-edge lists sorted by edge id, for lexicographic enumeration.
    fn sorted_out(&self) -> Vec<Vec<usize>> {
        self.out
            .iter()
            .map(|es| {
                let mut es = es.clone();
                es.sort_by(|&a, &b| self.edges[a].id.cmp(&self.edges[b].id));
                es
            })
            .collect()
    }

    pub fn enumerate_paths(&self, k: usize) -> Result<Vec<Path>> {
        self.enumerate_paths_capped(k, DEFAULT_PATH_CAP)
    }

    /// All paths of length exactly `k` in lexicographic edge-id order;
    /// `k = 0` yields the vertices in insertion order.
    pub fn enumerate_paths_capped(&self, k: usize, cap: usize) -> Result<Vec<Path>> {
        self.require_finite()?;
        if k == 0 {
            if self.vertices.len() > cap {
                return Err(Error::ResultCapExceeded(cap));
            }
            return Ok(self.vertices.iter().cloned().map(Path::vertex).collect());
        }
        let sorted = self.sorted_out();
        let mut starts: Vec<usize> = (0..self.edges.len()).collect();
        starts.sort_by(|&a, &b| self.edges[a].id.cmp(&self.edges[b].id));
        let mut result = Vec::new();
        let mut stack = Vec::with_capacity(k);
        for e in starts {
            stack.push(e);
            self.extend_paths(&sorted, k, &mut stack, &mut result, cap)?;
            stack.pop();
        }
        Ok(result)
    }

    fn extend_paths(
        &self,
        sorted: &[Vec<usize>],
        k: usize,
        stack: &mut Vec<usize>,
        out: &mut Vec<Path>,
        cap: usize,
    ) -> Result<()> {
        if stack.len() == k {
            if out.len() >= cap {
                return Err(Error::ResultCapExceeded(cap));
            }
            out.push(self.path_from_indices(self.edges[stack[0]].src, stack));
            return Ok(());
        }
        let last = self.edges[*stack.last().expect("nonempty stack")].dst;
        for &e in &sorted[last] {
            stack.push(e);
            self.extend_paths(sorted, k, stack, out, cap)?;
            stack.pop();
        }
        Ok(())
    }

    /// FP(E): every finite path, grouped by length. Fails on graphs with a loop.
    pub fn enumerate_all_finite_paths(&self) -> Result<Vec<Path>> {
        self.enumerate_all_finite_paths_capped(DEFAULT_PATH_CAP)
    }

    pub fn enumerate_all_finite_paths_capped(&self, cap: usize) -> Result<Vec<Path>> {
        self.require_finite()?;
        if self.has_loop() {
            return Err(Error::HasLoop);
        }
        let mut all = Vec::new();
        for k in 0..=self.edges.len() {
            let ps = self.enumerate_paths_capped(k, cap.saturating_sub(all.len()))?;
            if ps.is_empty() {
                break;
            }
            all.extend(ps);
        }
        Ok(all)
    }

    /// Topological order over edges and bundles, or `None` if a loop exists.
    pub(crate) fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.vertices.len();
        let mut indeg = vec![0usize; n];
        let mut succ = vec![Vec::new(); n];
        for e in &self.edges {
            indeg[e.dst] += 1;
            succ[e.src].push(e.dst);
        }
        for &(s, t) in &self.bundles {
            indeg[t] += 1;
            succ[s].push(t);
        }
        let mut ready: Vec<usize> = (0..n).rev().filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = ready.pop() {
            order.push(v);
            for &w in &succ[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.push(w);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// True iff a directed cycle of any length exists. Bundles act as edges.
    pub fn has_loop(&self) -> bool {
        self.topological_order().is_none()
    }

    /// Number of paths of length `k`, counted without materializing them.
    pub fn count_paths_bruteforce(&self, k: usize) -> Result<BigUint> {
        self.require_finite()?;
        if k == 0 {
            return Ok(BigUint::from(self.vertices.len()));
        }
        if k <= DFS_MAX_K {
            let groups = self.neighbor_groups();
            let mut total: u128 = 0;
            let mut ok = true;
            for v in 0..self.vertices.len() {
                match dfs_count(&groups, v, k) {
                    Some(c) => match total.checked_add(c) {
                        Some(t) => total = t,
                        None => {
                            ok = false;
                            break;
                        }
                    },
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                return Ok(BigUint::from(total));
            }
        }
        Ok(self.count_paths_dp(k))
    }

    fn neighbor_groups(&self) -> Vec<Vec<(usize, u128)>> {
        let mut groups: Vec<Vec<(usize, u128)>> = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            let g = &mut groups[e.src];
            match g.iter_mut().find(|(w, _)| *w == e.dst) {
                Some((_, m)) => *m += 1,
                None => g.push((e.dst, 1)),
            }
        }
        groups
    }

    fn count_paths_dp(&self, k: usize) -> BigUint {
        let n = self.vertices.len();
        let mut c = vec![BigUint::from(1u32); n];
        for _ in 0..k {
            let mut next = vec![BigUint::zero(); n];
            for e in &self.edges {
                next[e.src] += &c[e.dst];
            }
            c = next;
        }
        c.into_iter().sum()
    }

    /// `(e_i, ..., e_{i+k})` with 1-based `i`; `k` is the offset, so the
    /// result has `k + 1` edges.
    pub fn subpath(&self, path: &Path, i: usize, k: usize) -> Result<Path> {
        let n = path.len();
        if i == 0 || i > n || k > n - i {
            return Err(Error::IndexOutOfRange);
        }
        let edges = path.edges[i - 1..i + k].to_vec();
        Ok(Path { base: self.source(edges[0].as_str())?.clone(), edges })
    }

    /// Given a path and a permutation of its positions (`sigma[i]` is the
    /// 0-based image of position `i`), returns the loop built from the
    /// permuted sequence when that sequence is itself a path.
    pub fn loop_from_permutation(&self, path: &Path, sigma: &[usize]) -> Result<Option<Path>> {
        let n = path.len();
        let mut seen = vec![false; n];
        if sigma.len() != n {
            return Err(Error::InvalidPermutation);
        }
        for &s in sigma {
            if s >= n || std::mem::replace(&mut seen[s], true) {
                return Err(Error::InvalidPermutation);
            }
        }
        if !self.contains_path(path) {
            return Err(Error::NotAPath);
        }
        let Some(j) = (0..n).find(|&i| sigma[i] != i) else {
            return Ok(None);
        };
        let permuted: Vec<&EdgeId> = sigma.iter().map(|&s| &path.edges[s]).collect();
        if !self.is_path(&permuted)? {
            return Ok(None);
        }
        // position of e_j inside the permuted sequence; it lies after j
        let back = sigma.iter().position(|&s| s == j).expect("bijection");
        let mut cycle: Vec<EdgeId> = permuted[j..=back].iter().map(|e| (*e).clone()).collect();
        cycle.extend(path.edges[j + 1..sigma[j]].iter().cloned());
        let p = self.path(&cycle)?;
        debug_assert_eq!(self.path_source(&p)?, self.path_target(&p)?);
        Ok(Some(p))
    }

    /// Vertices emitting no edge and no infinite bundle.
    pub fn sinks(&self) -> Vec<VertexId> {
        (0..self.vertices.len())
            .filter(|&v| self.out[v].is_empty() && !self.bundles.iter().any(|b| b.0 == v))
            .map(|v| self.vertices[v].clone())
            .collect()
    }

    pub fn is_connected_undirected(&self) -> bool {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let links = self
            .edges
            .iter()
            .map(|e| (e.src, e.dst))
            .chain(self.bundles.iter().copied());
        for (a, b) in links {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        let roots: BTreeSet<usize> = (0..n).map(|v| find(&mut parent, v)).collect();
        roots.len() <= 1
    }

    /// A path of maximal length; among those the lexicographically smallest
    /// edge-id sequence. Edgeless graphs yield their first vertex.
    pub fn longest_path(&self) -> Result<Path> {
        self.require_finite()?;
        let order = self.topological_order().ok_or(Error::HasLoop)?;
        if self.vertices.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut best: Vec<Vec<usize>> = vec![Vec::new(); self.vertices.len()];
        for &v in order.iter().rev() {
            let mut cand: Option<Vec<usize>> = None;
            for &e in &self.out[v] {
                let mut seq = Vec::with_capacity(best[self.edges[e].dst].len() + 1);
                seq.push(e);
                seq.extend_from_slice(&best[self.edges[e].dst]);
                if cand.as_ref().map_or(true, |c| self.better(&seq, c)) {
                    cand = Some(seq);
                }
            }
            best[v] = cand.unwrap_or_default();
        }
        let mut top = 0;
        for v in 1..self.vertices.len() {
            if self.better(&best[v], &best[top]) {
                top = v;
            }
        }
        Ok(self.path_from_indices(top, &best[top]))
    }

    fn better(&self, a: &[usize], b: &[usize]) -> bool {
        match a.len().cmp(&b.len()) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => {
                let ka = a.iter().map(|&e| &self.edges[e].id);
                let kb = b.iter().map(|&e| &self.edges[e].id);
                ka.lt(kb)
            }
        }
    }

    /// Graphviz rendering; each infinite bundle becomes one edge labeled ∞.
    pub fn to_dot(&self) -> String {
        self.to_dot_named("G")
    }

    pub fn to_dot_named(&self, name: &str) -> String {
        let q = |s: &str| format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""));
        let mut s = format!("digraph {} {{\n", q(name));
        for v in &self.vertices {
            s.push_str(&format!("  {};\n", q(v.as_str())));
        }
        for e in &self.edges {
            s.push_str(&format!(
                "  {} -> {} [label={}];\n",
                q(self.vertices[e.src].as_str()),
                q(self.vertices[e.dst].as_str()),
                q(e.id.as_str())
            ));
        }
        for &(a, b) in &self.bundles {
            s.push_str(&format!(
                "  {} -> {} [label=\"∞\", style=bold];\n",
                q(self.vertices[a].as_str()),
                q(self.vertices[b].as_str())
            ));
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Graph> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn dfs_count(groups: &[Vec<(usize, u128)>], v: usize, k: usize) -> Option<u128> {
    if k == 0 {
        return Some(1);
    }
    let mut total: u128 = 0;
    for &(w, m) in &groups[v] {
        let sub = dfs_count(groups, w, k - 1)?;
        total = total.checked_add(m.checked_mul(sub)?)?;
    }
    Some(total)
}

#[derive(Serialize, Deserialize)]
struct EdgeDoc {
    id: String,
    src: String,
    dst: String,
}

#[derive(Serialize, Deserialize)]
struct BundleDoc {
    src: String,
    dst: String,
}

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    vertices: Vec<String>,
    edges: Vec<EdgeDoc>,
    #[serde(default)]
    infinite_bundles: Vec<BundleDoc>,
}

impl TryFrom<GraphDoc> for Graph {
    type Error = Error;
    fn try_from(doc: GraphDoc) -> Result<Graph> {
        Graph::from_parts(
            doc.vertices.into_iter().map(VertexId::from).collect(),
            doc.edges
                .into_iter()
                .map(|e| (EdgeId::from(e.id), VertexId::from(e.src), VertexId::from(e.dst)))
                .collect(),
            doc.infinite_bundles
                .into_iter()
                .map(|b| (VertexId::from(b.src), VertexId::from(b.dst)))
                .collect(),
        )
    }
}

impl From<Graph> for GraphDoc {
    fn from(g: Graph) -> GraphDoc {
        GraphDoc {
            vertices: g.vertices.iter().map(|v| v.to_string()).collect(),
            edges: g
                .edges
                .iter()
                .map(|e| EdgeDoc {
                    id: e.id.to_string(),
                    src: g.vertices[e.src].to_string(),
                    dst: g.vertices[e.dst].to_string(),
                })
                .collect(),
            infinite_bundles: g
                .bundles
                .iter()
                .map(|&(s, t)| BundleDoc {
                    src: g.vertices[s].to_string(),
                    dst: g.vertices[t].to_string(),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_loop() -> Graph {
        build_graph(&["v"], &[("e", "v", "v")], &[]).unwrap()
    }

    fn chain(n: usize) -> Graph {
        let vs: Vec<String> = (0..=n).map(|i| format!("v{i}")).collect();
        let es: Vec<(String, String, String)> =
            (0..n).map(|i| (format!("e{i}"), vs[i].clone(), vs[i + 1].clone())).collect();
        Graph::from_parts(
            vs.into_iter().map(VertexId::from).collect(),
            es.into_iter().map(|(a, b, c)| (a.into(), b.into(), c.into())).collect(),
            vec![],
        )
        .unwrap()
    }

    fn two_cycle() -> Graph {
        build_graph(&["v", "w"], &[("e", "v", "w"), ("f", "w", "v")], &[]).unwrap()
    }

    fn nilpotent_dag() -> Graph {
        let rows = [[0, 1, 1, 1, 0], [0, 0, 1, 1, 1], [0, 0, 0, 1, 2], [0, 0, 0, 0, 2], [0; 5]];
        let mut edges = Vec::new();
        for (i, r) in rows.iter().enumerate() {
            for (j, &m) in r.iter().enumerate() {
                for t in 0..m {
                    edges.push((format!("{i}{j}{t}"), format!("{i}"), format!("{j}")));
                }
            }
        }
        Graph::from_parts(
            (0..5).map(|i| VertexId::from(i.to_string())).collect(),
            edges.into_iter().map(|(a, b, c)| (a.into(), b.into(), c.into())).collect(),
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn build_rejects_bad_input() {
        assert_eq!(build_graph(&["v"], &[("e", "v", "w")], &[]), Err(Error::DanglingEndpoint("w".into())));
        assert_eq!(build_graph(&["v", "v"], &[], &[]), Err(Error::DuplicateId("v".into())));
        assert_eq!(
            build_graph(&["v"], &[("e", "v", "v"), ("e", "v", "v")], &[]),
            Err(Error::DuplicateId("e".into()))
        );
        assert_eq!(build_graph(&["v"], &[("e*", "v", "v")], &[]), Err(Error::ReservedId("e*".into())));
        assert_eq!(build_graph(&[], &[], &[]).unwrap().vertex_count(), 0);
    }

    #[test]
    fn single_loop_paths() {
        let g = single_loop();
        assert!(g.is_path(&["e", "e"]).unwrap());
        assert_eq!(g.enumerate_paths(5).unwrap().len(), 1);
        assert!(g.has_loop());
        assert_eq!(g.enumerate_all_finite_paths(), Err(Error::HasLoop));
        assert!(g.sinks().is_empty());
    }

    #[test]
    fn chain_paths() {
        let g = chain(2);
        assert!(g.is_path(&["e0", "e1"]).unwrap());
        assert!(!g.is_path(&["e1", "e0"]).unwrap());
        assert_eq!(g.is_path(&["x"]), Err(Error::UnknownEdge("x".into())));
        assert_eq!(g.enumerate_all_finite_paths().unwrap().len(), 6);
        assert_eq!(g.enumerate_paths(2).unwrap().len(), 1);
        assert_eq!(chain(5).enumerate_paths(5).unwrap().len(), 1);
        assert_eq!(g.sinks(), vec![VertexId::from("v2")]);
        assert!(g.is_connected_undirected());
        assert_eq!(g.longest_path().unwrap().len(), 2);
        assert!(Graph::empty().enumerate_all_finite_paths().unwrap().is_empty());
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let g = build_graph(&["a", "b"], &[("z", "a", "b"), ("m", "a", "b"), ("c", "b", "b")], &[]).unwrap();
        let ps = g.enumerate_paths(2).unwrap();
        let seqs: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
        assert_eq!(seqs, ["c c", "m c", "z c"]);
    }

    #[test]
    fn counting_matches_enumeration() {
        let g = build_graph(&["1", "2"], &[("a", "1", "1"), ("b", "1", "2"), ("c", "2", "1"), ("d", "2", "2")], &[])
            .unwrap();
        for k in 0..8 {
            assert_eq!(g.count_paths_bruteforce(k).unwrap(), BigUint::from(g.enumerate_paths(k).unwrap().len()));
        }
        assert_eq!(g.count_paths_bruteforce(3).unwrap(), BigUint::from(16u32));
        assert_eq!(g.count_paths_bruteforce(30).unwrap(), BigUint::from(1u64 << 31));
        assert_eq!(g.count_paths_bruteforce(1).unwrap(), BigUint::from(4u32));
    }

    #[test]
    fn subpath_offsets() {
        let g = chain(3);
        let p = g.path(&["e0", "e1", "e2"]).unwrap();
        assert_eq!(g.subpath(&p, 2, 1).unwrap().to_string(), "e1 e2");
        assert_eq!(g.subpath(&p, 1, 0).unwrap().to_string(), "e0");
        let q = g.path(&["e0"]).unwrap();
        assert_eq!(g.subpath(&q, 1, 1), Err(Error::IndexOutOfRange));
        assert_eq!(g.subpath(&q, 0, 0), Err(Error::IndexOutOfRange));
    }

    #[test]
    fn permutation_loops() {
        let g = two_cycle();
        let p = g.path(&["e", "f"]).unwrap();
        let l = g.loop_from_permutation(&p, &[1, 0]).unwrap().unwrap();
        assert_eq!(g.path_source(&l).unwrap(), g.path_target(&l).unwrap());
        assert_eq!(g.loop_from_permutation(&p, &[0, 1]).unwrap(), None);
        assert_eq!(g.loop_from_permutation(&p, &[0, 0]), Err(Error::InvalidPermutation));
        let c = chain(2);
        let q = c.path(&["e0", "e1"]).unwrap();
        assert!(!c.is_path(&["e1", "e0"]).unwrap());
        assert_eq!(c.loop_from_permutation(&q, &[1, 0]).unwrap(), None);
    }

    #[test]
    fn permutation_loop_three_cycle() {
        let g = build_graph(&["a", "b", "c"], &[("x", "a", "b"), ("y", "b", "c"), ("z", "c", "a")], &[]).unwrap();
        let p = g.path(&["x", "y", "z"]).unwrap();
        let l = g.loop_from_permutation(&p, &[1, 2, 0]).unwrap().unwrap();
        assert_eq!(l.to_string(), "y z x");
        assert_eq!(g.path_source(&l).unwrap(), g.path_target(&l).unwrap());
    }

    #[test]
    fn loops_and_sinks() {
        assert!(two_cycle().has_loop());
        let p7 = nilpotent_dag();
        assert!(!p7.has_loop());
        assert_eq!(p7.sinks().len(), 1);
        assert_eq!(p7.longest_path().unwrap().len(), 4);
        assert_eq!(p7.count_paths_bruteforce(2).unwrap(), BigUint::from(15u32));
        let iso = build_graph(&["a", "b"], &[], &[]).unwrap();
        assert!(!iso.is_connected_undirected());
        let single = build_graph(&["a"], &[], &[]).unwrap();
        assert_eq!(single.longest_path().unwrap(), Path::vertex("a"));
    }

    #[test]
    fn bundles_are_opaque_to_paths() {
        let g = build_graph(&["v", "w"], &[], &[("v", "w")]).unwrap();
        assert_eq!(g.enumerate_paths(1), Err(Error::InfiniteBundlePresent));
        assert_eq!(g.count_paths_bruteforce(1), Err(Error::InfiniteBundlePresent));
        assert!(g.is_connected_undirected());
        assert_eq!(g.sinks(), vec![VertexId::from("w")]);
        let looped = build_graph(&["v", "w"], &[("e", "w", "v")], &[("v", "w")]).unwrap();
        assert!(looped.has_loop());
    }

    #[test]
    fn json_and_dot() {
        let g = build_graph(&["v1", "v2"], &[("e1", "v1", "v2")], &[("v2", "v1")]).unwrap();
        let text = g.to_json();
        assert_eq!(
            text,
            r#"{"vertices":["v1","v2"],"edges":[{"id":"e1","src":"v1","dst":"v2"}],"infinite_bundles":[{"src":"v2","dst":"v1"}]}"#
        );
        assert_eq!(Graph::from_json(&text).unwrap(), g);
        let dot = g.to_dot();
        assert!(dot.contains("\"v1\" -> \"v2\" [label=\"e1\"]"));
        assert!(dot.contains("label=\"∞\""));
        assert!(matches!(Graph::from_json("{\"vertices\":[\"a\"],\"edges\":[{\"id\":\"e\",\"src\":\"a\",\"dst\":\"b\"}]}"), Err(Error::Parse(_))));
    }
}

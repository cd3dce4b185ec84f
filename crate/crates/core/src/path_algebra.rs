//! The path algebra of a finite graph: basis indexed by finite paths,
//! product by concatenation.

use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::marker::PhantomData;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extremal::search::{Catalog, DEFAULT_SEARCH_BUDGET};
use crate::graph::{EdgeId, Graph, Path, VertexId};
use crate::scalar::Scalar;

/// Dimension of an algebra, finite or not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dimension {
    Finite(BigUint),
    Infinite,
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dimension::Finite(n) => write!(f, "{n}"),
            Dimension::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for Dimension {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub(crate) fn fingerprint(graph: &Graph) -> u64 {
    let mut h = DefaultHasher::new();
    graph.to_json().hash(&mut h);
    h.finish()
}

/// A finite linear combination of basis paths.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement<S> {
    owner: u64,
    terms: BTreeMap<Path, S>,
}

impl<S: Scalar> AlgebraElement<S> {
    pub fn terms(&self) -> &BTreeMap<Path, S> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn push(&mut self, p: Path, c: S) {
        let slot = self.terms.entry(p).or_insert_with(S::zero);
        *slot = slot.clone() + c;
        self.terms.retain(|_, c| !c.is_zero());
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.owner != other.owner {
            return Err(Error::GraphMismatch);
        }
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.push(p.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = AlgebraElement { owner: self.owner, terms: BTreeMap::new() };
        for (p, x) in &self.terms {
            out.push(p.clone(), x.clone() * c.clone());
        }
        out
    }
}

impl<S: Scalar> fmt::Display for AlgebraElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_combination(f, self.terms.iter().map(|(p, c)| (p.to_string(), c)))
    }
}

/// Writes `c1 m1 + c2 m2 ...`, omitting unit coefficients; `0` when empty.
pub(crate) fn write_combination<'a, S: Scalar + 'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (String, &'a S)>,
) -> fmt::Result {
    let mut first = true;
    for (m, c) in terms {
        let (neg, abs) = if c.to_string().starts_with('-') { (true, -c.clone()) } else { (false, c.clone()) };
        match (first, neg) {
            (true, true) => f.write_str("-")?,
            (false, true) => f.write_str(" - ")?,
            (false, false) => f.write_str(" + ")?,
            (true, false) => {}
        }
        if abs.is_one() {
            write!(f, "{m}")?;
        } else {
            write!(f, "{abs} {m}")?;
        }
        first = false;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

/// `kE` for a finite graph without infinite bundles.
#[derive(Clone, Debug)]
pub struct PathAlgebra<S> {
    graph: Graph,
    owner: u64,
    _field: PhantomData<S>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PathDoc {
    Vertex { vertex: String },
    Edges(Vec<String>),
}

#[derive(Serialize, Deserialize)]
struct TermDoc {
    path: PathDoc,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct ElementDoc {
    graph: String,
    terms: Vec<TermDoc>,
}

impl<S: Scalar> PathAlgebra<S> {
    pub fn new(graph: Graph) -> Result<Self> {
        if graph.has_infinite_bundles() {
            return Err(Error::InfiniteBundlePresent);
        }
        let owner = fingerprint(&graph);
        Ok(PathAlgebra { graph, owner, _field: PhantomData })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn zero(&self) -> AlgebraElement<S> {
        AlgebraElement { owner: self.owner, terms: BTreeMap::new() }
    }

    /// `χ_p` for a path valid in the graph.
    pub fn basis(&self, p: &Path) -> Result<AlgebraElement<S>> {
        if !self.graph.contains_path(p) {
            return Err(Error::NotAPath);
        }
        let mut x = self.zero();
        x.push(p.clone(), S::one());
        Ok(x)
    }

    pub fn vertex(&self, v: &str) -> Result<AlgebraElement<S>> {
        self.basis(&Path::vertex(v))
    }

    pub fn path<T: AsRef<str>>(&self, edges: &[T]) -> Result<AlgebraElement<S>> {
        self.basis(&self.graph.path(edges)?)
    }

    pub fn combination(&self, terms: &[(S, Path)]) -> Result<AlgebraElement<S>> {
        let mut x = self.zero();
        for (c, p) in terms {
            if !self.graph.contains_path(p) {
                return Err(Error::NotAPath);
            }
            x.push(p.clone(), c.clone());
        }
        Ok(x)
    }

    fn check(&self, x: &AlgebraElement<S>) -> Result<()> {
        if x.owner == self.owner {
            Ok(())
        } else {
            Err(Error::GraphMismatch)
        }
    }

    /// `χ_p χ_q = χ_{pq}` when `t(p) = s(q)`, else zero; extended bilinearly.
    pub fn multiply(&self, x: &AlgebraElement<S>, y: &AlgebraElement<S>) -> Result<AlgebraElement<S>> {
        self.check(x)?;
        self.check(y)?;
        let mut out = self.zero();
        for (p, a) in &x.terms {
            let tp = self.graph.path_target(p)?;
            for (q, b) in &y.terms {
                if tp != self.graph.path_source(q)? {
                    continue;
                }
                let mut edges = p.edges.clone();
                edges.extend(q.edges.iter().cloned());
                out.push(Path { base: p.base.clone(), edges }, a.clone() * b.clone());
            }
        }
        Ok(out)
    }

    /// Sum of all vertex idempotents.
    pub fn unit(&self) -> AlgebraElement<S> {
        let mut x = self.zero();
        for v in self.graph.vertices() {
            x.push(Path::vertex(v.clone()), S::one());
        }
        x
    }

    pub fn is_idempotent(&self, x: &AlgebraElement<S>) -> Result<bool> {
        Ok(&self.multiply(x, x)? == x)
    }

    pub fn to_json(&self, x: &AlgebraElement<S>, graph_name: &str) -> Result<String> {
        self.check(x)?;
        let terms = x
            .terms
            .iter()
            .map(|(p, c)| TermDoc {
                path: if p.is_vertex() {
                    PathDoc::Vertex { vertex: p.base.to_string() }
                } else {
                    PathDoc::Edges(p.edges.iter().map(|e| e.to_string()).collect())
                },
                coeff: c.to_string(),
            })
            .collect();
        let doc = ElementDoc { graph: graph_name.to_owned(), terms };
        serde_json::to_string(&doc).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_json(&self, text: &str) -> Result<AlgebraElement<S>> {
        let doc: ElementDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut x = self.zero();
        for t in doc.terms {
            let p = match t.path {
                PathDoc::Vertex { vertex } => Path::vertex(vertex),
                PathDoc::Edges(es) => self.graph.path(&es)?,
            };
            if !self.graph.contains_path(&p) {
                return Err(Error::NotAPath);
            }
            x.push(p, S::parse(&t.coeff)?);
        }
        Ok(x)
    }
}

/// Paths ending at each vertex, counted over a topological order.
pub(crate) fn paths_ending_at(graph: &Graph) -> Result<Vec<BigUint>> {
    let order = graph.topological_order().ok_or(Error::HasLoop)?;
    let mut into = vec![BigUint::one(); graph.vertex_count()];
    for v in order {
        for &e in graph.out_indices(v) {
            let w = graph.raw_edges()[e].dst;
            let add = into[v].clone();
            into[w] += add;
        }
    }
    Ok(into)
}

/// `|FP(E)|` for loop-free graphs, infinite otherwise.
pub fn dimension(graph: &Graph) -> Dimension {
    if graph.has_infinite_bundles() {
        return Dimension::Infinite;
    }
    match paths_ending_at(graph) {
        Ok(v) => Dimension::Finite(v.into_iter().sum()),
        Err(_) => Dimension::Infinite,
    }
}

/// No edges, or only self-loops with no two at the same vertex.
pub fn is_commutative(graph: &Graph) -> bool {
    let mut seen = std::collections::BTreeSet::new();
    graph.edges().all(|(_, s, t)| s == t && seen.insert(s.clone()))
}

/// Compares `xy` and `yx` for all basis pairs of length at most `max_len`.
pub fn commutes_on_short_paths(graph: &Graph, max_len: usize) -> Result<bool> {
    let alg = PathAlgebra::<num_rational::BigRational>::new(graph.clone())?;
    let mut basis = Vec::new();
    for k in 0..=max_len {
        basis.extend(graph.enumerate_paths(k)?);
    }
    for p in &basis {
        for q in &basis {
            let (x, y) = (alg.basis(p)?, alg.basis(q)?);
            if alg.multiply(&x, &y)? != alg.multiply(&y, &x)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Every loop-free graph with `|FP| = d` up to isomorphism, isolated vertices
/// allowed; vertices are named `1..`.
pub fn enumerate_graphs_with_dim(d: usize, connected_only: bool) -> Result<Vec<Graph>> {
    if d > 8 {
        return Err(Error::InvalidRange(format!("dimension {d} exceeds 8")));
    }
    let max_edges = d.saturating_sub(2);
    let catalog = Catalog::build(max_edges, d.max(1), DEFAULT_SEARCH_BUDGET)?;
    let mut out = Vec::new();
    for n in 0..=max_edges {
        for g in catalog.with_edges(n) {
            let fp: u128 = g.path_counts(g.n()).iter().sum();
            let Some(isolated) = (d as u128).checked_sub(fp) else { continue };
            let isolated = isolated as usize;
            let connected = if n == 0 { isolated == 1 } else { isolated == 0 && g.is_weakly_connected() };
            if connected_only && !connected {
                continue;
            }
            out.push(with_isolated(&g.to_graph(), isolated));
        }
    }
    Ok(out)
}

fn with_isolated(g: &Graph, extra: usize) -> Graph {
    let base = g.vertex_count();
    let mut vertices = g.vertices().to_vec();
    vertices.extend((base + 1..=base + extra).map(|i| VertexId::from(i.to_string())));
    let edges: Vec<(EdgeId, usize, usize)> = g
        .raw_edges()
        .iter()
        .map(|e| (e.id.clone(), e.src, e.dst))
        .collect();
    Graph::from_indexed(vertices, edges)
}

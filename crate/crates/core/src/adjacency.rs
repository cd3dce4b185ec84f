//! Adjacency matrices over arbitrary-precision integers.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};

/// Square matrix of nonnegative integers indexed by vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MatrixDoc", into = "MatrixDoc")]
pub struct CountMatrix {
    index: Vec<VertexId>,
    rows: Vec<Vec<BigUint>>,
}

impl CountMatrix {
    pub fn new(index: Vec<VertexId>, rows: Vec<Vec<BigUint>>) -> Result<Self> {
        let n = rows.len();
        if index.len() != n {
            return Err(Error::DimensionMismatch(index.len(), n));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(r.len(), n));
        }
        Ok(CountMatrix { index, rows })
    }

    /// Matrix indexed by `1..=n`.
    pub fn from_rows<T: Into<BigUint> + Copy>(rows: &[Vec<T>]) -> Result<Self> {
        let index = (1..=rows.len()).map(|i| VertexId::from(i.to_string())).collect();
        let rows = rows.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect();
        Self::new(index, rows)
    }

    pub fn zero(index: Vec<VertexId>) -> Self {
        let n = index.len();
        CountMatrix { index, rows: vec![vec![BigUint::zero(); n]; n] }
    }

    pub fn identity(index: Vec<VertexId>) -> Self {
        let mut m = Self::zero(index);
        for i in 0..m.dim() {
            m.rows[i][i] = BigUint::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }
    pub fn index(&self) -> &[VertexId] {
        &self.index
    }
    pub fn rows(&self) -> &[Vec<BigUint>] {
        &self.rows
    }
    pub fn get(&self, i: usize, j: usize) -> &BigUint {
        &self.rows[i][j]
    }
    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(Zero::is_zero)
    }
    pub fn entry_sum(&self) -> BigUint {
        self.rows.iter().flatten().sum()
    }
}

pub fn adjacency_matrix(graph: &Graph) -> Result<CountMatrix> {
    if graph.has_infinite_bundles() {
        return Err(Error::InfiniteBundlePresent);
    }
    let mut m = CountMatrix::zero(graph.vertices().to_vec());
    for e in graph.raw_edges() {
        m.rows[e.src][e.dst] += 1u32;
    }
    Ok(m)
}

pub fn mat_mul(a: &CountMatrix, b: &CountMatrix) -> Result<CountMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let n = a.dim();
    let mut c = CountMatrix::zero(a.index.clone());
    for i in 0..n {
        for (l, x) in a.rows[i].iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for j in 0..n {
                if !b.rows[l][j].is_zero() {
                    c.rows[i][j] += x * &b.rows[l][j];
                }
            }
        }
    }
    Ok(c)
}

/// `a^k` by repeated squaring; `k = 0` gives the identity.
pub fn mat_pow(a: &CountMatrix, mut k: usize) -> CountMatrix {
    let mut acc = CountMatrix::identity(a.index.clone());
    let mut base = a.clone();
    while k > 0 {
        if k & 1 == 1 {
            acc = mat_mul(&acc, &base).expect("square");
        }
        k >>= 1;
        if k > 0 {
            base = mat_mul(&base, &base).expect("square");
        }
    }
    acc
}

/// Sum of the entries of `A(E)^k`.
pub fn count_paths_matrix(graph: &Graph, k: usize) -> Result<BigUint> {
    Ok(mat_pow(&adjacency_matrix(graph)?, k).entry_sum())
}

/// Smallest `n >= 1` with `A^n = 0`; checking up to `dim` powers suffices.
pub fn is_nilpotent(m: &CountMatrix) -> Option<usize> {
    let mut p = m.clone();
    for n in 1..=m.dim().max(1) {
        if p.is_zero() {
            return Some(n);
        }
        p = mat_mul(&p, m).expect("square");
    }
    None
}

/// `E(A)`: vertices `1..=n` and `A_ij` parallel edges `i:j:t`.
pub fn graph_from_matrix(m: &CountMatrix) -> Graph {
    let n = m.dim();
    let vertices = (1..=n).map(|i| VertexId::from(i.to_string())).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut t = BigUint::one();
            while t <= m.rows[i][j] {
                edges.push((EdgeId::from(format!("{}:{}:{}", i + 1, j + 1, t)), i, j));
                t += 1u32;
            }
        }
    }
    Graph::from_indexed(vertices, edges)
}

/// `A_l(E)`: entry `(v, w)` counts paths of length `l` from `v` to `w`,
/// obtained by walking paths rather than by multiplying matrices.
pub fn generalized_adjacency(graph: &Graph, l: usize) -> Result<CountMatrix> {
    if graph.has_infinite_bundles() {
        return Err(Error::InfiniteBundlePresent);
    }
    let n = graph.vertex_count();
    let mut m = CountMatrix::zero(graph.vertices().to_vec());
    fn walk(g: &Graph, v: usize, left: usize, hits: &mut [u64]) {
        if left == 0 {
            hits[v] += 1;
            return;
        }
        for &e in g.out_indices(v) {
            walk(g, g.raw_edges()[e].dst, left - 1, hits);
        }
    }
    for v in 0..n {
        let mut hits = vec![0u64; n];
        walk(graph, v, l, &mut hits);
        for (w, h) in hits.into_iter().enumerate() {
            m.rows[v][w] = BigUint::from(h);
        }
    }
    Ok(m)
}

#[derive(Serialize, Deserialize)]
struct MatrixDoc {
    index: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl TryFrom<MatrixDoc> for CountMatrix {
    type Error = Error;
    fn try_from(doc: MatrixDoc) -> Result<Self> {
        let rows = doc
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| x.parse::<BigUint>().map_err(|e| Error::Parse(format!("`{x}`: {e}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        CountMatrix::new(doc.index.into_iter().map(VertexId::from).collect(), rows)
    }
}

impl From<CountMatrix> for MatrixDoc {
    fn from(m: CountMatrix) -> Self {
        MatrixDoc {
            index: m.index.iter().map(|v| v.to_string()).collect(),
            rows: m
                .rows
                .iter()
                .map(|r| r.iter().map(|x| x.to_string()).collect())
                .collect(),
        }
    }
}

//! Leavitt path algebras of finite row-finite graphs, computed by rewriting
//! words over the extended graph to the normal form `p q*`.

mod pullback;
mod rewrite;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Path};
use crate::path_algebra::{fingerprint, paths_ending_at, write_combination, Dimension};
use crate::scalar::Scalar;

pub use pullback::{in_vertex_ideal, pullback_check, quotient_map, PullbackDims, PullbackReport, Witness};
pub use rewrite::{Strategy, DEFAULT_REDUCTION_BUDGET};
use rewrite::{Letter, Rules, Word};

/// Filtration degree used by the pullback check on infinite-dimensional algebras.
pub const DEFAULT_FILTRATION_DEGREE: usize = 4;

/// The monomial `p q*` with `t(p) = t(q)`; both paths are the vertex itself
/// for a vertex idempotent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LeavittMonomial {
    pub p: Path,
    pub q: Path,
}

impl LeavittMonomial {
    pub fn degree(&self) -> usize {
        self.p.len() + self.q.len()
    }
}

impl Ord for LeavittMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.p.cmp(&other.p))
            .then_with(|| self.q.cmp(&other.q))
    }
}
impl PartialOrd for LeavittMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LeavittMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_vertex() && self.q.is_vertex() {
            return write!(f, "{}", self.p.base);
        }
        let mut tokens: Vec<String> = self.p.edges.iter().map(|e| e.to_string()).collect();
        tokens.extend(self.q.edges.iter().rev().map(|e| format!("{e}*")));
        f.write_str(&tokens.join(" "))
    }
}

#[derive(Serialize, Deserialize)]
struct MonomialDoc {
    p: Vec<String>,
    q: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertex: Option<String>,
}

impl Serialize for LeavittMonomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let ids = |p: &Path| p.edges.iter().map(|e| e.to_string()).collect();
        MonomialDoc {
            p: ids(&self.p),
            q: ids(&self.q),
            vertex: (self.p.is_vertex() && self.q.is_vertex()).then(|| self.p.base.to_string()),
        }
        .serialize(s)
    }
}

/// A linear combination of normal-form monomials.
#[derive(Clone, Debug, PartialEq)]
pub struct LeavittElement<S> {
    owner: u64,
    terms: BTreeMap<LeavittMonomial, S>,
}

impl<S: Scalar> LeavittElement<S> {
    pub fn terms(&self) -> &BTreeMap<LeavittMonomial, S> {
        &self.terms
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn scale(&self, c: &S) -> Self {
        let mut terms = BTreeMap::new();
        for (m, x) in &self.terms {
            let y = x.clone() * c.clone();
            if !y.is_zero() {
                terms.insert(m.clone(), y);
            }
        }
        LeavittElement { owner: self.owner, terms }
    }
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.owner != other.owner {
            return Err(Error::GraphMismatch);
        }
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let slot = terms.entry(m.clone()).or_insert_with(S::zero);
            *slot = slot.clone() + c.clone();
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(LeavittElement { owner: self.owner, terms })
    }
}

impl<S: Scalar> fmt::Display for LeavittElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_combination(f, self.terms.iter().map(|(m, c)| (m.to_string(), c)))
    }
}

/// `L_k(E)` for a finite graph without infinite bundles.
#[derive(Clone, Debug)]
pub struct LeavittAlgebra<S> {
    graph: Graph,
    owner: u64,
    rules: Rules,
    strategy: Strategy,
    budget: usize,
    _field: PhantomData<S>,
}

impl<S: Scalar> LeavittAlgebra<S> {
    pub fn new(graph: Graph) -> Result<Self> {
        if graph.has_infinite_bundles() {
            return Err(Error::NotRowFinite);
        }
        Ok(LeavittAlgebra {
            owner: fingerprint(&graph),
            rules: Rules::new(&graph),
            graph,
            strategy: Strategy::InnermostLeftmost,
            budget: DEFAULT_REDUCTION_BUDGET,
            _field: PhantomData,
        })
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn zero(&self) -> LeavittElement<S> {
        LeavittElement { owner: self.owner, terms: BTreeMap::new() }
    }

    fn check(&self, x: &LeavittElement<S>) -> Result<()> {
        if x.owner == self.owner {
            Ok(())
        } else {
            Err(Error::GraphMismatch)
        }
    }

    fn token(&self, t: &str) -> Result<Letter> {
        let mut found = Vec::new();
        if let Ok(v) = self.graph.vertex_index(t) {
            found.push(Letter::Vertex(v));
        }
        if let Ok(e) = self.graph.edge_index(t) {
            found.push(Letter::Edge(e));
        }
        if let Some(e) = t.strip_suffix('*').and_then(|s| self.graph.edge_index(s).ok()) {
            found.push(Letter::Ghost(e));
        }
        match found.as_slice() {
            [l] => Ok(*l),
            [] => Err(Error::InvalidWord(format!("unknown token `{t}`"))),
            _ => Err(Error::InvalidWord(format!("ambiguous token `{t}`"))),
        }
    }

    /// Parses `c1 w1 + c2 w2 - ...` where each word is a space-separated
    /// sequence of vertex ids, edge ids and ghosts `e*`.
    fn parse(&self, text: &str) -> Result<Vec<(S, Word)>> {
        let mut out = Vec::new();
        let mut sign = S::one();
        let mut coeff: Option<S> = None;
        let mut word = Vec::new();
        let mut pending = false;
        let flush = |out: &mut Vec<(S, Word)>, sign: &S, coeff: &mut Option<S>, word: &mut Word| {
            if word.is_empty() {
                return Err(Error::InvalidWord(format!("empty term in `{text}`")));
            }
            let c = coeff.take().unwrap_or_else(S::one) * sign.clone();
            out.push((c, std::mem::take(word)));
            Ok(())
        };
        for t in text.split_whitespace() {
            match t {
                "+" | "-" => {
                    if pending {
                        flush(&mut out, &sign, &mut coeff, &mut word)?;
                    }
                    sign = if t == "-" { -S::one() } else { S::one() };
                    pending = false;
                }
                _ if word.is_empty() && coeff.is_none() && self.token(t).is_err() && S::parse(t).is_ok() => {
                    coeff = Some(S::parse(t)?);
                    pending = true;
                }
                _ => {
                    word.push(self.token(t)?);
                    pending = true;
                }
            }
        }
        if pending || out.is_empty() {
            flush(&mut out, &sign, &mut coeff, &mut word)?;
        }
        Ok(out)
    }

    fn word_to_monomial(&self, w: &[Letter]) -> LeavittMonomial {
        let vid = |v: usize| self.graph.vertices()[v].clone();
        let eid = |e: usize| self.graph.raw_edges()[e].id.clone();
        if let [Letter::Vertex(v)] = w {
            return LeavittMonomial { p: Path::vertex(vid(*v)), q: Path::vertex(vid(*v)) };
        }
        let split = w.iter().position(|l| matches!(l, Letter::Ghost(_))).unwrap_or(w.len());
        let edge = |l: &Letter| match l {
            Letter::Edge(e) | Letter::Ghost(e) => *e,
            Letter::Vertex(_) => unreachable!("vertices do not survive in longer words"),
        };
        let pe: Vec<usize> = w[..split].iter().map(edge).collect();
        let qe: Vec<usize> = w[split..].iter().rev().map(edge).collect();
        let apex = match (pe.last(), qe.last()) {
            (Some(&e), _) | (None, Some(&e)) => self.rules.dst(e),
            (None, None) => unreachable!("nonempty word"),
        };
        let path = |es: &[usize]| match es.first() {
            None => Path::vertex(vid(apex)),
            Some(&f) => Path { base: vid(self.rules.src(f)), edges: es.iter().map(|&e| eid(e)).collect() },
        };
        LeavittMonomial { p: path(&pe), q: path(&qe) }
    }

    fn monomial_to_word(&self, m: &LeavittMonomial) -> Result<Word> {
        if m.p.is_vertex() && m.q.is_vertex() {
            return Ok(vec![Letter::Vertex(self.graph.vertex_index(m.p.base.as_str())?)]);
        }
        let mut w = Vec::with_capacity(m.degree());
        for e in &m.p.edges {
            w.push(Letter::Edge(self.graph.edge_index(e.as_str())?));
        }
        for e in m.q.edges.iter().rev() {
            w.push(Letter::Ghost(self.graph.edge_index(e.as_str())?));
        }
        Ok(w)
    }

    fn normalize(&self, words: Vec<(S, Word)>) -> Result<LeavittElement<S>> {
        let done = self.rules.normalize(words, self.strategy, self.budget)?;
        let terms = done.into_iter().map(|(w, c)| (self.word_to_monomial(&w), c)).collect();
        Ok(LeavittElement { owner: self.owner, terms })
    }

    /// Normal form of a linear combination of words, e.g. `"e* e"` or
    /// `"2 e f* - 1/2 v"`.
    pub fn reduce(&self, text: &str) -> Result<LeavittElement<S>> {
        self.normalize(self.parse(text)?)
    }

    pub fn vertex(&self, v: &str) -> Result<LeavittElement<S>> {
        let i = self.graph.vertex_index(v)?;
        self.normalize(vec![(S::one(), vec![Letter::Vertex(i)])])
    }

    pub fn edge(&self, e: &str) -> Result<LeavittElement<S>> {
        let i = self.graph.edge_index(e)?;
        self.normalize(vec![(S::one(), vec![Letter::Edge(i)])])
    }

    pub fn ghost(&self, e: &str) -> Result<LeavittElement<S>> {
        let i = self.graph.edge_index(e)?;
        self.normalize(vec![(S::one(), vec![Letter::Ghost(i)])])
    }

    pub fn monomial(&self, m: &LeavittMonomial) -> Result<LeavittElement<S>> {
        self.normalize(vec![(S::one(), self.monomial_to_word(m)?)])
    }

    pub fn unit(&self) -> LeavittElement<S> {
        let words = (0..self.graph.vertex_count()).map(|v| (S::one(), vec![Letter::Vertex(v)])).collect();
        self.normalize(words).expect("vertices are normal")
    }

    /// Vertices, edges and ghosts, each as an element.
    pub fn generators(&self) -> Vec<LeavittElement<S>> {
        let n = self.graph.vertex_count();
        let m = self.graph.edge_count();
        let letters = (0..n)
            .map(Letter::Vertex)
            .chain((0..m).map(Letter::Edge))
            .chain((0..m).map(Letter::Ghost));
        letters
            .map(|l| self.normalize(vec![(S::one(), vec![l])]).expect("letters are normal"))
            .collect()
    }

    pub fn multiply(&self, x: &LeavittElement<S>, y: &LeavittElement<S>) -> Result<LeavittElement<S>> {
        self.check(x)?;
        self.check(y)?;
        let mut words = Vec::new();
        for (a, c) in &x.terms {
            let wa = self.monomial_to_word(a)?;
            for (b, d) in &y.terms {
                let mut w = wa.clone();
                w.extend(self.monomial_to_word(b)?);
                words.push((c.clone() * d.clone(), w));
            }
        }
        self.normalize(words)
    }

    /// Normal-form monomials of degree at most `max_degree`.
    pub fn basis_up_to(&self, max_degree: usize) -> Result<Vec<LeavittMonomial>> {
        let mut by_target: Vec<Vec<Path>> = vec![Vec::new(); self.graph.vertex_count()];
        for k in 0..=max_degree {
            for p in self.graph.enumerate_paths(k)? {
                let t = self.graph.vertex_index(self.graph.path_target(&p)?.as_str())?;
                by_target[t].push(p);
            }
        }
        let mut out = Vec::new();
        for paths in &by_target {
            for p in paths {
                for q in paths {
                    if p.len() + q.len() > max_degree {
                        continue;
                    }
                    if let (Some(a), Some(b)) = (p.edges.last(), q.edges.last()) {
                        let e = self.graph.edge_index(a.as_str())?;
                        if a == b && self.rules.gamma(self.rules.src(e)) == Some(e) {
                            continue;
                        }
                    }
                    out.push(LeavittMonomial { p: p.clone(), q: q.clone() });
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// The whole normal-form basis of a loop-free graph.
    pub fn basis(&self) -> Result<Vec<LeavittMonomial>> {
        if self.graph.has_loop() {
            return Err(Error::HasLoop);
        }
        self.basis_up_to(2 * self.graph.vertex_count().saturating_sub(1))
    }

    /// `Σ_u P_u²` over sinks `u`, with `P_u` the number of paths ending at `u`;
    /// infinite when the graph has a loop.
    pub fn dimension_if_finite(&self) -> Dimension {
        dimension_if_finite(&self.graph)
    }
}

pub fn dimension_if_finite(graph: &Graph) -> Dimension {
    let Ok(ending) = paths_ending_at(graph) else {
        return Dimension::Infinite;
    };
    let sinks = graph.sinks();
    let total: BigUint = sinks
        .iter()
        .map(|u| {
            let p = &ending[graph.vertex_index(u.as_str()).expect("sink is a vertex")];
            p * p
        })
        .sum();
    Dimension::Finite(total)
}

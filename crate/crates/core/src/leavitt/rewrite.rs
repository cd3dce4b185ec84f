//! Pairwise rewriting rules on words over the extended graph.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::Scalar;

/// A letter of a word in the extended graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Letter {
    Vertex(usize),
    Edge(usize),
    Ghost(usize),
}

pub(crate) type Word = Vec<Letter>;

/// Which redex to contract next.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    InnermostLeftmost,
    /// A uniformly random redex at every step.
    Random(u64),
}

pub const DEFAULT_REDUCTION_BUDGET: usize = 1_000_000;

/// Source/target tables and the distinguished edge of every regular vertex.
#[derive(Clone, Debug)]
pub(crate) struct Rules {
    src: Vec<usize>,
    dst: Vec<usize>,
    out: Vec<Vec<usize>>,
    gamma: Vec<Option<usize>>,
}

impl Rules {
    pub(crate) fn new(graph: &Graph) -> Self {
        let n = graph.vertex_count();
        let out: Vec<Vec<usize>> = (0..n).map(|v| graph.out_indices(v).to_vec()).collect();
        Rules {
            src: graph.raw_edges().iter().map(|e| e.src).collect(),
            dst: graph.raw_edges().iter().map(|e| e.dst).collect(),
            gamma: out.iter().map(|es| es.last().copied()).collect(),
            out,
        }
    }

    pub(crate) fn gamma(&self, v: usize) -> Option<usize> {
        self.gamma[v]
    }
    pub(crate) fn src(&self, e: usize) -> usize {
        self.src[e]
    }
    pub(crate) fn dst(&self, e: usize) -> usize {
        self.dst[e]
    }

    /// Replacement for the adjacent pair `a b`, or `None` when it is stable.
    /// An empty replacement list means the pair vanishes.
    fn contract(&self, a: Letter, b: Letter) -> Option<Vec<(i64, Word)>> {
        use Letter::*;
        let keep = |ok: bool, l: Letter| if ok { vec![(1, vec![l])] } else { Vec::new() };
        Some(match (a, b) {
            (Vertex(u), Vertex(v)) => keep(u == v, a),
            (Vertex(u), Edge(e)) => keep(self.src[e] == u, b),
            (Vertex(u), Ghost(e)) => keep(self.dst[e] == u, b),
            (Edge(e), Vertex(u)) => keep(self.dst[e] == u, a),
            (Ghost(e), Vertex(u)) => keep(self.src[e] == u, a),
            (Ghost(e), Edge(f)) => keep(e == f, Vertex(self.dst[e])),
            (Edge(e), Edge(f)) if self.dst[e] == self.src[f] => return None,
            (Ghost(e), Ghost(f)) if self.src[e] == self.dst[f] => return None,
            (Edge(e), Ghost(f)) if self.dst[e] == self.dst[f] => {
                let v = self.src[e];
                if e != f || self.gamma[v] != Some(e) {
                    return None;
                }
                let mut rep = vec![(1, vec![Vertex(v)])];
                rep.extend(self.out[v].iter().filter(|&&g| g != e).map(|&g| (-1, vec![Edge(g), Ghost(g)])));
                rep
            }
            _ => Vec::new(),
        })
    }

    fn redexes(&self, w: &[Letter]) -> impl Iterator<Item = usize> + '_ {
        let w = w.to_vec();
        (0..w.len().saturating_sub(1)).filter(move |&i| self.contract(w[i], w[i + 1]).is_some())
    }

    /// Rewrites a linear combination of words to normal form.
    pub(crate) fn normalize<S: Scalar>(
        &self,
        input: Vec<(S, Word)>,
        strategy: Strategy,
        budget: usize,
    ) -> Result<BTreeMap<Word, S>> {
        let mut rng = match strategy {
            Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            Strategy::InnermostLeftmost => None,
        };
        let mut work = input;
        let mut done: BTreeMap<Word, S> = BTreeMap::new();
        let mut steps = 0usize;
        while let Some((c, w)) = work.pop() {
            if c.is_zero() {
                continue;
            }
            let at = match rng.as_mut() {
                None => self.redexes(&w).next(),
                Some(rng) => {
                    let all: Vec<usize> = self.redexes(&w).collect();
                    (!all.is_empty()).then(|| all[rng.gen_range(0..all.len())])
                }
            };
            let Some(i) = at else {
                let slot = done.entry(w).or_insert_with(S::zero);
                *slot = slot.clone() + c;
                continue;
            };
            steps += 1;
            if steps > budget {
                return Err(Error::ReductionBudgetExceeded(budget));
            }
            for (k, rep) in self.contract(w[i], w[i + 1]).expect("redex") {
                let mut next = w[..i].to_vec();
                next.extend(rep);
                next.extend_from_slice(&w[i + 2..]);
                work.push((c.clone() * S::from_i64(k), next));
            }
        }
        done.retain(|_, c| !c.is_zero());
        Ok(done)
    }
}

//! Quotient maps onto admissible subgraphs and the pullback check for a
//! union of two graphs over their intersection.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use super::rewrite::Letter;
use super::{LeavittAlgebra, LeavittElement, LeavittMonomial};
use crate::error::{Error, Result};
use crate::linalg::rank;
use crate::scalar::Scalar;
use crate::structure::{intersection, is_admissible_inclusion, union, GraphHom};

fn require_admissible<S: Scalar>(big: &LeavittAlgebra<S>, small: &LeavittAlgebra<S>) -> Result<()> {
    match is_admissible_inclusion(small.graph(), big.graph(), &GraphHom::inclusion(small.graph())) {
        Ok(true) => Ok(()),
        _ => Err(Error::NotAdmissible),
    }
}

/// `L(F) → L(E)` for an admissible subgraph `E ⊆ F` (same ids): letters of
/// `E` map to themselves, everything else to zero.
pub fn quotient_map<S: Scalar>(
    big: &LeavittAlgebra<S>,
    small: &LeavittAlgebra<S>,
    x: &LeavittElement<S>,
) -> Result<LeavittElement<S>> {
    big.check(x)?;
    require_admissible(big, small)?;
    let mut words = Vec::new();
    'terms: for (m, c) in &x.terms {
        let mut w = Vec::new();
        for l in big.monomial_to_word(m)? {
            let mapped = match l {
                Letter::Vertex(v) => small.graph.vertex_index(big.graph.vertices()[v].as_str()).map(Letter::Vertex),
                Letter::Edge(e) => small.graph.edge_index(big.graph.raw_edges()[e].id.as_str()).map(Letter::Edge),
                Letter::Ghost(e) => small.graph.edge_index(big.graph.raw_edges()[e].id.as_str()).map(Letter::Ghost),
            };
            match mapped {
                Ok(l) => w.push(l),
                Err(_) => continue 'terms,
            }
        }
        words.push((c.clone(), w));
    }
    small.normalize(words)
}

/// Membership in the ideal generated by the vertices outside `E`.
pub fn in_vertex_ideal<S: Scalar>(
    big: &LeavittAlgebra<S>,
    small: &LeavittAlgebra<S>,
    x: &LeavittElement<S>,
) -> Result<bool> {
    Ok(quotient_map(big, small, x)?.is_zero())
}

fn decimal<S: Serializer>(n: &usize, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(n)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PullbackDims {
    #[serde(serialize_with = "decimal")]
    pub union: usize,
    #[serde(serialize_with = "decimal")]
    pub left: usize,
    #[serde(serialize_with = "decimal")]
    pub right: usize,
    #[serde(serialize_with = "decimal")]
    pub intersection: usize,
    #[serde(serialize_with = "decimal")]
    pub pullback: usize,
}

/// A generator of the union algebra with its images in the two pieces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub probe: String,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PullbackReport {
    pub compatible: bool,
    pub dims: Option<PullbackDims>,
    pub filtration_degree: usize,
    pub injective: bool,
    pub surjective: bool,
    /// Exact when `dims` is present; otherwise evidence on the filtration.
    pub passed: bool,
    pub witnesses: Vec<Witness>,
}

fn coordinates<S: Scalar>(xs: &[&LeavittElement<S>]) -> Vec<Vec<S>> {
    let mut index: BTreeMap<&LeavittMonomial, usize> = BTreeMap::new();
    for x in xs {
        for m in x.terms.keys() {
            let n = index.len();
            index.entry(m).or_insert(n);
        }
    }
    xs.iter()
        .map(|x| {
            let mut row = vec![S::zero(); index.len()];
            for (m, v) in &x.terms {
                row[index[m]] = v.clone();
            }
            row
        })
        .collect()
}

/// Rank of the pairs `(a_i, b_i)` inside `L(F1) ⊕ L(F2)`.
fn pair_rank<S: Scalar>(pairs: &[(LeavittElement<S>, LeavittElement<S>)]) -> usize {
    let left = coordinates(&pairs.iter().map(|p| &p.0).collect::<Vec<_>>());
    let right = coordinates(&pairs.iter().map(|p| &p.1).collect::<Vec<_>>());
    let rows: Vec<Vec<S>> = left
        .into_iter()
        .zip(right)
        .map(|(mut a, b)| {
            a.extend(b);
            a
        })
        .collect();
    rank(&rows)
}

/// Checks that `L(F1 ∪ F2)` maps onto the pullback of
/// `L(F1) → L(F1 ∩ F2) ← L(F2)`: exactly by dimension count when everything
/// is finite-dimensional, otherwise on monomials of degree at most `degree`.
pub fn pullback_check<S: Scalar>(
    f1: &crate::graph::Graph,
    f2: &crate::graph::Graph,
    degree: usize,
) -> Result<PullbackReport> {
    if f1.has_infinite_bundles() || f2.has_infinite_bundles() {
        return Err(Error::NotRowFinite);
    }
    if !crate::structure::is_admissible_intersection(f1, f2)? {
        return Err(Error::NotAdmissibleIntersection);
    }
    let lu = LeavittAlgebra::<S>::new(union(f1, f2)?)?;
    let l1 = LeavittAlgebra::<S>::new(f1.clone())?;
    let l2 = LeavittAlgebra::<S>::new(f2.clone())?;
    let le = LeavittAlgebra::<S>::new(intersection(f1, f2)?)?;
    let finite = !lu.graph.has_loop();
    let probes = if finite { lu.basis()? } else { lu.basis_up_to(degree)? };

    let mut compatible = true;
    let mut pairs = Vec::with_capacity(probes.len());
    for m in &probes {
        let x = lu.monomial(m)?;
        let a = quotient_map(&lu, &l1, &x)?;
        let b = quotient_map(&lu, &l2, &x)?;
        compatible &= quotient_map(&l1, &le, &a)? == quotient_map(&l2, &le, &b)?;
        pairs.push((a, b));
    }
    let injective = pair_rank(&pairs) == probes.len();

    let mut witnesses = Vec::new();
    let mut surjective = true;
    // the pullback is generated by (x, x), (x, 0) and (0, x) for letters x
    let lift = |l: &LeavittAlgebra<S>, token: &str| l.reduce(token).unwrap_or_else(|_| l.zero());
    for g in lu.generators() {
        let token = g.to_string();
        let a = quotient_map(&lu, &l1, &g)?;
        let b = quotient_map(&lu, &l2, &g)?;
        surjective &= a == lift(&l1, &token) && b == lift(&l2, &token);
        witnesses.push(Witness { probe: token, left: a.to_string(), right: b.to_string() });
    }

    let dims = if finite {
        let b1 = l1.basis()?;
        let b2 = l2.basis()?;
        let mut images = Vec::with_capacity(b1.len() + b2.len());
        for m in &b1 {
            images.push(quotient_map(&l1, &le, &l1.monomial(m)?)?);
        }
        for m in &b2 {
            images.push(quotient_map(&l2, &le, &l2.monomial(m)?)?.scale(&-S::one()));
        }
        let r = rank(&coordinates(&images.iter().collect::<Vec<_>>()));
        let pullback = b1.len() + b2.len() - r;
        surjective = injective && probes.len() == pullback;
        Some(PullbackDims {
            union: probes.len(),
            left: b1.len(),
            right: b2.len(),
            intersection: le.basis()?.len(),
            pullback,
        })
    } else {
        None
    };
    Ok(PullbackReport {
        compatible,
        dims,
        filtration_degree: degree,
        injective,
        surjective,
        passed: compatible && injective && surjective,
        witnesses,
    })
}

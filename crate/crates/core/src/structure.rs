//! Hereditary and saturated vertex sets, homomorphisms, admissible
//! inclusions, intersections and unions, and the extended graph.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};

/// Power-set enumeration refuses graphs with more vertices than this.
pub const SUBSET_VERTEX_CAP: usize = 20;

/// A set of vertices of some graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSubset(BTreeSet<VertexId>);

impl VertexSubset {
    pub fn new<I, V>(graph: &Graph, members: I) -> Result<Self>
    where
        I: IntoIterator<Item = V>,
        V: Into<VertexId>,
    {
        let set: BTreeSet<VertexId> = members.into_iter().map(Into::into).collect();
        if let Some(v) = set.iter().find(|v| !graph.has_vertex(v.as_str())) {
            return Err(Error::UnknownVertex(v.to_string()));
        }
        Ok(VertexSubset(set))
    }

    pub fn empty() -> Self {
        VertexSubset(BTreeSet::new())
    }
    pub fn all(graph: &Graph) -> Self {
        VertexSubset(graph.vertices().iter().cloned().collect())
    }
    pub fn contains(&self, v: &str) -> bool {
        self.0.contains(v)
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    pub fn iter(&self) -> impl Iterator<Item = &VertexId> {
        self.0.iter()
    }
    pub fn names(&self) -> Vec<String> {
        self.0.iter().map(|v| v.to_string()).collect()
    }

    fn mask(&self, graph: &Graph) -> Vec<bool> {
        graph.vertices().iter().map(|v| self.0.contains(v)).collect()
    }
}

/// Sources and targets of edges and bundles, as index pairs.
fn links(graph: &Graph) -> impl Iterator<Item = (usize, usize)> + '_ {
    graph
        .raw_edges()
        .iter()
        .map(|e| (e.src, e.dst))
        .chain(graph.raw_bundles().iter().copied())
}

fn hereditary_mask(graph: &Graph, h: &[bool]) -> bool {
    links(graph).all(|(s, t)| !h[s] || h[t])
}

fn saturated_mask(graph: &Graph, h: &[bool]) -> bool {
    let n = graph.vertex_count();
    let mut emits = vec![false; n];
    let mut escapes = vec![false; n];
    for e in graph.raw_edges() {
        emits[e.src] = true;
        escapes[e.src] |= !h[e.dst];
    }
    let infinite: BTreeSet<usize> = graph.raw_bundles().iter().map(|b| b.0).collect();
    (0..n).all(|v| h[v] || infinite.contains(&v) || !emits[v] || escapes[v])
}

/// Every edge or bundle leaving `H` ends in `H`.
pub fn is_hereditary(graph: &Graph, h: &VertexSubset) -> bool {
    hereditary_mask(graph, &h.mask(graph))
}

/// No regular vertex outside `H` sends all its edges into `H`.
pub fn is_saturated(graph: &Graph, h: &VertexSubset) -> bool {
    saturated_mask(graph, &h.mask(graph))
}

fn subsets_where(graph: &Graph, keep: impl Fn(&[bool]) -> bool) -> Result<Vec<VertexSubset>> {
    let n = graph.vertex_count();
    if n > SUBSET_VERTEX_CAP {
        return Err(Error::TooManyVertices(n, SUBSET_VERTEX_CAP));
    }
    let mut found: Vec<(usize, Vec<usize>, VertexSubset)> = Vec::new();
    for bits in 0u32..(1u32 << n) {
        let mask: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
        if keep(&mask) {
            let idx: Vec<usize> = (0..n).filter(|&i| mask[i]).collect();
            let set = idx.iter().map(|&i| graph.vertices()[i].clone()).collect();
            found.push((idx.len(), idx, VertexSubset(set)));
        }
    }
    found.sort();
    Ok(found.into_iter().map(|(_, _, s)| s).collect())
}

/// All hereditary subsets, by size then vertex order.
pub fn hereditary_subsets(graph: &Graph) -> Result<Vec<VertexSubset>> {
    subsets_where(graph, |m| hereditary_mask(graph, m))
}

pub fn saturated_subsets(graph: &Graph) -> Result<Vec<VertexSubset>> {
    subsets_where(graph, |m| saturated_mask(graph, m))
}

/// `E^0 \ H` with every edge whose target lies in `H` removed.
pub fn subgraph_from_hereditary(graph: &Graph, h: &VertexSubset) -> Result<Graph> {
    if !is_hereditary(graph, h) {
        return Err(Error::NotHereditary);
    }
    let vertices = graph
        .vertices()
        .iter()
        .filter(|v| !h.contains(v.as_str()))
        .cloned()
        .collect();
    let edges = graph
        .edges()
        .filter(|(_, _, t)| !h.contains(t.as_str()))
        .map(|(e, s, t)| (e.clone(), s.clone(), t.clone()))
        .collect();
    let bundles = graph
        .infinite_bundles()
        .filter(|(_, t)| !h.contains(t.as_str()))
        .map(|(s, t)| (s.clone(), t.clone()))
        .collect();
    Graph::validated(vertices, edges, bundles, true)
}

/// Subgraphs obtained from hereditary and saturated sets, paired with the
/// removed set; the empty set yields the whole graph.
pub fn admissible_subgraphs(graph: &Graph) -> Result<Vec<(VertexSubset, Graph)>> {
    subsets_where(graph, |m| hereditary_mask(graph, m) && saturated_mask(graph, m))?
        .into_iter()
        .map(|h| {
            let g = subgraph_from_hereditary(graph, &h)?;
            Ok((h, g))
        })
        .collect()
}

/// Vertex map and edge map between two graphs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphHom {
    pub f0: BTreeMap<VertexId, VertexId>,
    pub f1: BTreeMap<EdgeId, EdgeId>,
}

impl GraphHom {
    /// The identity on ids, for a graph sitting inside another.
    pub fn inclusion(sub: &Graph) -> Self {
        GraphHom {
            f0: sub.vertices().iter().map(|v| (v.clone(), v.clone())).collect(),
            f1: sub.edge_ids().map(|e| (e.clone(), e.clone())).collect(),
        }
    }
}

fn check_total(e: &Graph, hom: &GraphHom) -> Result<()> {
    if let Some(v) = e.vertices().iter().find(|v| !hom.f0.contains_key(*v)) {
        return Err(Error::PartialMap(v.to_string()));
    }
    if let Some(x) = e.edge_ids().find(|x| !hom.f1.contains_key(*x)) {
        return Err(Error::PartialMap(x.to_string()));
    }
    Ok(())
}

fn bundle_set(g: &Graph) -> BTreeSet<(VertexId, VertexId)> {
    g.infinite_bundles().map(|(s, t)| (s.clone(), t.clone())).collect()
}

/// `s_F f^1 = f^0 s_E` and `t_F f^1 = f^0 t_E`; bundles must map to bundles.
pub fn is_graph_homomorphism(e: &Graph, f: &Graph, hom: &GraphHom) -> Result<bool> {
    check_total(e, hom)?;
    if hom.f0.values().any(|v| !f.has_vertex(v.as_str())) {
        return Ok(false);
    }
    for (x, s, t) in e.edges() {
        let y = &hom.f1[x];
        let (Ok(fs), Ok(ft)) = (f.source(y.as_str()), f.target(y.as_str())) else {
            return Ok(false);
        };
        if fs != &hom.f0[s] || ft != &hom.f0[t] {
            return Ok(false);
        }
    }
    let fb = bundle_set(f);
    Ok(e
        .infinite_bundles()
        .all(|(s, t)| fb.contains(&(hom.f0[s].clone(), hom.f0[t].clone()))))
}

/// Injective homomorphism whose missing vertices form a hereditary saturated
/// set and whose image holds exactly the edges (and bundles) ending in it.
pub fn is_admissible_inclusion(e: &Graph, f: &Graph, hom: &GraphHom) -> Result<bool> {
    if !is_graph_homomorphism(e, f, hom)? {
        return Err(Error::NotHomomorphism);
    }
    let image0: BTreeSet<&VertexId> = e.vertices().iter().map(|v| &hom.f0[v]).collect();
    let image1: BTreeSet<&EdgeId> = e.edge_ids().map(|x| &hom.f1[x]).collect();
    if image0.len() != e.vertex_count() || image1.len() != e.edge_count() {
        return Err(Error::NotInjective);
    }
    let missing = VertexSubset(
        f.vertices()
            .iter()
            .filter(|v| !image0.contains(v))
            .cloned()
            .collect(),
    );
    if !is_hereditary(f, &missing) || !is_saturated(f, &missing) {
        return Ok(false);
    }
    let into_image: BTreeSet<&EdgeId> = f
        .edges()
        .filter(|(_, _, t)| image0.contains(t))
        .map(|(x, _, _)| x)
        .collect();
    let bundles_in: BTreeSet<(VertexId, VertexId)> = bundle_set(f)
        .into_iter()
        .filter(|(_, t)| image0.contains(t))
        .collect();
    let bundle_image: BTreeSet<(VertexId, VertexId)> = e
        .infinite_bundles()
        .map(|(s, t)| (hom.f0[s].clone(), hom.f0[t].clone()))
        .collect();
    Ok(into_image == image1 && bundles_in == bundle_image)
}

fn check_overlap(f: &Graph, g: &Graph) -> Result<()> {
    for (x, s, t) in f.edges() {
        if g.has_edge(x.as_str()) {
            let same = g.source(x.as_str())? == s && g.target(x.as_str())? == t;
            if !same {
                return Err(Error::IncompatibleOverlap(x.to_string()));
            }
        }
    }
    Ok(())
}

/// Componentwise intersection; shared edges must have equal endpoints.
pub fn intersection(f: &Graph, g: &Graph) -> Result<Graph> {
    check_overlap(f, g)?;
    let vertices = f
        .vertices()
        .iter()
        .filter(|v| g.has_vertex(v.as_str()))
        .cloned()
        .collect();
    let edges = f
        .edges()
        .filter(|(x, _, _)| g.has_edge(x.as_str()))
        .map(|(x, s, t)| (x.clone(), s.clone(), t.clone()))
        .collect();
    let gb = bundle_set(g);
    let bundles = f
        .infinite_bundles()
        .map(|(s, t)| (s.clone(), t.clone()))
        .filter(|b| gb.contains(b))
        .collect();
    Graph::validated(vertices, edges, bundles, true)
}

/// Componentwise union; `f`'s items first, then the new ones from `g`.
pub fn union(f: &Graph, g: &Graph) -> Result<Graph> {
    check_overlap(f, g)?;
    let mut vertices = f.vertices().to_vec();
    vertices.extend(g.vertices().iter().filter(|v| !f.has_vertex(v.as_str())).cloned());
    let mut edges: Vec<_> = f.edges().map(|(x, s, t)| (x.clone(), s.clone(), t.clone())).collect();
    edges.extend(
        g.edges()
            .filter(|(x, _, _)| !f.has_edge(x.as_str()))
            .map(|(x, s, t)| (x.clone(), s.clone(), t.clone())),
    );
    let bundles = f
        .infinite_bundles()
        .chain(g.infinite_bundles())
        .map(|(s, t)| (s.clone(), t.clone()))
        .collect();
    Graph::validated(vertices, edges, bundles, true)
}

/// Both inclusions of `F ∩ G` are admissible.
pub fn is_admissible_intersection(f: &Graph, g: &Graph) -> Result<bool> {
    let e = intersection(f, g)?;
    let hom = GraphHom::inclusion(&e);
    Ok(is_admissible_inclusion(&e, f, &hom)? && is_admissible_inclusion(&e, g, &hom)?)
}

/// Both inclusions into `F ∪ G` are admissible.
pub fn is_admissible_union(f: &Graph, g: &Graph) -> Result<bool> {
    let u = union(f, g)?;
    Ok(is_admissible_inclusion(f, &u, &GraphHom::inclusion(f))?
        && is_admissible_inclusion(g, &u, &GraphHom::inclusion(g))?)
}

/// Ghost id of an edge.
pub fn ghost_id(e: &EdgeId) -> EdgeId {
    EdgeId::from(format!("{e}*"))
}

/// Same vertices; every edge `e` gains a reversed ghost `e*`.
pub fn extended_graph(e: &Graph) -> Result<Graph> {
    if e.has_infinite_bundles() {
        return Err(Error::InfiniteBundlePresent);
    }
    let mut edges: Vec<_> = e.edges().map(|(x, s, t)| (x.clone(), s.clone(), t.clone())).collect();
    for (x, s, t) in e.edges() {
        let ghost = ghost_id(x);
        if e.has_edge(ghost.as_str()) {
            return Err(Error::StarIdCollision(ghost.to_string()));
        }
        edges.push((ghost, t.clone(), s.clone()));
    }
    Graph::validated(e.vertices().to_vec(), edges, Vec::new(), true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    fn set(g: &Graph, vs: &[&str]) -> VertexSubset {
        VertexSubset::new(g, vs.iter().copied()).unwrap()
    }

    fn mixed_three() -> Graph {
        build_graph(
            &["p", "v", "w"],
            &[("a", "p", "p"), ("b", "p", "w"), ("c", "p", "w"), ("d", "p", "v"), ("l", "w", "w"), ("f", "v", "w")],
            &[],
        )
        .unwrap()
    }

    #[test]
    fn mixed_three_subsets() {
        let g = mixed_three();
        assert!(is_hereditary(&g, &set(&g, &["w"])));
        assert!(!is_hereditary(&g, &set(&g, &["v"])));
        let her: Vec<Vec<String>> = hereditary_subsets(&g).unwrap().iter().map(|s| s.names()).collect();
        assert_eq!(her, vec![vec![], vec!["w"], vec!["v", "w"], vec!["p", "v", "w"]]);
        let sat: BTreeSet<Vec<String>> = saturated_subsets(&g).unwrap().iter().map(|s| s.names()).collect();
        let expected: BTreeSet<Vec<String>> = [
            vec![],
            vec!["p"],
            vec!["v"],
            vec!["p", "v"],
            vec!["v", "w"],
            vec!["p", "v", "w"],
        ]
        .into_iter()
        .map(|v| v.into_iter().map(String::from).collect())
        .collect();
        assert_eq!(sat, expected);
    }

    #[test]
    fn saturation_with_bundles() {
        let single = build_graph(&["v", "w"], &[("e", "v", "w")], &[]).unwrap();
        assert!(!is_saturated(&single, &set(&single, &["w"])));
        assert!(is_hereditary(&single, &set(&single, &["w"])));
        let inf = build_graph(&["v", "w"], &[], &[("v", "w")]).unwrap();
        assert!(is_saturated(&inf, &set(&inf, &["w"])));
        assert!(is_hereditary(&inf, &set(&inf, &["w"])));
        assert!(!is_hereditary(&inf, &set(&inf, &["v"])));
        let edgeless = build_graph(&["a", "b"], &[], &[]).unwrap();
        assert_eq!(hereditary_subsets(&edgeless).unwrap().len(), 4);
        assert_eq!(saturated_subsets(&edgeless).unwrap().len(), 4);
    }

    #[test]
    fn hereditary_subgraphs() {
        let g = build_graph(&["v", "w"], &[("e", "v", "v"), ("g", "v", "w")], &[]).unwrap();
        let sub = subgraph_from_hereditary(&g, &set(&g, &["w"])).unwrap();
        assert_eq!(sub, build_graph(&["v"], &[("e", "v", "v")], &[]).unwrap());
        assert_eq!(subgraph_from_hereditary(&g, &VertexSubset::empty()).unwrap(), g);
        assert_eq!(subgraph_from_hereditary(&g, &VertexSubset::all(&g)).unwrap().vertex_count(), 0);
        assert_eq!(subgraph_from_hereditary(&g, &set(&g, &["v"])), Err(Error::NotHereditary));
    }

    #[test]
    fn admissible_counts() {
        let p19 = build_graph(
            &["v1", "v2", "v3"],
            &[("l", "v1", "v1"), ("a", "v1", "v2"), ("b", "v1", "v3")],
            &[],
        )
        .unwrap();
        let proper = |g: &Graph| {
            admissible_subgraphs(g)
                .unwrap()
                .into_iter()
                .filter(|(h, _)| !h.is_empty() && h.len() < g.vertex_count())
                .count()
        };
        assert_eq!(proper(&p19), 3);
        let p24 = build_graph(
            &["v1", "v2", "v3", "v4"],
            &[
                ("l1", "v1", "v1"),
                ("l2", "v2", "v2"),
                ("a", "v1", "v2"),
                ("b", "v1", "v3"),
                ("c", "v1", "v4"),
                ("d", "v2", "v3"),
                ("e", "v2", "v4"),
            ],
            &[],
        )
        .unwrap();
        assert_eq!(proper(&p24), 4);
        let one = build_graph(&["v"], &[], &[]).unwrap();
        assert_eq!(admissible_subgraphs(&one).unwrap().len(), 2);
    }

    #[test]
    fn homomorphisms() {
        let e = build_graph(&["x"], &[("e", "x", "x"), ("f", "x", "x")], &[]).unwrap();
        let f = build_graph(&["y"], &[("u", "y", "y")], &[]).unwrap();
        let hom = GraphHom {
            f0: [("x".into(), "y".into())].into_iter().collect(),
            f1: [("e".into(), "u".into()), ("f".into(), "u".into())].into_iter().collect(),
        };
        assert!(is_graph_homomorphism(&e, &f, &hom).unwrap());
        assert!(is_graph_homomorphism(&e, &e, &GraphHom::inclusion(&e)).unwrap());
        let chain = build_graph(&["a", "b"], &[("g", "a", "b")], &[]).unwrap();
        let bad = GraphHom {
            f0: [("a".into(), "b".into()), ("b".into(), "b".into())].into_iter().collect(),
            f1: [("g".into(), "g".into())].into_iter().collect(),
        };
        assert!(!is_graph_homomorphism(&chain, &chain, &bad).unwrap());
        assert_eq!(
            is_graph_homomorphism(&chain, &chain, &GraphHom::default()),
            Err(Error::PartialMap("a".into()))
        );
    }

    #[test]
    fn admissible_inclusions() {
        let lp = build_graph(&["v"], &[("e", "v", "v")], &[]).unwrap();
        let exit = build_graph(&["v", "w"], &[("e", "v", "v"), ("g", "v", "w")], &[]).unwrap();
        let incoming = build_graph(&["v", "w"], &[("e", "v", "v"), ("g", "w", "v")], &[]).unwrap();
        let inc = GraphHom::inclusion(&lp);
        assert!(is_admissible_inclusion(&lp, &exit, &inc).unwrap());
        assert!(!is_admissible_inclusion(&lp, &incoming, &inc).unwrap());
        let one = build_graph(&["v", "w"], &[("e1", "v", "w")], &[]).unwrap();
        let two = build_graph(&["v", "w"], &[("e1", "v", "w"), ("e2", "v", "w")], &[]).unwrap();
        assert!(!is_admissible_inclusion(&one, &two, &GraphHom::inclusion(&one)).unwrap());
        let collapse = GraphHom {
            f0: [("v".into(), "v".into()), ("w".into(), "v".into())].into_iter().collect(),
            f1: [("e1".into(), "e".into())].into_iter().collect(),
        };
        assert_eq!(is_admissible_inclusion(&one, &lp, &collapse), Err(Error::NotInjective));
        let wrong = GraphHom::inclusion(&one);
        assert_eq!(is_admissible_inclusion(&one, &incoming, &wrong), Err(Error::NotHomomorphism));
    }

    #[test]
    fn intersections_and_unions() {
        let f = build_graph(&["v", "w1"], &[("e", "v", "v"), ("g1", "v", "w1")], &[]).unwrap();
        let g = build_graph(&["v", "w2"], &[("e", "v", "v"), ("g2", "v", "w2")], &[]).unwrap();
        assert_eq!(intersection(&f, &g).unwrap(), build_graph(&["v"], &[("e", "v", "v")], &[]).unwrap());
        assert!(is_admissible_intersection(&f, &g).unwrap());
        assert_eq!(intersection(&f, &f).unwrap(), f);
        assert_eq!(union(&f, &f).unwrap(), f);

        let b1 = build_graph(&["v", "w1"], &[], &[("v", "w1")]).unwrap();
        let b2 = build_graph(&["v", "w2"], &[], &[("v", "w2")]).unwrap();
        assert!(is_admissible_intersection(&b1, &b2).unwrap());

        let d1 = build_graph(&["v", "w"], &[("e1", "v", "w"), ("e2", "v", "w")], &[]).unwrap();
        let d2 = build_graph(&["v", "w"], &[("e3", "v", "w"), ("e2", "v", "w")], &[]).unwrap();
        assert!(!is_admissible_intersection(&d1, &d2).unwrap());

        let r1 = build_graph(&["v", "w1"], &[], &[("v", "w1")]).unwrap();
        let r2 = build_graph(&["v", "w2"], &[("e", "v", "w2")], &[]).unwrap();
        let u = union(&r1, &r2).unwrap();
        assert_eq!(u.vertex_count(), 3);
        assert!(is_admissible_union(&r1, &r2).unwrap());
        assert!(!is_admissible_intersection(&r1, &r2).unwrap());

        let clash = build_graph(&["v", "w"], &[("e1", "w", "v")], &[]).unwrap();
        assert_eq!(intersection(&d1, &clash), Err(Error::IncompatibleOverlap("e1".into())));
    }

    #[test]
    fn extended_graphs() {
        let single = build_graph(&["v", "w"], &[("e", "v", "w")], &[]).unwrap();
        let x = extended_graph(&single).unwrap();
        assert_eq!(x.target("e*").unwrap().as_str(), "v");
        assert!(x.has_loop());
        let lp = extended_graph(&build_graph(&["v"], &[("a", "v", "v")], &[]).unwrap()).unwrap();
        assert_eq!((lp.vertex_count(), lp.edge_count()), (1, 2));
        let cyc = build_graph(&["v", "w"], &[("e", "v", "w"), ("f", "w", "v")], &[]).unwrap();
        let xc = extended_graph(&cyc).unwrap();
        assert_eq!(xc.out_edges("v").unwrap().len(), 2);
        assert_eq!(xc.out_edges("w").unwrap().len(), 2);
        let inf = build_graph(&["v", "w"], &[], &[("v", "w")]).unwrap();
        assert_eq!(extended_graph(&inf), Err(Error::InfiniteBundlePresent));
    }
}

use num_rational::BigRational;
use proptest::prelude::*;

use quiverkit_core::adjacency::count_paths_matrix;
use quiverkit_core::extremal::maximize_with_trace;
use quiverkit_core::path_algebra::PathAlgebra;
use quiverkit_core::structure::{
    admissible_subgraphs, is_admissible_inclusion, is_hereditary, GraphHom, VertexSubset,
};
use quiverkit_core::{EdgeId, Graph, VertexId};

fn graph_strategy(max_v: usize, max_e: usize, loops: bool) -> impl Strategy<Value = Graph> {
    (1..=max_v).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n), 0..=max_e).prop_map(move |pairs| {
            let vertices: Vec<VertexId> = (0..n).map(|i| VertexId::from(format!("v{i}"))).collect();
            let edges = pairs
                .into_iter()
                .filter(|&(s, t)| loops || s < t)
                .enumerate()
                .map(|(i, (s, t))| (EdgeId::from(format!("e{i}")), vertices[s].clone(), vertices[t].clone()))
                .collect();
            Graph::from_parts(vertices, edges, Vec::new()).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matrix_and_dfs_counts_agree(g in graph_strategy(5, 7, true), k in 0usize..7) {
        prop_assert_eq!(count_paths_matrix(&g, k).unwrap(), g.count_paths_bruteforce(k).unwrap());
    }

    #[test]
    fn hereditary_closed_under_paths(g in graph_strategy(5, 7, true), bits in 0u32..32) {
        let members: Vec<VertexId> =
            g.vertices().iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, v)| v.clone()).collect();
        let h = VertexSubset::new(&g, members.iter().map(VertexId::as_str)).unwrap();
        let mut closed = true;
        for k in 1..=g.vertex_count() {
            for p in g.enumerate_paths(k).unwrap() {
                let (s, t) = (g.path_source(&p).unwrap(), g.path_target(&p).unwrap());
                closed &= !h.contains(s.as_str()) || h.contains(t.as_str());
            }
        }
        prop_assert_eq!(is_hereditary(&g, &h), closed);
    }

    #[test]
    fn admissible_subgraphs_include_admissibly(g in graph_strategy(5, 6, true)) {
        for (_, sub) in admissible_subgraphs(&g).unwrap() {
            prop_assert!(is_admissible_inclusion(&sub, &g, &GraphHom::inclusion(&sub)).unwrap());
        }
    }

    #[test]
    fn reshaping_never_decreases(g in graph_strategy(6, 8, false), k in 1usize..4) {
        prop_assume!(k <= g.edge_count());
        let trace = maximize_with_trace(&g, k).unwrap();
        prop_assert!(trace.certify().holds());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn path_algebra_is_associative(g in graph_strategy(4, 4, false), picks in prop::collection::vec(any::<prop::sample::Index>(), 3)) {
        let paths = g.enumerate_all_finite_paths().unwrap();
        let alg = PathAlgebra::<BigRational>::new(g).unwrap();
        let [x, y, z] = [0, 1, 2].map(|i| alg.basis(&paths[picks[i].index(paths.len())]).unwrap());
        let left = alg.multiply(&alg.multiply(&x, &y).unwrap(), &z).unwrap();
        let right = alg.multiply(&x, &alg.multiply(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }
}

//! The optimal k-path bound, its maximizer, the certified reshaping pipeline,
//! the exhaustive oracle and the real relaxation explorer.

pub mod canon;
pub mod pipeline;
pub mod relax;
pub mod search;

use num_bigint::BigUint;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};

pub use canon::{canonical_form, isomorphic, DenseGraph};
pub use pipeline::{
    align_and_sort, identify_unrelated, maximize_with_trace, merge_front, remove_isolated,
    Certificate, ReshapeTrace, StepKind, TraceStep,
};
pub use relax::{explore_real_relaxation, RelaxConfig, RelaxResult};
pub use search::{brute_force_max, Catalog};

fn check_range(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        Err(Error::InvalidRange(format!("need 1 <= k <= N, got k = {k}, N = {n}")))
    } else {
        Ok(())
    }
}

/// `N = n k + r` with `0 <= r < k`.
pub fn decomposition(n_edges: usize, k: usize) -> Result<(usize, usize)> {
    check_range(n_edges, k)?;
    Ok((n_edges / k, n_edges % k))
}

/// `(n+1)^r n^(k-r)`: the most k-paths a loop-free graph with `N` edges has.
pub fn optimal_bound(n_edges: usize, k: usize) -> Result<BigUint> {
    let (n, r) = decomposition(n_edges, k)?;
    let big = Pow::pow(BigUint::from(n + 1), r);
    Ok(big * Pow::pow(BigUint::from(n), k - r))
}

/// Multiplicities of consecutive bundles along a thick path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleProfile {
    pub bundles: Vec<usize>,
}

impl BundleProfile {
    pub fn new(bundles: Vec<usize>) -> Self {
        BundleProfile { bundles }
    }

    pub fn product(&self) -> BigUint {
        self.bundles.iter().fold(BigUint::one(), |acc, &b| acc * b)
    }

    pub fn total(&self) -> usize {
        self.bundles.iter().sum()
    }

    /// Index pair `(from, to)` of the next balancing move, if any.
    pub fn next_move(&self) -> Option<(usize, usize)> {
        let (mut hi, mut lo) = (0, 0);
        for (i, &b) in self.bundles.iter().enumerate() {
            if b > self.bundles[hi] {
                hi = i;
            }
            if b < self.bundles[lo] {
                lo = i;
            }
        }
        (self.bundles.get(hi)? - self.bundles[lo] > 1).then_some((hi, lo))
    }

    /// The thick path on `1..=k+1` with this profile.
    pub fn thick_path(&self) -> Graph {
        let k = self.bundles.len();
        let vertices = (1..=k + 1).map(|i| VertexId::from(i.to_string())).collect();
        let mut edges = Vec::with_capacity(self.total());
        for (i, &b) in self.bundles.iter().enumerate() {
            for t in 1..=b {
                edges.push((EdgeId::from(format!("{}:{}:{}", i + 1, i + 2, t)), i, i + 1));
            }
        }
        Graph::from_indexed(vertices, edges)
    }
}

/// Moves one edge at a time from a largest to a smallest bundle until all
/// bundles differ by at most one.
pub fn redistribute(profile: &BundleProfile) -> BundleProfile {
    let mut p = profile.clone();
    while let Some((hi, lo)) = p.next_move() {
        p.bundles[hi] -= 1;
        p.bundles[lo] += 1;
    }
    p
}

/// Thick path on `k+1` vertices; the last `r` bundles carry `n+1` edges.
pub fn maximizer_graph(n_edges: usize, k: usize) -> Result<Graph> {
    let (n, r) = decomposition(n_edges, k)?;
    let bundles = (0..k).map(|i| if i >= k - r { n + 1 } else { n }).collect();
    Ok(BundleProfile::new(bundles).thick_path())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adjacency::count_paths_matrix;

    #[test]
    fn bound_values() {
        assert_eq!(optimal_bound(16, 3).unwrap(), BigUint::from(150u32));
        assert_eq!(optimal_bound(11, 2).unwrap(), BigUint::from(30u32));
        assert_eq!(optimal_bound(7, 2).unwrap(), BigUint::from(12u32));
        assert_eq!(optimal_bound(7, 5).unwrap(), BigUint::from(4u32));
        for n in 1..12 {
            assert_eq!(optimal_bound(n, n).unwrap(), BigUint::one());
            assert_eq!(optimal_bound(n, 1).unwrap(), BigUint::from(n));
        }
        assert!(matches!(optimal_bound(3, 0), Err(Error::InvalidRange(_))));
        assert!(matches!(optimal_bound(3, 4), Err(Error::InvalidRange(_))));
    }

    #[test]
    fn maximizer_shapes() {
        let m = maximizer_graph(16, 3).unwrap();
        assert_eq!(count_paths_matrix(&m, 3).unwrap(), BigUint::from(150u32));
        assert_eq!(m.out_edges("3").unwrap().len(), 6);
        let c = maximizer_graph(4, 4).unwrap();
        assert_eq!((c.vertex_count(), c.edge_count()), (5, 4));
        let t = maximizer_graph(5, 2).unwrap();
        assert_eq!(t.out_edges("1").unwrap().len(), 2);
        assert_eq!(count_paths_matrix(&t, 2).unwrap(), BigUint::from(6u32));
    }

    #[test]
    fn redistribution() {
        let r = redistribute(&BundleProfile::new(vec![4, 4, 8]));
        let mut s = r.bundles.clone();
        s.sort();
        assert_eq!(s, vec![5, 5, 6]);
        assert_eq!(redistribute(&BundleProfile::new(vec![2, 2, 2])).bundles, vec![2, 2, 2]);
        assert_eq!(redistribute(&BundleProfile::new(vec![1, 5])).bundles, vec![3, 3]);
    }
}

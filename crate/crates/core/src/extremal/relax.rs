//! Numerical exploration of the real relaxation: maximize the entry sum of
//! `A^k` over nonnegative strictly upper-triangular `A` with entry sum `N`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelaxConfig {
    pub dim_cap: usize,
    pub iterations: usize,
    pub step: f64,
    pub restarts: usize,
    pub seed: u64,
    pub include_thick_path: bool,
}

impl Default for RelaxConfig {
    fn default() -> Self {
        RelaxConfig {
            dim_cap: 6,
            iterations: 3000,
            step: 0.5,
            restarts: 16,
            seed: 0,
            include_thick_path: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelaxResult {
    pub target: f64,
    pub best: f64,
    pub argmax: Vec<Vec<f64>>,
    pub runs: Vec<f64>,
}

/// Sum of the entries of `a^k`.
pub fn path_sum(a: &[Vec<f64>], k: usize) -> f64 {
    let n = a.len();
    let mut v = vec![1.0; n];
    for _ in 0..k {
        v = (0..n).map(|i| (0..n).map(|j| a[i][j] * v[j]).sum()).collect();
    }
    v.iter().sum()
}

/// `d/dA_ij` of [`path_sum`]: weighted paths into `i` times paths out of `j`.
fn gradient(a: &[Vec<f64>], k: usize) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut into = vec![vec![1.0; n]];
    let mut out = vec![vec![1.0; n]];
    for s in 1..k {
        let prev_in = &into[s - 1];
        into.push((0..n).map(|j| (0..n).map(|i| prev_in[i] * a[i][j]).sum()).collect());
        let prev_out = &out[s - 1];
        out.push((0..n).map(|i| (0..n).map(|j| a[i][j] * prev_out[j]).sum()).collect());
    }
    let mut g = vec![vec![0.0; n]; n];
    for (i, row) in g.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = (0..k).map(|s| into[s][i] * out[k - 1 - s][j]).sum();
        }
    }
    g
}

/// Equal thick path on `k+1` vertices with weight `N/k` per step.
pub fn thick_path_matrix(total: f64, k: usize) -> Vec<Vec<f64>> {
    let mut a = vec![vec![0.0; k + 1]; k + 1];
    for i in 0..k {
        a[i][i + 1] = total / k as f64;
    }
    a
}

/// Exponentiated-gradient ascent restricted to `support`, renormalizing to
/// entry sum `total` after every step.
pub fn ascent(total: f64, k: usize, mut a: Vec<Vec<f64>>, support: &[(usize, usize)], cfg: &RelaxConfig) -> (f64, Vec<Vec<f64>>) {
    if support.is_empty() {
        return (0.0, a);
    }
    for _ in 0..cfg.iterations {
        let g = gradient(&a, k);
        let scale = support.iter().map(|&(i, j)| g[i][j]).fold(0.0, f64::max);
        if scale <= 0.0 {
            break;
        }
        for &(i, j) in support {
            a[i][j] *= (cfg.step * g[i][j] / scale).exp();
        }
        let sum: f64 = support.iter().map(|&(i, j)| a[i][j]).sum();
        for &(i, j) in support {
            a[i][j] *= total / sum;
        }
    }
    (path_sum(&a, k), a)
}

fn random_support(rng: &mut ChaCha8Rng, dim: usize, k: usize, with_chain: bool) -> Vec<(usize, usize)> {
    let mut s: Vec<(usize, usize)> = (0..dim)
        .flat_map(|i| (i + 1..dim).map(move |j| (i, j)))
        .filter(|_| rng.gen_bool(0.5))
        .collect();
    if with_chain && dim > k {
        let mut picks: Vec<usize> = (0..dim).collect();
        for i in (1..dim).rev() {
            picks.swap(i, rng.gen_range(0..=i));
        }
        let mut chain = picks[..=k].to_vec();
        chain.sort_unstable();
        for w in chain.windows(2) {
            if !s.contains(&(w[0], w[1])) {
                s.push((w[0], w[1]));
            }
        }
    }
    s.sort_unstable();
    s
}

/// One seeded run on a random nilpotent support of dimension `dim`.
pub fn seeded_run(total: f64, k: usize, dim: usize, cfg: &RelaxConfig, rng: &mut ChaCha8Rng) -> (f64, Vec<Vec<f64>>) {
    let with_chain = rng.gen_bool(0.5);
    let support = random_support(rng, dim, k, with_chain);
    let mut a = vec![vec![0.0; dim]; dim];
    for &(i, j) in &support {
        a[i][j] = rng.gen_range(0.5..1.5);
    }
    let sum: f64 = support.iter().map(|&(i, j)| a[i][j]).sum();
    for &(i, j) in &support {
        a[i][j] *= total / sum;
    }
    ascent(total, k, a, &support, cfg)
}

fn validate(total: f64, k: usize, cfg: &RelaxConfig) -> Result<()> {
    let bad = |m: &str| Err(Error::ConfigInvalid(m.to_owned()));
    if !total.is_finite() || total <= 0.0 {
        return bad("N must be positive and finite");
    }
    if k == 0 || (k as f64) > total.floor() {
        return bad("need 1 <= k <= floor(N)");
    }
    if cfg.dim_cap < 2 || cfg.iterations == 0 || !(cfg.step.is_finite() && cfg.step > 0.0) {
        return bad("dim_cap >= 2, iterations >= 1 and a positive step are required");
    }
    Ok(())
}

/// Multi-restart ascent; returns the best value and its matrix alongside the
/// target `(N/k)^k`.
pub fn explore_real_relaxation(total: f64, k: usize, cfg: &RelaxConfig) -> Result<RelaxResult> {
    validate(total, k, cfg)?;
    let target = (total / k as f64).powi(k as i32);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best = (f64::NEG_INFINITY, Vec::new());
    let mut runs = Vec::new();
    if cfg.include_thick_path {
        let a = thick_path_matrix(total, k);
        let v = path_sum(&a, k);
        runs.push(v);
        best = (v, a);
    }
    for _ in 0..cfg.restarts {
        let dim = rng.gen_range(2..=cfg.dim_cap);
        let (v, a) = seeded_run(total, k, dim, cfg, &mut rng);
        runs.push(v);
        if v > best.0 {
            best = (v, a);
        }
    }
    if best.1.is_empty() {
        best = (0.0, vec![vec![0.0; 2]; 2]);
    }
    Ok(RelaxResult { target, best: best.0, argmax: best.1, runs })
}

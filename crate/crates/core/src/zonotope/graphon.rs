//! Random graphs from the exchangeable model `G(m, W_M)`.

use super::kernel::{p_eval, StepKernel};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::to_f64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Host graphs are adjacency bitmasks.
pub const MAX_HOST_ORDER: usize = 32;
const CHUNK: u64 = 1024;

/// Adjacency masks of a graph drawn from `G(m, W_M)`: uniform labels
/// `X_i`, then each pair independently with probability `W_M(X_i, X_j)`.
pub fn sample_graph<R: Rng>(m: usize, kernel: &[f64], n: usize, rng: &mut R) -> Vec<u32> {
    let blocks: Vec<usize> = (0..m)
        .map(|_| ((rng.gen::<f64>() * n as f64) as usize).min(n - 1))
        .collect();
    let mut adj = vec![0u32; m];
    for i in 0..m {
        for j in i + 1..m {
            if rng.gen::<f64>() < kernel[blocks[i] * n + blocks[j]] {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    adj
}

/// Injective maps `V(F) → V(G)` sending edges to edges.
pub fn injective_homomorphisms(f: &Graph, adj: &[u32]) -> u64 {
    let k = f.order();
    let back: Vec<Vec<usize>> = (0..k).map(|t| (0..t).filter(|&s| f.has_edge(s, t)).collect()).collect();
    let all = if adj.len() == 32 { u32::MAX } else { (1u32 << adj.len()) - 1 };
    let mut phi = vec![0usize; k];
    fn rec(t: usize, back: &[Vec<usize>], phi: &mut [usize], used: u32, all: u32, adj: &[u32]) -> u64 {
        if t == back.len() {
            return 1;
        }
        let mut cand = all & !used;
        for &s in &back[t] {
            cand &= adj[phi[s]];
        }
        let mut total = 0;
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            phi[t] = v;
            total += rec(t + 1, back, phi, used | 1 << v, all, adj);
        }
        total
    }
    rec(0, &back, &mut phi, 0, all, adj)
}

/// Copies of `F` in `G` over copies in `K_m`.
pub fn host_density(f: &Graph, adj: &[u32]) -> f64 {
    let m = adj.len();
    let k = f.order();
    if k > m {
        return 0.0;
    }
    let falling: f64 = (0..k).map(|i| (m - i) as f64).product();
    injective_homomorphisms(f, adj) as f64 / falling
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpectationReport {
    pub pattern: String,
    pub host_order: usize,
    pub graphs: u64,
    #[serde(rename = "mean_estimate")]
    pub mean: f64,
    #[serde(rename = "mean_stderr")]
    pub std_error: f64,
    /// `t(F, W_M)`
    pub limit: f64,
    /// `(mean - limit) / std_error`
    pub z_score: f64,
    /// observed `mean - limit`
    pub bias: f64,
}

impl ExpectationReport {
    pub fn within(&self, k: f64) -> bool {
        (self.mean - self.limit).abs() <= k * self.std_error
    }
}

/// Empirical mean density of `F` over `graphs` samples of `G(m, W_M)`
/// against `t(F, W_M)`.
pub fn expectation_check(f: &Graph, kernel: &StepKernel, m: usize, graphs: u64, seed: u64) -> Result<ExpectationReport> {
    if m > MAX_HOST_ORDER || m < f.order() {
        return Err(Error::invalid(format!(
            "host order {m} must be between {} and {MAX_HOST_ORDER}",
            f.order()
        )));
    }
    if graphs < 2 {
        return Err(Error::invalid("at least two graphs required"));
    }
    let n = kernel.size();
    let k = kernel.to_f64();
    let (sum, sum_sq) = (0..graphs.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let count = CHUNK.min(graphs - c * CHUNK);
            let mut s = 0.0;
            let mut s2 = 0.0;
            for _ in 0..count {
                let t = host_density(f, &sample_graph(m, &k, n, &mut rng));
                s += t;
                s2 += t * t;
            }
            (s, s2)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let g = graphs as f64;
    let mean = sum / g;
    let var = ((sum_sq - g * mean * mean) / (g - 1.0)).max(0.0);
    let std_error = (var / g).sqrt();
    let limit = to_f64(&p_eval(f, kernel));
    Ok(ExpectationReport {
        pattern: f.to_string(),
        host_order: m,
        graphs,
        mean,
        std_error,
        limit,
        z_score: if std_error > 0.0 { (mean - limit) / std_error } else { 0.0 },
        bias: mean - limit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{count_subgraphs, parse_pattern, Graph};
    use crate::rational::q;

    #[test]
    fn injective_counts_match_graph_counter() {
        let host = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 2), (0, 3)]).unwrap();
        let adj: Vec<u32> = (0..6).map(|v| host.neighbors(v) as u32).collect();
        for name in ["K2", "K3", "C4", "K4-e", "P3"] {
            let f = parse_pattern(name).unwrap();
            let aut = crate::graph::automorphism_count(&f);
            assert_eq!(injective_homomorphisms(&f, &adj), count_subgraphs(&f, &host) * aut, "{name}");
        }
    }

    #[test]
    fn mean_density_matches_kernel() {
        let kernel = StepKernel::from_upper(2, &[q(9, 10), q(1, 5), q(3, 5)]).unwrap();
        for name in ["K3", "C4", "K4-e"] {
            let f = parse_pattern(name).unwrap();
            let r = expectation_check(&f, &kernel, 20, 20_000, 7).unwrap();
            assert!(r.within(4.0), "{r:?}");
        }
    }
}

//! Small simple graphs stored as adjacency bitsets.
//!
//! Vertex sets are `0..n` with `n <= MAX_VERTICES`. Edges are also addressed by
//! their graph6 bit position: the pair `i < j` sits at `j * (j - 1) / 2 + i`,
//! which lets a whole graph be packed into a single `u64` edge code.

mod count;
pub mod graph6;
mod pattern;
mod stats;

pub use count::{
    automorphism_count, complete_count, count_subgraphs, density, is_subgraph, PatternCounter,
};
pub use pattern::{parse_pattern, parse_patterns, GraphVector};
pub use stats::{stat_vector, StatKind, StatVector};

use crate::error::{Error, Result};
use std::fmt;

/// Largest order of any graph the toolkit represents.
pub const MAX_VERTICES: usize = 10;
/// Largest host order for exhaustive enumeration of labeled graphs.
pub const MAX_ENUMERATION_VERTICES: usize = 7;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: u8,
    rows: [u16; MAX_VERTICES],
}

/// Bit position of the pair `{i, j}` in graph6 order.
#[inline]
pub fn pair_index(i: usize, j: usize) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    b * (b - 1) / 2 + a
}

/// Number of vertex pairs on `n` vertices.
#[inline]
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::Capacity {
                what: "graph order",
                limit: MAX_VERTICES,
                got: n,
            });
        }
        Ok(Graph {
            n: n as u8,
            rows: [0; MAX_VERTICES],
        })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::invalid(format!("edge ({u},{v}) outside [0,{n})")));
            }
            if u == v {
                return Err(Error::invalid(format!("loop at vertex {u}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Decode a graph from its packed graph6-order edge code.
    pub fn from_edge_code(n: usize, code: u64) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        let pairs = pair_count(n);
        if pairs < 64 && code >> pairs != 0 {
            return Err(Error::invalid("edge code has bits beyond the pair count"));
        }
        for j in 1..n {
            for i in 0..j {
                if code >> pair_index(i, j) & 1 == 1 {
                    g.add_edge(i, j);
                }
            }
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for j in 1..n {
            for i in 0..j {
                g.add_edge(i, j);
            }
        }
        Ok(g)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::invalid(format!("cycle needs at least 3 vertices, got {n}")));
        }
        let mut g = Graph::empty(n)?;
        for i in 0..n {
            g.add_edge(i, (i + 1) % n);
        }
        Ok(g)
    }

    /// Path on `n` vertices (`n - 1` edges).
    pub fn path(n: usize) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for i in 1..n {
            g.add_edge(i - 1, i);
        }
        Ok(g)
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(Error::invalid("complete bipartite parts must be nonempty"));
        }
        let mut g = Graph::empty(a + b)?;
        for i in 0..a {
            for j in a..a + b {
                g.add_edge(i, j);
            }
        }
        Ok(g)
    }

    /// `K_n` with the edge `{0, 1}` removed.
    pub fn complete_minus_edge(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("K_n - e needs n >= 2"));
        }
        let mut g = Graph::complete(n)?;
        g.remove_edge(0, 1);
        Ok(g)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u] >> v & 1 == 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.order() && v < self.order());
        self.rows[u] |= 1 << v;
        self.rows[v] |= 1 << u;
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.rows[u] &= !(1 << v);
        self.rows[v] &= !(1 << u);
    }

    /// Neighbourhood of `v` as a bitmask.
    #[inline]
    pub fn neighbors(&self, v: usize) -> u16 {
        self.rows[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.rows[..self.order()]
            .iter()
            .map(|r| r.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    pub fn has_isolated_vertex(&self) -> bool {
        (0..self.order()).any(|v| self.rows[v] == 0)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.order();
        (1..n).flat_map(move |j| (0..j).filter(move |&i| self.has_edge(i, j)).map(move |i| (i, j)))
    }

    /// Packed edge code in graph6 bit order.
    pub fn edge_code(&self) -> u64 {
        self.edges().fold(0u64, |acc, (i, j)| acc | 1 << pair_index(i, j))
    }

    /// Induced subgraph on `vertices`, relabeled in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Result<Graph> {
        let mut g = Graph::empty(vertices.len())?;
        for (b, &vb) in vertices.iter().enumerate() {
            for (a, &va) in vertices[..b].iter().enumerate() {
                if self.has_edge(va, vb) {
                    g.add_edge(a, b);
                }
            }
        }
        Ok(g)
    }

    /// Relabel vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.order());
        let mut g = Graph {
            n: self.n,
            rows: [0; MAX_VERTICES],
        };
        for (i, j) in self.edges() {
            g.add_edge(perm[i], perm[j]);
        }
        g
    }

    /// The same graph padded with `extra` isolated vertices.
    pub fn with_isolated(&self, extra: usize) -> Result<Graph> {
        let mut g = Graph::empty(self.order() + extra)?;
        for (i, j) in self.edges() {
            g.add_edge(i, j);
        }
        Ok(g)
    }

    pub fn complement(&self) -> Graph {
        let n = self.order();
        let mask = if n == 16 { u16::MAX } else { (1u16 << n) - 1 };
        let mut g = *self;
        for v in 0..n {
            g.rows[v] = !self.rows[v] & mask & !(1 << v);
        }
        g
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({}, {})", self.order(), graph6::encode(self))
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&graph6::encode(self))
    }
}

/// Every labeled graph on `n` vertices, in increasing edge-code order.
pub fn enumerate_labeled_graphs(n: usize) -> Result<impl Iterator<Item = Graph>> {
    if n == 0 || n > MAX_ENUMERATION_VERTICES {
        return Err(Error::Capacity {
            what: "exhaustive enumeration order",
            limit: MAX_ENUMERATION_VERTICES,
            got: n,
        });
    }
    let total = 1u64 << pair_count(n);
    Ok((0..total).map(move |code| Graph::from_edge_code(n, code).expect("code in range")))
}

/// Complete `k`-partite graph on `n` vertices with part sizes as equal as possible.
pub fn turan_graph(k: usize, n: usize) -> Result<Graph> {
    if k == 0 || k > n {
        return Err(Error::invalid(format!("turan graph needs 1 <= k <= n, got k={k}, n={n}")));
    }
    let mut g = Graph::empty(n)?;
    // vertex v lives in part v % k
    for j in 1..n {
        for i in 0..j {
            if i % k != j % k {
                g.add_edge(i, j);
            }
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_sizes() {
        assert_eq!(enumerate_labeled_graphs(1).unwrap().count(), 1);
        assert_eq!(enumerate_labeled_graphs(3).unwrap().count(), 8);
        assert_eq!(enumerate_labeled_graphs(6).unwrap().count(), 32768);
        assert!(matches!(
            enumerate_labeled_graphs(8).err(),
            Some(Error::Capacity { .. })
        ));
        assert!(enumerate_labeled_graphs(0).is_err());
    }

    #[test]
    fn enumeration_is_distinct_and_ordered() {
        let codes: Vec<u64> = enumerate_labeled_graphs(4)
            .unwrap()
            .map(|g| g.edge_code())
            .collect();
        assert!(codes.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(codes.len(), 64);
    }

    #[test]
    fn edge_code_round_trip() {
        let g = Graph::from_edges(5, &[(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(Graph::from_edge_code(5, g.edge_code()).unwrap(), g);
        assert!(Graph::from_edge_code(3, 1 << 3).is_err());
    }

    #[test]
    fn constructors() {
        assert_eq!(Graph::complete(6).unwrap().edge_count(), 15);
        assert_eq!(Graph::cycle(4).unwrap().edge_count(), 4);
        assert_eq!(Graph::path(3).unwrap().edge_count(), 2);
        assert_eq!(Graph::complete_minus_edge(4).unwrap().edge_count(), 5);
        assert_eq!(Graph::complete_bipartite(2, 3).unwrap().edge_count(), 6);
        assert!(Graph::cycle(2).is_err());
        assert!(Graph::empty(11).is_err());
        assert!(Graph::from_edges(3, &[(1, 1)]).is_err());
        assert!(Graph::from_edges(3, &[(0, 3)]).is_err());
    }

    #[test]
    fn turan_graphs() {
        let c4 = Graph::cycle(4).unwrap();
        let t = turan_graph(2, 4).unwrap();
        assert_eq!(t.edge_count(), 4);
        assert_eq!(count_subgraphs(&c4, &t), 1);
        assert_eq!(turan_graph(5, 5).unwrap(), Graph::complete(5).unwrap());
        let k222 = turan_graph(3, 6).unwrap();
        assert_eq!(count_subgraphs(&Graph::complete(3).unwrap(), &k222), 8);
        assert!(turan_graph(4, 3).is_err());
    }

    #[test]
    fn complement_and_induced() {
        let g = Graph::path(4).unwrap();
        assert_eq!(g.complement().edge_count(), 3);
        assert_eq!(g.complement().complement(), g);
        let h = g.induced(&[0, 2, 3]).unwrap();
        assert_eq!(h.edge_count(), 1);
        assert!(h.has_edge(1, 2));
    }
}

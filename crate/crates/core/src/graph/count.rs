use super::{pair_count, pair_index, Graph};
use crate::rational::{binomial, factorial, Q};
use num_traits::Zero;

/// Search plan for mapping a pattern into hosts: pattern vertices in an order
/// where each vertex is adjacent to as many earlier ones as possible.
struct EmbeddingPlan {
    order: Vec<usize>,
    degree: Vec<usize>,
    /// earlier positions adjacent to position t
    back: Vec<Vec<usize>>,
}

impl EmbeddingPlan {
    fn new(pattern: &Graph) -> Self {
        let k = pattern.order();
        let mut order = Vec::with_capacity(k);
        let mut placed = 0u16;
        while order.len() < k {
            let next = (0..k)
                .filter(|&v| placed >> v & 1 == 0)
                .max_by_key(|&v| {
                    (
                        (pattern.neighbors(v) & placed).count_ones(),
                        pattern.degree(v),
                        std::cmp::Reverse(v),
                    )
                })
                .expect("unplaced vertex exists");
            order.push(next);
            placed |= 1 << next;
        }
        let back = order
            .iter()
            .enumerate()
            .map(|(t, &v)| {
                (0..t)
                    .filter(|&s| pattern.has_edge(v, order[s]))
                    .collect()
            })
            .collect();
        let degree = order.iter().map(|&v| pattern.degree(v)).collect();
        EmbeddingPlan {
            order,
            degree,
            back,
        }
    }

    /// Number of injective maps sending every pattern edge to a host edge.
    fn count(&self, host: &Graph) -> u64 {
        let n = host.order();
        if self.order.len() > n {
            return 0;
        }
        let all = ((1u32 << n) - 1) as u16;
        // candidates allowed per position by degree
        let deg_ok: Vec<u16> = self
            .degree
            .iter()
            .map(|&d| {
                (0..n)
                    .filter(|&u| host.degree(u) >= d)
                    .fold(0u16, |m, u| m | 1 << u)
            })
            .collect();
        let mut images = vec![0usize; self.order.len()];
        self.extend(host, 0, 0, all, &deg_ok, &mut images)
    }

    fn extend(
        &self,
        host: &Graph,
        t: usize,
        used: u16,
        all: u16,
        deg_ok: &[u16],
        images: &mut [usize],
    ) -> u64 {
        if t == self.order.len() {
            return 1;
        }
        let mut cand = all & !used & deg_ok[t];
        for &s in &self.back[t] {
            cand &= host.neighbors(images[s]);
        }
        if t + 1 == self.order.len() {
            return cand.count_ones() as u64;
        }
        let mut total = 0;
        while cand != 0 {
            let u = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            images[t] = u;
            total += self.extend(host, t + 1, used | 1 << u, all, deg_ok, images);
        }
        total
    }
}

/// Number of adjacency-preserving permutations of the vertex set.
pub fn automorphism_count(pattern: &Graph) -> u64 {
    EmbeddingPlan::new(pattern).count(pattern)
}

/// Number of subgraphs of `host` isomorphic to `pattern`; 0 when the pattern
/// has more vertices than the host.
pub fn count_subgraphs(pattern: &Graph, host: &Graph) -> u64 {
    if pattern.order() > host.order() {
        return 0;
    }
    let plan = EmbeddingPlan::new(pattern);
    plan.count(host) / plan.count(pattern)
}

/// Copies of `pattern` in the complete graph on `n` vertices:
/// `|F|! / |Aut F| * C(n, |F|)`.
pub fn complete_count(pattern: &Graph, n: usize) -> u64 {
    let k = pattern.order() as u64;
    factorial(k) / automorphism_count(pattern) * binomial(n as u64, k)
}

/// Subgraph density of `pattern` in `host`.
pub fn density(pattern: &Graph, host: &Graph) -> Q {
    let total = complete_count(pattern, host.order());
    if total == 0 {
        return Q::zero();
    }
    Q::new(
        count_subgraphs(pattern, host).into(),
        total.into(),
    )
}

/// Whether `small` occurs as a (not necessarily induced) subgraph of `big`.
pub fn is_subgraph(small: &Graph, big: &Graph) -> bool {
    small.order() <= big.order() && EmbeddingPlan::new(small).count(big) > 0
}

/// Fast repeated counting of one pattern in many hosts of a fixed order.
///
/// Every copy of a `k`-vertex pattern occupies exactly one `k`-subset of the
/// host, so the count is a sum over `k`-subsets of a lookup into a table indexed
/// by the induced labeled graph. The table is filled by the backtracking
/// counter; patterns on more than `TABLE_ORDER_LIMIT` vertices skip the table.
pub struct PatternCounter {
    pattern: Graph,
    host_order: usize,
    table: Vec<u32>,
    /// host pair bit positions for each k-subset, in subset graph6 order
    subsets: Vec<Vec<u8>>,
    plan: EmbeddingPlan,
}

const TABLE_ORDER_LIMIT: usize = 6;

impl PatternCounter {
    pub fn new(pattern: &Graph, host_order: usize) -> Self {
        let k = pattern.order();
        let plan = EmbeddingPlan::new(pattern);
        let aut = plan.count(pattern);
        let (table, subsets) = if k <= TABLE_ORDER_LIMIT && k <= host_order {
            let table = (0..1u64 << pair_count(k))
                .map(|code| {
                    let g = Graph::from_edge_code(k, code).expect("code in range");
                    (plan.count(&g) / aut) as u32
                })
                .collect();
            let subsets = k_subsets(host_order, k)
                .into_iter()
                .map(|s| {
                    let mut pos = Vec::with_capacity(pair_count(k));
                    for b in 1..k {
                        for a in 0..b {
                            pos.push(pair_index(s[a], s[b]) as u8);
                        }
                    }
                    pos
                })
                .collect();
            (table, subsets)
        } else {
            (Vec::new(), Vec::new())
        };
        PatternCounter {
            pattern: *pattern,
            host_order,
            table,
            subsets,
            plan,
        }
    }

    pub fn pattern(&self) -> &Graph {
        &self.pattern
    }

    /// Count copies in the host with the given graph6-order edge code.
    pub fn count_code(&self, code: u64) -> u64 {
        if self.pattern.order() > self.host_order {
            return 0;
        }
        if self.table.is_empty() {
            let g = Graph::from_edge_code(self.host_order, code).expect("valid host code");
            return self.plan.count(&g) / self.plan.count(&self.pattern);
        }
        let mut total = 0u64;
        for pos in &self.subsets {
            let mut idx = 0usize;
            for (t, &p) in pos.iter().enumerate() {
                idx |= ((code >> p) as usize & 1) << t;
            }
            total += self.table[idx] as u64;
        }
        total
    }

    pub fn count(&self, host: &Graph) -> u64 {
        assert_eq!(host.order(), self.host_order, "host order mismatch");
        self.count_code(host.edge_code())
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            if n - v < k - cur.len() {
                break;
            }
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::enumerate_labeled_graphs;
    use crate::rational::q;

    fn brute_automorphisms(g: &Graph) -> u64 {
        let n = g.order();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut count = 0;
        permute_all(&mut perm, 0, &mut |p| {
            if g.permuted(p) == *g {
                count += 1;
            }
        });
        count
    }

    fn permute_all(p: &mut Vec<usize>, i: usize, f: &mut impl FnMut(&[usize])) {
        if i == p.len() {
            f(p);
            return;
        }
        for j in i..p.len() {
            p.swap(i, j);
            permute_all(p, i + 1, f);
            p.swap(i, j);
        }
    }

    /// Count copies by enumerating (vertex subset, edge subset) pairs.
    fn brute_count(f: &Graph, g: &Graph) -> u64 {
        let k = f.order();
        if k > g.order() {
            return 0;
        }
        let e = f.edge_count();
        let mut total = 0;
        for s in k_subsets(g.order(), k) {
            let h = g.induced(&s).unwrap();
            let edges: Vec<(usize, usize)> = h.edges().collect();
            for mask in 0u64..1 << edges.len() {
                if mask.count_ones() as usize != e {
                    continue;
                }
                let chosen: Vec<_> = (0..edges.len())
                    .filter(|&i| mask >> i & 1 == 1)
                    .map(|i| edges[i])
                    .collect();
                let sub = Graph::from_edges(k, &chosen).unwrap();
                if is_isomorphic_brute(&sub, f) {
                    total += 1;
                }
            }
        }
        total
    }

    fn is_isomorphic_brute(a: &Graph, b: &Graph) -> bool {
        let mut perm: Vec<usize> = (0..a.order()).collect();
        let mut found = false;
        permute_all(&mut perm, 0, &mut |p| {
            if a.permuted(p) == *b {
                found = true;
            }
        });
        found
    }

    #[test]
    fn automorphisms_match_brute_force() {
        let k3 = Graph::complete(3).unwrap();
        assert_eq!(automorphism_count(&k3), 6);
        let k4e = Graph::complete_minus_edge(4).unwrap();
        assert_eq!(brute_automorphisms(&k4e), 4);
        assert_eq!(automorphism_count(&k4e), 4);
        let c4 = Graph::cycle(4).unwrap();
        assert_eq!(brute_automorphisms(&c4), 8);
        assert_eq!(automorphism_count(&c4), 8);
        for g in enumerate_labeled_graphs(5).unwrap().step_by(37) {
            assert_eq!(automorphism_count(&g), brute_automorphisms(&g));
        }
    }

    #[test]
    fn counts_in_k6() {
        let k6 = Graph::complete(6).unwrap();
        assert_eq!(count_subgraphs(&Graph::complete(3).unwrap(), &k6), 20);
        assert_eq!(count_subgraphs(&Graph::cycle(4).unwrap(), &k6), 45);
        assert_eq!(
            count_subgraphs(&Graph::complete_minus_edge(4).unwrap(), &k6),
            90
        );
        let empty5 = Graph::empty(5).unwrap();
        assert_eq!(count_subgraphs(&Graph::complete(3).unwrap(), &empty5), 0);
    }

    #[test]
    fn counts_match_edge_subset_enumeration() {
        let patterns = [
            Graph::path(3).unwrap(),
            Graph::complete(3).unwrap(),
            Graph::cycle(4).unwrap(),
            Graph::complete_minus_edge(4).unwrap(),
            Graph::path(4).unwrap(),
            Graph::from_edges(4, &[(0, 1)]).unwrap(),
        ];
        for g in enumerate_labeled_graphs(5).unwrap().step_by(53) {
            for f in &patterns {
                assert_eq!(count_subgraphs(f, &g), brute_count(f, &g), "{f:?} in {g:?}");
            }
        }
    }

    #[test]
    fn densities() {
        let k3 = Graph::complete(3).unwrap();
        assert_eq!(density(&k3, &Graph::complete(6).unwrap()), q(1, 1));
        assert_eq!(density(&k3, &Graph::complete(2).unwrap()), q(0, 1));
        let k2 = Graph::complete(2).unwrap();
        assert_eq!(density(&k2, &Graph::cycle(5).unwrap()), q(1, 2));
    }

    #[test]
    fn pattern_counter_agrees_with_backtracking() {
        let patterns = [
            Graph::complete(2).unwrap(),
            Graph::path(3).unwrap(),
            Graph::complete(3).unwrap(),
            Graph::cycle(4).unwrap(),
            Graph::complete_minus_edge(4).unwrap(),
            Graph::cycle(5).unwrap(),
        ];
        for f in &patterns {
            let counter = PatternCounter::new(f, 6);
            for g in enumerate_labeled_graphs(6).unwrap().step_by(211) {
                assert_eq!(counter.count(&g), count_subgraphs(f, &g));
            }
        }
        let big = Graph::cycle(7).unwrap();
        let counter = PatternCounter::new(&big, 7);
        let k7 = Graph::complete(7).unwrap();
        assert_eq!(counter.count(&k7), 360);
        assert_eq!(PatternCounter::new(&big, 5).count_code(0), 0);
    }

    #[test]
    fn subgraph_relation() {
        let k3 = Graph::complete(3).unwrap();
        let k4e = Graph::complete_minus_edge(4).unwrap();
        let c4 = Graph::cycle(4).unwrap();
        assert!(is_subgraph(&k3, &k4e));
        assert!(is_subgraph(&c4, &k4e));
        assert!(!is_subgraph(&k3, &c4));
        assert!(!is_subgraph(&c4, &k3));
    }
}

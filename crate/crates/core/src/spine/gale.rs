//! Exact volume of the cyclic polytope on the spine at `x = i/n`, `i = 0..=n`.
//!
//! The polytope is triangulated from the vertex `0`. The facets missing `0`
//! are, by Gale's evenness condition, the unions of `m` disjoint adjacent
//! pairs `{i_k, i_k + 1}` (plus the vertex `1` in odd dimension). The sum of
//! the simplex determinants is expanded by a generalized Laplace expansion
//! into column pairs, which turns the sum over pair sequences into a linear
//! dynamic program per row partition.

use super::SpineSpec;
use crate::error::{Error, Result};
use crate::rational::{factorial, Q};
use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde::Serialize;

pub fn gale_volume_sum(spec: &SpineSpec, n: u64) -> Result<Q> {
    let d = spec.dim();
    if n < d as u64 {
        return Err(Error::invalid(format!("subdivision {n} too small for dimension {d}")));
    }
    let m = d / 2;
    let odd = d % 2 == 1;
    let exps = spec.ascending();
    // positions available to pair starts: even 1..=n-1, odd 1..=n-2
    let last = if odd { n - 2 } else { n - 1 };
    let powers: Vec<Vec<BigInt>> = exps
        .iter()
        .map(|&e| (0..=n).map(|i| BigInt::from(i).pow(e)).collect())
        .collect();
    let mut total = BigInt::zero();
    for (sign, blocks) in row_partitions(d, m) {
        // f[i] = sum over admissible prefixes ending with a pair at i
        let mut f: Vec<BigInt> = vec![BigInt::zero(); (last + 1) as usize];
        for (k, &(a, b)) in blocks.iter().enumerate() {
            let minor = |i: usize| -> BigInt {
                &powers[a][i] * &powers[b][i + 1] - &powers[b][i] * &powers[a][i + 1]
            };
            let mut next = vec![BigInt::zero(); f.len()];
            let mut prefix = BigInt::zero();
            for i in 1..=last as usize {
                let weight = if k == 0 {
                    BigInt::one()
                } else {
                    if i >= 2 {
                        prefix += &f[i - 2];
                    }
                    prefix.clone()
                };
                if !weight.is_zero() {
                    next[i] = weight * minor(i);
                }
            }
            f = next;
        }
        let sum: BigInt = if m == 0 { BigInt::one() } else { f.iter().sum() };
        // the odd singleton row meets the column of the vertex 1, scaled by n^{e}
        let single = if odd {
            let r = (0..d).find(|r| !blocks.iter().any(|&(a, b)| a == *r || b == *r)).expect("free row");
            powers[r][n as usize].clone()
        } else {
            BigInt::one()
        };
        let term = sum * single;
        if sign > 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    let scale = BigInt::from(n).pow(spec.exponent_sum()) * BigInt::from(factorial(d as u64));
    Ok(Q::new(total, scale))
}

/// Ordered choices of `m` disjoint row pairs out of `0..d` with the sign of
/// the permutation listing the pairs in order followed by any leftover row.
fn row_partitions(d: usize, m: usize) -> Vec<(i32, Vec<(usize, usize)>)> {
    let mut out = Vec::new();
    let mut blocks = Vec::new();
    fn rec(d: usize, m: usize, used: &mut Vec<bool>, blocks: &mut Vec<(usize, usize)>, out: &mut Vec<(i32, Vec<(usize, usize)>)>) {
        if blocks.len() == m {
            let mut perm: Vec<usize> = blocks.iter().flat_map(|&(a, b)| [a, b]).collect();
            perm.extend((0..d).filter(|&r| !used[r]));
            out.push((permutation_sign(&perm), blocks.clone()));
            return;
        }
        for a in 0..d {
            for b in a + 1..d {
                if used[a] || used[b] {
                    continue;
                }
                used[a] = true;
                used[b] = true;
                blocks.push((a, b));
                rec(d, m, used, blocks, out);
                blocks.pop();
                used[a] = false;
                used[b] = false;
            }
        }
    }
    rec(d, m, &mut vec![false; d], &mut blocks, &mut out);
    out
}

fn permutation_sign(perm: &[usize]) -> i32 {
    let mut inversions = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Gale sums along a refinement sequence compared with a reference volume.
#[derive(Clone, Debug, Serialize)]
pub struct GaleConvergence {
    pub ns: Vec<u64>,
    pub values: Vec<f64>,
    /// `(reference - value) * n / Σe` per `n`
    pub scaled_gaps: Vec<f64>,
    /// largest scaled gap, an empirical constant in `gap ≤ C Σe / n`
    pub fitted_constant: f64,
    pub monotone: bool,
    pub below_reference: bool,
}

pub fn gale_convergence(spec: &SpineSpec, ns: &[u64], reference: &Q) -> Result<GaleConvergence> {
    let exact = ns.iter().map(|&n| gale_volume_sum(spec, n)).collect::<Result<Vec<Q>>>()?;
    let sum = spec.exponent_sum() as f64;
    let scaled_gaps: Vec<f64> = exact
        .iter()
        .zip(ns)
        .map(|(v, &n)| crate::rational::to_f64(&(reference - v)) * n as f64 / sum)
        .collect();
    Ok(GaleConvergence {
        ns: ns.to_vec(),
        values: exact.iter().map(crate::rational::to_f64).collect(),
        fitted_constant: scaled_gaps.iter().cloned().fold(0.0, f64::max),
        scaled_gaps,
        monotone: exact.windows(2).all(|w| w[0] <= w[1]),
        below_reference: exact.iter().all(|v| v <= reference),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{exact_volume, RationalPoint, VPolytope};
    use crate::rational::{q, qi};
    use crate::spine::{pfaffian_product, spine_point};

    fn spec(e: &[u32]) -> SpineSpec {
        SpineSpec::new(e.to_vec()).unwrap()
    }

    /// Hull volume of the curve points for dimension at most three.
    fn hull_volume(s: &SpineSpec, n: u64) -> Q {
        let pts: Vec<RationalPoint> = (0..=n)
            .map(|i| spine_point(s, &Q::new(i.into(), n.into())).unwrap())
            .collect();
        exact_volume(&VPolytope::from_points(&pts).unwrap()).unwrap().value
    }

    #[test]
    fn small_values() {
        assert_eq!(gale_volume_sum(&spec(&[1, 2]), 2).unwrap(), q(1, 8));
        assert_eq!(gale_volume_sum(&spec(&[2, 1]), 2).unwrap(), q(1, 8));
        assert_eq!(gale_volume_sum(&spec(&[3]), 5).unwrap(), qi(1));
        assert!(gale_volume_sum(&spec(&[1, 2, 3]), 2).is_err());
    }

    #[test]
    fn matches_exact_hulls() {
        for e in [&[1, 2][..], &[2, 5], &[1, 2, 3], &[3, 4, 5], &[1, 4, 6]] {
            let s = spec(e);
            for n in [3, 4, 7] {
                assert_eq!(gale_volume_sum(&s, n).unwrap(), hull_volume(&s, n), "{s} n={n}");
            }
        }
    }

    #[test]
    fn converges_from_below() {
        let s = spec(&[1, 2]);
        let c = gale_convergence(&s, &[2, 4, 8, 16, 1000], &pfaffian_product(&s).unwrap()).unwrap();
        assert!(c.monotone && c.below_reference);
        assert!((c.values[4] - 1.0 / 6.0).abs() < 1e-5);
        assert!(c.fitted_constant < 1.0);
    }
}

//! Spines (generalized moment curves `p ↦ (p^{e_1}, …, p^{e_d})`), cyclic
//! polytopes on them, and three independent routes to the volume of the
//! spine's convex hull.

mod cyclic;
mod gale;
mod pfaffian;
mod quadrature;
mod schur;
mod table;

pub use cyclic::{cyclic_polytope_on_spine, gale_facets, CyclicPolytope};
pub use gale::{gale_convergence, gale_volume_sum, GaleConvergence};
pub use pfaffian::{pfaffian_eval, pfaffian_product, pfaffian_volume, schur_pfaffian_matrix};
pub use quadrature::{gauss_legendre, spine_volume_integrand_quadrature, QuadratureResult};
pub use schur::{bialternant, schur_eval, Partition, SchurPolynomial};
pub use table::{check_volume_oracles, exponent_sets, volume_row, volume_table_csv, VolumeRow, QUADRATURE_TOLERANCE};

use crate::error::{Error, Result};
use crate::geometry::{membership_batch, Membership, RationalPoint};
use crate::graph::{GraphVector, StatKind};
use crate::rational::{format_q, Q};
use crate::report::CheckReport;
use crate::statistics::build_polytope;
use num_traits::{One, Zero};
use serde_json::json;
use std::fmt;

/// Distinct positive exponents; kept both in input order and sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpineSpec {
    original: Vec<u32>,
    sorted: Vec<u32>,
}

impl SpineSpec {
    pub fn new(exponents: Vec<u32>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::invalid("spine needs at least one exponent"));
        }
        if exponents.contains(&0) {
            return Err(Error::invalid("spine exponents must be positive"));
        }
        let mut sorted = exponents.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("repeated exponent in {exponents:?}")));
        }
        Ok(SpineSpec {
            original: exponents,
            sorted,
        })
    }

    /// Edge counts of the patterns.
    pub fn from_graph_vector(fs: &GraphVector) -> Result<Self> {
        Self::new(fs.edge_counts().iter().map(|&e| e as u32).collect())
    }

    pub fn dim(&self) -> usize {
        self.sorted.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.original
    }

    pub fn ascending(&self) -> &[u32] {
        &self.sorted
    }

    pub fn descending(&self) -> Vec<u32> {
        self.sorted.iter().rev().copied().collect()
    }

    pub fn exponent_sum(&self) -> u32 {
        self.sorted.iter().sum()
    }

    /// `λ_i = e_i - (d - i)` with `e` sorted descending.
    pub fn partition(&self) -> Partition {
        let d = self.dim();
        let parts = self
            .descending()
            .iter()
            .enumerate()
            .map(|(i, &e)| e - (d - 1 - i) as u32)
            .collect();
        Partition::new(parts).expect("distinct positive exponents give a partition")
    }
}

impl fmt::Display for SpineSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.original.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl std::str::FromStr for SpineSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let mut exps = Vec::new();
        let mut pos = s.len() - s.trim_start().len() + usize::from(s.trim_start().starts_with('('));
        for tok in inner.split(',') {
            let t = tok.trim();
            let e: u32 = t
                .parse()
                .map_err(|_| Error::parse(pos, format!("expected a positive integer, got {t:?}")))?;
            exps.push(e);
            pos += tok.len() + 1;
        }
        SpineSpec::new(exps)
    }
}

fn curve_point(exponents: &[u32], p: &Q) -> RationalPoint {
    RationalPoint(exponents.iter().map(|&e| p.pow(e as i32)).collect())
}

/// The spine point at parameter `p`, in the input coordinate order.
pub fn spine_point(spec: &SpineSpec, p: &Q) -> Result<RationalPoint> {
    if *p < Q::zero() || *p > Q::one() {
        return Err(Error::invalid(format!("spine parameter {} outside [0,1]", format_q(p))));
    }
    Ok(curve_point(spec.exponents(), p))
}

/// Membership of the spine at `p = j/grid`, `j = 0..=grid`, in `P_{F;n}`.
pub fn check_spine_containment(fs: &GraphVector, n: usize, grid: u32) -> Result<CheckReport> {
    if grid == 0 {
        return Err(Error::invalid("grid must be positive"));
    }
    let poly = build_polytope(fs, n, StatKind::Density)?;
    let exps: Vec<u32> = fs.edge_counts().iter().map(|&e| e as u32).collect();
    let params: Vec<Q> = (0..=grid).map(|j| Q::new(j.into(), grid.into())).collect();
    let points: Vec<RationalPoint> = params.iter().map(|p| curve_point(&exps, p)).collect();
    let verdicts = membership_batch(&points, &poly.hull)?;
    let mut report = CheckReport::new(
        format!("spine of ({}) lies in P[{};{n}]", fs.label(), fs.label()),
        vec![format!("{} grid points", grid + 1)],
    );
    let mut inside = 0;
    for (p, v) in params.iter().zip(verdicts) {
        match v {
            Membership::Inside(_) => inside += 1,
            Membership::Outside { normal, offset } => report.push(
                false,
                json!({"p": format_q(p), "normal": normal.iter().map(format_q).collect::<Vec<_>>(),
                       "offset": format_q(&offset)}),
            ),
        }
    }
    report.certificates.push(json!({"inside": inside, "total": grid + 1}));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn spec_and_points() {
        let s: SpineSpec = "(3,4,5)".parse().unwrap();
        assert_eq!(spine_point(&s, &qi(1)).unwrap().0, vec![qi(1); 3]);
        assert_eq!(spine_point(&s, &qi(0)).unwrap().0, vec![qi(0); 3]);
        let s = SpineSpec::new(vec![1, 2]).unwrap();
        assert_eq!(spine_point(&s, &q(1, 2)).unwrap().0, vec![q(1, 2), q(1, 4)]);
        assert!(spine_point(&s, &q(3, 2)).is_err());
        assert!(SpineSpec::new(vec![2, 2]).is_err());
        assert!(SpineSpec::new(vec![0, 1]).is_err());
        assert!(matches!("1,x".parse::<SpineSpec>(), Err(Error::Parse { pos: 2, .. })));
        let r = SpineSpec::new(vec![2, 1]).unwrap();
        assert_eq!(r.ascending(), &[1, 2]);
        assert_eq!(r.to_string(), "(2,1)");
    }

    #[test]
    fn partitions() {
        assert_eq!(SpineSpec::new(vec![1, 2]).unwrap().partition().parts(), &[1, 1]);
        assert_eq!(SpineSpec::new(vec![3, 4, 5]).unwrap().partition().parts(), &[3, 3, 3]);
        assert_eq!(SpineSpec::new(vec![1, 6]).unwrap().partition().parts(), &[5, 1]);
    }

    #[test]
    fn containment_small() {
        let fs = GraphVector::parse("K2,P3").unwrap();
        let r = check_spine_containment(&fs, 4, 20).unwrap();
        assert!(r.passed(), "{}", r.to_json());
    }
}

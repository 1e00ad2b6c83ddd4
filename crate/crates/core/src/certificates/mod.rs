//! Nonnegativity certificates for `1 + Σ c_i x^{e_i}` on `[0,1]` from the
//! vertices of a density polytope whose patterns have `e_i` edges.

mod polynomial;

pub use polynomial::SparsePolynomial;

use crate::error::{Error, Result};
use crate::geometry::{dot, Facet, RationalPoint, VPolytope};
use crate::graph::StatKind;
use crate::rational::{format_q, Q};
use crate::report::CheckStatus;
use crate::statistics::{build_polytope, SubgraphPolytope};
use crate::graph::GraphVector;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct GridMin {
    #[serde(with = "crate::rational::serde_q")]
    pub x: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub value: Q,
}

/// Exact minimum of `q` over `{j/grid : 0 ≤ j ≤ grid}`; the first
/// minimizer is reported.
pub fn sample_check(q: &SparsePolynomial, grid: u32) -> Result<GridMin> {
    if grid < 2 {
        return Err(Error::invalid("grid must be at least 2"));
    }
    let best = (0..=grid)
        .into_par_iter()
        .map(|j| {
            let x = Q::new(j.into(), grid.into());
            (q.eval(&x), j)
        })
        .min_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)))
        .expect("nonempty grid");
    Ok(GridMin {
        x: Q::new(best.1.into(), grid.into()),
        value: best.0,
    })
}

/// Outcome of [`certify_nonneg`].
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub polynomial: String,
    pub polytope_id: String,
    /// `pass`: certified; `fail`: refuted on the grid; `inconclusive` otherwise
    pub status: CheckStatus,
    #[serde(with = "crate::rational::serde_q")]
    pub min_inner_product: Q,
    pub tight_vertices: Vec<Vec<String>>,
    /// witness graphs (graph6) of the tight vertices, when recorded
    pub witnesses: Vec<Vec<String>>,
    /// negative grid value found when not certified
    pub refutation: Option<GridMin>,
}

impl Certificate {
    pub fn certified(&self) -> bool {
        self.status == CheckStatus::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

/// Grid used to look for a refutation when the vertex bound fails.
pub const REFUTATION_GRID: u32 = 10_000;

/// `q ≥ 0` on `[0,1]` is certified when `⟨c, v⟩ ≥ -1` at every vertex `v`.
pub fn certify_nonneg(q: &SparsePolynomial, poly: &SubgraphPolytope) -> Result<Certificate> {
    if poly.kind != StatKind::Density {
        return Err(Error::invalid("certificates need a density polytope"));
    }
    let edges: Vec<u32> = poly.fs.edge_counts().iter().map(|&e| e as u32).collect();
    if q.exponents() != edges && !q.terms().is_empty() {
        return Err(Error::invalid(format!(
            "exponents {:?} do not match pattern edge counts {edges:?}",
            q.exponents()
        )));
    }
    let id = format!("P[{};{}]", poly.fs.label(), poly.n);
    certify_against(q, &poly.hull, id)
}

/// [`certify_nonneg`] against an arbitrary vertex list in the coordinate
/// order of the polynomial's terms.
pub fn certify_against(q: &SparsePolynomial, hull: &VPolytope, polytope_id: String) -> Result<Certificate> {
    let c = q.coefficients();
    let inner: Vec<Q> = if c.is_empty() {
        vec![Q::zero(); hull.vertices().len()]
    } else {
        if hull.dim() != c.len() {
            return Err(Error::DimensionMismatch {
                expected: c.len(),
                got: hull.dim(),
            });
        }
        hull.vertices().par_iter().map(|v| dot(&c, &v.0)).collect()
    };
    let min = inner.iter().min().cloned().unwrap_or_else(Q::zero);
    let tight: Vec<usize> = (0..inner.len()).filter(|&i| inner[i] == min).collect();
    let certified = min >= -Q::one();
    let refutation = if certified {
        None
    } else {
        Some(sample_check(q, REFUTATION_GRID)?).filter(|m| m.value < Q::zero())
    };
    let status = if certified {
        CheckStatus::Pass
    } else if refutation.is_some() {
        CheckStatus::Fail
    } else {
        CheckStatus::Inconclusive
    };
    Ok(Certificate {
        polynomial: q.to_string(),
        polytope_id,
        status,
        min_inner_product: min,
        tight_vertices: tight.iter().map(|&i| hull.vertices()[i].0.iter().map(format_q).collect()).collect(),
        witnesses: if hull.has_witnesses() {
            tight.iter().map(|&i| hull.witnesses()[i].clone()).collect()
        } else {
            Vec::new()
        },
        refutation,
    })
}

/// `c = -normal / offset`, so that `⟨c, v⟩ = -1` on the facet. For a
/// positive offset every vertex has `⟨c, w⟩ ≥ -1`; for a negative one the
/// inequality reverses.
pub fn facet_dual(f: &Facet) -> Result<Vec<Q>> {
    if f.offset.is_zero() {
        return Err(Error::invalid("facet hyperplane passes through the origin"));
    }
    Ok(f.normal.0.iter().map(|a| -a / &f.offset).collect())
}

/// The facet whose vertex set contains all of `points`.
pub fn facet_through(facets: &[Facet], poly: &VPolytope, points: &[RationalPoint]) -> Option<Facet> {
    let idx: Vec<usize> = points.iter().map(|p| poly.vertex_index(p)).collect::<Option<_>>()?;
    facets
        .iter()
        .find(|f| idx.iter().all(|i| f.incident_vertices.contains(i)))
        .cloned()
}

/// Minimum inner product of `q`'s coefficients over `P_{F;n}` for each `n`,
/// showing how the certifier tightens with the host order.
pub fn certifier_strength(q: &SparsePolynomial, fs: &GraphVector, ns: &[usize]) -> Result<Vec<(usize, Certificate)>> {
    ns.iter()
        .map(|&n| {
            let poly = build_polytope(fs, n, StatKind::Density)?;
            Ok((n, certify_nonneg(q, &poly)?))
        })
        .collect()
}

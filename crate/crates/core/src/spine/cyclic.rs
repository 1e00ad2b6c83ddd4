use super::{curve_point, SpineSpec};
use crate::error::{Error, Result};
use crate::geometry::linalg::determinant;
use crate::geometry::{extreme_points, RationalPoint, VPolytope};
use crate::rational::{format_q, Q};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

const MAX_FACET_CANDIDATES: u64 = 1_000_000;

/// Points on a spine with their hull and Gale facet list.
#[derive(Clone, Debug)]
pub struct CyclicPolytope {
    pub spec: SpineSpec,
    /// parameters, sorted ascending
    pub xs: Vec<Q>,
    /// curve points in the order of `xs`
    pub points: Vec<RationalPoint>,
    pub polytope: VPolytope,
    /// index sets into `xs`, each sorted
    pub facets: Vec<Vec<usize>>,
}

impl CyclicPolytope {
    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }
}

/// `d`-subsets of `0..n` satisfying Gale's evenness condition.
pub fn gale_facets(n: usize, d: usize) -> Result<Vec<Vec<usize>>> {
    if d == 0 || d >= n {
        return Err(Error::invalid(format!("need 0 < d < n, got d={d}, n={n}")));
    }
    let total = crate::rational::binomial(n as u64, d as u64);
    if total > MAX_FACET_CANDIDATES {
        return Err(Error::Capacity {
            what: "Gale facet candidates",
            limit: MAX_FACET_CANDIDATES as usize,
            got: total as usize,
        });
    }
    let mut out = Vec::new();
    let mut subset = Vec::with_capacity(d);
    subsets(n, d, 0, &mut subset, &mut |s| {
        if gale_even(n, s) {
            out.push(s.to_vec());
        }
    });
    Ok(out)
}

fn subsets(n: usize, d: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if cur.len() == d {
        f(cur);
        return;
    }
    for i in start..=n - (d - cur.len()) {
        cur.push(i);
        subsets(n, d, i + 1, cur, f);
        cur.pop();
    }
}

/// Between any two non-members lies an even number of members.
fn gale_even(n: usize, s: &[usize]) -> bool {
    let members: BTreeSet<usize> = s.iter().copied().collect();
    let outside: Vec<usize> = (0..n).filter(|i| !members.contains(i)).collect();
    outside
        .windows(2)
        .all(|w| members.range(w[0]..w[1]).count() % 2 == 0)
}

/// Normal of the hyperplane through `d` points in `R^d`, by cofactors.
fn hyperplane_normal(pts: &[&RationalPoint]) -> Vec<Q> {
    let d = pts[0].0.len();
    if d == 1 {
        return vec![Q::one()];
    }
    let diffs: Vec<Vec<Q>> = pts[1..].iter().map(|p| p.sub(pts[0])).collect();
    (0..d)
        .map(|j| {
            let minor: Vec<Vec<Q>> = diffs
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, v)| v.clone()).collect())
                .collect();
            let det = determinant(&minor);
            if j % 2 == 0 {
                det
            } else {
                -det
            }
        })
        .collect()
}

/// Curve points at `xs`, their extremality, and the Gale facets, each
/// verified by exact sidedness of its hyperplane.
pub fn cyclic_polytope_on_spine(spec: &SpineSpec, xs: &[Q]) -> Result<CyclicPolytope> {
    let d = spec.dim();
    if xs.len() < d + 1 {
        return Err(Error::invalid(format!("need at least {} points, got {}", d + 1, xs.len())));
    }
    let mut xs = xs.to_vec();
    xs.sort();
    if let Some(w) = xs.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::invalid(format!("repeated parameter {}", format_q(&w[0]))));
    }
    if xs[0] < Q::zero() || xs[xs.len() - 1] > Q::one() {
        return Err(Error::invalid("parameters must lie in [0,1]"));
    }
    let points: Vec<RationalPoint> = xs.iter().map(|x| curve_point(spec.exponents(), x)).collect();
    let polytope = extreme_points(&points)?;
    if polytope.vertices().len() != points.len() {
        return Err(Error::Inconsistency(format!(
            "{} of {} curve points are extreme",
            polytope.vertices().len(),
            points.len()
        )));
    }
    let facets = gale_facets(points.len(), d)?;
    for f in &facets {
        let on: Vec<&RationalPoint> = f.iter().map(|&i| &points[i]).collect();
        let normal = hyperplane_normal(&on);
        let offset = crate::geometry::dot(&normal, &on[0].0);
        let mut side = 0i32;
        for (i, p) in points.iter().enumerate() {
            if f.contains(&i) {
                continue;
            }
            let s = crate::geometry::dot(&normal, &p.0) - &offset;
            let sign = if s.is_positive() {
                1
            } else if s.is_negative() {
                -1
            } else {
                0
            };
            if sign == 0 || (side != 0 && sign != side) {
                return Err(Error::Inconsistency(format!("Gale set {f:?} is not a facet")));
            }
            side = sign;
        }
    }
    Ok(CyclicPolytope {
        spec: spec.clone(),
        xs,
        points,
        polytope,
        facets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ConvexHull;
    use crate::rational::{q, qi};
    use proptest::prelude::*;

    /// Facet vertex sets of the brute-force hull, as sorted index sets into `points`.
    fn hull_facet_sets(points: &[RationalPoint]) -> Result<BTreeSet<Vec<usize>>> {
        let hull = ConvexHull::from_points(points)?;
        Ok(hull
            .facets
            .iter()
            .map(|f| {
                let mut s: Vec<usize> = f.incident_vertices.iter().map(|&v| hull.input_indices[v]).collect();
                s.sort_unstable();
                s
            })
            .collect())
    }

    fn spec(e: &[u32]) -> SpineSpec {
        SpineSpec::new(e.to_vec()).unwrap()
    }

    fn equispaced(n: i64) -> Vec<Q> {
        (0..n).map(|i| q(i, n - 1)).collect()
    }

    #[test]
    fn examples() {
        let t = cyclic_polytope_on_spine(&spec(&[1, 2]), &[qi(0), q(1, 2), qi(1)]).unwrap();
        assert_eq!(t.facet_count(), 3);
        let c = cyclic_polytope_on_spine(&spec(&[1, 2, 3]), &equispaced(6)).unwrap();
        assert_eq!(c.facet_count(), 8);
        let r = cyclic_polytope_on_spine(&spec(&[3, 4, 5]), &equispaced(5)).unwrap();
        assert_eq!(r.polytope.vertices().len(), 5);
        assert!(cyclic_polytope_on_spine(&spec(&[1, 2]), &[qi(0), qi(0), qi(1)]).is_err());
        assert!(cyclic_polytope_on_spine(&spec(&[1, 2]), &[qi(0), qi(1)]).is_err());
    }

    #[test]
    fn facet_counts_in_dimension_four() {
        // C(7,4) has n(n-3)/2 = 14 facets
        let c = cyclic_polytope_on_spine(&spec(&[1, 2, 3, 4]), &equispaced(7)).unwrap();
        assert_eq!(c.facet_count(), 14);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn gale_matches_hull(
            exps in prop::sample::subsequence(vec![1u32, 2, 3, 4, 5, 6], 2..=3),
            raw in prop::collection::btree_set(0i64..=24, 4..=8),
        ) {
            let s = SpineSpec::new(exps).unwrap();
            let xs: Vec<Q> = raw.iter().map(|&i| q(i, 24)).collect();
            prop_assume!(xs.len() > s.dim());
            let c = cyclic_polytope_on_spine(&s, &xs).unwrap();
            let gale: BTreeSet<Vec<usize>> = c.facets.iter().cloned().collect();
            prop_assert_eq!(gale, hull_facet_sets(&c.points).unwrap());
        }
    }
}

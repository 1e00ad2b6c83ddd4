use super::lp::{feasible_point, lp_optimize, Constraint, LpOutcome};
use super::{dot, ConvexHull, RationalPoint};
use crate::error::{Error, Result};
use crate::rational::Q;
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Convex hull of a finite point set, stored by its (exact, certified) vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VPolytope {
    dim: usize,
    vertices: Vec<RationalPoint>,
    /// one list of witness identifiers per vertex, possibly empty
    witnesses: Vec<Vec<String>>,
}

impl VPolytope {
    /// Hull of `points`; drops duplicates and non-extreme points.
    pub fn from_points(points: &[RationalPoint]) -> Result<Self> {
        extreme_points(points)
    }

    /// Wraps a vertex list that is already known to be extreme and deduplicated.
    pub(crate) fn from_vertices_unchecked(dim: usize, vertices: Vec<RationalPoint>) -> Self {
        let witnesses = vec![Vec::new(); vertices.len()];
        VPolytope {
            dim,
            vertices,
            witnesses,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[RationalPoint] {
        &self.vertices
    }

    pub fn witnesses(&self) -> &[Vec<String>] {
        &self.witnesses
    }

    pub fn has_witnesses(&self) -> bool {
        self.witnesses.iter().any(|w| !w.is_empty())
    }

    pub fn set_witnesses(&mut self, witnesses: Vec<Vec<String>>) -> Result<()> {
        if witnesses.len() != self.vertices.len() {
            return Err(Error::DimensionMismatch {
                expected: self.vertices.len(),
                got: witnesses.len(),
            });
        }
        self.witnesses = witnesses;
        Ok(())
    }

    pub fn vertex_index(&self, p: &RationalPoint) -> Option<usize> {
        self.vertices.iter().position(|v| v == p)
    }

    /// The dilate `kP`.
    pub fn dilated(&self, k: &Q) -> Result<Self> {
        if k.is_zero() && self.vertices.len() > 1 {
            return Err(Error::invalid("dilation by zero collapses the polytope"));
        }
        if *k < Q::zero() {
            return Err(Error::invalid("dilation factor must be positive"));
        }
        Ok(VPolytope {
            dim: self.dim,
            vertices: self.vertices.iter().map(|v| v.scaled(k)).collect(),
            witnesses: self.witnesses.clone(),
        })
    }

    pub fn contains(&self, p: &RationalPoint) -> Result<bool> {
        Ok(matches!(membership(p, self)?, Membership::Inside(_)))
    }

    pub fn is_integral(&self) -> bool {
        self.vertices.iter().all(RationalPoint::is_integral)
    }

    /// Coordinatewise bounding box `(lo, hi)`.
    pub fn bounding_box(&self) -> (Vec<Q>, Vec<Q>) {
        let mut lo = self.vertices[0].0.clone();
        let mut hi = lo.clone();
        for v in &self.vertices[1..] {
            for j in 0..self.dim {
                if v[j] < lo[j] {
                    lo[j] = v[j].clone();
                }
                if v[j] > hi[j] {
                    hi[j] = v[j].clone();
                }
            }
        }
        (lo, hi)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// convex coefficients, one per vertex
    Inside(Vec<Q>),
    /// `⟨normal, p⟩ > offset ≥ ⟨normal, v⟩` for every vertex `v`
    Outside { normal: Vec<Q>, offset: Q },
}

pub fn membership(p: &RationalPoint, poly: &VPolytope) -> Result<Membership> {
    if p.dim() != poly.dim {
        return Err(Error::DimensionMismatch {
            expected: poly.dim,
            got: p.dim(),
        });
    }
    membership_in(p, &poly.vertices)
}

/// Membership of many points, evaluated in parallel.
pub fn membership_batch(points: &[RationalPoint], poly: &VPolytope) -> Result<Vec<Membership>> {
    points.par_iter().map(|p| membership(p, poly)).collect()
}

/// Membership of `p` in the convex hull of `pts` with an exact certificate.
pub fn membership_in(p: &RationalPoint, pts: &[RationalPoint]) -> Result<Membership> {
    if pts.is_empty() {
        return Err(Error::invalid("membership in an empty polytope"));
    }
    let d = p.dim();
    if let Some(bad) = pts.iter().find(|v| v.dim() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: bad.dim(),
        });
    }
    if let Some(i) = pts.iter().position(|v| v == p) {
        let mut lambda = vec![Q::zero(); pts.len()];
        lambda[i] = Q::one();
        return Ok(Membership::Inside(lambda));
    }
    // λ ≥ 0, Σλ = 1, Σ λ_i v_i = p
    let mut cons = Vec::with_capacity(d + 1);
    cons.push(Constraint::eq(vec![Q::one(); pts.len()], Q::one()));
    for j in 0..d {
        cons.push(Constraint::eq(
            pts.iter().map(|v| v[j].clone()).collect(),
            p[j].clone(),
        ));
    }
    if let Some(lambda) = feasible_point(pts.len(), &cons) {
        verify_inside(p, pts, &lambda)?;
        return Ok(Membership::Inside(lambda));
    }
    let (normal, offset) = separate(p, pts)?
        .ok_or_else(|| Error::Inconsistency("primal infeasible but no separating hyperplane".into()))?;
    Ok(Membership::Outside { normal, offset })
}

/// Maximize `⟨c,p⟩ - b` subject to `⟨c,v⟩ ≤ b` and `-1 ≤ c_j ≤ 1`; returns
/// the verified pair when the margin is positive.
fn separate(p: &RationalPoint, pts: &[RationalPoint]) -> Result<Option<(Vec<Q>, Q)>> {
    let d = p.dim();
    let mut objective = p.0.clone();
    objective.push(-Q::one());
    let mut cons = Vec::with_capacity(pts.len() + 2 * d);
    for v in pts {
        let mut row = v.0.clone();
        row.push(-Q::one());
        cons.push(Constraint::le(row, Q::zero()));
    }
    for j in 0..d {
        let mut e = vec![Q::zero(); d + 1];
        e[j] = Q::one();
        cons.push(Constraint::le(e.clone(), Q::one()));
        cons.push(Constraint::ge(e, -Q::one()));
    }
    match lp_optimize(&objective, &cons)? {
        LpOutcome::Optimal { value, mut point } if value > Q::zero() => {
            let b = point.pop().expect("offset variable");
            // tighten the offset to the support value
            let support = pts
                .iter()
                .map(|v| v.dot(&point))
                .max()
                .expect("nonempty");
            let b = if support < b { support } else { b };
            verify_outside(p, pts, &point, &b)?;
            Ok(Some((point, b)))
        }
        LpOutcome::Optimal { .. } => Ok(None),
        other => Err(Error::Inconsistency(format!("separation LP returned {other:?}"))),
    }
}

fn verify_inside(p: &RationalPoint, pts: &[RationalPoint], lambda: &[Q]) -> Result<()> {
    let sum: Q = lambda.iter().sum();
    let ok = sum.is_one()
        && lambda.iter().all(|l| *l >= Q::zero())
        && (0..p.dim()).all(|j| {
            let c: Vec<Q> = pts.iter().map(|v| v[j].clone()).collect();
            dot(&c, lambda) == p[j]
        });
    if ok {
        Ok(())
    } else {
        Err(Error::Inconsistency("convex combination failed verification".into()))
    }
}

fn verify_outside(p: &RationalPoint, pts: &[RationalPoint], c: &[Q], b: &Q) -> Result<()> {
    if p.dot(c) > *b && pts.iter().all(|v| v.dot(c) <= *b) {
        Ok(())
    } else {
        Err(Error::Inconsistency("separating hyperplane failed verification".into()))
    }
}

/// Per-input certificate produced by [`extreme_points_certified`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointStatus {
    /// vertex `vertex` of the output; `⟨normal, v⟩ > offset ≥ ⟨normal, w⟩` for every other input `w`
    Extreme {
        vertex: usize,
        normal: Vec<Q>,
        offset: Q,
    },
    /// convex combination `(vertex index, weight)` of output vertices
    Interior { combination: Vec<(usize, Q)> },
    /// equal to input point `of`
    Duplicate { of: usize },
}

/// Extreme points in input order (first occurrence of duplicates). Full
/// dimensional inputs of dimension at most three go through the exact hull;
/// everything else through [`extreme_points_certified`].
pub fn extreme_points(points: &[RationalPoint]) -> Result<VPolytope> {
    let d = points.first().map_or(0, RationalPoint::dim);
    if (1..=3).contains(&d) && points.iter().all(|p| p.dim() == d) {
        match ConvexHull::from_points(points) {
            Ok(h) => {
                let mut first_seen: BTreeMap<&RationalPoint, usize> = BTreeMap::new();
                for (i, p) in points.iter().enumerate() {
                    first_seen.entry(p).or_insert(i);
                }
                let mut idx: Vec<usize> = h.input_indices.iter().map(|&i| first_seen[&points[i]]).collect();
                idx.sort_unstable();
                idx.dedup();
                return Ok(VPolytope::from_vertices_unchecked(d, idx.iter().map(|&i| points[i].clone()).collect()));
            }
            Err(Error::Degenerate { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    extreme_points_certified(points).map(|(p, _)| p)
}

/// Extreme points of `points` with an exact LP certificate for every input.
pub fn extreme_points_certified(points: &[RationalPoint]) -> Result<(VPolytope, Vec<PointStatus>)> {
    let first = points
        .first()
        .ok_or_else(|| Error::invalid("extreme points of an empty set"))?;
    let d = first.dim();
    if let Some(bad) = points.iter().find(|v| v.dim() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: bad.dim(),
        });
    }
    let mut first_seen: BTreeMap<&RationalPoint, usize> = BTreeMap::new();
    let mut status: Vec<Option<PointStatus>> = vec![None; points.len()];
    let mut uniq: Vec<usize> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        match first_seen.get(p) {
            Some(&j) => status[i] = Some(PointStatus::Duplicate { of: j }),
            None => {
                first_seen.insert(p, i);
                uniq.push(i);
            }
        }
    }

    // candidates, seeded with lexicographic and per-axis extremes
    let mut cand: Vec<usize> = Vec::new();
    let push = |cand: &mut Vec<usize>, i: usize| {
        if !cand.contains(&i) {
            cand.push(i);
        }
    };
    let lex = |key: &dyn Fn(&RationalPoint) -> Q| -> usize {
        *uniq
            .iter()
            .max_by(|&&a, &&b| {
                key(&points[a])
                    .cmp(&key(&points[b]))
                    .then_with(|| points[a].cmp(&points[b]))
            })
            .expect("nonempty")
    };
    push(&mut cand, lex(&|_| Q::zero()));
    push(
        &mut cand,
        *uniq.iter().min_by_key(|&&i| &points[i]).expect("nonempty"),
    );
    for j in 0..d {
        push(&mut cand, lex(&|p| p[j].clone()));
        push(&mut cand, lex(&|p| -p[j].clone()));
    }

    let mut interior: Vec<(usize, Vec<(usize, Q)>)> = Vec::new();
    for &i in &uniq {
        if cand.contains(&i) {
            continue;
        }
        loop {
            let cpts: Vec<RationalPoint> = cand.iter().map(|&c| points[c].clone()).collect();
            match membership_in(&points[i], &cpts)? {
                Membership::Inside(lambda) => {
                    let comb = cand
                        .iter()
                        .zip(lambda)
                        .filter(|(_, l)| !l.is_zero())
                        .map(|(&c, l)| (c, l))
                        .collect();
                    interior.push((i, comb));
                    break;
                }
                Membership::Outside { normal, .. } => {
                    let w = lex(&|p| p.dot(&normal));
                    if cand.contains(&w) {
                        return Err(Error::Inconsistency(
                            "separating functional maximized at an existing candidate".into(),
                        ));
                    }
                    cand.push(w);
                }
            }
        }
    }

    cand.sort_unstable();
    let vertices: Vec<RationalPoint> = cand.iter().map(|&c| points[c].clone()).collect();
    let out_index: BTreeMap<usize, usize> = cand.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let all_uniq: Vec<RationalPoint> = uniq.iter().map(|&i| points[i].clone()).collect();

    let certs: Vec<Result<(Vec<Q>, Q)>> = cand
        .par_iter()
        .map(|&c| certify_vertex(c, points, &cand, &uniq, &all_uniq))
        .collect();
    for (k, (&c, cert)) in cand.iter().zip(certs).enumerate() {
        let (normal, offset) = cert?;
        status[c] = Some(PointStatus::Extreme {
            vertex: k,
            normal,
            offset,
        });
    }
    for (i, comb) in interior {
        let combination = comb.into_iter().map(|(c, l)| (out_index[&c], l)).collect();
        status[i] = Some(PointStatus::Interior { combination });
    }
    let status = status
        .into_iter()
        .map(|s| s.expect("every input classified"))
        .collect();
    Ok((VPolytope::from_vertices_unchecked(d, vertices), status))
}

fn certify_vertex(
    c: usize,
    points: &[RationalPoint],
    cand: &[usize],
    uniq: &[usize],
    all_uniq: &[RationalPoint],
) -> Result<(Vec<Q>, Q)> {
    let v = &points[c];
    let others: Vec<RationalPoint> = cand
        .iter()
        .filter(|&&o| o != c)
        .map(|&o| points[o].clone())
        .collect();
    if others.is_empty() && uniq.len() == 1 {
        return Ok((vec![Q::zero(); v.dim()], -Q::one()));
    }
    let holds = |(n, b): &(Vec<Q>, Q)| {
        all_uniq.iter().filter(|w| *w != v).all(|w| w.dot(n) <= *b)
    };
    if let Some(cert) = separate(v, &others)? {
        if holds(&cert) {
            return Ok(cert);
        }
    }
    let rest: Vec<RationalPoint> = all_uniq.iter().filter(|w| *w != v).cloned().collect();
    separate(v, &rest)?
        .ok_or_else(|| Error::Inconsistency(format!("candidate {c} is not extreme")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};
    use proptest::prelude::*;

    fn pt(xs: &[i64]) -> RationalPoint {
        RationalPoint(xs.iter().map(|&x| qi(x)).collect())
    }

    fn cube() -> Vec<RationalPoint> {
        (0..8)
            .map(|m| pt(&[m & 1, (m >> 1) & 1, (m >> 2) & 1]))
            .collect()
    }

    #[test]
    fn square_with_interior_point() {
        let pts = vec![pt(&[0, 0]), pt(&[1, 0]), pt(&[0, 1]), RationalPoint(vec![q(1, 4), q(1, 4)])];
        let (p, st) = extreme_points_certified(&pts).unwrap();
        assert_eq!(p.vertices(), &pts[..3]);
        assert!(matches!(st[3], PointStatus::Interior { .. }));
    }

    #[test]
    fn collinear_and_duplicates() {
        let pts = vec![pt(&[0]), RationalPoint(vec![q(1, 2)]), pt(&[1]), pt(&[0])];
        let (p, st) = extreme_points_certified(&pts).unwrap();
        assert_eq!(p.vertices(), &[pt(&[0]), pt(&[1])]);
        assert_eq!(st[3], PointStatus::Duplicate { of: 0 });
        let single = extreme_points(&[pt(&[3, 3]), pt(&[3, 3])]).unwrap();
        assert_eq!(single.vertices().len(), 1);
    }

    #[test]
    fn membership_examples() {
        let p = VPolytope::from_points(&cube()).unwrap();
        assert_eq!(p.vertices().len(), 8);
        let centroid = RationalPoint(vec![q(1, 2); 3]);
        assert!(matches!(membership(&centroid, &p).unwrap(), Membership::Inside(_)));
        match membership(&pt(&[1, 1, 0]), &p).unwrap() {
            Membership::Inside(l) => assert_eq!(l.iter().filter(|x| x.is_one()).count(), 1),
            other => panic!("{other:?}"),
        }
        match membership(&pt(&[2, 2, 2]), &p).unwrap() {
            Membership::Outside { normal, offset } => {
                assert!(pt(&[2, 2, 2]).dot(&normal) > offset);
            }
            other => panic!("{other:?}"),
        }
        assert!(membership(&pt(&[1, 1]), &p).is_err());
        assert!(membership_in(&pt(&[1]), &[]).is_err());
    }

    fn small_points(d: usize) -> impl Strategy<Value = Vec<RationalPoint>> {
        prop::collection::vec(
            prop::collection::vec((-4i64..=4, 1i64..=3), d)
                .prop_map(|v| RationalPoint(v.into_iter().map(|(a, b)| q(a, b)).collect())),
            1..9,
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn hull_path_matches_lp_path(pts in (1usize..=3).prop_flat_map(small_points)) {
            let fast = extreme_points(&pts).unwrap();
            let (lp, _) = extreme_points_certified(&pts).unwrap();
            prop_assert_eq!(fast.vertices(), lp.vertices());
        }

        #[test]
        fn certificates_and_leave_one_out(pts in (1usize..=3).prop_flat_map(small_points)) {
            let (poly, status) = extreme_points_certified(&pts).unwrap();
            for (i, s) in status.iter().enumerate() {
                match s {
                    PointStatus::Extreme { vertex, normal, offset } => {
                        prop_assert_eq!(&poly.vertices()[*vertex], &pts[i]);
                        prop_assert!(pts[i].dot(normal) > *offset);
                        for (j, w) in pts.iter().enumerate() {
                            if w != &pts[i] {
                                prop_assert!(w.dot(normal) <= *offset, "{} {}", i, j);
                            }
                        }
                    }
                    PointStatus::Interior { combination } => {
                        let mut acc = RationalPoint::zero(pts[i].dim());
                        for (k, l) in combination {
                            for j in 0..acc.dim() {
                                acc.0[j] += &poly.vertices()[*k][j] * l;
                            }
                        }
                        prop_assert_eq!(&acc, &pts[i]);
                    }
                    PointStatus::Duplicate { of } => prop_assert_eq!(&pts[*of], &pts[i]),
                }
            }
            // v is extreme iff it is outside the hull of the remaining points
            let mut uniq = pts.clone();
            uniq.sort();
            uniq.dedup();
            if uniq.len() > 1 {
                for v in &uniq {
                    let rest: Vec<_> = uniq.iter().filter(|w| *w != v).cloned().collect();
                    let outside = matches!(membership_in(v, &rest).unwrap(), Membership::Outside { .. });
                    prop_assert_eq!(outside, poly.vertex_index(v).is_some());
                }
            }
        }
    }
}

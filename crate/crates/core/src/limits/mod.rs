//! Finite approximations of the limit body `P_{F;∞} = ∩_n P_{F;n}`, the
//! edge–triangle boundary polygon, tails of clique densities, and harnesses
//! that gather evidence about conjectured vertex descriptions.

mod manifest;
mod tail;

pub use manifest::{run_experiment, ExperimentManifest, ExperimentReport};
pub use tail::{check_tail_cyclic, tail_point, tail_points, TailSpec};

use crate::error::{Error, Result};
use crate::geometry::{exact_volume, extreme_points, membership_batch, ConvexHull, Membership, RationalPoint, VPolytope};
use crate::graph::{stat_vector, turan_graph, Graph, GraphVector, StatKind};
use crate::rational::{format_q, to_f64, Q};
use crate::report::CheckReport;
use crate::statistics::build_polytope;
use crate::zonotope::zonotope_sample;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::json;

/// `conv{(0,0), (1,1), (1 - 1/k, (k-1)(k-2)/k²) : 2 ≤ k ≤ K}`.
pub fn razborov_polygon(max_parts: u32) -> Result<VPolytope> {
    if max_parts < 2 {
        return Err(Error::invalid("at least two parts required"));
    }
    let tail = TailSpec::new(vec![2, 3]).expect("valid orders");
    let mut pts = vec![RationalPoint(vec![Q::zero(), Q::zero()]), RationalPoint(vec![Q::one(), Q::one()])];
    pts.extend(tail_points(&tail, &(2..=max_parts).collect::<Vec<_>>())?);
    extreme_points(&pts)
}

/// Membership of each point, by exact facets in dimension at most three and
/// by LP otherwise. Returns indices of points outside.
fn outside_points(points: &[RationalPoint], body: &VPolytope) -> Result<Vec<usize>> {
    if body.dim() <= 3 {
        if let Ok(h) = ConvexHull::from_points(body.vertices()) {
            return Ok((0..points.len()).filter(|&i| !h.contains(&points[i])).collect());
        }
    }
    Ok(membership_batch(points, body)?
        .into_iter()
        .enumerate()
        .filter_map(|(i, m)| matches!(m, Membership::Outside { .. }).then_some(i))
        .collect())
}

fn point_json(p: &RationalPoint) -> serde_json::Value {
    json!(p.0.iter().map(format_q).collect::<Vec<_>>())
}

/// Clique orders when every pattern is complete, in pattern order.
fn clique_orders(fs: &GraphVector) -> Option<Vec<u32>> {
    fs.patterns()
        .iter()
        .map(|g| {
            let k = g.order();
            (g.edge_count() == k * (k - 1) / 2).then_some(k as u32)
        })
        .collect()
}

fn squared_distance(a: &RationalPoint, b: &RationalPoint) -> Q {
    a.0.iter().zip(&b.0).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Inclusions of limit points in the finite polytopes `P_{F;n}`, `n ≤ n_max`:
/// the edge–triangle polygon for `(K2,K3)`, tail points and `1` for clique
/// vectors, Turán statistics approaching their tail point, and volumes
/// non-increasing in `n` in dimension at most three.
pub fn check_limit_inclusions(fs: &GraphVector, n_max: usize) -> Result<CheckReport> {
    let n0 = fs.max_order();
    if n_max < n0 {
        return Err(Error::invalid(format!("n_max {n_max} below the largest pattern order {n0}")));
    }
    let mut report = CheckReport::new(
        format!("limit points of ({}) lie in every P[n]", fs.label()),
        vec![format!("n = {n0}..={n_max}")],
    );
    let polys = (n0..=n_max)
        .map(|n| build_polytope(fs, n, StatKind::Density))
        .collect::<Result<Vec<_>>>()?;
    let orders = clique_orders(fs);
    let tail = orders.as_ref().and_then(|o| TailSpec::new(o.clone()).ok());
    if orders.as_deref() == Some(&[2, 3][..]) {
        let polygon = razborov_polygon(10)?;
        for p in &polys {
            let out = outside_points(polygon.vertices(), &p.hull)?;
            report.push(
                out.is_empty(),
                json!({"check": "edge-triangle polygon", "n": p.n,
                       "outside": out.iter().map(|&i| point_json(&polygon.vertices()[i])).collect::<Vec<_>>()}),
            );
        }
    }
    if let Some(tail) = &tail {
        let mut pts = tail_points(tail, &(1..=10).collect::<Vec<_>>())?;
        pts.push(RationalPoint(vec![Q::one(); tail.dim()]));
        for p in &polys {
            let out = outside_points(&pts, &p.hull)?;
            report.push(
                out.is_empty(),
                json!({"check": "tail points", "n": p.n,
                       "outside": out.iter().map(|&i| point_json(&pts[i])).collect::<Vec<_>>()}),
            );
        }
        for k in 2..=n_max as u32 {
            let target = tail_point(tail, &Q::new(1.into(), k.into()))?;
            let start = n0.max(k as usize);
            let dists: Vec<Q> = (start..=n_max)
                .map(|n| {
                    let g = turan_graph(k as usize, n)?;
                    Ok(squared_distance(&RationalPoint(stat_vector(fs, &g, StatKind::Density).values), &target))
                })
                .collect::<Result<_>>()?;
            report.push(
                dists.windows(2).all(|w| w[1] <= w[0]),
                json!({"check": "turan convergence", "k": k, "n_from": start,
                       "squared_distances": dists.iter().map(to_f64).collect::<Vec<_>>()}),
            );
        }
    }
    if fs.len() <= 3 {
        let vols = polys
            .iter()
            .map(|p| exact_volume(&p.hull).map(|v| v.value))
            .collect::<Result<Vec<Q>>>()?;
        report.push(
            vols.windows(2).all(|w| w[1] <= w[0]),
            json!({"check": "volumes non-increasing", "volumes": vols.iter().map(format_q).collect::<Vec<_>>()}),
        );
    }
    Ok(report)
}

/// Classification of evidence about a conjectured limit body.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Evidence {
    Consistent,
    Inconclusive,
    /// a limit point outside the extended inner body; needs asymptotic analysis
    CandidateCounterexample,
}

/// Tail parameters used for the extended inner body.
pub const EXTENDED_TAIL: u32 = 256;

#[derive(Clone, Debug, Serialize)]
pub struct ConjectureGap {
    pub tail: String,
    pub host_n: usize,
    pub max_k: u32,
    pub inner_vertices: usize,
    pub inner_inside_outer: bool,
    pub inner_degenerate: bool,
    /// exact in dimension at most three
    pub inner_volume: Option<String>,
    pub outer_volume: Option<String>,
    pub volume_gap: Option<f64>,
    pub samples: u64,
    /// sampled limit points outside `conv(1, s(1/k) : k ≤ K)`
    pub outside_inner: usize,
    /// of those, outside the body with `k ≤ EXTENDED_TAIL`
    pub outside_extended: usize,
    pub evidence: Evidence,
    pub examples: Vec<serde_json::Value>,
}

fn inner_body(spec: &TailSpec, max_k: u32) -> Result<VPolytope> {
    let mut pts = tail_points(spec, &(1..=max_k).collect::<Vec<_>>())?;
    pts.push(RationalPoint(vec![Q::one(); spec.dim()]));
    extreme_points(&pts)
}

/// Compares `I = conv(1, s(1/k) : k ≤ K)` with `P_{(K_e);host_n}` and tests
/// zonotope samples (kernel sizes 1 to 4), which are limit points, against `I`.
pub fn conjecture_gap(spec: &TailSpec, host_n: usize, max_k: u32, samples: u64, seed: u64) -> Result<ConjectureGap> {
    if max_k == 0 {
        return Err(Error::invalid("K must be positive"));
    }
    let fs = GraphVector::parse(&spec.patterns())?;
    let outer = build_polytope(&fs, host_n, StatKind::Density)?;
    let inner = inner_body(spec, max_k)?;
    let inner_inside = outside_points(inner.vertices(), &outer.hull)?.is_empty();
    if !inner_inside {
        return Err(Error::Inconsistency(format!("tail body for {spec} leaves P[{host_n}]")));
    }
    let (inner_volume, outer_volume, inner_degenerate) = if spec.dim() <= 3 {
        let iv = exact_volume(&inner)?;
        let ov = exact_volume(&outer.hull)?;
        (Some(iv.value), Some(ov.value), iv.degenerate)
    } else {
        (None, None, crate::geometry::affine_rank(inner.vertices()) < spec.dim())
    };
    let mut gap = ConjectureGap {
        tail: spec.to_string(),
        host_n,
        max_k,
        inner_vertices: inner.vertices().len(),
        inner_inside_outer: inner_inside,
        inner_degenerate,
        volume_gap: match (&inner_volume, &outer_volume) {
            (Some(i), Some(o)) => Some(to_f64(&(o - i))),
            _ => None,
        },
        inner_volume: inner_volume.as_ref().map(format_q),
        outer_volume: outer_volume.as_ref().map(format_q),
        samples,
        outside_inner: 0,
        outside_extended: 0,
        evidence: Evidence::Consistent,
        examples: Vec::new(),
    };
    if samples == 0 {
        return Ok(gap);
    }
    let per_size = samples.div_ceil(4);
    let mut points = Vec::new();
    for size in 1..=4 {
        points.extend(zonotope_sample(&fs, size, per_size, seed.wrapping_add(size as u64))?.points);
    }
    let out = outside_points(&points, &inner)?;
    gap.outside_inner = out.len();
    if !out.is_empty() {
        let extended = inner_body(spec, EXTENDED_TAIL)?;
        let candidates: Vec<RationalPoint> = out.iter().map(|&i| points[i].clone()).collect();
        let far = outside_points(&candidates, &extended)?;
        gap.outside_extended = far.len();
        gap.evidence = if far.is_empty() {
            Evidence::Inconclusive
        } else {
            Evidence::CandidateCounterexample
        };
        let show: Vec<usize> = if far.is_empty() { (0..candidates.len()).collect() } else { far };
        gap.examples = show.iter().take(5).map(|&i| point_json(&candidates[i])).collect();
    }
    Ok(gap)
}

#[derive(Clone, Debug, Serialize)]
pub struct ChopRow {
    #[serde(with = "crate::rational::serde_q")]
    pub depth: Q,
    /// area removed by the cut `x + y ≥ 2 - depth`
    #[serde(with = "crate::rational::serde_q")]
    pub removed: Q,
    pub removed_f64: f64,
    /// vertices of the polygon strictly beyond the cut
    pub vertices_removed: usize,
    /// vertices of the chopped polygon
    pub vertices_left: usize,
}

/// Area that one cut near `(1,1)` removes from the edge–triangle polygon
/// with `max_parts` parts, per cut depth.
pub fn chop_profile(max_parts: u32, depths: &[Q]) -> Result<Vec<ChopRow>> {
    let poly = razborov_polygon(max_parts)?;
    let hull = ConvexHull::from_points(poly.vertices())?;
    let cycle: Vec<RationalPoint> = hull.polygon_cycle().iter().map(|&i| hull.vertices[i].clone()).collect();
    let total = hull.volume();
    depths
        .iter()
        .map(|d| {
            if *d < Q::zero() || *d > Q::from_integer(2.into()) {
                return Err(Error::invalid("depth must lie in [0,2]"));
            }
            let level = Q::from_integer(2.into()) - d;
            // keep x + y ≤ level
            let kept = clip(&cycle, &level);
            let area = shoelace(&kept);
            let removed = &total - &area;
            Ok(ChopRow {
                depth: d.clone(),
                removed_f64: to_f64(&removed),
                removed,
                vertices_removed: cycle.iter().filter(|p| &p.0[0] + &p.0[1] > level).count(),
                vertices_left: kept.len(),
            })
        })
        .collect()
}

fn clip(cycle: &[RationalPoint], level: &Q) -> Vec<RationalPoint> {
    let val = |p: &RationalPoint| &p.0[0] + &p.0[1] - level;
    let mut out: Vec<RationalPoint> = Vec::new();
    for i in 0..cycle.len() {
        let (a, b) = (&cycle[i], &cycle[(i + 1) % cycle.len()]);
        let (va, vb) = (val(a), val(b));
        if va <= Q::zero() {
            out.push(a.clone());
        }
        if (va < Q::zero() && vb > Q::zero()) || (va > Q::zero() && vb < Q::zero()) {
            let t = &va / (&va - &vb);
            out.push(RationalPoint(a.0.iter().zip(&b.0).map(|(x, y)| x + &t * (y - x)).collect()));
        }
    }
    out.dedup();
    if out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

fn shoelace(cycle: &[RationalPoint]) -> Q {
    let n = cycle.len();
    if n < 3 {
        return Q::zero();
    }
    let twice: Q = (0..n)
        .map(|i| {
            let (a, b) = (&cycle[i], &cycle[(i + 1) % n]);
            &a.0[0] * &b.0[1] - &a.0[1] * &b.0[0]
        })
        .sum();
    twice / Q::from_integer(2.into())
}

/// Outer polytope, inner body of limit points, and their gap.
#[derive(Clone, Debug, Serialize)]
pub struct LimitApproximation {
    pub patterns: String,
    pub host_n: usize,
    pub outer_vertices: usize,
    pub inner_vertices: usize,
    pub inner_points: usize,
    pub inner_inside_outer: bool,
    pub outer_volume: Option<String>,
    pub inner_volume: Option<String>,
    /// inner over outer volume
    pub ratio: Option<f64>,
}

/// Inner body: zonotope samples with kernel size `kernel_size`, plus tail
/// points and `1` when every pattern is a clique.
pub fn limit_approximation(
    fs: &GraphVector,
    host_n: usize,
    kernel_size: usize,
    count: u64,
    seed: u64,
) -> Result<(LimitApproximation, VPolytope, VPolytope)> {
    let outer = build_polytope(fs, host_n, StatKind::Density)?;
    let mut pts = zonotope_sample(fs, kernel_size, count, seed)?.points;
    if let Some(tail) = clique_orders(fs).and_then(|o| TailSpec::new(o).ok()) {
        pts.extend(tail_points(&tail, &(1..=16).collect::<Vec<_>>())?);
    }
    let inner = extreme_points(&pts)?;
    let inside = outside_points(inner.vertices(), &outer.hull)?.is_empty();
    let (ov, iv) = if fs.len() <= 3 {
        (Some(exact_volume(&outer.hull)?.value), Some(exact_volume(&inner)?.value))
    } else {
        (None, None)
    };
    let approx = LimitApproximation {
        patterns: fs.label(),
        host_n,
        outer_vertices: outer.hull.vertices().len(),
        inner_vertices: inner.vertices().len(),
        inner_points: pts.len(),
        inner_inside_outer: inside,
        ratio: match (&iv, &ov) {
            (Some(i), Some(o)) if !o.is_zero() => Some(to_f64(&(i / o))),
            _ => None,
        },
        outer_volume: ov.as_ref().map(format_q),
        inner_volume: iv.as_ref().map(format_q),
    };
    Ok((approx, outer.hull, inner))
}

/// Densities of `(K_{e_1}, …)` in the Turán graph `T(k, n)`.
pub fn turan_point(spec: &TailSpec, k: usize, n: usize) -> Result<RationalPoint> {
    let g = turan_graph(k, n)?;
    spec.orders()
        .iter()
        .map(|&e| Ok(crate::graph::density(&Graph::complete(e as usize)?, &g)))
        .collect::<Result<Vec<_>>>()
        .map(RationalPoint)
}

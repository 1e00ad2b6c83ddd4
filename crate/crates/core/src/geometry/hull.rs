//! Exact convex hulls in dimension at most three.
//!
//! Coordinates are scaled per axis to integers; orientation tests run a
//! floating-point filter first and fall back to big-integer determinants.

use super::linalg::{affine_hull, rank};
use super::polytope::VPolytope;
use super::RationalPoint;
use crate::error::{Error, Result};
use crate::rational::{common_denominator, Q};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

/// Supporting hyperplane `⟨normal, x⟩ = offset` with the polytope on the `≤` side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Facet {
    pub normal: RationalPoint,
    #[serde(with = "crate::rational::serde_q")]
    pub offset: Q,
    pub incident_vertices: Vec<usize>,
}

impl Facet {
    pub fn slack(&self, p: &RationalPoint) -> Q {
        &self.offset - p.dot(&self.normal.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexHull {
    pub dim: usize,
    /// hull vertices in input order
    pub vertices: Vec<RationalPoint>,
    /// input index of each vertex
    pub input_indices: Vec<usize>,
    pub facets: Vec<Facet>,
    /// boundary points used by `triangles`; a superset of `vertices`
    pub surface: Vec<RationalPoint>,
    /// outward boundary triangles (3D only), indices into `surface`
    pub triangles: Vec<[usize; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Volume {
    pub value: Q,
    pub degenerate: bool,
}

impl ConvexHull {
    pub fn from_points(points: &[RationalPoint]) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| Error::invalid("hull of an empty point set"))?;
        let dim = first.dim();
        if let Some(bad) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: bad.dim(),
            });
        }
        if dim == 0 || dim > 3 {
            return Err(Error::Capacity {
                what: "hull dimension",
                limit: 3,
                got: dim,
            });
        }
        let affine = affine_hull(points).expect("nonempty").dim();
        if affine < dim {
            return Err(Error::Degenerate {
                dim,
                affine_dim: affine,
            });
        }
        let grid = IntGrid::new(points);
        let (order, triangles) = match dim {
            1 => (hull_1d(&grid), Vec::new()),
            2 => (hull_2d(&grid), Vec::new()),
            _ => hull_3d(&grid)?,
        };
        Ok(assemble(points, &grid, order, triangles))
    }

    pub fn to_polytope(&self) -> VPolytope {
        VPolytope::from_vertices_unchecked(self.dim, self.vertices.clone())
    }

    /// Exact containment test against the facet inequalities.
    pub fn contains(&self, p: &RationalPoint) -> bool {
        self.facets.iter().all(|f| p.dot(&f.normal.0) <= f.offset)
    }

    pub fn contains_f64(&self, p: &[f64]) -> bool {
        self.facets.iter().all(|f| {
            let lhs: f64 = f.normal.to_f64().iter().zip(p).map(|(a, b)| a * b).sum();
            lhs <= crate::rational::to_f64(&f.offset)
        })
    }

    pub fn volume(&self) -> Q {
        match self.dim {
            1 => {
                let (a, b) = (&self.vertices[0][0], &self.vertices[1][0]);
                if a > b {
                    a - b
                } else {
                    b - a
                }
            }
            2 => {
                let cyc = self.polygon_cycle();
                let n = cyc.len();
                let twice: Q = (0..n)
                    .map(|i| {
                        let (a, b) = (&self.vertices[cyc[i]], &self.vertices[cyc[(i + 1) % n]]);
                        &a[0] * &b[1] - &a[1] * &b[0]
                    })
                    .sum();
                twice / Q::from_integer(2.into())
            }
            _ => {
                let six: Q = self
                    .triangles
                    .iter()
                    .map(|t| {
                        let (a, b, c) = (&self.surface[t[0]], &self.surface[t[1]], &self.surface[t[2]]);
                        det3(&a.0, &b.0, &c.0)
                    })
                    .sum();
                six / Q::from_integer(6.into())
            }
        }
    }

    /// Counterclockwise vertex cycle of a 2D hull.
    pub fn polygon_cycle(&self) -> Vec<usize> {
        debug_assert_eq!(self.dim, 2);
        let n = self.vertices.len();
        let mut next = vec![usize::MAX; n];
        for f in &self.facets {
            let (a, b) = (f.incident_vertices[0], f.incident_vertices[1]);
            // travel so that the outward normal points right
            let d: Vec<Q> = self.vertices[b].sub(&self.vertices[a]);
            let cross = &d[0] * &f.normal[1] - &d[1] * &f.normal[0];
            if cross < Q::zero() {
                next[a] = b;
            } else {
                next[b] = a;
            }
        }
        let mut cyc = vec![0];
        while cyc.len() < n {
            cyc.push(next[*cyc.last().expect("nonempty")]);
        }
        cyc
    }
}

fn det3(a: &[Q], b: &[Q], c: &[Q]) -> Q {
    &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * (&b[0] * &c[2] - &b[2] * &c[0])
        + &a[2] * (&b[0] * &c[1] - &b[1] * &c[0])
}

/// Facets of a full-dimensional polytope of dimension at most three; incident
/// indices refer to `poly.vertices()`.
pub fn hull_facets(poly: &VPolytope) -> Result<Vec<Facet>> {
    let hull = ConvexHull::from_points(poly.vertices())?;
    if hull.vertices.len() != poly.vertices().len() {
        return Err(Error::Inconsistency(
            "hull dropped a vertex of a certified polytope".into(),
        ));
    }
    Ok(hull
        .facets
        .into_iter()
        .map(|mut f| {
            for i in f.incident_vertices.iter_mut() {
                *i = hull.input_indices[*i];
            }
            f.incident_vertices.sort_unstable();
            f
        })
        .collect())
}

pub fn exact_volume(poly: &VPolytope) -> Result<Volume> {
    match ConvexHull::from_points(poly.vertices()) {
        Ok(h) => Ok(Volume {
            value: h.volume(),
            degenerate: false,
        }),
        Err(Error::Degenerate { .. }) => Ok(Volume {
            value: Q::zero(),
            degenerate: true,
        }),
        Err(e) => Err(e),
    }
}

/// Points scaled per axis by the common denominator and translated so the
/// first point is the origin.
struct IntGrid {
    scale: Vec<BigInt>,
    origin: Vec<BigInt>,
    pts: Vec<Vec<BigInt>>,
    approx: Vec<Vec<f64>>,
}

impl IntGrid {
    fn new(points: &[RationalPoint]) -> Self {
        let d = points[0].dim();
        let scale: Vec<BigInt> = (0..d)
            .map(|j| common_denominator(points.iter().map(|p| &p[j])))
            .collect();
        let raw: Vec<Vec<BigInt>> = points
            .iter()
            .map(|p| {
                (0..d)
                    .map(|j| (&p[j] * Q::from_integer(scale[j].clone())).to_integer())
                    .collect()
            })
            .collect();
        let origin = raw[0].clone();
        let pts: Vec<Vec<BigInt>> = raw
            .into_iter()
            .map(|p| p.iter().zip(&origin).map(|(a, o)| a - o).collect())
            .collect();
        let approx = pts
            .iter()
            .map(|p| p.iter().map(|x| x.to_f64().unwrap_or(f64::INFINITY)).collect())
            .collect();
        IntGrid {
            scale,
            origin,
            pts,
            approx,
        }
    }

    fn len(&self) -> usize {
        self.pts.len()
    }

    /// Sign of `det[b-a, c-a, p-a]`.
    fn orient3(&self, a: usize, b: usize, c: usize, p: usize) -> i32 {
        let (fa, fb, fc, fp) = (&self.approx[a], &self.approx[b], &self.approx[c], &self.approx[p]);
        let u = [fb[0] - fa[0], fb[1] - fa[1], fb[2] - fa[2]];
        let v = [fc[0] - fa[0], fc[1] - fa[1], fc[2] - fa[2]];
        let w = [fp[0] - fa[0], fp[1] - fa[1], fp[2] - fa[2]];
        let det = u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0])
            + u[2] * (v[0] * w[1] - v[1] * w[0]);
        // each term takes one coordinate per axis, so bound per axis
        let m: Vec<f64> = (0..3)
            .map(|j| [fa, fb, fc, fp].iter().fold(0.0f64, |acc, p| acc.max(p[j].abs())))
            .collect();
        let tol = 1e-10 * 8.0 * m[0] * m[1] * m[2];
        if det.is_finite() && tol.is_finite() && det.abs() > tol {
            return if det > 0.0 { 1 } else { -1 };
        }
        let (pa, pb, pc, pp) = (&self.pts[a], &self.pts[b], &self.pts[c], &self.pts[p]);
        let u: Vec<BigInt> = (0..3).map(|j| &pb[j] - &pa[j]).collect();
        let v: Vec<BigInt> = (0..3).map(|j| &pc[j] - &pa[j]).collect();
        let w: Vec<BigInt> = (0..3).map(|j| &pp[j] - &pa[j]).collect();
        let det = &u[0] * (&v[1] * &w[2] - &v[2] * &w[1]) - &u[1] * (&v[0] * &w[2] - &v[2] * &w[0])
            + &u[2] * (&v[0] * &w[1] - &v[1] * &w[0]);
        sign(&det)
    }

    /// Primitive integer normal and offset of the plane through three points.
    fn plane(&self, a: usize, b: usize, c: usize) -> (Vec<BigInt>, BigInt) {
        let (pa, pb, pc) = (&self.pts[a], &self.pts[b], &self.pts[c]);
        let u: Vec<BigInt> = (0..3).map(|j| &pb[j] - &pa[j]).collect();
        let v: Vec<BigInt> = (0..3).map(|j| &pc[j] - &pa[j]).collect();
        let n = vec![
            &u[1] * &v[2] - &u[2] * &v[1],
            &u[2] * &v[0] - &u[0] * &v[2],
            &u[0] * &v[1] - &u[1] * &v[0],
        ];
        primitive(n, pa)
    }
}

fn sign(x: &BigInt) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn primitive(n: Vec<BigInt>, on: &[BigInt]) -> (Vec<BigInt>, BigInt) {
    let g = n.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    let n: Vec<BigInt> = n.into_iter().map(|x| x / &g).collect();
    let off = n.iter().zip(on).map(|(a, b)| a * b).sum();
    (n, off)
}

fn hull_1d(g: &IntGrid) -> Vec<usize> {
    let lo = (0..g.len()).min_by(|&a, &b| g.pts[a][0].cmp(&g.pts[b][0]).then(a.cmp(&b)));
    let hi = (0..g.len()).max_by(|&a, &b| g.pts[a][0].cmp(&g.pts[b][0]).then(b.cmp(&a)));
    vec![lo.expect("nonempty"), hi.expect("nonempty")]
}

/// Monotone chain; returns the counterclockwise cycle with collinear points dropped.
fn hull_2d(g: &IntGrid) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..g.len()).collect();
    idx.sort_by(|&a, &b| g.pts[a].cmp(&g.pts[b]).then(a.cmp(&b)));
    idx.dedup_by(|a, b| g.pts[*a] == g.pts[*b]);
    let cross = |o: usize, a: usize, b: usize| -> BigInt {
        let (po, pa, pb) = (&g.pts[o], &g.pts[a], &g.pts[b]);
        (&pa[0] - &po[0]) * (&pb[1] - &po[1]) - (&pa[1] - &po[1]) * (&pb[0] - &po[0])
    };
    let mut chain: Vec<usize> = Vec::new();
    for pass in [idx.clone(), idx.iter().rev().copied().collect::<Vec<_>>()] {
        let start = chain.len();
        for &p in &pass {
            while chain.len() >= start + 2
                && !cross(chain[chain.len() - 2], chain[chain.len() - 1], p).is_positive()
            {
                chain.pop();
            }
            chain.push(p);
        }
        chain.pop();
    }
    chain
}

/// Incremental hull; returns the used points and outward triangles over input indices.
fn hull_3d(g: &IntGrid) -> Result<(Vec<usize>, Vec<[usize; 3]>)> {
    let n = g.len();
    let i0 = 0;
    let i1 = (1..n)
        .find(|&i| g.pts[i] != g.pts[i0])
        .ok_or_else(|| Error::Inconsistency("no second point".into()))?;
    let collinear = |i: usize| {
        let (a, b, c) = (&g.pts[i0], &g.pts[i1], &g.pts[i]);
        let u: Vec<BigInt> = (0..3).map(|j| &b[j] - &a[j]).collect();
        let v: Vec<BigInt> = (0..3).map(|j| &c[j] - &a[j]).collect();
        (0..3).all(|j| (&u[(j + 1) % 3] * &v[(j + 2) % 3] - &u[(j + 2) % 3] * &v[(j + 1) % 3]).is_zero())
    };
    let i2 = (0..n)
        .find(|&i| !collinear(i))
        .ok_or_else(|| Error::Inconsistency("no third point".into()))?;
    let i3 = (0..n)
        .find(|&i| g.orient3(i0, i1, i2, i) != 0)
        .ok_or_else(|| Error::Inconsistency("no fourth point".into()))?;

    let mut faces: Vec<Option<[usize; 3]>> = Vec::new();
    let mut edge: HashMap<(usize, usize), usize> = HashMap::new();
    let add = |faces: &mut Vec<Option<[usize; 3]>>, edge: &mut HashMap<(usize, usize), usize>, f: [usize; 3]| {
        let id = faces.len();
        faces.push(Some(f));
        for k in 0..3 {
            edge.insert((f[k], f[(k + 1) % 3]), id);
        }
    };
    let tet = [i0, i1, i2, i3];
    for skip in 0..4 {
        let mut f: Vec<usize> = tet.iter().enumerate().filter(|(k, _)| *k != skip).map(|(_, &i)| i).collect();
        if g.orient3(f[0], f[1], f[2], tet[skip]) > 0 {
            f.swap(1, 2);
        }
        add(&mut faces, &mut edge, [f[0], f[1], f[2]]);
    }

    let mut used = vec![false; n];
    for &i in &tet {
        used[i] = true;
    }
    for p in 0..n {
        if used[p] {
            continue;
        }
        let visible: Vec<usize> = faces
            .iter()
            .enumerate()
            .filter_map(|(id, f)| f.filter(|f| g.orient3(f[0], f[1], f[2], p) > 0).map(|_| id))
            .collect();
        if visible.is_empty() {
            continue;
        }
        used[p] = true;
        let mut is_vis = vec![false; faces.len()];
        for &id in &visible {
            is_vis[id] = true;
        }
        let mut horizon = Vec::new();
        for &id in &visible {
            let f = faces[id].expect("alive");
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                let across = edge[&(b, a)];
                if !is_vis[across] {
                    horizon.push((a, b));
                }
            }
        }
        for &id in &visible {
            let f = faces[id].take().expect("alive");
            for k in 0..3 {
                let key = (f[k], f[(k + 1) % 3]);
                if edge.get(&key) == Some(&id) {
                    edge.remove(&key);
                }
            }
        }
        for (a, b) in horizon {
            add(&mut faces, &mut edge, [a, b, p]);
        }
    }
    let triangles: Vec<[usize; 3]> = faces.into_iter().flatten().collect();
    let mut order: Vec<usize> = triangles.iter().flatten().copied().collect();
    order.sort_unstable();
    order.dedup();
    Ok((order, triangles))
}

fn assemble(points: &[RationalPoint], g: &IntGrid, cycle: Vec<usize>, tris: Vec<[usize; 3]>) -> ConvexHull {
    let dim = points[0].dim();
    // integer facets keyed by primitive normal, each listing candidate points
    let mut planes: BTreeMap<Vec<BigInt>, BigInt> = BTreeMap::new();
    match dim {
        1 => {
            planes.insert(vec![BigInt::from(-1)], -&g.pts[cycle[0]][0]);
            planes.insert(vec![BigInt::from(1)], g.pts[cycle[1]][0].clone());
        }
        2 => {
            let m = cycle.len();
            for k in 0..m {
                let (a, b) = (&g.pts[cycle[k]], &g.pts[cycle[(k + 1) % m]]);
                let n = vec![&b[1] - &a[1], &a[0] - &b[0]];
                let (n, off) = primitive(n, a);
                planes.insert(n, off);
            }
        }
        _ => {
            for t in &tris {
                let (n, off) = g.plane(t[0], t[1], t[2]);
                planes.insert(n, off);
            }
        }
    }
    let candidates: Vec<usize> = match dim {
        3 => tris.iter().flatten().copied().collect::<std::collections::BTreeSet<_>>().into_iter().collect(),
        _ => {
            let mut c = cycle.clone();
            c.sort_unstable();
            c
        }
    };
    let on_plane: Vec<(Vec<BigInt>, BigInt, Vec<usize>)> = planes
        .into_iter()
        .map(|(n, off)| {
            let inc = candidates
                .iter()
                .copied()
                .filter(|&i| g.pts[i].iter().zip(&n).map(|(a, b)| a * b).sum::<BigInt>() == off)
                .collect();
            (n, off, inc)
        })
        .collect();
    // a candidate is a vertex when the normals of its incident facets have full rank
    let vertex: Vec<usize> = candidates
        .iter()
        .copied()
        .filter(|&i| {
            let normals: Vec<Vec<Q>> = on_plane
                .iter()
                .filter(|(_, _, inc)| inc.contains(&i))
                .map(|(n, _, _)| n.iter().map(|x| Q::from_integer(x.clone())).collect())
                .collect();
            rank(&normals) == dim
        })
        .collect();
    let local: HashMap<usize, usize> = vertex.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let facets = on_plane
        .into_iter()
        .map(|(n, off, inc)| {
            // undo the translation and the per-axis scaling
            let shift: BigInt = n.iter().zip(&g.origin).map(|(a, b)| a * b).sum();
            let raw: Vec<BigInt> = n.iter().zip(&g.scale).map(|(a, s)| a * s).collect();
            let (normal, offset) = {
                let gcd = raw.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
                let normal: Vec<Q> = raw.iter().map(|x| Q::from_integer(x / &gcd)).collect();
                (normal, Q::new(off + shift, gcd))
            };
            Facet {
                normal: RationalPoint(normal),
                offset,
                incident_vertices: inc.iter().filter_map(|i| local.get(i).copied()).collect(),
            }
        })
        .collect();
    let surface_index: HashMap<usize, usize> = candidates.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    ConvexHull {
        dim,
        vertices: vertex.iter().map(|&i| points[i].clone()).collect(),
        input_indices: vertex,
        facets,
        surface: candidates.iter().map(|&i| points[i].clone()).collect(),
        triangles: tris
            .iter()
            .map(|t| [surface_index[&t[0]], surface_index[&t[1]], surface_index[&t[2]]])
            .collect(),
    }
}

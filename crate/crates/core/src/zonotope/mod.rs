//! Curvy zonotopes: images of symmetric `[0,1]` matrices under the
//! subgraph-density polynomials of step-function kernels.

mod graphon;
mod kernel;

pub use graphon::{expectation_check, host_density, injective_homomorphisms, sample_graph, ExpectationReport, MAX_HOST_ORDER};
pub use kernel::{p_eval, p_eval_f64, KernelDoc, StepKernel};

use crate::error::{Error, Result};
use crate::geometry::linalg::determinant;
use crate::geometry::{affine_rank, membership_batch, monte_carlo_volume, extreme_points, ConvexHull, McEstimate, Membership, RationalPoint};
use crate::graph::{GraphVector, StatKind};
use crate::rational::{factorial, format_q, to_f64, Q};
use crate::report::CheckReport;
use crate::statistics::build_polytope;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

/// Random kernel entries are multiples of `1/QUANTUM`.
pub const QUANTUM: i64 = 1024;
const CHUNK: u64 = 4096;

/// Points `t(F, W_M)` for the two corner kernels and `count` random ones.
#[derive(Clone, Debug)]
pub struct ZonotopeSample {
    pub fs: GraphVector,
    pub n: usize,
    pub seed: u64,
    pub kernels: Vec<StepKernel>,
    pub points: Vec<RationalPoint>,
}

pub fn zonotope_point(fs: &GraphVector, kernel: &StepKernel) -> RationalPoint {
    RationalPoint(fs.patterns().iter().map(|f| p_eval(f, kernel)).collect())
}

fn random_kernel(n: usize, rng: &mut ChaCha8Rng) -> StepKernel {
    let upper: Vec<Q> = (0..n * (n + 1) / 2)
        .map(|_| Q::new(rng.gen_range(0..=QUANTUM).into(), QUANTUM.into()))
        .collect();
    StepKernel::from_upper(n, &upper).expect("quantized entries lie in [0,1]")
}

/// Kernel `i` depends only on `seed` and `i`, so a larger `count` extends
/// a smaller one.
pub fn zonotope_sample(fs: &GraphVector, n: usize, count: u64, seed: u64) -> Result<ZonotopeSample> {
    if count == 0 {
        return Err(Error::invalid("count must be at least 1"));
    }
    if n == 0 {
        return Err(Error::invalid("kernel size must be positive"));
    }
    let mut kernels = vec![StepKernel::constant(n, Q::zero())?, StepKernel::constant(n, Q::one())?];
    let random: Vec<Vec<StepKernel>> = (0..count.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            (0..CHUNK.min(count - c * CHUNK)).map(|_| random_kernel(n, &mut rng)).collect()
        })
        .collect();
    kernels.extend(random.into_iter().flatten());
    let points = kernels.par_iter().map(|k| zonotope_point(fs, k)).collect();
    Ok(ZonotopeSample {
        fs: fs.clone(),
        n,
        seed,
        kernels,
        points,
    })
}

impl ZonotopeSample {
    /// One row per point: index, kernel entries, exact and float coordinates.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["index".to_string(), "kernel".to_string()];
        for name in self.fs.names() {
            header.push(name.clone());
            header.push(format!("{name}_f64"));
        }
        w.write_record(&header).map_err(csv_error)?;
        for (i, (k, p)) in self.kernels.iter().zip(&self.points).enumerate() {
            let mut rec = vec![i.to_string(), k.entries().iter().map(format_q).collect::<Vec<_>>().join(" ")];
            for x in &p.0 {
                rec.push(format_q(x));
                rec.push(to_f64(x).to_string());
            }
            w.write_record(&rec).map_err(csv_error)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::invalid(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::invalid(format!("csv: {e}"))
}

/// Exact membership of sampled zonotope points in `P_{F;host_n}`.
///
/// In dimension at most three the facet inequalities are evaluated in
/// floating point first and re-checked exactly when a point is within
/// `1e-9` of a facet or outside; higher dimensions use LP membership.
pub fn check_zonotope_in_polytope(
    fs: &GraphVector,
    kernel_size: usize,
    host_n: usize,
    count: u64,
    seed: u64,
) -> Result<CheckReport> {
    let poly = build_polytope(fs, host_n, StatKind::Density)?;
    let sample = zonotope_sample(fs, kernel_size, count, seed)?;
    let mut report = CheckReport::new(
        format!("Z[{};{kernel_size}] lies in P[{};{host_n}]", fs.label(), fs.label()),
        vec![format!("{} points, seed {seed}", sample.points.len())],
    );
    let hull = if poly.dim() <= 3 {
        ConvexHull::from_points(poly.hull.vertices()).ok()
    } else {
        None
    };
    let outside: Vec<(usize, serde_json::Value)> = match hull {
        Some(h) => {
            let facets: Vec<(Vec<f64>, f64)> = h
                .facets
                .iter()
                .map(|f| (f.normal.0.iter().map(to_f64).collect(), to_f64(&f.offset)))
                .collect();
            sample
                .points
                .par_iter()
                .enumerate()
                .filter_map(|(i, p)| {
                    let x: Vec<f64> = p.0.iter().map(to_f64).collect();
                    let clear = facets
                        .iter()
                        .all(|(a, b)| a.iter().zip(&x).map(|(u, v)| u * v).sum::<f64>() - b < -1e-9);
                    if clear {
                        return None;
                    }
                    h.facets.iter().find(|f| p.dot(&f.normal.0) > f.offset).map(|f| {
                        (i, json!({"normal": f.normal.0.iter().map(format_q).collect::<Vec<_>>(),
                                   "offset": format_q(&f.offset)}))
                    })
                })
                .collect()
        }
        None => membership_batch(&sample.points, &poly.hull)?
            .into_iter()
            .enumerate()
            .filter_map(|(i, m)| match m {
                Membership::Inside(_) => None,
                Membership::Outside { normal, offset } => Some((
                    i,
                    json!({"normal": normal.iter().map(format_q).collect::<Vec<_>>(), "offset": format_q(&offset)}),
                )),
            })
            .collect(),
    };
    for (i, sep) in &outside {
        report.push(
            false,
            json!({"index": i, "point": sample.points[*i].0.iter().map(format_q).collect::<Vec<_>>(),
                   "kernel": sample.kernels[*i].to_doc(), "separator": sep}),
        );
    }
    report.certificates.push(json!({
        "inside": sample.points.len() - outside.len(),
        "total": sample.points.len(),
    }));
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct ZonotopeVolume {
    pub dim: usize,
    pub kernel_size: usize,
    pub points: usize,
    /// dimension of the kernel parameter space, `n(n+1)/2`
    pub parameters: usize,
    pub affine_rank: usize,
    pub hull_vertices: usize,
    pub volume: f64,
    /// exact hull volume in dimension at most three
    #[serde(serialize_with = "serialize_opt_q")]
    pub exact: Option<Q>,
    pub monte_carlo: Option<McEstimate>,
}

fn serialize_opt_q<S: serde::Serializer>(x: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&format_q(v)),
        None => s.serialize_none(),
    }
}

const MC_SAMPLES: u64 = 20_000;

/// Volume of the convex hull of sampled zonotope points: exact in
/// dimension at most three, hit-ratio estimate with LP membership above.
pub fn zonotope_hull_volume(fs: &GraphVector, kernel_size: usize, count: u64, seed: u64) -> Result<ZonotopeVolume> {
    let sample = zonotope_sample(fs, kernel_size, count, seed)?;
    let dim = fs.len();
    let rank = affine_rank(&sample.points);
    let mut out = ZonotopeVolume {
        dim,
        kernel_size,
        points: sample.points.len(),
        parameters: kernel_size * (kernel_size + 1) / 2,
        affine_rank: rank,
        hull_vertices: 0,
        volume: 0.0,
        exact: None,
        monte_carlo: None,
    };
    if rank < dim {
        out.exact = Some(Q::zero());
        return Ok(out);
    }
    if dim <= 3 {
        let hull = ConvexHull::from_points(&sample.points)?;
        let v = hull.volume();
        out.hull_vertices = hull.vertices.len();
        out.volume = to_f64(&v);
        out.exact = Some(v);
    } else {
        let poly = extreme_points(&sample.points)?;
        out.hull_vertices = poly.vertices().len();
        let (lo, hi) = poly.bounding_box();
        let lo: Vec<f64> = lo.iter().map(to_f64).collect();
        let hi: Vec<f64> = hi.iter().map(to_f64).collect();
        let est = monte_carlo_volume(
            |x| {
                let p = RationalPoint(x.iter().map(|&v| Q::from_float(v).expect("finite sample")).collect());
                poly.contains(&p).unwrap_or(false)
            },
            &lo,
            &hi,
            MC_SAMPLES,
            seed,
        )?;
        out.volume = est.estimate;
        out.monte_carlo = Some(est);
    }
    Ok(out)
}

/// Affinely independent sampled points spanning a full-dimensional simplex;
/// its volume bounds the volume of every `P_{F;n}` from below.
#[derive(Clone, Debug)]
pub struct SimplexWitness {
    pub points: Vec<RationalPoint>,
    pub kernels: Vec<StepKernel>,
    pub volume: Q,
}

impl SimplexWitness {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "volume": format_q(&self.volume),
            "vertices": self.points.iter().map(|p| p.0.iter().map(format_q).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "kernels": self.kernels.iter().map(StepKernel::to_doc).collect::<Vec<_>>(),
        })
    }
}

pub fn simplex_witness(fs: &GraphVector, kernel_size: usize, count: u64, seed: u64) -> Result<SimplexWitness> {
    let sample = zonotope_sample(fs, kernel_size, count, seed)?;
    let d = fs.len();
    let mut chosen = vec![0usize];
    for i in 1..sample.points.len() {
        if chosen.len() == d + 1 {
            break;
        }
        chosen.push(i);
        let pts: Vec<RationalPoint> = chosen.iter().map(|&j| sample.points[j].clone()).collect();
        if affine_rank(&pts) < chosen.len() - 1 {
            chosen.pop();
        }
    }
    if chosen.len() < d + 1 {
        return Err(Error::Degenerate {
            dim: d,
            affine_dim: chosen.len() - 1,
        });
    }
    let origin = &sample.points[chosen[0]];
    let rows: Vec<Vec<Q>> = chosen[1..].iter().map(|&j| sample.points[j].sub(origin)).collect();
    let volume = determinant(&rows).abs() / Q::from_integer(factorial(d as u64).into());
    if !volume.is_positive() {
        return Err(Error::Inconsistency("independent points with zero simplex volume".into()));
    }
    Ok(SimplexWitness {
        points: chosen.iter().map(|&j| sample.points[j].clone()).collect(),
        kernels: chosen.iter().map(|&j| sample.kernels[j].clone()).collect(),
        volume,
    })
}

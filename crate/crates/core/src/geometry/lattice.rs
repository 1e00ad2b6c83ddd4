use super::hull::{hull_facets, Facet};
use super::linalg::solve;
use super::polytope::VPolytope;
use super::RationalPoint;
use crate::error::{Error, Result};
use crate::rational::{format_q, qu, Q};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Largest number of box points scanned by the LP fallback.
const FALLBACK_BOX_LIMIT: usize = 200_000;

/// Number of integer points in `kP`.
pub fn count_lattice_points(poly: &VPolytope, k: u64) -> Result<u64> {
    if !poly.is_integral() {
        return Err(Error::invalid("lattice counting needs integral vertices"));
    }
    let kp = poly.dilated(&qu(k))?;
    if k == 0 {
        return Ok(1);
    }
    match hull_facets(&kp) {
        Ok(facets) => Ok(scan_with_facets(&kp, &facets)),
        Err(Error::Degenerate { .. } | Error::Capacity { .. }) => scan_with_lp(&kp),
        Err(e) => Err(e),
    }
}

fn int_range(lo: &Q, hi: &Q) -> (BigInt, BigInt) {
    (lo.ceil().to_integer(), hi.floor().to_integer())
}

/// Scan all but the last coordinate; the last ranges over an interval cut
/// out by the facet inequalities.
fn scan_with_facets(poly: &VPolytope, facets: &[Facet]) -> u64 {
    let d = poly.dim();
    let (lo, hi) = poly.bounding_box();
    let ranges: Vec<(BigInt, BigInt)> = lo.iter().zip(&hi).map(|(a, b)| int_range(a, b)).collect();
    let mut x: Vec<BigInt> = ranges[..d - 1].iter().map(|r| r.0.clone()).collect();
    let mut total = 0u64;
    loop {
        let xq: Vec<Q> = x.iter().map(|v| Q::from_integer(v.clone())).collect();
        let mut lo_d = Q::from_integer(ranges[d - 1].0.clone());
        let mut hi_d = Q::from_integer(ranges[d - 1].1.clone());
        let mut empty = false;
        for f in facets {
            let rest = &f.offset - super::dot(&f.normal.0[..d - 1], &xq);
            let a = &f.normal[d - 1];
            if a.is_zero() {
                if rest.is_negative() {
                    empty = true;
                    break;
                }
            } else if a.is_positive() {
                let b = rest / a;
                if b < hi_d {
                    hi_d = b;
                }
            } else {
                let b = rest / a;
                if b > lo_d {
                    lo_d = b;
                }
            }
        }
        if !empty {
            let (l, h) = int_range(&lo_d, &hi_d);
            if h >= l {
                total += (h - l + 1u32).to_u64().expect("count fits in u64");
            }
        }
        // odometer over the first d-1 coordinates
        let mut j = 0;
        loop {
            if j == d - 1 {
                return total;
            }
            if x[j] < ranges[j].1 {
                x[j] += 1;
                break;
            }
            x[j] = ranges[j].0.clone();
            j += 1;
        }
    }
}

fn scan_with_lp(poly: &VPolytope) -> Result<u64> {
    let (lo, hi) = poly.bounding_box();
    let ranges: Vec<(BigInt, BigInt)> = lo.iter().zip(&hi).map(|(a, b)| int_range(a, b)).collect();
    let size = ranges.iter().try_fold(1usize, |acc, (l, h)| {
        let w = (h - l + 1u32).to_usize()?;
        acc.checked_mul(w)
    });
    match size {
        Some(s) if s <= FALLBACK_BOX_LIMIT => {}
        _ => {
            return Err(Error::Capacity {
                what: "lattice scan box",
                limit: FALLBACK_BOX_LIMIT,
                got: size.unwrap_or(usize::MAX),
            })
        }
    }
    let mut x: Vec<BigInt> = ranges.iter().map(|r| r.0.clone()).collect();
    let mut total = 0;
    loop {
        let p = RationalPoint(x.iter().map(|v| Q::from_integer(v.clone())).collect());
        if poly.contains(&p)? {
            total += 1;
        }
        let mut j = 0;
        loop {
            if j == x.len() {
                return Ok(total);
            }
            if x[j] < ranges[j].1 {
                x[j] += 1;
                break;
            }
            x[j] = ranges[j].0.clone();
            j += 1;
        }
    }
}

/// Polynomial in `k` with `coefficients[i]` the coefficient of `k^i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EhrhartPoly {
    #[serde(with = "crate::rational::serde_q::vec")]
    pub coefficients: Vec<Q>,
}

impl EhrhartPoly {
    pub fn eval(&self, k: &Q) -> Q {
        self.coefficients
            .iter()
            .rev()
            .fold(Q::zero(), |acc, c| acc * k + c)
    }

    pub fn eval_u64(&self, k: u64) -> Q {
        self.eval(&qu(k))
    }

    pub fn degree(&self) -> usize {
        self.coefficients
            .iter()
            .rposition(|c| !c.is_zero())
            .unwrap_or(0)
    }

    /// The polynomial `k ↦ self(c·k)`.
    pub fn compose_scale(&self, c: &Q) -> EhrhartPoly {
        let mut pow = Q::one();
        let coefficients = self
            .coefficients
            .iter()
            .map(|a| {
                let t = a * &pow;
                pow *= c;
                t
            })
            .collect();
        EhrhartPoly { coefficients }
    }
}

impl fmt::Display for EhrhartPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let coef = if mag.is_one() && i > 0 {
                String::new()
            } else {
                format_q(&mag)
            };
            match i {
                0 => write!(f, "{coef}")?,
                1 => write!(f, "{coef}k")?,
                _ => write!(f, "{coef}k^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Fit the Ehrhart polynomial from counts at `ks` (the first `dim+1` are
/// interpolated, the rest plus `max(ks)+1` are verified).
pub fn fit_ehrhart(poly: &VPolytope, ks: &[u64]) -> Result<EhrhartPoly> {
    let d = poly.dim();
    let mut sorted = ks.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != ks.len() || ks.len() < d + 1 || ks.contains(&0) {
        return Err(Error::invalid(format!(
            "need at least {} distinct positive dilation factors",
            d + 1
        )));
    }
    let fit = &ks[..d + 1];
    let counts: Vec<Q> = fit
        .iter()
        .map(|&k| count_lattice_points(poly, k).map(qu))
        .collect::<Result<_>>()?;
    let vandermonde: Vec<Vec<Q>> = fit
        .iter()
        .map(|&k| (0..=d).map(|i| qu(k).pow(i as i32)).collect())
        .collect();
    let coefficients = solve(&vandermonde, &counts)
        .ok_or_else(|| Error::Inconsistency("singular interpolation system".into()))?;
    let e = EhrhartPoly { coefficients };
    let holdout = sorted.last().expect("nonempty") + 1;
    for &k in ks[d + 1..].iter().chain([holdout].iter()) {
        let got = qu(count_lattice_points(poly, k)?);
        if e.eval_u64(k) != got {
            return Err(Error::Inconsistency(format!(
                "fitted {e} predicts {} at k={k} but the count is {}",
                format_q(&e.eval_u64(k)),
                format_q(&got)
            )));
        }
    }
    Ok(e)
}

/// Fit from `k = 1..=dim+1`, verified at `k = dim+2`.
pub fn fit_ehrhart_default(poly: &VPolytope) -> Result<EhrhartPoly> {
    let ks: Vec<u64> = (1..=poly.dim() as u64 + 1).collect();
    fit_ehrhart(poly, &ks)
}

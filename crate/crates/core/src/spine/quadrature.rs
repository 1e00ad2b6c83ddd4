use super::schur::SchurPolynomial;
use super::SpineSpec;
use crate::error::{Error, Result};
use crate::rational::factorial;
use serde::Serialize;

const MAX_M: usize = 3;

/// Gauss–Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 1..=n {
        let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // three-term recurrence for P_n and its derivative
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes.push((1.0 - x) / 2.0);
        weights.push(1.0 / ((1.0 - x * x) * dp * dp));
    }
    (nodes, weights)
}

#[derive(Clone, Debug, Serialize)]
pub struct QuadratureResult {
    /// 64-node tensor rule
    #[serde(rename = "value_estimate")]
    pub value: f64,
    /// 48-node tensor rule
    #[serde(rename = "value_48_estimate")]
    pub value_48: f64,
    #[serde(rename = "value_stderr")]
    pub error_estimate: f64,
}

/// Spine-hull volume as the Schur integral over `[0,1]^m`, `d = 2m` or `2m+1`.
pub fn spine_volume_integrand_quadrature(spec: &SpineSpec) -> Result<QuadratureResult> {
    let d = spec.dim();
    let m = d / 2;
    if m > MAX_M {
        return Err(Error::Capacity {
            what: "quadrature dimension m",
            limit: MAX_M,
            got: m,
        });
    }
    let schur = SchurPolynomial::new(&spec.partition(), d)?;
    let v64 = integrate(&schur, d, 64);
    let v48 = integrate(&schur, d, 48);
    Ok(QuadratureResult {
        value: v64,
        value_48: v48,
        error_estimate: (v64 - v48).abs(),
    })
}

fn integrand(schur: &SchurPolynomial, d: usize, xs: &[f64], args: &mut Vec<f64>) -> f64 {
    let m = xs.len();
    args.clear();
    for &x in xs {
        args.push(x);
        args.push(x);
    }
    if d % 2 == 1 {
        args.push(1.0);
    }
    let mut v = schur.eval_f64(args);
    for i in 0..m {
        for j in i + 1..m {
            v *= (xs[i] - xs[j]).powi(4);
        }
        if d % 2 == 1 {
            v *= (1.0 - xs[i]).powi(2);
        }
    }
    v
}

fn integrate(schur: &SchurPolynomial, d: usize, nodes: usize) -> f64 {
    let m = d / 2;
    let prefactor = 1.0 / (factorial(d as u64) as f64 * factorial(m as u64) as f64);
    if m == 0 {
        return prefactor * schur.eval_f64(&[1.0]);
    }
    let (x, w) = gauss_legendre(nodes);
    let mut idx = vec![0usize; m];
    let mut pt = vec![0.0; m];
    let mut args = Vec::with_capacity(d);
    let mut total = 0.0;
    loop {
        let mut weight = 1.0;
        for (k, &i) in idx.iter().enumerate() {
            pt[k] = x[i];
            weight *= w[i];
        }
        total += weight * integrand(schur, d, &pt, &mut args);
        let mut k = 0;
        loop {
            if k == m {
                return prefactor * total;
            }
            idx[k] += 1;
            if idx[k] < nodes {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::to_f64;
    use crate::spine::pfaffian_product;

    #[test]
    fn rule_integrates_polynomials() {
        let (x, w) = gauss_legendre(5);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        let int: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(9)).sum();
        assert!((int - 0.1).abs() < 1e-14);
        let (x, w) = gauss_legendre(64);
        let int: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(100)).sum();
        assert!((int - 1.0 / 101.0).abs() < 1e-13);
    }

    #[test]
    fn known_volumes() {
        for (e, v) in [(&[1, 2][..], 1.0 / 6.0), (&[1, 2, 3], 1.0 / 180.0), (&[4], 1.0)] {
            let r = spine_volume_integrand_quadrature(&SpineSpec::new(e.to_vec()).unwrap()).unwrap();
            assert!((r.value - v).abs() < 1e-12, "{e:?}: {r:?}");
        }
        let s = SpineSpec::new(vec![2, 3, 4, 5]).unwrap();
        let r = spine_volume_integrand_quadrature(&s).unwrap();
        assert!((r.value - to_f64(&pfaffian_product(&s).unwrap())).abs() < 1e-9);
        assert!(r.error_estimate < 1e-12);
        let big = SpineSpec::new(vec![1, 2, 3, 4, 5, 6, 7, 8]).unwrap();
        assert!(spine_volume_integrand_quadrature(&big).is_err());
    }
}

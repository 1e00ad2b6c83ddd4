use crate::error::{Error, Result};
use crate::geometry::{extreme_points, ConvexHull, RationalPoint};
use crate::rational::{format_q, Q};
use crate::report::CheckReport;
use crate::spine::gale_facets;
use num_traits::{One, Zero};
use serde_json::json;
use std::collections::BTreeSet;
use std::fmt;

/// Strictly increasing clique orders `e_1 < … < e_m`, each at least 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailSpec {
    orders: Vec<u32>,
}

impl TailSpec {
    pub fn new(orders: Vec<u32>) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::invalid("tail needs at least one order"));
        }
        if orders[0] < 2 {
            return Err(Error::invalid("clique orders must be at least 2"));
        }
        if orders.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid(format!("orders {orders:?} are not strictly increasing")));
        }
        Ok(TailSpec { orders })
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn dim(&self) -> usize {
        self.orders.len()
    }

    /// Pattern vector `(K_{e_1}, …, K_{e_m})`.
    pub fn patterns(&self) -> String {
        self.orders.iter().map(|e| format!("K{e}")).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for TailSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.orders.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl std::str::FromStr for TailSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lead = s.len() - s.trim_start().len();
        let inner = s.trim();
        let (body, mut pos) = match inner.strip_prefix('(') {
            Some(rest) => (rest.strip_suffix(')').ok_or_else(|| Error::parse(s.trim_end().len(), "missing ')'"))?, lead + 1),
            None => (inner, lead),
        };
        let mut orders = Vec::new();
        for tok in body.split(',') {
            let t = tok.trim();
            let v = t
                .parse()
                .map_err(|_| Error::parse(pos + tok.len() - tok.trim_start().len(), format!("expected a clique order, got {t:?}")))?;
            orders.push(v);
            pos += tok.len() + 1;
        }
        TailSpec::new(orders)
    }
}

/// `s_i(x) = ∏_{j=1}^{e_i - 1} (1 - j x)`; negative components are kept.
pub fn tail_point(spec: &TailSpec, x: &Q) -> Result<RationalPoint> {
    if *x < Q::zero() || *x > Q::one() {
        return Err(Error::invalid(format!("tail parameter {} outside [0,1]", format_q(x))));
    }
    Ok(RationalPoint(
        spec.orders
            .iter()
            .map(|&e| (1..e).fold(Q::one(), |acc, j| acc * (Q::one() - Q::from_integer(j.into()) * x)))
            .collect(),
    ))
}

/// Tail points at `x = 1/k`.
pub fn tail_points(spec: &TailSpec, ks: &[u32]) -> Result<Vec<RationalPoint>> {
    ks.iter()
        .map(|&k| {
            if k == 0 {
                return Err(Error::invalid("k must be positive"));
            }
            tail_point(spec, &Q::new(1.into(), k.into()))
        })
        .collect()
}

/// Cyclic structure of `conv{s(1/k) : k ∈ ks}`: every point extreme and,
/// in dimension at most three, hull facets equal to the Gale evenness sets
/// in the order of the parameter.
pub fn check_tail_cyclic(spec: &TailSpec, ks: &[u32]) -> Result<CheckReport> {
    let m = spec.dim();
    let mut ks = ks.to_vec();
    ks.sort_unstable_by(|a, b| b.cmp(a));
    if ks.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::invalid("repeated k"));
    }
    if ks.len() < m + 1 {
        return Err(Error::invalid(format!("need at least {} points, got {}", m + 1, ks.len())));
    }
    // ascending x = 1/k
    let points = tail_points(spec, &ks)?;
    let mut report = CheckReport::new(
        format!("tail {spec} points form a cyclic polytope"),
        vec![format!("k = {ks:?}")],
    );
    let poly = extreme_points(&points)?;
    let extreme = poly.vertices().len() == points.len();
    report.push(extreme, json!({"extreme": poly.vertices().len(), "points": points.len()}));
    if m <= 3 && extreme {
        let hull = ConvexHull::from_points(&points)?;
        let brute: BTreeSet<Vec<usize>> = hull
            .facets
            .iter()
            .map(|f| {
                let mut s: Vec<usize> = f.incident_vertices.iter().map(|&v| hull.input_indices[v]).collect();
                s.sort_unstable();
                s
            })
            .collect();
        let gale: BTreeSet<Vec<usize>> = gale_facets(points.len(), m)?.into_iter().collect();
        report.push(
            brute == gale,
            json!({"hull_facets": brute.len(), "gale_facets": gale.len(),
                   "mismatched": brute.symmetric_difference(&gale).collect::<Vec<_>>()}),
        );
    }
    Ok(report)
}

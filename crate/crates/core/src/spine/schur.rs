//! Schur polynomials as sums over semistandard tableaux.

use crate::error::{Error, Result};
use crate::geometry::linalg::determinant;
use crate::rational::Q;
use num_traits::Zero;
use std::collections::BTreeMap;

/// Weakly decreasing nonnegative parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::invalid(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Number of nonzero parts.
    pub fn length(&self) -> usize {
        self.parts.iter().take_while(|&&p| p > 0).count()
    }
}

/// `S_λ` in `k` variables stored as a monomial expansion.
#[derive(Clone, Debug)]
pub struct SchurPolynomial {
    k: usize,
    /// exponent vector → coefficient (number of tableaux with that content)
    terms: BTreeMap<Vec<u32>, u64>,
}

/// Tableau enumeration beyond this many variables is refused.
const MAX_VARIABLES: usize = 8;

impl SchurPolynomial {
    pub fn new(lambda: &Partition, k: usize) -> Result<Self> {
        if k > MAX_VARIABLES {
            return Err(Error::Capacity {
                what: "Schur polynomial variables",
                limit: MAX_VARIABLES,
                got: k,
            });
        }
        let mut terms = BTreeMap::new();
        if lambda.length() <= k {
            let shape: Vec<usize> = lambda.parts()[..lambda.length()].iter().map(|&p| p as usize).collect();
            let mut rows: Vec<Vec<usize>> = shape.iter().map(|&l| vec![0; l]).collect();
            let mut content = vec![0u32; k];
            fill(&shape, &mut rows, 0, 0, k, &mut content, &mut terms);
        }
        Ok(SchurPolynomial { k, terms })
    }

    pub fn variables(&self) -> usize {
        self.k
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn eval_f64(&self, xs: &[f64]) -> f64 {
        assert_eq!(xs.len(), self.k, "argument count");
        self.terms
            .iter()
            .map(|(exp, &c)| {
                c as f64
                    * exp
                        .iter()
                        .zip(xs)
                        .map(|(&e, x)| x.powi(e as i32))
                        .product::<f64>()
            })
            .sum()
    }

    pub fn eval_q(&self, xs: &[Q]) -> Q {
        assert_eq!(xs.len(), self.k, "argument count");
        self.terms
            .iter()
            .map(|(exp, &c)| {
                exp.iter()
                    .zip(xs)
                    .fold(Q::from_integer(c.into()), |acc, (&e, x)| acc * x.pow(e as i32))
            })
            .sum()
    }
}

/// Fill cell `(r, c)` and continue row by row.
fn fill(
    shape: &[usize],
    rows: &mut Vec<Vec<usize>>,
    r: usize,
    c: usize,
    k: usize,
    content: &mut Vec<u32>,
    out: &mut BTreeMap<Vec<u32>, u64>,
) {
    if r == shape.len() {
        *out.entry(content.clone()).or_insert(0) += 1;
        return;
    }
    if c == shape[r] {
        fill(shape, rows, r + 1, 0, k, content, out);
        return;
    }
    let lo_row = if c > 0 { rows[r][c - 1] } else { 0 };
    let lo_col = if r > 0 { rows[r - 1][c] + 1 } else { 0 };
    // entries below must still fit: column height below this cell
    let below = shape[r + 1..].iter().take_while(|&&l| l > c).count();
    for v in lo_row.max(lo_col)..k.saturating_sub(below) {
        rows[r][c] = v;
        content[v] += 1;
        fill(shape, rows, r, c + 1, k, content, out);
        content[v] -= 1;
    }
}

/// `S_λ(xs)` with `λ` padded by zeros to `xs.len()` parts.
pub fn schur_eval(lambda: &Partition, xs: &[Q]) -> Result<Q> {
    Ok(SchurPolynomial::new(lambda, xs.len())?.eval_q(xs))
}

/// `det[x_i^{λ_j + k - j}] / det[x_i^{k - j}]`; `None` at repeated arguments.
pub fn bialternant(lambda: &Partition, xs: &[Q]) -> Option<Q> {
    let k = xs.len();
    if lambda.length() > k {
        return Some(Q::zero());
    }
    let part = |j: usize| lambda.parts().get(j).copied().unwrap_or(0) as i32;
    let num: Vec<Vec<Q>> = xs
        .iter()
        .map(|x| (0..k).map(|j| x.pow(part(j) + (k - 1 - j) as i32)).collect())
        .collect();
    let den: Vec<Vec<Q>> = xs
        .iter()
        .map(|x| (0..k).map(|j| x.pow((k - 1 - j) as i32)).collect())
        .collect();
    let d = determinant(&den);
    if d.is_zero() {
        return None;
    }
    Some(determinant(&num) / d)
}

use crate::error::{Error, Result};
use crate::rational::{format_q, parse_q, to_f64, Q};
use crate::spine::SpineSpec;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// `1 + Σ c_i x^{e_i}` with distinct positive exponents, kept in input order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePolynomial {
    terms: Vec<(u32, Q)>,
}

impl SparsePolynomial {
    pub fn new(terms: Vec<(u32, Q)>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for (e, _) in &terms {
            if *e == 0 {
                return Err(Error::invalid("the constant term is fixed to 1"));
            }
            if !seen.insert(*e) {
                return Err(Error::invalid(format!("repeated exponent {e}")));
            }
        }
        Ok(SparsePolynomial { terms })
    }

    /// `1 + Σ c_i x^{e_i}` for the exponents of `spec` in their input order.
    pub fn from_coefficients(spec: &SpineSpec, coefficients: &[Q]) -> Result<Self> {
        if coefficients.len() != spec.dim() {
            return Err(Error::DimensionMismatch {
                expected: spec.dim(),
                got: coefficients.len(),
            });
        }
        Self::new(spec.exponents().iter().copied().zip(coefficients.iter().cloned()).collect())
    }

    pub fn terms(&self) -> &[(u32, Q)] {
        &self.terms
    }

    pub fn exponents(&self) -> Vec<u32> {
        self.terms.iter().map(|(e, _)| *e).collect()
    }

    pub fn coefficients(&self) -> Vec<Q> {
        self.terms.iter().map(|(_, c)| c.clone()).collect()
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.terms.iter().fold(Q::one(), |acc, (e, c)| acc + c * x.pow(*e as i32))
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.terms.iter().fold(1.0, |acc, (e, c)| acc + to_f64(c) * x.powi(*e as i32))
    }
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1")?;
        for (e, c) in &self.terms {
            let sign = if c.is_negative() { '-' } else { '+' };
            let mag = c.abs();
            let x = if *e == 1 { "x".to_string() } else { format!("x^{e}") };
            if mag.is_one() {
                write!(f, " {sign} {x}")?;
            } else {
                write!(f, " {sign} {} {x}", format_q(&mag))?;
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for SparsePolynomial {
    type Err = Error;

    /// Terms `[sign] [coefficient] [*] [x[^k]]`, e.g. `1 - 16/3 x^3 + 1/2*x^5`.
    /// The constant terms must add up to exactly 1.
    fn from_str(s: &str) -> Result<Self> {
        let b = s.as_bytes();
        let mut pos = 0;
        let skip = |pos: &mut usize| {
            while *pos < b.len() && b[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };
        let mut constant = Q::zero();
        let mut terms: Vec<(u32, Q)> = Vec::new();
        let mut first = true;
        loop {
            skip(&mut pos);
            if pos == b.len() {
                if first {
                    return Err(Error::parse(pos, "empty polynomial"));
                }
                break;
            }
            let term_start = pos;
            let mut negative = false;
            if b[pos] == b'+' || b[pos] == b'-' {
                negative = b[pos] == b'-';
                pos += 1;
                skip(&mut pos);
            } else if !first {
                return Err(Error::parse(pos, "expected '+' or '-' between terms"));
            }
            first = false;
            let num_start = pos;
            while pos < b.len() && (b[pos].is_ascii_digit() || matches!(b[pos], b'.' | b'/')) {
                pos += 1;
            }
            let mut coef = if pos > num_start {
                parse_q(&s[num_start..pos]).map_err(|e| shift(e, num_start))?
            } else {
                Q::one()
            };
            let had_number = pos > num_start;
            skip(&mut pos);
            if pos < b.len() && b[pos] == b'*' {
                if !had_number {
                    return Err(Error::parse(pos, "'*' without a coefficient"));
                }
                pos += 1;
                skip(&mut pos);
                if pos >= b.len() || b[pos] != b'x' {
                    return Err(Error::parse(pos, "expected 'x' after '*'"));
                }
            }
            let exponent = if pos < b.len() && b[pos] == b'x' {
                pos += 1;
                skip(&mut pos);
                if pos < b.len() && b[pos] == b'^' {
                    pos += 1;
                    skip(&mut pos);
                    let e_start = pos;
                    while pos < b.len() && b[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    s[e_start..pos]
                        .parse::<u32>()
                        .ok()
                        .filter(|&e| e <= 4096)
                        .ok_or_else(|| Error::parse(e_start, "expected an exponent up to 4096"))?
                } else {
                    1
                }
            } else if had_number {
                0
            } else {
                return Err(Error::parse(term_start, "expected a coefficient or 'x'"));
            };
            if negative {
                coef = -coef;
            }
            if exponent == 0 {
                constant += coef;
            } else if terms.iter().any(|(e, _)| *e == exponent) {
                return Err(Error::parse(term_start, format!("repeated exponent {exponent}")));
            } else {
                terms.push((exponent, coef));
            }
        }
        if !constant.is_one() {
            return Err(Error::parse(0, format!("constant term is {}, expected 1", format_q(&constant))));
        }
        SparsePolynomial::new(terms)
    }
}

fn shift(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + by, msg },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};
    use proptest::prelude::*;

    #[test]
    fn parse_examples() {
        let p: SparsePolynomial = "1 - 16/3 x^3 + 11/2 x^4 - 1/2 x^5".parse().unwrap();
        assert_eq!(p.exponents(), vec![3, 4, 5]);
        assert_eq!(p.coefficients(), vec![q(-16, 3), q(11, 2), q(-1, 2)]);
        assert_eq!(p.to_string(), "1 - 16/3 x^3 + 11/2 x^4 - 1/2 x^5");
        assert_eq!(p.eval(&qi(1)), q(2, 3));
        let one: SparsePolynomial = "1".parse().unwrap();
        assert!(one.terms().is_empty());
        let lin: SparsePolynomial = "-2x + 1".parse().unwrap();
        assert_eq!(lin.terms(), &[(1, qi(-2))]);
        let star: SparsePolynomial = "1 + 0.5*x^2 - x^3".parse().unwrap();
        assert_eq!(star.coefficients(), vec![q(1, 2), qi(-1)]);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!("".parse::<SparsePolynomial>(), Err(Error::Parse { .. })));
        assert!(matches!("2 + x".parse::<SparsePolynomial>(), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!("1 + x x".parse::<SparsePolynomial>(), Err(Error::Parse { pos: 6, .. })));
        assert!(matches!("1 + x^2 + x^2".parse::<SparsePolynomial>(), Err(Error::Parse { pos: 8, .. })));
        assert!(matches!("1 + 1/0 x".parse::<SparsePolynomial>(), Err(Error::Parse { pos: 6, .. })));
        assert!("1 + x^".parse::<SparsePolynomial>().is_err());
        assert!("1 + * x".parse::<SparsePolynomial>().is_err());
    }

    proptest! {
        #[test]
        fn display_round_trips(terms in prop::collection::btree_map(1u32..=30, (-50i64..=50, 1i64..=9), 0..=5)) {
            let p = SparsePolynomial::new(terms.into_iter().map(|(e, (a, b))| (e, q(a, b))).collect()).unwrap();
            prop_assert_eq!(p.to_string().parse::<SparsePolynomial>().unwrap(), p);
        }
    }
}

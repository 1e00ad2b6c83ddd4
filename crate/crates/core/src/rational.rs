//! Exact rational helpers shared by every module.
//!
//! Rationals serialize as `"p/q"` strings (or `"p"` when integral). Parsing
//! also accepts finite decimal literals such as `"0.25"` or `"-1.5e-3"`.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

#[inline]
pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

#[inline]
pub fn qi(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

#[inline]
pub fn qu(v: u64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // numerator/denominator overflow f64 separately; shift both down
        let shift = x.numer().bits().max(x.denom().bits()).saturating_sub(1000);
        let n = (x.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (x.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn format_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn parse_int(s: &str, offset: usize) -> Result<BigInt> {
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::parse(offset, format!("expected integer, found {s:?}")));
    }
    s.parse::<BigInt>()
        .map_err(|e| Error::parse(offset, e.to_string()))
}

/// Parse `"p/q"`, `"p"` or a finite decimal literal exactly.
pub fn parse_q(s: &str) -> Result<Q> {
    let t = s.trim();
    let offset = s.len() - s.trim_start().len();
    if t.is_empty() {
        return Err(Error::parse(offset, "empty rational"));
    }
    if let Some((n, d)) = t.split_once('/') {
        let num = parse_int(n.trim(), offset)?;
        let den = parse_int(d.trim(), offset + n.len() + 1)?;
        if den.is_zero() {
            return Err(Error::parse(offset + n.len() + 1, "zero denominator"));
        }
        return Ok(Q::new(num, den));
    }
    parse_decimal(t, offset)
}

fn parse_decimal(t: &str, offset: usize) -> Result<Q> {
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => {
            let e = &t[i + 1..];
            let e_val: i64 = parse_int(e, offset + i + 1)?
                .to_i64()
                .filter(|v| v.abs() <= 4096)
                .ok_or_else(|| Error::parse(offset + i + 1, "exponent out of range"))?;
            (&t[..i], e_val)
        }
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.bytes().all(|b| b.is_ascii_digit())
        || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(Error::parse(offset, format!("invalid number {t:?}")));
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut num: BigInt = if all.is_empty() {
        BigInt::zero()
    } else {
        all.parse().map_err(|_| Error::parse(offset, "invalid digits"))?
    };
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i64;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        Q::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Q::new(num, num_traits::pow(ten, (-scale) as usize))
    })
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Q>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

pub fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

pub mod serde_q {
    //! Serde adapters writing rationals as `"p/q"` strings.
    use super::{format_q, parse_q, Q};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::super::{format_q, parse_q, Q};
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(xs.iter().map(format_q))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
            let raw = Vec::<String>::deserialize(d)?;
            raw.iter()
                .map(|s| parse_q(s).map_err(serde::de::Error::custom))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_q("3/4").unwrap(), q(3, 4));
        assert_eq!(parse_q(" -6/8 ").unwrap(), q(-3, 4));
        assert_eq!(parse_q("0.25").unwrap(), q(1, 4));
        assert_eq!(parse_q("-1.5e-1").unwrap(), q(-3, 20));
        assert_eq!(parse_q("2e3").unwrap(), qi(2000));
        assert_eq!(parse_q(".5").unwrap(), q(1, 2));
        assert_eq!(parse_q("7").unwrap(), qi(7));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "1/0", "a", "1/", "/2", "1.2.3", "--1", "1e", ".", "1e99999", "+"] {
            assert!(parse_q(bad).is_err(), "{bad:?} should fail");
        }
    }

    #[test]
    fn formats() {
        assert_eq!(format_q(&q(8, 20)), "2/5");
        assert_eq!(format_q(&qi(-3)), "-3");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(factorial(4), 24);
    }
}

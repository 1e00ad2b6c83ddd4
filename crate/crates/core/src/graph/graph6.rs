//! graph6 encoding (McKay's ASCII format) for graphs of up to `MAX_VERTICES`
//! vertices. Decoding is strict: padding bits must be zero so that
//! `encode(decode(s)) == s` for every accepted string.

use super::{Graph, MAX_VERTICES};
use crate::error::{Error, Result};

const HEADER: &str = ">>graph6<<";

pub fn encode(g: &Graph) -> String {
    let n = g.order();
    let mut out = String::with_capacity(1 + (n * n).div_ceil(12));
    // n <= MAX_VERTICES < 63 always takes the one-byte size form
    out.push((n as u8 + 63) as char);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push((acc + 63) as char);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(((acc << (6 - filled)) + 63) as char);
    }
    out
}

/// Decode one graph6 string; an optional `>>graph6<<` header and trailing
/// line break are accepted.
pub fn decode(s: &str) -> Result<Graph> {
    let body = s.strip_prefix(HEADER).unwrap_or(s);
    let skipped = s.len() - body.len();
    let body = body.trim_end_matches(['\n', '\r']);
    let bytes = body.as_bytes();
    if let Some(pos) = bytes.iter().position(|&b| !(63..=126).contains(&b)) {
        return Err(Error::parse(
            skipped + pos,
            format!("byte {:#04x} outside graph6 range", bytes[pos]),
        ));
    }
    let (n, header_len) = match bytes {
        [] => return Err(Error::parse(skipped, "empty graph6 string")),
        [126, 126, rest @ ..] => {
            if rest.len() < 6 {
                return Err(Error::parse(skipped + 2, "truncated size field"));
            }
            let n = rest[..6]
                .iter()
                .fold(0u64, |acc, &b| acc << 6 | (b - 63) as u64);
            (n, 8)
        }
        [126, rest @ ..] => {
            if rest.len() < 3 {
                return Err(Error::parse(skipped + 1, "truncated size field"));
            }
            let n = rest[..3]
                .iter()
                .fold(0u64, |acc, &b| acc << 6 | (b - 63) as u64);
            (n, 4)
        }
        [b, ..] => ((b - 63) as u64, 1),
    };
    if header_len > 1 && n < 63 {
        return Err(Error::parse(skipped, "non-canonical size field"));
    }
    if n == 0 || n as usize > MAX_VERTICES {
        return Err(Error::Capacity {
            what: "graph6 vertex count",
            limit: MAX_VERTICES,
            got: n.min(usize::MAX as u64) as usize,
        });
    }
    let n = n as usize;
    let bits = n * (n - 1) / 2;
    let need = bits.div_ceil(6);
    let data = &bytes[header_len..];
    if data.len() != need {
        return Err(Error::parse(
            skipped + header_len + data.len().min(need),
            format!("expected {need} data bytes for {n} vertices, found {}", data.len()),
        ));
    }
    let mut g = Graph::empty(n)?;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = data[k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                g.add_edge(i, j);
            }
            k += 1;
        }
    }
    if need > 0 {
        let pad = need * 6 - bits;
        let last = data[need - 1] - 63;
        if last & ((1u8 << pad) - 1) != 0 {
            return Err(Error::parse(
                skipped + header_len + need - 1,
                "nonzero padding bits",
            ));
        }
    }
    Ok(g)
}

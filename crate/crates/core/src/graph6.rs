//! graph6 text encoding (header-free, one graph per line).
//!
//! The order `n` is written as one byte `n + 63` for `n <= 62`, or `~` followed by
//! three 6-bit groups for `n <= 258047`. The upper triangle of the adjacency
//! matrix follows column by column (`x(0,1), x(0,2), x(1,2), x(0,3), ...`),
//! packed six bits per byte, most significant first, zero padded.

use thiserror::Error;

use crate::graph::LabelledGraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6Error {
    #[error("empty graph6 string")]
    Empty,
    #[error("byte {0:#04x} outside the graph6 range 63..=126")]
    BadByte(u8),
    #[error("malformed length prefix")]
    BadLength,
    #[error("expected {expected} data bytes, found {found}")]
    WrongDataLength { expected: usize, found: usize },
    #[error("padding bits after the adjacency data are not zero")]
    NonzeroPadding,
    #[error("graph with {0} vertices is too large for graph6")]
    TooLarge(usize),
}

const MAX_ORDER: usize = 258_047;

pub fn encode(g: &LabelledGraph) -> Result<String, Graph6Error> {
    let n = g.order();
    if n > MAX_ORDER {
        return Err(Graph6Error::TooLarge(n));
    }
    let mut out = Vec::with_capacity(4 + (n * n.saturating_sub(1) / 2).div_ceil(6));
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i + 1, j + 1) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    Ok(String::from_utf8(out).expect("graph6 bytes are ASCII"))
}

pub fn decode(text: &str) -> Result<LabelledGraph, Graph6Error> {
    let bytes = text.trim_end_matches(['\n', '\r']).as_bytes();
    if bytes.is_empty() {
        return Err(Graph6Error::Empty);
    }
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(Graph6Error::BadByte(b));
    }
    let (n, data) = if bytes[0] != 126 {
        ((bytes[0] - 63) as usize, &bytes[1..])
    } else {
        if bytes.len() < 4 || bytes[1] == 126 {
            // 6-byte lengths (`~~`) exceed anything this crate handles.
            return Err(Graph6Error::BadLength);
        }
        let n = bytes[1..4]
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
        if n <= 62 {
            return Err(Graph6Error::BadLength);
        }
        (n, &bytes[4..])
    };
    let bits = n * n.saturating_sub(1) / 2;
    let expected = bits.div_ceil(6);
    if data.len() != expected {
        return Err(Graph6Error::WrongDataLength {
            expected,
            found: data.len(),
        });
    }
    let bit_at = |k: usize| (data[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    for k in bits..expected * 6 {
        if bit_at(k) {
            return Err(Graph6Error::NonzeroPadding);
        }
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit_at(k) {
                edges.push((i + 1, j + 1));
            }
            k += 1;
        }
    }
    Ok(LabelledGraph::new(n, edges).expect("decoded pairs are distinct and in range"))
}

//! graph6 encoding and decoding.
//!
//! The format packs the upper adjacency triangle in column order, bits
//! x(0,1), x(0,2), x(1,2), x(0,3), ..., six bits per byte, most significant
//! bit first, each byte offset by 63. The vertex count is one byte (n + 63)
//! for n <= 62, or '~' plus three such bytes for n up to 258047. Decoding is
//! strict: exact length, printable range, and zero padding bits are all
//! enforced.

use crate::graph::{Graph, Vertex};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("empty graph6 string")]
    Empty,
    #[error("byte {0:#x} outside the graph6 range 63..=126")]
    InvalidByte(u8),
    #[error("truncated vertex-count header")]
    TruncatedHeader,
    #[error("vertex count {0} not supported")]
    UnsupportedCount(u64),
    #[error("expected {expected} data bytes for n={n}, got {got}")]
    WrongLength { n: usize, expected: usize, got: usize },
    #[error("padding bits past the last edge must be zero")]
    NonzeroPadding,
}

/// Encodes a graph as a graph6 string (no header line, no trailing newline).
pub fn encode(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(63 + n as u8);
    } else {
        assert!(n <= 258047, "graph6 long-long form not supported, n = {n}");
        out.push(b'~');
        let v = n as u32;
        out.push(63 + ((v >> 12) & 63) as u8);
        out.push(63 + ((v >> 6) & 63) as u8);
        out.push(63 + (v & 63) as u8);
    }
    let nbits = n * n.saturating_sub(1) / 2;
    let mut acc: u8 = 0;
    let mut filled = 0;
    let mut emitted = 0;
    for v in 1..n as Vertex {
        for u in 0..v {
            acc = (acc << 1) | u8::from(g.has_edge(u, v));
            filled += 1;
            if filled == 6 {
                out.push(63 + acc);
                acc = 0;
                filled = 0;
                emitted += 6;
            }
        }
    }
    if filled > 0 {
        out.push(63 + (acc << (6 - filled)));
        emitted += 6;
    }
    debug_assert!(emitted >= nbits && emitted < nbits + 6);
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}

/// Decodes a graph6 string. A leading ">>graph6<<" marker is accepted and
/// stripped; surrounding whitespace is trimmed.
pub fn decode(s: &str) -> Result<Graph, Graph6Error> {
    let s = s.trim();
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    let bytes = s.as_bytes();
    if bytes.is_empty() {
        return Err(Graph6Error::Empty);
    }
    for &b in bytes {
        if !(63..=126).contains(&b) {
            return Err(Graph6Error::InvalidByte(b));
        }
    }
    let (n, data) = if bytes[0] == b'~' {
        if bytes.len() < 4 {
            return Err(Graph6Error::TruncatedHeader);
        }
        if bytes[1] == b'~' {
            // 8-byte form encodes n > 258047; nothing at that scale here.
            let mut v: u64 = 0;
            if bytes.len() < 8 {
                return Err(Graph6Error::TruncatedHeader);
            }
            for &b in &bytes[2..8] {
                v = v << 6 | u64::from(b - 63);
            }
            return Err(Graph6Error::UnsupportedCount(v));
        }
        let v = (u32::from(bytes[1] - 63) << 12) | (u32::from(bytes[2] - 63) << 6) | u32::from(bytes[3] - 63);
        (v as usize, &bytes[4..])
    } else {
        ((bytes[0] - 63) as usize, &bytes[1..])
    };
    let nbits = n * n.saturating_sub(1) / 2;
    let expected = nbits.div_ceil(6);
    if data.len() != expected {
        return Err(Graph6Error::WrongLength { n, expected, got: data.len() });
    }
    let mut edges = Vec::new();
    let mut idx = 0;
    for v in 1..n as Vertex {
        for u in 0..v {
            let byte = data[idx / 6] - 63;
            if byte >> (5 - idx % 6) & 1 == 1 {
                edges.push((u, v));
            }
            idx += 1;
        }
    }
    if idx % 6 != 0 {
        let byte = data[idx / 6] - 63;
        let pad_mask = (1u8 << (6 - idx % 6)) - 1;
        if byte & pad_mask != 0 {
            return Err(Graph6Error::NonzeroPadding);
        }
    }
    Ok(Graph::new(n, edges).expect("decoded upper triangle cannot be malformed"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    #[test]
    fn known_strings() {
        assert_eq!(encode(&Graph::complete(4)), "C~");
        assert_eq!(encode(&Graph::complete(5)), "D~{");
        let c5 = Graph::new(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        assert_eq!(encode(&c5), "Dhc");
        assert_eq!(encode(&Graph::new(0, []).unwrap()), "?");
        assert_eq!(decode("C~").unwrap(), Graph::complete(4));
        assert_eq!(decode(">>graph6<<D~{").unwrap(), Graph::complete(5));
    }

    #[test]
    fn long_count_header_round_trips() {
        let g = Graph::new(70, [(0, 69), (13, 37)]).unwrap();
        let s = encode(&g);
        assert!(s.starts_with('~'));
        assert_eq!(decode(&s).unwrap(), g);
    }

    #[test]
    fn strictness() {
        assert_eq!(decode(""), Err(Graph6Error::Empty));
        assert_eq!(decode("C~~"), Err(Graph6Error::WrongLength { n: 4, expected: 1, got: 2 }));
        assert_eq!(decode("C"), Err(Graph6Error::WrongLength { n: 4, expected: 1, got: 0 }));
        assert_eq!(decode("B\n"), Err(Graph6Error::WrongLength { n: 3, expected: 1, got: 0 }));
        assert_eq!(decode("C\x1f"), Err(Graph6Error::InvalidByte(0x1f)));
        // n=3 has 3 data bits; the low 3 bits of the data byte are padding.
        // 0b111000 -> '_' + 63 = 119 ok; 0b111100 sets a padding bit.
        assert_eq!(decode(&format!("B{}", (63 + 0b111000u8) as char)).unwrap(), Graph::complete(3));
        assert_eq!(decode(&format!("B{}", (63 + 0b111100u8) as char)), Err(Graph6Error::NonzeroPadding));
    }
}

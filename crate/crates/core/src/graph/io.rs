//! graph6 and plain edge-list formats.

use super::{SimpleGraph, MAX_VERTICES};
use crate::error::{Error, Result};

/// Upper triangle in column-major order: (0,1), (0,2), (1,2), (0,3), ...
fn upper_triangle(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..n).flat_map(|j| (0..j).map(move |i| (i, j)))
}

pub(super) fn to_graph6(g: &SimpleGraph) -> String {
    let n = g.n();
    let mut out = Vec::with_capacity(1 + (n * n.saturating_sub(1) / 2).div_ceil(6));
    out.push(n as u8 + 63);
    let mut chunk = 0u8;
    let mut filled = 0;
    for (i, j) in upper_triangle(n) {
        chunk = chunk << 1 | g.has_edge(i, j) as u8;
        filled += 1;
        if filled == 6 {
            out.push(chunk + 63);
            chunk = 0;
            filled = 0;
        }
    }
    if filled > 0 {
        out.push((chunk << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}

pub(super) fn parse_graph6(text: &str) -> Result<SimpleGraph> {
    let bytes = text.trim_end_matches(['\n', '\r']).as_bytes();
    let bytes = bytes.strip_prefix(b">>graph6<<").unwrap_or(bytes);
    let Some(&head) = bytes.first() else {
        return Err(Error::parse(0, "empty graph6 string"));
    };
    if !(63..=126).contains(&head) {
        return Err(Error::parse(
            0,
            format!("byte 0x{head:02x} is outside the graph6 range"),
        ));
    }
    if head == 126 {
        return Err(Error::parse(
            0,
            format!("graphs with more than {MAX_VERTICES} vertices are not supported"),
        ));
    }
    let n = (head - 63) as usize;
    let bits = n * n.saturating_sub(1) / 2;
    let expected = 1 + bits.div_ceil(6);
    if bytes.len() != expected {
        return Err(Error::parse(
            bytes.len().min(expected),
            format!("expected {expected} bytes for n={n}, found {}", bytes.len()),
        ));
    }
    for (offset, &b) in bytes.iter().enumerate().skip(1) {
        if !(63..=126).contains(&b) {
            return Err(Error::parse(
                offset,
                format!("byte 0x{b:02x} is outside the graph6 range"),
            ));
        }
    }
    let mut g = SimpleGraph::empty(n)?;
    for (k, (i, j)) in upper_triangle(n).enumerate() {
        let byte = bytes[1 + k / 6] - 63;
        if byte >> (5 - k % 6) & 1 == 1 {
            g.add_edge(i, j)?;
        }
    }
    Ok(g)
}

/// Parses `n m` followed by `m` lines `u v`. Blank lines and `#` comments are
/// ignored. Offsets in errors are byte offsets of the offending line.
pub(super) fn parse_edge_list(text: &str) -> Result<SimpleGraph> {
    let mut lines = text.split_inclusive('\n').scan(0usize, |offset, line| {
        let start = *offset;
        *offset += line.len();
        Some((start, line))
    });
    let mut content = lines.by_ref().filter_map(|(off, line)| {
        let body = line.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then_some((off, body))
    });

    let (off, header) = content
        .next()
        .ok_or_else(|| Error::parse(0, "missing header line `n m`"))?;
    let [n, m] = parse_pair(off, header)?;
    let mut g = SimpleGraph::empty(n).map_err(|e| Error::parse(off, e.to_string()))?;
    let mut seen = 0;
    for (off, line) in content {
        let [u, v] = parse_pair(off, line)?;
        if u == v {
            return Err(Error::parse(off, format!("loop at vertex {u}")));
        }
        if u >= n || v >= n {
            return Err(Error::parse(
                off,
                format!("edge ({u},{v}) has a label >= n={n}"),
            ));
        }
        if g.has_edge(u, v) {
            return Err(Error::parse(off, format!("duplicate edge ({u},{v})")));
        }
        g.add_edge(u, v)?;
        seen += 1;
    }
    if seen != m {
        return Err(Error::parse(
            text.len(),
            format!("header declares {m} edges, found {seen}"),
        ));
    }
    Ok(g)
}

fn parse_pair(offset: usize, line: &str) -> Result<[usize; 2]> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(Error::parse(
            offset,
            format!("expected two integers, found `{line}`"),
        ));
    }
    let mut out = [0; 2];
    for (slot, f) in out.iter_mut().zip(&fields) {
        *slot = f
            .parse()
            .map_err(|_| Error::parse(offset, format!("`{f}` is not a nonnegative integer")))?;
    }
    Ok(out)
}

pub(super) fn to_edge_list(g: &SimpleGraph) -> String {
    let mut s = format!("{} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures;
    use proptest::prelude::*;

    #[test]
    fn k2_is_a_underscore() {
        let k2 = fixtures::complete(2).unwrap();
        assert_eq!(k2.to_graph6(), "A_");
        assert_eq!(SimpleGraph::parse_graph6("A_").unwrap(), k2);
    }

    #[test]
    fn known_encodings() {
        // Hand-encoded from the column-major upper triangle.
        assert_eq!(fixtures::complete(4).unwrap().to_graph6(), "C~");
        assert_eq!(fixtures::path(3).unwrap().to_graph6(), "Bg");
        assert_eq!(SimpleGraph::empty(0).unwrap().to_graph6(), "?");
        assert_eq!(fixtures::cycle(5).unwrap().to_graph6(), "Dhc");
    }

    #[test]
    fn graph6_errors() {
        assert!(matches!(
            SimpleGraph::parse_graph6("C"),
            Err(Error::Parse { offset: 1, .. })
        ));
        assert!(matches!(
            SimpleGraph::parse_graph6("C~~"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            SimpleGraph::parse_graph6("D\x20c"),
            Err(Error::Parse { offset: 1, .. })
        ));
        assert!(SimpleGraph::parse_graph6("").is_err());
        assert!(SimpleGraph::parse_graph6("~").is_err());
    }

    #[test]
    fn edge_lists() {
        let tri = SimpleGraph::parse_edge_list("3 3\n0 1\n1 2\n0 2\n").unwrap();
        assert_eq!(tri, fixtures::complete(3).unwrap());
        let loop_err = SimpleGraph::parse_edge_list("2 1\n0 0\n").unwrap_err();
        assert!(loop_err.to_string().contains("loop"), "{loop_err}");
        let dup = SimpleGraph::parse_edge_list("2 2\n0 1\n0 1\n").unwrap_err();
        assert!(dup.to_string().contains("duplicate"), "{dup}");
        let range = SimpleGraph::parse_edge_list("2 1\n0 2\n").unwrap_err();
        assert!(range.to_string().contains(">= n"), "{range}");
        assert!(SimpleGraph::parse_edge_list("3 2\n0 1\n").is_err());
        let commented = "# triangle\n3 3\n0 1 # first\n\n1 2\n0 2";
        assert_eq!(SimpleGraph::parse_edge_list(commented).unwrap(), tri);
        assert_eq!(
            SimpleGraph::parse_edge_list(&tri.to_edge_list()).unwrap(),
            tri
        );
    }

    fn arb_graph() -> impl Strategy<Value = SimpleGraph> {
        (0usize..=8).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2).prop_map(
                move |bits| {
                    let mut g = SimpleGraph::empty(n).unwrap();
                    for ((i, j), b) in upper_triangle(n).zip(bits) {
                        if b {
                            g.add_edge(i, j).unwrap();
                        }
                    }
                    g
                },
            )
        })
    }

    proptest! {
        #[test]
        fn graph6_round_trip(g in arb_graph()) {
            prop_assert_eq!(SimpleGraph::parse_graph6(&g.to_graph6()).unwrap(), g);
        }
    }
}

//! Isomorphism classes of graphs with a given vertex and edge count.
//!
//! Graphs are grown one edge at a time from the empty graph; every child is
//! reduced to its canonical representative and duplicates are dropped level
//! by level. Dense classes are produced from the complements of the sparse
//! side.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

/// Largest vertex count accepted by [`enumerate_class`].
pub const ENUMERATION_MAX_VERTICES: usize = 9;

/// The class `C(n, m)` of connected simple graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct ClassSpec {
    pub n: usize,
    pub m: usize,
}

impl ClassSpec {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n == 0 || m + 1 < n || m > n * (n - 1) / 2 {
            return Err(Error::invalid(format!(
                "C(n={n}, m={m}) is empty: need n >= 1 and n-1 <= m <= n(n-1)/2"
            )));
        }
        Ok(ClassSpec { n, m })
    }

    pub fn max_edges(&self) -> usize {
        self.n * (self.n - 1) / 2
    }
}

/// Canonical representatives of every graph (connected or not) on `n`
/// vertices with `edges` edges, sorted by graph6.
pub fn graphs_with_edges(n: usize, edges: usize) -> Result<Vec<SimpleGraph>> {
    if n > ENUMERATION_MAX_VERTICES {
        return Err(Error::Budget {
            what: "class enumeration (vertices)",
            required: n as u64,
            limit: ENUMERATION_MAX_VERTICES as u64,
        });
    }
    let max = n * n.saturating_sub(1) / 2;
    if edges > max {
        return Ok(Vec::new());
    }
    let mut level: Vec<SimpleGraph> = vec![SimpleGraph::empty(n)?];
    for _ in 0..edges {
        let children: BTreeSet<String> = level
            .par_iter()
            .flat_map_iter(|g| {
                let mut out = Vec::new();
                for u in 0..n {
                    for v in u + 1..n {
                        if !g.has_edge(u, v) {
                            let mut child = g.clone();
                            child.add_edge(u, v).expect("non-edge");
                            out.push(child.canonical().to_graph6());
                        }
                    }
                }
                out
            })
            .collect();
        level = children
            .into_iter()
            .map(|s| SimpleGraph::parse_graph6(&s).expect("round trip"))
            .collect();
    }
    Ok(level)
}

/// One canonical representative per isomorphism class of `C(n, m)`, sorted
/// by canonical graph6.
pub fn enumerate_class(spec: ClassSpec) -> Result<Vec<SimpleGraph>> {
    let max = spec.max_edges();
    let members: BTreeSet<String> = if 2 * spec.m > max {
        graphs_with_edges(spec.n, max - spec.m)?
            .par_iter()
            .map(SimpleGraph::complement)
            .filter(SimpleGraph::is_connected)
            .map(|g| g.canonical().to_graph6())
            .collect()
    } else {
        graphs_with_edges(spec.n, spec.m)?
            .into_iter()
            .filter(SimpleGraph::is_connected)
            .map(|g| g.to_graph6())
            .collect()
    };
    Ok(members
        .into_iter()
        .map(|s| SimpleGraph::parse_graph6(&s).expect("round trip"))
        .collect())
}

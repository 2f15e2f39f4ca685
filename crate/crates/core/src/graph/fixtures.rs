//! Named graphs used throughout the tests and by the CLI `fixture:` scheme.

use super::SimpleGraph;
use crate::error::{Error, Result};

pub fn cycle(n: usize) -> Result<SimpleGraph> {
    if n < 3 {
        return Err(Error::invalid(format!("cycle needs n >= 3, got {n}")));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    SimpleGraph::from_edges(n, &edges)
}

pub fn path(n: usize) -> Result<SimpleGraph> {
    if n == 0 {
        return Err(Error::invalid("path needs n >= 1"));
    }
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    SimpleGraph::from_edges(n, &edges)
}

pub fn complete(n: usize) -> Result<SimpleGraph> {
    if n == 0 {
        return Err(Error::invalid("complete graph needs n >= 1"));
    }
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    SimpleGraph::from_edges(n, &edges)
}

/// Sides `0..a` and `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Result<SimpleGraph> {
    if a == 0 || b == 0 {
        return Err(Error::invalid(
            "complete bipartite graph needs nonempty sides",
        ));
    }
    let edges: Vec<_> = (0..a)
        .flat_map(|u| (a..a + b).map(move |v| (u, v)))
        .collect();
    SimpleGraph::from_edges(a + b, &edges)
}

/// `K_n` minus the matching `{(0,1), (2,3), ..., (2k-2, 2k-1)}`.
pub fn complete_minus_matching(n: usize, k: usize) -> Result<SimpleGraph> {
    if 2 * k > n {
        return Err(Error::invalid(format!(
            "a matching of size {k} does not fit in {n} vertices"
        )));
    }
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| !(u % 2 == 0 && v == u + 1 && v < 2 * k))
        .collect();
    SimpleGraph::from_edges(n, &edges)
}

/// `K_{4,4}` on `{0,1,2,3} | {4,5,6,7}` plus the edges (0,1) and (2,3).
pub fn figure1_g() -> SimpleGraph {
    let mut g = complete_bipartite(4, 4).expect("K_{4,4}");
    g.add_edge(0, 1).expect("fresh edge");
    g.add_edge(2, 3).expect("fresh edge");
    g
}

/// `K_{4,4}` plus (2,3) on the left side and (6,7) on the right side.
pub fn figure1_h() -> SimpleGraph {
    let mut g = complete_bipartite(4, 4).expect("K_{4,4}");
    g.add_edge(2, 3).expect("fresh edge");
    g.add_edge(6, 7).expect("fresh edge");
    g
}

/// Resolves a fixture spec such as `cycle:5`, `complete_bipartite:3:4` or
/// `figure1_G`.
pub fn by_name(spec: &str) -> Result<SimpleGraph> {
    let mut parts = spec.split(':');
    let name = parts.next().unwrap_or_default();
    let args: Vec<usize> = parts
        .map(|p| {
            p.parse()
                .map_err(|_| Error::invalid(format!("fixture argument `{p}` is not an integer")))
        })
        .collect::<Result<_>>()?;
    let arity = |k: usize| -> Result<()> {
        if args.len() == k {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "fixture `{name}` takes {k} argument(s), got {}",
                args.len()
            )))
        }
    };
    match name {
        "figure1_G" | "figure1_g" => arity(0).map(|_| figure1_g()),
        "figure1_H" | "figure1_h" => arity(0).map(|_| figure1_h()),
        "cycle" => arity(1).and_then(|_| cycle(args[0])),
        "path" => arity(1).and_then(|_| path(args[0])),
        "complete" => arity(1).and_then(|_| complete(args[0])),
        "complete_bipartite" => arity(2).and_then(|_| complete_bipartite(args[0], args[1])),
        "complete_minus_matching" => {
            arity(2).and_then(|_| complete_minus_matching(args[0], args[1]))
        }
        _ => Err(Error::invalid(format!("unknown fixture `{name}`"))),
    }
}

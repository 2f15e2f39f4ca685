//! Labeled simple graphs and multigraphs on dense vertex labels `0..n`.

mod canon;
mod dsu;
pub mod fixtures;
mod io;

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

pub use canon::{canonical_labeling, CanonicalForm};
pub use dsu::DisjointSets;

/// Largest vertex count supported; adjacency rows are 64-bit masks and
/// graph6 is restricted to the single-byte size header.
pub const MAX_VERTICES: usize = 62;

/// Connected-component structure of a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub count: usize,
    /// Component id per vertex; ids are assigned in order of smallest member.
    pub labels: Vec<usize>,
}

/// A labeled simple graph: no loops, no parallel edges.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    n: usize,
    /// Sorted, each pair with `u < v`.
    edges: Vec<(u8, u8)>,
    adj: Vec<u64>,
}

impl SimpleGraph {
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::invalid(format!(
                "{n} vertices exceeds the supported maximum of {MAX_VERTICES}"
            )));
        }
        Ok(SimpleGraph {
            n,
            edges: Vec::new(),
            adj: vec![0; n],
        })
    }

    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = SimpleGraph::empty(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::invalid(format!(
                "edge ({u},{v}) has an endpoint outside 0..{}",
                self.n
            )));
        }
        if u == v {
            return Err(Error::invalid(format!("loop at vertex {u}")));
        }
        if self.has_edge(u, v) {
            return Err(Error::invalid(format!("duplicate edge ({u},{v})")));
        }
        let e = (u.min(v) as u8, u.max(v) as u8);
        let pos = self.edges.binary_search(&e).unwrap_err();
        self.edges.insert(pos, e);
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = (usize, usize)> + '_ {
        self.edges.iter().map(|&(u, v)| (u as usize, v as usize))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u] >> v & 1 == 1
    }

    /// Neighborhood of `v` as a bitmask.
    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        d.sort_unstable();
        d
    }

    pub fn components(&self) -> Components {
        let mut labels = vec![usize::MAX; self.n];
        let mut count = 0;
        for s in 0..self.n {
            if labels[s] != usize::MAX {
                continue;
            }
            let mut seen = 1u64 << s;
            let mut frontier = seen;
            while frontier != 0 {
                let mut next = 0;
                let mut f = frontier;
                while f != 0 {
                    let v = f.trailing_zeros() as usize;
                    f &= f - 1;
                    next |= self.adj[v];
                }
                frontier = next & !seen;
                seen |= next;
            }
            let mut s_bits = seen;
            while s_bits != 0 {
                let v = s_bits.trailing_zeros() as usize;
                s_bits &= s_bits - 1;
                labels[v] = count;
            }
            count += 1;
        }
        Components { count, labels }
    }

    pub fn is_connected(&self) -> bool {
        self.components().count <= 1
    }

    /// `(r, c)` with rank `n - κ` and corank `m - n + κ`.
    pub fn rank_corank(&self) -> (usize, usize) {
        let k = self.components().count;
        (self.n - k, self.m() + k - self.n)
    }

    /// The graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> SimpleGraph {
        assert_eq!(perm.len(), self.n, "permutation length must equal n");
        let mut g = SimpleGraph {
            n: self.n,
            edges: Vec::with_capacity(self.m()),
            adj: vec![0; self.n],
        };
        for (u, v) in self.edges() {
            let (a, b) = (perm[u], perm[v]);
            g.adj[a] |= 1 << b;
            g.adj[b] |= 1 << a;
            g.edges.push((a.min(b) as u8, a.max(b) as u8));
        }
        g.edges.sort_unstable();
        g
    }

    pub fn complement(&self) -> SimpleGraph {
        let mut g = SimpleGraph {
            n: self.n,
            edges: Vec::new(),
            adj: vec![0; self.n],
        };
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    g.edges.push((u as u8, v as u8));
                    g.adj[u] |= 1 << v;
                    g.adj[v] |= 1 << u;
                }
            }
        }
        g
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        CanonicalForm::of_simple(self)
    }

    /// The canonical representative of this graph's isomorphism class.
    pub fn canonical(&self) -> SimpleGraph {
        self.relabel(&canonical_labeling(self))
    }

    pub fn to_multigraph(&self) -> MultiGraph {
        let mut mg = MultiGraph::empty(self.n);
        for (u, v) in self.edges() {
            mg.add_edge(u, v);
        }
        mg
    }

    pub fn parse_graph6(text: &str) -> Result<Self> {
        io::parse_graph6(text)
    }

    pub fn to_graph6(&self) -> String {
        io::to_graph6(self)
    }

    pub fn parse_edge_list(text: &str) -> Result<Self> {
        io::parse_edge_list(text)
    }

    pub fn to_edge_list(&self) -> String {
        io::to_edge_list(self)
    }

    /// Uniformly random labeled spanning tree skeleton plus uniformly chosen
    /// extra edges. Not uniform over connected graphs, which the tests do not
    /// need.
    pub fn random_connected<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES || m + 1 < n || m > n * (n - 1) / 2 {
            return Err(Error::invalid(format!(
                "no connected simple graph with n={n}, m={m}"
            )));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let mut g = SimpleGraph::empty(n)?;
        for i in 1..n {
            let j = rng.random_range(0..i);
            g.add_edge(order[i], order[j])?;
        }
        let mut free: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| !g.has_edge(u, v))
            .collect();
        free.shuffle(rng);
        for &(u, v) in free.iter().take(m - (n - 1)) {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }
}

impl fmt::Debug for SimpleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimpleGraph(n={}, edges={:?})", self.n, self.edges)
    }
}

/// A multigraph: parallel edges and loops allowed.
///
/// Stored as a symmetric multiplicity matrix; the diagonal holds loop counts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiGraph {
    n: usize,
    mult: Vec<u32>,
}

impl MultiGraph {
    pub fn empty(n: usize) -> Self {
        MultiGraph {
            n,
            mult: vec![0; n * n],
        }
    }

    /// Panics on out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = MultiGraph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.add_edges(u, v, 1);
    }

    pub fn add_edges(&mut self, u: usize, v: usize, k: u32) {
        assert!(u < self.n && v < self.n, "endpoint out of range");
        self.mult[u * self.n + v] += k;
        if u != v {
            self.mult[v * self.n + u] += k;
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edge count, loops included, parallel edges counted with multiplicity.
    pub fn m(&self) -> usize {
        let mut total = 0;
        for u in 0..self.n {
            for v in u..self.n {
                total += self.mult[u * self.n + v] as usize;
            }
        }
        total
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> u32 {
        self.mult[u * self.n + v]
    }

    pub fn loops(&self, v: usize) -> u32 {
        self.mult[v * self.n + v]
    }

    /// Expands the multiset of edges, one entry per parallel copy.
    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u..self.n {
                for _ in 0..self.mult[u * self.n + v] {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn components(&self) -> Components {
        let mut labels = vec![usize::MAX; self.n];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..self.n {
            if labels[s] != usize::MAX {
                continue;
            }
            labels[s] = count;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for v in 0..self.n {
                    if v != u && self.mult[u * self.n + v] > 0 && labels[v] == usize::MAX {
                        labels[v] = count;
                        stack.push(v);
                    }
                }
            }
            count += 1;
        }
        Components { count, labels }
    }

    pub fn rank_corank(&self) -> (usize, usize) {
        let k = self.components().count;
        (self.n - k, self.m() + k - self.n)
    }

    pub(crate) fn matrix(&self) -> &[u32] {
        &self.mult
    }

    pub(crate) fn from_matrix(n: usize, mult: Vec<u32>) -> Self {
        debug_assert_eq!(mult.len(), n * n);
        MultiGraph { n, mult }
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        CanonicalForm::of_multi(self)
    }

    /// Converts to a simple graph when there are no loops or parallel edges.
    pub fn to_simple(&self) -> Result<SimpleGraph> {
        let mut g = SimpleGraph::empty(self.n)?;
        for u in 0..self.n {
            if self.loops(u) > 0 {
                return Err(Error::invalid(format!("loop at vertex {u}")));
            }
            for v in u + 1..self.n {
                match self.multiplicity(u, v) {
                    0 => {}
                    1 => g.add_edge(u, v)?,
                    k => {
                        return Err(Error::invalid(format!(
                            "edge ({u},{v}) has multiplicity {k}"
                        )))
                    }
                }
            }
        }
        Ok(g)
    }
}

impl fmt::Debug for MultiGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiGraph(n={}, edges={:?})", self.n, self.edge_list())
    }
}

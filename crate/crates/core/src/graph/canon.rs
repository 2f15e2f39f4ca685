//! Canonical labeling by color refinement plus individualization search.
//!
//! Works on a symmetric weighted adjacency matrix (diagonal = loop count),
//! so the same search serves simple graphs and the multigraph minors that
//! deletion-contraction produces. The canonical labeling is the leaf of the
//! search tree whose relabeled matrix is lexicographically smallest.
//! Automorphisms discovered at equal leaves prune sibling subtrees.

use std::fmt;

use super::{DisjointSets, MultiGraph, SimpleGraph};

/// Isomorphism certificate: equal exactly for isomorphic graphs.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    bytes: Vec<u8>,
}

impl CanonicalForm {
    pub(crate) fn of_simple(g: &SimpleGraph) -> Self {
        let canon = g.relabel(&canonical_labeling(g));
        let mut bytes = vec![b'S'];
        bytes.extend_from_slice(canon.to_graph6().as_bytes());
        CanonicalForm { bytes }
    }

    pub(crate) fn of_multi(g: &MultiGraph) -> Self {
        let n = g.n();
        let lab = Canonizer::new(n, g.matrix()).run();
        let mut inv = vec![0; n];
        for (v, &l) in lab.iter().enumerate() {
            inv[l] = v;
        }
        let mut bytes = Vec::with_capacity(2 + n * (n + 1) / 2);
        bytes.push(b'M');
        push_varint(&mut bytes, n as u32);
        for i in 0..n {
            for j in i..n {
                push_varint(&mut bytes, g.multiplicity(inv[i], inv[j]));
            }
        }
        CanonicalForm { bytes }
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.bytes.first() {
            Some(b'S') => write!(
                f,
                "CanonicalForm({})",
                String::from_utf8_lossy(&self.bytes[1..])
            ),
            _ => write!(f, "CanonicalForm({:02x?})", self.bytes),
        }
    }
}

fn push_varint(out: &mut Vec<u8>, mut x: u32) {
    loop {
        let b = (x & 0x7f) as u8;
        x >>= 7;
        if x == 0 {
            out.push(b);
            return;
        }
        out.push(b | 0x80);
    }
}

/// Canonical relabeling of `g`: vertex `v` maps to `labeling[v]`.
pub fn canonical_labeling(g: &SimpleGraph) -> Vec<usize> {
    let n = g.n();
    let mut w = vec![0u32; n * n];
    for (u, v) in g.edges() {
        w[u * n + v] = 1;
        w[v * n + u] = 1;
    }
    Canonizer::new(n, &w).run()
}

struct Leaf {
    cert: Vec<u32>,
    inverse: Vec<usize>,
}

struct Canonizer<'a> {
    n: usize,
    w: &'a [u32],
    first: Option<Leaf>,
    best: Option<Leaf>,
    best_labeling: Vec<usize>,
    automorphisms: Vec<Vec<usize>>,
}

impl<'a> Canonizer<'a> {
    fn new(n: usize, w: &'a [u32]) -> Self {
        Canonizer {
            n,
            w,
            first: None,
            best: None,
            best_labeling: (0..n).collect(),
            automorphisms: Vec::new(),
        }
    }

    fn run(mut self) -> Vec<usize> {
        if self.n <= 1 {
            return (0..self.n).collect();
        }
        let loops: Vec<u32> = (0..self.n).map(|v| self.w[v * self.n + v]).collect();
        let colors = self.refine(normalize(&loops));
        let mut prefix = Vec::new();
        self.search(colors, &mut prefix);
        self.best_labeling
    }

    /// Splits cells by per-cell weighted degree until the partition is equitable.
    fn refine(&self, mut colors: Vec<u32>) -> Vec<u32> {
        let n = self.n;
        let mut cells = colors.iter().max().map_or(0, |&c| c as usize + 1);
        loop {
            if cells == n {
                return colors;
            }
            let mut sigs: Vec<(Vec<u32>, usize)> = (0..n)
                .map(|v| {
                    let mut sig = vec![0u32; cells + 1];
                    sig[0] = colors[v];
                    let row = &self.w[v * n..(v + 1) * n];
                    for (u, &wt) in row.iter().enumerate() {
                        if u != v {
                            sig[colors[u] as usize + 1] += wt;
                        }
                    }
                    (sig, v)
                })
                .collect();
            sigs.sort_unstable();
            let mut next = vec![0u32; n];
            let mut rank = 0u32;
            for i in 0..n {
                if i > 0 && sigs[i].0 != sigs[i - 1].0 {
                    rank += 1;
                }
                next[sigs[i].1] = rank;
            }
            let new_cells = rank as usize + 1;
            colors = next;
            if new_cells == cells {
                return colors;
            }
            cells = new_cells;
        }
    }

    fn search(&mut self, colors: Vec<u32>, prefix: &mut Vec<usize>) {
        let n = self.n;
        let mut sizes = vec![0usize; n];
        for &c in &colors {
            sizes[c as usize] += 1;
        }
        let target = sizes
            .iter()
            .enumerate()
            .filter(|&(_, &s)| s > 1)
            .min_by_key(|&(c, &s)| (s, c))
            .map(|(c, _)| c as u32);
        let Some(target) = target else {
            self.leaf(&colors);
            return;
        };
        let cell: Vec<usize> = (0..n).filter(|&v| colors[v] == target).collect();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cell {
            if !explored.is_empty() && self.equivalent_to_explored(v, &explored, prefix) {
                continue;
            }
            explored.push(v);
            let mut split: Vec<u32> = colors.iter().map(|&c| 2 * c + 1).collect();
            split[v] -= 1;
            let refined = self.refine(normalize(&split));
            prefix.push(v);
            self.search(refined, prefix);
            prefix.pop();
        }
    }

    /// True when some known automorphism fixing `prefix` pointwise maps an
    /// explored sibling onto `v`.
    fn equivalent_to_explored(&self, v: usize, explored: &[usize], prefix: &[usize]) -> bool {
        let mut orbits = DisjointSets::new(self.n);
        let mut any = false;
        for gamma in &self.automorphisms {
            if prefix.iter().all(|&p| gamma[p] == p) {
                any = true;
                for (x, &y) in gamma.iter().enumerate() {
                    orbits.union(x, y);
                }
            }
        }
        if !any {
            return false;
        }
        let root = orbits.find(v);
        explored.iter().any(|&e| orbits.find(e) == root)
    }

    fn leaf(&mut self, colors: &[u32]) {
        let n = self.n;
        let mut inverse = vec![0usize; n];
        for (v, &c) in colors.iter().enumerate() {
            inverse[c as usize] = v;
        }
        let mut cert = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in i..n {
                cert.push(self.w[inverse[i] * n + inverse[j]]);
            }
        }
        let leaf = Leaf { cert, inverse };
        if self.first.is_none() {
            self.best_labeling = colors.iter().map(|&c| c as usize).collect();
            self.best = Some(Leaf {
                cert: leaf.cert.clone(),
                inverse: leaf.inverse.clone(),
            });
            self.first = Some(leaf);
            return;
        }
        for reference in [&self.first, &self.best].into_iter().flatten() {
            if reference.cert == leaf.cert {
                let gamma: Vec<usize> = colors
                    .iter()
                    .map(|&c| reference.inverse[c as usize])
                    .collect();
                if gamma.iter().enumerate().any(|(x, &y)| x != y)
                    && !self.automorphisms.contains(&gamma)
                {
                    self.automorphisms.push(gamma);
                }
                return;
            }
        }
        if self.best.as_ref().is_some_and(|b| leaf.cert < b.cert) {
            self.best_labeling = colors.iter().map(|&c| c as usize).collect();
            self.best = Some(leaf);
        }
    }
}

/// Replaces values by their rank among the distinct values.
fn normalize(values: &[u32]) -> Vec<u32> {
    let mut distinct = values.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    values
        .iter()
        .map(|v| distinct.binary_search(v).unwrap() as u32)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Brute-force isomorphism test over all permutations.
    fn isomorphic_brute(a: &SimpleGraph, b: &SimpleGraph) -> bool {
        if a.n() != b.n() || a.m() != b.m() || a.degree_sequence() != b.degree_sequence() {
            return false;
        }
        let n = a.n();
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            if a.edges().all(|(u, v)| b.has_edge(perm[u], perm[v])) {
                return true;
            }
            if !next_permutation(&mut perm) {
                return false;
            }
        }
    }

    fn next_permutation(p: &mut [usize]) -> bool {
        let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
            return false;
        };
        let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
        true
    }

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, density: f64) -> SimpleGraph {
        let mut g = SimpleGraph::empty(n).unwrap();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(density) {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        g
    }

    #[test]
    fn relabeled_paths_agree() {
        let a = SimpleGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let b = SimpleGraph::from_edges(3, &[(2, 0), (0, 1)]).unwrap();
        assert_eq!(a.canonical_form(), b.canonical_form());
        let tri = fixtures::complete(3).unwrap();
        assert_ne!(a.canonical_form(), tri.canonical_form());
    }

    #[test]
    fn figure_graphs_are_distinct() {
        let g = fixtures::figure1_g();
        let h = fixtures::figure1_h();
        assert!(!isomorphic_brute(&g, &h));
        assert_ne!(g.canonical_form(), h.canonical_form());
    }

    #[test]
    fn invariant_under_relabeling() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let n = rng.random_range(1..10);
            let d = rng.random_range(0.1..0.9);
            let g = random_graph(&mut rng, n, d);
            let cf = g.canonical_form();
            for _ in 0..10 {
                let mut perm: Vec<usize> = (0..n).collect();
                perm.shuffle(&mut rng);
                assert_eq!(
                    g.relabel(&perm).canonical_form(),
                    cf,
                    "{g:?} under {perm:?}"
                );
            }
        }
    }

    #[test]
    fn agrees_with_brute_force_isomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..300 {
            let n = rng.random_range(2..7);
            let a = random_graph(&mut rng, n, 0.5);
            let mut b = random_graph(&mut rng, n, 0.5);
            if rng.random_bool(0.5) {
                let mut perm: Vec<usize> = (0..n).collect();
                perm.shuffle(&mut rng);
                b = a.relabel(&perm);
            }
            assert_eq!(
                a.canonical_form() == b.canonical_form(),
                isomorphic_brute(&a, &b),
                "{a:?} vs {b:?}"
            );
        }
    }

    #[test]
    fn symmetric_graphs_terminate() {
        for g in [
            SimpleGraph::empty(12).unwrap(),
            fixtures::complete(12).unwrap(),
            fixtures::complete_bipartite(6, 6).unwrap(),
            fixtures::cycle(30).unwrap(),
        ] {
            let lab = canonical_labeling(&g);
            let mut sorted = lab.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, (0..g.n()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn multigraph_forms_see_multiplicities() {
        let a = MultiGraph::from_edges(3, &[(0, 1), (0, 1), (1, 2)]);
        let b = MultiGraph::from_edges(3, &[(2, 1), (1, 0), (1, 0)]);
        let c = MultiGraph::from_edges(3, &[(0, 1), (1, 2), (1, 2), (0, 0)]);
        let d = MultiGraph::from_edges(3, &[(0, 1), (0, 1), (1, 2), (2, 2)]);
        assert_eq!(a.canonical_form(), b.canonical_form());
        assert_ne!(a.canonical_form(), c.canonical_form());
        assert_eq!(c.canonical_form(), d.canonical_form());
    }
}

//! Tutte and Whitney polynomials.
//!
//! Two independent engines: the literal spanning-subgraph expansion over all
//! `2^m` edge subsets, and deletion-contraction on multigraphs with a memo
//! keyed by canonical form.

use std::sync::atomic::{AtomicU64, Ordering};

use dashmap::DashMap;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{CanonicalForm, MultiGraph, SimpleGraph};
use crate::poly::BivarPoly;

/// Largest edge count accepted by the subset expansion.
pub const EXPANSION_MAX_EDGES: usize = 26;

/// Number of spanning subgraphs per (edge count, component count):
/// `census[i][k]` counts subsets of `i` edges leaving `k` components.
pub(crate) fn subset_census(
    n: usize,
    edges: &[(usize, usize)],
    max_edges: usize,
    what: &'static str,
) -> Result<Vec<Vec<u64>>> {
    let m = edges.len();
    if m > max_edges {
        return Err(Error::Budget {
            what,
            required: 1u64 << m.min(63),
            limit: 1u64 << max_edges,
        });
    }
    if n > u8::MAX as usize {
        return Err(Error::invalid(
            "subset census supports at most 255 vertices",
        ));
    }
    let total: u64 = 1 << m;
    let chunk: u64 = 1 << 12;
    let empty = || vec![vec![0u64; n + 1]; m + 1];
    let census = (0..total.div_ceil(chunk))
        .into_par_iter()
        .fold(empty, |mut acc, c| {
            let mut parent = vec![0u8; n];
            for mask in c * chunk..((c + 1) * chunk).min(total) {
                for (v, p) in parent.iter_mut().enumerate() {
                    *p = v as u8;
                }
                let mut comps = n;
                let mut bits = mask;
                while bits != 0 {
                    let e = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    let (ra, rb) = (root(&mut parent, edges[e].0), root(&mut parent, edges[e].1));
                    if ra != rb {
                        parent[ra] = rb as u8;
                        comps -= 1;
                    }
                }
                acc[mask.count_ones() as usize][comps] += 1;
            }
            acc
        })
        .reduce(empty, |mut a, b| {
            for (ra, rb) in a.iter_mut().zip(b) {
                for (x, y) in ra.iter_mut().zip(rb) {
                    *x += y;
                }
            }
            a
        });
    Ok(census)
}

fn root(parent: &mut [u8], mut v: usize) -> usize {
    while parent[v] as usize != v {
        let g = parent[parent[v] as usize];
        parent[v] = g;
        v = g as usize;
    }
    v
}

/// Accumulates `Σ census[i][k] · x^(k - κ(G)) · y^(i - n + k)`, i.e. the
/// Whitney rank generating function.
fn census_to_whitney(n: usize, kappa: usize, census: &[Vec<u64>]) -> BivarPoly {
    let mut w = BivarPoly::zero();
    for (i, row) in census.iter().enumerate() {
        for (k, &count) in row.iter().enumerate() {
            if count > 0 {
                w.add_term((k - kappa) as u32, (i + k - n) as u32, BigInt::from(count));
            }
        }
    }
    w
}

/// `T_G` by the subset expansion `Σ (x-1)^(r(G)-r(H)) (y-1)^c(H)`.
pub fn tutte_expansion(g: &SimpleGraph) -> Result<BivarPoly> {
    let edges: Vec<_> = g.edges().collect();
    expansion_tutte(g.n(), g.components().count, &edges)
}

/// Subset expansion for multigraphs; loops and parallel edges are ordinary
/// members of the edge multiset.
pub fn tutte_expansion_multi(g: &MultiGraph) -> Result<BivarPoly> {
    expansion_tutte(g.n(), g.components().count, &g.edge_list())
}

fn expansion_tutte(n: usize, kappa: usize, edges: &[(usize, usize)]) -> Result<BivarPoly> {
    let census = subset_census(n, edges, EXPANSION_MAX_EDGES, "tutte expansion")?;
    let mut t = BivarPoly::zero();
    for (i, row) in census.iter().enumerate() {
        for (k, &count) in row.iter().enumerate() {
            if count > 0 {
                let a = (k - kappa) as u32;
                let b = (i + k - n) as u32;
                t = t + BivarPoly::monomial(a, b, count).shift_vars(-1, -1);
            }
        }
    }
    Ok(t)
}

/// `W_G = Σ x^(r(G)-r(H)) y^c(H)` directly over all edge subsets.
pub fn whitney_expansion(g: &SimpleGraph) -> Result<BivarPoly> {
    let edges: Vec<_> = g.edges().collect();
    let census = subset_census(g.n(), &edges, EXPANSION_MAX_EDGES, "whitney expansion")?;
    Ok(census_to_whitney(g.n(), g.components().count, &census))
}

/// Memo table for deletion-contraction, shareable across threads.
///
/// Keys are canonical forms of loop-free, bridgeless, connected multigraphs;
/// values are their Tutte polynomials.
pub struct TutteMemo {
    map: DashMap<CanonicalForm, BivarPoly>,
    capacity: usize,
    hits: AtomicU64,
    misses: AtomicU64,
}

impl Default for TutteMemo {
    fn default() -> Self {
        TutteMemo::with_capacity(1 << 22)
    }
}

impl TutteMemo {
    pub fn new() -> Self {
        TutteMemo::default()
    }

    /// Entries beyond `capacity` are computed but not stored.
    pub fn with_capacity(capacity: usize) -> Self {
        TutteMemo {
            map: DashMap::new(),
            capacity,
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn hits(&self) -> u64 {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn misses(&self) -> u64 {
        self.misses.load(Ordering::Relaxed)
    }
}

/// `T_G` by deletion-contraction.
pub fn tutte_dc(g: &MultiGraph, memo: &TutteMemo) -> BivarPoly {
    let (n, mult) = (g.n(), g.matrix().to_vec());
    Minor { n, mult }.tutte(memo)
}

/// `T_G` for a simple graph by deletion-contraction with a private memo.
pub fn tutte(g: &SimpleGraph) -> BivarPoly {
    tutte_dc(&g.to_multigraph(), &TutteMemo::new())
}

pub fn whitney_with(g: &SimpleGraph, memo: &TutteMemo) -> BivarPoly {
    tutte_dc(&g.to_multigraph(), memo).shift_vars(1, 1)
}

/// `W_G(x, y) = T_G(x + 1, y + 1)`.
pub fn whitney(g: &SimpleGraph) -> BivarPoly {
    whitney_with(g, &TutteMemo::new())
}

/// Working multigraph for the recursion: dense symmetric multiplicity
/// matrix with loop counts on the diagonal.
#[derive(Clone)]
struct Minor {
    n: usize,
    mult: Vec<u32>,
}

impl Minor {
    fn at(&self, u: usize, v: usize) -> u32 {
        self.mult[u * self.n + v]
    }

    fn tutte(mut self, memo: &TutteMemo) -> BivarPoly {
        let mut loops = 0;
        for v in 0..self.n {
            loops += std::mem::take(&mut self.mult[v * self.n + v]);
        }
        let factor = BivarPoly::monomial(0, loops, 1);
        let parts = self.split_components();
        let mut acc = factor;
        for part in parts {
            acc = &acc * &part.tutte_connected(memo);
        }
        acc
    }

    /// Loop-free input, possibly disconnected. Returns one minor per component.
    fn split_components(self) -> Vec<Minor> {
        let n = self.n;
        let mut label = vec![usize::MAX; n];
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            let id = groups.len();
            let mut members = vec![s];
            label[s] = id;
            let mut i = 0;
            while i < members.len() {
                let u = members[i];
                for v in 0..n {
                    if label[v] == usize::MAX && self.at(u, v) > 0 {
                        label[v] = id;
                        members.push(v);
                    }
                }
                i += 1;
            }
            groups.push(members);
        }
        if groups.len() == 1 {
            return vec![self];
        }
        groups.iter().map(|members| self.induced(members)).collect()
    }

    fn induced(&self, members: &[usize]) -> Minor {
        let k = members.len();
        let mut mult = vec![0; k * k];
        for (i, &u) in members.iter().enumerate() {
            for (j, &v) in members.iter().enumerate() {
                mult[i * k + j] = self.at(u, v);
            }
        }
        Minor { n: k, mult }
    }

    /// Connected, loop-free input.
    fn tutte_connected(self, memo: &TutteMemo) -> BivarPoly {
        let (reduced, bridges) = self.contract_bridges();
        let factor = BivarPoly::monomial(bridges, 0, 1);
        let core = match reduced.n {
            1 => BivarPoly::one(),
            2 => {
                // k >= 2 parallel edges: x + y + ... + y^(k-1)
                let k = reduced.at(0, 1);
                let mut p = BivarPoly::x();
                for j in 1..k {
                    p.add_term(0, j, BigInt::one());
                }
                p
            }
            _ => {
                let key = MultiGraph::from_matrix(reduced.n, reduced.mult.clone()).canonical_form();
                if let Some(hit) = memo.map.get(&key) {
                    memo.hits.fetch_add(1, Ordering::Relaxed);
                    hit.clone()
                } else {
                    memo.misses.fetch_add(1, Ordering::Relaxed);
                    let value = reduced.branch(memo);
                    if memo.map.len() < memo.capacity {
                        memo.map.insert(key, value.clone());
                    }
                    value
                }
            }
        };
        &factor * &core
    }

    /// Deletes and contracts the heaviest parallel class, smallest endpoint
    /// pair first among ties. Input is connected, loop-free and bridgeless.
    fn branch(self, memo: &TutteMemo) -> BivarPoly {
        let n = self.n;
        let mut best = (0u32, 0usize, 0usize);
        for u in 0..n {
            for v in u + 1..n {
                let k = self.at(u, v);
                if k > best.0 {
                    best = (k, u, v);
                }
            }
        }
        let (k, u, v) = best;
        debug_assert!(k > 0, "connected minor with n >= 2 has an edge");

        let contracted = self.contract(u, v);
        let mut deleted = self;
        deleted.mult[u * n + v] = 0;
        deleted.mult[v * n + u] = 0;

        // 1 + y + ... + y^(k-1), with the constant replaced by x when the
        // class is a bridge bundle.
        let separates = !deleted.connected_between(u, v);
        let mut weight = BivarPoly::zero();
        for j in 1..k {
            weight.add_term(0, j, BigInt::one());
        }
        let contracted_t = contracted.tutte(memo);
        if separates {
            weight.add_term(1, 0, BigInt::one());
            &weight * &contracted_t
        } else {
            weight.add_term(0, 0, BigInt::one());
            &deleted.tutte(memo) + &(&weight * &contracted_t)
        }
    }

    /// Merges `v` into `u`; the `u`-`v` edges vanish (their loops are
    /// accounted for by the caller's weight).
    fn contract(&self, u: usize, v: usize) -> Minor {
        let n = self.n;
        let keep: Vec<usize> = (0..n).filter(|&w| w != v).collect();
        let k = n - 1;
        let mut mult = vec![0; k * k];
        let map = |w: usize| if w == v { u } else { w };
        for a in 0..n {
            for b in a..n {
                let c = self.at(a, b);
                if c == 0 || (a.min(b), a.max(b)) == (u.min(v), u.max(v)) {
                    continue;
                }
                let (ma, mb) = (map(a), map(b));
                let ia = keep.iter().position(|&w| w == ma).unwrap();
                let ib = keep.iter().position(|&w| w == mb).unwrap();
                mult[ia * k + ib] += c;
                if ia != ib {
                    mult[ib * k + ia] += c;
                }
            }
        }
        Minor { n: k, mult }
    }

    fn connected_between(&self, s: usize, t: usize) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(a) = stack.pop() {
            if a == t {
                return true;
            }
            for b in 0..self.n {
                if !seen[b] && self.at(a, b) > 0 {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
        false
    }

    /// Contracts every single-edge bridge; returns the minor and the count.
    fn contract_bridges(self) -> (Minor, u32) {
        let bridges = self.bridges();
        if bridges.is_empty() {
            return (self, 0);
        }
        let n = self.n;
        let mut rep: Vec<usize> = (0..n).collect();
        fn find(rep: &mut [usize], mut x: usize) -> usize {
            while rep[x] != x {
                x = rep[x];
            }
            x
        }
        for &(a, b) in &bridges {
            let (ra, rb) = (find(&mut rep, a), find(&mut rep, b));
            rep[ra.max(rb)] = ra.min(rb);
        }
        let roots: Vec<usize> = (0..n).filter(|&v| find(&mut rep, v) == v).collect();
        let k = roots.len();
        let mut mult = vec![0; k * k];
        for a in 0..n {
            for b in a + 1..n {
                let c = self.at(a, b);
                if c == 0 || bridges.contains(&(a, b)) {
                    continue;
                }
                let ia = roots.binary_search(&find(&mut rep, a)).unwrap();
                let ib = roots.binary_search(&find(&mut rep, b)).unwrap();
                debug_assert_ne!(
                    ia, ib,
                    "a non-bridge cannot join vertices merged by bridges"
                );
                mult[ia * k + ib] += c;
                mult[ib * k + ia] += c;
            }
        }
        (Minor { n: k, mult }, bridges.len() as u32)
    }

    /// Single edges whose removal disconnects their endpoints (Tarjan lowlink).
    fn bridges(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut out = Vec::new();
        let mut time = 0;
        // Iterative DFS: (vertex, parent, next neighbor to scan).
        let mut stack: Vec<(usize, usize, usize)> = Vec::new();
        for s in 0..n {
            if disc[s] != usize::MAX {
                continue;
            }
            disc[s] = time;
            low[s] = time;
            time += 1;
            stack.push((s, usize::MAX, 0));
            while let Some(&mut (u, parent, ref mut next)) = stack.last_mut() {
                if *next < n {
                    let v = *next;
                    *next += 1;
                    let c = self.at(u, v);
                    if c == 0 || v == u {
                        continue;
                    }
                    if v == parent && c == 1 {
                        continue;
                    }
                    if disc[v] == usize::MAX {
                        disc[v] = time;
                        low[v] = time;
                        time += 1;
                        stack.push((v, u, 0));
                    } else {
                        low[u] = low[u].min(disc[v]);
                    }
                } else {
                    stack.pop();
                    if parent != usize::MAX {
                        low[parent] = low[parent].min(low[u]);
                        if low[u] > disc[parent] && self.at(parent, u) == 1 {
                            out.push((parent.min(u), parent.max(u)));
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}

fn require_connected(g: &SimpleGraph) -> Result<()> {
    let k = g.components().count;
    if k != 1 {
        return Err(Error::Disconnected { components: k });
    }
    Ok(())
}

/// `[t_1, ..., t_n]`: spanning forests with exactly `i` trees, read off
/// `W_G(x, 0)`.
pub fn forest_gen(g: &SimpleGraph) -> Result<Vec<BigInt>> {
    require_connected(g)?;
    Ok(forests_from_whitney(&whitney(g), g.n()))
}

pub(crate) fn forests_from_whitney(w: &BivarPoly, n: usize) -> Vec<BigInt> {
    let mut t = w.y_zero_slice();
    t.resize(n, BigInt::zero());
    t
}

/// Spanning-tree count as `W_G(0, 0)`.
pub fn tree_number(g: &SimpleGraph) -> Result<BigInt> {
    require_connected(g)?;
    Ok(whitney(g).coeff(0, 0))
}

/// Spanning-tree count as a Laplacian cofactor, by fraction-free Gaussian
/// elimination.
pub fn tree_number_mtt(g: &SimpleGraph) -> Result<BigInt> {
    require_connected(g)?;
    let n = g.n();
    if n <= 1 {
        return Ok(BigInt::one());
    }
    // Laplacian with the last row and column removed.
    let k = n - 1;
    let mut a: Vec<Vec<BigInt>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    if i == j {
                        BigInt::from(g.degree(i))
                    } else if g.has_edge(i, j) {
                        BigInt::from(-1)
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    Ok(bareiss_determinant(&mut a))
}

pub(crate) fn bareiss_determinant(a: &mut [Vec<BigInt>]) -> BigInt {
    let k = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for p in 0..k {
        if a[p][p].is_zero() {
            let Some(r) = (p + 1..k).find(|&r| !a[r][p].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(p, r);
            sign = -sign;
        }
        for i in p + 1..k {
            for j in p + 1..k {
                let v = (&a[i][j] * &a[p][p] - &a[i][p] * &a[p][j]) / &prev;
                a[i][j] = v;
            }
            a[i][p] = BigInt::zero();
        }
        prev = a[p][p].clone();
    }
    &a[k - 1][k - 1] * sign
}

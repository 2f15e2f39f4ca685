use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use whitney_core::counts::{self, binomial_row, parse_rational};
use whitney_core::enumerate::{enumerate_class, graphs_with_edges, ClassSpec};
use whitney_core::tutte;
use whitney_core::SimpleGraph;

fn connected_up_to(max_n: usize) -> Vec<SimpleGraph> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for e in 0..=n * (n - 1) / 2 {
            out.extend(
                graphs_with_edges(n, e)
                    .unwrap()
                    .into_iter()
                    .filter(|g| g.is_connected()),
            );
        }
    }
    out
}

fn random_graph(
    rng: &mut ChaCha8Rng,
    ns: std::ops::RangeInclusive<usize>,
    max_m: usize,
) -> SimpleGraph {
    let n = rng.random_range(ns);
    let hi = (n * (n - 1) / 2).min(max_m);
    let m = rng.random_range(n - 1..=hi);
    SimpleGraph::random_connected(n, m, rng).unwrap()
}

#[test]
fn whitney_tables_match_bruteforce() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut graphs = connected_up_to(5);
    assert_eq!(graphs.len(), 1 + 1 + 2 + 6 + 21);
    graphs.extend((0..50).map(|_| random_graph(&mut rng, 6..=7, 21)));
    for g in &graphs {
        let from_w = counts::ntable_from_whitney(&tutte::whitney(g), g.n(), g.m()).unwrap();
        let brute = counts::ntable_bruteforce(g).unwrap();
        assert_eq!(from_w, brute, "{}", g.to_graph6());
        let binom = binomial_row(g.m());
        for (i, row) in brute.rows().iter().enumerate() {
            assert_eq!(row.iter().sum::<BigUint>(), binom[i]);
        }
    }
}

#[test]
fn deletion_contraction_matches_expansion() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut graphs = connected_up_to(5);
    graphs.extend((0..100).map(|_| random_graph(&mut rng, 2..=8, 20)));
    for g in &graphs {
        assert_eq!(
            tutte::tutte(g),
            tutte::tutte_expansion(g).unwrap(),
            "{}",
            g.to_graph6()
        );
    }
}

#[test]
fn tree_numbers_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..100 {
        let g = random_graph(&mut rng, 1..=12, 40);
        let t = tutte::tree_number(&g).unwrap();
        assert_eq!(t, tutte::tree_number_mtt(&g).unwrap(), "{}", g.to_graph6());
        assert_eq!(t, tutte::forest_gen(&g).unwrap()[0]);
    }
}

#[test]
fn reliability_via_tutte_matches_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let ps: Vec<BigRational> = ["1/3", "1/2", "2/3"]
        .iter()
        .map(|s| parse_rational(s).unwrap())
        .collect();
    for _ in 0..50 {
        let g = random_graph(&mut rng, 2..=8, 18);
        let rel = counts::reliability(&counts::ntable(&g).unwrap(), 1).unwrap();
        for p in &ps {
            assert_eq!(
                counts::rel_eval(&rel, p).unwrap(),
                counts::reliability_via_tutte(&g, p).unwrap()
            );
        }
    }
}

#[test]
fn forest_counts_agree_across_modules() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let mut graphs = connected_up_to(5);
    graphs.extend((0..30).map(|_| random_graph(&mut rng, 6..=8, 20)));
    for g in &graphs {
        let table = counts::ntable(g).unwrap();
        let forests = tutte::forest_gen(g).unwrap();
        for k in 1..=g.n() {
            let from_table = BigInt::from(counts::t_k(&table, k).unwrap());
            assert_eq!(from_table, forests[k - 1], "{} k={k}", g.to_graph6());
        }
    }
}

#[test]
fn polynomials_are_isomorphism_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..60 {
        let g = random_graph(&mut rng, 2..=8, 18);
        let mut perm: Vec<usize> = (0..g.n()).collect();
        for i in (1..perm.len()).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        let h = g.relabel(&perm);
        assert_eq!(tutte::tutte(&g), tutte::tutte(&h));
        assert_eq!(tutte::whitney(&g), tutte::whitney(&h));
    }
}

fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Labeled connected graphs on `n` vertices with `m` edges, by removing the
/// graphs whose component through vertex 0 has `s < n` vertices.
fn labeled_connected(
    n: usize,
    m: usize,
    memo: &mut std::collections::HashMap<(usize, usize), u128>,
) -> u128 {
    if let Some(&v) = memo.get(&(n, m)) {
        return v;
    }
    let mut total = binom(n * (n - 1) / 2, m);
    for s in 1..n {
        for j in 0..=m.min(s * (s - 1) / 2) {
            let rest = binom((n - s) * (n - s - 1) / 2, m - j);
            if rest > 0 {
                total -= binom(n - 1, s - 1) * labeled_connected(s, j, memo) * rest;
            }
        }
    }
    memo.insert((n, m), total);
    total
}

fn automorphisms(g: &SimpleGraph) -> u128 {
    fn extend(g: &SimpleGraph, image: &mut Vec<usize>, used: &mut Vec<bool>) -> u128 {
        let v = image.len();
        if v == g.n() {
            return 1;
        }
        let mut count = 0;
        for w in 0..g.n() {
            if used[w] || g.degree(w) != g.degree(v) {
                continue;
            }
            if (0..v).all(|u| g.has_edge(u, v) == g.has_edge(image[u], w)) {
                image.push(w);
                used[w] = true;
                count += extend(g, image, used);
                used[w] = false;
                image.pop();
            }
        }
        count
    }
    extend(g, &mut Vec::new(), &mut vec![false; g.n()])
}

fn orbit_sum(members: &[SimpleGraph], n: usize) -> u128 {
    let fact: u128 = (1..=n as u128).product();
    members.iter().map(|g| fact / automorphisms(g)).sum()
}

#[test]
fn labeled_recurrence_sanity() {
    let mut memo = Default::default();
    assert_eq!(labeled_connected(3, 2, &mut memo), 3);
    assert_eq!(labeled_connected(4, 3, &mut memo), 16);
    assert_eq!(labeled_connected(4, 4, &mut memo), 15);
}

#[test]
fn enumeration_matches_labeled_subsets() {
    for n in 1..=6 {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|v| (0..v).map(move |u| (u, v))).collect();
        let mut seen: Vec<std::collections::BTreeSet<String>> =
            vec![Default::default(); pairs.len() + 1];
        for mask in 0u32..1 << pairs.len() {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, e)| *e)
                .collect();
            let g = SimpleGraph::from_edges(n, &edges).unwrap();
            if g.is_connected() {
                seen[edges.len()].insert(g.canonical().to_graph6());
            }
        }
        for (m, expected) in seen.iter().enumerate() {
            if m + 1 < n {
                continue;
            }
            let found: std::collections::BTreeSet<String> =
                enumerate_class(ClassSpec::new(n, m).unwrap())
                    .unwrap()
                    .iter()
                    .map(|g| g.to_graph6())
                    .collect();
            assert_eq!(&found, expected, "C_({n},{m})");
        }
    }
}

#[test]
fn orbit_counts_match_labeled_counts() {
    let mut memo = Default::default();
    let mut cases: Vec<(usize, usize)> = (2..=6)
        .flat_map(|n| (n - 1..=n * (n - 1) / 2).map(move |m| (n, m)))
        .collect();
    cases.extend([(7, 10), (8, 18)]);
    for (n, m) in cases {
        let members = enumerate_class(ClassSpec::new(n, m).unwrap()).unwrap();
        assert_eq!(
            orbit_sum(&members, n),
            labeled_connected(n, m, &mut memo),
            "C_({n},{m})"
        );
        if (n, m) == (8, 18) {
            assert_eq!(members.len(), 658);
        }
    }
}

//! Spanning-subgraph count tables and the reliability quantities derived
//! from them.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::poly::BivarPoly;
use crate::tutte;

/// Largest edge count accepted by [`ntable_bruteforce`].
pub const BRUTEFORCE_MAX_EDGES: usize = 24;

/// `C(m, 0..=m)`.
pub fn binomial_row(m: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for i in 1..=m {
        let next = &row[i - 1] * BigUint::from(m + 1 - i) / BigUint::from(i);
        row.push(next);
    }
    row
}

/// `N_{i,j}`: spanning subgraphs with exactly `i` edges and exactly `j`
/// components, for `i in 0..=m`, `j in 1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NTable {
    n: usize,
    m: usize,
    /// `rows[i][j - 1]`.
    rows: Vec<Vec<BigUint>>,
}

impl NTable {
    fn new(n: usize, m: usize, rows: Vec<Vec<BigUint>>) -> Result<Self> {
        let t = NTable { n, m, rows };
        t.check_row_sums()?;
        Ok(t)
    }

    fn check_row_sums(&self) -> Result<()> {
        for (i, (row, expect)) in self.rows.iter().zip(binomial_row(self.m)).enumerate() {
            let sum: BigUint = row.iter().sum();
            if sum != expect {
                return Err(Error::Consistency(format!(
                    "row {i} of the count table sums to {sum}, expected C({}, {i}) = {expect}",
                    self.m
                )));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `N_{i,j}`; zero outside the table.
    pub fn get(&self, i: usize, j: usize) -> BigUint {
        if i > self.m || j == 0 || j > self.n {
            return BigUint::zero();
        }
        self.rows[i][j - 1].clone()
    }

    pub fn rows(&self) -> &[Vec<BigUint>] {
        &self.rows
    }

    fn check_range(&self, i: usize, k: usize) -> Result<()> {
        if i > self.m || k == 0 || k > self.n {
            return Err(Error::invalid(format!(
                "index (i={i}, k={k}) outside 0..={} x 1..={}",
                self.m, self.n
            )));
        }
        Ok(())
    }

    /// `N_i^(k) = Σ_{j <= k} N_{i,j}`.
    pub fn n_leq(&self, i: usize, k: usize) -> Result<BigUint> {
        self.check_range(i, k)?;
        Ok(self.rows[i][..k].iter().sum())
    }

    /// All prefix sums: `cumulative()[i][k - 1] = N_i^(k)`.
    pub fn cumulative(&self) -> Vec<Vec<BigUint>> {
        self.rows
            .iter()
            .map(|row| {
                let mut acc = BigUint::zero();
                row.iter()
                    .map(|c| {
                        acc += c;
                        acc.clone()
                    })
                    .collect()
            })
            .collect()
    }

    /// `N_i^(k)(self) >= N_i^(k)(other)` for every `(i, k)`.
    pub fn dominates(&self, other: &NTable) -> Result<bool> {
        self.same_shape(other)?;
        let (a, b) = (self.cumulative(), other.cumulative());
        Ok(a.iter()
            .zip(&b)
            .all(|(ra, rb)| ra.iter().zip(rb).all(|(x, y)| x >= y)))
    }

    fn same_shape(&self, other: &NTable) -> Result<()> {
        if (self.n, self.m) != (other.n, other.m) {
            return Err(Error::DimensionMismatch(format!(
                "tables for (n={}, m={}) and (n={}, m={})",
                self.n, self.m, other.n, other.m
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("table serialization is infallible")
    }

    /// SHA-256 of the compact JSON serialization, hex encoded.
    pub fn digest(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("table serialization is infallible");
        hex::encode(Sha256::digest(&bytes))
    }
}

impl Serialize for NTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let counts: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|c| c.to_string()).collect())
            .collect();
        let mut s = serializer.serialize_struct("NTable", 3)?;
        s.serialize_field("n", &self.n)?;
        s.serialize_field("m", &self.m)?;
        s.serialize_field("counts", &counts)?;
        s.end()
    }
}

/// Reads `N_{i,j}` as the coefficient of `x^(j-1) y^(i-n+j)` in the Whitney
/// polynomial of a connected graph.
pub fn ntable_from_whitney(w: &BivarPoly, n: usize, m: usize) -> Result<NTable> {
    if n == 0 {
        return Err(Error::invalid("count tables need n >= 1"));
    }
    let mut rows = vec![vec![BigUint::zero(); n]; m + 1];
    let mut used = 0;
    for (i, row) in rows.iter_mut().enumerate() {
        for j in 1..=n {
            if i + j < n {
                continue;
            }
            let c = w.coeff((j - 1) as u32, (i + j - n) as u32);
            if c.is_zero() {
                continue;
            }
            used += 1;
            row[j - 1] = c.to_biguint().ok_or_else(|| {
                Error::Consistency(format!("negative Whitney coefficient {c} at N_({i},{j})"))
            })?;
        }
    }
    if used != w.len() {
        return Err(Error::Consistency(format!(
            "Whitney polynomial has {} terms but only {used} fall inside the (n={n}, m={m}) table",
            w.len()
        )));
    }
    NTable::new(n, m, rows)
}

/// Direct enumeration of all `2^m` edge subsets.
pub fn ntable_bruteforce(g: &SimpleGraph) -> Result<NTable> {
    let edges: Vec<_> = g.edges().collect();
    let census = tutte::subset_census(
        g.n(),
        &edges,
        BRUTEFORCE_MAX_EDGES,
        "count table enumeration",
    )?;
    let rows = census
        .into_iter()
        .map(|row| row.into_iter().skip(1).map(BigUint::from).collect())
        .collect();
    NTable::new(g.n(), g.m(), rows)
}

/// `N_{i,j}` of a connected graph via its Whitney polynomial.
pub fn ntable(g: &SimpleGraph) -> Result<NTable> {
    if !g.is_connected() {
        return Err(Error::Disconnected {
            components: g.components().count,
        });
    }
    ntable_from_whitney(&tutte::whitney(g), g.n(), g.m())
}

/// `μ_i = C(m, i) - N_i^(1)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MuVector(pub Vec<BigUint>);

pub fn mu_vector(t: &NTable) -> MuVector {
    MuVector(
        binomial_row(t.m)
            .into_iter()
            .zip(&t.rows)
            .map(|(c, row)| c - &row[0])
            .collect(),
    )
}

/// Lexicographic comparison of μ-vectors; 0-elements are minima.
pub fn mu_lex_compare(a: &MuVector, b: &MuVector) -> Result<Ordering> {
    if a.0.len() != b.0.len() {
        return Err(Error::DimensionMismatch(format!(
            "mu-vectors of length {} and {}",
            a.0.len(),
            b.0.len()
        )));
    }
    Ok(a.0.cmp(&b.0))
}

/// `R^(k)(p) = Σ N_i^(k) p^i (1-p)^(m-i)`, kept in that basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReliabilityPoly {
    pub m: usize,
    pub k: usize,
    pub coeffs: Vec<BigUint>,
}

impl ReliabilityPoly {
    /// Power-basis coefficients `[a_0, ..., a_m]` of `Σ a_d p^d`.
    pub fn to_power_basis(&self) -> Vec<BigInt> {
        let m = self.m;
        let mut out = vec![BigInt::zero(); m + 1];
        for (i, n_i) in self.coeffs.iter().enumerate() {
            if n_i.is_zero() {
                continue;
            }
            // p^i (1-p)^(m-i) = Σ_l C(m-i, l) (-1)^l p^(i+l)
            for (l, c) in binomial_row(m - i).into_iter().enumerate() {
                let term = BigInt::from_biguint(Sign::Plus, c * n_i);
                if l % 2 == 0 {
                    out[i + l] += term;
                } else {
                    out[i + l] -= term;
                }
            }
        }
        out
    }
}

pub fn reliability(t: &NTable, k: usize) -> Result<ReliabilityPoly> {
    if k == 0 || k > t.n {
        return Err(Error::invalid(format!("k={k} outside 1..={}", t.n)));
    }
    Ok(ReliabilityPoly {
        m: t.m,
        k,
        coeffs: t.rows.iter().map(|row| row[..k].iter().sum()).collect(),
    })
}

fn check_probability(p: &BigRational) -> Result<()> {
    if p.is_negative() || p > &BigRational::one() {
        return Err(Error::invalid(format!("probability {p} is outside [0, 1]")));
    }
    Ok(())
}

pub fn rel_eval(rp: &ReliabilityPoly, p: &BigRational) -> Result<BigRational> {
    check_probability(p)?;
    let q = BigRational::one() - p;
    let mut acc = BigRational::zero();
    let mut p_pow = BigRational::one();
    for (i, n_i) in rp.coeffs.iter().enumerate() {
        if !n_i.is_zero() {
            let q_pow = num_traits::pow(q.clone(), rp.m - i);
            acc += BigRational::from_integer(BigInt::from(n_i.clone())) * &p_pow * q_pow;
        }
        p_pow *= p;
    }
    Ok(acc)
}

/// `R^(1)(p) = p^(n-1) (1-p)^(m-n+1) T_G(1, 1/(1-p))` for `0 < p < 1`.
pub fn reliability_via_tutte_poly(
    t: &BivarPoly,
    n: usize,
    m: usize,
    p: &BigRational,
) -> Result<BigRational> {
    if !p.is_positive() || p >= &BigRational::one() {
        return Err(Error::invalid(format!(
            "the Tutte evaluation route needs 0 < p < 1, got {p}"
        )));
    }
    if m + 1 < n {
        return Err(Error::invalid(format!(
            "m={m} is too small for a connected graph on {n} vertices"
        )));
    }
    let q = BigRational::one() - p;
    let value = t.eval_rational(&BigRational::one(), &q.recip());
    Ok(num_traits::pow(p.clone(), n - 1) * num_traits::pow(q, m + 1 - n) * value)
}

pub fn reliability_via_tutte(g: &SimpleGraph, p: &BigRational) -> Result<BigRational> {
    if !g.is_connected() {
        return Err(Error::Disconnected {
            components: g.components().count,
        });
    }
    reliability_via_tutte_poly(&tutte::tutte(g), g.n(), g.m(), p)
}

/// Smallest number of edge deletions leaving more than `k` components, or
/// `None` when no deletion set does (`k = n`).
pub fn lambda_k(t: &NTable, k: usize) -> Result<Option<usize>> {
    if k == 0 || k > t.n {
        return Err(Error::invalid(format!("k={k} outside 1..={}", t.n)));
    }
    let binom = binomial_row(t.m);
    Ok((0..=t.m).find(|&x| {
        let i = t.m - x;
        let n_leq: BigUint = t.rows[i][..k].iter().sum();
        n_leq < binom[i]
    }))
}

/// Spanning forests with exactly `k` trees: `N_{n-k}^(k)`.
pub fn t_k(t: &NTable, k: usize) -> Result<BigUint> {
    if k == 0 || k > t.n {
        return Err(Error::invalid(format!("k={k} outside 1..={}", t.n)));
    }
    if t.n - k > t.m {
        return Ok(BigUint::zero());
    }
    t.n_leq(t.n - k, k)
}

/// Outcome of a sign certification on `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BernsteinVerdict {
    NonnegativeOn01,
    /// A point with strictly negative value.
    NegativeWitness(BigRational),
    Unknown,
}

pub const DEFAULT_BERNSTEIN_DEPTH: u32 = 30;

/// Certifies the sign of `Σ δ_i p^i (1-p)^(m-i)` on `[0, 1]` by midpoint
/// subdivision of its Bernstein form (`δ_i / C(m, i)`).
pub fn bernstein_certify(delta: &[BigRational], max_depth: u32) -> BernsteinVerdict {
    if delta.is_empty() {
        return BernsteinVerdict::NonnegativeOn01;
    }
    let m = delta.len() - 1;
    let coeffs: Vec<BigRational> = delta
        .iter()
        .zip(binomial_row(m))
        .map(|(d, c)| d / BigRational::from_integer(BigInt::from(c)))
        .collect();
    let mut undecided = false;
    let mut stack = vec![(coeffs, BigRational::zero(), BigRational::one(), 0u32)];
    while let Some((b, lo, hi, depth)) = stack.pop() {
        if b.iter().all(|c| !c.is_negative()) {
            continue;
        }
        if b[0].is_negative() {
            return BernsteinVerdict::NegativeWitness(lo);
        }
        if b[m].is_negative() {
            return BernsteinVerdict::NegativeWitness(hi);
        }
        if depth >= max_depth {
            undecided = true;
            continue;
        }
        let (left, right) = de_casteljau_halves(&b);
        let mid = (&lo + &hi) / BigRational::from_integer(2.into());
        stack.push((right, mid.clone(), hi, depth + 1));
        stack.push((left, lo, mid, depth + 1));
    }
    if undecided {
        BernsteinVerdict::Unknown
    } else {
        BernsteinVerdict::NonnegativeOn01
    }
}

fn de_casteljau_halves(b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let half = BigRational::new(1.into(), 2.into());
    let mut work = b.to_vec();
    let mut left = vec![work[0].clone()];
    let mut right = vec![work[work.len() - 1].clone()];
    for len in (1..work.len()).rev() {
        for i in 0..len {
            work[i] = (&work[i] + &work[i + 1]) * &half;
        }
        left.push(work[0].clone());
        right.push(work[len - 1].clone());
    }
    right.reverse();
    (left, right)
}

/// Parses `a/b` or an integer into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let bad = || Error::parse(0, format!("`{text}` is not a rational of the form a/b"));
    let (num, den) = match text.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::parse(0, format!("`{text}` has a zero denominator")));
    }
    Ok(BigRational::new(num, den))
}

pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Rational approximation helper for display only.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
}

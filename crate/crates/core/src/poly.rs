//! Sparse bivariate polynomials with exact big-integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exponent pair `(a, b)` for the monomial `x^a y^b`.
pub type Exponent = (u32, u32);

/// `Σ c_{a,b} x^a y^b` with no stored zero coefficients.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BivarPoly {
    terms: BTreeMap<Exponent, BigInt>,
}

impl BivarPoly {
    pub fn zero() -> Self {
        BivarPoly::default()
    }

    pub fn one() -> Self {
        BivarPoly::monomial(0, 0, 1)
    }

    pub fn x() -> Self {
        BivarPoly::monomial(1, 0, 1)
    }

    pub fn y() -> Self {
        BivarPoly::monomial(0, 1, 1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        BivarPoly::monomial(0, 0, c)
    }

    pub fn monomial(a: u32, b: u32, c: impl Into<BigInt>) -> Self {
        let mut p = BivarPoly::zero();
        p.add_term(a, b, c.into());
        p
    }

    /// Sums the given terms; repeated exponents accumulate.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, C)>,
        C: Into<BigInt>,
    {
        let mut p = BivarPoly::zero();
        for (a, b, c) in terms {
            p.add_term(a, b, c.into());
        }
        p
    }

    pub fn add_term(&mut self, a: u32, b: u32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((a, b)) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing `(a, b)` order.
    pub fn terms(&self) -> impl Iterator<Item = (Exponent, &BigInt)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn coeff(&self, a: u32, b: u32) -> BigInt {
        self.terms.get(&(a, b)).cloned().unwrap_or_default()
    }

    /// True iff every coefficient is positive (the zero polynomial qualifies).
    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    /// First exponent (in `(a, b)` order) carrying a negative coefficient.
    pub fn first_negative(&self) -> Option<(Exponent, BigInt)> {
        self.terms
            .iter()
            .find(|(_, c)| c.is_negative())
            .map(|(&e, c)| (e, c.clone()))
    }

    pub fn degree_x(&self) -> u32 {
        self.terms.keys().map(|&(a, _)| a).max().unwrap_or(0)
    }

    pub fn degree_y(&self) -> u32 {
        self.terms.keys().map(|&(_, b)| b).max().unwrap_or(0)
    }

    /// Coefficients of `p(x, 0)` as a dense list indexed by the power of x.
    pub fn y_zero_slice(&self) -> Vec<BigInt> {
        let mut out = Vec::new();
        for (&(a, b), c) in &self.terms {
            if b == 0 {
                if out.len() <= a as usize {
                    out.resize(a as usize + 1, BigInt::zero());
                }
                out[a as usize] = c.clone();
            }
        }
        out
    }

    /// Substitutes `x -> x + dx`, `y -> y + dy`.
    pub fn shift_vars(&self, dx: i64, dy: i64) -> BivarPoly {
        let dx = BigInt::from(dx);
        let dy = BigInt::from(dy);
        let mut shifted = BivarPoly::zero();
        for (&(a, b), c) in &self.terms {
            let xs = binomial_expansion(a, &dx);
            let ys = binomial_expansion(b, &dy);
            for (i, cx) in xs.iter().enumerate() {
                if cx.is_zero() {
                    continue;
                }
                let cxc = c * cx;
                for (j, cy) in ys.iter().enumerate() {
                    if !cy.is_zero() {
                        shifted.add_term(i as u32, j as u32, &cxc * cy);
                    }
                }
            }
        }
        shifted
    }

    pub fn eval_rational(&self, x0: &BigRational, y0: &BigRational) -> BigRational {
        let xp = powers(x0, self.degree_x());
        let yp = powers(y0, self.degree_y());
        let mut acc = BigRational::zero();
        for (&(a, b), c) in &self.terms {
            acc += BigRational::from_integer(c.clone()) * &xp[a as usize] * &yp[b as usize];
        }
        acc
    }

    pub fn eval_integer(&self, x0: &BigInt, y0: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for (&(a, b), c) in &self.terms {
            acc += c
                * num_traits::pow(x0.clone(), a as usize)
                * num_traits::pow(y0.clone(), b as usize);
        }
        acc
    }

    /// Parses expressions like `4xy^5 + x^3y^2 - 8y^3 - 4`, also accepting
    /// `*` between factors.
    pub fn parse(text: &str) -> Result<BivarPoly> {
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        for w in chars.windows(3) {
            if w[0].1.is_ascii_digit() && w[1].1.is_whitespace() {
                let next = chars[chars.iter().position(|c| c.0 == w[1].0).unwrap()..]
                    .iter()
                    .find(|c| !c.1.is_whitespace());
                if let Some(&(off, c)) = next {
                    if c.is_ascii_digit() {
                        return Err(Error::parse(off, "expected an operator between numbers"));
                    }
                }
            }
        }
        let s: Vec<(usize, char)> = text
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace() && *c != '*')
            .collect();
        let mut p = BivarPoly::zero();
        let mut i = 0;
        let read_int = |i: &mut usize| -> Option<BigInt> {
            let start = *i;
            while *i < s.len() && s[*i].1.is_ascii_digit() {
                *i += 1;
            }
            (start < *i).then(|| {
                s[start..*i]
                    .iter()
                    .map(|c| c.1)
                    .collect::<String>()
                    .parse()
                    .unwrap()
            })
        };
        if s.is_empty() {
            return Err(Error::parse(0, "empty polynomial"));
        }
        while i < s.len() {
            let offset = s[i].0;
            let mut sign = BigInt::one();
            if s[i].1 == '+' || s[i].1 == '-' {
                if s[i].1 == '-' {
                    sign = -sign;
                }
                i += 1;
            } else if i > 0 {
                return Err(Error::parse(offset, "expected `+` or `-` between terms"));
            }
            let coef = read_int(&mut i);
            let (mut a, mut b) = (0u32, 0u32);
            let mut saw_var = false;
            while i < s.len() && (s[i].1 == 'x' || s[i].1 == 'y') {
                let var = s[i].1;
                i += 1;
                let mut e = 1u32;
                if i < s.len() && s[i].1 == '^' {
                    i += 1;
                    let at = s.get(i).map_or(text.len(), |c| c.0);
                    e = read_int(&mut i)
                        .and_then(|v| u32::try_from(v).ok())
                        .ok_or_else(|| Error::parse(at, "expected exponent after `^`"))?;
                }
                if var == 'x' {
                    a += e
                } else {
                    b += e
                }
                saw_var = true;
            }
            if coef.is_none() && !saw_var {
                return Err(Error::parse(offset, "empty term"));
            }
            p.add_term(a, b, sign * coef.unwrap_or_else(BigInt::one));
        }
        Ok(p)
    }

    /// Dense `[a, b, "coef"]` triples sorted by exponent.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("polynomial serialization is infallible")
    }
}

fn powers(base: &BigRational, max: u32) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(max as usize + 1);
    out.push(BigRational::one());
    for i in 0..max as usize {
        out.push(&out[i] * base);
    }
    out
}

/// Coefficients of `(t + d)^k` in powers of t.
fn binomial_expansion(k: u32, d: &BigInt) -> Vec<BigInt> {
    let k = k as usize;
    let mut row = vec![BigInt::zero(); k + 1];
    row[0] = BigInt::one();
    for step in 1..=k {
        for i in (0..=step).rev() {
            let lower = if i > 0 {
                row[i - 1].clone()
            } else {
                BigInt::zero()
            };
            row[i] = lower + &row[i] * d;
        }
    }
    row
}

impl fmt::Display for BivarPoly {
    /// Highest total degree first, matching the usual hand-written order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(&(a, b), _)| std::cmp::Reverse((a + b, a)));
        for (idx, (&(a, b), c)) in terms.into_iter().enumerate() {
            let mag = c.abs();
            match (idx, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !mag.is_one() || (a, b) == (0, 0) {
                write!(f, "{mag}")?;
            }
            for (var, e) in [('x', a), ('y', b)] {
                match e {
                    0 => {}
                    1 => write!(f, "{var}")?,
                    _ => write!(f, "{var}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BivarPoly({self})")
    }
}

impl Serialize for BivarPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (&(a, b), c) in &self.terms {
            seq.serialize_element(&(a, b, c.to_string()))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for BivarPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<(u32, u32, String)> = Vec::deserialize(deserializer)?;
        let mut p = BivarPoly::zero();
        for (a, b, c) in raw {
            let c: BigInt = c.parse().map_err(D::Error::custom)?;
            p.add_term(a, b, c);
        }
        Ok(p)
    }
}

impl Add<&BivarPoly> for &BivarPoly {
    type Output = BivarPoly;
    fn add(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = self.clone();
        for (&(a, b), c) in &rhs.terms {
            out.add_term(a, b, c.clone());
        }
        out
    }
}

impl Sub<&BivarPoly> for &BivarPoly {
    type Output = BivarPoly;
    fn sub(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = self.clone();
        for (&(a, b), c) in &rhs.terms {
            out.add_term(a, b, -c);
        }
        out
    }
}

impl Mul<&BivarPoly> for &BivarPoly {
    type Output = BivarPoly;
    fn mul(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = BivarPoly::zero();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &rhs.terms {
                out.add_term(a1 + a2, b1 + b2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &BivarPoly {
    type Output = BivarPoly;
    fn neg(self) -> BivarPoly {
        BivarPoly {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<BivarPoly> for BivarPoly {
            type Output = BivarPoly;
            fn $m(self, rhs: BivarPoly) -> BivarPoly { (&self).$m(&rhs) }
        }
        impl $tr<&BivarPoly> for BivarPoly {
            type Output = BivarPoly;
            fn $m(self, rhs: &BivarPoly) -> BivarPoly { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for BivarPoly {
    type Output = BivarPoly;
    fn neg(self) -> BivarPoly {
        -&self
    }
}

//! Whitney and Tutte orders decided by exact division certificates.
//!
//! `H ⪯_W G` when `W_G - W_H = (1 - xy) Q` with `Q` coefficientwise
//! nonnegative; `H ⪯ G` when `T_G - T_H = (x + y - xy) P` with `P`
//! nonnegative. Division by `x + y - xy` is reduced to division by `1 - xy`
//! through the substitution `(x, y) -> (x + 1, y + 1)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::poly::{BivarPoly, Exponent};
use crate::tutte::{self, TutteMemo};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    Equal,
    Dominates,
    NotDivisible,
    NegativeQuotient,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    Whitney,
    Tutte,
}

impl std::str::FromStr for Order {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "whitney" | "Whitney" => Ok(Order::Whitney),
            "tutte" | "Tutte" => Ok(Order::Tutte),
            _ => Err(Error::invalid(format!(
                "unknown order `{s}` (expected whitney or tutte)"
            ))),
        }
    }
}

/// The diagonal `{(a0 + t, b0 + t)}` (with `min(a0, b0) = 0`) whose
/// coefficient sum is nonzero, so `1 - xy` cannot divide.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotDivisible {
    pub start: Exponent,
    pub sum: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Diagonal(NotDivisible),
    NegativeCoefficient {
        exponent: Exponent,
        coefficient: BigInt,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderResult {
    pub order: Order,
    pub verdict: Verdict,
    /// `Q` (Whitney) or `P` (Tutte); present for Dominates and NegativeQuotient.
    pub quotient: Option<BivarPoly>,
    pub witness: Option<Witness>,
}

impl OrderResult {
    /// `h` is below `g` in the order (Equal or Dominates).
    pub fn holds(&self) -> bool {
        matches!(self.verdict, Verdict::Equal | Verdict::Dominates)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let witness = match &self.witness {
            None => serde_json::Value::Null,
            Some(Witness::Diagonal(d)) => json!({
                "kind": "diagonal",
                "start": [d.start.0, d.start.1],
                "sum": d.sum.to_string(),
            }),
            Some(Witness::NegativeCoefficient {
                exponent,
                coefficient,
            }) => json!({
                "kind": "negative_coefficient",
                "exponent": [exponent.0, exponent.1],
                "coefficient": coefficient.to_string(),
            }),
        };
        json!({
            "order": match self.order { Order::Whitney => "whitney", Order::Tutte => "tutte" },
            "verdict": self.verdict.to_string(),
            "quotient": self.quotient.as_ref().map(BivarPoly::to_json),
            "witness": witness,
        })
    }
}

/// Exact division by `1 - xy`, diagonal by diagonal:
/// `q_{a,b} = d_{a,b} + q_{a-1,b-1}`.
pub fn divide_one_minus_xy(d: &BivarPoly) -> std::result::Result<BivarPoly, NotDivisible> {
    let mut diagonals: BTreeMap<Exponent, BTreeMap<u32, &BigInt>> = BTreeMap::new();
    for ((a, b), c) in d.terms() {
        let t = a.min(b);
        diagonals.entry((a - t, b - t)).or_default().insert(t, c);
    }
    let mut q = BivarPoly::zero();
    for (start, entries) in diagonals {
        let last = *entries
            .keys()
            .next_back()
            .expect("diagonal groups are nonempty");
        let mut running = BigInt::zero();
        for t in 0..=last {
            if let Some(c) = entries.get(&t) {
                running += *c;
            }
            if t < last {
                q.add_term(start.0 + t, start.1 + t, running.clone());
            }
        }
        if !running.is_zero() {
            return Err(NotDivisible {
                start,
                sum: running,
            });
        }
    }
    Ok(q)
}

fn one_minus_xy() -> BivarPoly {
    BivarPoly::from_terms([(0, 0, 1), (1, 1, -1)])
}

fn x_plus_y_minus_xy() -> BivarPoly {
    BivarPoly::from_terms([(1, 0, 1), (0, 1, 1), (1, 1, -1)])
}

fn judge(order: Order, quotient: BivarPoly) -> OrderResult {
    match quotient.first_negative() {
        None => OrderResult {
            order,
            verdict: Verdict::Dominates,
            quotient: Some(quotient),
            witness: None,
        },
        Some((exponent, coefficient)) => OrderResult {
            order,
            verdict: Verdict::NegativeQuotient,
            quotient: Some(quotient),
            witness: Some(Witness::NegativeCoefficient {
                exponent,
                coefficient,
            }),
        },
    }
}

fn not_divisible(order: Order, nd: NotDivisible) -> OrderResult {
    OrderResult {
        order,
        verdict: Verdict::NotDivisible,
        quotient: None,
        witness: Some(Witness::Diagonal(nd)),
    }
}

fn equal(order: Order) -> OrderResult {
    OrderResult {
        order,
        verdict: Verdict::Equal,
        quotient: None,
        witness: None,
    }
}

/// Decides `H ⪯_W G` from the two Whitney polynomials.
pub fn whitney_compare_polys(w_g: &BivarPoly, w_h: &BivarPoly) -> Result<OrderResult> {
    let diff = w_g - w_h;
    if diff.is_zero() {
        return Ok(equal(Order::Whitney));
    }
    match divide_one_minus_xy(&diff) {
        Err(nd) => Ok(not_divisible(Order::Whitney, nd)),
        Ok(q) => {
            if &one_minus_xy() * &q != diff {
                return Err(Error::Consistency(
                    "(1 - xy) Q does not reconstruct W_G - W_H".into(),
                ));
            }
            Ok(judge(Order::Whitney, q))
        }
    }
}

/// Decides `H ⪯ G` from the two Tutte polynomials.
pub fn tutte_compare_polys(t_g: &BivarPoly, t_h: &BivarPoly) -> Result<OrderResult> {
    let diff = t_g - t_h;
    if diff.is_zero() {
        return Ok(equal(Order::Tutte));
    }
    match divide_one_minus_xy(&diff.shift_vars(1, 1)) {
        Err(nd) => Ok(not_divisible(Order::Tutte, nd)),
        Ok(q) => {
            let p = q.shift_vars(-1, -1);
            if &x_plus_y_minus_xy() * &p != diff {
                return Err(Error::Consistency(
                    "(x + y - xy) P does not reconstruct T_G - T_H".into(),
                ));
            }
            Ok(judge(Order::Tutte, p))
        }
    }
}

fn check_same_class(g: &SimpleGraph, h: &SimpleGraph) -> Result<()> {
    if (g.n(), g.m()) != (h.n(), h.m()) {
        return Err(Error::DimensionMismatch(format!(
            "G is in C(n={}, m={}) but H is in C(n={}, m={})",
            g.n(),
            g.m(),
            h.n(),
            h.m()
        )));
    }
    for (name, x) in [("G", g), ("H", h)] {
        let k = x.components().count;
        if k != 1 {
            return Err(Error::invalid(format!(
                "{name} is disconnected ({k} components)"
            )));
        }
    }
    Ok(())
}

/// Verdict on `h ⪯_W g`.
pub fn whitney_compare(g: &SimpleGraph, h: &SimpleGraph) -> Result<OrderResult> {
    check_same_class(g, h)?;
    let memo = TutteMemo::new();
    whitney_compare_polys(
        &tutte::whitney_with(g, &memo),
        &tutte::whitney_with(h, &memo),
    )
}

/// Verdict on `h ⪯ g`.
pub fn tutte_compare(g: &SimpleGraph, h: &SimpleGraph) -> Result<OrderResult> {
    check_same_class(g, h)?;
    let memo = TutteMemo::new();
    let (t_g, t_h) = (
        tutte::tutte_dc(&g.to_multigraph(), &memo),
        tutte::tutte_dc(&h.to_multigraph(), &memo),
    );
    tutte_compare_polys(&t_g, &t_h)
}

pub fn compare(g: &SimpleGraph, h: &SimpleGraph, order: Order) -> Result<OrderResult> {
    match order {
        Order::Whitney => whitney_compare(g, h),
        Order::Tutte => tutte_compare(g, h),
    }
}

/// Result of checking one graph against a whole class.
#[derive(Debug, Clone)]
pub struct Certification {
    pub order: Order,
    /// Class members compared (stops early at the first failure unless
    /// `full` was requested).
    pub compared: usize,
    pub counterexamples: Vec<(SimpleGraph, OrderResult)>,
}

impl Certification {
    pub fn is_maximum(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Checks `H ⪯ g` (or `H ⪯_W g`) for every `H` in `class`.
pub fn certify_maximum<I>(
    g: &SimpleGraph,
    class: I,
    order: Order,
    full: bool,
) -> Result<Certification>
where
    I: IntoIterator<Item = SimpleGraph>,
{
    let memo = TutteMemo::new();
    let poly = |x: &SimpleGraph| match order {
        Order::Whitney => tutte::whitney_with(x, &memo),
        Order::Tutte => tutte::tutte_dc(&x.to_multigraph(), &memo),
    };
    let own = poly(g);
    let mut cert = Certification {
        order,
        compared: 0,
        counterexamples: Vec::new(),
    };
    for h in class {
        check_same_class(g, &h)?;
        let other = poly(&h);
        let result = match order {
            Order::Whitney => whitney_compare_polys(&own, &other)?,
            Order::Tutte => tutte_compare_polys(&own, &other)?,
        };
        cert.compared += 1;
        if !result.holds() {
            cert.counterexamples.push((h, result));
            if !full {
                break;
            }
        }
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures;

    fn p(s: &str) -> BivarPoly {
        BivarPoly::parse(s).unwrap()
    }

    fn paw() -> SimpleGraph {
        SimpleGraph::from_edges(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn division_examples() {
        assert_eq!(divide_one_minus_xy(&p("1 - xy")).unwrap(), p("1"));
        assert_eq!(divide_one_minus_xy(&p("1 - x^2y^2")).unwrap(), p("1 + xy"));
        assert_eq!(
            divide_one_minus_xy(&p("x^3 - x^5y^2")).unwrap(),
            p("x^3 + x^4y")
        );
        let err = divide_one_minus_xy(&p("x - y")).unwrap_err();
        assert_eq!(err.start, (0, 1));
        let err = divide_one_minus_xy(&p("x")).unwrap_err();
        assert_eq!(
            err,
            NotDivisible {
                start: (1, 0),
                sum: BigInt::from(1)
            }
        );
        assert!(divide_one_minus_xy(&BivarPoly::zero()).unwrap().is_zero());
    }

    #[test]
    fn division_round_trips_on_products() {
        let factor = one_minus_xy();
        for q in ["3 + 2x^2y - y^4", "x^7", "5xy + 2x^2y^3 - 11"] {
            let q = p(q);
            assert_eq!(divide_one_minus_xy(&(&factor * &q)).unwrap(), q);
        }
    }

    #[test]
    fn identical_graphs_are_equal() {
        let g = fixtures::cycle(5).unwrap();
        assert_eq!(whitney_compare(&g, &g).unwrap().verdict, Verdict::Equal);
        assert_eq!(tutte_compare(&g, &g).unwrap().verdict, Verdict::Equal);
    }

    #[test]
    fn cycle_over_paw() {
        let c4 = fixtures::cycle(4).unwrap();
        let r = whitney_compare(&c4, &paw()).unwrap();
        assert_eq!(r.verdict, Verdict::Dominates);
        let q = r.quotient.unwrap();
        assert!(q.is_nonnegative());
        let diff = tutte::whitney(&c4) - tutte::whitney(&paw());
        assert_eq!(&one_minus_xy() * &q, diff);
        let back = whitney_compare(&paw(), &c4).unwrap();
        assert!(!back.holds());
        // T_C4 - T_paw = x + y - xy, so P = 1.
        let t = tutte_compare(&c4, &paw()).unwrap();
        assert_eq!(t.verdict, Verdict::Dominates);
    }

    #[test]
    fn mismatched_classes_are_rejected() {
        let c4 = fixtures::cycle(4).unwrap();
        let c5 = fixtures::cycle(5).unwrap();
        assert!(matches!(
            whitney_compare(&c4, &c5),
            Err(Error::DimensionMismatch(_))
        ));
        let split = SimpleGraph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (3, 4)]).unwrap();
        let path = fixtures::path(5).unwrap();
        assert!(matches!(
            tutte_compare(&path, &split),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn singleton_class_is_maximum() {
        let g = fixtures::complete(4).unwrap();
        let cert = certify_maximum(&g, [g.clone()], Order::Whitney, false).unwrap();
        assert!(cert.is_maximum());
        assert_eq!(cert.compared, 1);
    }

    #[test]
    fn paw_is_not_maximum() {
        let class = [fixtures::cycle(4).unwrap(), paw()];
        let cert = certify_maximum(&paw(), class.clone(), Order::Whitney, true).unwrap();
        assert!(!cert.is_maximum());
        assert_eq!(cert.counterexamples.len(), 1);
        assert!(
            certify_maximum(&class[0], class.clone(), Order::Whitney, true)
                .unwrap()
                .is_maximum()
        );
        assert!(
            certify_maximum(&class[0], class.clone(), Order::Tutte, true)
                .unwrap()
                .is_maximum()
        );
    }

    #[test]
    fn order_names() {
        assert_eq!("tutte".parse::<Order>().unwrap(), Order::Tutte);
        assert!("chromatic".parse::<Order>().is_err());
    }
}

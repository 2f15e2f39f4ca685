//! Whole-class classification: strong, 0-element, Whitney-maximum,
//! Tutte-maximum and t-optimal members of `C(n, m)`.

use std::cmp::Ordering;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::counts::{self, MuVector, NTable};
use crate::enumerate::{enumerate_class, ClassSpec};
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::order::{self, OrderResult};
use crate::poly::BivarPoly;
use crate::tutte::{self, TutteMemo};

#[derive(Debug, Clone)]
pub struct ScanConfig {
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
    /// Only the first `limit` members (in canonical order) are analysed. Flags
    /// are then relative to that subset and the report is marked partial.
    pub limit: Option<usize>,
    /// Skip division certificates for members that fail entrywise table
    /// domination. Faster, but makes the strong/Whitney-maximum comparison
    /// one-sided, so it is off by default.
    pub prefilter: bool,
    /// Collect every counterexample for non-maximum members instead of the
    /// first one.
    pub full: bool,
    pub memo_capacity: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            workers: None,
            limit: None,
            prefilter: false,
            full: false,
            memo_capacity: 1 << 22,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Flags {
    pub strong: bool,
    pub zero_element: bool,
    pub whitney_max: bool,
    pub tutte_max: bool,
    pub t_optimal: bool,
    /// Entry `k-1`: the `N^(k)` row dominates every member entrywise, a
    /// sufficient condition for being a k-uniformly most reliable graph.
    pub k_umrg_by_domination: Vec<bool>,
}

/// Per-member record.
#[derive(Debug, Clone)]
pub struct Member {
    pub graph: SimpleGraph,
    pub graph6: String,
    pub tutte: BivarPoly,
    pub whitney: BivarPoly,
    pub table: NTable,
    pub mu: MuVector,
    /// `t_1 .. t_n`.
    pub forests: Vec<BigUint>,
    /// `λ^(1) .. λ^(n)`; `None` when no deletion set exceeds `k` components.
    pub lambda: Vec<Option<usize>>,
    pub flags: Flags,
    /// First members (in canonical order) breaking the Whitney / Tutte order.
    pub whitney_counterexamples: Vec<(String, OrderResult)>,
    pub tutte_counterexamples: Vec<(String, OrderResult)>,
}

impl Member {
    fn to_json(&self) -> serde_json::Value {
        let counter = |list: &[(String, OrderResult)]| -> serde_json::Value {
            list.iter()
                .map(|(g6, r)| json!({"graph6": g6, "verdict": r.verdict.to_string()}))
                .collect()
        };
        json!({
            "graph6": self.graph6,
            "ntable_digest": self.table.digest(),
            "flags": self.flags,
            "t": self.forests.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            "lambda": self.lambda,
            "whitney_counterexamples": counter(&self.whitney_counterexamples),
            "tutte_counterexamples": counter(&self.tutte_counterexamples),
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub members: usize,
    pub strong: usize,
    pub zero_element: usize,
    pub whitney_max: usize,
    pub tutte_max: usize,
    pub t_optimal: usize,
    pub k_umrg_by_domination: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct ClassReport {
    pub spec: ClassSpec,
    pub members: Vec<Member>,
    pub summary: Summary,
    /// Strong set (table domination) equals Whitney-maximum set (division
    /// certificates).
    pub theorem2_check: bool,
    pub partial: bool,
}

impl ClassReport {
    pub fn whitney_max(&self) -> impl Iterator<Item = &Member> {
        self.members.iter().filter(|m| m.flags.whitney_max)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "spec": self.spec,
            "partial": self.partial,
            "members": self.members.iter().map(Member::to_json).collect::<Vec<_>>(),
            "summary": self.summary,
            "theorem2_check": self.theorem2_check,
        })
    }

    /// One row per member: graph6, flags, t_1, λ^(1).
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("graph6,strong,zero_element,whitney_max,tutte_max,t_optimal,t1,lambda1\n");
        for m in &self.members {
            let f = &m.flags;
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                m.graph6,
                f.strong,
                f.zero_element,
                f.whitney_max,
                f.tutte_max,
                f.t_optimal,
                m.forests.first().map(|t| t.to_string()).unwrap_or_default(),
                m.lambda
                    .first()
                    .copied()
                    .flatten()
                    .map(|l| l.to_string())
                    .unwrap_or_default(),
            ));
        }
        out
    }
}

/// Enumerates and classifies `C(n, m)`.
pub fn scan(spec: ClassSpec, config: &ScanConfig) -> Result<ClassReport> {
    let mut graphs = enumerate_class(spec)?;
    let partial = config.limit.is_some_and(|l| l < graphs.len());
    if let Some(limit) = config.limit {
        graphs.truncate(limit);
    }
    crate::with_workers(config.workers, || classify(spec, graphs, config, partial))?
}

/// Classifies an explicit list of class members (already deduplicated).
pub fn classify(
    spec: ClassSpec,
    graphs: Vec<SimpleGraph>,
    config: &ScanConfig,
    partial: bool,
) -> Result<ClassReport> {
    let memo = TutteMemo::with_capacity(config.memo_capacity);
    let mut members: Vec<Member> = graphs
        .into_par_iter()
        .map(|g| analyse(spec, g, &memo))
        .collect::<Result<_>>()?;
    members.sort_by(|a, b| a.graph6.cmp(&b.graph6));
    if members.windows(2).any(|w| w[0].graph6 == w[1].graph6) {
        return Err(Error::invalid(
            "class members must be pairwise non-isomorphic",
        ));
    }

    let n = spec.n;
    let cumulative: Vec<Vec<Vec<BigUint>>> = members.iter().map(|m| m.table.cumulative()).collect();
    let mut maxima = cumulative.first().cloned().unwrap_or_default();
    for table in &cumulative[1.min(cumulative.len())..] {
        for (mrow, row) in maxima.iter_mut().zip(table) {
            for (mx, v) in mrow.iter_mut().zip(row) {
                if v > mx {
                    *mx = v.clone();
                }
            }
        }
    }
    let min_mu = members.iter().map(|m| &m.mu).min().cloned();
    let max_t1 = members.iter().map(|m| m.forests[0].clone()).max();

    for (member, table) in members.iter_mut().zip(&cumulative) {
        let attains = |k: usize| table.iter().zip(&maxima).all(|(r, mr)| r[k] == mr[k]);
        let f = &mut member.flags;
        f.k_umrg_by_domination = (0..n).map(attains).collect();
        f.strong = f.k_umrg_by_domination.iter().all(|&b| b);
        f.zero_element = Some(&member.mu) == min_mu.as_ref();
        f.t_optimal = Some(&member.forests[0]) == max_t1.as_ref();
    }

    let snapshot: Vec<(String, BivarPoly, BivarPoly)> = members
        .iter()
        .map(|m| (m.graph6.clone(), m.whitney.clone(), m.tutte.clone()))
        .collect();
    let certs: Vec<_> = members
        .par_iter()
        .map(|m| -> Result<_> {
            if config.prefilter && !m.flags.strong {
                return Ok(None);
            }
            let mut w_fail = Vec::new();
            let mut t_fail = Vec::new();
            for (g6, w, t) in &snapshot {
                if w_fail.is_empty() || config.full {
                    let r = order::whitney_compare_polys(&m.whitney, w)?;
                    if !r.holds() {
                        w_fail.push((g6.clone(), r));
                    }
                }
                if t_fail.is_empty() || config.full {
                    let r = order::tutte_compare_polys(&m.tutte, t)?;
                    if !r.holds() {
                        t_fail.push((g6.clone(), r));
                    }
                }
                if !config.full && !w_fail.is_empty() && !t_fail.is_empty() {
                    break;
                }
            }
            Ok(Some((w_fail, t_fail)))
        })
        .collect::<Result<_>>()?;
    for (member, cert) in members.iter_mut().zip(certs) {
        if let Some((w_fail, t_fail)) = cert {
            member.flags.whitney_max = w_fail.is_empty();
            member.flags.tutte_max = t_fail.is_empty();
            member.whitney_counterexamples = w_fail;
            member.tutte_counterexamples = t_fail;
        }
    }

    let count = |pred: &dyn Fn(&Flags) -> bool| members.iter().filter(|m| pred(&m.flags)).count();
    let summary = Summary {
        members: members.len(),
        strong: count(&|f| f.strong),
        zero_element: count(&|f| f.zero_element),
        whitney_max: count(&|f| f.whitney_max),
        tutte_max: count(&|f| f.tutte_max),
        t_optimal: count(&|f| f.t_optimal),
        k_umrg_by_domination: (0..n)
            .map(|k| count(&|f| f.k_umrg_by_domination[k]))
            .collect(),
    };
    let theorem2_check = members
        .iter()
        .all(|m| m.flags.strong == m.flags.whitney_max);
    Ok(ClassReport {
        spec,
        members,
        summary,
        theorem2_check,
        partial,
    })
}

fn analyse(spec: ClassSpec, graph: SimpleGraph, memo: &TutteMemo) -> Result<Member> {
    if (graph.n(), graph.m()) != (spec.n, spec.m) || !graph.is_connected() {
        return Err(Error::DimensionMismatch(format!(
            "{} is not a member of C(n={}, m={})",
            graph.to_graph6(),
            spec.n,
            spec.m
        )));
    }
    let tutte = tutte::tutte_dc(&graph.to_multigraph(), memo);
    let whitney = tutte.shift_vars(1, 1);
    let table = counts::ntable_from_whitney(&whitney, spec.n, spec.m)?;
    let forests = (1..=spec.n)
        .map(|k| counts::t_k(&table, k))
        .collect::<Result<_>>()?;
    let lambda = (1..=spec.n)
        .map(|k| counts::lambda_k(&table, k))
        .collect::<Result<_>>()?;
    Ok(Member {
        graph6: graph.canonical().to_graph6(),
        graph,
        mu: counts::mu_vector(&table),
        tutte,
        whitney,
        table,
        forests,
        lambda,
        flags: Flags::default(),
        whitney_counterexamples: Vec::new(),
        tutte_counterexamples: Vec::new(),
    })
}

/// Outcome of the consequences checked for Whitney-maximum members.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct InvariantMaxima {
    /// No Whitney-maximum member exists, so nothing was asserted.
    pub vacuous: bool,
    pub failures: Vec<String>,
}

impl InvariantMaxima {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `None` (no deletion set) ranks above every finite value.
fn cmp_lambda(a: &Option<usize>, b: &Option<usize>) -> Ordering {
    match (a, b) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Greater,
        (Some(_), None) => Ordering::Less,
        (Some(x), Some(y)) => x.cmp(y),
    }
}

/// Every Whitney-maximum member attains the class maxima of `λ^(k)` and
/// `t_k` for all `k`, is a 0-element, dominates every `N^(k)` row, and any
/// member sharing its `N^(1)` row is a 0-element.
pub fn verify_invariant_maxima(report: &ClassReport) -> InvariantMaxima {
    let maxima: Vec<&Member> = report.whitney_max().collect();
    if maxima.is_empty() {
        return InvariantMaxima {
            vacuous: true,
            failures: Vec::new(),
        };
    }
    let mut failures = Vec::new();
    let n = report.spec.n;
    for g in &maxima {
        for k in 0..n {
            let best_t = report.members.iter().map(|m| &m.forests[k]).max().unwrap();
            if &g.forests[k] != best_t {
                failures.push(format!(
                    "{}: t_{} = {} below class maximum {best_t}",
                    g.graph6,
                    k + 1,
                    g.forests[k]
                ));
            }
            let best_l = report
                .members
                .iter()
                .map(|m| &m.lambda[k])
                .max_by(|a, b| cmp_lambda(a, b))
                .unwrap();
            if cmp_lambda(&g.lambda[k], best_l) != Ordering::Equal {
                failures.push(format!(
                    "{}: lambda^({}) = {:?} below class maximum {best_l:?}",
                    g.graph6,
                    k + 1,
                    g.lambda[k]
                ));
            }
            if !g.flags.k_umrg_by_domination[k] {
                failures.push(format!("{}: N^({}) row is not dominant", g.graph6, k + 1));
            }
        }
        if !g.flags.zero_element {
            failures.push(format!("{}: not a 0-element", g.graph6));
        }
        let row =
            |m: &Member| -> Vec<BigUint> { m.table.rows().iter().map(|r| r[0].clone()).collect() };
        let g_row = row(g);
        for h in &report.members {
            if row(h) == g_row && !h.flags.zero_element {
                failures.push(format!(
                    "{}: shares N^(1) with {} but is not a 0-element",
                    h.graph6, g.graph6
                ));
            }
        }
    }
    InvariantMaxima {
        vacuous: false,
        failures,
    }
}

//! Diagnostics that cross-examine orders, families and engines: descending
//! chain searches, fixpoint verification of materialized families, engine
//! agreement, and monotonicity of the erasure operator on exponentials.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::coding::{pair, unpair};
use crate::error::{Error, Result};
use crate::family::Family;
use crate::order::{ExpElement, Order};
use crate::step::{BitPrefix, Decision, StepPredicate};
use crate::wetr::{prefix_bound, WetrSession};

// Comparison work cap for the chain search; hitting it leaves the result
// inconclusive rather than wrong.
const COMPARISON_CAP: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    /// Strictly descending witness, longest found; verified pairwise
    /// before being returned.
    pub chain: Vec<u64>,
    pub target: usize,
    pub enumerated: usize,
    /// The enumeration covered every member of the order.
    pub exhaustive: bool,
    /// The search stopped on its comparison budget.
    pub truncated: bool,
    /// No chain of the target length exists, not merely none found: the
    /// order was enumerated exhaustively and searched completely.
    pub conclusive_absence: bool,
}

impl ChainReport {
    pub fn found(&self) -> bool {
        self.chain.len() >= self.target
    }
}

/// Searches for a strictly descending chain of `target` elements among the
/// first `budget` enumerated members. For infinite orders a negative
/// answer is inconclusive; for exhaustively enumerated finite orders it is
/// definitive.
pub fn find_descending_chain(order: &Order, target: usize, budget: usize) -> ChainReport {
    let mut elements = order.enumerate(budget);
    // Longest-path search wants larger elements processed first; a
    // descending sort is a topological order for the strict-descent DAG.
    if order.is_linear() {
        elements.sort_by(|&a, &b| {
            order
                .compare_members(b, a)
                .expect("linear orders compare totally on members")
        });
    } else {
        // Tree paths: ancestors are larger, so shallower paths go first.
        elements.sort_by_key(|&c| (crate::coding::seq_decode(c).len(), c));
    }
    let exhaustive = order
        .size()
        .is_some_and(|s| usize::try_from(s).map_or(false, |s| s <= budget));

    let k = elements.len();
    let mut best_len = vec![1usize; k];
    let mut best_prev = vec![usize::MAX; k];
    let mut comparisons: u64 = 0;
    let mut truncated = false;
    let mut best_end = if k == 0 { None } else { Some(0) };

    'outer: for i in 0..k {
        for j in 0..i {
            comparisons += 1;
            if comparisons > COMPARISON_CAP {
                truncated = true;
                break 'outer;
            }
            // elements[j] processed earlier, so a strict descent step goes
            // j -> i.
            if order.lt(elements[i], elements[j]) && best_len[j] + 1 > best_len[i] {
                best_len[i] = best_len[j] + 1;
                best_prev[i] = j;
            }
        }
        if best_len[i] >= best_len[best_end.unwrap_or(i)] {
            best_end = Some(i);
        }
        if best_len[i] >= target {
            break;
        }
    }

    let mut chain = Vec::new();
    if let Some(end) = best_end {
        let mut at = end;
        loop {
            chain.push(elements[at]);
            if best_prev[at] == usize::MAX {
                break;
            }
            at = best_prev[at];
        }
        chain.reverse();
    }
    for w in chain.windows(2) {
        assert!(order.lt(w[1], w[0]), "chain witness failed verification");
    }

    let conclusive_absence = exhaustive && !truncated && chain.len() < target;
    ChainReport {
        chain,
        target,
        enumerated: k,
        exhaustive,
        truncated,
        conclusive_absence,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixpointViolation {
    pub stage: u64,
    pub value: u64,
    /// What the step predicate decided from the family's own bits; None
    /// when it failed to decide at its promised bound.
    pub expected: Option<bool>,
    /// What the family records.
    pub actual: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixpointReport {
    pub checked: u64,
    pub violations: Vec<FixpointViolation>,
}

impl FixpointReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verifies that a family is a fixpoint of its predicate: every pair in
/// the window is in the family exactly when the predicate confirms it on
/// the prefix the family itself induces. Bits inside the window come from
/// the family; bits the predicate consults beyond it (values past n_max)
/// are recomputed with a memoizing evaluation session.
pub fn check_fixpoint(
    family: &Family,
    pred: &dyn StepPredicate,
    order: &Order,
    fuel: u64,
) -> Result<FixpointReport> {
    for &x in &family.domain {
        if !order.contains(x) {
            return Err(Error::NotAMember { code: x });
        }
    }
    let window: BTreeSet<u64> = family.domain.iter().copied().collect();
    let mut session = WetrSession::new(pred, order, fuel)?;
    let mut report = FixpointReport {
        checked: 0,
        violations: Vec::new(),
    };

    for &x in &family.domain {
        for n in 0..family.n_max {
            let bound = match pred.decided_length_hint(n, x) {
                Some(l) => l,
                None => prefix_bound(pred, n, x, fuel)?,
            };
            let deps: Vec<(u64, u64)> = match pred.relevant_bits(n, x) {
                Some(list) => list,
                None => (0..bound).map(unpair).collect(),
            };
            let mut ones = BTreeSet::new();
            for (m, y) in deps {
                let code = pair(m, y);
                if code >= bound || !order.contains(y) || !order.lt(y, x) {
                    continue;
                }
                let bit = if m < family.n_max && window.contains(&y) {
                    family.contains(y, m)
                } else {
                    session.eval(m, y)?
                };
                if bit {
                    ones.insert(code);
                }
            }
            let s = BitPrefix::sparse(bound, ones);
            let expected = match pred.decide(n, x, &s) {
                Decision::Confirm => Some(true),
                Decision::Refute => Some(false),
                Decision::Unknown => None,
            };
            let actual = family.contains(x, n);
            report.checked += 1;
            if expected != Some(actual) {
                report.violations.push(FixpointViolation {
                    stage: x,
                    value: n,
                    expected,
                    actual,
                });
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AgreementReport {
    pub wetr: Family,
    pub setr: Family,
    pub agree: bool,
}

/// Materializes the same window with both engines and compares the member
/// sets.
pub fn engines_agree(
    pred: &dyn StepPredicate,
    order: &Order,
    n_max: u64,
    x_budget: usize,
    fuel: u64,
) -> Result<AgreementReport> {
    let wetr = WetrSession::new(pred, order, fuel)?.materialize_family(n_max, x_budget)?;
    let setr =
        crate::setr::SetrSession::new(pred, order, fuel)?.materialize_family(n_max, x_budget)?;
    let agree = wetr.members == setr.members;
    Ok(AgreementReport { wetr, setr, agree })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErasureViolation {
    pub smaller: u64,
    pub larger: u64,
    pub stage: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErasureReport {
    pub pairs_checked: u64,
    pub violations: Vec<ErasureViolation>,
}

impl ErasureReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustively checks that erasing entries below a stage preserves order:
/// for members f < g of the exponential and every stage x of the exponent,
/// the erased f sits at or below the erased g. Enumeration is capped at
/// `cap` elements of the exponential and of its exponent.
pub fn check_erasure_monotone(order: &Order, cap: usize) -> Result<ErasureReport> {
    let (base, exponent) = order.exp_parts().ok_or(Error::OrderRejected {
        engine: "erasure check",
        requirement: "an exponential order",
    })?;
    let elements = order.enumerate(cap);
    let stages = exponent.enumerate(cap);
    let mut report = ErasureReport {
        pairs_checked: 0,
        violations: Vec::new(),
    };
    for &f in &elements {
        for &g in &elements {
            if order.compare_members(f, g) != Some(std::cmp::Ordering::Less) {
                continue;
            }
            let fe = ExpElement::decode(f);
            let ge = ExpElement::decode(g);
            for &x in &stages {
                report.pairs_checked += 1;
                let fx = fe.erase_below(x, exponent);
                let gx = ge.erase_below(x, exponent);
                if fx.compare_in(&gx, base, exponent) == Some(std::cmp::Ordering::Greater) {
                    report.violations.push(ErasureViolation {
                        smaller: f,
                        larger: g,
                        stage: x,
                    });
                }
            }
        }
    }
    Ok(report)
}

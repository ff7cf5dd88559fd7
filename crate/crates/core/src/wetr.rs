//! The bounded memoizing evaluator.
//!
//! Evaluation of (n, x) first finds the prefix length at which the
//! predicate is guaranteed decided, then assembles exactly that much of
//! the lower family (recursing stage by stage, memoized) and reads the
//! decision off the assembled prefix. Orders must carry a well-founded
//! claim; tree orders are accepted alongside linear well-orders.

use std::collections::{BTreeSet, HashMap};

use crate::coding::{pair, unpair};
use crate::error::{Error, Result};
use crate::family::Family;
use crate::order::Order;
use crate::step::{BitPrefix, Decision, StepPredicate};

/// Least L such that every prefix of length L is decided at (n, x), by
/// breadth-first traversal of the tree of undecided prefixes: when a level
/// is empty, its depth is the answer. `fuel` bounds both the depth and the
/// total number of expanded prefixes; predicates whose undecided tree has
/// an infinite branch exhaust it.
///
/// Evaluators prefer [`StepPredicate::decided_length_hint`] and use this
/// search as the fallback; tests hold hints to this search at small
/// depths.
pub fn prefix_bound(pred: &dyn StepPredicate, n: u64, x: u64, fuel: u64) -> Result<u64> {
    let mut frontier = Vec::new();
    if pred.decide(n, x, &BitPrefix::empty()) == Decision::Unknown {
        frontier.push(BitPrefix::empty());
    }
    let mut expanded: u64 = 0;
    let mut level: u64 = 0;
    while !frontier.is_empty() {
        level += 1;
        if level > fuel {
            return Err(Error::FuelExhausted {
                during: "undecided-prefix level search",
            });
        }
        let mut next = Vec::new();
        for s in &frontier {
            expanded += 1;
            if expanded > fuel {
                return Err(Error::FuelExhausted {
                    during: "undecided-prefix level search",
                });
            }
            for bit in [false, true] {
                let child = s.extended(bit);
                if pred.decide(n, x, &child) == Decision::Unknown {
                    next.push(child);
                }
            }
        }
        frontier = next;
    }
    Ok(level)
}

/// A memoizing evaluation session for one predicate over one order.
pub struct WetrSession<'a> {
    pred: &'a dyn StepPredicate,
    order: &'a Order,
    fuel: u64,
    memo: HashMap<(u64, u64), bool>,
}

impl<'a> WetrSession<'a> {
    /// Rejects orders without a well-founded claim; stage recursion is
    /// meaningless over a structure admitting infinite descent.
    pub fn new(pred: &'a dyn StepPredicate, order: &'a Order, fuel: u64) -> Result<Self> {
        if !order.is_well_founded() {
            return Err(Error::OrderRejected {
                engine: "wetr",
                requirement: "an order with a well-founded claim",
            });
        }
        Ok(WetrSession {
            pred,
            order,
            fuel,
            memo: HashMap::new(),
        })
    }

    /// The family bit at (n, x): whether n enters the family at stage x.
    pub fn eval(&mut self, n: u64, x: u64) -> Result<bool> {
        if !self.order.contains(x) {
            return Err(Error::NotAMember { code: x });
        }
        let mut visits: u64 = 0;
        let mut stack: Vec<(u64, u64)> = vec![(n, x)];
        while let Some(&(m, y)) = stack.last() {
            if self.memo.contains_key(&(m, y)) {
                stack.pop();
                continue;
            }
            visits += 1;
            if visits > self.fuel {
                return Err(Error::FuelExhausted {
                    during: "wetr evaluation",
                });
            }
            let bound = self.bound(m, y)?;
            let deps = self.dependencies(m, y, bound);
            let unresolved: Vec<(u64, u64)> =
                deps.iter().copied().filter(|d| !self.memo.contains_key(d)).collect();
            if unresolved.is_empty() {
                let ones: BTreeSet<u64> = deps
                    .iter()
                    .filter(|&&(dm, dy)| self.memo[&(dm, dy)])
                    .map(|&(dm, dy)| pair(dm, dy))
                    .collect();
                let s = BitPrefix::sparse(bound, ones);
                let bit = match self.pred.decide(m, y, &s) {
                    Decision::Confirm => true,
                    Decision::Refute => false,
                    Decision::Unknown => {
                        return Err(Error::InconsistentPredicate {
                            n: m,
                            x: y,
                            len: bound,
                        })
                    }
                };
                self.memo.insert((m, y), bit);
                stack.pop();
            } else {
                // Dependency stages sit strictly below y, so the stack
                // never cycles.
                stack.extend(unresolved);
            }
        }
        Ok(self.memo[&(n, x)])
    }

    fn bound(&self, n: u64, x: u64) -> Result<u64> {
        match self.pred.decided_length_hint(n, x) {
            Some(l) => Ok(l),
            None => prefix_bound(self.pred, n, x, self.fuel),
        }
    }

    /// Family pairs whose bits can appear in the assembled prefix: the
    /// predicate's own list when it has one, otherwise every code below
    /// the bound that pairs into a member stage below x.
    fn dependencies(&self, n: u64, x: u64, bound: u64) -> Vec<(u64, u64)> {
        let qualifies =
            |m: u64, y: u64| self.order.contains(y) && self.order.lt(y, x) && pair(m, y) < bound;
        match self.pred.relevant_bits(n, x) {
            Some(list) => {
                let mut deps: Vec<(u64, u64)> =
                    list.into_iter().filter(|&(m, y)| qualifies(m, y)).collect();
                deps.sort_unstable();
                deps.dedup();
                deps
            }
            None => (0..bound)
                .map(unpair)
                .filter(|&(m, y)| qualifies(m, y))
                .collect(),
        }
    }

    /// Evaluates every pair in the window domain × [0, n_max) and collects
    /// the positives. The domain is the order's enumeration, capped at
    /// `x_budget` stages.
    pub fn materialize_family(&mut self, n_max: u64, x_budget: usize) -> Result<Family> {
        let domain = self.order.enumerate(x_budget);
        let mut family = Family::new(self.order.to_string(), n_max, domain.clone());
        for &x in &domain {
            for n in 0..n_max {
                if self.eval(n, x)? {
                    family.insert(x, n);
                }
            }
        }
        Ok(family)
    }
}

//! Oracles kept independent of the evaluation engines: membership by
//! direct recursion on stages, tree membership bottom-up, and a digit
//! ranking for exponentials over finite orders. Cross-validation tests
//! compare engine output against these.

// Each test binary uses its own subset of the oracles.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use etr_core::coding::{pair, seq_decode, seq_encode, unpair};
use etr_core::{ExpElement, Order};

/// Membership for induction-style predicates by direct recursion: a pair
/// holds when its least witness exists and every qualifying coded pair at
/// or below that witness holds in turn.
pub struct InductionOracle<'a> {
    order: &'a Order,
    witness: Box<dyn Fn(u64, u64, u64) -> bool + 'a>,
    no_witness: Box<dyn Fn(u64, u64) -> bool + 'a>,
    witness_cap: Box<dyn Fn(u64, u64) -> u64 + 'a>,
    memo: HashMap<(u64, u64), bool>,
}

impl<'a> InductionOracle<'a> {
    pub fn sum_witness(order: &'a Order) -> Self {
        InductionOracle {
            order,
            witness: Box::new(|x, n, m| m == pair(x, n)),
            no_witness: Box::new(|_, _| false),
            witness_cap: Box::new(|x, n| pair(x, n) + 1),
            memo: HashMap::new(),
        }
    }

    pub fn hole_at(order: &'a Order, blocked: u64) -> Self {
        InductionOracle {
            order,
            witness: Box::new(|x, n, m| m == pair(x, n)),
            no_witness: Box::new(move |x, _| x == blocked),
            witness_cap: Box::new(|x, n| pair(x, n) + 1),
            memo: HashMap::new(),
        }
    }

    pub fn member(&mut self, x: u64, n: u64) -> bool {
        if let Some(&known) = self.memo.get(&(x, n)) {
            return known;
        }
        let value = self.compute(x, n);
        self.memo.insert((x, n), value);
        value
    }

    fn compute(&mut self, x: u64, n: u64) -> bool {
        if (self.no_witness)(x, n) {
            return false;
        }
        let cap = (self.witness_cap)(x, n);
        let least = match (0..cap).find(|&m| (self.witness)(x, n, m)) {
            Some(m) => m,
            None => return false,
        };
        for c in 0..=least {
            let (m2, y2) = unpair(c);
            if self.order.contains(y2) && self.order.lt(y2, x) && !self.member(y2, m2) {
                return false;
            }
        }
        true
    }

    pub fn family(&mut self, n_max: u64, x_budget: usize) -> BTreeSet<(u64, u64)> {
        let mut members = BTreeSet::new();
        for x in self.order.enumerate(x_budget) {
            for n in 0..n_max {
                if self.member(x, n) {
                    members.insert((x, n));
                }
            }
        }
        members
    }
}

/// Tree membership by direct enumeration: a value holds at a node when
/// the affine map mul*m + add reaches it from a seed at or below the
/// node's code, or when it holds at a child.
pub fn tree_oracle_member(order: &Order, mul: u64, add: u64, x: u64, n: u64) -> bool {
    let direct = (0..=x).any(|m| {
        mul.checked_mul(m).and_then(|v| v.checked_add(add)) == Some(n)
    });
    if direct {
        return true;
    }
    let path = seq_decode(x);
    (0..2u64).any(|bit| {
        let mut child = path.clone();
        child.push(bit);
        let code = seq_encode(&child);
        order.contains(code) && tree_oracle_member(order, mul, add, code, n)
    })
}

pub fn tree_oracle_family(order: &Order, mul: u64, add: u64, n_max: u64) -> BTreeSet<(u64, u64)> {
    let mut members = BTreeSet::new();
    for x in order.enumerate(usize::MAX) {
        for n in 0..n_max {
            if tree_oracle_member(order, mul, add, x, n) {
                members.insert((x, n));
            }
        }
    }
    members
}

/// Positional value of an exponential element over fin(base_size): the
/// sum of coefficient times base_size to the exponent. Comparing these
/// numbers is comparing the elements.
pub fn exp_digit_value(code: u64, base_size: u64) -> u64 {
    ExpElement::decode(code)
        .entries
        .iter()
        .map(|&(b, a)| a * base_size.pow(b as u32))
        .sum()
}

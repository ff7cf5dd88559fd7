//! Recursion over binary tree orders: a number n is in the family at node
//! x when an affine witness m ≤ code(x) maps to n, or some child of x
//! already carries n. Exercises evaluation on well-founded orders that are
//! not linear.

use crate::coding::{pair, seq_decode, seq_encode};
use crate::error::{Error, Result};
use crate::order::Order;

use super::{BitPrefix, Decision, StepPredicate};

/// Confirm at (n, x) iff f(m) = n for some m ≤ code(x), or the prefix
/// shows a 1 at pair(n, c) for a child c of x inside the tree. Refute iff
/// there is no such witness and the prefix covers every in-tree child bit
/// with 0s. Nodes outside the tree contribute nothing.
pub struct TreeRecursionPredicate {
    order: Order,
    mul: u64,
    add: u64,
}

impl TreeRecursionPredicate {
    /// f(m) = mul·m + add over the given tree order.
    pub fn affine(order: Order, mul: u64, add: u64) -> Result<Self> {
        if order.kind() != "tree" {
            return Err(Error::OrderRejected {
                engine: "tree-recursion predicate",
                requirement: "a binary tree order",
            });
        }
        Ok(TreeRecursionPredicate { order, mul, add })
    }

    pub fn order(&self) -> &Order {
        &self.order
    }

    fn has_witness(&self, n: u64, x: u64) -> bool {
        // Inverts f directly instead of scanning 0..=x.
        if self.mul == 0 {
            return n == self.add;
        }
        n >= self.add && (n - self.add) % self.mul == 0 && (n - self.add) / self.mul <= x
    }

    /// Codes of the children of x that belong to the tree.
    fn children(&self, x: u64) -> Vec<u64> {
        let path = seq_decode(x);
        [false, true]
            .iter()
            .map(|&b| {
                let mut p = path.clone();
                p.push(b as u64);
                seq_encode(&p)
            })
            .filter(|&c| self.order.contains(c))
            .collect()
    }
}

impl StepPredicate for TreeRecursionPredicate {
    fn name(&self) -> String {
        let f = match (self.mul, self.add) {
            (0, a) => format!("{a}"),
            (1, 0) => "m".into(),
            (1, a) => format!("m+{a}"),
            (m, 0) => format!("{m}m"),
            (m, a) => format!("{m}m+{a}"),
        };
        format!("tree-recursion({f})")
    }

    fn decide(&self, n: u64, x: u64, s: &BitPrefix) -> Decision {
        if self.has_witness(n, x) {
            return Decision::Confirm;
        }
        let mut all_covered = true;
        for child in self.children(x) {
            let idx = pair(n, child);
            if idx >= s.len() {
                all_covered = false;
            } else if s.bit(idx) {
                return Decision::Confirm;
            }
        }
        if all_covered {
            Decision::Refute
        } else {
            Decision::Unknown
        }
    }

    fn decided_length_hint(&self, n: u64, x: u64) -> Option<u64> {
        if self.has_witness(n, x) {
            return Some(0);
        }
        // Refutation at a leaf needs no bits; an inner node is settled
        // exactly when both in-tree child bits are visible.
        Some(
            self.children(x)
                .iter()
                .map(|&c| pair(n, c) + 1)
                .max()
                .unwrap_or(0),
        )
    }

    fn relevant_bits(&self, n: u64, x: u64) -> Option<Vec<(u64, u64)>> {
        if self.has_witness(n, x) {
            return Some(Vec::new());
        }
        Some(self.children(x).into_iter().map(|c| (n, c)).collect())
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use crate::step::check_monotone;

    use super::*;

    fn identity_over(depth: u64) -> TreeRecursionPredicate {
        TreeRecursionPredicate::affine(Order::tree(depth).unwrap(), 1, 0).unwrap()
    }

    #[test]
    fn rejects_non_tree_orders() {
        let err = TreeRecursionPredicate::affine(Order::parse("fin(3)").unwrap(), 1, 0);
        assert!(matches!(err, Err(Error::OrderRejected { .. })));
    }

    #[test]
    fn witness_inversion_matches_scan() {
        for (mul, add) in [(1, 0), (2, 0), (1, 3), (0, 7), (3, 2)] {
            let p = TreeRecursionPredicate::affine(Order::tree(2).unwrap(), mul, add).unwrap();
            for n in 0..30 {
                for x in 0..15 {
                    let scanned = (0..=x).any(|m| mul.saturating_mul(m).saturating_add(add) == n);
                    assert_eq!(p.has_witness(n, x), scanned, "mul={mul} add={add} n={n} x={x}");
                }
            }
        }
    }

    #[test]
    fn confirm_propagates_from_a_child_bit() {
        let p = identity_over(2);
        // Root children are ⟨0⟩ = 1 and ⟨1⟩ = 3; n = 5 has no witness at
        // the root (5 > 0).
        let (c0, c1) = (pair(5, 1), pair(5, 3));
        let one_at_left = BitPrefix::sparse(c1 + 1, BTreeSet::from([c0]));
        assert_eq!(p.decide(5, 0, &one_at_left), Decision::Confirm);
        let all_zero = BitPrefix::sparse(c1 + 1, BTreeSet::new());
        assert_eq!(p.decide(5, 0, &all_zero), Decision::Refute);
        let right_uncovered = BitPrefix::sparse(c0 + 1, BTreeSet::new());
        assert_eq!(p.decide(5, 0, &right_uncovered), Decision::Unknown);
    }

    #[test]
    fn leaves_decide_immediately() {
        let p = identity_over(2);
        // Deepest node ⟨1,1⟩ has code 12 and no in-tree children.
        let leaf = seq_encode(&[1, 1]);
        assert_eq!(leaf, 12);
        assert_eq!(p.decide(5, leaf, &BitPrefix::empty()), Decision::Confirm);
        assert_eq!(p.decide(13, leaf, &BitPrefix::empty()), Decision::Refute);
        assert_eq!(p.decided_length_hint(13, leaf), Some(0));
    }

    #[test]
    fn hint_is_one_past_the_larger_child_code() {
        let p = identity_over(2);
        assert_eq!(p.decided_length_hint(5, 0), Some(pair(5, 3) + 1));
        assert_eq!(p.decided_length_hint(0, 0), Some(0));
    }

    #[test]
    fn tree_recursion_is_monotone_at_depth_eight() {
        let p = identity_over(2);
        for n in [0, 2, 5, 13] {
            for x in [0, 1, 3, 12] {
                let report = check_monotone(&p, n, x, 8);
                assert!(report.ok(), "(n={n}, x={x}): {:?}", report.violation);
            }
        }
    }
}

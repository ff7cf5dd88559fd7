//! Elements of an exponential order.
//!
//! An element is a finite sequence of (exponent, coefficient) entries with
//! strictly descending exponents; it stands for the formal sum of
//! `coefficient * base^exponent` terms. The empty sequence is the zero of
//! the exponential and its least element.

use std::cmp::Ordering;

use serde::Serialize;

use crate::coding::{pair, seq_decode, seq_encode, unpair};
use crate::order::Order;

/// One element of `base ^ exponent`, as its entry list. Entries are
/// `(b, a)` with `b` a code of the exponent order and `a` a code of the
/// base order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ExpElement {
    pub entries: Vec<(u64, u64)>,
}

impl ExpElement {
    pub fn new(entries: Vec<(u64, u64)>) -> Self {
        ExpElement { entries }
    }

    pub fn empty() -> Self {
        ExpElement { entries: Vec::new() }
    }

    /// Decodes any code into an entry list; validity is a separate question.
    pub fn decode(code: u64) -> Self {
        let entries = seq_decode(code).into_iter().map(unpair).collect();
        ExpElement { entries }
    }

    pub fn encode(&self) -> u64 {
        let items: Vec<u64> = self.entries.iter().map(|&(b, a)| pair(b, a)).collect();
        seq_encode(&items)
    }

    /// Membership test for `base ^ exponent`: every exponent a member of the
    /// exponent order, strictly descending; every coefficient a member of
    /// the base and distinct from the base's least element when the base
    /// declares one. Without a declared least the coefficient constraint is
    /// vacuous.
    pub fn is_valid_in(&self, base: &Order, exponent: &Order) -> bool {
        let zero = base.least();
        for (i, &(b, a)) in self.entries.iter().enumerate() {
            if !exponent.contains(b) || !base.contains(a) {
                return false;
            }
            if zero == Some(a) {
                return false;
            }
            if i > 0 {
                let prev = self.entries[i - 1].0;
                if exponent.compare_members(b, prev) != Some(Ordering::Less) {
                    return false;
                }
            }
        }
        true
    }

    /// Lexicographic comparison: a strict extension is greater; otherwise
    /// the least differing index decides, exponents first, then
    /// coefficients. Total whenever base and exponent are linear.
    pub fn compare_in(&self, other: &Self, base: &Order, exponent: &Order) -> Option<Ordering> {
        let common = self.entries.len().min(other.entries.len());
        for i in 0..common {
            let (b1, a1) = self.entries[i];
            let (b2, a2) = other.entries[i];
            match exponent.compare_members(b1, b2)? {
                Ordering::Equal => match base.compare_members(a1, a2)? {
                    Ordering::Equal => continue,
                    decided => return Some(decided),
                },
                decided => return Some(decided),
            }
        }
        Some(self.entries.len().cmp(&other.entries.len()))
    }

    /// Removes every entry whose exponent lies strictly below `x` in the
    /// exponent order. Descending exponents mean those entries form a
    /// suffix, so the result is again a valid element.
    pub fn erase_below(&self, x: u64, exponent: &Order) -> Self {
        let entries = self
            .entries
            .iter()
            .copied()
            .filter(|&(b, _)| exponent.compare_members(b, x) != Some(Ordering::Less))
            .collect();
        ExpElement { entries }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encode_roundtrip() {
        let el = ExpElement::new(vec![(2, 1), (0, 1)]);
        assert_eq!(ExpElement::decode(el.encode()), el);
        assert_eq!(ExpElement::empty().encode(), 0);
    }

    #[test]
    fn validity_in_fin_orders() {
        let base = Order::fin(2);
        let exponent = Order::fin(3);
        assert!(ExpElement::empty().is_valid_in(&base, &exponent));
        assert!(ExpElement::new(vec![(2, 1), (0, 1)]).is_valid_in(&base, &exponent));
        // ascending exponents
        assert!(!ExpElement::new(vec![(0, 1), (2, 1)]).is_valid_in(&base, &exponent));
        // zero coefficient
        assert!(!ExpElement::new(vec![(1, 0)]).is_valid_in(&base, &exponent));
        // repeated exponent
        assert!(!ExpElement::new(vec![(1, 1), (1, 1)]).is_valid_in(&base, &exponent));
        // exponent outside the order
        assert!(!ExpElement::new(vec![(3, 1)]).is_valid_in(&base, &exponent));
    }

    #[test]
    fn zero_coefficient_vacuous_without_least() {
        // rev(omega) declares no least element, so any coefficient is fine.
        let base = Order::rev(Order::omega());
        let exponent = Order::fin(2);
        assert!(ExpElement::new(vec![(0, 0)]).is_valid_in(&base, &exponent));
    }

    #[test]
    fn extension_is_greater() {
        let base = Order::fin(2);
        let exponent = Order::fin(3);
        let small = ExpElement::empty();
        let big = ExpElement::new(vec![(0, 1)]);
        assert_eq!(small.compare_in(&big, &base, &exponent), Some(Ordering::Less));
        assert_eq!(big.compare_in(&small, &base, &exponent), Some(Ordering::Greater));
        assert_eq!(big.compare_in(&big, &base, &exponent), Some(Ordering::Equal));
    }

    #[test]
    fn erase_below_drops_a_suffix() {
        let exponent = Order::fin(3);
        let el = ExpElement::new(vec![(2, 1), (0, 1)]);
        assert_eq!(el.erase_below(1, &exponent).entries, vec![(2, 1)]);
        assert_eq!(el.erase_below(0, &exponent), el);
        assert!(ExpElement::new(vec![(0, 1)]).erase_below(2, &exponent).entries.is_empty());
    }
}

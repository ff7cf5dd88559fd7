//! The induction step predicate: membership of (n, x) holds when some
//! witness m validates P(x, n, m) and every coded pair (m', y') with
//! y' below x, coded at most m, is already in the family.

use std::sync::Arc;

use crate::coding::unpair;
use crate::order::Order;

use super::{BitPrefix, Decision, StepPredicate};

/// The witness relation P behind an induction predicate.
///
/// Implementations are normalized to at most one witness per (x, n): the
/// effective relation is `holds(x,n,m) ∧ ∀m' < m ¬holds(x,n,m')`, so only
/// the least raw witness counts.
pub trait WitnessPredicate: Send + Sync {
    fn name(&self) -> String;

    /// The raw relation, before least-witness normalization.
    fn holds(&self, x: u64, n: u64, m: u64) -> bool;

    /// The least witness, when the relation can name it in closed form.
    fn witness_hint(&self, _x: u64, _n: u64) -> Option<u64> {
        None
    }

    /// True when the relation knows no witness exists at (x, n) at all.
    /// Lets the predicate refute without waiting for prefix evidence;
    /// defaults to no such knowledge.
    fn no_witness(&self, _x: u64, _n: u64) -> bool {
        false
    }
}

/// Applies the least-witness normalization to a raw relation.
pub fn holds_normalized(p: &dyn WitnessPredicate, x: u64, n: u64, m: u64) -> bool {
    p.holds(x, n, m) && (0..m).all(|m2| !p.holds(x, n, m2))
}

/// P(x, n, m) iff m = pairing(x, n); every pair has exactly one witness.
pub struct SumWitness;

impl WitnessPredicate for SumWitness {
    fn name(&self) -> String {
        "sum-witness".into()
    }

    fn holds(&self, x: u64, n: u64, m: u64) -> bool {
        m == crate::coding::pair(x, n)
    }

    fn witness_hint(&self, x: u64, n: u64) -> Option<u64> {
        Some(crate::coding::pair(x, n))
    }

    fn no_witness(&self, _x: u64, _n: u64) -> bool {
        false
    }
}

/// Like [`SumWitness`] but with no witness at one blocked stage, so
/// membership fails there and at everything depending on it.
pub struct HoleAt {
    blocked: u64,
}

impl HoleAt {
    pub fn new(blocked: u64) -> Self {
        HoleAt { blocked }
    }
}

impl WitnessPredicate for HoleAt {
    fn name(&self) -> String {
        format!("hole-at:{}", self.blocked)
    }

    fn holds(&self, x: u64, n: u64, m: u64) -> bool {
        x != self.blocked && m == crate::coding::pair(x, n)
    }

    fn witness_hint(&self, x: u64, n: u64) -> Option<u64> {
        if x == self.blocked {
            None
        } else {
            Some(crate::coding::pair(x, n))
        }
    }

    fn no_witness(&self, x: u64, _n: u64) -> bool {
        x == self.blocked
    }
}

/// Witness relation from a closure, for tests and embedding. Reports no
/// closed-form knowledge, so decisions rest on prefix evidence alone.
pub struct FnWitness<F> {
    name: String,
    holds: F,
}

impl<F> FnWitness<F>
where
    F: Fn(u64, u64, u64) -> bool + Send + Sync,
{
    pub fn new(name: impl Into<String>, holds: F) -> Self {
        FnWitness {
            name: name.into(),
            holds,
        }
    }
}

impl<F> WitnessPredicate for FnWitness<F>
where
    F: Fn(u64, u64, u64) -> bool + Send + Sync,
{
    fn name(&self) -> String {
        self.name.clone()
    }

    fn holds(&self, x: u64, n: u64, m: u64) -> bool {
        (self.holds)(x, n, m)
    }
}

/// Confirm iff some m below the prefix length is the least witness of
/// P(x, n, m) and the prefix has a 1 at every code pairing(m', y') ≤ m with
/// y' a member below x. Refute iff the prefix has a 0 at such a code c and
/// no witness exists below c, or the relation rules out witnesses at (x, n)
/// outright. Both readings use only information inside the prefix, which
/// makes the decision monotone.
pub struct InductionPredicate {
    witness: Arc<dyn WitnessPredicate>,
    order: Order,
}

impl InductionPredicate {
    pub fn new(witness: Arc<dyn WitnessPredicate>, order: Order) -> Self {
        InductionPredicate { witness, order }
    }

    pub fn order(&self) -> &Order {
        &self.order
    }

    fn qualifies(&self, code: u64, x: u64) -> bool {
        let (_, y) = unpair(code);
        self.order.contains(y) && self.order.lt(y, x)
    }

    /// Least witness visible below `len`: the closed-form one when the
    /// relation names it, otherwise the first raw hit of a linear scan
    /// (which least-witness normalization makes the unique witness).
    fn least_witness(&self, x: u64, n: u64, len: u64) -> Option<u64> {
        if let Some(m) = self.witness.witness_hint(x, n) {
            debug_assert!(self.witness.holds(x, n, m));
            return Some(m);
        }
        (0..len).find(|&m| self.witness.holds(x, n, m))
    }
}

impl StepPredicate for InductionPredicate {
    fn name(&self) -> String {
        format!("induction({})", self.witness.name())
    }

    fn decide(&self, n: u64, x: u64, s: &BitPrefix) -> Decision {
        if self.witness.no_witness(x, n) {
            return Decision::Refute;
        }
        let len = s.len();
        let m0 = self.least_witness(x, n, len);

        // A 0-bit at a qualifying code refutes only when no witness sits
        // below that code; a scan-found m0 is the global least, so the
        // comparison against it settles that for every code below len.
        let refutes = (0..len).any(|c| {
            !s.bit(c) && self.qualifies(c, x) && m0.is_none_or(|m| c <= m)
        });
        if refutes {
            return Decision::Refute;
        }

        if let Some(m) = m0 {
            if m < len && (0..=m).all(|c| !self.qualifies(c, x) || s.bit(c)) {
                return Decision::Confirm;
            }
        }
        Decision::Unknown
    }

    fn decided_length_hint(&self, n: u64, x: u64) -> Option<u64> {
        if self.witness.no_witness(x, n) {
            return Some(0);
        }
        // Once the prefix reaches past the witness, every qualifying code
        // below it is readable and the all-ones check settles either way.
        self.witness.witness_hint(x, n).map(|m| m + 1)
    }

    fn relevant_bits(&self, n: u64, x: u64) -> Option<Vec<(u64, u64)>> {
        if self.witness.no_witness(x, n) {
            return Some(Vec::new());
        }
        let m = self.witness.witness_hint(x, n)?;
        Some(
            (0..=m)
                .filter(|&c| self.qualifies(c, x))
                .map(unpair)
                .collect(),
        )
    }
}

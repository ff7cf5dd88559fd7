//! Step predicates: monotone three-valued decisions on finite 0/1 prefixes.
//!
//! A step predicate answers Confirm, Refute or Unknown given a pair (n, x)
//! and a finite prefix of membership bits for a recursively built family.
//! Implementations must be monotone (a decision never changes once reached,
//! however the prefix is extended) and consistent (no Confirm and Refute on
//! comparable prefixes); [`check_monotone`] verifies both exhaustively up to
//! a depth. Predicates are pure and immutable, safe to share across
//! threads.

mod induction;
mod random;
mod tree_rec;

pub use induction::{holds_normalized, FnWitness, HoleAt, InductionPredicate, SumWitness, WitnessPredicate};
pub use random::RandomMonotone;
pub use tree_rec::TreeRecursionPredicate;

use std::collections::BTreeSet;
use std::sync::Arc;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::order::Order;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Confirm,
    Refute,
    Unknown,
}

impl Decision {
    pub fn is_decided(self) -> bool {
        self != Decision::Unknown
    }
}

/// A finite 0/1 prefix, stored densely or as the set of 1-positions.
///
/// The sparse form exists because evaluators build prefixes whose length is
/// a code bound (easily millions) while only the few positions coding
/// family pairs are ever 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitPrefix {
    len: u64,
    bits: Storage,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Storage {
    Dense(Vec<bool>),
    Sparse(BTreeSet<u64>),
}

impl BitPrefix {
    pub fn empty() -> Self {
        BitPrefix {
            len: 0,
            bits: Storage::Dense(Vec::new()),
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitPrefix {
            len: bits.len() as u64,
            bits: Storage::Dense(bits),
        }
    }

    /// Prefix of `len` zeros except for 1s at `ones`; positions at or past
    /// `len` are rejected.
    pub fn sparse(len: u64, ones: BTreeSet<u64>) -> Self {
        assert!(
            ones.iter().all(|&i| i < len),
            "one-positions must lie inside the prefix"
        );
        BitPrefix {
            len,
            bits: Storage::Sparse(ones),
        }
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bit(&self, i: u64) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        match &self.bits {
            Storage::Dense(v) => v[i as usize],
            Storage::Sparse(ones) => ones.contains(&i),
        }
    }

    /// A copy extended by one bit.
    pub fn extended(&self, bit: bool) -> Self {
        match &self.bits {
            Storage::Dense(v) => {
                let mut v = v.clone();
                v.push(bit);
                BitPrefix::from_bits(v)
            }
            Storage::Sparse(ones) => {
                let mut ones = ones.clone();
                if bit {
                    ones.insert(self.len);
                }
                BitPrefix {
                    len: self.len + 1,
                    bits: Storage::Sparse(ones),
                }
            }
        }
    }

    pub fn to_bits(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.bit(i)).collect()
    }
}

/// The decision interface evaluators consume.
pub trait StepPredicate: Send + Sync {
    fn name(&self) -> String;

    /// The monotone three-valued decision at (n, x) given prefix `s`.
    fn decide(&self, n: u64, x: u64, s: &BitPrefix) -> Decision;

    /// Exact least length L such that every prefix of length L is decided
    /// at (n, x), when the predicate can name it in closed form. Evaluators
    /// use this to skip the breadth-first bound search; property tests hold
    /// hints to the searched value at small depths.
    fn decided_length_hint(&self, _n: u64, _x: u64) -> Option<u64> {
        None
    }

    /// The family pairs (m, y) whose bits the decision at (n, x) may read,
    /// when the predicate can enumerate them. Evaluators then recurse into
    /// exactly these pairs instead of scanning every code below the decided
    /// length, which matters when child codes pair into the millions. Bits
    /// outside the list must never influence the decision; pairs with y not
    /// a member below x are ignored. `None` means scan.
    fn relevant_bits(&self, _n: u64, _x: u64) -> Option<Vec<(u64, u64)>> {
        None
    }
}

/// Confirm for even n, Refute for odd, independent of the prefix.
pub struct Parity;

impl StepPredicate for Parity {
    fn name(&self) -> String {
        "parity".into()
    }

    fn decide(&self, n: u64, _x: u64, _s: &BitPrefix) -> Decision {
        if n % 2 == 0 {
            Decision::Confirm
        } else {
            Decision::Refute
        }
    }
}

/// Undecided below length 3, then decided by the first bit.
pub struct LengthThree;

impl StepPredicate for LengthThree {
    fn name(&self) -> String {
        "length3".into()
    }

    fn decide(&self, _n: u64, _x: u64, s: &BitPrefix) -> Decision {
        if s.len() < 3 {
            Decision::Unknown
        } else if s.bit(0) {
            Decision::Confirm
        } else {
            Decision::Refute
        }
    }
}

/// Unknown on every all-ones prefix, Confirm as soon as any bit is 0. The
/// all-ones path never decides, so the decided-length search cannot
/// terminate; used to exercise fuel handling.
pub struct Diverging;

impl StepPredicate for Diverging {
    fn name(&self) -> String {
        "diverging".into()
    }

    fn decide(&self, _n: u64, _x: u64, s: &BitPrefix) -> Decision {
        if (0..s.len()).any(|i| !s.bit(i)) {
            Decision::Confirm
        } else {
            Decision::Unknown
        }
    }
}

/// Plug-in predicate from a closure, for tests and embedding.
pub struct FnPredicate<F> {
    name: String,
    decide: F,
}

impl<F> FnPredicate<F>
where
    F: Fn(u64, u64, &BitPrefix) -> Decision + Send + Sync,
{
    pub fn new(name: impl Into<String>, decide: F) -> Self {
        FnPredicate {
            name: name.into(),
            decide,
        }
    }
}

impl<F> StepPredicate for FnPredicate<F>
where
    F: Fn(u64, u64, &BitPrefix) -> Decision + Send + Sync,
{
    fn name(&self) -> String {
        self.name.clone()
    }

    fn decide(&self, n: u64, x: u64, s: &BitPrefix) -> Decision {
        (self.decide)(n, x, s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneViolation {
    pub n: u64,
    pub x: u64,
    pub prefix: Vec<bool>,
    pub appended: bool,
    pub parent: Decision,
    pub child: Decision,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneReport {
    pub prefixes_checked: u64,
    pub violation: Option<MonotoneViolation>,
}

impl MonotoneReport {
    pub fn ok(&self) -> bool {
        self.violation.is_none()
    }
}

/// Exhaustively verifies monotonicity and consistency of `p` at (n, x) over
/// every prefix up to `depth`: once a prefix is decided, every one-bit
/// extension must carry the identical decision. Stops at the first
/// violation.
pub fn check_monotone(p: &dyn StepPredicate, n: u64, x: u64, depth: u64) -> MonotoneReport {
    let mut report = MonotoneReport {
        prefixes_checked: 0,
        violation: None,
    };
    let root = BitPrefix::empty();
    let d0 = p.decide(n, x, &root);
    walk(p, n, x, &root, d0, depth, &mut report);
    report
}

fn walk(
    p: &dyn StepPredicate,
    n: u64,
    x: u64,
    s: &BitPrefix,
    decision: Decision,
    depth: u64,
    report: &mut MonotoneReport,
) {
    report.prefixes_checked += 1;
    if report.violation.is_some() || s.len() == depth {
        return;
    }
    for bit in [false, true] {
        let child = s.extended(bit);
        let child_decision = p.decide(n, x, &child);
        if decision.is_decided() && child_decision != decision {
            report.violation = Some(MonotoneViolation {
                n,
                x,
                prefix: s.to_bits(),
                appended: bit,
                parent: decision,
                child: child_decision,
            });
            return;
        }
        walk(p, n, x, &child, child_decision, depth, report);
    }
}

/// Default seed for the randomized predicate family. Runs with the same
/// seed are bit-for-bit reproducible.
pub const DEFAULT_SEED: u64 = 0x5eed;

/// Builds a library predicate from its JSON description, e.g.
/// `{"kind":"induction","params":{"P":"sum-witness"}}`. Induction and
/// tree-recursion predicates bind to `order`.
pub fn predicate_from_json(json: &str, order: &Order) -> Result<Arc<dyn StepPredicate>> {
    let spec: Value =
        serde_json::from_str(json).map_err(|e| Error::ParsePredicate(e.to_string()))?;
    let kind = spec
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::ParsePredicate("missing \"kind\"".into()))?;
    let params = spec.get("params").cloned().unwrap_or(Value::Null);
    let get_u64 = |key: &str| params.get(key).and_then(Value::as_u64);

    match kind {
        "parity" => Ok(Arc::new(Parity)),
        "length3" => Ok(Arc::new(LengthThree)),
        "diverging" => Ok(Arc::new(Diverging)),
        "induction" => {
            let p = params.get("P").and_then(Value::as_str).unwrap_or("sum-witness");
            let witness: Arc<dyn WitnessPredicate> = match p {
                "sum-witness" => Arc::new(SumWitness),
                "hole-at" => {
                    let blocked = get_u64("x").ok_or_else(|| {
                        Error::ParsePredicate("hole-at needs a blocked stage \"x\"".into())
                    })?;
                    Arc::new(HoleAt::new(blocked))
                }
                other => {
                    return Err(Error::ParsePredicate(format!(
                        "unknown witness predicate {other:?}"
                    )))
                }
            };
            Ok(Arc::new(InductionPredicate::new(witness, order.clone())))
        }
        "tree-recursion" => {
            let mul = get_u64("mul").unwrap_or(1);
            let add = get_u64("add").unwrap_or(0);
            Ok(Arc::new(TreeRecursionPredicate::affine(
                order.clone(),
                mul,
                add,
            )?))
        }
        "random" => {
            let seed = get_u64("seed").unwrap_or(DEFAULT_SEED);
            let depth = get_u64("depth").unwrap_or(10);
            Ok(Arc::new(RandomMonotone::new(seed, depth)))
        }
        other => Err(Error::ParsePredicate(format!(
            "unknown predicate kind {other:?}"
        ))),
    }
}

pub(crate) fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

pub(crate) fn mix(parts: &[u64]) -> u64 {
    let mut h = 0x9e3779b97f4a7c15;
    for &p in parts {
        h = splitmix64(h ^ p);
    }
    h
}

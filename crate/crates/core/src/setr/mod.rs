//! The lazy term-rewriting evaluator.
//!
//! Evaluation of (n, x) starts from the term P(n, x, ⟨⟩) and rewrites one
//! innermost step at a time: a term whose argument string is all bits
//! either decides (becoming Zero or One) or grows by one position, where
//! a position coding a member stage below the current one spawns a nested
//! evaluation of that stage and any other position appends the bit 0; a
//! nested term that resolves folds into its parent as a bit at once, so a
//! term carries at most one nested child, always last. No results are
//! memoized: lower stages are re-evaluated on demand, which is what the
//! termination-rank monitor in [`rank`] is about.

pub mod rank;

pub use rank::{
    compare_ranks, monitor_descent, rank_of_term, DescentReport, DescentViolation, Rank,
    RankAtom, RankRelation,
};

use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::coding::unpair;
use crate::error::{Error, Result};
use crate::family::Family;
use crate::order::Order;
use crate::step::{BitPrefix, Decision, StepPredicate};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Zero,
    One,
    Proper(ProperTerm),
}

/// P(m, y, s̃): stage y's evaluation of value m, with the argument string
/// s̃ accumulated so far. Entries are bits except possibly the last, which
/// may be a nested evaluation in progress.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProperTerm {
    pub m: u64,
    pub y: u64,
    pub entries: Vec<Entry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Entry {
    Bit(bool),
    Sub(Box<ProperTerm>),
}

impl ProperTerm {
    pub fn initial(m: u64, y: u64) -> Self {
        ProperTerm {
            m,
            y,
            entries: Vec::new(),
        }
    }

    #[cfg(test)]
    pub(crate) fn with_bits(m: u64, y: u64, bits: &[bool]) -> Self {
        ProperTerm {
            m,
            y,
            entries: bits.iter().map(|&b| Entry::Bit(b)).collect(),
        }
    }

    fn is_all_bits(&self) -> bool {
        !matches!(self.entries.last(), Some(Entry::Sub(_)))
    }

    /// The bit entries before any nested child.
    pub(crate) fn leading_bits(&self) -> Vec<bool> {
        self.entries
            .iter()
            .map_while(|e| match e {
                Entry::Bit(b) => Some(*b),
                Entry::Sub(_) => None,
            })
            .collect()
    }

    /// The argument string as a prefix; only meaningful when all entries
    /// are bits.
    pub(crate) fn bit_prefix(&self) -> BitPrefix {
        debug_assert!(self.is_all_bits());
        BitPrefix::from_bits(self.leading_bits())
    }
}

/// A nested evaluation that resolved during a step: stage y settled value
/// m to `bit`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FoldEvent {
    pub m: u64,
    pub y: u64,
    pub bit: bool,
}

/// One innermost rewriting step. Deterministic and total: the active term
/// is the deepest nested one, and it either decides, grows by a bit, or
/// spawns a nested evaluation; a resolved nested child folds into its
/// parent within the same step, reported through the event.
pub fn step_term(
    pred: &dyn StepPredicate,
    order: &Order,
    t: &ProperTerm,
) -> (Term, Option<FoldEvent>) {
    if let Some(Entry::Sub(inner)) = t.entries.last() {
        let (stepped, fold) = step_term(pred, order, inner);
        let mut entries = t.entries[..t.entries.len() - 1].to_vec();
        return match stepped {
            Term::Zero | Term::One => {
                let bit = stepped == Term::One;
                entries.push(Entry::Bit(bit));
                let event = FoldEvent {
                    m: inner.m,
                    y: inner.y,
                    bit,
                };
                (
                    Term::Proper(ProperTerm { m: t.m, y: t.y, entries }),
                    Some(event),
                )
            }
            Term::Proper(p) => {
                entries.push(Entry::Sub(Box::new(p)));
                (Term::Proper(ProperTerm { m: t.m, y: t.y, entries }), fold)
            }
        };
    }

    match pred.decide(t.m, t.y, &t.bit_prefix()) {
        Decision::Confirm => (Term::One, None),
        Decision::Refute => (Term::Zero, None),
        Decision::Unknown => {
            let position = t.entries.len() as u64;
            let (m2, y2) = unpair(position);
            let mut entries = t.entries.clone();
            if order.contains(y2) && order.lt(y2, t.y) {
                entries.push(Entry::Sub(Box::new(ProperTerm::initial(m2, y2))));
            } else {
                entries.push(Entry::Bit(false));
            }
            (Term::Proper(ProperTerm { m: t.m, y: t.y, entries }), None)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub step: u64,
    pub term: Term,
    pub rank: Rank,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetrOutcome {
    /// Whether the final term was One.
    pub value: bool,
    /// Rewriting steps taken.
    pub steps: u64,
    /// Every nested resolution, in order of occurrence.
    pub folds: Vec<FoldEvent>,
    /// Rank-descent verification, when monitoring was requested.
    pub descent: Option<DescentReport>,
    /// Term and rank snapshots per step, when tracing was requested; the
    /// final Zero/One is included.
    pub trace: Option<Vec<TraceEntry>>,
}

/// An evaluation context for one predicate over one linear well-order.
/// Holds no state between evaluations.
pub struct SetrSession<'a> {
    pred: &'a dyn StepPredicate,
    order: &'a Order,
    fuel: u64,
}

impl<'a> SetrSession<'a> {
    /// Rejects any order not claimed to be a linear well-order: nested
    /// spawning descends through stages and needs linearity plus
    /// well-foundedness to make sense.
    pub fn new(pred: &'a dyn StepPredicate, order: &'a Order, fuel: u64) -> Result<Self> {
        if !order.is_wellorder() {
            return Err(Error::OrderRejected {
                engine: "setr",
                requirement: "a linear order with a well-order claim",
            });
        }
        Ok(SetrSession { pred, order, fuel })
    }

    pub fn eval(&self, n: u64, x: u64) -> Result<SetrOutcome> {
        self.eval_full(n, x, false, false)
    }

    /// Evaluates with optional streaming rank monitoring and optional
    /// full tracing. Tracing stores every term; monitoring alone keeps
    /// only the previous rank.
    pub fn eval_full(
        &self,
        n: u64,
        x: u64,
        monitor: bool,
        trace: bool,
    ) -> Result<SetrOutcome> {
        if !self.order.contains(x) {
            return Err(Error::NotAMember { code: x });
        }
        let mut term = Term::Proper(ProperTerm::initial(n, x));
        let mut steps: u64 = 0;
        let mut folds = Vec::new();
        let mut traced: Option<Vec<TraceEntry>> = trace.then(Vec::new);
        let mut descent = (monitor || trace).then(|| DescentReport {
            compared: 0,
            violations: Vec::new(),
        });
        let mut prev_rank: Option<Rank> = None;

        loop {
            if descent.is_some() {
                let rank = rank_of_term(self.pred, self.order, &term)?;
                if let Some(prev) = &prev_rank {
                    let relation = compare_ranks(&rank, prev, self.order);
                    descent.as_mut().unwrap().observe(steps, relation);
                }
                if let Some(entries) = traced.as_mut() {
                    entries.push(TraceEntry {
                        step: steps,
                        term: term.clone(),
                        rank: rank.clone(),
                    });
                }
                prev_rank = Some(rank);
            }
            let proper = match &term {
                Term::Zero | Term::One => {
                    return Ok(SetrOutcome {
                        value: term == Term::One,
                        steps,
                        folds,
                        descent,
                        trace: traced,
                    })
                }
                Term::Proper(p) => p,
            };
            if steps >= self.fuel {
                return Err(Error::FuelExhausted {
                    during: "setr evaluation",
                });
            }
            let (next, fold) = step_term(self.pred, self.order, proper);
            folds.extend(fold);
            term = next;
            steps += 1;
        }
    }

    /// Evaluates every pair in the window domain × [0, n_max) and collects
    /// the positives, like the memoizing engine's materialization.
    pub fn materialize_family(&self, n_max: u64, x_budget: usize) -> Result<Family> {
        let domain = self.order.enumerate(x_budget);
        let mut family = Family::new(self.order.to_string(), n_max, domain.clone());
        for &x in &domain {
            for n in 0..n_max {
                if self.eval(n, x)?.value {
                    family.insert(x, n);
                }
            }
        }
        Ok(family)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Zero => write!(f, "0"),
            Term::One => write!(f, "1"),
            Term::Proper(p) => write!(f, "{p}"),
        }
    }
}

impl fmt::Display for ProperTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P({}, {}, <", self.m, self.y)?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            match e {
                Entry::Bit(b) => write!(f, "{}", *b as u8)?,
                Entry::Sub(p) => write!(f, "{p}")?,
            }
        }
        write!(f, ">)")
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Term::Zero => serializer.serialize_u8(0),
            Term::One => serializer.serialize_u8(1),
            Term::Proper(p) => p.serialize(serializer),
        }
    }
}

impl Serialize for ProperTerm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(3))?;
        map.serialize_entry("m", &self.m)?;
        map.serialize_entry("y", &self.y)?;
        map.serialize_entry("entries", &self.entries)?;
        map.end()
    }
}

impl Serialize for Entry {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Entry::Bit(b) => serializer.serialize_u8(*b as u8),
            Entry::Sub(p) => p.serialize(serializer),
        }
    }
}

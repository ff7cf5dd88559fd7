//! Termination ranks for evaluation terms.
//!
//! Every term maps to a finite sequence of (stage, atom) entries whose
//! stage codes strictly descend; each rewriting step strictly decreases
//! the rank under [`compare_ranks`], which is what the descent monitor
//! verifies. Atoms live in a partial order: two bottom elements below
//! every node, nodes compared by value, then stage, then bit string under
//! reverse extension (a proper extension sits below its prefix), then
//! phase bit. Node bit strings that diverge without one extending the
//! other are genuinely incomparable; the monitor reports that as a
//! diagnostic value, never an error.

use std::cmp::Ordering;

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::order::Order;
use crate::step::{Decision, StepPredicate};

use super::{Entry, ProperTerm, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankAtom {
    Bot0,
    Bot1,
    Node { m: u64, y: u64, s: Vec<bool>, b: bool },
}

/// Entries are (stage code, atom); stage codes strictly descend along the
/// sequence for ranks of well-formed terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rank {
    pub entries: Vec<(u64, RankAtom)>,
}

impl Rank {
    pub fn empty() -> Self {
        Rank { entries: Vec::new() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RankRelation {
    Less,
    Equal,
    Greater,
    Incomparable,
}

impl RankRelation {
    fn of(o: Ordering) -> Self {
        match o {
            Ordering::Less => RankRelation::Less,
            Ordering::Equal => RankRelation::Equal,
            Ordering::Greater => RankRelation::Greater,
        }
    }
}

/// The rank of a term. Zero and One rank empty; an all-bits term ranks as
/// a single entry, at the order's least stage once decided, at its own
/// stage while open; a nested term contributes its own entry followed by
/// the rank of the inner term.
pub fn rank_of_term(
    pred: &dyn StepPredicate,
    order: &Order,
    term: &Term,
) -> Result<Rank> {
    match term {
        Term::Zero | Term::One => Ok(Rank::empty()),
        Term::Proper(p) => {
            let mut entries = Vec::new();
            rank_proper(pred, order, p, &mut entries)?;
            Ok(Rank { entries })
        }
    }
}

fn rank_proper(
    pred: &dyn StepPredicate,
    order: &Order,
    t: &ProperTerm,
    out: &mut Vec<(u64, RankAtom)>,
) -> Result<()> {
    match t.entries.last() {
        Some(Entry::Sub(inner)) => {
            out.push((
                t.y,
                RankAtom::Node {
                    m: t.m,
                    y: t.y,
                    s: t.leading_bits(),
                    b: false,
                },
            ));
            rank_proper(pred, order, inner, out)
        }
        _ => {
            let s = t.bit_prefix();
            if pred.decide(t.m, t.y, &s) == Decision::Unknown {
                out.push((
                    t.y,
                    RankAtom::Node {
                        m: t.m,
                        y: t.y,
                        s: t.leading_bits(),
                        b: true,
                    },
                ));
            } else {
                // A decided term is one step from vanishing; it ranks just
                // above the empty rank, at the least stage.
                let least = order.least().ok_or(Error::NoLeastElement {
                    context: "rank computation",
                })?;
                out.push((least, RankAtom::Bot1));
            }
            Ok(())
        }
    }
}

fn compare_atoms(a: &RankAtom, b: &RankAtom, order: &Order) -> RankRelation {
    use RankAtom::*;
    match (a, b) {
        (Bot0, Bot0) | (Bot1, Bot1) => RankRelation::Equal,
        (Bot0, _) => RankRelation::Less,
        (_, Bot0) => RankRelation::Greater,
        (Bot1, _) => RankRelation::Less,
        (_, Bot1) => RankRelation::Greater,
        (
            Node { m: m1, y: y1, s: s1, b: b1 },
            Node { m: m2, y: y2, s: s2, b: b2 },
        ) => {
            if m1 != m2 {
                return RankRelation::of(m1.cmp(m2));
            }
            match order.compare_members(*y1, *y2) {
                Some(Ordering::Equal) => {}
                Some(o) => return RankRelation::of(o),
                None => return RankRelation::Incomparable,
            }
            match compare_bit_strings(s1, s2) {
                RankRelation::Equal => RankRelation::of(b1.cmp(b2)),
                other => other,
            }
        }
    }
}

// Reverse extension: a proper extension sits strictly below its prefix;
// strings neither of which extends the other do not compare.
fn compare_bit_strings(a: &[bool], b: &[bool]) -> RankRelation {
    let common = a.len().min(b.len());
    if a[..common] != b[..common] {
        return RankRelation::Incomparable;
    }
    RankRelation::of(b.len().cmp(&a.len()))
}

/// Lexicographic comparison of entry sequences: the first differing entry
/// decides (stage under the order, then atom), and with one sequence a
/// strict prefix of the other, the extension is larger.
pub fn compare_ranks(a: &Rank, b: &Rank, order: &Order) -> RankRelation {
    for ((x1, a1), (x2, a2)) in a.entries.iter().zip(&b.entries) {
        match order.compare_members(*x1, *x2) {
            Some(Ordering::Equal) => {}
            Some(o) => return RankRelation::of(o),
            None => return RankRelation::Incomparable,
        }
        match compare_atoms(a1, a2, order) {
            RankRelation::Equal => {}
            other => return other,
        }
    }
    RankRelation::of(a.entries.len().cmp(&b.entries.len()))
}

/// Recomputes the rank of every term and checks strict descent between
/// consecutive ones. Violations carry the index of the later term.
pub fn monitor_descent(
    pred: &dyn StepPredicate,
    order: &Order,
    terms: &[Term],
) -> Result<DescentReport> {
    let mut report = DescentReport {
        compared: 0,
        violations: Vec::new(),
    };
    let mut prev: Option<Rank> = None;
    for (i, term) in terms.iter().enumerate() {
        let rank = rank_of_term(pred, order, term)?;
        if let Some(p) = prev {
            report.observe(i as u64, compare_ranks(&rank, &p, order));
        }
        prev = Some(rank);
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DescentViolation {
    /// Trace index of the later of the two compared terms.
    pub step: u64,
    /// How its rank related to the preceding one; anything but Less.
    pub relation: RankRelation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DescentReport {
    pub compared: u64,
    pub violations: Vec<DescentViolation>,
}

impl DescentReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub(super) fn observe(&mut self, step: u64, relation: RankRelation) {
        self.compared += 1;
        if relation != RankRelation::Less {
            self.violations.push(DescentViolation { step, relation });
        }
    }
}

impl Serialize for RankAtom {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            RankAtom::Bot0 => serializer.serialize_str("bot0"),
            RankAtom::Bot1 => serializer.serialize_str("bot1"),
            RankAtom::Node { m, y, s, b } => {
                let mut map = serializer.serialize_map(Some(4))?;
                map.serialize_entry("m", m)?;
                map.serialize_entry("y", y)?;
                let bits: Vec<u8> = s.iter().map(|&x| x as u8).collect();
                map.serialize_entry("s", &bits)?;
                map.serialize_entry("b", &(*b as u8))?;
                map.end()
            }
        }
    }
}

impl Serialize for Rank {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.entries.len()))?;
        for (x, atom) in &self.entries {
            seq.serialize_element(&(x, atom))?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use crate::step::{LengthThree, Parity};

    use super::*;

    fn node(m: u64, y: u64, s: &[u8], b: bool) -> RankAtom {
        RankAtom::Node {
            m,
            y,
            s: s.iter().map(|&x| x != 0).collect(),
            b,
        }
    }

    fn rank(entries: Vec<(u64, RankAtom)>) -> Rank {
        Rank { entries }
    }

    #[test]
    fn empty_rank_is_least() {
        let order = Order::parse("fin(2)").unwrap();
        let r = rank(vec![(0, RankAtom::Bot1)]);
        assert_eq!(compare_ranks(&Rank::empty(), &r, &order), RankRelation::Less);
        assert_eq!(compare_ranks(&r, &Rank::empty(), &order), RankRelation::Greater);
        assert_eq!(compare_ranks(&r, &r.clone(), &order), RankRelation::Equal);
    }

    #[test]
    fn bottoms_sit_below_every_node() {
        let order = Order::parse("fin(2)").unwrap();
        let n = node(0, 0, &[], true);
        assert_eq!(compare_atoms(&RankAtom::Bot0, &RankAtom::Bot1, &order), RankRelation::Less);
        assert_eq!(compare_atoms(&RankAtom::Bot1, &n, &order), RankRelation::Less);
        assert_eq!(compare_atoms(&RankAtom::Bot0, &n, &order), RankRelation::Less);
    }

    #[test]
    fn prefix_ranks_above_extension() {
        let order = Order::parse("fin(2)").unwrap();
        let shorter = node(3, 1, &[], false);
        let longer = node(3, 1, &[0], false);
        assert_eq!(compare_atoms(&shorter, &longer, &order), RankRelation::Greater);
        assert_eq!(compare_atoms(&longer, &shorter, &order), RankRelation::Less);
    }

    #[test]
    fn diverging_bit_strings_are_incomparable() {
        let order = Order::parse("fin(2)").unwrap();
        let left = node(3, 1, &[0], false);
        let right = node(3, 1, &[1], false);
        assert_eq!(compare_atoms(&left, &right, &order), RankRelation::Incomparable);
        // A differing value decides before the strings are consulted.
        let other_m = node(4, 1, &[1], false);
        assert_eq!(compare_atoms(&left, &other_m, &order), RankRelation::Less);
    }

    #[test]
    fn phase_bit_breaks_ties_last() {
        let order = Order::parse("fin(2)").unwrap();
        let open = node(3, 1, &[0, 1], true);
        let nested = node(3, 1, &[0, 1], false);
        assert_eq!(compare_atoms(&nested, &open, &order), RankRelation::Less);
    }

    #[test]
    fn undecided_all_bits_term_rank() {
        let order = Order::parse("fin(2)").unwrap();
        // Below length 3 the predicate is open, so the term is open.
        let t = Term::Proper(ProperTerm::with_bits(0, 1, &[false, true]));
        let r = rank_of_term(&LengthThree, &order, &t).unwrap();
        assert_eq!(r, rank(vec![(1, node(0, 1, &[0, 1], true))]));
    }

    #[test]
    fn decided_all_bits_term_ranks_at_least_stage() {
        let order = Order::parse("fin(2)").unwrap();
        let t = Term::Proper(ProperTerm::with_bits(4, 1, &[]));
        let r = rank_of_term(&Parity, &order, &t).unwrap();
        assert_eq!(r, rank(vec![(0, RankAtom::Bot1)]));
    }

    #[test]
    fn nested_term_concatenates_inner_rank() {
        let order = Order::parse("fin(2)").unwrap();
        let mut parent = ProperTerm::initial(0, 1);
        parent.entries.push(Entry::Sub(Box::new(ProperTerm::initial(2, 0))));
        let r = rank_of_term(&LengthThree, &order, &Term::Proper(parent)).unwrap();
        assert_eq!(
            r,
            rank(vec![
                (1, node(0, 1, &[], false)),
                (0, node(2, 0, &[], true)),
            ])
        );
        // Stage codes descend strictly along the entries.
        assert!(order.lt(r.entries[1].0, r.entries[0].0));
    }

    #[test]
    fn rank_serializes_compactly() {
        let r = rank(vec![(1, node(0, 1, &[0, 1], true)), (0, RankAtom::Bot1)]);
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(json, r#"[[1,{"m":0,"y":1,"s":[0,1],"b":1}],[0,"bot1"]]"#);
    }
}

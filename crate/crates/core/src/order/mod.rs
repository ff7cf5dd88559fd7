//! Computable orders over coded elements.
//!
//! An [`Order`] is an immutable description of a linear or tree-shaped order
//! whose elements are `u64` codes. Orders are built from the expression
//! grammar `fin(k) | omega | sum(E,E) | lex(E,E) | exp(E,E) | rev(E) |
//! tree(d)` or from the equivalent constructors, and support membership,
//! comparison, enumeration and restriction. All operations are pure; an
//! `Order` is a cheap clone (shared structure) and safe to use from several
//! threads at once.

mod exp;
mod parse;

pub use exp::ExpElement;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::coding::{pair, seq_decode, unpair};
use crate::error::{Error, Result};

/// Exhaustive enumeration is used up to this many elements; bigger or
/// infinite orders fall back to kind-specific streaming.
const EXHAUSTIVE_CAP: u64 = 1 << 17;

/// Budget for membership scans over sparse code spaces (restrictions of
/// infinite orders, exponential entry searches).
const SCAN_BUDGET: u64 = 1 << 20;

/// Path codes grow doubly exponentially with depth; at 5 the deepest node
/// codes near 1e7 and pairing a number against it still fits in a u64.
/// One level more overflows those pair codes.
const MAX_TREE_DEPTH: u64 = 5;

#[derive(Debug, PartialEq, Eq)]
enum Node {
    Fin(u64),
    Omega,
    Sum(Order, Order),
    Lex(Order, Order),
    Exp { base: Order, exponent: Order },
    Rev(Order),
    Tree { depth: u64 },
    Restriction { inner: Order, bound: u64 },
}

/// An immutable computable order on `u64` codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Order(Arc<Node>);

impl Order {
    /// Parses an order expression, rejecting exponentials whose exponent is
    /// not claimed to be a well-order.
    pub fn parse(src: &str) -> Result<Order> {
        parse::parse(src, false)
    }

    /// Parses an order expression, additionally admitting exponentials over
    /// exponents that are not claimed well-orders. Probes need such orders
    /// as comparison structures; the recursion engines never accept them.
    pub fn parse_allowing_unsafe_exponent(src: &str) -> Result<Order> {
        parse::parse(src, true)
    }

    pub fn fin(k: u64) -> Order {
        Order(Arc::new(Node::Fin(k)))
    }

    pub fn omega() -> Order {
        Order(Arc::new(Node::Omega))
    }

    /// Disjoint union, every element of `a` below every element of `b`.
    /// Codes are `pair(0, _)` for the left side and `pair(1, _)` for the
    /// right.
    pub fn sum(a: Order, b: Order) -> Order {
        Order(Arc::new(Node::Sum(a, b)))
    }

    /// Pairs `pair(a, b)` compared by the first component first.
    pub fn lex(a: Order, b: Order) -> Order {
        Order(Arc::new(Node::Lex(a, b)))
    }

    /// Exponential `base ^ exponent`. The base may be any linear order (its
    /// well-order claim is irrelevant), but the exponent must carry a
    /// well-order claim; see [`Order::exp_unchecked_exponent`] for the
    /// escape hatch.
    pub fn exp(base: Order, exponent: Order) -> Result<Order> {
        if !exponent.is_wellorder() {
            return Err(Error::UnsafeExponent);
        }
        Order::exp_unchecked_exponent(base, exponent)
    }

    /// Exponential that skips the exponent's well-order check. Both sides
    /// must still be linear; entrywise comparison is meaningless otherwise.
    pub fn exp_unchecked_exponent(base: Order, exponent: Order) -> Result<Order> {
        if !base.is_linear() || !exponent.is_linear() {
            return Err(Error::ParseOrder(
                "exponential needs linear base and exponent".into(),
            ));
        }
        Ok(Order(Arc::new(Node::Exp { base, exponent })))
    }

    pub fn rev(inner: Order) -> Order {
        Order(Arc::new(Node::Rev(inner)))
    }

    /// Binary tree of 0/1 paths of length at most `depth`, ordered by
    /// reverse extension: a node is above its proper extensions, siblings
    /// are incomparable. Not a linear order.
    pub fn tree(depth: u64) -> Result<Order> {
        if depth > MAX_TREE_DEPTH {
            return Err(Error::ParseOrder(format!(
                "tree depth {depth} exceeds the supported maximum {MAX_TREE_DEPTH}"
            )));
        }
        Ok(Order(Arc::new(Node::Tree { depth })))
    }

    /// The suborder of elements strictly below `x`, which must be a member.
    pub fn restrict_below(&self, x: u64) -> Result<Order> {
        if !self.contains(x) {
            return Err(Error::NotAMember { code: x });
        }
        Ok(Order(Arc::new(Node::Restriction {
            inner: self.clone(),
            bound: x,
        })))
    }

    /// Kind label used in reports.
    pub fn kind(&self) -> &'static str {
        match &*self.0 {
            Node::Fin(_) => "finite",
            Node::Omega => "omega",
            Node::Sum(..) => "sum",
            Node::Lex(..) => "lex-product",
            Node::Exp { .. } => "exponential",
            Node::Rev(_) => "reversed",
            Node::Tree { .. } => "tree",
            Node::Restriction { .. } => "restriction",
        }
    }

    /// Structural well-order claim: reversed and tree nodes poison it,
    /// everything else passes its children through. Conservative: a
    /// reversed finite order is claimed false even though it is in fact
    /// well-founded.
    pub fn is_wellorder(&self) -> bool {
        match &*self.0 {
            Node::Fin(_) | Node::Omega => true,
            Node::Sum(a, b) | Node::Lex(a, b) => a.is_wellorder() && b.is_wellorder(),
            Node::Exp { base, exponent } => base.is_wellorder() && exponent.is_wellorder(),
            Node::Rev(_) | Node::Tree { .. } => false,
            Node::Restriction { inner, .. } => inner.is_wellorder(),
        }
    }

    /// Structural well-foundedness claim; differs from the well-order claim
    /// only on trees, which are well-founded but not linear.
    pub fn is_well_founded(&self) -> bool {
        match &*self.0 {
            Node::Fin(_) | Node::Omega | Node::Tree { .. } => true,
            Node::Sum(a, b) | Node::Lex(a, b) => a.is_well_founded() && b.is_well_founded(),
            Node::Exp { base, exponent } => base.is_well_founded() && exponent.is_well_founded(),
            Node::Rev(_) => false,
            Node::Restriction { inner, .. } => inner.is_well_founded(),
        }
    }

    /// True unless a tree node occurs somewhere in the structure.
    pub fn is_linear(&self) -> bool {
        match &*self.0 {
            Node::Fin(_) | Node::Omega => true,
            Node::Sum(a, b) | Node::Lex(a, b) => a.is_linear() && b.is_linear(),
            Node::Exp { base, exponent } => base.is_linear() && exponent.is_linear(),
            Node::Rev(inner) => inner.is_linear(),
            Node::Tree { .. } => false,
            Node::Restriction { inner, .. } => inner.is_linear(),
        }
    }

    /// Base and exponent of an exponential order, if this is one.
    pub fn exp_parts(&self) -> Option<(&Order, &Order)> {
        match &*self.0 {
            Node::Exp { base, exponent } => Some((base, exponent)),
            _ => None,
        }
    }

    pub fn contains(&self, code: u64) -> bool {
        match &*self.0 {
            Node::Fin(k) => code < *k,
            Node::Omega => true,
            Node::Sum(a, b) => {
                let (tag, inner) = unpair(code);
                match tag {
                    0 => a.contains(inner),
                    1 => b.contains(inner),
                    _ => false,
                }
            }
            Node::Lex(a, b) => {
                let (x, y) = unpair(code);
                a.contains(x) && b.contains(y)
            }
            Node::Exp { base, exponent } => {
                ExpElement::decode(code).is_valid_in(base, exponent)
            }
            Node::Rev(inner) => inner.contains(code),
            Node::Tree { depth } => {
                let path = seq_decode(code);
                path.len() as u64 <= *depth && path.iter().all(|&b| b <= 1)
            }
            Node::Restriction { inner, bound } => {
                inner.contains(code) && inner.compare_members(code, *bound) == Some(Ordering::Less)
            }
        }
    }

    /// Comparison for codes already known to be members. `None` means the
    /// pair is incomparable, which only tree-shaped orders produce. For a
    /// checked entry point see [`Order::compare`].
    pub fn compare_members(&self, a: u64, b: u64) -> Option<Ordering> {
        match &*self.0 {
            Node::Fin(_) | Node::Omega => Some(a.cmp(&b)),
            Node::Sum(left, right) => {
                let (ta, ia) = unpair(a);
                let (tb, ib) = unpair(b);
                match ta.cmp(&tb) {
                    Ordering::Equal if ta == 0 => left.compare_members(ia, ib),
                    Ordering::Equal => right.compare_members(ia, ib),
                    decided => Some(decided),
                }
            }
            Node::Lex(first, second) => {
                let (xa, ya) = unpair(a);
                let (xb, yb) = unpair(b);
                match first.compare_members(xa, xb)? {
                    Ordering::Equal => second.compare_members(ya, yb),
                    decided => Some(decided),
                }
            }
            Node::Exp { base, exponent } => {
                ExpElement::decode(a).compare_in(&ExpElement::decode(b), base, exponent)
            }
            Node::Rev(inner) => inner.compare_members(a, b).map(Ordering::reverse),
            Node::Tree { .. } => {
                if a == b {
                    return Some(Ordering::Equal);
                }
                let pa = seq_decode(a);
                let pb = seq_decode(b);
                // reverse extension: the proper extension is the smaller node
                if pb.starts_with(&pa) {
                    Some(Ordering::Greater)
                } else if pa.starts_with(&pb) {
                    Some(Ordering::Less)
                } else {
                    None
                }
            }
            Node::Restriction { inner, .. } => inner.compare_members(a, b),
        }
    }

    /// Membership-checked comparison.
    pub fn compare(&self, a: u64, b: u64) -> Result<Option<Ordering>> {
        for code in [a, b] {
            if !self.contains(code) {
                return Err(Error::NotAMember { code });
            }
        }
        Ok(self.compare_members(a, b))
    }

    /// Strictly-below test for member codes.
    pub fn lt(&self, a: u64, b: u64) -> bool {
        self.compare_members(a, b) == Some(Ordering::Less)
    }

    /// The declared least element. `None` either means the order has no
    /// least element (reversed and tree orders never declare one) or that
    /// none is structurally evident; a returned element is always correct.
    pub fn least(&self) -> Option<u64> {
        match &*self.0 {
            Node::Fin(0) => None,
            Node::Fin(_) | Node::Omega => Some(0),
            Node::Sum(a, b) => match a.least() {
                Some(l) => Some(pair(0, l)),
                None if a.known_empty() => b.least().map(|l| pair(1, l)),
                None => None,
            },
            Node::Lex(a, b) => match (a.least(), b.least()) {
                (Some(x), Some(y)) => Some(pair(x, y)),
                _ => None,
            },
            Node::Exp { .. } => Some(0),
            Node::Rev(_) | Node::Tree { .. } => None,
            Node::Restriction { inner, bound } => inner
                .least()
                .filter(|&l| inner.compare_members(l, *bound) == Some(Ordering::Less)),
        }
    }

    fn known_empty(&self) -> bool {
        match &*self.0 {
            Node::Fin(k) => *k == 0,
            Node::Sum(a, b) => a.known_empty() && b.known_empty(),
            Node::Lex(a, b) => a.known_empty() || b.known_empty(),
            Node::Rev(inner) => inner.known_empty(),
            _ => false,
        }
    }

    /// Number of members when structurally finite and within `u64` range.
    pub fn size(&self) -> Option<u64> {
        match &*self.0 {
            Node::Fin(k) => Some(*k),
            Node::Omega => None,
            Node::Sum(a, b) => a.size()?.checked_add(b.size()?),
            Node::Lex(a, b) => a.size()?.checked_mul(b.size()?),
            Node::Exp { base, exponent } => {
                let k = base.size()?;
                let n = exponent.size()?;
                // Coefficient choices per entry; the least element, when
                // declared, is excluded.
                let c = k - u64::from(base.least().is_some());
                if c == 0 {
                    return Some(1);
                }
                u32::try_from(n).ok().and_then(|n| (c + 1).checked_pow(n))
            }
            Node::Rev(inner) => inner.size(),
            Node::Tree { depth } => Some((1u64 << (depth + 1)) - 1),
            Node::Restriction { .. } => None,
        }
    }

    /// Deterministic list of at most `limit` member codes.
    ///
    /// Orders that are structurally finite and small are enumerated
    /// exhaustively and sorted ascending by the order (trees by a fixed
    /// linear extension, deepest nodes first). Infinite orders stream in
    /// ascending code order per kind, which coincides with the order for
    /// `omega` but is merely deterministic for reversed ones; exponentials
    /// stream by entry-sequence length, then lexicographically on entry
    /// codes, re-sorted by the order before return. Streams over sparse
    /// code spaces give up after a fixed scan budget.
    pub fn enumerate(&self, limit: usize) -> Vec<u64> {
        if limit == 0 {
            return Vec::new();
        }
        if let Some(size) = self.size() {
            if size <= EXHAUSTIVE_CAP {
                let mut all = self.generate_all();
                debug_assert_eq!(all.len() as u64, size);
                self.sort_members(&mut all);
                all.truncate(limit);
                return all;
            }
        }
        self.stream(limit)
    }

    fn generate_all(&self) -> Vec<u64> {
        match &*self.0 {
            Node::Fin(k) => (0..*k).collect(),
            Node::Sum(a, b) => {
                let mut out: Vec<u64> = a.generate_all().iter().map(|&c| pair(0, c)).collect();
                out.extend(b.generate_all().iter().map(|&c| pair(1, c)));
                out
            }
            Node::Lex(a, b) => {
                let rights = b.generate_all();
                a.generate_all()
                    .iter()
                    .flat_map(|&x| rights.iter().map(move |&y| pair(x, y)))
                    .collect()
            }
            Node::Exp { base, exponent } => {
                let mut exps = exponent.generate_all();
                exponent.sort_members(&mut exps);
                exps.reverse();
                let zero = base.least();
                let coeffs: Vec<u64> = base
                    .generate_all()
                    .into_iter()
                    .filter(|&a| Some(a) != zero)
                    .collect();
                let mut out = Vec::new();
                let mut entries = Vec::new();
                gen_exp(&exps, &coeffs, 0, &mut entries, &mut out);
                out
            }
            Node::Rev(inner) => inner.generate_all(),
            Node::Tree { depth } => {
                let mut out = vec![0u64]; // the root path
                let mut level = vec![Vec::new()];
                for _ in 0..*depth {
                    let mut next = Vec::new();
                    for path in &level {
                        for bit in 0..2u64 {
                            let mut child: Vec<u64> = path.clone();
                            child.push(bit);
                            out.push(crate::coding::seq_encode(&child));
                            next.push(child);
                        }
                    }
                    level = next;
                }
                out
            }
            // size() is None for these, so the exhaustive path never asks.
            Node::Omega | Node::Restriction { .. } => unreachable!("not exhaustively enumerable"),
        }
    }

    fn sort_members(&self, codes: &mut [u64]) {
        if self.is_linear() {
            codes.sort_by(|&a, &b| {
                self.compare_members(a, b)
                    .expect("linear orders compare totally on members")
            });
        } else {
            // Fixed linear extension for tree-shaped orders: deeper paths
            // are smaller, ties broken by code.
            codes.sort_by_key(|&c| (std::cmp::Reverse(seq_decode(c).len()), c));
        }
    }

    fn stream(&self, limit: usize) -> Vec<u64> {
        match &*self.0 {
            Node::Fin(k) => (0..*k).take(limit).collect(),
            Node::Omega => (0..limit as u64).collect(),
            Node::Sum(a, b) => {
                let mut out: Vec<u64> = a
                    .enumerate(limit)
                    .into_iter()
                    .map(|c| pair(0, c))
                    .collect();
                if let Some(size) = a.size() {
                    if (size as usize) < limit {
                        out.extend(
                            b.enumerate(limit - size as usize)
                                .into_iter()
                                .map(|c| pair(1, c)),
                        );
                    }
                }
                out
            }
            Node::Lex(a, b) => {
                let mut out = Vec::new();
                for x in a.enumerate(limit) {
                    for y in b.enumerate(limit) {
                        out.push(pair(x, y));
                        if out.len() == limit {
                            return out;
                        }
                    }
                }
                out
            }
            Node::Exp { base, exponent } => stream_exp(base, exponent, limit),
            Node::Rev(inner) => inner.enumerate(limit),
            Node::Tree { .. } => unreachable!("trees are exhaustively enumerable"),
            Node::Restriction { inner, bound } => {
                let candidates = inner.enumerate((limit.saturating_mul(4)).max(1024));
                candidates
                    .into_iter()
                    .filter(|&c| inner.compare_members(c, *bound) == Some(Ordering::Less))
                    .take(limit)
                    .collect()
            }
        }
    }
}

/// All exponential elements over descending exponents `exps[idx..]`.
fn gen_exp(exps: &[u64], coeffs: &[u64], idx: usize, entries: &mut Vec<(u64, u64)>, out: &mut Vec<u64>) {
    out.push(ExpElement::new(entries.clone()).encode());
    for i in idx..exps.len() {
        for &a in coeffs {
            entries.push((exps[i], a));
            gen_exp(exps, coeffs, i + 1, entries, out);
            entries.pop();
        }
    }
}

/// Streaming enumeration for infinite exponentials: collect candidate
/// entries ascending by entry code, emit elements by length then
/// lexicographically on entry codes, then sort what was found by the order.
fn stream_exp(base: &Order, exponent: &Order, limit: usize) -> Vec<u64> {
    let zero = base.least();
    let mut candidates: Vec<(u64, u64)> = Vec::new();
    for code in 0..SCAN_BUDGET {
        if candidates.len() > limit.saturating_mul(2) + 16 {
            break;
        }
        let (b, a) = unpair(code);
        if exponent.contains(b) && base.contains(a) && Some(a) != zero {
            candidates.push((b, a));
        }
    }

    let mut elements = vec![ExpElement::empty()];
    let mut len = 1;
    while elements.len() < limit {
        let before = elements.len();
        let mut entries = Vec::new();
        gen_exp_level(&candidates, exponent, len, &mut entries, &mut elements, limit);
        if elements.len() == before {
            break; // no element of this length, none of any longer one
        }
        len += 1;
    }

    elements.sort_by(|x, y| {
        x.compare_in(y, base, exponent)
            .expect("exponential orders compare totally on members")
    });
    elements.into_iter().map(|e| e.encode()).collect()
}

fn gen_exp_level(
    candidates: &[(u64, u64)],
    exponent: &Order,
    len: usize,
    entries: &mut Vec<(u64, u64)>,
    out: &mut Vec<ExpElement>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    if entries.len() == len {
        out.push(ExpElement::new(entries.clone()));
        return;
    }
    for &(b, a) in candidates {
        let descending = entries
            .last()
            .is_none_or(|&(prev, _)| exponent.compare_members(b, prev) == Some(Ordering::Less));
        if descending {
            entries.push((b, a));
            gen_exp_level(candidates, exponent, len, entries, out, limit);
            entries.pop();
            if out.len() >= limit {
                return;
            }
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Node::Fin(k) => write!(f, "fin({k})"),
            Node::Omega => write!(f, "omega"),
            Node::Sum(a, b) => write!(f, "sum({a},{b})"),
            Node::Lex(a, b) => write!(f, "lex({a},{b})"),
            Node::Exp { base, exponent } => write!(f, "exp({base},{exponent})"),
            Node::Rev(inner) => write!(f, "rev({inner})"),
            Node::Tree { depth } => write!(f, "tree({depth})"),
            Node::Restriction { inner, bound } => write!(f, "restrict({inner},{bound})"),
        }
    }
}

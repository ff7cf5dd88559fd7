//! Numeric codes for pairs and finite sequences.
//!
//! Every composite element in this crate (sum tags, lex pairs, exponential
//! entries, tree nodes, family pairs) is coded through the same two
//! bijections, so that bit indices, order elements and term positions all
//! live in one address space.

/// Cantor pairing, a bijection from pairs of naturals onto the naturals:
/// `pair(a, b) = (a + b)(a + b + 1)/2 + b`.
///
/// Panics when the result does not fit in a `u64`; codes that large are far
/// beyond anything the evaluators or tests construct.
pub fn pair(a: u64, b: u64) -> u64 {
    let s = a as u128 + b as u128;
    let code = s * (s + 1) / 2 + b as u128;
    u64::try_from(code).expect("pair code exceeds u64")
}

/// Inverse of [`pair`]; total on `u64`.
pub fn unpair(code: u64) -> (u64, u64) {
    // Largest w with w(w+1)/2 <= code, via integer sqrt.
    let c = code as u128;
    let mut w = ((8 * c + 1).isqrt().saturating_sub(1) / 2) as u64;
    // isqrt rounding can land one off on either side.
    while tri(w + 1) <= code {
        w += 1;
    }
    while tri(w) > code {
        w -= 1;
    }
    let b = code - tri(w);
    (w - b, b)
}

fn tri(w: u64) -> u64 {
    ((w as u128 * (w as u128 + 1)) / 2) as u64
}

/// Sequence coding built on [`pair`]: the empty sequence is 0, and
/// `code(s ++ [a]) = pair(code(s), a) + 1`. Bijective between naturals and
/// finite sequences of naturals.
pub fn seq_encode(items: &[u64]) -> u64 {
    let mut code = 0u64;
    for &item in items {
        code = pair(code, item)
            .checked_add(1)
            .expect("sequence code exceeds u64");
    }
    code
}

/// Inverse of [`seq_encode`]; total on `u64`.
pub fn seq_decode(mut code: u64) -> Vec<u64> {
    let mut rev = Vec::new();
    while code > 0 {
        let (rest, last) = unpair(code - 1);
        rev.push(last);
        code = rest;
    }
    rev.reverse();
    rev
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pair_first_values() {
        // The diagonal enumeration: (0,0) (1,0) (0,1) (2,0) (1,1) (0,2) ...
        let expected = [
            ((0, 0), 0),
            ((1, 0), 1),
            ((0, 1), 2),
            ((2, 0), 3),
            ((1, 1), 4),
            ((0, 2), 5),
            ((3, 0), 6),
        ];
        for ((a, b), code) in expected {
            assert_eq!(pair(a, b), code);
            assert_eq!(unpair(code), (a, b));
        }
    }

    #[test]
    fn seq_empty_is_zero() {
        assert_eq!(seq_encode(&[]), 0);
        assert!(seq_decode(0).is_empty());
    }

    #[test]
    fn seq_known_values() {
        assert_eq!(seq_encode(&[0]), 1);
        assert_eq!(seq_encode(&[1]), 3);
        assert_eq!(seq_encode(&[0, 0]), 2);
    }

    #[test]
    fn deepest_supported_tree_path_fits() {
        // Sequence codes grow doubly exponentially with length; five binary
        // entries are the deepest tree path the crate admits.
        let code = seq_encode(&[1, 1, 1, 1, 1]);
        assert_eq!(code, 9_983_748);
        assert_eq!(seq_decode(code), vec![1, 1, 1, 1, 1]);
    }

    proptest! {
        #[test]
        fn pair_roundtrip(a in 0u64..1_000_000, b in 0u64..1_000_000) {
            prop_assert_eq!(unpair(pair(a, b)), (a, b));
        }

        #[test]
        fn unpair_roundtrip(code in 0u64..10_000_000) {
            let (a, b) = unpair(code);
            prop_assert_eq!(pair(a, b), code);
        }

        // Three moderate entries (or five binary ones) are the most that
        // stay inside u64; longer inputs would hit the overflow panic.
        #[test]
        fn seq_roundtrip(items in proptest::collection::vec(0u64..200, 0..4)) {
            prop_assert_eq!(seq_decode(seq_encode(&items)), items);
        }

        #[test]
        fn seq_roundtrip_binary(items in proptest::collection::vec(0u64..2, 0..6)) {
            prop_assert_eq!(seq_decode(seq_encode(&items)), items);
        }

        #[test]
        fn seq_decode_total(code in 0u64..5_000_000) {
            prop_assert_eq!(seq_encode(&seq_decode(code)), code);
        }
    }
}

//! Materialized recursion families: which (stage, value) pairs hold after
//! evaluating a step predicate over an order's stages.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite window of a recursively built family. `members` holds pairs
/// (stage code, value n); the window covers `domain` × [0, n_max). Stored
/// sorted, so equal families serialize identically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Family {
    /// Textual order expression, round-trips through the order parser.
    pub order: String,
    /// Values n range over 0..n_max.
    pub n_max: u64,
    /// Stage codes evaluated, in order position.
    pub domain: Vec<u64>,
    /// Membership pairs [stage, value], sorted.
    pub members: BTreeSet<(u64, u64)>,
}

impl Family {
    pub fn new(order: String, n_max: u64, domain: Vec<u64>) -> Self {
        Family {
            order,
            n_max,
            domain,
            members: BTreeSet::new(),
        }
    }

    pub fn contains(&self, stage: u64, value: u64) -> bool {
        self.members.contains(&(stage, value))
    }

    pub fn insert(&mut self, stage: u64, value: u64) {
        self.members.insert((stage, value));
    }

    pub fn to_json(&self) -> String {
        // Key order and member sorting are fixed, so reruns emit identical
        // bytes.
        serde_json::to_string_pretty(self).expect("family serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Family> {
        serde_json::from_str(s).map_err(|e| Error::ParseOrder(format!("family json: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip_is_stable() {
        let mut f = Family::new("fin(2)".into(), 3, vec![0, 1]);
        f.insert(1, 2);
        f.insert(0, 0);
        let json = f.to_json();
        let back = Family::from_json(&json).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.to_json(), json);
        // Members render sorted regardless of insertion order.
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        let members: Vec<(u64, u64)> = v["members"]
            .as_array()
            .unwrap()
            .iter()
            .map(|p| (p[0].as_u64().unwrap(), p[1].as_u64().unwrap()))
            .collect();
        assert_eq!(members, vec![(0, 0), (1, 2)]);
    }

    #[test]
    fn rejects_malformed_json() {
        assert!(Family::from_json("{\"order\": 3}").is_err());
    }
}

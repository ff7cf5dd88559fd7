//! Seeded random monotone predicates: per (n, x) a decision depth and up
//! to three relevant bit positions are derived from the seed, so the
//! decision is a fixed function of finitely many bits. Monotone by
//! construction and byte-for-byte reproducible per seed.

use super::{mix, BitPrefix, Decision, StepPredicate};

pub struct RandomMonotone {
    seed: u64,
    max_depth: u64,
}

impl RandomMonotone {
    pub fn new(seed: u64, max_depth: u64) -> Self {
        RandomMonotone { seed, max_depth }
    }

    /// Length at which (n, x) becomes decided; Unknown below it.
    pub fn depth(&self, n: u64, x: u64) -> u64 {
        mix(&[self.seed, n, x]) % (self.max_depth + 1)
    }
}

impl StepPredicate for RandomMonotone {
    fn name(&self) -> String {
        format!("random({}:{})", self.seed, self.max_depth)
    }

    fn decide(&self, n: u64, x: u64, s: &BitPrefix) -> Decision {
        let h = mix(&[self.seed, n, x]);
        let depth = h % (self.max_depth + 1);
        if s.len() < depth {
            return Decision::Unknown;
        }
        let mut verdict = (h >> 8) & 1 == 1;
        if depth > 0 {
            let positions = 1 + (h >> 16) % 3;
            for i in 0..positions {
                let r = mix(&[self.seed, n, x, 1000 + i]) % depth;
                verdict ^= s.bit(r);
            }
        }
        if verdict {
            Decision::Confirm
        } else {
            Decision::Refute
        }
    }
}

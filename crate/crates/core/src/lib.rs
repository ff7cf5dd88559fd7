//! Computable well-orders and two evaluation engines for step-indexed
//! recursion over them.
//!
//! The library builds finite and infinite orders from a small grammar
//! (`fin`, `omega`, `sum`, `lex`, `exp`, `rev`, `tree`), drives monotone
//! step predicates over them with either a bounded memoizing evaluator
//! (wetr) or a lazy term-rewriting evaluator with a termination-rank
//! monitor (setr), and cross-checks the results: fixpoint equations,
//! engine agreement, rank descent, and descending-chain probes.

pub mod coding;
pub mod error;
pub mod family;
pub mod order;
pub mod probe;
pub mod setr;
pub mod step;
pub mod wetr;

pub use error::{Error, Result};
pub use family::Family;
pub use order::{ExpElement, Order};
pub use setr::SetrSession;
pub use step::{BitPrefix, Decision, StepPredicate};
pub use wetr::WetrSession;

//! LTLf realizability and synthesis.
//!
//! Automaton states are propositional-equivalence classes of formulas,
//! explored on demand through formula progression. The two-player game they
//! induce is decided by a depth-first forward search that runs a local
//! backward fixed point on each strongly connected component as soon as
//! Tarjan's algorithm closes it. An explicit automaton builder and a classic
//! backward fixed-point solver are included as a reference pipeline.

pub mod bdd;
mod canon;
pub mod engine;
pub mod error;
pub mod formula;
pub mod game;
pub mod parser;
mod progress;
pub mod sat;
pub mod spec;
pub mod store;
pub mod strategy;
pub mod tdfa;
pub mod trace;

pub use engine::{synthesize, EngineOptions, Stats, Status, Verdict};
pub use error::{Error, Result};
pub use formula::{Formula, FormulaStore, Node, PropId};
pub use spec::{Partition, SpecInstance, SystemType};
pub use store::{FoldMode, StateKey, Store, KEY_FF, KEY_TT};
pub use trace::{eval_trace, Letter, Trace};

//! The per-instance state shared by every algorithm: interned formulas,
//! canonical state keys, and the progression and acceptance caches.

use std::collections::HashMap;
use std::time::Instant;

use crate::bdd::{Bdd, BddNode};
use crate::error::{Error, Result};
use crate::formula::{Formula, FormulaStore, PropId};
use crate::parser::{self, Undeclared};
use crate::trace::Letter;

/// Canonical identity of a propositional-equivalence class of formulas.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct StateKey(pub(crate) BddNode);

pub const KEY_FF: StateKey = StateKey(BddNode::FALSE);
pub const KEY_TT: StateKey = StateKey(BddNode::TRUE);

impl StateKey {
    pub fn raw(self) -> u32 {
        self.0.raw()
    }
}

/// How literals of the same proposition relate under propositional
/// equivalence.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash)]
pub enum FoldMode {
    /// `p` and `!p` are complementary, so `p | !p` is `true`.
    #[default]
    Complementary,
    /// `p` and `!p` are unrelated atoms.
    Strict,
}

/// One solver instance. Single-threaded; separate instances are independent.
#[derive(Clone, Debug)]
pub struct Store {
    pub formulas: FormulaStore,
    pub(crate) fold: FoldMode,
    pub(crate) state_bdd: Bdd,
    pub(crate) atoms: Vec<Formula>,
    pub(crate) atom_var: HashMap<Formula, u32>,
    pub(crate) canon_memo: HashMap<Formula, BddNode>,
    pub(crate) reps: HashMap<StateKey, Formula>,
    pub(crate) vars_memo: HashMap<Formula, u64>,
    pub(crate) progress_memo: HashMap<(Formula, Letter), Formula>,
    pub(crate) succ_memo: HashMap<(StateKey, Letter), StateKey>,
    pub(crate) eval1_memo: HashMap<(Formula, Letter), bool>,
    pub(crate) letter_bdd: Bdd,
    pub(crate) accept_memo: HashMap<StateKey, BddNode>,
    pub(crate) accept_formula_memo: HashMap<Formula, BddNode>,
    deadline: Option<Instant>,
}

impl Default for Store {
    fn default() -> Self {
        Self::new(FoldMode::default())
    }
}

impl Store {
    pub fn new(fold: FoldMode) -> Self {
        let mut reps = HashMap::new();
        reps.insert(KEY_TT, Formula::TRUE);
        reps.insert(KEY_FF, Formula::FALSE);
        Store {
            formulas: FormulaStore::new(),
            fold,
            state_bdd: Bdd::new(),
            atoms: Vec::new(),
            atom_var: HashMap::new(),
            canon_memo: HashMap::new(),
            reps,
            vars_memo: HashMap::new(),
            progress_memo: HashMap::new(),
            succ_memo: HashMap::new(),
            eval1_memo: HashMap::new(),
            letter_bdd: Bdd::new(),
            accept_memo: HashMap::new(),
            accept_formula_memo: HashMap::new(),
            deadline: None,
        }
    }

    /// A store whose alphabet is exactly `props`, in this order.
    pub fn with_props<S: AsRef<str>>(fold: FoldMode, props: &[S]) -> Result<Self> {
        let mut s = Store::new(fold);
        for p in props {
            s.formulas.declare(p.as_ref())?;
        }
        Ok(s)
    }

    pub fn fold_mode(&self) -> FoldMode {
        self.fold
    }

    /// Parses and normalizes a formula, declaring unknown propositions.
    pub fn parse(&mut self, text: &str) -> Result<Formula> {
        parser::parse_formula(&mut self.formulas, text, Undeclared::Declare)
    }

    /// Parses and normalizes a formula over the already declared alphabet.
    pub fn parse_declared(&mut self, text: &str) -> Result<Formula> {
        parser::parse_formula(&mut self.formulas, text, Undeclared::Reject)
    }

    pub fn display(&self, f: Formula) -> String {
        self.formulas.display(f).to_string()
    }

    pub fn prop(&self, name: &str) -> Option<PropId> {
        self.formulas.prop(name)
    }

    pub fn num_props(&self) -> usize {
        self.formulas.num_props()
    }

    /// Bitmask of every declared proposition.
    pub fn alphabet_mask(&self) -> u64 {
        match self.num_props() {
            64 => u64::MAX,
            n => (1u64 << n) - 1,
        }
    }

    /// Bitmask of the propositions of `f`, cached.
    pub fn vars(&mut self, f: Formula) -> u64 {
        if let Some(&v) = self.vars_memo.get(&f) {
            return v;
        }
        let v = self.formulas.vars(f);
        self.vars_memo.insert(f, v);
        v
    }

    // ---- limits ----

    pub fn set_deadline(&mut self, deadline: Option<Instant>) {
        self.deadline = deadline;
    }

    pub fn deadline(&self) -> Option<Instant> {
        self.deadline
    }

    pub fn check_deadline(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(Error::Timeout),
            _ => Ok(()),
        }
    }
}

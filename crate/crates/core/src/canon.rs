//! Propositional equivalence classes as canonical BDD keys.
//!
//! A formula is read as a Boolean combination of its temporal atoms
//! (literals and temporal-rooted subformulas). Each atom gets a BDD variable
//! the first time it is seen; the reduced BDD of the combination is the
//! class key.

use crate::bdd::BddNode;
use crate::error::{Error, Result};
use crate::formula::{Formula, Node};
use crate::store::{FoldMode, StateKey, Store};

impl Store {
    fn atom_variable(&mut self, atom: Formula) -> u32 {
        if let Some(&v) = self.atom_var.get(&atom) {
            return v;
        }
        let v = self.atoms.len() as u32;
        self.atoms.push(atom);
        self.atom_var.insert(atom, v);
        v
    }

    /// Assigns variables to the temporal closure of `f` in first-occurrence
    /// order. Calling this on the root formula first fixes the ordering.
    pub fn register_atoms(&mut self, f: Formula) {
        for atom in self.formulas.temporal_closure(f) {
            self.atom_for(atom);
        }
    }

    // Variable and polarity that represent `atom`.
    fn atom_for(&mut self, atom: Formula) -> (u32, bool) {
        match (self.fold, self.formulas.node(atom)) {
            (FoldMode::Complementary, Node::Lit { prop, positive }) => {
                let pos = self.formulas.lit(prop, true);
                (self.atom_variable(pos), positive)
            }
            _ => (self.atom_variable(atom), true),
        }
    }

    fn boolean_skeleton(&mut self, f: Formula) -> BddNode {
        if let Some(&n) = self.canon_memo.get(&f) {
            return n;
        }
        let n = match self.formulas.node(f) {
            Node::True => BddNode::TRUE,
            Node::False => BddNode::FALSE,
            Node::And(l, r) => {
                let (l, r) = (self.boolean_skeleton(l), self.boolean_skeleton(r));
                self.state_bdd.and(l, r)
            }
            Node::Or(l, r) => {
                let (l, r) = (self.boolean_skeleton(l), self.boolean_skeleton(r));
                self.state_bdd.or(l, r)
            }
            _ => match self.atom_for(f) {
                (v, true) => self.state_bdd.var(v),
                (v, false) => self.state_bdd.nvar(v),
            },
        };
        self.canon_memo.insert(f, n);
        n
    }

    /// Key of the propositional-equivalence class of `f`. The first formula
    /// to reach a key becomes its representative.
    pub fn canonicalize(&mut self, f: Formula) -> StateKey {
        let key = StateKey(self.boolean_skeleton(f));
        self.reps.entry(key).or_insert(f);
        key
    }

    pub fn prop_equiv(&mut self, f: Formula, g: Formula) -> bool {
        self.canonicalize(f) == self.canonicalize(g)
    }

    pub fn representative(&self, key: StateKey) -> Result<Formula> {
        self.reps.get(&key).copied().ok_or(Error::UnknownState)
    }

    /// Representative of a key known to come from this store.
    pub(crate) fn rep(&self, key: StateKey) -> Formula {
        self.reps[&key]
    }

    /// Number of distinct classes created so far.
    pub fn num_keys(&self) -> usize {
        self.reps.len()
    }

    /// Human-readable state label.
    pub fn describe(&self, key: StateKey) -> String {
        self.display(self.rep(key))
    }
}

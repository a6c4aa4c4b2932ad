//! LTLf satisfiability, shortest models and semantic entailment, decided by
//! breadth-first reachability over progression classes.

use std::collections::{HashMap, VecDeque};

use crate::bdd::BddNode;
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::store::{StateKey, Store, KEY_FF};
use crate::trace::{assignments, Letter, Trace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatResult {
    /// A satisfying trace of minimum length.
    Sat(Trace),
    Unsat,
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat(_))
    }

    pub fn model(&self) -> Option<&Trace> {
        match self {
            SatResult::Sat(t) => Some(t),
            SatResult::Unsat => None,
        }
    }

    pub fn into_model(self) -> Option<Trace> {
        match self {
            SatResult::Sat(t) => Some(t),
            SatResult::Unsat => None,
        }
    }
}

/// Breadth-first search for the closest class with an accepting letter.
///
/// Successors are enumerated over the propositions of each representative
/// only, in ascending letter order, so the first discovery of a class is
/// through the smallest letter and unmentioned propositions stay false.
pub fn min_model(store: &mut Store, f: Formula, budget: usize) -> Result<SatResult> {
    let start = store.canonicalize(f);
    let mut parent: HashMap<StateKey, Option<(StateKey, Letter)>> = HashMap::from([(start, None)]);
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        store.check_deadline()?;
        let acc = store.acceptance_function(s);
        if acc != BddNode::FALSE {
            let last = store.min_letter(acc).expect("non-false function has a model");
            let mut letters = vec![last];
            let mut cur = s;
            while let Some((prev, l)) = parent[&cur] {
                letters.push(l);
                cur = prev;
            }
            letters.reverse();
            return Ok(SatResult::Sat(Trace(letters)));
        }
        if s == KEY_FF {
            continue;
        }
        let vars = store.vars(store.rep(s));
        for l in assignments(vars) {
            let t = store.successor(s, l);
            if parent.contains_key(&t) {
                continue;
            }
            if parent.len() >= budget {
                return Err(Error::BudgetExceeded(budget));
            }
            parent.insert(t, Some((s, l)));
            queue.push_back(t);
        }
    }
    Ok(SatResult::Unsat)
}

pub fn is_sat(store: &mut Store, f: Formula, budget: usize) -> Result<bool> {
    Ok(min_model(store, f, budget)?.is_sat())
}

/// `f` entails `g` iff `f & !g` has no model. On failure the model of
/// `f & !g` is returned as the counterexample.
pub fn entailment(store: &mut Store, f: Formula, g: Formula, budget: usize) -> Result<Option<Trace>> {
    let ng = store.formulas.negate(g);
    let q = store.formulas.and(f, ng);
    Ok(min_model(store, q, budget)?.into_model())
}

pub fn entails(store: &mut Store, f: Formula, g: Formula, budget: usize) -> Result<bool> {
    Ok(entailment(store, f, g, budget)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tdfa::DEFAULT_STATE_BUDGET as B;
    use crate::trace::eval_trace;

    fn sat(text: &str) -> (Store, SatResult) {
        let mut s = Store::default();
        let f = s.parse(text).unwrap();
        let r = min_model(&mut s, f, B).unwrap();
        if let SatResult::Sat(t) = &r {
            assert!(eval_trace(&s.formulas, f, t).unwrap());
        }
        (s, r)
    }

    #[test]
    fn satisfiability_examples() {
        assert_eq!(sat("a & !a").1, SatResult::Unsat);
        assert_eq!(sat("false").1, SatResult::Unsat);
        assert_eq!(sat("G a").1, SatResult::Sat(Trace(vec![1])));
        assert_eq!(sat("X a & N !a").1, SatResult::Unsat);
    }

    #[test]
    fn shortest_models() {
        let (s, r) = sat("F b");
        let b = 1 << s.prop("b").unwrap();
        assert_eq!(r, SatResult::Sat(Trace(vec![b])));
        let (s, r) = sat("X b");
        let b = 1 << s.prop("b").unwrap();
        assert_eq!(r, SatResult::Sat(Trace(vec![0, b])));
        let (_, r) = sat("X X X true");
        assert_eq!(r.model().unwrap().len(), 4);
    }

    #[test]
    fn entailment_examples() {
        let mut s = Store::default();
        let pairs = [("a & b", "a", true), ("F a", "G a", false), ("G a", "F a", true)];
        for (f, g, expected) in pairs {
            let (f, g) = (s.parse(f).unwrap(), s.parse(g).unwrap());
            assert_eq!(entails(&mut s, f, g, B).unwrap(), expected);
        }
        let (f, g) = (s.parse("F a").unwrap(), s.parse("G a").unwrap());
        let cex = entailment(&mut s, f, g, B).unwrap().unwrap();
        assert!(eval_trace(&s.formulas, f, &cex).unwrap());
        assert!(!eval_trace(&s.formulas, g, &cex).unwrap());
    }

    #[test]
    fn budget_errors_propagate() {
        let mut s = Store::default();
        let f = s.parse("X X X X a").unwrap();
        assert_eq!(min_model(&mut s, f, 2), Err(Error::BudgetExceeded(2)));
    }
}

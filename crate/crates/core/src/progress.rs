//! Formula progression and one-step acceptance.

use crate::bdd::BddNode;
use crate::formula::{Formula, Node};
use crate::store::{StateKey, Store};
use crate::trace::{holds, Letter, Trace};

impl Store {
    /// Progresses `f` through one letter: the obligation left for the rest of
    /// the trace once `letter` has been read.
    pub fn progress(&mut self, f: Formula, letter: Letter) -> Formula {
        let letter = letter & self.vars(f);
        if let Some(&g) = self.progress_memo.get(&(f, letter)) {
            return g;
        }
        let g = match self.formulas.node(f) {
            Node::True => Formula::TRUE,
            Node::False => Formula::FALSE,
            Node::Lit { prop, positive } => {
                if holds(letter, prop) == positive {
                    Formula::TRUE
                } else {
                    Formula::FALSE
                }
            }
            Node::And(l, r) => {
                let (l, r) = (self.progress(l, letter), self.progress(r, letter));
                self.formulas.and(l, r)
            }
            Node::Or(l, r) => {
                let (l, r) = (self.progress(l, letter), self.progress(r, letter));
                self.formulas.or(l, r)
            }
            Node::Next(x) | Node::WeakNext(x) => x,
            Node::Until(l, r) => {
                let (l, r) = (self.progress(l, letter), self.progress(r, letter));
                let stay = self.formulas.and(l, f);
                self.formulas.or(r, stay)
            }
            Node::Release(l, r) => {
                let (l, r) = (self.progress(l, letter), self.progress(r, letter));
                let stay = self.formulas.or(l, f);
                self.formulas.and(r, stay)
            }
        };
        #[cfg(debug_assertions)]
        {
            let before = self.formulas.temporal_closure(f);
            debug_assert!(
                self.formulas
                    .temporal_closure(g)
                    .iter()
                    .all(|a| before.contains(a)),
                "progression introduced a new temporal atom"
            );
        }
        self.progress_memo.insert((f, letter), g);
        g
    }

    /// Left fold of [`Store::progress`] over a whole trace.
    pub fn progress_trace(&mut self, f: Formula, trace: &Trace) -> Formula {
        trace.letters().iter().fold(f, |g, &l| self.progress(g, l))
    }

    /// Class-level successor: `[progress(rep(s), letter)]`.
    pub fn successor(&mut self, s: StateKey, letter: Letter) -> StateKey {
        let rep = self.rep(s);
        let letter = letter & self.vars(rep);
        if let Some(&t) = self.succ_memo.get(&(s, letter)) {
            return t;
        }
        let g = self.progress(rep, letter);
        let t = self.canonicalize(g);
        self.succ_memo.insert((s, letter), t);
        t
    }

    /// Does the one-letter trace `[letter]` satisfy `f`?
    pub fn eval1(&mut self, f: Formula, letter: Letter) -> bool {
        let letter = letter & self.vars(f);
        if let Some(&v) = self.eval1_memo.get(&(f, letter)) {
            return v;
        }
        let v = match self.formulas.node(f) {
            Node::True => true,
            Node::False => false,
            Node::Lit { prop, positive } => holds(letter, prop) == positive,
            Node::And(l, r) => self.eval1(l, letter) && self.eval1(r, letter),
            Node::Or(l, r) => self.eval1(l, letter) || self.eval1(r, letter),
            Node::Next(_) => false,
            Node::WeakNext(_) => true,
            Node::Until(_, r) | Node::Release(_, r) => self.eval1(r, letter),
        };
        self.eval1_memo.insert((f, letter), v);
        v
    }

    /// Is `(s, letter)` an accepting transition?
    pub fn one_step_accepts(&mut self, s: StateKey, letter: Letter) -> bool {
        let rep = self.rep(s);
        self.eval1(rep, letter)
    }

    /// The set of letters accepted in one step from `s`, as a BDD over the
    /// propositions (variable `p` is proposition `p`).
    pub fn acceptance_function(&mut self, s: StateKey) -> BddNode {
        if let Some(&n) = self.accept_memo.get(&s) {
            return n;
        }
        let rep = self.rep(s);
        let n = self.acceptance_of(rep);
        self.accept_memo.insert(s, n);
        n
    }

    fn acceptance_of(&mut self, f: Formula) -> BddNode {
        if let Some(&n) = self.accept_formula_memo.get(&f) {
            return n;
        }
        let n = match self.formulas.node(f) {
            Node::True | Node::WeakNext(_) => BddNode::TRUE,
            Node::False | Node::Next(_) => BddNode::FALSE,
            Node::Lit { prop, positive: true } => self.letter_bdd.var(prop),
            Node::Lit { prop, positive: false } => self.letter_bdd.nvar(prop),
            Node::And(l, r) => {
                let (l, r) = (self.acceptance_of(l), self.acceptance_of(r));
                self.letter_bdd.and(l, r)
            }
            Node::Or(l, r) => {
                let (l, r) = (self.acceptance_of(l), self.acceptance_of(r));
                self.letter_bdd.or(l, r)
            }
            Node::Until(_, r) | Node::Release(_, r) => self.acceptance_of(r),
        };
        self.accept_formula_memo.insert(f, n);
        n
    }

    /// Evaluates a letter BDD produced by [`Store::acceptance_function`].
    pub fn eval_letter_fn(&self, n: BddNode, letter: Letter) -> bool {
        self.letter_bdd.eval(n, |v| holds(letter, v))
    }

    /// Smallest letter (as an integer) in a letter BDD.
    pub fn min_letter(&self, n: BddNode) -> Option<Letter> {
        self.letter_bdd.min_assignment(n)
    }

    pub fn letter_and(&mut self, a: BddNode, b: BddNode) -> BddNode {
        self.letter_bdd.and(a, b)
    }

    /// Conjunction of literals fixing the bits of `mask` to those of `letter`.
    pub fn letter_cube(&mut self, mask: u64, letter: Letter) -> BddNode {
        let mut n = BddNode::TRUE;
        for p in (0..64u32).rev().filter(|p| mask >> p & 1 == 1) {
            let lit = if holds(letter, p) {
                self.letter_bdd.var(p)
            } else {
                self.letter_bdd.nvar(p)
            };
            n = self.letter_bdd.and(lit, n);
        }
        n
    }
}

#[cfg(test)]
mod tests {
    use crate::store::{Store, KEY_FF};
    use crate::trace::{assignments, eval_trace, Trace};

    #[test]
    fn progression_examples() {
        let mut s = Store::default();
        let xa = s.parse("X (a | b)").unwrap();
        let body = s.parse("a | b").unwrap();
        for l in 0..4 {
            assert_eq!(s.progress(xa, l), body);
        }
        let u = s.parse("a U b").unwrap();
        let (a, b) = (1 << s.prop("a").unwrap(), 1 << s.prop("b").unwrap());
        assert_eq!(s.progress(u, b), s.formulas.tt());
        assert_eq!(s.progress(u, a), u);
        assert_eq!(s.progress(u, 0), s.formulas.ff());
    }

    #[test]
    fn successor_examples() {
        let mut s = Store::default();
        let xa = s.parse("X a").unwrap();
        let k = s.canonicalize(xa);
        let a = s.parse("a").unwrap();
        let ka = s.canonicalize(a);
        assert_eq!(s.successor(k, 1), ka);
        for l in 0..2 {
            assert_eq!(s.successor(KEY_FF, l), KEY_FF);
        }
        let u = s.parse("a U b").unwrap();
        let ku = s.canonicalize(u);
        assert_eq!(s.successor(ku, 0), KEY_FF);
    }

    #[test]
    fn one_step_acceptance() {
        let mut s = Store::default();
        let keys: Vec<_> = ["a U b", "X a", "N a"]
            .iter()
            .map(|t| {
                let f = s.parse(t).unwrap();
                s.canonicalize(f)
            })
            .collect();
        let b = 1 << s.prop("b").unwrap();
        assert!(s.one_step_accepts(keys[0], b));
        for l in 0..4 {
            assert!(!s.one_step_accepts(keys[1], l));
            assert!(s.one_step_accepts(keys[2], l));
        }
    }

    #[test]
    fn acceptance_function_matches_letters() {
        let mut s = Store::default();
        let texts = ["a U b", "N a", "X a", "(a R b) | (!a & X b)", "G a & F !b"];
        for t in texts {
            let f = s.parse(t).unwrap();
            let k = s.canonicalize(f);
            let acc = s.acceptance_function(k);
            for l in assignments(s.alphabet_mask()) {
                let by_eval = eval_trace(&s.formulas, f, &Trace(vec![l])).unwrap();
                assert_eq!(s.eval_letter_fn(acc, l), by_eval, "{t} on {l}");
                assert_eq!(s.one_step_accepts(k, l), by_eval, "{t} on {l}");
            }
        }
        let f = s.parse("a U b").unwrap();
        let k = s.canonicalize(f);
        let acc = s.acceptance_function(k);
        let b = s.prop("b").unwrap();
        let just_b = s.letter_bdd.var(b);
        assert_eq!(acc, just_b);
    }
}

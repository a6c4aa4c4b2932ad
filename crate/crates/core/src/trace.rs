//! Letters, finite traces and the reference trace semantics.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::formula::{Formula, FormulaStore, Node, PropId};

/// Letters are bitvectors over the declared propositions, so this is also the
/// alphabet size limit.
pub const MAX_PROPS: usize = 64;

/// A total assignment: bit `p` is set iff proposition `p` holds.
pub type Letter = u64;

pub fn holds(letter: Letter, p: PropId) -> bool {
    letter >> p & 1 == 1
}

/// A finite sequence of letters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Trace(pub Vec<Letter>);

impl Trace {
    pub fn new(letters: Vec<Letter>) -> Self {
        Trace(letters)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// Suffix starting at instant `i`.
    pub fn suffix(&self, i: usize) -> Trace {
        Trace(self.0[i..].to_vec())
    }

    /// Renders as `;`-separated full literal cubes over `vars`, in order.
    pub fn render(&self, store: &FormulaStore, vars: &[PropId]) -> String {
        self.0
            .iter()
            .map(|&l| render_cube(store, vars, l))
            .collect::<Vec<_>>()
            .join(" ; ")
    }

    /// Parses `a & !b ; !a & b`. Unmentioned propositions are false.
    pub fn parse(store: &FormulaStore, text: &str) -> Result<Trace> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Trace::default());
        }
        text.split(';')
            .map(|cube| parse_cube(store, cube))
            .collect::<Result<Vec<_>>>()
            .map(Trace)
    }
}

/// `&`-joined literals over `vars`; `true` for an empty variable list.
pub fn render_cube(store: &FormulaStore, vars: &[PropId], letter: Letter) -> String {
    if vars.is_empty() {
        return "true".to_string();
    }
    vars.iter()
        .map(|&p| {
            let name = store.prop_name(p);
            if holds(letter, p) {
                name.to_string()
            } else {
                format!("!{name}")
            }
        })
        .collect::<Vec<_>>()
        .join(" & ")
}

pub fn parse_cube(store: &FormulaStore, cube: &str) -> Result<Letter> {
    let mut letter = 0;
    let cube = cube.trim();
    if cube == "true" || cube.is_empty() {
        return Ok(0);
    }
    for lit in cube.split('&') {
        let lit = lit.trim();
        let (name, positive) = match lit.strip_prefix('!') {
            Some(rest) => (rest.trim(), false),
            None => (lit, true),
        };
        let p = store
            .prop(name)
            .ok_or_else(|| Error::UndeclaredProposition(name.to_string()))?;
        if positive {
            letter |= 1 << p;
        }
    }
    Ok(letter)
}

/// Enumerates every assignment to the bits in `mask`, in ascending numeric
/// order of the resulting letters.
pub fn assignments(mask: u64) -> impl Iterator<Item = Letter> {
    let positions: Vec<u32> = (0..64).filter(|i| mask >> i & 1 == 1).collect();
    let count = 1u64 << positions.len();
    (0..count).map(move |k| {
        positions
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &p)| acc | ((k >> j & 1) << p))
    })
}

/// Decides `trace ⊨ f` directly from the satisfaction clauses.
///
/// This is the ground truth the automaton, progression and game code are
/// tested against, so it deliberately shares no code with them.
pub fn eval_trace(store: &FormulaStore, f: Formula, trace: &Trace) -> Result<bool> {
    if trace.is_empty() {
        return Err(Error::EmptyTrace);
    }
    let mut ev = Evaluator {
        store,
        letters: &trace.0,
        memo: HashMap::new(),
    };
    Ok(ev.sat(f, 0))
}

struct Evaluator<'a> {
    store: &'a FormulaStore,
    letters: &'a [Letter],
    memo: HashMap<(Formula, usize), bool>,
}

impl Evaluator<'_> {
    /// Does the suffix starting at `i` satisfy `f`?
    fn sat(&mut self, f: Formula, i: usize) -> bool {
        if let Some(&v) = self.memo.get(&(f, i)) {
            return v;
        }
        let n = self.letters.len();
        let v = match self.store.node(f) {
            Node::True => true,
            Node::False => false,
            Node::Lit { prop, positive } => holds(self.letters[i], prop) == positive,
            Node::And(l, r) => self.sat(l, i) && self.sat(r, i),
            Node::Or(l, r) => self.sat(l, i) || self.sat(r, i),
            Node::Next(g) => n - i > 1 && self.sat(g, i + 1),
            Node::WeakNext(g) => n - i == 1 || self.sat(g, i + 1),
            // some k: rhs at k, lhs at every j < k
            Node::Until(l, r) => {
                (i..n).any(|k| self.sat(r, k) && (i..k).all(|j| self.sat(l, j)))
            }
            // some k: (k is last or lhs at k), rhs at every j <= k
            Node::Release(l, r) => (i..n)
                .any(|k| (k == n - 1 || self.sat(l, k)) && (i..=k).all(|j| self.sat(r, j))),
        };
        self.memo.insert((f, i), v);
        v
    }
}

//! Explicit transition-based DFA construction by exhaustive progression.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::store::{StateKey, Store};
use crate::trace::{render_cube, Letter, Trace};

pub const DEFAULT_STATE_BUDGET: usize = 1_000_000;

/// A complete TDFA over all propositions of the store that built it.
/// Letters are indexed by their bitvector value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tdfa {
    pub num_props: usize,
    pub states: Vec<StateKey>,
    pub init: usize,
    /// `delta[s][letter]`
    pub delta: Vec<Vec<usize>>,
    /// `accepting[s][letter]`
    pub accepting: Vec<Vec<bool>>,
    index: HashMap<StateKey, usize>,
}

impl Tdfa {
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_letters(&self) -> usize {
        1 << self.num_props
    }

    pub fn index_of(&self, key: StateKey) -> Option<usize> {
        self.index.get(&key).copied()
    }

    /// Runs `trace` from the initial state; accepts iff the trace is
    /// non-empty and its last transition is accepting.
    pub fn accepts(&self, trace: &Trace) -> bool {
        let Some((&last, prefix)) = trace.letters().split_last() else {
            return false;
        };
        let s = prefix
            .iter()
            .fold(self.init, |s, &l| self.delta[s][l as usize]);
        self.accepting[s][last as usize]
    }

    /// Deterministic DOT rendering; accepting transitions are bold green.
    pub fn export_dot(&self, store: &Store) -> String {
        let vars: Vec<_> = (0..self.num_props as u32).collect();
        let mut out = String::new();
        out.push_str("digraph tdfa {\n  rankdir=LR;\n  node [shape=ellipse];\n");
        out.push_str("  init [shape=point];\n");
        let _ = writeln!(out, "  init -> s{};", self.init);
        for (i, &key) in self.states.iter().enumerate() {
            let _ = writeln!(out, "  s{i} [label=\"{}\"];", escape(&store.describe(key)));
        }
        for s in 0..self.num_states() {
            let mut edges: Vec<(usize, Letter)> = (0..self.num_letters())
                .map(|l| (self.delta[s][l], l as Letter))
                .collect();
            edges.sort();
            for (t, l) in edges {
                let label = escape(&render_cube(&store.formulas, &vars, l));
                let style = if self.accepting[s][l as usize] {
                    ", style=bold, color=darkgreen"
                } else {
                    ""
                };
                let _ = writeln!(out, "  s{s} -> s{t} [label=\"{label}\"{style}];");
            }
        }
        out.push_str("}\n");
        out
    }

    /// Structural check: every state has exactly one successor per letter.
    pub fn is_total(&self) -> bool {
        let n = self.num_letters();
        self.delta.len() == self.num_states()
            && self.delta.iter().all(|row| row.len() == n && row.iter().all(|&t| t < self.num_states()))
            && self.accepting.iter().all(|row| row.len() == n)
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Breadth-first closure of `[f]` under the successor function over every
/// letter of the store's alphabet.
pub fn build_tdfa(store: &mut Store, f: Formula, budget: usize) -> Result<Tdfa> {
    let num_props = store.num_props();
    if num_props > 20 {
        return Err(Error::TooManyPropositions(20));
    }
    let letters = 1usize << num_props;
    let init_key = store.canonicalize(f);
    let mut index = HashMap::from([(init_key, 0usize)]);
    let mut states = vec![init_key];
    let mut delta = Vec::new();
    let mut accepting = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        store.check_deadline()?;
        let key = states[s];
        let mut row = Vec::with_capacity(letters);
        let mut acc = Vec::with_capacity(letters);
        for l in 0..letters as Letter {
            let t = store.successor(key, l);
            let ti = match index.get(&t) {
                Some(&ti) => ti,
                None => {
                    if states.len() >= budget {
                        return Err(Error::BudgetExceeded(budget));
                    }
                    let ti = states.len();
                    states.push(t);
                    index.insert(t, ti);
                    queue.push_back(ti);
                    ti
                }
            };
            row.push(ti);
            acc.push(store.one_step_accepts(key, l));
        }
        // rows are filled in BFS pop order, which is index order
        debug_assert_eq!(delta.len(), s);
        delta.push(row);
        accepting.push(acc);
    }
    Ok(Tdfa {
        num_props,
        states,
        init: 0,
        delta,
        accepting,
        index,
    })
}

//! Explicit reachability games on a TDFA, solved by the backward fixed point.
//! Slow but simple; the on-the-fly engine is checked against it.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::spec::{SpecInstance, SystemType};
use crate::store::{StateKey, Store};
use crate::strategy::{CounterStrategy, EnvMove, Output, Strategy};
use crate::tdfa::{build_tdfa, Tdfa};
use crate::trace::{assignments, Letter};

/// A state set over arena indices.
pub type StateSet = Vec<bool>;

#[derive(Clone, Debug)]
pub struct GameArena {
    /// `delta[s][letter]`, letters indexed by bitvector value.
    pub delta: Vec<Vec<usize>>,
    pub accepting: Vec<Vec<bool>>,
    pub init: usize,
    /// Ascending input assignments.
    pub x_letters: Vec<Letter>,
    /// Ascending output assignments.
    pub y_letters: Vec<Letter>,
    pub system_type: SystemType,
    /// Canonical state of each index, when built from a TDFA.
    pub keys: Vec<StateKey>,
}

impl GameArena {
    /// Wraps raw transition tables. `keys` may be empty.
    pub fn new(
        delta: Vec<Vec<usize>>,
        accepting: Vec<Vec<bool>>,
        init: usize,
        input_mask: u64,
        output_mask: u64,
        system_type: SystemType,
    ) -> Self {
        assert_eq!(input_mask & output_mask, 0, "inputs and outputs overlap");
        GameArena {
            delta,
            accepting,
            init,
            x_letters: assignments(input_mask).collect(),
            y_letters: assignments(output_mask).collect(),
            system_type,
            keys: Vec::new(),
        }
    }

    pub fn from_tdfa(tdfa: &Tdfa, spec: &SpecInstance) -> Self {
        let mut arena = GameArena::new(
            tdfa.delta.clone(),
            tdfa.accepting.clone(),
            tdfa.init,
            spec.input_mask(),
            spec.output_mask(),
            spec.system_type,
        );
        arena.keys = tdfa.states.clone();
        arena
    }

    /// Builds the full TDFA of the specification and wraps it.
    pub fn build(store: &mut Store, spec: &SpecInstance, budget: usize) -> Result<Self> {
        let tdfa = build_tdfa(store, spec.formula, budget)?;
        Ok(GameArena::from_tdfa(&tdfa, spec))
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    /// The system is happy with `(s, x|y)`: accepting, or lands in `target`.
    fn good(&self, s: usize, l: Letter, target: &[bool]) -> bool {
        self.accepting[s][l as usize] || target[self.delta[s][l as usize]]
    }

    /// The environment is happy with `(s, x|y)`: non-accepting into `target`.
    fn trap(&self, s: usize, l: Letter, target: &[bool]) -> bool {
        !self.accepting[s][l as usize] && target[self.delta[s][l as usize]]
    }

    fn system_wins_at(&self, s: usize, e: &[bool]) -> bool {
        match self.system_type {
            SystemType::Moore => self
                .y_letters
                .iter()
                .any(|&y| self.x_letters.iter().all(|&x| self.good(s, x | y, e))),
            SystemType::Mealy => self
                .x_letters
                .iter()
                .all(|&x| self.y_letters.iter().any(|&y| self.good(s, x | y, e))),
        }
    }

    fn env_wins_at(&self, s: usize, e: &[bool]) -> bool {
        match self.system_type {
            SystemType::Moore => self
                .y_letters
                .iter()
                .all(|&y| self.x_letters.iter().any(|&x| self.trap(s, x | y, e))),
            SystemType::Mealy => self
                .x_letters
                .iter()
                .any(|&x| self.y_letters.iter().all(|&y| self.trap(s, x | y, e))),
        }
    }

    /// States from which the system can force, in one round, an accepting
    /// transition or a move into `e`.
    pub fn cpre_system(&self, e: &[bool]) -> StateSet {
        (0..self.num_states()).map(|s| self.system_wins_at(s, e)).collect()
    }

    /// States from which the environment can force, in one round, a
    /// non-accepting move into `e`.
    pub fn cpre_env(&self, e: &[bool]) -> StateSet {
        (0..self.num_states()).map(|s| self.env_wins_at(s, e)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WinningSets {
    /// First iteration at which each state entered the system's winning set.
    pub swin_level: Vec<Option<usize>>,
    pub ewin: StateSet,
    /// Iterations until both chains were stable.
    pub iterations: usize,
}

impl WinningSets {
    pub fn swin(&self) -> StateSet {
        self.swin_level.iter().map(Option::is_some).collect()
    }

    pub fn realizable(&self, arena: &GameArena) -> bool {
        self.swin_level[arena.init].is_some()
    }
}

/// Computes both winning regions by the ascending system chain and the
/// descending environment chain, checking at every step that they partition
/// the states and that both stabilize together.
pub fn solve_fixpoint(arena: &GameArena) -> WinningSets {
    let n = arena.num_states();
    let mut swin = vec![false; n];
    let mut ewin = vec![true; n];
    let mut level = vec![None; n];
    let mut i = 0;
    loop {
        for s in 0..n {
            assert!(!(swin[s] && ewin[s]), "state {s} won by both players at iteration {i}");
            assert!(swin[s] || ewin[s], "state {s} won by neither player at iteration {i}");
        }
        let cs = arena.cpre_system(&swin);
        let ce = arena.cpre_env(&ewin);
        let next_s: StateSet = (0..n).map(|s| swin[s] || cs[s]).collect();
        let next_e: StateSet = (0..n).map(|s| ewin[s] && ce[s]).collect();
        let s_fixed = next_s == swin;
        let e_fixed = next_e == ewin;
        assert_eq!(s_fixed, e_fixed, "chains stabilized at different iterations ({i})");
        if s_fixed {
            return WinningSets {
                swin_level: level,
                ewin,
                iterations: i,
            };
        }
        i += 1;
        for s in 0..n {
            if next_s[s] && !swin[s] {
                level[s] = Some(i);
            }
        }
        swin = next_s;
        ewin = next_e;
    }
}

/// Positional strategies over arena indices: `pi[s]` for system-winning
/// states, `tau[s]` for environment-winning ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexedStrategies {
    pub pi: Vec<Option<Output>>,
    pub tau: Vec<Option<EnvMove>>,
}

/// Least-choice strategies. The system at level `l` picks the smallest move
/// that stays within level `l - 1` or accepts, which makes plays strictly
/// descend in level; the environment picks the smallest move that keeps the
/// play non-accepting inside its region.
pub fn positional_strategies(arena: &GameArena, w: &WinningSets) -> IndexedStrategies {
    let n = arena.num_states();
    let mut pi = vec![None; n];
    let mut tau = vec![None; n];
    for s in 0..n {
        if let Some(l) = w.swin_level[s] {
            let below: StateSet = w.swin_level.iter().map(|&k| k.is_some_and(|k| k < l)).collect();
            pi[s] = Some(match arena.system_type {
                SystemType::Moore => Output::Fixed(
                    *arena
                        .y_letters
                        .iter()
                        .find(|&&y| arena.x_letters.iter().all(|&x| arena.good(s, x | y, &below)))
                        .expect("winning level has a witnessing output"),
                ),
                SystemType::Mealy => Output::PerInput(
                    arena
                        .x_letters
                        .iter()
                        .map(|&x| {
                            *arena
                                .y_letters
                                .iter()
                                .find(|&&y| arena.good(s, x | y, &below))
                                .expect("winning level has a witnessing output")
                        })
                        .collect(),
                ),
            });
        }
        if w.ewin[s] {
            tau[s] = Some(match arena.system_type {
                SystemType::Moore => EnvMove::PerOutput(
                    arena
                        .y_letters
                        .iter()
                        .map(|&y| {
                            *arena
                                .x_letters
                                .iter()
                                .find(|&&x| arena.trap(s, x | y, &w.ewin))
                                .expect("environment region is closed")
                        })
                        .collect(),
                ),
                SystemType::Mealy => EnvMove::Fixed(
                    *arena
                        .x_letters
                        .iter()
                        .find(|&&x| arena.y_letters.iter().all(|&y| arena.trap(s, x | y, &w.ewin)))
                        .expect("environment region is closed"),
                ),
            });
        }
    }
    IndexedStrategies { pi, tau }
}

/// Strategies keyed by canonical state. Requires an arena built from a TDFA.
pub fn extract_strategies(arena: &GameArena, w: &WinningSets) -> (Strategy, CounterStrategy) {
    assert_eq!(arena.keys.len(), arena.num_states(), "arena has no state keys");
    let IndexedStrategies { pi, tau } = positional_strategies(arena, w);
    let init = arena.keys[arena.init];
    let outputs: BTreeMap<_, _> = pi
        .into_iter()
        .enumerate()
        .filter_map(|(s, o)| Some((arena.keys[s], o?)))
        .collect();
    let moves: BTreeMap<_, _> = tau
        .into_iter()
        .enumerate()
        .filter_map(|(s, m)| Some((arena.keys[s], m?)))
        .collect();
    (
        Strategy {
            system_type: arena.system_type,
            init,
            outputs,
        },
        CounterStrategy {
            system_type: arena.system_type,
            init,
            moves,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::Partition;
    use crate::store::FoldMode;
    use crate::strategy::{verify, verify_counter};

    // x is bit 0, y is bit 1
    fn one_state(acc: [bool; 4]) -> GameArena {
        GameArena::new(vec![vec![0; 4]], vec![acc.to_vec()], 0, 0b01, 0b10, SystemType::Moore)
    }

    #[test]
    fn cpre_examples() {
        let a = one_state([false, false, true, true]);
        assert_eq!(a.cpre_system(&[false]), vec![true]);
        let a = one_state([false, false, false, true]);
        assert_eq!(a.cpre_system(&[false]), vec![false]);
        assert_eq!(a.cpre_system(&[true]), vec![true]);
        assert_eq!(a.cpre_env(&[false]), vec![false]);
        let sink = one_state([false; 4]);
        assert_eq!(sink.cpre_env(&[true]), vec![true]);
    }

    fn solve(text: &str, ty: SystemType) -> (Store, SpecInstance, GameArena, WinningSets) {
        let p = Partition::new(["x"], ["y"]).unwrap();
        let (mut store, spec) = SpecInstance::load(FoldMode::default(), text, &p, ty).unwrap();
        let arena = GameArena::build(&mut store, &spec, 1000).unwrap();
        let w = solve_fixpoint(&arena);
        (store, spec, arena, w)
    }

    #[test]
    fn fixpoint_examples() {
        let (_, _, a, w) = solve("F y", SystemType::Moore);
        assert_eq!(w.swin_level[a.init], Some(1));
        let (_, _, a, w) = solve("x", SystemType::Moore);
        assert!(w.ewin[a.init]);
        let (_, _, a, w) = solve("true", SystemType::Moore);
        assert_eq!(w.swin_level[a.init], Some(1));
    }

    #[test]
    fn strategy_examples() {
        let (mut store, spec, a, w) = solve("F y", SystemType::Moore);
        let (pi, _) = extract_strategies(&a, &w);
        assert_eq!(pi.lookup(pi.init), Some(&Output::Fixed(0b10)));
        assert!(verify(&mut store, &spec, &pi).passed());

        let (mut store, spec, a, w) = solve("x", SystemType::Moore);
        let (_, tau) = extract_strategies(&a, &w);
        assert_eq!(tau.moves[&tau.init], EnvMove::PerOutput(vec![0, 0]));
        assert!(verify_counter(&mut store, &spec, &tau).passed());

        let (_, _, a, w) = solve("true", SystemType::Moore);
        let (pi, _) = extract_strategies(&a, &w);
        assert_eq!(pi.lookup(pi.init), Some(&Output::Fixed(0)));
    }

    #[test]
    fn xor_depends_on_system_type() {
        let (mut store, spec, a, w) = solve("x <-> !y", SystemType::Moore);
        assert!(!w.realizable(&a));
        let (_, tau) = extract_strategies(&a, &w);
        assert!(verify_counter(&mut store, &spec, &tau).passed());

        let (mut store, spec, a, w) = solve("x <-> !y", SystemType::Mealy);
        assert!(w.realizable(&a));
        let (pi, _) = extract_strategies(&a, &w);
        assert_eq!(pi.lookup(pi.init), Some(&Output::PerInput(vec![0b10, 0])));
        assert!(verify(&mut store, &spec, &pi).passed());
    }
}

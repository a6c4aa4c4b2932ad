//! Positional strategies for both players: representation, verification,
//! simulation, and a replayable text format.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::spec::{SpecInstance, SystemType};
use crate::store::{StateKey, Store};
use crate::trace::{render_cube, Letter, Trace};

/// What the system plays at one state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Output {
    /// Moore: one output assignment, chosen before the inputs are seen.
    Fixed(Letter),
    /// Mealy: one output per input assignment, indexed like
    /// [`SpecInstance::input_letters`].
    PerInput(Vec<Letter>),
}

/// A positional system strategy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strategy {
    pub system_type: SystemType,
    pub init: StateKey,
    pub outputs: BTreeMap<StateKey, Output>,
}

impl Strategy {
    pub fn lookup(&self, s: StateKey) -> Option<&Output> {
        self.outputs.get(&s)
    }

    /// Output played at `s` when the inputs are `x`.
    pub fn respond(&self, spec: &SpecInstance, s: StateKey, x: Letter) -> Option<Letter> {
        match self.outputs.get(&s)? {
            Output::Fixed(y) => Some(*y),
            Output::PerInput(ys) => ys.get(input_index(spec, x)?).copied(),
        }
    }

    pub fn len(&self) -> usize {
        self.outputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outputs.is_empty()
    }
}

/// What the environment plays at one state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EnvMove {
    /// Moore: an input reply for every output, indexed like
    /// [`SpecInstance::output_letters`].
    PerOutput(Vec<Letter>),
    /// Mealy: one input assignment, chosen first.
    Fixed(Letter),
}

/// A positional environment strategy witnessing unrealizability.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterStrategy {
    pub system_type: SystemType,
    pub init: StateKey,
    pub moves: BTreeMap<StateKey, EnvMove>,
}

impl CounterStrategy {
    /// Inputs played at `s`. For Moore games `y` is the output already
    /// committed; for Mealy games it is ignored.
    pub fn respond(&self, spec: &SpecInstance, s: StateKey, y: Letter) -> Option<Letter> {
        match self.moves.get(&s)? {
            EnvMove::Fixed(x) => Some(*x),
            EnvMove::PerOutput(xs) => xs.get(output_index(spec, y)?).copied(),
        }
    }
}

pub(crate) fn input_index(spec: &SpecInstance, x: Letter) -> Option<usize> {
    spec.input_letters().binary_search(&x).ok()
}

pub(crate) fn output_index(spec: &SpecInstance, y: Letter) -> Option<usize> {
    spec.output_letters().binary_search(&y).ok()
}

/// Why a strategy fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A reachable state has no recorded move. `path` leads to it.
    Undefined {
        state: StateKey,
        path: Vec<(StateKey, Letter)>,
    },
    /// A play that loops forever without accepting: `stem` then `cycle`
    /// repeated.
    Lasso {
        stem: Vec<(StateKey, Letter)>,
        cycle: Vec<(StateKey, Letter)>,
    },
    /// The opponent reaches an accepting transition along `path`.
    Accepting { path: Vec<(StateKey, Letter)> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Report {
    Pass,
    Fail(Witness),
}

impl Report {
    pub fn passed(&self) -> bool {
        matches!(self, Report::Pass)
    }
}

impl Witness {
    pub fn describe(&self, store: &Store) -> String {
        let vars: Vec<_> = (0..store.num_props() as u32).collect();
        let steps = |path: &[(StateKey, Letter)]| -> String {
            path.iter()
                .map(|&(s, l)| {
                    format!(
                        "[{}] --{}-->",
                        store.describe(s),
                        render_cube(&store.formulas, &vars, l)
                    )
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        match self {
            Witness::Undefined { state, path } => format!(
                "undefined state: {} [{}]",
                steps(path),
                store.describe(*state)
            ),
            Witness::Lasso { stem, cycle } => format!(
                "lasso: {} loop {{ {} }}",
                steps(stem),
                steps(cycle)
            ),
            Witness::Accepting { path } => format!("accepting play: {}", steps(path)),
        }
    }
}

/// Letters the system strategy allows at `s`, one per input assignment.
fn strategy_letters(spec: &SpecInstance, st: &Strategy, s: StateKey) -> Option<Vec<Letter>> {
    spec.input_letters()
        .into_iter()
        .map(|x| st.respond(spec, s, x).map(|y| x | y))
        .collect()
}

/// Checks that every play consistent with `st` reaches an accepting
/// transition.
///
/// Accepting transitions end plays, so they are dropped; what remains must
/// be acyclic and the strategy must be defined on every reachable state.
/// Since the transition function is total, these two facts are equivalent to
/// winning.
pub fn verify(store: &mut Store, spec: &SpecInstance, st: &Strategy) -> Report {
    #[derive(Copy, Clone, PartialEq)]
    enum Color {
        Grey,
        Black,
    }
    let mut color: HashMap<StateKey, Color> = HashMap::new();
    // (state, letters, next letter index); entry i of `path` is the edge
    // taken out of stack[i]
    let mut stack: Vec<(StateKey, Vec<Letter>, usize)> = Vec::new();
    let mut path: Vec<(StateKey, Letter)> = Vec::new();

    let Some(letters) = strategy_letters(spec, st, st.init) else {
        return Report::Fail(Witness::Undefined {
            state: st.init,
            path: vec![],
        });
    };
    color.insert(st.init, Color::Grey);
    stack.push((st.init, letters, 0));

    while let Some((s, letters, i)) = stack.last_mut() {
        let s = *s;
        if *i == letters.len() {
            color.insert(s, Color::Black);
            stack.pop();
            path.pop();
            continue;
        }
        let l = letters[*i];
        *i += 1;
        if store.one_step_accepts(s, l) {
            continue;
        }
        let t = store.successor(s, l);
        path.push((s, l));
        match color.get(&t) {
            Some(Color::Black) => {
                path.pop();
            }
            Some(Color::Grey) => {
                let at = path.iter().position(|&(q, _)| q == t).unwrap();
                return Report::Fail(Witness::Lasso {
                    stem: path[..at].to_vec(),
                    cycle: path[at..].to_vec(),
                });
            }
            None => {
                let Some(next) = strategy_letters(spec, st, t) else {
                    return Report::Fail(Witness::Undefined { state: t, path });
                };
                color.insert(t, Color::Grey);
                stack.push((t, next, 0));
            }
        }
    }
    Report::Pass
}

/// Checks that no play consistent with `cs` ever takes an accepting
/// transition, whatever the system does.
pub fn verify_counter(store: &mut Store, spec: &SpecInstance, cs: &CounterStrategy) -> Report {
    let mut parent: HashMap<StateKey, Option<(StateKey, Letter)>> = HashMap::from([(cs.init, None)]);
    let mut queue = VecDeque::from([cs.init]);
    let path_to = |parent: &HashMap<StateKey, Option<(StateKey, Letter)>>, mut s: StateKey| {
        let mut path = Vec::new();
        while let Some(Some((p, l))) = parent.get(&s) {
            path.push((*p, *l));
            s = *p;
        }
        path.reverse();
        path
    };
    while let Some(s) = queue.pop_front() {
        for y in spec.output_letters() {
            let Some(x) = cs.respond(spec, s, y) else {
                return Report::Fail(Witness::Undefined {
                    state: s,
                    path: path_to(&parent, s),
                });
            };
            let l = x | y;
            if store.one_step_accepts(s, l) {
                let mut path = path_to(&parent, s);
                path.push((s, l));
                return Report::Fail(Witness::Accepting { path });
            }
            let t = store.successor(s, l);
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(t) {
                e.insert(Some((s, l)));
                queue.push_back(t);
            }
        }
    }
    Report::Pass
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simulation {
    pub trace: Trace,
    /// Round of the first accepting transition; `None` while still ongoing.
    pub accepted_at: Option<usize>,
}

/// Replays `st` against a fixed input sequence, stopping at the first
/// accepting transition.
pub fn simulate(
    store: &mut Store,
    spec: &SpecInstance,
    st: &Strategy,
    inputs: &[Letter],
) -> Result<Simulation> {
    let mut s = st.init;
    let mut letters = Vec::new();
    for (round, &x) in inputs.iter().enumerate() {
        let y = st
            .respond(spec, s, x)
            .ok_or_else(|| Error::UndefinedState(store.describe(s)))?;
        let l = x | y;
        letters.push(l);
        if store.one_step_accepts(s, l) {
            return Ok(Simulation {
                trace: Trace(letters),
                accepted_at: Some(round),
            });
        }
        s = store.successor(s, l);
    }
    Ok(Simulation {
        trace: Trace(letters),
        accepted_at: None,
    })
}

// ---- text format ----

/// Deterministic state numbering: breadth-first along strategy moves from
/// the initial state, then any remaining domain states in key order.
fn number_states(store: &mut Store, spec: &SpecInstance, st: &Strategy) -> Vec<StateKey> {
    let mut order = vec![st.init];
    let mut seen = std::collections::HashSet::from([st.init]);
    let mut i = 0;
    while i < order.len() {
        let s = order[i];
        i += 1;
        let Some(letters) = strategy_letters(spec, st, s) else {
            continue;
        };
        for l in letters {
            if store.one_step_accepts(s, l) {
                continue;
            }
            let t = store.successor(s, l);
            if st.outputs.contains_key(&t) && seen.insert(t) {
                order.push(t);
            }
        }
    }
    order.extend(st.outputs.keys().filter(|k| !seen.contains(k)).copied());
    order.retain(|k| st.outputs.contains_key(k));
    order
}

fn names(store: &Store, props: &[crate::formula::PropId]) -> String {
    props
        .iter()
        .map(|&p| store.formulas.prop_name(p))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Renders `st` as text:
///
/// ```text
/// type: moore
/// inputs: x
/// outputs: y
/// init: 0
/// state 0 = true U y
/// 0 : y ; !x -> acc, x -> acc
/// ```
///
/// Mealy outputs are written `!x => y, x => !y`.
pub fn write_strategy(store: &mut Store, spec: &SpecInstance, st: &Strategy) -> String {
    let order = number_states(store, spec, st);
    let id: HashMap<StateKey, usize> = order.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let mut out = String::new();
    let _ = writeln!(out, "type: {}", st.system_type);
    let _ = writeln!(out, "inputs: {}", names(store, &spec.inputs));
    let _ = writeln!(out, "outputs: {}", names(store, &spec.outputs));
    let _ = writeln!(out, "init: {}", id.get(&st.init).map_or("-".into(), |i| i.to_string()));
    for (i, &k) in order.iter().enumerate() {
        let _ = writeln!(out, "state {i} = {}", store.describe(k));
    }
    for (i, &k) in order.iter().enumerate() {
        let xs = spec.input_letters();
        let output = match &st.outputs[&k] {
            Output::Fixed(y) => render_cube(&store.formulas, &spec.outputs, *y),
            Output::PerInput(ys) => xs
                .iter()
                .zip(ys)
                .map(|(&x, &y)| {
                    format!(
                        "{} => {}",
                        render_cube(&store.formulas, &spec.inputs, x),
                        render_cube(&store.formulas, &spec.outputs, y)
                    )
                })
                .collect::<Vec<_>>()
                .join(", "),
        };
        let table = xs
            .iter()
            .map(|&x| {
                let y = st.respond(spec, k, x).unwrap_or(0);
                let l = x | y;
                let target = if store.one_step_accepts(k, l) {
                    "acc".to_string()
                } else {
                    let t = store.successor(k, l);
                    id.get(&t).map_or("?".into(), |j| j.to_string())
                };
                format!("{} -> {target}", render_cube(&store.formulas, &spec.inputs, x))
            })
            .collect::<Vec<_>>()
            .join(", ");
        let _ = writeln!(out, "{i} : {output} ; {table}");
    }
    out
}

/// Parses the format produced by [`write_strategy`] against `spec`. The
/// variable lists must match the specification exactly and each successor
/// table must agree with the automaton.
pub fn read_strategy(store: &mut Store, spec: &SpecInstance, text: &str) -> Result<Strategy> {
    let err = |line: usize, message: String| Error::StrategyFormat { line, message };
    let mut system_type = None;
    let mut init = None;
    let mut states: BTreeMap<usize, StateKey> = BTreeMap::new();
    let mut rows: Vec<(usize, usize, String, String)> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let n = n + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("type:") {
            system_type = Some(rest.trim().parse::<SystemType>().map_err(|e| err(n, e.to_string()))?);
        } else if let Some(rest) = line.strip_prefix("inputs:") {
            if rest.trim() != names(store, &spec.inputs) {
                return Err(err(n, format!("inputs `{}` do not match the partition", rest.trim())));
            }
        } else if let Some(rest) = line.strip_prefix("outputs:") {
            if rest.trim() != names(store, &spec.outputs) {
                return Err(err(n, format!("outputs `{}` do not match the partition", rest.trim())));
            }
        } else if let Some(rest) = line.strip_prefix("init:") {
            init = Some(rest.trim().parse::<usize>().map_err(|e| err(n, e.to_string()))?);
        } else if let Some(rest) = line.strip_prefix("state ") {
            let (id, formula) = rest
                .split_once('=')
                .ok_or_else(|| err(n, "expected `state ID = FORMULA`".into()))?;
            let id: usize = id.trim().parse().map_err(|e: std::num::ParseIntError| err(n, e.to_string()))?;
            let f = store.parse_declared(formula).map_err(|e| err(n, e.to_string()))?;
            states.insert(id, store.canonicalize(f));
        } else {
            let (id, rest) = line
                .split_once(':')
                .ok_or_else(|| err(n, format!("unexpected line `{line}`")))?;
            let id: usize = id.trim().parse().map_err(|e: std::num::ParseIntError| err(n, e.to_string()))?;
            let (output, table) = rest
                .split_once(';')
                .ok_or_else(|| err(n, "expected `ID : OUTPUT ; TABLE`".into()))?;
            rows.push((n, id, output.trim().to_string(), table.trim().to_string()));
        }
    }
    let system_type = system_type.ok_or_else(|| err(0, "missing `type:` line".into()))?;
    if system_type != spec.system_type {
        return Err(err(0, format!("strategy is {system_type}, specification is {}", spec.system_type)));
    }
    let init_id = init.ok_or_else(|| err(0, "missing `init:` line".into()))?;
    let init = *states
        .get(&init_id)
        .ok_or_else(|| err(0, format!("init refers to unknown state {init_id}")))?;

    let xs = spec.input_letters();
    let mut outputs = BTreeMap::new();
    let cube = |store: &Store, n: usize, text: &str, mask: u64| -> Result<Letter> {
        let l = crate::trace::parse_cube(&store.formulas, text).map_err(|e| err(n, e.to_string()))?;
        if l & !mask != 0 {
            return Err(err(n, format!("`{text}` mentions variables of the wrong kind")));
        }
        Ok(l)
    };
    for (n, id, output, table) in rows {
        let key = *states
            .get(&id)
            .ok_or_else(|| err(n, format!("row for unknown state {id}")))?;
        let out = match system_type {
            SystemType::Moore => Output::Fixed(cube(store, n, &output, spec.output_mask())?),
            SystemType::Mealy => {
                let mut ys = vec![None; xs.len()];
                for pair in output.split(',') {
                    let (x, y) = pair
                        .split_once("=>")
                        .ok_or_else(|| err(n, format!("expected `INPUTS => OUTPUTS`, got `{pair}`")))?;
                    let x = cube(store, n, x, spec.input_mask())?;
                    let y = cube(store, n, y, spec.output_mask())?;
                    let i = input_index(spec, x).expect("input cube within mask");
                    ys[i] = Some(y);
                }
                Output::PerInput(
                    ys.into_iter()
                        .collect::<Option<Vec<_>>>()
                        .ok_or_else(|| err(n, "some input assignment has no output".into()))?,
                )
            }
        };
        outputs.insert(key, out);
        let st = Strategy {
            system_type,
            init,
            outputs: BTreeMap::from([(key, outputs[&key].clone())]),
        };
        for entry in table.split(',').filter(|e| !e.trim().is_empty()) {
            let (x, target) = entry
                .split_once("->")
                .ok_or_else(|| err(n, format!("expected `INPUTS -> TARGET`, got `{entry}`")))?;
            let x = cube(store, n, x, spec.input_mask())?;
            let y = st.respond(spec, key, x).expect("row output defined");
            let l = x | y;
            let target = target.trim();
            let actual = if store.one_step_accepts(key, l) {
                "acc".to_string()
            } else {
                let t = store.successor(key, l);
                states
                    .iter()
                    .find(|(_, &k)| k == t)
                    .map_or("?".to_string(), |(i, _)| i.to_string())
            };
            if actual != target {
                return Err(err(
                    n,
                    format!("successor table says `{target}`, automaton says `{actual}`"),
                ));
            }
        }
    }
    Ok(Strategy {
        system_type,
        init,
        outputs,
    })
}

/// DOT rendering of the strategy-restricted graph.
pub fn strategy_dot(store: &mut Store, spec: &SpecInstance, st: &Strategy) -> String {
    let order = number_states(store, spec, st);
    let id: HashMap<StateKey, usize> = order.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let vars: Vec<_> = (0..store.num_props() as u32).collect();
    let mut out = String::from("digraph strategy {\n  rankdir=LR;\n  acc [shape=doublecircle, label=\"\"];\n");
    for (i, &k) in order.iter().enumerate() {
        let _ = writeln!(out, "  q{i} [label=\"{}\"];", store.describe(k).replace('"', "\\\""));
    }
    for (i, &k) in order.iter().enumerate() {
        for l in strategy_letters(spec, st, k).unwrap_or_default() {
            let label = render_cube(&store.formulas, &vars, l);
            if store.one_step_accepts(k, l) {
                let _ = writeln!(out, "  q{i} -> acc [label=\"{label}\", style=bold];");
            } else {
                let t = store.successor(k, l);
                match id.get(&t) {
                    Some(j) => {
                        let _ = writeln!(out, "  q{i} -> q{j} [label=\"{label}\"];");
                    }
                    None => {
                        let _ = writeln!(out, "  q{i} -> undefined [label=\"{label}\", color=red];");
                    }
                }
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::Partition;
    use crate::store::FoldMode;

    fn f_y() -> (Store, SpecInstance) {
        let p = Partition::new(["x"], ["y"]).unwrap();
        SpecInstance::load(FoldMode::default(), "F y", &p, SystemType::Moore).unwrap()
    }

    fn constant(store: &mut Store, spec: &SpecInstance, y: Letter) -> Strategy {
        let init = store.canonicalize(spec.formula);
        Strategy {
            system_type: SystemType::Moore,
            init,
            outputs: BTreeMap::from([(init, Output::Fixed(y))]),
        }
    }

    #[test]
    fn lookup_and_verify() {
        let (mut store, spec) = f_y();
        let good = constant(&mut store, &spec, spec.output_mask());
        assert_eq!(good.lookup(good.init), Some(&Output::Fixed(0b10)));
        assert!(good.lookup(crate::store::KEY_FF).is_none());
        assert_eq!(verify(&mut store, &spec, &good), Report::Pass);

        let bad = constant(&mut store, &spec, 0);
        match verify(&mut store, &spec, &bad) {
            Report::Fail(Witness::Lasso { stem, cycle }) => {
                assert!(stem.is_empty());
                assert_eq!(cycle, vec![(bad.init, 0)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_successor_is_reported() {
        let p = Partition::new(["x"], ["y"]).unwrap();
        let (mut store, spec) = SpecInstance::load(FoldMode::default(), "X y", &p, SystemType::Moore).unwrap();
        let st = constant(&mut store, &spec, 0);
        match verify(&mut store, &spec, &st) {
            Report::Fail(Witness::Undefined { path, .. }) => assert_eq!(path.len(), 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn simulation() {
        let (mut store, spec) = f_y();
        let good = constant(&mut store, &spec, 0b10);
        let sim = simulate(&mut store, &spec, &good, &[0b01]).unwrap();
        assert_eq!(sim.trace, Trace(vec![0b11]));
        assert_eq!(sim.accepted_at, Some(0));

        let bad = constant(&mut store, &spec, 0);
        let sim = simulate(&mut store, &spec, &bad, &[0, 0]).unwrap();
        assert_eq!(sim.accepted_at, None);
        assert_eq!(sim.trace.len(), 2);
    }

    #[test]
    fn text_round_trip() {
        let (mut store, spec) = f_y();
        let good = constant(&mut store, &spec, 0b10);
        let text = write_strategy(&mut store, &spec, &good);
        assert_eq!(
            text,
            "type: moore\ninputs: x\noutputs: y\ninit: 0\nstate 0 = true U y\n0 : y ; !x -> acc, x -> acc\n"
        );
        assert_eq!(read_strategy(&mut store, &spec, &text).unwrap(), good);

        let wrong = text.replace("inputs: x", "inputs: z");
        assert!(matches!(
            read_strategy(&mut store, &spec, &wrong),
            Err(Error::StrategyFormat { .. })
        ));
        let lying = text.replace("x -> acc\n", "x -> 0\n");
        assert!(read_strategy(&mut store, &spec, &lying).is_err());
    }
}

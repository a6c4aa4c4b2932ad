//! On-the-fly synthesis: depth-first forward exploration of the game built
//! lazily by progression, Tarjan SCC detection, and a local backward fixed
//! point on every SCC as soon as it is complete.
//!
//! Every explored state keeps one mark per letter, arranged as a grid of
//! groups (the first mover's choices) by minors (the second mover's
//! choices). Moore groups are outputs, Mealy groups are inputs. A mark moves
//! from `Unknown` to `Undet` to `Swin`/`Ewin` and never back.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{Formula, PropId};
use crate::game::{extract_strategies, solve_fixpoint, GameArena};
use crate::sat::{self, SatResult};
use crate::spec::{SpecInstance, SystemType};
use crate::store::{StateKey, Store, KEY_FF, KEY_TT};
use crate::strategy::{CounterStrategy, EnvMove, Output, Strategy};
use crate::tdfa::DEFAULT_STATE_BUDGET;
use crate::trace::{assignments, holds, Letter};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EngineOptions {
    /// Pick edges from shortest models of the current state.
    pub model_guided: bool,
    /// Use semantic entailment against known winning states.
    pub entailment: bool,
    /// Maximum number of explored states (also bounds each SAT query).
    pub budget: usize,
    pub deadline: Option<Instant>,
    /// Build a strategy or counter-strategy for the verdict.
    pub strategies: bool,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            model_guided: true,
            entailment: true,
            budget: DEFAULT_STATE_BUDGET,
            deadline: None,
            strategies: true,
        }
    }
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Realizable,
    #[default]
    Unrealizable,
}

impl Status {
    pub fn is_realizable(self) -> bool {
        self == Status::Realizable
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Realizable => "REALIZABLE",
            Status::Unrealizable => "UNREALIZABLE",
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub status: Status,
    pub states_expanded: usize,
    pub sccs: usize,
    pub sat_calls: usize,
    pub entailment_calls: usize,
    pub time_ms: u64,
}

/// Winning regions as far as the search determined them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Regions {
    pub swin: Vec<StateKey>,
    pub ewin: Vec<StateKey>,
    pub explored: Vec<StateKey>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub strategy: Option<Strategy>,
    pub counter_strategy: Option<CounterStrategy>,
    pub stats: Stats,
    pub regions: Regions,
}

fn now() -> Option<Instant> {
    // no monotonic clock on bare wasm
    if cfg!(target_arch = "wasm32") {
        None
    } else {
        Some(Instant::now())
    }
}

fn elapsed_ms(start: Option<Instant>) -> u64 {
    start.map_or(0, |t| t.elapsed().as_millis() as u64)
}

/// Decides realizability of `spec` on the fly.
pub fn synthesize(store: &mut Store, spec: &SpecInstance, opts: &EngineOptions) -> Result<Verdict> {
    let start = now();
    let previous = store.deadline();
    store.set_deadline(opts.deadline.or(previous));
    let result = run(store, spec, opts, start);
    store.set_deadline(previous);
    result
}

fn run(store: &mut Store, spec: &SpecInstance, opts: &EngineOptions, start: Option<Instant>) -> Result<Verdict> {
    let mut engine = Engine::new(store, spec, opts);
    engine.search()?;
    let status = engine.init_status();
    let regions = engine.regions();
    let mut stats = engine.stats.clone();
    stats.status = status;
    let entail_hits = engine.entail_hits;

    let (strategy, counter_strategy) = if !opts.strategies {
        (None, None)
    } else if entail_hits > 0 {
        // relaxed membership leaves no local witnesses, so replay without it
        let plain = EngineOptions {
            entailment: false,
            ..opts.clone()
        };
        let mut replay = Engine::new(engine.store, spec, &plain);
        replay.search()?;
        replay.extract(status)?
    } else {
        engine.extract(status)?
    };
    stats.time_ms = elapsed_ms(start);
    Ok(Verdict {
        status,
        strategy,
        counter_strategy,
        stats,
        regions,
    })
}

/// Decides realizability by building the whole automaton and solving the
/// game backwards.
pub fn synthesize_backward(store: &mut Store, spec: &SpecInstance, opts: &EngineOptions) -> Result<Verdict> {
    let start = now();
    let previous = store.deadline();
    store.set_deadline(opts.deadline.or(previous));
    let arena = GameArena::build(store, spec, opts.budget);
    store.set_deadline(previous);
    let arena = arena?;
    let w = solve_fixpoint(&arena);
    let status = if w.realizable(&arena) {
        Status::Realizable
    } else {
        Status::Unrealizable
    };
    let (pi, tau) = extract_strategies(&arena, &w);
    let regions = Regions {
        swin: (0..arena.num_states())
            .filter(|&s| w.swin_level[s].is_some())
            .map(|s| arena.keys[s])
            .collect(),
        ewin: (0..arena.num_states()).filter(|&s| w.ewin[s]).map(|s| arena.keys[s]).collect(),
        explored: arena.keys.clone(),
    };
    Ok(Verdict {
        status,
        strategy: (opts.strategies && status.is_realizable()).then_some(pi),
        counter_strategy: (opts.strategies && !status.is_realizable()).then_some(tau),
        stats: Stats {
            status,
            states_expanded: arena.num_states(),
            time_ms: elapsed_ms(start),
            ..Stats::default()
        },
        regions,
    })
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Mark {
    Unknown,
    Swin,
    Ewin,
    Undet,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Det {
    Open,
    Swin,
    Ewin,
}

/// Letter grid: `index = group * minors.len() + minor`.
struct Layout {
    system_type: SystemType,
    groups: Vec<Letter>,
    minors: Vec<Letter>,
    group_vars: Vec<PropId>,
    minor_vars: Vec<PropId>,
    group_mask: u64,
    minor_mask: u64,
}

impl Layout {
    fn new(spec: &SpecInstance) -> Self {
        let (gv, mv) = match spec.system_type {
            SystemType::Moore => (&spec.outputs, &spec.inputs),
            SystemType::Mealy => (&spec.inputs, &spec.outputs),
        };
        let mask = |vs: &[PropId]| vs.iter().fold(0u64, |m, &p| m | 1 << p);
        let (group_mask, minor_mask) = (mask(gv), mask(mv));
        Layout {
            system_type: spec.system_type,
            groups: assignments(group_mask).collect(),
            minors: assignments(minor_mask).collect(),
            group_vars: gv.clone(),
            minor_vars: mv.clone(),
            group_mask,
            minor_mask,
        }
    }

    fn len(&self) -> usize {
        self.groups.len() * self.minors.len()
    }

    fn group_of(&self, idx: usize) -> usize {
        idx / self.minors.len()
    }

    fn letter(&self, idx: usize) -> Letter {
        let n = self.minors.len();
        self.groups[idx / n] | self.minors[idx % n]
    }

    fn index(&self, l: Letter) -> usize {
        let g = self.groups.binary_search(&(l & self.group_mask)).expect("group letter");
        let m = self.minors.binary_search(&(l & self.minor_mask)).expect("minor letter");
        g * self.minors.len() + m
    }
}

struct Node {
    key: StateKey,
    det: Det,
    marks: Vec<Mark>,
    swins: Vec<u32>,
    ewins: Vec<u32>,
    undets: Vec<u32>,
    cursor: usize,
    /// Value of the engine epoch at the last full rescan.
    epoch: u64,
    dfn: usize,
    low: usize,
    on_stack: bool,
    witness: Option<Output>,
}

/// Entailment scan state for one key against the growing winner lists.
#[derive(Default, Clone, Copy)]
struct Scan {
    cursor: usize,
    hit: bool,
}

enum Step {
    Continue,
    Descend(usize, usize),
    Done,
}

struct Frame {
    node: usize,
    /// Grid index and child of the edge being explored.
    pending: Option<(usize, usize)>,
}

struct Engine<'a> {
    store: &'a mut Store,
    opts: &'a EngineOptions,
    layout: Layout,
    init: StateKey,
    nodes: Vec<Node>,
    index: HashMap<StateKey, usize>,
    preds: Vec<Vec<usize>>,
    swin_list: Vec<usize>,
    ewin_list: Vec<usize>,
    /// Bumped whenever a state is determined.
    epoch: u64,
    tarjan: Vec<usize>,
    next_dfn: usize,
    buffer: VecDeque<Letter>,
    entail_cache: HashMap<(StateKey, StateKey), bool>,
    by_swin: HashMap<StateKey, Scan>,
    to_ewin: HashMap<StateKey, Scan>,
    stats: Stats,
    entail_hits: usize,
}

impl<'a> Engine<'a> {
    fn new(store: &'a mut Store, spec: &SpecInstance, opts: &'a EngineOptions) -> Self {
        let init = store.canonicalize(spec.formula);
        Engine {
            store,
            opts,
            layout: Layout::new(spec),
            init,
            nodes: Vec::new(),
            index: HashMap::new(),
            preds: Vec::new(),
            swin_list: Vec::new(),
            ewin_list: Vec::new(),
            epoch: 0,
            tarjan: Vec::new(),
            next_dfn: 0,
            buffer: VecDeque::new(),
            entail_cache: HashMap::new(),
            by_swin: HashMap::new(),
            to_ewin: HashMap::new(),
            stats: Stats::default(),
            entail_hits: 0,
        }
    }

    fn init_status(&self) -> Status {
        match self.index.get(&self.init).map(|&n| self.nodes[n].det) {
            Some(Det::Swin) => Status::Realizable,
            _ => Status::Unrealizable,
        }
    }

    fn regions(&self) -> Regions {
        let pick = |d: Det| {
            self.nodes
                .iter()
                .filter(|n| n.det == d)
                .map(|n| n.key)
                .collect()
        };
        Regions {
            swin: pick(Det::Swin),
            ewin: pick(Det::Ewin),
            explored: self.nodes.iter().map(|n| n.key).collect(),
        }
    }

    // ---- forward search ----

    fn search(&mut self) -> Result<()> {
        let root = self.visit(self.init)?;
        let mut frames = vec![Frame {
            node: root,
            pending: None,
        }];
        while let Some(frame) = frames.last_mut() {
            let s = frame.node;
            if let Some((idx, c)) = frame.pending.take() {
                self.nodes[s].low = self.nodes[s].low.min(self.nodes[c].low);
                self.settle_edge(s, idx, c)?;
                self.buffer.clear();
            }
            self.store.check_deadline()?;
            match self.step(s)? {
                Step::Continue => {}
                Step::Descend(idx, c) => {
                    frames.last_mut().unwrap().pending = Some((idx, c));
                    frames.push(Frame {
                        node: c,
                        pending: None,
                    });
                }
                Step::Done => {
                    self.finish(s)?;
                    frames.pop();
                }
            }
        }
        Ok(())
    }

    fn step(&mut self, s: usize) -> Result<Step> {
        if self.check_status(s)? != Det::Open {
            return Ok(Step::Done);
        }
        let edge = if self.opts.model_guided {
            self.model_edge(s)?
        } else {
            self.next_edge(s)
        };
        let Some(idx) = edge else {
            if self.opts.model_guided && self.no_swin_potential(s) {
                self.insert_ewin(s);
            }
            return Ok(Step::Done);
        };
        let l = self.layout.letter(idx);
        let t = self.store.successor(self.nodes[s].key, l);
        match self.index.get(&t) {
            Some(&c) => {
                if self.nodes[c].on_stack {
                    self.nodes[s].low = self.nodes[s].low.min(self.nodes[c].dfn);
                }
                self.settle_edge(s, idx, c)?;
                self.buffer.clear();
                Ok(Step::Continue)
            }
            None => {
                let c = self.visit(t)?;
                Ok(Step::Descend(idx, c))
            }
        }
    }

    /// Marks the explored edge `(s, idx)` into child `c`.
    fn settle_edge(&mut self, s: usize, idx: usize, c: usize) -> Result<()> {
        if self.nodes[c].det == Det::Open {
            if self.nodes[s].marks[idx] == Mark::Unknown {
                self.set_mark(s, idx, Mark::Undet);
                self.preds[c].push(s);
            }
        } else if let Some(m) = self.classify(s, idx)? {
            self.set_mark(s, idx, m);
        }
        Ok(())
    }

    fn visit(&mut self, key: StateKey) -> Result<usize> {
        if self.nodes.len() >= self.opts.budget {
            return Err(Error::BudgetExceeded(self.opts.budget));
        }
        let n = self.nodes.len();
        let groups = self.layout.groups.len();
        self.nodes.push(Node {
            key,
            det: Det::Open,
            marks: vec![Mark::Unknown; self.layout.len()],
            swins: vec![0; groups],
            ewins: vec![0; groups],
            undets: vec![0; groups],
            cursor: 0,
            epoch: u64::MAX,
            dfn: self.next_dfn,
            low: self.next_dfn,
            on_stack: true,
            witness: None,
        });
        self.preds.push(Vec::new());
        self.next_dfn += 1;
        self.index.insert(key, n);
        self.tarjan.push(n);
        self.stats.states_expanded += 1;
        Ok(n)
    }

    fn finish(&mut self, s: usize) -> Result<()> {
        if self.nodes[s].low != self.nodes[s].dfn {
            return Ok(());
        }
        let mut scc = Vec::new();
        loop {
            let n = self.tarjan.pop().expect("root is on the stack");
            self.nodes[n].on_stack = false;
            scc.push(n);
            if n == s {
                break;
            }
        }
        self.stats.sccs += 1;
        self.backward_search(&scc)
    }

    /// Local fixed point on a completed SCC: promote predecessors of winning
    /// states while possible, then everything left belongs to the
    /// environment.
    fn backward_search(&mut self, scc: &[usize]) -> Result<()> {
        let members: HashSet<usize> = scc.iter().copied().collect();
        let mut current: Vec<usize> = scc
            .iter()
            .copied()
            .filter(|&n| self.nodes[n].det == Det::Swin)
            .collect();
        while !current.is_empty() {
            let candidates: BTreeSet<usize> = current
                .iter()
                .flat_map(|&t| self.preds[t].iter().copied())
                .filter(|u| members.contains(u) && self.nodes[*u].det == Det::Open)
                .collect();
            let mut promoted = Vec::new();
            for u in candidates {
                if self.system_winning(u)? {
                    promoted.push(u);
                }
            }
            current = promoted;
        }
        for &n in scc {
            if self.nodes[n].det == Det::Open {
                self.insert_ewin(n);
            }
        }
        Ok(())
    }

    // ---- marks and status ----

    fn set_mark(&mut self, s: usize, idx: usize, m: Mark) {
        let g = self.layout.group_of(idx);
        let node = &mut self.nodes[s];
        let old = node.marks[idx];
        if old == m {
            return;
        }
        for (mark, delta) in [(old, u32::MAX), (m, 1)] {
            let counter = match mark {
                Mark::Unknown => continue,
                Mark::Swin => &mut node.swins[g],
                Mark::Ewin => &mut node.ewins[g],
                Mark::Undet => &mut node.undets[g],
            };
            *counter = counter.wrapping_add(delta);
        }
        node.marks[idx] = m;
    }

    /// A group still worth exploring: in Moore games an output with no known
    /// losing input, in Mealy games an input with no known winning output.
    fn open_group(&self, s: usize, g: usize) -> bool {
        let node = &self.nodes[s];
        match self.layout.system_type {
            SystemType::Moore => node.ewins[g] == 0,
            SystemType::Mealy => node.swins[g] == 0,
        }
    }

    /// Final classification of one transition, if the current knowledge
    /// allows it.
    fn classify(&mut self, s: usize, idx: usize) -> Result<Option<Mark>> {
        let key = self.nodes[s].key;
        let l = self.layout.letter(idx);
        if self.store.one_step_accepts(key, l) {
            return Ok(Some(Mark::Swin));
        }
        let t = self.store.successor(key, l);
        if self.known_swin(t)? {
            return Ok(Some(Mark::Swin));
        }
        if t == key || self.known_ewin(t)? {
            return Ok(Some(Mark::Ewin));
        }
        Ok(None)
    }

    /// Reclassifies the pending transitions of `s` if anything was determined
    /// since the last look.
    fn rescan(&mut self, s: usize) -> Result<()> {
        if self.nodes[s].epoch == self.epoch {
            return Ok(());
        }
        let epoch = self.epoch;
        for idx in 0..self.layout.len() {
            if !matches!(self.nodes[s].marks[idx], Mark::Unknown | Mark::Undet)
                || !self.open_group(s, self.layout.group_of(idx))
            {
                continue;
            }
            if let Some(m) = self.classify(s, idx)? {
                self.set_mark(s, idx, m);
            }
        }
        self.nodes[s].epoch = epoch;
        Ok(())
    }

    fn check_status(&mut self, s: usize) -> Result<Det> {
        if self.system_winning(s)? {
            return Ok(Det::Swin);
        }
        if self.environment_winning(s)? {
            return Ok(Det::Ewin);
        }
        Ok(Det::Open)
    }

    fn system_winning(&mut self, s: usize) -> Result<bool> {
        match self.nodes[s].det {
            Det::Swin => return Ok(true),
            Det::Ewin => return Ok(false),
            Det::Open => {}
        }
        if self.opts.entailment && self.entailed_by_swin(self.nodes[s].key)? {
            self.entail_hits += 1;
            self.insert_swin(s, None);
            return Ok(true);
        }
        self.rescan(s)?;
        let node = &self.nodes[s];
        let full = self.layout.minors.len() as u32;
        let witness = match self.layout.system_type {
            SystemType::Moore => node
                .swins
                .iter()
                .position(|&c| c == full)
                .map(|g| Output::Fixed(self.layout.groups[g])),
            SystemType::Mealy => {
                if node.swins.iter().all(|&c| c > 0) {
                    let n = self.layout.minors.len();
                    Some(Output::PerInput(
                        (0..self.layout.groups.len())
                            .map(|g| {
                                let m = (0..n)
                                    .find(|&m| node.marks[g * n + m] == Mark::Swin)
                                    .unwrap();
                                self.layout.minors[m]
                            })
                            .collect(),
                    ))
                } else {
                    None
                }
            }
        };
        match witness {
            Some(w) => {
                self.insert_swin(s, Some(w));
                Ok(true)
            }
            None => Ok(false),
        }
    }

    fn environment_winning(&mut self, s: usize) -> Result<bool> {
        match self.nodes[s].det {
            Det::Swin => return Ok(false),
            Det::Ewin => return Ok(true),
            Det::Open => {}
        }
        if self.opts.entailment && self.entails_ewin(self.nodes[s].key)? {
            self.entail_hits += 1;
            self.insert_ewin(s);
            return Ok(true);
        }
        self.rescan(s)?;
        let node = &self.nodes[s];
        let full = self.layout.minors.len() as u32;
        let wins = match self.layout.system_type {
            SystemType::Moore => node.ewins.iter().all(|&c| c > 0),
            SystemType::Mealy => node.ewins.contains(&full),
        };
        if wins {
            self.insert_ewin(s);
        }
        Ok(wins)
    }

    fn insert_swin(&mut self, s: usize, witness: Option<Output>) {
        debug_assert_eq!(self.nodes[s].det, Det::Open);
        self.nodes[s].det = Det::Swin;
        self.nodes[s].witness = witness;
        self.swin_list.push(s);
        self.epoch += 1;
    }

    fn insert_ewin(&mut self, s: usize) {
        debug_assert_eq!(self.nodes[s].det, Det::Open);
        self.nodes[s].det = Det::Ewin;
        self.ewin_list.push(s);
        self.epoch += 1;
    }

    // ---- membership, possibly relaxed by entailment ----

    fn det_of(&self, key: StateKey) -> Option<Det> {
        self.index.get(&key).map(|&n| self.nodes[n].det)
    }

    fn known_swin(&mut self, t: StateKey) -> Result<bool> {
        if self.det_of(t) == Some(Det::Swin) {
            return Ok(true);
        }
        if self.opts.entailment && self.entailed_by_swin(t)? {
            self.entail_hits += 1;
            return Ok(true);
        }
        Ok(false)
    }

    fn known_ewin(&mut self, t: StateKey) -> Result<bool> {
        if self.det_of(t) == Some(Det::Ewin) {
            return Ok(true);
        }
        if self.opts.entailment && self.entails_ewin(t)? {
            self.entail_hits += 1;
            return Ok(true);
        }
        Ok(false)
    }

    /// `f => g` on representatives, cached per ordered pair.
    fn entails(&mut self, f: StateKey, g: StateKey) -> Result<bool> {
        if f == g || f == KEY_FF || g == KEY_TT {
            return Ok(true);
        }
        if let Some(&v) = self.entail_cache.get(&(f, g)) {
            return Ok(v);
        }
        self.stats.entailment_calls += 1;
        let (rf, rg) = (self.store.rep(f), self.store.rep(g));
        let v = sat::entails(self.store, rf, rg, self.opts.budget)?;
        self.entail_cache.insert((f, g), v);
        Ok(v)
    }

    /// Some known system-winning state entails `t`.
    fn entailed_by_swin(&mut self, t: StateKey) -> Result<bool> {
        let mut scan = self.by_swin.get(&t).copied().unwrap_or_default();
        while !scan.hit && scan.cursor < self.swin_list.len() {
            let w = self.nodes[self.swin_list[scan.cursor]].key;
            scan.hit = self.entails(w, t)?;
            scan.cursor += 1;
        }
        self.by_swin.insert(t, scan);
        Ok(scan.hit)
    }

    /// `t` entails some known environment-winning state.
    fn entails_ewin(&mut self, t: StateKey) -> Result<bool> {
        let mut scan = self.to_ewin.get(&t).copied().unwrap_or_default();
        while !scan.hit && scan.cursor < self.ewin_list.len() {
            let w = self.nodes[self.ewin_list[scan.cursor]].key;
            scan.hit = self.entails(t, w)?;
            scan.cursor += 1;
        }
        self.to_ewin.insert(t, scan);
        Ok(scan.hit)
    }

    // ---- edge selection ----

    /// First unexplored transition in an open group, in grid order.
    fn next_edge(&mut self, s: usize) -> Option<usize> {
        let mut idx = self.nodes[s].cursor;
        while idx < self.layout.len() {
            if self.nodes[s].marks[idx] == Mark::Unknown && self.open_group(s, self.layout.group_of(idx)) {
                self.nodes[s].cursor = idx;
                return Some(idx);
            }
            idx += 1;
        }
        self.nodes[s].cursor = idx;
        None
    }

    fn cube(&mut self, vars: &[PropId], l: Letter) -> Formula {
        let lits: Vec<Formula> = vars
            .iter()
            .map(|&p| self.store.formulas.lit(p, holds(l, p)))
            .collect();
        self.store.formulas.and_all(lits)
    }

    /// Present-time constraint excluding closed groups and the transitions
    /// already resolved inside open ones.
    fn edge_constraint(&mut self, s: usize) -> Formula {
        let n = self.layout.minors.len();
        let resolved = match self.layout.system_type {
            SystemType::Moore => Mark::Swin,
            SystemType::Mealy => Mark::Ewin,
        };
        let mut parts = Vec::new();
        for g in 0..self.layout.groups.len() {
            let gl = self.layout.groups[g];
            let group_vars = self.layout.group_vars.clone();
            let gc = self.cube(&group_vars, gl);
            let not_g = self.store.formulas.negate(gc);
            if !self.open_group(s, g) {
                parts.push(not_g);
                continue;
            }
            let blocked: Vec<Letter> = (0..n)
                .filter(|&m| matches!(self.nodes[s].marks[g * n + m], Mark::Undet) || self.nodes[s].marks[g * n + m] == resolved)
                .map(|m| self.layout.minors[m])
                .collect();
            if blocked.is_empty() {
                continue;
            }
            let minor_vars = self.layout.minor_vars.clone();
            let mut negs = Vec::new();
            for ml in blocked {
                let c = self.cube(&minor_vars, ml);
                negs.push(self.store.formulas.negate(c));
            }
            let all = self.store.formulas.and_all(negs);
            parts.push(self.store.formulas.or(not_g, all));
        }
        self.store.formulas.and_all(parts)
    }

    /// Next letter of the shared model buffer, refilled from a shortest
    /// model of the state under its edge constraint.
    fn model_edge(&mut self, s: usize) -> Result<Option<usize>> {
        loop {
            let fresh = self.buffer.is_empty();
            if fresh {
                let c = self.edge_constraint(s);
                let rep = self.store.rep(self.nodes[s].key);
                let q = self.store.formulas.and(rep, c);
                self.stats.sat_calls += 1;
                match sat::min_model(self.store, q, self.opts.budget)? {
                    SatResult::Sat(trace) => self.buffer.extend(trace.0),
                    SatResult::Unsat => return Ok(None),
                }
            }
            let l = self.buffer.pop_front().expect("models are non-empty");
            let idx = self.layout.index(l);
            if self.nodes[s].marks[idx] == Mark::Unknown && self.open_group(s, self.layout.group_of(idx)) {
                return Ok(Some(idx));
            }
            debug_assert!(!fresh, "constraint admitted a resolved transition");
            self.buffer.clear();
        }
    }

    /// Called when no model remains: every transition still unknown in an
    /// open group cannot lead to acceptance any more.
    fn no_swin_potential(&self, s: usize) -> bool {
        let node = &self.nodes[s];
        let full = self.layout.minors.len() as u32;
        match self.layout.system_type {
            // no output whose inputs are all resolved as winning or pending
            SystemType::Moore => !(0..self.layout.groups.len())
                .any(|g| self.open_group(s, g) && node.swins[g] + node.undets[g] == full),
            // some input whose outputs have nothing pending
            SystemType::Mealy => (0..self.layout.groups.len())
                .any(|g| self.open_group(s, g) && node.undets[g] == 0),
        }
    }

    // ---- strategies ----

    fn extract(&mut self, status: Status) -> Result<(Option<Strategy>, Option<CounterStrategy>)> {
        debug_assert_eq!(self.init_status(), status);
        Ok(match status {
            Status::Realizable => (Some(self.strategy()), None),
            Status::Unrealizable => (None, Some(self.counter_strategy()?)),
        })
    }

    fn strategy(&mut self) -> Strategy {
        let outputs: BTreeMap<StateKey, Output> = self
            .swin_list
            .iter()
            .filter_map(|&n| Some((self.nodes[n].key, self.nodes[n].witness.clone()?)))
            .collect();
        Strategy {
            system_type: self.layout.system_type,
            init: self.init,
            outputs,
        }
    }

    /// Environment moves closed under play from the initial state. Targets
    /// are the state itself, known environment states, or unexplored states
    /// without any model.
    fn counter_strategy(&mut self) -> Result<CounterStrategy> {
        let mut moves = BTreeMap::new();
        let mut unsat: HashMap<StateKey, bool> = HashMap::new();
        let mut queue = VecDeque::from([self.init]);
        let mut seen = HashSet::from([self.init]);
        let x_letters = match self.layout.system_type {
            SystemType::Moore => self.layout.minors.clone(),
            SystemType::Mealy => self.layout.groups.clone(),
        };
        let y_letters = match self.layout.system_type {
            SystemType::Moore => self.layout.groups.clone(),
            SystemType::Mealy => self.layout.minors.clone(),
        };
        while let Some(s) = queue.pop_front() {
            let known = self.det_of(s) == Some(Det::Ewin);
            let mut good = |e: &mut Self, l: Letter| -> Result<bool> {
                if !known {
                    return Ok(true);
                }
                if e.store.one_step_accepts(s, l) {
                    return Ok(false);
                }
                let t = e.store.successor(s, l);
                if t == s {
                    return Ok(true);
                }
                match e.det_of(t) {
                    Some(d) => Ok(d == Det::Ewin),
                    None => {
                        if let Some(&u) = unsat.get(&t) {
                            return Ok(u);
                        }
                        let rep = e.store.rep(t);
                        let u = !sat::is_sat(e.store, rep, e.opts.budget)?;
                        unsat.insert(t, u);
                        Ok(u)
                    }
                }
            };
            let (mv, letters) = match self.layout.system_type {
                SystemType::Moore => {
                    let mut xs = Vec::new();
                    for &y in &y_letters {
                        let mut found = None;
                        for &x in &x_letters {
                            if good(self, x | y)? {
                                found = Some(x);
                                break;
                            }
                        }
                        xs.push(found.expect("environment state has a trapping input"));
                    }
                    let letters: Vec<Letter> = xs.iter().zip(&y_letters).map(|(x, y)| x | y).collect();
                    (EnvMove::PerOutput(xs), letters)
                }
                SystemType::Mealy => {
                    let mut found = None;
                    'x: for &x in &x_letters {
                        for &y in &y_letters {
                            if !good(self, x | y)? {
                                continue 'x;
                            }
                        }
                        found = Some(x);
                        break;
                    }
                    let x = found.expect("environment state has a trapping input");
                    (EnvMove::Fixed(x), y_letters.iter().map(|y| x | y).collect())
                }
            };
            moves.insert(s, mv);
            for l in letters {
                let t = self.store.successor(s, l);
                if seen.insert(t) {
                    queue.push_back(t);
                }
            }
        }
        Ok(CounterStrategy {
            system_type: self.layout.system_type,
            init: self.init,
            moves,
        })
    }
}

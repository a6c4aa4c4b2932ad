//! Browser bindings. Every entry point takes plain strings and returns JSON
//! (or DOT) so the page needs no generated type glue.

use ltlf_synth::engine::{synthesize, EngineOptions};
use ltlf_synth::sat::{min_model, SatResult};
use ltlf_synth::strategy::{strategy_dot, write_strategy};
use ltlf_synth::tdfa::build_tdfa;
use ltlf_synth::trace::render_cube;
use ltlf_synth::{FoldMode, Partition, SpecInstance, Stats, Status, Store, SystemType};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Keeps a runaway formula from freezing the tab.
pub const STATE_BUDGET: usize = 20_000;

#[derive(Serialize)]
pub struct Translation {
    pub states: usize,
    pub dot: String,
}

#[derive(Serialize)]
pub struct SynthResult {
    pub status: Status,
    pub stats: Stats,
    /// Strategy file text when realizable.
    pub strategy: Option<String>,
    pub strategy_dot: Option<String>,
}

#[derive(Serialize)]
pub struct SatAnswer {
    pub sat: bool,
    /// One rendered letter per step of a shortest model.
    pub model: Vec<String>,
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn words(s: &str) -> Vec<&str> {
    s.split(|c: char| c == ',' || c.is_whitespace()).filter(|w| !w.is_empty()).collect()
}

pub fn translate_formula(formula: &str) -> Result<Translation, String> {
    let mut store = Store::new(FoldMode::default());
    let f = store.parse(formula).map_err(err)?;
    let tdfa = build_tdfa(&mut store, f, STATE_BUDGET).map_err(err)?;
    Ok(Translation {
        states: tdfa.num_states(),
        dot: tdfa.export_dot(&store),
    })
}

pub fn synth_spec(formula: &str, inputs: &str, outputs: &str, system_type: &str, model_guided: bool, entailment: bool) -> Result<SynthResult, String> {
    let ty: SystemType = system_type.parse().map_err(err)?;
    let part = Partition::new(words(inputs), words(outputs)).map_err(err)?;
    let (mut store, spec) = SpecInstance::load(FoldMode::default(), formula, &part, ty).map_err(err)?;
    let opts = EngineOptions {
        model_guided,
        entailment,
        budget: STATE_BUDGET,
        ..EngineOptions::default()
    };
    let v = synthesize(&mut store, &spec, &opts).map_err(err)?;
    let (strategy, dot) = match &v.strategy {
        Some(st) => (
            Some(write_strategy(&mut store, &spec, st)),
            Some(strategy_dot(&mut store, &spec, st)),
        ),
        None => (None, None),
    };
    Ok(SynthResult {
        status: v.status,
        stats: v.stats,
        strategy,
        strategy_dot: dot,
    })
}

pub fn sat_formula(formula: &str) -> Result<SatAnswer, String> {
    let mut store = Store::new(FoldMode::default());
    let f = store.parse(formula).map_err(err)?;
    let vars: Vec<u32> = (0..store.num_props() as u32).collect();
    Ok(match min_model(&mut store, f, STATE_BUDGET).map_err(err)? {
        SatResult::Sat(t) => SatAnswer {
            sat: true,
            model: t.letters().iter().map(|&l| render_cube(&store.formulas, &vars, l)).collect(),
        },
        SatResult::Unsat => SatAnswer {
            sat: false,
            model: Vec::new(),
        },
    })
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsError> {
    let v = r.map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&v).map_err(|e| JsError::new(&e.to_string()))
}

/// `{states, dot}` for the automaton of `formula`.
#[wasm_bindgen]
pub fn translate(formula: &str) -> Result<String, JsError> {
    to_js(translate_formula(formula))
}

/// `{status, stats, strategy, strategy_dot}`. Inputs and outputs are
/// comma- or space-separated names; `system_type` is `moore` or `mealy`.
#[wasm_bindgen]
pub fn synth(formula: &str, inputs: &str, outputs: &str, system_type: &str, model_guided: bool, entailment: bool) -> Result<String, JsError> {
    to_js(synth_spec(formula, inputs, outputs, system_type, model_guided, entailment))
}

/// `{sat, model}` with a shortest model.
#[wasm_bindgen]
pub fn sat(formula: &str) -> Result<String, JsError> {
    to_js(sat_formula(formula))
}

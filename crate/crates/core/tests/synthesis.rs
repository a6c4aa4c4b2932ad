//! On-the-fly engine against the backward oracle on larger formulas than the
//! acceptance corpus, plus hand-written families with long cycles.

mod common;

use common::Gen;
use ltlf_synth::engine::{synthesize, synthesize_backward};
use ltlf_synth::game::{solve_fixpoint, GameArena};
use ltlf_synth::strategy::{verify, verify_counter};
use ltlf_synth::{EngineOptions, Error, FoldMode, Partition, SpecInstance, Status, SystemType};
use rand::Rng;

fn options() -> Vec<EngineOptions> {
    let mut v = Vec::new();
    for m in [false, true] {
        for e in [false, true] {
            v.push(EngineOptions {
                model_guided: m,
                entailment: e,
                ..EngineOptions::default()
            });
        }
    }
    v
}

/// Runs every option set and checks verdict, regions and evidence against
/// the oracle. Returns the oracle verdict and arena size.
fn agree(text: &str, part: &Partition, ty: SystemType, fold: FoldMode) -> (Status, usize) {
    let (mut store, spec) = SpecInstance::load(fold, text, part, ty).unwrap();
    let arena = GameArena::build(&mut store, &spec, 100_000).unwrap();
    let w = solve_fixpoint(&arena);
    let oracle = if w.realizable(&arena) {
        Status::Realizable
    } else {
        Status::Unrealizable
    };
    let swin: std::collections::HashMap<_, _> = arena
        .keys
        .iter()
        .enumerate()
        .map(|(i, &k)| (k, w.swin_level[i].is_some()))
        .collect();
    for opts in options() {
        let v = synthesize(&mut store, &spec, &opts).unwrap();
        assert_eq!(v.status, oracle, "`{text}` {ty} {fold:?} {opts:?}");
        for k in &v.regions.swin {
            assert_eq!(swin.get(k), Some(&true), "`{text}` {opts:?}: unsound swin");
        }
        for k in &v.regions.ewin {
            assert_eq!(swin.get(k), Some(&false), "`{text}` {opts:?}: unsound ewin");
        }
        match oracle {
            Status::Realizable => {
                let st = v.strategy.expect("strategy");
                assert!(verify(&mut store, &spec, &st).passed(), "`{text}` {opts:?}");
            }
            Status::Unrealizable => {
                let cs = v.counter_strategy.expect("counter-strategy");
                assert!(verify_counter(&mut store, &spec, &cs).passed(), "`{text}` {opts:?}");
            }
        }
    }
    (oracle, arena.num_states())
}

#[test]
fn random_larger_specs() {
    let mut gen = Gen::new(11);
    let names = ["x0", "x1", "y0", "y1"];
    let mut sizes = Vec::new();
    let mut realizable = 0;
    for _ in 0..150 {
        let nx = gen.rng.gen_range(1..=2);
        let ny = gen.rng.gen_range(1..=2);
        let part = Partition::new(names[..nx].iter().copied(), names[2..2 + ny].iter().copied()).unwrap();
        let props: Vec<&str> = part.inputs.iter().chain(&part.outputs).map(String::as_str).collect();
        let mut probe = ltlf_synth::Store::with_props(FoldMode::default(), &props).unwrap();
        let depth = gen.rng.gen_range(3..=6);
        let (text, _) = gen.formula(&mut probe, &props, 12, depth);
        for ty in [SystemType::Moore, SystemType::Mealy] {
            for fold in [FoldMode::Complementary, FoldMode::Strict] {
                let (status, n) = agree(&text, &part, ty, fold);
                sizes.push(n);
                realizable += status.is_realizable() as usize;
            }
        }
    }
    // the corpus must reach past trivial arenas to mean anything
    assert!(sizes.iter().any(|&n| n >= 10), "largest arena {:?}", sizes.iter().max());
    assert!(realizable > 0 && realizable < sizes.len());
}

#[test]
fn families_with_cycles() {
    let p1 = Partition::new(["x"], ["y"]).unwrap();
    let p2 = Partition::new(["a", "b"], ["g", "h"]).unwrap();
    let cases: &[(&str, &Partition)] = &[
        ("G (x -> F y)", &p1),
        ("F x -> F (x & y)", &p1),
        ("G (x -> X y) & F x", &p1),
        ("(x U y) | G x", &p1),
        ("G F y", &p1),
        ("F G x", &p1),
        ("(F x & F !x) -> F (y & X y)", &p1),
        ("G (x -> N (y | x))", &p1),
        ("X X X y & G (y -> X !y)", &p1),
        ("G ((a -> X g) & (b -> X h)) & F (a & b)", &p2),
        ("G (a -> F g) & G (b -> F h) & G !(g & h)", &p2),
        ("F (g & h & X (!g & !h)) & G (a -> !g)", &p2),
        ("(a U b) -> F (g U h)", &p2),
        ("G (a <-> X g) & G (b <-> X X h)", &p2),
        ("F a R (g | X h)", &p2),
    ];
    for (text, part) in cases {
        for ty in [SystemType::Moore, SystemType::Mealy] {
            for fold in [FoldMode::Complementary, FoldMode::Strict] {
                agree(text, part, ty, fold);
            }
        }
    }
}

#[test]
fn backward_pipeline_matches_engine() {
    let p = Partition::new(["x"], ["y"]).unwrap();
    for text in ["G (x -> F y)", "x", "F G x", "(x & y) | (!x & !y)"] {
        for ty in [SystemType::Moore, SystemType::Mealy] {
            let (mut store, spec) = SpecInstance::load(FoldMode::default(), text, &p, ty).unwrap();
            let b = synthesize_backward(&mut store, &spec, &EngineOptions::default()).unwrap();
            let f = synthesize(&mut store, &spec, &EngineOptions::default()).unwrap();
            assert_eq!(b.status, f.status, "{text} {ty}");
            if let Some(st) = &b.strategy {
                assert!(verify(&mut store, &spec, st).passed());
            }
            if let Some(cs) = &b.counter_strategy {
                assert!(verify_counter(&mut store, &spec, cs).passed());
            }
        }
    }
}

#[test]
fn early_exit_explores_less_than_the_automaton() {
    // the first output already wins; nothing behind X X X needs exploring
    let p = Partition::new(["x"], ["y"]).unwrap();
    let text = "y | X X X (x U (x & X x))";
    let (mut store, spec) = SpecInstance::load(FoldMode::default(), text, &p, SystemType::Moore).unwrap();
    let v = synthesize(&mut store, &spec, &EngineOptions::default()).unwrap();
    let arena = GameArena::build(&mut store, &spec, 1000).unwrap();
    assert_eq!(v.status, Status::Realizable);
    assert!(v.stats.states_expanded < arena.num_states());
}

#[test]
fn deadline_and_budget() {
    let p = Partition::new(["x"], ["y"]).unwrap();
    let (mut store, spec) =
        SpecInstance::load(FoldMode::default(), "G (x -> X X X X y) & F G !x", &p, SystemType::Moore).unwrap();
    let opts = EngineOptions {
        deadline: Some(std::time::Instant::now()),
        ..EngineOptions::default()
    };
    assert_eq!(synthesize(&mut store, &spec, &opts), Err(Error::Timeout));
    let opts = EngineOptions {
        budget: 1,
        ..EngineOptions::default()
    };
    assert_eq!(synthesize(&mut store, &spec, &opts), Err(Error::BudgetExceeded(1)));
    // the store is still usable afterwards
    assert!(synthesize(&mut store, &spec, &EngineOptions::default()).is_ok());
}

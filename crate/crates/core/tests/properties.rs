mod common;

use common::Gen;
use ltlf_synth::engine::synthesize;
use ltlf_synth::game::GameArena;
use ltlf_synth::strategy::{read_strategy, write_strategy};
use ltlf_synth::{eval_trace, EngineOptions, FoldMode, Partition, SpecInstance, Store, SystemType, Trace};
use proptest::prelude::*;

const PROPS: [&str; 2] = ["a", "b"];

fn store() -> Store {
    Store::with_props(FoldMode::default(), &PROPS).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn negation_is_an_involution_and_flips_truth(seed in any::<u64>(), len in 1usize..5) {
        let mut gen = Gen::new(seed);
        let mut s = store();
        let (_, f) = gen.formula(&mut s, &PROPS, 10, 4);
        let nf = s.formulas.negate(f);
        prop_assert_eq!(s.formulas.negate(nf), f);
        let t = gen.trace(2, len);
        prop_assert_eq!(
            eval_trace(&s.formulas, nf, &t).unwrap(),
            !eval_trace(&s.formulas, f, &t).unwrap()
        );
    }

    #[test]
    fn keys_ignore_boolean_rearrangement(seed in any::<u64>(), strict in any::<bool>()) {
        let fold = if strict { FoldMode::Strict } else { FoldMode::Complementary };
        let mut gen = Gen::new(seed);
        let mut s = Store::with_props(fold, &PROPS).unwrap();
        let (_, f) = gen.formula(&mut s, &PROPS, 8, 3);
        let (_, g) = gen.formula(&mut s, &PROPS, 8, 3);
        let fg = s.formulas.and(f, g);
        let gf = s.formulas.and(g, f);
        prop_assert_eq!(s.canonicalize(fg), s.canonicalize(gf));
        // absorption: f | (f & g) ~ f
        let absorbed = s.formulas.or(f, fg);
        prop_assert_eq!(s.canonicalize(absorbed), s.canonicalize(f));
        // distributivity
        let (_, h) = gen.formula(&mut s, &PROPS, 8, 2);
        let gh = s.formulas.or(g, h);
        let lhs = s.formulas.and(f, gh);
        let fh = s.formulas.and(f, h);
        let rhs = s.formulas.or(fg, fh);
        prop_assert_eq!(s.canonicalize(lhs), s.canonicalize(rhs));
    }

    #[test]
    fn successor_classes_respect_semantics(seed in any::<u64>(), len in 2usize..6) {
        let mut gen = Gen::new(seed);
        let mut s = store();
        let (_, f) = gen.formula(&mut s, &PROPS, 10, 4);
        let t = gen.trace(2, len);
        let mut k = s.canonicalize(f);
        for &l in &t.letters()[..len - 1] {
            k = s.successor(k, l);
        }
        let last = *t.letters().last().unwrap();
        prop_assert_eq!(s.one_step_accepts(k, last), eval_trace(&s.formulas, f, &t).unwrap());
    }

    #[test]
    fn trace_text_round_trips(seed in any::<u64>(), len in 1usize..6) {
        let mut gen = Gen::new(seed);
        let s = store();
        let t = gen.trace(2, len);
        let text = t.render(&s.formulas, &[0, 1]);
        prop_assert_eq!(Trace::parse(&s.formulas, &text).unwrap(), t);
    }

    #[test]
    fn cpre_duality(seed in any::<u64>(), n in 1usize..6, mealy in any::<bool>()) {
        use rand::Rng;
        let mut gen = Gen::new(seed);
        let delta: Vec<Vec<usize>> = (0..n).map(|_| (0..4).map(|_| gen.rng.gen_range(0..n)).collect()).collect();
        let accepting: Vec<Vec<bool>> = (0..n).map(|_| (0..4).map(|_| gen.rng.gen_bool(0.3)).collect()).collect();
        let ty = if mealy { SystemType::Mealy } else { SystemType::Moore };
        let arena = GameArena::new(delta, accepting, 0, 0b01, 0b10, ty);
        let d: Vec<bool> = (0..n).map(|_| gen.rng.gen_bool(0.5)).collect();
        let complement: Vec<bool> = d.iter().map(|b| !b).collect();
        let lhs = arena.cpre_system(&complement);
        let rhs: Vec<bool> = arena.cpre_env(&d).into_iter().map(|b| !b).collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn strategy_files_round_trip(seed in any::<u64>(), mealy in any::<bool>()) {
        let mut gen = Gen::new(seed);
        let props = ["x", "y"];
        let part = Partition::new(["x"], ["y"]).unwrap();
        let mut probe = Store::with_props(FoldMode::default(), &props).unwrap();
        let (text, _) = gen.formula(&mut probe, &props, 10, 4);
        let ty = if mealy { SystemType::Mealy } else { SystemType::Moore };
        let (mut s, spec) = SpecInstance::load(FoldMode::default(), &text, &part, ty).unwrap();
        let v = synthesize(&mut s, &spec, &EngineOptions::default()).unwrap();
        if let Some(st) = v.strategy {
            let file = write_strategy(&mut s, &spec, &st);
            let back = read_strategy(&mut s, &spec, &file).unwrap();
            prop_assert_eq!(&back.init, &st.init);
            for (k, o) in &back.outputs {
                prop_assert_eq!(st.outputs.get(k), Some(o));
            }
        }
    }
}

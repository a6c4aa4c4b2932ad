use ltlf_synth_web::{sat, sat_formula, synth, synth_spec, translate, translate_formula};

#[test]
fn translate_returns_dot() {
    let t = translate_formula("a U b").unwrap();
    assert!(t.states >= 2);
    assert!(t.dot.starts_with("digraph"));
    let json: serde_json::Value = serde_json::from_str(&translate("a U b").unwrap()).unwrap();
    assert_eq!(json["states"], t.states);
}

#[test]
fn synth_reports_verdict_and_strategy() {
    let r = synth_spec("G (req -> F grant)", "req", "grant", "moore", true, true).unwrap();
    assert!(r.status.is_realizable());
    assert!(r.strategy.unwrap().starts_with("type: moore"));
    assert!(r.strategy_dot.unwrap().starts_with("digraph"));

    let json: serde_json::Value = serde_json::from_str(&synth("G (x <-> y)", "x", "y", "moore", false, false).unwrap()).unwrap();
    assert_eq!(json["status"], "Unrealizable");
    assert!(json["strategy"].is_null());
    assert!(json["stats"]["states_expanded"].is_u64());

    let r = synth_spec("G (x <-> y)", "x", "y", "mealy", true, false).unwrap();
    assert!(r.status.is_realizable());
}

#[test]
fn synth_accepts_space_or_comma_lists() {
    let r = synth_spec("G ((a -> g) & (b -> h))", "a, b", "g h", "mealy", true, true).unwrap();
    assert!(r.status.is_realizable());
}

#[test]
fn sat_gives_a_shortest_model() {
    let a = sat_formula("F b & G (b -> X !b)").unwrap();
    assert!(a.sat);
    assert_eq!(a.model, vec!["b".to_string(), "!b".to_string()]);
    let json: serde_json::Value = serde_json::from_str(&sat("a & !a").unwrap()).unwrap();
    assert_eq!(json["sat"], false);
}

#[test]
fn bad_input_is_an_error_not_a_panic() {
    assert!(translate_formula("G (").is_err());
    assert!(synth_spec("x", "x", "y", "turing", true, true).is_err());
    assert!(synth_spec("z", "x", "y", "moore", true, true).is_err());
    assert!(synth_spec("x", "x", "x", "moore", true, true).is_err());
    assert!(sat_formula(")").is_err());
}

//! Seeded random formulas and brute-force helpers shared by the
//! integration tests.
#![allow(dead_code)]

use std::collections::HashSet;

use ltlf_synth::{Formula, Letter, Store, Trace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Gen {
    pub rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Random formula text in the surface syntax. Negations and implications
    /// are left to the parser's NNF pass.
    pub fn text(&mut self, props: &[&str], depth: u32) -> String {
        let r = &mut self.rng;
        if depth == 0 || r.gen_bool(0.3) {
            return match r.gen_range(0..20) {
                0 => "true".into(),
                1 => "false".into(),
                2..=6 => format!("!{}", props[r.gen_range(0..props.len())]),
                _ => props[r.gen_range(0..props.len())].to_string(),
            };
        }
        let op = self.rng.gen_range(0..13);
        let mut sub = || self.text(props, depth - 1);
        match op {
            0 => format!("!({})", sub()),
            1 => format!("X ({})", sub()),
            2 => format!("N ({})", sub()),
            3 => format!("F ({})", sub()),
            4 => format!("G ({})", sub()),
            5 | 6 => format!("({}) & ({})", sub(), sub()),
            7 | 8 => format!("({}) | ({})", sub(), sub()),
            9 => format!("({}) -> ({})", sub(), sub()),
            10 | 11 => format!("({}) U ({})", sub(), sub()),
            _ => format!("({}) R ({})", sub(), sub()),
        }
    }

    /// A formula with at most `max_tcl` temporal-closure elements, by
    /// rejection.
    pub fn formula(&mut self, store: &mut Store, props: &[&str], max_tcl: usize, depth: u32) -> (String, Formula) {
        loop {
            let t = self.text(props, depth);
            let f = store.parse_declared(&t).expect("generated text parses");
            if store.formulas.temporal_closure(f).len() <= max_tcl {
                return (t, f);
            }
        }
    }

    /// `n` pairwise distinct formulas.
    pub fn distinct(&mut self, store: &mut Store, props: &[&str], max_tcl: usize, n: usize) -> Vec<Formula> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        while out.len() < n {
            let depth = self.rng.gen_range(1..=4);
            let (_, f) = self.formula(store, props, max_tcl, depth);
            if seen.insert(f) {
                out.push(f);
            }
        }
        out
    }

    pub fn trace(&mut self, num_props: usize, len: usize) -> Trace {
        let letters = 1u64 << num_props;
        Trace((0..len).map(|_| self.rng.gen_range(0..letters)).collect())
    }
}

/// All traces of exactly `len` letters over `num_props` propositions, in
/// lexicographic order.
pub fn traces_of_len(num_props: usize, len: usize) -> Vec<Trace> {
    let letters = 1u64 << num_props;
    let mut out = vec![Vec::<Letter>::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..letters).map(move |l| {
                    let mut p = prefix.clone();
                    p.push(l);
                    p
                })
            })
            .collect();
    }
    out.into_iter().map(Trace).collect()
}

/// All non-empty traces up to `max_len`, shortest first.
pub fn traces_up_to(num_props: usize, max_len: usize) -> Vec<Trace> {
    (1..=max_len).flat_map(|n| traces_of_len(num_props, n)).collect()
}

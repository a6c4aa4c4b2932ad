//! A small reduced ordered BDD package with a unique table.
//!
//! Variables are `u32` indices; a smaller index sits closer to the root.
//! Reduction plus hash-consing make node identity function identity, which
//! is what state canonicalization relies on.

use std::collections::HashMap;

#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct BddNode(u32);

impl BddNode {
    pub const FALSE: BddNode = BddNode(0);
    pub const TRUE: BddNode = BddNode(1);

    pub fn is_const(self) -> bool {
        self.0 < 2
    }

    pub fn raw(self) -> u32 {
        self.0
    }
}

const TERMINAL_VAR: u32 = u32::MAX;

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
struct Triple {
    var: u32,
    low: BddNode,
    high: BddNode,
}

#[derive(Copy, Clone, PartialEq, Eq, Hash)]
enum Op {
    And,
    Or,
}

#[derive(Clone, Debug, Default)]
pub struct Bdd {
    nodes: Vec<Triple>,
    unique: HashMap<Triple, BddNode>,
    apply_cache: HashMap<(u8, BddNode, BddNode), BddNode>,
    not_cache: HashMap<BddNode, BddNode>,
}

impl Bdd {
    pub fn new() -> Self {
        let term = |_| Triple {
            var: TERMINAL_VAR,
            low: BddNode::FALSE,
            high: BddNode::FALSE,
        };
        Bdd {
            nodes: vec![term(0), term(1)],
            ..Default::default()
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.len() <= 2
    }

    fn mk(&mut self, var: u32, low: BddNode, high: BddNode) -> BddNode {
        if low == high {
            return low;
        }
        let t = Triple { var, low, high };
        if let Some(&n) = self.unique.get(&t) {
            return n;
        }
        let n = BddNode(self.nodes.len() as u32);
        self.nodes.push(t);
        self.unique.insert(t, n);
        n
    }

    pub fn var(&mut self, v: u32) -> BddNode {
        self.mk(v, BddNode::FALSE, BddNode::TRUE)
    }

    pub fn nvar(&mut self, v: u32) -> BddNode {
        self.mk(v, BddNode::TRUE, BddNode::FALSE)
    }

    /// Top variable, `None` for terminals.
    pub fn top(&self, n: BddNode) -> Option<u32> {
        (!n.is_const()).then(|| self.nodes[n.0 as usize].var)
    }

    pub fn low(&self, n: BddNode) -> BddNode {
        self.nodes[n.0 as usize].low
    }

    pub fn high(&self, n: BddNode) -> BddNode {
        self.nodes[n.0 as usize].high
    }

    pub fn not(&mut self, n: BddNode) -> BddNode {
        match n {
            BddNode::FALSE => return BddNode::TRUE,
            BddNode::TRUE => return BddNode::FALSE,
            _ => {}
        }
        if let Some(&r) = self.not_cache.get(&n) {
            return r;
        }
        let t = self.nodes[n.0 as usize];
        let (l, h) = (self.not(t.low), self.not(t.high));
        let r = self.mk(t.var, l, h);
        self.not_cache.insert(n, r);
        r
    }

    pub fn and(&mut self, a: BddNode, b: BddNode) -> BddNode {
        self.apply(Op::And, a, b)
    }

    pub fn or(&mut self, a: BddNode, b: BddNode) -> BddNode {
        self.apply(Op::Or, a, b)
    }

    fn apply(&mut self, op: Op, a: BddNode, b: BddNode) -> BddNode {
        match (op, a, b) {
            (Op::And, BddNode::FALSE, _) | (Op::And, _, BddNode::FALSE) => return BddNode::FALSE,
            (Op::And, BddNode::TRUE, x) | (Op::And, x, BddNode::TRUE) => return x,
            (Op::Or, BddNode::TRUE, _) | (Op::Or, _, BddNode::TRUE) => return BddNode::TRUE,
            (Op::Or, BddNode::FALSE, x) | (Op::Or, x, BddNode::FALSE) => return x,
            _ if a == b => return a,
            _ => {}
        }
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let key = (op as u8, a, b);
        if let Some(&r) = self.apply_cache.get(&key) {
            return r;
        }
        let (ta, tb) = (self.nodes[a.0 as usize], self.nodes[b.0 as usize]);
        let var = ta.var.min(tb.var);
        let (al, ah) = if ta.var == var { (ta.low, ta.high) } else { (a, a) };
        let (bl, bh) = if tb.var == var { (tb.low, tb.high) } else { (b, b) };
        let low = self.apply(op, al, bl);
        let high = self.apply(op, ah, bh);
        let r = self.mk(var, low, high);
        self.apply_cache.insert(key, r);
        r
    }

    /// Evaluates under an assignment given as a predicate on variables.
    pub fn eval(&self, mut n: BddNode, assignment: impl Fn(u32) -> bool) -> bool {
        while !n.is_const() {
            let t = self.nodes[n.0 as usize];
            n = if assignment(t.var) { t.high } else { t.low };
        }
        n == BddNode::TRUE
    }

    /// Smallest satisfying assignment read as an integer whose bit `v` is
    /// variable `v`; unmentioned variables are 0. `None` for FALSE.
    ///
    /// Only meaningful when every variable index is below 64.
    pub fn min_assignment(&self, n: BddNode) -> Option<u64> {
        let mut memo = HashMap::new();
        self.min_rec(n, &mut memo)
    }

    fn min_rec(&self, n: BddNode, memo: &mut HashMap<BddNode, Option<u64>>) -> Option<u64> {
        match n {
            BddNode::FALSE => return None,
            BddNode::TRUE => return Some(0),
            _ => {}
        }
        if let Some(&r) = memo.get(&n) {
            return r;
        }
        let t = self.nodes[n.0 as usize];
        let low = self.min_rec(t.low, memo);
        let high = self.min_rec(t.high, memo).map(|h| h | 1 << t.var);
        let r = match (low, high) {
            (Some(l), Some(h)) => Some(l.min(h)),
            (l, h) => l.or(h),
        };
        memo.insert(n, r);
        r
    }

    /// Number of satisfying assignments over variables `0..nvars`.
    pub fn sat_count(&self, n: BddNode, nvars: u32) -> u128 {
        fn rec(b: &Bdd, n: BddNode, nvars: u32, memo: &mut HashMap<BddNode, u128>) -> u128 {
            // counts assignments to variables top(n)..nvars
            match n {
                BddNode::FALSE => return 0,
                BddNode::TRUE => return 1,
                _ => {}
            }
            if let Some(&c) = memo.get(&n) {
                return c;
            }
            let t = b.nodes[n.0 as usize];
            let level = |m: BddNode| if m.is_const() { nvars } else { b.nodes[m.0 as usize].var };
            let lo = rec(b, t.low, nvars, memo) << (level(t.low) - t.var - 1);
            let hi = rec(b, t.high, nvars, memo) << (level(t.high) - t.var - 1);
            memo.insert(n, lo + hi);
            lo + hi
        }
        let mut memo = HashMap::new();
        let top = self.top(n).unwrap_or(nvars);
        rec(self, n, nvars, &mut memo) << top
    }
}

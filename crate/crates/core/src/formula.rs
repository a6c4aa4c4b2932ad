//! Hash-consed LTLf formulas in negation normal form.
//!
//! Every formula lives in a [`FormulaStore`] and is referred to by a
//! [`Formula`] handle. Structurally identical formulas share one handle, so
//! equality of handles is structural equality.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Index of a declared proposition. Also its bit position inside a letter.
pub type PropId = u32;

/// Interned formula handle.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Formula(u32);

impl Formula {
    pub const TRUE: Formula = Formula(0);
    pub const FALSE: Formula = Formula(1);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// One NNF node. Negation only appears inside [`Node::Lit`].
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum Node {
    True,
    False,
    Lit { prop: PropId, positive: bool },
    And(Formula, Formula),
    Or(Formula, Formula),
    /// Strong next.
    Next(Formula),
    /// Weak next.
    WeakNext(Formula),
    /// `lhs U rhs`
    Until(Formula, Formula),
    /// `lhs R rhs`
    Release(Formula, Formula),
}

impl Node {
    /// Literals and temporal-rooted nodes; the atoms of propositional reasoning.
    pub fn is_temporal(&self) -> bool {
        !matches!(self, Node::True | Node::False | Node::And(..) | Node::Or(..))
    }
}

/// Append-only interning table for formulas and proposition names.
#[derive(Clone, Debug)]
pub struct FormulaStore {
    nodes: Vec<Node>,
    index: HashMap<Node, Formula>,
    props: Vec<String>,
    prop_index: HashMap<String, PropId>,
}

impl Default for FormulaStore {
    fn default() -> Self {
        Self::new()
    }
}

impl FormulaStore {
    pub fn new() -> Self {
        let mut store = FormulaStore {
            nodes: Vec::new(),
            index: HashMap::new(),
            props: Vec::new(),
            prop_index: HashMap::new(),
        };
        let t = store.intern(Node::True);
        let f = store.intern(Node::False);
        debug_assert_eq!((t, f), (Formula::TRUE, Formula::FALSE));
        store
    }

    fn intern(&mut self, node: Node) -> Formula {
        if let Some(&f) = self.index.get(&node) {
            return f;
        }
        let f = Formula(self.nodes.len() as u32);
        self.nodes.push(node);
        self.index.insert(node, f);
        f
    }

    pub fn node(&self, f: Formula) -> Node {
        self.nodes[f.index()]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    // ---- propositions ----

    /// Declares `name`, returning the existing id when already declared.
    pub fn declare(&mut self, name: &str) -> Result<PropId> {
        if let Some(&p) = self.prop_index.get(name) {
            return Ok(p);
        }
        if self.props.len() >= crate::trace::MAX_PROPS {
            return Err(Error::TooManyPropositions(crate::trace::MAX_PROPS));
        }
        let p = self.props.len() as PropId;
        self.props.push(name.to_string());
        self.prop_index.insert(name.to_string(), p);
        Ok(p)
    }

    pub fn prop(&self, name: &str) -> Option<PropId> {
        self.prop_index.get(name).copied()
    }

    pub fn prop_name(&self, p: PropId) -> &str {
        &self.props[p as usize]
    }

    pub fn props(&self) -> &[String] {
        &self.props
    }

    pub fn num_props(&self) -> usize {
        self.props.len()
    }

    // ---- constructors ----

    pub fn tt(&self) -> Formula {
        Formula::TRUE
    }

    pub fn ff(&self) -> Formula {
        Formula::FALSE
    }

    pub fn lit(&mut self, prop: PropId, positive: bool) -> Formula {
        self.intern(Node::Lit { prop, positive })
    }

    /// Conjunction with constant absorption and idempotence.
    pub fn and(&mut self, l: Formula, r: Formula) -> Formula {
        match (l, r) {
            (Formula::FALSE, _) | (_, Formula::FALSE) => Formula::FALSE,
            (Formula::TRUE, x) | (x, Formula::TRUE) => x,
            _ if l == r => l,
            _ => self.intern(Node::And(l, r)),
        }
    }

    /// Disjunction with constant absorption and idempotence.
    pub fn or(&mut self, l: Formula, r: Formula) -> Formula {
        match (l, r) {
            (Formula::TRUE, _) | (_, Formula::TRUE) => Formula::TRUE,
            (Formula::FALSE, x) | (x, Formula::FALSE) => x,
            _ if l == r => l,
            _ => self.intern(Node::Or(l, r)),
        }
    }

    pub fn and_all(&mut self, items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().fold(Formula::TRUE, |acc, f| self.and(acc, f))
    }

    pub fn or_all(&mut self, items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().fold(Formula::FALSE, |acc, f| self.or(acc, f))
    }

    pub fn next(&mut self, f: Formula) -> Formula {
        self.intern(Node::Next(f))
    }

    pub fn weak_next(&mut self, f: Formula) -> Formula {
        self.intern(Node::WeakNext(f))
    }

    pub fn until(&mut self, l: Formula, r: Formula) -> Formula {
        self.intern(Node::Until(l, r))
    }

    pub fn release(&mut self, l: Formula, r: Formula) -> Formula {
        self.intern(Node::Release(l, r))
    }

    /// `F f`, i.e. `true U f`.
    pub fn eventually(&mut self, f: Formula) -> Formula {
        self.until(Formula::TRUE, f)
    }

    /// `G f`, i.e. `false R f`.
    pub fn always(&mut self, f: Formula) -> Formula {
        self.release(Formula::FALSE, f)
    }

    /// NNF of the negation of an NNF formula.
    pub fn negate(&mut self, f: Formula) -> Formula {
        let mut memo = HashMap::new();
        self.negate_memo(f, &mut memo)
    }

    fn negate_memo(&mut self, f: Formula, memo: &mut HashMap<Formula, Formula>) -> Formula {
        if let Some(&g) = memo.get(&f) {
            return g;
        }
        let g = match self.node(f) {
            Node::True => Formula::FALSE,
            Node::False => Formula::TRUE,
            Node::Lit { prop, positive } => self.lit(prop, !positive),
            Node::And(l, r) => {
                let (l, r) = (self.negate_memo(l, memo), self.negate_memo(r, memo));
                self.or(l, r)
            }
            Node::Or(l, r) => {
                let (l, r) = (self.negate_memo(l, memo), self.negate_memo(r, memo));
                self.and(l, r)
            }
            Node::Next(x) => {
                let x = self.negate_memo(x, memo);
                self.weak_next(x)
            }
            Node::WeakNext(x) => {
                let x = self.negate_memo(x, memo);
                self.next(x)
            }
            Node::Until(l, r) => {
                let (l, r) = (self.negate_memo(l, memo), self.negate_memo(r, memo));
                self.release(l, r)
            }
            Node::Release(l, r) => {
                let (l, r) = (self.negate_memo(l, memo), self.negate_memo(r, memo));
                self.until(l, r)
            }
        };
        memo.insert(f, g);
        g
    }

    // ---- queries ----

    pub fn children(&self, f: Formula) -> impl Iterator<Item = Formula> {
        let (a, b) = match self.node(f) {
            Node::True | Node::False | Node::Lit { .. } => (None, None),
            Node::Next(x) | Node::WeakNext(x) => (Some(x), None),
            Node::And(l, r) | Node::Or(l, r) | Node::Until(l, r) | Node::Release(l, r) => {
                (Some(l), Some(r))
            }
        };
        a.into_iter().chain(b)
    }

    /// Distinct subformulas in left-to-right pre-order.
    pub fn subformulas(&self, f: Formula) -> Vec<Formula> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        let mut stack = vec![f];
        while let Some(g) = stack.pop() {
            if !seen.insert(g) {
                continue;
            }
            out.push(g);
            let kids: Vec<_> = self.children(g).collect();
            stack.extend(kids.into_iter().rev());
        }
        out
    }

    /// Temporal closure: literal and temporal-rooted subformulas, first
    /// occurrence order of a pre-order walk.
    pub fn temporal_closure(&self, f: Formula) -> Vec<Formula> {
        self.subformulas(f)
            .into_iter()
            .filter(|&g| self.node(g).is_temporal())
            .collect()
    }

    /// Bitmask of the propositions occurring in `f`.
    pub fn vars(&self, f: Formula) -> u64 {
        self.subformulas(f)
            .into_iter()
            .fold(0, |acc, g| match self.node(g) {
                Node::Lit { prop, .. } => acc | (1u64 << prop),
                _ => acc,
            })
    }

    pub fn size(&self, f: Formula) -> usize {
        self.subformulas(f).len()
    }

    pub fn display(&self, f: Formula) -> Display<'_> {
        Display { store: self, f }
    }
}

/// Printer using the concrete input syntax; binary operators are fully
/// parenthesized below the root so the output re-parses to the same formula.
pub struct Display<'a> {
    store: &'a FormulaStore,
    f: Formula,
}

impl Display<'_> {
    fn write(&self, f: Formula, top: bool, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.store;
        let binary = |out: &mut fmt::Formatter<'_>, l, op: &str, r| -> fmt::Result {
            if !top {
                out.write_str("(")?;
            }
            self.write(l, false, out)?;
            write!(out, " {op} ")?;
            self.write(r, false, out)?;
            if !top {
                out.write_str(")")?;
            }
            Ok(())
        };
        match s.node(f) {
            Node::True => out.write_str("true"),
            Node::False => out.write_str("false"),
            Node::Lit { prop, positive } => {
                if !positive {
                    out.write_str("!")?;
                }
                out.write_str(s.prop_name(prop))
            }
            Node::And(l, r) => binary(out, l, "&", r),
            Node::Or(l, r) => binary(out, l, "|", r),
            Node::Until(l, r) => binary(out, l, "U", r),
            Node::Release(l, r) => binary(out, l, "R", r),
            Node::Next(x) => {
                out.write_str("X ")?;
                self.write(x, false, out)
            }
            Node::WeakNext(x) => {
                out.write_str("N ")?;
                self.write(x, false, out)
            }
        }
    }
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(self.f, true, out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> (FormulaStore, Formula, Formula) {
        let mut s = FormulaStore::new();
        let a = s.declare("a").unwrap();
        let b = s.declare("b").unwrap();
        let (a, b) = (s.lit(a, true), s.lit(b, true));
        (s, a, b)
    }

    #[test]
    fn interning_shares_structure() {
        let (mut s, a, b) = ab();
        let u1 = s.until(a, b);
        let u2 = s.until(a, b);
        assert_eq!(u1, u2);
        assert_ne!(u1, s.until(b, a));
    }

    #[test]
    fn constants_are_absorbed() {
        let (mut s, a, _) = ab();
        assert_eq!(s.and(Formula::TRUE, a), a);
        assert_eq!(s.and(a, Formula::FALSE), Formula::FALSE);
        assert_eq!(s.or(a, Formula::TRUE), Formula::TRUE);
        assert_eq!(s.or(a, a), a);
    }

    #[test]
    fn negation_dualities() {
        let (mut s, a, b) = ab();
        let u = s.until(a, b);
        let nu = s.negate(u);
        let (na, nb) = (s.negate(a), s.negate(b));
        assert_eq!(nu, s.release(na, nb));

        let xb = s.next(b);
        let f = s.and(a, xb);
        let nf = s.negate(f);
        let wnb = s.weak_next(nb);
        assert_eq!(nf, s.or(na, wnb));
        assert_eq!(s.negate(Formula::TRUE), Formula::FALSE);
        assert_eq!(s.negate(nf), f);
    }

    #[test]
    fn closure_examples() {
        let (mut s, a, b) = ab();
        let u = s.until(a, b);
        assert_eq!(s.temporal_closure(u), vec![u, a, b]);
        let conj = s.and(a, b);
        assert_eq!(s.temporal_closure(conj), vec![a, b]);
        let nb = s.negate(b);
        let disj = s.or(a, nb);
        let x = s.next(disj);
        assert_eq!(s.temporal_closure(x), vec![x, a, nb]);
    }

    #[test]
    fn printing() {
        let (mut s, a, b) = ab();
        let xb = s.next(b);
        let u = s.until(a, xb);
        let na = s.negate(a);
        let f = s.or(u, na);
        assert_eq!(s.display(f).to_string(), "(a U X b) | !a");
        assert_eq!(s.display(Formula::TRUE).to_string(), "true");
    }
}

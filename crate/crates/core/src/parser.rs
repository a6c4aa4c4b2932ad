//! Concrete syntax for LTLf formulas and conversion to negation normal form.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr    := binary (('->' | '<->') expr)?          right associative
//! binary  := conj ('|' conj)*
//! conj    := temp ('&' temp)*
//! temp    := unary (('U' | 'R') temp)?              right associative
//! unary   := ('!' | 'X' | 'N' | 'F' | 'G') unary | atom
//! atom    := 'true' | 'false' | ident | '(' expr ')'
//! ```
//!
//! `&&`, `||`, `~`, `=>`, `<=>`, `TRUE` and `FALSE` are accepted as aliases.

use crate::error::{Error, Result};
use crate::formula::{Formula, FormulaStore};

/// Raw syntax tree, before negation normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    True,
    False,
    Prop(String),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Implies(Box<Expr>, Box<Expr>),
    Iff(Box<Expr>, Box<Expr>),
    Next(Box<Expr>),
    WeakNext(Box<Expr>),
    Until(Box<Expr>, Box<Expr>),
    Release(Box<Expr>, Box<Expr>),
}

impl Expr {
    fn bin(f: fn(Box<Expr>, Box<Expr>) -> Expr, l: Expr, r: Expr) -> Expr {
        f(Box::new(l), Box::new(r))
    }

    /// Proposition names in first-occurrence order.
    pub fn props(&self) -> Vec<String> {
        fn walk(e: &Expr, out: &mut Vec<String>) {
            match e {
                Expr::True | Expr::False => {}
                Expr::Prop(p) => {
                    if !out.contains(p) {
                        out.push(p.clone());
                    }
                }
                Expr::Not(x) | Expr::Next(x) | Expr::WeakNext(x) => walk(x, out),
                Expr::And(l, r)
                | Expr::Or(l, r)
                | Expr::Implies(l, r)
                | Expr::Iff(l, r)
                | Expr::Until(l, r)
                | Expr::Release(l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    Eof,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Lexer<'_> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn expect(&mut self, want: char, line: usize, column: usize) -> Result<()> {
        match self.bump() {
            Some(c) if c == want => Ok(()),
            Some(ch) => Err(Error::UnexpectedChar {
                line: self.line,
                column: self.column - 1,
                ch,
            }),
            None => Err(Error::Syntax {
                line,
                column,
                message: format!("expected `{want}`"),
            }),
        }
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize, usize)>> {
        let mut out = Vec::new();
        loop {
            while self.chars.peek().is_some_and(|c| c.is_whitespace()) {
                self.bump();
            }
            let (line, column) = (self.line, self.column);
            let Some(c) = self.bump() else {
                out.push((Tok::Eof, line, column));
                return Ok(out);
            };
            let tok = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '!' | '~' => Tok::Not,
                '&' => {
                    if self.chars.peek() == Some(&'&') {
                        self.bump();
                    }
                    Tok::And
                }
                '|' => {
                    if self.chars.peek() == Some(&'|') {
                        self.bump();
                    }
                    Tok::Or
                }
                '-' => {
                    self.expect('>', line, column)?;
                    Tok::Implies
                }
                '=' => {
                    self.expect('>', line, column)?;
                    Tok::Implies
                }
                '<' => {
                    match self.bump() {
                        Some('-') | Some('=') => {}
                        Some(ch) => {
                            return Err(Error::UnexpectedChar {
                                line: self.line,
                                column: self.column - 1,
                                ch,
                            })
                        }
                        None => {
                            return Err(Error::Syntax {
                                line,
                                column,
                                message: "incomplete `<->`".into(),
                            })
                        }
                    }
                    self.expect('>', line, column)?;
                    Tok::Iff
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut name = String::from(c);
                    while let Some(&n) = self.chars.peek() {
                        if n.is_ascii_alphanumeric() || n == '_' {
                            name.push(n);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    Tok::Ident(name)
                }
                ch => return Err(Error::UnexpectedChar { line, column, ch }),
            };
            out.push((tok, line, column));
        }
    }
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let (_, line, column) = self.toks[self.pos];
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expr(&mut self) -> Result<Expr> {
        let lhs = self.disjunction()?;
        match self.peek() {
            Tok::Implies => {
                self.advance();
                Ok(Expr::bin(Expr::Implies, lhs, self.expr()?))
            }
            Tok::Iff => {
                self.advance();
                Ok(Expr::bin(Expr::Iff, lhs, self.expr()?))
            }
            _ => Ok(lhs),
        }
    }

    fn disjunction(&mut self) -> Result<Expr> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.advance();
            lhs = Expr::bin(Expr::Or, lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Expr> {
        let mut lhs = self.temporal()?;
        while *self.peek() == Tok::And {
            self.advance();
            lhs = Expr::bin(Expr::And, lhs, self.temporal()?);
        }
        Ok(lhs)
    }

    fn temporal(&mut self) -> Result<Expr> {
        let lhs = self.unary()?;
        if self.is_keyword("U") {
            self.advance();
            Ok(Expr::bin(Expr::Until, lhs, self.temporal()?))
        } else if self.is_keyword("R") {
            self.advance();
            Ok(Expr::bin(Expr::Release, lhs, self.temporal()?))
        } else {
            Ok(lhs)
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Not => {
                self.advance();
                Ok(Expr::Not(Box::new(self.unary()?)))
            }
            Tok::Ident(kw) if matches!(kw.as_str(), "X" | "N" | "F" | "G") => {
                self.advance();
                let body = self.unary()?;
                Ok(match kw.as_str() {
                    "X" => Expr::Next(Box::new(body)),
                    "N" => Expr::WeakNext(Box::new(body)),
                    "F" => Expr::bin(Expr::Until, Expr::True, body),
                    _ => Expr::bin(Expr::Release, Expr::False, body),
                })
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::LParen => {
                self.advance();
                let e = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error("expected `)`"));
                }
                self.advance();
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "true" | "TRUE" => {
                    self.advance();
                    Ok(Expr::True)
                }
                "false" | "FALSE" => {
                    self.advance();
                    Ok(Expr::False)
                }
                "U" | "R" => Err(self.error(format!("binary operator `{name}` needs a left operand"))),
                _ => {
                    self.advance();
                    Ok(Expr::Prop(name))
                }
            },
            Tok::Eof => Err(self.error("unexpected end of input")),
            other => Err(self.error(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses one formula. `F` and `G` are expanded on the fly.
pub fn parse(text: &str) -> Result<Expr> {
    let toks = Lexer {
        chars: text.chars().peekable(),
        line: 1,
        column: 1,
    }
    .tokens()?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error("trailing input"));
    }
    Ok(e)
}

/// How [`to_nnf`] treats proposition names missing from the store.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Undeclared {
    /// Declare them in first-occurrence order.
    Declare,
    /// Report [`Error::UndeclaredProposition`].
    Reject,
}

/// Converts a raw tree to NNF in a single polarity-carrying traversal.
pub fn to_nnf(store: &mut FormulaStore, e: &Expr, mode: Undeclared) -> Result<Formula> {
    if mode == Undeclared::Declare {
        for p in e.props() {
            store.declare(&p)?;
        }
    }
    nnf(store, e, true)
}

fn nnf(s: &mut FormulaStore, e: &Expr, pos: bool) -> Result<Formula> {
    Ok(match e {
        Expr::True => {
            if pos {
                s.tt()
            } else {
                s.ff()
            }
        }
        Expr::False => {
            if pos {
                s.ff()
            } else {
                s.tt()
            }
        }
        Expr::Prop(name) => {
            let p = s
                .prop(name)
                .ok_or_else(|| Error::UndeclaredProposition(name.clone()))?;
            s.lit(p, pos)
        }
        Expr::Not(x) => nnf(s, x, !pos)?,
        Expr::And(l, r) | Expr::Or(l, r) => {
            let (l, r) = (nnf(s, l, pos)?, nnf(s, r, pos)?);
            if matches!(e, Expr::And(..)) == pos {
                s.and(l, r)
            } else {
                s.or(l, r)
            }
        }
        // l -> r  ==  !l | r
        Expr::Implies(l, r) => {
            let (l, r) = (nnf(s, l, !pos)?, nnf(s, r, pos)?);
            if pos {
                s.or(l, r)
            } else {
                s.and(l, r)
            }
        }
        // l <-> r  ==  (l & r) | (!l & !r);  negated: (l & !r) | (!l & r)
        Expr::Iff(l, r) => {
            let (lp, ln) = (nnf(s, l, true)?, nnf(s, l, false)?);
            let (rp, rn) = (nnf(s, r, pos)?, nnf(s, r, !pos)?);
            let both = s.and(lp, rp);
            let neither = s.and(ln, rn);
            s.or(both, neither)
        }
        Expr::Next(x) => {
            let x = nnf(s, x, pos)?;
            if pos {
                s.next(x)
            } else {
                s.weak_next(x)
            }
        }
        Expr::WeakNext(x) => {
            let x = nnf(s, x, pos)?;
            if pos {
                s.weak_next(x)
            } else {
                s.next(x)
            }
        }
        Expr::Until(l, r) | Expr::Release(l, r) => {
            let (l, r) = (nnf(s, l, pos)?, nnf(s, r, pos)?);
            if matches!(e, Expr::Until(..)) == pos {
                s.until(l, r)
            } else {
                s.release(l, r)
            }
        }
    })
}

/// Parses and normalizes in one step.
pub fn parse_formula(store: &mut FormulaStore, text: &str, mode: Undeclared) -> Result<Formula> {
    let e = parse(text)?;
    to_nnf(store, &e, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::{holds, Letter, Trace};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(name: &str) -> Box<Expr> {
        Box::new(Expr::Prop(name.into()))
    }

    #[test]
    fn precedence_and_sugar() {
        assert_eq!(
            parse("a U (X b)").unwrap(),
            Expr::Until(p("a"), Box::new(Expr::Next(p("b"))))
        );
        assert_eq!(parse("true").unwrap(), Expr::True);
        assert_eq!(
            parse("G a").unwrap(),
            Expr::Release(Box::new(Expr::False), p("a"))
        );
        // U binds tighter than &, & tighter than |, | tighter than ->
        assert_eq!(
            parse("a & b U c | d -> e").unwrap(),
            Expr::Implies(
                Box::new(Expr::Or(
                    Box::new(Expr::And(p("a"), Box::new(Expr::Until(p("b"), p("c"))))),
                    p("d")
                )),
                p("e")
            )
        );
        // right associative
        assert_eq!(
            parse("a U b U c").unwrap(),
            Expr::Until(p("a"), Box::new(Expr::Until(p("b"), p("c"))))
        );
        assert_eq!(parse("a && b").unwrap(), parse("a & b").unwrap());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse("a &\n  (b | ") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 8)),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            parse("a # b"),
            Err(Error::UnexpectedChar {
                line: 1,
                column: 3,
                ch: '#'
            })
        );
        assert!(parse("U a").is_err());
        assert!(parse("a b").is_err());
    }

    #[test]
    fn nnf_examples() {
        let mut s = FormulaStore::new();
        let f = parse_formula(&mut s, "!(a U b)", Undeclared::Declare).unwrap();
        let g = parse_formula(&mut s, "!a R !b", Undeclared::Declare).unwrap();
        assert_eq!(f, g);
        let f = parse_formula(&mut s, "!X a", Undeclared::Declare).unwrap();
        let g = parse_formula(&mut s, "N !a", Undeclared::Declare).unwrap();
        assert_eq!(f, g);
        let f = parse_formula(&mut s, "a -> b", Undeclared::Declare).unwrap();
        let g = parse_formula(&mut s, "!a | b", Undeclared::Declare).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn undeclared_propositions() {
        let mut s = FormulaStore::new();
        s.declare("a").unwrap();
        assert_eq!(
            parse_formula(&mut s, "a & q", Undeclared::Reject),
            Err(Error::UndeclaredProposition("q".into()))
        );
        parse_formula(&mut s, "a & q", Undeclared::Declare).unwrap();
        assert_eq!(s.props(), &["a", "q"]);
    }

    #[test]
    fn printed_output_is_a_fixed_point() {
        let mut s = FormulaStore::new();
        for text in [
            "a U (X b)",
            "G (a -> F b)",
            "!(a <-> N b) & (a R !b)",
            "X X a | true",
            "(a U b) U c",
        ] {
            let f = parse_formula(&mut s, text, Undeclared::Declare).unwrap();
            let printed = s.display(f).to_string();
            let g = parse_formula(&mut s, &printed, Undeclared::Reject).unwrap();
            assert_eq!(f, g, "{text} -> {printed}");
            assert_eq!(s.display(g).to_string(), printed);
        }
    }

    // Classical-negation semantics over raw trees; independent of NNF.
    fn eval_raw(e: &Expr, t: &[Letter], names: &[&str]) -> bool {
        let n = t.len();
        let bit = |name: &str| names.iter().position(|x| *x == name).unwrap() as u32;
        match e {
            Expr::True => true,
            Expr::False => false,
            Expr::Prop(x) => holds(t[0], bit(x)),
            Expr::Not(x) => !eval_raw(x, t, names),
            Expr::And(l, r) => eval_raw(l, t, names) && eval_raw(r, t, names),
            Expr::Or(l, r) => eval_raw(l, t, names) || eval_raw(r, t, names),
            Expr::Implies(l, r) => !eval_raw(l, t, names) || eval_raw(r, t, names),
            Expr::Iff(l, r) => eval_raw(l, t, names) == eval_raw(r, t, names),
            Expr::Next(x) => n > 1 && eval_raw(x, &t[1..], names),
            Expr::WeakNext(x) => n == 1 || eval_raw(x, &t[1..], names),
            Expr::Until(l, r) => (0..n)
                .any(|k| eval_raw(r, &t[k..], names) && (0..k).all(|j| eval_raw(l, &t[j..], names))),
            Expr::Release(l, r) => (0..n).any(|k| {
                (k == n - 1 || eval_raw(l, &t[k..], names))
                    && (0..=k).all(|j| eval_raw(r, &t[j..], names))
            }),
        }
    }

    fn random_expr(rng: &mut ChaCha8Rng, depth: u32) -> Expr {
        let leaf = depth == 0 || rng.gen_bool(0.25);
        if leaf {
            return match rng.gen_range(0..6) {
                0 => Expr::True,
                1 => Expr::False,
                2 | 3 => Expr::Prop("a".into()),
                _ => Expr::Prop("b".into()),
            };
        }
        let op = rng.gen_range(0..10);
        let mut sub = || Box::new(random_expr(rng, depth - 1));
        match op {
            0 => Expr::Not(sub()),
            1 => Expr::And(sub(), sub()),
            2 => Expr::Or(sub(), sub()),
            3 => Expr::Implies(sub(), sub()),
            4 => Expr::Iff(sub(), sub()),
            5 => Expr::Next(sub()),
            6 => Expr::WeakNext(sub()),
            7 => Expr::Until(sub(), sub()),
            8 => Expr::Release(sub(), sub()),
            _ => Expr::Not(Box::new(Expr::Until(sub(), sub()))),
        }
    }

    #[test]
    fn nnf_preserves_semantics() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut store = FormulaStore::new();
        store.declare("a").unwrap();
        store.declare("b").unwrap();
        let names = ["a", "b"];
        for _ in 0..10_000 {
            let e = random_expr(&mut rng, 4);
            let f = to_nnf(&mut store, &e, Undeclared::Reject).unwrap();
            let len = rng.gen_range(1..=5);
            let t: Vec<Letter> = (0..len).map(|_| rng.gen_range(0..4)).collect();
            let expected = eval_raw(&e, &t, &names);
            let got = crate::trace::eval_trace(&store, f, &Trace(t.clone())).unwrap();
            assert_eq!(got, expected, "{e:?} on {t:?}");
        }
    }
}

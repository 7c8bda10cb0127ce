//! Parsing-expression AST.
//!
//! The eight core variants ([`ParseExpr::Empty`] through [`ParseExpr::Choice`])
//! are the ones the recognizer understands. The remaining variants are
//! syntactic sugar and must be removed by [`crate::desugar`] before a grammar
//! is recognized, normalized, or translated.

/// A terminal symbol. Alphabets are sets of Unicode scalar values.
pub type Symbol = char;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ParseExpr {
    /// `()` — accepts everything, consumes nothing.
    Empty,
    /// `FAIL` — rejects everything.
    Fail,
    /// `'c'` — consumes exactly the symbol `c`.
    Terminal(Symbol),
    /// Reference to a nonterminal by name.
    Ref(String),
    /// `!e` — succeeds (consuming nothing) iff `e` rejects.
    Not(Box<ParseExpr>),
    /// `&e` — succeeds (consuming nothing) iff `e` accepts.
    And(Box<ParseExpr>),
    /// `e1 e2` — sequence.
    Seq(Box<ParseExpr>, Box<ParseExpr>),
    /// `e1 / e2` — prioritized choice.
    Choice(Box<ParseExpr>, Box<ParseExpr>),

    // Sugar, permitted before desugaring only.
    /// `e*` — zero or more repetitions.
    Star(Box<ParseExpr>),
    /// `e+` — one or more repetitions.
    Plus(Box<ParseExpr>),
    /// `.` — any declared terminal.
    AnyChar,
    /// A string of terminals, shorthand for a sequence of `Terminal`s.
    Literal(String),
    /// Exactly `n` copies of the child in sequence.
    Repeat(Box<ParseExpr>, usize),
}

impl ParseExpr {
    pub fn not(e: ParseExpr) -> ParseExpr {
        ParseExpr::Not(Box::new(e))
    }

    pub fn and(e: ParseExpr) -> ParseExpr {
        ParseExpr::And(Box::new(e))
    }

    pub fn seq(a: ParseExpr, b: ParseExpr) -> ParseExpr {
        ParseExpr::Seq(Box::new(a), Box::new(b))
    }

    pub fn choice(a: ParseExpr, b: ParseExpr) -> ParseExpr {
        ParseExpr::Choice(Box::new(a), Box::new(b))
    }

    pub fn star(e: ParseExpr) -> ParseExpr {
        ParseExpr::Star(Box::new(e))
    }

    pub fn plus(e: ParseExpr) -> ParseExpr {
        ParseExpr::Plus(Box::new(e))
    }

    pub fn repeat(e: ParseExpr, n: usize) -> ParseExpr {
        ParseExpr::Repeat(Box::new(e), n)
    }

    pub fn nt(name: impl Into<String>) -> ParseExpr {
        ParseExpr::Ref(name.into())
    }

    /// Right-associative sequence of several expressions. Empty input gives `()`.
    pub fn seq_all<I>(parts: I) -> ParseExpr
    where
        I: IntoIterator<Item = ParseExpr>,
        I::IntoIter: DoubleEndedIterator,
    {
        let mut iter = parts.into_iter().rev();
        let Some(last) = iter.next() else {
            return ParseExpr::Empty;
        };
        iter.fold(last, |acc, e| ParseExpr::seq(e, acc))
    }

    /// Right-associative prioritized choice of several expressions. Empty input gives `FAIL`.
    pub fn choice_all<I>(parts: I) -> ParseExpr
    where
        I: IntoIterator<Item = ParseExpr>,
        I::IntoIter: DoubleEndedIterator,
    {
        let mut iter = parts.into_iter().rev();
        let Some(last) = iter.next() else {
            return ParseExpr::Fail;
        };
        iter.fold(last, |acc, e| ParseExpr::choice(e, acc))
    }

    /// True when the expression tree contains no sugar variants.
    pub fn is_core(&self) -> bool {
        match self {
            ParseExpr::Empty | ParseExpr::Fail | ParseExpr::Terminal(_) | ParseExpr::Ref(_) => true,
            ParseExpr::Not(e) | ParseExpr::And(e) => e.is_core(),
            ParseExpr::Seq(a, b) | ParseExpr::Choice(a, b) => a.is_core() && b.is_core(),
            ParseExpr::Star(_)
            | ParseExpr::Plus(_)
            | ParseExpr::AnyChar
            | ParseExpr::Literal(_)
            | ParseExpr::Repeat(..) => false,
        }
    }

    /// Visit every node of the expression tree.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a ParseExpr)) {
        f(self);
        match self {
            ParseExpr::Not(e) | ParseExpr::And(e) | ParseExpr::Star(e) | ParseExpr::Plus(e) => {
                e.visit(f)
            }
            ParseExpr::Repeat(e, _) => e.visit(f),
            ParseExpr::Seq(a, b) | ParseExpr::Choice(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }
}

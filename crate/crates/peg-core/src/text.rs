//! Grammar text format.
//!
//! One rule per line, `Name <- expr`. Operators: `!` and `&` prefix,
//! juxtaposition for sequence, `/` for ordered choice, `'c'` terminal
//! literals, `()` for the empty expression, the `FAIL` keyword, `.` for
//! any declared terminal, `e*` and `e+` repetition sugar, `#` line
//! comments. `@terminals abc` declares the alphabet (required when `.` is
//! used; no comments on that line). `@start Name` overrides the default
//! start symbol, which is the first rule's head. Sequence and choice
//! associate to the right.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::TextError;
use crate::expr::ParseExpr;
use crate::grammar::Grammar;

pub fn parse_text(src: &str) -> Result<Grammar, TextError> {
    let mut terminals: Option<BTreeSet<char>> = None;
    let mut start: Option<String> = None;
    let mut rules: Vec<(String, ParseExpr)> = Vec::new();
    let mut uses_anychar = false;

    for (idx, raw) in src.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("@terminals") {
            let mut set = BTreeSet::new();
            for c in rest.chars().filter(|c| !c.is_whitespace()) {
                set.insert(c);
            }
            if terminals.replace(set).is_some() {
                return Err(TextError::new(lineno, "duplicate @terminals directive"));
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix("@start") {
            let name = strip_comment(rest).trim().to_owned();
            if name.is_empty() {
                return Err(TextError::new(lineno, "@start needs a nonterminal name"));
            }
            if start.replace(name).is_some() {
                return Err(TextError::new(lineno, "duplicate @start directive"));
            }
            continue;
        }
        let line = strip_comment(line).trim();
        if line.is_empty() {
            continue;
        }
        let (head, body) = line.split_once("<-").ok_or_else(|| {
            TextError::new(lineno, "expected `Name <- expr` or a directive")
        })?;
        let head = head.trim();
        if !is_ident(head) {
            return Err(TextError::new(
                lineno,
                format!("invalid rule head {head:?}"),
            ));
        }
        let expr = ExprParser::new(body, lineno).parse_full()?;
        expr.visit(&mut |e| {
            if matches!(e, ParseExpr::AnyChar) {
                uses_anychar = true;
            }
        });
        rules.push((head.to_owned(), expr));
    }

    if rules.is_empty() {
        return Err(TextError::new(0, "no rules found"));
    }
    if uses_anychar && terminals.is_none() {
        return Err(TextError::new(
            0,
            "`.` requires an explicit @terminals declaration",
        ));
    }
    let terminals = terminals.unwrap_or_else(|| {
        // Infer the alphabet from the literals that appear.
        let mut set = BTreeSet::new();
        for (_, body) in &rules {
            body.visit(&mut |e| match e {
                ParseExpr::Terminal(c) => {
                    set.insert(*c);
                }
                ParseExpr::Literal(s) => set.extend(s.chars()),
                _ => {}
            });
        }
        set
    });
    let start = start.unwrap_or_else(|| rules[0].0.clone());
    Grammar::new(terminals, rules, start).map_err(|e| TextError::new(0, e.to_string()))
}

// Strip a `#` comment, ignoring `#` inside quoted literals.
fn strip_comment(line: &str) -> &str {
    let mut in_quote = false;
    let mut escaped = false;
    for (i, c) in line.char_indices() {
        match c {
            _ if escaped => escaped = false,
            '\\' if in_quote => escaped = true,
            '\'' => in_quote = !in_quote,
            '#' if !in_quote => return &line[..i],
            _ => {}
        }
    }
    line
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' => {}
        _ => return false,
    }
    s != "FAIL" && chars.all(|c| c.is_alphanumeric() || c == '_')
}

struct ExprParser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl ExprParser {
    fn new(src: &str, line: usize) -> Self {
        ExprParser {
            chars: src.chars().collect(),
            pos: 0,
            line,
        }
    }

    fn err(&self, msg: impl Into<String>) -> TextError {
        TextError::new(self.line, msg.into())
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn parse_full(mut self) -> Result<ParseExpr, TextError> {
        let e = self.parse_choice()?;
        self.skip_ws();
        if let Some(c) = self.peek() {
            return Err(self.err(format!("unexpected {c:?} after expression")));
        }
        Ok(e)
    }

    fn parse_choice(&mut self) -> Result<ParseExpr, TextError> {
        let first = self.parse_seq()?;
        self.skip_ws();
        if self.peek() == Some('/') {
            self.bump();
            let rest = self.parse_choice()?;
            Ok(ParseExpr::choice(first, rest))
        } else {
            Ok(first)
        }
    }

    fn parse_seq(&mut self) -> Result<ParseExpr, TextError> {
        let first = self.parse_prefix()?;
        self.skip_ws();
        match self.peek() {
            Some('/') | Some(')') | None => Ok(first),
            Some(_) => {
                let rest = self.parse_seq()?;
                Ok(ParseExpr::seq(first, rest))
            }
        }
    }

    fn parse_prefix(&mut self) -> Result<ParseExpr, TextError> {
        self.skip_ws();
        match self.peek() {
            Some('!') => {
                self.bump();
                Ok(ParseExpr::not(self.parse_prefix()?))
            }
            Some('&') => {
                self.bump();
                Ok(ParseExpr::and(self.parse_prefix()?))
            }
            _ => self.parse_postfix(),
        }
    }

    fn parse_postfix(&mut self) -> Result<ParseExpr, TextError> {
        let mut e = self.parse_atom()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.bump();
                    e = ParseExpr::star(e);
                }
                Some('+') => {
                    self.bump();
                    e = ParseExpr::plus(e);
                }
                _ => return Ok(e),
            }
        }
    }

    fn parse_atom(&mut self) -> Result<ParseExpr, TextError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.bump();
                self.skip_ws();
                if self.peek() == Some(')') {
                    self.bump();
                    return Ok(ParseExpr::Empty);
                }
                let inner = self.parse_choice()?;
                self.skip_ws();
                if self.bump() != Some(')') {
                    return Err(self.err("unclosed parenthesis"));
                }
                Ok(inner)
            }
            Some('\'') => {
                self.bump();
                let c = match self.bump() {
                    Some('\\') => match self.bump() {
                        Some('\\') => '\\',
                        Some('\'') => '\'',
                        Some(other) => {
                            return Err(self.err(format!("unknown escape \\{other}")))
                        }
                        None => return Err(self.err("unterminated literal")),
                    },
                    Some(c) => c,
                    None => return Err(self.err("unterminated literal")),
                };
                if self.bump() != Some('\'') {
                    return Err(self.err("terminal literal must hold exactly one symbol"));
                }
                Ok(ParseExpr::Terminal(c))
            }
            Some('.') => {
                self.bump();
                Ok(ParseExpr::AnyChar)
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let begin = self.pos;
                while matches!(self.peek(), Some(c) if c.is_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let name: String = self.chars[begin..self.pos].iter().collect();
                if name == "FAIL" {
                    Ok(ParseExpr::Fail)
                } else {
                    Ok(ParseExpr::nt(name))
                }
            }
            Some(c) => Err(self.err(format!("unexpected {c:?}"))),
            None => Err(self.err("expected an expression")),
        }
    }
}

/// Canonical text rendering; `parse_text(to_text(g))` reproduces `g` for
/// sugar-representable grammars.
pub fn to_text(grammar: &Grammar) -> String {
    let mut out = String::new();
    let sigma: String = grammar.terminals().iter().collect();
    writeln!(out, "@terminals {sigma}").unwrap();
    let first = grammar.nonterminals().next().expect("grammar is nonempty");
    if grammar.start() != first {
        writeln!(out, "@start {}", grammar.start()).unwrap();
    }
    for (name, body) in grammar.rules() {
        writeln!(out, "{name} <- {}", render(body, 0)).unwrap();
    }
    out
}

// Precedence levels: 0 choice, 1 sequence, 2 prefix, 3 postfix, 4 atom.
fn level(e: &ParseExpr) -> u8 {
    match e {
        ParseExpr::Choice(..) => 0,
        ParseExpr::Seq(..) => 1,
        ParseExpr::Not(_) | ParseExpr::And(_) => 2,
        ParseExpr::Star(_) | ParseExpr::Plus(_) => 3,
        _ => 4,
    }
}

fn render(e: &ParseExpr, min_level: u8) -> String {
    let mine = level(e);
    let body = match e {
        ParseExpr::Empty => "()".to_owned(),
        ParseExpr::Fail => "FAIL".to_owned(),
        ParseExpr::Terminal(c) => match c {
            '\'' => "'\\''".to_owned(),
            '\\' => "'\\\\'".to_owned(),
            c => format!("'{c}'"),
        },
        ParseExpr::Ref(name) => name.clone(),
        ParseExpr::AnyChar => ".".to_owned(),
        ParseExpr::Not(x) => format!("!{}", render(x, 3)),
        ParseExpr::And(x) => format!("&{}", render(x, 3)),
        ParseExpr::Seq(a, b) => format!("{} {}", render(a, 2), render(b, 1)),
        ParseExpr::Choice(a, b) => format!("{} / {}", render(a, 1), render(b, 0)),
        ParseExpr::Star(x) => format!("{}*", render(x, 4)),
        ParseExpr::Plus(x) => format!("{}+", render(x, 4)),
        // No dedicated surface syntax; print expanded.
        ParseExpr::Literal(s) => {
            return render(&ParseExpr::seq_all(s.chars().map(ParseExpr::Terminal)), min_level)
        }
        ParseExpr::Repeat(x, n) => {
            return render(
                &ParseExpr::seq_all(std::iter::repeat((**x).clone()).take(*n)),
                min_level,
            )
        }
    };
    if mine < min_level {
        format!("({body})")
    } else {
        body
    }
}

//! Sugar removal: rewrites `Star`, `Plus`, `AnyChar`, `Literal`, and
//! `Repeat` into the eight core variants, adding fresh repetition rules
//! where needed.

use indexmap::IndexMap;

use crate::error::DesugarError;
use crate::expr::ParseExpr;
use crate::grammar::Grammar;

struct Ctx {
    taken: indexmap::IndexSet<String>,
    new_rules: Vec<(String, ParseExpr)>,
    sigma: Vec<char>,
}

impl Ctx {
    fn fresh(&mut self, base: String) -> String {
        let mut name = base;
        while self.taken.contains(&name) {
            name.push('_');
        }
        self.taken.insert(name.clone());
        name
    }

    // `e*` becomes a fresh nonterminal N with rule `N <- e N / ()`.
    fn star_rule(&mut self, owner: &str, child: ParseExpr) -> Result<ParseExpr, DesugarError> {
        let child = self.rewrite(owner, child)?;
        let base = match &child {
            ParseExpr::Ref(name) => format!("{name}star"),
            _ => format!("{owner}_star"),
        };
        let name = self.fresh(base);
        let body = ParseExpr::choice(
            ParseExpr::seq(child, ParseExpr::nt(name.clone())),
            ParseExpr::Empty,
        );
        self.new_rules.push((name.clone(), body));
        Ok(ParseExpr::nt(name))
    }

    fn rewrite(&mut self, owner: &str, e: ParseExpr) -> Result<ParseExpr, DesugarError> {
        Ok(match e {
            ParseExpr::Empty | ParseExpr::Fail | ParseExpr::Terminal(_) | ParseExpr::Ref(_) => e,
            ParseExpr::Not(x) => ParseExpr::not(self.rewrite(owner, *x)?),
            ParseExpr::And(x) => ParseExpr::and(self.rewrite(owner, *x)?),
            ParseExpr::Seq(a, b) => {
                ParseExpr::seq(self.rewrite(owner, *a)?, self.rewrite(owner, *b)?)
            }
            ParseExpr::Choice(a, b) => {
                ParseExpr::choice(self.rewrite(owner, *a)?, self.rewrite(owner, *b)?)
            }
            ParseExpr::Star(x) => self.star_rule(owner, *x)?,
            ParseExpr::Plus(x) => {
                let once = self.rewrite(owner, (*x).clone())?;
                let rest = self.star_rule(owner, *x)?;
                ParseExpr::seq(once, rest)
            }
            ParseExpr::AnyChar => {
                ParseExpr::choice_all(self.sigma.iter().map(|&c| ParseExpr::Terminal(c)))
            }
            ParseExpr::Literal(s) => ParseExpr::seq_all(s.chars().map(ParseExpr::Terminal)),
            ParseExpr::Repeat(x, n) => {
                let x = self.rewrite(owner, *x)?;
                ParseExpr::seq_all(std::iter::repeat(x).take(n))
            }
        })
    }
}

/// Replace every sugar construct; the result contains only core variants and
/// recognizes the same language.
pub fn desugar(grammar: &Grammar) -> Result<Grammar, DesugarError> {
    if grammar.is_desugared() {
        return Ok(grammar.clone());
    }
    let mut ctx = Ctx {
        taken: grammar.nonterminals().map(str::to_owned).collect(),
        new_rules: Vec::new(),
        sigma: grammar.terminals().iter().copied().collect(),
    };
    let mut rules: IndexMap<String, ParseExpr> = IndexMap::new();
    for (name, body) in grammar.rules() {
        let rewritten = ctx.rewrite(name, body.clone())?;
        rules.insert(name.to_owned(), rewritten);
    }
    // Fresh repetition rules may themselves contain sugar in their child copy.
    let mut pending = std::mem::take(&mut ctx.new_rules);
    while !pending.is_empty() {
        for (name, body) in pending {
            let body = if body.is_core() {
                body
            } else {
                ctx.rewrite(&name, body)?
            };
            rules.insert(name, body);
        }
        pending = std::mem::take(&mut ctx.new_rules);
    }
    let g = Grammar::new(
        grammar.terminals().iter().copied(),
        rules.into_iter().collect(),
        grammar.start(),
    )
    .expect("desugaring preserves validity");
    debug_assert!(g.is_desugared());
    Ok(g)
}

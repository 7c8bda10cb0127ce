//! Rewriting into binary normal form: every rule ends up as one of
//! `A <- ()`, `A <- FAIL`, `A <- 't'`, `A <- !B`, `A <- &B`, `A <- B C`,
//! `A <- B / C`. Sub-expressions are hoisted into fresh nonterminals named
//! `<parent>_<child index>`; recognition outcomes of the original
//! nonterminals are unchanged at every position.

use indexmap::{IndexMap, IndexSet};

use crate::error::NormalizeError;
use crate::expr::ParseExpr;
use crate::grammar::Grammar;

struct Ctx {
    taken: IndexSet<String>,
    out: IndexMap<String, ParseExpr>,
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

    // Return a Ref to an equivalent nonterminal, hoisting when `e` is not
    // already a reference.
    fn operand(&mut self, parent: &str, child_idx: &mut usize, e: &ParseExpr) -> ParseExpr {
        if let ParseExpr::Ref(_) = e {
            return e.clone();
        }
        *child_idx += 1;
        let name = self.fresh(format!("{parent}_{child_idx}"));
        self.define(&name, e);
        ParseExpr::nt(name)
    }

    fn define(&mut self, name: &str, body: &ParseExpr) {
        let mut child_idx = 0usize;
        let normal = match body {
            ParseExpr::Empty | ParseExpr::Fail | ParseExpr::Terminal(_) => body.clone(),
            // A bare alias is not a normal form; `B / FAIL` keeps its exact
            // acceptance and consumption behavior.
            ParseExpr::Ref(_) => {
                let fail = self.operand(name, &mut child_idx, &ParseExpr::Fail);
                ParseExpr::choice(body.clone(), fail)
            }
            ParseExpr::Not(x) => ParseExpr::not(self.operand(name, &mut child_idx, x)),
            ParseExpr::And(x) => ParseExpr::and(self.operand(name, &mut child_idx, x)),
            ParseExpr::Seq(a, b) => {
                let a = self.operand(name, &mut child_idx, a);
                let b = self.operand(name, &mut child_idx, b);
                ParseExpr::Seq(Box::new(a), Box::new(b))
            }
            ParseExpr::Choice(a, b) => {
                let a = self.operand(name, &mut child_idx, a);
                let b = self.operand(name, &mut child_idx, b);
                ParseExpr::Choice(Box::new(a), Box::new(b))
            }
            _ => unreachable!("normalize requires a desugared grammar"),
        };
        self.out.insert(name.to_owned(), normal);
    }
}

/// Rewrite `grammar` into binary normal form.
pub fn normalize(grammar: &Grammar) -> Result<Grammar, NormalizeError> {
    if !grammar.is_desugared() {
        return Err(NormalizeError::NotDesugared);
    }
    if grammar.is_binary_normal() {
        return Ok(grammar.clone());
    }
    let mut ctx = Ctx {
        taken: grammar.nonterminals().map(str::to_owned).collect(),
        out: IndexMap::new(),
    };
    for (name, body) in grammar.rules() {
        if grammar.classify_normal(body).is_some() {
            ctx.out.insert(name.to_owned(), body.clone());
        } else {
            ctx.define(name, body);
        }
    }
    // Keep original rules first, hoisted rules after, each group in
    // creation order.
    let (mut originals, mut fresh): (Vec<_>, Vec<_>) = (Vec::new(), Vec::new());
    for (name, body) in ctx.out {
        if grammar.rule(&name).is_some() {
            originals.push((name, body));
        } else {
            fresh.push((name, body));
        }
    }
    originals.append(&mut fresh);
    let g = Grammar::new(
        grammar.terminals().iter().copied(),
        originals,
        grammar.start(),
    )
    .expect("normalization preserves validity");
    debug_assert!(g.is_binary_normal());
    Ok(g)
}

use std::collections::BTreeSet;

use indexmap::IndexMap;

use crate::error::GrammarError;
use crate::expr::{ParseExpr, Symbol};

/// A parsing expression grammar: an alphabet, an ordered rule map, and a
/// start nonterminal. Immutable after construction; rule order is preserved
/// and is the canonical nonterminal order used by consumers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    terminals: BTreeSet<Symbol>,
    rules: IndexMap<String, ParseExpr>,
    start: String,
}

/// The shape of a rule in binary normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormalRule {
    Empty,
    Fail,
    Terminal(Symbol),
    Not(usize),
    And(usize),
    Seq(usize, usize),
    Choice(usize, usize),
}

impl Grammar {
    pub fn new(
        terminals: impl IntoIterator<Item = Symbol>,
        rules: Vec<(String, ParseExpr)>,
        start: impl Into<String>,
    ) -> Result<Grammar, GrammarError> {
        let terminals: BTreeSet<Symbol> = terminals.into_iter().collect();
        let start = start.into();
        if rules.is_empty() {
            return Err(GrammarError::Empty);
        }
        let mut map = IndexMap::with_capacity(rules.len());
        for (name, body) in rules {
            if map.insert(name.clone(), body).is_some() {
                return Err(GrammarError::DuplicateRule(name));
            }
        }
        let g = Grammar {
            terminals,
            rules: map,
            start,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<(), GrammarError> {
        if !self.rules.contains_key(&self.start) {
            return Err(GrammarError::UndefinedStart(self.start.clone()));
        }
        for name in self.rules.keys() {
            let mut chars = name.chars();
            if let (Some(c), None) = (chars.next(), chars.next()) {
                if self.terminals.contains(&c) {
                    return Err(GrammarError::NonterminalShadowsTerminal(name.clone()));
                }
            }
        }
        for (name, body) in &self.rules {
            let mut err = None;
            body.visit(&mut |e| {
                if err.is_some() {
                    return;
                }
                match e {
                    ParseExpr::Ref(target) if !self.rules.contains_key(target) => {
                        err = Some(GrammarError::UndefinedRef {
                            rule: name.clone(),
                            name: target.clone(),
                        });
                    }
                    ParseExpr::Terminal(c) if !self.terminals.contains(c) => {
                        err = Some(GrammarError::TerminalNotInAlphabet {
                            rule: name.clone(),
                            symbol: *c,
                        });
                    }
                    ParseExpr::Literal(s) => {
                        if let Some(c) = s.chars().find(|c| !self.terminals.contains(c)) {
                            err = Some(GrammarError::TerminalNotInAlphabet {
                                rule: name.clone(),
                                symbol: c,
                            });
                        }
                    }
                    _ => {}
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
        }
        Ok(())
    }

    pub fn terminals(&self) -> &BTreeSet<Symbol> {
        &self.terminals
    }

    /// Nonterminal names in rule order.
    pub fn nonterminals(&self) -> impl Iterator<Item = &str> {
        self.rules.keys().map(String::as_str)
    }

    pub fn nonterminal_count(&self) -> usize {
        self.rules.len()
    }

    pub fn rules(&self) -> impl Iterator<Item = (&str, &ParseExpr)> {
        self.rules.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn rule(&self, name: &str) -> Option<&ParseExpr> {
        self.rules.get(name)
    }

    /// Index of a nonterminal in rule order.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.rules.get_index_of(name)
    }

    pub fn name_of(&self, index: usize) -> Option<&str> {
        self.rules.get_index(index).map(|(k, _)| k.as_str())
    }

    pub fn rule_at(&self, index: usize) -> Option<&ParseExpr> {
        self.rules.get_index(index).map(|(_, v)| v)
    }

    pub fn start(&self) -> &str {
        &self.start
    }

    pub fn is_desugared(&self) -> bool {
        self.rules.values().all(ParseExpr::is_core)
    }

    /// Classify a single rule body as a binary-normal-form rule, if it is one.
    pub fn classify_normal(&self, body: &ParseExpr) -> Option<NormalRule> {
        match body {
            ParseExpr::Empty => Some(NormalRule::Empty),
            ParseExpr::Fail => Some(NormalRule::Fail),
            ParseExpr::Terminal(c) => Some(NormalRule::Terminal(*c)),
            ParseExpr::Not(e) => match e.as_ref() {
                ParseExpr::Ref(b) => Some(NormalRule::Not(self.index_of(b)?)),
                _ => None,
            },
            ParseExpr::And(e) => match e.as_ref() {
                ParseExpr::Ref(b) => Some(NormalRule::And(self.index_of(b)?)),
                _ => None,
            },
            ParseExpr::Seq(a, b) => match (a.as_ref(), b.as_ref()) {
                (ParseExpr::Ref(x), ParseExpr::Ref(y)) => {
                    Some(NormalRule::Seq(self.index_of(x)?, self.index_of(y)?))
                }
                _ => None,
            },
            ParseExpr::Choice(a, b) => match (a.as_ref(), b.as_ref()) {
                (ParseExpr::Ref(x), ParseExpr::Ref(y)) => {
                    Some(NormalRule::Choice(self.index_of(x)?, self.index_of(y)?))
                }
                _ => None,
            },
            _ => None,
        }
    }

    /// All rules classified in rule order, or `None` if any rule is not in
    /// binary normal form.
    pub fn normal_rules(&self) -> Option<Vec<NormalRule>> {
        self.rules
            .values()
            .map(|body| self.classify_normal(body))
            .collect()
    }

    pub fn is_binary_normal(&self) -> bool {
        self.normal_rules().is_some()
    }
}

//! The recursive recognition procedure.
//!
//! Implemented as an explicit-stack machine so the frame budget is a real
//! heap-backed limit rather than an OS stack overflow. Divergence is detected
//! by keeping an active set of (nonterminal, position) pairs: re-entering a
//! pair that is still on the call stack means the procedure would loop
//! forever, because expressions are finite and positions never move backward.

use crate::error::RecognizeError;
use crate::expr::ParseExpr;
use crate::grammar::Grammar;

/// Result of the recognition map on one (expression, input) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// The expression accepts, consuming this many symbols of the input.
    Consumed(usize),
    Fail,
    /// The procedure would never return on this pair.
    Diverges,
}

impl Outcome {
    pub fn is_consumed(&self) -> bool {
        matches!(self, Outcome::Consumed(_))
    }
}

/// Whole-input membership per the start symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Member,
    NonMember,
    Diverges,
}

/// [`Outcome`] plus the pair that triggered divergence, when any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecognizeReport {
    pub outcome: Outcome,
    /// First (nonterminal, position) re-entered while active.
    pub diverged_at: Option<(String, usize)>,
}

pub const DEFAULT_FRAME_BUDGET: usize = 1_000_000;

// Flattened expression arena, nonterminals resolved to indices.
#[derive(Debug, Clone, Copy)]
enum CExpr {
    Empty,
    Fail,
    Terminal(char),
    Ref(u32),
    Not(u32),
    And(u32),
    Seq(u32, u32),
    Choice(u32, u32),
}

struct Compiler<'g> {
    grammar: &'g Grammar,
    arena: Vec<CExpr>,
}

impl<'g> Compiler<'g> {
    fn compile(&mut self, e: &ParseExpr) -> Result<u32, RecognizeError> {
        let node = match e {
            ParseExpr::Empty => CExpr::Empty,
            ParseExpr::Fail => CExpr::Fail,
            ParseExpr::Terminal(c) => CExpr::Terminal(*c),
            ParseExpr::Ref(name) => {
                let idx = self
                    .grammar
                    .index_of(name)
                    .ok_or_else(|| RecognizeError::UndefinedRef(name.clone()))?;
                CExpr::Ref(idx as u32)
            }
            ParseExpr::Not(x) => CExpr::Not(self.compile(x)?),
            ParseExpr::And(x) => CExpr::And(self.compile(x)?),
            ParseExpr::Seq(a, b) => {
                let a = self.compile(a)?;
                let b = self.compile(b)?;
                CExpr::Seq(a, b)
            }
            ParseExpr::Choice(a, b) => {
                let a = self.compile(a)?;
                let b = self.compile(b)?;
                CExpr::Choice(a, b)
            }
            _ => return Err(RecognizeError::NotDesugared),
        };
        self.arena.push(node);
        Ok(self.arena.len() as u32 - 1)
    }
}

#[derive(Debug, Clone, Copy)]
enum Res {
    Ok(usize),
    Fail,
    Diverge,
}

enum Frame {
    Not,
    And,
    SeqLeft { right: u32, pos: usize },
    SeqRight { left_consumed: usize },
    ChoiceLeft { alt: u32, pos: usize },
    Ref { nt: u32, pos: usize },
}

/// Prepared recognizer for one grammar. Compiling once and reusing it is
/// noticeably faster when recognizing many inputs.
pub struct Recognizer<'g> {
    grammar: &'g Grammar,
    arena: Vec<CExpr>,
    rule_entry: Vec<u32>,
    frame_budget: usize,
}

impl<'g> Recognizer<'g> {
    pub fn new(grammar: &'g Grammar) -> Result<Self, RecognizeError> {
        let mut compiler = Compiler {
            grammar,
            arena: Vec::new(),
        };
        let mut rule_entry = Vec::with_capacity(grammar.nonterminal_count());
        for i in 0..grammar.nonterminal_count() {
            let body = grammar.rule_at(i).expect("index in range");
            rule_entry.push(compiler.compile(body)?);
        }
        Ok(Recognizer {
            grammar,
            arena: compiler.arena,
            rule_entry,
            frame_budget: DEFAULT_FRAME_BUDGET,
        })
    }

    pub fn with_frame_budget(mut self, budget: usize) -> Self {
        self.frame_budget = budget;
        self
    }

    pub fn grammar(&self) -> &'g Grammar {
        self.grammar
    }

    fn check_symbols(&self, input: &[char]) -> Result<(), RecognizeError> {
        for &c in input {
            if !self.grammar.terminals().contains(&c) {
                return Err(RecognizeError::SymbolNotInAlphabet(c));
            }
        }
        Ok(())
    }

    /// Run the recognition procedure for an arbitrary expression over this
    /// grammar's rules.
    pub fn run_expr(
        &self,
        expr: &ParseExpr,
        input: &[char],
    ) -> Result<RecognizeReport, RecognizeError> {
        self.check_symbols(input)?;
        let mut compiler = Compiler {
            grammar: self.grammar,
            arena: self.arena.clone(),
        };
        let root = compiler.compile(expr)?;
        self.exec(&compiler.arena, root, input)
    }

    /// Recognition for a nonterminal's rule, by index.
    pub fn run_nonterminal(
        &self,
        nt: usize,
        input: &[char],
    ) -> Result<RecognizeReport, RecognizeError> {
        self.check_symbols(input)?;
        self.exec(&self.arena, self.rule_entry[nt], input)
    }

    pub fn membership(&self, input: &[char]) -> Result<Membership, RecognizeError> {
        let start = self
            .grammar
            .index_of(self.grammar.start())
            .expect("start is validated");
        let report = self.run_nonterminal(start, input)?;
        Ok(match report.outcome {
            Outcome::Consumed(k) if k == input.len() => Membership::Member,
            Outcome::Consumed(_) | Outcome::Fail => Membership::NonMember,
            Outcome::Diverges => Membership::Diverges,
        })
    }

    fn exec(
        &self,
        arena: &[CExpr],
        root: u32,
        input: &[char],
    ) -> Result<RecognizeReport, RecognizeError> {
        let nt_count = self.grammar.nonterminal_count();
        let width = input.len() + 1;
        let mut active = vec![false; nt_count * width];
        let mut frames: Vec<Frame> = Vec::with_capacity(64);
        let mut diverged_at: Option<(String, usize)> = None;

        enum Control {
            Eval(u32, usize),
            Return(Res),
        }
        let mut control = Control::Eval(root, 0);

        loop {
            match control {
                Control::Eval(id, pos) => {
                    if frames.len() >= self.frame_budget {
                        return Err(RecognizeError::FrameBudget(self.frame_budget));
                    }
                    match arena[id as usize] {
                        CExpr::Empty => control = Control::Return(Res::Ok(0)),
                        CExpr::Fail => control = Control::Return(Res::Fail),
                        CExpr::Terminal(c) => {
                            control = Control::Return(if input.get(pos) == Some(&c) {
                                Res::Ok(1)
                            } else {
                                Res::Fail
                            });
                        }
                        CExpr::Not(child) => {
                            frames.push(Frame::Not);
                            control = Control::Eval(child, pos);
                        }
                        CExpr::And(child) => {
                            frames.push(Frame::And);
                            control = Control::Eval(child, pos);
                        }
                        CExpr::Seq(a, b) => {
                            frames.push(Frame::SeqLeft { right: b, pos });
                            control = Control::Eval(a, pos);
                        }
                        CExpr::Choice(a, b) => {
                            frames.push(Frame::ChoiceLeft { alt: b, pos });
                            control = Control::Eval(a, pos);
                        }
                        CExpr::Ref(nt) => {
                            let slot = nt as usize * width + pos;
                            if active[slot] {
                                if diverged_at.is_none() {
                                    let name = self
                                        .grammar
                                        .name_of(nt as usize)
                                        .expect("index in range")
                                        .to_owned();
                                    diverged_at = Some((name, pos));
                                }
                                control = Control::Return(Res::Diverge);
                            } else {
                                active[slot] = true;
                                frames.push(Frame::Ref { nt, pos });
                                control = Control::Eval(self.rule_entry[nt as usize], pos);
                            }
                        }
                    }
                }
                Control::Return(res) => match frames.pop() {
                    None => {
                        let outcome = match res {
                            Res::Ok(k) => Outcome::Consumed(k),
                            Res::Fail => Outcome::Fail,
                            Res::Diverge => Outcome::Diverges,
                        };
                        return Ok(RecognizeReport {
                            outcome,
                            diverged_at,
                        });
                    }
                    Some(Frame::Not) => {
                        control = Control::Return(match res {
                            Res::Fail => Res::Ok(0),
                            Res::Ok(_) => Res::Fail,
                            Res::Diverge => Res::Diverge,
                        });
                    }
                    Some(Frame::And) => {
                        control = Control::Return(match res {
                            Res::Ok(_) => Res::Ok(0),
                            Res::Fail => Res::Fail,
                            Res::Diverge => Res::Diverge,
                        });
                    }
                    Some(Frame::SeqLeft { right, pos }) => match res {
                        Res::Ok(k) => {
                            frames.push(Frame::SeqRight { left_consumed: k });
                            control = Control::Eval(right, pos + k);
                        }
                        other => control = Control::Return(other),
                    },
                    Some(Frame::SeqRight { left_consumed }) => {
                        control = Control::Return(match res {
                            Res::Ok(k) => Res::Ok(left_consumed + k),
                            other => other,
                        });
                    }
                    Some(Frame::ChoiceLeft { alt, pos }) => match res {
                        Res::Fail => control = Control::Eval(alt, pos),
                        other => control = Control::Return(other),
                    },
                    Some(Frame::Ref { nt, pos }) => {
                        active[nt as usize * width + pos] = false;
                        control = Control::Return(res);
                    }
                },
            }
        }
    }
}

fn chars_of(input: &str) -> Vec<char> {
    input.chars().collect()
}

/// Recognition outcome of `expr` against `input`, under `grammar`'s rules.
pub fn recognize(
    grammar: &Grammar,
    expr: &ParseExpr,
    input: &str,
) -> Result<Outcome, RecognizeError> {
    let rec = Recognizer::new(grammar)?;
    Ok(rec.run_expr(expr, &chars_of(input))?.outcome)
}

/// Like [`recognize`], also reporting the divergence site if any.
pub fn recognize_report(
    grammar: &Grammar,
    expr: &ParseExpr,
    input: &str,
) -> Result<RecognizeReport, RecognizeError> {
    let rec = Recognizer::new(grammar)?;
    rec.run_expr(expr, &chars_of(input))
}

/// Whole-input membership: member iff the start rule consumes all of `input`.
pub fn recognizes(grammar: &Grammar, input: &str) -> Result<Membership, RecognizeError> {
    let rec = Recognizer::new(grammar)?;
    rec.membership(&chars_of(input))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_text;

    fn g(src: &str) -> Grammar {
        crate::desugar::desugar(&parse_text(src).unwrap()).unwrap()
    }

    fn outcome(grammar: &Grammar, expr: &ParseExpr, input: &str) -> Outcome {
        recognize(grammar, expr, input).unwrap()
    }

    // One fixture per case of the recognition procedure.

    #[test]
    fn empty_consumes_nothing() {
        let gr = g("S <- ()");
        assert_eq!(outcome(&gr, &ParseExpr::Empty, "ab"), Outcome::Consumed(0));
        assert_eq!(outcome(&gr, &ParseExpr::Empty, ""), Outcome::Consumed(0));
    }

    #[test]
    fn fail_rejects_everything() {
        let gr = g("S <- 'a'");
        assert_eq!(outcome(&gr, &ParseExpr::Fail, ""), Outcome::Fail);
        assert_eq!(outcome(&gr, &ParseExpr::Fail, "a"), Outcome::Fail);
    }

    #[test]
    fn terminal_matches_first_symbol_only() {
        let gr = g("S <- 'a' / 'b'");
        let a = ParseExpr::Terminal('a');
        assert_eq!(outcome(&gr, &a, "ab"), Outcome::Consumed(1));
        assert_eq!(outcome(&gr, &a, "ba"), Outcome::Fail);
        assert_eq!(outcome(&gr, &a, ""), Outcome::Fail);
    }

    #[test]
    fn not_succeeds_iff_child_rejects() {
        let gr = g("S <- 'a'");
        let e = ParseExpr::not(ParseExpr::Terminal('a'));
        assert_eq!(outcome(&gr, &e, "b"), Outcome::Consumed(0));
        assert_eq!(outcome(&gr, &e, "a"), Outcome::Fail);
    }

    #[test]
    fn and_accepts_without_consuming() {
        // The predicate looks ahead two symbols and consumes none of them.
        let gr = g("S <- &('a' 'a')");
        let e = gr.rule("S").unwrap().clone();
        assert_eq!(outcome(&gr, &e, "aa"), Outcome::Consumed(0));
        assert_eq!(outcome(&gr, &e, "ab"), Outcome::Fail);
    }

    #[test]
    fn seq_fails_when_either_part_fails() {
        let gr = g("S <- 'a' 'b'");
        let e = gr.rule("S").unwrap().clone();
        assert_eq!(outcome(&gr, &e, "ab"), Outcome::Consumed(2));
        assert_eq!(outcome(&gr, &e, "aa"), Outcome::Fail);
        assert_eq!(outcome(&gr, &e, "bb"), Outcome::Fail);
        assert_eq!(outcome(&gr, &e, "a"), Outcome::Fail);
    }

    #[test]
    fn choice_returns_first_non_fail_outcome() {
        let gr = g("S <- 'a' 'a' / 'a'");
        let e = gr.rule("S").unwrap().clone();
        // First alternative wins and its consumption is kept.
        assert_eq!(outcome(&gr, &e, "aa"), Outcome::Consumed(2));
        // First fails, second is tried at the same position.
        assert_eq!(outcome(&gr, &e, "ab"), Outcome::Consumed(1));
        assert_eq!(outcome(&gr, &e, "b"), Outcome::Fail);
    }

    #[test]
    fn reference_dispatches_to_rule() {
        let gr = g("S <- T\nT <- 'a'");
        assert_eq!(outcome(&gr, &ParseExpr::nt("T"), "a"), Outcome::Consumed(1));
    }

    #[test]
    fn empty_rule_recognizes_empty_input() {
        let gr = g("S <- ()");
        assert_eq!(recognizes(&gr, "").unwrap(), Membership::Member);
    }

    #[test]
    fn left_recursion_diverges() {
        let gr = g("A <- A 'a'");
        let report = recognize_report(&gr, &ParseExpr::nt("A"), "a").unwrap();
        assert_eq!(report.outcome, Outcome::Diverges);
        assert_eq!(report.diverged_at, Some(("A".to_owned(), 0)));
        assert_eq!(recognizes(&gr, "a").unwrap(), Membership::Diverges);
    }

    #[test]
    fn divergence_beats_frame_budget_on_left_recursion() {
        let gr = g("A <- A 'a'");
        let rec = Recognizer::new(&gr).unwrap().with_frame_budget(100);
        let input: Vec<char> = "a".chars().collect();
        assert_eq!(
            rec.run_nonterminal(0, &input).unwrap().outcome,
            Outcome::Diverges
        );
    }

    #[test]
    fn deep_consuming_recursion_hits_frame_budget() {
        let gr = g("A <- 'a' A / ()");
        let rec = Recognizer::new(&gr).unwrap().with_frame_budget(16);
        let input: Vec<char> = "aaaaaaaaaaaaaaaa".chars().collect();
        assert_eq!(
            rec.run_nonterminal(0, &input),
            Err(RecognizeError::FrameBudget(16))
        );
    }

    #[test]
    fn rejects_symbols_outside_alphabet() {
        let gr = g("S <- 'a'");
        assert_eq!(
            recognizes(&gr, "ax"),
            Err(RecognizeError::SymbolNotInAlphabet('x'))
        );
    }

    #[test]
    fn prefix_consumption_is_not_membership() {
        let gr = g("S <- 'a'");
        assert_eq!(recognizes(&gr, "aa").unwrap(), Membership::NonMember);
        assert_eq!(recognizes(&gr, "a").unwrap(), Membership::Member);
    }

    #[test]
    fn repeated_calls_agree() {
        let gr = g("S <- 'a' S 'a' / 'b'");
        let first = recognizes(&gr, "aabaa").unwrap();
        for _ in 0..3 {
            assert_eq!(recognizes(&gr, "aabaa").unwrap(), first);
        }
        assert_eq!(first, Membership::Member);
    }
}

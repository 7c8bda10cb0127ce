use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("rule head {0:?} is declared twice")]
    DuplicateRule(String),
    #[error("rule for {rule:?} references undefined nonterminal {name:?}")]
    UndefinedRef { rule: String, name: String },
    #[error("rule for {rule:?} uses terminal {symbol:?} outside the declared alphabet")]
    TerminalNotInAlphabet { rule: String, symbol: char },
    #[error("start symbol {0:?} has no rule")]
    UndefinedStart(String),
    #[error("nonterminal {0:?} collides with a terminal symbol")]
    NonterminalShadowsTerminal(String),
    #[error("grammar has no rules")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecognizeError {
    #[error("input symbol {0:?} is not in the declared terminal alphabet")]
    SymbolNotInAlphabet(char),
    #[error("recursion frame budget of {0} exceeded")]
    FrameBudget(usize),
    #[error("grammar still contains sugar; desugar it before recognition")]
    NotDesugared,
    #[error("expression references undefined nonterminal {0:?}")]
    UndefinedRef(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesugarError {
    #[error("fresh nonterminal {0:?} could not be allocated")]
    FreshNameCollision(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("grammar still contains sugar; desugar it before normalization")]
    NotDesugared,
}

/// A syntax or validation error in the grammar text format, with 1-based line position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct TextError {
    pub line: usize,
    pub message: String,
}

impl TextError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        TextError {
            line,
            message: message.into(),
        }
    }
}

//! Parsing expression grammars: AST and grammars, desugaring, binary
//! normal form, the recursive recognition procedure with divergence
//! detection, a linear-time tabular recognizer, a left-recursion lint,
//! and a line-oriented text format.

mod desugar;
mod error;
mod expr;
mod grammar;
mod lint;
mod normalize;
mod recognize;
mod tabular;
mod text;

pub use desugar::desugar;
pub use error::{DesugarError, GrammarError, NormalizeError, RecognizeError, TextError};
pub use expr::{ParseExpr, Symbol};
pub use grammar::{Grammar, NormalRule};
pub use lint::{check_left_recursion, LeftRecursionReport};
pub use normalize::normalize;
pub use recognize::{
    recognize, recognize_report, recognizes, Membership, Outcome, Recognizer, RecognizeReport,
    DEFAULT_FRAME_BUDGET,
};
pub use tabular::{recognize_tabular, recognize_tabular_chars, Cell, PackratTable};
pub use text::{parse_text, to_text};

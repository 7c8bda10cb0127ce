//! Linear-time tabular recognizer for grammars in binary normal form.
//!
//! The table is filled from the last input position down to position 0.
//! Within one position, nonterminal cells are resolved in dependency order;
//! a dependency cycle at the same position marks the participating cells
//! `Broken`. Readers treat `Broken` as `Fail`, and the table records whether
//! any broken cell was actually consulted — for total grammars it never is.

use crate::grammar::{Grammar, NormalRule};
use crate::recognize::Outcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cell {
    /// The rule accepts here, consuming this many symbols.
    Consumed(usize),
    Fail,
    /// Member of a same-position dependency cycle.
    Broken,
}

impl Cell {
    pub fn as_outcome(self) -> Option<Outcome> {
        match self {
            Cell::Consumed(k) => Some(Outcome::Consumed(k)),
            Cell::Fail => Some(Outcome::Fail),
            Cell::Broken => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PackratTable {
    input_len: usize,
    nt_count: usize,
    /// Row-major: `cells[pos * nt_count + nt]`.
    cells: Vec<Cell>,
    broken_consulted: bool,
}

impl PackratTable {
    pub fn input_len(&self) -> usize {
        self.input_len
    }

    pub fn cell(&self, pos: usize, nt: usize) -> Cell {
        self.cells[pos * self.nt_count + nt]
    }

    pub fn cell_named(&self, grammar: &Grammar, pos: usize, name: &str) -> Option<Cell> {
        Some(self.cell(pos, grammar.index_of(name)?))
    }

    /// Whether some non-broken cell read a broken one while the table was
    /// being filled.
    pub fn broken_consulted(&self) -> bool {
        self.broken_consulted
    }

    /// Membership judged from the start cell at position 0.
    pub fn start_is_member(&self, grammar: &Grammar) -> bool {
        let start = grammar.index_of(grammar.start()).expect("validated");
        matches!(self.cell(0, start), Cell::Consumed(k) if k == self.input_len)
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Slot {
    Unvisited,
    InProgress,
    Done(Cell),
}

struct Filler<'a> {
    rules: &'a [NormalRule],
    nt_count: usize,
    cells: Vec<Cell>,
    broken_consulted: bool,
}

impl Filler<'_> {
    // Resolve one cell at `pos`, following same-position dependencies.
    fn resolve(&mut self, slots: &mut [Slot], pos: usize, nt: usize, input: &[char]) -> Cell {
        match slots[nt] {
            Slot::Done(c) => return c,
            Slot::InProgress => {
                // Same-position cycle; every participant becomes Broken when
                // its own frame unwinds, so just report it here.
                return Cell::Broken;
            }
            Slot::Unvisited => {}
        }
        slots[nt] = Slot::InProgress;
        let cell = self.eval(slots, pos, nt, input);
        // A Broken result caused by a cycle through this cell stays Broken.
        slots[nt] = Slot::Done(cell);
        cell
    }

    fn read_later(&mut self, pos: usize, nt: usize) -> Cell {
        let cell = self.cells[pos * self.nt_count + nt];
        if cell == Cell::Broken {
            self.broken_consulted = true;
        }
        cell
    }

    fn eval(&mut self, slots: &mut [Slot], pos: usize, nt: usize, input: &[char]) -> Cell {
        match self.rules[nt] {
            NormalRule::Empty => Cell::Consumed(0),
            NormalRule::Fail => Cell::Fail,
            NormalRule::Terminal(c) => {
                if input.get(pos) == Some(&c) {
                    Cell::Consumed(1)
                } else {
                    Cell::Fail
                }
            }
            NormalRule::Not(b) => match self.resolve(slots, pos, b, input) {
                Cell::Fail => Cell::Consumed(0),
                Cell::Consumed(_) => Cell::Fail,
                Cell::Broken => Cell::Broken,
            },
            NormalRule::And(b) => match self.resolve(slots, pos, b, input) {
                Cell::Consumed(_) => Cell::Consumed(0),
                Cell::Fail => Cell::Fail,
                Cell::Broken => Cell::Broken,
            },
            NormalRule::Seq(b, c) => match self.resolve(slots, pos, b, input) {
                Cell::Fail => Cell::Fail,
                Cell::Broken => Cell::Broken,
                Cell::Consumed(k) => {
                    let second = if k == 0 {
                        self.resolve(slots, pos, c, input)
                    } else {
                        // Later position: already filled, broken reads count
                        // as consultations.
                        match self.read_later(pos + k, c) {
                            Cell::Broken => Cell::Fail,
                            other => other,
                        }
                    };
                    match second {
                        Cell::Consumed(k2) => Cell::Consumed(k + k2),
                        Cell::Fail => Cell::Fail,
                        Cell::Broken => Cell::Broken,
                    }
                }
            },
            NormalRule::Choice(b, c) => match self.resolve(slots, pos, b, input) {
                Cell::Consumed(k) => Cell::Consumed(k),
                Cell::Fail => self.resolve(slots, pos, c, input),
                Cell::Broken => Cell::Broken,
            },
        }
    }
}

/// Fill the packrat table for `input`.
///
/// # Panics
///
/// Panics if the grammar is not in binary normal form; normalize first.
pub fn recognize_tabular(grammar: &Grammar, input: &str) -> PackratTable {
    let input: Vec<char> = input.chars().collect();
    recognize_tabular_chars(grammar, &input)
}

/// [`recognize_tabular`] over an already-split input.
pub fn recognize_tabular_chars(grammar: &Grammar, input: &[char]) -> PackratTable {
    let rules = grammar
        .normal_rules()
        .expect("tabular recognition requires binary normal form");
    let nt_count = rules.len();
    let n = input.len();
    let mut filler = Filler {
        rules: &rules,
        nt_count,
        cells: vec![Cell::Fail; (n + 1) * nt_count],
        broken_consulted: false,
    };
    for pos in (0..=n).rev() {
        let mut slots = vec![Slot::Unvisited; nt_count];
        for nt in 0..nt_count {
            filler.resolve(&mut slots, pos, nt, input);
        }
        for nt in 0..nt_count {
            if let Slot::Done(cell) = slots[nt] {
                filler.cells[pos * nt_count + nt] = cell;
            }
        }
    }
    PackratTable {
        input_len: n,
        nt_count,
        cells: filler.cells,
        broken_consulted: filler.broken_consulted,
    }
}

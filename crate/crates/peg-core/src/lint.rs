//! Conservative left-recursion lint.
//!
//! Builds the "reachable without necessarily consuming input" relation
//! between nonterminals and reports its cycles. Predicates and `()` are
//! non-consuming; choice branches are explored independently; the right
//! part of a sequence is reachable when the left part may succeed without
//! consuming. A clean report implies the recursive recognizer cannot loop
//! on these grammars, but the lint may flag cycles that are unreachable in
//! practice.

use std::collections::BTreeSet;

use crate::expr::ParseExpr;
use crate::grammar::Grammar;

/// Cycles among nonterminals reachable at the current input position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeftRecursionReport {
    /// Each entry is one strongly connected component with a zero-consumption
    /// cycle, in rule order.
    pub cycles: Vec<Vec<String>>,
}

impl LeftRecursionReport {
    pub fn is_clean(&self) -> bool {
        self.cycles.is_empty()
    }
}

impl std::fmt::Display for LeftRecursionReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.cycles.is_empty() {
            writeln!(f, "no zero-consumption cycles")
        } else {
            for cycle in &self.cycles {
                writeln!(f, "cycle: {}", cycle.join(" -> "))?;
            }
            Ok(())
        }
    }
}

// May the expression succeed while consuming nothing? Over-approximated via
// a monotone fixpoint on the nonterminals.
fn nullable(e: &ParseExpr, nt_nullable: &[bool], grammar: &Grammar) -> bool {
    match e {
        ParseExpr::Empty => true,
        ParseExpr::Fail | ParseExpr::Terminal(_) => false,
        ParseExpr::Not(_) | ParseExpr::And(_) => true,
        ParseExpr::Ref(name) => nt_nullable[grammar.index_of(name).expect("validated")],
        ParseExpr::Seq(a, b) => {
            nullable(a, nt_nullable, grammar) && nullable(b, nt_nullable, grammar)
        }
        ParseExpr::Choice(a, b) => {
            nullable(a, nt_nullable, grammar) || nullable(b, nt_nullable, grammar)
        }
        _ => unreachable!("lint requires a desugared grammar"),
    }
}

fn first_refs(e: &ParseExpr, nt_nullable: &[bool], grammar: &Grammar, out: &mut BTreeSet<usize>) {
    match e {
        ParseExpr::Empty | ParseExpr::Fail | ParseExpr::Terminal(_) => {}
        ParseExpr::Ref(name) => {
            out.insert(grammar.index_of(name).expect("validated"));
        }
        ParseExpr::Not(x) | ParseExpr::And(x) => first_refs(x, nt_nullable, grammar, out),
        ParseExpr::Seq(a, b) => {
            first_refs(a, nt_nullable, grammar, out);
            if nullable(a, nt_nullable, grammar) {
                first_refs(b, nt_nullable, grammar, out);
            }
        }
        ParseExpr::Choice(a, b) => {
            first_refs(a, nt_nullable, grammar, out);
            first_refs(b, nt_nullable, grammar, out);
        }
        _ => unreachable!("lint requires a desugared grammar"),
    }
}

/// Report all nonterminal cycles traversable without consuming input.
///
/// # Panics
///
/// Panics if the grammar still contains sugar.
pub fn check_left_recursion(grammar: &Grammar) -> LeftRecursionReport {
    assert!(
        grammar.is_desugared(),
        "left-recursion lint requires a desugared grammar"
    );
    let n = grammar.nonterminal_count();

    let mut nt_nullable = vec![false; n];
    loop {
        let mut changed = false;
        for i in 0..n {
            if !nt_nullable[i]
                && nullable(grammar.rule_at(i).expect("in range"), &nt_nullable, grammar)
            {
                nt_nullable[i] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let mut edges: Vec<BTreeSet<usize>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut out = BTreeSet::new();
        first_refs(
            grammar.rule_at(i).expect("in range"),
            &nt_nullable,
            grammar,
            &mut out,
        );
        edges.push(out);
    }

    // Tarjan SCC, iterative.
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut sccs: Vec<Vec<usize>> = Vec::new();

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, std::collections::btree_set::Iter<usize>)> = Vec::new();
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        call.push((root, edges[root].iter()));
        while let Some((v, iter)) = call.last_mut() {
            let v = *v;
            if let Some(&w) = iter.next() {
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, edges[w].iter()));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some((parent, _)) = call.last() {
                    low[*parent] = low[*parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut component = Vec::new();
                    loop {
                        let w = stack.pop().expect("scc stack underflow");
                        on_stack[w] = false;
                        component.push(w);
                        if w == v {
                            break;
                        }
                    }
                    sccs.push(component);
                }
            }
        }
    }

    let mut cycles = Vec::new();
    for mut component in sccs {
        let cyclic = component.len() > 1 || edges[component[0]].contains(&component[0]);
        if cyclic {
            component.sort_unstable();
            cycles.push(
                component
                    .into_iter()
                    .map(|i| grammar.name_of(i).expect("in range").to_owned())
                    .collect(),
            );
        }
    }
    cycles.sort();
    LeftRecursionReport { cycles }
}

//! Propositional tautology checking by truth table. Atoms and conditionals
//! are opaque letters; conditionals that differ only in how they were
//! written share a letter.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use thiserror::Error;

use crate::formula::Formula;

/// Largest number of distinct letters a truth table is built for.
pub const MAX_LETTERS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TautError {
    #[error("{0} distinct opaque letters; truth tables are limited to {MAX_LETTERS}")]
    TooManyLetters(usize),
}

/// The propositional skeleton of a formula.
#[derive(Debug, Clone)]
pub enum Skeleton {
    Letter(usize),
    Const(bool),
    Not(alloc::boxed::Box<Skeleton>),
    And(alloc::boxed::Box<Skeleton>, alloc::boxed::Box<Skeleton>),
    Or(alloc::boxed::Box<Skeleton>, alloc::boxed::Box<Skeleton>),
    Implies(alloc::boxed::Box<Skeleton>, alloc::boxed::Box<Skeleton>),
    Iff(alloc::boxed::Box<Skeleton>, alloc::boxed::Box<Skeleton>),
}

impl Skeleton {
    pub fn eval(&self, row: u64) -> bool {
        match self {
            Skeleton::Letter(i) => row >> i & 1 == 1,
            Skeleton::Const(b) => *b,
            Skeleton::Not(a) => !a.eval(row),
            Skeleton::And(a, b) => a.eval(row) && b.eval(row),
            Skeleton::Or(a, b) => a.eval(row) || b.eval(row),
            Skeleton::Implies(a, b) => !a.eval(row) || b.eval(row),
            Skeleton::Iff(a, b) => a.eval(row) == b.eval(row),
        }
    }
}

/// Skeleton of `f` plus its letters, in order of first occurrence.
pub fn skeleton(f: &Formula) -> (Skeleton, Vec<Formula>) {
    let mut letters = BTreeMap::new();
    let mut order = Vec::new();
    let s = build(f, &mut letters, &mut order);
    (s, order)
}

fn build(f: &Formula, letters: &mut BTreeMap<Formula, usize>, order: &mut Vec<Formula>) -> Skeleton {
    use alloc::boxed::Box;
    let mut bx = |g: &Formula| Box::new(build(g, letters, order));
    match f {
        Formula::True => Skeleton::Const(true),
        Formula::False => Skeleton::Const(false),
        Formula::Not(a) => Skeleton::Not(bx(a)),
        Formula::And(a, b) => Skeleton::And(bx(a), bx(b)),
        Formula::Or(a, b) => Skeleton::Or(bx(a), bx(b)),
        Formula::Implies(a, b) => Skeleton::Implies(bx(a), bx(b)),
        Formula::Iff(a, b) => Skeleton::Iff(bx(a), bx(b)),
        Formula::Atom(_) | Formula::Cf { .. } => {
            let key = f.without_sugar();
            let next = letters.len();
            let i = *letters.entry(key).or_insert_with(|| {
                order.push(f.clone());
                next
            });
            Skeleton::Letter(i)
        }
    }
}

/// A row (bit `i` = letter `i`) falsifying `f`, or `None` if `f` is a
/// tautology.
pub fn falsifying_row(f: &Formula) -> Result<Option<u64>, TautError> {
    let (s, letters) = skeleton(f);
    if letters.len() > MAX_LETTERS {
        return Err(TautError::TooManyLetters(letters.len()));
    }
    Ok((0..1u64 << letters.len()).find(|&row| !s.eval(row)))
}

pub fn is_tautology(f: &Formula) -> Result<bool, TautError> {
    Ok(falsifying_row(f)?.is_none())
}

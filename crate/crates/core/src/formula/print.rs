//! Concrete syntax printer. Emits the fewest parentheses that still parse
//! back to the same tree.

use core::fmt::{self, Display, Formatter, Write};

use super::ast::{Atom, Formula};

const CF: u8 = 0;
const IMP: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const UNARY: u8 = 4;
const PRIMARY: u8 = 5;

/// Bindings of an intervention node that the parser would rebuild exactly.
fn printable_bindings(f: &Formula) -> Option<(alloc::vec::Vec<&Atom>, &Formula)> {
    let (atoms, body) = f.as_intervention()?;
    let Formula::Cf { antecedent, .. } = f else { return None };
    let rebuilt = Formula::conjunction(atoms.iter().map(|a| Formula::Atom((*a).clone())));
    (rebuilt == **antecedent).then_some((atoms, body))
}

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Atom(_) | Formula::True | Formula::False => PRIMARY,
        Formula::Not(_) => UNARY,
        Formula::And(..) => AND,
        Formula::Or(..) => OR,
        Formula::Implies(..) | Formula::Iff(..) => IMP,
        Formula::Cf { .. } => {
            if printable_bindings(f).is_some() {
                UNARY
            } else {
                CF
            }
        }
    }
}

fn write_at(out: &mut Formatter<'_>, f: &Formula, min: u8) -> fmt::Result {
    if level(f) < min {
        out.write_char('(')?;
        write_formula(out, f)?;
        out.write_char(')')
    } else {
        write_formula(out, f)
    }
}

fn write_formula(out: &mut Formatter<'_>, f: &Formula) -> fmt::Result {
    match f {
        Formula::Atom(a) => write!(out, "{}={}", a.var, a.value),
        Formula::True => out.write_str("true"),
        Formula::False => out.write_str("false"),
        Formula::Not(a) => {
            out.write_char('!')?;
            write_at(out, a, UNARY)
        }
        Formula::And(a, b) => binary(out, a, " & ", b, AND, UNARY),
        Formula::Or(a, b) => binary(out, a, " | ", b, OR, AND),
        Formula::Implies(a, b) => binary(out, a, " -> ", b, OR, OR),
        Formula::Iff(a, b) => binary(out, a, " <-> ", b, OR, OR),
        Formula::Cf { antecedent, consequent, .. } => match printable_bindings(f) {
            Some((atoms, body)) => {
                out.write_char('[')?;
                for (i, a) in atoms.iter().enumerate() {
                    if i > 0 {
                        out.write_str("; ")?;
                    }
                    write!(out, "{}<-{}", a.var, a.value)?;
                }
                out.write_char(']')?;
                write_at(out, body, UNARY)
            }
            None => binary(out, antecedent, " ~> ", consequent, IMP, IMP),
        },
    }
}

fn binary(out: &mut Formatter<'_>, a: &Formula, op: &str, b: &Formula, left: u8, right: u8) -> fmt::Result {
    write_at(out, a, left)?;
    out.write_str(op)?;
    write_at(out, b, right)
}

impl Display for Formula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_formula(f, self)
    }
}

impl Display for Atom {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.var, self.value)
    }
}

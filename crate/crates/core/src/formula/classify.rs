use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::ast::Formula;
use crate::signature::{Signature, Value, Vocabulary};

/// The sublanguages, smallest first. Each includes the ones before it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LangClass {
    /// Boolean combinations of `[Y<-y](X=x)`.
    Lprop,
    /// Boolean combinations of `[Y<-y]phi`, `phi` propositional.
    Lex,
    /// Arbitrary antecedents, no conditional nested inside another.
    Lc1,
    /// Full nesting.
    Lc,
}

impl LangClass {
    pub fn label(self) -> &'static str {
        match self {
            LangClass::Lprop => "LPROP",
            LangClass::Lex => "LEX",
            LangClass::Lc1 => "LC1",
            LangClass::Lc => "LC",
        }
    }
}

impl fmt::Display for LangClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Smallest sublanguage containing `f`.
pub fn classify(f: &Formula) -> LangClass {
    let mut class = LangClass::Lprop;
    visit_top(f, &mut class);
    class
}

fn visit_top(f: &Formula, class: &mut LangClass) {
    match f {
        Formula::Cf { antecedent, consequent, .. } => {
            if antecedent.contains_cf() || consequent.contains_cf() {
                *class = LangClass::Lc;
                return;
            }
            let bump = match f.as_intervention() {
                None => LangClass::Lc1,
                Some((_, Formula::Atom(_))) => LangClass::Lprop,
                Some(_) => LangClass::Lex,
            };
            *class = (*class).max(bump);
        }
        _ => {
            for c in f.children() {
                visit_top(c, class);
            }
        }
    }
}

/// Problems found by [`well_formed`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Diagnostic {
    UnknownVariable(String),
    NotEndogenous(String),
    ValueOutOfRange { var: String, value: Value },
    DuplicateBinding(String),
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::UnknownVariable(v) => write!(f, "unknown variable `{v}`"),
            Diagnostic::NotEndogenous(v) => write!(f, "`{v}` is exogenous; formulas may only mention endogenous variables"),
            Diagnostic::ValueOutOfRange { var, value } => write!(f, "value {value} is not in the range of `{var}`"),
            Diagnostic::DuplicateBinding(v) => write!(f, "`{v}` is bound twice in one intervention"),
        }
    }
}

/// Checks that every atom names an endogenous variable with an in-range
/// value and that no intervention binds a variable twice.
pub fn well_formed(f: &Formula, sig: &Signature) -> Result<(), Vec<Diagnostic>> {
    check(f, sig.vocabulary(), |name| sig.is_exogenous(name))
}

/// [`well_formed`] against a bare vocabulary (no exogenous variables).
pub fn well_formed_in(f: &Formula, vocab: &Vocabulary) -> Result<(), Vec<Diagnostic>> {
    check(f, vocab, |_| false)
}

fn check(f: &Formula, vocab: &Vocabulary, exogenous: impl Fn(&str) -> bool) -> Result<(), Vec<Diagnostic>> {
    let mut diags = BTreeSet::new();
    for atom in f.atoms() {
        match vocab.range(&atom.var) {
            Some(range) if !range.contains(&atom.value) => {
                diags.insert(Diagnostic::ValueOutOfRange { var: atom.var.clone(), value: atom.value });
            }
            Some(_) => {}
            None if exogenous(&atom.var) => {
                diags.insert(Diagnostic::NotEndogenous(atom.var.clone()));
            }
            None => {
                diags.insert(Diagnostic::UnknownVariable(atom.var.clone()));
            }
        }
    }
    duplicates(f, &mut diags);
    if diags.is_empty() {
        Ok(())
    } else {
        Err(diags.into_iter().collect())
    }
}

fn duplicates(f: &Formula, diags: &mut BTreeSet<Diagnostic>) {
    if let Some((bindings, _)) = f.as_intervention() {
        let mut seen = BTreeSet::new();
        for b in bindings {
            if !seen.insert(b.var.as_str()) {
                diags.insert(Diagnostic::DuplicateBinding(b.var.clone()));
            }
        }
    }
    for c in f.children() {
        duplicates(c, diags);
    }
}

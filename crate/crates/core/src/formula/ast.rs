use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use crate::signature::Value;

/// The primitive proposition `var=value`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub var: String,
    pub value: Value,
}

impl Atom {
    pub fn new(var: impl Into<String>, value: Value) -> Self {
        Self { var: var.into(), value }
    }
}

/// Formulas of the full counterfactual language.
///
/// `Cf` is the counterfactual conditional `antecedent ~> consequent`. When
/// `intervention` is set the node was written as an intervention prefix
/// `[X<-x; ...]consequent`; its antecedent is then `true` (the explicit empty
/// intervention `[]`) or a left-nested conjunction of atoms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Atom),
    True,
    False,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Cf {
        antecedent: Box<Formula>,
        consequent: Box<Formula>,
        intervention: bool,
    },
}

impl Formula {
    pub fn atom(var: impl Into<String>, value: Value) -> Self {
        Formula::Atom(Atom::new(var, value))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn cf(antecedent: Formula, consequent: Formula) -> Self {
        Formula::Cf { antecedent: Box::new(antecedent), consequent: Box::new(consequent), intervention: false }
    }

    /// Left-nested conjunction; `true` when empty.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Self {
        parts.into_iter().reduce(Formula::and).unwrap_or(Formula::True)
    }

    /// Left-nested disjunction; `false` when empty.
    pub fn disjunction(parts: impl IntoIterator<Item = Formula>) -> Self {
        parts.into_iter().reduce(Formula::or).unwrap_or(Formula::False)
    }

    /// `[X1<-x1; ...; Xk<-xk]body`. With no bindings this is `body` itself.
    pub fn intervention<S: Into<String>>(bindings: impl IntoIterator<Item = (S, Value)>, body: Formula) -> Self {
        let atoms: Vec<Formula> = bindings.into_iter().map(|(v, x)| Formula::atom(v, x)).collect();
        if atoms.is_empty() {
            return body;
        }
        Formula::Cf {
            antecedent: Box::new(Formula::conjunction(atoms)),
            consequent: Box::new(body),
            intervention: true,
        }
    }

    /// Like [`Formula::intervention`], but an empty binding list gives the
    /// explicit empty intervention `[]body`, which quantifies over the
    /// solutions of the unmodified equations.
    pub fn explicit_intervention<S: Into<String>>(
        bindings: impl IntoIterator<Item = (S, Value)>,
        body: Formula,
    ) -> Self {
        let atoms: Vec<Formula> = bindings.into_iter().map(|(v, x)| Formula::atom(v, x)).collect();
        Formula::Cf {
            antecedent: Box::new(Formula::conjunction(atoms)),
            consequent: Box::new(body),
            intervention: true,
        }
    }

    /// The dual `<X<-x>body`, i.e. `!([X<-x]!body)`.
    pub fn diamond<S: Into<String>>(bindings: impl IntoIterator<Item = (S, Value)>, body: Formula) -> Self {
        Formula::not(Formula::explicit_intervention(bindings, Formula::not(body)))
    }

    /// For an intervention node, its bindings (in written order) and body.
    pub fn as_intervention(&self) -> Option<(Vec<&Atom>, &Formula)> {
        match self {
            Formula::Cf { antecedent, consequent, intervention: true } => {
                let atoms = match antecedent.as_ref() {
                    Formula::True => Vec::new(),
                    a => conjunct_atoms(a)?,
                };
                Some((atoms, consequent))
            }
            _ => None,
        }
    }

    /// The same formula with every intervention node turned into a plain
    /// conditional.
    pub fn without_sugar(&self) -> Formula {
        self.map_children(&|f| f.without_sugar()).with_intervention_flag(false)
    }

    fn with_intervention_flag(mut self, flag: bool) -> Self {
        if let Formula::Cf { intervention, .. } = &mut self {
            *intervention = flag;
        }
        self
    }

    fn map_children(&self, f: &dyn Fn(&Formula) -> Formula) -> Formula {
        match self {
            Formula::Atom(_) | Formula::True | Formula::False => self.clone(),
            Formula::Not(a) => Formula::not(f(a)),
            Formula::And(a, b) => Formula::and(f(a), f(b)),
            Formula::Or(a, b) => Formula::or(f(a), f(b)),
            Formula::Implies(a, b) => Formula::implies(f(a), f(b)),
            Formula::Iff(a, b) => Formula::iff(f(a), f(b)),
            Formula::Cf { antecedent, consequent, intervention } => Formula::Cf {
                antecedent: Box::new(f(antecedent)),
                consequent: Box::new(f(consequent)),
                intervention: *intervention,
            },
        }
    }

    /// Structural equality ignoring how conditionals were written.
    pub fn same_modulo_sugar(&self, other: &Formula) -> bool {
        use Formula::*;
        match (self, other) {
            (Atom(a), Atom(b)) => a == b,
            (True, True) | (False, False) => true,
            (Not(a), Not(b)) => a.same_modulo_sugar(b),
            (And(a1, b1), And(a2, b2))
            | (Or(a1, b1), Or(a2, b2))
            | (Implies(a1, b1), Implies(a2, b2))
            | (Iff(a1, b1), Iff(a2, b2)) => a1.same_modulo_sugar(a2) && b1.same_modulo_sugar(b2),
            (Cf { antecedent: a1, consequent: c1, .. }, Cf { antecedent: a2, consequent: c2, .. }) => {
                a1.same_modulo_sugar(a2) && c1.same_modulo_sugar(c2)
            }
            _ => false,
        }
    }

    /// Immediate subformulas.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) | Formula::True | Formula::False => Vec::new(),
            Formula::Not(a) => alloc::vec![a.as_ref()],
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                alloc::vec![a.as_ref(), b.as_ref()]
            }
            Formula::Cf { antecedent, consequent, .. } => alloc::vec![antecedent.as_ref(), consequent.as_ref()],
        }
    }

    /// Every atom occurring in the formula, in left-to-right order.
    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        if let Formula::Atom(a) = self {
            out.push(a);
        }
        for c in self.children() {
            c.collect_atoms(out);
        }
    }

    pub fn contains_cf(&self) -> bool {
        matches!(self, Formula::Cf { .. }) || self.children().into_iter().any(Formula::contains_cf)
    }

    /// Maximum nesting depth of conditionals.
    pub fn cf_depth(&self) -> usize {
        let inner = self.children().into_iter().map(Formula::cf_depth).max().unwrap_or(0);
        match self {
            Formula::Cf { .. } => inner + 1,
            _ => inner,
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Formula::size).sum::<usize>()
    }
}

/// Atoms of a left- or right-nested conjunction of atoms.
pub(crate) fn conjunct_atoms(f: &Formula) -> Option<Vec<&Atom>> {
    match f {
        Formula::Atom(a) => Some(alloc::vec![a]),
        Formula::And(a, b) => {
            let mut left = conjunct_atoms(a)?;
            left.extend(conjunct_atoms(b)?);
            Some(left)
        }
        _ => None,
    }
}

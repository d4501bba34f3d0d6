//! Line-by-line checking of Hilbert-style proofs.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::axioms::{instantiate, Schema, SchemaError, Substitution};
use crate::formula::Formula;
use crate::signature::Vocabulary;
use crate::taut::{is_tautology, TautError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    MP,
    RA1,
    RA2,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::MP => "MP",
            Rule::RA1 => "RA1",
            Rule::RA2 => "RA2",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [Rule::MP, Rule::RA1, Rule::RA2].into_iter().find(|r| r.name().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Enabled axiom schemas and rules. A0 and modus ponens are always on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomBase {
    axioms: BTreeSet<Schema>,
    rules: BTreeSet<Rule>,
}

const PROOF_SCHEMAS: [Schema; 11] = [
    Schema::A0,
    Schema::A1,
    Schema::A2,
    Schema::A3,
    Schema::A4,
    Schema::A5,
    Schema::A6,
    Schema::A7,
    Schema::V1,
    Schema::V2,
    Schema::V3,
];

impl AxiomBase {
    /// A0 and modus ponens only.
    pub fn minimal() -> Self {
        Self { axioms: [Schema::A0].into(), rules: [Rule::MP].into() }
    }

    /// AX: A0-A6 with RA1, RA2 and modus ponens.
    pub fn ax() -> Self {
        Self {
            axioms: [Schema::A0, Schema::A1, Schema::A2, Schema::A3, Schema::A4, Schema::A5, Schema::A6].into(),
            rules: [Rule::MP, Rule::RA1, Rule::RA2].into(),
        }
    }

    /// Adds a schema; only A0-A7 and V1-V3 may appear in proofs.
    pub fn with(mut self, schema: Schema) -> Result<Self, ProofError> {
        if !PROOF_SCHEMAS.contains(&schema) {
            return Err(ProofError::NotAProofSchema(schema));
        }
        self.axioms.insert(schema);
        Ok(self)
    }

    pub fn without(mut self, schema: Schema) -> Self {
        if schema != Schema::A0 {
            self.axioms.remove(&schema);
        }
        self
    }

    pub fn with_rule(mut self, rule: Rule) -> Self {
        self.rules.insert(rule);
        self
    }

    pub fn without_rule(mut self, rule: Rule) -> Self {
        if rule != Rule::MP {
            self.rules.remove(&rule);
        }
        self
    }

    pub fn axioms(&self) -> impl Iterator<Item = Schema> + '_ {
        self.axioms.iter().copied()
    }

    pub fn rules(&self) -> impl Iterator<Item = Rule> + '_ {
        self.rules.iter().copied()
    }

    pub fn allows(&self, schema: Schema) -> bool {
        self.axioms.contains(&schema)
    }

    pub fn allows_rule(&self, rule: Rule) -> bool {
        self.rules.contains(&rule)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error("{0} cannot be used as a proof axiom")]
    NotAProofSchema(Schema),
}

/// Where an RA1 or RA2 premise comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Premise {
    /// An earlier line (0-based).
    Line(usize),
    /// A propositional tautology, checked by truth table.
    Taut,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    Axiom { schema: Schema, subst: Substitution },
    /// From line `minor` (`phi`) and line `major` (`phi -> psi`), infer `psi`.
    MP { minor: usize, major: usize },
    RA1(Premise),
    RA2(Premise),
    /// The line is a propositional tautology (an A0 instance).
    Taut,
}

impl Justification {
    pub fn kind(&self) -> &'static str {
        match self {
            Justification::Axiom { .. } => "axiom",
            Justification::MP { .. } => "mp",
            Justification::RA1(_) => "ra1",
            Justification::RA2(_) => "ra2",
            Justification::Taut => "taut",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofLine {
    pub formula: Formula,
    pub by: Justification,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofScript {
    pub lines: Vec<ProofLine>,
    /// Needed by schemas that range over a variable's values (V1).
    pub vocabulary: Option<Vocabulary>,
}

/// Why a line fails.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("bad substitution: {0}")]
    BadSubstitution(String),
    #[error("side condition violated: {0}")]
    SideConditionViolated(String),
    #[error("{0}")]
    RuleMismatch(String),
    #[error("line {cited} is cited from line {at}")]
    ForwardReference { at: usize, cited: usize },
    #[error("{0} is not enabled in this axiom base")]
    SchemaDisabled(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProofOutcome {
    Verified(Formula),
    /// The first failing line (0-based).
    FirstFailure { line: usize, violation: Violation },
}

impl ProofOutcome {
    pub fn is_verified(&self) -> bool {
        matches!(self, ProofOutcome::Verified(_))
    }
}

fn mismatch(msg: impl Into<String>) -> Violation {
    Violation::RuleMismatch(msg.into())
}

fn from_schema_error(e: SchemaError) -> Violation {
    match e {
        SchemaError::SideConditionViolated(m) => Violation::SideConditionViolated(m),
        SchemaError::Taut(TautError::TooManyLetters(n)) => {
            Violation::SideConditionViolated(format!("{n} letters is too many for a truth table"))
        }
        other => Violation::BadSubstitution(other.to_string()),
    }
}

fn taut(f: &Formula) -> Result<bool, Violation> {
    is_tautology(f).map_err(|TautError::TooManyLetters(n)| {
        Violation::SideConditionViolated(format!("{n} letters is too many for a truth table"))
    })
}

/// `(phi ~> psi) -> (phi2 ~> psi2)`, split into its four parts.
fn rule_shape(f: &Formula) -> Option<(&Formula, &Formula, &Formula, &Formula)> {
    let Formula::Implies(l, r) = f else { return None };
    match (l.as_ref(), r.as_ref()) {
        (
            Formula::Cf { antecedent: a1, consequent: c1, .. },
            Formula::Cf { antecedent: a2, consequent: c2, .. },
        ) => Some((a1, c1, a2, c2)),
        _ => None,
    }
}

fn cited(at: usize, k: usize) -> Result<(), Violation> {
    if k >= at {
        Err(Violation::ForwardReference { at, cited: k })
    } else {
        Ok(())
    }
}

fn premise_holds(lines: &[ProofLine], at: usize, premise: &Premise, needed: &Formula) -> Result<(), Violation> {
    match premise {
        Premise::Line(k) => {
            cited(at, *k)?;
            if lines[*k].formula.same_modulo_sugar(needed) {
                Ok(())
            } else {
                Err(mismatch(format!("line {k} is not the premise {needed}")))
            }
        }
        Premise::Taut => {
            if taut(needed)? {
                Ok(())
            } else {
                Err(mismatch(format!("the premise {needed} is not a tautology")))
            }
        }
    }
}

/// Checks line `i` against the lines before it.
pub fn check_line(base: &AxiomBase, script: &ProofScript, i: usize) -> Result<(), Violation> {
    let lines = &script.lines;
    let line = &lines[i];
    let f = &line.formula;
    match &line.by {
        Justification::Axiom { schema, subst } => {
            if !base.allows(*schema) {
                return Err(Violation::SchemaDisabled(schema.name().to_string()));
            }
            if !PROOF_SCHEMAS.contains(schema) {
                return Err(Violation::SchemaDisabled(schema.name().to_string()));
            }
            let inst = instantiate(*schema, subst, script.vocabulary.as_ref()).map_err(from_schema_error)?;
            if inst.same_modulo_sugar(f) {
                Ok(())
            } else {
                Err(mismatch(format!("the {schema} instance under this substitution is {inst}")))
            }
        }
        Justification::Taut => {
            if taut(f)? {
                Ok(())
            } else {
                Err(mismatch("not a propositional tautology"))
            }
        }
        Justification::MP { minor, major } => {
            cited(i, *minor)?;
            cited(i, *major)?;
            match &lines[*major].formula {
                Formula::Implies(a, b) if a.same_modulo_sugar(&lines[*minor].formula) && b.same_modulo_sugar(f) => {
                    Ok(())
                }
                _ => Err(mismatch(format!("line {major} is not `line {minor} -> this line`"))),
            }
        }
        Justification::RA1(p) => {
            if !base.allows_rule(Rule::RA1) {
                return Err(Violation::SchemaDisabled("RA1".into()));
            }
            let (a1, c1, a2, c2) =
                rule_shape(f).ok_or_else(|| mismatch("RA1 concludes (phi ~> psi) -> (phi2 ~> psi)"))?;
            if !c1.same_modulo_sugar(c2) {
                return Err(mismatch("RA1 keeps the consequent"));
            }
            premise_holds(lines, i, p, &Formula::iff(a1.clone(), a2.clone()))
        }
        Justification::RA2(p) => {
            if !base.allows_rule(Rule::RA2) {
                return Err(Violation::SchemaDisabled("RA2".into()));
            }
            let (a1, c1, a2, c2) =
                rule_shape(f).ok_or_else(|| mismatch("RA2 concludes (phi ~> psi) -> (phi ~> psi2)"))?;
            if !a1.same_modulo_sugar(a2) {
                return Err(mismatch("RA2 keeps the antecedent"));
            }
            premise_holds(lines, i, p, &Formula::implies(c1.clone(), c2.clone()))
        }
    }
}

/// Checks every line in order; the conclusion is the last line.
pub fn check_proof(base: &AxiomBase, script: &ProofScript) -> ProofOutcome {
    for i in 0..script.lines.len() {
        if let Err(violation) = check_line(base, script, i) {
            return ProofOutcome::FirstFailure { line: i, violation };
        }
    }
    match script.lines.last() {
        Some(l) => ProofOutcome::Verified(l.formula.clone()),
        None => ProofOutcome::FirstFailure { line: 0, violation: mismatch("the proof is empty") },
    }
}

/// Builds proofs line by line, computing each line's formula from its
/// justification.
#[derive(Debug, Clone, Default)]
pub struct ProofBuilder {
    lines: Vec<ProofLine>,
    vocabulary: Option<Vocabulary>,
}

impl ProofBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vocabulary(vocab: Vocabulary) -> Self {
        Self { lines: Vec::new(), vocabulary: Some(vocab) }
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn formula(&self, i: usize) -> &Formula {
        &self.lines[i].formula
    }

    pub fn push(&mut self, formula: Formula, by: Justification) -> usize {
        self.lines.push(ProofLine { formula, by });
        self.lines.len() - 1
    }

    pub fn axiom(&mut self, schema: Schema, subst: Substitution) -> Result<usize, SchemaError> {
        let f = instantiate(schema, &subst, self.vocabulary.as_ref())?;
        Ok(self.push(f, Justification::Axiom { schema, subst }))
    }

    pub fn taut(&mut self, f: Formula) -> usize {
        self.push(f, Justification::Taut)
    }

    /// Modus ponens from `minor` and `major`; `major` must be an
    /// implication.
    pub fn mp(&mut self, minor: usize, major: usize) -> usize {
        let Formula::Implies(_, b) = self.lines[major].formula.clone() else {
            panic!("line {major} is not an implication");
        };
        self.push(*b, Justification::MP { minor, major })
    }

    /// RA1: from `phi <-> phi2` infer `(phi ~> psi) -> (phi2 ~> psi)`.
    pub fn ra1(&mut self, premise: Premise, phi: Formula, phi2: Formula, psi: Formula) -> usize {
        let f = Formula::implies(Formula::cf(phi, psi.clone()), Formula::cf(phi2, psi));
        self.push(f, Justification::RA1(premise))
    }

    /// RA2: from `psi -> psi2` infer `(phi ~> psi) -> (phi ~> psi2)`.
    /// `phi_psi` is the conditional as it should appear (so intervention
    /// sugar is kept).
    pub fn ra2(&mut self, premise: Premise, phi_psi: Formula, psi2: Formula) -> usize {
        let Formula::Cf { antecedent, .. } = &phi_psi else { panic!("RA2 needs a conditional") };
        let f = Formula::implies(phi_psi.clone(), Formula::cf((**antecedent).clone(), psi2));
        self.push(f, Justification::RA2(premise))
    }

    /// Derives `conclusion` from earlier lines by a tautology
    /// `p1 -> (p2 -> ... -> conclusion)` and modus ponens.
    pub fn derive(&mut self, premises: &[usize], conclusion: Formula) -> usize {
        let chain = premises
            .iter()
            .rev()
            .fold(conclusion, |acc, &p| Formula::implies(self.lines[p].formula.clone(), acc));
        let mut at = self.taut(chain);
        for &p in premises {
            at = self.mp(p, at);
        }
        at
    }

    pub fn finish(self) -> ProofScript {
        ProofScript { lines: self.lines, vocabulary: self.vocabulary }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn a1_line() {
        let mut b = ProofBuilder::new();
        b.axiom(Schema::A1, Substitution::new().text("phi", "X1=0")).unwrap();
        let script = b.finish();
        assert_eq!(script.lines[0].formula.to_string(), "X1=0 ~> X1=0");
        assert_eq!(check_proof(&AxiomBase::ax(), &script), ProofOutcome::Verified(f("X1=0 ~> X1=0")));
    }

    #[test]
    fn mp_in_the_wrong_order() {
        let mut b = ProofBuilder::new();
        let p = b.axiom(Schema::A1, Substitution::new().text("phi", "X1=0")).unwrap();
        let imp = b.taut(f("(X1=0 ~> X1=0) -> (X1=0 ~> X1=0) | X2=1"));
        b.mp(p, imp);
        let mut script = b.finish();
        assert!(check_proof(&AxiomBase::ax(), &script).is_verified());
        script.lines[2].by = Justification::MP { minor: imp, major: p };
        assert!(matches!(
            check_proof(&AxiomBase::ax(), &script),
            ProofOutcome::FirstFailure { line: 2, violation: Violation::RuleMismatch(_) }
        ));
        script.lines[2].by = Justification::MP { minor: 2, major: imp };
        assert!(matches!(
            check_proof(&AxiomBase::ax(), &script),
            ProofOutcome::FirstFailure { line: 2, violation: Violation::ForwardReference { .. } }
        ));
    }

    #[test]
    fn disabled_schema() {
        let mut b = ProofBuilder::new();
        b.axiom(Schema::A4, Substitution::new().text("phi1", "P=1").text("phi2", "Q=1").text("psi", "R=1")).unwrap();
        let script = b.finish();
        assert!(check_proof(&AxiomBase::ax(), &script).is_verified());
        assert_eq!(
            check_proof(&AxiomBase::ax().without(Schema::A4), &script),
            ProofOutcome::FirstFailure { line: 0, violation: Violation::SchemaDisabled("A4".into()) }
        );
        assert!(AxiomBase::ax().with(Schema::C5).is_err());
    }

    #[test]
    fn rules_check_their_premises() {
        let mut b = ProofBuilder::new();
        b.ra1(Premise::Taut, f("P=1 & Q=1"), f("Q=1 & P=1"), f("R=1"));
        b.ra2(Premise::Taut, f("P=1 ~> Q=1 & R=1"), f("Q=1"));
        let script = b.finish();
        assert!(check_proof(&AxiomBase::ax(), &script).is_verified());
        assert!(!check_proof(&AxiomBase::ax().without_rule(Rule::RA2), &script).is_verified());

        let mut b = ProofBuilder::new();
        b.ra2(Premise::Taut, f("P=1 ~> Q=1"), f("Q=1 & R=1"));
        assert!(matches!(
            check_proof(&AxiomBase::ax(), &b.finish()),
            ProofOutcome::FirstFailure { line: 0, violation: Violation::RuleMismatch(_) }
        ));

        let mut b = ProofBuilder::new();
        let p = b.taut(f("P=1 & Q=1 -> P=1"));
        b.ra2(Premise::Line(p), f("R=1 ~> P=1 & Q=1"), f("P=1"));
        b.ra2(Premise::Line(p), f("R=1 ~> P=1"), f("Q=1"));
        assert!(matches!(
            check_proof(&AxiomBase::ax(), &b.finish()),
            ProofOutcome::FirstFailure { line: 2, violation: Violation::RuleMismatch(_) }
        ));
    }

    #[test]
    fn side_conditions_surface() {
        let mut b = ProofBuilder::new();
        b.push(
            f("X1=0 -> !X1=0"),
            Justification::Axiom {
                schema: Schema::V2,
                subst: Substitution::new().text("X", "X1").text("x", "0").text("x2", "0"),
            },
        );
        let base = AxiomBase::ax().with(Schema::V2).unwrap();
        assert!(matches!(
            check_proof(&base, &b.finish()),
            ProofOutcome::FirstFailure { violation: Violation::SideConditionViolated(_), .. }
        ));
    }
}

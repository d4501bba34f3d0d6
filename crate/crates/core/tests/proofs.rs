use std::collections::HashMap;

use cfworld_core::axioms::{check_formulas, find_countermodel, ClassDescriptor, ClassName, SearchOutcome};
use cfworld_core::formula::Formula;
use cfworld_core::proof::{
    check_proof, lemma_a1, neg_phi, phi_star, Justification, Premise, ProofOutcome, ProofScript,
};
use cfworld_core::taut::is_tautology;
use proptest::prelude::*;

fn conclusions(script: &ProofScript) -> Vec<Formula> {
    script.lines.iter().map(|l| l.formula.clone()).collect()
}

#[test]
fn lemma_lines_hold_in_every_small_structure() {
    let (base, script) = lemma_a1();
    assert!(check_proof(&base, &script).is_verified());
    let v = check_formulas(&conclusions(&script), &ClassDescriptor::binary(ClassName::M, 3)).unwrap();
    assert!(v.is_valid(), "{v:?}");
}

#[test]
fn neg_phi_lines_hold_in_full_structures() {
    let (base, script) = neg_phi();
    assert_eq!(check_proof(&base, &script), ProofOutcome::Verified(Formula::not(phi_star())));
    let lines = conclusions(&script);
    let cd = ClassDescriptor::binary(ClassName::Mf, 3);
    let targeted = check_formulas(&lines, &cd.clone().targeted()).unwrap();
    assert!(targeted.is_valid(), "{targeted:?}");
    let random = find_countermodel(&lines, &cd, 2_000, 7).unwrap();
    assert_eq!(random, SearchOutcome::NotFound { trials: 2_000 });
}

fn flipped(by: &Justification) -> Justification {
    match by {
        Justification::Axiom { .. } => Justification::Taut,
        Justification::Taut => Justification::RA2(Premise::Taut),
        Justification::MP { minor, major } => Justification::MP { minor: *major, major: *minor },
        Justification::RA1(p) => Justification::RA2(p.clone()),
        Justification::RA2(p) => Justification::RA1(p.clone()),
    }
}

fn assert_mutations_rejected(base: &cfworld_core::proof::AxiomBase, script: &ProofScript) {
    for i in 0..script.lines.len() {
        let mut negated = script.clone();
        negated.lines[i].formula = Formula::not(negated.lines[i].formula.clone());
        match check_proof(base, &negated) {
            ProofOutcome::FirstFailure { line, .. } => assert_eq!(line, i, "negating line {i}"),
            other => panic!("negating line {i} still verifies: {other:?}"),
        }
        let mut flip = script.clone();
        flip.lines[i].by = flipped(&flip.lines[i].by);
        match check_proof(base, &flip) {
            ProofOutcome::FirstFailure { line, .. } => assert_eq!(line, i, "flipping line {i}"),
            other => panic!("flipping line {i} still verifies: {other:?}"),
        }
    }
}

#[test]
fn lemma_rejects_every_single_line_mutation() {
    let (base, script) = lemma_a1();
    assert_mutations_rejected(&base, &script);
}

#[test]
fn neg_phi_rejects_every_single_line_mutation() {
    let (base, script) = neg_phi();
    assert_mutations_rejected(&base, &script);
}

// Truth tables built independently of the checker: letters are keyed by
// their text once intervention sugar is rewritten away.

fn plain(f: &Formula) -> Formula {
    let b = |g: &Formula| Box::new(plain(g));
    match f {
        Formula::Not(a) => Formula::Not(b(a)),
        Formula::And(x, y) => Formula::And(b(x), b(y)),
        Formula::Or(x, y) => Formula::Or(b(x), b(y)),
        Formula::Implies(x, y) => Formula::Implies(b(x), b(y)),
        Formula::Iff(x, y) => Formula::Iff(b(x), b(y)),
        Formula::Cf { antecedent, consequent, .. } => Formula::cf(plain(antecedent), plain(consequent)),
        other => other.clone(),
    }
}

fn collect(f: &Formula, letters: &mut HashMap<String, usize>) {
    match f {
        Formula::Atom(_) | Formula::Cf { .. } => {
            let n = letters.len();
            letters.entry(plain(f).to_string()).or_insert(n);
        }
        Formula::Not(a) => collect(a, letters),
        Formula::And(x, y) | Formula::Or(x, y) | Formula::Implies(x, y) | Formula::Iff(x, y) => {
            collect(x, letters);
            collect(y, letters);
        }
        Formula::True | Formula::False => {}
    }
}

fn value(f: &Formula, letters: &HashMap<String, usize>, row: u32) -> bool {
    let v = |g: &Formula| value(g, letters, row);
    match f {
        Formula::Atom(_) | Formula::Cf { .. } => row >> letters[&plain(f).to_string()] & 1 == 1,
        Formula::True => true,
        Formula::False => false,
        Formula::Not(a) => !v(a),
        Formula::And(x, y) => v(x) && v(y),
        Formula::Or(x, y) => v(x) || v(y),
        Formula::Implies(x, y) => !v(x) || v(y),
        Formula::Iff(x, y) => v(x) == v(y),
    }
}

fn brute_force(f: &Formula) -> bool {
    let mut letters = HashMap::new();
    collect(f, &mut letters);
    assert!(letters.len() <= 8);
    (0..1u32 << letters.len()).all(|row| value(f, &letters, row))
}

fn letter() -> impl Strategy<Value = Formula> {
    prop_oneof![
        (0..2usize, 0..2i64).prop_map(|(v, x)| Formula::atom(format!("A{v}"), x)),
        (0..2usize, 0..2i64).prop_map(|(v, x)| Formula::intervention([(format!("A{v}"), 1)], Formula::atom("B", x))),
        (0..2usize, 0..2i64).prop_map(|(v, x)| Formula::cf(Formula::atom(format!("A{v}"), 1), Formula::atom("B", x))),
    ]
}

fn skeleton() -> impl Strategy<Value = Formula> {
    prop_oneof![4 => letter(), 1 => Just(Formula::True), 1 => Just(Formula::False)].prop_recursive(5, 40, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::iff(a, b)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3_000))]

    #[test]
    fn tautology_check_agrees_with_brute_force(f in skeleton()) {
        prop_assert_eq!(is_tautology(&f).unwrap(), brute_force(&f));
    }

    #[test]
    fn excluded_middle_instances_are_tautologies(f in skeleton()) {
        let lem = Formula::or(f.clone(), Formula::not(f));
        prop_assert!(is_tautology(&lem).unwrap());
        prop_assert!(brute_force(&lem));
    }
}

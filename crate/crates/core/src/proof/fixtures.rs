//! The two shipped derivations: the disjunctive-chaining lemma and the
//! derivation of the negated counterexample formula.

use alloc::vec::Vec;

use super::checker::{AxiomBase, Premise, ProofBuilder, ProofScript};
use crate::axioms::{Schema, Substitution};
use crate::formula::Formula;
use crate::signature::Vocabulary;

fn cf(a: &Formula, b: &Formula) -> Formula {
    Formula::cf(a.clone(), b.clone())
}

fn or(a: &Formula, b: &Formula) -> Formula {
    Formula::or(a.clone(), b.clone())
}

fn and(a: &Formula, b: &Formula) -> Formula {
    Formula::and(a.clone(), b.clone())
}

fn imp(a: &Formula, b: &Formula) -> Formula {
    Formula::implies(a.clone(), b.clone())
}

fn f3(schema: Schema, k: [&str; 3], v: [&Formula; 3]) -> (Schema, Substitution) {
    let mut s = Substitution::new();
    for (k, v) in k.iter().zip(v) {
        s = s.formula(k, v.clone());
    }
    (schema, s)
}

fn ax(b: &mut ProofBuilder, (schema, s): (Schema, Substitution)) -> usize {
    b.axiom(schema, s).expect("fixture substitutions are well formed")
}

/// Appends a derivation of `((f1 ~> f2) & (f2 ~> f3)) -> (f1 | f2 ~> f3)`
/// and returns the line proving it.
pub fn lemma(b: &mut ProofBuilder, f1: &Formula, f2: &Formula, f3_: &Formula) -> usize {
    let either = or(f1, f2);
    // (f1 ~> f2) -> (f1 | f2 ~> f2), from A1 and A4
    let refl = ax(b, (Schema::A1, Substitution::new().formula("phi", f2.clone())));
    let a4 = ax(b, f3(Schema::A4, ["phi1", "phi2", "psi"], [f1, f2, f2]));
    let eq1 = b.derive(&[refl, a4], imp(&cf(f1, f2), &cf(&either, f2)));

    // chi = f2 -> f3
    let chi = imp(f2, f3_);
    let rest = and(f1, &Formula::not(f2.clone()));
    let a1 = ax(b, (Schema::A1, Substitution::new().formula("phi", rest.clone())));
    let ra2 = b.ra2(Premise::Taut, cf(&rest, &rest), chi.clone());
    let part_a = b.mp(a1, ra2);
    let part_b = b.ra2(Premise::Taut, cf(f2, f3_), chi.clone());
    let a4b = ax(b, f3(Schema::A4, ["phi1", "phi2", "psi"], [&rest, f2, &chi]));
    let lle = b.ra1(Premise::Taut, or(&rest, f2), either.clone(), chi.clone());
    let eq2 = b.derive(&[part_a, part_b, a4b, lle], imp(&cf(f2, f3_), &cf(&either, &chi)));

    let a2 = ax(b, f3(Schema::A2, ["phi", "psi1", "psi2"], [&either, f2, &chi]));
    let rw = b.ra2(Premise::Taut, cf(&either, &and(f2, &chi)), f3_.clone());
    let hyp = and(&cf(f1, f2), &cf(f2, f3_));
    b.derive(&[eq1, eq2, a2, rw], imp(&hyp, &cf(&either, f3_)))
}

/// The lemma with `phi_i` the atom `Xi=1`, over three binary variables.
pub fn lemma_a1() -> (AxiomBase, ProofScript) {
    let x = |i: usize| Formula::atom(alloc::format!("X{i}"), 1);
    let mut b = ProofBuilder::with_vocabulary(Vocabulary::binary(3));
    lemma(&mut b, &x(1), &x(2), &x(3));
    (AxiomBase::ax(), b.finish())
}

/// `[X1<-1](X2=1 & X3=0) & [X2<-1](X3=1 & X1=0) & [X3<-1](X1=1 & X2=0)`.
pub fn phi_star() -> Formula {
    let p = |i: usize| Formula::atom(alloc::format!("X{i}"), 1);
    let q = |i: usize| Formula::atom(alloc::format!("X{i}"), 0);
    let cond = |i: usize, j: usize, k: usize| {
        Formula::intervention([(alloc::format!("X{i}"), 1)], Formula::and(p(j), q(k)))
    };
    Formula::conjunction([cond(1, 2, 3), cond(2, 3, 1), cond(3, 1, 2)])
}

/// The base the derivation of the negated formula uses: AX with V2 and V3.
pub fn neg_phi_base() -> AxiomBase {
    AxiomBase::ax().with(Schema::V2).and_then(|b| b.with(Schema::V3)).expect("V2 and V3 are proof schemas")
}

/// A derivation of `!phi_star()` under [`neg_phi_base`].
pub fn neg_phi() -> (AxiomBase, ProofScript) {
    let p: Vec<Formula> = (0..=3).map(|i| Formula::atom(alloc::format!("X{i}"), 1)).collect();
    let q: Vec<Formula> = (0..=3).map(|i| Formula::atom(alloc::format!("X{i}"), 0)).collect();
    let mut b = ProofBuilder::with_vocabulary(Vocabulary::binary(3));
    let phi = phi_star();
    let conj = |i: usize, j: usize, k: usize| {
        Formula::intervention([(alloc::format!("X{i}"), 1)], Formula::and(p[j].clone(), q[k].clone()))
    };
    // each conjunct of phi gives two conditionals by right weakening
    let weak = |b: &mut ProofBuilder, i: usize, j: usize, k: usize| {
        let c = conj(i, j, k);
        (b.ra2(Premise::Taut, c.clone(), p[j].clone()), b.ra2(Premise::Taut, c, q[k].clone()))
    };
    let (f12, f1q3) = weak(&mut b, 1, 2, 3);
    let (f23, f2q1) = weak(&mut b, 2, 3, 1);
    let (f31, f3q2) = weak(&mut b, 3, 1, 2);

    let psi = or(&or(&p[1], &p[2]), &p[3]);
    // psi ~> X1=0
    let l312 = lemma(&mut b, &p[3], &p[1], &p[2]);
    let l31_2_q1 = lemma(&mut b, &or(&p[3], &p[1]), &p[2], &q[1]);
    let lle1 = b.ra1(Premise::Taut, or(&or(&p[3], &p[1]), &p[2]), psi.clone(), q[1].clone());
    let s1 = b.derive(&[f31, f12, l312, f2q1, l31_2_q1, lle1], imp(&phi, &cf(&psi, &q[1])));
    // psi ~> X2=0
    let l123 = lemma(&mut b, &p[1], &p[2], &p[3]);
    let l12_3_q2 = lemma(&mut b, &or(&p[1], &p[2]), &p[3], &q[2]);
    let s2 = b.derive(&[f12, f23, l123, f3q2, l12_3_q2], imp(&phi, &cf(&psi, &q[2])));
    // psi ~> X3=0
    let l231 = lemma(&mut b, &p[2], &p[3], &p[1]);
    let l23_1_q3 = lemma(&mut b, &or(&p[2], &p[3]), &p[1], &q[3]);
    let lle3 = b.ra1(Premise::Taut, or(&or(&p[2], &p[3]), &p[1]), psi.clone(), q[3].clone());
    let s3 = b.derive(&[f23, f31, l231, f1q3, l23_1_q3, lle3], imp(&phi, &cf(&psi, &q[3])));

    // phi -> (psi ~> X1=0 & X2=0 & X3=0)
    let zeros = and(&and(&q[1], &q[2]), &q[3]);
    let a2a = ax(&mut b, f3(Schema::A2, ["phi", "psi1", "psi2"], [&psi, &q[1], &q[2]]));
    let q12 = and(&q[1], &q[2]);
    let a2b = ax(&mut b, f3(Schema::A2, ["phi", "psi1", "psi2"], [&psi, &q12, &q[3]]));
    let eq3 = b.derive(&[s1, s2, s3, a2a, a2b], imp(&phi, &cf(&psi, &zeros)));

    // psi ~> (X1!=0 | X2!=0 | X3!=0), by V2, A1 and RA2
    let v2: Vec<usize> = (1..=3)
        .map(|i| {
            let s = Substitution::new().var("X", alloc::format!("X{i}")).value("x", 1).value("x2", 0);
            b.axiom(Schema::V2, s).expect("V2 instance")
        })
        .collect();
    let nonzero = or(&or(&Formula::not(q[1].clone()), &Formula::not(q[2].clone())), &Formula::not(q[3].clone()));
    let vimp = b.derive(&v2, imp(&psi, &nonzero));
    let refl = ax(&mut b, (Schema::A1, Substitution::new().formula("phi", psi.clone())));
    let rw = b.ra2(Premise::Line(vimp), cf(&psi, &psi), nonzero.clone());
    let eq4 = b.mp(refl, rw);

    // phi -> (psi ~> false)
    let a2c = ax(&mut b, f3(Schema::A2, ["phi", "psi1", "psi2"], [&psi, &zeros, &nonzero]));
    let to_false = b.ra2(Premise::Taut, cf(&psi, &and(&zeros, &nonzero)), Formula::False);
    let s5 = b.derive(&[eq3, eq4, a2c, to_false], imp(&phi, &cf(&psi, &Formula::False)));

    // psi ~> false gives X1=1 ~> false, which V3 rules out
    let to_p1 = b.ra2(Premise::Taut, cf(&psi, &Formula::False), p[1].clone());
    let a3 = ax(&mut b, f3(Schema::A3, ["phi1", "phi2", "psi"], [&psi, &p[1], &Formula::False]));
    let lle = b.ra1(Premise::Taut, and(&psi, &p[1]), p[1].clone(), Formula::False);
    let v3 = b.axiom(Schema::V3, Substitution::new().bindings("Xs", [("X1", 1)])).expect("V3 instance");
    b.derive(&[s5, to_p1, a3, lle, v3], Formula::not(phi));
    (neg_phi_base(), b.finish())
}

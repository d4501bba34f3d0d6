//! Hilbert-style proof checking for the conditional logic, with the
//! shipped derivations.

mod checker;
mod fixtures;

pub use checker::{
    check_line, check_proof, AxiomBase, Justification, Premise, ProofBuilder, ProofError, ProofLine, ProofOutcome,
    ProofScript, Rule, Violation,
};
pub use fixtures::{lemma, lemma_a1, neg_phi, neg_phi_base, phi_star};

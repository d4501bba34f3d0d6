//! The shipped fixtures. Run with `CFWORLD_BLESS=1` to rewrite the proof
//! scripts from the ones built in code.

use std::path::PathBuf;

use cfworld::format::{read_model, read_proof, read_structure, write_model, write_proof, write_structure};
use cfworld::suite::{default_fixture_dir, EXAMPLE_C5, FOREST_FIRE, LEMMA_A1, NEG_PHI, TSTAR};
use cfworld_core::proof::{check_proof, lemma_a1, neg_phi, AxiomBase, ProofOutcome, ProofScript};

fn path(name: &str) -> PathBuf {
    default_fixture_dir().join(name)
}

fn golden(name: &str, (base, script): (AxiomBase, ProofScript)) {
    let want = write_proof(&base, &script);
    let p = path(name);
    if std::env::var_os("CFWORLD_BLESS").is_some() {
        std::fs::write(&p, &want).unwrap();
    }
    let got = std::fs::read_to_string(&p).unwrap();
    assert_eq!(got, want, "{name} is stale; rerun with CFWORLD_BLESS=1");
    let (b2, s2) = read_proof(&got).unwrap();
    assert_eq!(write_proof(&b2, &s2), got);
    assert_eq!(b2, base);
    let formulas = |s: &ProofScript| s.lines.iter().map(|l| l.formula.clone()).collect::<Vec<_>>();
    assert_eq!(formulas(&s2), formulas(&script));
    // substitutions come back as text, resolved when checked
    assert_eq!(check_proof(&b2, &s2), check_proof(&base, &script));
    assert!(matches!(check_proof(&b2, &s2), ProofOutcome::Verified(_)));
}

#[test]
fn lemma_script_matches_the_built_in_proof() {
    golden(LEMMA_A1, lemma_a1());
}

#[test]
fn neg_phi_script_matches_the_built_in_proof() {
    golden(NEG_PHI, neg_phi());
}

#[test]
fn models_survive_a_round_trip() {
    for name in [TSTAR, FOREST_FIRE] {
        let t = read_model(&std::fs::read_to_string(path(name)).unwrap()).unwrap();
        let again = read_model(&write_model(&t)).unwrap();
        assert_eq!(again, t, "{name}");
    }
}

#[test]
fn example_survives_a_round_trip() {
    let m = read_structure(&std::fs::read_to_string(path(EXAMPLE_C5)).unwrap()).unwrap();
    assert_eq!(m.world_count(), 8);
    let again = read_structure(&write_structure(&m)).unwrap();
    assert_eq!(again, m);
}

//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any fails.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cfworld::format::{read_model, read_proof, read_structure};
use cfworld::suite::{default_fixture_dir, tuple, EXAMPLE_C5, LEMMA_A1, NEG_PHI, TSTAR};
use cfworld_core::axioms::{
    check_schema, check_validity, find_countermodel, for_each_model, for_each_structure, Bounds, ClassDescriptor,
    ClassName, Schema, SearchOutcome, Verdict,
};
use cfworld_core::bridge::{causal_to_structure, lprop_corpus, structure_to_causal, BridgeError, Corpus};
use cfworld_core::causal::eval_causal;
use cfworld_core::proof::{check_proof, Justification, ProofOutcome};
use cfworld_core::structure::CounterfactualStructure;
use cfworld_core::{parse, Assignment, CausalModel, Formula, Signature, Value, Variable};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, Duration);

const PHI: &str = "[X1<-1](X2=1 & X3=0) & [X2<-1](X3=1 & X1=0) & [X3<-1](X1=1 & X2=0)";

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e(err: impl std::fmt::Display) -> String {
    err.to_string()
}

fn text(name: &str) -> Result<String, String> {
    let p = default_fixture_dir().join(name);
    std::fs::read_to_string(&p).map_err(|err| format!("{}: {err}", p.display()))
}

fn tstar() -> Result<CausalModel, String> {
    read_model(&text(TSTAR)?).map_err(e)
}

fn u0() -> Assignment {
    Assignment::new().with("U", 0)
}

// F1 over (X2, X3), F2 over (X1, X3), F3 over (X1, X2), rows 00, 01, 10, 11
const TABLES: [[Value; 4]; 3] = [[0, 1, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0]];

fn equation(i: usize, x: [Value; 3]) -> Value {
    let (a, b) = match i {
        0 => (x[1], x[2]),
        1 => (x[0], x[2]),
        _ => (x[0], x[1]),
    };
    TABLES[i][(2 * a + b) as usize]
}

/// Brute-force solutions of T* under `set`, one slot per variable.
fn oracle_solutions(set: [Option<Value>; 3]) -> Vec<String> {
    let mut out = Vec::new();
    for bits in 0..8 {
        let x = [(bits >> 2) & 1, (bits >> 1) & 1, bits & 1];
        let ok = (0..3).all(|i| match set[i] {
            Some(v) => x[i] == v,
            None => x[i] == equation(i, x),
        });
        if ok {
            out.push(format!("({},{},{})", x[0], x[1], x[2]));
        }
    }
    out
}

fn interventions() -> Vec<[Option<Value>; 3]> {
    let slot = [None, Some(0), Some(1)];
    let mut all = Vec::new();
    for a in slot {
        for b in slot {
            for c in slot {
                all.push([a, b, c]);
            }
        }
    }
    all
}

fn core_solutions(t: &CausalModel, set: [Option<Value>; 3]) -> Result<Vec<String>, String> {
    let mut a = Assignment::new();
    for (i, v) in set.iter().enumerate() {
        if let Some(v) = v {
            a.insert(format!("X{}", i + 1), *v);
        }
    }
    let sols = t.intervene(&a).map_err(e)?.solutions(&u0()).map_err(e)?;
    let mut shown: Vec<String> = sols.iter().map(|s| tuple(t.signature(), s)).collect();
    shown.sort();
    Ok(shown)
}

fn criterion_1() -> Check {
    let t = tstar()?;
    let printed: [([Option<Value>; 3], &str); 4] = [
        ([None, None, None], "(0,0,0)"),
        ([Some(1), None, None], "(1,1,0)"),
        ([None, Some(1), None], "(0,1,1)"),
        ([None, None, Some(1)], "(1,0,1)"),
    ];
    for (set, want) in printed {
        let got = core_solutions(&t, set)?;
        ensure(got == [want], || format!("{set:?}: {got:?}, expected {want}"))?;
    }
    let mut pairs = 0;
    for set in interventions().into_iter().filter(|s| s.iter().filter(|v| v.is_some()).count() == 2) {
        let free = set.iter().position(Option::is_none).unwrap();
        let mut x = set.map(|v| v.unwrap_or(0));
        x[free] = equation(free, x);
        let forced = format!("({},{},{})", x[0], x[1], x[2]);
        let got = core_solutions(&t, set)?;
        ensure(got == [forced.clone()], || format!("{set:?}: {got:?}, expected {forced}"))?;
        pairs += 1;
    }
    Ok(format!("4 printed cases, {pairs} two-variable interventions"))
}

fn criterion_2() -> Check {
    let t = tstar()?;
    ensure(t.in_tun(), || "T* is not in Tun".into())?;
    ensure(!t.is_recursive(), || "T* came out recursive".into())?;
    for set in interventions() {
        let n = oracle_solutions(set).len();
        ensure(n == 1, || format!("oracle: {n} solutions under {set:?}"))?;
    }
    let phi = parse(PHI).map_err(e)?;
    ensure(eval_causal(&t, &u0(), &phi).map_err(e)?, || "phi* is false at u=0".into())?;
    Ok("unique solutions under all 27 interventions, phi* true at u=0".into())
}

fn criterion_3() -> Check {
    let m = read_structure(&text(EXAMPLE_C5)?).map_err(e)?;
    let at = |f: &str| m.eval_at("0,0,0", &parse(f).map_err(e)?).map_err(e);
    ensure(at("[X1<-1; X2<-1](X3=1) & [X1<-1; X3<-1](X2=1) & [X1<-1](X2=0)")?, || "antecedent is false".into())?;
    ensure(!at("[X1<-1](X2=1)")?, || "conclusion is true".into())?;
    let c = m.classify();
    ensure(c.acceptable && c.full && c.total && !c.recursive, || format!("{c:?}"))?;
    Ok("antecedent true, conclusion false; acceptable, full, total, not recursive".into())
}

fn cell(schema: Schema, class: ClassName) -> Result<String, String> {
    match check_schema(schema, &ClassDescriptor::binary(class, 2), &Bounds::default()).map_err(e)? {
        Verdict::ValidAtBound { checked, .. } => Ok(format!("{schema}/{}:{checked}", class.label())),
        Verdict::Countermodel(c) => Err(format!("{schema} over {}: countermodel for {}", class.label(), c.formula)),
    }
}

fn criterion_4() -> Check {
    use ClassName::*;
    use Schema::*;
    let mut cells = Vec::new();
    for s in [C0, C1, C2, C3, C4, C5] {
        cells.push(cell(s, Tun)?);
    }
    for s in [A0, A1, A2, A3, A4, A5, A6] {
        cells.push(cell(s, M)?);
    }
    cells.push(cell(A7, MPlus)?);
    cells.push(cell(V1, Ma)?);
    cells.push(cell(V2, Ma)?);
    cells.push(cell(V3, Mf)?);
    cells.push(cell(C3, Ma)?);
    cells.push(cell(C4, Ma)?);
    cells.push(cell(C2, MaPlus)?);
    cells.push(cell(C1, Mf)?);
    cells.push(cell(C5, Mrec)?);
    let v = check_schema(C5, &ClassDescriptor::binary(MfPlus, 2), &Bounds::default()).map_err(e)?;
    let c = v.countermodel().ok_or("C5 has no countermodel in Mf+")?;
    let cfworld_core::axioms::Witness::Structure { structure, world } = &c.witness else {
        return Err("C5 countermodel is not a structure".into());
    };
    ensure(!structure.eval_at(world, &c.formula).map_err(e)?, || "the C5 countermodel does not refute".into())?;
    Ok(format!("{} valid cells, C5 refuted in Mf+", cells.len()))
}

fn criterion_5() -> Check {
    let sig = Signature::binary(2, 2);
    let corpus = Corpus::new(lprop_corpus(&sig, 1), &sig).map_err(e)?;
    let mut err: Option<String> = None;
    let mut note = |x: String| {
        if err.is_none() {
            err = Some(x);
        }
    };
    let (mut models, mut evals) = (0usize, 0usize);
    for_each_model(ClassName::Trec, &sig, u64::MAX, &mut |t| {
        match causal_to_structure(t) {
            Ok((m, naming)) => match corpus.certify(t, &m, &naming.pairing()) {
                Ok(r) if r.agrees() && r.checked == corpus.len() * sig.context_count() => evals += r.checked,
                Ok(r) => note(format!("map1: {:?}", r.disagreement)),
                Err(x) => note(e(x)),
            },
            Err(x) => note(e(x)),
        }
        models += 1;
        true
    })
    .map_err(e)?;
    let (mut shared, mut rejected) = (0usize, 0usize);
    let exo = || vec![Variable::new("U", vec![0, 1])];
    for_each_structure(ClassName::Mrec, sig.vocabulary(), 4, u64::MAX, &mut |m| {
        if !m.classify().globally_recursive() {
            if structure_to_causal(m, 0, exo()) != Err(BridgeError::NotRecursiveStructure) {
                note("a structure without a shared order was translated".into());
            }
            rejected += 1;
            return true;
        }
        for w in 0..m.world_count() {
            if let Err(x) = map2_at(m, w, &corpus, exo(), &sig) {
                note(x);
            }
            evals += corpus.len() * 2;
        }
        shared += 1;
        true
    })
    .map_err(e)?;
    if let Some(x) = err {
        return Err(x);
    }
    ensure(models > 0 && shared > 0, || "nothing enumerated".into())?;
    Ok(format!(
        "{models} recursive models, {shared} structures with a shared order ({rejected} per-world-only rejected), {evals} evaluations"
    ))
}

fn map2_at(m: &CounterfactualStructure, w: usize, corpus: &Corpus, exo: Vec<Variable>, sig: &Signature) -> Result<(), String> {
    let t = structure_to_causal(m, w, exo).map_err(e)?;
    ensure(t.is_recursive(), || format!("T_(M,{w}) is not recursive"))?;
    let contexts = t.signature().contexts();
    let pairing: Vec<(Assignment, usize)> = contexts.iter().map(|c| (c.clone(), w)).collect();
    let r = corpus.certify(&t, m, &pairing).map_err(e)?;
    ensure(r.agrees(), || format!("map2 at world {w}: {:?}", r.disagreement))?;
    let endo = |a: &Assignment| sig.endogenous().iter().map(|v| a.get(&v.name)).collect::<Vec<_>>();
    let first: Vec<_> = t.solutions(&contexts[0]).map_err(e)?.iter().map(endo).collect();
    for c in &contexts[1..] {
        let other: Vec<_> = t.solutions(c).map_err(e)?.iter().map(endo).collect();
        ensure(other == first, || format!("world {w}: solutions depend on the context"))?;
    }
    Ok(())
}

fn criterion_6() -> Check {
    let not_phi = Formula::not(parse(PHI).map_err(e)?);
    let checked = match check_validity(&not_phi, &ClassDescriptor::binary(ClassName::Trec, 3)).map_err(e)? {
        Verdict::ValidAtBound { checked, .. } => checked,
        Verdict::Countermodel(c) => return Err(format!("Trec countermodel: {c:?}")),
    };
    ensure(checked >= 10_000, || format!("only {checked} recursive models"))?;
    let seed = 2024;
    let trials = 100_000;
    let out = find_countermodel(&[not_phi], &ClassDescriptor::binary(ClassName::Mf, 3), trials, seed).map_err(e)?;
    ensure(out == SearchOutcome::NotFound { trials }, || format!("{out:?}"))?;
    Ok(format!("{checked} recursive models; {trials} random full structures, seed {seed}"))
}

fn criterion_7() -> Check {
    let (lbase, lemma) = read_proof(&text(LEMMA_A1)?).map_err(e)?;
    let (nbase, neg) = read_proof(&text(NEG_PHI)?).map_err(e)?;
    let ProofOutcome::Verified(lc) = check_proof(&lbase, &lemma) else { return Err("lemma rejected".into()) };
    let ProofOutcome::Verified(nc) = check_proof(&nbase, &neg) else { return Err("neg-phi rejected".into()) };
    ensure(nbase.allows(Schema::V2) && nbase.allows(Schema::V3), || "neg-phi base lacks V2 or V3".into())?;
    let ProofOutcome::FirstFailure { line, .. } = check_proof(&nbase.clone().without(Schema::A4), &neg) else {
        return Err("neg-phi verified without A4".into());
    };
    ensure(
        matches!(neg.lines[line].by, Justification::Axiom { schema: Schema::A4, .. }),
        || format!("first failure at line {} is not an A4 line", line + 1),
    )?;
    ensure(nc == Formula::not(parse(PHI).map_err(e)?), || format!("neg-phi concludes {nc}"))?;
    let m = check_validity(&lc, &ClassDescriptor::binary(ClassName::M, 3)).map_err(e)?;
    ensure(m.is_valid(), || format!("lemma conclusion: {m:?}"))?;
    let mf = ClassDescriptor::binary(ClassName::Mf, 3);
    let t = check_validity(&nc, &mf.clone().targeted()).map_err(e)?;
    ensure(t.is_valid(), || format!("neg-phi conclusion: {t:?}"))?;
    let r = find_countermodel(std::slice::from_ref(&nc), &mf, 5_000, 7).map_err(e)?;
    ensure(matches!(r, SearchOutcome::NotFound { .. }), || format!("neg-phi conclusion: {r:?}"))?;
    Ok(format!("both verified; without A4 fails at line {}; conclusions sound", line + 1))
}

fn name(rng: &mut ChaCha8Rng) -> String {
    const FIRST: &[u8] = b"ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz_";
    const REST: &[u8] = b"ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz_0123456789";
    loop {
        let len = rng.random_range(0..6);
        let mut s = String::from(FIRST[rng.random_range(0..FIRST.len())] as char);
        for _ in 0..len {
            s.push(REST[rng.random_range(0..REST.len())] as char);
        }
        if s != "true" && s != "false" {
            return s;
        }
    }
}

fn value(rng: &mut ChaCha8Rng) -> Value {
    match rng.random_range(0..3) {
        0 => rng.random_range(0..3),
        1 => rng.random_range(-50..50),
        _ => Value::from(rng.random::<i32>()),
    }
}

fn random_formula(rng: &mut ChaCha8Rng, depth: u32) -> Formula {
    if depth == 0 || rng.random_bool(0.25) {
        return match rng.random_range(0..8) {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::atom(name(rng), value(rng)),
        };
    }
    let pick = rng.random_range(0..9);
    let mut sub = || random_formula(rng, depth - 1);
    match pick {
        0 => Formula::not(sub()),
        1 => Formula::and(sub(), sub()),
        2 => Formula::or(sub(), sub()),
        3 => Formula::implies(sub(), sub()),
        4 => Formula::iff(sub(), sub()),
        5 => Formula::cf(sub(), sub()),
        6 => Formula::explicit_intervention(Vec::<(String, Value)>::new(), sub()),
        n => {
            let k = rng.random_range(1..4);
            let bs: Vec<(String, Value)> = (0..k).map(|_| (name(rng), value(rng))).collect();
            let body = random_formula(rng, depth - 1);
            if n == 7 {
                Formula::intervention(bs, body)
            } else {
                Formula::diamond(bs, body)
            }
        }
    }
}

fn criterion_8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let cases = 20_000;
    let mut nodes = 0usize;
    for _ in 0..cases {
        let f = random_formula(&mut rng, 6);
        let printed = f.to_string();
        nodes += printed.len();
        let back = parse(&printed).map_err(|err| format!("{printed}: {err}"))?;
        ensure(back == f, || format!("{printed} parsed as {back:?}"))?;
    }
    Ok(format!("{cases} random formulas, {nodes} characters printed"))
}

fn main() {
    let second = Duration::from_secs(1);
    let minutes = Duration::from_secs(600);
    let criteria: [Criterion; 8] = [
        ("T* solutions", criterion_1, second),
        ("T* in Tun, not recursive, satisfies phi*", criterion_2, second),
        ("the Example violates C5", criterion_3, second),
        ("soundness matrix at bound", criterion_4, minutes),
        ("translation agreement at bound", criterion_5, minutes),
        ("!phi* validity evidence", criterion_6, minutes),
        ("proof fixtures", criterion_7, Duration::from_secs(5)),
        ("parser round trip", criterion_8, minutes),
    ];
    let mut failed = 0;
    for (i, (what, check, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let result = result.and_then(|d| {
            ensure(took <= limit, || format!("took {took:?}, limit {limit:?}"))?;
            Ok(d)
        });
        match result {
            Ok(detail) => println!("PASS criterion {}: {what} ({detail}; {:.2} s)", i + 1, took.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {what} ({why})", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

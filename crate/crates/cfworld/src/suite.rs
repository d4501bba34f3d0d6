//! The golden reproductions behind `paper-suite`: one check per claim,
//! run against the shipped fixtures.

use std::path::{Path, PathBuf};
use std::time::Instant;

use cfworld_core::axioms::{
    check_formulas, check_schema, check_validity, find_countermodel, for_each_model, for_each_structure,
    instantiate, schema_instances, Bounds, ClassDescriptor, ClassName, Schema, SchemaError, SearchOutcome,
    Substitution, Verdict, Witness,
};
use cfworld_core::bridge::{causal_to_structure, lprop_corpus, structure_to_causal, BridgeError, Corpus};
use cfworld_core::causal::eval_causal;
use cfworld_core::formula::{classify, parse, well_formed, LangClass};
use cfworld_core::model::{ModelClass, Recursion};
use cfworld_core::proof::{check_proof, phi_star, AxiomBase, Justification, ProofOutcome, ProofScript, Violation};
use cfworld_core::structure::{CounterfactualStructure, Relation};
use cfworld_core::{Assignment, CausalModel, Formula, Signature, Value, Variable, Vocabulary};
use serde::Serialize;

use crate::format::{read_model, read_proof, read_structure, FormatError};

pub const TSTAR: &str = "tstar.json";
pub const EXAMPLE_C5: &str = "example-c5.json";
pub const FOREST_FIRE: &str = "forestfire.json";
pub const LEMMA_A1: &str = "lemma-a1.json";
pub const NEG_PHI: &str = "neg-phi.json";

/// Where the shipped fixtures live in the source tree.
pub fn default_fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{path}: {err}")]
    Io { path: String, err: std::io::Error },
    #[error("{path}: {err}")]
    Format { path: String, err: FormatError },
}

/// The five shipped fixtures, parsed.
#[derive(Debug, Clone)]
pub struct Fixtures {
    pub tstar: CausalModel,
    pub example: CounterfactualStructure,
    pub forest_fire: CausalModel,
    pub lemma: (AxiomBase, ProofScript),
    pub neg_phi: (AxiomBase, ProofScript),
}

impl Fixtures {
    pub fn load(dir: &Path) -> Result<Self, LoadError> {
        fn get<T>(dir: &Path, name: &str, read: fn(&str) -> Result<T, FormatError>) -> Result<T, LoadError> {
            let path = dir.join(name);
            let shown = path.display().to_string();
            let text = std::fs::read_to_string(&path).map_err(|err| LoadError::Io { path: shown.clone(), err })?;
            read(&text).map_err(|err| LoadError::Format { path: shown, err })
        }
        Ok(Self {
            tstar: get(dir, TSTAR, read_model)?,
            example: get(dir, EXAMPLE_C5, read_structure)?,
            forest_fire: get(dir, FOREST_FIRE, read_model)?,
            lemma: get(dir, LEMMA_A1, read_proof)?,
            neg_phi: get(dir, NEG_PHI, read_proof)?,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClaimResult {
    pub id: &'static str,
    pub claim: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: f64,
}

type Check = fn(&Fixtures) -> Result<String, String>;

/// Every claim the suite reproduces: an id, the claim, and its check.
pub const CLAIMS: &[(&str, &str, Check)] = &[
    ("model/forest-fire", "the forest-fire model, F = max(L, ML), is recursive with order L, ML, F", forest_fire),
    ("model/tstar-solutions", "T* at u=0: (0,0,0) alone; X1<-1 gives (1,1,0), X2<-1 gives (0,1,1), X3<-1 gives (1,0,1)", tstar_solutions),
    ("model/tstar-intervene", "T* with X1<-1 has X1's equation constantly 1", tstar_intervene),
    ("model/tstar-class", "T* is in Tun but its equations form a dependence cycle", tstar_class),
    ("model/recursive-unique", "recursive models always have a unique solution", recursive_unique),
    ("formula/syntax", "intervention sugar, disjunctive antecedents and the Lprop/Lex split parse as written", syntax),
    ("causal/phi-star", "(T*, u=0) satisfies phi*", phi_star_holds),
    ("causal/effectiveness", "C4 (effectiveness) holds in every model", effectiveness),
    ("structure/example", "the Example structure is acceptable, full, total and not recursive, and violates C5", example),
    ("structure/a1", "phi ~> phi holds in every structure", a1_everywhere),
    ("bridge/map1", "every recursive T maps to a recursive M_T agreeing with T on Lprop", map1),
    ("bridge/map2", "every recursive structure gives models T_{M,w} agreeing with (M,w) at every context", map2),
    ("lab/c4-instances", "C4 instances include [X1<-1; X2<-0]X1=1", c4_instances),
    ("lab/c5-side-condition", "C5 requires Y != W", c5_side_condition),
    ("lab/soundness-tun", "C0-C5 are valid in Tun", soundness_tun),
    ("lab/generalized-reversibility", "generalized reversibility is valid in T and not in counterfactual structures", generalized_reversibility),
    ("lab/soundness-m", "A0-A6 are valid in M; A7 in M+ but not M", soundness_m),
    ("lab/valuations", "V1 and V2 are valid in Ma, V3 in Mf", valuations),
    ("lab/proposition", "C3 and C4 are valid in Ma, C2 in Ma+, C1 in Mf", proposition),
    ("lab/c5-recursive", "C5 fails in Mf+ on the Example shape and holds in Mrec", c5_recursive),
    ("lab/phi-tun", "phi* is satisfiable in Tun", phi_satisfiable),
    ("lab/not-phi-trec", "!phi* is valid in Trec", not_phi_trec),
    ("lab/not-phi-mf", "!phi* is valid in Mf (randomized evidence)", not_phi_mf),
    ("lab/d4", "D4 is valid with total orders but not with branching ones", d4),
    ("proof/a1-line", "X1=0 ~> X1=0 is an A1 instance", a1_line),
    ("proof/lemma", "the chaining lemma is provable in AX", lemma),
    ("proof/neg-phi", "!phi* is provable in AX with V2 and V3", neg_phi),
    ("proof/needs-a4", "the derivation of !phi* uses A4", needs_a4),
];

/// Runs the claims whose id contains `filter` (all when `None`).
pub fn run(fx: &Fixtures, filter: Option<&str>) -> Vec<ClaimResult> {
    CLAIMS
        .iter()
        .filter(|(id, _, _)| filter.is_none_or(|f| id.contains(f)))
        .map(|&(id, claim, check)| {
            let start = Instant::now();
            let out = check(fx);
            let millis = start.elapsed().as_secs_f64() * 1e3;
            let (passed, detail) = match out {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            ClaimResult { id, claim, passed, detail, millis }
        })
        .collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn f(text: &str) -> Formula {
    parse(text).expect("suite formulas parse")
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

/// `(0,1,1)`: the endogenous values in signature order.
pub fn tuple(sig: &Signature, a: &Assignment) -> String {
    let vals: Vec<String> =
        sig.endogenous().iter().map(|v| a.get(&v.name).map_or("?".into(), |x| x.to_string())).collect();
    format!("({})", vals.join(","))
}

fn solutions(t: &CausalModel, ctx: &Assignment, set: &[(&str, Value)]) -> Result<Vec<String>, String> {
    let i: Assignment = set.iter().copied().collect();
    let sols = t.intervene(&i).map_err(e)?.solutions(ctx).map_err(e)?;
    Ok(sols.iter().map(|s| tuple(t.signature(), s)).collect())
}

fn u0() -> Assignment {
    Assignment::new().with("U", 0)
}

fn valid(schema: Schema, cd: &ClassDescriptor) -> Result<String, String> {
    match check_schema(schema, cd, &Bounds::default()).map_err(e)? {
        Verdict::ValidAtBound { checked, .. } => Ok(format!("{schema} over {} ({checked} checked)", cd.class)),
        Verdict::Countermodel(c) => Err(format!("{schema} fails over {}: {}", cd.class, c.formula)),
    }
}

fn all_valid(cells: &[(Schema, ClassDescriptor)]) -> Result<String, String> {
    cells.iter().map(|(s, cd)| valid(*s, cd)).collect::<Result<Vec<_>, _>>().map(|v| v.join("; "))
}

fn bin(class: ClassName, vars: usize) -> ClassDescriptor {
    ClassDescriptor::binary(class, vars)
}

fn not_phi() -> Formula {
    Formula::not(phi_star())
}

fn forest_fire(fx: &Fixtures) -> Result<String, String> {
    let t = &fx.forest_fire;
    let Recursion::Acyclic(order) = t.recursion() else { return Err("the model has a dependence cycle".into()) };
    ensure(order == ["L", "ML", "F"], || format!("order {order:?}"))?;
    for l in [0, 1] {
        for ml in [0, 1] {
            for u in t.signature().contexts() {
                let row = u.clone().with("L", l).with("ML", ml);
                let out = t.equation_value("F", &row).map_err(e)?;
                ensure(out == l.max(ml), || format!("F({l},{ml}) = {out}"))?;
            }
        }
    }
    Ok(format!("order {}", order.join(", ")))
}

fn tstar_solutions(fx: &Fixtures) -> Result<String, String> {
    let t = &fx.tstar;
    let cases: [(&[(&str, Value)], &str); 4] =
        [(&[], "(0,0,0)"), (&[("X1", 1)], "(1,1,0)"), (&[("X2", 1)], "(0,1,1)"), (&[("X3", 1)], "(1,0,1)")];
    for (set, want) in cases {
        let got = solutions(t, &u0(), set)?;
        ensure(got == [want], || format!("{set:?}: {got:?}"))?;
    }
    Ok("four singleton solution sets".into())
}

fn tstar_intervene(fx: &Fixtures) -> Result<String, String> {
    let t1 = fx.tstar.intervene(&Assignment::new().with("X1", 1)).map_err(e)?;
    let spec = t1.table_spec("X1").map_err(e)?;
    ensure(spec.inputs.is_empty() && spec.rows.values().all(|&v| v == 1), || format!("{spec:?}"))?;
    ensure(t1.pinned() == ["X1"], || format!("pinned {:?}", t1.pinned()))?;
    Ok("X1 = 1".into())
}

fn tstar_class(fx: &Fixtures) -> Result<String, String> {
    let t = &fx.tstar;
    let Recursion::Cyclic(cycle) = t.recursion() else { return Err("T* came out recursive".into()) };
    ensure(t.in_tun(), || "T* is not in Tun".into())?;
    ensure(t.class() == ModelClass::UniqueSolutions, || format!("class {}", t.class()))?;
    ensure(matches!(causal_to_structure(t), Err(BridgeError::NotRecursive(_))), || "M_T built for T*".into())?;
    Ok(format!("cycle {} -> {}", cycle.join(" -> "), cycle[0]))
}

fn recursive_unique(_: &Fixtures) -> Result<String, String> {
    let mut bad = None;
    let n = for_each_model(ClassName::Trec, &Signature::binary(2, 2), u64::MAX, &mut |t| {
        if !t.in_tun() {
            bad = Some(t.clone());
        }
        bad.is_none()
    })
    .map_err(e)?;
    ensure(bad.is_none(), || format!("{bad:?}"))?;
    Ok(format!("{n} recursive models, every intervention and context"))
}

fn syntax(fx: &Fixtures) -> Result<String, String> {
    let first = f("[X1<-1](X2=1 & X3=0)");
    let want = Formula::intervention([("X1", 1)], Formula::and(Formula::atom("X2", 1), Formula::atom("X3", 0)));
    ensure(first == want, || format!("{first:?}"))?;
    let dis = f("(X1=1 | X2=1) ~> X3=1");
    let want = Formula::cf(Formula::or(Formula::atom("X1", 1), Formula::atom("X2", 1)), Formula::atom("X3", 1));
    ensure(dis == want, || format!("{dis:?}"))?;
    ensure(classify(&f("[X1<-1](X2=1)")) == LangClass::Lprop, || "[X1<-1](X2=1) is not Lprop".into())?;
    ensure(classify(&first) == LangClass::Lex, || "[X1<-1](X2=1 & X3=0) is not Lex".into())?;
    ensure(well_formed(&phi_star(), fx.tstar.signature()).is_ok(), || "phi* is ill formed over T*".into())?;
    Ok("parsed and classified".into())
}

fn phi_star_holds(fx: &Fixtures) -> Result<String, String> {
    ensure(eval_causal(&fx.tstar, &u0(), &phi_star()).map_err(e)?, || "phi* is false at u=0".into())?;
    Ok(phi_star().to_string())
}

fn effectiveness(_: &Fixtures) -> Result<String, String> {
    valid(Schema::C4, &bin(ClassName::T, 2))
}

fn example(fx: &Fixtures) -> Result<String, String> {
    let m = &fx.example;
    let class = m.classify();
    ensure(class.acceptable && class.full && class.total && !class.recursive, || format!("{class:?}"))?;
    let w = "0,0,0";
    let at = |text: &str| m.eval_at(w, &f(text)).map_err(e);
    ensure(at("[X1<-1; X2<-1](X3=1) & [X1<-1; X3<-1](X2=1) & [X1<-1](X2=0)")?, || "C5 antecedent is false".into())?;
    ensure(!at("[X1<-1](X2=1)")?, || "C5 conclusion holds".into())?;
    let closest = m.closest(m.world(w).unwrap(), &f("X1=1 & X2=1")).map_err(e)?;
    let ids: Vec<&str> = closest.iter().map(|&v| m.ids()[v].as_str()).collect();
    ensure(ids == ["1,1,1"], || format!("closest {ids:?}"))?;
    ensure(
        structure_to_causal(m, 0, vec![Variable::new("U", [0])]) == Err(BridgeError::NotRecursiveStructure),
        || "T_{M,w} built for the Example".into(),
    )?;
    Ok("C5 fails at (0,0,0)".into())
}

fn a1_everywhere(_: &Fixtures) -> Result<String, String> {
    valid(Schema::A1, &bin(ClassName::M, 2))
}

fn map1(fx: &Fixtures) -> Result<String, String> {
    let check = |t: &CausalModel, corpus: &Corpus| -> Result<usize, String> {
        let (m, naming) = causal_to_structure(t).map_err(e)?;
        ensure(m.classify().recursive, || "M_T is not recursive".into())?;
        let r = corpus.certify(t, &m, &naming.pairing()).map_err(e)?;
        ensure(r.agrees(), || format!("{:?}", r.disagreement))?;
        Ok(r.checked)
    };
    let ff = fx.forest_fire.signature();
    check(&fx.forest_fire, &Corpus::new(lprop_corpus(ff, 1), ff).map_err(e)?)?;
    let sig = Signature::binary(2, 2);
    let corpus = Corpus::new(lprop_corpus(&sig, 1), &sig).map_err(e)?;
    let (mut models, mut evals, mut err) = (0, 0, None);
    for_each_model(ClassName::Trec, &sig, u64::MAX, &mut |t| {
        match check(t, &corpus) {
            Ok(n) => evals += n,
            Err(x) => err = Some(x),
        }
        models += 1;
        err.is_none()
    })
    .map_err(e)?;
    err.map_or(Ok(()), Err)?;
    Ok(format!("forest fire plus {models} models, {evals} evaluations"))
}

fn map2(_: &Fixtures) -> Result<String, String> {
    let sig = Signature::binary(2, 2);
    let corpus = Corpus::new(lprop_corpus(&sig, 1), &sig).map_err(e)?;
    let (mut global, mut evals, mut err) = (0, 0, None);
    let mut check = |m: &CounterfactualStructure| -> Result<(), String> {
        if !m.classify().globally_recursive() {
            return Ok(());
        }
        global += 1;
        for w in 0..m.world_count() {
            let t = structure_to_causal(m, w, sig.exogenous().to_vec()).map_err(e)?;
            ensure(t.is_recursive(), || "T_{M,w} is not recursive".into())?;
            let pairing: Vec<_> = t.signature().contexts().into_iter().map(|c| (c, w)).collect();
            let r = corpus.certify(&t, m, &pairing).map_err(e)?;
            ensure(r.agrees(), || format!("{:?}", r.disagreement))?;
            evals += r.checked;
        }
        Ok(())
    };
    for_each_structure(ClassName::Mrec, sig.vocabulary(), 4, u64::MAX, &mut |m| {
        err = check(m).err();
        err.is_none()
    })
    .map_err(e)?;
    err.map_or(Ok(()), Err)?;
    Ok(format!("{global} structures with a shared variable order, {evals} evaluations"))
}

fn c4_instances(_: &Fixtures) -> Result<String, String> {
    let inst = schema_instances(Schema::C4, &bin(ClassName::Tun, 2), &Bounds::default()).map_err(e)?;
    let want = f("[X1<-1; X2<-0]X1=1");
    ensure(inst.iter().any(|g| g == &want), || format!("{} instances, none is {want}", inst.len()))?;
    Ok(format!("{} instances", inst.len()))
}

fn c5_side_condition(_: &Fixtures) -> Result<String, String> {
    let sub =
        Substitution::new().bindings("Xs", [("X1", 1)]).var("W", "X2").value("w", 1).var("Y", "X2").value("y", 1);
    match instantiate(Schema::C5, &sub, None) {
        Err(SchemaError::SideConditionViolated(m)) => Ok(m),
        other => Err(format!("{other:?}")),
    }
}

fn soundness_tun(_: &Fixtures) -> Result<String, String> {
    let cd = bin(ClassName::Tun, 2);
    all_valid(&[Schema::C0, Schema::C1, Schema::C2, Schema::C3, Schema::C4, Schema::C5].map(|s| (s, cd.clone())))
}

fn generalized_reversibility(_: &Fixtures) -> Result<String, String> {
    let ok = valid(Schema::GenRev, &bin(ClassName::T, 2))?;
    let cd = bin(ClassName::MfPlus, 2);
    let inst = schema_instances(Schema::GenRev, &cd, &Bounds::default()).map_err(e)?;
    match find_countermodel(&inst, &cd, 20_000, 11).map_err(e)? {
        SearchOutcome::Found { countermodel, trial } => Ok(format!("{ok}; fails in Mf+ at trial {trial}: {}", countermodel.formula)),
        SearchOutcome::NotFound { trials } => Err(format!("no countermodel in {trials} structures")),
    }
}

fn soundness_m(_: &Fixtures) -> Result<String, String> {
    let m = bin(ClassName::M, 2);
    let mut cells: Vec<_> =
        [Schema::A0, Schema::A1, Schema::A2, Schema::A3, Schema::A4, Schema::A5, Schema::A6].map(|s| (s, m.clone())).into();
    cells.push((Schema::A7, bin(ClassName::MPlus, 2)));
    let ok = all_valid(&cells)?;
    let v = check_schema(Schema::A7, &m, &Bounds::default()).map_err(e)?;
    ensure(!v.is_valid(), || "A7 holds in M".into())?;
    Ok(format!("{ok}; A7 fails over M"))
}

fn valuations(_: &Fixtures) -> Result<String, String> {
    all_valid(&[
        (Schema::V1, bin(ClassName::Ma, 2)),
        (Schema::V2, bin(ClassName::Ma, 2)),
        (Schema::V3, bin(ClassName::Mf, 2)),
    ])
}

fn proposition(_: &Fixtures) -> Result<String, String> {
    all_valid(&[
        (Schema::C3, bin(ClassName::Ma, 2)),
        (Schema::C4, bin(ClassName::Ma, 2)),
        (Schema::C2, bin(ClassName::MaPlus, 2)),
        (Schema::C1, bin(ClassName::Mf, 2)),
    ])
}

/// The C5 instance the Example violates.
pub fn example_c5_instance() -> Formula {
    let sub =
        Substitution::new().bindings("Xs", [("X1", 1)]).var("W", "X3").value("w", 1).var("Y", "X2").value("y", 1);
    instantiate(Schema::C5, &sub, None).expect("a well-formed instance")
}

fn c5_recursive(fx: &Fixtures) -> Result<String, String> {
    let c5 = example_c5_instance();
    ensure(!fx.example.eval_at("0,0,0", &c5).map_err(e)?, || "the Example satisfies the instance".into())?;
    let v = check_validity(&c5, &bin(ClassName::MfPlus, 3).targeted()).map_err(e)?;
    let Some(Witness::Structure { structure, world }) = v.countermodel().map(|c| &c.witness) else {
        return Err("no countermodel in the targeted Mf+ family".into());
    };
    ensure(!structure.classify().recursive, || "the countermodel is recursive".into())?;
    let two = valid(Schema::C5, &bin(ClassName::Mrec, 2))?;
    let three = valid(Schema::C5, &bin(ClassName::Mrec, 3).targeted())?;
    Ok(format!("countermodel at {world}; {two}; {three} (targeted)"))
}

fn phi_satisfiable(_: &Fixtures) -> Result<String, String> {
    let cd = bin(ClassName::Tun, 3).with_signature(Signature::binary(3, 1));
    let v = check_validity(&not_phi(), &cd).map_err(e)?;
    let Some(Witness::Causal { model, context }) = v.countermodel().map(|c| &c.witness) else {
        return Err("no Tun model satisfies phi*".into());
    };
    ensure(eval_causal(model, context, &phi_star()).map_err(e)?, || "witness does not satisfy phi*".into())?;
    Ok(format!("witness in {}", model.class()))
}

fn not_phi_trec(_: &Fixtures) -> Result<String, String> {
    match check_validity(&not_phi(), &bin(ClassName::Trec, 3)).map_err(e)? {
        Verdict::ValidAtBound { checked, points } if checked >= 10_000 => {
            Ok(format!("{checked} models, {points} contexts"))
        }
        other => Err(format!("{other:?}")),
    }
}

fn not_phi_mf(_: &Fixtures) -> Result<String, String> {
    match find_countermodel(&[not_phi()], &bin(ClassName::Mf, 3), 100_000, 2024).map_err(e)? {
        SearchOutcome::NotFound { trials } => Ok(format!("{trials} random 8-world structures, seed 2024")),
        SearchOutcome::Found { trial, .. } => Err(format!("countermodel at trial {trial}")),
    }
}

/// A five-world structure where two incomparable closest worlds defeat D4.
pub fn d4_countermodel() -> CounterfactualStructure {
    let vocab = Vocabulary::new(["P", "Q", "R"].map(|n| Variable::new(n, [1])).into()).expect("valid names");
    // (P, Q, R) per world
    let truth = vec![
        vec![false, false, false],
        vec![true, false, true],
        vec![false, true, true],
        vec![true, false, false],
        vec![false, true, false],
    ];
    let mut pairs: Vec<(usize, usize)> = (0..5).map(|v| (0, v)).collect();
    pairs.extend((1..5).map(|v| (v, v)));
    pairs.extend([(2, 3), (1, 4)]);
    let mut orders = vec![Relation::from_pairs(5, pairs)];
    orders.extend((1..5).map(|w| Relation::from_pairs(5, [(w, w)])));
    let ids = (0..5).map(|i| format!("w{i}")).collect();
    CounterfactualStructure::generic(vocab, ids, truth, orders).expect("valid orders")
}

fn d4(_: &Fixtures) -> Result<String, String> {
    let ok = valid(Schema::D4, &bin(ClassName::MPlus, 2))?;
    let sub = Substitution::new().formula("phi1", f("P=1")).formula("phi2", f("Q=1")).formula("psi", f("R=1"));
    let inst = instantiate(Schema::D4, &sub, None).map_err(e)?;
    ensure(!d4_countermodel().eval_at("w0", &inst).map_err(e)?, || "D4 holds in the branching structure".into())?;
    Ok(format!("{ok}; fails at w0 of a 5-world preorder"))
}

fn a1_line(_: &Fixtures) -> Result<String, String> {
    let script = ProofScript {
        lines: vec![cfworld_core::proof::ProofLine {
            formula: f("X1=0 ~> X1=0"),
            by: Justification::Axiom { schema: Schema::A1, subst: Substitution::new().text("phi", "X1=0") },
        }],
        vocabulary: None,
    };
    match check_proof(&AxiomBase::ax(), &script) {
        ProofOutcome::Verified(c) => Ok(c.to_string()),
        other => Err(format!("{other:?}")),
    }
}

fn verified(base: &AxiomBase, script: &ProofScript, want: &Formula) -> Result<(), String> {
    match check_proof(base, script) {
        ProofOutcome::Verified(c) if &c == want => Ok(()),
        other => Err(format!("{other:?}")),
    }
}

fn lines(script: &ProofScript) -> Vec<Formula> {
    script.lines.iter().map(|l| l.formula.clone()).collect()
}

fn lemma(fx: &Fixtures) -> Result<String, String> {
    let (base, script) = &fx.lemma;
    verified(base, script, &f("(X1=1 ~> X2=1) & (X2=1 ~> X3=1) -> (X1=1 | X2=1 ~> X3=1)"))?;
    let v = check_formulas(&lines(script), &bin(ClassName::M, 3)).map_err(e)?;
    ensure(v.is_valid(), || format!("a line fails in M: {v:?}"))?;
    Ok(format!("{} lines, each valid over M", script.lines.len()))
}

fn neg_phi(fx: &Fixtures) -> Result<String, String> {
    let (base, script) = &fx.neg_phi;
    verified(base, script, &not_phi())?;
    let all = lines(script);
    let v = check_formulas(&all, &bin(ClassName::Mf, 3).targeted()).map_err(e)?;
    ensure(v.is_valid(), || format!("a line fails in the targeted Mf family: {v:?}"))?;
    let r = find_countermodel(&all, &bin(ClassName::Mf, 3), 2_000, 7).map_err(e)?;
    ensure(matches!(r, SearchOutcome::NotFound { .. }), || format!("{r:?}"))?;
    Ok(format!("{} lines, each valid over targeted and random Mf", script.lines.len()))
}

fn needs_a4(fx: &Fixtures) -> Result<String, String> {
    let (base, script) = &fx.neg_phi;
    let first = script
        .lines
        .iter()
        .position(|l| matches!(&l.by, Justification::Axiom { schema: Schema::A4, .. }))
        .ok_or("no A4 line")?;
    match check_proof(&base.clone().without(Schema::A4), script) {
        ProofOutcome::FirstFailure { line, violation: Violation::SchemaDisabled(s) } if line == first && s == "A4" => {
            Ok(format!("fails at line {}", line + 1))
        }
        other => Err(format!("{other:?}")),
    }
}

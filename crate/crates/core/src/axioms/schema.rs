//! Axiom schemas, substitutions and bounded instantiation.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::formula::{classify, parse, parse_bindings, Formula, LangClass};
use crate::signature::{product_indices, valid_name, Value, Vocabulary};
use crate::taut::{falsifying_row, TautError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Schema {
    A0,
    A1,
    A2,
    A3,
    A4,
    A5,
    A6,
    A7,
    C0,
    C1,
    C2,
    C3,
    C4,
    C5,
    /// Reversibility for arbitrary causal models, stated with `<...>`.
    GenRev,
    V1,
    V2,
    V3,
    /// The disjunctive-antecedent schema that holds in total structures
    /// but not in all counterfactual structures.
    D4,
}

/// Kind of thing a metavariable stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetaKind {
    Formula,
    Variable,
    Value,
    /// An intervention: a list of distinct `variable <- value` bindings.
    Bindings,
}

impl Schema {
    pub const ALL: [Schema; 19] = [
        Schema::A0,
        Schema::A1,
        Schema::A2,
        Schema::A3,
        Schema::A4,
        Schema::A5,
        Schema::A6,
        Schema::A7,
        Schema::C0,
        Schema::C1,
        Schema::C2,
        Schema::C3,
        Schema::C4,
        Schema::C5,
        Schema::GenRev,
        Schema::V1,
        Schema::V2,
        Schema::V3,
        Schema::D4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Schema::A0 => "A0",
            Schema::A1 => "A1",
            Schema::A2 => "A2",
            Schema::A3 => "A3",
            Schema::A4 => "A4",
            Schema::A5 => "A5",
            Schema::A6 => "A6",
            Schema::A7 => "A7",
            Schema::C0 => "C0",
            Schema::C1 => "C1",
            Schema::C2 => "C2",
            Schema::C3 => "C3",
            Schema::C4 => "C4",
            Schema::C5 => "C5",
            Schema::GenRev => "GenRev",
            Schema::V1 => "V1",
            Schema::V2 => "V2",
            Schema::V3 => "V3",
            Schema::D4 => "D4",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name().eq_ignore_ascii_case(name))
    }

    /// Schemas about the conditional in general (A*, D4).
    pub fn is_structural(self) -> bool {
        matches!(
            self,
            Schema::A0 | Schema::A1 | Schema::A2 | Schema::A3 | Schema::A4 | Schema::A5 | Schema::A6 | Schema::A7 | Schema::D4
        )
    }

    /// Schemas about causal models (C*, GenRev).
    pub fn is_causal(self) -> bool {
        matches!(
            self,
            Schema::C0 | Schema::C1 | Schema::C2 | Schema::C3 | Schema::C4 | Schema::C5 | Schema::GenRev
        )
    }

    pub fn metavariables(self) -> &'static [(&'static str, MetaKind)] {
        use MetaKind::*;
        match self {
            Schema::A0 | Schema::C0 | Schema::A1 => &[("phi", Formula)],
            Schema::A2 | Schema::A7 => &[("phi", Formula), ("psi1", Formula), ("psi2", Formula)],
            Schema::A3 | Schema::A4 | Schema::D4 => &[("phi1", Formula), ("phi2", Formula), ("psi", Formula)],
            Schema::A5 => &[],
            Schema::A6 => &[("phi", Formula), ("psi", Formula)],
            Schema::C1 => &[("Ys", Bindings), ("X", Variable), ("x", Value), ("x2", Value)],
            Schema::C2 => &[("Ys", Bindings), ("X", Variable)],
            Schema::C3 | Schema::C5 => {
                &[("Xs", Bindings), ("W", Variable), ("w", Value), ("Y", Variable), ("y", Value)]
            }
            Schema::C4 => &[("X", Variable), ("x", Value), ("Ws", Bindings)],
            Schema::GenRev => &[
                ("Xs", Bindings),
                ("W", Variable),
                ("w", Value),
                ("Y", Variable),
                ("y", Value),
                ("Zs", Bindings),
            ],
            Schema::V1 => &[("X", Variable)],
            Schema::V2 => &[("X", Variable), ("x", Value), ("x2", Value)],
            Schema::V3 => &[("Xs", Bindings)],
        }
    }

    /// Does instantiation need the vocabulary (beyond validating names)?
    pub fn needs_vocabulary(self) -> bool {
        matches!(self, Schema::C2 | Schema::V1 | Schema::GenRev)
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("unknown schema `{0}`")]
    UnknownSchema(String),
    #[error("bad substitution for `{key}`: {reason}")]
    BadSubstitution { key: String, reason: String },
    #[error("side condition violated: {0}")]
    SideConditionViolated(String),
    #[error("{0} needs a vocabulary to instantiate")]
    MissingVocabulary(Schema),
    #[error("about {estimate} instances, over the cap of {cap}")]
    BoundsTooLarge { estimate: u64, cap: u64 },
    #[error(transparent)]
    Taut(#[from] TautError),
}

/// What a metavariable is bound to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubstValue {
    Formula(Formula),
    Variable(String),
    Value(Value),
    Bindings(Vec<(String, Value)>),
    /// Unresolved text, interpreted according to the metavariable's kind.
    Text(String),
}

/// A binding of metavariable names to formulas, variables, values or
/// interventions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution(BTreeMap<String, SubstValue>);

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, key: impl Into<String>, value: SubstValue) {
        self.0.insert(key.into(), value);
    }

    pub fn formula(mut self, key: &str, f: Formula) -> Self {
        self.insert(key, SubstValue::Formula(f));
        self
    }

    pub fn var(mut self, key: &str, name: impl Into<String>) -> Self {
        self.insert(key, SubstValue::Variable(name.into()));
        self
    }

    pub fn value(mut self, key: &str, v: Value) -> Self {
        self.insert(key, SubstValue::Value(v));
        self
    }

    pub fn bindings<S: Into<String>>(mut self, key: &str, b: impl IntoIterator<Item = (S, Value)>) -> Self {
        self.insert(key, SubstValue::Bindings(b.into_iter().map(|(s, v)| (s.into(), v)).collect()));
        self
    }

    pub fn text(mut self, key: &str, t: impl Into<String>) -> Self {
        self.insert(key, SubstValue::Text(t.into()));
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &SubstValue)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v))
    }

    fn raw(&self, key: &str) -> Result<&SubstValue, SchemaError> {
        self.0.get(key).ok_or_else(|| bad(key, "missing"))
    }

    fn get_formula(&self, key: &str) -> Result<Formula, SchemaError> {
        match self.raw(key)? {
            SubstValue::Formula(f) => Ok(f.clone()),
            SubstValue::Text(t) => parse(t).map_err(|e| bad(key, &e.to_string())),
            _ => Err(bad(key, "expected a formula")),
        }
    }

    fn get_var(&self, key: &str) -> Result<String, SchemaError> {
        let name = match self.raw(key)? {
            SubstValue::Variable(s) | SubstValue::Text(s) => s.trim().to_string(),
            _ => return Err(bad(key, "expected a variable name")),
        };
        if valid_name(&name) {
            Ok(name)
        } else {
            Err(bad(key, "not a variable name"))
        }
    }

    fn get_value(&self, key: &str) -> Result<Value, SchemaError> {
        match self.raw(key)? {
            SubstValue::Value(v) => Ok(*v),
            SubstValue::Text(t) => t.trim().parse().map_err(|_| bad(key, "expected an integer value")),
            _ => Err(bad(key, "expected a value")),
        }
    }

    fn get_bindings(&self, key: &str) -> Result<Vec<(String, Value)>, SchemaError> {
        let b = match self.raw(key)? {
            SubstValue::Bindings(b) => b.clone(),
            SubstValue::Text(t) if t.trim().is_empty() => Vec::new(),
            SubstValue::Text(t) => parse_bindings(t).map_err(|e| bad(key, &e.to_string()))?,
            _ => return Err(bad(key, "expected an intervention")),
        };
        let mut seen = BTreeSet::new();
        for (var, _) in &b {
            if !valid_name(var) {
                return Err(bad(key, "not a variable name"));
            }
            if !seen.insert(var.as_str()) {
                return Err(SchemaError::SideConditionViolated(format!("`{var}` is bound twice in {key}")));
            }
        }
        Ok(b)
    }
}

fn bad(key: &str, reason: &str) -> SchemaError {
    SchemaError::BadSubstitution { key: key.to_string(), reason: reason.to_string() }
}

fn side(msg: String) -> SchemaError {
    SchemaError::SideConditionViolated(msg)
}

/// The propositional templates used for A0 and C0 instances.
pub const TAUTOLOGY_TEMPLATES: [&str; 7] = [
    "p -> p",
    "p | !p",
    "!(p & !p)",
    "(p & q) -> p",
    "p -> (q -> p)",
    "(p -> q) -> (!q -> !p)",
    "(p <-> q) -> (q <-> p)",
];

fn template(i: usize, p: &Formula, q: &Formula) -> Formula {
    let (p, q) = (p.clone(), q.clone());
    match i {
        0 => Formula::implies(p.clone(), p),
        1 => Formula::or(p.clone(), Formula::not(p)),
        2 => Formula::not(Formula::and(p.clone(), Formula::not(p))),
        3 => Formula::implies(Formula::and(p.clone(), q), p),
        4 => Formula::implies(p.clone(), Formula::implies(q, p)),
        5 => Formula::implies(
            Formula::implies(p.clone(), q.clone()),
            Formula::implies(Formula::not(q), Formula::not(p)),
        ),
        _ => Formula::implies(Formula::iff(p.clone(), q.clone()), Formula::iff(q, p)),
    }
}

fn check_var(vocab: Option<&Vocabulary>, key: &str, var: &str) -> Result<(), SchemaError> {
    match vocab {
        Some(v) if v.position(var).is_none() => Err(bad(key, &format!("`{var}` is not in the vocabulary"))),
        _ => Ok(()),
    }
}

fn check_value(vocab: Option<&Vocabulary>, key: &str, var: &str, value: Value) -> Result<(), SchemaError> {
    check_var(vocab, key, var)?;
    match vocab.and_then(|v| v.range(var)) {
        Some(range) if !range.contains(&value) => {
            Err(bad(key, &format!("{value} is not in the range of `{var}`")))
        }
        _ => Ok(()),
    }
}

fn check_bindings(vocab: Option<&Vocabulary>, key: &str, b: &[(String, Value)]) -> Result<(), SchemaError> {
    b.iter().try_for_each(|(var, value)| check_value(vocab, key, var, *value))
}

fn binds(b: &[(String, Value)], var: &str) -> bool {
    b.iter().any(|(v, _)| v == var)
}

fn with(b: &[(String, Value)], var: &str, value: Value) -> Vec<(String, Value)> {
    let mut out = b.to_vec();
    out.push((var.to_string(), value));
    out
}

fn eq(var: &str, value: Value) -> Formula {
    Formula::atom(var, value)
}

fn cf(a: Formula, b: Formula) -> Formula {
    Formula::cf(a, b)
}

fn and(a: Formula, b: Formula) -> Formula {
    Formula::and(a, b)
}

fn implies(a: Formula, b: Formula) -> Formula {
    Formula::implies(a, b)
}

/// Instantiates `schema` under `sub`, checking side conditions. With a
/// vocabulary, every variable and value is also checked against it.
pub fn instantiate(schema: Schema, sub: &Substitution, vocab: Option<&Vocabulary>) -> Result<Formula, SchemaError> {
    if schema.needs_vocabulary() && vocab.is_none() {
        return Err(SchemaError::MissingVocabulary(schema));
    }
    let f = |k: &str| sub.get_formula(k);
    Ok(match schema {
        Schema::A0 | Schema::C0 => {
            let phi = f("phi")?;
            if schema == Schema::C0 && classify(&phi) != LangClass::Lprop {
                return Err(side("C0 instances must be LPROP formulas".into()));
            }
            if let Some(row) = falsifying_row(&phi)? {
                return Err(side(format!("not a propositional tautology (falsified by row {row:#b})")));
            }
            phi
        }
        Schema::A1 => {
            let phi = f("phi")?;
            cf(phi.clone(), phi)
        }
        Schema::A2 => {
            let (phi, p1, p2) = (f("phi")?, f("psi1")?, f("psi2")?);
            implies(and(cf(phi.clone(), p1.clone()), cf(phi.clone(), p2.clone())), cf(phi, and(p1, p2)))
        }
        Schema::A3 => {
            let (p1, p2, psi) = (f("phi1")?, f("phi2")?, f("psi")?);
            implies(and(cf(p1.clone(), p2.clone()), cf(p1.clone(), psi.clone())), cf(and(p1, p2), psi))
        }
        Schema::A4 => {
            let (p1, p2, psi) = (f("phi1")?, f("phi2")?, f("psi")?);
            implies(and(cf(p1.clone(), psi.clone()), cf(p2.clone(), psi.clone())), cf(Formula::or(p1, p2), psi))
        }
        Schema::A5 => Formula::not(cf(Formula::True, Formula::False)),
        Schema::A6 => {
            let (phi, psi) = (f("phi")?, f("psi")?);
            implies(phi.clone(), Formula::iff(psi.clone(), cf(phi, psi)))
        }
        Schema::A7 => {
            let (phi, p1, p2) = (f("phi")?, f("psi1")?, f("psi2")?);
            implies(
                cf(phi.clone(), Formula::or(p1.clone(), p2.clone())),
                Formula::or(cf(phi.clone(), p1), cf(phi, p2)),
            )
        }
        Schema::D4 => {
            let (p1, p2, psi) = (f("phi1")?, f("phi2")?, f("psi")?);
            let either = Formula::or(p1.clone(), p2.clone());
            Formula::disjunction([
                cf(either.clone(), p1.clone()),
                cf(either.clone(), p2.clone()),
                Formula::iff(cf(either, psi.clone()), Formula::or(cf(p1, psi.clone()), cf(p2, psi))),
            ])
        }
        Schema::C1 | Schema::V2 => {
            let x_var = sub.get_var("X")?;
            let (x, x2) = (sub.get_value("x")?, sub.get_value("x2")?);
            check_value(vocab, "x", &x_var, x)?;
            check_value(vocab, "x2", &x_var, x2)?;
            if x == x2 {
                return Err(side("x and x2 must differ".into()));
            }
            if schema == Schema::V2 {
                implies(eq(&x_var, x), Formula::not(eq(&x_var, x2)))
            } else {
                let ys = sub.get_bindings("Ys")?;
                check_bindings(vocab, "Ys", &ys)?;
                implies(
                    Formula::intervention(ys.clone(), eq(&x_var, x)),
                    Formula::not(Formula::intervention(ys, eq(&x_var, x2))),
                )
            }
        }
        Schema::C2 | Schema::V1 => {
            let x_var = sub.get_var("X")?;
            check_var(vocab, "X", &x_var)?;
            let range = vocab.and_then(|v| v.range(&x_var)).unwrap_or_default().to_vec();
            let ys = if schema == Schema::C2 { sub.get_bindings("Ys")? } else { Vec::new() };
            check_bindings(vocab, "Ys", &ys)?;
            Formula::disjunction(range.into_iter().map(|x| Formula::intervention(ys.clone(), eq(&x_var, x))))
        }
        Schema::C3 | Schema::C5 | Schema::GenRev => {
            let xs = sub.get_bindings("Xs")?;
            let (w_var, y_var) = (sub.get_var("W")?, sub.get_var("Y")?);
            let (w, y) = (sub.get_value("w")?, sub.get_value("y")?);
            check_bindings(vocab, "Xs", &xs)?;
            check_value(vocab, "w", &w_var, w)?;
            check_value(vocab, "y", &y_var, y)?;
            if binds(&xs, &w_var) {
                return Err(side(format!("`{w_var}` must not be bound by Xs")));
            }
            match schema {
                Schema::C3 => implies(
                    and(
                        Formula::intervention(xs.clone(), eq(&w_var, w)),
                        Formula::intervention(xs.clone(), eq(&y_var, y)),
                    ),
                    Formula::intervention(with(&xs, &w_var, w), eq(&y_var, y)),
                ),
                Schema::C5 => {
                    if w_var == y_var {
                        return Err(side("Y and W must differ".into()));
                    }
                    if binds(&xs, &y_var) {
                        return Err(side(format!("`{y_var}` must not be bound by Xs")));
                    }
                    implies(
                        and(
                            Formula::intervention(with(&xs, &w_var, w), eq(&y_var, y)),
                            Formula::intervention(with(&xs, &y_var, y), eq(&w_var, w)),
                        ),
                        Formula::intervention(xs, eq(&y_var, y)),
                    )
                }
                _ => {
                    if w_var == y_var {
                        return Err(side("Y and W must differ".into()));
                    }
                    if binds(&xs, &y_var) {
                        return Err(side(format!("`{y_var}` must not be bound by Xs")));
                    }
                    let zs = sub.get_bindings("Zs")?;
                    check_bindings(vocab, "Zs", &zs)?;
                    let vocab = vocab.ok_or(SchemaError::MissingVocabulary(schema))?;
                    let expected: BTreeSet<&str> = vocab
                        .variables()
                        .iter()
                        .map(|v| v.name.as_str())
                        .filter(|n| !binds(&xs, n) && *n != w_var && *n != y_var)
                        .collect();
                    let got: BTreeSet<&str> = zs.iter().map(|(v, _)| v.as_str()).collect();
                    if got != expected || got.len() != zs.len() {
                        return Err(side("Zs must bind exactly the variables outside Xs, W and Y".into()));
                    }
                    let z = Formula::conjunction(zs.iter().map(|(v, x)| eq(v, *x)));
                    let tail = |a: Formula| if zs.is_empty() { a } else { and(a, z.clone()) };
                    implies(
                        and(
                            Formula::diamond(with(&xs, &y_var, y), tail(eq(&w_var, w))),
                            Formula::diamond(with(&xs, &w_var, w), tail(eq(&y_var, y))),
                        ),
                        Formula::diamond(xs, tail(and(eq(&w_var, w), eq(&y_var, y)))),
                    )
                }
            }
        }
        Schema::C4 => {
            let x_var = sub.get_var("X")?;
            let x = sub.get_value("x")?;
            let ws = sub.get_bindings("Ws")?;
            check_value(vocab, "x", &x_var, x)?;
            check_bindings(vocab, "Ws", &ws)?;
            if binds(&ws, &x_var) {
                return Err(side(format!("`{x_var}` must not be bound by Ws")));
            }
            let mut all = vec![(x_var.clone(), x)];
            all.extend(ws);
            Formula::intervention(all, eq(&x_var, x))
        }
        Schema::V3 => {
            let xs = sub.get_bindings("Xs")?;
            check_bindings(vocab, "Xs", &xs)?;
            Formula::not(Formula::explicit_intervention(xs, Formula::False))
        }
    })
}

/// Bounds for [`instances`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    /// Depth of the formulas substituted for formula metavariables.
    pub depth: usize,
    /// Number of atoms those formulas are built from.
    pub atoms: usize,
    /// Largest number of instances generated.
    pub cap: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Self { depth: 1, atoms: 2, cap: 200_000 }
    }
}

/// The atoms formula metavariables are built from: the first value of
/// each of the first `n` variables.
pub fn pool_atoms(vocab: &Vocabulary, n: usize) -> Vec<Formula> {
    vocab.variables().iter().take(n).map(|v| eq(&v.name, v.range[0])).collect()
}

/// Propositional formulas over `atoms`: at depth 0 the atoms plus `true`
/// and `false`; at depth 1 also negations of atoms and pairwise
/// conjunctions and disjunctions.
pub fn formula_pool(atoms: &[Formula], depth: usize) -> Vec<Formula> {
    let mut out: Vec<Formula> = atoms.to_vec();
    out.push(Formula::True);
    out.push(Formula::False);
    if depth >= 1 {
        out.extend(atoms.iter().cloned().map(Formula::not));
        for i in 0..atoms.len() {
            for j in i + 1..atoms.len() {
                out.push(Formula::and(atoms[i].clone(), atoms[j].clone()));
                out.push(Formula::or(atoms[i].clone(), atoms[j].clone()));
            }
        }
    }
    out
}

/// Every intervention over `vocab` (each variable unbound or bound to a
/// value), bindings in vocabulary order, the empty one first.
pub fn interventions(vocab: &Vocabulary) -> Vec<Vec<(String, Value)>> {
    interventions_over(vocab, &|_| true)
}

fn interventions_over(vocab: &Vocabulary, keep: &dyn Fn(&str) -> bool) -> Vec<Vec<(String, Value)>> {
    let vars: Vec<_> = vocab.variables().iter().filter(|v| keep(&v.name)).collect();
    let radices: Vec<usize> = vars.iter().map(|v| v.range.len() + 1).collect();
    product_indices(&radices)
        .into_iter()
        .map(|choice| {
            vars.iter()
                .zip(&choice)
                .filter(|(_, &d)| d > 0)
                .map(|(v, &d)| (v.name.clone(), v.range[d - 1]))
                .collect()
        })
        .collect()
}

fn pow(base: usize, exp: usize) -> u64 {
    (base as u64).saturating_pow(exp as u32)
}

/// Upper bound on the number of instances [`instances`] would generate.
pub fn estimate(schema: Schema, vocab: &Vocabulary, bounds: &Bounds) -> u64 {
    let pool = formula_pool(&pool_atoms(vocab, bounds.atoms), bounds.depth).len();
    let meta = schema.metavariables().iter().filter(|(_, k)| *k == MetaKind::Formula).count();
    let ivs: u64 = vocab.variables().iter().map(|v| v.range.len() as u64 + 1).product();
    let atoms = vocab.atom_count() as u64;
    let max_range = vocab.variables().iter().map(|v| v.range.len()).max().unwrap_or(0) as u64;
    match schema {
        Schema::A0 => (TAUTOLOGY_TEMPLATES.len() as u64).saturating_mul(pow(pool * 2, 2)),
        Schema::C0 => (TAUTOLOGY_TEMPLATES.len() as u64).saturating_mul(atoms * atoms),
        Schema::A5 => 1,
        s if s.is_structural() => pow(pool, meta),
        Schema::C1 => ivs.saturating_mul(atoms * max_range),
        Schema::C2 => ivs.saturating_mul(vocab.len() as u64),
        Schema::C3 | Schema::C5 | Schema::GenRev => ivs.saturating_mul(atoms * atoms).saturating_mul(
            if schema == Schema::GenRev { ivs } else { 1 },
        ),
        Schema::C4 => ivs.saturating_mul(atoms),
        Schema::V1 => vocab.len() as u64,
        Schema::V2 => atoms * max_range,
        Schema::V3 => ivs,
        _ => 0,
    }
}

/// Every instance of `schema` within `bounds`: formula metavariables range
/// over [`formula_pool`], variables and values over `vocab`, interventions
/// over [`interventions`]. Instances failing a side condition are skipped.
/// The order is deterministic.
pub fn instances(schema: Schema, vocab: &Vocabulary, bounds: &Bounds) -> Result<Vec<Formula>, SchemaError> {
    let est = estimate(schema, vocab, bounds);
    if est > bounds.cap {
        return Err(SchemaError::BoundsTooLarge { estimate: est, cap: bounds.cap });
    }
    let pool = formula_pool(&pool_atoms(vocab, bounds.atoms), bounds.depth);
    let mut subs: Vec<Substitution> = Vec::new();
    let metas = schema.metavariables();
    match schema {
        Schema::A0 => {
            let mut letters = pool.clone();
            letters.extend(pool.iter().flat_map(|a| pool.iter().map(move |b| cf(a.clone(), b.clone()))));
            letters.truncate(pool.len() * 2);
            let mut out = Vec::new();
            for t in 0..TAUTOLOGY_TEMPLATES.len() {
                for p in &letters {
                    for q in &letters {
                        out.push(template(t, p, q));
                        if t < 3 {
                            break;
                        }
                    }
                }
            }
            return Ok(out);
        }
        Schema::C0 => {
            let basic: Vec<Formula> = vocab
                .variables()
                .iter()
                .flat_map(|v| v.range.iter().map(move |&x| eq(&v.name, x)))
                .collect();
            let mut out = Vec::new();
            for t in 0..TAUTOLOGY_TEMPLATES.len() {
                for p in &basic {
                    for q in &basic {
                        out.push(template(t, p, q));
                        if t < 3 {
                            break;
                        }
                    }
                }
            }
            return Ok(out);
        }
        s if s.is_structural() => {
            let names: Vec<&str> = metas.iter().map(|(n, _)| *n).collect();
            for choice in product_indices(&vec![pool.len(); names.len()]) {
                let mut sub = Substitution::new();
                for (n, &i) in names.iter().zip(&choice) {
                    sub.insert(*n, SubstValue::Formula(pool[i].clone()));
                }
                subs.push(sub);
            }
        }
        Schema::C1 | Schema::V2 => {
            let ivs = if schema == Schema::C1 { interventions(vocab) } else { vec![Vec::new()] };
            for ys in &ivs {
                for v in vocab.variables() {
                    for &x in &v.range {
                        for &x2 in &v.range {
                            let sub = Substitution::new().var("X", v.name.clone()).value("x", x).value("x2", x2);
                            subs.push(if schema == Schema::C1 { sub.bindings("Ys", ys.clone()) } else { sub });
                        }
                    }
                }
            }
        }
        Schema::C2 | Schema::V1 => {
            let ivs = if schema == Schema::C2 { interventions(vocab) } else { vec![Vec::new()] };
            for ys in &ivs {
                for v in vocab.variables() {
                    let sub = Substitution::new().var("X", v.name.clone());
                    subs.push(if schema == Schema::C2 { sub.bindings("Ys", ys.clone()) } else { sub });
                }
            }
        }
        Schema::C3 | Schema::C5 | Schema::GenRev => {
            for xs in interventions(vocab) {
                for wv in vocab.variables() {
                    for &w in &wv.range {
                        for yv in vocab.variables() {
                            for &y in &yv.range {
                                let sub = Substitution::new()
                                    .bindings("Xs", xs.clone())
                                    .var("W", wv.name.clone())
                                    .value("w", w)
                                    .var("Y", yv.name.clone())
                                    .value("y", y);
                                if schema != Schema::GenRev {
                                    subs.push(sub);
                                    continue;
                                }
                                let keep = |n: &str| !binds(&xs, n) && n != wv.name && n != yv.name;
                                for zs in interventions_over(vocab, &keep) {
                                    if zs.iter().filter(|(n, _)| keep(n)).count()
                                        == vocab.variables().iter().filter(|v| keep(&v.name)).count()
                                    {
                                        subs.push(sub.clone().bindings("Zs", zs));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Schema::C4 => {
            for v in vocab.variables() {
                for &x in &v.range {
                    for ws in interventions_over(vocab, &|n| n != v.name) {
                        subs.push(Substitution::new().var("X", v.name.clone()).value("x", x).bindings("Ws", ws));
                    }
                }
            }
        }
        Schema::V3 => {
            for xs in interventions(vocab) {
                subs.push(Substitution::new().bindings("Xs", xs));
            }
        }
        _ => unreachable!(),
    }
    let mut out = Vec::with_capacity(subs.len());
    for sub in &subs {
        match instantiate(schema, sub, Some(vocab)) {
            Ok(f) => out.push(f),
            Err(SchemaError::SideConditionViolated(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn show(fs: &[Formula]) -> Vec<String> {
        fs.iter().map(|f| f.to_string()).collect()
    }

    #[test]
    fn c4_includes_the_two_variable_instance() {
        let v = Vocabulary::binary(2);
        let all = show(&instances(Schema::C4, &v, &Bounds::default()).unwrap());
        assert!(all.contains(&"[X1<-1; X2<-0]X1=1".to_string()), "{all:?}");
        assert_eq!(all.len(), 12);
    }

    #[test]
    fn c5_drops_w_equal_y() {
        let v = Vocabulary::binary(2);
        let all = instances(Schema::C5, &v, &Bounds::default()).unwrap();
        assert_eq!(all.len(), 8);
        let sub = Substitution::new()
            .bindings::<&str>("Xs", [])
            .var("W", "X1")
            .value("w", 0)
            .var("Y", "X1")
            .value("y", 0);
        assert!(matches!(instantiate(Schema::C5, &sub, Some(&v)), Err(SchemaError::SideConditionViolated(_))));
    }

    #[test]
    fn a1_at_depth_zero() {
        let v = Vocabulary::binary(1);
        let all = show(&instances(Schema::A1, &v, &Bounds { depth: 0, atoms: 1, cap: 100 }).unwrap());
        assert_eq!(all[0], "X1=0 ~> X1=0");
    }

    #[test]
    fn text_substitutions() {
        let sub = Substitution::new().text("Ys", "X2<-1").text("X", "X1").text("x", "0").text("x2", "1");
        let f = instantiate(Schema::C1, &sub, None).unwrap();
        assert_eq!(f.to_string(), "[X2<-1]X1=0 -> ![X2<-1]X1=1");
        let sub = Substitution::new().text("phi", "X1=1 ->");
        assert!(matches!(instantiate(Schema::A1, &sub, None), Err(SchemaError::BadSubstitution { .. })));
        let sub = Substitution::new().text("phi", "X1=1 -> X2=1");
        assert!(matches!(instantiate(Schema::A0, &sub, None), Err(SchemaError::SideConditionViolated(_))));
    }

    #[test]
    fn genrev_needs_every_other_variable() {
        let v = Vocabulary::binary(3);
        let sub = Substitution::new()
            .bindings::<&str>("Xs", [])
            .var("W", "X1")
            .value("w", 0)
            .var("Y", "X2")
            .value("y", 1)
            .bindings::<&str>("Zs", []);
        assert!(matches!(instantiate(Schema::GenRev, &sub, Some(&v)), Err(SchemaError::SideConditionViolated(_))));
        let f = instantiate(Schema::GenRev, &sub.clone().bindings("Zs", [("X3", 1)]), Some(&v)).unwrap();
        assert!(f.to_string().contains("X3=1"));
        assert!(!instances(Schema::GenRev, &Vocabulary::binary(2), &Bounds::default()).unwrap().is_empty());
    }

    #[test]
    fn caps_are_enforced() {
        let v = Vocabulary::binary(2);
        let tight = Bounds { cap: 10, ..Bounds::default() };
        assert!(matches!(instances(Schema::A3, &v, &tight), Err(SchemaError::BoundsTooLarge { .. })));
    }

    #[test]
    fn every_generated_a0_instance_is_a_tautology() {
        let v = Vocabulary::binary(2);
        for schema in [Schema::A0, Schema::C0] {
            let all = instances(schema, &v, &Bounds::default()).unwrap();
            assert!(all.len() > 20);
            for f in all {
                assert!(crate::taut::is_tautology(&f).unwrap(), "{f}");
            }
        }
    }
}

//! JSON formats for causal models, counterfactual structures and proof
//! scripts.

use std::collections::BTreeMap;

use cfworld_core::axioms::{Schema, SubstValue, Substitution};
use cfworld_core::formula::{parse, parse_bindings, ParseError};
use cfworld_core::model::{ModelError, TableSpec};
use cfworld_core::proof::{AxiomBase, Justification, Premise, ProofLine, ProofScript, Rule};
use cfworld_core::structure::{CounterfactualStructure, Relation, StructureError};
use cfworld_core::{CausalModel, Signature, SignatureError, Value, Variable, Vocabulary};
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("{what}: {err}")]
    Parse { what: String, err: ParseError },
    #[error("{0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> FormatError {
    FormatError::Invalid(msg.into())
}

type Ranges = IndexMap<String, Vec<Value>>;

fn variables(r: &Ranges) -> Vec<Variable> {
    r.iter().map(|(n, vals)| Variable::new(n.clone(), vals.clone())).collect()
}

fn ranges(vars: &[Variable]) -> Ranges {
    vars.iter().map(|v| (v.name.clone(), v.range.clone())).collect()
}

fn row_key(values: &[Value]) -> String {
    values.iter().map(Value::to_string).collect::<Vec<_>>().join(",")
}

fn parse_row_key(var: &str, key: &str) -> Result<Vec<Value>, FormatError> {
    if key.trim().is_empty() {
        return Ok(Vec::new());
    }
    key.split(',')
        .map(|p| p.trim().parse::<Value>().map_err(|_| invalid(format!("equation for `{var}`: bad row key `{key}`"))))
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquationFile {
    #[serde(default)]
    pub inputs: Vec<String>,
    pub table: IndexMap<String, Value>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelFile {
    #[serde(default)]
    pub exogenous: Ranges,
    pub endogenous: Ranges,
    pub equations: IndexMap<String, EquationFile>,
}

impl ModelFile {
    pub fn to_model(&self) -> Result<CausalModel, FormatError> {
        let sig = Signature::new(variables(&self.exogenous), variables(&self.endogenous))?;
        let mut tables = BTreeMap::new();
        for (var, eq) in &self.equations {
            let mut rows = BTreeMap::new();
            for (key, &out) in &eq.table {
                let row = parse_row_key(var, key)?;
                if rows.insert(row, out).is_some() {
                    return Err(invalid(format!("equation for `{var}`: row `{key}` given twice")));
                }
            }
            tables.insert(var.clone(), TableSpec { inputs: eq.inputs.clone(), rows });
        }
        Ok(CausalModel::new(sig, &tables)?)
    }

    /// Each equation over only the variables it depends on.
    pub fn from_model(t: &CausalModel) -> Self {
        let sig = t.signature();
        let equations = sig
            .endogenous()
            .iter()
            .map(|v| {
                let spec = t.table_spec(&v.name).expect("endogenous variable");
                let table = spec.rows.iter().map(|(k, &out)| (row_key(k), out)).collect();
                (v.name.clone(), EquationFile { inputs: spec.inputs, table })
            })
            .collect();
        Self { exogenous: ranges(sig.exogenous()), endogenous: ranges(sig.endogenous()), equations }
    }
}

pub fn read_model(text: &str) -> Result<CausalModel, FormatError> {
    serde_json::from_str::<ModelFile>(text)?.to_model()
}

pub fn write_model(t: &CausalModel) -> String {
    pretty(&ModelFile::from_model(t))
}

/// A world: a value per variable, or the list of atoms true there.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WorldFile {
    Values(IndexMap<String, Value>),
    Atoms { atoms: Vec<String> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StructureFile {
    pub variables: Ranges,
    pub worlds: IndexMap<String, WorldFile>,
    /// `order[w]` lists pairs `[a, b]` meaning `a <=_w b`.
    #[serde(default)]
    pub order: IndexMap<String, Vec<[String; 2]>>,
}

impl StructureFile {
    pub fn to_structure(&self) -> Result<CounterfactualStructure, FormatError> {
        let vocab = Vocabulary::new(variables(&self.variables))?;
        let ids: Vec<String> = self.worlds.keys().cloned().collect();
        let n = ids.len();
        let index = |id: &str| ids.iter().position(|w| w == id).ok_or_else(|| invalid(format!("unknown world `{id}`")));
        let mut orders = vec![Relation::empty(n); n];
        for (w, pairs) in &self.order {
            let wi = index(w)?;
            let r = &mut orders[wi];
            for [a, b] in pairs {
                let (a, b) = (index(a)?, index(b)?);
                r.set(a, b);
                r.set(a, a);
                r.set(b, b);
            }
            r.set(wi, wi);
        }
        let acceptable = self.worlds.values().all(|w| matches!(w, WorldFile::Values(_)));
        if acceptable {
            let values = self
                .worlds
                .iter()
                .map(|(id, w)| {
                    let WorldFile::Values(vals) = w else { unreachable!() };
                    for k in vals.keys() {
                        if vocab.position(k).is_none() {
                            return Err(invalid(format!("world `{id}` assigns unknown variable `{k}`")));
                        }
                    }
                    vocab
                        .variables()
                        .iter()
                        .map(|v| vals.get(&v.name).copied().ok_or_else(|| invalid(format!("world `{id}` leaves `{}` unassigned", v.name))))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(CounterfactualStructure::acceptable(vocab, ids, values, orders)?)
        } else {
            let truth = self
                .worlds
                .iter()
                .map(|(id, w)| {
                    let WorldFile::Atoms { atoms } = w else {
                        return Err(invalid(format!("world `{id}`: mix of value maps and atom lists")));
                    };
                    let mut t = vec![false; vocab.atom_count()];
                    for a in atoms {
                        let (var, value) = a
                            .split_once('=')
                            .and_then(|(v, x)| Some((v.trim(), x.trim().parse::<Value>().ok()?)))
                            .ok_or_else(|| invalid(format!("world `{id}`: `{a}` is not an atom")))?;
                        let i = vocab.atom_index(var, value).ok_or_else(|| invalid(format!("world `{id}`: unknown atom `{a}`")))?;
                        t[i] = true;
                    }
                    Ok(t)
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(CounterfactualStructure::generic(vocab, ids, truth, orders)?)
        }
    }

    /// Reflexive pairs are left implicit.
    pub fn from_structure(m: &CounterfactualStructure) -> Self {
        let vocab = m.vocabulary();
        let ids = m.ids();
        let worlds = (0..m.world_count())
            .map(|w| {
                let file = match m.values(w) {
                    Some(vals) => WorldFile::Values(vocab.variables().iter().map(|v| v.name.clone()).zip(vals).collect()),
                    None => {
                        let truth = m.truth(w);
                        let atoms = vocab
                            .variables()
                            .iter()
                            .flat_map(|v| v.range.iter().map(move |&x| (v.name.as_str(), x)))
                            .filter(|&(v, x)| truth[vocab.atom_index(v, x).unwrap()])
                            .map(|(v, x)| format!("{v}={x}"))
                            .collect();
                        WorldFile::Atoms { atoms }
                    }
                };
                (ids[w].clone(), file)
            })
            .collect();
        let order = (0..m.world_count())
            .map(|w| {
                let pairs = m.order(w).pairs().filter(|(a, b)| a != b).map(|(a, b)| [ids[a].clone(), ids[b].clone()]).collect();
                (ids[w].clone(), pairs)
            })
            .collect();
        Self { variables: ranges(vocab.variables()), worlds, order }
    }
}

pub fn read_structure(text: &str) -> Result<CounterfactualStructure, FormatError> {
    serde_json::from_str::<StructureFile>(text)?.to_structure()
}

pub fn write_structure(m: &CounterfactualStructure) -> String {
    pretty(&StructureFile::from_structure(m))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BaseFile {
    pub axioms: Vec<String>,
    #[serde(default)]
    pub rules: Vec<String>,
}

/// A cited line (1-based) or the word `taut`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PremiseFile {
    Line(usize),
    Word(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SubstFile {
    Number(Value),
    Text(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ByFile {
    Axiom {
        schema: String,
        #[serde(default)]
        subst: IndexMap<String, SubstFile>,
    },
    Mp {
        minor: usize,
        major: usize,
    },
    Ra1 {
        premise: PremiseFile,
    },
    Ra2 {
        premise: PremiseFile,
    },
    Taut,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LineFile {
    pub formula: String,
    pub by: ByFile,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProofFile {
    pub base: BaseFile,
    /// Ranges of the variables, for schemas that range over values.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variables: Option<Ranges>,
    pub lines: Vec<LineFile>,
}

fn schema_named(name: &str) -> Result<Schema, FormatError> {
    Schema::from_name(name).ok_or_else(|| invalid(format!("unknown schema `{name}`")))
}

fn line_ref(at: usize, k: usize) -> Result<usize, FormatError> {
    k.checked_sub(1).ok_or_else(|| invalid(format!("line {at}: lines are numbered from 1")))
}

fn premise(at: usize, p: &PremiseFile) -> Result<Premise, FormatError> {
    match p {
        PremiseFile::Line(k) => Ok(Premise::Line(line_ref(at, *k)?)),
        PremiseFile::Word(w) if w.eq_ignore_ascii_case("taut") => Ok(Premise::Taut),
        PremiseFile::Word(w) => Err(invalid(format!("line {at}: premise `{w}` is neither a line number nor `taut`"))),
    }
}

fn premise_file(p: &Premise) -> PremiseFile {
    match p {
        Premise::Line(k) => PremiseFile::Line(k + 1),
        Premise::Taut => PremiseFile::Word("taut".into()),
    }
}

fn subst_text(v: &SubstValue) -> SubstFile {
    match v {
        SubstValue::Formula(f) => SubstFile::Text(f.to_string()),
        SubstValue::Variable(n) => SubstFile::Text(n.clone()),
        SubstValue::Value(x) => SubstFile::Number(*x),
        SubstValue::Bindings(b) => {
            SubstFile::Text(b.iter().map(|(v, x)| format!("{v}<-{x}")).collect::<Vec<_>>().join("; "))
        }
        SubstValue::Text(t) => SubstFile::Text(t.clone()),
    }
}

impl ProofFile {
    pub fn to_script(&self) -> Result<(AxiomBase, ProofScript), FormatError> {
        let mut base = AxiomBase::minimal();
        for a in &self.base.axioms {
            base = base.with(schema_named(a)?).map_err(|e| invalid(e.to_string()))?;
        }
        for r in &self.base.rules {
            base = base.with_rule(Rule::from_name(r).ok_or_else(|| invalid(format!("unknown rule `{r}`")))?);
        }
        let vocabulary = match &self.variables {
            Some(r) => Some(Vocabulary::new(variables(r))?),
            None => None,
        };
        let mut lines = Vec::with_capacity(self.lines.len());
        for (i, l) in self.lines.iter().enumerate() {
            let at = i + 1;
            let formula =
                parse(&l.formula).map_err(|err| FormatError::Parse { what: format!("line {at}"), err })?;
            let by = match &l.by {
                ByFile::Axiom { schema, subst } => {
                    let mut s = Substitution::new();
                    for (k, v) in subst {
                        s.insert(
                            k.clone(),
                            match v {
                                SubstFile::Number(x) => SubstValue::Value(*x),
                                SubstFile::Text(t) => SubstValue::Text(t.clone()),
                            },
                        );
                    }
                    Justification::Axiom { schema: schema_named(schema)?, subst: s }
                }
                ByFile::Mp { minor, major } => {
                    Justification::MP { minor: line_ref(at, *minor)?, major: line_ref(at, *major)? }
                }
                ByFile::Ra1 { premise: p } => Justification::RA1(premise(at, p)?),
                ByFile::Ra2 { premise: p } => Justification::RA2(premise(at, p)?),
                ByFile::Taut => Justification::Taut,
            };
            lines.push(ProofLine { formula, by });
        }
        Ok((base, ProofScript { lines, vocabulary }))
    }

    pub fn from_script(base: &AxiomBase, script: &ProofScript) -> Self {
        let lines = script
            .lines
            .iter()
            .map(|l| LineFile {
                formula: l.formula.to_string(),
                by: match &l.by {
                    Justification::Axiom { schema, subst } => ByFile::Axiom {
                        schema: schema.name().to_string(),
                        subst: subst.iter().map(|(k, v)| (k.to_string(), subst_text(v))).collect(),
                    },
                    Justification::MP { minor, major } => ByFile::Mp { minor: minor + 1, major: major + 1 },
                    Justification::RA1(p) => ByFile::Ra1 { premise: premise_file(p) },
                    Justification::RA2(p) => ByFile::Ra2 { premise: premise_file(p) },
                    Justification::Taut => ByFile::Taut,
                },
            })
            .collect();
        Self {
            base: BaseFile {
                axioms: base.axioms().map(|s| s.name().to_string()).collect(),
                rules: base.rules().map(|r| r.name().to_string()).collect(),
            },
            variables: script.vocabulary.as_ref().map(|v| ranges(v.variables())),
            lines,
        }
    }
}

pub fn read_proof(text: &str) -> Result<(AxiomBase, ProofScript), FormatError> {
    serde_json::from_str::<ProofFile>(text)?.to_script()
}

pub fn write_proof(base: &AxiomBase, script: &ProofScript) -> String {
    pretty(&ProofFile::from_script(base, script))
}

/// Parses `X<-1; Y<-0` style bindings, naming `what` in errors.
pub fn bindings(what: &str, text: &str) -> Result<Vec<(String, Value)>, FormatError> {
    parse_bindings(text).map_err(|err| FormatError::Parse { what: what.into(), err })
}

pub(crate) fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}

//! Variable vocabularies: signatures (exogenous + endogenous variables with
//! finite ranges), partial assignments, and the endogenous vocabulary that
//! counterfactual structures are built over.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

/// A value in a variable's range.
pub type Value = i64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("variable `{0}` is declared more than once")]
    DuplicateVariable(String),
    #[error("variable `{0}` has an empty range")]
    EmptyRange(String),
    #[error("range of `{var}` lists value {value} twice")]
    DuplicateValue { var: String, value: Value },
    #[error("`{0}` is not a valid variable name")]
    BadName(String),
}

/// A named variable together with its ordered range.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    pub range: Vec<Value>,
}

impl Variable {
    pub fn new(name: impl Into<String>, range: impl Into<Vec<Value>>) -> Self {
        Self { name: name.into(), range: range.into() }
    }

    pub fn binary(name: impl Into<String>) -> Self {
        Self::new(name, [0, 1])
    }

    pub fn index_of(&self, value: Value) -> Option<usize> {
        self.range.iter().position(|&v| v == value)
    }
}

pub(crate) fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && name != "true" && name != "false"
}

fn check_variables<'a>(vars: impl Iterator<Item = &'a Variable>) -> Result<(), SignatureError> {
    let mut seen = BTreeSet::new();
    for var in vars {
        if !valid_name(&var.name) {
            return Err(SignatureError::BadName(var.name.clone()));
        }
        if !seen.insert(var.name.as_str()) {
            return Err(SignatureError::DuplicateVariable(var.name.clone()));
        }
        if var.range.is_empty() {
            return Err(SignatureError::EmptyRange(var.name.clone()));
        }
        let mut values = BTreeSet::new();
        for &value in &var.range {
            if !values.insert(value) {
                return Err(SignatureError::DuplicateValue { var: var.name.clone(), value });
            }
        }
    }
    Ok(())
}

/// The endogenous variables and their ranges: the primitive propositions
/// `X=x` that formulas and counterfactual structures talk about.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vocabulary {
    vars: Vec<Variable>,
    /// Offset of each variable's first atom in the flattened atom list.
    offsets: Vec<usize>,
}

impl Vocabulary {
    pub fn new(vars: Vec<Variable>) -> Result<Self, SignatureError> {
        check_variables(vars.iter())?;
        let mut offsets = Vec::with_capacity(vars.len());
        let mut next = 0;
        for var in &vars {
            offsets.push(next);
            next += var.range.len();
        }
        Ok(Self { vars, offsets })
    }

    /// `n` binary variables named `X1..Xn`.
    pub fn binary(n: usize) -> Self {
        Self::new((1..=n).map(|i| Variable::binary(format!("X{i}"))).collect())
            .expect("generated names are valid")
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn range(&self, name: &str) -> Option<&[Value]> {
        self.vars.iter().find(|v| v.name == name).map(|v| v.range.as_slice())
    }

    pub fn atom_count(&self) -> usize {
        self.vars.iter().map(|v| v.range.len()).sum()
    }

    /// Flattened index of the atom `name=value`.
    pub fn atom_index(&self, name: &str, value: Value) -> Option<usize> {
        let pos = self.position(name)?;
        let idx = self.vars[pos].index_of(value)?;
        Some(self.offsets[pos] + idx)
    }

    pub(crate) fn atom_offset(&self, var: usize) -> usize {
        self.offsets[var]
    }

    /// Number of total assignments over the vocabulary.
    pub fn assignment_count(&self) -> usize {
        self.vars.iter().map(|v| v.range.len()).product()
    }

    /// All total assignments as value-index vectors, in lexicographic order.
    pub fn assignments(&self) -> Vec<Vec<usize>> {
        let radices: Vec<usize> = self.vars.iter().map(|v| v.range.len()).collect();
        product_indices(&radices)
    }
}

/// Every index vector `v` with `v[i] < radices[i]`, lexicographically ordered
/// with the first position most significant.
pub(crate) fn product_indices(radices: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = radices.iter().product();
    let mut out = Vec::with_capacity(total);
    if radices.contains(&0) {
        return out;
    }
    let mut current = alloc::vec![0usize; radices.len()];
    for _ in 0..total {
        out.push(current.clone());
        for i in (0..radices.len()).rev() {
            current[i] += 1;
            if current[i] < radices[i] {
                break;
            }
            current[i] = 0;
        }
    }
    out
}

/// A signature: ordered exogenous and endogenous variables with ranges.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    exogenous: Vec<Variable>,
    endogenous: Vocabulary,
}

impl Signature {
    pub fn new(exogenous: Vec<Variable>, endogenous: Vec<Variable>) -> Result<Self, SignatureError> {
        check_variables(exogenous.iter().chain(endogenous.iter()))?;
        Ok(Self { exogenous, endogenous: Vocabulary::new(endogenous)? })
    }

    /// `n` binary endogenous variables `X1..Xn` and a single exogenous `U`
    /// ranging over `0..exo_size`.
    pub fn binary(n: usize, exo_size: usize) -> Self {
        let exo = Variable::new("U", (0..exo_size as Value).collect::<Vec<_>>());
        Self::new(alloc::vec![exo], Vocabulary::binary(n).vars).expect("generated names are valid")
    }

    pub fn exogenous(&self) -> &[Variable] {
        &self.exogenous
    }

    pub fn endogenous(&self) -> &[Variable] {
        self.endogenous.variables()
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.endogenous
    }

    pub fn is_endogenous(&self, name: &str) -> bool {
        self.endogenous.position(name).is_some()
    }

    pub fn is_exogenous(&self, name: &str) -> bool {
        self.exogenous.iter().any(|v| v.name == name)
    }

    pub fn variable(&self, name: &str) -> Option<&Variable> {
        self.all().find(|v| v.name == name)
    }

    /// Exogenous variables followed by endogenous ones.
    pub fn all(&self) -> impl Iterator<Item = &Variable> {
        self.exogenous.iter().chain(self.endogenous.variables().iter())
    }

    pub fn var_count(&self) -> usize {
        self.exogenous.len() + self.endogenous.len()
    }

    /// Position of a variable in the combined (exogenous-first) ordering.
    pub fn position(&self, name: &str) -> Option<usize> {
        self.all().position(|v| v.name == name)
    }

    pub fn context_count(&self) -> usize {
        self.exogenous.iter().map(|v| v.range.len()).product()
    }

    /// All contexts (total exogenous assignments) in lexicographic order.
    pub fn contexts(&self) -> Vec<Assignment> {
        let radices: Vec<usize> = self.exogenous.iter().map(|v| v.range.len()).collect();
        product_indices(&radices)
            .into_iter()
            .map(|idx| {
                Assignment::from_iter(
                    self.exogenous.iter().zip(idx).map(|(v, i)| (v.name.clone(), v.range[i])),
                )
            })
            .collect()
    }
}

/// A partial assignment of values to variables.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment(BTreeMap<String, Value>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> Option<Value> {
        self.0.get(name).copied()
    }

    /// Binds `name`, returning the previous value if there was one.
    pub fn insert(&mut self, name: impl Into<String>, value: Value) -> Option<Value> {
        self.0.insert(name.into(), value)
    }

    pub fn with(mut self, name: impl Into<String>, value: Value) -> Self {
        self.insert(name, value);
        self
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Value)> {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.contains_key(name)
    }
}

impl FromIterator<(String, Value)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (String, Value)>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl<'a> FromIterator<(&'a str, Value)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (&'a str, Value)>>(iter: I) -> Self {
        Self(iter.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rejects_overlapping_names() {
        let err = Signature::new(vec![Variable::binary("X")], vec![Variable::binary("X")]).unwrap_err();
        assert_eq!(err, SignatureError::DuplicateVariable("X".into()));
    }

    #[test]
    fn rejects_bad_ranges() {
        assert_eq!(
            Vocabulary::new(vec![Variable::new("X", vec![])]).unwrap_err(),
            SignatureError::EmptyRange("X".into())
        );
        assert_eq!(
            Vocabulary::new(vec![Variable::new("X", vec![1, 1])]).unwrap_err(),
            SignatureError::DuplicateValue { var: "X".into(), value: 1 }
        );
        assert!(matches!(
            Vocabulary::new(vec![Variable::binary("true")]),
            Err(SignatureError::BadName(_))
        ));
    }

    #[test]
    fn contexts_enumerate_in_order() {
        let sig = Signature::new(
            vec![Variable::new("A", vec![0, 1]), Variable::new("B", vec![5, 6, 7])],
            vec![Variable::binary("X")],
        )
        .unwrap();
        let ctx = sig.contexts();
        assert_eq!(ctx.len(), 6);
        assert_eq!(ctx[0], Assignment::from_iter([("A", 0), ("B", 5)]));
        assert_eq!(ctx[5], Assignment::from_iter([("A", 1), ("B", 7)]));
    }

    #[test]
    fn atom_indices_are_flattened() {
        let voc = Vocabulary::new(vec![Variable::new("A", vec![0, 1, 2]), Variable::binary("B")]).unwrap();
        assert_eq!(voc.atom_count(), 5);
        assert_eq!(voc.atom_index("A", 2), Some(2));
        assert_eq!(voc.atom_index("B", 0), Some(3));
        assert_eq!(voc.atom_index("B", 7), None);
        assert_eq!(voc.assignments().len(), 6);
    }
}

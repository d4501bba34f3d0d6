//! Causal models with explicit equation tables.
//!
//! Each endogenous variable `X` owns a total table from the values of every
//! other variable (exogenous and endogenous) to a value in `X`'s range.
//! Interventions replace a table by a constant; solving is exhaustive
//! enumeration of the endogenous assignment space, so models with zero or
//! several solutions are handled uniformly.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::signature::{product_indices, Assignment, Signature, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("no equation table for endogenous variable `{0}`")]
    MissingTable(String),
    #[error("table given for `{0}`, which is not an endogenous variable")]
    UnexpectedTable(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("equation for `{0}` lists itself as an input")]
    SelfInput(String),
    #[error("equation for `{var}` lists input `{input}` twice")]
    DuplicateInput { var: String, input: String },
    #[error("table for `{var}` has a row of length {found}, expected {expected}")]
    BadRow { var: String, expected: usize, found: usize },
    #[error("table for `{var}` has no row for inputs {row:?}")]
    NonTotalTable { var: String, row: Vec<Value> },
    #[error("value {value} is not in the range of `{var}`")]
    ValueOutOfRange { var: String, value: Value },
    #[error("`{0}` is not endogenous and cannot be intervened on")]
    NotEndogenous(String),
    #[error("context does not assign exogenous variable `{0}`")]
    PartialContext(String),
}

/// One equation given extensionally: the output for every combination of
/// `inputs`. Variables not listed are ones the equation ignores.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TableSpec {
    pub inputs: Vec<String>,
    pub rows: BTreeMap<Vec<Value>, Value>,
}

impl TableSpec {
    pub fn constant(value: Value) -> Self {
        let mut rows = BTreeMap::new();
        rows.insert(Vec::new(), value);
        Self { inputs: Vec::new(), rows }
    }

    pub fn new(inputs: Vec<String>, rows: impl IntoIterator<Item = (Vec<Value>, Value)>) -> Self {
        Self { inputs, rows: rows.into_iter().collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Equation {
    /// `(position in the combined ordering, stride)` for every other variable.
    strides: Vec<(usize, usize)>,
    /// Output value index per row.
    table: Vec<usize>,
}

impl Equation {
    #[inline]
    fn row(&self, world: &[usize]) -> usize {
        self.strides.iter().map(|&(pos, stride)| world[pos] * stride).sum()
    }
}

/// A causal model `(S, F)` together with the set of pinned (intervened)
/// variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CausalModel {
    sig: Signature,
    equations: Vec<Equation>,
    pinned: Vec<bool>,
}

/// Outcome of the recursion test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Recursion {
    /// A causal order: every variable depends only on variables listed earlier.
    Acyclic(Vec<String>),
    /// A dependence cycle `v0 -> v1 -> ... -> v0`, where `a -> b` means `b`'s
    /// equation depends on `a`.
    Cyclic(Vec<String>),
}

impl Recursion {
    pub fn is_acyclic(&self) -> bool {
        matches!(self, Recursion::Acyclic(_))
    }
}

/// The most specific of the three nested model classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModelClass {
    /// Acyclic equations.
    Recursive,
    /// Not recursive, but every intervention has exactly one solution in
    /// every context.
    UniqueSolutions,
    /// Neither of the above.
    General,
}

impl ModelClass {
    pub fn label(self) -> &'static str {
        match self {
            ModelClass::Recursive => "Trec",
            ModelClass::UniqueSolutions => "Tun",
            ModelClass::General => "T",
        }
    }
}

impl fmt::Display for ModelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Witness that a model is not in Tun.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TunViolation {
    pub intervention: Assignment,
    pub context: Assignment,
    pub solutions: usize,
}

impl CausalModel {
    /// Builds a validated model from one table per endogenous variable.
    pub fn new(sig: Signature, tables: &BTreeMap<String, TableSpec>) -> Result<Self, ModelError> {
        for name in tables.keys() {
            if !sig.is_endogenous(name) {
                return Err(ModelError::UnexpectedTable(name.clone()));
            }
        }
        let mut equations = Vec::with_capacity(sig.endogenous().len());
        for (i, var) in sig.endogenous().iter().enumerate() {
            let spec = tables.get(&var.name).ok_or_else(|| ModelError::MissingTable(var.name.clone()))?;
            equations.push(build_equation(&sig, sig.exogenous().len() + i, spec)?);
        }
        let pinned = vec![false; equations.len()];
        Ok(Self { sig, equations, pinned })
    }

    /// Builds a model by evaluating `f(var, others)` on every assignment of the
    /// variables other than `var`.
    pub fn from_fn(
        sig: Signature,
        mut f: impl FnMut(&str, &Assignment) -> Value,
    ) -> Result<Self, ModelError> {
        let n_exo = sig.exogenous().len();
        let mut equations = Vec::new();
        for (i, var) in sig.endogenous().iter().enumerate() {
            let owner = n_exo + i;
            let others: Vec<usize> = (0..sig.var_count()).filter(|&p| p != owner).collect();
            let vars: Vec<_> = sig.all().collect();
            let radices: Vec<usize> = others.iter().map(|&p| vars[p].range.len()).collect();
            let mut table = Vec::new();
            for row in product_indices(&radices) {
                let inputs = Assignment::from_iter(
                    others.iter().zip(&row).map(|(&p, &v)| (vars[p].name.as_str(), vars[p].range[v])),
                );
                let out = f(&var.name, &inputs);
                let idx = var
                    .index_of(out)
                    .ok_or_else(|| ModelError::ValueOutOfRange { var: var.name.clone(), value: out })?;
                table.push(idx);
            }
            equations.push(Equation { strides: strides_for(&sig, owner), table });
        }
        let pinned = vec![false; equations.len()];
        Ok(Self { sig, equations, pinned })
    }

    /// Builds a model from raw output-index tables in canonical row order.
    pub(crate) fn from_raw_tables(sig: Signature, tables: Vec<Vec<usize>>) -> Self {
        let n_exo = sig.exogenous().len();
        let equations = tables
            .into_iter()
            .enumerate()
            .map(|(i, table)| {
                let strides = strides_for(&sig, n_exo + i);
                debug_assert_eq!(table.len(), row_count(&sig, n_exo + i));
                Equation { strides, table }
            })
            .collect::<Vec<_>>();
        let pinned = vec![false; equations.len()];
        Self { sig, equations, pinned }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    /// Names of the variables fixed by an intervention.
    pub fn pinned(&self) -> Vec<&str> {
        self.sig
            .endogenous()
            .iter()
            .zip(&self.pinned)
            .filter(|(_, &p)| p)
            .map(|(v, _)| v.name.as_str())
            .collect()
    }

    /// `F_X` evaluated on an assignment to (at least) every other variable.
    pub fn equation_value(&self, var: &str, others: &Assignment) -> Result<Value, ModelError> {
        let endo = self
            .sig
            .vocabulary()
            .position(var)
            .ok_or_else(|| ModelError::UnknownVariable(var.into()))?;
        let owner = self.sig.exogenous().len() + endo;
        let mut world = vec![0; self.sig.var_count()];
        for (pos, v) in self.sig.all().enumerate() {
            if pos == owner {
                continue;
            }
            let value = others.get(&v.name).ok_or_else(|| ModelError::UnknownVariable(v.name.clone()))?;
            world[pos] = v
                .index_of(value)
                .ok_or_else(|| ModelError::ValueOutOfRange { var: v.name.clone(), value })?;
        }
        let eq = &self.equations[endo];
        Ok(self.sig.endogenous()[endo].range[eq.table[eq.row(&world)]])
    }

    /// The model `T_{X<-x}`: each bound variable's equation becomes the
    /// constant it is bound to.
    pub fn intervene(&self, a: &Assignment) -> Result<Self, ModelError> {
        let mut pins = Vec::with_capacity(a.len());
        for (name, value) in a.iter() {
            if self.sig.is_exogenous(name) {
                return Err(ModelError::NotEndogenous(name.into()));
            }
            let endo = self
                .sig
                .vocabulary()
                .position(name)
                .ok_or_else(|| ModelError::UnknownVariable(name.into()))?;
            let idx = self.sig.endogenous()[endo]
                .index_of(value)
                .ok_or_else(|| ModelError::ValueOutOfRange { var: name.into(), value })?;
            pins.push((endo, idx));
        }
        Ok(self.intervene_dense(&pins))
    }

    pub(crate) fn intervene_dense(&self, pins: &[(usize, usize)]) -> Self {
        let mut out = self.clone();
        for &(endo, idx) in pins {
            let eq = &mut out.equations[endo];
            eq.table.iter_mut().for_each(|t| *t = idx);
            out.pinned[endo] = true;
        }
        out
    }

    /// Exogenous value indices of a context.
    pub(crate) fn context_indices(&self, ctx: &Assignment) -> Result<Vec<usize>, ModelError> {
        self.sig
            .exogenous()
            .iter()
            .map(|v| {
                let value = ctx.get(&v.name).ok_or_else(|| ModelError::PartialContext(v.name.clone()))?;
                v.index_of(value).ok_or_else(|| ModelError::ValueOutOfRange { var: v.name.clone(), value })
            })
            .collect()
    }

    /// All endogenous assignments satisfying every equation in context `ctx`.
    pub fn solutions(&self, ctx: &Assignment) -> Result<Vec<Assignment>, ModelError> {
        let ctx_idx = self.context_indices(ctx)?;
        let endo = self.sig.endogenous();
        Ok(self
            .solve_dense(&ctx_idx, &[])
            .into_iter()
            .map(|sol| {
                Assignment::from_iter(endo.iter().zip(sol).map(|(v, i)| (v.name.as_str(), v.range[i])))
            })
            .collect())
    }

    /// Solutions as endogenous value-index vectors. `overrides[i] = Some(v)`
    /// pins endogenous variable `i` to value index `v` without rebuilding the
    /// model; an empty slice means no overrides.
    pub(crate) fn solve_dense(&self, ctx: &[usize], overrides: &[Option<usize>]) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.for_each_solution(ctx, overrides, |sol| {
            out.push(sol.to_vec());
            true
        });
        out
    }

    pub(crate) fn count_solutions(&self, ctx: &[usize], overrides: &[Option<usize>], limit: usize) -> usize {
        let mut n = 0;
        self.for_each_solution(ctx, overrides, |_| {
            n += 1;
            n < limit
        });
        n
    }

    /// Calls `visit` on each solution in lexicographic order until it returns
    /// false.
    fn for_each_solution(
        &self,
        ctx: &[usize],
        overrides: &[Option<usize>],
        mut visit: impl FnMut(&[usize]) -> bool,
    ) {
        let n_exo = ctx.len();
        let endo = self.sig.endogenous();
        let n = endo.len();
        let fixed = |i: usize| overrides.get(i).copied().flatten();
        let mut world = vec![0usize; n_exo + n];
        world[..n_exo].copy_from_slice(ctx);
        for i in 0..n {
            if let Some(v) = fixed(i) {
                world[n_exo + i] = v;
            }
        }
        let free: Vec<usize> = (0..n).filter(|&i| fixed(i).is_none()).collect();
        loop {
            let ok = (0..n).all(|i| {
                fixed(i).is_some() || {
                    let eq = &self.equations[i];
                    eq.table[eq.row(&world)] == world[n_exo + i]
                }
            });
            if ok && !visit(&world[n_exo..]) {
                return;
            }
            // odometer over the free variables, last one fastest
            let mut k = free.len();
            loop {
                if k == 0 {
                    return;
                }
                k -= 1;
                let i = free[k];
                world[n_exo + i] += 1;
                if world[n_exo + i] < endo[i].range.len() {
                    break;
                }
                world[n_exo + i] = 0;
            }
        }
    }

    /// `deps[x][y]`: the equation of endogenous `x` semantically depends on
    /// endogenous `y`, i.e. two inputs differing only at `y` give different
    /// outputs.
    pub fn dependence_matrix(&self) -> Vec<Vec<bool>> {
        let n_exo = self.sig.exogenous().len();
        let endo = self.sig.endogenous();
        let n = endo.len();
        let mut deps = vec![vec![false; n]; n];
        for (x, eq) in self.equations.iter().enumerate() {
            for &(pos, stride) in &eq.strides {
                if pos < n_exo {
                    continue;
                }
                let y = pos - n_exo;
                let k = endo[y].range.len();
                'rows: for r in 0..eq.table.len() {
                    let cur = (r / stride) % k;
                    for alt in cur + 1..k {
                        let r2 = r + (alt - cur) * stride;
                        if eq.table[r] != eq.table[r2] {
                            deps[x][y] = true;
                            break 'rows;
                        }
                    }
                }
            }
        }
        deps
    }

    /// Whether the equations admit a causal order, with a witness either way.
    pub fn recursion(&self) -> Recursion {
        let deps = self.dependence_matrix();
        let names: Vec<String> = self.sig.endogenous().iter().map(|v| v.name.clone()).collect();
        let n = names.len();
        let mut placed = vec![false; n];
        let mut order = Vec::with_capacity(n);
        while order.len() < n {
            let next = (0..n).find(|&x| !placed[x] && (0..n).all(|y| !deps[x][y] || placed[y]));
            match next {
                Some(x) => {
                    placed[x] = true;
                    order.push(x);
                }
                None => break,
            }
        }
        if order.len() == n {
            return Recursion::Acyclic(order.into_iter().map(|i| names[i].clone()).collect());
        }
        // Every unplaced variable depends on some unplaced variable; follow
        // those dependencies until one repeats.
        let start = (0..n).find(|&x| !placed[x]).expect("some variable is unplaced");
        let mut path = vec![start];
        loop {
            let cur = *path.last().unwrap();
            let next = (0..n).find(|&y| !placed[y] && deps[cur][y]).expect("unplaced variable has an unplaced dependency");
            if let Some(at) = path.iter().position(|&v| v == next) {
                let mut cycle: Vec<usize> = path[at..].to_vec();
                // path runs against the edge direction
                cycle.reverse();
                let min_at = (0..cycle.len()).min_by_key(|&i| cycle[i]).unwrap();
                cycle.rotate_left(min_at);
                return Recursion::Cyclic(cycle.into_iter().map(|i| names[i].clone()).collect());
            }
            path.push(next);
        }
    }

    pub fn is_recursive(&self) -> bool {
        self.recursion().is_acyclic()
    }

    /// Searches every intervention (including the empty one) in every context
    /// for a solution count other than one.
    pub fn tun_violation(&self) -> Option<TunViolation> {
        let endo = self.sig.endogenous();
        let exo = self.sig.exogenous();
        // each endogenous variable: 0 = not intervened, k+1 = pinned to value k
        let radices: Vec<usize> = endo.iter().map(|v| v.range.len() + 1).collect();
        let ctx_radices: Vec<usize> = exo.iter().map(|v| v.range.len()).collect();
        let contexts = product_indices(&ctx_radices);
        for choice in product_indices(&radices) {
            let overrides: Vec<Option<usize>> = choice.iter().map(|&c| c.checked_sub(1)).collect();
            for ctx in &contexts {
                let n = self.count_solutions(ctx, &overrides, 2);
                if n != 1 {
                    let intervention = Assignment::from_iter(
                        endo.iter()
                            .zip(&overrides)
                            .filter_map(|(v, o)| o.map(|i| (v.name.as_str(), v.range[i]))),
                    );
                    let context =
                        Assignment::from_iter(exo.iter().zip(ctx).map(|(v, &i)| (v.name.as_str(), v.range[i])));
                    let solutions = self.count_solutions(ctx, &overrides, usize::MAX);
                    return Some(TunViolation { intervention, context, solutions });
                }
            }
        }
        None
    }

    pub fn in_tun(&self) -> bool {
        self.tun_violation().is_none()
    }

    pub fn class(&self) -> ModelClass {
        if self.is_recursive() {
            ModelClass::Recursive
        } else if self.in_tun() {
            ModelClass::UniqueSolutions
        } else {
            ModelClass::General
        }
    }

    /// Variables (exogenous or endogenous) that `var`'s equation actually
    /// depends on, in signature order.
    pub fn relevant_inputs(&self, var: &str) -> Result<Vec<String>, ModelError> {
        let endo = self
            .sig
            .vocabulary()
            .position(var)
            .ok_or_else(|| ModelError::UnknownVariable(var.into()))?;
        let vars: Vec<_> = self.sig.all().collect();
        let eq = &self.equations[endo];
        let mut out = Vec::new();
        for &(pos, stride) in &eq.strides {
            let k = vars[pos].range.len();
            let depends = (0..eq.table.len()).any(|r| {
                let cur = (r / stride) % k;
                (cur + 1..k).any(|alt| eq.table[r] != eq.table[r + (alt - cur) * stride])
            });
            if depends {
                out.push(vars[pos].name.clone());
            }
        }
        Ok(out)
    }

    /// The equation for `var` as a table over its relevant inputs.
    pub fn table_spec(&self, var: &str) -> Result<TableSpec, ModelError> {
        let inputs = self.relevant_inputs(var)?;
        let ranges: Vec<&[Value]> = inputs
            .iter()
            .map(|n| self.sig.variable(n).expect("known variable").range.as_slice())
            .collect();
        let radices: Vec<usize> = ranges.iter().map(|r| r.len()).collect();
        let defaults: Assignment = self.sig.all().map(|v| (v.name.as_str(), v.range[0])).collect();
        let mut rows = BTreeMap::new();
        for row in product_indices(&radices) {
            let mut others = defaults.clone();
            let key: Vec<Value> = row.iter().zip(&ranges).map(|(&i, r)| r[i]).collect();
            for (name, &value) in inputs.iter().zip(&key) {
                others.insert(name.clone(), value);
            }
            rows.insert(key, self.equation_value(var, &others)?);
        }
        Ok(TableSpec { inputs, rows })
    }
}

fn row_count(sig: &Signature, owner: usize) -> usize {
    sig.all().enumerate().filter(|&(p, _)| p != owner).map(|(_, v)| v.range.len()).product()
}

/// Strides for a table over every variable except `owner`, first variable
/// most significant.
fn strides_for(sig: &Signature, owner: usize) -> Vec<(usize, usize)> {
    let vars: Vec<_> = sig.all().collect();
    let others: Vec<usize> = (0..vars.len()).filter(|&p| p != owner).collect();
    let mut strides = vec![(0, 0); others.len()];
    let mut stride = 1;
    for (k, &p) in others.iter().enumerate().rev() {
        strides[k] = (p, stride);
        stride *= vars[p].range.len();
    }
    strides
}

fn build_equation(sig: &Signature, owner: usize, spec: &TableSpec) -> Result<Equation, ModelError> {
    let vars: Vec<_> = sig.all().collect();
    let owner_var = vars[owner];
    let mut input_pos = Vec::with_capacity(spec.inputs.len());
    for input in &spec.inputs {
        let pos = sig.position(input).ok_or_else(|| ModelError::UnknownVariable(input.clone()))?;
        if pos == owner {
            return Err(ModelError::SelfInput(owner_var.name.clone()));
        }
        if input_pos.contains(&pos) {
            return Err(ModelError::DuplicateInput { var: owner_var.name.clone(), input: input.clone() });
        }
        input_pos.push(pos);
    }
    for (row, &out) in &spec.rows {
        if row.len() != input_pos.len() {
            return Err(ModelError::BadRow {
                var: owner_var.name.clone(),
                expected: input_pos.len(),
                found: row.len(),
            });
        }
        for (&pos, &value) in input_pos.iter().zip(row) {
            if vars[pos].index_of(value).is_none() {
                return Err(ModelError::ValueOutOfRange { var: vars[pos].name.clone(), value });
            }
        }
        if owner_var.index_of(out).is_none() {
            return Err(ModelError::ValueOutOfRange { var: owner_var.name.clone(), value: out });
        }
    }
    let strides = strides_for(sig, owner);
    let radices: Vec<usize> = strides.iter().map(|&(p, _)| vars[p].range.len()).collect();
    let mut table = Vec::with_capacity(radices.iter().product());
    for row in product_indices(&radices) {
        let key: Vec<Value> = input_pos
            .iter()
            .map(|&pos| {
                let k = strides.iter().position(|&(p, _)| p == pos).expect("input is another variable");
                vars[pos].range[row[k]]
            })
            .collect();
        let out = *spec
            .rows
            .get(&key)
            .ok_or_else(|| ModelError::NonTotalTable { var: owner_var.name.clone(), row: key.clone() })?;
        table.push(owner_var.index_of(out).expect("checked above"));
    }
    Ok(Equation { strides, table })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::Variable;
    use alloc::string::ToString;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    /// The unique-solution, non-recursive three-variable model.
    pub(crate) fn tstar() -> CausalModel {
        let sig = Signature::new(
            vec![Variable::new("U", vec![0])],
            vec![Variable::binary("X1"), Variable::binary("X2"), Variable::binary("X3")],
        )
        .unwrap();
        let mut tables = BTreeMap::new();
        let t = |inputs: &[&str], outs: [Value; 4]| {
            TableSpec::new(
                names(inputs),
                [(vec![0, 0], outs[0]), (vec![0, 1], outs[1]), (vec![1, 0], outs[2]), (vec![1, 1], outs[3])],
            )
        };
        tables.insert("X1".into(), t(&["X2", "X3"], [0, 1, 0, 0]));
        tables.insert("X2".into(), t(&["X1", "X3"], [0, 0, 1, 0]));
        tables.insert("X3".into(), t(&["X1", "X2"], [0, 1, 0, 0]));
        CausalModel::new(sig, &tables).unwrap()
    }

    fn sol(vals: [Value; 3]) -> Assignment {
        Assignment::from_iter([("X1", vals[0]), ("X2", vals[1]), ("X3", vals[2])])
    }

    fn u0() -> Assignment {
        Assignment::new().with("U", 0)
    }

    #[test]
    fn tstar_solutions() {
        let t = tstar();
        assert_eq!(t.solutions(&u0()).unwrap(), vec![sol([0, 0, 0])]);
        let t1 = t.intervene(&Assignment::new().with("X1", 1)).unwrap();
        assert_eq!(t1.solutions(&u0()).unwrap(), vec![sol([1, 1, 0])]);
        assert_eq!(t1.pinned(), vec!["X1"]);
        let row = Assignment::from_iter([("U", 0), ("X2", 0), ("X3", 1)]);
        assert_eq!(t1.equation_value("X1", &row).unwrap(), 1);
    }

    #[test]
    fn tstar_is_cyclic_but_unique() {
        let t = tstar();
        match t.recursion() {
            Recursion::Cyclic(cycle) => {
                let deps = t.dependence_matrix();
                let pos = |n: &str| t.signature().vocabulary().position(n).unwrap();
                for i in 0..cycle.len() {
                    let from = pos(&cycle[i]);
                    let to = pos(&cycle[(i + 1) % cycle.len()]);
                    assert!(deps[to][from], "{} does not depend on {}", cycle[(i + 1) % cycle.len()], cycle[i]);
                }
            }
            other => panic!("expected a cycle, got {other:?}"),
        }
        assert!(t.in_tun());
        assert_eq!(t.class(), ModelClass::UniqueSolutions);
    }

    #[test]
    fn empty_intervention_is_identity() {
        let t = tstar();
        assert_eq!(t.intervene(&Assignment::new()).unwrap(), t);
    }

    #[test]
    fn intervention_errors() {
        let t = tstar();
        assert_eq!(
            t.intervene(&Assignment::new().with("U", 0)).unwrap_err(),
            ModelError::NotEndogenous("U".into())
        );
        assert_eq!(
            t.intervene(&Assignment::new().with("X1", 2)).unwrap_err(),
            ModelError::ValueOutOfRange { var: "X1".into(), value: 2 }
        );
        assert_eq!(t.solutions(&Assignment::new()).unwrap_err(), ModelError::PartialContext("U".into()));
    }

    #[test]
    fn table_errors() {
        let sig = Signature::new(vec![], vec![Variable::binary("A"), Variable::binary("B")]).unwrap();
        let mut tables = BTreeMap::new();
        tables.insert("A".to_string(), TableSpec::new(names(&["B"]), [(vec![0], 1)]));
        tables.insert("B".to_string(), TableSpec::constant(0));
        assert_eq!(
            CausalModel::new(sig.clone(), &tables).unwrap_err(),
            ModelError::NonTotalTable { var: "A".into(), row: vec![1] }
        );
        tables.insert("A".to_string(), TableSpec::new(names(&["B"]), [(vec![0], 1), (vec![1], 2)]));
        assert_eq!(
            CausalModel::new(sig.clone(), &tables).unwrap_err(),
            ModelError::ValueOutOfRange { var: "A".into(), value: 2 }
        );
        tables.remove("A");
        assert_eq!(CausalModel::new(sig, &tables).unwrap_err(), ModelError::MissingTable("A".into()));
    }

    #[test]
    fn no_solution_model() {
        let sig = Signature::new(vec![], vec![Variable::binary("X1"), Variable::binary("X2")]).unwrap();
        let t = CausalModel::from_fn(sig, |var, others| match var {
            "X1" => 1 - others.get("X2").unwrap(),
            _ => others.get("X1").unwrap(),
        })
        .unwrap();
        assert!(t.solutions(&Assignment::new()).unwrap().is_empty());
        let v = t.tun_violation().unwrap();
        assert!(v.intervention.is_empty());
        assert_eq!(v.solutions, 0);
        assert_eq!(t.class(), ModelClass::General);
    }

    #[test]
    fn constant_model_is_recursive_in_declared_order() {
        let sig = Signature::binary(3, 1);
        let t = CausalModel::from_fn(sig, |_, _| 0).unwrap();
        assert_eq!(t.recursion(), Recursion::Acyclic(names(&["X1", "X2", "X3"])));
        assert_eq!(t.class(), ModelClass::Recursive);
    }

    #[test]
    fn table_spec_keeps_only_relevant_inputs() {
        let t = tstar();
        let spec = t.table_spec("X1").unwrap();
        assert_eq!(spec.inputs, names(&["X2", "X3"]));
        assert_eq!(spec.rows.get(&vec![0, 1]), Some(&1));
        let rebuilt = CausalModel::new(
            t.signature().clone(),
            &["X1", "X2", "X3"].iter().map(|v| (v.to_string(), t.table_spec(v).unwrap())).collect(),
        )
        .unwrap();
        assert_eq!(rebuilt, t);
    }
}

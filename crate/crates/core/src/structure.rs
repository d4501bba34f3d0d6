//! Closest-world counterfactual structures.
//!
//! A structure has finitely many worlds, a truth assignment to the atoms of a
//! [`Vocabulary`] at every world, and for every world `w` a preorder `<=_w`
//! on the set `W_w` of worlds it mentions. Sets of worlds are bitsets so that
//! whole-structure truth sets can be computed with word operations.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::formula::{Atom, Formula};
use crate::signature::{product_indices, Value, Vocabulary};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("order for world `{world}` is not reflexive at `{element}`")]
    NotReflexive { world: String, element: String },
    #[error("order for world `{world}` is not transitive: `{a}` <= `{b}` <= `{c}` but not `{a}` <= `{c}`")]
    NotTransitive { world: String, a: String, b: String, c: String },
    #[error("world `{world}` is not strictly below `{other}` in its own order")]
    SelfNotMinimal { world: String, other: String },
    #[error("world `{world}` does not occur in its own order")]
    SelfNotInWw { world: String },
    #[error("world id `{0}` is used twice")]
    DuplicateWorld(String),
    #[error("expected {expected} orders (one per world), found {found}")]
    OrderCount { expected: usize, found: usize },
    #[error("relation over {found} worlds given for a structure with {expected}")]
    RelationSize { expected: usize, found: usize },
    #[error("world `{world}`: valuation has {found} entries, expected {expected}")]
    BadValuation { world: String, expected: usize, found: usize },
    #[error("world `{world}`: value {value} is not in the range of `{var}`")]
    ValueOutOfRange { world: String, var: String, value: Value },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureEvalError {
    #[error("atom `{0}` is not in the structure's vocabulary")]
    UnknownAtom(String),
    #[error("no world with id `{0}`")]
    UnknownWorld(String),
}

/// A binary relation over world indices; `get(a, b)` means `a <= b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    n: usize,
    bits: Vec<bool>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Self { n, bits: vec![false; n * n] }
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut r = Self::empty(n);
        for (a, b) in pairs {
            r.set(a, b);
        }
        r
    }

    /// `a <= b` iff both are ranked and `rank[a] <= rank[b]`. Unranked worlds
    /// lie outside the relation's field.
    pub fn from_ranks(ranks: &[Option<usize>]) -> Self {
        let n = ranks.len();
        let mut r = Self::empty(n);
        for a in 0..n {
            for b in 0..n {
                if let (Some(x), Some(y)) = (ranks[a], ranks[b]) {
                    if x <= y {
                        r.set(a, b);
                    }
                }
            }
        }
        r
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|b| !b)
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.n + b]
    }

    pub fn set(&mut self, a: usize, b: usize) {
        self.bits[a * self.n + b] = true;
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |a| (0..self.n).filter(move |&b| self.get(a, b)).map(move |b| (a, b)))
    }

    /// Worlds occurring in some pair.
    pub fn field(&self) -> Vec<bool> {
        let mut out = vec![false; self.n];
        for (a, b) in self.pairs() {
            out[a] = true;
            out[b] = true;
        }
        out
    }
}

/// Words needed for a bitset over `n` worlds.
#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

/// Class membership flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureClass {
    /// Every world makes exactly one atom `X=x` true per variable.
    pub acceptable: bool,
    /// Acceptable, and every `W_w` realises every assignment.
    pub full: bool,
    /// Every `<=_w` is a strict total order on `W_w`.
    pub total: bool,
    /// Full and total, and every world has its own variable order under
    /// which later settings never change earlier variables.
    pub recursive: bool,
    /// A single variable order works at every world; names in order.
    pub global_order: Option<Vec<String>>,
}

impl StructureClass {
    pub fn globally_recursive(&self) -> bool {
        self.global_order.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterfactualStructure {
    vocab: Vocabulary,
    ids: Vec<String>,
    /// Value index per variable, when the structure was built from
    /// assignments.
    assignments: Option<Vec<Vec<usize>>>,
    truth: Vec<Vec<bool>>,
    orders: Vec<Relation>,
    words: usize,
    /// `in_ww[w]`: bitset of `W_w`.
    in_ww: Vec<u64>,
    /// `below[(w * n + v) * words ..]`: bitset of worlds strictly below `v`
    /// under `<=_w`.
    below: Vec<u64>,
    /// `atom_sets[a * words ..]`: worlds where atom `a` holds.
    atom_sets: Vec<u64>,
}

impl CounterfactualStructure {
    /// A structure whose worlds are total assignments (value per variable,
    /// in vocabulary order).
    pub fn acceptable(
        vocab: Vocabulary,
        ids: Vec<String>,
        values: Vec<Vec<Value>>,
        orders: Vec<Relation>,
    ) -> Result<Self, StructureError> {
        let mut assignments = Vec::with_capacity(values.len());
        for (id, vals) in ids.iter().zip(&values) {
            if vals.len() != vocab.len() {
                return Err(StructureError::BadValuation { world: id.clone(), expected: vocab.len(), found: vals.len() });
            }
            let idx = vals
                .iter()
                .zip(vocab.variables())
                .map(|(&value, var)| {
                    var.index_of(value).ok_or_else(|| StructureError::ValueOutOfRange {
                        world: id.clone(),
                        var: var.name.clone(),
                        value,
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            assignments.push(idx);
        }
        if values.len() != ids.len() {
            return Err(StructureError::OrderCount { expected: ids.len(), found: values.len() });
        }
        Self::from_indices(vocab, ids, assignments, orders)
    }

    /// [`CounterfactualStructure::acceptable`] with value indices instead of
    /// values.
    pub fn from_indices(
        vocab: Vocabulary,
        ids: Vec<String>,
        assignments: Vec<Vec<usize>>,
        orders: Vec<Relation>,
    ) -> Result<Self, StructureError> {
        let truth = assignments
            .iter()
            .map(|a| {
                let mut t = vec![false; vocab.atom_count()];
                for (var, &idx) in a.iter().enumerate() {
                    t[vocab.atom_offset(var) + idx] = true;
                }
                t
            })
            .collect();
        Self::build(vocab, ids, Some(assignments), truth, orders)
    }

    /// A structure with an arbitrary truth assignment to the atoms at each
    /// world (`truth[w][a]` for the flattened atom index `a`).
    pub fn generic(
        vocab: Vocabulary,
        ids: Vec<String>,
        truth: Vec<Vec<bool>>,
        orders: Vec<Relation>,
    ) -> Result<Self, StructureError> {
        for (id, t) in ids.iter().zip(&truth) {
            if t.len() != vocab.atom_count() {
                return Err(StructureError::BadValuation {
                    world: id.clone(),
                    expected: vocab.atom_count(),
                    found: t.len(),
                });
            }
        }
        Self::build(vocab, ids, None, truth, orders)
    }

    fn build(
        vocab: Vocabulary,
        ids: Vec<String>,
        assignments: Option<Vec<Vec<usize>>>,
        truth: Vec<Vec<bool>>,
        orders: Vec<Relation>,
    ) -> Result<Self, StructureError> {
        let n = ids.len();
        for (i, id) in ids.iter().enumerate() {
            if ids[..i].contains(id) {
                return Err(StructureError::DuplicateWorld(id.clone()));
            }
        }
        if orders.len() != n || truth.len() != n {
            return Err(StructureError::OrderCount { expected: n, found: orders.len().min(truth.len()) });
        }
        for r in &orders {
            if r.len() != n {
                return Err(StructureError::RelationSize { expected: n, found: r.len() });
            }
        }
        for (w, r) in orders.iter().enumerate() {
            validate_order(&ids, w, r)?;
        }
        let words = words_for(n);
        let mut in_ww = vec![0u64; n * words];
        let mut below = vec![0u64; n * n * words];
        for (w, r) in orders.iter().enumerate() {
            let field = r.field();
            for v in 0..n {
                if field[v] {
                    set_bit(&mut in_ww[w * words..(w + 1) * words], v);
                }
                for u in 0..n {
                    if r.get(u, v) && !r.get(v, u) {
                        let at = (w * n + v) * words;
                        set_bit(&mut below[at..at + words], u);
                    }
                }
            }
        }
        let atoms = vocab.atom_count();
        let mut atom_sets = vec![0u64; atoms * words];
        for (w, t) in truth.iter().enumerate() {
            for (a, &holds) in t.iter().enumerate() {
                if holds {
                    set_bit(&mut atom_sets[a * words..(a + 1) * words], w);
                }
            }
        }
        Ok(Self { vocab, ids, assignments, truth, orders, words, in_ww, below, atom_sets })
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn world_count(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn world(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|i| i == id)
    }

    pub fn order(&self, w: usize) -> &Relation {
        &self.orders[w]
    }

    pub fn truth(&self, w: usize) -> &[bool] {
        &self.truth[w]
    }

    /// Value indices of a world, if the structure was built from assignments.
    pub fn assignment(&self, w: usize) -> Option<&[usize]> {
        self.assignments.as_ref().map(|a| a[w].as_slice())
    }

    /// Values of a world, if it is an assignment. Worlds of generic
    /// structures that happen to be acceptable are decoded too.
    pub fn values(&self, w: usize) -> Option<Vec<Value>> {
        let idx: Vec<usize> = match self.assignment(w) {
            Some(a) => a.to_vec(),
            None => self.decode(w)?,
        };
        Some(idx.iter().zip(self.vocab.variables()).map(|(&i, v)| v.range[i]).collect())
    }

    fn decode(&self, w: usize) -> Option<Vec<usize>> {
        self.vocab
            .variables()
            .iter()
            .enumerate()
            .map(|(var, v)| {
                let off = self.vocab.atom_offset(var);
                let mut held = (0..v.range.len()).filter(|&i| self.truth[w][off + i]);
                let first = held.next()?;
                held.next().is_none().then_some(first)
            })
            .collect()
    }

    /// Position of each member of `W_w` in `<=_w`: the number of worlds
    /// strictly below it. `None` outside `W_w`.
    pub fn ranks(&self, w: usize) -> Vec<Option<usize>> {
        let ww = self.ww(w);
        (0..self.world_count())
            .map(|v| bit(ww, v).then(|| (0..self.world_count()).filter(|&u| self.strictly_below(w, u, v)).count()))
            .collect()
    }

    /// The same worlds and valuation with different orders.
    pub fn with_orders(&self, orders: Vec<Relation>) -> Result<Self, StructureError> {
        Self::build(self.vocab.clone(), self.ids.clone(), self.assignments.clone(), self.truth.clone(), orders)
    }

    /// Members of `W_w`.
    pub fn horizon(&self, w: usize) -> Vec<usize> {
        let set = &self.in_ww[w * self.words..(w + 1) * self.words];
        (0..self.world_count()).filter(|&v| bit(set, v)).collect()
    }

    #[inline]
    pub(crate) fn words(&self) -> usize {
        self.words
    }

    #[inline]
    fn ww(&self, w: usize) -> &[u64] {
        &self.in_ww[w * self.words..(w + 1) * self.words]
    }

    #[inline]
    fn below_set(&self, w: usize, v: usize) -> &[u64] {
        let at = (w * self.world_count() + v) * self.words;
        &self.below[at..at + self.words]
    }

    /// `v <_w u`.
    pub fn strictly_below(&self, w: usize, v: usize, u: usize) -> bool {
        bit(self.below_set(w, u), v)
    }

    /// Minimal worlds (under `<=_w`) of `W_w` intersected with `set`.
    pub fn minimal_in(&self, w: usize, set: &[bool]) -> Vec<usize> {
        let mut s = vec![0u64; self.words];
        for (v, &b) in set.iter().enumerate() {
            if b {
                set_bit(&mut s, v);
            }
        }
        and_into(&mut s, self.ww(w));
        (0..self.world_count())
            .filter(|&v| bit(&s, v) && !intersects(self.below_set(w, v), &s))
            .collect()
    }

    /// `closest_M(w, f)`.
    pub fn closest(&self, w: usize, f: &Formula) -> Result<Vec<usize>, StructureEvalError> {
        let set = self.truth_set(f)?;
        Ok(self.minimal_in(w, &set))
    }

    /// Worlds where `f` holds.
    pub fn truth_set(&self, f: &Formula) -> Result<Vec<bool>, StructureEvalError> {
        let mut program = Program::new(&self.vocab);
        let root = program.add(f)?;
        let mut eval = ProgramEval::default();
        eval.run(&program, self);
        Ok((0..self.world_count()).map(|w| eval.holds(root, w)).collect())
    }

    /// `(M, w) |= f`.
    pub fn eval_cf(&self, w: usize, f: &Formula) -> Result<bool, StructureEvalError> {
        Ok(self.truth_set(f)?[w])
    }

    /// [`CounterfactualStructure::eval_cf`] by world id.
    pub fn eval_at(&self, id: &str, f: &Formula) -> Result<bool, StructureEvalError> {
        let w = self.world(id).ok_or_else(|| StructureEvalError::UnknownWorld(id.into()))?;
        self.eval_cf(w, f)
    }

    pub fn is_acceptable(&self) -> bool {
        (0..self.world_count()).all(|w| self.decode(w).is_some())
    }

    pub fn is_full(&self) -> bool {
        if !self.is_acceptable() {
            return false;
        }
        let decoded: Vec<Vec<usize>> = (0..self.world_count()).map(|w| self.decode(w).unwrap()).collect();
        let all = self.vocab.assignments();
        (0..self.world_count()).all(|w| {
            let horizon = self.horizon(w);
            all.iter().all(|a| horizon.iter().any(|&v| &decoded[v] == a))
        })
    }

    pub fn is_total(&self) -> bool {
        (0..self.world_count()).all(|w| {
            let h = self.horizon(w);
            let r = &self.orders[w];
            h.iter().all(|&a| h.iter().all(|&b| a == b || (r.get(a, b) != r.get(b, a))))
        })
    }

    /// The unique closest world to `w` agreeing with `pattern` (value index
    /// or `None` per variable). Only meaningful in full total structures.
    pub fn closest_matching(&self, w: usize, pattern: &[Option<usize>]) -> Option<usize> {
        let decoded: Vec<Option<Vec<usize>>> = (0..self.world_count()).map(|v| self.decode(v)).collect();
        let matches: Vec<bool> = decoded
            .iter()
            .map(|d| {
                d.as_ref()
                    .is_some_and(|a| a.iter().zip(pattern).all(|(x, p)| p.is_none_or(|p| p == *x)))
            })
            .collect();
        let m = self.minimal_in(w, &matches);
        (m.len() == 1).then(|| m[0])
    }

    /// For a full total structure, `ok[a][b]` at world `w`: setting `b` never
    /// changes `a` once any subset of the other variables has been set.
    fn independence(&self, w: usize, decoded: &[Vec<usize>]) -> Vec<Vec<bool>> {
        let vars = self.vocab.variables();
        let n = vars.len();
        // closest world for every pattern; pattern digit 0 = unset, k+1 = value k
        let radices: Vec<usize> = vars.iter().map(|v| v.range.len() + 1).collect();
        let mut ranked: Vec<usize> = self.horizon(w);
        let rank = |v: usize| (0..self.world_count()).filter(|&u| self.strictly_below(w, u, v)).count();
        ranked.sort_by_key(|&v| rank(v));
        let mut closest: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for p in product_indices(&radices) {
            let hit = ranked
                .iter()
                .copied()
                .find(|&v| p.iter().zip(&decoded[v]).all(|(&d, &x)| d == 0 || d - 1 == x))
                .expect("full structures realise every pattern");
            closest.insert(p, hit);
        }
        let mut ok = vec![vec![true; n]; n];
        for (p, &base) in &closest {
            for a in 0..n {
                for b in 0..n {
                    if a == b || p[a] != 0 || p[b] != 0 {
                        continue;
                    }
                    for y in 0..vars[b].range.len() {
                        let mut q = p.clone();
                        q[b] = y + 1;
                        if decoded[closest[&q]][a] != decoded[base][a] {
                            ok[a][b] = false;
                        }
                    }
                }
            }
        }
        ok
    }

    /// All class flags at once.
    pub fn classify(&self) -> StructureClass {
        let acceptable = self.is_acceptable();
        let full = acceptable && self.is_full();
        let total = self.is_total();
        let mut recursive = false;
        let mut global_order = None;
        if full && total {
            let decoded: Vec<Vec<usize>> = (0..self.world_count()).map(|w| self.decode(w).unwrap()).collect();
            let n = self.vocab.len();
            let mut global = vec![vec![true; n]; n];
            recursive = true;
            for w in 0..self.world_count() {
                let ok = self.independence(w, &decoded);
                if order_from(&ok).is_none() {
                    recursive = false;
                }
                for a in 0..n {
                    for b in 0..n {
                        global[a][b] &= ok[a][b];
                    }
                }
            }
            if recursive {
                global_order = order_from(&global)
                    .map(|o| o.into_iter().map(|i| self.vocab.variables()[i].name.clone()).collect());
            }
        }
        StructureClass { acceptable, full, total, recursive, global_order }
    }

    /// A variable order witnessing recursiveness at world `w`, if any.
    pub fn world_order(&self, w: usize) -> Option<Vec<String>> {
        if !(self.is_full() && self.is_total()) {
            return None;
        }
        let decoded: Vec<Vec<usize>> = (0..self.world_count()).map(|v| self.decode(v).unwrap()).collect();
        order_from(&self.independence(w, &decoded))
            .map(|o| o.into_iter().map(|i| self.vocab.variables()[i].name.clone()).collect())
    }
}

/// A linear order of variables with `ok[a][b]` whenever `a` precedes `b`:
/// if `ok[a][b]` fails then `b` must come before `a`.
fn order_from(ok: &[Vec<bool>]) -> Option<Vec<usize>> {
    let n = ok.len();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        // `a` can go next when every unplaced `b` may follow it
        let next = (0..n).find(|&a| !placed[a] && (0..n).all(|b| b == a || placed[b] || ok[a][b]))?;
        placed[next] = true;
        order.push(next);
    }
    Some(order)
}

fn validate_order(ids: &[String], w: usize, r: &Relation) -> Result<(), StructureError> {
    let n = ids.len();
    let name = |i: usize| ids[i].clone();
    if r.is_empty() {
        return Err(StructureError::NotReflexive { world: name(w), element: name(w) });
    }
    let field = r.field();
    for v in 0..n {
        if field[v] && !r.get(v, v) {
            return Err(StructureError::NotReflexive { world: name(w), element: name(v) });
        }
    }
    if !field[w] {
        return Err(StructureError::SelfNotInWw { world: name(w) });
    }
    for a in 0..n {
        for b in 0..n {
            if !r.get(a, b) {
                continue;
            }
            for c in 0..n {
                if r.get(b, c) && !r.get(a, c) {
                    return Err(StructureError::NotTransitive { world: name(w), a: name(a), b: name(b), c: name(c) });
                }
            }
        }
    }
    for u in 0..n {
        if u != w && field[u] && !(r.get(w, u) && !r.get(u, w)) {
            return Err(StructureError::SelfNotMinimal { world: name(w), other: name(u) });
        }
    }
    Ok(())
}

#[inline]
fn bit(set: &[u64], i: usize) -> bool {
    set[i / 64] >> (i % 64) & 1 == 1
}

#[inline]
fn set_bit(set: &mut [u64], i: usize) {
    set[i / 64] |= 1 << (i % 64);
}

#[inline]
fn and_into(a: &mut [u64], b: &[u64]) {
    a.iter_mut().zip(b).for_each(|(x, y)| *x &= y);
}

#[inline]
fn intersects(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).any(|(x, y)| x & y != 0)
}

/// Node of a [`Program`]; children always have smaller ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Op {
    Atom(usize),
    True,
    False,
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    Iff(usize, usize),
    Cf(usize, usize),
}

/// Handle to a formula added to a [`Program`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(usize);

/// A set of formulas over one vocabulary, stored as a shared DAG so that many
/// formulas can be evaluated on many structures with every distinct
/// subformula computed once per structure.
#[derive(Debug, Clone)]
pub struct Program {
    vocab: Vocabulary,
    ops: Vec<Op>,
    index: BTreeMap<Op, usize>,
}

impl Program {
    pub fn new(vocab: &Vocabulary) -> Self {
        Self { vocab: vocab.clone(), ops: Vec::new(), index: BTreeMap::new() }
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    fn intern(&mut self, op: Op) -> usize {
        if let Some(&i) = self.index.get(&op) {
            return i;
        }
        self.ops.push(op);
        self.index.insert(op, self.ops.len() - 1);
        self.ops.len() - 1
    }

    pub fn add(&mut self, f: &Formula) -> Result<NodeId, StructureEvalError> {
        self.add_inner(f).map(NodeId)
    }

    fn add_inner(&mut self, f: &Formula) -> Result<usize, StructureEvalError> {
        let op = match f {
            Formula::Atom(Atom { var, value }) => {
                let a = self
                    .vocab
                    .atom_index(var, *value)
                    .ok_or_else(|| StructureEvalError::UnknownAtom(alloc::format!("{var}={value}")))?;
                Op::Atom(a)
            }
            Formula::True => Op::True,
            Formula::False => Op::False,
            Formula::Not(a) => Op::Not(self.add_inner(a)?),
            Formula::And(a, b) => Op::And(self.add_inner(a)?, self.add_inner(b)?),
            Formula::Or(a, b) => Op::Or(self.add_inner(a)?, self.add_inner(b)?),
            Formula::Implies(a, b) => Op::Implies(self.add_inner(a)?, self.add_inner(b)?),
            Formula::Iff(a, b) => Op::Iff(self.add_inner(a)?, self.add_inner(b)?),
            Formula::Cf { antecedent, consequent, .. } => {
                Op::Cf(self.add_inner(antecedent)?, self.add_inner(consequent)?)
            }
        };
        Ok(self.intern(op))
    }
}

/// Scratch space for evaluating a [`Program`]; reuse it across structures to
/// avoid reallocating.
#[derive(Debug, Clone, Default)]
pub struct ProgramEval {
    words: usize,
    worlds: usize,
    sets: Vec<u64>,
    scratch: Vec<u64>,
}

impl ProgramEval {
    /// Computes the truth set of every node of `program` in `m`.
    pub fn run(&mut self, program: &Program, m: &CounterfactualStructure) {
        debug_assert_eq!(&program.vocab, &m.vocab);
        let words = m.words();
        let n = m.world_count();
        self.words = words;
        self.worlds = n;
        self.sets.clear();
        self.sets.resize(program.ops.len() * words, 0);
        self.scratch.resize(words, 0);
        let full_mask = |k: usize| -> u64 {
            let lo = k * 64;
            if n >= lo + 64 {
                u64::MAX
            } else if n <= lo {
                0
            } else {
                (1u64 << (n - lo)) - 1
            }
        };
        for (i, op) in program.ops.iter().enumerate() {
            let (done, rest) = self.sets.split_at_mut(i * words);
            let out = &mut rest[..words];
            let get = |j: usize| &done[j * words..(j + 1) * words];
            match *op {
                Op::Atom(a) => out.copy_from_slice(&m.atom_sets[a * words..(a + 1) * words]),
                Op::True => (0..words).for_each(|k| out[k] = full_mask(k)),
                Op::False => out.fill(0),
                Op::Not(a) => (0..words).for_each(|k| out[k] = !get(a)[k] & full_mask(k)),
                Op::And(a, b) => (0..words).for_each(|k| out[k] = get(a)[k] & get(b)[k]),
                Op::Or(a, b) => (0..words).for_each(|k| out[k] = get(a)[k] | get(b)[k]),
                Op::Implies(a, b) => (0..words).for_each(|k| out[k] = (!get(a)[k] | get(b)[k]) & full_mask(k)),
                Op::Iff(a, b) => (0..words).for_each(|k| out[k] = !(get(a)[k] ^ get(b)[k]) & full_mask(k)),
                Op::Cf(a, c) => {
                    let (sa, sc) = (get(a), get(c));
                    out.fill(0);
                    let s = &mut self.scratch;
                    for w in 0..n {
                        // s = A within W_w
                        for k in 0..words {
                            s[k] = sa[k] & m.ww(w)[k];
                        }
                        // some minimal member of s outside C falsifies the conditional
                        let mut holds = true;
                        'scan: for k in 0..words {
                            let mut bad = s[k] & !sc[k];
                            while bad != 0 {
                                let v = k * 64 + bad.trailing_zeros() as usize;
                                bad &= bad - 1;
                                if !intersects(m.below_set(w, v), s) {
                                    holds = false;
                                    break 'scan;
                                }
                            }
                        }
                        if holds {
                            set_bit(out, w);
                        }
                    }
                }
            }
        }
    }

    pub fn holds(&self, node: NodeId, w: usize) -> bool {
        bit(&self.sets[node.0 * self.words..(node.0 + 1) * self.words], w)
    }

    /// First world where `node` fails, if any.
    pub fn first_failure(&self, node: NodeId) -> Option<usize> {
        (0..self.worlds).find(|&w| !self.holds(node, w))
    }
}

//! Exhaustive and random generation of causal models and counterfactual
//! structures, class by class.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bridge::{causal_to_structure, world_id};
use crate::model::CausalModel;
use crate::signature::{product_indices, Signature, Variable, Vocabulary};
use crate::structure::{CounterfactualStructure, Relation};

/// The model and structure classes the lab can enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassName {
    Trec,
    Tun,
    T,
    /// All counterfactual structures.
    M,
    /// Structures whose orders are strict total orders.
    MPlus,
    /// Acceptable structures.
    Ma,
    MaPlus,
    /// Acceptable full structures.
    Mf,
    MfPlus,
    /// Recursive structures.
    Mrec,
}

impl ClassName {
    pub const ALL: [ClassName; 10] = [
        ClassName::Trec,
        ClassName::Tun,
        ClassName::T,
        ClassName::M,
        ClassName::MPlus,
        ClassName::Ma,
        ClassName::MaPlus,
        ClassName::Mf,
        ClassName::MfPlus,
        ClassName::Mrec,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ClassName::Trec => "Trec",
            ClassName::Tun => "Tun",
            ClassName::T => "T",
            ClassName::M => "M",
            ClassName::MPlus => "M+",
            ClassName::Ma => "Ma",
            ClassName::MaPlus => "Ma+",
            ClassName::Mf => "Mf",
            ClassName::MfPlus => "Mf+",
            ClassName::Mrec => "Mrec",
        }
    }

    /// Accepts the labels above, plus `_` spellings such as `M_a+`.
    pub fn from_label(s: &str) -> Option<Self> {
        let norm: String = s.chars().filter(|&c| c != '_').collect();
        Self::ALL.into_iter().find(|c| c.label().eq_ignore_ascii_case(&norm))
    }

    pub fn is_causal(self) -> bool {
        matches!(self, ClassName::Trec | ClassName::Tun | ClassName::T)
    }

    pub fn is_total(self) -> bool {
        matches!(self, ClassName::MPlus | ClassName::MaPlus | ClassName::MfPlus | ClassName::Mrec)
    }

    pub fn is_full(self) -> bool {
        matches!(self, ClassName::Mf | ClassName::MfPlus | ClassName::Mrec)
    }

    pub fn is_acceptable(self) -> bool {
        !self.is_causal() && !matches!(self, ClassName::M | ClassName::MPlus)
    }
}

impl fmt::Display for ClassName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Calls `visit` on every combination of digits below `radices`, first
/// digit most significant, until it returns false. Returns false if
/// stopped early.
pub(crate) fn for_each_combo(radices: &[usize], visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if radices.contains(&0) {
        return true;
    }
    let mut digits = vec![0; radices.len()];
    loop {
        if !visit(&digits) {
            return false;
        }
        let mut i = radices.len();
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < radices[i] {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// Non-decreasing sequences of length `len` over `0..k`.
fn multisets(k: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn go(k: usize, len: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for i in from..k {
            cur.push(i);
            go(k, len, i, cur, out);
            cur.pop();
        }
    }
    go(k, len, 0, &mut cur, &mut out);
    out
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Every preorder on `k` elements, as `leq[i][j]` matrices.
pub fn preorders(k: usize) -> Vec<Vec<Vec<bool>>> {
    let cells: Vec<(usize, usize)> = (0..k).flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for bits in 0u64..1 << cells.len() {
        let mut leq = vec![vec![false; k]; k];
        (0..k).for_each(|i| leq[i][i] = true);
        for (c, &(i, j)) in cells.iter().enumerate() {
            leq[i][j] = bits >> c & 1 == 1;
        }
        let transitive = (0..k).all(|a| (0..k).all(|b| !leq[a][b] || (0..k).all(|c| !leq[b][c] || leq[a][c])));
        if transitive {
            out.push(leq);
        }
    }
    out
}

/// Every strict total order on `k` elements (as reflexive `leq` matrices).
pub fn total_orders(k: usize) -> Vec<Vec<Vec<bool>>> {
    permutations(k)
        .into_iter()
        .map(|perm| {
            let mut rank = vec![0; k];
            perm.iter().enumerate().for_each(|(r, &e)| rank[e] = r);
            (0..k).map(|i| (0..k).map(|j| rank[i] <= rank[j]).collect()).collect()
        })
        .collect()
}

pub(crate) fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    fn go(i: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for j in i..cur.len() {
            cur.swap(i, j);
            go(i + 1, cur, out);
            cur.swap(i, j);
        }
    }
    go(0, &mut cur, &mut out);
    out.sort();
    out
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).fold(1u64, |a, b| a.saturating_mul(b))
}

/// Number of preorders on k labelled elements, for k <= 5.
fn preorder_count(k: usize) -> u64 {
    [1, 1, 4, 29, 355, 6942].get(k).copied().unwrap_or(u64::MAX)
}

fn shapes_count(others: usize, full: bool, total: bool) -> u64 {
    let per = |k: usize| if total { factorial(k) } else { preorder_count(k) };
    if full {
        per(others)
    } else {
        (0..=others).fold(0u64, |acc, k| acc.saturating_add(binomial(others as u64, k as u64).saturating_mul(per(k))))
    }
}

/// Every admissible order for world `w` among `n` worlds.
fn world_orders(n: usize, w: usize, full: bool, shapes: &[Vec<Vec<Vec<bool>>>]) -> Vec<Relation> {
    let others: Vec<usize> = (0..n).filter(|&v| v != w).collect();
    let mut out = Vec::new();
    for mask in 0u64..1 << others.len() {
        let sub: Vec<usize> = others.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect();
        if full && sub.len() != others.len() {
            continue;
        }
        for leq in &shapes[sub.len()] {
            let mut pairs = vec![(w, w)];
            pairs.extend(sub.iter().map(|&s| (w, s)));
            for (i, &a) in sub.iter().enumerate() {
                for (j, &b) in sub.iter().enumerate() {
                    if leq[i][j] {
                        pairs.push((a, b));
                    }
                }
            }
            out.push(Relation::from_pairs(n, pairs));
        }
    }
    out
}

fn shape_table(max_k: usize, total: bool) -> Vec<Vec<Vec<Vec<bool>>>> {
    (0..=max_k).map(|k| if total { total_orders(k) } else { preorders(k) }).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnumError {
    /// The estimated count exceeds the cap.
    TooLarge { estimate: u64, cap: u64 },
    /// Preorder enumeration is limited to small worlds sets.
    TooManyWorlds(usize),
}

impl fmt::Display for EnumError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnumError::TooLarge { estimate, cap } => {
                write!(f, "about {estimate} candidates, over the cap of {cap}")
            }
            EnumError::TooManyWorlds(n) => write!(f, "{n} worlds is too many for exhaustive order enumeration"),
        }
    }
}

/// Unique world ids for acceptable worlds (repeats get a `#k` suffix).
fn acceptable_ids(vocab: &Vocabulary, worlds: &[Vec<usize>]) -> Vec<String> {
    let mut ids: Vec<String> = Vec::with_capacity(worlds.len());
    for a in worlds {
        let base = world_id(a.iter().zip(vocab.variables()).map(|(&i, v)| v.range[i]));
        let mut id = base.clone();
        let mut k = 1;
        while ids.contains(&id) {
            k += 1;
            id = format!("{base}#{k}");
        }
        ids.push(id);
    }
    ids
}

fn generic_ids(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("w{i}")).collect()
}

/// The vocabulary a generic structure needs for `atoms`: each variable
/// ranges over the values it is mentioned with.
pub fn vocabulary_for<'a>(atoms: impl IntoIterator<Item = &'a crate::formula::Atom>) -> Vocabulary {
    let mut vars: alloc::collections::BTreeMap<&str, BTreeSet<i64>> = Default::default();
    for a in atoms {
        vars.entry(a.var.as_str()).or_default().insert(a.value);
    }
    let vars = vars.into_iter().map(|(n, vals)| Variable::new(n, vals.into_iter().collect::<Vec<_>>())).collect();
    Vocabulary::new(vars).expect("names come from parsed atoms")
}

/// Estimated number of structures [`for_each_structure`] visits.
pub fn structure_estimate(class: ClassName, vocab: &Vocabulary, max_worlds: usize) -> u64 {
    let total = class.is_total();
    if class.is_full() {
        let n = vocab.assignment_count();
        return shapes_count(n - 1, true, total).saturating_pow(n as u32);
    }
    let vals = if class.is_acceptable() { vocab.assignment_count() as u64 } else { 1u64 << vocab.atom_count().min(63) };
    let mut sum = 0u64;
    for n in 1..=max_worlds {
        let orders = shapes_count(n - 1, false, total).saturating_pow(n as u32);
        let worlds = binomial(vals + n as u64 - 1, n as u64);
        sum = sum.saturating_add(worlds.saturating_mul(orders));
    }
    if class.is_acceptable() {
        sum = sum.saturating_add(structure_estimate(ClassName::MfPlus, vocab, 0));
    }
    sum
}

/// Visits every structure of `class` over `vocab` with at most
/// `max_worlds` worlds (full classes always have one world per
/// assignment). The acceptable classes also include every full structure
/// with strict total orders. `visit` returns false to stop. Returns the
/// number visited.
pub fn for_each_structure(
    class: ClassName,
    vocab: &Vocabulary,
    max_worlds: usize,
    cap: u64,
    visit: &mut dyn FnMut(&CounterfactualStructure) -> bool,
) -> Result<u64, EnumError> {
    let estimate = structure_estimate(class, vocab, max_worlds);
    if estimate > cap {
        return Err(EnumError::TooLarge { estimate, cap });
    }
    let mut count = 0u64;
    let total = class.is_total();
    if class.is_full() {
        let worlds = vocab.assignments();
        let n = worlds.len();
        if n > 6 {
            return Err(EnumError::TooManyWorlds(n));
        }
        let ids = acceptable_ids(vocab, &worlds);
        let shapes = shape_table(n - 1, total);
        let options: Vec<Vec<Relation>> = (0..n).map(|w| world_orders(n, w, true, &shapes)).collect();
        let radices: Vec<usize> = options.iter().map(Vec::len).collect();
        for_each_combo(&radices, &mut |pick| {
            let orders = pick.iter().enumerate().map(|(w, &i)| options[w][i].clone()).collect();
            let m = CounterfactualStructure::from_indices(vocab.clone(), ids.clone(), worlds.clone(), orders)
                .expect("enumerated orders are valid");
            if class == ClassName::Mrec && !m.classify().recursive {
                return true;
            }
            count += 1;
            visit(&m)
        });
        return Ok(count);
    }
    if max_worlds > 4 {
        return Err(EnumError::TooManyWorlds(max_worlds));
    }
    let shapes = shape_table(max_worlds.saturating_sub(1), total);
    let valuations: Vec<Vec<bool>> = if class.is_acceptable() {
        vocab
            .assignments()
            .into_iter()
            .map(|a| {
                let mut t = vec![false; vocab.atom_count()];
                let mut off = 0;
                for (var, &i) in vocab.variables().iter().zip(&a) {
                    t[off + i] = true;
                    off += var.range.len();
                }
                t
            })
            .collect()
    } else {
        let a = vocab.atom_count();
        (0..1usize << a).map(|bits| (0..a).map(|i| bits >> i & 1 == 1).collect()).collect()
    };
    let assignments = vocab.assignments();
    let mut stopped = false;
    for n in 1..=max_worlds {
        let options: Vec<Vec<Relation>> = (0..n).map(|w| world_orders(n, w, false, &shapes)).collect();
        let radices: Vec<usize> = options.iter().map(Vec::len).collect();
        for pick_worlds in multisets(valuations.len(), n) {
            let (ids, truth) = if class.is_acceptable() {
                let chosen: Vec<Vec<usize>> = pick_worlds.iter().map(|&i| assignments[i].clone()).collect();
                (acceptable_ids(vocab, &chosen), None)
            } else {
                (generic_ids(n), Some(pick_worlds.iter().map(|&i| valuations[i].clone()).collect::<Vec<_>>()))
            };
            let finished = for_each_combo(&radices, &mut |pick| {
                let orders = pick.iter().enumerate().map(|(w, &i)| options[w][i].clone()).collect();
                let m = match &truth {
                    Some(t) => CounterfactualStructure::generic(vocab.clone(), ids.clone(), t.clone(), orders),
                    None => CounterfactualStructure::from_indices(
                        vocab.clone(),
                        ids.clone(),
                        pick_worlds.iter().map(|&i| assignments[i].clone()).collect(),
                        orders,
                    ),
                }
                .expect("enumerated orders are valid");
                count += 1;
                visit(&m)
            });
            if !finished {
                stopped = true;
                break;
            }
        }
        if stopped {
            break;
        }
    }
    if !stopped && class.is_acceptable() {
        count += for_each_structure(ClassName::MfPlus, vocab, 0, u64::MAX, visit)?;
    }
    Ok(count)
}

/// Order of world `w` in the targeted family: `w` first, then `promoted`
/// in the given order, then every other world by index.
fn promoted_order(n: usize, w: usize, promoted: &[usize]) -> Relation {
    let mut ranks = vec![None; n];
    ranks[w] = Some(0);
    for (i, &p) in promoted.iter().enumerate() {
        ranks[p] = Some(i + 1);
    }
    for (v, r) in ranks.iter_mut().enumerate() {
        if r.is_none() {
            *r = Some(n + v);
        }
    }
    Relation::from_ranks(&ranks)
}

/// A small family of full structures with strict total orders, for
/// vocabularies too large to enumerate: every world orders the rest by
/// index, except that one world `w0` may promote an ordered pair `(a, b)`
/// to be its closest and second-closest worlds. Recursive-only classes
/// keep the recursive members and add the structures induced by every
/// recursive causal model over the vocabulary.
pub fn for_each_targeted(
    class: ClassName,
    vocab: &Vocabulary,
    cap: u64,
    visit: &mut dyn FnMut(&CounterfactualStructure) -> bool,
) -> Result<u64, EnumError> {
    let worlds = vocab.assignments();
    let n = worlds.len();
    let ids = acceptable_ids(vocab, &worlds);
    let estimate = 1 + (n * (n - 1) * (n.saturating_sub(2))) as u64;
    if estimate > cap {
        return Err(EnumError::TooLarge { estimate, cap });
    }
    let mut count = 0u64;
    let mut variants: Vec<Option<(usize, usize, usize)>> = vec![None];
    for w0 in 0..n {
        for a in (0..n).filter(|&a| a != w0) {
            for b in (0..n).filter(|&b| b != w0 && b != a) {
                variants.push(Some((w0, a, b)));
            }
        }
    }
    for v in variants {
        let orders = (0..n)
            .map(|w| match v {
                Some((w0, a, b)) if w == w0 => promoted_order(n, w, &[a, b]),
                _ => promoted_order(n, w, &[]),
            })
            .collect();
        let m = CounterfactualStructure::from_indices(vocab.clone(), ids.clone(), worlds.clone(), orders)
            .expect("targeted orders are valid");
        if class == ClassName::Mrec && !m.classify().recursive {
            continue;
        }
        count += 1;
        if !visit(&m) {
            return Ok(count);
        }
    }
    if class == ClassName::Mrec {
        let sig = Signature::new(vec![Variable::new(unit_name(vocab), [0])], vocab.variables().to_vec())
            .map_err(|_| EnumError::TooManyWorlds(n))?;
        let mut stop = false;
        for_each_model(ClassName::Trec, &sig, cap, &mut |t| {
            let (m, _) = causal_to_structure(t).expect("recursive models translate");
            count += 1;
            stop = !visit(&m);
            !stop
        })?;
    }
    Ok(count)
}

/// A name for a single-valued exogenous variable that does not clash with
/// `vocab`.
fn unit_name(vocab: &Vocabulary) -> String {
    let mut name = String::from("U");
    while vocab.position(&name).is_some() {
        name.push('_');
    }
    name
}

/// Row count of each endogenous variable's full table.
fn rows_of(sig: &Signature) -> Vec<usize> {
    let all: Vec<usize> = sig.all().map(|v| v.range.len()).collect();
    let n_exo = sig.exogenous().len();
    (0..sig.endogenous().len())
        .map(|i| all.iter().enumerate().filter(|&(p, _)| p != n_exo + i).map(|(_, &r)| r).product())
        .collect()
}

/// Estimated number of models [`for_each_model`] generates before
/// filtering.
pub fn model_estimate(class: ClassName, sig: &Signature) -> u64 {
    let endo = sig.endogenous();
    if class == ClassName::Trec {
        let exo: u64 = sig.exogenous().iter().map(|v| v.range.len() as u64).product();
        let mut sum = 0u64;
        for perm in permutations(endo.len()) {
            let mut prod = 1u64;
            let mut rows = exo;
            for &i in &perm {
                prod = prod.saturating_mul((endo[i].range.len() as u64).saturating_pow(rows.min(64) as u32));
                rows = rows.saturating_mul(endo[i].range.len() as u64);
            }
            sum = sum.saturating_add(prod);
        }
        return sum;
    }
    rows_of(sig)
        .iter()
        .zip(endo)
        .fold(1u64, |acc, (&rows, v)| acc.saturating_mul((v.range.len() as u64).saturating_pow(rows.min(64) as u32)))
}

/// Visits every causal model of `class` over `sig`. Recursive models are
/// generated order by order (each variable a function of the exogenous
/// variables and its predecessors) and deduplicated; the other classes
/// run through every table combination. Returns the number visited.
pub fn for_each_model(
    class: ClassName,
    sig: &Signature,
    cap: u64,
    visit: &mut dyn FnMut(&CausalModel) -> bool,
) -> Result<u64, EnumError> {
    let estimate = model_estimate(class, sig);
    if estimate > cap {
        return Err(EnumError::TooLarge { estimate, cap });
    }
    let mut count = 0u64;
    let endo = sig.endogenous();
    let n_exo = sig.exogenous().len();
    let vars: Vec<&Variable> = sig.all().collect();
    if class == ClassName::Trec {
        let mut seen: BTreeSet<Vec<Vec<usize>>> = BTreeSet::new();
        for perm in permutations(endo.len()) {
            // for each endogenous variable: the positions it may read, and
            // for every full-table row the index into its small table
            let mut small_rows = Vec::new();
            let mut maps = Vec::new();
            for (k, &i) in perm.iter().enumerate() {
                let owner = n_exo + i;
                let mut inputs: Vec<usize> = (0..n_exo).collect();
                inputs.extend(perm[..k].iter().map(|&j| n_exo + j));
                inputs.sort();
                let others: Vec<usize> = (0..vars.len()).filter(|&p| p != owner).collect();
                let radices: Vec<usize> = others.iter().map(|&p| vars[p].range.len()).collect();
                let map: Vec<usize> = product_indices(&radices)
                    .into_iter()
                    .map(|row| {
                        inputs.iter().fold(0, |acc, &p| {
                            let at = others.iter().position(|&o| o == p).expect("input is another variable");
                            acc * vars[p].range.len() + row[at]
                        })
                    })
                    .collect();
                small_rows.push(inputs.iter().map(|&p| vars[p].range.len()).product::<usize>());
                maps.push((i, map));
            }
            let radices: Vec<usize> = perm
                .iter()
                .zip(&small_rows)
                .flat_map(|(&i, &rows)| core::iter::repeat_n(endo[i].range.len(), rows))
                .collect();
            let finished = for_each_combo(&radices, &mut |digits| {
                let mut tables = vec![Vec::new(); endo.len()];
                let mut at = 0;
                for ((i, map), &rows) in maps.iter().zip(&small_rows) {
                    let small = &digits[at..at + rows];
                    tables[*i] = map.iter().map(|&r| small[r]).collect();
                    at += rows;
                }
                if !seen.insert(tables.clone()) {
                    return true;
                }
                count += 1;
                visit(&CausalModel::from_raw_tables(sig.clone(), tables))
            });
            if !finished {
                break;
            }
        }
        return Ok(count);
    }
    let rows = rows_of(sig);
    let radices: Vec<usize> =
        endo.iter().zip(&rows).flat_map(|(v, &r)| core::iter::repeat_n(v.range.len(), r)).collect();
    for_each_combo(&radices, &mut |digits| {
        let mut tables = Vec::with_capacity(endo.len());
        let mut at = 0;
        for &r in &rows {
            tables.push(digits[at..at + r].to_vec());
            at += r;
        }
        let t = CausalModel::from_raw_tables(sig.clone(), tables);
        if class == ClassName::Tun && !t.in_tun() {
            return true;
        }
        count += 1;
        visit(&t)
    });
    Ok(count)
}

/// A random causal model of `class`; `None` when rejection sampling for
/// `Tun` gives up.
pub fn random_model<R: Rng + ?Sized>(class: ClassName, sig: &Signature, rng: &mut R) -> Option<CausalModel> {
    let endo = sig.endogenous();
    let n_exo = sig.exogenous().len();
    let vars: Vec<&Variable> = sig.all().collect();
    let rows = rows_of(sig);
    if class == ClassName::Trec {
        let mut perm: Vec<usize> = (0..endo.len()).collect();
        perm.shuffle(rng);
        let mut tables = vec![Vec::new(); endo.len()];
        for (k, &i) in perm.iter().enumerate() {
            let owner = n_exo + i;
            let mut inputs: Vec<usize> = (0..n_exo).collect();
            inputs.extend(perm[..k].iter().filter(|_| rng.random_bool(0.7)).map(|&j| n_exo + j));
            inputs.sort();
            let small_len: usize = inputs.iter().map(|&p| vars[p].range.len()).product();
            let small: Vec<usize> = (0..small_len).map(|_| rng.random_range(0..endo[i].range.len())).collect();
            let others: Vec<usize> = (0..vars.len()).filter(|&p| p != owner).collect();
            let radices: Vec<usize> = others.iter().map(|&p| vars[p].range.len()).collect();
            tables[i] = product_indices(&radices)
                .into_iter()
                .map(|row| {
                    let at = inputs.iter().fold(0, |acc, &p| {
                        let o = others.iter().position(|&o| o == p).expect("input is another variable");
                        acc * vars[p].range.len() + row[o]
                    });
                    small[at]
                })
                .collect();
        }
        return Some(CausalModel::from_raw_tables(sig.clone(), tables));
    }
    let tries = if class == ClassName::Tun { 200 } else { 1 };
    for _ in 0..tries {
        let tables = endo
            .iter()
            .zip(&rows)
            .map(|(v, &r)| (0..r).map(|_| rng.random_range(0..v.range.len())).collect())
            .collect();
        let t = CausalModel::from_raw_tables(sig.clone(), tables);
        if class != ClassName::Tun || t.in_tun() {
            return Some(t);
        }
    }
    None
}

/// A random order for `w` over the worlds in `field` (which must contain
/// `w`): strict total, or the intersection of two random rankings.
fn random_order<R: Rng + ?Sized>(n: usize, w: usize, field: &[usize], total: bool, rng: &mut R) -> Relation {
    let mut others: Vec<usize> = field.iter().copied().filter(|&v| v != w).collect();
    others.shuffle(rng);
    if total {
        let mut ranks = vec![None; n];
        ranks[w] = Some(0);
        for (i, &v) in others.iter().enumerate() {
            ranks[v] = Some(i + 1);
        }
        return Relation::from_ranks(&ranks);
    }
    let levels = others.len().max(1);
    let r1: Vec<usize> = (0..n).map(|_| rng.random_range(1..=levels)).collect();
    let r2: Vec<usize> =
        if rng.random_bool(0.5) { r1.clone() } else { (0..n).map(|_| rng.random_range(1..=levels)).collect() };
    let mut pairs = vec![(w, w)];
    pairs.extend(others.iter().map(|&v| (w, v)));
    for &a in &others {
        for &b in &others {
            if r1[a] <= r1[b] && r2[a] <= r2[b] {
                pairs.push((a, b));
            }
        }
    }
    Relation::from_pairs(n, pairs)
}

/// A random structure of `class`; non-full classes get between 1 and
/// `max_worlds` worlds.
pub fn random_structure<R: Rng + ?Sized>(
    class: ClassName,
    vocab: &Vocabulary,
    max_worlds: usize,
    rng: &mut R,
) -> CounterfactualStructure {
    let total = class.is_total();
    if class == ClassName::Mrec && rng.random_bool(0.5) {
        let sig = Signature::new(vec![Variable::new(unit_name(vocab), [0])], vocab.variables().to_vec())
            .expect("vocabulary names are valid");
        let t = random_model(ClassName::Trec, &sig, rng).expect("recursive sampling always succeeds");
        return causal_to_structure(&t).expect("recursive models translate").0;
    }
    if class.is_full() {
        let worlds = vocab.assignments();
        let n = worlds.len();
        let all: Vec<usize> = (0..n).collect();
        loop {
            let orders = (0..n).map(|w| random_order(n, w, &all, total, rng)).collect();
            let m = CounterfactualStructure::from_indices(vocab.clone(), acceptable_ids(vocab, &worlds), worlds.clone(), orders)
                .expect("random orders are valid");
            if class != ClassName::Mrec || m.classify().recursive {
                return m;
            }
        }
    }
    let n = rng.random_range(1..=max_worlds.max(1));
    let orders: Vec<Relation> = (0..n)
        .map(|w| {
            let field: Vec<usize> = (0..n).filter(|&v| v == w || rng.random_bool(0.7)).collect();
            random_order(n, w, &field, total, rng)
        })
        .collect();
    if class.is_acceptable() {
        let worlds: Vec<Vec<usize>> = (0..n)
            .map(|_| vocab.variables().iter().map(|v| rng.random_range(0..v.range.len())).collect())
            .collect();
        CounterfactualStructure::from_indices(vocab.clone(), acceptable_ids(vocab, &worlds), worlds, orders)
            .expect("random orders are valid")
    } else {
        let truth = (0..n).map(|_| (0..vocab.atom_count()).map(|_| rng.random_bool(0.5)).collect()).collect();
        CounterfactualStructure::generic(vocab.clone(), generic_ids(n), truth, orders).expect("random orders are valid")
    }
}

//! Translations between recursive causal models and recursive counterfactual
//! structures, and a corpus-based equivalence check between the two sides.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::causal::{CausalEvalError, CausalEvaluator, CompiledLex};
use crate::formula::Formula;
use crate::model::{CausalModel, ModelError, Recursion};
use crate::signature::{product_indices, Assignment, Signature, Value, Variable};
use crate::structure::{CounterfactualStructure, Program, ProgramEval, Relation, StructureError, StructureEvalError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BridgeError {
    #[error("causal model is not recursive (dependence cycle {})", .0.join(" -> "))]
    NotRecursive(Vec<String>),
    #[error("structure is not recursive under a single variable order")]
    NotRecursiveStructure,
    #[error("no world with id `{0}`")]
    UnknownWorld(String),
    #[error("exogenous variable `{0}` clashes with an endogenous one")]
    NameClash(String),
    #[error("built structure violates the closest-world constraint: {0}")]
    CompletionViolated(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    StructureEval(#[from] StructureEvalError),
    #[error(transparent)]
    Causal(#[from] CausalEvalError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Which world of `M_T` stands for which context and intervention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorldNaming {
    contexts: Vec<Assignment>,
    /// `(context index, intervention) -> world`, for every intervention
    /// including the empty one.
    worlds: BTreeMap<(usize, Assignment), usize>,
}

impl WorldNaming {
    pub fn contexts(&self) -> &[Assignment] {
        &self.contexts
    }

    /// `w_u`.
    pub fn world_of_context(&self, ctx: &Assignment) -> Option<usize> {
        self.world_of(ctx, &Assignment::new())
    }

    /// `w_{u, X<-x}`.
    pub fn world_of(&self, ctx: &Assignment, intervention: &Assignment) -> Option<usize> {
        let c = self.contexts.iter().position(|c| c == ctx)?;
        self.worlds.get(&(c, intervention.clone())).copied()
    }

    /// Pairs `(u, w_u)`.
    pub fn pairing(&self) -> Vec<(Assignment, usize)> {
        self.contexts.iter().map(|c| (c.clone(), self.world_of_context(c).unwrap())).collect()
    }
}

/// Comma-joined values, the world id used throughout.
pub fn world_id(values: impl IntoIterator<Item = Value>) -> String {
    values.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

/// The structure `M_T` of a recursive model: one world per assignment to all
/// variables, `W_w` the worlds sharing `w`'s context, and orders under which
/// the closest world to `w_u` where `X=x` is `w_{u,X<-x}`.
///
/// Orders are lexicographic over the causal order: a world is compared
/// variable by variable on (does the variable deviate, its value), where for
/// `w_u` a variable deviates when it differs from what its equation gives on
/// the world's earlier values, and for any other `w` when it differs from
/// `w`'s own value.
pub fn causal_to_structure(t: &CausalModel) -> Result<(CounterfactualStructure, WorldNaming), BridgeError> {
    let order = match t.recursion() {
        Recursion::Acyclic(order) => order,
        Recursion::Cyclic(cycle) => return Err(BridgeError::NotRecursive(cycle)),
    };
    let sig = t.signature();
    let n_exo = sig.exogenous().len();
    let endo = sig.endogenous();
    let causal: Vec<usize> = order.iter().map(|n| sig.vocabulary().position(n).unwrap()).collect();
    let all: Vec<&Variable> = sig.all().collect();
    let radices: Vec<usize> = all.iter().map(|v| v.range.len()).collect();
    let worlds = product_indices(&radices);
    let n = worlds.len();
    let values = |w: &[usize]| -> Vec<Value> { w.iter().zip(&all).map(|(&i, v)| v.range[i]).collect() };
    let ids: Vec<String> = worlds.iter().map(|w| world_id(values(w))).collect();
    let index: BTreeMap<&[usize], usize> = worlds.iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect();

    let ctx_radices: Vec<usize> = sig.exogenous().iter().map(|v| v.range.len()).collect();
    let contexts = product_indices(&ctx_radices);
    let w_u: Vec<usize> = contexts
        .iter()
        .map(|c| {
            let sol = t.solve_dense(c, &[]);
            let mut w = c.clone();
            w.extend_from_slice(&sol[0]);
            index[w.as_slice()]
        })
        .collect();

    let equation_at = |w: &[usize], x: usize| -> usize {
        let others: Assignment =
            all.iter().zip(w).enumerate().filter(|&(p, _)| p != n_exo + x).map(|(_, (v, &i))| (v.name.as_str(), v.range[i])).collect();
        endo[x].index_of(t.equation_value(&endo[x].name, &others).expect("total equation")).unwrap()
    };

    let mut orders = Vec::with_capacity(n);
    for (wi, w) in worlds.iter().enumerate() {
        let is_wu = w_u.contains(&wi);
        let mut members: Vec<(Vec<(bool, usize)>, usize)> = worlds
            .iter()
            .enumerate()
            .filter(|(_, v)| v[..n_exo] == w[..n_exo])
            .map(|(vi, v)| {
                let key = causal
                    .iter()
                    .map(|&x| {
                        let reference = if is_wu { equation_at(v, x) } else { w[n_exo + x] };
                        (v[n_exo + x] != reference, v[n_exo + x])
                    })
                    .collect();
                (key, vi)
            })
            .collect();
        members.sort();
        let mut ranks = vec![None; n];
        for (r, (_, vi)) in members.iter().enumerate() {
            ranks[*vi] = Some(r);
        }
        orders.push(Relation::from_ranks(&ranks));
    }

    let endo_vocab = sig.vocabulary().clone();
    let endo_values: Vec<Vec<usize>> = worlds.iter().map(|w| w[n_exo..].to_vec()).collect();
    let m = CounterfactualStructure::from_indices(endo_vocab, ids, endo_values, orders)?;

    // Name every intervention's world and check the closest-world constraint.
    let mut named = BTreeMap::new();
    let int_radices: Vec<usize> = endo.iter().map(|v| v.range.len() + 1).collect();
    for (ci, c) in contexts.iter().enumerate() {
        for choice in product_indices(&int_radices) {
            let pattern: Vec<Option<usize>> = choice.iter().map(|&d| d.checked_sub(1)).collect();
            let sols = t.solve_dense(c, &pattern);
            let mut w = c.clone();
            w.extend_from_slice(&sols[0]);
            let target = index[w.as_slice()];
            if m.closest_matching(w_u[ci], &pattern) != Some(target) {
                return Err(BridgeError::CompletionViolated(format!(
                    "closest world to `{}` for intervention {:?} is not `{}`",
                    m.ids()[w_u[ci]],
                    pattern,
                    m.ids()[target]
                )));
            }
            let intervention: Assignment = endo
                .iter()
                .zip(&pattern)
                .filter_map(|(v, p)| p.map(|i| (v.name.as_str(), v.range[i])))
                .collect();
            named.insert((ci, intervention), target);
        }
    }
    if !m.classify().recursive {
        return Err(BridgeError::CompletionViolated("built structure is not recursive".into()));
    }
    let contexts = contexts
        .iter()
        .map(|c| sig.exogenous().iter().zip(c).map(|(v, &i)| (v.name.as_str(), v.range[i])).collect())
        .collect();
    Ok((m, WorldNaming { contexts, worlds: named }))
}

fn global_order(m: &CounterfactualStructure) -> Result<Vec<usize>, BridgeError> {
    let class = m.classify();
    let order = class.global_order.ok_or(BridgeError::NotRecursiveStructure)?;
    Ok(order.iter().map(|n| m.vocabulary().position(n).unwrap()).collect())
}

/// The value index of `target` at the closest world to `w` where the
/// variables before it in `order` take the values `others` gives them.
fn closest_value(m: &CounterfactualStructure, w: usize, order: &[usize], target: usize, others: &Assignment) -> usize {
    let vars = m.vocabulary().variables();
    let mut pattern = vec![None; vars.len()];
    for &x in order.iter().take_while(|&&x| x != target) {
        pattern[x] = vars[x].index_of(others.get(&vars[x].name).unwrap());
    }
    let c = m.closest_matching(w, &pattern).expect("full total structures have unique closest worlds");
    m.assignment(c).map(|a| a[target]).unwrap_or_else(|| {
        let values = m.values(c).unwrap();
        vars[target].index_of(values[target]).unwrap()
    })
}

fn signature_for(m: &CounterfactualStructure, exogenous: Vec<Variable>) -> Result<Signature, BridgeError> {
    for v in &exogenous {
        if m.vocabulary().position(&v.name).is_some() {
            return Err(BridgeError::NameClash(v.name.clone()));
        }
    }
    Signature::new(exogenous, m.vocabulary().variables().to_vec()).map_err(|e| BridgeError::NameClash(e.to_string()))
}

/// The model `T_{M,w}`: equations defined along the structure's global
/// variable order, `F_X(u, v)` being `X`'s value at the closest world to `w`
/// where the earlier variables take their values from `v`. The equations
/// ignore the context, whose variables are given by `exogenous`.
pub fn structure_to_causal(
    m: &CounterfactualStructure,
    w: usize,
    exogenous: Vec<Variable>,
) -> Result<CausalModel, BridgeError> {
    if w >= m.world_count() {
        return Err(BridgeError::UnknownWorld(format!("#{w}")));
    }
    let order = global_order(m)?;
    let sig = signature_for(m, exogenous)?;
    let vars = m.vocabulary().variables().to_vec();
    Ok(CausalModel::from_fn(sig, |name, others| {
        let x = vars.iter().position(|v| v.name == name).unwrap();
        vars[x].range[closest_value(m, w, &order, x, others)]
    })?)
}

/// One model for the whole structure: a single exogenous variable `U` whose
/// value `i` selects world `i`, so that `(M, w_i)` and `(T, U=i)` agree.
pub fn structure_to_causal_per_world(m: &CounterfactualStructure) -> Result<CausalModel, BridgeError> {
    let order = global_order(m)?;
    let exo_name = fresh_name(m);
    let exo = Variable::new(exo_name.clone(), (0..m.world_count() as Value).collect::<Vec<_>>());
    let sig = signature_for(m, vec![exo])?;
    let vars = m.vocabulary().variables().to_vec();
    Ok(CausalModel::from_fn(sig, |name, others| {
        let x = vars.iter().position(|v| v.name == name).unwrap();
        let w = others.get(&exo_name).unwrap() as usize;
        vars[x].range[closest_value(m, w, &order, x, others)]
    })?)
}

/// `U`, or `U` followed by underscores until it is not a variable name.
pub fn fresh_name(m: &CounterfactualStructure) -> String {
    let mut name = String::from("U");
    while m.vocabulary().position(&name).is_some() {
        name.push('_');
    }
    name
}

/// First formula on which the two sides disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disagreement {
    pub formula: Formula,
    pub context: Assignment,
    pub world: String,
    pub causal: bool,
    pub structure: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    /// Formula-pair evaluations performed.
    pub checked: usize,
    pub disagreement: Option<Disagreement>,
}

impl EquivalenceReport {
    pub fn agrees(&self) -> bool {
        self.disagreement.is_none()
    }
}

/// Compiles a corpus once for repeated certification.
#[derive(Debug, Clone)]
pub struct Corpus {
    formulas: Vec<Formula>,
    lex: Vec<CompiledLex>,
    program: Program,
    nodes: Vec<crate::structure::NodeId>,
}

impl Corpus {
    pub fn new(formulas: Vec<Formula>, sig: &Signature) -> Result<Self, BridgeError> {
        let mut program = Program::new(sig.vocabulary());
        let mut lex = Vec::with_capacity(formulas.len());
        let mut nodes = Vec::with_capacity(formulas.len());
        for f in &formulas {
            lex.push(CompiledLex::new(f, sig)?);
            nodes.push(program.add(f)?);
        }
        Ok(Self { formulas, lex, program, nodes })
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    /// Evaluates every formula in `t` at each context and in `m` at the
    /// paired world.
    pub fn certify(
        &self,
        t: &CausalModel,
        m: &CounterfactualStructure,
        pairing: &[(Assignment, usize)],
    ) -> Result<EquivalenceReport, BridgeError> {
        let mut eval = ProgramEval::default();
        eval.run(&self.program, m);
        let mut checked = 0;
        for (ctx, w) in pairing {
            let mut causal = CausalEvaluator::new(t, ctx)?;
            for (i, f) in self.lex.iter().enumerate() {
                let c = causal.eval(f);
                let s = eval.holds(self.nodes[i], *w);
                checked += 1;
                if c != s {
                    return Ok(EquivalenceReport {
                        checked,
                        disagreement: Some(Disagreement {
                            formula: self.formulas[i].clone(),
                            context: ctx.clone(),
                            world: m.ids()[*w].clone(),
                            causal: c,
                            structure: s,
                        }),
                    });
                }
            }
        }
        Ok(EquivalenceReport { checked, disagreement: None })
    }
}

/// Evaluates every corpus formula on both sides for each `(context, world)`
/// pair and reports the first disagreement.
pub fn certify_equivalence(
    t: &CausalModel,
    m: &CounterfactualStructure,
    pairing: &[(Assignment, usize)],
    corpus: &[Formula],
) -> Result<EquivalenceReport, BridgeError> {
    Corpus::new(corpus.to_vec(), t.signature())?.certify(t, m, pairing)
}

/// Basic formulas `[Y<-y](X=x)` over every intervention (the empty one
/// giving the bare atom) and, at depth 1, their negations and every
/// pairwise conjunction and disjunction.
pub fn lprop_corpus(sig: &Signature, depth: usize) -> Vec<Formula> {
    let endo = sig.endogenous();
    let radices: Vec<usize> = endo.iter().map(|v| v.range.len() + 1).collect();
    let mut basic = Vec::new();
    for choice in product_indices(&radices) {
        let bindings: Vec<(&str, Value)> = endo
            .iter()
            .zip(&choice)
            .filter(|(_, &d)| d > 0)
            .map(|(v, &d)| (v.name.as_str(), v.range[d - 1]))
            .collect();
        for v in endo {
            for &x in &v.range {
                basic.push(Formula::intervention(bindings.iter().copied(), Formula::atom(v.name.clone(), x)));
            }
        }
    }
    if depth == 0 {
        return basic;
    }
    let mut out = basic.clone();
    out.extend(basic.iter().cloned().map(Formula::not));
    for i in 0..basic.len() {
        for j in i + 1..basic.len() {
            out.push(Formula::and(basic[i].clone(), basic[j].clone()));
            out.push(Formula::or(basic[i].clone(), basic[j].clone()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::model::TableSpec;

    fn forest_fire() -> CausalModel {
        let sig = Signature::new(
            vec![Variable::new("E", vec![0, 1, 2, 3])],
            vec![Variable::binary("L"), Variable::binary("ML"), Variable::binary("F")],
        )
        .unwrap();
        let mut t = BTreeMap::new();
        t.insert("L".into(), TableSpec::new(vec!["E".into()], (0..4).map(|e| (vec![e], e / 2))));
        t.insert("ML".into(), TableSpec::new(vec!["E".into()], (0..4).map(|e| (vec![e], e % 2))));
        t.insert(
            "F".into(),
            TableSpec::new(vec!["L".into(), "ML".into()], [(vec![0, 0], 0), (vec![0, 1], 1), (vec![1, 0], 1), (vec![1, 1], 1)]),
        );
        CausalModel::new(sig, &t).unwrap()
    }

    #[test]
    fn forest_fire_round_trip() {
        let t = forest_fire();
        let (m, naming) = causal_to_structure(&t).unwrap();
        assert_eq!(m.world_count(), 32);
        let class = m.classify();
        assert!(class.recursive && class.globally_recursive());
        let corpus = lprop_corpus(t.signature(), 1);
        let report = certify_equivalence(&t, &m, &naming.pairing(), &corpus).unwrap();
        assert!(report.agrees(), "{report:?}");
        let ctx = Assignment::new().with("E", 0);
        let w = naming.world_of_context(&ctx).unwrap();
        assert_eq!(m.ids()[w], "0,0,0,0");
        assert!(m.eval_cf(w, &parse("[L<-1](F=1)").unwrap()).unwrap());
    }

    #[test]
    fn nonrecursive_models_are_rejected() {
        let sig = Signature::binary(2, 1);
        let t = CausalModel::from_fn(sig, |v, a| a.get(if v == "X1" { "X2" } else { "X1" }).unwrap()).unwrap();
        assert!(matches!(causal_to_structure(&t), Err(BridgeError::NotRecursive(_))));
    }

    #[test]
    fn single_constant_variable() {
        let sig = Signature::new(vec![Variable::binary("U")], vec![Variable::binary("X")]).unwrap();
        let t = CausalModel::from_fn(sig, |_, _| 0).unwrap();
        let (m, naming) = causal_to_structure(&t).unwrap();
        assert_eq!(m.world_count(), 4);
        for (ctx, w) in naming.pairing() {
            assert_eq!(m.horizon(w).len(), 2);
            assert_eq!(m.values(w).unwrap(), vec![0]);
            assert_eq!(m.ranks(w)[w], Some(0), "{ctx}");
        }
        let back = structure_to_causal(&m, 0, vec![Variable::new("U", vec![0])]).unwrap();
        assert!(back.is_recursive());
    }

    #[test]
    fn round_trip_through_structure() {
        let t = forest_fire();
        let (m, naming) = causal_to_structure(&t).unwrap();
        let corpus = lprop_corpus(t.signature(), 1);
        for (ctx, w) in naming.pairing() {
            let back = structure_to_causal(&m, w, vec![Variable::new("U", vec![0, 1])]).unwrap();
            assert!(back.is_recursive());
            let pairing: Vec<_> = back.signature().contexts().into_iter().map(|c| (c, w)).collect();
            let report = certify_equivalence(&back, &m, &pairing, &corpus).unwrap();
            assert!(report.agrees(), "{ctx}: {report:?}");
        }
        let per_world = structure_to_causal_per_world(&m).unwrap();
        let pairing: Vec<_> = (0..m.world_count()).map(|w| (Assignment::new().with("U", w as Value), w)).collect();
        assert!(certify_equivalence(&per_world, &m, &pairing, &corpus).unwrap().agrees());
    }

    #[test]
    fn swapped_order_is_caught() {
        let t = forest_fire();
        let (m, naming) = causal_to_structure(&t).unwrap();
        let ctx = Assignment::new().with("E", 0);
        let wu = naming.world_of_context(&ctx).unwrap();
        let target = naming.world_of(&ctx, &Assignment::new().with("L", 1)).unwrap();
        // another world of the same context with L=1 but a different F
        let other = m
            .horizon(wu)
            .into_iter()
            .find(|&v| v != target && m.values(v).unwrap()[0] == 1 && m.values(v).unwrap()[2] != m.values(target).unwrap()[2])
            .unwrap();
        let mut ranks = m.ranks(wu);
        ranks.swap(target, other);
        let mut orders: Vec<Relation> = (0..m.world_count()).map(|w| m.order(w).clone()).collect();
        orders[wu] = Relation::from_ranks(&ranks);
        let broken = m.with_orders(orders).unwrap();
        let report = certify_equivalence(&t, &broken, &naming.pairing(), &lprop_corpus(t.signature(), 1)).unwrap();
        assert!(!report.agrees());
        assert!(certify_equivalence(&t, &broken, &naming.pairing(), &[]).unwrap().agrees());
    }

    /// The completion that ranks worlds by the size of the smallest
    /// intervention reaching them and then lexicographically can put a world
    /// reached by a larger intervention ahead of the intended closest one.
    #[test]
    fn size_ranked_completion_breaks_closest_worlds() {
        // X1 = 1 - X2, X2 = 1; the actual world is (0,1).
        let sig = Signature::new(vec![Variable::new("U", vec![0])], vec![Variable::binary("X1"), Variable::binary("X2")]).unwrap();
        let t = CausalModel::from_fn(sig, |v, a| if v == "X1" { 1 - a.get("X2").unwrap() } else { 1 }).unwrap();
        let ctx = [0usize];
        let worlds = product_indices(&[2, 2]);
        let solve = |p: &[Option<usize>]| t.solve_dense(&ctx, p)[0].clone();
        // minimum intervention size reaching each world
        let mut size = [usize::MAX; 4];
        for choice in product_indices(&[3, 3]) {
            let p: Vec<Option<usize>> = choice.iter().map(|&d| d.checked_sub(1)).collect();
            let k = p.iter().filter(|x| x.is_some()).count();
            let w = worlds.iter().position(|w| *w == solve(&p)).unwrap();
            size[w] = size[w].min(k);
        }
        let mut ranked: Vec<usize> = (0..4).collect();
        ranked.sort_by_key(|&w| (size[w], w));
        // closest world with X1=1 under that ranking
        let closest = ranked.iter().copied().find(|&w| worlds[w][0] == 1).unwrap();
        assert_eq!(worlds[closest], vec![1, 0]);
        assert_eq!(solve(&[Some(1), None]), vec![1, 1]);
        // the completion used by `causal_to_structure` gets it right
        let (m, naming) = causal_to_structure(&t).unwrap();
        let u = Assignment::new().with("U", 0);
        assert_eq!(
            m.ids()[naming.world_of(&u, &Assignment::new().with("X1", 1)).unwrap()],
            "0,1,1"
        );
    }
}

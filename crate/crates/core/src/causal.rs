//! Evaluation of `LEX` formulas in causal models, and the rewrite of `LEX`
//! into `LPROP` that is sound over models with unique solutions.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::formula::{classify, well_formed, Atom, Diagnostic, Formula, LangClass};
use crate::model::{CausalModel, ModelError};
use crate::signature::{Assignment, Signature};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CausalEvalError {
    #[error("causal models only evaluate LEX formulas: {0}")]
    LanguageTooRich(String),
    #[error("formula is not well formed: {}", join(.0))]
    IllFormed(Vec<Diagnostic>),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn join(diags: &[Diagnostic]) -> String {
    use core::fmt::Write;
    let mut out = String::new();
    for (i, d) in diags.iter().enumerate() {
        if i > 0 {
            out.push_str("; ");
        }
        let _ = write!(out, "{d}");
    }
    out
}

/// A propositional body over endogenous `(variable, value index)` atoms.
#[derive(Debug, Clone)]
enum Prop {
    Const(bool),
    Atom(usize, usize),
    Not(Box<Prop>),
    And(Box<Prop>, Box<Prop>),
    Or(Box<Prop>, Box<Prop>),
    Implies(Box<Prop>, Box<Prop>),
    Iff(Box<Prop>, Box<Prop>),
}

impl Prop {
    fn eval(&self, sol: &[usize]) -> bool {
        match self {
            Prop::Const(b) => *b,
            Prop::Atom(var, idx) => sol[*var] == *idx,
            Prop::Not(a) => !a.eval(sol),
            Prop::And(a, b) => a.eval(sol) && b.eval(sol),
            Prop::Or(a, b) => a.eval(sol) || b.eval(sol),
            Prop::Implies(a, b) => !a.eval(sol) || b.eval(sol),
            Prop::Iff(a, b) => a.eval(sol) == b.eval(sol),
        }
    }
}

/// Top level: Boolean combinations of basic causal formulas.
#[derive(Debug, Clone)]
enum Node {
    Const(bool),
    /// `[pins]body`; a bare propositional formula has no pins.
    Basic { pins: Vec<Option<usize>>, body: Prop },
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
    Iff(Box<Node>, Box<Node>),
}

/// A `LEX` formula resolved against a signature, ready for repeated
/// evaluation across models that share it.
#[derive(Debug, Clone)]
pub struct CompiledLex {
    node: Node,
    sig: Signature,
}

impl CompiledLex {
    pub fn new(f: &Formula, sig: &Signature) -> Result<Self, CausalEvalError> {
        match classify(f) {
            LangClass::Lprop | LangClass::Lex => {}
            LangClass::Lc1 => {
                return Err(CausalEvalError::LanguageTooRich(
                    "a conditional has an antecedent that is not an intervention".into(),
                ))
            }
            LangClass::Lc => {
                return Err(CausalEvalError::LanguageTooRich("conditionals are nested".into()));
            }
        }
        well_formed(f, sig).map_err(CausalEvalError::IllFormed)?;
        Ok(Self { node: compile_node(f, sig), sig: sig.clone() })
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }
}

fn compile_node(f: &Formula, sig: &Signature) -> Node {
    let bx = |g: &Formula| Box::new(compile_node(g, sig));
    match f {
        Formula::True => Node::Const(true),
        Formula::False => Node::Const(false),
        Formula::Not(a) => Node::Not(bx(a)),
        Formula::And(a, b) => Node::And(bx(a), bx(b)),
        Formula::Or(a, b) => Node::Or(bx(a), bx(b)),
        Formula::Implies(a, b) => Node::Implies(bx(a), bx(b)),
        Formula::Iff(a, b) => Node::Iff(bx(a), bx(b)),
        Formula::Atom(_) => Node::Basic { pins: Vec::new(), body: compile_prop(f, sig) },
        Formula::Cf { .. } => {
            let (bindings, body) = f.as_intervention().expect("classified as LEX");
            let mut pins = alloc::vec![None; sig.endogenous().len()];
            for Atom { var, value } in bindings {
                let pos = sig.vocabulary().position(var).expect("well formed");
                pins[pos] = sig.endogenous()[pos].index_of(*value);
            }
            Node::Basic { pins, body: compile_prop(body, sig) }
        }
    }
}

fn compile_prop(f: &Formula, sig: &Signature) -> Prop {
    let bx = |g: &Formula| Box::new(compile_prop(g, sig));
    match f {
        Formula::True => Prop::Const(true),
        Formula::False => Prop::Const(false),
        Formula::Atom(Atom { var, value }) => {
            let pos = sig.vocabulary().position(var).expect("well formed");
            Prop::Atom(pos, sig.endogenous()[pos].index_of(*value).expect("well formed"))
        }
        Formula::Not(a) => Prop::Not(bx(a)),
        Formula::And(a, b) => Prop::And(bx(a), bx(b)),
        Formula::Or(a, b) => Prop::Or(bx(a), bx(b)),
        Formula::Implies(a, b) => Prop::Implies(bx(a), bx(b)),
        Formula::Iff(a, b) => Prop::Iff(bx(a), bx(b)),
        Formula::Cf { .. } => unreachable!("classified as LEX"),
    }
}

/// Evaluates formulas in one model at one context, caching the solution set
/// of every intervention it has seen.
pub struct CausalEvaluator<'m> {
    model: &'m CausalModel,
    ctx: Vec<usize>,
    cache: BTreeMap<Vec<Option<usize>>, Vec<Vec<usize>>>,
}

impl<'m> CausalEvaluator<'m> {
    pub fn new(model: &'m CausalModel, ctx: &Assignment) -> Result<Self, CausalEvalError> {
        let ctx = model.context_indices(ctx)?;
        Ok(Self { model, ctx, cache: BTreeMap::new() })
    }

    pub fn eval(&mut self, f: &CompiledLex) -> bool {
        debug_assert_eq!(&f.sig, self.model.signature(), "formula compiled for another signature");
        self.eval_node(&f.node)
    }

    fn eval_node(&mut self, n: &Node) -> bool {
        match n {
            Node::Const(b) => *b,
            Node::Basic { pins, body } => {
                let model = self.model;
                let ctx = &self.ctx;
                let sols = self.cache.entry(pins.clone()).or_insert_with(|| model.solve_dense(ctx, pins));
                sols.iter().all(|s| body.eval(s))
            }
            Node::Not(a) => !self.eval_node(a),
            Node::And(a, b) => self.eval_node(a) && self.eval_node(b),
            Node::Or(a, b) => self.eval_node(a) || self.eval_node(b),
            Node::Implies(a, b) => !self.eval_node(a) || self.eval_node(b),
            Node::Iff(a, b) => self.eval_node(a) == self.eval_node(b),
        }
    }
}

/// `(T, u) |= f`. A basic formula `[Y<-y]phi` holds when `phi` holds in every
/// solution of the intervened equations (vacuously when there are none); a
/// bare propositional formula is read as `[]phi`.
pub fn eval_causal(t: &CausalModel, ctx: &Assignment, f: &Formula) -> Result<bool, CausalEvalError> {
    let compiled = CompiledLex::new(f, t.signature())?;
    Ok(CausalEvaluator::new(t, ctx)?.eval(&compiled))
}

/// Rewrites a `LEX` formula into `LPROP` by pushing each intervention prefix
/// through the Boolean structure of its body. The result is equivalent to
/// the input over models in which every intervention has exactly one
/// solution; outside that class no equivalence is promised.
pub fn to_lprop(f: &Formula) -> Result<Formula, CausalEvalError> {
    match classify(f) {
        LangClass::Lprop => return Ok(f.clone()),
        LangClass::Lex => {}
        _ => return Err(CausalEvalError::LanguageTooRich("to_lprop takes a LEX formula".into())),
    }
    Ok(rewrite(f))
}

fn rewrite(f: &Formula) -> Formula {
    match f {
        Formula::Atom(_) | Formula::True | Formula::False => f.clone(),
        Formula::Not(a) => Formula::not(rewrite(a)),
        Formula::And(a, b) => Formula::and(rewrite(a), rewrite(b)),
        Formula::Or(a, b) => Formula::or(rewrite(a), rewrite(b)),
        Formula::Implies(a, b) => Formula::implies(rewrite(a), rewrite(b)),
        Formula::Iff(a, b) => Formula::iff(rewrite(a), rewrite(b)),
        Formula::Cf { antecedent, consequent, .. } => push(antecedent, consequent),
    }
}

fn push(prefix: &Formula, body: &Formula) -> Formula {
    let p = |g: &Formula| push(prefix, g);
    match body {
        Formula::True => Formula::True,
        Formula::False => Formula::False,
        Formula::Atom(_) => Formula::Cf {
            antecedent: Box::new(prefix.clone()),
            consequent: Box::new(body.clone()),
            intervention: true,
        },
        Formula::Not(a) => Formula::not(p(a)),
        Formula::And(a, b) => Formula::and(p(a), p(b)),
        Formula::Or(a, b) => Formula::or(p(a), p(b)),
        Formula::Implies(a, b) => Formula::implies(p(a), p(b)),
        Formula::Iff(a, b) => Formula::iff(p(a), p(b)),
        Formula::Cf { .. } => unreachable!("classified as LEX"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::model::TableSpec;
    use crate::signature::Variable;
    use alloc::vec;

    fn u0() -> Assignment {
        Assignment::new().with("U", 0)
    }

    fn tstar() -> CausalModel {
        let sig = Signature::new(
            vec![Variable::new("U", vec![0])],
            vec![Variable::binary("X1"), Variable::binary("X2"), Variable::binary("X3")],
        )
        .unwrap();
        CausalModel::from_fn(sig, |var, a| {
            let g = |n: &str| a.get(n).unwrap();
            match var {
                "X1" => (g("X2") == 0 && g("X3") == 1) as i64,
                "X2" => (g("X1") == 1 && g("X3") == 0) as i64,
                _ => (g("X1") == 0 && g("X2") == 1) as i64,
            }
        })
        .unwrap()
    }

    fn no_solution() -> CausalModel {
        let sig = Signature::new(vec![Variable::new("U", vec![0])], vec![Variable::binary("X1"), Variable::binary("X2")])
            .unwrap();
        let mut t = BTreeMap::new();
        t.insert("X1".into(), TableSpec::new(vec!["X2".into()], [(vec![0], 1), (vec![1], 0)]));
        t.insert("X2".into(), TableSpec::new(vec!["X1".into()], [(vec![0], 0), (vec![1], 1)]));
        CausalModel::new(sig, &t).unwrap()
    }

    #[test]
    fn phi_star_holds_in_tstar() {
        let phi = parse("[X1<-1](X2=1 & X3=0) & [X2<-1](X3=1 & X1=0) & [X3<-1](X1=1 & X2=0)").unwrap();
        assert_eq!(eval_causal(&tstar(), &u0(), &phi), Ok(true));
    }

    #[test]
    fn effectiveness_and_vacuity() {
        let f = parse("[X1<-1; X2<-0](X1=1)").unwrap();
        assert_eq!(eval_causal(&tstar(), &u0(), &f), Ok(true));
        let vac = parse("[](X1=0 & X1=1)").unwrap();
        assert_eq!(eval_causal(&no_solution(), &u0(), &vac), Ok(true));
        // bare connectives sit outside the implicit empty intervention
        assert_eq!(eval_causal(&no_solution(), &u0(), &parse("X1=0 & X1=1").unwrap()), Ok(true));
        assert_eq!(eval_causal(&no_solution(), &u0(), &parse("!X1=0").unwrap()), Ok(false));
    }

    #[test]
    fn disjunction_is_checked_per_solution() {
        // X1 = X2 and X2 = X1 has the two solutions (0,0) and (1,1).
        let sig = Signature::new(vec![Variable::new("U", vec![0])], vec![Variable::binary("X1"), Variable::binary("X2")])
            .unwrap();
        let t = CausalModel::from_fn(sig, |var, a| a.get(if var == "X1" { "X2" } else { "X1" }).unwrap()).unwrap();
        let inside = parse("[](X1=0 | X1=1)").unwrap();
        let outside = parse("[](X1=0) | [](X1=1)").unwrap();
        assert_eq!(eval_causal(&t, &u0(), &inside), Ok(true));
        assert_eq!(eval_causal(&t, &u0(), &outside), Ok(false));
    }

    #[test]
    fn rejects_rich_formulas() {
        let t = tstar();
        for s in ["X1=1 ~> X2=1", "[X1<-1][X2<-1]X3=1", "(X1=1 | X2=1) ~> X3=1"] {
            assert!(matches!(eval_causal(&t, &u0(), &parse(s).unwrap()), Err(CausalEvalError::LanguageTooRich(_))));
        }
        assert!(matches!(
            eval_causal(&t, &u0(), &parse("[X1<-2](X2=1)").unwrap()),
            Err(CausalEvalError::IllFormed(_))
        ));
        assert!(matches!(
            eval_causal(&t, &Assignment::new(), &parse("X1=0").unwrap()),
            Err(CausalEvalError::Model(ModelError::PartialContext(_)))
        ));
    }

    #[test]
    fn to_lprop_pushes_prefixes() {
        let f = parse("[X1<-1](X2=1 & X3=0)").unwrap();
        assert_eq!(to_lprop(&f).unwrap(), parse("[X1<-1]X2=1 & [X1<-1]X3=0").unwrap());
        let g = parse("[X1<-1]!X2=1").unwrap();
        assert_eq!(to_lprop(&g).unwrap(), parse("![X1<-1]X2=1").unwrap());
        let h = parse("[X1<-1]X2=1 | X3=0").unwrap();
        assert_eq!(to_lprop(&h).unwrap(), h);
        assert_eq!(classify(&to_lprop(&parse("[](X1=1 -> X2=0)").unwrap()).unwrap()), LangClass::Lprop);
        assert!(to_lprop(&parse("X1=1 ~> X2=1").unwrap()).is_err());
    }
}

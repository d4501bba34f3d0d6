//! Validity checking by enumeration, and seeded countermodel search.

use alloc::string::String;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::enumerate::{
    for_each_model, for_each_structure, for_each_targeted, random_model, random_structure, vocabulary_for,
    ClassName, EnumError,
};
use super::schema::{instances, Bounds, Schema, SchemaError};
use crate::causal::{CausalEvalError, CausalEvaluator, CompiledLex};
use crate::formula::Formula;
use crate::model::CausalModel;
use crate::signature::{Assignment, Signature, Vocabulary};
use crate::structure::{CounterfactualStructure, NodeId, Program, ProgramEval, StructureEvalError};

pub const DEFAULT_CAP: u64 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error(transparent)]
    Causal(#[from] CausalEvalError),
    #[error(transparent)]
    Structure(#[from] StructureEvalError),
    #[error("bounds too large: {0}")]
    BoundsTooLarge(EnumError),
    #[error("{0}")]
    Unsupported(String),
}

impl From<EnumError> for CheckError {
    fn from(e: EnumError) -> Self {
        CheckError::BoundsTooLarge(e)
    }
}

/// Which class to check against, and how far to enumerate it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDescriptor {
    pub class: ClassName,
    /// Causal classes use the whole signature; acceptable structure
    /// classes use its endogenous vocabulary. Structures in `M` and `M+`
    /// take their vocabulary from the formulas being checked.
    pub signature: Signature,
    /// World limit for the classes that are not full.
    pub max_worlds: usize,
    /// For full classes: check the targeted family instead of every
    /// structure.
    pub targeted: bool,
    /// Largest number of models or structures enumerated.
    pub cap: u64,
}

impl ClassDescriptor {
    /// `vars` binary endogenous variables and one binary exogenous
    /// variable; at most 3 worlds for the classes that are not full.
    pub fn binary(class: ClassName, vars: usize) -> Self {
        Self { class, signature: Signature::binary(vars, 2), max_worlds: 3, targeted: false, cap: DEFAULT_CAP }
    }

    pub fn targeted(mut self) -> Self {
        self.targeted = true;
        self
    }

    pub fn with_signature(mut self, sig: Signature) -> Self {
        self.signature = sig;
        self
    }

    pub fn with_max_worlds(mut self, n: usize) -> Self {
        self.max_worlds = n;
        self
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    /// The vocabulary structures are built over when checking `formulas`.
    pub fn vocabulary_for(&self, formulas: &[Formula]) -> Vocabulary {
        match self.class {
            ClassName::M | ClassName::MPlus => vocabulary_for(formulas.iter().flat_map(|f| f.atoms())),
            _ => self.signature.vocabulary().clone(),
        }
    }
}

/// Where a formula fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Causal { model: CausalModel, context: Assignment },
    Structure { structure: CounterfactualStructure, world: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Countermodel {
    /// Position of the failing formula in the checked list.
    pub index: usize,
    pub formula: Formula,
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// True everywhere enumerated: `checked` models or structures, and
    /// `points` (model, context) or (structure, world) pairs.
    ValidAtBound { checked: u64, points: u64 },
    Countermodel(Countermodel),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::ValidAtBound { .. })
    }

    pub fn countermodel(&self) -> Option<&Countermodel> {
        match self {
            Verdict::Countermodel(c) => Some(c),
            Verdict::ValidAtBound { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found { countermodel: Countermodel, trial: u64 },
    NotFound { trials: u64 },
}

/// Checks a model: the first formula failing at some context.
fn first_causal_failure(
    t: &CausalModel,
    contexts: &[Assignment],
    compiled: &[CompiledLex],
    formulas: &[Formula],
) -> Option<Countermodel> {
    for ctx in contexts {
        let mut ev = CausalEvaluator::new(t, ctx).expect("contexts come from the signature");
        if let Some(i) = compiled.iter().position(|c| !ev.eval(c)) {
            return Some(Countermodel {
                index: i,
                formula: formulas[i].clone(),
                witness: Witness::Causal { model: t.clone(), context: ctx.clone() },
            });
        }
    }
    None
}

struct StructureChecker<'a> {
    formulas: &'a [Formula],
    program: Program,
    nodes: Vec<NodeId>,
    eval: ProgramEval,
}

impl<'a> StructureChecker<'a> {
    fn new(formulas: &'a [Formula], vocab: &Vocabulary) -> Result<Self, CheckError> {
        let mut program = Program::new(vocab);
        let nodes = formulas.iter().map(|f| program.add(f)).collect::<Result<Vec<_>, _>>()?;
        Ok(Self { formulas, program, nodes, eval: ProgramEval::default() })
    }

    fn check(&mut self, m: &CounterfactualStructure) -> Option<Countermodel> {
        self.eval.run(&self.program, m);
        for (i, &node) in self.nodes.iter().enumerate() {
            if let Some(w) = self.eval.first_failure(node) {
                return Some(Countermodel {
                    index: i,
                    formula: self.formulas[i].clone(),
                    witness: Witness::Structure { structure: m.clone(), world: m.ids()[w].clone() },
                });
            }
        }
        None
    }
}

/// Checks every formula on every model or structure of the class, in a
/// deterministic order, and returns the first failure.
pub fn check_formulas(formulas: &[Formula], cd: &ClassDescriptor) -> Result<Verdict, CheckError> {
    let mut checked = 0u64;
    let mut points = 0u64;
    let mut found = None;
    if cd.class.is_causal() {
        let compiled =
            formulas.iter().map(|f| CompiledLex::new(f, &cd.signature)).collect::<Result<Vec<_>, _>>()?;
        let contexts = cd.signature.contexts();
        for_each_model(cd.class, &cd.signature, cd.cap, &mut |t| {
            checked += 1;
            points += contexts.len() as u64;
            found = first_causal_failure(t, &contexts, &compiled, formulas);
            found.is_none()
        })?;
    } else {
        let vocab = cd.vocabulary_for(formulas);
        let mut checker = StructureChecker::new(formulas, &vocab)?;
        let mut visit = |m: &CounterfactualStructure| {
            checked += 1;
            points += m.world_count() as u64;
            found = checker.check(m);
            found.is_none()
        };
        if cd.targeted {
            if !cd.class.is_full() {
                return Err(CheckError::Unsupported(alloc::format!(
                    "targeted mode is only defined for full classes, not {}",
                    cd.class
                )));
            }
            for_each_targeted(cd.class, &vocab, cd.cap, &mut visit)?;
        } else {
            for_each_structure(cd.class, &vocab, cd.max_worlds, cd.cap, &mut visit)?;
        }
    }
    Ok(match found {
        Some(c) => Verdict::Countermodel(c),
        None => Verdict::ValidAtBound { checked, points },
    })
}

pub fn check_validity(f: &Formula, cd: &ClassDescriptor) -> Result<Verdict, CheckError> {
    check_formulas(core::slice::from_ref(f), cd)
}

/// The instances of `schema` the check uses, over the descriptor's
/// vocabulary.
pub fn schema_instances(schema: Schema, cd: &ClassDescriptor, bounds: &Bounds) -> Result<Vec<Formula>, CheckError> {
    Ok(instances(schema, cd.signature.vocabulary(), bounds)?)
}

/// Checks every instance of `schema` within `bounds`.
pub fn check_schema(schema: Schema, cd: &ClassDescriptor, bounds: &Bounds) -> Result<Verdict, CheckError> {
    check_formulas(&schema_instances(schema, cd, bounds)?, cd)
}

/// Samples `budget` models or structures of the class with a ChaCha
/// generator seeded by `seed`, returning the first falsifying point.
/// Non-full structure classes get up to `cd.max_worlds` worlds.
pub fn find_countermodel(
    formulas: &[Formula],
    cd: &ClassDescriptor,
    budget: u64,
    seed: u64,
) -> Result<SearchOutcome, CheckError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if cd.class.is_causal() {
        let compiled =
            formulas.iter().map(|f| CompiledLex::new(f, &cd.signature)).collect::<Result<Vec<_>, _>>()?;
        let contexts = cd.signature.contexts();
        for trial in 0..budget {
            let Some(t) = random_model(cd.class, &cd.signature, &mut rng) else { continue };
            if let Some(countermodel) = first_causal_failure(&t, &contexts, &compiled, formulas) {
                return Ok(SearchOutcome::Found { countermodel, trial });
            }
        }
    } else {
        let vocab = cd.vocabulary_for(formulas);
        let mut checker = StructureChecker::new(formulas, &vocab)?;
        for trial in 0..budget {
            let m = random_structure(cd.class, &vocab, cd.max_worlds, &mut rng);
            if let Some(countermodel) = checker.check(&m) {
                return Ok(SearchOutcome::Found { countermodel, trial });
            }
        }
    }
    Ok(SearchOutcome::NotFound { trials: budget })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn c3_c4_valid_over_acceptable() {
        let cd = ClassDescriptor::binary(ClassName::Ma, 2);
        for schema in [Schema::C3, Schema::C4] {
            assert!(check_schema(schema, &cd, &Bounds::default()).unwrap().is_valid(), "{schema}");
        }
    }

    #[test]
    fn a7_fails_with_branching_orders() {
        let a7 = f("(X1=1 ~> X2=1 | !X2=1) -> (X1=1 ~> X2=1) | (X1=1 ~> !X2=1)");
        let cd = ClassDescriptor::binary(ClassName::M, 2);
        let verdict = check_validity(&a7, &cd).unwrap();
        let c = verdict.countermodel().expect("A7 is not valid in M");
        let Witness::Structure { structure, world } = &c.witness else { panic!() };
        assert!(!structure.eval_at(world, &a7).unwrap());
        assert!(!structure.is_total());
        let found = find_countermodel(core::slice::from_ref(&a7), &cd, 10_000, 1).unwrap();
        assert!(matches!(found, SearchOutcome::Found { .. }));
        let plus = ClassDescriptor::binary(ClassName::MPlus, 2);
        assert!(check_validity(&a7, &plus).unwrap().is_valid());
    }

    #[test]
    fn a1_has_no_countermodel() {
        let a1 = f("X1=0 ~> X1=0");
        let cd = ClassDescriptor::binary(ClassName::M, 1);
        assert_eq!(
            find_countermodel(core::slice::from_ref(&a1), &cd, 2000, 3).unwrap(),
            SearchOutcome::NotFound { trials: 2000 }
        );
    }

    #[test]
    fn causal_check_reports_context() {
        let cd = ClassDescriptor::binary(ClassName::Trec, 1);
        let v = check_validity(&f("X1=1"), &cd).unwrap();
        let c = v.countermodel().unwrap();
        let Witness::Causal { model, context } = &c.witness else { panic!() };
        assert!(!crate::causal::eval_causal(model, context, &c.formula).unwrap());
        assert!(matches!(check_validity(&f("X1=1 ~> X1=1"), &cd), Err(CheckError::Causal(_))));
    }

    #[test]
    fn runs_are_reproducible() {
        let a7 = f("(X1=1 ~> X1=0 | X2=0) -> (X1=1 ~> X1=0) | (X1=1 ~> X2=0)");
        let cd = ClassDescriptor::binary(ClassName::Ma, 2);
        assert_eq!(check_validity(&a7, &cd).unwrap(), check_validity(&a7, &cd).unwrap());
        let a = find_countermodel(core::slice::from_ref(&a7), &cd, 500, 9).unwrap();
        assert_eq!(a, find_countermodel(core::slice::from_ref(&a7), &cd, 500, 9).unwrap());
    }
}

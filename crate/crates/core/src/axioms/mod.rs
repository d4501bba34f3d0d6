//! The axiom lab: schema instantiation and bounded validity checking over
//! classes of causal models and counterfactual structures.

mod check;
mod enumerate;
mod schema;

pub use check::{
    check_formulas, check_schema, check_validity, find_countermodel, schema_instances, CheckError,
    ClassDescriptor, Countermodel, SearchOutcome, Verdict, Witness, DEFAULT_CAP,
};
pub use enumerate::{
    for_each_model, for_each_structure, for_each_targeted, model_estimate, preorders, random_model,
    random_structure, structure_estimate, total_orders, vocabulary_for, ClassName, EnumError,
};
pub use schema::{
    estimate, formula_pool, instances, instantiate, interventions, pool_atoms, Bounds, MetaKind, Schema,
    SchemaError, SubstValue, Substitution, TAUTOLOGY_TEMPLATES,
};

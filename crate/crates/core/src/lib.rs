//! Structural causal models, closest-world counterfactual structures, the
//! translations between them, bounded axiom checking and a Hilbert-style
//! proof checker. `no_std`; needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod axioms;
pub mod bridge;
pub mod causal;
pub mod formula;
pub mod model;
pub mod proof;
pub mod signature;
pub mod structure;
pub mod taut;

pub use formula::{classify, parse, Atom, Formula, LangClass};
pub use model::{CausalModel, ModelClass, ModelError, TableSpec};
pub use signature::{Assignment, Signature, SignatureError, Value, Variable, Vocabulary};

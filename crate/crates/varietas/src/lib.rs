//! A workbench for the algebra of regular languages without boolean
//! operations: canonical automata with derivatives and homomorphism
//! preimages, finite distributive lattices and their poset duals, lattice
//! bimodules as language recognizers, derivative-closed language families and
//! the finite duality between the two sides, plus exact simulation of
//! measure-many quantum finite automata.
//!
//! Every structure is finite and explicitly tabled; every axiom is checked
//! exhaustively. See the `examples/` directory for one runnable walkthrough
//! per major capability.

// index loops address several tables at once throughout
#![allow(clippy::needless_range_loop)]

pub mod bimodule;
pub mod corpus;
pub mod diamond;
pub mod duality;
pub mod error;
pub mod lang;
pub mod monoid;
pub mod order;
pub mod qfa;
pub mod recognition;
pub mod varieties;
pub mod verify;

pub use error::{LangError, StructureError};
pub use lang::{Alphabet, Context, FreeMonoidHom, RegularLanguage};
pub use order::{downset_lattice, free_cdl, Fdl, FinitePoset, LatticeMorphism};

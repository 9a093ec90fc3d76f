//! Error types shared across the crate.

use thiserror::Error;

/// Structural validation failures of tables, orders and algebraic axioms.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("malformed structure: {0}")]
    Malformed(String),
    #[error("unit law fails at element {element}")]
    UnitLaw { element: usize },
    #[error("associativity fails at ({a}, {b}, {c})")]
    Associativity { a: usize, b: usize, c: usize },
    #[error("relation is not a partial order: {0}")]
    NotPartialOrder(String),
    #[error("not a lattice: {0}")]
    NotLattice(String),
    #[error("distributivity fails at ({x}, {y}, {z})")]
    NotDistributive { x: usize, y: usize, z: usize },
    #[error("map is not monotone at ({a}, {b})")]
    NotMonotone { a: usize, b: usize },
    #[error("map is not a lattice morphism: {0}")]
    NotLatticeMorphism(String),
    #[error("lattice would have more than {limit} elements (set VARIETAS_MAX_LATTICE to raise the generator bound)")]
    LatticeTooLarge { limit: usize },
    #[error("free lattice generator count {got} exceeds the bound {bound}")]
    GeneratorBound { got: usize, bound: usize },
    #[error("partition is not a congruence: {0}")]
    NotCongruence(String),
}

/// Errors raised by language-level operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LangError {
    #[error("letter {letter:?} is not in the alphabet {alphabet:?}")]
    ForeignLetter { letter: char, alphabet: String },
    #[error("alphabet mismatch: expected {expected:?}, got {got:?}")]
    AlphabetMismatch { expected: String, got: String },
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("alphabet has duplicate symbol {0:?}")]
    DuplicateSymbol(char),
    #[error("symbol {0:?} is reserved for end markers")]
    ReservedSymbol(char),
    #[error("regex parse error at position {pos}: {msg}")]
    RegexParse { pos: usize, msg: String },
    #[error("malformed automaton: {0}")]
    Malformed(String),
}

//! Error types shared across the crate.

use thiserror::Error;

/// Everything that can go wrong when constructing or operating on
/// quantale-valued data.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An element does not belong to the carrier of the quantale it was
    /// used with.
    #[error("element {element} is not in the carrier of {quantale}")]
    Domain { quantale: String, element: String },

    /// Two values that must share a quantale do not.
    #[error("quantale mismatch: {left} vs {right}")]
    QuantaleMismatch { left: String, right: String },

    /// Matrix shapes (or object sets) do not line up for the requested
    /// operation.
    #[error("shape mismatch: {context}")]
    Shape { context: String },

    /// An object id that is not part of the category or completion at hand.
    #[error("unknown object {id:?}")]
    UnknownObject { id: String },

    /// The operation needs an enumerable carrier and the quantale is
    /// infinite (or deliberately not enumerated).
    #[error("unsupported for quantale {quantale}: {operation}")]
    Unsupported { quantale: String, operation: String },

    /// A configured enumeration or search cap would be exceeded.
    #[error("resource cap exceeded: {context} needs {needed} candidates, cap is {cap}")]
    ResourceCap {
        context: String,
        needed: u128,
        cap: u128,
    },

    /// A stated precondition does not hold for the given input.
    #[error("precondition failed: {context}")]
    Precondition { context: String },

    /// A category axiom is violated; carries the witnessing objects and
    /// both sides of the failed inequality.
    #[error("{0}")]
    Axiom(AxiomViolation),

    /// A functor inequality is violated at the witnessing pair.
    #[error(
        "not a functor: hom({c},{c_prime}) = {source_hom} is not below target hom {target_hom}"
    )]
    Functor {
        c: String,
        c_prime: String,
        source_hom: String,
        target_hom: String,
    },

    /// A presheaf or copresheaf inequality fails at the witnessing pair.
    #[error("{kind} inequality fails at ({c},{c_prime}): {lhs} is not below {rhs}")]
    Weight {
        kind: &'static str,
        c: String,
        c_prime: String,
        lhs: String,
        rhs: String,
    },

    /// Malformed input data (bad JSON shapes, bad tables, bad ids).
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// First violated category axiom, with witnesses and both sides of the
/// failed inequality rendered as text.
#[derive(Debug, Clone, PartialEq)]
pub enum AxiomViolation {
    /// Unit law: the quantale unit is not below `hom(c, c)`.
    UnitLaw {
        object: String,
        unit: String,
        hom: String,
    },
    /// Composition law at the triple `(c, c', c'')`: the composite
    /// `hom(c',c'') * hom(c,c')` is not below `hom(c,c'')`.
    CompositionLaw {
        triple: (String, String, String),
        composite: String,
        hom: String,
    },
}

impl std::fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AxiomViolation::UnitLaw { object, unit, hom } => write!(
                f,
                "unit law fails at {object:?}: unit {unit} is not below hom {hom}"
            ),
            AxiomViolation::CompositionLaw {
                triple: (c, c1, c2),
                composite,
                hom,
            } => write!(
                f,
                "composition law fails at ({c:?},{c1:?},{c2:?}): composite {composite} is not below hom {hom}"
            ),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

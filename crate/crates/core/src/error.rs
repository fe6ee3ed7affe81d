//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong when building or querying a poset.
///
/// Axiom violations carry a witness so callers can report exactly which
/// elements break the order.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("reflexive pair ({x}, {x}): a strict order is irreflexive")]
    ReflexivePair { x: usize },

    #[error("antisymmetry violated: both ({x}, {y}) and ({y}, {x}) present")]
    AntisymmetryViolation { x: usize, y: usize },

    #[error("transitivity violated: {x} < {y} and {y} < {z} given, but ({x}, {z}) is missing")]
    TransitivityViolation { x: usize, y: usize, z: usize },

    #[error("cover pairs contain a cycle: {}", format_cycle(cycle))]
    CycleDetected { cycle: Vec<usize> },

    #[error("element id {id} out of range for a poset on {n} elements")]
    IdOutOfRange { id: usize, n: usize },

    #[error("({x}, {y}) is not a relation of the poset")]
    NotARelation { x: usize, y: usize },

    #[error("({x}, {y}) is not a cover: {z} lies strictly between, removal would break transitivity")]
    NotACover { x: usize, y: usize, z: usize },

    #[error("operation requires a non-empty poset")]
    EmptyPoset,

    #[error("not a partition of the element set: {detail}")]
    NotAPartition { detail: String },

    #[error("poset too large for exhaustive cut search: n = {n} exceeds the guard {max}")]
    TooLargeForOracle { n: usize, max: usize },

    #[error("poset enumeration is limited to n <= {max}, got n = {n}")]
    TooLarge { n: usize, max: usize },

    #[error("chain has {t} element(s); the case analysis needs at least 2")]
    ChainTooShort { t: usize },

    #[error("chain profile violation (implementation bug): {detail}")]
    ProfileViolation { detail: String },

    #[error("poset is already an antichain; no relation to remove")]
    AlreadyAntichain,

    #[error("trace invariant broken at step {step} (implementation bug): {detail}")]
    TraceInvariant { step: usize, detail: String },

    #[error("invalid family spec: {detail}")]
    InvalidSpec { detail: String },
}

fn format_cycle(cycle: &[usize]) -> String {
    let mut out = String::new();
    for v in cycle {
        out.push_str(&v.to_string());
        out.push_str(" -> ");
    }
    if let Some(first) = cycle.first() {
        out.push_str(&first.to_string());
    }
    out
}

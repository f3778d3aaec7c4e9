use thiserror::Error;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("series not invertible")]
    NotInvertible,

    #[error("unsupported substitution (x -> x^{x_power}, q -> q^{q_power})")]
    UnsupportedSubstitution { x_power: u32, q_power: u32 },

    #[error("non-productive recursion while solving {0}")]
    NonProductive(String),

    #[error("prerequisite series too short: coefficient x^{needed} requested, order {available} available")]
    PrerequisiteTooShort { needed: usize, available: usize },

    #[error("residue at negative degree in {0}")]
    NegativeDegreeResidue(String),

    #[error("class empty at this perimeter: {class} at m = {m}")]
    EmptyClass { class: String, m: usize },

    #[error("Burnside integrality violated: subgroup {subgroup} at m = {m}")]
    BurnsideIntegrality { subgroup: String, m: usize },

    #[error("unsupported class for {op}: {class}")]
    UnsupportedClass { op: &'static str, class: String },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by the hypercube kernels, constructions and verifiers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubeError {
    #[error("dimension {n} is outside the supported range 0..={max}")]
    DimensionOutOfRange { n: u32, max: u32 },

    #[error("dimension {n} is below {min}, the least this check accepts")]
    DimensionTooSmall { n: u32, min: u32 },

    #[error("coordinate {coord} is outside 1..={n}")]
    CoordinateOutOfRange { coord: usize, n: u32 },

    #[error("vertex index {index} does not fit in Q_{n}")]
    VertexOutOfRange { index: u64, n: u32 },

    #[error("vertex {index} is not a member of the set")]
    NotAMember { index: u64 },

    #[error("dimension mismatch: Q_{left} vs Q_{right}")]
    DimensionMismatch { left: u32, right: u32 },

    #[error("delta undefined on empty graph")]
    EmptySet,

    #[error("invalid subcube: fixed values {values:#b} fall outside fixed mask {mask:#b}")]
    InvalidSubcube { mask: u32, values: u32 },

    #[error("degree {d} is outside 0..={n}")]
    DegreeOutOfRange { d: u32, n: u32 },

    #[error("infeasible parameters: no irreducible set in Q_{n} has minimum degree {d}")]
    Infeasible { n: u32, d: u32 },

    #[error("function is constant 0: the bound needs at least one input with f(x) = 1")]
    ConstantZero,

    #[error("n = {n} exceeds the cap of {cap} for {what}")]
    CapExceeded {
        n: u32,
        cap: u32,
        what: &'static str,
    },

    #[error("construction postcondition failed for (n={n}, d={d}): {detail}")]
    Postcondition { n: u32, d: u32, detail: String },

    #[error("{0}")]
    Parse(#[from] ParseError),
}

/// A text-format error with a 1-based position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, CubeError>;

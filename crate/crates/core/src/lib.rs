//! Combinatorics of low-sensitivity subsets of the Boolean hypercube.
//!
//! * [`cube`]: vertex sets of `Q_n`, subcubes, and the degree kernels.
//! * [`measures`]: sensitivity of Boolean functions and the bounds on their
//!   one-sets.
//! * [`constructions`]: extremal sizes and witness sets.
//! * [`search`]: cube automorphisms, canonical forms and minimum-size search.
//! * [`verify`]: exhaustive verifiers producing [`Certificate`]s.

pub mod certificate;
pub mod constructions;
pub mod cube;
pub mod dyadic;
pub mod error;
pub mod measures;
pub mod search;
pub mod verify;

pub use certificate::Certificate;
pub use cube::{CubeDim, SetOp, Subcube, Vertex, VertexSet, MAX_N};
pub use dyadic::Dyadic;
pub use error::{CubeError, ParseError, Result};
pub use measures::TruthTable;

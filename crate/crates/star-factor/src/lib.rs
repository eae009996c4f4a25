//! Star-factor toolkit: spanning forests of large stars in graphs of given
//! minimum degree.
//!
//! A star of size `k` is a `K_{1,k}`: one center plus `k` leaves. An
//! `S_ell`-packing is a collection of vertex-disjoint stars, each of size at
//! least `ell`; a factor is a packing covering every vertex. The [`solver`]
//! module produces star factors whose minimum star size grows with the
//! minimum degree of the input graph, [`oracle`] decides small instances
//! exactly, [`construct`] generates benchmark and extremal instances, and
//! [`packing::verify`] certifies every emitted packing.

pub mod bipartite;
pub mod construct;
pub mod cover;
pub mod graph;
pub mod io;
pub mod lll;
pub mod oracle;
pub mod packing;
pub mod solver;
pub mod util;

pub use graph::{BipartiteView, Graph, VertexSet};
pub use packing::{Star, StarPacking, VerificationReport, Violation};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Caller-supplied data violates a documented precondition.
    #[error("input error: {0}")]
    Input(String),
    /// An API was used against its contract (bad index, duplicate vertex, ...).
    #[error("contract violation: {0}")]
    Contract(String),
    /// A file could not be parsed.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    /// A solver stage failed in faithful mode; carries stage diagnostics.
    #[error("solver failure in {stage}: {details}")]
    SolverFailure { stage: String, details: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}

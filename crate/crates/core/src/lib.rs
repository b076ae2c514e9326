//! Trace formulae, periodic-walk counting and unitary evolution operators for
//! regular graphs.
//!
//! The crate is organised bottom-up: [`graph`] holds the combinatorial data,
//! [`operators`] turns it into matrices, and the remaining modules verify
//! identities between edge-space and vertex-space quantities or evaluate
//! spectral densities built from them.

pub mod bartholdi;
pub mod chebyshev;
pub mod ensemble;
pub mod error;
pub mod exact;
pub mod graph;
pub mod operators;
pub mod par;
pub mod quadrature;
pub mod spectral;
pub mod trace_formula;
pub mod unitary;
pub mod walks;

pub use error::{Error, Result};
pub use graph::{Graph, GraphMode, MagneticDecoration, RegularGraph, WeightDecoration};
pub use par::Execution;

//! Generalised tensor products and partial traces over Hilbert spaces whose
//! basis is labelled by graphs of named systems.
//!
//! Subsystems here are not tensor factors but *restrictions*: validated
//! selectors mapping each graph to a subgraph. Every restriction induces a
//! partial trace and a tensor product, and with them executable notions of
//! locality (an operator touches only the selected part) and causality (a
//! unitary's output reduction depends only on the input reduction). The
//! crate provides:
//!
//! - the graph/state algebra ([`graph`], [`ket`], [`operator`]);
//! - restrictions and their algebra ([`restriction`]);
//! - traceout, tensor, consistency, entropy ([`tensor`]);
//! - locality and causality deciders ([`locality`], [`causality`]);
//! - block decomposition of causal unitaries into commuting strictly local
//!   gates over a flag-extended universe ([`decomposition`]);
//! - concrete line dynamics used as worked examples ([`dynamics`]);
//! - an exhaustive law-verification harness with machine-readable reports
//!   ([`harness`]);
//! - file formats for universes, restrictions, states and operators ([`io`]).

pub mod basis;
pub mod causality;
pub mod decomposition;
pub mod dynamics;
pub mod eigen;
pub mod error;
pub mod graph;
pub mod harness;
pub mod io;
pub mod ket;
pub mod locality;
pub mod operator;
pub mod restriction;
pub mod tensor;

pub use basis::BasisIndex;
pub use error::{Error, Result};
pub use graph::{Graph, System, Universe};
pub use ket::{Ket, CMP_TOL, ZERO_TOL};
pub use operator::{OperatorMatrix, OpRole};
pub use restriction::Restriction;

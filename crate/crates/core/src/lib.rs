//! Exact computational calculus of links and string links.
//!
//! Diagrams are PD codes ([`pdcode::Diagram`]), string links are
//! [`compose::TangleDiagram`]s, and invariants are computed exactly over the
//! integers ([`laurent`]).

pub mod cli;
pub mod compose;
pub mod error;
pub mod invariants;
pub mod laurent;
pub mod obstruct;
pub mod pdcode;

pub use compose::{ClosurePattern, Side, TangleDiagram};
pub use error::{Error, Result};
pub use laurent::{BracketPoly, ConwayPoly, HalfLaurent, Laurent};
pub use obstruct::{exclude_local_knot, scan_table, Verdict};
pub use pdcode::{Crossing, Diagram};

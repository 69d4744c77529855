//! Span programs for graph bipartiteness and connectivity.
//!
//! - [`numeric`]: exact sparse vectors, span membership, and the two witness
//!   minimizations (plus a dense floating-point cross-check route).
//! - [`span_program`]: the generic model, evaluation, optimal witnesses.
//! - [`constructions`]: the odd-cycle program, the connectivity program, the
//!   s-t subroutine, and their hand-built witnesses.
//! - [`graphs`]: graphs, classical oracles, generators, file formats.
//! - [`analysis`]: bound checks and scaling scans.
//! - [`cli`]: the `spanprog` command-line front end.

pub mod analysis;
pub mod cli;
pub mod constructions;
pub mod graphs;
pub mod numeric;
pub mod span_program;

//! Exact counting of quasi-hereditary structures on path algebras of tree
//! quivers.
//!
//! Two independent counting engines are provided and cross-validated against
//! each other:
//!
//! * a brute-force engine ([`structures`]) that enumerates all vertex
//!   permutations, computes the tuple of standard-module supports for each,
//!   and counts equivalence classes;
//! * a formula engine ([`formulas`]) built on exact big-integer Catalan
//!   numbers, a memoized recursion for branch quivers, and closed forms,
//!   dispatched by shape recognition after deconcatenating the quiver at
//!   sinks and sources ([`quiver`]).
//!
//! The [`crossval`] module bundles the consistency checks run by the
//! `cross-validate` CLI command and the acceptance test suite.

pub mod crossval;
pub mod formulas;
pub mod quiver;
pub mod structures;
pub mod thinmod;
pub mod vset;

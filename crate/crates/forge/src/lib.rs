//! Finite-truncation workbench for ideals on a finite ground set: graded
//! ideal presentations, F_sigma-style codings, Katetov-reduction search,
//! tallness and omega-hitting tests, selectors, and the defeating
//! construction on the binary tree.
//!
//! Everything works at "desk scale": the ground set is `[0, N)`, Cantor
//! space becomes depth-`d` branches, ideal membership becomes a cover
//! number (minimal number of generators whose union contains the set),
//! and all measure arithmetic is exact dyadic.

pub mod catalog;
pub mod codings;
pub mod foundation;
pub mod ic;
pub mod katetov;
pub mod selectors;
pub mod solecki;

pub use foundation::{
    CoverNumber, Dyadic, ForgeError, GradedIdeal, GroundSet, Subset, Tree,
};

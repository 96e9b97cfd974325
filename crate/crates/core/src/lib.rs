//! Finite information structures, exact probability laws on rational grids,
//! entropy cochains, their cohomology, and the associated functional
//! equations of entropy.

pub mod cli;
pub mod cochain;
pub mod cohomology;
pub mod context;
pub mod error;
pub mod funceq;
pub mod io;
pub mod numeric;
pub mod partition;
pub mod prob;
pub mod report;
pub mod structure;

pub use error::{Error, Result};

//! Verification campaigns, transformation specs and persisted reports for
//! the diffusion–convection symmetry catalog.

pub mod campaign;
pub mod report;
pub mod runs;
pub mod schema;
pub mod spec;

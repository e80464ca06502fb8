//! Jet spaces, prolongation and the infinitesimal invariance criterion.

mod field;
mod prolong;
mod space;
mod symmetry;
mod system;

use core::fmt;

pub use field::{commutator, VectorField, BASE};
pub(crate) use prolong::wide_space;
pub use prolong::{prolong, Prolongation};
pub use space::{jet_symbols, Indep, JetSpace};
pub use symmetry::{
    check_symmetry, check_vanishing, invariance_residuals, lift_truncated_operator, matrix_rank,
    numeric_rank, raw_residuals, validate_resolver, ManifoldEvaluator, SymmetryConfig,
    SymmetryReport, Verdict,
};
pub use system::{Characteristic, DifferentialSystem};

use crate::domain::SampleError;
use crate::eval::EvalError;
use crate::symbol::Symbol;

#[derive(Clone, Debug, PartialEq)]
pub enum JetError {
    OrderOverflow(Symbol),
    UnknownCoordinate(Symbol),
    /// A resolver entry refers to a coordinate that is resolved later.
    NotTriangular(Symbol),
    Unresolvable(Symbol),
    NotPointField,
    NotSimplest,
    HasUComponent,
    VanishingCharacteristic,
    Eval(EvalError),
    Sample(SampleError),
}

impl fmt::Display for JetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JetError::OrderOverflow(s) => {
                write!(f, "jet coordinate '{}' exceeds the declared order", s)
            }
            JetError::UnknownCoordinate(s) => {
                write!(f, "'{}' is not a coordinate of the jet space", s)
            }
            JetError::NotTriangular(s) => write!(f, "resolver entry for '{}' is not triangular", s),
            JetError::Unresolvable(s) => write!(f, "cannot eliminate '{}'", s),
            JetError::NotPointField => {
                f.write_str("vector field coefficients contain jet coordinates")
            }
            JetError::NotSimplest => f.write_str("system is not a simplest potential system"),
            JetError::HasUComponent => f.write_str("truncated operator has a nonzero u-component"),
            JetError::VanishingCharacteristic => {
                f.write_str("characteristic alpha vanishes identically")
            }
            JetError::Eval(e) => write!(f, "{}", e),
            JetError::Sample(SampleError::Uncovered(s)) => {
                write!(f, "domain does not cover '{}'", s)
            }
            JetError::Sample(SampleError::Constraint(e)) => write!(f, "domain constraint: {}", e),
            JetError::Sample(SampleError::Exhausted) => {
                f.write_str("no admissible sample point found")
            }
        }
    }
}

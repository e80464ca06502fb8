//! Symbolic engine for diffusion–convection equations and their potential
//! systems: expressions, jet calculus, a catalog of classified cases and
//! equivalence transformations.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod catalog;
pub mod diff;
pub mod domain;
pub mod eval;
pub mod expr;
pub mod jet;
pub mod parse;
pub mod print;
pub mod rational;
pub mod subst;
pub mod symbol;
pub mod transforms;
pub mod zero;

pub use domain::{Domain, VarDomain};
pub use eval::{eval_numeric, Bindings, EvalError, Tape};
pub use expr::{Expr, Func, Node};
pub use parse::{parse, parse_with, ParseError};
pub use rational::Rational;
pub use symbol::{Symbol, SymbolKind};
pub use zero::{is_zero, ZeroConfig, ZeroError, ZeroEvidence};

//! Probabilistic identity testing by random evaluation.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::domain::{Domain, SampleError, Sampler};
use crate::eval::{EvalError, Tape};
use crate::expr::Expr;
use crate::symbol::Symbol;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroConfig {
    pub trials: usize,
    pub rtol: f64,
    pub atol: f64,
    /// Parameter samples used when the expression has parameters.
    pub param_samples: usize,
    /// Evaluate antiderivatives without closed form by quadrature.
    pub quadrature: bool,
}

impl Default for ZeroConfig {
    fn default() -> Self {
        ZeroConfig {
            trials: 200,
            rtol: 1e-9,
            atol: 1e-11,
            param_samples: 5,
            quadrature: false,
        }
    }
}

impl ZeroConfig {
    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }
}

/// A sampled point and the value found there.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub point: Vec<(Symbol, f64)>,
    pub value: f64,
    pub scale: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroEvidence {
    pub is_zero: bool,
    /// Points evaluated successfully.
    pub points: usize,
    /// Points rejected because evaluation hit a singularity.
    pub singular: usize,
    /// Point with the largest `|value| / (atol + rtol*scale)`.
    pub worst: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ZeroError {
    /// Every sampled point hit a singularity.
    Inconclusive {
        attempts: usize,
        last: String,
    },
    Eval(EvalError),
    Sample(SampleError),
}

impl fmt::Display for ZeroError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZeroError::Inconclusive { attempts, last } => {
                write!(
                    f,
                    "inconclusive: all {} sampled points were singular ({})",
                    attempts, last
                )
            }
            ZeroError::Eval(e) => write!(f, "{}", e),
            ZeroError::Sample(SampleError::Uncovered(s)) => {
                write!(f, "domain does not cover '{}'", s)
            }
            ZeroError::Sample(SampleError::Constraint(e)) => write!(f, "domain constraint: {}", e),
            ZeroError::Sample(SampleError::Exhausted) => {
                f.write_str("no admissible sample point found")
            }
        }
    }
}

/// Decides numerically whether `e` vanishes identically on `d`.
pub fn is_zero<R: Rng + ?Sized>(
    e: &Expr,
    d: &Domain,
    cfg: &ZeroConfig,
    rng: &mut R,
) -> Result<ZeroEvidence, ZeroError> {
    let syms: Vec<Symbol> = e
        .free_symbols()
        .into_iter()
        .filter(|s| s.as_str() != "pi")
        .collect();
    let tape = if cfg.quadrature {
        Tape::compile_with_quadrature(e, &syms)
    } else {
        Tape::compile(e, &syms)
    }
    .map_err(ZeroError::Eval)?;
    let sampler = Sampler::new(d, &syms).map_err(ZeroError::Sample)?;
    let rounds = if sampler.has_parameters() {
        cfg.param_samples.max(1)
    } else {
        1
    };
    let trials = cfg.trials.max(1);

    let mut ev = ZeroEvidence {
        is_zero: true,
        points: 0,
        singular: 0,
        worst: None,
    };
    let mut worst_ratio = -1.0;
    let mut last_err = String::new();
    let mut point = Vec::new();
    for _ in 0..rounds {
        sampler
            .draw_parameters(rng, &mut point)
            .map_err(ZeroError::Sample)?;
        let mut good = 0;
        let mut attempts = 0;
        while good < trials && attempts < 10 * trials {
            attempts += 1;
            sampler
                .draw_point(rng, &mut point)
                .map_err(ZeroError::Sample)?;
            match tape.eval_scaled(&point) {
                Ok(s) => {
                    good += 1;
                    let ratio = s.value.abs() / (cfg.atol + cfg.rtol * s.mag);
                    if ratio > 1.0 {
                        ev.is_zero = false;
                    }
                    if ratio > worst_ratio {
                        worst_ratio = ratio;
                        ev.worst = Some(Witness {
                            point: syms.iter().cloned().zip(point.iter().copied()).collect(),
                            value: s.value,
                            scale: s.mag,
                        });
                    }
                }
                Err(EvalError::Domain(m)) => {
                    ev.singular += 1;
                    last_err = m;
                }
                Err(other) => return Err(ZeroError::Eval(other)),
            }
        }
        ev.points += good;
    }
    if ev.points == 0 {
        return Err(ZeroError::Inconclusive {
            attempts: ev.singular,
            last: last_err,
        });
    }
    Ok(ev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::VarDomain;
    use crate::parse::parse;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn check(text: &str, d: &Domain) -> Result<ZeroEvidence, ZeroError> {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        is_zero(&parse(text).unwrap(), d, &ZeroConfig::default(), &mut rng)
    }

    #[test]
    fn trivial_identities() {
        assert!(check("u - u", &Domain::new()).unwrap().is_zero);
        let d = Domain::new().with("x", VarDomain::new(0.1, 5.0));
        let e = Expr::pow(Expr::sym("x"), Expr::frac(-4, 3))
            * Expr::pow(Expr::sym("x"), parse("4/3 + 0*y").unwrap())
            - Expr::one();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(
            is_zero(&e, &d, &ZeroConfig::default(), &mut rng)
                .unwrap()
                .is_zero
        );
        assert!(check("exp(ln(x)) - x", &d).unwrap().is_zero);
    }

    #[test]
    fn nonzero_has_witness() {
        let ev = check("u_t - u_x", &Domain::new()).unwrap();
        assert!(!ev.is_zero);
        let w = ev.worst.unwrap();
        assert_eq!(w.point.len(), 2);
        assert!(w.value.abs() > 1e-6);
    }

    #[test]
    fn all_singular_is_inconclusive() {
        let d = Domain::new().with("x", VarDomain::new(-2.0, -1.0));
        assert!(matches!(
            check("ln(x)", &d),
            Err(ZeroError::Inconclusive { .. })
        ));
    }

    #[test]
    fn parameters_are_resampled() {
        let ev = check("ln(x^mu) - mu*ln(x)", &Domain::new()).unwrap();
        assert!(ev.is_zero);
        assert_eq!(ev.points, 5 * 200);
    }
}

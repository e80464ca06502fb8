//! Sampling domains for variables, parameters and jet coordinates.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::eval::Tape;
use crate::expr::Expr;
use crate::symbol::{Symbol, SymbolKind};

/// Open interval with isolated excluded points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarDomain {
    pub lo: f64,
    pub hi: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub exclude: Vec<f64>,
}

impl VarDomain {
    pub fn new(lo: f64, hi: f64) -> VarDomain {
        assert!(lo < hi, "empty interval ({lo}, {hi})");
        VarDomain {
            lo,
            hi,
            exclude: Vec::new(),
        }
    }

    pub fn excluding(mut self, points: &[f64]) -> VarDomain {
        self.exclude.extend_from_slice(points);
        self
    }

    fn accepts(&self, v: f64) -> bool {
        let margin = 1e-2 * (self.hi - self.lo);
        self.exclude.iter().all(|p| (v - p).abs() > margin)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        loop {
            let v = self.lo + (self.hi - self.lo) * rng.gen::<f64>();
            if v > self.lo && v < self.hi && self.accepts(v) {
                return v;
            }
        }
    }
}

/// Sampling region: one interval per symbol plus strict inequalities
/// `c > 0` that every sample must satisfy.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    #[serde(default)]
    pub vars: BTreeMap<Symbol, VarDomain>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub positive: Vec<Expr>,
}

/// Fallback interval for a symbol not listed in a domain.
pub fn default_interval(s: &Symbol) -> Option<VarDomain> {
    Some(match s.kind() {
        SymbolKind::Independent if s.as_str() == "t" => VarDomain::new(0.2, 1.2),
        SymbolKind::Independent => VarDomain::new(1.5, 3.0),
        SymbolKind::Dependent if s.as_str() == "u" => VarDomain::new(0.5, 2.0),
        SymbolKind::Dependent | SymbolKind::Auxiliary | SymbolKind::Jet { .. } => {
            VarDomain::new(-1.0, 1.0)
        }
        SymbolKind::Parameter => VarDomain::new(0.3, 1.7),
        SymbolKind::Constant => return None,
    })
}

impl Domain {
    pub fn new() -> Domain {
        Domain::default()
    }

    pub fn with(mut self, name: &str, d: VarDomain) -> Domain {
        self.vars.insert(Symbol::new(name), d);
        self
    }

    pub fn require_positive(mut self, e: Expr) -> Domain {
        self.positive.push(e);
        self
    }

    /// Interval for `s`, falling back to [`default_interval`].
    pub fn interval(&self, s: &Symbol) -> Option<VarDomain> {
        self.vars.get(s).cloned().or_else(|| default_interval(s))
    }

    /// Entries of `other` override those of `self`.
    pub fn merged(&self, other: &Domain) -> Domain {
        let mut d = self.clone();
        for (k, v) in &other.vars {
            d.vars.insert(k.clone(), v.clone());
        }
        d.positive.extend(other.positive.iter().cloned());
        d
    }
}

/// Draws points for a fixed, ordered symbol list. Parameters are drawn
/// separately from the remaining coordinates so that several points can
/// share one parameter sample.
pub struct Sampler {
    pub syms: Vec<Symbol>,
    intervals: Vec<VarDomain>,
    is_param: Vec<bool>,
    /// Positivity constraints that mention only parameters.
    param_checks: Vec<Tape>,
    checks: Vec<Tape>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SampleError {
    Uncovered(Symbol),
    Constraint(crate::eval::EvalError),
    /// Rejection sampling failed to find an admissible point.
    Exhausted,
}

const MAX_REJECTIONS: usize = 2000;

impl Sampler {
    pub fn new(d: &Domain, syms: &[Symbol]) -> Result<Sampler, SampleError> {
        let mut intervals = Vec::with_capacity(syms.len());
        for s in syms {
            intervals.push(
                d.interval(s)
                    .ok_or_else(|| SampleError::Uncovered(s.clone()))?,
            );
        }
        let is_param: Vec<bool> = syms.iter().map(Symbol::is_parameter).collect();
        let mut checks = Vec::new();
        let mut param_checks = Vec::new();
        for c in &d.positive {
            let fs = c.free_symbols();
            if !fs.iter().all(|s| syms.contains(s) || s.as_str() == "pi") {
                // constraint about symbols this sampler does not draw
                continue;
            }
            let tape = Tape::compile(c, syms).map_err(SampleError::Constraint)?;
            if fs.iter().all(|s| s.is_parameter() || s.as_str() == "pi") {
                param_checks.push(tape);
            } else {
                checks.push(tape);
            }
        }
        Ok(Sampler {
            syms: syms.to_vec(),
            intervals,
            is_param,
            param_checks,
            checks,
        })
    }

    pub fn has_parameters(&self) -> bool {
        self.is_param.iter().any(|&p| p)
    }

    fn ok(checks: &[Tape], point: &[f64]) -> bool {
        checks
            .iter()
            .all(|t| matches!(t.eval(point), Ok(v) if v > 0.0))
    }

    /// Fills the parameter slots of `point`.
    pub fn draw_parameters<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        point: &mut Vec<f64>,
    ) -> Result<(), SampleError> {
        point.resize(self.syms.len(), 0.0);
        for _ in 0..MAX_REJECTIONS {
            for (i, d) in self.intervals.iter().enumerate() {
                if self.is_param[i] {
                    point[i] = d.sample(rng);
                } else {
                    point[i] = 0.5 * (d.lo + d.hi);
                }
            }
            if Sampler::ok(&self.param_checks, point) {
                return Ok(());
            }
        }
        Err(SampleError::Exhausted)
    }

    /// Fills the non-parameter slots of `point`, keeping its parameters.
    pub fn draw_point<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        point: &mut [f64],
    ) -> Result<(), SampleError> {
        for _ in 0..MAX_REJECTIONS {
            for (i, d) in self.intervals.iter().enumerate() {
                if !self.is_param[i] {
                    point[i] = d.sample(rng);
                }
            }
            if Sampler::ok(&self.checks, point) {
                return Ok(());
            }
        }
        Err(SampleError::Exhausted)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn respects_exclusions_and_constraints() {
        let d = Domain::new()
            .with("mu", VarDomain::new(-3.0, 3.0).excluding(&[-2.0, 0.0]))
            .with("x", VarDomain::new(0.1, 2.0))
            .require_positive(parse("1 - x^2").unwrap());
        let syms = [Symbol::new("mu"), Symbol::new("x")];
        let s = Sampler::new(&d, &syms).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut p = Vec::new();
        for _ in 0..200 {
            s.draw_parameters(&mut rng, &mut p).unwrap();
            s.draw_point(&mut rng, &mut p).unwrap();
            assert!((p[0] + 2.0).abs() > 0.05 && p[0].abs() > 0.05);
            assert!(p[1] < 1.0);
        }
    }

    #[test]
    fn impossible_constraint_exhausts() {
        let d = Domain::new().require_positive(parse("-1 - x^2").unwrap());
        let s = Sampler::new(&d, &[Symbol::new("x")]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut p = alloc::vec![0.0];
        assert_eq!(s.draw_point(&mut rng, &mut p), Err(SampleError::Exhausted));
    }
}

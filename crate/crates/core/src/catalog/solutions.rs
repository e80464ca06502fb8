use alloc::string::String;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::diff::differentiate;
use crate::domain::Sampler;
use crate::eval::Tape;
use crate::expr::Expr;
use crate::symbol::Symbol;
use crate::zero::Witness;

use super::{CatalogError, ExactSolutionEntry};

/// Audited outcome of an exact solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolutionVerdict {
    Pass,
    Fail,
    Inconclusive,
    OutOfScope,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionAudit {
    pub id: String,
    pub verdict: SolutionVerdict,
    /// Largest `|residual| / (1 + scale)` over the sampled points.
    pub worst_residual: f64,
    pub points: usize,
    pub witness: Option<Witness>,
    /// Largest disagreement between the symbolic residual and a central
    /// difference evaluation, relative to the size of the terms.
    pub fd_discrepancy: f64,
    pub fd_agreement: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditConfig {
    pub trials: usize,
    pub param_samples: usize,
    pub pass: f64,
    pub fail: f64,
    pub fd_points: usize,
    pub fd_tol: f64,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            trials: 200,
            param_samples: 5,
            pass: 1e-10,
            fail: 1e-6,
            fd_points: 20,
            fd_tol: 1e-4,
        }
    }
}

/// `u_t - (u^(-2)*u_x)_x` with the derivatives of `u(t, x)` substituted.
pub fn fujita_storm_residual(u: &Expr) -> Expr {
    let t = Symbol::new("t");
    let x = Symbol::new("x");
    let ux = differentiate(u, &x);
    let flux = Expr::powi(u.clone(), -2) * ux;
    differentiate(u, &t) - differentiate(&flux, &x)
}

fn fd_residual(tape: &Tape, point: &[f64], it: usize, ix: usize, step: f64) -> Option<(f64, f64)> {
    let mut p = point.to_vec();
    let mut at = |dt: f64, dx: f64| -> Option<f64> {
        p[it] = point[it] + dt;
        p[ix] = point[ix] + dx;
        tape.eval(&p).ok().filter(|v| v.is_finite())
    };
    let h = step * (1.0 + point[ix].abs());
    let k = step * (1.0 + point[it].abs());
    let u0 = at(0.0, 0.0)?;
    let ut = (8.0 * (at(k, 0.0)? - at(-k, 0.0)?) - (at(2.0 * k, 0.0)? - at(-2.0 * k, 0.0)?))
        / (12.0 * k);
    let up = at(0.0, h)?;
    let um = at(0.0, -h)?;
    let up2 = at(0.0, 2.0 * h)?;
    let um2 = at(0.0, -2.0 * h)?;
    let ux = (8.0 * (up - um) - (up2 - um2)) / (12.0 * h);
    let uxx = (16.0 * (up + um) - (up2 + um2) - 30.0 * u0) / (12.0 * h * h);
    let a = 1.0 / (u0 * u0);
    let terms = [ut, 2.0 * a / u0 * ux * ux, a * uxx];
    let r = terms[0] + terms[1] - terms[2];
    let scale = terms.iter().map(|v| v.abs()).sum::<f64>();
    Some((r, scale))
}

/// Audits an explicit solution of the Fujita–Storm equation: the residual
/// is evaluated on the entry's domain and cross-checked against finite
/// differences of `u` itself.
pub fn audit_solution(
    entry: &ExactSolutionEntry,
    cfg: &AuditConfig,
    seed: u64,
) -> Result<SolutionAudit, CatalogError> {
    if entry.equation != "fujita-storm" {
        return Err(CatalogError::UnknownEquation(entry.equation.clone()));
    }
    let mut audit = SolutionAudit {
        id: entry.id.clone(),
        verdict: SolutionVerdict::OutOfScope,
        worst_residual: 0.0,
        points: 0,
        witness: None,
        fd_discrepancy: 0.0,
        fd_agreement: true,
    };
    let u = match &entry.u {
        Some(u) => u,
        None => return Ok(audit),
    };
    let res = fujita_storm_residual(u);
    let mut syms: Vec<Symbol> = alloc::vec![Symbol::new("t"), Symbol::new("x")];
    for s in u.free_symbols() {
        if !syms.contains(&s) && s.as_str() != "pi" {
            syms.push(s);
        }
    }
    let zero_err = |e| CatalogError::Zero(crate::zero::ZeroError::Eval(e));
    let sample_err = |e| CatalogError::Zero(crate::zero::ZeroError::Sample(e));
    let res_tape = Tape::compile(&res, &syms).map_err(zero_err)?;
    let u_tape = Tape::compile(u, &syms).map_err(zero_err)?;
    let sampler = Sampler::new(&entry.sampling_domain(), &syms).map_err(sample_err)?;
    let rounds = if sampler.has_parameters() {
        cfg.param_samples.max(1)
    } else {
        1
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut point = Vec::new();
    let mut worst = -1.0;
    for _ in 0..rounds {
        sampler
            .draw_parameters(&mut rng, &mut point)
            .map_err(sample_err)?;
        let mut good = 0;
        let mut attempts = 0;
        while good < cfg.trials && attempts < 10 * cfg.trials {
            attempts += 1;
            sampler
                .draw_point(&mut rng, &mut point)
                .map_err(sample_err)?;
            let s = match res_tape.eval_scaled(&point) {
                Ok(s) if s.value.is_finite() => s,
                _ => continue,
            };
            good += 1;
            let ratio = s.value.abs() / (1.0 + s.mag);
            if ratio > worst {
                worst = ratio;
                audit.witness = Some(Witness {
                    point: syms.iter().cloned().zip(point.iter().copied()).collect(),
                    value: s.value,
                    scale: s.mag,
                });
            }
            if good <= cfg.fd_points {
                // the change under step halving bounds the truncation error
                if let (Some((coarse, _)), Some((r, scale))) = (
                    fd_residual(&u_tape, &point, 0, 1, 1e-3),
                    fd_residual(&u_tape, &point, 0, 1, 5e-4),
                ) {
                    let d = ((r - s.value).abs() - (coarse - r).abs()).max(0.0) / (1.0 + scale);
                    audit.fd_discrepancy = audit.fd_discrepancy.max(d);
                }
            }
        }
        audit.points += good;
    }
    if audit.points == 0 {
        audit.verdict = SolutionVerdict::Inconclusive;
        return Ok(audit);
    }
    audit.worst_residual = worst;
    audit.fd_agreement = audit.fd_discrepancy <= cfg.fd_tol;
    audit.verdict = if worst <= cfg.pass {
        SolutionVerdict::Pass
    } else if worst > cfg.fail {
        SolutionVerdict::Fail
    } else {
        SolutionVerdict::Inconclusive
    };
    if !audit.fd_agreement {
        audit.verdict = SolutionVerdict::Inconclusive;
    }
    Ok(audit)
}

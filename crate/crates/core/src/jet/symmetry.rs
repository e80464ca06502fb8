use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::diff::differentiate;
use crate::domain::{Domain, Sampler};
use crate::eval::{EvalError, Scaled, Tape};
use crate::expr::Expr;
use crate::subst::substitute;
use crate::symbol::Symbol;

use super::field::VectorField;
use super::prolong::Prolongation;
use super::space::jet_symbols;
use super::system::DifferentialSystem;
use super::JetError;

/// Prolonged field applied to each equation, before restriction.
pub fn raw_residuals(s: &DifferentialSystem, v: &VectorField) -> Result<Vec<Expr>, JetError> {
    if !v.is_point_field() {
        return Err(JetError::NotPointField);
    }
    let mut p = Prolongation::new(v);
    s.equations.iter().map(|e| p.apply(e)).collect()
}

/// Residuals of the invariance criterion on the solution manifold of `s`.
pub fn invariance_residuals(
    s: &DifferentialSystem,
    v: &VectorField,
) -> Result<Vec<Expr>, JetError> {
    let raw = raw_residuals(s, v)?;
    let needed: BTreeSet<Symbol> = raw.iter().flat_map(jet_symbols).collect();
    let entries = s.resolver_for(&needed)?;
    let b = DifferentialSystem::composed(&entries);
    Ok(raw.iter().map(|r| substitute(r, &b)).collect())
}

/// Evaluates expressions at random points of a solution manifold: free
/// coordinates and parameters are sampled, resolved coordinates computed
/// in resolver order.
pub struct ManifoldEvaluator {
    vars: Vec<Symbol>,
    free: usize,
    entries: Vec<(usize, Tape)>,
    targets: Vec<Tape>,
    sampler: Sampler,
}

impl ManifoldEvaluator {
    pub fn new(
        s: &DifferentialSystem,
        exprs: &[Expr],
        d: &Domain,
        quadrature: bool,
    ) -> Result<Self, JetError> {
        let needed: BTreeSet<Symbol> = exprs.iter().flat_map(jet_symbols).collect();
        let all_entries = s.resolver_for(&needed)?;
        // keep only the entries that are actually reachable
        let mut wanted: BTreeSet<Symbol> = needed.clone();
        let mut entries: Vec<(Symbol, Expr)> = Vec::new();
        for (sym, e) in all_entries.iter().rev() {
            if wanted.contains(sym) {
                wanted.extend(jet_symbols(e));
                entries.push((sym.clone(), e.clone()));
            }
        }
        entries.reverse();
        let resolved: BTreeSet<Symbol> = entries.iter().map(|(s, _)| s.clone()).collect();
        let mut free: BTreeSet<Symbol> = BTreeSet::new();
        for e in exprs.iter().chain(entries.iter().map(|(_, e)| e)) {
            for sym in e.free_symbols() {
                if sym.as_str() != "pi" && !resolved.contains(&sym) {
                    free.insert(sym);
                }
            }
        }
        let mut vars: Vec<Symbol> = free.into_iter().collect();
        let n_free = vars.len();
        vars.extend(entries.iter().map(|(s, _)| s.clone()));
        let compile = |e: &Expr| {
            if quadrature {
                Tape::compile_with_quadrature(e, &vars)
            } else {
                Tape::compile(e, &vars)
            }
        };
        let mut tapes = Vec::new();
        for (i, (_, e)) in entries.iter().enumerate() {
            tapes.push((n_free + i, compile(e).map_err(JetError::Eval)?));
        }
        let targets = exprs
            .iter()
            .map(compile)
            .collect::<Result<Vec<_>, _>>()
            .map_err(JetError::Eval)?;
        let sampler = Sampler::new(d, &vars[..n_free]).map_err(JetError::Sample)?;
        Ok(ManifoldEvaluator {
            vars,
            free: n_free,
            entries: tapes,
            targets,
            sampler,
        })
    }

    pub fn sampler(&self) -> &Sampler {
        &self.sampler
    }

    pub fn free_symbols(&self) -> &[Symbol] {
        &self.vars[..self.free]
    }

    /// Evaluates every target at the free point `point`.
    pub fn eval(&self, point: &[f64], out: &mut Vec<Scaled>) -> Result<(), EvalError> {
        let mut values: Vec<f64> = point.to_vec();
        values.resize(self.vars.len(), 0.0);
        let mut mags: Vec<f64> = values.iter().map(|v| v.abs()).collect();
        let mut buf = Vec::new();
        for (slot, tape) in &self.entries {
            let s = tape.eval_with_mags(&values, &mags, &mut buf)?;
            values[*slot] = s.value;
            mags[*slot] = s.mag;
        }
        out.clear();
        for t in &self.targets {
            out.push(t.eval_with_mags(&values, &mags, &mut buf)?);
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Symmetry,
    NotSymmetry,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryConfig {
    pub trials: usize,
    pub param_samples: usize,
    /// `|r| <= pass_tol*(1+mag)` everywhere means symmetry.
    pub pass_tol: f64,
    /// Any `|r| > fail_tol*(1+mag)` means not a symmetry.
    pub fail_tol: f64,
    /// Evaluate antiderivatives without closed form by quadrature.
    pub quadrature: bool,
}

impl Default for SymmetryConfig {
    fn default() -> Self {
        SymmetryConfig {
            trials: 200,
            param_samples: 5,
            pass_tol: 1e-8,
            fail_tol: 1e-4,
            quadrature: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub verdict: Verdict,
    /// Largest `|r| / (1 + mag)` over all points and residuals.
    pub worst_residual: f64,
    pub worst_absolute: f64,
    pub witness: Vec<(Symbol, f64)>,
    /// Index of the equation attaining the worst residual.
    pub worst_equation: usize,
    pub points: usize,
    pub singular: usize,
    pub param_samples: usize,
    pub seed: u64,
}

/// Samples `exprs` on the manifold of `s` and classifies the worst scaled
/// value against the thresholds of `cfg`.
pub fn check_vanishing(
    s: &DifferentialSystem,
    exprs: &[Expr],
    d: &Domain,
    cfg: &SymmetryConfig,
    seed: u64,
) -> Result<SymmetryReport, JetError> {
    let ev = ManifoldEvaluator::new(s, exprs, d, cfg.quadrature)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rounds = if ev.sampler().has_parameters() {
        cfg.param_samples.max(1)
    } else {
        1
    };
    let trials = cfg.trials.max(1);
    let mut report = SymmetryReport {
        verdict: Verdict::Symmetry,
        worst_residual: 0.0,
        worst_absolute: 0.0,
        witness: Vec::new(),
        worst_equation: 0,
        points: 0,
        singular: 0,
        param_samples: rounds,
        seed,
    };
    let mut point = Vec::new();
    let mut out = Vec::new();
    let mut last_err = String::new();
    let mut seen = false;
    for _ in 0..rounds {
        ev.sampler()
            .draw_parameters(&mut rng, &mut point)
            .map_err(JetError::Sample)?;
        let mut good = 0;
        let mut attempts = 0;
        while good < trials && attempts < 10 * trials {
            attempts += 1;
            ev.sampler()
                .draw_point(&mut rng, &mut point)
                .map_err(JetError::Sample)?;
            match ev.eval(&point, &mut out) {
                Ok(()) => {
                    good += 1;
                    for (i, r) in out.iter().enumerate() {
                        let ratio = r.value.abs() / (1.0 + r.mag);
                        if ratio > report.worst_residual || !seen {
                            seen = true;
                            report.worst_residual = ratio;
                            report.worst_absolute = r.value.abs();
                            report.worst_equation = i;
                            report.witness = ev
                                .free_symbols()
                                .iter()
                                .cloned()
                                .zip(point.iter().copied())
                                .collect();
                        }
                    }
                }
                Err(EvalError::Domain(m)) => {
                    report.singular += 1;
                    last_err = m;
                }
                Err(e) => return Err(JetError::Eval(e)),
            }
        }
        report.points += good;
    }
    let _ = last_err;
    report.verdict = if report.points == 0 {
        Verdict::Inconclusive
    } else if report.worst_residual > cfg.fail_tol {
        Verdict::NotSymmetry
    } else if report.worst_residual <= cfg.pass_tol {
        Verdict::Symmetry
    } else {
        Verdict::Inconclusive
    };
    Ok(report)
}

/// Checks the infinitesimal invariance criterion for `v` on `s`.
pub fn check_symmetry(
    s: &DifferentialSystem,
    v: &VectorField,
    d: &Domain,
    cfg: &SymmetryConfig,
    seed: u64,
) -> Result<SymmetryReport, JetError> {
    let raw = raw_residuals(s, v)?;
    check_vanishing(s, &raw, d, cfg, seed)
}

/// Checks that every equation and cross-derivative condition of `s`
/// vanishes after resolution.
pub fn validate_resolver(
    s: &DifferentialSystem,
    d: &Domain,
    cfg: &SymmetryConfig,
    seed: u64,
) -> Result<SymmetryReport, JetError> {
    let conds: Vec<Expr> = s
        .consistency_conditions()?
        .into_iter()
        .map(|(_, e)| e)
        .collect();
    check_vanishing(s, &conds, d, cfg, seed)
}

/// Extends a field `tau ∂_t + xi ∂_x + theta ∂_v` over `(t, x, v)` by the
/// `∂_u` coefficient forced on the simplest potential system `s`.
pub fn lift_truncated_operator(
    qhat: &VectorField,
    s: &DifferentialSystem,
) -> Result<VectorField, JetError> {
    let ch = s.characteristic.as_ref().ok_or(JetError::NotSimplest)?;
    if !qhat.eta().is_zero_literal() {
        return Err(JetError::HasUComponent);
    }
    if ch.alpha.is_zero_literal() {
        return Err(JetError::VanishingCharacteristic);
    }
    let (t, x, v) = (Symbol::new("t"), Symbol::new("x"), Symbol::new("v"));
    let a = &ch.alpha;
    let u = Expr::sym("u");
    let xi_v = differentiate(qhat.xi(), &v);
    let xi_x = differentiate(qhat.xi(), &x);
    let th_v = differentiate(qhat.theta(), &v);
    let th_x = differentiate(qhat.theta(), &x);
    let a_t = differentiate(a, &t);
    let a_x = differentiate(a, &x);
    let quad = -(&(&xi_v * &Expr::powi(a.clone(), 2)) * &Expr::powi(u.clone(), 2));
    let lin = -(&Expr::add(alloc::vec![
        &a_t * qhat.tau(),
        a * &xi_x,
        &a_x * qhat.xi(),
        -(a * &th_v),
    ]) * &u);
    let eta = Expr::add(alloc::vec![quad, lin, th_x]) / a.clone();
    let mut out = qhat.clone();
    out.coeffs[2] = eta;
    Ok(out)
}

/// Numeric rank of a list of vector fields, from their coefficient
/// values at random points.
pub fn numeric_rank(
    fields: &[VectorField],
    d: &Domain,
    points: usize,
    seed: u64,
) -> Result<usize, JetError> {
    if fields.is_empty() {
        return Ok(0);
    }
    let syms: Vec<Symbol> = fields
        .iter()
        .flat_map(|f| f.coeffs.iter().flat_map(|c| c.free_symbols()))
        .filter(|s| s.as_str() != "pi")
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let tapes: Vec<Vec<Tape>> = fields
        .iter()
        .map(|f| {
            f.coeffs
                .iter()
                .map(|c| Tape::compile(c, &syms))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()
        .map_err(JetError::Eval)?;
    let sampler = Sampler::new(d, &syms).map_err(JetError::Sample)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<Vec<f64>> = alloc::vec![Vec::new(); fields.len()];
    let mut point = Vec::new();
    sampler
        .draw_parameters(&mut rng, &mut point)
        .map_err(JetError::Sample)?;
    let mut taken = 0;
    let mut attempts = 0;
    while taken < points && attempts < 20 * points {
        attempts += 1;
        sampler
            .draw_point(&mut rng, &mut point)
            .map_err(JetError::Sample)?;
        let vals: Result<Vec<Vec<f64>>, EvalError> = tapes
            .iter()
            .map(|ts| ts.iter().map(|t| t.eval(&point)).collect())
            .collect();
        if let Ok(vals) = vals {
            for (row, v) in rows.iter_mut().zip(vals) {
                row.extend(v);
            }
            taken += 1;
        }
    }
    Ok(matrix_rank(rows, 1e-9))
}

/// Rank by Gaussian elimination with partial pivoting; entries below
/// `rel_tol` times the largest entry count as zero.
pub fn matrix_rank(mut m: Vec<Vec<f64>>, rel_tol: f64) -> usize {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let scale = m.iter().flatten().fold(0.0f64, |a, b| a.max(b.abs()));
    if scale == 0.0 {
        return 0;
    }
    let tol = rel_tol * scale;
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let (piv, val) = (rank..nrows)
            .map(|r| (r, m[r][col].abs()))
            .fold((rank, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if val <= tol {
            continue;
        }
        m.swap(rank, piv);
        for r in rank + 1..nrows {
            let f = m[r][col] / m[rank][col];
            if f != 0.0 {
                for c in col..ncols {
                    m[r][c] -= f * m[rank][c];
                }
            }
        }
        rank += 1;
    }
    rank
}

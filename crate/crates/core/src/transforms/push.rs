//! Pushforward of equations, solutions and vector fields.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::catalog::ArbitraryElements;
use crate::diff::differentiate;
use crate::domain::{Domain, Sampler, VarDomain};
use crate::eval::Tape;
use crate::expr::Expr;
use crate::jet::{
    jet_symbols, matrix_rank, wide_space, DifferentialSystem, Indep, VectorField, BASE,
};
use crate::subst::{substitute, ExprBindings};
use crate::symbol::Symbol;
use crate::zero::{is_zero, ZeroConfig};

use super::{apply_to_elements, compose_map, invert, EquivalenceTransformation, TransformError};

const SEED: u64 = 0x9a55;

fn sym(name: &str) -> Symbol {
    Symbol::new(name)
}

fn base_index(b: char) -> usize {
    BASE.iter()
        .position(|n| n.starts_with(b))
        .expect("base variable")
}

/// Rewrites equations in the old variables as equations in the new ones,
/// expressing old derivatives through new total derivatives by the chain
/// rule of the inverse map.
pub fn transform_equations(
    t: &EquivalenceTransformation,
    eqs: &[Expr],
) -> Result<Vec<Expr>, TransformError> {
    let wide = wide_space();
    let psi = &t.inverse;
    let n11 = wide.total_derivative(&psi[0], Indep::T)?;
    let n12 = wide.total_derivative(&psi[1], Indep::T)?;
    let n21 = wide.total_derivative(&psi[0], Indep::X)?;
    let n22 = wide.total_derivative(&psi[1], Indep::X)?;
    let det = n11.clone() * n22.clone() - n12.clone() * n21.clone();
    let mut memo: BTreeMap<(char, u8, u8), Expr> = BTreeMap::new();
    let mut old_jet = |b: char, nx: u8, nt: u8| -> Result<Expr, TransformError> {
        let mut chain = Vec::new();
        let (mut x, mut tt) = (nx, nt);
        while x + tt > 0 {
            chain.push((x, tt));
            if x > 0 {
                x -= 1;
            } else {
                tt -= 1;
            }
        }
        let mut cur = psi[base_index(b)].clone();
        let (mut cx, mut ct) = (0u8, 0u8);
        for &(x, tt) in chain.iter().rev() {
            if let Some(e) = memo.get(&(b, x, tt)) {
                cur = e.clone();
                cx = x;
                ct = tt;
                continue;
            }
            let ft = wide.total_derivative(&cur, Indep::T)?;
            let fx = wide.total_derivative(&cur, Indep::X)?;
            cur = if x > cx {
                (n11.clone() * fx - n21.clone() * ft) / det.clone()
            } else {
                (n22.clone() * ft - n12.clone() * fx) / det.clone()
            };
            memo.insert((b, x, tt), cur.clone());
            cx = x;
            ct = tt;
        }
        let _ = ct;
        Ok(cur)
    };
    let mut out = Vec::with_capacity(eqs.len());
    for e in eqs {
        let mut b: ExprBindings = BASE
            .iter()
            .zip(psi.iter())
            .map(|(n, m)| (sym(n), m.clone()))
            .collect();
        for s in jet_symbols(e) {
            let (base, nx, nt) = s.jet_parts().expect("jet coordinate");
            if nx + nt > 0 {
                b.insert(s.clone(), old_jet(base, nx, nt)?);
            }
        }
        out.push(substitute(e, &b));
    }
    Ok(out)
}

/// The image of `V` under `t`: coefficient `V(Φ^b)` rewritten in the new
/// variables.
pub fn push_forward_vectorfield(
    t: &EquivalenceTransformation,
    v: &VectorField,
) -> Result<VectorField, TransformError> {
    check_jacobian(t)?;
    let mut out = VectorField::zero();
    for i in 0..5 {
        out.coeffs[i] = compose_map(&v.apply(&t.forward[i]), &t.inverse);
    }
    Ok(out)
}

fn check_jacobian(t: &EquivalenceTransformation) -> Result<(), TransformError> {
    let mut syms: Vec<Symbol> = BASE.iter().map(|n| sym(n)).collect();
    for e in &t.forward {
        for s in e.free_symbols() {
            if !syms.contains(&s) && s.as_str() != "pi" {
                syms.push(s);
            }
        }
    }
    let mut tapes = Vec::new();
    for e in &t.forward {
        for s in &syms[..5] {
            tapes.push(
                Tape::compile(&differentiate(e, s), &syms)
                    .map_err(|e| TransformError::Jet(crate::jet::JetError::Eval(e)))?,
            );
        }
    }
    let sampler = Sampler::new(&t.domain, &syms)
        .map_err(|e| TransformError::Jet(crate::jet::JetError::Sample(e)))?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut point = Vec::new();
    sampler
        .draw_parameters(&mut rng, &mut point)
        .map_err(|e| TransformError::Jet(crate::jet::JetError::Sample(e)))?;
    for _ in 0..20 {
        sampler
            .draw_point(&mut rng, &mut point)
            .map_err(|e| TransformError::Jet(crate::jet::JetError::Sample(e)))?;
        let mut rows = alloc::vec![Vec::with_capacity(5); 5];
        for (k, tape) in tapes.iter().enumerate() {
            let v = tape
                .eval(&point)
                .map_err(|_| TransformError::SingularJacobian)?;
            if !v.is_finite() {
                return Err(TransformError::SingularJacobian);
            }
            rows[k / 5].push(v);
        }
        if matrix_rank(rows, 1e-10) < 5 {
            return Err(TransformError::SingularJacobian);
        }
    }
    Ok(())
}

/// `f u_t - (g A u_x)_x - h B u_x` written in jet coordinates.
pub fn operator(el: &ArbitraryElements) -> Expr {
    let (x, u) = (sym("x"), sym("u"));
    let (ut, ux, uxx) = (Expr::sym("u_t"), Expr::sym("u_x"), Expr::sym("u_xx"));
    let ga = el.g.clone() * el.a.clone();
    let flux_x = differentiate(&ga, &x) * ux.clone()
        + differentiate(&ga, &u) * Expr::powi(ux.clone(), 2)
        + ga * uxx;
    el.f.clone() * ut - flux_x - el.h.clone() * el.b.clone() * ux
}

/// Both sides of the gauge identity `L[el~] = ε1 φ L[el]` for a
/// transformation that fixes `t, x, u`.
pub fn gauge_operator_residual(
    t: &EquivalenceTransformation,
    el: &ArbitraryElements,
) -> Result<(Expr, Expr), TransformError> {
    for (i, n) in BASE.iter().enumerate().take(3) {
        if t.forward[i] != Expr::sym(n) {
            return Err(TransformError::Precondition(alloc::format!(
                "{} must not transform",
                n
            )));
        }
    }
    let m = t
        .elements
        .as_ref()
        .ok_or(TransformError::NotAnEquivalence)?;
    let new = apply_to_elements(t, el)?;
    Ok((operator(&new), m.f.clone() * operator(el)))
}

/// A solution `u(t, x)` with an optional potential `v(t, x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub u: Expr,
    pub v: Option<Expr>,
    pub domain: Domain,
}

impl Solution {
    pub fn new(u: Expr, v: Option<Expr>, domain: Domain) -> Solution {
        Solution { u, v, domain }
    }

    fn component(&self, b: char) -> Result<&Expr, TransformError> {
        match b {
            'u' => Ok(&self.u),
            'v' => self.v.as_ref().ok_or_else(|| {
                TransformError::Precondition(alloc::string::String::from(
                    "solution has no potential v",
                ))
            }),
            _ => Err(TransformError::Precondition(alloc::format!(
                "solution has no component {}",
                b
            ))),
        }
    }
}

/// Equations with the solution and its derivatives substituted.
pub fn solution_residuals(eqs: &[Expr], s: &Solution) -> Result<Vec<Expr>, TransformError> {
    let (x, t) = (sym("x"), sym("t"));
    let mut out = Vec::with_capacity(eqs.len());
    for e in eqs {
        let mut b = ExprBindings::new();
        for c in jet_symbols(e) {
            let (base, nx, nt) = c.jet_parts().expect("jet coordinate");
            let mut d = s.component(base)?.clone();
            for _ in 0..nx {
                d = differentiate(&d, &x);
            }
            for _ in 0..nt {
                d = differentiate(&d, &t);
            }
            b.insert(c, d);
        }
        out.push(substitute(e, &b));
    }
    Ok(out)
}

fn check_solution(eqs: &[Expr], s: &Solution, stage: &'static str) -> Result<(), TransformError> {
    let cfg = ZeroConfig::default().with_trials(100);
    for (i, r) in solution_residuals(eqs, s)?.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let ev = is_zero(r, &s.domain, &cfg, &mut rng)?;
        if !ev.is_zero {
            let residual = ev.worst.map(|w| w.value).unwrap_or(f64::NAN);
            return Err(TransformError::NotASolution {
                equation: i,
                stage,
                residual,
            });
        }
    }
    Ok(())
}

/// Maps a solution of `sys` to a solution of the transformed system. The
/// x-component of the map, evaluated on the solution, is inverted in
/// closed form; the result is checked against the transformed equations.
pub fn push_forward_solution(
    t: &EquivalenceTransformation,
    s: &Solution,
    sys: &DifferentialSystem,
) -> Result<Solution, TransformError> {
    check_solution(&sys.equations, s, "input")?;
    let mut on_s = ExprBindings::new();
    on_s.insert(sym("u"), s.u.clone());
    if let Some(v) = &s.v {
        on_s.insert(sym("v"), v.clone());
    }
    let lift = |e: &Expr| -> Result<Expr, TransformError> {
        let r = substitute(e, &on_s);
        for b in ["u", "v", "w"] {
            if r.depends_on(&sym(b)) {
                return Err(TransformError::Precondition(alloc::format!(
                    "solution has no component {}",
                    b
                )));
            }
        }
        Ok(r)
    };
    let (ts, xs, y) = (sym("t"), sym("x"), sym("y__"));
    let phi_t = lift(&t.forward[0])?;
    if phi_t.depends_on(&xs) {
        return Err(TransformError::Precondition(alloc::string::String::from(
            "t~ must not depend on x",
        )));
    }
    let phi_x = lift(&t.forward[1])?;
    let t_inv = if phi_t == Expr::sym("t") {
        Expr::sym("t")
    } else {
        let g = invert(&phi_t, &ts, &y, &s.domain)
            .ok_or_else(|| TransformError::NoInverse(phi_t.clone()))?;
        crate::subst::substitute_one(&g, &y, &Expr::sym("t"))
    };
    let x_inv = if phi_x == Expr::sym("x") {
        Expr::sym("x")
    } else {
        let g = invert(&phi_x, &xs, &y, &s.domain)
            .ok_or_else(|| TransformError::NoInverse(phi_x.clone()))?;
        let mut b = ExprBindings::new();
        b.insert(y.clone(), Expr::sym("x"));
        b.insert(ts.clone(), t_inv.clone());
        substitute(&g, &b)
    };
    let mut to_new = ExprBindings::new();
    to_new.insert(ts.clone(), t_inv);
    to_new.insert(xs.clone(), x_inv);
    let u = substitute(&lift(&t.forward[2])?, &to_new);
    let v = if s.v.is_none() && t.forward[3] == Expr::sym("v") {
        None
    } else {
        Some(substitute(&lift(&t.forward[3])?, &to_new))
    };
    let domain = image_rectangle(&phi_t, &phi_x, &s.domain)?;
    let out = Solution { u, v, domain };
    let eqs = transform_equations(t, &sys.equations)?;
    check_solution(&eqs, &out, "transformed")?;
    Ok(out)
}

/// A rectangle of `(t~, x~)` covered by the image of the domain, found by
/// sampling: the `t~` range is cut into slices and the `x~` interval common
/// to all slices is kept, shrunk slightly inward.
fn image_rectangle(phi_t: &Expr, phi_x: &Expr, d: &Domain) -> Result<Domain, TransformError> {
    let collapse = |m: &str| TransformError::DomainCollapse(alloc::string::String::from(m));
    let mut syms: Vec<Symbol> = alloc::vec![sym("t"), sym("x")];
    for e in [phi_t, phi_x] {
        for s in e.free_symbols() {
            if !syms.contains(&s) && s.as_str() != "pi" {
                syms.push(s);
            }
        }
    }
    let tt = Tape::compile(phi_t, &syms).map_err(|_| collapse("t~ cannot be evaluated"))?;
    let tx = Tape::compile(phi_x, &syms).map_err(|_| collapse("x~ cannot be evaluated"))?;
    let sampler = Sampler::new(d, &syms).map_err(|_| collapse("domain does not cover the map"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut point = Vec::new();
    let mut samples = Vec::new();
    let rounds = if sampler.has_parameters() { 5 } else { 1 };
    for _ in 0..rounds {
        sampler
            .draw_parameters(&mut rng, &mut point)
            .map_err(|_| collapse("no admissible parameters"))?;
        for _ in 0..400 {
            sampler
                .draw_point(&mut rng, &mut point)
                .map_err(|_| collapse("no admissible points"))?;
            if let (Ok(a), Ok(b)) = (tt.eval(&point), tx.eval(&point)) {
                if a.is_finite() && b.is_finite() {
                    samples.push((a, b));
                }
            }
        }
    }
    if samples.is_empty() {
        return Err(collapse("the map is singular on the whole domain"));
    }
    let t_lo = samples.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let t_hi = samples
        .iter()
        .map(|p| p.0)
        .fold(f64::NEG_INFINITY, f64::max);
    let slices = 8;
    let width = (t_hi - t_lo).max(f64::MIN_POSITIVE);
    let mut lo = alloc::vec![f64::INFINITY; slices];
    let mut hi = alloc::vec![f64::NEG_INFINITY; slices];
    for (a, b) in &samples {
        let k = (((a - t_lo) / width * slices as f64) as usize).min(slices - 1);
        lo[k] = lo[k].min(*b);
        hi[k] = hi[k].max(*b);
    }
    let x_lo = lo
        .iter()
        .copied()
        .filter(|v| v.is_finite())
        .fold(f64::NEG_INFINITY, f64::max);
    let x_hi = hi
        .iter()
        .copied()
        .filter(|v| v.is_finite())
        .fold(f64::INFINITY, f64::min);
    if x_lo >= x_hi {
        return Err(collapse("the image contains no rectangle"));
    }
    let shrink = |lo: f64, hi: f64| {
        let m = 0.05 * (hi - lo);
        VarDomain::new(lo + m, hi - m)
    };
    let mut out = Domain::new();
    for (k, v) in &d.vars {
        if !["t", "x"].contains(&k.as_str()) {
            out.vars.insert(k.clone(), v.clone());
        }
    }
    let t_dom = if t_hi > t_lo {
        shrink(t_lo, t_hi)
    } else {
        VarDomain::new(t_lo - 0.5, t_lo + 0.5)
    };
    out.vars.insert(sym("t"), t_dom);
    out.vars.insert(sym("x"), shrink(x_lo, x_hi));
    Ok(out)
}

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::expr::Expr;
use crate::subst::{substitute, ExprBindings};
use crate::symbol::Symbol;

use super::prolong::wide_space;
use super::space::{jet_symbols, Indep, JetSpace};
use super::JetError;

/// Data of a simplest potential system `v_x = alpha*u`,
/// `v_t = beta*A*u_x + gamma`.
#[derive(Clone, Debug, PartialEq)]
pub struct Characteristic {
    pub alpha: Expr,
    pub beta: Expr,
    pub gamma: Expr,
    pub a: Expr,
}

/// Equations `E_i = 0` with a triangular on-manifold resolver.
#[derive(Clone, Debug)]
pub struct DifferentialSystem {
    pub name: String,
    pub space: JetSpace,
    pub equations: Vec<Expr>,
    /// Ordered `(coordinate, replacement)` pairs; a replacement refers only
    /// to free coordinates and earlier entries.
    pub resolver: Vec<(Symbol, Expr)>,
    pub characteristic: Option<Characteristic>,
}

fn ux() -> Expr {
    Expr::sym("u_x")
}

fn sym(s: &str) -> Symbol {
    Symbol::new(s)
}

impl DifferentialSystem {
    pub fn custom(
        name: &str,
        space: JetSpace,
        equations: Vec<Expr>,
        resolver: Vec<(Symbol, Expr)>,
    ) -> Result<Self, JetError> {
        let s = DifferentialSystem {
            name: String::from(name),
            space,
            equations,
            resolver,
            characteristic: None,
        };
        s.check_shape()?;
        Ok(s)
    }

    fn check_shape(&self) -> Result<(), JetError> {
        let mut seen: BTreeSet<Symbol> = BTreeSet::new();
        for (c, e) in &self.resolver {
            for s in jet_symbols(e) {
                if s == *c || (!seen.contains(&s) && self.ancestor(&s, &seen).is_some()) {
                    return Err(JetError::NotTriangular(c.clone()));
                }
            }
            seen.insert(c.clone());
        }
        for e in &self.equations {
            for s in jet_symbols(e) {
                if !self.space.contains(&s) {
                    return Err(JetError::OrderOverflow(s));
                }
            }
        }
        Ok(())
    }

    /// Simplest potential system `v_x = alpha*u`, `v_t = beta*A*u_x + gamma`.
    pub fn simplest(alpha: Expr, beta: Expr, a: Expr, gamma: Expr) -> Result<Self, JetError> {
        let flux = &(&beta * &a) * &ux() + gamma.clone();
        let density = &alpha * &Expr::sym("u");
        let space = JetSpace::new(&[('u', 2), ('v', 2)]);
        let wide = wide_space();
        let d_flux = wide.total_derivative(&flux, Indep::X)?;
        let d_density = wide.total_derivative(&density, Indep::T)?;
        // D_t(alpha u) = alpha_t u + alpha u_t  =>  solve for u_t
        let alpha_t_u = crate::subst::substitute_one(&d_density, &sym("u_t"), &Expr::zero());
        let u_t = (d_flux - alpha_t_u) / alpha.clone();
        let mut s = DifferentialSystem::custom(
            "simplest potential system",
            space,
            alloc::vec![
                Expr::sym("v_x") - density.clone(),
                Expr::sym("v_t") - flux.clone()
            ],
            alloc::vec![(sym("v_x"), density), (sym("v_t"), flux), (sym("u_t"), u_t)],
        )?;
        s.characteristic = Some(Characteristic {
            alpha,
            beta,
            gamma,
            a,
        });
        Ok(s)
    }

    /// Two potentials: `v_x = alpha*u, v_t = beta*A*u_x + gamma,
    /// w_x = lambda*u, w_t = beta2*A*u_x + gamma2`.
    #[allow(clippy::too_many_arguments)]
    pub fn two_potential(
        alpha: Expr,
        beta: Expr,
        gamma: Expr,
        lambda: Expr,
        beta2: Expr,
        gamma2: Expr,
        a: Expr,
    ) -> Result<Self, JetError> {
        let base = DifferentialSystem::simplest(alpha, beta, a.clone(), gamma)?;
        let flux2 = &(&beta2 * &a) * &ux() + gamma2;
        let density2 = &lambda * &Expr::sym("u");
        let mut equations = base.equations.clone();
        equations.push(Expr::sym("w_x") - density2.clone());
        equations.push(Expr::sym("w_t") - flux2.clone());
        let mut resolver = base.resolver.clone();
        resolver.push((sym("w_x"), density2));
        resolver.push((sym("w_t"), flux2));
        DifferentialSystem::custom(
            "two-potential system",
            JetSpace::new(&[('u', 2), ('v', 2), ('w', 2)]),
            equations,
            resolver,
        )
    }

    /// Second-level system `v_x = f*u, w_x = v, w_t = int(A)`, with the
    /// consequences `v_t = A*u_x` and `u_t = (A*u_x)_x / f`.
    pub fn second_level(f: Expr, a: Expr, int_a: Expr) -> Result<Self, JetError> {
        let flux = &a * &ux();
        let wide = wide_space();
        let u_t = wide.total_derivative(&flux, Indep::X)? / f.clone();
        let density = &f * &Expr::sym("u");
        DifferentialSystem::custom(
            "second-level potential system",
            JetSpace::new(&[('u', 2), ('v', 2), ('w', 2)]),
            alloc::vec![
                Expr::sym("v_x") - density.clone(),
                Expr::sym("w_x") - Expr::sym("v"),
                Expr::sym("w_t") - int_a.clone(),
            ],
            alloc::vec![
                (sym("v_x"), density),
                (sym("w_x"), Expr::sym("v")),
                (sym("w_t"), int_a),
                (sym("v_t"), flux),
                (sym("u_t"), u_t),
            ],
        )
    }

    /// `f*q_t = (g*A*q_x)_x + h*B*q_x` for the dependent variable `q`.
    pub fn evolution_in(
        q: char,
        f: Expr,
        g: Expr,
        h: Expr,
        a: Expr,
        b: Expr,
    ) -> Result<Self, JetError> {
        let qx = Expr::symbol(Symbol::jet(q, 1, 0));
        let qt = Expr::symbol(Symbol::jet(q, 0, 1));
        let wide = wide_space();
        let diffusion = wide.total_derivative(&(&(&g * &a) * &qx), Indep::X)?;
        let convection = &(&h * &b) * &qx;
        let rhs = diffusion + convection;
        let eq = &f * &qt - rhs.clone();
        DifferentialSystem::custom(
            "evolution equation",
            JetSpace::new(&[(q, 3)]),
            alloc::vec![eq],
            alloc::vec![(Symbol::jet(q, 0, 1), rhs / f)],
        )
    }

    /// `f*u_t = (A*u_x)_x + h*B*u_x`.
    pub fn evolution(f: Expr, h: Expr, a: Expr, b: Expr) -> Result<Self, JetError> {
        DifferentialSystem::evolution_in('u', f, Expr::one(), h, a, b)
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = String::from(name);
        self
    }

    fn ancestor(&self, c: &Symbol, resolved: &BTreeSet<Symbol>) -> Option<Symbol> {
        let (b, nx, nt) = c.jet_parts()?;
        resolved
            .iter()
            .filter_map(|r| {
                let (rb, rx, rt) = r.jet_parts()?;
                (rb == b && rx <= nx && rt <= nt && r != c).then(|| (rx + rt, r.clone()))
            })
            .max_by_key(|(o, _)| *o)
            .map(|(_, r)| r)
    }

    /// True when `c` is not determined by the resolver.
    pub fn is_free(&self, c: &Symbol) -> bool {
        let resolved: BTreeSet<Symbol> = self.resolver.iter().map(|(s, _)| s.clone()).collect();
        !resolved.contains(c) && self.ancestor(c, &resolved).is_none()
    }

    /// The resolver extended by the differential consequences needed to
    /// eliminate every coordinate in `needed`, still in triangular order.
    pub fn resolver_for(&self, needed: &BTreeSet<Symbol>) -> Result<Vec<(Symbol, Expr)>, JetError> {
        let mut entries = self.resolver.clone();
        let mut index: BTreeMap<Symbol, usize> = entries
            .iter()
            .enumerate()
            .map(|(i, (s, _))| (s.clone(), i))
            .collect();
        let wide = wide_space();
        for c in needed {
            self.ensure(c, &mut entries, &mut index, &wide, 0)?;
        }
        Ok(entries)
    }

    fn ensure(
        &self,
        c: &Symbol,
        entries: &mut Vec<(Symbol, Expr)>,
        index: &mut BTreeMap<Symbol, usize>,
        wide: &JetSpace,
        depth: usize,
    ) -> Result<(), JetError> {
        if index.contains_key(c) {
            return Ok(());
        }
        if depth > 16 {
            return Err(JetError::Unresolvable(c.clone()));
        }
        let resolved: BTreeSet<Symbol> = index.keys().cloned().collect();
        let Some(anc) = self.ancestor(c, &resolved) else {
            return Ok(());
        };
        let (b, ax, at) = anc.jet_parts().expect("jet");
        let (_, cx, ct) = c.jet_parts().expect("jet");
        let mut cur = anc;
        let (mut x, mut t) = (ax, at);
        while (x, t) != (cx, ct) {
            let iv = if x < cx { Indep::X } else { Indep::T };
            if iv == Indep::X {
                x += 1;
            } else {
                t += 1;
            }
            let next = Symbol::jet(b, x, t);
            if !index.contains_key(&next) {
                let base = entries[index[&cur]].1.clone();
                let e = wide.total_derivative(&base, iv)?;
                for s in jet_symbols(&e) {
                    self.ensure(&s, entries, index, wide, depth + 1)?;
                }
                entries.push((next.clone(), e));
                index.insert(next.clone(), entries.len() - 1);
            }
            cur = next;
        }
        Ok(())
    }

    /// Substitutions expressing each resolved coordinate in free
    /// coordinates only.
    pub fn composed(entries: &[(Symbol, Expr)]) -> ExprBindings {
        let mut b = ExprBindings::new();
        for (s, e) in entries {
            let r = substitute(e, &b);
            b.insert(s.clone(), r);
        }
        b
    }

    /// Restricts `e` to the solution manifold.
    pub fn on_manifold(&self, e: &Expr) -> Result<Expr, JetError> {
        let needed: BTreeSet<Symbol> = jet_symbols(e).into_iter().collect();
        let entries = self.resolver_for(&needed)?;
        Ok(substitute(e, &DifferentialSystem::composed(&entries)))
    }

    /// Expressions that must vanish on the manifold for the resolver to be
    /// valid: every equation, and `D_t(p_x) - D_x(p_t)` for each dependent
    /// variable with both first derivatives resolved.
    pub fn consistency_conditions(&self) -> Result<Vec<(String, Expr)>, JetError> {
        let wide = wide_space();
        let mut out = Vec::new();
        for (i, e) in self.equations.iter().enumerate() {
            out.push((alloc::format!("equation {}", i + 1), e.clone()));
        }
        for b in self.space.dependents() {
            let px = Symbol::jet(b, 1, 0);
            let pt = Symbol::jet(b, 0, 1);
            let ex = self.resolver.iter().find(|(s, _)| *s == px);
            let et = self.resolver.iter().find(|(s, _)| *s == pt);
            if let (Some((_, ex)), Some((_, et))) = (ex, et) {
                let c =
                    wide.total_derivative(ex, Indep::T)? - wide.total_derivative(et, Indep::X)?;
                out.push((alloc::format!("{b}_xt = {b}_tx"), c));
            }
        }
        Ok(out)
    }
}

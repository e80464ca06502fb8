use alloc::collections::BTreeMap;

use crate::expr::Expr;
use crate::symbol::Symbol;

use super::field::VectorField;
use super::space::{Indep, JetSpace};
use super::JetError;

/// Highest derivative order reachable by prolongation.
pub const PROLONG_CAPACITY: u8 = 5;

pub(crate) fn wide_space() -> JetSpace {
    JetSpace::new(&[
        ('u', PROLONG_CAPACITY),
        ('v', PROLONG_CAPACITY),
        ('w', PROLONG_CAPACITY),
    ])
}

/// Lazily computed prolongation of a point vector field.
pub struct Prolongation<'a> {
    field: &'a VectorField,
    space: JetSpace,
    cache: BTreeMap<Symbol, Expr>,
}

impl<'a> Prolongation<'a> {
    pub fn new(field: &'a VectorField) -> Prolongation<'a> {
        Prolongation {
            field,
            space: wide_space(),
            cache: BTreeMap::new(),
        }
    }

    /// Coefficient of `∂_s` in the prolonged field, for a base variable or
    /// jet coordinate `s`.
    pub fn coefficient(&mut self, s: &Symbol) -> Result<Expr, JetError> {
        if let Some(c) = self.field.coefficient(s) {
            return Ok(c.clone());
        }
        if let Some(c) = self.cache.get(s) {
            return Ok(c.clone());
        }
        let (b, nx, nt) = s
            .jet_parts()
            .ok_or_else(|| JetError::UnknownCoordinate(s.clone()))?;
        if nx + nt > PROLONG_CAPACITY - 1 {
            return Err(JetError::OrderOverflow(s.clone()));
        }
        let (parent, iv) = if nx > 0 {
            (Symbol::jet(b, nx - 1, nt), Indep::X)
        } else {
            (Symbol::jet(b, nx, nt - 1), Indep::T)
        };
        let (px, pt) = (nx - u8::from(iv == Indep::X), nt - u8::from(iv == Indep::T));
        let phi_parent = self.coefficient(&parent)?;
        let mut terms = alloc::vec![self.space.total_derivative(&phi_parent, iv)?];
        let d_tau = self.space.total_derivative(self.field.tau(), iv)?;
        let d_xi = self.space.total_derivative(self.field.xi(), iv)?;
        if !d_tau.is_zero_literal() {
            terms.push(-(Expr::symbol(Symbol::jet(b, px, pt + 1)) * d_tau));
        }
        if !d_xi.is_zero_literal() {
            terms.push(-(Expr::symbol(Symbol::jet(b, px + 1, pt)) * d_xi));
        }
        let phi = Expr::add(terms);
        self.cache.insert(s.clone(), phi.clone());
        Ok(phi)
    }

    /// `pr V (e)`.
    pub fn apply(&mut self, e: &Expr) -> Result<Expr, JetError> {
        let mut terms = alloc::vec::Vec::new();
        for s in e.free_symbols() {
            let is_base = self.field.coefficient(&s).is_some();
            if !is_base && !s.is_jet() {
                continue;
            }
            let c = self.coefficient(&s)?;
            if c.is_zero_literal() {
                continue;
            }
            terms.push(c * crate::diff::differentiate(e, &s));
        }
        Ok(Expr::add(terms))
    }
}

/// Table of prolonged coefficients for every coordinate of `js`.
pub fn prolong(v: &VectorField, js: &JetSpace) -> Result<BTreeMap<Symbol, Expr>, JetError> {
    let mut p = Prolongation::new(v);
    let mut out = BTreeMap::new();
    for b in js.dependents() {
        let max = js.max_order(b).unwrap_or(0);
        for n in 1..=max {
            for nt in 0..=n {
                let s = Symbol::jet(b, n - nt, nt);
                let c = p.coefficient(&s)?;
                out.insert(s, c);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    #[test]
    fn constant_field_has_zero_extension() {
        let js = JetSpace::new(&[('u', 2), ('v', 1)]);
        let table = prolong(&VectorField::basis("t"), &js).unwrap();
        assert!(table.values().all(Expr::is_zero_literal));
        assert_eq!(table.len(), 5 + 2);
    }

    #[test]
    fn scaling_field() {
        let v = VectorField::parse(&["0", "x", "-u"]).unwrap();
        let mut p = Prolongation::new(&v);
        assert_eq!(
            p.coefficient(&Symbol::new("u_x")).unwrap(),
            parse("-2*u_x").unwrap()
        );
        assert_eq!(
            p.coefficient(&Symbol::new("u_xx")).unwrap(),
            parse("-3*u_xx").unwrap()
        );
        assert_eq!(
            p.coefficient(&Symbol::new("u_t")).unwrap(),
            parse("-u_t").unwrap()
        );
    }

    #[test]
    fn second_order_time_derivative() {
        // Galilean-type field for the heat equation: 2t∂x − xu∂u
        let v = VectorField::parse(&["0", "2*t", "-x*u"]).unwrap();
        let mut p = Prolongation::new(&v);
        let heat = parse("u_t - u_xx").unwrap();
        let r = p.apply(&heat).unwrap();
        let on_shell =
            crate::subst::substitute_one(&r, &Symbol::new("u_t"), &parse("u_xx").unwrap());
        assert!(on_shell.is_zero_literal(), "{on_shell}");
    }
}

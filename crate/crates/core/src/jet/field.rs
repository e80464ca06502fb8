use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::diff::differentiate;
use crate::expr::Expr;
use crate::parse::{parse, ParseError};
use crate::subst::{substitute, ExprBindings};
use crate::symbol::Symbol;

/// Base variables in the fixed coefficient order of a [`VectorField`].
pub const BASE: [&str; 5] = ["t", "x", "u", "v", "w"];

/// `tau ∂_t + xi ∂_x + eta ∂_u + theta ∂_v + zeta ∂_w`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct VectorField {
    pub coeffs: [Expr; 5],
}

impl VectorField {
    pub fn zero() -> VectorField {
        VectorField {
            coeffs: [
                Expr::zero(),
                Expr::zero(),
                Expr::zero(),
                Expr::zero(),
                Expr::zero(),
            ],
        }
    }

    pub fn new(tau: Expr, xi: Expr, eta: Expr, theta: Expr, zeta: Expr) -> VectorField {
        VectorField {
            coeffs: [tau, xi, eta, theta, zeta],
        }
    }

    /// Parses up to five coefficients; missing trailing ones are zero.
    pub fn parse(parts: &[&str]) -> Result<VectorField, ParseError> {
        let mut v = VectorField::zero();
        for (i, p) in parts.iter().enumerate().take(5) {
            v.coeffs[i] = parse(p)?;
        }
        Ok(v)
    }

    /// Parses operator notation such as `t*Dt - v*Dx + u^2*Du`, where the
    /// symbols `Dt, Dx, Du, Dv, Dw` stand for the basis fields. The text
    /// must be linear in them.
    pub fn from_operator(text: &str) -> Result<VectorField, ParseError> {
        let e = parse(text)?;
        let names = ["Dt", "Dx", "Du", "Dv", "Dw"];
        let mut v = VectorField::zero();
        for (i, n) in names.iter().enumerate() {
            v.coeffs[i] = differentiate(&e, &Symbol::new(n));
        }
        let mut rest = e.clone();
        for n in names {
            rest = crate::subst::substitute_one(&rest, &Symbol::new(n), &Expr::zero());
        }
        let nonlinear = v
            .coeffs
            .iter()
            .any(|c| c.free_symbols().iter().any(|s| names.contains(&s.as_str())));
        if nonlinear || !rest.is_zero_literal() {
            return Err(ParseError {
                position: 0,
                message: String::from(
                    "operator must be a linear combination of Dt, Dx, Du, Dv, Dw",
                ),
            });
        }
        Ok(v)
    }

    /// `∂_name` for a base variable.
    pub fn basis(name: &str) -> VectorField {
        let mut v = VectorField::zero();
        let i = BASE.iter().position(|b| *b == name).expect("base variable");
        v.coeffs[i] = Expr::one();
        v
    }

    pub fn tau(&self) -> &Expr {
        &self.coeffs[0]
    }
    pub fn xi(&self) -> &Expr {
        &self.coeffs[1]
    }
    pub fn eta(&self) -> &Expr {
        &self.coeffs[2]
    }
    pub fn theta(&self) -> &Expr {
        &self.coeffs[3]
    }
    pub fn zeta(&self) -> &Expr {
        &self.coeffs[4]
    }

    /// Coefficient of `∂_s` for a base variable symbol.
    pub fn coefficient(&self, s: &Symbol) -> Option<&Expr> {
        BASE.iter()
            .position(|b| *b == s.as_str())
            .map(|i| &self.coeffs[i])
    }

    /// `V(e) = Σ coeff_a ∂e/∂a`.
    pub fn apply(&self, e: &Expr) -> Expr {
        let mut terms = Vec::new();
        for (i, b) in BASE.iter().enumerate() {
            if self.coeffs[i].is_zero_literal() {
                continue;
            }
            let d = differentiate(e, &Symbol::new(b));
            if !d.is_zero_literal() {
                terms.push(&self.coeffs[i] * &d);
            }
        }
        Expr::add(terms)
    }

    pub fn scale(&self, c: &Expr) -> VectorField {
        VectorField {
            coeffs: self.coeffs.clone().map(|e| c * &e),
        }
    }

    pub fn plus(&self, o: &VectorField) -> VectorField {
        let mut out = self.clone();
        for i in 0..5 {
            out.coeffs[i] = &self.coeffs[i] + &o.coeffs[i];
        }
        out
    }

    pub fn substitute(&self, b: &ExprBindings) -> VectorField {
        VectorField {
            coeffs: self.coeffs.clone().map(|e| substitute(&e, b)),
        }
    }

    pub fn map(&self, f: impl Fn(&Expr) -> Expr) -> VectorField {
        VectorField {
            coeffs: [
                f(&self.coeffs[0]),
                f(&self.coeffs[1]),
                f(&self.coeffs[2]),
                f(&self.coeffs[3]),
                f(&self.coeffs[4]),
            ],
        }
    }

    pub fn is_zero_literal(&self) -> bool {
        self.coeffs.iter().all(Expr::is_zero_literal)
    }

    /// Base variables whose coefficient is nonzero or that appear in a
    /// coefficient.
    pub fn variables(&self) -> Vec<Symbol> {
        let mut out: Vec<Symbol> = Vec::new();
        for (i, b) in BASE.iter().enumerate() {
            let s = Symbol::new(b);
            if !self.coeffs[i].is_zero_literal() && !out.contains(&s) {
                out.push(s);
            }
            for f in self.coeffs[i].free_symbols() {
                if BASE.contains(&f.as_str()) && !out.contains(&f) {
                    out.push(f);
                }
            }
        }
        out.sort();
        out
    }

    /// True when no coefficient contains a jet coordinate of order ≥ 1.
    pub fn is_point_field(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.free_symbols().iter().all(|s| !s.is_jet()))
    }
}

/// `[V, W]` with coefficients `V(W^a) - W(V^a)`.
pub fn commutator(v: &VectorField, w: &VectorField) -> VectorField {
    let mut out = VectorField::zero();
    for i in 0..5 {
        out.coeffs[i] = v.apply(&w.coeffs[i]) - w.apply(&v.coeffs[i]);
    }
    out
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, b) in BASE.iter().enumerate() {
            let c = &self.coeffs[i];
            if c.is_zero_literal() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if c.is_one_literal() {
                write!(f, "D{}", b)?;
            } else {
                write!(f, "({})*D{}", c, b)?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Serialised as `{"t": "...", "x": "...", ...}` with zero entries omitted.
impl Serialize for VectorField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let n = self.coeffs.iter().filter(|c| !c.is_zero_literal()).count();
        let mut m = s.serialize_map(Some(n))?;
        for (i, b) in BASE.iter().enumerate() {
            if !self.coeffs[i].is_zero_literal() {
                m.serialize_entry(b, &self.coeffs[i])?;
            }
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for VectorField {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let map: alloc::collections::BTreeMap<String, Expr> =
            alloc::collections::BTreeMap::deserialize(d)?;
        let mut v = VectorField::zero();
        for (k, e) in map {
            let i = BASE.iter().position(|b| *b == k).ok_or_else(|| {
                serde::de::Error::custom(alloc::format!("unknown base variable '{}'", k))
            })?;
            v.coeffs[i] = e;
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brackets() {
        let dt = VectorField::basis("t");
        let d = VectorField::parse(&["2*t", "x", "0", "v"]).unwrap();
        assert_eq!(commutator(&dt, &d), VectorField::parse(&["2"]).unwrap());
        assert!(commutator(&VectorField::basis("x"), &VectorField::basis("v")).is_zero_literal());
        let g = VectorField::parse(&["t", "-v", "u^2"]).unwrap();
        assert_eq!(
            commutator(&VectorField::basis("v"), &g),
            VectorField::parse(&["0", "-1"]).unwrap()
        );
    }

    #[test]
    fn display_and_variables() {
        let g = VectorField::parse(&["0", "-v*x", "u*(u*x + v)", "2*t"]).unwrap();
        let vars: Vec<String> = g
            .variables()
            .iter()
            .map(alloc::string::ToString::to_string)
            .collect();
        assert_eq!(vars, ["t", "u", "v", "x"]);
        assert!(g.is_point_field());
        assert_eq!(alloc::format!("{}", VectorField::basis("v")), "Dv");
    }

    #[test]
    fn operator_notation() {
        let g = VectorField::from_operator("t*Dt - v*Dx + u^2*Du").unwrap();
        assert_eq!(g, VectorField::parse(&["t", "-v", "u^2"]).unwrap());
        let h = VectorField::from_operator("exp(-2*t)*(Dt - x*Dx)").unwrap();
        assert_eq!(
            VectorField::from_operator(&alloc::format!("{}", h)).unwrap(),
            h
        );
        assert!(VectorField::from_operator("Dt*Dx").is_err());
        assert!(VectorField::from_operator("Dt + 1").is_err());
    }
}

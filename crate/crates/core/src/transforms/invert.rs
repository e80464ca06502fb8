//! Closed-form inversion of one-variable maps.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::diff::differentiate;
use crate::domain::Domain;
use crate::expr::{Expr, Func, Node};
use crate::rational::Rational;
use crate::subst::substitute_one;
use crate::symbol::Symbol;
use crate::zero::{is_zero, ZeroConfig};

const CHECK_SEED: u64 = 0x1a7e;

fn vanishes(e: &Expr, d: &Domain) -> bool {
    if e.is_zero_literal() {
        return true;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(CHECK_SEED);
    matches!(is_zero(e, d, &ZeroConfig::default().with_trials(30), &mut rng), Ok(ev) if ev.is_zero)
}

/// Solves `e(x) = y` for `x`, with `y` a symbol not occurring in `e`.
/// Handles affine maps, powers, `exp`/`ln`, and quotients whose
/// cross-multiplied form is a polynomial of degree at most two in `x`.
/// Among several branches the one with `x(e(x)) = x` on `d` is returned.
pub fn invert(e: &Expr, x: &Symbol, y: &Symbol, d: &Domain) -> Option<Expr> {
    if !e.depends_on(x) || e.depends_on(y) {
        return None;
    }
    let candidates = solve(e, x, &Expr::symbol(y.clone()), d);
    candidates.into_iter().find(|c| {
        let back = substitute_one(c, y, e) - Expr::symbol(x.clone());
        vanishes(&back, d)
    })
}

fn solve(e: &Expr, x: &Symbol, r: &Expr, d: &Domain) -> Vec<Expr> {
    if matches!(e.node(), Node::Sym(s) if s == x) {
        return alloc::vec![r.clone()];
    }
    match e.node() {
        Node::Add(ts) => {
            let (dep, rest): (Vec<Expr>, Vec<Expr>) =
                ts.iter().cloned().partition(|t| t.depends_on(x));
            if dep.len() == 1 {
                return solve(&dep[0], x, &(r.clone() - Expr::add(rest)), d);
            }
            polynomial_roots(&(e.clone() - r.clone()), x, d)
        }
        Node::Mul(fs) => {
            let (dep, rest): (Vec<Expr>, Vec<Expr>) =
                fs.iter().cloned().partition(|f| f.depends_on(x));
            if dep.len() == 1 {
                return solve(&dep[0], x, &(r.clone() / Expr::mul(rest)), d);
            }
            let mut num = rest;
            let mut den = Vec::new();
            for f in dep {
                match f.node() {
                    Node::Pow(b, n) if n.as_rational().is_some_and(Rational::is_negative) => {
                        den.push(Expr::pow(b.clone(), -n.clone()));
                    }
                    _ => num.push(f),
                }
            }
            if den.is_empty() {
                return polynomial_roots(&(e.clone() - r.clone()), x, d);
            }
            polynomial_roots(&(Expr::mul(num) - r.clone() * Expr::mul(den)), x, d)
        }
        Node::Pow(b, n) if !n.depends_on(x) => {
            let mut out = Vec::new();
            if n.as_rational() == Some(Rational::integer(-1)) {
                // reciprocal of a quotient or polynomial
                out.extend(polynomial_roots(
                    &(Expr::one() - r.clone() * b.clone()),
                    x,
                    d,
                ));
            }
            let root = Expr::pow(r.clone(), Expr::recip(n.clone()));
            out.extend(solve(b, x, &root, d));
            let even = n.as_rational().is_some_and(|q| q.numer() % 2 == 0);
            if even {
                out.extend(solve(b, x, &-root, d));
            }
            out
        }
        Node::Pow(c, n) => {
            if c.depends_on(x) {
                return Vec::new();
            }
            solve(n, x, &(Expr::ln(r.clone()) / Expr::ln(c.clone())), d)
        }
        Node::Call(Func::Exp, a) => solve(a, x, &Expr::ln(r.clone()), d),
        Node::Call(Func::Ln, a) => solve(a, x, &Expr::exp(r.clone()), d),
        Node::Call(Func::Abs, a) => {
            let mut out = solve(a, x, r, d);
            out.extend(solve(a, x, &-r.clone(), d));
            out
        }
        _ => Vec::new(),
    }
}

/// Roots of `p(x) = 0` when `p` is a polynomial of degree one or two in
/// `x` (checked numerically through its third derivative).
fn polynomial_roots(p: &Expr, x: &Symbol, d: &Domain) -> Vec<Expr> {
    let d1 = differentiate(p, x);
    let d2 = differentiate(&d1, x);
    let d3 = differentiate(&d2, x);
    if !vanishes(&d3, d) {
        return Vec::new();
    }
    let at0 = |e: &Expr| substitute_one(e, x, &Expr::zero());
    let (c2, c1, c0) = (at0(&d2) / Expr::int(2), at0(&d1), at0(p));
    if [&c2, &c1, &c0].iter().any(|c| c.depends_on(x)) {
        return Vec::new();
    }
    if c2.is_zero_literal() || vanishes(&c2, d) {
        if c1.is_zero_literal() {
            return Vec::new();
        }
        return alloc::vec![-c0 / c1];
    }
    let disc = Expr::sqrt(Expr::powi(c1.clone(), 2) - Expr::int(4) * c2.clone() * c0);
    let two_a = Expr::int(2) * c2;
    alloc::vec![
        (-c1.clone() + disc.clone()) / two_a.clone(),
        (-c1 - disc) / two_a
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::VarDomain;
    use crate::parse::parse;

    fn y() -> Symbol {
        Symbol::new("y")
    }

    fn inverts(text: &str, d: &Domain) -> Expr {
        let x = Symbol::new("x");
        let e = parse(text).unwrap();
        invert(&e, &x, &y(), d).unwrap_or_else(|| panic!("no inverse for {}", text))
    }

    #[test]
    fn supported_patterns() {
        let d = Domain::new().with("y", VarDomain::new(0.5, 2.0));
        for t in [
            "3*x - 2",
            "x^3",
            "x^2",
            "2*x^(-4/3)",
            "exp(2*x) + 1",
            "ln(x) - t + 2",
            "x/(1 + 2*x)",
            "(x + 1)/(x + 2)",
            "x^2 + x",
            "1/(x^2 + 1)",
            "exp(x)*(t + 1)",
            "2^x",
        ] {
            inverts(t, &d);
        }
    }

    #[test]
    fn branch_follows_the_domain() {
        let neg = Domain::new().with("x", VarDomain::new(-3.0, -1.0));
        let g = inverts("x^2", &neg);
        let v = crate::eval::eval_numeric(&g, &[(y(), 4.0)].into_iter().collect()).unwrap();
        assert!((v + 2.0).abs() < 1e-12);
    }

    #[test]
    fn transcendental_maps_are_rejected() {
        let x = Symbol::new("x");
        for t in ["exp(-t)*sin(x)", "x + sin(x)", "x^3 + x", "x*exp(x)"] {
            assert!(
                invert(&parse(t).unwrap(), &x, &y(), &Domain::new()).is_none(),
                "{}",
                t
            );
        }
    }
}

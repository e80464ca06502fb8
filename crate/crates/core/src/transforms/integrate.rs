//! Closed-form antiderivatives in one variable from a fixed table.

use alloc::vec::Vec;

use crate::diff::differentiate;
use crate::expr::{Expr, Func, Node};
use crate::rational::Rational;
use crate::subst::substitute_one;
use crate::symbol::Symbol;

/// `(a, b)` with `e = a*x + b` and `a != 0`, both free of `x`.
pub(crate) fn linear_parts(e: &Expr, x: &Symbol) -> Option<(Expr, Expr)> {
    if !e.depends_on(x) {
        return None;
    }
    let a = differentiate(e, x);
    if a.depends_on(x) || a.is_zero_literal() {
        return None;
    }
    let b = substitute_one(e, x, &Expr::zero());
    Some((a, b))
}

/// Strips `abs(.)` around a linear argument.
fn linear_or_abs(e: &Expr, x: &Symbol) -> Option<(Expr, Expr)> {
    match e.node() {
        Node::Call(Func::Abs, inner) => linear_parts(inner, x),
        _ => linear_parts(e, x),
    }
}

/// `∫ e dx` for sums of constant multiples of: powers and reciprocals of
/// linear expressions, `exp`, `sin`, `cos` of linear arguments, polynomial
/// times `exp(linear)`, and `ln|L|/L` with `L` linear. Returns `None`
/// outside the table.
pub fn antiderivative(e: &Expr, x: &Symbol) -> Option<Expr> {
    if !e.depends_on(x) {
        return Some(e * &Expr::symbol(x.clone()));
    }
    if let Node::Add(ts) = e.node() {
        let parts: Option<Vec<Expr>> = ts.iter().map(|t| antiderivative(t, x)).collect();
        return parts.map(Expr::add);
    }
    let (constant, varying) = split_factors(e, x);
    let core = integrate_product(&varying, x)?;
    Some(&constant * &core)
}

fn split_factors(e: &Expr, x: &Symbol) -> (Expr, Vec<Expr>) {
    let factors: Vec<Expr> = match e.node() {
        Node::Mul(fs) => fs.clone(),
        _ => alloc::vec![e.clone()],
    };
    let (c, v): (Vec<Expr>, Vec<Expr>) = factors.into_iter().partition(|f| !f.depends_on(x));
    (Expr::mul(c), v)
}

fn integrate_product(fs: &[Expr], x: &Symbol) -> Option<Expr> {
    match fs {
        [f] => integrate_single(f, x),
        [p, q] => integrate_pair(p, q, x).or_else(|| integrate_pair(q, p, x)),
        _ => None,
    }
}

fn integrate_single(f: &Expr, x: &Symbol) -> Option<Expr> {
    if let Some((a, _)) = linear_parts(f, x) {
        return Some(Expr::pow(f.clone(), Expr::int(2)) / (Expr::int(2) * a));
    }
    match f.node() {
        Node::Pow(base, n) if !n.depends_on(x) => {
            let (a, _) = linear_parts(base, x)?;
            if n.as_rational() == Some(Rational::integer(-1)) {
                return Some(Expr::ln(Expr::call(Func::Abs, base.clone())) / a);
            }
            let n1 = n + &Expr::one();
            Some(Expr::pow(base.clone(), n1.clone()) / (a * n1))
        }
        Node::Pow(base, n) if !base.depends_on(x) => {
            // c^L = exp(L ln c)
            let (a, _) = linear_parts(n, x)?;
            Some(f.clone() / (a * Expr::ln(base.clone())))
        }
        Node::Call(func, arg) => {
            let (a, _) = linear_parts(arg, x)?;
            let r = match func {
                Func::Exp => f.clone(),
                Func::Sin => -Expr::call(Func::Cos, arg.clone()),
                Func::Cos => Expr::call(Func::Sin, arg.clone()),
                Func::Sinh => Expr::call(Func::Cosh, arg.clone()),
                Func::Cosh => Expr::call(Func::Sinh, arg.clone()),
                _ => return None,
            };
            Some(r / a)
        }
        _ => None,
    }
}

/// `p*q` with `q` one of `exp(L)` times a monomial `p = x^m` (integer
/// `m >= 1`), or `ln|L| * L^(-1)`.
fn integrate_pair(p: &Expr, q: &Expr, x: &Symbol) -> Option<Expr> {
    if let Node::Call(Func::Exp, arg) = q.node() {
        let (a, _) = linear_parts(arg, x)?;
        let m = monomial_degree(p, x)?;
        // ∫ x^m e^L = x^m e^L / a - (m/a) ∫ x^(m-1) e^L
        let xs = Expr::symbol(x.clone());
        let lower = if m == 1 {
            integrate_single(q, x)?
        } else {
            integrate_pair(&Expr::powi(xs.clone(), m - 1), q, x)?
        };
        return Some(p * q / a.clone() - Expr::int(m) / a * lower);
    }
    if let Node::Call(Func::Ln, arg) = p.node() {
        let (a, b) = linear_or_abs(arg, x)?;
        let lin = &(&a * &Expr::symbol(x.clone())) + &b;
        if *q == Expr::recip(lin) {
            return Some(Expr::powi(p.clone(), 2) / (Expr::int(2) * a));
        }
    }
    None
}

fn monomial_degree(p: &Expr, x: &Symbol) -> Option<i64> {
    match p.node() {
        Node::Sym(s) if s == x => Some(1),
        Node::Pow(b, n) if matches!(b.node(), Node::Sym(s) if s == x) => {
            let r = n.as_rational()?;
            (r.is_integer() && r.numer() >= 1 && r.numer() <= 8).then(|| r.numer())
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Domain;
    use crate::parse::parse;
    use crate::zero::{is_zero, ZeroConfig};
    use rand::SeedableRng;

    fn check(text: &str) {
        let x = Symbol::new("x");
        let e = parse(text).unwrap();
        let f = antiderivative(&e, &x).unwrap_or_else(|| panic!("no antiderivative for {}", text));
        let d = differentiate(&f, &x) - e;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let ev = is_zero(
            &d,
            &Domain::new(),
            &ZeroConfig::default().with_trials(50),
            &mut rng,
        )
        .unwrap();
        assert!(ev.is_zero, "{} -> {}", text, f);
    }

    #[test]
    fn table_entries_differentiate_back() {
        for t in [
            "1",
            "x",
            "x^2",
            "3*x^(-4/3)",
            "x^(-1/3)",
            "1/x",
            "ln(abs(x))/x",
            "ln(x)/x",
            "exp(2*x + 1)",
            "x^2*exp(-x)",
            "x*exp(3*x)",
            "(2*x + 1)^(-1)",
            "(x + 1)^(3/2)",
            "sin(2*x) + cos(x)",
            "2^x",
            "x^2 + 5*exp(x) - 1/(3*x)",
            "a*x^2",
        ] {
            check(t);
        }
    }

    #[test]
    fn outside_the_table() {
        let x = Symbol::new("x");
        for t in [
            "exp(x^2/2)",
            "exp(-mu/x)/x",
            "sin(x)/x",
            "1/(x^2 + 1)",
            "x*exp(x)*ln(x)",
        ] {
            assert!(antiderivative(&parse(t).unwrap(), &x).is_none(), "{}", t);
        }
    }
}

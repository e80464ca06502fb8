//! Partial differentiation. Jet coordinates are independent symbols.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::expr::{Antiderivative, Expr, Func, Node};
use crate::subst::substitute_one;
use crate::symbol::{Symbol, DUMMY};

/// `∂e/∂s`.
pub fn differentiate(e: &Expr, s: &Symbol) -> Expr {
    let mut memo = BTreeMap::new();
    d(e, s, &mut memo)
}

/// Convenience wrapper taking a symbol name.
pub fn diff(e: &Expr, name: &str) -> Expr {
    differentiate(e, &Symbol::new(name))
}

fn d(e: &Expr, s: &Symbol, memo: &mut BTreeMap<usize, (Expr, Expr)>) -> Expr {
    if let Some((_, r)) = memo.get(&e.ptr_id()) {
        return r.clone();
    }
    let r = d_raw(e, s, memo);
    // keep `e` alive so its address cannot be reused while the memo lives
    memo.insert(e.ptr_id(), (e.clone(), r.clone()));
    r
}

fn d_raw(e: &Expr, s: &Symbol, memo: &mut BTreeMap<usize, (Expr, Expr)>) -> Expr {
    match e.node() {
        Node::Num(_) => Expr::zero(),
        Node::Sym(x) => {
            if x == s {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Node::Add(ts) => Expr::add(ts.iter().map(|t| d(t, s, memo)).collect()),
        Node::Mul(fs) => {
            let mut terms = Vec::new();
            for i in 0..fs.len() {
                let di = d(&fs[i], s, memo);
                if di.is_zero_literal() {
                    continue;
                }
                let mut prod: Vec<Expr> = Vec::with_capacity(fs.len());
                for (j, f) in fs.iter().enumerate() {
                    prod.push(if i == j { di.clone() } else { f.clone() });
                }
                terms.push(Expr::mul(prod));
            }
            Expr::add(terms)
        }
        Node::Pow(b, x) => {
            let db = d(b, s, memo);
            let dx = d(x, s, memo);
            let mut terms = Vec::new();
            if !db.is_zero_literal() {
                let xm1 = x - &Expr::one();
                terms.push(Expr::mul(alloc::vec![
                    x.clone(),
                    Expr::pow(b.clone(), xm1),
                    db
                ]));
            }
            if !dx.is_zero_literal() {
                terms.push(Expr::mul(alloc::vec![e.clone(), Expr::ln(b.clone()), dx]));
            }
            Expr::add(terms)
        }
        Node::Call(f, a) => {
            let da = d(a, s, memo);
            if da.is_zero_literal() {
                return Expr::zero();
            }
            let outer = match f {
                Func::Exp => e.clone(),
                Func::Ln => Expr::recip(a.clone()),
                Func::Abs => Expr::call(Func::Sign, a.clone()),
                Func::Sign => Expr::zero(),
                Func::Arctan => Expr::recip(Expr::one() + Expr::powi(a.clone(), 2)),
                Func::Sin => Expr::call(Func::Cos, a.clone()),
                Func::Cos => -Expr::call(Func::Sin, a.clone()),
                Func::Sinh => Expr::call(Func::Cosh, a.clone()),
                Func::Cosh => Expr::call(Func::Sinh, a.clone()),
            };
            outer * da
        }
        Node::Integral(ad) => d_antiderivative(ad, s, memo),
    }
}

fn d_antiderivative(
    ad: &Antiderivative,
    s: &Symbol,
    memo: &mut BTreeMap<usize, (Expr, Expr)>,
) -> Expr {
    let dummy = Symbol::new(DUMMY);
    let da = d(&ad.arg, s, memo);
    let mut terms = Vec::new();
    if !da.is_zero_literal() {
        terms.push(substitute_one(&ad.integrand, &dummy, &ad.arg) * da);
    }
    if s.as_str() != DUMMY && ad.integrand.depends_on(s) {
        match &ad.closed {
            Some(c) => {
                let dc = differentiate(c, s);
                terms.push(substitute_one(&dc, &dummy, &ad.arg));
            }
            None => {
                let di = differentiate(&ad.integrand, s);
                terms.push(Expr::antiderivative(di, ad.arg.clone(), None));
            }
        }
    }
    Expr::add(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::eval_numeric;
    use crate::parse::parse;
    use alloc::string::ToString;

    fn at(e: &Expr, pairs: &[(&str, f64)]) -> f64 {
        let b = pairs.iter().map(|(k, v)| (Symbol::new(k), *v)).collect();
        eval_numeric(e, &b).unwrap()
    }

    #[test]
    fn power_exp_product() {
        let e = parse("u^(-2)*exp(1/u)").unwrap();
        let de = diff(&e, "u");
        let expect = parse("(-2*u^(-3) - u^(-4))*exp(1/u)").unwrap();
        for u in [0.6, 1.1, 1.9] {
            assert!((at(&de, &[("u", u)]) - at(&expect, &[("u", u)])).abs() < 1e-12);
        }
    }

    #[test]
    fn antiderivative_rule() {
        let e = parse("int(s^mu, u)").unwrap();
        assert_eq!(diff(&e, "u"), parse("u^mu").unwrap());
        let c = parse("int(s^(-2), u^2, -1/s)").unwrap();
        assert_eq!(diff(&c, "u").to_string(), "2/u^3");
    }

    #[test]
    fn jet_coordinates_are_independent() {
        assert!(diff(&parse("v_x").unwrap(), "x").is_zero_literal());
        assert!(diff(&parse("x*u_x").unwrap(), "u").is_zero_literal());
    }

    #[test]
    fn abs_gives_sign() {
        let e = parse("abs(x - 1)^(mu - 3/2)").unwrap();
        let de = diff(&e, "x");
        let v = at(&de, &[("x", 0.5), ("mu", 2.0)]);
        // d/dx (1-x)^(1/2) = -1/(2 sqrt(1-x))
        assert!((v + 0.5 / libm::sqrt(0.5)).abs() < 1e-12);
    }
}

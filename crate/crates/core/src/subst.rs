//! Simultaneous substitution of symbols by expressions.

use alloc::collections::BTreeMap;

use crate::expr::{Expr, Node};
use crate::symbol::{Symbol, DUMMY};

/// Symbol to expression bindings.
pub type ExprBindings = BTreeMap<Symbol, Expr>;

/// Replaces every bound symbol in a single pass; replacements are not
/// themselves rewritten. The bound variable of antiderivatives is never
/// substituted inside integrands.
pub fn substitute(e: &Expr, b: &ExprBindings) -> Expr {
    if b.is_empty() {
        return e.clone();
    }
    let mut memo = BTreeMap::new();
    go(e, b, &mut memo)
}

pub fn substitute_one(e: &Expr, s: &Symbol, by: &Expr) -> Expr {
    let mut b = ExprBindings::new();
    b.insert(s.clone(), by.clone());
    substitute(e, &b)
}

fn go(e: &Expr, b: &ExprBindings, memo: &mut BTreeMap<usize, (Expr, Expr)>) -> Expr {
    if let Some((_, r)) = memo.get(&e.ptr_id()) {
        return r.clone();
    }
    let r = match e.node() {
        Node::Num(_) => e.clone(),
        Node::Sym(s) => b.get(s).cloned().unwrap_or_else(|| e.clone()),
        Node::Add(ts) => Expr::add(ts.iter().map(|t| go(t, b, memo)).collect()),
        Node::Mul(fs) => Expr::mul(fs.iter().map(|f| go(f, b, memo)).collect()),
        Node::Pow(x, y) => Expr::pow(go(x, b, memo), go(y, b, memo)),
        Node::Call(f, a) => Expr::call(*f, go(a, b, memo)),
        Node::Integral(ad) => {
            let arg = go(&ad.arg, b, memo);
            let inner: ExprBindings = b
                .iter()
                .filter(|(k, _)| k.as_str() != DUMMY)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect();
            let integrand = substitute(&ad.integrand, &inner);
            let closed = ad.closed.as_ref().map(|c| substitute(c, &inner));
            Expr::antiderivative(integrand, arg, closed)
        }
    };
    memo.insert(e.ptr_id(), (e.clone(), r.clone()));
    r
}

/// Replaces every antiderivative that carries a closed form by that form.
pub fn expand_closed_forms(e: &Expr) -> Expr {
    let mut memo = BTreeMap::new();
    expand(e, &mut memo)
}

fn expand(e: &Expr, memo: &mut BTreeMap<usize, (Expr, Expr)>) -> Expr {
    if let Some((_, r)) = memo.get(&e.ptr_id()) {
        return r.clone();
    }
    let r = match e.node() {
        Node::Num(_) | Node::Sym(_) => e.clone(),
        Node::Add(ts) => Expr::add(ts.iter().map(|t| expand(t, memo)).collect()),
        Node::Mul(fs) => Expr::mul(fs.iter().map(|f| expand(f, memo)).collect()),
        Node::Pow(x, y) => Expr::pow(expand(x, memo), expand(y, memo)),
        Node::Call(f, a) => Expr::call(*f, expand(a, memo)),
        Node::Integral(ad) => {
            let arg = expand(&ad.arg, memo);
            match &ad.closed {
                Some(c) => substitute_one(c, &Symbol::new(DUMMY), &arg),
                None => Expr::antiderivative(ad.integrand.clone(), arg, None),
            }
        }
    };
    memo.insert(e.ptr_id(), (e.clone(), r.clone()));
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn bind(pairs: &[(&str, &str)]) -> ExprBindings {
        pairs
            .iter()
            .map(|(k, v)| (Symbol::new(k), parse(v).unwrap()))
            .collect()
    }

    #[test]
    fn single_pass() {
        let e = parse("u").unwrap();
        assert_eq!(
            substitute(&e, &bind(&[("u", "1/u")])),
            parse("1/u").unwrap()
        );
        let e = parse("f*u_t").unwrap();
        assert_eq!(substitute(&e, &bind(&[("f", "1")])), parse("u_t").unwrap());
        let e = parse("v_x - alpha*u").unwrap();
        let r = substitute(&e, &bind(&[("alpha", "x^(-4/3)")]));
        assert_eq!(r, parse("v_x - x^(-4/3)*u").unwrap());
    }

    #[test]
    fn simultaneous_swap() {
        let e = parse("x - 2*v").unwrap();
        let r = substitute(&e, &bind(&[("x", "v"), ("v", "x")]));
        assert_eq!(r, parse("v - 2*x").unwrap());
    }

    #[test]
    fn bound_variable_untouched() {
        let e = parse("int(s^2*mu, u)").unwrap();
        let r = substitute(&e, &bind(&[("s", "7"), ("mu", "3"), ("u", "x")]));
        assert_eq!(r, parse("int(3*s^2, x)").unwrap());
        let c = parse("int(s^(-2), u, -1/s)").unwrap();
        assert_eq!(expand_closed_forms(&c), parse("-1/u").unwrap());
    }
}

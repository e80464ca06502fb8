//! Immutable expression trees and the light canonicalisation applied while
//! they are built.
//!
//! Every constructor goes through `simplify_basic`-level rules: sums and
//! products are flattened, numeric constants folded, equal bases in a
//! product merged (`x^a*x^b -> x^(a+b)`, `exp(a)*exp(b) -> exp(a+b)`), like
//! terms of a sum collected, and `0`/`1` absorbed. Nothing else is done;
//! deciding whether an expression vanishes is left to [`crate::zero`].

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::rational::Rational;
use crate::symbol::{Symbol, DUMMY};

/// Unary functions understood by the engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Exp,
    Ln,
    Abs,
    Sign,
    Arctan,
    Sin,
    Cos,
    Sinh,
    Cosh,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Abs => "abs",
            Func::Sign => "sign",
            Func::Arctan => "arctan",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "ln" | "log" => Func::Ln,
            "abs" => Func::Abs,
            "sign" => Func::Sign,
            "arctan" | "atan" => Func::Arctan,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            _ => return None,
        })
    }
}

/// `F(arg)` where `F' = integrand`, both written in the bound variable `s`.
/// `closed` is an elementary `F` when one is known.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Antiderivative {
    pub integrand: Expr,
    pub arg: Expr,
    pub closed: Option<Expr>,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Node {
    Num(Rational),
    Sym(Symbol),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Pow(Expr, Expr),
    Call(Func, Expr),
    Integral(Antiderivative),
}

/// Shared, immutable expression.
#[derive(Clone)]
pub struct Expr(Arc<Node>);

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Expr {}

impl PartialOrd for Expr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Expr {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            Ordering::Equal
        } else {
            self.0.cmp(&other.0)
        }
    }
}

impl Expr {
    fn wrap(n: Node) -> Expr {
        Expr(Arc::new(n))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    /// Address of the shared node, used to deduplicate work on DAG-shaped trees.
    pub(crate) fn ptr_id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn num(r: Rational) -> Expr {
        Expr::wrap(Node::Num(r))
    }

    pub fn int(n: i64) -> Expr {
        Expr::num(Rational::integer(n))
    }

    /// `n/d`; panics on a zero denominator.
    pub fn frac(n: i64, d: i64) -> Expr {
        Expr::num(Rational::new(n, d).expect("nonzero denominator"))
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn sym(name: &str) -> Expr {
        Expr::wrap(Node::Sym(Symbol::new(name)))
    }

    pub fn symbol(s: Symbol) -> Expr {
        Expr::wrap(Node::Sym(s))
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self.node() {
            Node::Num(r) => Some(*r),
            _ => None,
        }
    }

    pub fn as_symbol(&self) -> Option<&Symbol> {
        match self.node() {
            Node::Sym(s) => Some(s),
            _ => None,
        }
    }

    /// Literal zero (structural, not semantic).
    pub fn is_zero_literal(&self) -> bool {
        self.as_rational().is_some_and(Rational::is_zero)
    }

    pub fn is_one_literal(&self) -> bool {
        self.as_rational().is_some_and(Rational::is_one)
    }

    // ---- constructors with canonicalisation ----

    pub fn add(terms: Vec<Expr>) -> Expr {
        let mut flat = Vec::with_capacity(terms.len());
        for t in terms {
            match t.node() {
                Node::Add(inner) => flat.extend(inner.iter().cloned()),
                _ => flat.push(t),
            }
        }
        let mut constant = Rational::ZERO;
        // like terms: rest -> coefficient, keeping first-seen order stable
        let mut coeffs: BTreeMap<Expr, Rational> = BTreeMap::new();
        let mut overflowed: Vec<Expr> = Vec::new();
        for t in flat {
            if let Some(r) = t.as_rational() {
                match constant.checked_add(r) {
                    Some(c) => constant = c,
                    None => overflowed.push(t),
                }
                continue;
            }
            let (c, rest) = t.split_coefficient();
            match coeffs.get_mut(&rest) {
                Some(acc) => match acc.checked_add(c) {
                    Some(s) => *acc = s,
                    None => overflowed.push(t),
                },
                None => {
                    coeffs.insert(rest, c);
                }
            }
        }
        let mut out: Vec<Expr> = Vec::with_capacity(coeffs.len() + 1);
        if !constant.is_zero() {
            out.push(Expr::num(constant));
        }
        for (rest, c) in coeffs {
            if c.is_zero() {
                continue;
            }
            out.push(Expr::with_coefficient(c, rest));
        }
        out.extend(overflowed);
        match out.len() {
            0 => Expr::zero(),
            1 => out.pop().unwrap(),
            _ => {
                out.sort();
                Expr::wrap(Node::Add(out))
            }
        }
    }

    /// Splits `c*rest` with `c` rational. `rest` is `1` for constants.
    pub fn split_coefficient(&self) -> (Rational, Expr) {
        match self.node() {
            Node::Num(r) => (*r, Expr::one()),
            Node::Mul(fs) => {
                if let Some(r) = fs[0].as_rational() {
                    let rest: Vec<Expr> = fs[1..].to_vec();
                    let rest = if rest.len() == 1 {
                        rest.into_iter().next().unwrap()
                    } else {
                        Expr::wrap(Node::Mul(rest))
                    };
                    (r, rest)
                } else {
                    (Rational::ONE, self.clone())
                }
            }
            _ => (Rational::ONE, self.clone()),
        }
    }

    fn with_coefficient(c: Rational, rest: Expr) -> Expr {
        if c.is_one() {
            return rest;
        }
        if rest.is_one_literal() {
            return Expr::num(c);
        }
        let mut fs = Vec::new();
        fs.push(Expr::num(c));
        match rest.node() {
            Node::Mul(inner) => fs.extend(inner.iter().cloned()),
            _ => fs.push(rest),
        }
        Expr::wrap(Node::Mul(fs))
    }

    pub fn mul(factors: Vec<Expr>) -> Expr {
        let mut flat = Vec::with_capacity(factors.len());
        for f in factors {
            match f.node() {
                Node::Mul(inner) => flat.extend(inner.iter().cloned()),
                _ => flat.push(f),
            }
        }
        let mut coef = Rational::ONE;
        let mut extra_numbers: Vec<Expr> = Vec::new();
        let mut exp_args: Vec<Expr> = Vec::new();
        let mut powers: BTreeMap<Expr, Vec<Expr>> = BTreeMap::new();
        for f in flat {
            match f.node() {
                Node::Num(r) => {
                    if r.is_zero() {
                        return Expr::zero();
                    }
                    match coef.checked_mul(*r) {
                        Some(c) => coef = c,
                        None => extra_numbers.push(f.clone()),
                    }
                }
                Node::Call(Func::Exp, a) => exp_args.push(a.clone()),
                Node::Pow(b, e) if b.as_rational().is_none() => {
                    powers.entry(b.clone()).or_default().push(e.clone());
                }
                _ => powers.entry(f.clone()).or_default().push(Expr::one()),
            }
        }
        let mut out: Vec<Expr> = Vec::new();
        let mut rebuilt: Vec<Expr> = Vec::new();
        for (base, exps) in powers {
            let e = if exps.len() == 1 {
                exps.into_iter().next().unwrap()
            } else {
                Expr::add(exps)
            };
            rebuilt.push(Expr::pow(base, e));
        }
        if !exp_args.is_empty() {
            rebuilt.push(Expr::call(Func::Exp, Expr::add(exp_args)));
        }
        // re-flatten: pow/exp folding may have produced numbers or products
        let mut again = false;
        for f in rebuilt {
            match f.node() {
                Node::Num(r) => match coef.checked_mul(*r) {
                    Some(c) => coef = c,
                    None => extra_numbers.push(f.clone()),
                },
                Node::Mul(_) => {
                    again = true;
                    out.push(f);
                }
                _ => out.push(f),
            }
        }
        if again {
            let mut all = out;
            all.push(Expr::num(coef));
            all.extend(extra_numbers);
            return Expr::mul_flat_no_merge(all);
        }
        if coef.is_zero() {
            return Expr::zero();
        }
        if !coef.is_one() && extra_numbers.is_empty() && out.len() == 1 {
            if let Node::Add(ts) = out[0].node() {
                // numeric coefficients distribute over a lone sum
                let c = Expr::num(coef);
                return Expr::add(
                    ts.iter()
                        .map(|t| Expr::mul(alloc::vec![c.clone(), t.clone()]))
                        .collect(),
                );
            }
        }
        out.sort();
        out.extend(extra_numbers);
        if !coef.is_one() {
            out.insert(0, Expr::num(coef));
        }
        match out.len() {
            0 => Expr::one(),
            1 => out.pop().unwrap(),
            _ => Expr::wrap(Node::Mul(out)),
        }
    }

    /// Fallback used when a merged power unfolded into a product; flattens
    /// and folds numbers once more but does not recurse into merging.
    fn mul_flat_no_merge(factors: Vec<Expr>) -> Expr {
        let mut coef = Rational::ONE;
        let mut out = Vec::new();
        let mut stack = factors;
        while let Some(f) = stack.pop() {
            match f.node() {
                Node::Mul(inner) => stack.extend(inner.iter().cloned()),
                Node::Num(r) => match coef.checked_mul(*r) {
                    Some(c) => coef = c,
                    None => out.push(f.clone()),
                },
                _ => out.push(f),
            }
        }
        if coef.is_zero() {
            return Expr::zero();
        }
        // a second merge pass is safe now: bases are distinct from the
        // products that triggered the fallback
        let needs_merge = {
            let mut seen = BTreeSet::new();
            out.iter().any(|f| {
                let b = match f.node() {
                    Node::Pow(b, _) => b.clone(),
                    _ => f.clone(),
                };
                !seen.insert(b)
            })
        };
        if needs_merge {
            out.push(Expr::num(coef));
            return Expr::mul(out);
        }
        out.sort();
        if !coef.is_one() {
            out.insert(0, Expr::num(coef));
        }
        match out.len() {
            0 => Expr::one(),
            1 => out.pop().unwrap(),
            _ => Expr::wrap(Node::Mul(out)),
        }
    }

    pub fn pow(base: Expr, exp: Expr) -> Expr {
        if exp.is_zero_literal() {
            return Expr::one();
        }
        if exp.is_one_literal() {
            return base;
        }
        if base.is_one_literal() {
            return Expr::one();
        }
        if let (Some(b), Some(e)) = (base.as_rational(), exp.as_rational()) {
            if b.is_zero() && !e.is_negative() {
                return Expr::zero();
            }
            if let Some(r) = b.checked_pow(e) {
                return Expr::num(r);
            }
            if let (true, Some(r)) = (e.is_negative(), b.checked_pow(-e)) {
                // keep the radical in the numerator form r^(-1) only for rationals
                if let Some(inv) = Rational::ONE.checked_div(r) {
                    return Expr::num(inv);
                }
            }
        }
        let int_exp = exp.as_rational().filter(|r| r.is_integer());
        match base.node() {
            Node::Pow(b, e1) if int_exp.is_some() => {
                return Expr::pow(b.clone(), Expr::mul(alloc::vec![e1.clone(), exp]));
            }
            Node::Call(Func::Exp, a) => {
                return Expr::call(Func::Exp, Expr::mul(alloc::vec![a.clone(), exp]));
            }
            Node::Mul(fs) if int_exp.is_some() => {
                let parts = fs
                    .iter()
                    .map(|f| Expr::pow(f.clone(), exp.clone()))
                    .collect();
                return Expr::mul(parts);
            }
            _ => {}
        }
        Expr::wrap(Node::Pow(base, exp))
    }

    pub fn powi(base: Expr, n: i64) -> Expr {
        Expr::pow(base, Expr::int(n))
    }

    pub fn sqrt(a: Expr) -> Expr {
        Expr::pow(a, Expr::num(Rational::HALF))
    }

    pub fn recip(a: Expr) -> Expr {
        Expr::powi(a, -1)
    }

    pub fn call(f: Func, arg: Expr) -> Expr {
        if let Some(r) = arg.as_rational() {
            let folded = match f {
                Func::Exp | Func::Cosh if r.is_zero() => Some(Rational::ONE),
                Func::Cos if r.is_zero() => Some(Rational::ONE),
                Func::Ln if r.is_one() => Some(Rational::ZERO),
                Func::Sin | Func::Arctan | Func::Sinh if r.is_zero() => Some(Rational::ZERO),
                Func::Abs => Some(if r.is_negative() { -r } else { r }),
                Func::Sign => Some(Rational::integer(if r.is_zero() {
                    0
                } else if r.is_negative() {
                    -1
                } else {
                    1
                })),
                _ => None,
            };
            if let Some(v) = folded {
                return Expr::num(v);
            }
        }
        if let (Func::Ln, Node::Call(Func::Exp, a)) = (f, arg.node()) {
            return a.clone();
        }
        Expr::wrap(Node::Call(f, arg))
    }

    pub fn exp(a: Expr) -> Expr {
        Expr::call(Func::Exp, a)
    }

    pub fn ln(a: Expr) -> Expr {
        Expr::call(Func::Ln, a)
    }

    /// Formal antiderivative `F(arg)` with `F' = integrand` (written in `s`).
    pub fn antiderivative(integrand: Expr, arg: Expr, closed: Option<Expr>) -> Expr {
        Expr::wrap(Node::Integral(Antiderivative {
            integrand,
            arg,
            closed,
        }))
    }

    // ---- queries ----

    pub fn free_symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        let mut seen = BTreeSet::new();
        self.collect_symbols(&mut out, &mut seen);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<Symbol>, seen: &mut BTreeSet<usize>) {
        if !seen.insert(self.ptr_id()) {
            return;
        }
        match self.node() {
            Node::Num(_) => {}
            Node::Sym(s) => {
                out.insert(s.clone());
            }
            Node::Add(xs) | Node::Mul(xs) => {
                for x in xs {
                    x.collect_symbols(out, seen);
                }
            }
            Node::Pow(b, e) => {
                b.collect_symbols(out, seen);
                e.collect_symbols(out, seen);
            }
            Node::Call(_, a) => a.collect_symbols(out, seen),
            Node::Integral(ad) => {
                ad.arg.collect_symbols(out, seen);
                let mut inner = BTreeSet::new();
                ad.integrand
                    .collect_symbols(&mut inner, &mut BTreeSet::new());
                if let Some(c) = &ad.closed {
                    c.collect_symbols(&mut inner, &mut BTreeSet::new());
                }
                out.extend(inner.into_iter().filter(|s| s.as_str() != DUMMY));
            }
        }
    }

    pub fn depends_on(&self, s: &Symbol) -> bool {
        self.free_symbols().contains(s)
    }

    /// Number of distinct shared nodes.
    pub fn size(&self) -> usize {
        fn walk(e: &Expr, seen: &mut BTreeSet<usize>) {
            if !seen.insert(e.ptr_id()) {
                return;
            }
            match e.node() {
                Node::Add(xs) | Node::Mul(xs) => xs.iter().for_each(|x| walk(x, seen)),
                Node::Pow(b, p) => {
                    walk(b, seen);
                    walk(p, seen);
                }
                Node::Call(_, a) => walk(a, seen),
                Node::Integral(ad) => {
                    walk(&ad.arg, seen);
                    walk(&ad.integrand, seen);
                }
                _ => {}
            }
        }
        let mut seen = BTreeSet::new();
        walk(self, &mut seen);
        seen.len()
    }

    /// True when no antiderivative node without a closed form is present.
    pub fn has_open_antiderivative(&self) -> bool {
        match self.node() {
            Node::Num(_) | Node::Sym(_) => false,
            Node::Add(xs) | Node::Mul(xs) => xs.iter().any(Expr::has_open_antiderivative),
            Node::Pow(b, e) => b.has_open_antiderivative() || e.has_open_antiderivative(),
            Node::Call(_, a) => a.has_open_antiderivative(),
            Node::Integral(ad) => ad.closed.is_none() || ad.arg.has_open_antiderivative(),
        }
    }
}

// ---- operator sugar ----

impl core::ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::add(alloc::vec![self, rhs])
    }
}

impl core::ops::Add for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        Expr::add(alloc::vec![self.clone(), rhs.clone()])
    }
}

impl core::ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::add(alloc::vec![self, -rhs])
    }
}

impl core::ops::Sub for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        Expr::add(alloc::vec![self.clone(), -rhs.clone()])
    }
}

impl core::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::mul(alloc::vec![self, rhs])
    }
}

impl core::ops::Mul for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        Expr::mul(alloc::vec![self.clone(), rhs.clone()])
    }
}

impl core::ops::Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::mul(alloc::vec![self, Expr::recip(rhs)])
    }
}

impl core::ops::Div for &Expr {
    type Output = Expr;
    fn div(self, rhs: &Expr) -> Expr {
        Expr::mul(alloc::vec![self.clone(), Expr::recip(rhs.clone())])
    }
}

impl core::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::mul(alloc::vec![Expr::int(-1), self])
    }
}

impl core::ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::mul(alloc::vec![Expr::int(-1), self.clone()])
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl From<Rational> for Expr {
    fn from(r: Rational) -> Self {
        Expr::num(r)
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl serde::Serialize for Expr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Expr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = alloc::string::String::deserialize(d)?;
        crate::parse::parse(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn x() -> Expr {
        Expr::sym("x")
    }

    #[test]
    fn sums_flatten_and_collect() {
        let e = x() + (x() + Expr::int(2));
        let e = e - Expr::int(2);
        assert_eq!(e, Expr::int(2) * x());
        assert!((x() - x()).is_zero_literal());
    }

    #[test]
    fn powers_merge() {
        let e = Expr::pow(x(), Expr::frac(-4, 3)) * Expr::pow(x(), Expr::frac(4, 3));
        assert!(e.is_one_literal());
        let e = Expr::exp(x()) * Expr::exp(-x());
        assert!(e.is_one_literal());
        assert_eq!(x() * x(), Expr::powi(x(), 2));
    }

    #[test]
    fn zero_and_one_absorb() {
        assert!((Expr::zero() * Expr::exp(x())).is_zero_literal());
        assert_eq!(Expr::one() * x(), x());
        assert_eq!(Expr::pow(x(), Expr::one()), x());
        assert!(Expr::pow(x(), Expr::zero()).is_one_literal());
    }

    #[test]
    fn constants_fold() {
        assert_eq!(Expr::frac(1, 2) + Expr::frac(1, 3), Expr::frac(5, 6));
        assert_eq!(Expr::pow(Expr::int(4), Expr::frac(1, 2)), Expr::int(2));
        assert_eq!(Expr::pow(Expr::int(2), Expr::int(-2)), Expr::frac(1, 4));
    }

    #[test]
    fn antiderivative_symbols_exclude_dummy() {
        let ad = Expr::antiderivative(
            Expr::pow(Expr::sym("s"), Expr::sym("mu")),
            Expr::sym("u"),
            None,
        );
        let syms: Vec<_> = ad
            .free_symbols()
            .into_iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(syms, ["mu", "u"]);
        assert!(ad.has_open_antiderivative());
    }
}

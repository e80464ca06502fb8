//! Printer for the expression grammar accepted by [`crate::parse`].

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{self, Write};

use crate::expr::{Expr, Node};
use crate::rational::Rational;

const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;
const PREC_NEG: u8 = 3;
const PREC_POW: u8 = 4;
const PREC_ATOM: u8 = 5;

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self)
    }
}

fn write_expr(out: &mut dyn Write, e: &Expr) -> fmt::Result {
    match e.node() {
        Node::Add(terms) => {
            for (i, t) in terms.iter().enumerate() {
                let (c, rest) = t.split_coefficient();
                if i == 0 {
                    write_prec(out, t, PREC_ADD)?;
                } else if c.is_negative() {
                    out.write_str(" - ")?;
                    let pos = if rest.is_one_literal() {
                        Expr::num(-c)
                    } else {
                        Expr::mul(alloc::vec![Expr::num(-c), rest])
                    };
                    write_prec(out, &pos, PREC_MUL)?;
                } else {
                    out.write_str(" + ")?;
                    write_prec(out, t, PREC_MUL)?;
                }
            }
            Ok(())
        }
        Node::Mul(_) => write_product(out, e),
        Node::Num(r) => write!(out, "{}", r),
        Node::Sym(s) => out.write_str(s.as_str()),
        Node::Pow(b, x) => {
            if let Some(r) = x.as_rational().filter(|r| r.is_negative()) {
                out.write_str("1/")?;
                return write_prec(out, &Expr::pow(b.clone(), Expr::num(-r)), PREC_POW);
            }
            write_prec(out, b, PREC_ATOM)?;
            out.write_char('^')?;
            write_prec(out, x, PREC_ATOM)
        }
        Node::Call(func, a) => {
            out.write_str(func.name())?;
            out.write_char('(')?;
            write_expr(out, a)?;
            out.write_char(')')
        }
        Node::Integral(ad) => {
            out.write_str("int(")?;
            write_expr(out, &ad.integrand)?;
            out.write_str(", ")?;
            write_expr(out, &ad.arg)?;
            if let Some(c) = &ad.closed {
                out.write_str(", ")?;
                write_expr(out, c)?;
            }
            out.write_char(')')
        }
    }
}

fn precedence(e: &Expr) -> u8 {
    match e.node() {
        Node::Add(_) => PREC_ADD,
        Node::Mul(_) => {
            if e.split_coefficient().0.is_negative() {
                PREC_NEG
            } else {
                PREC_MUL
            }
        }
        Node::Num(r) => {
            if r.is_negative() {
                PREC_NEG
            } else if r.is_integer() {
                PREC_ATOM
            } else {
                PREC_MUL
            }
        }
        Node::Pow(_, x) => {
            if x.as_rational().is_some_and(Rational::is_negative) {
                PREC_MUL
            } else {
                PREC_POW
            }
        }
        Node::Sym(_) | Node::Call(..) | Node::Integral(_) => PREC_ATOM,
    }
}

/// Writes `e`, parenthesised when it binds looser than `min`.
fn write_prec(out: &mut dyn Write, e: &Expr, min: u8) -> fmt::Result {
    if precedence(e) < min {
        out.write_char('(')?;
        write_expr(out, e)?;
        out.write_char(')')
    } else {
        write_expr(out, e)
    }
}

fn write_product(out: &mut dyn Write, e: &Expr) -> fmt::Result {
    let (c, rest) = e.split_coefficient();
    let factors: Vec<Expr> = match rest.node() {
        Node::Mul(fs) => fs.clone(),
        _ if rest.is_one_literal() => Vec::new(),
        _ => alloc::vec![rest.clone()],
    };
    let mut num: Vec<Expr> = Vec::new();
    let mut den: Vec<Expr> = Vec::new();
    for f in factors {
        match f.node() {
            Node::Pow(b, x) if x.as_rational().is_some_and(Rational::is_negative) => {
                let r = x.as_rational().unwrap();
                den.push(Expr::pow(b.clone(), Expr::num(-r)));
            }
            _ => num.push(f),
        }
    }
    if c.is_negative() {
        out.write_char('-')?;
    }
    let cn = c.numer().unsigned_abs();
    let cd = c.denom();
    let mut first = true;
    if cn != 1 || num.is_empty() {
        write!(out, "{}", cn)?;
        first = false;
    }
    for f in &num {
        if !first {
            out.write_char('*')?;
        }
        write_prec(out, f, PREC_POW)?;
        first = false;
    }
    let den_count = den.len() + usize::from(cd != 1);
    if den_count == 0 {
        return Ok(());
    }
    out.write_char('/')?;
    if den_count > 1 {
        out.write_char('(')?;
    }
    let mut first = true;
    if cd != 1 {
        write!(out, "{}", cd)?;
        first = false;
    }
    for f in &den {
        if !first {
            out.write_char('*')?;
        }
        write_prec(out, f, PREC_POW)?;
        first = false;
    }
    if den_count > 1 {
        out.write_char(')')?;
    }
    Ok(())
}

/// Renders an expression into a fresh `String`.
pub fn to_string(e: &Expr) -> String {
    let mut s = String::new();
    let _ = write_expr(&mut s, e);
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn fractions_and_signs() {
        let x = Expr::sym("x");
        let u = Expr::sym("u");
        assert_eq!((Expr::frac(-3, 2) * x.clone()).to_string(), "-3*x/2");
        assert_eq!(
            (x.clone() / (Expr::int(2) * u.clone())).to_string(),
            "x/(2*u)"
        );
        assert_eq!((x.clone() - u.clone()).to_string(), "x - u");
        assert_eq!(
            Expr::pow(x.clone(), Expr::frac(-4, 3)).to_string(),
            "1/x^(4/3)"
        );
        assert_eq!(
            Expr::pow(x.clone() + u.clone(), Expr::int(2)).to_string(),
            "(u + x)^2"
        );
    }
}

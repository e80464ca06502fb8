//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr    = term { ("+" | "-") term }
//! term    = unary { ("*" | "/") unary }
//! unary   = ("-" | "+") unary | power
//! power   = atom [ "^" unary ]
//! atom    = number | ident | ident "(" args ")" | "(" expr ")"
//! number  = digits [ "." digits ]
//! ident   = letter { letter | digit | "_" }
//! ```
//!
//! Known calls: `exp ln log abs sign arctan atan sin cos sinh cosh sqrt`
//! and `int(integrand, arg[, closed])`, the antiderivative whose integrand
//! (and closed form) are written in the bound variable `s`.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use core::fmt;

use crate::expr::{Expr, Func};
use crate::rational::Rational;
use crate::symbol::{Symbol, SymbolKind, DUMMY};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at position {}: {}", self.position, self.message)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Op(char),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn err(&self, at: usize, msg: impl Into<String>) -> ParseError {
        ParseError {
            position: at,
            message: msg.into(),
        }
    }

    fn next(&mut self) -> Result<(usize, Tok), ParseError> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        if start >= bytes.len() {
            return Ok((start, Tok::End));
        }
        let c = bytes[start];
        if c.is_ascii_digit() || (c == b'.' && bytes.get(start + 1).is_some_and(u8::is_ascii_digit))
        {
            let mut end = start;
            while end < bytes.len() && bytes[end].is_ascii_digit() {
                end += 1;
            }
            let int_part = &self.src[start..end];
            let mut frac_part = "";
            if end < bytes.len() && bytes[end] == b'.' {
                let fs = end + 1;
                end = fs;
                while end < bytes.len() && bytes[end].is_ascii_digit() {
                    end += 1;
                }
                frac_part = &self.src[fs..end];
            }
            self.pos = end;
            let digits: String = [int_part, frac_part].concat();
            let num: i64 = digits
                .parse()
                .map_err(|_| self.err(start, "numeric literal out of range"))?;
            let den = 10i64
                .checked_pow(frac_part.len() as u32)
                .ok_or_else(|| self.err(start, "numeric literal out of range"))?;
            let r = Rational::new(num, den)
                .ok_or_else(|| self.err(start, "numeric literal out of range"))?;
            return Ok((start, Tok::Num(r)));
        }
        if c.is_ascii_alphabetic() {
            let mut end = start;
            while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_') {
                end += 1;
            }
            self.pos = end;
            return Ok((start, Tok::Ident(self.src[start..end].to_string())));
        }
        if b"+-*/^(),".contains(&c) {
            self.pos += 1;
            return Ok((start, Tok::Op(c as char)));
        }
        let ch = self.src[start..].chars().next().unwrap_or('?');
        Err(self.err(start, alloc::format!("unexpected character '{}'", ch)))
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
    tok: Tok,
    at: usize,
    allowed: Option<&'a BTreeSet<Symbol>>,
    /// Depth of `int(...)` integrands, where `s` is always bound.
    bound_depth: usize,
}

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<(), ParseError> {
        let (at, tok) = self.lex.next()?;
        self.at = at;
        self.tok = tok;
        Ok(())
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError {
            position: self.at,
            message: msg.into(),
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.tok == Tok::Op(c) {
            self.bump()
        } else {
            Err(self.err(alloc::format!("expected '{}'", c)))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = alloc::vec![self.term()?];
        loop {
            match self.tok {
                Tok::Op('+') => {
                    self.bump()?;
                    terms.push(self.term()?);
                }
                Tok::Op('-') => {
                    self.bump()?;
                    terms.push(-self.term()?);
                }
                _ => break,
            }
        }
        Ok(Expr::add(terms))
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.tok {
                Tok::Op('*') => {
                    self.bump()?;
                    acc = acc * self.unary()?;
                }
                Tok::Op('/') => {
                    self.bump()?;
                    acc = acc / self.unary()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.tok {
            Tok::Op('-') => {
                self.bump()?;
                Ok(-self.unary()?)
            }
            Tok::Op('+') => {
                self.bump()?;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.tok == Tok::Op('^') {
            self.bump()?;
            let exp = self.unary()?;
            return Ok(Expr::pow(base, exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.tok.clone() {
            Tok::Num(r) => {
                self.bump()?;
                Ok(Expr::num(r))
            }
            Tok::Op('(') => {
                self.bump()?;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let at = self.at;
                self.bump()?;
                if self.tok == Tok::Op('(') {
                    return self.call(&name, at);
                }
                self.identifier(&name, at)
            }
            Tok::End => Err(self.err("unexpected end of input")),
            Tok::Op(c) => Err(self.err(alloc::format!("unexpected '{}'", c))),
        }
    }

    fn identifier(&self, name: &str, at: usize) -> Result<Expr, ParseError> {
        let fail = |msg: String| ParseError {
            position: at,
            message: msg,
        };
        if name.ends_with('_') {
            return Err(fail(alloc::format!("malformed identifier '{}'", name)));
        }
        let sym = Symbol::new(name);
        let b = name.as_bytes();
        if b.len() >= 2 && matches!(b[0], b'u' | b'v' | b'w') && b[1] == b'_' && !sym.is_jet() {
            return Err(fail(alloc::format!(
                "malformed jet coordinate '{}' (write all x before t)",
                name
            )));
        }
        let bound = self.bound_depth > 0 && name == DUMMY;
        if let Some(allowed) = self.allowed {
            if !bound && sym.kind() != SymbolKind::Constant && !allowed.contains(&sym) {
                return Err(fail(alloc::format!("unknown identifier '{}'", name)));
            }
        }
        Ok(Expr::symbol(sym))
    }

    fn call(&mut self, name: &str, at: usize) -> Result<Expr, ParseError> {
        self.bump()?;
        if name == "int" {
            self.bound_depth += 1;
            let integrand = self.expr()?;
            self.bound_depth -= 1;
            self.expect(',')?;
            let arg = self.expr()?;
            let closed = if self.tok == Tok::Op(',') {
                self.bump()?;
                self.bound_depth += 1;
                let c = self.expr()?;
                self.bound_depth -= 1;
                Some(c)
            } else {
                None
            };
            self.expect(')')?;
            return Ok(Expr::antiderivative(integrand, arg, closed));
        }
        let arg = self.expr()?;
        self.expect(')')?;
        if name == "sqrt" {
            return Ok(Expr::sqrt(arg));
        }
        match Func::from_name(name) {
            Some(f) => Ok(Expr::call(f, arg)),
            None => Err(ParseError {
                position: at,
                message: alloc::format!("unknown function '{}'", name),
            }),
        }
    }
}

fn run(text: &str, allowed: Option<&BTreeSet<Symbol>>) -> Result<Expr, ParseError> {
    let mut p = Parser {
        lex: Lexer { src: text, pos: 0 },
        tok: Tok::End,
        at: 0,
        allowed,
        bound_depth: 0,
    };
    p.bump()?;
    let e = p.expr()?;
    if p.tok != Tok::End {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Parses `text`, accepting any identifier.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    run(text, None)
}

/// Parses `text`, rejecting identifiers outside `allowed` (`pi` is always
/// accepted, as is `s` inside antiderivative integrands).
pub fn parse_with(text: &str, allowed: &BTreeSet<Symbol>) -> Result<Expr, ParseError> {
    run(text, Some(allowed))
}

/// Collects symbol names into a set for [`parse_with`].
pub fn symbols(names: &[&str]) -> BTreeSet<Symbol> {
    names
        .iter()
        .map(|n| Symbol::new(n))
        .collect::<BTreeSet<_>>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn grammar_basics() {
        let e = parse("u^(-2)*u_x").unwrap();
        assert_eq!(e, Expr::powi(Expr::sym("u"), -2) * Expr::sym("u_x"));
        let f = parse("exp(-mu/x)*x^(-3)").unwrap();
        assert_eq!(f.to_string(), "exp(-mu/x)/x^3");
        assert_eq!(parse("-x^2").unwrap(), -Expr::powi(Expr::sym("x"), 2));
        assert_eq!(parse("2^3^2").unwrap(), Expr::int(512));
        assert_eq!(parse("0.25").unwrap(), Expr::frac(1, 4));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("u_").unwrap_err();
        assert_eq!(e.position, 0);
        let e = parse("x + u_tx").unwrap_err();
        assert_eq!(e.position, 4);
        assert_eq!(parse("(x").unwrap_err().position, 2);
        assert!(parse("foo(x)").is_err());
        assert!(parse("x $ 2").is_err());
    }

    #[test]
    fn strict_symbol_set() {
        let allowed = symbols(&["x", "u"]);
        assert!(parse_with("x*u + pi", &allowed).is_ok());
        let e = parse_with("x*k", &allowed).unwrap_err();
        assert!(e.message.contains("'k'"));
        assert!(parse_with("int(s^2, u)", &allowed).is_ok());
    }

    #[test]
    fn antiderivative_round_trip() {
        let e = parse("int(s^(-2), u, -1/s)").unwrap();
        assert_eq!(e.to_string(), "int(1/s^2, u, -1/s)");
        assert_eq!(parse(&e.to_string()).unwrap(), e);
    }
}

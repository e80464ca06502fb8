use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::diff::differentiate;
use crate::expr::Expr;
use crate::symbol::{Symbol, SymbolKind};

use super::JetError;

/// Independent variable of the jet space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Indep {
    T,
    X,
}

impl Indep {
    pub fn symbol(self) -> Symbol {
        Symbol::new(self.name())
    }

    pub fn name(self) -> &'static str {
        match self {
            Indep::T => "t",
            Indep::X => "x",
        }
    }
}

/// Jet space over `(t, x)` with dependent variables drawn from `u, v, w`.
///
/// Parameters may be declared as functions of base variables; their total
/// derivatives are then the derivative symbols `name_<args>` (for example
/// `alpha_x`, `alpha_tx` for `alpha(t, x)`).
#[derive(Clone, Debug, PartialEq)]
pub struct JetSpace {
    order: BTreeMap<char, u8>,
    functions: BTreeMap<Symbol, FunctionDecl>,
}

#[derive(Clone, Debug, PartialEq)]
struct FunctionDecl {
    head: Symbol,
    args: Vec<Symbol>,
    /// Derivative counts per argument.
    counts: Vec<u8>,
}

impl JetSpace {
    /// Each `(base, order)` pair declares a dependent variable and its
    /// maximal derivative order.
    pub fn new(deps: &[(char, u8)]) -> JetSpace {
        let mut order = BTreeMap::new();
        for &(b, n) in deps {
            assert!(
                matches!(b, 'u' | 'v' | 'w'),
                "unknown dependent variable {b}"
            );
            assert!(n >= 1, "order must be at least 1");
            order.insert(b, n);
        }
        JetSpace {
            order,
            functions: BTreeMap::new(),
        }
    }

    /// Declares `name` as a function of `args` (base variable names).
    pub fn with_function(mut self, name: &str, args: &[&str]) -> JetSpace {
        let args: Vec<Symbol> = args.iter().map(|a| Symbol::new(a)).collect();
        let head = Symbol::new(name);
        let n = args.len();
        self.functions.insert(
            head.clone(),
            FunctionDecl {
                head,
                args,
                counts: alloc::vec![0; n],
            },
        );
        self
    }

    pub fn dependents(&self) -> Vec<char> {
        self.order.keys().copied().collect()
    }

    pub fn max_order(&self, base: char) -> Option<u8> {
        self.order.get(&base).copied()
    }

    pub fn contains(&self, s: &Symbol) -> bool {
        match s.jet_parts() {
            Some((b, nx, nt)) => self.max_order(b).is_some_and(|m| nx + nt <= m),
            None => matches!(s.kind(), SymbolKind::Independent),
        }
    }

    fn function_derivative(&self, s: &Symbol, arg: usize) -> Option<Symbol> {
        let decl = self.lookup_function(s)?;
        let mut counts = decl.counts.clone();
        counts[arg] += 1;
        let mut name = alloc::string::String::from(decl.head.as_str());
        name.push('_');
        for (a, c) in decl.args.iter().zip(&counts) {
            for _ in 0..*c {
                name.push_str(a.as_str());
            }
        }
        Some(Symbol::new(&name))
    }

    fn lookup_function(&self, s: &Symbol) -> Option<FunctionDecl> {
        if let Some(d) = self.functions.get(s) {
            return Some(d.clone());
        }
        // derivative symbol `head_<args>`
        let (head, suffix) = s.as_str().split_once('_')?;
        let base = self.functions.get(&Symbol::new(head))?;
        let mut counts = alloc::vec![0u8; base.args.len()];
        let mut rest = suffix;
        while !rest.is_empty() {
            let (i, a) = base
                .args
                .iter()
                .enumerate()
                .find(|(_, a)| rest.starts_with(a.as_str()))?;
            counts[i] += 1;
            rest = &rest[a.as_str().len()..];
        }
        Some(FunctionDecl {
            head: base.head.clone(),
            args: base.args.clone(),
            counts,
        })
    }

    /// Total derivative `D_iv e`.
    pub fn total_derivative(&self, e: &Expr, iv: Indep) -> Result<Expr, JetError> {
        let mut terms = alloc::vec![differentiate(e, &iv.symbol())];
        for s in e.free_symbols() {
            let d_s = self.total_derivative_of_symbol(&s, iv)?;
            if d_s.is_zero_literal() {
                continue;
            }
            if matches!(s.kind(), SymbolKind::Independent) {
                continue;
            }
            terms.push(d_s * differentiate(e, &s));
        }
        Ok(Expr::add(terms))
    }

    /// `D_iv s` for a single symbol; explicit dependence on `iv` is handled
    /// by the caller.
    fn total_derivative_of_symbol(&self, s: &Symbol, iv: Indep) -> Result<Expr, JetError> {
        if let Some((b, nx, nt)) = s.jet_parts() {
            let (nx2, nt2) = match iv {
                Indep::X => (nx + 1, nt),
                Indep::T => (nx, nt + 1),
            };
            let max = self
                .max_order(b)
                .ok_or_else(|| JetError::UnknownCoordinate(s.clone()))?;
            if nx2 + nt2 > max {
                return Err(JetError::OrderOverflow(Symbol::jet(b, nx2, nt2)));
            }
            return Ok(Expr::symbol(Symbol::jet(b, nx2, nt2)));
        }
        if let Some(decl) = self.lookup_function(s) {
            let mut terms = Vec::new();
            for (i, a) in decl.args.iter().enumerate() {
                let da = if a.as_str() == iv.name() {
                    Expr::one()
                } else {
                    match a.jet_parts() {
                        Some(_) => self.total_derivative_of_symbol(a, iv)?,
                        None => Expr::zero(),
                    }
                };
                if !da.is_zero_literal() {
                    let fs = self.function_derivative(s, i).expect("declared function");
                    terms.push(Expr::symbol(fs) * da);
                }
            }
            return Ok(Expr::add(terms));
        }
        Ok(Expr::zero())
    }
}

/// Jet coordinates (including bare dependent variables) appearing in `e`.
pub fn jet_symbols(e: &Expr) -> Vec<Symbol> {
    e.free_symbols()
        .into_iter()
        .filter(Symbol::is_dependent_coordinate)
        .collect()
}

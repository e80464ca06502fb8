//! Symbol names and their classification.
//!
//! Every leaf of an expression that is not a number is a [`Symbol`]. The
//! role of a symbol is derived from its spelling:
//!
//! - `t`, `x` are independent variables; `u`, `v`, `w` dependent variables;
//!   `z` and `s` are auxiliary variables (`s` is the bound variable of
//!   antiderivative nodes).
//! - `u_x`, `v_xt`, `w_t`, ... are jet coordinates: a dependent variable,
//!   an underscore and a multi-index written with all `x` before all `t`.
//! - `pi` is the only named numeric constant.
//! - anything else is a parameter (`mu`, `nu`, `c1`, `k`, `phi_v`, ...).

use alloc::string::String;
use alloc::sync::Arc;
use core::fmt;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

/// Name of the dummy variable used inside antiderivative nodes.
pub const DUMMY: &str = "s";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolKind {
    /// `t` or `x`.
    Independent,
    /// `u`, `v` or `w`.
    Dependent,
    /// `z`, `s`.
    Auxiliary,
    /// `base_<x..x><t..t>` with at least one derivative.
    Jet {
        base: char,
        nx: u8,
        nt: u8,
    },
    Constant,
    Parameter,
}

impl Symbol {
    pub fn new(name: &str) -> Symbol {
        Symbol(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn kind(&self) -> SymbolKind {
        classify(&self.0)
    }

    pub fn is_jet(&self) -> bool {
        matches!(self.kind(), SymbolKind::Jet { .. })
    }

    pub fn is_parameter(&self) -> bool {
        matches!(self.kind(), SymbolKind::Parameter)
    }

    /// Dependent variables and their jet coordinates.
    pub fn is_dependent_coordinate(&self) -> bool {
        matches!(self.kind(), SymbolKind::Dependent | SymbolKind::Jet { .. })
    }

    /// The jet coordinate `base_J`, or the bare dependent variable for the
    /// empty multi-index.
    pub fn jet(base: char, nx: u8, nt: u8) -> Symbol {
        if nx == 0 && nt == 0 {
            let mut s = String::new();
            s.push(base);
            return Symbol::new(&s);
        }
        let mut s = String::with_capacity(2 + (nx + nt) as usize);
        s.push(base);
        s.push('_');
        for _ in 0..nx {
            s.push('x');
        }
        for _ in 0..nt {
            s.push('t');
        }
        Symbol::new(&s)
    }

    /// `(base, nx, nt)` for dependent variables and jet coordinates.
    pub fn jet_parts(&self) -> Option<(char, u8, u8)> {
        match self.kind() {
            SymbolKind::Dependent => Some((self.0.chars().next()?, 0, 0)),
            SymbolKind::Jet { base, nx, nt } => Some((base, nx, nt)),
            _ => None,
        }
    }

    pub fn order(&self) -> u8 {
        self.jet_parts().map(|(_, nx, nt)| nx + nt).unwrap_or(0)
    }
}

fn classify(name: &str) -> SymbolKind {
    match name {
        "t" | "x" => return SymbolKind::Independent,
        "u" | "v" | "w" => return SymbolKind::Dependent,
        "z" | "s" => return SymbolKind::Auxiliary,
        "pi" => return SymbolKind::Constant,
        _ => {}
    }
    let bytes = name.as_bytes();
    if bytes.len() >= 3 && matches!(bytes[0], b'u' | b'v' | b'w') && bytes[1] == b'_' {
        let idx = &bytes[2..];
        let nx = idx.iter().take_while(|&&c| c == b'x').count();
        let rest = &idx[nx..];
        if rest.iter().all(|&c| c == b't') && idx.len() <= 8 {
            return SymbolKind::Jet {
                base: bytes[0] as char,
                nx: nx as u8,
                nt: rest.len() as u8,
            };
        }
    }
    SymbolKind::Parameter
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

impl serde::Serialize for Symbol {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> serde::Deserialize<'de> for Symbol {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Ok(Symbol::new(&s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification() {
        assert_eq!(Symbol::new("t").kind(), SymbolKind::Independent);
        assert_eq!(Symbol::new("w").kind(), SymbolKind::Dependent);
        assert_eq!(
            Symbol::new("v_xt").kind(),
            SymbolKind::Jet {
                base: 'v',
                nx: 1,
                nt: 1
            }
        );
        assert_eq!(Symbol::new("u_tx").kind(), SymbolKind::Parameter);
        assert_eq!(Symbol::new("phi_v").kind(), SymbolKind::Parameter);
        assert_eq!(Symbol::new("mu").kind(), SymbolKind::Parameter);
        assert_eq!(Symbol::new("pi").kind(), SymbolKind::Constant);
    }

    #[test]
    fn jet_names_round_trip() {
        let s = Symbol::jet('u', 2, 1);
        assert_eq!(s.as_str(), "u_xxt");
        assert_eq!(s.jet_parts(), Some(('u', 2, 1)));
        assert_eq!(Symbol::jet('v', 0, 0).as_str(), "v");
        assert_eq!(s.order(), 3);
    }
}

//! Numeric evaluation in IEEE doubles.
//!
//! Expressions are compiled once into a [`Tape`] (a topologically ordered
//! list of operations over the shared DAG) and then evaluated at many
//! points. Alongside each value the tape propagates a *magnitude*: a bound
//! on the size of the subterms that were combined to produce it, used as
//! the scale for relative zero tests.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::expr::{Expr, Func, Node};
use crate::subst::expand_closed_forms;
use crate::symbol::{Symbol, DUMMY};

/// Symbol to value bindings.
pub type Bindings = BTreeMap<Symbol, f64>;

#[derive(Debug, Clone, PartialEq)]
pub enum EvalError {
    /// Value outside the domain of an operation, e.g. `ln(-1)` or `0^-1`.
    Domain(String),
    Unbound(Symbol),
    /// Antiderivative without closed form where quadrature is disabled.
    OpenAntiderivative,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::Domain(m) => write!(f, "domain error: {}", m),
            EvalError::Unbound(s) => write!(f, "unbound symbol '{}'", s),
            EvalError::OpenAntiderivative => f.write_str("antiderivative without closed form"),
        }
    }
}

#[derive(Clone, Debug)]
enum Op {
    Const(f64),
    Var(usize),
    Add(Vec<usize>),
    Mul(Vec<usize>),
    /// Base slot, exponent, and for rational exponents the denominator
    /// (to take odd roots of negative bases).
    PowConst(usize, f64, i64),
    Pow(usize, usize),
    Call(Func, usize),
    Quad(usize, usize),
}

/// A compiled expression.
#[derive(Clone, Debug)]
pub struct Tape {
    vars: Vec<Symbol>,
    ops: Vec<Op>,
    /// Integrands of open antiderivatives, each over `vars` plus `s`.
    inner: Vec<Tape>,
    quadrature: bool,
}

/// A value with its magnitude.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scaled {
    pub value: f64,
    pub mag: f64,
}

struct Compiler {
    vars: Vec<Symbol>,
    var_index: BTreeMap<Symbol, usize>,
    ops: Vec<Op>,
    inner: Vec<Tape>,
    memo: BTreeMap<usize, (Expr, usize)>,
    quadrature: bool,
}

impl Compiler {
    fn slot(&mut self, e: &Expr) -> Result<usize, EvalError> {
        if let Some((_, i)) = self.memo.get(&e.ptr_id()) {
            return Ok(*i);
        }
        let op = match e.node() {
            Node::Num(r) => Op::Const(r.to_f64()),
            Node::Sym(s) if s.as_str() == "pi" => Op::Const(core::f64::consts::PI),
            Node::Sym(s) => match self.var_index.get(s) {
                Some(&i) => Op::Var(i),
                None => return Err(EvalError::Unbound(s.clone())),
            },
            Node::Add(ts) => Op::Add(ts.iter().map(|t| self.slot(t)).collect::<Result<_, _>>()?),
            Node::Mul(fs) => Op::Mul(fs.iter().map(|t| self.slot(t)).collect::<Result<_, _>>()?),
            Node::Pow(b, x) => {
                let bs = self.slot(b)?;
                match x.as_rational() {
                    Some(r) => Op::PowConst(bs, r.to_f64(), r.denom()),
                    None => Op::Pow(bs, self.slot(x)?),
                }
            }
            Node::Call(f, a) => Op::Call(*f, self.slot(a)?),
            Node::Integral(ad) => {
                if ad.closed.is_some() {
                    let expanded = expand_closed_forms(e);
                    let i = self.slot(&expanded)?;
                    self.memo.insert(e.ptr_id(), (e.clone(), i));
                    return Ok(i);
                }
                if !self.quadrature {
                    return Err(EvalError::OpenAntiderivative);
                }
                let arg = self.slot(&ad.arg)?;
                let mut vars = self.vars.clone();
                vars.push(Symbol::new(DUMMY));
                let t = Tape::compile_inner(&ad.integrand, &vars, true)?;
                self.inner.push(t);
                Op::Quad(self.inner.len() - 1, arg)
            }
        };
        self.ops.push(op);
        let i = self.ops.len() - 1;
        self.memo.insert(e.ptr_id(), (e.clone(), i));
        Ok(i)
    }
}

fn domain(msg: &str) -> EvalError {
    EvalError::Domain(String::from(msg))
}

impl Tape {
    /// Compiles `e` over the ordered variable list `vars`. Antiderivatives
    /// must carry closed forms.
    pub fn compile(e: &Expr, vars: &[Symbol]) -> Result<Tape, EvalError> {
        Tape::compile_inner(e, vars, false)
    }

    /// As [`Tape::compile`], but antiderivatives without a closed form are
    /// evaluated by adaptive quadrature from the base point `1`.
    pub fn compile_with_quadrature(e: &Expr, vars: &[Symbol]) -> Result<Tape, EvalError> {
        Tape::compile_inner(e, vars, true)
    }

    fn compile_inner(e: &Expr, vars: &[Symbol], quadrature: bool) -> Result<Tape, EvalError> {
        let mut c = Compiler {
            vars: vars.to_vec(),
            var_index: vars
                .iter()
                .enumerate()
                .map(|(i, s)| (s.clone(), i))
                .collect(),
            ops: Vec::new(),
            inner: Vec::new(),
            memo: BTreeMap::new(),
            quadrature,
        };
        c.slot(e)?;
        Ok(Tape {
            vars: c.vars,
            ops: c.ops,
            inner: c.inner,
            quadrature,
        })
    }

    pub fn vars(&self) -> &[Symbol] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn uses_quadrature(&self) -> bool {
        self.quadrature && !self.inner.is_empty()
    }

    pub fn eval(&self, values: &[f64]) -> Result<f64, EvalError> {
        self.eval_scaled(values).map(|s| s.value)
    }

    /// Evaluates with leaf magnitudes `|value|`.
    pub fn eval_scaled(&self, values: &[f64]) -> Result<Scaled, EvalError> {
        let mut buf = Vec::with_capacity(self.ops.len());
        self.run(values, None, &mut buf)
    }

    /// Evaluates with caller-supplied leaf magnitudes.
    pub fn eval_with_mags(
        &self,
        values: &[f64],
        mags: &[f64],
        buf: &mut Vec<Scaled>,
    ) -> Result<Scaled, EvalError> {
        self.run(values, Some(mags), buf)
    }

    fn run(
        &self,
        values: &[f64],
        mags: Option<&[f64]>,
        buf: &mut Vec<Scaled>,
    ) -> Result<Scaled, EvalError> {
        buf.clear();
        for op in &self.ops {
            let s = match op {
                Op::Const(c) => Scaled {
                    value: *c,
                    mag: c.abs(),
                },
                Op::Var(i) => Scaled {
                    value: values[*i],
                    mag: mags.map_or(values[*i].abs(), |m| m[*i]),
                },
                Op::Add(xs) => {
                    let mut v = 0.0;
                    let mut m = 0.0;
                    for &i in xs {
                        v += buf[i].value;
                        m += buf[i].mag;
                    }
                    Scaled { value: v, mag: m }
                }
                Op::Mul(xs) => {
                    let mut v = 1.0;
                    let mut m = 1.0;
                    for &i in xs {
                        v *= buf[i].value;
                        m *= buf[i].mag;
                    }
                    Scaled { value: v, mag: m }
                }
                Op::PowConst(b, c, den) => {
                    let bv = buf[*b];
                    let v = pow_const(bv.value, *c, *den)?;
                    let rel = if bv.value != 0.0 {
                        bv.mag / bv.value.abs()
                    } else {
                        1.0
                    };
                    Scaled {
                        value: v,
                        mag: v.abs() * libm::fmax(1.0, c.abs() * rel),
                    }
                }
                Op::Pow(b, x) => {
                    let bv = buf[*b];
                    let xv = buf[*x];
                    if bv.value <= 0.0 {
                        return Err(domain("non-positive base with symbolic exponent"));
                    }
                    let v = libm::pow(bv.value, xv.value);
                    let rel = bv.mag / bv.value;
                    let lnb = libm::log(bv.value).abs();
                    Scaled {
                        value: v,
                        mag: v.abs() * libm::fmax(1.0, xv.value.abs() * rel + lnb * xv.mag),
                    }
                }
                Op::Call(f, a) => {
                    let av = buf[*a];
                    let (v, dv) = call(*f, av.value)?;
                    Scaled {
                        value: v,
                        mag: libm::fmax(v.abs(), dv.abs() * av.mag),
                    }
                }
                Op::Quad(t, a) => {
                    let av = buf[*a];
                    let inner = &self.inner[*t];
                    let mut vals: Vec<f64> = values.to_vec();
                    vals.push(0.0);
                    let n = vals.len() - 1;
                    let mut f = |s: f64| -> Result<f64, EvalError> {
                        vals[n] = s;
                        inner.eval(&vals)
                    };
                    let v = integrate(&mut f, 1.0, av.value)?;
                    let dv = f(av.value)?;
                    Scaled {
                        value: v,
                        mag: libm::fmax(v.abs(), dv.abs() * av.mag) + 1e-9 * v.abs(),
                    }
                }
            };
            if !s.value.is_finite() {
                return Err(domain("non-finite intermediate value"));
            }
            buf.push(s);
        }
        Ok(*buf.last().expect("tape is never empty"))
    }
}

fn pow_const(b: f64, c: f64, den: i64) -> Result<f64, EvalError> {
    if b == 0.0 && c < 0.0 {
        return Err(domain("division by zero"));
    }
    if den != 1 && b < 0.0 {
        if den % 2 == 1 {
            // odd root of a negative base: sign follows the numerator parity
            let num = libm::round(c * den as f64) as i64;
            let mag = libm::pow(-b, c);
            return Ok(if num % 2 == 0 { mag } else { -mag });
        }
        return Err(domain("even root of a negative number"));
    }
    Ok(libm::pow(b, c))
}

/// Function value and derivative.
fn call(f: Func, a: f64) -> Result<(f64, f64), EvalError> {
    Ok(match f {
        Func::Exp => {
            let v = libm::exp(a);
            (v, v)
        }
        Func::Ln => {
            if a <= 0.0 {
                return Err(domain("logarithm of a non-positive number"));
            }
            (libm::log(a), 1.0 / a)
        }
        Func::Abs => (a.abs(), 1.0),
        Func::Sign => {
            if a == 0.0 {
                return Err(domain("sign at zero"));
            }
            (if a > 0.0 { 1.0 } else { -1.0 }, 0.0)
        }
        Func::Arctan => (libm::atan(a), 1.0 / (1.0 + a * a)),
        Func::Sin => (libm::sin(a), libm::cos(a)),
        Func::Cos => (libm::cos(a), libm::sin(a)),
        Func::Sinh => (libm::sinh(a), libm::cosh(a)),
        Func::Cosh => (libm::cosh(a), libm::sinh(a)),
    })
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
pub fn integrate<F>(f: &mut F, a: f64, b: f64) -> Result<f64, EvalError>
where
    F: FnMut(f64) -> Result<f64, EvalError>,
{
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a)?;
    let fb = f(b)?;
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let scale = (b - a).abs() * (fa.abs() + fm.abs() + fb.abs());
    simpson(f, a, b, fa, fm, fb, whole, 1e-15 * scale.max(1e-300), 48)
}

#[allow(clippy::too_many_arguments)]
fn simpson<F>(
    f: &mut F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64, EvalError>
where
    F: FnMut(f64) -> Result<f64, EvalError>,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    Ok(simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)?
        + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)?)
}

/// Evaluates `e` with every free symbol bound in `b`.
pub fn eval_numeric(e: &Expr, b: &Bindings) -> Result<f64, EvalError> {
    let vars: Vec<Symbol> = b.keys().cloned().collect();
    let values: Vec<f64> = b.values().copied().collect();
    Tape::compile(e, &vars)?.eval(&values)
}

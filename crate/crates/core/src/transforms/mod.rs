//! Equivalence transformations of the class, their action on arbitrary
//! elements, and the potential maps acting on `(t, x, u, v)`.

mod integrate;
mod invert;
mod push;
mod sample;

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::catalog::ArbitraryElements;
use crate::diff::differentiate;
use crate::domain::{Domain, Sampler, VarDomain};
use crate::eval::Tape;
use crate::expr::Expr;
use crate::jet::{JetError, BASE};
use crate::rational::Rational;
use crate::subst::{substitute, substitute_one, ExprBindings};
use crate::symbol::Symbol;
use crate::zero::{is_zero, ZeroConfig, ZeroError};

pub use integrate::antiderivative;
pub use invert::invert;
pub use push::{
    gauge_operator_residual, operator, push_forward_solution, push_forward_vectorfield,
    solution_residuals, transform_equations, Solution,
};
pub use sample::{
    gauge_identity_error, random_elements, random_instance, random_nonzero, random_rational,
    Constructor,
};

const CHECK_SEED: u64 = 0x7a11;

#[derive(Clone, Debug, PartialEq)]
pub enum TransformError {
    /// A nondegeneracy condition fails.
    Degenerate(String),
    /// An integral needed by the map has no closed form in the table.
    NonElementary {
        integrand: Expr,
        element: String,
    },
    /// The x-component of a map cannot be inverted in closed form.
    NoInverse(Expr),
    /// `X_x` vanishes or changes sign on the domain.
    NotMonotone(Expr),
    /// The image of the domain is empty or not an interval.
    DomainCollapse(String),
    /// The stored inverse does not undo the map.
    RoundTrip(String),
    /// The transformation does not act on arbitrary elements.
    NotAnEquivalence,
    Precondition(String),
    /// A solution fails an equation before or after the transformation.
    NotASolution {
        equation: usize,
        stage: &'static str,
        residual: f64,
    },
    SingularJacobian,
    Jet(JetError),
    Zero(ZeroError),
}

impl fmt::Display for TransformError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransformError::Degenerate(c) => write!(f, "degenerate parameters: {} fails", c),
            TransformError::NonElementary { integrand, element } => {
                write!(
                    f,
                    "no elementary antiderivative of {} (required by {})",
                    integrand, element
                )
            }
            TransformError::NoInverse(e) => write!(f, "no closed-form inverse of {}", e),
            TransformError::NotMonotone(e) => write!(f, "map {} is not monotone on the domain", e),
            TransformError::DomainCollapse(m) => write!(f, "domain collapse: {}", m),
            TransformError::RoundTrip(m) => write!(f, "inverse check failed: {}", m),
            TransformError::NotAnEquivalence => {
                f.write_str("transformation does not act on arbitrary elements")
            }
            TransformError::Precondition(m) => write!(f, "precondition violated: {}", m),
            TransformError::NotASolution {
                equation,
                stage,
                residual,
            } => {
                write!(
                    f,
                    "{} solution violates equation {} (residual {:.3e})",
                    stage,
                    equation + 1,
                    residual
                )
            }
            TransformError::SingularJacobian => {
                f.write_str("non-invertible Jacobian at a sampled point")
            }
            TransformError::Jet(e) => write!(f, "{}", e),
            TransformError::Zero(e) => write!(f, "{}", e),
        }
    }
}

impl From<JetError> for TransformError {
    fn from(e: JetError) -> Self {
        TransformError::Jet(e)
    }
}

impl From<ZeroError> for TransformError {
    fn from(e: ZeroError) -> Self {
        TransformError::Zero(e)
    }
}

/// `δ1..δ9`, `ε1..ε4` and the spatial map `X(x)`. The domain is where the
/// map is used; it decides monotonicity and inverse branches.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformationParameters {
    pub delta: [Rational; 9],
    pub epsilon: [Rational; 4],
    pub x_map: Expr,
    pub domain: Domain,
}

impl Default for TransformationParameters {
    fn default() -> Self {
        let (one, zero) = (Rational::ONE, Rational::ZERO);
        TransformationParameters {
            delta: [one, zero, one, zero, one, zero, one, zero, one],
            epsilon: [one, one, one, zero],
            x_map: Expr::sym("x"),
            domain: Domain::new(),
        }
    }
}

impl TransformationParameters {
    /// `δ_j`, one-based.
    pub fn d(&self, j: usize) -> Expr {
        Expr::num(self.delta[j - 1])
    }

    /// `ε_i`, one-based.
    pub fn e(&self, i: usize) -> Expr {
        Expr::num(self.epsilon[i - 1])
    }

    pub fn with_delta(mut self, j: usize, r: Rational) -> Self {
        self.delta[j - 1] = r;
        self
    }

    pub fn with_epsilon(mut self, i: usize, r: Rational) -> Self {
        self.epsilon[i - 1] = r;
        self
    }

    pub fn with_x_map(mut self, x: Expr) -> Self {
        self.x_map = x;
        self
    }

    pub fn with_domain(mut self, d: Domain) -> Self {
        self.domain = d;
        self
    }

    fn nonzero(
        &self,
        deltas: &[usize],
        epsilons: &[usize],
        label: &str,
    ) -> Result<(), TransformError> {
        let zero = deltas.iter().any(|&j| self.delta[j - 1].is_zero())
            || epsilons.iter().any(|&i| self.epsilon[i - 1].is_zero());
        if zero {
            return Err(TransformError::Degenerate(label.to_string()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransformKind {
    Identity,
    Usual,
    Extended,
    Gauge,
    G1Preserving,
    Hodograph,
    PotentialShift,
    Composite,
}

impl TransformKind {
    pub fn name(self) -> &'static str {
        match self {
            TransformKind::Identity => "identity",
            TransformKind::Usual => "usual",
            TransformKind::Extended => "extended",
            TransformKind::Gauge => "gauge",
            TransformKind::G1Preserving => "g1-preserving",
            TransformKind::Hodograph => "hodograph",
            TransformKind::PotentialShift => "potential-shift",
            TransformKind::Composite => "composite",
        }
    }
}

/// Action on arbitrary elements, with factors written in the old `x`:
/// `f~ = f_factor*f`, `g~ = g_factor*g`, `h~ = h_factor*h`,
/// `A~ = a_factor*A`, `B~ = b_factor*B + ba_factor*A`.
#[derive(Clone, Debug, PartialEq)]
pub struct ElementMap {
    pub f: Expr,
    pub g: Expr,
    pub h: Expr,
    pub a: Expr,
    pub b: Expr,
    pub ba: Expr,
}

impl ElementMap {
    fn identity() -> ElementMap {
        ElementMap {
            f: Expr::one(),
            g: Expr::one(),
            h: Expr::one(),
            a: Expr::one(),
            b: Expr::one(),
            ba: Expr::zero(),
        }
    }
}

/// A point transformation of `(t, x, u, v, w)`, given by the new
/// coordinates in terms of the old ones and the reverse, with its action
/// on arbitrary elements when it belongs to the equivalence group.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceTransformation {
    pub kind: TransformKind,
    pub forward: [Expr; 5],
    pub inverse: [Expr; 5],
    pub elements: Option<ElementMap>,
    /// Domain of the old variables.
    pub domain: Domain,
}

fn coords() -> [Expr; 5] {
    BASE.map(Expr::sym)
}

fn sym(name: &str) -> Symbol {
    Symbol::new(name)
}

fn vanishes(e: &Expr, d: &Domain) -> Result<bool, TransformError> {
    if e.is_zero_literal() {
        return Ok(true);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(CHECK_SEED);
    Ok(is_zero(e, d, &ZeroConfig::default().with_trials(40), &mut rng)?.is_zero)
}

/// Simultaneous substitution of the base variables by `map`.
pub(crate) fn compose_map(e: &Expr, map: &[Expr; 5]) -> Expr {
    let b: ExprBindings = BASE
        .iter()
        .zip(map.iter())
        .map(|(n, m)| (sym(n), m.clone()))
        .collect();
    substitute(e, &b)
}

/// Samples `e` along `var` on the domain and returns the range when `e` is
/// finite and strictly monotone there.
fn image_interval(e: &Expr, var: &Symbol, d: &Domain) -> Option<VarDomain> {
    let mut syms: Vec<Symbol> = alloc::vec![var.clone()];
    syms.extend(
        e.free_symbols()
            .into_iter()
            .filter(|s| s != var && s.as_str() != "pi"),
    );
    let tape = Tape::compile(e, &syms).ok()?;
    let sampler = Sampler::new(d, &syms).ok()?;
    let iv = d.interval(var)?;
    let mut rng = ChaCha8Rng::seed_from_u64(CHECK_SEED);
    let mut point = Vec::new();
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    let rounds = if sampler.has_parameters() { 3 } else { 1 };
    for _ in 0..rounds {
        sampler.draw_parameters(&mut rng, &mut point).ok()?;
        let n = 64;
        let mut vals = Vec::with_capacity(n + 1);
        for k in 0..=n {
            point[0] = iv.lo + (iv.hi - iv.lo) * (k as f64) / (n as f64);
            let v = tape.eval(&point).ok()?;
            if !v.is_finite() {
                return None;
            }
            vals.push(v);
        }
        let up = vals.windows(2).all(|w| w[1] > w[0]);
        let down = vals.windows(2).all(|w| w[1] < w[0]);
        if !up && !down {
            return None;
        }
        let (a, b) = (vals[0].min(vals[n]), vals[0].max(vals[n]));
        lo = lo.max(a);
        hi = hi.min(b);
    }
    (lo < hi).then(|| VarDomain::new(lo, hi))
}

/// The derivative `X_x` must be finite, nonzero and of one sign.
fn check_monotone(x_map: &Expr, d: &Domain) -> Result<(), TransformError> {
    let x = sym("x");
    let dx = differentiate(x_map, &x);
    if dx.is_zero_literal() {
        return Err(TransformError::NotMonotone(x_map.clone()));
    }
    let bad = || TransformError::NotMonotone(x_map.clone());
    let mut syms: Vec<Symbol> = alloc::vec![x.clone()];
    syms.extend(
        dx.free_symbols()
            .into_iter()
            .filter(|s| *s != x && s.as_str() != "pi"),
    );
    let tape = Tape::compile(&dx, &syms).map_err(|_| bad())?;
    let sampler = Sampler::new(d, &syms).map_err(|_| bad())?;
    let iv = d.interval(&x).ok_or_else(bad)?;
    let mut rng = ChaCha8Rng::seed_from_u64(CHECK_SEED);
    let mut point = Vec::new();
    let mut sign = 0.0;
    for _ in 0..3 {
        sampler
            .draw_parameters(&mut rng, &mut point)
            .map_err(|_| bad())?;
        for k in 0..=64 {
            point[0] = iv.lo + (iv.hi - iv.lo) * (k as f64) / 64.0;
            let v = tape.eval(&point).map_err(|_| bad())?;
            if !v.is_finite() || v == 0.0 || v * sign < 0.0 {
                return Err(bad());
            }
            sign = v.signum();
        }
    }
    Ok(())
}

fn only_x(e: &Expr) -> Result<(), TransformError> {
    for s in e.free_symbols() {
        if matches!(s.as_str(), "t" | "u" | "v" | "w") || s.is_jet() {
            return Err(TransformError::Precondition(alloc::format!(
                "X must depend on x only, found {}",
                s
            )));
        }
    }
    Ok(())
}

/// `∫ e dx` from the table, or an error naming `element`.
fn integral(e: &Expr, element: &str) -> Result<Expr, TransformError> {
    antiderivative(e, &sym("x")).ok_or_else(|| TransformError::NonElementary {
        integrand: e.clone(),
        element: element.to_string(),
    })
}

fn invert_x(x_map: &Expr, d: &Domain) -> Result<Expr, TransformError> {
    let x = sym("x");
    let y = sym("y__");
    let g = invert(x_map, &x, &y, d).ok_or_else(|| TransformError::NoInverse(x_map.clone()))?;
    Ok(substitute_one(&g, &y, &Expr::sym("x")))
}

impl EquivalenceTransformation {
    /// Builds a transformation and checks both round trips numerically.
    fn finish(
        kind: TransformKind,
        forward: [Expr; 5],
        inverse: [Expr; 5],
        elements: Option<ElementMap>,
        domain: Domain,
    ) -> Result<Self, TransformError> {
        let t = EquivalenceTransformation {
            kind,
            forward,
            inverse,
            elements,
            domain,
        };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<(), TransformError> {
        let image = self.image_domain();
        for (i, name) in BASE.iter().enumerate() {
            let back = compose_map(&self.inverse[i], &self.forward) - Expr::sym(name);
            if !vanishes(&back, &self.domain)? {
                return Err(TransformError::RoundTrip(alloc::format!(
                    "inverse after forward moves {}",
                    name
                )));
            }
            let there = compose_map(&self.forward[i], &self.inverse) - Expr::sym(name);
            if !vanishes(&there, &image)? {
                return Err(TransformError::RoundTrip(alloc::format!(
                    "forward after inverse moves {}",
                    name
                )));
            }
        }
        Ok(())
    }

    /// Domain of the new variables: each coordinate that depends on its own
    /// old counterpart only is mapped through its range; the rest keep the
    /// default intervals. Parameter intervals carry over.
    pub fn image_domain(&self) -> Domain {
        let mut d = Domain::new();
        for (k, v) in &self.domain.vars {
            if !BASE.contains(&k.as_str()) {
                d.vars.insert(k.clone(), v.clone());
            }
        }
        for (i, name) in BASE.iter().enumerate() {
            let s = sym(name);
            let other = self.forward[i]
                .free_symbols()
                .into_iter()
                .any(|f| BASE.contains(&f.as_str()) && f != s);
            if other || !self.forward[i].depends_on(&s) {
                continue;
            }
            if let Some(iv) = image_interval(&self.forward[i], &s, &self.domain) {
                d.vars.insert(s, iv);
            }
        }
        for c in &self.domain.positive {
            d.positive.push(compose_map(c, &self.inverse));
        }
        d
    }

    pub fn identity() -> EquivalenceTransformation {
        EquivalenceTransformation {
            kind: TransformKind::Identity,
            forward: coords(),
            inverse: coords(),
            elements: Some(ElementMap::identity()),
            domain: Domain::new(),
        }
    }

    /// True when every coordinate and element factor is numerically the
    /// identity on the domain.
    pub fn is_identity(&self) -> Result<bool, TransformError> {
        for (i, name) in BASE.iter().enumerate() {
            if !vanishes(&(self.forward[i].clone() - Expr::sym(name)), &self.domain)? {
                return Ok(false);
            }
        }
        if let Some(m) = &self.elements {
            for (e, want) in [
                (&m.f, 1),
                (&m.g, 1),
                (&m.h, 1),
                (&m.a, 1),
                (&m.b, 1),
                (&m.ba, 0),
            ] {
                if !vanishes(&(e.clone() - Expr::int(want)), &self.domain)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Evaluates the forward map at a point of `(t, x, u, v, w)` with the
    /// given parameter values.
    pub fn apply_point(
        &self,
        point: &[f64; 5],
        params: &[(Symbol, f64)],
    ) -> Result<[f64; 5], crate::eval::EvalError> {
        let mut b: crate::eval::Bindings = BASE
            .iter()
            .zip(point.iter())
            .map(|(n, v)| (sym(n), *v))
            .collect();
        b.extend(params.iter().cloned());
        let mut out = [0.0; 5];
        for i in 0..5 {
            out[i] = crate::eval::eval_numeric(&self.forward[i], &b)?;
        }
        Ok(out)
    }
}

/// Class transformations `t~ = δ1 t + δ2, x~ = X(x), u~ = δ3 u + δ4` with
/// the given element factors.
fn class_map(
    kind: TransformKind,
    p: &TransformationParameters,
    x_map: Expr,
    elements: ElementMap,
    domain: Domain,
) -> Result<EquivalenceTransformation, TransformError> {
    only_x(&x_map)?;
    check_monotone(&x_map, &domain)?;
    let x_inv = invert_x(&x_map, &domain)?;
    let forward = [
        p.d(1) * Expr::sym("t") + p.d(2),
        x_map,
        p.d(3) * Expr::sym("u") + p.d(4),
        Expr::sym("v"),
        Expr::sym("w"),
    ];
    let inverse = [
        (Expr::sym("t") - p.d(2)) / p.d(1),
        x_inv,
        (Expr::sym("u") - p.d(4)) / p.d(3),
        Expr::sym("v"),
        Expr::sym("w"),
    ];
    EquivalenceTransformation::finish(kind, forward, inverse, Some(elements), domain)
}

/// Gauge factor `exp(-ε4 ∫(h/g) dx)`.
fn gauge_factor(eps4: &Rational, el: &ArbitraryElements) -> Result<Expr, TransformError> {
    if eps4.is_zero() || el.h.is_zero_literal() {
        return Ok(Expr::one());
    }
    let ratio = &el.h / &el.g;
    let label = alloc::format!("h/g = {}", ratio);
    let i = integral(&ratio, &label)?;
    Ok(Expr::exp(-(Expr::num(*eps4) * i)))
}

fn element_domain(p: &TransformationParameters, el: &ArbitraryElements) -> Domain {
    el.sampling_domain().merged(&p.domain)
}

/// `t~ = δ1 t + δ2, x~ = X(x), u~ = δ3 u + δ4`, `f~ = ε1 δ1 f/X_x`,
/// `g~ = ε1/ε2 X_x g`, `h~ = ε1/ε3 h`, `A~ = ε2 A`, `B~ = ε3 B`.
pub fn usual_equivalence(
    p: &TransformationParameters,
) -> Result<EquivalenceTransformation, TransformError> {
    p.nonzero(&[1, 3], &[1, 2, 3], "δ1δ3ε1ε2ε3 ≠ 0")?;
    let xx = differentiate(&p.x_map, &sym("x"));
    let m = ElementMap {
        f: p.e(1) * p.d(1) / xx.clone(),
        g: p.e(1) / p.e(2) * xx,
        h: p.e(1) / p.e(3),
        a: p.e(2),
        b: p.e(3),
        ba: Expr::zero(),
    };
    class_map(
        TransformKind::Usual,
        p,
        p.x_map.clone(),
        m,
        p.domain.clone(),
    )
}

/// The usual group extended by the gauge factor `φ = exp(-ε4 ∫(h/g))` and
/// `B~ = ε3 (B + ε4 A)`. The factor depends on the elements it is built for.
pub fn extended_equivalence(
    p: &TransformationParameters,
    el: &ArbitraryElements,
) -> Result<EquivalenceTransformation, TransformError> {
    p.nonzero(&[1, 3], &[1, 2, 3], "δ1δ3ε1ε2ε3 ≠ 0")?;
    let phi = gauge_factor(&p.epsilon[3], el)?;
    let xx = differentiate(&p.x_map, &sym("x"));
    let m = ElementMap {
        f: p.e(1) * p.d(1) * phi.clone() / xx.clone(),
        g: p.e(1) / p.e(2) * xx * phi.clone(),
        h: p.e(1) / p.e(3) * phi,
        a: p.e(2),
        b: p.e(3),
        ba: p.e(3) * p.e(4),
    };
    class_map(
        TransformKind::Extended,
        p,
        p.x_map.clone(),
        m,
        element_domain(p, el),
    )
}

/// Gauge transformations: `t, x, u` fixed, `f~ = ε1 φ f`, `g~ = ε1/ε2 φ g`,
/// `h~ = ε1/ε3 φ h`, `A~ = ε2 A`, `B~ = ε3 (B + ε4 A)`.
pub fn gauge_transform(
    p: &TransformationParameters,
    el: &ArbitraryElements,
) -> Result<EquivalenceTransformation, TransformError> {
    p.nonzero(&[], &[1, 2, 3], "ε1ε2ε3 ≠ 0")?;
    let phi = gauge_factor(&p.epsilon[3], el)?;
    let m = ElementMap {
        f: p.e(1) * phi.clone(),
        g: p.e(1) / p.e(2) * phi.clone(),
        h: p.e(1) / p.e(3) * phi,
        a: p.e(2),
        b: p.e(3),
        ba: p.e(3) * p.e(4),
    };
    EquivalenceTransformation::finish(
        TransformKind::Gauge,
        coords(),
        coords(),
        Some(m),
        element_domain(p, el),
    )
}

/// Transformations preserving `g = 1`: with `I = ∫h dx`,
/// `x~ = δ5 ∫exp(δ8 I) dx + δ6`, `f~ = δ1 δ9/δ5 f exp(-2 δ8 I)`,
/// `h~ = δ9/δ7 h exp(-δ8 I)`, `A~ = δ5 δ9 A`, `B~ = δ7 (B + δ8 A)`.
pub fn g1_preserving(
    p: &TransformationParameters,
    el: &ArbitraryElements,
) -> Result<EquivalenceTransformation, TransformError> {
    p.nonzero(&[1, 3, 5, 7, 9], &[], "δ1δ3δ5δ7δ9 ≠ 0")?;
    let domain = element_domain(p, el);
    if !vanishes(&(el.g.clone() - Expr::one()), &domain)? {
        return Err(TransformError::Precondition(String::from("g = 1")));
    }
    let label = alloc::format!("h = {}", el.h);
    let (x_map, weight) = if p.delta[7].is_zero() {
        (p.d(5) * Expr::sym("x") + p.d(6), Expr::one())
    } else {
        let i = integral(&el.h, &label)?;
        let weight = Expr::exp(p.d(8) * i);
        (p.d(5) * integral(&weight, &label)? + p.d(6), weight)
    };
    let m = ElementMap {
        f: p.d(1) * p.d(9) / p.d(5) / Expr::powi(weight.clone(), 2),
        g: Expr::one(),
        h: p.d(9) / p.d(7) / weight,
        a: p.d(5) * p.d(9),
        b: p.d(7),
        ba: p.d(7) * p.d(8),
    };
    class_map(TransformKind::G1Preserving, p, x_map, m, domain)
}

/// `x~ = ∫dx/g` with the remaining parameters trivial, mapping the class
/// to its `g = 1` form.
pub fn reduction_to_unit_g(
    el: &ArbitraryElements,
) -> Result<EquivalenceTransformation, TransformError> {
    let x_map = integral(
        &Expr::recip(el.g.clone()),
        &alloc::format!("1/g = 1/({})", el.g),
    )?;
    let p = TransformationParameters::default()
        .with_x_map(x_map)
        .with_domain(el.sampling_domain());
    usual_equivalence(&p)
}

/// `t~ = t, x~ = v, u~ = 1/u, v~ = x`.
pub fn hodograph() -> EquivalenceTransformation {
    let map = [
        Expr::sym("t"),
        Expr::sym("v"),
        Expr::recip(Expr::sym("u")),
        Expr::sym("x"),
        Expr::sym("w"),
    ];
    EquivalenceTransformation {
        kind: TransformKind::Hodograph,
        forward: map.clone(),
        inverse: map,
        elements: None,
        domain: Domain::new(),
    }
}

/// `t~ = t, x~ = x + ε v, u~ = u/(1 + ε u), v~ = v`; requires
/// `1 + ε u != 0` on the domain.
pub fn potential_shift(
    eps: Rational,
    domain: &Domain,
) -> Result<EquivalenceTransformation, TransformError> {
    let e = Expr::num(eps);
    let u = Expr::sym("u");
    let denom = Expr::one() + e.clone() * u.clone();
    if !eps.is_zero()
        && image_interval(&denom, &sym("u"), domain).is_none_or(|iv| iv.lo <= 0.0 && iv.hi >= 0.0)
    {
        return Err(TransformError::Precondition(String::from(
            "1 + ε u != 0 on the domain",
        )));
    }
    let forward = [
        Expr::sym("t"),
        Expr::sym("x") + e.clone() * Expr::sym("v"),
        u.clone() / denom,
        Expr::sym("v"),
        Expr::sym("w"),
    ];
    let inverse = [
        Expr::sym("t"),
        Expr::sym("x") - e.clone() * Expr::sym("v"),
        u.clone() / (Expr::one() - e * u),
        Expr::sym("v"),
        Expr::sym("w"),
    ];
    EquivalenceTransformation::finish(
        TransformKind::PotentialShift,
        forward,
        inverse,
        None,
        domain.clone(),
    )
}

/// The stored inverse as a transformation in its own right.
pub fn inverse(t: &EquivalenceTransformation) -> Result<EquivalenceTransformation, TransformError> {
    let elements = match &t.elements {
        Some(m) => {
            let back = |e: &Expr| compose_map(e, &t.inverse);
            Some(ElementMap {
                f: Expr::recip(back(&m.f)),
                g: Expr::recip(back(&m.g)),
                h: Expr::recip(back(&m.h)),
                a: Expr::recip(m.a.clone()),
                b: Expr::recip(m.b.clone()),
                ba: -(m.ba.clone() / (m.b.clone() * m.a.clone())),
            })
        }
        None => None,
    };
    let kind = if t.kind == TransformKind::Hodograph {
        t.kind
    } else {
        TransformKind::Composite
    };
    EquivalenceTransformation::finish(
        kind,
        t.inverse.clone(),
        t.forward.clone(),
        elements,
        t.image_domain(),
    )
}

/// `second ∘ first`: apply `first`, then `second`.
pub fn compose(
    first: &EquivalenceTransformation,
    second: &EquivalenceTransformation,
) -> Result<EquivalenceTransformation, TransformError> {
    let forward = second
        .forward
        .clone()
        .map(|e| compose_map(&e, &first.forward));
    let inverse = first
        .inverse
        .clone()
        .map(|e| compose_map(&e, &second.inverse));
    let elements = match (&first.elements, &second.elements) {
        (Some(m1), Some(m2)) => {
            let at = |e: &Expr| compose_map(e, &first.forward);
            Some(ElementMap {
                f: at(&m2.f) * m1.f.clone(),
                g: at(&m2.g) * m1.g.clone(),
                h: at(&m2.h) * m1.h.clone(),
                a: m2.a.clone() * m1.a.clone(),
                b: m2.b.clone() * m1.b.clone(),
                ba: m2.b.clone() * m1.ba.clone() + m2.ba.clone() * m1.a.clone(),
            })
        }
        _ => None,
    };
    EquivalenceTransformation::finish(
        TransformKind::Composite,
        forward,
        inverse,
        elements,
        first.domain.clone(),
    )
}

/// New elements `(f~, g~, h~, A~, B~)` as functions of `x~` and `u~`, with
/// antiderivatives carried over and the sampling domain mapped through the
/// transformation.
pub fn apply_to_elements(
    t: &EquivalenceTransformation,
    el: &ArbitraryElements,
) -> Result<ArbitraryElements, TransformError> {
    let m = t
        .elements
        .as_ref()
        .ok_or(TransformError::NotAnEquivalence)?;
    let old = el.sampling_domain();
    let x = sym("x");
    let u = sym("u");
    let x_img = image_interval(&t.forward[1], &x, &old).ok_or_else(|| {
        TransformError::DomainCollapse(alloc::format!(
            "x~ = {} is not monotone on the x interval",
            t.forward[1]
        ))
    })?;
    let u_img = image_interval(&t.forward[2], &u, &old).ok_or_else(|| {
        TransformError::DomainCollapse(alloc::format!(
            "u~ = {} is not monotone on the u interval",
            t.forward[2]
        ))
    })?;
    let to_new = |e: &Expr| compose_map(e, &t.inverse);
    let du = differentiate(&t.forward[2], &u);
    let int_a = el
        .int_a
        .as_ref()
        .map(|ia| to_new(&(m.a.clone() * du.clone() * ia.clone())));
    let int_b = match (&el.int_b, &el.int_a) {
        (Some(ib), _) if m.ba.is_zero_literal() => {
            Some(to_new(&(m.b.clone() * du.clone() * ib.clone())))
        }
        (Some(ib), Some(ia)) => Some(to_new(
            &(du.clone() * (m.b.clone() * ib.clone() + m.ba.clone() * ia.clone())),
        )),
        _ => None,
    };
    let mut domain = Domain::new();
    for (k, v) in &el.domain.vars {
        if !["x", "u"].contains(&k.as_str()) {
            domain.vars.insert(k.clone(), v.clone());
        }
    }
    domain.vars.insert(x, x_img);
    domain.vars.insert(u, u_img);
    for c in &el.domain.positive {
        domain.positive.push(to_new(c));
    }
    Ok(ArbitraryElements {
        f: to_new(&(m.f.clone() * el.f.clone())),
        g: to_new(&(m.g.clone() * el.g.clone())),
        h: to_new(&(m.h.clone() * el.h.clone())),
        a: to_new(&(m.a.clone() * el.a.clone())),
        b: to_new(&(m.b.clone() * el.b.clone() + m.ba.clone() * el.a.clone())),
        int_a,
        int_b,
        parameters: el.parameters.clone(),
        domain,
        conditions: el.conditions.clone(),
    })
}

#[cfg(test)]
mod tests;

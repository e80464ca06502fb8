//! Random instances of the transformation constructors.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog::ArbitraryElements;
use crate::domain::{Domain, Sampler};
use crate::eval::Tape;
use crate::expr::Expr;
use crate::parse::parse;
use crate::rational::Rational;
use crate::symbol::Symbol;

use super::{
    extended_equivalence, g1_preserving, gauge_operator_residual, gauge_transform, potential_shift,
    usual_equivalence, EquivalenceTransformation, TransformError, TransformationParameters,
};

const F: [&str; 5] = ["1", "x", "x^(-4/3)", "exp(x)", "x^2 + 1"];
const G: [&str; 5] = ["1", "x", "x^2", "exp(x)", "x^(1/2)"];
/// Values of `h/g` with a closed-form antiderivative.
const RATIO: [&str; 6] = ["1", "x", "1/x", "exp(-x)", "x^2", "ln(x)/x"];
const A: [&str; 5] = ["u^(-2)", "exp(u)", "1 + u^2", "u^(1/2)", "u^(-2/3)"];
const B: [&str; 5] = ["0", "u", "u^(-1)", "ln(u)", "u^2"];
const X: [&str; 7] = [
    "a*x + b",
    "x^3",
    "x^2",
    "exp(a*x)",
    "ln(x)",
    "x/(x + 1)",
    "a/x",
];

/// The five constructors exercised by round-trip checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constructor {
    Usual,
    Extended,
    Gauge,
    G1Preserving,
    PotentialShift,
}

impl Constructor {
    pub const ALL: [Constructor; 5] = [
        Constructor::Usual,
        Constructor::Extended,
        Constructor::Gauge,
        Constructor::G1Preserving,
        Constructor::PotentialShift,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Constructor::Usual => "usual",
            Constructor::Extended => "extended",
            Constructor::Gauge => "gauge",
            Constructor::G1Preserving => "g1-preserving",
            Constructor::PotentialShift => "potential-shift",
        }
    }
}

fn p(text: &str) -> Expr {
    parse(text).expect("sample expression")
}

/// A nonzero rational `n/d` with `|n| <= 12`, `1 <= d <= 4`.
pub fn random_nonzero<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    loop {
        let n = rng.gen_range(-12..=12);
        if n != 0 {
            return Rational::new(n, rng.gen_range(1..=4)).expect("small rational");
        }
    }
}

pub fn random_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    Rational::new(rng.gen_range(-12..=12), rng.gen_range(1..=4)).expect("small rational")
}

fn pick<'a, R: Rng + ?Sized>(rng: &mut R, xs: &[&'a str]) -> &'a str {
    xs.choose(rng).copied().expect("nonempty table")
}

/// Elements whose `h/g` has a closed-form antiderivative.
pub fn random_elements<R: Rng + ?Sized>(rng: &mut R) -> ArbitraryElements {
    let g = p(pick(rng, &G));
    let h = g.clone() * p(pick(rng, &RATIO));
    let mut el = ArbitraryElements::parse(pick(rng, &F), "0", pick(rng, &A), pick(rng, &B));
    el.g = g;
    el.h = h;
    el
}

fn random_x_map<R: Rng + ?Sized>(rng: &mut R) -> Expr {
    let a = Expr::num(random_nonzero(rng));
    let b = Expr::num(random_rational(rng));
    let mut bind = crate::subst::ExprBindings::new();
    bind.insert(Symbol::new("a"), a);
    bind.insert(Symbol::new("b"), b);
    crate::subst::substitute(&p(pick(rng, &X)), &bind)
}

fn random_class_parameters<R: Rng + ?Sized>(rng: &mut R) -> TransformationParameters {
    let mut q = TransformationParameters::default();
    for j in [1, 3, 5, 7, 9] {
        q.delta[j - 1] = random_nonzero(rng);
    }
    for j in [2, 4, 6] {
        q.delta[j - 1] = random_rational(rng);
    }
    q.delta[7] = Rational::new(rng.gen_range(-4..=4), 2).expect("small rational");
    for i in 1..=3 {
        q.epsilon[i - 1] = random_nonzero(rng);
    }
    q.epsilon[3] = random_rational(rng);
    q.x_map = random_x_map(rng);
    q
}

/// A random transformation from `c`, with the elements it acts on.
pub fn random_instance<R: Rng + ?Sized>(
    c: Constructor,
    rng: &mut R,
) -> Result<(EquivalenceTransformation, ArbitraryElements), TransformError> {
    let q = random_class_parameters(rng);
    let el = random_elements(rng);
    let t = match c {
        Constructor::Usual => usual_equivalence(&q)?,
        Constructor::Extended => extended_equivalence(&q, &el)?,
        Constructor::Gauge => gauge_transform(&q, &el)?,
        Constructor::G1Preserving => {
            let mut el = el;
            el.g = Expr::one();
            el.h = Expr::num(random_rational(rng));
            let t = g1_preserving(&q, &el)?;
            return Ok((t, el));
        }
        Constructor::PotentialShift => {
            let eps = Rational::new(rng.gen_range(-4..=4), 10).expect("small rational");
            potential_shift(eps, &Domain::new())?
        }
    };
    Ok((t, el))
}

/// Largest relative difference between the two sides of the gauge
/// identity at `points` random jet points; differences are measured
/// against the magnitude of the terms of each side.
pub fn gauge_identity_error(
    t: &EquivalenceTransformation,
    el: &ArbitraryElements,
    points: usize,
    seed: u64,
) -> Result<f64, TransformError> {
    let (lhs, rhs) = gauge_operator_residual(t, el)?;
    let mut syms: Vec<Symbol> = Vec::new();
    for e in [&lhs, &rhs] {
        for s in e.free_symbols() {
            if !syms.contains(&s) && s.as_str() != "pi" {
                syms.push(s);
            }
        }
    }
    let eval_err = |e| TransformError::Jet(crate::jet::JetError::Eval(e));
    let sample_err = |e| TransformError::Jet(crate::jet::JetError::Sample(e));
    let tl = Tape::compile(&lhs, &syms).map_err(eval_err)?;
    let tr = Tape::compile(&rhs, &syms).map_err(eval_err)?;
    let sampler = Sampler::new(&el.sampling_domain(), &syms).map_err(sample_err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut point = Vec::new();
    sampler
        .draw_parameters(&mut rng, &mut point)
        .map_err(sample_err)?;
    let mut worst: f64 = 0.0;
    let mut good = 0;
    let mut attempts = 0;
    while good < points && attempts < 20 * points.max(1) {
        attempts += 1;
        sampler
            .draw_point(&mut rng, &mut point)
            .map_err(sample_err)?;
        let (Ok(l), Ok(r)) = (tl.eval_scaled(&point), tr.eval_scaled(&point)) else {
            continue;
        };
        if !(l.value.is_finite() && r.value.is_finite()) {
            continue;
        }
        good += 1;
        let scale = l.mag.max(r.mag).max(f64::MIN_POSITIVE);
        worst = worst.max((l.value - r.value).abs() / scale);
    }
    if good < points {
        return Err(TransformError::Zero(crate::zero::ZeroError::Inconclusive {
            attempts,
            last: alloc::string::String::from("gauge identity sampling"),
        }));
    }
    Ok(worst)
}

//! Transformation specs: a transformation and the objects it acts on.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use symkit_core::catalog::{build_equation, ArbitraryElements, Catalog};
use symkit_core::jet::{DifferentialSystem, VectorField, BASE};
use symkit_core::subst::substitute_one;
use symkit_core::transforms::{
    apply_to_elements, extended_equivalence, g1_preserving, gauge_transform, hodograph, invert,
    potential_shift, push_forward_solution, push_forward_vectorfield, reduction_to_unit_g,
    transform_equations, usual_equivalence, EquivalenceTransformation, Solution,
    TransformationParameters,
};
use symkit_core::{parse, Domain, Expr, Rational, Symbol};

/// Largest denominator used when a decimal parameter is read as a rational.
const MAX_DENOMINATOR: i64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformSpec {
    pub transformation: TransformationSpec,
    #[serde(default)]
    pub target: Target,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpecKind {
    Identity,
    Usual,
    Extended,
    Gauge,
    G1Preserving,
    ReductionToUnitG,
    Hodograph,
    PotentialShift,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformationSpec {
    pub kind: SpecKind,
    /// `delta1`..`delta9`, `eps1`..`eps4`, `X` and, for the potential
    /// shift, `eps`.
    #[serde(default)]
    pub parameters: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Target {
    #[serde(default)]
    pub elements: Option<ArbitraryElements>,
    /// Potential system case built from the elements.
    #[serde(default)]
    pub case: Option<String>,
    /// Catalog algebra entry supplying elements, case and generators.
    #[serde(default)]
    pub algebra: Option<String>,
    #[serde(default)]
    pub solution: Option<SolutionSpec>,
    #[serde(default)]
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionSpec {
    pub u: Expr,
    #[serde(default)]
    pub v: Option<Expr>,
    #[serde(default)]
    pub domain: Option<Domain>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneratorImage {
    pub id: String,
    pub generator: String,
    pub image: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolutionImage {
    pub u: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransformOutput {
    pub kind: String,
    /// New variables in terms of the old ones, in the order t, x, u, v, w.
    pub forward: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elements: Option<ArbitraryElements>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub system: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution: Option<SolutionImage>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<GeneratorImage>,
}

impl TransformOutput {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "transformation: {}", self.kind);
        for (b, e) in BASE.iter().zip(&self.forward) {
            let _ = writeln!(out, "  {}~ = {}", b, e);
        }
        if let Some(el) = &self.elements {
            let _ = writeln!(out, "elements:");
            let _ = writeln!(out, "  f = {}", el.f);
            let _ = writeln!(out, "  g = {}", el.g);
            let _ = writeln!(out, "  h = {}", el.h);
            let _ = writeln!(out, "  A = {}", el.a);
            let _ = writeln!(out, "  B = {}", el.b);
        }
        if !self.system.is_empty() {
            let _ = writeln!(out, "system:");
            for e in &self.system {
                let _ = writeln!(out, "  {}", e);
            }
        }
        if let Some(s) = &self.solution {
            let _ = writeln!(out, "solution:");
            let _ = writeln!(out, "  u = {}", s.u);
            if let Some(v) = &s.v {
                let _ = writeln!(out, "  v = {}", v);
            }
        }
        if !self.generators.is_empty() {
            let _ = writeln!(out, "generators:");
            for g in &self.generators {
                let _ = writeln!(out, "  {}: {} -> {}", g.id, g.generator, g.image);
            }
        }
        out
    }
}

fn rational(key: &str, v: &Value) -> Result<Rational, String> {
    let bad = || format!("parameter {}: expected a number or \"p/q\"", key);
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                return Ok(Rational::from(i));
            }
            let f = n.as_f64().ok_or_else(bad)?;
            Rational::approximate(f, MAX_DENOMINATOR).ok_or_else(bad)
        }
        Value::String(s) => parse(s).ok().and_then(|e| e.as_rational()).ok_or_else(bad),
        _ => Err(bad()),
    }
}

fn parameters(
    spec: &TransformationSpec,
    domain: &Domain,
) -> Result<TransformationParameters, String> {
    let mut p = TransformationParameters::default().with_domain(domain.clone());
    for (k, v) in &spec.parameters {
        if let Some(j) = k
            .strip_prefix("delta")
            .and_then(|j| j.parse::<usize>().ok())
            .filter(|j| (1..=9).contains(j))
        {
            p = p.with_delta(j, rational(k, v)?);
        } else if let Some(i) = k
            .strip_prefix("eps")
            .and_then(|i| i.parse::<usize>().ok())
            .filter(|i| (1..=4).contains(i))
        {
            p = p.with_epsilon(i, rational(k, v)?);
        } else if k == "X" {
            let text = v
                .as_str()
                .ok_or("parameter X: expected an expression string")?;
            p = p.with_x_map(parse(text).map_err(|e| format!("parameter X: {}", e))?);
        } else if k != "eps" {
            return Err(format!("unknown parameter {}", k));
        }
    }
    Ok(p)
}

fn need(el: Option<&ArbitraryElements>, kind: SpecKind) -> Result<&ArbitraryElements, String> {
    el.ok_or_else(|| format!("{:?} transformation needs target elements", kind).to_lowercase())
}

pub fn build_transformation(
    spec: &TransformationSpec,
    el: Option<&ArbitraryElements>,
) -> Result<EquivalenceTransformation, String> {
    let domain = el.map(|e| e.sampling_domain()).unwrap_or_default();
    let p = parameters(spec, &domain)?;
    let r = match spec.kind {
        SpecKind::Identity => Ok(EquivalenceTransformation::identity()),
        SpecKind::Usual => usual_equivalence(&p),
        SpecKind::Extended => extended_equivalence(&p, need(el, spec.kind)?),
        SpecKind::Gauge => gauge_transform(&p, need(el, spec.kind)?),
        SpecKind::G1Preserving => g1_preserving(&p, need(el, spec.kind)?),
        SpecKind::ReductionToUnitG => reduction_to_unit_g(need(el, spec.kind)?),
        SpecKind::Hodograph => Ok(hodograph()),
        SpecKind::PotentialShift => {
            let eps = spec
                .parameters
                .get("eps")
                .ok_or("potential-shift needs parameter eps")?;
            potential_shift(rational("eps", eps)?, &domain)
        }
    };
    r.map_err(|e| e.to_string())
}

/// Leading coordinates tried, in order, when an equation is solved for
/// display.
const LEADS: [&str; 9] = ["u", "v", "w", "u_t", "v_t", "w_t", "v_x", "w_x", "u_x"];

/// `lead = rhs` when `e = 0` can be solved in closed form for one of the
/// usual leading coordinates, `e = 0` otherwise.
pub fn resolve_for_display(e: &Expr, d: &Domain) -> String {
    let y = Symbol::new("y__");
    for lead in LEADS {
        let s = Symbol::new(lead);
        if !e.depends_on(&s) {
            continue;
        }
        if let Some(sol) = invert(e, &s, &y, d) {
            return format!("{} = {}", lead, substitute_one(&sol, &y, &Expr::zero()));
        }
    }
    format!("{} = 0", e)
}

pub fn run(cat: &Catalog, spec: &TransformSpec) -> Result<TransformOutput, String> {
    let tg = &spec.target;
    let entry = match &tg.algebra {
        None => None,
        Some(sel) => {
            let found = cat.get_algebras(sel).map_err(|e| e.to_string())?;
            if found.len() != 1 {
                return Err(format!(
                    "selector {} matches {} algebras; name exactly one",
                    sel,
                    found.len()
                ));
            }
            Some(found[0])
        }
    };
    let elements = tg
        .elements
        .clone()
        .or_else(|| entry.map(|a| a.elements.clone()));
    let case = tg.case.clone().or_else(|| entry.map(|a| a.case.clone()));
    let t = build_transformation(&spec.transformation, elements.as_ref())?;
    let mut out = TransformOutput {
        kind: t.kind.name().to_string(),
        forward: t.forward.iter().map(|e| e.to_string()).collect(),
        elements: None,
        system: Vec::new(),
        solution: None,
        generators: Vec::new(),
    };
    if let (Some(el), true) = (&elements, t.elements.is_some()) {
        out.elements = Some(apply_to_elements(&t, el).map_err(|e| e.to_string())?);
    }
    let system: Option<DifferentialSystem> = match (&case, &elements) {
        (Some(c), Some(el)) => Some(
            cat.build_potential_system(c, el)
                .map_err(|e| e.to_string())?,
        ),
        (Some(_), None) => return Err("a potential system case needs target elements".into()),
        _ => None,
    };
    if let Some(s) = &system {
        let image = transform_equations(&t, &s.equations).map_err(|e| e.to_string())?;
        let d = t.image_domain();
        out.system = image.iter().map(|e| resolve_for_display(e, &d)).collect();
    }
    if let Some(sol) = &tg.solution {
        let base = match (&system, &elements) {
            (Some(s), _) => s.clone(),
            (None, Some(el)) => build_equation(el).map_err(|e| e.to_string())?,
            (None, None) => return Err("a solution needs target elements".into()),
        };
        let mut d = elements
            .as_ref()
            .map(|e| e.sampling_domain())
            .unwrap_or_default();
        if let Some(extra) = &sol.domain {
            d = d.merged(extra);
        }
        let s = Solution::new(sol.u.clone(), sol.v.clone(), d);
        let img = push_forward_solution(&t, &s, &base).map_err(|e| e.to_string())?;
        out.solution = Some(SolutionImage {
            u: img.u.to_string(),
            v: img.v.map(|v| v.to_string()),
        });
    }
    let mut gens: Vec<(String, String, VectorField)> = Vec::new();
    if let Some(a) = entry {
        for g in a.instances() {
            gens.push((g.id, g.printed, g.field));
        }
    }
    for (i, text) in tg.generators.iter().enumerate() {
        let v =
            VectorField::from_operator(text).map_err(|e| format!("generator {}: {}", text, e))?;
        gens.push((format!("g{}", i + 1), text.clone(), v));
    }
    for (id, printed, v) in gens {
        let image = push_forward_vectorfield(&t, &v).map_err(|e| format!("{}: {}", id, e))?;
        out.generators.push(GeneratorImage {
            id,
            generator: printed,
            image: image.to_string(),
        });
    }
    Ok(out)
}

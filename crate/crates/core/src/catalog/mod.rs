//! Machine-readable encoding of the classified cases: equations, potential
//! systems, symmetry algebras and exact solutions.

mod data;
mod solutions;

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::diff::differentiate;
use crate::domain::{Domain, VarDomain};
use crate::expr::Expr;
use crate::jet::{
    check_vanishing, matrix_rank, DifferentialSystem, JetError, SymmetryConfig, VectorField,
    Verdict,
};
use crate::subst::{substitute, ExprBindings};
use crate::symbol::Symbol;
use crate::zero::{is_zero, ZeroConfig, ZeroError};

pub use data::builtin;
pub use solutions::{
    audit_solution, fujita_storm_residual, AuditConfig, SolutionAudit, SolutionVerdict,
};

/// Current version of the catalog JSON layout.
pub const CATALOG_VERSION: u32 = 1;

/// Seed used for the numeric checks performed while building systems.
const BUILD_SEED: u64 = 0x5eed;

#[derive(Clone, Debug, PartialEq)]
pub enum CatalogError {
    UnknownCase(String),
    UnknownSelector(String),
    UnknownEquation(String),
    /// An applicability condition of a case fails for the given elements.
    Constraint {
        case: String,
        condition: String,
    },
    Degenerate(String),
    /// The resolver of a constructed system does not vanish on its manifold.
    Resolver {
        case: String,
        detail: String,
    },
    Jet(JetError),
    Zero(ZeroError),
}

impl fmt::Display for CatalogError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogError::UnknownCase(c) => write!(f, "unknown potential system case '{}'", c),
            CatalogError::UnknownSelector(s) => write!(f, "no algebra matches selector '{}'", s),
            CatalogError::UnknownEquation(e) => write!(f, "unknown equation '{}'", e),
            CatalogError::Constraint { case, condition } => {
                write!(
                    f,
                    "case {} requires {}, which fails for these elements",
                    case, condition
                )
            }
            CatalogError::Degenerate(m) => write!(f, "degenerate elements: {}", m),
            CatalogError::Resolver { case, detail } => {
                write!(f, "resolver of case {} is invalid: {}", case, detail)
            }
            CatalogError::Jet(e) => write!(f, "{}", e),
            CatalogError::Zero(e) => write!(f, "{}", e),
        }
    }
}

impl From<JetError> for CatalogError {
    fn from(e: JetError) -> Self {
        CatalogError::Jet(e)
    }
}

impl From<ZeroError> for CatalogError {
    fn from(e: ZeroError) -> Self {
        CatalogError::Zero(e)
    }
}

/// A named constant sampled from an interval, avoiding isolated values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Parameter {
    pub name: Symbol,
    pub domain: Interval,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub exclusions: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Parameter {
    pub fn new(name: &str, lo: f64, hi: f64, exclusions: &[f64]) -> Parameter {
        Parameter {
            name: Symbol::new(name),
            domain: Interval { lo, hi },
            exclusions: exclusions.to_vec(),
        }
    }

    pub fn var_domain(&self) -> VarDomain {
        VarDomain::new(self.domain.lo, self.domain.hi).excluding(&self.exclusions)
    }
}

fn one() -> Expr {
    Expr::one()
}

fn is_one(e: &Expr) -> bool {
    e.is_one_literal()
}

/// Values of `f, g, h, A, B` for one equation of the class, with optional
/// closed forms of `∫A du` and `∫B du`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArbitraryElements {
    pub f: Expr,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub g: Expr,
    pub h: Expr,
    #[serde(rename = "A")]
    pub a: Expr,
    #[serde(rename = "B")]
    pub b: Expr,
    #[serde(rename = "int_A", default, skip_serializing_if = "Option::is_none")]
    pub int_a: Option<Expr>,
    #[serde(rename = "int_B", default, skip_serializing_if = "Option::is_none")]
    pub int_b: Option<Expr>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parameters: Vec<Parameter>,
    /// Overrides of the default sampling intervals.
    #[serde(default, skip_serializing_if = "domain_is_empty")]
    pub domain: Domain,
    /// Conditions on parameters that are not single excluded values.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub conditions: Vec<String>,
}

fn domain_is_empty(d: &Domain) -> bool {
    d.vars.is_empty() && d.positive.is_empty()
}

fn p(text: &str) -> Expr {
    crate::parse::parse(text).expect("catalog expression")
}

impl ArbitraryElements {
    /// Elements of `f*u_t = (A*u_x)_x + h*B*u_x` given as grammar strings.
    pub fn parse(f: &str, h: &str, a: &str, b: &str) -> ArbitraryElements {
        ArbitraryElements {
            f: p(f),
            g: Expr::one(),
            h: p(h),
            a: p(a),
            b: p(b),
            int_a: None,
            int_b: None,
            parameters: Vec::new(),
            domain: Domain::new(),
            conditions: Vec::new(),
        }
    }

    pub fn with_int_a(mut self, e: &str) -> Self {
        self.int_a = Some(p(e));
        self
    }

    pub fn with_int_b(mut self, e: &str) -> Self {
        self.int_b = Some(p(e));
        self
    }

    pub fn with_g(mut self, e: &str) -> Self {
        self.g = p(e);
        self
    }

    pub fn with_parameter(mut self, par: Parameter) -> Self {
        self.parameters.push(par);
        self
    }

    pub fn with_domain(mut self, name: &str, lo: f64, hi: f64) -> Self {
        self.domain = self.domain.with(name, VarDomain::new(lo, hi));
        self
    }

    pub fn with_condition(mut self, c: &str) -> Self {
        self.conditions.push(c.to_string());
        self
    }

    /// `∫A du` as an antiderivative node carrying the closed form if known.
    pub fn int_a_expr(&self) -> Expr {
        antiderivative_of(&self.a, self.int_a.clone())
    }

    pub fn int_b_expr(&self) -> Expr {
        antiderivative_of(&self.b, self.int_b.clone())
    }

    /// Sampling domain: parameter intervals plus the variable overrides.
    pub fn sampling_domain(&self) -> Domain {
        let mut d = self.domain.clone();
        for par in &self.parameters {
            d.vars.insert(par.name.clone(), par.var_domain());
        }
        d
    }

    /// Checks `f*g*A != 0` and that stored antiderivatives differentiate
    /// back to `A` and `B`.
    pub fn validate(&self) -> Result<(), CatalogError> {
        let d = self.sampling_domain();
        let cfg = ZeroConfig::default().with_trials(40);
        let mut rng = ChaCha8Rng::seed_from_u64(BUILD_SEED);
        let prod = Expr::mul(alloc::vec![self.f.clone(), self.g.clone(), self.a.clone()]);
        if prod.is_zero_literal() || is_zero(&prod, &d, &cfg, &mut rng)?.is_zero {
            return Err(CatalogError::Degenerate(String::from("f*g*A vanishes")));
        }
        let u = Symbol::new("u");
        for (name, int, integrand) in [("A", &self.int_a, &self.a), ("B", &self.int_b, &self.b)] {
            if let Some(i) = int {
                let diff = differentiate(i, &u) - integrand.clone();
                if !is_zero(&diff, &d, &cfg, &mut rng)?.is_zero {
                    return Err(CatalogError::Degenerate(alloc::format!(
                        "stored antiderivative of {} is wrong",
                        name
                    )));
                }
            }
        }
        Ok(())
    }

    /// Bindings of the placeholder names used by case templates.
    fn bindings_for(&self, template: &Expr) -> ExprBindings {
        let mut b = ExprBindings::new();
        for s in template.free_symbols() {
            if let Some(e) = self.placeholder(s.as_str()) {
                b.insert(s, e);
            }
        }
        b
    }

    /// Value of a placeholder such as `h`, `IA` or `h_xx`.
    fn placeholder(&self, name: &str) -> Option<Expr> {
        match name {
            "f" => return Some(self.f.clone()),
            "g" => return Some(self.g.clone()),
            "h" => return Some(self.h.clone()),
            "A" => return Some(self.a.clone()),
            "B" => return Some(self.b.clone()),
            "IA" => return Some(self.int_a_expr()),
            "IB" => return Some(self.int_b_expr()),
            _ => {}
        }
        let (base, ders) = name.split_once('_')?;
        let (value, var) = match base {
            "f" => (&self.f, 'x'),
            "g" => (&self.g, 'x'),
            "h" => (&self.h, 'x'),
            "A" => (&self.a, 'u'),
            "B" => (&self.b, 'u'),
            _ => return None,
        };
        if ders.is_empty() || !ders.chars().all(|c| c == var) {
            return None;
        }
        let s = Symbol::new(if var == 'x' { "x" } else { "u" });
        let mut e = value.clone();
        for _ in 0..ders.len() {
            e = differentiate(&e, &s);
        }
        Some(e)
    }

    /// Replaces the placeholders `f, g, h, A, B, IA, IB` and their
    /// derivatives (`h_x`, `A_u`, ...) in `template`.
    pub fn instantiate(&self, template: &Expr) -> Expr {
        substitute(template, &self.bindings_for(template))
    }
}

fn antiderivative_of(integrand: &Expr, closed: Option<Expr>) -> Expr {
    if integrand.is_zero_literal() && closed.is_none() {
        return Expr::zero();
    }
    let s = Expr::sym(crate::symbol::DUMMY);
    let in_s = crate::subst::substitute_one(integrand, &Symbol::new("u"), &s);
    Expr::antiderivative(in_s, Expr::sym("u"), closed)
}

/// A condition `expr = 0` (or `expr != 0`) on the elements of a case.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Condition {
    pub label: String,
    pub expr: Expr,
}

impl Condition {
    pub fn new(label: &str, expr: &str) -> Condition {
        Condition {
            label: label.to_string(),
            expr: p(expr),
        }
    }
}

/// Shape of a potential system, with templates over the placeholders of
/// [`ArbitraryElements::instantiate`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SystemTemplate {
    /// `v_x = alpha*u, v_t = beta*A*u_x + gamma`.
    Simplest {
        alpha: Expr,
        beta: Expr,
        gamma: Expr,
    },
    /// Two simplest systems sharing `u`, with potentials `v` and `w`.
    TwoPotential {
        alpha: Expr,
        beta: Expr,
        gamma: Expr,
        lambda: Expr,
        beta2: Expr,
        gamma2: Expr,
    },
    /// `v_x = alpha*u, w_x = v, w_t = ∫A`.
    SecondLevel { alpha: Expr },
}

impl SystemTemplate {
    /// Number of potentials besides `u`.
    pub fn potentials(&self) -> usize {
        match self {
            SystemTemplate::Simplest { .. } => 1,
            _ => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSystemCase {
    pub id: String,
    /// The system in conventional notation.
    pub printed: String,
    pub system: SystemTemplate,
    /// Applicability conditions: each expression must vanish.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub constraints: Vec<Condition>,
    /// Each expression must not vanish identically.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub nonzero: Vec<Condition>,
    /// Whether the system yields potential symmetries of the equation.
    pub potential_symmetries: bool,
    /// Elements used to exercise the case.
    pub example: ArbitraryElements,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// An arbitrary function in a generator, with the side equation it
/// satisfies and explicit solutions used for checking.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionalParameter {
    pub name: String,
    pub args: Vec<Symbol>,
    /// Side equation, in terms of `name` and derivative symbols such as
    /// `phi_t`, `phi_vv`.
    pub constraint: Expr,
    pub instantiations: Vec<Expr>,
    /// Substitutions applied after instantiation, e.g. `z = w - x*v`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub aux: BTreeMap<Symbol, Expr>,
}

impl FunctionalParameter {
    /// Derivative symbol name: `phi_vv` is the second `v` derivative.
    fn value_of(&self, sym: &Symbol, inst: &Expr) -> Option<Expr> {
        let n = sym.as_str();
        if n == self.name {
            return Some(inst.clone());
        }
        let rest = n.strip_prefix(self.name.as_str())?.strip_prefix('_')?;
        if rest.is_empty() {
            return None;
        }
        let mut e = inst.clone();
        for c in rest.chars() {
            let arg = self
                .args
                .iter()
                .find(|a| a.as_str().len() == 1 && a.as_str().starts_with(c))?;
            e = differentiate(&e, arg);
        }
        Some(e)
    }

    /// True when `e` mentions this function or one of its derivatives.
    pub fn occurs_in(&self, e: &Expr) -> bool {
        let probe = Expr::one();
        e.free_symbols()
            .iter()
            .any(|s| self.value_of(s, &probe).is_some())
    }

    /// Replaces the function by instantiation `i`, then applies `aux`.
    pub fn substitute(&self, e: &Expr, i: usize) -> Expr {
        let inst = &self.instantiations[i];
        let mut b = ExprBindings::new();
        for s in e.free_symbols() {
            if let Some(v) = self.value_of(&s, inst) {
                b.insert(s, v);
            }
        }
        let e = substitute(e, &b);
        if self.aux.is_empty() {
            e
        } else {
            substitute(&e, &self.aux)
        }
    }

    /// Checks that every instantiation solves the side equation.
    pub fn validate(&self, seed: u64) -> Result<(), CatalogError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (i, inst) in self.instantiations.iter().enumerate() {
            let mut b = ExprBindings::new();
            for s in self.constraint.free_symbols() {
                if let Some(v) = self.value_of(&s, inst) {
                    b.insert(s, v);
                }
            }
            let r = substitute(&self.constraint, &b);
            let ev = is_zero(
                &r,
                &Domain::new(),
                &ZeroConfig::default().with_trials(50),
                &mut rng,
            )?;
            if !ev.is_zero {
                return Err(CatalogError::Degenerate(alloc::format!(
                    "instantiation {} of {} does not satisfy {}",
                    i + 1,
                    self.name,
                    self.constraint
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Generator {
    /// The operator as printed.
    pub printed: String,
    pub field: VectorField,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Replacement {
    /// Zero-based index into the printed generator list.
    pub index: usize,
    pub generator: Generator,
}

/// An annotated alternative reading of a printed entry, checked
/// separately from it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraVariant {
    pub id: String,
    pub note: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<ArbitraryElements>,
    /// Potential system case used instead of the entry's own.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub replace: Vec<Replacement>,
    /// Restrict the variant to these generator indices.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub only: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymmetryAlgebraEntry {
    /// Selector path such as `system-1/case-4`.
    pub id: String,
    /// Potential system case the generators belong to.
    pub case: String,
    pub elements: ArbitraryElements,
    pub generators: Vec<Generator>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub functional_parameters: Vec<FunctionalParameter>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub variants: Vec<AlgebraVariant>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// One concrete generator to check: functional parameters already
/// instantiated.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorInstance {
    /// `<entry>/g<n>` or `<entry>/g<n>/k<i>`, with `~<variant>` after the
    /// entry id for variants.
    pub id: String,
    pub printed: String,
    pub field: VectorField,
    /// Index of the generator in the printed list.
    pub index: usize,
    pub functional: bool,
}

impl SymmetryAlgebraEntry {
    fn functional_of(&self, v: &VectorField) -> Option<&FunctionalParameter> {
        self.functional_parameters
            .iter()
            .find(|fp| v.coeffs.iter().any(|c| fp.occurs_in(c)))
    }

    fn expand(&self, prefix: &str, gens: &[(usize, Generator)]) -> Vec<GeneratorInstance> {
        let mut out = Vec::new();
        for (i, g) in gens {
            match self.functional_of(&g.field) {
                None => out.push(GeneratorInstance {
                    id: alloc::format!("{}/g{}", prefix, i + 1),
                    printed: g.printed.clone(),
                    field: g.field.clone(),
                    index: *i,
                    functional: false,
                }),
                Some(fp) => {
                    for k in 0..fp.instantiations.len() {
                        out.push(GeneratorInstance {
                            id: alloc::format!("{}/g{}/k{}", prefix, i + 1, k + 1),
                            printed: g.printed.clone(),
                            field: g.field.map(|c| fp.substitute(c, k)),
                            index: *i,
                            functional: true,
                        });
                    }
                }
            }
        }
        out
    }

    /// Printed generators with functional parameters instantiated.
    pub fn instances(&self) -> Vec<GeneratorInstance> {
        let gens: Vec<(usize, Generator)> = self.generators.iter().cloned().enumerate().collect();
        self.expand(&self.id, &gens)
    }

    /// Generators of a variant, with replacements applied.
    pub fn variant_instances(&self, v: &AlgebraVariant) -> Vec<GeneratorInstance> {
        let mut gens: Vec<(usize, Generator)> =
            self.generators.iter().cloned().enumerate().collect();
        for r in &v.replace {
            if let Some(slot) = gens.get_mut(r.index) {
                slot.1 = r.generator.clone();
            }
        }
        if let Some(only) = &v.only {
            gens.retain(|(i, _)| only.contains(i));
        }
        self.expand(&alloc::format!("{}~{}", self.id, v.id), &gens)
    }

    /// Finite-dimensional part: generators free of functional parameters.
    pub fn finite_part(&self) -> Vec<VectorField> {
        self.generators
            .iter()
            .filter(|g| self.functional_of(&g.field).is_none())
            .map(|g| g.field.clone())
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExpectedVerdict {
    Claimed,
    AuditedPass,
    AuditedFail,
    OutOfScope,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExactSolutionEntry {
    pub id: String,
    pub equation: String,
    pub printed: String,
    /// `u(t, x)`; absent for implicit solutions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Expr>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parameters: Vec<Parameter>,
    #[serde(default, skip_serializing_if = "domain_is_empty")]
    pub domain: Domain,
    pub expected: ExpectedVerdict,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ExactSolutionEntry {
    pub fn sampling_domain(&self) -> Domain {
        let mut d = self.domain.clone();
        for par in &self.parameters {
            d.vars.insert(par.name.clone(), par.var_domain());
        }
        d
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Catalog {
    pub version: u32,
    pub cases: Vec<PotentialSystemCase>,
    pub algebras: Vec<SymmetryAlgebraEntry>,
    pub solutions: Vec<ExactSolutionEntry>,
    /// Statements about cases that carry no algebra entry.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// `f*u_t = (g*A*u_x)_x + h*B*u_x` for the given elements.
pub fn build_equation(el: &ArbitraryElements) -> Result<DifferentialSystem, CatalogError> {
    for (name, e) in [("f", &el.f), ("g", &el.g), ("A", &el.a)] {
        if e.is_zero_literal() {
            return Err(CatalogError::Degenerate(alloc::format!("{} = 0", name)));
        }
    }
    el.validate()?;
    Ok(DifferentialSystem::evolution_in(
        'u',
        el.f.clone(),
        el.g.clone(),
        el.h.clone(),
        el.a.clone(),
        el.b.clone(),
    )?)
}

fn selector_matches(id: &str, selector: &str) -> bool {
    let selector = selector.trim_end_matches('/');
    id == selector || (id.starts_with(selector) && id[selector.len()..].starts_with('/'))
}

impl Catalog {
    pub fn case(&self, id: &str) -> Result<&PotentialSystemCase, CatalogError> {
        self.cases
            .iter()
            .find(|c| c.id == id)
            .ok_or_else(|| CatalogError::UnknownCase(id.to_string()))
    }

    /// Entries whose id equals `selector` or lies below it at a `/`
    /// boundary; `all` selects everything.
    pub fn get_algebras(&self, selector: &str) -> Result<Vec<&SymmetryAlgebraEntry>, CatalogError> {
        let out: Vec<&SymmetryAlgebraEntry> = self
            .algebras
            .iter()
            .filter(|a| selector == "all" || selector_matches(&a.id, selector))
            .collect();
        if out.is_empty() {
            return Err(CatalogError::UnknownSelector(selector.to_string()));
        }
        Ok(out)
    }

    pub fn get_solutions(&self, equation: &str) -> Result<Vec<&ExactSolutionEntry>, CatalogError> {
        let out: Vec<&ExactSolutionEntry> = self
            .solutions
            .iter()
            .filter(|s| s.equation == equation)
            .collect();
        if out.is_empty() {
            return Err(CatalogError::UnknownEquation(equation.to_string()));
        }
        Ok(out)
    }

    pub fn build_potential_system(
        &self,
        case_id: &str,
        el: &ArbitraryElements,
    ) -> Result<DifferentialSystem, CatalogError> {
        build_potential_system(self.case(case_id)?, el)
    }

    /// System and sampling domain for an algebra entry or one of its
    /// variants.
    pub fn algebra_system(
        &self,
        entry: &SymmetryAlgebraEntry,
        variant: Option<&AlgebraVariant>,
    ) -> Result<(DifferentialSystem, Domain), CatalogError> {
        let el = variant
            .and_then(|v| v.elements.as_ref())
            .unwrap_or(&entry.elements);
        let case = variant
            .and_then(|v| v.case.as_deref())
            .unwrap_or(&entry.case);
        let s = self.build_potential_system(case, el)?;
        Ok((s, el.sampling_domain()))
    }
}

fn check_conditions(
    case: &PotentialSystemCase,
    el: &ArbitraryElements,
) -> Result<(), CatalogError> {
    let d = el.sampling_domain();
    let cfg = ZeroConfig::default().with_trials(40);
    let mut rng = ChaCha8Rng::seed_from_u64(BUILD_SEED);
    for c in &case.constraints {
        let e = el.instantiate(&c.expr);
        if !e.is_zero_literal() && !is_zero(&e, &d, &cfg, &mut rng)?.is_zero {
            return Err(CatalogError::Constraint {
                case: case.id.clone(),
                condition: c.label.clone(),
            });
        }
    }
    for c in &case.nonzero {
        let e = el.instantiate(&c.expr);
        if e.is_zero_literal() || is_zero(&e, &d, &cfg, &mut rng)?.is_zero {
            return Err(CatalogError::Constraint {
                case: case.id.clone(),
                condition: c.label.clone(),
            });
        }
    }
    Ok(())
}

/// Builds and validates the potential system of `case` for `el`.
pub fn build_potential_system(
    case: &PotentialSystemCase,
    el: &ArbitraryElements,
) -> Result<DifferentialSystem, CatalogError> {
    check_conditions(case, el)?;
    el.validate()?;
    let i = |e: &Expr| el.instantiate(e);
    let s = match &case.system {
        SystemTemplate::Simplest { alpha, beta, gamma } => {
            let alpha = i(alpha);
            if alpha.is_zero_literal() {
                return Err(JetError::VanishingCharacteristic.into());
            }
            DifferentialSystem::simplest(alpha, i(beta), el.a.clone(), i(gamma))?
        }
        SystemTemplate::TwoPotential {
            alpha,
            beta,
            gamma,
            lambda,
            beta2,
            gamma2,
        } => {
            let (alpha, lambda) = (i(alpha), i(lambda));
            independent(&alpha, &lambda, &el.sampling_domain())?;
            DifferentialSystem::two_potential(
                alpha,
                i(beta),
                i(gamma),
                lambda,
                i(beta2),
                i(gamma2),
                el.a.clone(),
            )?
        }
        SystemTemplate::SecondLevel { alpha } => {
            DifferentialSystem::second_level(i(alpha), el.a.clone(), el.int_a_expr())?
        }
    }
    .with_name(&alloc::format!("potential system {}", case.id));
    validate_system(case, el, &s)?;
    Ok(s)
}

/// `alpha` and `lambda` must be linearly independent as functions.
fn independent(alpha: &Expr, lambda: &Expr, d: &Domain) -> Result<(), CatalogError> {
    let syms: Vec<Symbol> = alpha
        .free_symbols()
        .into_iter()
        .chain(lambda.free_symbols())
        .filter(|s| s.as_str() != "pi")
        .collect::<alloc::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let ta = crate::eval::Tape::compile(alpha, &syms)
        .map_err(|e| CatalogError::Jet(JetError::Eval(e)))?;
    let tl = crate::eval::Tape::compile(lambda, &syms)
        .map_err(|e| CatalogError::Jet(JetError::Eval(e)))?;
    let sampler = crate::domain::Sampler::new(d, &syms)
        .map_err(|e| CatalogError::Jet(JetError::Sample(e)))?;
    let mut rng = ChaCha8Rng::seed_from_u64(BUILD_SEED);
    let mut point = Vec::new();
    sampler
        .draw_parameters(&mut rng, &mut point)
        .map_err(|e| CatalogError::Jet(JetError::Sample(e)))?;
    let mut rows = alloc::vec![Vec::new(), Vec::new()];
    for _ in 0..20 {
        sampler
            .draw_point(&mut rng, &mut point)
            .map_err(|e| CatalogError::Jet(JetError::Sample(e)))?;
        if let (Ok(a), Ok(l)) = (ta.eval(&point), tl.eval(&point)) {
            rows[0].push(a);
            rows[1].push(l);
        }
    }
    if matrix_rank(rows, 1e-9) < 2 {
        return Err(CatalogError::Degenerate(String::from(
            "the two characteristics are linearly dependent",
        )));
    }
    Ok(())
}

/// The resolver must satisfy the system's cross-derivative conditions and
/// reproduce the original equation on the manifold.
fn validate_system(
    case: &PotentialSystemCase,
    el: &ArbitraryElements,
    s: &DifferentialSystem,
) -> Result<(), CatalogError> {
    let eq = DifferentialSystem::evolution_in(
        'u',
        el.f.clone(),
        el.g.clone(),
        el.h.clone(),
        el.a.clone(),
        el.b.clone(),
    )?;
    let mut conds: Vec<Expr> = s
        .consistency_conditions()?
        .into_iter()
        .map(|(_, e)| e)
        .collect();
    conds.push(eq.equations[0].clone());
    let cfg = SymmetryConfig {
        trials: 60,
        param_samples: 3,
        ..SymmetryConfig::default()
    };
    let r = check_vanishing(s, &conds, &el.sampling_domain(), &cfg, BUILD_SEED)?;
    if r.verdict != Verdict::Symmetry {
        return Err(CatalogError::Resolver {
            case: case.id.clone(),
            detail: alloc::format!(
                "condition {} has scaled residual {:.3e}",
                r.worst_equation + 1,
                r.worst_residual
            ),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests;

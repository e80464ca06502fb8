//! Verification campaigns over the catalog.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use symkit_core::catalog::{
    audit_solution, AuditConfig, Catalog, CatalogError, SolutionVerdict, SymmetryAlgebraEntry,
};
use symkit_core::jet::{
    check_symmetry, numeric_rank, validate_resolver, DifferentialSystem, Indep, JetSpace,
    SymmetryConfig, SymmetryReport, VectorField, Verdict,
};
use symkit_core::transforms::{
    compose, gauge_identity_error, hodograph, inverse, push_forward_vectorfield, random_instance,
    Constructor,
};
use symkit_core::{parse, Domain, Expr, Symbol, VarDomain};

use crate::report::{
    derive_seed, Kind, Outcome, Record, RunConfig, VerificationReport, WitnessPoint,
};

/// Random instances per transformation check.
pub const IDENTITY_INSTANCES: usize = 20;
/// Jet points per gauge identity instance.
pub const GAUGE_POINTS: usize = 100;
pub const GAUGE_TOL: f64 = 1e-9;
/// Points for the pointwise hodograph involution check.
pub const INVOLUTION_POINTS: usize = 1000;

#[derive(Clone, Debug, PartialEq)]
pub struct Options {
    pub seed: u64,
    pub trials: usize,
    pub param_samples: usize,
    pub rtol: f64,
}

impl Default for Options {
    fn default() -> Self {
        let s = SymmetryConfig::default();
        Options {
            seed: 1,
            trials: s.trials,
            param_samples: s.param_samples,
            rtol: s.pass_tol,
        }
    }
}

impl Options {
    pub fn symmetry(&self) -> SymmetryConfig {
        let d = SymmetryConfig::default();
        SymmetryConfig {
            trials: self.trials,
            param_samples: self.param_samples,
            pass_tol: self.rtol,
            fail_tol: d.fail_tol.max(self.rtol),
            quadrature: true,
        }
    }

    pub fn audit(&self) -> AuditConfig {
        AuditConfig {
            trials: self.trials,
            param_samples: self.param_samples,
            ..AuditConfig::default()
        }
    }

    pub fn run_config(&self) -> RunConfig {
        let s = self.symmetry();
        let a = self.audit();
        RunConfig {
            trials: s.trials,
            param_samples: s.param_samples,
            rtol: s.pass_tol,
            fail_tol: s.fail_tol,
            solution_pass: a.pass,
            solution_fail: a.fail,
        }
    }
}

fn outcome(v: Verdict) -> Outcome {
    match v {
        Verdict::Symmetry => Outcome::Pass,
        Verdict::NotSymmetry => Outcome::Fail,
        Verdict::Inconclusive => Outcome::Inconclusive,
    }
}

fn witness(point: &[(Symbol, f64)], value: f64, scale: f64) -> WitnessPoint {
    WitnessPoint {
        point: point
            .iter()
            .map(|(s, v)| (s.as_str().to_string(), *v))
            .collect::<BTreeMap<_, _>>(),
        value,
        scale,
    }
}

/// Converts a symmetry check into a record.
pub fn symmetry_record(id: &str, kind: Kind, r: &SymmetryReport) -> Record {
    let scale = if r.worst_residual > 0.0 {
        r.worst_absolute / r.worst_residual
    } else {
        1.0
    };
    let mut rec = Record::new(id, kind, outcome(r.verdict)).with_residual(r.worst_residual);
    if r.points > 0 {
        rec = rec.with_witness(witness(&r.witness, r.worst_absolute, scale));
    }
    if r.verdict != Verdict::Symmetry {
        rec = rec.with_detail(format!(
            "worst equation {}; {} points, {} singular",
            r.worst_equation, r.points, r.singular
        ));
    }
    rec
}

struct Job<'a> {
    id: String,
    system: &'a Result<(DifferentialSystem, Domain), CatalogError>,
    field: VectorField,
    detail: Option<String>,
}

/// One record per generator instance of every selected entry, printed
/// generators first, then the corrected variants.
pub fn verify_algebras(
    cat: &Catalog,
    entries: &[&SymmetryAlgebraEntry],
    o: &Options,
) -> Vec<Record> {
    let mut systems = Vec::new();
    let mut lists = Vec::new();
    for e in entries {
        systems.push(cat.algebra_system(e, None));
        lists.push((e.instances(), None));
        for v in &e.variants {
            systems.push(cat.algebra_system(e, Some(v)));
            lists.push((e.variant_instances(v), Some(v.note.clone())));
        }
    }
    let mut jobs = Vec::new();
    for (sys, (insts, note)) in systems.iter().zip(lists) {
        for g in insts {
            jobs.push(Job {
                id: g.id,
                system: sys,
                field: g.field,
                detail: note.clone(),
            });
        }
    }
    let cfg = o.symmetry();
    jobs.par_iter()
        .map(|j| {
            let mut rec = match j.system {
                Err(e) => Record::new(&j.id, Kind::Generator, Outcome::Fail)
                    .with_detail(format!("system: {}", e)),
                Ok((s, d)) => {
                    match check_symmetry(s, &j.field, d, &cfg, derive_seed(o.seed, &j.id)) {
                        Ok(r) => symmetry_record(&j.id, Kind::Generator, &r),
                        Err(e) => Record::new(&j.id, Kind::Generator, Outcome::Fail)
                            .with_detail(e.to_string()),
                    }
                }
            };
            if let Some(n) = &j.detail {
                rec.detail = Some(match rec.detail.take() {
                    Some(d) => format!("variant: {}; {}", n, d),
                    None => format!("variant: {}", n),
                });
            }
            rec
        })
        .collect()
}

pub fn verify_algebra(
    cat: &Catalog,
    selector: &str,
    o: &Options,
) -> Result<VerificationReport, CatalogError> {
    let entries = cat.get_algebras(selector)?;
    let records = verify_algebras(cat, &entries, o);
    Ok(VerificationReport::new(
        format!("verify-algebra {}", selector),
        o.seed,
        o.run_config(),
        records,
    ))
}

pub fn audit_records(
    cat: &Catalog,
    equation: &str,
    o: &Options,
) -> Result<Vec<Record>, CatalogError> {
    let entries = cat.get_solutions(equation)?;
    let cfg = o.audit();
    Ok(entries
        .par_iter()
        .map(|e| {
            let id = format!("{}/{}", equation, e.id);
            match audit_solution(e, &cfg, derive_seed(o.seed, &id)) {
                Err(err) => {
                    Record::new(&id, Kind::Solution, Outcome::Fail).with_detail(err.to_string())
                }
                Ok(a) => {
                    let verdict = match a.verdict {
                        SolutionVerdict::Pass => Outcome::Pass,
                        SolutionVerdict::Fail => Outcome::Fail,
                        SolutionVerdict::Inconclusive => Outcome::Inconclusive,
                        SolutionVerdict::OutOfScope => Outcome::OutOfScope,
                    };
                    let mut rec = Record::new(&id, Kind::Solution, verdict);
                    if verdict == Outcome::OutOfScope {
                        let note = if e.notes.is_empty() {
                            e.printed.clone()
                        } else {
                            e.notes.join("; ")
                        };
                        return rec.with_detail(format!("no explicit u(t, x): {}", note));
                    }
                    rec = rec.with_residual(a.worst_residual);
                    if let Some(w) = &a.witness {
                        rec = rec.with_witness(witness(&w.point, w.value, w.scale));
                    }
                    rec.with_detail(format!(
                        "{}; finite differences {} ({:.1e})",
                        e.printed,
                        if a.fd_agreement { "agree" } else { "disagree" },
                        a.fd_discrepancy
                    ))
                }
            }
        })
        .collect())
}

pub fn audit_solutions(
    cat: &Catalog,
    equation: &str,
    o: &Options,
) -> Result<VerificationReport, CatalogError> {
    let records = audit_records(cat, equation, o)?;
    Ok(VerificationReport::new(
        format!("audit-solutions {}", equation),
        o.seed,
        o.run_config(),
        records,
    ))
}

/// Resolver consistency of every potential system case, built from the
/// case's example elements.
pub fn resolver_records(cat: &Catalog, o: &Options) -> Vec<Record> {
    let cfg = o.symmetry();
    cat.cases
        .par_iter()
        .map(|c| {
            let id = format!("resolver/case-{}", c.id);
            match cat.build_potential_system(&c.id, &c.example) {
                Err(e) => {
                    Record::new(&id, Kind::Resolver, Outcome::Fail).with_detail(e.to_string())
                }
                Ok(s) => match validate_resolver(
                    &s,
                    &c.example.sampling_domain(),
                    &cfg,
                    derive_seed(o.seed, &id),
                ) {
                    Ok(r) => symmetry_record(&id, Kind::Resolver, &r),
                    Err(e) => {
                        Record::new(&id, Kind::Resolver, Outcome::Fail).with_detail(e.to_string())
                    }
                },
            }
        })
        .collect()
}

fn identity_record(id: &str, ok: Result<bool, String>) -> Record {
    match ok {
        Ok(true) => Record::new(id, Kind::TransformationIdentity, Outcome::Pass),
        Ok(false) => Record::new(id, Kind::TransformationIdentity, Outcome::Fail),
        Err(e) => Record::new(id, Kind::TransformationIdentity, Outcome::Fail).with_detail(e),
    }
}

fn instance(
    c: Constructor,
    seed: u64,
) -> Result<
    (
        symkit_core::transforms::EquivalenceTransformation,
        symkit_core::catalog::ArbitraryElements,
    ),
    String,
> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = String::new();
    for _ in 0..50 {
        match random_instance(c, &mut rng) {
            Ok(x) => return Ok(x),
            Err(e) => last = e.to_string(),
        }
    }
    Err(format!("no admissible instance: {}", last))
}

/// `compose(T, inverse(T))` and `compose(inverse(T), T)` for random
/// instances of each constructor.
pub fn round_trip_records(o: &Options) -> Vec<Record> {
    let ids: Vec<(Constructor, String)> = Constructor::ALL
        .iter()
        .flat_map(|c| {
            (1..=IDENTITY_INSTANCES).map(move |k| (*c, format!("round-trip/{}/{}", c.name(), k)))
        })
        .collect();
    ids.par_iter()
        .map(|(c, id)| {
            let ok = instance(*c, derive_seed(o.seed, id)).and_then(|(t, _)| {
                let inv = inverse(&t).map_err(|e| e.to_string())?;
                let a = compose(&t, &inv)
                    .and_then(|m| m.is_identity())
                    .map_err(|e| e.to_string())?;
                let b = compose(&inv, &t)
                    .and_then(|m| m.is_identity())
                    .map_err(|e| e.to_string())?;
                Ok(a && b)
            });
            identity_record(id, ok)
        })
        .collect()
}

/// Transformed operator against `eps1*phi` times the original one.
pub fn gauge_records(o: &Options) -> Vec<Record> {
    let ids: Vec<String> = (1..=IDENTITY_INSTANCES)
        .map(|k| format!("gauge-identity/{}", k))
        .collect();
    ids.par_iter()
        .map(|id| {
            let seed = derive_seed(o.seed, id);
            let res = instance(Constructor::Gauge, seed).and_then(|(t, el)| {
                gauge_identity_error(&t, &el, GAUGE_POINTS, seed).map_err(|e| e.to_string())
            });
            match res {
                Ok(err) => {
                    let v = if err <= GAUGE_TOL {
                        Outcome::Pass
                    } else {
                        Outcome::Fail
                    };
                    Record::new(id, Kind::TransformationIdentity, v).with_residual(err)
                }
                Err(e) => Record::new(id, Kind::TransformationIdentity, Outcome::Inconclusive)
                    .with_detail(e),
            }
        })
        .collect()
}

/// Worst relative deviation of `H(H(p))` from `p` over random points.
pub fn involution_error(points: usize, seed: u64) -> Result<(f64, [f64; 5]), String> {
    use rand::Rng;
    let h = hodograph();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = (0.0, [0.0; 5]);
    for _ in 0..points {
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let p = [
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-3.0..3.0),
            sign * rng.gen_range(0.1..5.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-1.0..1.0),
        ];
        let q = h.apply_point(&p, &[]).map_err(|e| e.to_string())?;
        let back = h.apply_point(&q, &[]).map_err(|e| e.to_string())?;
        for i in 0..5 {
            let err = (back[i] - p[i]).abs() / (1.0 + p[i].abs());
            if err > worst.0 {
                worst = (err, p);
            }
        }
    }
    Ok(worst)
}

pub fn involution_record(o: &Options) -> Record {
    let id = "hodograph-involution";
    let symbolic = compose(&hodograph(), &hodograph())
        .and_then(|m| m.is_identity())
        .map_err(|e| e.to_string());
    let pointwise = involution_error(INVOLUTION_POINTS, derive_seed(o.seed, id));
    match (symbolic, pointwise) {
        (Ok(sym), Ok((err, p))) => {
            let v = if sym && err <= 1e-12 {
                Outcome::Pass
            } else {
                Outcome::Fail
            };
            let point = ["t", "x", "u", "v", "w"]
                .iter()
                .zip(p)
                .map(|(n, x)| (Symbol::new(n), x))
                .collect::<Vec<_>>();
            Record::new(id, Kind::TransformationIdentity, v)
                .with_residual(err)
                .with_witness(witness(&point, err, 1.0))
        }
        (Err(e), _) | (_, Err(e)) => {
            Record::new(id, Kind::TransformationIdentity, Outcome::Fail).with_detail(e)
        }
    }
}

/// Potential system of `v_t = (v^(-4/3) v_x)_x` with `u` as the flux
/// density: the hodograph image of the system for `f = x^(-4/3)`.
pub fn eq13_image_system() -> DifferentialSystem {
    let flux = parse("v^(-4/3)*v_x").expect("flux");
    let wide = JetSpace::new(&[('u', 3), ('v', 3)]);
    let vt = wide
        .total_derivative(&flux, Indep::X)
        .expect("total derivative");
    DifferentialSystem::custom(
        "v_t = (v^(-4/3)*v_x)_x",
        JetSpace::new(&[('u', 2), ('v', 3)]),
        vec![Expr::sym("u") - flux.clone(), Expr::sym("v_t") - vt.clone()],
        vec![(Symbol::new("u"), flux), (Symbol::new("v_t"), vt)],
    )
    .expect("image system")
}

/// Lie algebra of `v_t = (v^(-4/3) v_x)_x` as printed, acting on `(t, x, v)`.
pub const EQ13_IMAGE_ALGEBRA: [&str; 5] = [
    "Dt",
    "Dx",
    "2*t*Dt + x*Dx",
    "4*t*Dt + 3*v*Dv",
    "x^2*Dx - 3*x*v*Dv",
];

pub fn eq13_image_domain() -> Domain {
    Domain::new()
        .with("v", VarDomain::new(1.5, 3.0))
        .with("x", VarDomain::new(-1.0, 1.0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpanCheck {
    pub images: Vec<(String, VectorField, SymmetryReport)>,
    pub rank: usize,
    /// Rank of the images together with the printed algebra.
    pub joint_rank: usize,
}

/// Hodograph images of the generators of the `x^(-4/3)` system: their
/// symmetry checks and the rank of their span against the printed algebra.
pub fn eq13_span(cat: &Catalog, o: &Options) -> Result<SpanCheck, String> {
    let entry = cat
        .get_algebras("system-1/eq13")
        .map_err(|e| e.to_string())?[0];
    let target = eq13_image_system();
    let d = eq13_image_domain();
    let cfg = o.symmetry();
    let h = hodograph();
    let mut images = Vec::new();
    for g in entry.instances() {
        let image = push_forward_vectorfield(&h, &g.field).map_err(|e| e.to_string())?;
        let r = check_symmetry(&target, &image, &d, &cfg, derive_seed(o.seed, &g.id))
            .map_err(|e| e.to_string())?;
        images.push((g.id, image, r));
    }
    let truncated: Vec<VectorField> = images
        .iter()
        .map(|(_, v, _)| {
            VectorField::new(
                v.tau().clone(),
                v.xi().clone(),
                Expr::zero(),
                v.theta().clone(),
                Expr::zero(),
            )
        })
        .collect();
    let seed = derive_seed(o.seed, "hodograph-span");
    let rank = numeric_rank(&truncated, &d, 20, seed).map_err(|e| e.to_string())?;
    let mut joint = truncated;
    for op in EQ13_IMAGE_ALGEBRA {
        joint.push(VectorField::from_operator(op).map_err(|e| e.to_string())?);
    }
    let joint_rank = numeric_rank(&joint, &d, 20, seed).map_err(|e| e.to_string())?;
    Ok(SpanCheck {
        images,
        rank,
        joint_rank,
    })
}

pub fn span_record(cat: &Catalog, o: &Options) -> Record {
    let id = "hodograph-span/system-1/eq13";
    match eq13_span(cat, o) {
        Err(e) => Record::new(id, Kind::TransformationIdentity, Outcome::Fail).with_detail(e),
        Ok(s) => {
            let worst = s
                .images
                .iter()
                .map(|(_, _, r)| r.worst_residual)
                .fold(0.0, f64::max);
            let all = s
                .images
                .iter()
                .all(|(_, _, r)| r.verdict == Verdict::Symmetry);
            let v = if all && s.rank == 5 && s.joint_rank == 5 {
                Outcome::Pass
            } else {
                Outcome::Fail
            };
            Record::new(id, Kind::TransformationIdentity, v)
                .with_residual(worst)
                .with_detail(format!(
                    "span rank {}, with printed algebra {}",
                    s.rank, s.joint_rank
                ))
        }
    }
}

/// Every catalog algebra, resolver, transformation identity and the
/// solution audit.
pub fn verify_all(cat: &Catalog, o: &Options) -> VerificationReport {
    let entries: Vec<&SymmetryAlgebraEntry> = cat.algebras.iter().collect();
    let mut records = verify_algebras(cat, &entries, o);
    records.extend(resolver_records(cat, o));
    records.extend(gauge_records(o));
    records.push(involution_record(o));
    records.extend(round_trip_records(o));
    records.push(span_record(cat, o));
    let mut equations: Vec<&str> = cat.solutions.iter().map(|s| s.equation.as_str()).collect();
    equations.sort_unstable();
    equations.dedup();
    for eq in equations {
        match audit_records(cat, eq, o) {
            Ok(r) => records.extend(r),
            Err(e) => records
                .push(Record::new(eq, Kind::Solution, Outcome::Fail).with_detail(e.to_string())),
        }
    }
    VerificationReport::new("verify-all", o.seed, o.run_config(), records)
}

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use symkit_core::catalog::{builtin, Catalog, SymmetryAlgebraEntry};
use symkit_core::diff::differentiate;
use symkit_core::domain::Sampler;
use symkit_core::jet::{
    check_vanishing, commutator, invariance_residuals, lift_truncated_operator, numeric_rank,
    validate_resolver, Indep, JetSpace, SymmetryConfig, VectorField, Verdict,
};
use symkit_core::transforms::{compose, hodograph};
use symkit_core::{is_zero, Domain, Expr, Symbol, Tape, ZeroConfig};
use symkit_dc::campaign::{self, Options};
use symkit_dc::report::{derive_seed, Outcome, Record};

const SEED: u64 = 20240;
const GENERATOR_TOL: f64 = 1e-8;
const GAUGE_TOL: f64 = 1e-9;
const SOLUTION_TOL: f64 = 1e-10;
const FD_TOL: f64 = 1e-6;
const FD_POINTS: usize = 50;
const PASS_RATE: f64 = 0.9;
const SYSTEM_1_BUDGET: Duration = Duration::from_secs(120);
const AUDIT_BUDGET: Duration = Duration::from_secs(10);
const CAMPAIGN_BUDGET: Duration = Duration::from_secs(300);

/// Printed system-1 generators that fail as printed; each has a corrected
/// variant in the catalog.
const PRINTED_SYSTEM_1_FAILURES: [&str; 12] = [
    "system-1/case-6/g4",
    "system-1/case-7/g4",
    "system-1/case-8/g4",
    "system-1/case-9/g1",
    "system-1/case-9/g2",
    "system-1/case-9/g3",
    "system-1/case-9/g4",
    "system-1/case-10/g4",
    "system-1/case-10/g5",
    "system-1/case-10/g7/k1",
    "system-1/case-10/g7/k2",
    "system-1/case-10/g7/k3",
];

struct Check {
    pass: bool,
    /// Red for a documented reason that the run confirmed.
    known_red: bool,
    line: String,
    notes: Vec<String>,
}

fn options() -> Options {
    Options {
        seed: SEED,
        ..Options::default()
    }
}

fn printed(r: &Record) -> bool {
    !r.id.contains('~')
}

/// Generator id without the instantiation suffix.
fn generator_of(id: &str) -> String {
    match id.rsplit_once('/') {
        Some((head, k)) if k.starts_with('k') && k[1..].chars().all(|c| c.is_ascii_digit()) => {
            head.to_string()
        }
        _ => id.to_string(),
    }
}

/// The same generator slot in a variant: `a/b~v/g4` for `a/b/g4`.
fn variant_slot(variant_id: &str) -> Option<(String, String)> {
    let (entry, rest) = variant_id.split_once('~')?;
    let (_, slot) = rest.split_once('/')?;
    Some((format!("{}/{}", entry, slot), variant_id.to_string()))
}

fn passing_variant(records: &[Record], id: &str) -> Option<String> {
    records
        .iter()
        .filter(|r| r.verdict == Outcome::Pass)
        .filter_map(|r| variant_slot(&r.id))
        .find(|(slot, _)| slot == id)
        .map(|(_, v)| v)
}

fn entries<'a>(cat: &'a Catalog, selectors: &[&str]) -> Vec<&'a SymmetryAlgebraEntry> {
    selectors
        .iter()
        .flat_map(|s| cat.get_algebras(s).unwrap())
        .collect()
}

fn criterion_1(cat: &Catalog) -> Check {
    let start = Instant::now();
    let list: Vec<&SymmetryAlgebraEntry> = entries(cat, &["system-1"])
        .into_iter()
        .filter(|e| !e.id.ends_with("eq13"))
        .collect();
    let records = campaign::verify_algebras(cat, &list, &options());
    let elapsed = start.elapsed();
    let printed_recs: Vec<&Record> = records.iter().filter(|r| printed(r)).collect();
    let passed = printed_recs
        .iter()
        .filter(|r| r.verdict == Outcome::Pass)
        .count();
    let within = printed_recs
        .iter()
        .filter(|r| r.verdict == Outcome::Pass)
        .all(|r| r.worst_residual.is_some_and(|w| w <= GENERATOR_TOL));
    let mut functional_ok = true;
    let mut notes = Vec::new();
    for case in ["case-4", "case-10", "case-11"] {
        let id = format!("system-1/{}", case);
        let e = cat.get_algebras(&id).unwrap()[0];
        let mut per: BTreeMap<usize, usize> = BTreeMap::new();
        for g in e.instances().iter().filter(|g| g.functional) {
            *per.entry(g.index).or_default() += 1;
        }
        if per.is_empty() || per.values().any(|&n| n < 3) {
            functional_ok = false;
            notes.push(format!(
                "{}: fewer than 3 instantiations of a functional generator",
                id
            ));
        }
    }
    let mut failures = Vec::new();
    for r in printed_recs.iter().filter(|r| r.verdict != Outcome::Pass) {
        let fix = passing_variant(&records, &r.id);
        notes.push(format!(
            "{} {} (residual {}); corrected: {}",
            r.id,
            r.verdict.as_str(),
            r.worst_residual
                .map(|w| format!("{:.2e}", w))
                .unwrap_or_else(|| "n/a".into()),
            fix.clone().unwrap_or_else(|| "none".into())
        ));
        failures.push((r.id.clone(), fix.is_some()));
    }
    let pass = failures.is_empty() && within && functional_ok && elapsed <= SYSTEM_1_BUDGET;
    let line = format!(
        "{}/{} printed system-1 generators pass at {:.0e}; {} variant records; {:.1}s",
        passed,
        printed_recs.len(),
        GENERATOR_TOL,
        records.len() - printed_recs.len(),
        elapsed.as_secs_f64()
    );
    let expected: BTreeSet<String> = PRINTED_SYSTEM_1_FAILURES
        .iter()
        .map(|s| s.to_string())
        .collect();
    let got: BTreeSet<String> = failures.iter().map(|(id, _)| id.clone()).collect();
    let all_fixed = failures.iter().all(|(_, f)| *f);
    let known_red = !pass
        && got == expected
        && all_fixed
        && within
        && functional_ok
        && elapsed <= SYSTEM_1_BUDGET;
    if known_red {
        notes.push(
            "failure set matches the catalogued misprints; every one has a passing variant".into(),
        );
    }
    Check {
        pass,
        known_red,
        line,
        notes,
    }
}

fn criterion_2(cat: &Catalog) -> Check {
    let o = options();
    let recs = campaign::verify_algebra(cat, "system-1/eq13", &o)
        .unwrap()
        .records;
    let own = recs.iter().filter(|r| printed(r)).collect::<Vec<_>>();
    let own_ok = own.len() == 5 && own.iter().all(|r| r.verdict == Outcome::Pass);
    let mut notes: Vec<String> = own
        .iter()
        .filter(|r| r.verdict != Outcome::Pass)
        .map(|r| format!("{} {}", r.id, r.verdict.as_str()))
        .collect();
    match campaign::eq13_span(cat, &o) {
        Err(e) => Check {
            known_red: false,
            pass: false,
            line: format!("pushforward failed: {}", e),
            notes,
        },
        Ok(s) => {
            let worst = s
                .images
                .iter()
                .map(|(_, _, r)| r.worst_residual)
                .fold(0.0, f64::max);
            let images_ok = s.images.iter().all(|(_, _, r)| {
                r.verdict == Verdict::Symmetry && r.worst_residual <= GENERATOR_TOL
            });
            for (id, v, r) in &s.images {
                notes.push(format!(
                    "{} -> {} ({:?}, {:.1e})",
                    id, v, r.verdict, r.worst_residual
                ));
            }
            Check {
                known_red: false,
                pass: own_ok && images_ok && s.rank == 5 && s.joint_rank == 5,
                line: format!(
                    "{}/5 generators pass; images are symmetries (worst {:.1e}); span rank {}, with printed algebra {}",
                    own.iter().filter(|r| r.verdict == Outcome::Pass).count(),
                    worst,
                    s.rank,
                    s.joint_rank
                ),
                notes,
            }
        }
    }
}

fn criterion_3(cat: &Catalog) -> Check {
    let list = entries(cat, &["system-3", "system-4", "system-5", "second-level"]);
    let records = campaign::verify_algebras(cat, &list, &options());
    let printed_recs: Vec<&Record> = records.iter().filter(|r| printed(r)).collect();
    let definitive = printed_recs
        .iter()
        .all(|r| matches!(r.verdict, Outcome::Pass | Outcome::Fail));
    let passes_tight = printed_recs
        .iter()
        .filter(|r| r.verdict == Outcome::Pass)
        .all(|r| r.worst_residual.is_some_and(|w| w <= GENERATOR_TOL));
    let witnessed = printed_recs
        .iter()
        .filter(|r| r.verdict == Outcome::Fail)
        .all(|r| r.witness.is_some());
    let mut by_gen: BTreeMap<String, bool> = BTreeMap::new();
    for r in &printed_recs {
        let ok = by_gen.entry(generator_of(&r.id)).or_insert(true);
        *ok &= r.verdict == Outcome::Pass;
    }
    let passed = by_gen.values().filter(|&&p| p).count();
    let rate = passed as f64 / by_gen.len() as f64;
    let sign = passing_variant(&records, "second-level/case-3/g6");
    let mut notes = Vec::new();
    for r in printed_recs.iter().filter(|r| r.verdict != Outcome::Pass) {
        notes.push(format!(
            "{} {} (residual {}); variant: {}",
            r.id,
            r.verdict.as_str(),
            r.worst_residual
                .map(|w| format!("{:.2e}", w))
                .unwrap_or_else(|| "n/a".into()),
            passing_variant(&records, &r.id).unwrap_or_else(|| "none".into())
        ));
    }
    Check {
        known_red: false,
        pass: definitive && passes_tight && witnessed && rate >= PASS_RATE && sign.is_some(),
        line: format!(
            "{}/{} printed generators pass ({:.1}%); all verdicts definitive: {}; fails witnessed: {}; second-level case-3 g6 passes as {}",
            passed,
            by_gen.len(),
            100.0 * rate,
            definitive,
            witnessed,
            sign.unwrap_or_else(|| "nothing".into())
        ),
        notes,
    }
}

fn criterion_4() -> Check {
    let recs = campaign::gauge_records(&options());
    let worst = recs
        .iter()
        .filter_map(|r| r.worst_residual)
        .fold(0.0, f64::max);
    let ok = recs.len() == 20
        && recs.iter().all(|r| {
            r.verdict == Outcome::Pass && r.worst_residual.is_some_and(|w| w <= GAUGE_TOL)
        });
    Check {
        known_red: false,
        pass: ok,
        line: format!(
            "{} random instances x {} points; worst relative error {:.1e} (tolerance {:.0e})",
            recs.len(),
            campaign::GAUGE_POINTS,
            worst,
            GAUGE_TOL
        ),
        notes: recs
            .iter()
            .filter(|r| r.verdict != Outcome::Pass)
            .map(|r| format!("{:?}", r))
            .collect(),
    }
}

fn criterion_5(cat: &Catalog) -> Check {
    let start = Instant::now();
    let recs = campaign::audit_records(cat, "fujita-storm", &options()).unwrap();
    let elapsed = start.elapsed();
    let must = [
        "constant",
        "inverse-x",
        "exp-plus",
        "exp-minus",
        "bounded-plus",
        "bounded-minus",
    ];
    let get = |id: &str| recs.iter().find(|r| r.id == format!("fujita-storm/{}", id));
    let listed_ok = must.iter().all(|id| {
        get(id).is_some_and(|r| {
            r.verdict == Outcome::Pass && r.worst_residual.is_some_and(|w| w <= SOLUTION_TOL)
        })
    });
    let rest_ok = recs.iter().all(|r| match r.verdict {
        Outcome::Pass => true,
        Outcome::Fail => r.witness.is_some(),
        Outcome::OutOfScope => r.id.ends_with("/source"),
        Outcome::Inconclusive => false,
    });
    let fd_ok = recs
        .iter()
        .filter(|r| r.verdict != Outcome::OutOfScope)
        .all(|r| {
            r.detail
                .as_deref()
                .is_some_and(|d| d.contains("finite differences agree"))
        });
    let count = |v: Outcome| recs.iter().filter(|r| r.verdict == v).count();
    Check {
        known_red: false,
        pass: listed_ok && rest_ok && fd_ok && elapsed <= AUDIT_BUDGET,
        line: format!(
            "{} pass / {} fail / {} out-of-scope; listed solutions within {:.0e}: {}; finite differences agree: {}; {:.2}s",
            count(Outcome::Pass),
            count(Outcome::Fail),
            count(Outcome::OutOfScope),
            SOLUTION_TOL,
            listed_ok,
            fd_ok,
            elapsed.as_secs_f64()
        ),
        notes: recs
            .iter()
            .filter(|r| r.verdict != Outcome::Pass)
            .map(|r| format!("{} {} {}", r.id, r.verdict.as_str(), r.detail.clone().unwrap_or_default()))
            .collect(),
    }
}

fn vanishes(e: &Expr, d: &Domain, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    is_zero(e, d, &ZeroConfig::default(), &mut rng).is_ok_and(|ev| ev.is_zero)
}

fn criterion_6(cat: &Catalog) -> Check {
    let cfg = SymmetryConfig::default();
    let o = options();
    let mut checked = 0;
    let mut lifted = 0;
    let mut notes = Vec::new();
    for e in &cat.algebras {
        let mut lists = vec![(None, e.instances())];
        for v in &e.variants {
            lists.push((Some(v), e.variant_instances(v)));
        }
        for (variant, insts) in lists {
            let Ok((s, d)) = cat.algebra_system(e, variant) else {
                continue;
            };
            for g in insts {
                let seed = derive_seed(SEED, &g.id);
                let Ok(raw) = symkit_core::jet::check_symmetry(&s, &g.field, &d, &cfg, seed) else {
                    continue;
                };
                if raw.verdict != Verdict::Symmetry {
                    continue;
                }
                checked += 1;
                let inv = invariance_residuals(&s, &g.field)
                    .and_then(|r| check_vanishing(&s, &r, &d, &cfg, seed));
                if !inv.as_ref().is_ok_and(|r| r.verdict == Verdict::Symmetry) {
                    notes.push(format!("{}: invariance residuals do not vanish", g.id));
                }
                if !g.id.starts_with("system-1/") || s.characteristic.is_none() {
                    continue;
                }
                let f = &g.field;
                let qhat = VectorField::new(
                    f.tau().clone(),
                    f.xi().clone(),
                    Expr::zero(),
                    f.theta().clone(),
                    Expr::zero(),
                );
                match lift_truncated_operator(&qhat, &s) {
                    Ok(l)
                        if vanishes(
                            &(l.eta().clone() - f.eta().clone()),
                            &d,
                            derive_seed(o.seed, &g.id),
                        ) =>
                    {
                        lifted += 1
                    }
                    Ok(l) => notes.push(format!(
                        "{}: lifted eta {} differs from {}",
                        g.id,
                        l.eta(),
                        f.eta()
                    )),
                    Err(err) => notes.push(format!("{}: {}", g.id, err)),
                }
            }
        }
    }
    Check {
        known_red: false,
        pass: notes.is_empty() && checked > 0 && lifted > 0,
        line: format!(
            "invariance residuals vanish for {} passing generators; lifted eta reproduced for {} system-1 generators",
            checked, lifted
        ),
        notes,
    }
}

fn criterion_7() -> Check {
    let o = options();
    let recs = campaign::round_trip_records(&o);
    let trips_ok = recs.len() == 100 && recs.iter().all(|r| r.verdict == Outcome::Pass);
    let twice = compose(&hodograph(), &hodograph()).unwrap();
    let literal = twice
        .forward
        .iter()
        .zip(["t", "x", "u", "v", "w"])
        .all(|(e, b)| *e == Expr::sym(b));
    let (err, _) =
        campaign::involution_error(campaign::INVOLUTION_POINTS, derive_seed(SEED, "involution"))
            .unwrap();
    let pointwise = err <= 2.0 * f64::EPSILON;
    Check {
        known_red: false,
        pass: trips_ok && literal && pointwise,
        line: format!(
            "{}/100 compositions with the inverse are the identity; hodograph squared is literally the identity: {}; worst pointwise deviation over {} points {:.1e}",
            recs.iter().filter(|r| r.verdict == Outcome::Pass).count(),
            literal,
            campaign::INVOLUTION_POINTS,
            err
        ),
        notes: recs.iter().filter(|r| r.verdict != Outcome::Pass).map(|r| format!("{:?}", r)).collect(),
    }
}

/// Expressions of the catalog with the domain they are sampled on.
fn catalog_expressions(cat: &Catalog) -> Vec<(String, Expr, Domain)> {
    let mut out = Vec::new();
    let push_el = |label: &str,
                   el: &symkit_core::catalog::ArbitraryElements,
                   out: &mut Vec<(String, Expr, Domain)>| {
        let d = el.sampling_domain();
        for (n, e) in [
            ("f", &el.f),
            ("g", &el.g),
            ("h", &el.h),
            ("A", &el.a),
            ("B", &el.b),
        ] {
            out.push((format!("{}:{}", label, n), e.clone(), d.clone()));
        }
        for (n, e) in [("int_A", &el.int_a), ("int_B", &el.int_b)] {
            if let Some(e) = e {
                out.push((format!("{}:{}", label, n), e.clone(), d.clone()));
            }
        }
    };
    for c in &cat.cases {
        push_el(&format!("case {}", c.id), &c.example, &mut out);
    }
    for a in &cat.algebras {
        push_el(&a.id, &a.elements, &mut out);
        let d = a.elements.sampling_domain();
        for g in a.instances() {
            for (b, c) in ["t", "x", "u", "v", "w"].iter().zip(g.field.coeffs.iter()) {
                if !c.is_zero_literal() {
                    out.push((format!("{}:{}", g.id, b), c.clone(), d.clone()));
                }
            }
        }
    }
    for s in &cat.solutions {
        if let Some(u) = &s.u {
            out.push((format!("solution {}", s.id), u.clone(), s.sampling_domain()));
        }
    }
    out
}

/// Fourth-order central difference of `tape` in coordinate `i`.
fn central(tape: &Tape, point: &[f64], i: usize, h: f64) -> Option<f64> {
    let mut p = point.to_vec();
    let mut at = |dx: f64| {
        p[i] = point[i] + dx;
        tape.eval(&p).ok().filter(|v| v.is_finite())
    };
    Some((8.0 * (at(h)? - at(-h)?) - (at(2.0 * h)? - at(-2.0 * h)?)) / (12.0 * h))
}

/// Extrapolated central difference, taking the step from a descending
/// ladder whose estimate moves least under halving.
fn richardson(tape: &Tape, point: &[f64], i: usize) -> Option<f64> {
    let mut best: Option<(f64, f64)> = None;
    for k in 0..4 {
        let h = 1e-3 * 0.25f64.powi(k) * (1.0 + point[i].abs());
        let (Some(coarse), Some(fine)) =
            (central(tape, point, i, 2.0 * h), central(tape, point, i, h))
        else {
            continue;
        };
        let change = (fine - coarse).abs();
        if best.is_none_or(|(c, _)| change < c) {
            best = Some((change, fine + (fine - coarse) / 15.0));
        }
    }
    best.map(|(_, fd)| fd)
}

/// Worst relative disagreement between symbolic derivatives and finite
/// differences over `FD_POINTS` points.
fn fd_check(e: &Expr, d: &Domain, seed: u64) -> Result<(f64, usize), String> {
    let syms: Vec<Symbol> = e
        .free_symbols()
        .into_iter()
        .filter(|s| s.as_str() != "pi")
        .collect();
    if syms.is_empty() {
        return Ok((0.0, 0));
    }
    let tape = Tape::compile(e, &syms).map_err(|e| e.to_string())?;
    let sampler = Sampler::new(d, &syms).map_err(|e| format!("{:?}", e))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut point = Vec::new();
    sampler
        .draw_parameters(&mut rng, &mut point)
        .map_err(|e| format!("{:?}", e))?;
    let mut worst: f64 = 0.0;
    let mut good = 0;
    for (i, s) in syms.iter().enumerate() {
        let dt = Tape::compile(&differentiate(e, s), &syms).map_err(|e| e.to_string())?;
        let mut taken = 0;
        let mut attempts = 0;
        while taken < FD_POINTS && attempts < 20 * FD_POINTS {
            attempts += 1;
            sampler
                .draw_point(&mut rng, &mut point)
                .map_err(|e| format!("{:?}", e))?;
            let Ok(exact) = dt.eval_scaled(&point) else {
                continue;
            };
            if !exact.value.is_finite() {
                continue;
            }
            let Some(fd) = richardson(&tape, &point, i) else {
                continue;
            };
            let scale = exact.mag.max(exact.value.abs()).max(f64::MIN_POSITIVE);
            worst = worst.max((fd - exact.value).abs() / scale);
            taken += 1;
        }
        good += taken;
    }
    Ok((worst, good))
}

fn criterion_8(cat: &Catalog) -> Check {
    let mut notes = Vec::new();
    let exprs = catalog_expressions(cat);

    let mut fd_worst: f64 = 0.0;
    let mut fd_points = 0;
    for (label, e, d) in &exprs {
        match fd_check(e, d, derive_seed(SEED, label)) {
            Ok((w, n)) => {
                if w > FD_TOL {
                    notes.push(format!(
                        "{}: derivative differs from finite differences by {:.1e}",
                        label, w
                    ));
                }
                fd_worst = fd_worst.max(w);
                fd_points += n;
            }
            Err(err) => notes.push(format!("{}: {}", label, err)),
        }
    }

    let js = JetSpace::new(&[('u', 3), ('v', 3), ('w', 3)]);
    let mut commute = 0;
    for (label, e, d) in &exprs {
        let mixed = js
            .total_derivative(e, Indep::X)
            .and_then(|a| js.total_derivative(&a, Indep::T))
            .and_then(|a| {
                Ok(a - js.total_derivative(&js.total_derivative(e, Indep::T)?, Indep::X)?)
            });
        match mixed {
            Ok(m) if vanishes(&m, &d.merged(&Domain::new()), derive_seed(SEED, label)) => {
                commute += 1
            }
            Ok(_) => notes.push(format!("{}: D_t D_x != D_x D_t", label)),
            Err(err) => notes.push(format!("{}: {}", label, err)),
        }
    }

    let all = campaign::verify_algebras(cat, &cat.algebras.iter().collect::<Vec<_>>(), &options());
    let mut closed = 0;
    let mut algebras = 0;
    for a in &cat.algebras {
        let finite = a.finite_part();
        let ids: Vec<String> = a
            .instances()
            .into_iter()
            .filter(|g| !g.functional)
            .map(|g| g.id)
            .collect();
        let passing = ids.iter().all(|id| {
            all.iter()
                .any(|r| &r.id == id && r.verdict == Outcome::Pass)
        });
        if !passing || finite.is_empty() {
            continue;
        }
        algebras += 1;
        let d = a.elements.sampling_domain();
        let seed = derive_seed(SEED, &a.id);
        let base = numeric_rank(&finite, &d, 40, seed);
        let mut with = finite.clone();
        for i in 0..finite.len() {
            for j in i + 1..finite.len() {
                with.push(commutator(&finite[i], &finite[j]));
            }
        }
        let ext = numeric_rank(&with, &d, 40, seed);
        match (base, ext) {
            (Ok(b), Ok(x)) if b == x => closed += 1,
            (Ok(b), Ok(x)) => notes.push(format!(
                "{}: brackets raise the rank from {} to {}",
                a.id, b, x
            )),
            (Err(err), _) | (_, Err(err)) => notes.push(format!("{}: {}", a.id, err)),
        }
    }

    let cfg = SymmetryConfig::default();
    let mut resolvers = 0;
    for c in &cat.cases {
        let ok = cat
            .build_potential_system(&c.id, &c.example)
            .map_err(|e| e.to_string())
            .and_then(|s| {
                validate_resolver(
                    &s,
                    &c.example.sampling_domain(),
                    &cfg,
                    derive_seed(SEED, &c.id),
                )
                .map_err(|e| e.to_string())
            });
        match ok {
            Ok(r) if r.verdict == Verdict::Symmetry => resolvers += 1,
            Ok(r) => notes.push(format!(
                "case {}: resolver residual {:.1e}",
                c.id, r.worst_residual
            )),
            Err(err) => notes.push(format!("case {}: {}", c.id, err)),
        }
    }

    let start = Instant::now();
    let report = campaign::verify_all(cat, &options());
    let elapsed = start.elapsed();

    Check {

        known_red: false,
        pass: notes.is_empty() && elapsed <= CAMPAIGN_BUDGET,
        line: format!(
            "finite differences on {} expressions ({} points, worst {:.1e}); D_tD_x = D_xD_t on {}/{}; {}/{} passing algebras closed; {}/{} resolvers valid; verify-all {} records in {:.1}s",
            exprs.len(),
            fd_points,
            fd_worst,
            commute,
            exprs.len(),
            closed,
            algebras,
            resolvers,
            cat.cases.len(),
            report.records.len(),
            elapsed.as_secs_f64()
        ),
        notes,
    }
}

fn main() {
    let cat = builtin();
    let results: Vec<(u32, Check)> = vec![
        (1, criterion_1(&cat)),
        (2, criterion_2(&cat)),
        (3, criterion_3(&cat)),
        (4, criterion_4()),
        (5, criterion_5(&cat)),
        (6, criterion_6(&cat)),
        (7, criterion_7()),
        (8, criterion_8(&cat)),
    ];
    let verbose = std::env::var_os("SYMKIT_ACCEPTANCE_VERBOSE").is_some();
    let mut unexpected = Vec::new();
    for (n, v) in &results {
        println!(
            "criterion {}: {} {}",
            n,
            if v.pass { "PASS" } else { "FAIL" },
            v.line
        );
        if !v.pass || verbose {
            for note in &v.notes {
                println!("    {}", note);
            }
        }
        if !v.pass && !v.known_red {
            unexpected.push(*n);
        }
    }
    let red: Vec<u32> = results
        .iter()
        .filter(|(_, v)| !v.pass)
        .map(|(n, _)| *n)
        .collect();
    println!(
        "{} of {} criteria pass; red: {:?}; unexpected: {:?}",
        results.len() - red.len(),
        results.len(),
        red,
        unexpected
    );
    if !unexpected.is_empty() {
        std::process::exit(1);
    }
}

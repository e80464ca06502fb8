use super::*;
use crate::parse::parse;

fn same(a: &Expr, b: &str) -> bool {
    let d = a.clone() - parse(b).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    is_zero(
        &d,
        &Domain::new(),
        &ZeroConfig::default().with_trials(50),
        &mut rng,
    )
    .unwrap()
    .is_zero
}

#[test]
fn fujita_storm_equation() {
    let el = ArbitraryElements::parse("1", "1", "u^(-2)", "0");
    let s = build_equation(&el).unwrap();
    assert!(same(&s.equations[0], "u_t + 2*u^(-3)*u_x^2 - u^(-2)*u_xx"));
}

#[test]
fn weighted_equation() {
    let el = ArbitraryElements::parse("x^(-4/3)", "1", "u^(-2)", "0");
    let s = build_equation(&el).unwrap();
    assert!(same(
        &s.equations[0],
        "x^(-4/3)*u_t + 2*u^(-3)*u_x^2 - u^(-2)*u_xx"
    ));
}

#[test]
fn heat_equation() {
    let s = build_equation(&ArbitraryElements::parse("1", "1", "1", "0")).unwrap();
    assert!(same(&s.equations[0], "u_t - u_xx"));
}

#[test]
fn degenerate_elements() {
    let el = ArbitraryElements::parse("0", "1", "u^(-2)", "0");
    assert!(matches!(
        build_equation(&el),
        Err(CatalogError::Degenerate(_))
    ));
    let el = ArbitraryElements::parse("1", "1", "u^(-2)", "0").with_int_a("1/u");
    assert!(matches!(
        build_equation(&el),
        Err(CatalogError::Degenerate(_))
    ));
}

#[test]
fn potential_system_of_fujita_storm() {
    let cat = builtin();
    let el = ArbitraryElements::parse("1", "1", "u^(-2)", "0");
    let s = cat.build_potential_system("1", &el).unwrap();
    assert!(same(&s.equations[0], "v_x - u"));
    assert!(same(&s.equations[1], "v_t - u^(-2)*u_x"));
}

#[test]
fn potential_system_13() {
    let cat = builtin();
    let el = ArbitraryElements::parse("x^(-4/3)", "1", "u^(-2)", "0");
    let s = cat.build_potential_system("1", &el).unwrap();
    assert!(same(&s.equations[0], "v_x - x^(-4/3)*u"));
    assert!(same(&s.equations[1], "v_t - u^(-2)*u_x"));
}

#[test]
fn constraint_violation_is_named() {
    let cat = builtin();
    let el = ArbitraryElements::parse("1", "x^2", "u^(-2)", "1");
    match cat.build_potential_system("3", &el) {
        Err(CatalogError::Constraint { case, condition }) => {
            assert_eq!(case, "3");
            assert_eq!(condition, "f = h_x");
        }
        other => panic!("{:?}", other),
    }
    assert!(matches!(
        cat.build_potential_system("9", &el),
        Err(CatalogError::UnknownCase(_))
    ));
}

#[test]
fn every_case_example_builds() {
    let cat = builtin();
    for c in &cat.cases {
        cat.build_potential_system(&c.id, &c.example)
            .unwrap_or_else(|e| panic!("case {}: {}", c.id, e));
    }
}

#[test]
fn two_potential_characteristics_must_differ() {
    let mut case = builtin().case("5'").unwrap().clone();
    case.system = SystemTemplate::TwoPotential {
        alpha: parse("f").unwrap(),
        beta: parse("1").unwrap(),
        gamma: parse("0").unwrap(),
        lambda: parse("2*f").unwrap(),
        beta2: parse("2").unwrap(),
        gamma2: parse("0").unwrap(),
    };
    let el = ArbitraryElements::parse("x^2", "1", "u^(-2)", "0");
    assert!(matches!(
        build_potential_system(&case, &el),
        Err(CatalogError::Degenerate(_))
    ));
}

#[test]
fn case_eleven_listing() {
    let cat = builtin();
    let a = cat.get_algebras("system-1/case-11").unwrap();
    assert_eq!(a.len(), 1);
    assert_eq!(a[0].generators.len(), 7);
    assert!(a[0]
        .generators
        .iter()
        .any(|g| g.printed == "exp(-v)*(h_x - h*u)*Du + exp(-v)*h*Dv"));
}

#[test]
fn system_four_case_two_listing() {
    let cat = builtin();
    let a = cat.get_algebras("system-4/case-2").unwrap();
    assert_eq!(a[0].generators.len(), 4);
    let want = VectorField::from_operator("exp(-t)*x*v*Dx - u^2*Du + 2*exp(t)*Dv").unwrap();
    assert!(a[0].generators.iter().any(|g| g.field == want));
}

#[test]
fn selectors() {
    let cat = builtin();
    assert!(matches!(
        cat.get_algebras("nonexistent"),
        Err(CatalogError::UnknownSelector(_))
    ));
    assert_eq!(cat.get_algebras("system-1").unwrap().len(), 12);
    assert_eq!(cat.get_algebras("system-1/case-1").unwrap().len(), 1);
    assert_eq!(cat.get_algebras("all").unwrap().len(), cat.algebras.len());
    assert!(selector_matches("system-1/case-10", "system-1/"));
    assert!(!selector_matches("system-1/case-10", "system-1/case-1"));
}

#[test]
fn solutions_listing() {
    let cat = builtin();
    let sols = cat.get_solutions("fujita-storm").unwrap();
    for want in [
        "x^(-1)",
        "(x^2 + exp(2*t))^(-1/2)",
        "t/(x*sqrt(-t*ln(x*sqrt(t))))",
    ] {
        let e = parse(want).unwrap();
        assert!(sols.iter().any(|s| s.u.as_ref() == Some(&e)), "{}", want);
    }
    assert!(sols
        .iter()
        .any(|s| s.expected == ExpectedVerdict::OutOfScope && s.u.is_none()));
    assert!(matches!(
        cat.get_solutions("burgers"),
        Err(CatalogError::UnknownEquation(_))
    ));
}

#[test]
fn solution_symbols_are_coordinates_or_constants() {
    for s in builtin().solutions.iter() {
        let Some(u) = &s.u else { continue };
        for sym in u.free_symbols() {
            let name = sym.as_str();
            assert!(
                matches!(name, "t" | "x" | "pi") || s.parameters.iter().any(|p| p.name == sym),
                "{}: {}",
                s.id,
                name
            );
        }
    }
}

#[test]
fn generators_live_on_their_system() {
    let cat = builtin();
    for a in &cat.algebras {
        let second = cat.case(&a.case).unwrap().system.potentials() == 2;
        for g in a.instances() {
            for v in g.field.variables() {
                assert!(v.as_str() != "w" || second, "{} uses w", g.id);
            }
            for s in g.field.coeffs.iter().flat_map(|c| c.free_symbols()) {
                let ok = ["t", "x", "u", "v", "w", "pi"].contains(&s.as_str())
                    || a.elements.parameters.iter().any(|p| p.name == s);
                assert!(ok, "{}: stray symbol {}", g.id, s);
            }
        }
    }
}

#[test]
fn functional_parameters_solve_their_constraints() {
    for a in &builtin().algebras {
        for fp in &a.functional_parameters {
            fp.validate(5).unwrap_or_else(|e| panic!("{}: {}", a.id, e));
            assert!(fp.instantiations.len() >= 3);
        }
    }
}

#[test]
fn functional_generators_expand() {
    let cat = builtin();
    let a = cat.get_algebras("system-1/case-4").unwrap()[0];
    let inst = a.instances();
    assert_eq!(inst.len(), 6 + 3);
    assert_eq!(inst.last().unwrap().id, "system-1/case-4/g7/k3");
    assert!(inst.last().unwrap().functional);
    assert_eq!(a.finite_part().len(), 6);
}

#[test]
fn variant_ids() {
    let cat = builtin();
    let a = cat.get_algebras("second-level/case-3").unwrap()[0];
    let v = a.variants.iter().find(|v| v.id == "plus-sign").unwrap();
    let inst = a.variant_instances(v);
    assert_eq!(inst.len(), 1);
    assert_eq!(inst[0].id, "second-level/case-3~plus-sign/g6");
}

#[test]
fn printed_relations_of_closed_form_cases() {
    let cat = builtin();
    for id in ["6.1", "6.2", "7.1", "7.2", "7.3", "8", "6'", "7'", "8'"] {
        let c = cat.case(id).unwrap();
        check_conditions(c, &c.example).unwrap_or_else(|e| panic!("{}: {}", id, e));
    }
}

#[test]
fn fujita_storm_operator_symmetries() {
    use crate::jet::check_symmetry;
    let cat = builtin();
    let el = ArbitraryElements::parse("1", "1", "u^(-2)", "0");
    let s = cat.build_potential_system("1", &el).unwrap();
    let cfg = SymmetryConfig::default();
    let d = el.sampling_domain();
    let dv = VectorField::from_operator("Dv").unwrap();
    assert_eq!(
        check_symmetry(&s, &dv, &d, &cfg, 1).unwrap().verdict,
        Verdict::Symmetry
    );
    let du = VectorField::from_operator("Du").unwrap();
    assert_eq!(
        check_symmetry(&s, &du, &d, &cfg, 1).unwrap().verdict,
        Verdict::NotSymmetry
    );
}

#[test]
fn audits() {
    let cat = builtin();
    let cfg = AuditConfig::default();
    let find = |id: &str| cat.solutions.iter().find(|s| s.id == id).unwrap();
    let a = audit_solution(find("constant"), &cfg, 1).unwrap();
    assert_eq!(a.verdict, SolutionVerdict::Pass);
    let a = audit_solution(find("travelling"), &cfg, 1).unwrap();
    assert_eq!(a.verdict, SolutionVerdict::Fail);
    assert!(a.witness.is_some() && a.fd_agreement);
    let a = audit_solution(find("source"), &cfg, 1).unwrap();
    assert_eq!(a.verdict, SolutionVerdict::OutOfScope);
}

#[test]
fn residual_of_heat_like_profile() {
    let r = fujita_storm_residual(&parse("x^(-1)").unwrap());
    assert!(same(&r, "0"));
    let r = fujita_storm_residual(&parse("x").unwrap());
    assert!(same(&r, "2*x^(-3)"));
}

use super::*;
use crate::catalog::{build_equation, builtin};
use crate::jet::{check_symmetry, JetSpace, SymmetryConfig, VectorField, Verdict};
use crate::parse::parse;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d).unwrap()
}

fn zero_on(e: &Expr, d: &Domain) -> bool {
    vanishes(e, d).unwrap()
}

fn same(a: &Expr, b: &str) -> bool {
    zero_on(&(a.clone() - parse(b).unwrap()), &Domain::new())
}

fn fujita_storm() -> ArbitraryElements {
    ArbitraryElements::parse("1", "1", "u^(-2)", "0").with_int_a("-1/u")
}

#[test]
fn identity_parameters_give_the_identity() {
    let t = usual_equivalence(&TransformationParameters::default()).unwrap();
    assert!(t.is_identity().unwrap());
    let g = gauge_transform(&TransformationParameters::default(), &fujita_storm()).unwrap();
    assert!(g.is_identity().unwrap());
}

#[test]
fn degenerate_parameters_are_rejected() {
    let p = TransformationParameters::default().with_delta(3, Rational::ZERO);
    assert!(matches!(
        usual_equivalence(&p),
        Err(TransformError::Degenerate(_))
    ));
    let p = TransformationParameters::default().with_epsilon(2, Rational::ZERO);
    assert!(matches!(
        gauge_transform(&p, &fujita_storm()),
        Err(TransformError::Degenerate(_))
    ));
    let p = TransformationParameters::default().with_delta(9, Rational::ZERO);
    assert!(matches!(
        g1_preserving(&p, &fujita_storm()),
        Err(TransformError::Degenerate(_))
    ));
    let p = TransformationParameters::default().with_x_map(parse("(x - 2)^2").unwrap());
    assert!(matches!(
        usual_equivalence(&p),
        Err(TransformError::NotMonotone(_))
    ));
}

#[test]
fn scaling_of_t_and_reflection_of_u() {
    let p = TransformationParameters::default()
        .with_delta(1, Rational::integer(2))
        .with_delta(3, Rational::MINUS_ONE);
    let t = usual_equivalence(&p).unwrap();
    assert_eq!(t.forward[2], parse("-u").unwrap());
    let el = ArbitraryElements::parse("x^2", "1", "u^(-2)", "0");
    let new = apply_to_elements(&t, &el).unwrap();
    assert!(same(&new.f, "2*x^2"));
    assert!(same(&new.a, "u^(-2)"));
    let u = new.domain.vars.get(&Symbol::new("u")).unwrap();
    assert!(u.lo < -1.9 && u.hi > -0.6 && u.hi < 0.0);
}

#[test]
fn reduction_map_gives_unit_g() {
    let el = ArbitraryElements::parse("x", "1", "u^(-2)", "u").with_g("x^2");
    let t = reduction_to_unit_g(&el).unwrap();
    let new = apply_to_elements(&t, &el).unwrap();
    assert!(zero_on(
        &(new.g.clone() - Expr::one()),
        &new.sampling_domain()
    ));
    let back = compose_map(&new.f, &t.forward) - el.g.clone() * el.f.clone();
    assert!(zero_on(&back, &el.sampling_domain()));
    assert_eq!(new.h, compose_map(&el.h, &t.inverse));
}

#[test]
fn extended_with_zero_eps4_is_usual() {
    let p = TransformationParameters::default()
        .with_delta(1, q(3, 2))
        .with_delta(2, q(1, 3))
        .with_delta(3, q(-2, 1))
        .with_epsilon(1, q(5, 4))
        .with_epsilon(2, q(2, 3))
        .with_x_map(parse("2*x + 1").unwrap());
    let el = ArbitraryElements::parse("x", "x", "exp(u)", "u").with_g("x^2");
    let a = usual_equivalence(&p).unwrap();
    let b = extended_equivalence(&p, &el).unwrap();
    let ea = apply_to_elements(&a, &el).unwrap();
    let eb = apply_to_elements(&b, &el).unwrap();
    let d = ea.sampling_domain();
    for (x, y) in [
        (&ea.f, &eb.f),
        (&ea.g, &eb.g),
        (&ea.h, &eb.h),
        (&ea.a, &eb.a),
        (&ea.b, &eb.b),
    ] {
        assert!(zero_on(&(x.clone() - y.clone()), &d));
    }
}

#[test]
fn gauge_factor_for_h_equal_g() {
    let el = ArbitraryElements::parse("1", "x^2", "u^(-2)", "0").with_g("x^2");
    let p = TransformationParameters::default().with_epsilon(4, Rational::ONE);
    let t = extended_equivalence(&p, &el).unwrap();
    assert!(same(&t.elements.as_ref().unwrap().h, "exp(-x)"));
}

#[test]
fn gauge_example() {
    let el = ArbitraryElements::parse("1", "1", "u^(-2)", "u^(-1)");
    let p = TransformationParameters::default().with_epsilon(4, Rational::ONE);
    let t = gauge_transform(&p, &el).unwrap();
    let new = apply_to_elements(&t, &el).unwrap();
    assert!(same(&new.f, "exp(-x)"));
    assert!(same(&new.b, "u^(-1) + u^(-2)"));
    let p = p.with_epsilon(3, q(3, 1));
    let new = apply_to_elements(&gauge_transform(&p, &el).unwrap(), &el).unwrap();
    assert!(same(&new.b, "3*(u^(-1) + u^(-2))"));
}

#[test]
fn gauge_operator_identity() {
    let el = ArbitraryElements::parse("x", "1/x", "exp(u)", "u^2").with_g("x^2");
    let p = TransformationParameters::default()
        .with_epsilon(1, q(2, 1))
        .with_epsilon(2, q(-1, 3))
        .with_epsilon(3, q(3, 2))
        .with_epsilon(4, q(-5, 4));
    let t = gauge_transform(&p, &el).unwrap();
    let (lhs, rhs) = gauge_operator_residual(&t, &el).unwrap();
    assert!(zero_on(&(lhs - rhs), &Domain::new()));
}

#[test]
fn gauge_elements_and_identity_echo() {
    let el = ArbitraryElements::parse("x^2", "1", "u^(-2)", "0");
    let p = TransformationParameters::default()
        .with_epsilon(1, q(2, 1))
        .with_epsilon(2, q(3, 1));
    let new = apply_to_elements(&gauge_transform(&p, &el).unwrap(), &el).unwrap();
    assert!(same(&new.f, "2*x^2"));
    assert!(same(&new.g, "2/3"));
    let echo = apply_to_elements(
        &gauge_transform(&TransformationParameters::default(), &el).unwrap(),
        &el,
    )
    .unwrap();
    assert_eq!((echo.f, echo.h, echo.a, echo.b), (el.f, el.h, el.a, el.b));
}

#[test]
fn extended_with_zero_convection() {
    let el = ArbitraryElements::parse("1", "1", "u^(-2)", "0");
    let p = TransformationParameters::default()
        .with_epsilon(3, q(2, 1))
        .with_epsilon(4, Rational::ONE);
    let new = apply_to_elements(&extended_equivalence(&p, &el).unwrap(), &el).unwrap();
    assert!(same(&new.b, "2*u^(-2)"));
}

#[test]
fn g1_preserving_examples() {
    let el = ArbitraryElements::parse("1", "1", "u^(-2)", "0");
    let t = g1_preserving(
        &TransformationParameters::default().with_delta(2, q(1, 2)),
        &el,
    )
    .unwrap();
    assert_eq!(t.forward[0], parse("t + 1/2").unwrap());
    assert_eq!(t.forward[1], parse("x").unwrap());

    let hx = ArbitraryElements::parse("1", "x", "u^(-2)", "0");
    let p = TransformationParameters::default().with_delta(8, Rational::ONE);
    match g1_preserving(&p, &hx) {
        Err(e @ TransformError::NonElementary { .. }) => {
            assert!(alloc::format!("{}", e).contains("h = x"))
        }
        other => panic!("{:?}", other),
    }

    let p = TransformationParameters::default()
        .with_delta(1, q(2, 1))
        .with_delta(5, q(3, 1))
        .with_delta(6, q(-1, 1))
        .with_delta(8, Rational::ONE)
        .with_delta(9, q(5, 1));
    let t = g1_preserving(&p, &el).unwrap();
    assert!(same(&t.forward[1], "3*exp(x) - 1"));
    assert!(same(&t.elements.as_ref().unwrap().f, "2*5/3*exp(-2*x)"));
}

#[test]
fn g1_preserving_agrees_with_the_extended_group() {
    let el = ArbitraryElements::parse("x", "1", "u^(-2)", "u");
    let p = TransformationParameters::default()
        .with_delta(1, q(2, 1))
        .with_delta(5, q(1, 2))
        .with_delta(7, q(3, 1))
        .with_delta(8, q(1, 4))
        .with_delta(9, q(-2, 1));
    let g1 = g1_preserving(&p, &el).unwrap();
    let new = apply_to_elements(&g1, &el).unwrap();
    assert!(zero_on(
        &(new.g.clone() - Expr::one()),
        &new.sampling_domain()
    ));
    let ext = TransformationParameters::default()
        .with_delta(1, q(2, 1))
        .with_epsilon(1, q(-2, 1))
        .with_epsilon(2, q(-1, 1))
        .with_epsilon(3, q(3, 1))
        .with_epsilon(4, q(1, 4))
        .with_x_map(g1.forward[1].clone());
    let other = apply_to_elements(&extended_equivalence(&ext, &el).unwrap(), &el).unwrap();
    let d = new.sampling_domain();
    for (x, y) in [
        (&new.f, &other.f),
        (&new.g, &other.g),
        (&new.h, &other.h),
        (&new.a, &other.a),
        (&new.b, &other.b),
    ] {
        assert!(zero_on(&(x.clone() - y.clone()), &d), "{} vs {}", x, y);
    }
}

#[test]
fn hodograph_is_an_involution() {
    let h = hodograph();
    assert!(compose(&h, &h).unwrap().is_identity().unwrap());
    assert_eq!(inverse(&h).unwrap().forward, h.forward);
}

#[test]
fn potential_shift_examples() {
    let d = Domain::new();
    assert!(potential_shift(Rational::ZERO, &d)
        .unwrap()
        .is_identity()
        .unwrap());
    let s = potential_shift(Rational::ONE, &d).unwrap();
    let p = s.apply_point(&[0.5, 1.0, 1.0, 0.3, 0.0], &[]).unwrap();
    assert_eq!(p[2], 0.5);
    let a = potential_shift(q(1, 3), &d).unwrap();
    let b = potential_shift(q(-1, 5), &d).unwrap();
    let ab = compose(&a, &b).unwrap();
    let direct = potential_shift(q(2, 15), &d).unwrap();
    for i in 0..5 {
        assert!(zero_on(
            &(ab.forward[i].clone() - direct.forward[i].clone()),
            &d
        ));
    }
    assert!(matches!(
        potential_shift(q(-1, 1), &d),
        Err(TransformError::Precondition(_))
    ));
}

#[test]
fn compose_with_inverse_is_identity() {
    let p = TransformationParameters::default()
        .with_delta(1, q(3, 1))
        .with_delta(4, q(1, 2))
        .with_epsilon(1, q(2, 1))
        .with_x_map(parse("x^3").unwrap());
    let t = usual_equivalence(&p).unwrap();
    assert!(compose(&t, &inverse(&t).unwrap())
        .unwrap()
        .is_identity()
        .unwrap());
    let el = ArbitraryElements::parse("x", "x^2", "exp(u)", "1/u");
    let g = gauge_transform(&p.clone().with_epsilon(4, q(-3, 2)), &el).unwrap();
    assert!(compose(&g, &inverse(&g).unwrap())
        .unwrap()
        .is_identity()
        .unwrap());
}

#[test]
fn usual_maps_compose_by_parameter_arithmetic() {
    let p1 = TransformationParameters::default()
        .with_delta(1, q(2, 1))
        .with_delta(2, q(1, 1))
        .with_delta(3, q(3, 1))
        .with_epsilon(1, q(1, 2))
        .with_epsilon(3, q(4, 1))
        .with_x_map(parse("3*x + 1").unwrap());
    let p2 = TransformationParameters::default()
        .with_delta(1, q(3, 1))
        .with_delta(2, q(-1, 1))
        .with_delta(4, q(2, 1))
        .with_epsilon(2, q(5, 1))
        .with_x_map(parse("x^2").unwrap())
        .with_domain(Domain::new().with("x", VarDomain::new(5.5, 10.0)));
    let t = compose(
        &usual_equivalence(&p1).unwrap(),
        &usual_equivalence(&p2).unwrap(),
    )
    .unwrap();
    let p = TransformationParameters::default()
        .with_delta(1, q(6, 1))
        .with_delta(2, q(2, 1))
        .with_delta(3, q(3, 1))
        .with_delta(4, q(2, 1))
        .with_epsilon(1, q(1, 2))
        .with_epsilon(2, q(5, 1))
        .with_epsilon(3, q(4, 1))
        .with_x_map(parse("(3*x + 1)^2").unwrap());
    let direct = usual_equivalence(&p).unwrap();
    let d = Domain::new();
    for i in 0..5 {
        assert!(zero_on(
            &(t.forward[i].clone() - direct.forward[i].clone()),
            &d
        ));
    }
    let (m, n) = (t.elements.unwrap(), direct.elements.unwrap());
    for (a, b) in [
        (&m.f, &n.f),
        (&m.g, &n.g),
        (&m.h, &n.h),
        (&m.a, &n.a),
        (&m.b, &n.b),
        (&m.ba, &n.ba),
    ] {
        assert!(zero_on(&(a.clone() - b.clone()), &d), "{} vs {}", a, b);
    }
}

#[test]
fn gauge_parameters_add() {
    let el = ArbitraryElements::parse("x", "x^2", "u^(-2)", "u").with_g("x");
    let pa = TransformationParameters::default().with_epsilon(4, q(1, 2));
    let ga = gauge_transform(&pa, &el).unwrap();
    let mid = apply_to_elements(&ga, &el).unwrap();
    let gb = gauge_transform(
        &TransformationParameters::default().with_epsilon(4, q(-3, 4)),
        &mid,
    )
    .unwrap();
    let both = apply_to_elements(&compose(&ga, &gb).unwrap(), &el).unwrap();
    let direct = apply_to_elements(
        &gauge_transform(
            &TransformationParameters::default().with_epsilon(4, q(-1, 4)),
            &el,
        )
        .unwrap(),
        &el,
    )
    .unwrap();
    let d = el.sampling_domain();
    for (a, b) in [
        (&both.f, &direct.f),
        (&both.g, &direct.g),
        (&both.h, &direct.h),
        (&both.b, &direct.b),
    ] {
        assert!(zero_on(&(a.clone() - b.clone()), &d), "{} vs {}", a, b);
    }
}

#[test]
fn equation_maps_to_the_equation_of_the_new_elements() {
    let el = ArbitraryElements::parse("x", "x^2", "u^(-2)", "u").with_g("x");
    let p = TransformationParameters::default()
        .with_delta(1, q(2, 1))
        .with_delta(3, q(-3, 2))
        .with_delta(4, q(4, 1))
        .with_epsilon(1, q(3, 1))
        .with_epsilon(2, q(1, 2))
        .with_epsilon(4, q(2, 3))
        .with_x_map(parse("x^2 + 1").unwrap());
    let t = extended_equivalence(&p, &el).unwrap();
    let old = build_equation(&el).unwrap();
    let new_el = apply_to_elements(&t, &el).unwrap();
    let new = build_equation(&new_el).unwrap();
    let image = transform_equations(&t, &old.equations).unwrap();
    let r = new.on_manifold(&image[0]).unwrap();
    assert!(zero_on(&r, &new_el.sampling_domain()));
}

fn target_of_13() -> DifferentialSystem {
    let flux = parse("v^(-4/3)*v_x").unwrap();
    let wide = JetSpace::new(&[('u', 3), ('v', 3)]);
    let vt = wide.total_derivative(&flux, crate::jet::Indep::X).unwrap();
    DifferentialSystem::custom(
        "hodograph image of (13)",
        JetSpace::new(&[('u', 2), ('v', 3)]),
        alloc::vec![Expr::sym("u") - flux.clone(), Expr::sym("v_t") - vt.clone()],
        alloc::vec![(Symbol::new("u"), flux), (Symbol::new("v_t"), vt)],
    )
    .unwrap()
}

use crate::jet::DifferentialSystem;

#[test]
fn hodograph_maps_system_13() {
    let cat = builtin();
    let el = ArbitraryElements::parse("x^(-4/3)", "1", "u^(-2)", "0");
    let s = cat.build_potential_system("1", &el).unwrap();
    let image = transform_equations(&hodograph(), &s.equations).unwrap();
    let target = target_of_13();
    let d = Domain::new().with("v", VarDomain::new(1.5, 3.0));
    for e in &image {
        let r = target.on_manifold(e).unwrap();
        assert!(zero_on(&r, &d), "{}", e);
    }
}

#[test]
fn hodograph_images_of_13_are_symmetries() {
    let cat = builtin();
    let entry = cat.get_algebras("system-1/eq13").unwrap()[0];
    let target = target_of_13();
    let d = Domain::new()
        .with("v", VarDomain::new(1.5, 3.0))
        .with("x", VarDomain::new(-1.0, 1.0));
    for g in entry.instances() {
        let image = push_forward_vectorfield(&hodograph(), &g.field).unwrap();
        let r = check_symmetry(&target, &image, &d, &SymmetryConfig::default(), 1).unwrap();
        assert_eq!(r.verdict, Verdict::Symmetry, "{} -> {}", g.id, image);
    }
}

#[test]
fn vector_field_pushforward() {
    let v = VectorField::from_operator("t*Dt - v*Dx + u^2*Du").unwrap();
    let id = EquivalenceTransformation::identity();
    assert_eq!(push_forward_vectorfield(&id, &v).unwrap(), v);
    let dv = push_forward_vectorfield(&hodograph(), &VectorField::basis("v")).unwrap();
    assert_eq!(dv, VectorField::basis("x"));
    let g5 = VectorField::from_operator("3*x*v*Dx - (v + 3*x^(-1/3)*u)*u*Du - v^2*Dv").unwrap();
    let img = push_forward_vectorfield(&hodograph(), &g5).unwrap();
    let want = VectorField::from_operator("-x^2*Dx + (x*u + 3*v^(-1/3))*Du + 3*x*v*Dv").unwrap();
    for i in 0..5 {
        assert!(
            zero_on(
                &(img.coeffs[i].clone() - want.coeffs[i].clone()),
                &Domain::new()
            ),
            "{}",
            img
        );
    }
}

#[test]
fn singular_jacobian_is_reported() {
    let mut t = EquivalenceTransformation::identity();
    t.forward[1] = Expr::sym("t");
    assert!(matches!(
        push_forward_vectorfield(&t, &VectorField::basis("x")),
        Err(TransformError::SingularJacobian)
    ));
}

fn fs_potential_system() -> DifferentialSystem {
    builtin()
        .build_potential_system("1", &ArbitraryElements::parse("1", "1", "u^(-2)", "0"))
        .unwrap()
}

fn heat_potential_system() -> DifferentialSystem {
    builtin()
        .build_potential_system("1", &ArbitraryElements::parse("1", "1", "1", "0"))
        .unwrap()
}

#[test]
fn identity_keeps_a_solution() {
    let s = Solution::new(
        parse("x^(-1)").unwrap(),
        Some(parse("ln(x) - t").unwrap()),
        Domain::new(),
    );
    let out = push_forward_solution(
        &EquivalenceTransformation::identity(),
        &s,
        &fs_potential_system(),
    )
    .unwrap();
    assert_eq!((out.u, out.v), (s.u, s.v));
}

#[test]
fn hodograph_of_the_inverse_power_solution() {
    let d = Domain::new().with("x", VarDomain::new(0.5, 2.0));
    let s = Solution::new(
        parse("x^(-1)").unwrap(),
        Some(parse("ln(x) - t + c").unwrap()),
        d,
    );
    let out = push_forward_solution(&hodograph(), &s, &fs_potential_system()).unwrap();
    let want = parse("exp(x + t - c)").unwrap();
    assert!(zero_on(&(out.u.clone() - want.clone()), &out.domain));
    assert!(zero_on(&(out.v.clone().unwrap() - want), &out.domain));
    let heat = solution_residuals(&[parse("v_t - v_xx").unwrap()], &out).unwrap();
    assert!(zero_on(&heat[0], &out.domain));
}

#[test]
fn hodograph_links_constant_and_linear_solutions() {
    let d = Domain::new().with("c", VarDomain::new(0.5, 2.0));
    let s = Solution::new(parse("c").unwrap(), Some(parse("c*x").unwrap()), d);
    let out = push_forward_solution(&hodograph(), &s, &fs_potential_system()).unwrap();
    assert!(zero_on(
        &(out.v.clone().unwrap() - parse("x/c").unwrap()),
        &out.domain
    ));
    let back = push_forward_solution(&hodograph(), &out, &heat_potential_system()).unwrap();
    assert!(zero_on(&(back.u - parse("c").unwrap()), &back.domain));
}

#[test]
fn potential_must_be_invertible() {
    let s = Solution::new(
        parse("exp(-t)*cos(x)").unwrap(),
        Some(parse("exp(-t)*sin(x)").unwrap()),
        Domain::new(),
    );
    let r = push_forward_solution(&hodograph(), &s, &heat_potential_system());
    match r {
        Err(e @ TransformError::NoInverse(_)) => {
            assert!(alloc::format!("{}", e).contains("no closed-form inverse"))
        }
        other => panic!("{:?}", other),
    }
    let wrong = Solution::new(
        parse("x").unwrap(),
        Some(parse("x^2/2").unwrap()),
        Domain::new(),
    );
    assert!(matches!(
        push_forward_solution(&hodograph(), &wrong, &fs_potential_system()),
        Err(TransformError::NotASolution { stage: "input", .. })
    ));
}

#[test]
fn class_transformation_of_a_solution() {
    let el = ArbitraryElements::parse("1", "1", "u^(-2)", "0");
    let p = TransformationParameters::default()
        .with_delta(1, q(2, 1))
        .with_delta(3, q(3, 1))
        .with_x_map(parse("2*x + 1").unwrap());
    let t = usual_equivalence(&p).unwrap();
    let s = Solution::new(
        parse("(x^2 + exp(2*t))^(-1/2)").unwrap(),
        None,
        Domain::new(),
    );
    let out = push_forward_solution(&t, &s, &build_equation(&el).unwrap()).unwrap();
    let new = build_equation(&apply_to_elements(&t, &el).unwrap()).unwrap();
    let r = solution_residuals(&new.equations, &out).unwrap();
    assert!(zero_on(&r[0], &out.domain));
}

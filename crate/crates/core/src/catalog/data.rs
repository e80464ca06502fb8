use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::domain::{Domain, VarDomain};
use crate::jet::VectorField;
use crate::symbol::Symbol;

use super::{
    p, AlgebraVariant, ArbitraryElements, Catalog, Condition, ExactSolutionEntry, ExpectedVerdict,
    FunctionalParameter, Generator, Parameter, PotentialSystemCase, Replacement,
    SymmetryAlgebraEntry, SystemTemplate, CATALOG_VERSION,
};

fn gen(op: &str) -> Generator {
    Generator {
        printed: op.to_string(),
        field: VectorField::from_operator(op).expect("catalog operator"),
    }
}

fn gens(ops: &[&str]) -> Vec<Generator> {
    ops.iter().map(|o| gen(o)).collect()
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn mu(exclusions: &[f64]) -> Parameter {
    Parameter::new("mu", -2.5, 2.5, exclusions)
}

fn nu(exclusions: &[f64]) -> Parameter {
    Parameter::new("nu", -2.5, 2.5, exclusions)
}

/// Values of `k` for the exponential solutions of heat-type side equations.
const K_VALUES: [&str; 3] = ["1/2", "1", "-3/2"];

fn heat_parameter(name: &str, var: &str) -> FunctionalParameter {
    FunctionalParameter {
        name: name.to_string(),
        args: alloc::vec![Symbol::new("t"), Symbol::new(var)],
        constraint: p(&alloc::format!("{n}_t - {n}_{v}{v}", n = name, v = var)),
        instantiations: K_VALUES
            .iter()
            .map(|k| {
                p(&alloc::format!(
                    "exp(({k})^2*t + ({k})*{v})",
                    k = k,
                    v = var
                ))
            })
            .collect(),
        aux: Default::default(),
    }
}

fn simplest(alpha: &str, beta: &str, gamma: &str) -> SystemTemplate {
    SystemTemplate::Simplest {
        alpha: p(alpha),
        beta: p(beta),
        gamma: p(gamma),
    }
}

fn two(
    alpha: &str,
    beta: &str,
    gamma: &str,
    lambda: &str,
    beta2: &str,
    gamma2: &str,
) -> SystemTemplate {
    SystemTemplate::TwoPotential {
        alpha: p(alpha),
        beta: p(beta),
        gamma: p(gamma),
        lambda: p(lambda),
        beta2: p(beta2),
        gamma2: p(gamma2),
    }
}

fn case(
    id: &str,
    printed: &str,
    system: SystemTemplate,
    constraints: &[(&str, &str)],
    yields: bool,
    example: ArbitraryElements,
) -> PotentialSystemCase {
    PotentialSystemCase {
        id: id.to_string(),
        printed: printed.to_string(),
        system,
        constraints: constraints
            .iter()
            .map(|(l, e)| Condition::new(l, e))
            .collect(),
        nonzero: Vec::new(),
        potential_symmetries: yields,
        example,
        notes: Vec::new(),
    }
}

const F61: &str = "exp(-mu/x)*x^(-3)";
const H61: &str = "exp(-mu/x)*x^(-1)";
const F7: &str = "abs(x - 1)^(mu - 3/2)*abs(x + 1)^(-mu - 3/2)";
const H7: &str = "abs(x - 1)^(mu - 1/2)*abs(x + 1)^(-mu - 1/2)";
const F8: &str = "exp(mu*arctan(x))*(x^2 + 1)^(-3/2)";
const H8: &str = "exp(mu*arctan(x))*(x^2 + 1)^(-1/2)";

fn b1(f: &str, h: &str) -> ArbitraryElements {
    ArbitraryElements::parse(f, h, "u^(-2)", "1")
        .with_int_a("-1/u")
        .with_parameter(Parameter::new("mu", 0.3, 1.7, &[]))
}

fn cases() -> Vec<PotentialSystemCase> {
    let f61 = alloc::format!("f - {}", F61);
    let h61 = alloc::format!("h - {}", H61);
    let f7 = alloc::format!("f - {}", F7);
    let h7 = alloc::format!("h - {}", H7);
    let f8 = alloc::format!("f - {}", F8);
    let h8 = alloc::format!("h - {}", H8);
    let (f61, h61, f7, h7, f8, h8) = (
        f61.as_str(),
        h61.as_str(),
        f7.as_str(),
        h7.as_str(),
        f8.as_str(),
        h8.as_str(),
    );
    let c61 = [
        ("B = 1", "B - 1"),
        ("f = exp(-mu/x)*x^(-3)", f61),
        ("h = exp(-mu/x)*x^(-1)", h61),
    ];
    let c7 = [
        ("B = 1", "B - 1"),
        ("f = |x-1|^(mu-3/2)*|x+1|^(-mu-3/2)", f7),
        ("h = |x-1|^(mu-1/2)*|x+1|^(-mu-1/2)", h7),
    ];
    let c8 = [
        ("B = 1", "B - 1"),
        ("f = exp(mu*arctan(x))*(x^2+1)^(-3/2)", f8),
        ("h = exp(mu*arctan(x))*(x^2+1)^(-1/2)", h8),
    ];

    let mut second = case(
        "2",
        "v_x = e^t*(h^(-1))_xx*u, v_t = e^t*(-h^(-1)*u_x + (h^(-1))_x*u - int(B))",
        simplest(
            "exp(t)*(2*h_x^2/h^3 - h_xx/h^2)",
            "-exp(t)/h",
            "exp(t)*(-h_x/h^2*u - IB)",
        ),
        &[
            ("A = 1", "A - 1"),
            ("f = -h*(h^(-1))_xx", "f + h*(2*h_x^2/h^3 - h_xx/h^2)"),
        ],
        false,
        ArbitraryElements::parse("-6*x^(-2)", "x^2", "1", "u^2").with_int_b("u^3/3"),
    );
    second.nonzero.push(Condition::new("B_u != 0", "B_u"));

    let mut out = alloc::vec![
        case(
            "1",
            "v_x = f*u, v_t = A*u_x + int(B)",
            simplest("f", "1", "IB"),
            &[("h = 1", "h - 1")],
            true,
            ArbitraryElements::parse("x^(-4/3)", "1", "u^(-2)", "u")
                .with_int_a("-1/u")
                .with_int_b("u^2/2"),
        ),
        second,
        case(
            "3",
            "v_x = e^t*h_x*u, v_t = e^t*(A*u_x + h*u)",
            simplest("exp(t)*h_x", "exp(t)", "exp(t)*h*u"),
            &[("B = 1", "B - 1"), ("f = h_x", "f - h_x")],
            true,
            ArbitraryElements::parse("2*x", "x^2", "u^(-2)", "1").with_int_a("-1/u"),
        ),
        case(
            "4",
            "v_x = e^t*x*f*u, v_t = e^t*(x*A*u_x + x*h*u - int(A))",
            simplest("exp(t)*x*f", "exp(t)*x", "exp(t)*(x*h*u - IA)"),
            &[("B = 1", "B - 1"), ("f = h_x + h/x", "f - h_x - h/x")],
            true,
            ArbitraryElements::parse("3*x", "x^2", "u^(-2)", "1").with_int_a("-1/u"),
        ),
        case(
            "5",
            "v_x = x*f*u, v_t = x*A*u_x - int(A)",
            simplest("x*f", "x", "-IA"),
            &[("B = 0", "B")],
            true,
            ArbitraryElements::parse("x^2", "1", "u^(-2)", "0").with_int_a("-1/u"),
        ),
        case(
            "6.1",
            "v_x = e^(mu*t)*x*f*u, v_t = e^(mu*t)*x*(A*u_x + h*u) - e^(mu*t)*int(A)",
            simplest("exp(mu*t)*x*f", "exp(mu*t)*x", "exp(mu*t)*x*h*u - exp(mu*t)*IA"),
            &c61,
            false,
            b1(F61, H61),
        ),
        case(
            "6.2",
            "v_x = e^(mu*t)*(t*x - 1)*f*u, v_t = e^(mu*t)*(t*x - 1)*(A*u_x + h*u) - t*e^(mu*t)*int(A)",
            simplest(
                "exp(mu*t)*(t*x - 1)*f",
                "exp(mu*t)*(t*x - 1)",
                "exp(mu*t)*(t*x - 1)*h*u - t*exp(mu*t)*IA",
            ),
            &c61,
            false,
            b1(F61, H61),
        ),
        case(
            "7.1",
            "v_x = e^(2*mu*t)*(x*cosh(t) - sinh(t))*f*u, v_t = e^(2*mu*t)*(x*cosh(t) - sinh(t))*(A*u_x + h*u) - e^(2*mu*t)*cosh(t)*int(A)",
            simplest(
                "exp(2*mu*t)*(x*cosh(t) - sinh(t))*f",
                "exp(2*mu*t)*(x*cosh(t) - sinh(t))",
                "exp(2*mu*t)*(x*cosh(t) - sinh(t))*h*u - exp(2*mu*t)*cosh(t)*IA",
            ),
            &c7,
            false,
            b1(F7, H7),
        ),
        case(
            "7.2",
            "v_x = e^(2*mu*t)*(x*sinh(t) - cosh(t))*f*u, v_t = e^(2*mu*t)*(x*sinh(t) - cosh(t))*(A*u_x + h*u) - e^(2*mu*t)*sinh(t)*int(A)",
            simplest(
                "exp(2*mu*t)*(x*sinh(t) - cosh(t))*f",
                "exp(2*mu*t)*(x*sinh(t) - cosh(t))",
                "exp(2*mu*t)*(x*sinh(t) - cosh(t))*h*u - exp(2*mu*t)*sinh(t)*IA",
            ),
            &c7,
            false,
            b1(F7, H7),
        ),
        case(
            "7.3",
            "v_x = e^((2*mu+1)*t)*(x - 1)*f*u, v_t = e^((2*mu+1)*t)*(x - 1)*(A*u_x + h*u) - e^((2*mu+1)*t)*int(A)",
            simplest(
                "exp((2*mu + 1)*t)*(x - 1)*f",
                "exp((2*mu + 1)*t)*(x - 1)",
                "exp((2*mu + 1)*t)*(x - 1)*h*u - exp((2*mu + 1)*t)*IA",
            ),
            &c7,
            false,
            b1(F7, H7),
        ),
        case(
            "8",
            "v_x = e^(mu*t)*(x*cos(t) + sin(t))*f*u, v_t = e^(mu*t)*(x*cos(t) + sin(t))*(A*u_x + h*u) - e^(mu*t)*cos(t)*int(A)",
            simplest(
                "exp(mu*t)*(x*cos(t) + sin(t))*f",
                "exp(mu*t)*(x*cos(t) + sin(t))",
                "exp(mu*t)*(x*cos(t) + sin(t))*h*u - exp(mu*t)*cos(t)*IA",
            ),
            &c8,
            false,
            b1(F8, H8),
        ),
        case(
            "5'",
            "v_x = f*u, v_t = A*u_x, w_x = x*f*u, w_t = x*A*u_x - int(A)",
            two("f", "1", "0", "x*f", "x", "-IA"),
            &[("B = 0", "B")],
            true,
            ArbitraryElements::parse("x^2", "1", "u^(-2)", "0").with_int_a("-1/u"),
        ),
        case(
            "6'",
            "systems 6.1 and 6.2 with potentials v and w",
            two(
                "exp(mu*t)*x*f",
                "exp(mu*t)*x",
                "exp(mu*t)*x*h*u - exp(mu*t)*IA",
                "exp(mu*t)*(t*x - 1)*f",
                "exp(mu*t)*(t*x - 1)",
                "exp(mu*t)*(t*x - 1)*h*u - t*exp(mu*t)*IA",
            ),
            &c61,
            false,
            b1(F61, H61),
        ),
        case(
            "7'",
            "system 7.3 with potential v and its (2*mu - 1, x + 1) analogue with potential w",
            two(
                "exp((2*mu + 1)*t)*(x - 1)*f",
                "exp((2*mu + 1)*t)*(x - 1)",
                "exp((2*mu + 1)*t)*(x - 1)*h*u - exp((2*mu + 1)*t)*IA",
                "exp((2*mu - 1)*t)*(x + 1)*f",
                "exp((2*mu - 1)*t)*(x + 1)",
                "exp((2*mu - 1)*t)*(x + 1)*h*u - exp((2*mu - 1)*t)*IA",
            ),
            &c7,
            false,
            b1(F7, H7),
        ),
        case(
            "8'",
            "system 8 with potential v and its (x*sin(t) - cos(t)) analogue with potential w",
            two(
                "exp(mu*t)*(x*cos(t) + sin(t))*f",
                "exp(mu*t)*(x*cos(t) + sin(t))",
                "exp(mu*t)*(x*cos(t) + sin(t))*h*u - exp(mu*t)*cos(t)*IA",
                "exp(mu*t)*(x*sin(t) - cos(t))*f",
                "exp(mu*t)*(x*sin(t) - cos(t))",
                "exp(mu*t)*(x*sin(t) - cos(t))*h*u - exp(mu*t)*sin(t)*IA",
            ),
            &c8,
            false,
            b1(F8, H8),
        ),
        case(
            "second-level",
            "v_x = f*u, w_x = v, w_t = int(A)",
            SystemTemplate::SecondLevel { alpha: p("f") },
            &[("B = 0", "B")],
            true,
            ArbitraryElements::parse("x^2", "1", "u^(-2)", "0").with_int_a("-1/u"),
        ),
    ];
    for c in out.iter_mut() {
        if ["6.1", "6.2", "6'"].contains(&c.id.as_str()) {
            c.notes.push(String::from(
                "listed with mu in {0, 1}; the conservation law holds for every mu, which is sampled",
            ));
        }
    }
    out
}

fn entry(id: &str, case: &str, elements: ArbitraryElements, ops: &[&str]) -> SymmetryAlgebraEntry {
    SymmetryAlgebraEntry {
        id: id.to_string(),
        case: case.to_string(),
        elements,
        generators: gens(ops),
        functional_parameters: Vec::new(),
        variants: Vec::new(),
        notes: Vec::new(),
    }
}

fn variant(id: &str, note: &str) -> AlgebraVariant {
    AlgebraVariant {
        id: id.to_string(),
        note: note.to_string(),
        elements: None,
        case: None,
        replace: Vec::new(),
        only: None,
    }
}

const A_EXP: &str = "u^(-2)*exp(1/u)";
const A_RAT: &str = "u^mu/(u + 1)^(mu + 2)";
const INT_A_RAT: &str = "(u/(u + 1))^(mu + 1)/(mu + 1)";
const A_ATAN: &str = "exp(mu*arctan(u))/(u^2 + 1)";
const INT_A_ATAN: &str = "exp(mu*arctan(u))/mu";

fn sys1(a: &str, b: &str) -> ArbitraryElements {
    ArbitraryElements::parse("1", "1", a, b)
}

fn system1() -> Vec<SymmetryAlgebraEntry> {
    let scale = "2*t*Dt + x*Dx + v*Dv";
    let mut out = Vec::new();

    out.push(entry(
        "system-1/case-1",
        "1",
        sys1(A_EXP, "0").with_int_a("-exp(1/u)"),
        &["Dt", "Dx", "Dv", scale, "t*Dt - v*Dx + u^2*Du"],
    ));
    out.push(entry(
        "system-1/case-2",
        "1",
        sys1(A_RAT, "0")
            .with_int_a(INT_A_RAT)
            .with_parameter(mu(&[-2.0, -1.0, 0.0])),
        &[
            "Dt",
            "Dx",
            "Dv",
            scale,
            "mu*t*Dt + v*Dx - u*(u + 1)*Du - v*Dv",
        ],
    ));
    out.push(entry(
        "system-1/case-3",
        "1",
        sys1(A_ATAN, "0")
            .with_int_a(INT_A_ATAN)
            .with_parameter(mu(&[0.0])),
        &[
            "Dt",
            "Dx",
            "Dv",
            scale,
            "mu*t*Dt + v*Dx - (u^2 + 1)*Du - x*Dv",
        ],
    ));
    let mut c4 = entry(
        "system-1/case-4",
        "1",
        sys1("u^(-2)", "0").with_int_a("-1/u"),
        &[
            "Dt",
            "Dv",
            "2*t*Dt + u*Du + v*Dv",
            "-v*x*Dx + u*(u*x + v)*Du + 2*t*Dv",
            "4*t^2*Dt - (v^2 + 2*t)*x*Dx + u*(v^2 + 6*t + 2*x*u*v)*Du + 4*t*v*Dv",
            "x*Dx - u*Du",
            "phi*Dx - phi_v*u^2*Du",
        ],
    );
    c4.functional_parameters.push(heat_parameter("phi", "v"));
    out.push(c4);
    out.push(entry(
        "system-1/case-5",
        "1",
        sys1("u^(-2)*exp(mu/u)", "(1/u - 1)*exp(1/u)")
            .with_int_a("-exp(mu/u)/mu")
            .with_int_b("-u*exp(1/u)")
            .with_parameter(mu(&[0.0])),
        &[
            "Dt",
            "Dx",
            "Dv",
            "(mu - 2)*t*Dt + ((mu - 1)*x + v)*Dx - u^2*Du + (mu - 1)*v*Dv",
        ],
    ));

    let mut c6 = entry(
        "system-1/case-6",
        "1",
        sys1(A_EXP, "-u^(-2)")
            .with_int_a("-exp(1/u)")
            .with_int_b("1/u"),
        &[
            "Dt",
            "Dx",
            "Dv",
            "t*Dt + (x + v)*Dx - u^2*Du + (v - 2*t)*Dv",
        ],
    );
    let mut v = variant("b-sign", "B = u^(-2) instead of the printed B = -u^(-2)");
    v.elements = Some(
        sys1(A_EXP, "u^(-2)")
            .with_int_a("-exp(1/u)")
            .with_int_b("-1/u"),
    );
    c6.variants.push(v);
    out.push(c6);

    let case7_params = |e: ArbitraryElements| {
        e.with_parameter(mu(&[-2.0]))
            .with_parameter(nu(&[-1.0, 0.0]))
            .with_condition("(mu, nu) != (-2, -2), (0, 1)")
    };
    let mut c7 = entry(
        "system-1/case-7",
        "1",
        case7_params(sys1(A_RAT, "-nu*u^(nu - 1)/(u + 1)^nu").with_int_a(INT_A_RAT)),
        &[
            "Dt",
            "Dx",
            "Dv",
            "(mu - 2*nu)*t*Dt + ((mu - nu)*x - v)*Dx + u*(u + 1)*Du + (mu - nu + 1)*v*Dv",
        ],
    );
    c7.elements.parameters[0].exclusions.push(-1.0);
    c7.notes.push(String::from(
        "int(B) has no elementary closed form and is evaluated by quadrature",
    ));
    let mut v = variant(
        "derived-b",
        "B = -(u + nu + 1)*u^nu/(u + 1)^(nu + 1), the convection term for which the fourth operator is a symmetry",
    );
    let mut el =
        case7_params(sys1(A_RAT, "-(u + nu + 1)*u^nu/(u + 1)^(nu + 1)").with_int_a(INT_A_RAT))
            .with_int_b("-u^(nu + 1)*(u + 1)^(-nu)");
    el.parameters[0].exclusions.push(-1.0);
    v.elements = Some(el);
    c7.variants.push(v);
    out.push(c7);

    let mut c8 = entry(
        "system-1/case-8",
        "1",
        sys1(A_RAT, "-(u + 1)*ln(u/(u + 1)) - 1/(u + 1)")
            .with_int_a(INT_A_RAT)
            .with_int_b("u/2 - (u^2/2 + u)*ln(u/(u + 1)) - ln(u + 1)/2")
            .with_parameter(mu(&[-2.0, -1.0, 0.0])),
        &[
            "Dt",
            "Dx",
            "Dv",
            "mu*t*Dt + (mu*x + v - t)*Dx + u*(u + 1)*Du + (mu + 1)*v*Dv",
        ],
    );
    let mut v = variant(
        "xi-sign",
        "-v in the Dx coefficient, with B = ln(u/(u + 1)) + 1/(u + 1) as forced by the remaining determining equations",
    );
    v.elements = Some(
        sys1(A_RAT, "ln(u/(u + 1)) + 1/(u + 1)")
            .with_int_a(INT_A_RAT)
            .with_int_b("u*ln(u/(u + 1))")
            .with_parameter(mu(&[-2.0, -1.0, 0.0])),
    );
    v.replace.push(Replacement {
        index: 3,
        generator: gen("mu*t*Dt + (mu*x - v - t)*Dx + u*(u + 1)*Du + (mu + 1)*v*Dv"),
    });
    v.only = Some(alloc::vec![3]);
    c8.variants.push(v);
    out.push(c8);

    let c9_params = |e: ArbitraryElements| e.with_parameter(mu(&[0.0])).with_parameter(nu(&[]));
    let mut c9 = entry(
        "system-1/case-9",
        "1",
        c9_params(sys1(A_ATAN, "-(x + nu)*exp(nu*arctan(u))/sqrt(u^2 + 1)").with_int_a(INT_A_ATAN)),
        &[
            "Dt",
            "Dx",
            "Dv",
            "(mu - 2*nu)*t*Dt + ((mu - nu)*x - v)*Dx + (u^2 + 1)*Du + (x + (mu - nu)*v)*Dv",
        ],
    );
    c9.notes.push(String::from(
        "the printed B depends on x; int(B) is taken in u with x fixed and evaluated by quadrature",
    ));
    let mut v = variant(
        "u-for-x",
        "B = -(u + nu)*exp(nu*arctan(u))/sqrt(u^2 + 1), reading x as u",
    );
    v.elements = Some(
        c9_params(sys1(A_ATAN, "-(u + nu)*exp(nu*arctan(u))/sqrt(u^2 + 1)").with_int_a(INT_A_ATAN))
            .with_int_b("-exp(nu*arctan(u))*sqrt(u^2 + 1)"),
    );
    c9.variants.push(v);
    out.push(c9);

    let mut c10 = entry(
        "system-1/case-10",
        "1",
        sys1("u^(-2)", "-u^(-2)")
            .with_int_a("-1/u")
            .with_int_b("1/u"),
        &[
            "Dt",
            "Dv",
            "2*t*Dt + u*Du + v*Dv",
            "-v*Dx + u^2*Du + 2*t*Dv",
            "4*t^2*Dt - (v^2 + 2*t)*Dx + 2*u*(u*v + 2*t)*Du + 4*t*v*Dv",
            "Dx",
            "exp(-x)*phi*Dx + exp(-x)*(phi - u*phi_v)*u*Du",
        ],
    );
    c10.functional_parameters.push(heat_parameter("phi", "v"));
    let mut v = variant("b-sign", "B = u^(-2) instead of the printed B = -u^(-2)");
    v.elements = Some(
        sys1("u^(-2)", "u^(-2)")
            .with_int_a("-1/u")
            .with_int_b("-1/u"),
    );
    c10.variants.push(v);
    out.push(c10);

    let mut c11 = entry(
        "system-1/case-11",
        "1",
        sys1("1", "2*u").with_int_a("u").with_int_b("u^2"),
        &[
            "Dt",
            "Dx",
            "2*t*Dt + x*Dx - u*Du",
            "2*t*Dx - Du - x*Dv",
            "4*t^2*Dt + 4*t*x*Dx - 2*(x + 2*u*t)*Du - (x^2 + 2*t)*Dv",
            "Dv",
            "exp(-v)*(h_x - h*u)*Du + exp(-v)*h*Dv",
        ],
    );
    c11.functional_parameters.push(heat_parameter("h", "x"));
    out.push(c11);

    let mut eq13 = entry(
        "system-1/eq13",
        "1",
        ArbitraryElements::parse("x^(-4/3)", "1", "u^(-2)", "0").with_int_a("-1/u"),
        &[
            "Dt",
            "Dv",
            "3*x*Dx - u*Du - 2*v*Dv",
            "2*t*Dt + u*Du + v*Dv",
            "3*x*v*Dx - (v + 3*x^(-1/3)*u)*u*Du - v^2*Dv",
        ],
    );
    eq13.notes.push(String::from(
        "the potential hodograph transformation maps this algebra onto <Dt, Dx, 2*t*Dt + x*Dx, 4*t*Dt + 3*v*Dv, x^2*Dx - 3*x*v*Dv>",
    ));
    out.push(eq13);
    out
}

fn system3() -> Vec<SymmetryAlgebraEntry> {
    let el = |a: &str| ArbitraryElements::parse("1", "x", a, "1");
    let common = ["exp(-2*t)*(Dt - x*Dx)", "exp(-t)*Dx", "Dv", "Dt + v*Dv"];
    let with = |last: &'static str| {
        let mut v: Vec<&str> = common.to_vec();
        v.push(last);
        v
    };
    let mut out = Vec::new();
    out.push(entry(
        "system-3/case-1",
        "3",
        el("u^(-2)*exp(-1/u)"),
        &with("(x - 2*exp(-t)*v)*Dx + 2*u^2*Du + v*Dv"),
    ));
    out.push(entry(
        "system-3/case-2",
        "3",
        el(A_RAT).with_parameter(mu(&[-2.0, 0.0])),
        &with("-Dt + (mu*x - 2*exp(-t)*v)*Dx + 2*u*(u + 1)*Du + (mu + 1)*v*Dv"),
    ));
    let mut c3 = entry(
        "system-3/case-3",
        "3",
        el(A_ATAN).with_parameter(mu(&[0.0])),
        &with("(mu*x - 2*exp(-t)*v)*Dx + 2*(u^2 + 1)*Du - (mu*v - 2*exp(t)*x)*Dv"),
    );
    let mut v = variant(
        "theta-sign",
        "Dv coefficient mu*v + 2*exp(t)*x; equals the printed operator minus 2*mu*(Dt + v*Dv) plus 2*mu*Dt",
    );
    v.replace.push(Replacement {
        index: 4,
        generator: gen("(mu*x - 2*exp(-t)*v)*Dx + 2*(u^2 + 1)*Du + (mu*v + 2*exp(t)*x)*Dv"),
    });
    v.only = Some(alloc::vec![4]);
    c3.variants.push(v);
    out.push(c3);
    let mut c4 = entry(
        "system-3/case-4",
        "3",
        el("u^(-2)"),
        &[
            "exp(-2*t)*(Dt - x*Dx)",
            "Dv",
            "x*Dx - u*Du",
            "Dt + v*Dv",
            "-v*x*Dx + (v + exp(t)*x*u)*u*Du + exp(2*t)*Dv",
            "exp(2*t)*Dt - (2*exp(2*t) + v^2)*x*Dx + (3*exp(2*t) + 2*exp(t)*x*u*v + v^2)*u*Du + 2*exp(2*t)*v*Dv",
            "exp(-t)*phi*Dx - phi_v*u^2*Du",
        ],
    );
    c4.functional_parameters.push(FunctionalParameter {
        name: String::from("phi"),
        args: alloc::vec![Symbol::new("t"), Symbol::new("v")],
        constraint: p("exp(-2*t)*phi_t - phi_vv"),
        instantiations: K_VALUES
            .iter()
            .map(|k| p(&alloc::format!("exp(({k})*v + ({k})^2*exp(2*t)/2)", k = k)))
            .collect(),
        aux: Default::default(),
    });
    out.push(c4);
    let mut c5 = entry(
        "system-3/case-5",
        "3",
        ArbitraryElements::parse("-x^(-4/3)/3", "x^(-1/3)", "u^(-2)", "1"),
        &[
            "Dt + v*Dv",
            "Dv",
            "2*t*Dt + 3*x*Dx - u*Du",
            "exp(2*t)*(Dt + 3*x*Dx)",
            "3*x*v*Dx + u*(exp(t)*x^(-1/3)*u - v)*Du - v^2*Dv",
        ],
    );
    let mut v = variant("scaling", "third operator read as 3*x*Dx - u*Du - 2*v*Dv");
    v.replace.push(Replacement {
        index: 2,
        generator: gen("3*x*Dx - u*Du - 2*v*Dv"),
    });
    v.only = Some(alloc::vec![2]);
    c5.variants.push(v);
    out.push(c5);
    out
}

fn system4() -> Vec<SymmetryAlgebraEntry> {
    alloc::vec![
        entry(
            "system-4/case-1",
            "4",
            ArbitraryElements::parse("4/3*x^(-2/3)", "x^(1/3)", "u^(-2)", "1").with_int_a("-1/u"),
            &[
                "Dt + v*Dv",
                "Dv",
                "3*x*Dx - 2*u*Du + 2*v*Dv",
                "exp(-t)*(4*Dt - 3*x*Dx)",
                "3*x*v*Dx - 2*u*(v + 2*exp(t)*x^(4/3)*u)*Du + v^2*Dv",
            ],
        ),
        entry(
            "system-4/case-2",
            "4",
            ArbitraryElements::parse("x^(-2)", "ln(abs(x))/x", "u^(-2)", "1").with_int_a("-1/u"),
            &[
                "Dt + v*Dv",
                "Dv",
                "exp(-t)*x*Dx",
                "exp(-t)*x*v*Dx - u^2*Du + 2*exp(t)*Dv"
            ],
        ),
    ]
}

fn system5() -> Vec<SymmetryAlgebraEntry> {
    let mut c1 = entry(
        "system-5/case-1",
        "5",
        ArbitraryElements::parse("(c1*x^(3/2) + c2*x^(1/2))^(-4/3)", "1", "u^(-2)", "0")
            .with_int_a("-1/u")
            .with_parameter(Parameter::new("c1", 0.3, 1.7, &[]))
            .with_parameter(Parameter::new("c2", 0.3, 1.7, &[])),
        &[
            "Dt",
            "Dv",
            "4*c2*t*Dt - 3*(c1*x + c2)*x*Dx + (4*c2 + 3*c1*x)*u*Du",
            "3*(c1*x + c2)*x*Dx - (2*c2 + 3*c1*x)*u*Du + 2*c2*v*Dv",
            "3*(c1*x + c2)*x*v*Dx - (3*x^(4/3)*(c1*x + c2)^(-1/3)*u + (2*c2 + 3*c1*x)*v)*u*Du + c2*v^2*Dv",
        ],
    );
    c1.notes.push(String::from(
        "the printed list breaks a line between the third and fourth operators; the reading with balanced brackets is stored",
    ));
    let mut c2 = entry(
        "system-5/case-2",
        "5",
        ArbitraryElements::parse("x^(-2)", "1", "u^(-2)", "0").with_int_a("-1/u"),
        &[
            "Dt",
            "Dv",
            "x*Dx",
            "2*t*Dt + u*Du + v*Dv",
            "x*v*Dx - u^2*Du + 2*t*Dv",
            "4*t^2*Dt + (v^2 + 2*t)*x*Dx + (4*t - 2*u*v)*u*Du + 4*t*v*Dv",
            "x^2*phi*Dx - x*u*(phi + phi_v*u)*Du",
        ],
    );
    c2.functional_parameters.push(heat_parameter("phi", "v"));
    alloc::vec![c1, c2]
}

fn second_level() -> Vec<SymmetryAlgebraEntry> {
    let el = |f: &str, a: &str, ia: &str| ArbitraryElements::parse(f, "1", a, "0").with_int_a(ia);
    let base = ["Dt", "Dv + x*Dw", "Dw"];
    let scale = "2*t*Dt + x*Dx + v*Dv + 2*w*Dw";
    let mut out = Vec::new();
    out.push(entry(
        "second-level/case-1",
        "second-level",
        el("x^(-6)", "u^(-2/3)", "3*u^(1/3)"),
        &[
            base[0],
            base[1],
            base[2],
            "2*t*Dt - 3*x*Dx - 15*u*Du - 3*w*Dw",
            "4*t*Dt - 3*x*Dx - 12*u*Du + 3*v*Dv",
            "x^2*Dx + 3*x*u*Du + (w - x*v)*Dv + x*w*Dw",
            "x*w*Dx - 3*(x*v - 2*w)*u*Du - v*(x*v - w)*Dv + w^2*Dw",
        ],
    ));
    out.push(entry(
        "second-level/case-2",
        "second-level",
        el("1", "u^(-2/3)", "3*u^(1/3)"),
        &[
            "Dt",
            "Dx",
            "Dv + x*Dw",
            "Dw",
            scale,
            "2*t*Dt + 3*u*Du + 3*v*Dv + 3*w*Dw",
            "w*Dx - 3*u*v*Du - v^2*Dv",
        ],
    ));
    let x6 = |sign: &str| {
        alloc::format!(
            "4*t^2*Dt + x*(6*t + 3*x^2*v^2 {}4*x*v*w + w^2)*Dx + 2*u*(2*t - 3*x*u*v + 2*u*w - x^2*v^2 + x*v*w)*Du \
             + (2*x*v*w - 2*t - x^2*v^2 - w^2)*Dv + 2*(2*t*w + x^3*v^3 - x^2*v^2*w)*Dw",
            sign
        )
    };
    let minus = x6("- ");
    let plus = x6("+ ");
    let mut c3 = entry(
        "second-level/case-3",
        "second-level",
        el("x^(-2)", "u^(-2)", "-1/u"),
        &[
            "Dt",
            "Dw",
            "x*Dx - v*Dv",
            "2*t*Dt + x*Dx + u*Du + w*Dw",
            "x*(2*x*v - w)*Dx - u*(x*v + 2*u)*Du + v*(w - x*v)*Dv + (x^2*v^2 - 2*t)*Dw",
            &minus,
            "x^2*rho_z*Dx + (rho_z - u*rho_zz)*x*u*Du + rho*Dv + x*(rho + x*v*rho_z)*Dw",
        ],
    );
    let mut rho = heat_parameter("rho", "z");
    rho.aux.insert(Symbol::new("z"), p("w - x*v"));
    c3.functional_parameters.push(rho);
    c3.notes.push(String::from(
        "the sixth operator is printed with '+-4xvw'; the stored generator reads it as -4*x*v*w and the variant as +4*x*v*w",
    ));
    let mut v = variant(
        "plus-sign",
        "sixth operator with +4*x*v*w in the Dx coefficient",
    );
    v.replace.push(Replacement {
        index: 5,
        generator: gen(&plus),
    });
    v.only = Some(alloc::vec![5]);
    c3.variants.push(v);
    let mut v = variant(
        "derived",
        "sixth operator with Dv coefficient -v*(2*t + (x*v - w)^2), seventh with the Du coefficient of opposite sign",
    );
    v.replace.push(Replacement {
        index: 5,
        generator: gen(&minus.replace(
            "(2*x*v*w - 2*t - x^2*v^2 - w^2)*Dv",
            "v*(2*x*v*w - 2*t - x^2*v^2 - w^2)*Dv",
        )),
    });
    v.replace.push(Replacement {
        index: 6,
        generator: gen(
            "x^2*rho_z*Dx + (u*rho_zz - rho_z)*x*u*Du + rho*Dv + x*(rho + x*v*rho_z)*Dw",
        ),
    });
    v.only = Some(alloc::vec![5, 6]);
    c3.variants.push(v);
    out.push(c3);

    let mut c4 = entry(
        "second-level/case-4",
        "second-level",
        el("1", "u^(-2)", "-1/u"),
        &[
            "Dt",
            "Dv + x*Dw",
            scale,
            "x*Dx - u*Du + w*Dw",
            "(w - 2*v*x)*Dx + (2*x*u^2 + u*v)*Du + 2*t*Dv + (2*t*x - x*v^2)*Dw",
            "lambda_v*Dx - lambda_t*u^2*Du + (v*lambda_v - lambda)*Dw",
            "2*t^2*Dt + (v*w - 3/2*x*v^2 - 3*t*x)*Dx + (u^2*(3*x*v - w) + u*v^2/2 + 5*t*u)*Du + 2*t*v*Dv + (v^2*w/2 - t*w - x*v^3)*Dw",
        ],
    );
    c4.functional_parameters.push(heat_parameter("lambda", "v"));
    out.push(c4);

    out.push(entry(
        "second-level/case-5",
        "second-level",
        el("1", "(u^2 + 1)^(-1)", "arctan(u)"),
        &[
            "Dt",
            "Dx",
            "Dv + x*Dw",
            "Dw",
            scale,
            "-v*Dx + (1 + u^2)*Du + x*Dv + (2*t + x^2 - v^2)/2*Dw",
        ],
    ));
    out.push(entry(
        "second-level/case-6",
        "second-level",
        el("1", "(u^2 - 1)^(-1)", "ln((u - 1)/(u + 1))/2").with_domain("u", 1.2, 2.5),
        &[
            "Dt",
            "Dx",
            "Dw",
            "Dv + x*Dw",
            scale,
            "v*Dx + x*Dv - (u^2 - 1)*Du + (-t + x^2/2 + v^2/2)*Dw",
        ],
    ));
    let mut c7 = entry(
        "second-level/case-7",
        "second-level",
        el("1", "(u^2 + 1)^(-1)*exp(mu*arctan(u))", INT_A_ATAN).with_parameter(mu(&[0.0])),
        &[
            "Dt",
            "Dx",
            "Dv + x*Dw",
            "Dw",
            scale,
            "mu*t*Dt - v*Dx + (1 + u^2)*Du + x*Dv + (x^2 - v^2)*Dw",
        ],
    );
    let mut v = variant(
        "derived",
        "last operator with -mu*t*Dt and Dw coefficient (x^2 - v^2)/2, as in case 5",
    );
    v.replace.push(Replacement {
        index: 5,
        generator: gen("-mu*t*Dt - v*Dx + (1 + u^2)*Du + x*Dv + (x^2 - v^2)/2*Dw"),
    });
    v.only = Some(alloc::vec![5]);
    c7.variants.push(v);
    out.push(c7);
    let mut c8 = entry(
        "second-level/case-8",
        "second-level",
        el("1", "u^mu*(u + 1)^(-mu - 2)", INT_A_RAT).with_parameter(mu(&[-2.0, -1.0, 0.0])),
        &[
            "Dt",
            "Dv",
            "Dw",
            "Dx + v*Dw",
            scale,
            "mu*t*Dt + v*Dx - u*(u + 1)*Du - v*Dv + (v^2/2 - 2*w)*Dw",
        ],
    );
    let mut v = variant(
        "system-5p",
        "the same operators checked against the two-potential system 5'",
    );
    v.case = Some(String::from("5'"));
    c8.variants.push(v);
    let mut v = variant(
        "system-5p-zeta",
        "last operator with Dw coefficient v^2/2 - w, checked against system 5'",
    );
    v.case = Some(String::from("5'"));
    v.replace.push(Replacement {
        index: 5,
        generator: gen("mu*t*Dt + v*Dx - u*(u + 1)*Du - v*Dv + (v^2/2 - w)*Dw"),
    });
    v.only = Some(alloc::vec![5]);
    c8.variants.push(v);
    out.push(c8);
    let mut c9 = entry(
        "second-level/case-9",
        "second-level",
        el("1", A_EXP, "-exp(1/u)"),
        &[
            "Dt",
            "Dv",
            "Dw",
            "Dx + v*Dw",
            scale,
            "t*Dt - v*Dx + u^2*Du - v^2/2*Dw",
        ],
    );
    let mut v = variant(
        "system-5p",
        "the same operators checked against the two-potential system 5'",
    );
    v.case = Some(String::from("5'"));
    c9.variants.push(v);
    out.push(c9);
    out
}

fn solution(id: &str, printed: &str, u: &str, domain: Domain) -> ExactSolutionEntry {
    ExactSolutionEntry {
        id: id.to_string(),
        equation: String::from("fujita-storm"),
        printed: printed.to_string(),
        u: Some(p(u)),
        parameters: Vec::new(),
        domain,
        expected: ExpectedVerdict::Claimed,
        notes: Vec::new(),
    }
}

fn solutions() -> Vec<ExactSolutionEntry> {
    let d = Domain::new;
    let iv = VarDomain::new;
    let mut out = Vec::new();
    let mut c = solution("constant", "u = c", "c", d());
    c.parameters.push(Parameter::new("c", 0.3, 1.7, &[]));
    out.push(c);
    out.push(solution("inverse-x", "u = x^(-1)", "x^(-1)", d()));
    out.push(solution(
        "travelling",
        "u = (x - 2t)^(-1/2)",
        "(x - 2*t)^(-1/2)",
        d().with("t", iv(0.1, 0.6)).require_positive(p("x - 2*t")),
    ));
    out.push(solution(
        "exp-plus",
        "u = (x^2 + e^(2t))^(-1/2)",
        "(x^2 + exp(2*t))^(-1/2)",
        d(),
    ));
    out.push(solution(
        "exp-minus",
        "u = (x^2 - e^(2t))^(-1/2)",
        "(x^2 - exp(2*t))^(-1/2)",
        d().with("t", iv(0.05, 0.8))
            .require_positive(p("x^2 - exp(2*t)")),
    ));
    let small = || {
        d().with("t", iv(0.05, 0.6))
            .with("x", iv(0.05, 0.5))
            .require_positive(p("exp(-2*t) - x^2"))
    };
    out.push(solution(
        "bounded-plus",
        "u = (e^(-2t) - x^2)^(-1/2)",
        "(exp(-2*t) - x^2)^(-1/2)",
        small(),
    ));
    out.push(solution(
        "bounded-minus",
        "u = -(e^(-2t) - x^2)^(-1/2)",
        "-(exp(-2*t) - x^2)^(-1/2)",
        small(),
    ));
    out.push(solution(
        "quadratic-plus",
        "u = 1/(4*sqrt(24t^2 + x)*sqrt(-6t + sqrt(24t^2 + x)))",
        "1/(4*sqrt(24*t^2 + x)*sqrt(-6*t + sqrt(24*t^2 + x)))",
        d().with("t", iv(0.05, 0.5))
            .require_positive(p("-6*t + sqrt(24*t^2 + x)")),
    ));
    out.push(solution(
        "quadratic-minus",
        "u = 1/(4*sqrt(24t^2 + x)*sqrt(-6t - sqrt(24t^2 + x)))",
        "1/(4*sqrt(24*t^2 + x)*sqrt(-6*t - sqrt(24*t^2 + x)))",
        d().with("t", iv(-1.2, -0.5))
            .with("x", iv(0.1, 2.0))
            .require_positive(p("-6*t - sqrt(24*t^2 + x)")),
    ));
    out.push(solution(
        "logarithmic",
        "u = t/(x*sqrt(-t*ln(x*sqrt(t))))",
        "t/(x*sqrt(-t*ln(x*sqrt(t))))",
        d().with("x", iv(0.1, 0.8))
            .require_positive(p("1 - x*sqrt(t)")),
    ));
    let root = "sqrt(c1^2*exp(-2*t) + 2*exp(-8*t) + 2*exp(-4*t)*x)";
    for (sign, tag) in [("+", "plus"), ("-", "minus")] {
        let u = alloc::format!(
            "1/({r}*sqrt(4 - exp(8*t)*(-c1*exp(-t) {s} {r})^2))",
            r = root,
            s = sign
        );
        let mut e = solution(
            &alloc::format!("c1-family-1-{}", tag),
            &alloc::format!(
                "u = 1/(sqrt(c1^2 e^(-2t) + 2e^(-8t) + 2e^(-4t)x)*sqrt(4 - e^(8t)(-c1 e^(-t) {} sqrt(...))^2))",
                sign
            ),
            &u,
            d().with("t", iv(-0.5, -0.1))
                .with("x", iv(-1.5, -0.5))
                .require_positive(p(&alloc::format!("4 - exp(8*t)*(-c1*exp(-t) {} {})^2 - 1/10", sign, root))),
        );
        e.parameters.push(Parameter::new("c1", -1.0, 1.0, &[]));
        out.push(e);
        let root2 = "sqrt(c1^2*exp(2*t) + 2*exp(8*t) + 2*exp(4*t)*x)";
        let u = alloc::format!(
            "1/({r2}*sqrt(exp(-8*t)*(-c1*exp(-t) {s} {r})^2 - 4))",
            r2 = root2,
            r = root,
            s = sign
        );
        let mut e = solution(
            &alloc::format!("c1-family-2-{}", tag),
            &alloc::format!(
                "u = 1/(sqrt(c1^2 e^(2t) + 2e^(8t) + 2e^(4t)x)*sqrt(e^(-8t)(-c1 e^(-t) {} sqrt(c1^2 e^(-2t) + 2e^(-8t) + 2e^(-4t)x))^2 - 4))",
                sign
            ),
            &u,
            d().with("t", iv(-0.6, -0.1))
                .with("x", iv(0.5, 1.5))
                .require_positive(p(&alloc::format!("exp(-8*t)*(-c1*exp(-t) {} {})^2 - 41/10", sign, root)))
                .require_positive(p("c1^2*exp(2*t) + 2*exp(8*t) + 2*exp(4*t)*x"))
                .require_positive(p("c1^2*exp(-2*t) + 2*exp(-8*t) + 2*exp(-4*t)*x")),
        );
        e.parameters.push(Parameter::new("c1", -1.0, 1.0, &[]));
        out.push(e);
    }
    out.push(solution(
        "dipole",
        "u = x^(-1)*(2t)^(1/2)*(ln(1/(4*pi*t*x^2)))^(-1/2)",
        "x^(-1)*(2*t)^(1/2)*ln(1/(4*pi*t*x^2))^(-1/2)",
        d().with("t", iv(0.02, 0.3))
            .with("x", iv(0.1, 0.8))
            .require_positive(p("4/5 - 4*pi*t*x^2")),
    ));
    out.push(ExactSolutionEntry {
        id: String::from("source"),
        equation: String::from("fujita-storm"),
        printed: String::from("u = (4*pi*t)^(1/2)*e^(v^2) where x = pi^(-1/2)*int_0^v e^(-y^2) dy"),
        u: None,
        parameters: Vec::new(),
        domain: Domain::new(),
        expected: ExpectedVerdict::OutOfScope,
        notes: strings(&["given implicitly through a parametric representation in v"]),
    });
    out
}

/// The built-in catalog.
pub fn builtin() -> Catalog {
    let mut algebras = system1();
    algebras.extend(system3());
    algebras.extend(system4());
    algebras.extend(system5());
    algebras.extend(second_level());
    Catalog {
        version: CATALOG_VERSION,
        cases: cases(),
        algebras,
        solutions: solutions(),
        notes: strings(&[
            "potential systems 2, 6.1-7.3 and 6'-8' do not yield potential symmetries",
        ]),
    }
}

use cga_core::emit::{entries, Target};
use cga_core::expr_io::{expr_text, parse, parse_expr, render, Format, MAX_EXPONENT};
use cga_core::invariants::{build_tower_32, phi_km_jet};
use cga_core::{Error, Expr, HalfInt, Jet};

fn ell(s: &str) -> HalfInt {
    s.parse().unwrap()
}

#[test]
fn phi_1_from_text() {
    let e = parse_expr("u_11/u - (u_1/u)^2", ell("3/2")).unwrap();
    assert!(e.equals(&Expr::from(phi_km_jet(Jet::with_k(2), 1, 1))));
    let (phis, _) = build_tower_32();
    assert!(e.equals(&phis.phi[0]));
}

#[test]
fn index_bounds_follow_ell() {
    let err = parse("u_4", ell("5/2")).unwrap_err();
    assert!(matches!(err, Error::Parse { line: 1, column: 1, .. }), "{err}");
    assert!(parse("u_4", ell("7/2")).is_ok());
    assert!(parse("x4", ell("5/2")).is_err());
}

#[test]
fn zero_forms() {
    let l = ell("3/2");
    assert!(parse_expr("0", l).unwrap().is_zero());
    assert!(parse_expr("(u - u)", l).unwrap().is_zero());
    assert_eq!(render(&Expr::zero(), Format::Text), "0");
    assert_eq!(render(&Expr::zero(), Format::Latex), "0");
}

#[test]
fn diagnostics_carry_positions() {
    let l = ell("3/2");
    let cases = [("u +", 1), ("u_1 *\n  (u", 2), ("3/0", 1), ("u^x1", 1), ("u^2^3", 1)];
    for (src, line) in cases {
        match parse_expr(src, l) {
            Err(Error::Parse { line: got, .. }) => assert_eq!(got, line, "{src:?}"),
            Err(Error::DivisionByZero) if src == "3/0" => {}
            other => panic!("{src:?}: expected a diagnostic, got {other:?}"),
        }
    }
}

#[test]
fn exponents_are_bounded() {
    let l = ell("3/2");
    assert!(parse(&format!("u^{MAX_EXPONENT}"), l).is_ok());
    let err = parse(&format!("(u+1)^{}", MAX_EXPONENT + 1), l).unwrap_err();
    assert!(err.to_string().contains("exceeds"), "{err}");
}

#[test]
fn every_built_in_invariant_round_trips() {
    for e in ["3/2", "5/2", "7/2"] {
        let l = ell(e);
        for target in [Target::Phi, Target::W, Target::Wkm, Target::Final] {
            let Ok(list) = entries(l, target) else {
                assert_eq!((e, target), ("3/2", Target::Wkm));
                continue;
            };
            for entry in list {
                let v = entry.value().unwrap();
                let back = parse_expr(&expr_text(v), l).unwrap();
                assert!(back.equals(v), "{} at {e}", entry.name);
            }
        }
    }
}

#[test]
fn latex_of_phi_4() {
    let (phis, _) = build_tower_32();
    assert_eq!(
        render(&phis.phi[3], Format::Latex),
        "\\frac{U_{0}}{U} + \\frac{x_{2} U_{1}}{U} - \\frac{U_{22}}{2 U}"
    );
}

#[test]
fn json_is_num_over_den() {
    let e = parse_expr("u_1/(u + u_0)", ell("3/2")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&render(&e, Format::Json)).unwrap();
    assert!(v["num"].is_array());
    assert_eq!(v["den"].as_array().unwrap().len(), 2);
}

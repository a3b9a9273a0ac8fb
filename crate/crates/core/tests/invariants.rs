use std::collections::BTreeSet;

use cga_core::arith::{rat, rat_int, HalfInt, Rat};
use cga_core::cga::{build_generators, GenName};
use cga_core::expr_io::{expr_text, parse_expr};
use cga_core::invariants::{
    build_tilde_c, build_tower_32, build_tower_general, expand_wkm_in_phi, printed_example_expansions,
    printed_tilde_c_32, verify_full_annihilation, verify_invariants, wkm_jet_recursive, PhiPoly, PhiVar,
};
use cga_core::jet::weight_eigenvalue;
use cga_core::report::Status;
use cga_core::{Error, Expr, JetCoord, Monomial};

fn ell(s: &str) -> HalfInt {
    s.parse().unwrap()
}

fn phi_monomial(factors: &[((u8, u8), i32)]) -> Monomial<PhiVar> {
    Monomial::from_pairs(factors.iter().map(|&((k, m), e)| (PhiVar::new(k, m), e)))
}

#[test]
fn three_halves_psi_annihilated_by_every_generator() {
    let r = verify_full_annihilation(ell("3/2"), false).unwrap();
    assert!(r.passed(), "{r}");
    assert_eq!(r.find("annihilate/summary").unwrap().detail, "40 of 40 exact zeros");
}

#[test]
fn five_and_seven_halves_finals_annihilated() {
    for (e, n) in [("5/2", 50), ("7/2", 108)] {
        let r = verify_full_annihilation(ell(e), true).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.find("annihilate/summary").unwrap().detail, format!("{n} of {n} exact zeros"));
    }
}

#[test]
fn psi_forms_and_normalizations() {
    let (_, psis) = build_tower_32();
    let forms = psis.psi_forms().unwrap();
    let corrected = psis.psi_forms_corrected().unwrap();
    let factors = [rat_int(1), rat_int(8), rat(1, 8), rat_int(2), rat_int(1)];
    for i in 0..5 {
        assert_eq!(psis.psi[i].proportionality_factor(&corrected[i]), Some(factors[i].clone()), "psi_{}", i + 1);
    }
    assert_eq!(psis.psi[3].proportionality_factor(&forms[3]), None);
}

#[test]
fn closed_forms_in_terms_of_w() {
    let (_, psis) = build_tower_32();
    let u = Expr::from(cga_core::Jet::with_k(2).u());
    let upow = |n: i32| u.pow(n).unwrap();
    assert!(psis.big_phi.equals(&upow(2).mul_ref(&psis.w[0]).scale(&rat_int(2))));
    assert!(psis.big_psi4_corrected.equals(&upow(5).mul_ref(&psis.w[4]).scale(&rat_int(4))));
    assert!(psis.big_psi[4].equals(&upow(4).mul_ref(&psis.w[5]).scale(&rat_int(4))));
}

#[test]
fn tilde_c_table_is_three_times_the_printed_one() {
    let ct = build_tilde_c(ell("3/2")).unwrap();
    assert_eq!(ct.coeffs(), printed_tilde_c_32().coeffs());
    let (phis, _) = build_tower_32();
    let phi = |i: usize| phis.phi[i - 1].clone();
    let c = |r: Rat| Expr::constant(r);
    let printed = [
        phi(3).scale(&rat_int(2)),
        c(rat(4, 3)),
        phi(2),
        c(rat(-2, 3)),
        phi(6),
        Expr::zero(),
        phi(2).scale(&rat(1, 3)).add_ref(&phi(4).scale(&rat(2, 3))),
    ];
    for (i, want) in printed.iter().enumerate() {
        let got = ct.apply(&phis.phi[i]);
        assert!(got.equals(&want.scale(&rat_int(3))), "C~ phi_{}: {}", i + 1, expr_text(&got));
    }
}

#[test]
fn dilation_weights_at_three_halves() {
    let gens = build_generators(ell("3/2"));
    let d = gens.prolonged(GenName::D).unwrap();
    let (_, psis) = build_tower_32();
    let got: Vec<Rat> = psis.w.iter().map(|w| weight_eigenvalue(w, d).unwrap()).collect();
    let want: Vec<Rat> = [2, 4, 3, 6, 5, 4].iter().map(|&n| rat_int(-n)).collect();
    assert_eq!(got, want);
    for p in &psis.psi {
        assert_eq!(weight_eigenvalue(p, d), Some(rat_int(0)));
    }
}

#[test]
fn dilation_weights_of_the_general_tower() {
    for e in ["5/2", "7/2"] {
        let l = ell(e);
        let gens = build_generators(l);
        let d = gens.prolonged(GenName::D).unwrap();
        let t = build_tower_general(l).unwrap();
        assert_eq!(weight_eigenvalue(&t.w, d), Some(rat_int(-2)));
        for (label, w) in &t.w_km {
            let n = label.weight(l) as i64;
            assert_eq!(weight_eigenvalue(w, d), Some(rat_int(-2 * n)), "{label}");
            assert_eq!(weight_eigenvalue(&t.finals[label], d), Some(rat_int(0)));
        }
    }
}

#[test]
fn example_expansions() {
    let t = build_tower_general(ell("5/2")).unwrap();
    let printed: std::collections::BTreeMap<_, _> = printed_example_expansions().into_iter().collect();
    for (k, m) in [(2, 3), (2, 2), (1, 3), (1, 2)] {
        let got: PhiPoly = expand_wkm_in_phi(&t, k, m)
            .unwrap()
            .into_iter()
            .map(|(mo, c)| PhiPoly::term(mo, c))
            .sum();
        assert_eq!(got, printed[&(k, m)], "w_{k}{m}");
    }
    // w_11 agrees with the printed line except for the signs of two terms.
    let got: PhiPoly = expand_wkm_in_phi(&t, 1, 1)
        .unwrap()
        .into_iter()
        .map(|(mo, c)| PhiPoly::term(mo, c))
        .sum();
    let diff = got.sub_ref(&printed[&(1, 1)]);
    let expected_diff = PhiPoly::from_terms([
        (phi_monomial(&[((2, 2), 1), ((3, 3), 2)]), rat(50, 1296)),
        (phi_monomial(&[((3, 3), 5)]), rat(10, 104976)),
    ]);
    assert_eq!(diff, expected_diff);
    assert_eq!(got.coefficient(&phi_monomial(&[((2, 2), 1), ((3, 3), 2)])), rat(25, 1296));
    assert_eq!(got.coefficient(&phi_monomial(&[((3, 3), 5)])), rat(5, 104976));
}

#[test]
fn the_w_of_five_halves() {
    let l = ell("5/2");
    let t = build_tower_general(l).unwrap();
    let parsed = parse_expr("u_0/u + x2*u_1/u + 2*x3*u_2/u - u_3^2/(8*u^2)", l).unwrap();
    assert!(t.w.equals(&parsed));
    let mono = Monomial::from_pairs([(JetCoord::U1(3), 2), (JetCoord::U, -2)]);
    assert_eq!(t.w.as_poly().unwrap().coefficient(&mono), rat(-1, 8));
}

#[test]
fn phi_space_and_jet_recursions_agree() {
    for e in ["5/2", "7/2"] {
        let l = ell(e);
        let t = build_tower_general(l).unwrap();
        let direct = wkm_jet_recursive(l).unwrap();
        for (label, p) in direct {
            assert!(t.w_km[&label].equals(&Expr::from(p)), "{label} at {e}");
        }
    }
}

#[test]
fn final_counts_and_no_second_time_derivative() {
    for (e, n) in [("5/2", 5), ("7/2", 9), ("9/2", 14)] {
        let l = ell(e);
        let t = build_tower_general(l).unwrap();
        assert_eq!(t.finals.len(), n);
        assert_eq!(cga_core::invariants::TowerGeneral::expected_final_count(l), n);
        for f in t.finals.values() {
            assert!(!f.contains(JetCoord::u2(0, 0)));
        }
    }
}

#[test]
fn three_halves_needs_its_own_tower() {
    assert!(matches!(build_tower_general(ell("3/2")), Err(Error::Unsupported(_))));
}

#[test]
fn reports_have_only_curated_warnings() {
    let cases: [(&str, &[&str]); 2] = [
        ("3/2", &["central-sign", "ctilde-table", "w4-coefficient", "psi4-form"]),
        ("5/2", &["central-sign", "alpha-beta-per-n", "w-third", "example-w11", "example-p5"]),
    ];
    for (e, warns) in cases {
        let r = verify_invariants(ell(e), true).unwrap();
        assert_eq!(r.count(Status::Fail), 0, "{r}");
        let got: BTreeSet<&str> = r
            .checks
            .iter()
            .filter(|c| c.status == Status::Warn)
            .map(|c| c.discrepancy.as_deref().expect("every WARN names its discrepancy"))
            .collect();
        let want: BTreeSet<&str> = warns.iter().copied().collect();
        assert_eq!(got, want, "ell = {e}");
    }
}

#[test]
fn w_third_warning_carries_the_computed_value() {
    let r = verify_invariants(ell("7/2"), true).unwrap();
    let c = r.find("w-third").unwrap();
    assert_eq!(c.status, Status::Warn);
    assert!(c.detail.contains("gamma"), "{}", c.detail);
}

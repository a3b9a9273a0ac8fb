use cga_core::arith::{b_ell, lambda_k, rat, HalfInt, Rat};
use cga_core::treecoef::{
    all_labels, coeff_c_paths, coeff_c_recursive, coeff_gamma_paths, coeff_gamma_recursive, corollary_closed_form,
    CoeffTable, NodeLabel,
};

fn ells() -> Vec<HalfInt> {
    [5, 7, 9].iter().map(|&t| HalfInt::from_twice(t).unwrap()).collect()
}

#[test]
fn recursion_matches_path_enumeration_everywhere() {
    for ell in ells() {
        let kk = ell.k();
        let mut checked = 0;
        for l in all_labels(ell) {
            for a in 0..kk {
                for b in 0..kk {
                    if a + b == 0 {
                        continue;
                    }
                    let r = coeff_c_recursive(l.k, l.m, a, b, ell).unwrap();
                    let p = coeff_c_paths(l.k, l.m, a, b, ell).unwrap();
                    assert_eq!(r, p, "c_{a}{b}({},{}) at ell = {ell}", l.k, l.m);
                    checked += 1;
                }
            }
            assert_eq!(
                coeff_gamma_recursive(l.k, l.m, ell).unwrap(),
                coeff_gamma_paths(l.k, l.m, ell).unwrap()
            );
        }
        assert!(checked > 0);
    }
}

#[test]
fn table_agrees_with_recursion() {
    for ell in ells() {
        let t = CoeffTable::build(ell);
        for ((k, m, a, b), v) in t.c_entries() {
            assert_eq!(*v, coeff_c_recursive(*k, *m, *a, *b, ell).unwrap());
        }
        for ((k, m), v) in t.gamma_entries() {
            assert_eq!(*v, coeff_gamma_recursive(*k, *m, ell).unwrap());
        }
    }
}

#[test]
fn c11_at_seven_halves() {
    let ell: HalfInt = "7/2".parse().unwrap();
    let b = b_ell(ell);
    let expected = rat(2, 1) * lambda_k(1, ell).unwrap() * lambda_k(3, ell).unwrap() / (&b * &b);
    assert_eq!(coeff_c_recursive(1, 3, 1, 1, ell).unwrap(), expected);
    assert_eq!(coeff_c_paths(1, 3, 1, 1, ell).unwrap(), expected);
}

/// The recursion divides `c_ab` by `(a+b)!`; the closed form is stated after that division.
fn fact(n: u32) -> Rat {
    (1..=n).map(|i| Rat::from_integer(i.into())).product()
}

#[test]
fn chain_closed_form_matches_recursion() {
    for ell in ells() {
        let kk = ell.k();
        for k in 1..kk {
            let form = corollary_closed_form(k, ell).unwrap();
            for (n, v) in &form.chain {
                let c = coeff_c_recursive(k, kk, *n, 0, ell).unwrap() / fact(*n);
                assert_eq!(c, *v, "k = {k}, n = {n}, ell = {ell}");
            }
            assert_eq!(form.trailing_power, NodeLabel::new(k, kk, ell).unwrap().weight(ell));
            let g = coeff_gamma_recursive(k, kk, ell).unwrap() / fact(form.trailing_power);
            assert_eq!(g, form.trailing);
        }
    }
}

#[test]
fn diagonal_trailing_coefficient() {
    // gamma(K-1, K-1) = 2 lambda_{K-1}^2 / b^2.
    for ell in ells() {
        let k = ell.k() - 1;
        let lam = lambda_k(k as i64, ell).unwrap();
        let b = b_ell(ell);
        assert_eq!(coeff_gamma_recursive(k, k, ell).unwrap(), rat(2, 1) * &lam * &lam / (&b * &b));
    }
}

#[test]
fn label_counts() {
    for ell in ells() {
        let kk = ell.k() as usize;
        assert_eq!(all_labels(ell).len(), (kk - 1) * (kk + 2) / 2);
    }
    assert!(NodeLabel::new(3, 3, "5/2".parse().unwrap()).is_err());
}

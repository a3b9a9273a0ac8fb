use cga_core::arith::{rat, rat_int, structure_constant_i};
use cga_core::cga::{build_generators, central_sign_check, expected_bracket, verify_commutation_table, GenName};
use cga_core::report::Status;
use cga_core::HalfInt;

fn ells() -> Vec<HalfInt> {
    [3, 5, 7, 9].iter().map(|&t| HalfInt::from_twice(t).unwrap()).collect()
}

#[test]
fn table_closes_with_one_central_sign() {
    for ell in ells() {
        let r = verify_commutation_table(ell, true);
        assert!(r.closure, "ell = {ell}: a bracket left the span");
        assert!(r.all_match, "ell = {ell}: {r}");
        assert!(r.central_sign_consistent);
        assert_eq!(r.central_sign, -1, "ell = {ell}");
        let n = r.generator_count;
        assert_eq!(n, ell.twice() as usize + 5);
        assert_eq!(r.entries.len(), n * (n - 1) / 2);
    }
}

#[test]
fn central_magnitudes_are_the_structure_constants() {
    for ell in ells() {
        let gens = build_generators(ell);
        let top = ell.twice() + 2;
        for m in 1..top {
            let n = top - m;
            let br = gens.get(GenName::P(m)).unwrap().bracket(gens.get(GenName::P(n)).unwrap());
            let combo = gens.decompose(&br).unwrap();
            if m == n {
                assert!(combo.is_empty());
                continue;
            }
            let i = structure_constant_i(m as i64 - 1, ell).unwrap();
            assert_eq!(combo, vec![(i, GenName::M)], "[P{m}, P{n}] at ell = {ell}");
        }
    }
}

#[test]
fn off_diagonal_p_brackets_vanish() {
    let ell: HalfInt = "5/2".parse().unwrap();
    let gens = build_generators(ell);
    for m in 1..=6u32 {
        for n in 1..=6u32 {
            if m + n == 7 {
                continue;
            }
            let br = gens.get(GenName::P(m)).unwrap().bracket(gens.get(GenName::P(n)).unwrap());
            assert!(br.is_zero(), "[P{m}, P{n}]");
        }
    }
}

#[test]
fn central_sign_is_reported_as_warning() {
    for ell in ells() {
        let c = central_sign_check(&build_generators(ell));
        assert_eq!(c.status, Status::Warn);
        assert_eq!(c.discrepancy.as_deref(), Some("central-sign"));
        assert!(c.detail.contains("recorded central sign: -1"));
    }
}

#[test]
fn table_entries() {
    let ell: HalfInt = "3/2".parse().unwrap();
    use GenName::*;
    assert_eq!(expected_bracket(D, H, ell, 1).unwrap(), vec![(rat_int(-2), H)]);
    assert_eq!(expected_bracket(H, D, ell, 1).unwrap(), vec![(rat_int(2), H)]);
    assert_eq!(expected_bracket(C, P(1), ell, 1).unwrap(), vec![(rat_int(-3), P(2))]);
    assert_eq!(expected_bracket(D, P(4), ell, 1).unwrap(), vec![(rat_int(3), P(4))]);
    // I_0 at l = 3/2 is (-1)^2 * 3! * 0! = 6.
    assert_eq!(expected_bracket(P(1), P(4), ell, 1).unwrap(), vec![(rat(-6, 1), M)]);
    assert!(expected_bracket(P(5), H, ell, 1).is_err());
}

#[test]
fn named_generator_lookup() {
    let gens = build_generators("7/2".parse().unwrap());
    assert_eq!(gens.len(), 12);
    assert!(gens.get(GenName::P(8)).is_ok());
    assert!(gens.get(GenName::P(9)).is_err());
    for p in gens.prolonged_all() {
        assert!(p.is_prolongation());
    }
}

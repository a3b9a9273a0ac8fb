//! Randomized identities: Jacobi, prolongation linearity and homomorphism,
//! the derivation law, ring axioms and parser round trips.

use cga_core::arith::{rat, HalfInt, Rat};
use cga_core::cga::build_generators;
use cga_core::expr_io::{expr_text, lower, parse, parse_expr, poly_text};
use cga_core::prolong::prolong2;
use cga_core::{Error, Expr, Field, JetCoord, Monomial, Poly};
use proptest::prelude::*;

const CASES: u32 = 1000;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: CASES,
        ..ProptestConfig::default()
    }
}

fn small_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn nonzero_rat() -> impl Strategy<Value = Rat> {
    small_rat().prop_filter("nonzero", |r| *r != rat(0, 1))
}

/// Sparse polynomial over `coords` with exponents in `lo..=hi`.
fn poly_over(coords: Vec<JetCoord>, lo: i32, hi: i32, terms: usize) -> impl Strategy<Value = Poly> {
    let n = coords.len();
    let monomial = prop::collection::vec((0..n, lo..=hi), 0..3);
    prop::collection::vec((monomial, small_rat()), 0..=terms).prop_map(move |ts| {
        Poly::from_terms(ts.into_iter().map(|(fs, c)| {
            let pairs = fs.into_iter().map(|(i, e)| (coords[i], e));
            (Monomial::from_pairs(pairs), c)
        }))
    })
}

fn base_coords(k: u8) -> Vec<JetCoord> {
    (0..=k).map(JetCoord::X).chain([JetCoord::U]).collect()
}

fn point_field(k: u8) -> impl Strategy<Value = Field> {
    let p = move || poly_over(base_coords(k), 0, 2, 3);
    (prop::collection::vec(p(), k as usize + 1), p()).prop_map(move |(xi, eta)| Field::new(k, xi, eta))
}

/// Laurent polynomial on the full second-order jet space; only `U` may carry negative powers.
fn jet_poly(k: u8, terms: usize) -> impl Strategy<Value = Poly> {
    let coords = JetCoord::all(k);
    (poly_over(coords, 0, 2, terms), -2i32..=0).prop_map(|(p, e)| p.mul_monomial(&Monomial::var(JetCoord::U, e), &rat(1, 1)))
}

fn jet_expr(k: u8) -> impl Strategy<Value = Expr> {
    (jet_poly(k, 3), jet_poly(k, 2), any::<bool>()).prop_map(|(n, d, quotient)| {
        let e = Expr::from(n);
        if quotient && !d.is_zero() {
            e.div_ref(&Expr::from(d)).expect("nonzero denominator")
        } else {
            e
        }
    })
}

fn ell_strategy() -> impl Strategy<Value = HalfInt> {
    prop::sample::select(vec![3u32, 5, 7, 9]).prop_map(|t| HalfInt::from_twice(t).unwrap())
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn jacobi_on_generator_combinations(
        ell in ell_strategy(),
        picks in prop::collection::vec(prop::collection::vec((0usize..14, nonzero_rat()), 1..3), 3),
    ) {
        let gens = build_generators(ell);
        let n = gens.len();
        let combo = |terms: &[(usize, Rat)]| {
            terms.iter().fold(Field::zero(gens.jet().k()), |acc, (i, c)| {
                acc.add_ref(&gens.fields()[i % n].scale(c))
            })
        };
        let (x, y, z) = (combo(&picks[0]), combo(&picks[1]), combo(&picks[2]));
        let j = x.bracket(&y.bracket(&z))
            .add_ref(&y.bracket(&z.bracket(&x)))
            .add_ref(&z.bracket(&x.bracket(&y)));
        prop_assert!(j.is_zero());
    }

    #[test]
    fn jacobi_on_random_point_fields(x in point_field(2), y in point_field(2), z in point_field(2)) {
        let j = x.bracket(&y.bracket(&z))
            .add_ref(&y.bracket(&z.bracket(&x)))
            .add_ref(&z.bracket(&x.bracket(&y)));
        prop_assert!(j.is_zero());
    }

    #[test]
    fn prolongation_is_linear(x in point_field(2), y in point_field(2), a in small_rat(), b in small_rat()) {
        let lhs = prolong2(&x.scale(&a).add_ref(&y.scale(&b)));
        let rhs = prolong2(&x).scale(&a).add_ref(&prolong2(&y).scale(&b));
        prop_assert!(lhs.sub_ref(&rhs).is_zero());
    }

    #[test]
    fn prolongation_preserves_brackets(x in point_field(2), y in point_field(2), f in jet_poly(2, 3)) {
        let (px, py) = (prolong2(&x), prolong2(&y));
        let commutator = px.apply_poly(&py.apply_poly(&f)) - py.apply_poly(&px.apply_poly(&f));
        prop_assert_eq!(prolong2(&x.bracket(&y)).apply_poly(&f), commutator);
    }

    #[test]
    fn apply_is_a_derivation(x in point_field(2), f in jet_expr(2), g in jet_expr(2)) {
        let px = prolong2(&x);
        let lhs = px.apply(&f.mul_ref(&g));
        let rhs = px.apply(&f).mul_ref(&g).add_ref(&f.mul_ref(&px.apply(&g)));
        prop_assert!(lhs.equals(&rhs));
    }

    #[test]
    fn generators_act_as_derivations(ell in ell_strategy(), i in 0usize..14, f in jet_expr(2), g in jet_expr(2)) {
        // Expressions on the K = 2 coordinates are valid on every larger jet space.
        let gens = build_generators(ell);
        let px = &gens.prolonged_all()[i % gens.len()];
        let lhs = px.apply(&f.add_ref(&g).mul_ref(&g));
        let rhs = px.apply(&f).mul_ref(&g)
            .add_ref(&f.mul_ref(&px.apply(&g)))
            .add_ref(&px.apply(&g).mul_ref(&g).scale(&rat(2, 1)));
        prop_assert!(lhs.equals(&rhs));
    }

    #[test]
    fn ring_axioms(a in jet_poly(2, 3), b in jet_poly(2, 3), c in jet_poly(2, 3)) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((&a * &b) * c.clone(), &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), (&a * &b) + (&a * &c));
        prop_assert_eq!((&a + &b) + c.clone(), &a + &(&b + &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Poly::one(), a.clone());
    }

    #[test]
    fn quotients_cancel(f in jet_expr(2), g in jet_poly(2, 3)) {
        prop_assume!(!g.is_zero());
        let g = Expr::from(g);
        prop_assert!(f.div_ref(&g).unwrap().mul_ref(&g).equals(&f));
    }

    #[test]
    fn text_round_trip_of_polynomials(p in jet_poly(3, 5)) {
        let ell = HalfInt::from_twice(5).unwrap();
        let back = parse_expr(&poly_text(&p), ell).unwrap();
        prop_assert_eq!(back.as_poly(), Some(&p));
    }

    #[test]
    fn text_round_trip_of_quotients(e in jet_expr(3)) {
        let ell = HalfInt::from_twice(5).unwrap();
        let back = parse_expr(&expr_text(&e), ell).unwrap();
        prop_assert!(back.equals(&e));
    }

    #[test]
    fn generated_sources_round_trip(src in source(3)) {
        let ell = HalfInt::from_twice(5).unwrap();
        if let Ok(first) = parse_expr(&src, ell) {
            let again = parse_expr(&expr_text(&first), ell).unwrap();
            prop_assert!(again.equals(&first));
        }
    }

    #[test]
    fn parser_is_total_on_token_soup(src in token_soup()) {
        let ell = HalfInt::from_twice(5).unwrap();
        assert_parse_total(&src, ell)?;
    }

    #[test]
    fn parser_is_total_on_arbitrary_text(src in any::<String>()) {
        let ell = HalfInt::from_twice(3).unwrap();
        assert_parse_total(&src, ell)?;
    }
}

fn assert_parse_total(src: &str, ell: HalfInt) -> Result<(), TestCaseError> {
    match parse(src, ell) {
        Ok(ast) => {
            // Lowering may only fail on a division by zero.
            if let Err(e) = lower(&ast) {
                prop_assert!(matches!(e, Error::DivisionByZero), "{e}");
            }
        }
        Err(Error::Parse { line, column, .. }) => {
            prop_assert!(line >= 1 && column >= 1);
        }
        Err(e) => prop_assert!(false, "non-positioned error {e}"),
    }
    Ok(())
}

/// Expressions drawn from the grammar, with small integer exponents.
fn source(k: u8) -> impl Strategy<Value = String> {
    let mut leaves: Vec<String> = vec!["t".into(), "u".into()];
    for i in 1..=k {
        leaves.push(format!("x{i}"));
    }
    for i in 0..=k {
        leaves.push(format!("u_{i}"));
        for j in 0..=k {
            leaves.push(format!("u_{i}{j}"));
        }
    }
    let leaf = prop_oneof![
        prop::sample::select(leaves),
        (0u32..20).prop_map(|n| n.to_string()),
        (1u32..9, 1u32..9).prop_map(|(a, b)| format!("{a}/{b}")),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), prop::sample::select(vec!["+", "-", "*", "/"]), inner.clone())
                .prop_map(|(a, op, b)| format!("({a}){op}({b})")),
            inner.clone().prop_map(|a| format!("-{a}")),
            (inner, -3i32..=3).prop_map(|(a, e)| format!("({a})^{e}")),
        ]
    })
}

fn token_soup() -> impl Strategy<Value = String> {
    let toks = vec![
        "t", "u", "x1", "x2", "x3", "x4", "u_", "u_1", "u_12", "u_{1,3}", "u_10", "0", "1", "7", "3/4", "+", "-", "*",
        "/", "^", "^-", "(", ")", " ", "\n", "{", "}", ",", "_", "x", "99999999999", "1e3", ".", "é",
    ];
    prop::collection::vec(prop::sample::select(toks), 0..16).prop_map(|v| v.concat())
}

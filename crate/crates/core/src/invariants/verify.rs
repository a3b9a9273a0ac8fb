use num_traits::Zero;

use crate::arith::{b_ell, lambda_k, rat, rat_int, rat_text, HalfInt, Rat};
use crate::cga::{build_generators, central_sign_check, GenName, GeneratorSet};
use crate::error::Result;
use crate::expr_io::{expr_text, poly_text};
use crate::jet::{weight_eigenvalue, Jet, JetCoord, Monomial};
use crate::prolong::ProlongedField;
use crate::report::{Check, Report, Status};
use crate::treecoef::{self, all_labels, corollary_closed_form, fact_rat, CoeffTable, NodeLabel};
use crate::{Expr, Field, Poly, Prolonged};

use super::{
    build_tower_32, build_tower_general, expand_wkm_in_phi, named_ops, phi_km_jet, printed_tilde_c_32,
    wkm_jet_recursive, PhiPoly, PhiVar, TowerGeneral,
};

const BRIEF_LIMIT: usize = 400;

fn brief(e: &Expr) -> String {
    let s = expr_text(e);
    if s.len() <= BRIEF_LIMIT {
        s
    } else {
        let cut = s.char_indices().take_while(|(i, _)| *i < BRIEF_LIMIT).last().map_or(0, |(i, _)| i);
        format!("{} ... ({} numerator terms)", &s[..cut], e.num().len())
    }
}

/// `C̃ = −(b/2) x_K² M̂ + t D̂ + 2ℓ x_1 P̃^(2) − Ĉ − t² Ĥ`, built from an existing generator set.
pub fn tilde_c_from(gens: &GeneratorSet) -> Result<Prolonged> {
    let ell = gens.ell();
    let jet = gens.jet();
    let k = jet.k();
    let half_b = b_ell(ell) * rat(1, 2);
    let m = gens.prolonged(GenName::M)?.mul_poly(&jet.x(k).pow(2).scale(&-half_b));
    let d = gens.prolonged(GenName::D)?.mul_poly(&jet.t());
    let p2 = gens.tilde_p(2)?.mul_poly(&jet.x(1).scale(&rat_int(ell.twice() as i64)));
    let c = gens.prolonged(GenName::C)?;
    let h = gens.prolonged(GenName::H)?.mul_poly(&jet.t().pow(2));
    Ok(m.add_ref(&d).add_ref(&p2).sub_ref(c).sub_ref(&h))
}

pub fn build_tilde_c(ell: HalfInt) -> Result<Prolonged> {
    tilde_c_from(&build_generators(ell))
}

/// Applies each operator to each expression and returns the failing `(op, expr, residual)` triples.
fn nonzero_actions(ops: &[(String, Prolonged)], exprs: &[(String, Expr)], parallel: bool) -> Vec<(String, String, Expr)> {
    let fields: Vec<Prolonged> = ops.iter().map(|(_, f)| f.clone()).collect();
    let values: Vec<Expr> = exprs.iter().map(|(_, e)| e.clone()).collect();
    let out = ProlongedField::apply_batch(&fields, &values, parallel);
    let mut bad = Vec::new();
    for (i, row) in out.into_iter().enumerate() {
        for (j, r) in row.into_iter().enumerate() {
            if !r.is_zero() {
                bad.push((ops[i].0.clone(), exprs[j].0.clone(), r));
            }
        }
    }
    bad
}

fn annihilation_check(
    id: &str,
    description: &str,
    ops: &[(String, Prolonged)],
    exprs: &[(String, Expr)],
    parallel: bool,
) -> Check {
    let bad = nonzero_actions(ops, exprs, parallel);
    let total = ops.len() * exprs.len();
    let mut detail = format!("{} of {} actions vanish identically", total - bad.len(), total);
    for (o, e, r) in &bad {
        detail.push_str(&format!("\n{o}({e}) = {}", brief(r)));
    }
    Check::assert(id, bad.is_empty(), description, detail)
}

/// Every generator against every final invariant, one check per pair.
pub fn verify_full_annihilation(ell: HalfInt, parallel: bool) -> Result<Report> {
    let gens = build_generators(ell);
    let invariants: Vec<(String, Expr)> = if ell.twice() == 3 {
        let (_, psis) = build_tower_32();
        psis.psi.iter().enumerate().map(|(i, p)| (format!("psi_{}", i + 1), p.clone())).collect()
    } else {
        let tower = build_tower_general(ell)?;
        tower
            .finals
            .iter()
            .map(|(l, e)| (format!("{l}/w^{}", l.weight(ell)), e.clone()))
            .collect()
    };
    let ops = named_ops(&gens);
    let fields: Vec<Prolonged> = ops.iter().map(|(_, f)| f.clone()).collect();
    let values: Vec<Expr> = invariants.iter().map(|(_, e)| e.clone()).collect();
    let out = ProlongedField::apply_batch(&fields, &values, parallel);
    let mut report = Report::new("full annihilation", ell);
    let mut zeros = 0;
    for (i, row) in out.iter().enumerate() {
        for (j, r) in row.iter().enumerate() {
            let ok = r.is_zero();
            zeros += ok as usize;
            let detail = if ok { String::new() } else { format!("residual: {}", brief(r)) };
            report.push(Check::assert(
                format!("annihilate/{}/{}", ops[i].0, invariants[j].0),
                ok,
                format!("{}^ annihilates {}", ops[i].0, invariants[j].0),
                detail,
            ));
        }
    }
    let total = ops.len() * invariants.len();
    report.push(Check::assert(
        "annihilate/summary",
        zeros == total,
        format!("{} generators x {} invariants", ops.len(), invariants.len()),
        format!("{zeros} of {total} exact zeros"),
    ));
    Ok(report)
}

/// Lemma-level checks for one `ℓ`, including the curated WARN entries.
pub fn verify_intermediate_lemmas(ell: HalfInt, parallel: bool) -> Result<Report> {
    let gens = build_generators(ell);
    let mut report = Report::new("intermediate statements", ell);
    if ell.twice() == 3 {
        lemmas_32(&gens, &mut report, parallel)?;
    } else {
        lemmas_general(&gens, &mut report, parallel)?;
    }
    report.push(central_sign_check(&gens));
    Ok(report)
}

/// Both reports merged: lemmas first, then full annihilation.
pub fn verify_invariants(ell: HalfInt, parallel: bool) -> Result<Report> {
    let mut r = verify_intermediate_lemmas(ell, parallel)?;
    r.extend(verify_full_annihilation(ell, parallel)?);
    r.title = "invariant verification".to_string();
    Ok(r)
}

fn named(prefix: &str, items: &[Expr]) -> Vec<(String, Expr)> {
    items.iter().enumerate().map(|(i, e)| (format!("{prefix}_{}", i + 1), e.clone())).collect()
}

fn ops_by_name(gens: &GeneratorSet, names: &[GenName]) -> Result<Vec<(String, Prolonged)>> {
    names.iter().map(|n| Ok((n.to_string(), gens.prolonged(*n)?.clone()))).collect()
}

fn tilde_ops(gens: &GeneratorSet, ns: impl IntoIterator<Item = u32>) -> Result<Vec<(String, Prolonged)>> {
    ns.into_iter().map(|n| Ok((format!("P~{n}"), gens.tilde_p(n)?))).collect()
}

fn lemmas_32(gens: &GeneratorSet, report: &mut Report, parallel: bool) -> Result<()> {
    let (phis, psis) = build_tower_32();
    let phi = &phis.phi;
    let phi_named = named("phi", phi);

    let mut ops = ops_by_name(gens, &[GenName::M, GenName::H, GenName::P(1), GenName::P(2), GenName::P(3), GenName::P(4)])?;
    ops.extend(tilde_ops(gens, 2..=4)?);
    report.push(annihilation_check(
        "phi32/annihilate",
        "phi_1..phi_7 are annihilated by M, H, P1..P4 and P~2..P~4",
        &ops,
        &phi_named,
        parallel,
    ));

    let u00 = phi[6].contains(JetCoord::u2(0, 0));
    let no_t_x1 = phi.iter().all(|p| !p.contains(JetCoord::T) && !p.contains(JetCoord::X(1)));
    report.push(Check::assert(
        "phi32/structure",
        u00 && no_t_x1,
        "phi_7 contains U_00; no phi_i contains t or x_1",
        format!("U_00 in phi_7: {u00}; t, x_1 absent: {no_t_x1}"),
    ));

    let ct = tilde_c_from(gens)?;
    let printed = printed_tilde_c_32();
    report.push(Check::assert(
        "ctilde/printed",
        ct == printed,
        "C~ from the operator identity equals the printed operator coefficient by coefficient",
        if ct == printed {
            String::new()
        } else {
            format!("difference: {:?}", ct.sub_ref(&printed).coeffs())
        },
    ));
    report.push(tilde_c_shape_check(&ct));

    report.push(ctilde_table_check(&ct, phi));

    let w_named: Vec<(String, Expr)> = ["w_1", "w_2", "w_3'", "w_4", "w_5'", "w_6"]
        .iter()
        .zip(&psis.w)
        .map(|(n, e)| (n.to_string(), e.clone()))
        .collect();
    report.push(annihilation_check(
        "w32/ctilde",
        "C~ annihilates w_1 .. w_6",
        &[("C~".to_string(), ct.clone())],
        &w_named,
        parallel,
    ));
    let w4p = ct.apply(&psis.w4_printed);
    report.push(if w4p.is_zero() {
        Check::assert("w32/w4-printed", true, "printed w_4 is C~-invariant", "")
    } else {
        Check::new(
            "w32/w4-printed",
            Status::Warn,
            "printed w_4 (coefficient 3/2) is not C~-invariant",
            format!("C~(w_4 printed) = {}\nthe tower uses w_4 = phi_1 - (3/4) w_2 phi_2 - (3/16) phi_2^3", brief(&w4p)),
        )
        .with_discrepancy("w4-coefficient")
    });

    let d = gens.prolonged(GenName::D)?;
    let weights = [2, 4, 3, 6, 5, 4];
    let mut detail = Vec::new();
    let mut ok = true;
    for ((name, w), wt) in w_named.iter().zip(weights) {
        let ev = weight_eigenvalue(w, d);
        ok &= ev == Some(rat_int(-wt));
        detail.push(format!("D^ {name} = {} {name}", ev.map_or("(not an eigenvector)".into(), |e| rat_text(&e))));
    }
    report.push(Check::assert(
        "w32/weights",
        ok,
        "D^ eigenvalues of w_1..w_6 are -(2, 4, 3, 6, 5, 4); the sign convention is D^ w = -weight w",
        detail.join("\n"),
    ));

    psi_form_checks(report, &psis)?;

    let ok = psis.psi[4].contains(JetCoord::u2(0, 0));
    report.push(Check::assert("psi32/u00", ok, "psi_5 contains U_00", ""));
    Ok(())
}

fn tilde_c_shape_check(ct: &Prolonged) -> Check {
    let t_free = ct.t_degree() == 0 && ct.coeffs().values().all(|p| !p.contains(JetCoord::T));
    let no_time = ct.coeff(JetCoord::T).is_zero();
    Check::assert(
        "ctilde/t-free",
        t_free && no_time,
        "C~ has no d_t component and no coefficient depends on t",
        "",
    )
}

fn ctilde_table_check(ct: &Prolonged, phi: &[Expr]) -> Check {
    let c = |n, d| Expr::constant(rat(n, d));
    let table = [
        phi[2].scale(&rat_int(2)),
        c(4, 3),
        phi[1].clone(),
        c(-2, 3),
        phi[5].clone(),
        Expr::zero(),
        phi[1].scale(&rat(1, 3)).add_ref(&phi[3].scale(&rat(2, 3))),
    ];
    let mut lines = Vec::new();
    let mut literal = true;
    let mut tripled = true;
    for (i, (p, want)) in phi.iter().zip(&table).enumerate() {
        let got = ct.apply(p);
        literal &= got.equals(want);
        tripled &= got.equals(&want.scale(&rat_int(3)));
        lines.push(format!("C~ phi_{} = {}   (table: {})", i + 1, brief(&got), brief(want)));
    }
    let desc = "C~ action on phi_1..phi_7 against the printed table";
    if literal {
        Check::assert("ctilde/table", true, desc, lines.join("\n"))
    } else if tripled {
        lines.push("every computed action is exactly 3 times the table entry".into());
        Check::new("ctilde/table", Status::Warn, desc, lines.join("\n")).with_discrepancy("ctilde-table")
    } else {
        Check::assert("ctilde/table", false, desc, lines.join("\n"))
    }
}

fn psi_form_checks(report: &mut Report, psis: &super::PsiTower32) -> Result<()> {
    let forms = psis.psi_forms()?;
    let corrected = psis.psi_forms_corrected()?;
    let expected = [rat_int(1), rat_int(8), rat(1, 8), rat_int(2), rat_int(1)];
    for i in 0..5 {
        let id = format!("psi-form/{}", i + 1);
        let f = psis.psi[i].proportionality_factor(&forms[i]);
        match f {
            Some(k) => report.push(Check::assert(
                id,
                k == expected[i],
                format!("psi_{} equals its Psi/Phi form up to a fixed rational factor", i + 1),
                format!("psi_{} = {} * form", i + 1, rat_text(&k)),
            )),
            None if i == 3 => {
                let fc = psis.psi[i].proportionality_factor(&corrected[i]);
                let status = if fc.is_some() { Status::Warn } else { Status::Fail };
                report.push(
                    Check::new(
                        id,
                        status,
                        "psi_4 against the printed Psi_4^2/Phi^5",
                        format!(
                            "not proportional to the printed form; with the corrected Psi_4: psi_4 = {} * Psi_4^2/Phi^5",
                            fc.map_or("(none)".into(), |k| rat_text(&k))
                        ),
                    )
                    .with_discrepancy("psi4-form"),
                );
            }
            None => report.push(Check::assert(
                id,
                false,
                format!("psi_{} equals its Psi/Phi form up to a fixed rational factor", i + 1),
                "not proportional",
            )),
        }
    }
    Ok(())
}

fn lemmas_general(gens: &GeneratorSet, report: &mut Report, parallel: bool) -> Result<()> {
    let ell = gens.ell();
    let kk = ell.k();
    let twice = ell.twice();
    let tower = build_tower_general(ell)?;

    let phi_all: Vec<(String, Expr)> = tower
        .phi_km
        .iter()
        .map(|((k, m), e)| (format!("phi_{k}{m}"), e.clone()))
        .collect();
    let phi_12b: Vec<(String, Expr)> = (1..=kk)
        .flat_map(|b| [(1, b), (2, b)])
        .map(|(a, b)| (format!("phi_{a}{b}"), tower.phi_sym(a, b).clone()))
        .collect();

    let mut case1 = vec![
        ("phi~".to_string(), tower.phi_tilde.clone()),
        ("phi_01".to_string(), tower.phi01.clone()),
        ("phi_02".to_string(), tower.phi02.clone()),
    ];
    case1.extend(phi_12b);
    report.push(annihilation_check(
        "lemma-p/top-two",
        "phi~, phi_01, phi_02, phi_1b, phi_2b are annihilated by P~(2l+1) and P~(2l)",
        &tilde_ops(gens, [twice + 1, twice])?,
        &case1,
        parallel,
    ));

    let middle: Vec<u32> = ((kk + 2)..twice).collect();
    if middle.is_empty() {
        report.push(Check::assert(
            "lemma-p/middle",
            true,
            "no P~(n) with l+5/2 <= n <= 2l-1 at this l",
            "",
        ));
    } else {
        let mut case2 = vec![
            ("phi".to_string(), tower.phi.clone()),
            ("phi_01".to_string(), tower.phi01.clone()),
            ("phi_02".to_string(), tower.phi02.clone()),
        ];
        case2.extend(phi_all.iter().cloned());
        report.push(annihilation_check(
            "lemma-p/middle",
            "phi, phi_01, phi_02 and every phi_km are annihilated by P~(n), l+5/2 <= n <= 2l-1",
            &tilde_ops(gens, middle)?,
            &case2,
            parallel,
        ));
    }

    let mut case3 = vec![
        ("w".to_string(), tower.w.clone()),
        ("w_01".to_string(), tower.w01.clone()),
        ("w_02".to_string(), tower.w02.clone()),
    ];
    case3.extend(phi_all.iter().cloned());
    report.push(annihilation_check(
        "lemma-p/first-nonzero-eta",
        "w, w_01, w_02 and every phi_km are annihilated by P~(l+3/2)",
        &tilde_ops(gens, [kk + 1])?,
        &case3,
        parallel,
    ));

    let mut low = vec![("w".to_string(), tower.w.clone())];
    low.extend(phi_all.iter().cloned());
    report.push(annihilation_check(
        "lemma-p/low",
        "w and every phi_km are annihilated by P~(n), 2 <= n <= l+1/2",
        &tilde_ops(gens, 2..=kk)?,
        &low,
        parallel,
    ));

    alpha_beta_checks(gens, &tower, report)?;

    let ct = tilde_c_from(gens)?;
    report.push(tilde_c_shape_check(&ct));
    report.push(lemma_ab_structure(&ct));
    report.push(tconphi_check(&ct, &tower, ell));

    let wkm_named: Vec<(String, Expr)> = tower.w_km.iter().map(|(l, e)| (l.to_string(), e.clone())).collect();
    report.push(annihilation_check(
        "wkm/ctilde",
        "C~ annihilates every w_km",
        &[("C~".to_string(), ct.clone())],
        &wkm_named,
        parallel,
    ));
    report.push(w_third_check(&ct, &tower)?);

    let direct = wkm_jet_recursive(ell)?;
    let mismatched: Vec<String> = tower
        .w_km
        .iter()
        .filter(|(l, e)| !e.equals(&Expr::from(direct[l].clone())))
        .map(|(l, _)| l.to_string())
        .collect();
    report.push(Check::assert(
        "wkm/phi-vs-jet",
        mismatched.is_empty(),
        "w_km expanded in phi and substituted equals the recursion carried out on the jet space",
        if mismatched.is_empty() { String::new() } else { format!("mismatch: {}", mismatched.join(", ")) },
    ));

    report.push(weight_check(gens, &tower)?);

    let count = tower.finals.len();
    let want = TowerGeneral::expected_final_count(ell);
    report.push(Check::assert(
        "finals/count",
        count == want,
        "number of final invariants is (l-1/2)(l+5/2)/2",
        format!("{count} built, {want} expected"),
    ));
    let with_u00: Vec<String> = tower
        .finals
        .iter()
        .filter(|(_, e)| e.contains(JetCoord::u2(0, 0)) || e.contains(JetCoord::T))
        .map(|(l, _)| l.to_string())
        .collect();
    report.push(Check::assert(
        "finals/no-u00",
        with_u00.is_empty(),
        "no final invariant contains U_00 or t",
        with_u00.join(", "),
    ));

    coefficient_checks(report, ell)?;
    if twice == 5 {
        example_checks(gens, &tower, report)?;
    }
    Ok(())
}

fn alpha_beta_checks(gens: &GeneratorSet, tower: &TowerGeneral, report: &mut Report) -> Result<()> {
    let kk = tower.ell.k();
    let mut matching_bad = Vec::new();
    let mut cross = Vec::new();
    for m in 2..=kk {
        let op = gens.tilde_p(m)?;
        for n in 2..=kk {
            for (name, e) in [("alpha", &tower.alpha[&n]), ("beta", &tower.beta[&n])] {
                let r = op.apply(e);
                if r.is_zero() {
                    continue;
                }
                let line = format!("P~{m} {name}_{n} = {}", brief(&r));
                if m == n {
                    matching_bad.push(line);
                } else {
                    cross.push(line);
                }
            }
        }
    }
    report.push(Check::assert(
        "alpha-beta/matching",
        matching_bad.is_empty(),
        "P~(n) annihilates alpha_n and beta_n for each n = 2 .. l+1/2",
        matching_bad.join("\n"),
    ));
    report.push(if cross.is_empty() {
        Check::assert("alpha-beta/cross", true, "P~(m) annihilates alpha_n, beta_n for all m, n", "")
    } else {
        Check::new(
            "alpha-beta/cross",
            Status::Warn,
            "cross-index actions P~(m) alpha_n, P~(m) beta_n (m != n) are computed and reported",
            cross.join("\n"),
        )
        .with_discrepancy("alpha-beta-per-n")
    });
    let summed = [
        ("A".to_string(), tower.summed_alpha_beta(1)),
        ("B".to_string(), tower.summed_alpha_beta(2)),
    ];
    report.push(annihilation_check(
        "alpha-beta/summed",
        "A = w_01 + sum (n-1) x_n phi_{1,n-1} and B (same with phi_{2,n-1}) are annihilated by every P~(n), 2 <= n <= l+1/2",
        &tilde_ops(gens, 2..=kk)?,
        &summed,
        false,
    ));
    Ok(())
}

/// Outside the `∂U_00` coefficient, `U_03` enters `C̃` only through `∂U_02` and `U_02` only through `∂U_01`.
fn lemma_ab_structure(ct: &Prolonged) -> Check {
    let holders = |v: JetCoord| -> Vec<JetCoord> {
        ct.coeffs().iter().filter(|(_, p)| p.contains(v)).map(|(c, _)| *c).collect()
    };
    // F no longer depends on U_00 for l >= 5/2, so the d_U00 coefficient is irrelevant here.
    let relevant = |v: Vec<JetCoord>| -> Vec<JetCoord> { v.into_iter().filter(|c| *c != JetCoord::u2(0, 0)).collect() };
    let h03 = holders(JetCoord::u2(0, 3));
    let h02 = holders(JetCoord::u2(0, 2));
    let ok03 = relevant(h03.clone()) == vec![JetCoord::u2(0, 2)];
    let ok02 = relevant(h02.clone()) == vec![JetCoord::u2(0, 1)];
    let show = |v: &[JetCoord]| v.iter().map(|c| format!("d_{c}")).collect::<Vec<_>>().join(", ");
    Check::assert(
        "ctilde/u03-u02",
        ok03 && ok02,
        "apart from d_U00, U_03 appears in C~ only in the d_U02 coefficient and U_02 only in the d_U01 coefficient",
        format!("U_03 in: {}\nU_02 in: {}", show(&h03), show(&h02)),
    )
}

fn tconphi_check(ct: &Prolonged, tower: &TowerGeneral, ell: HalfInt) -> Check {
    let kk = ell.k();
    let lam = |k: u32| lambda_k(k as i64, ell).expect("index in range");
    let b = b_ell(ell);
    let mut bad = Vec::new();
    let w_act = ct.apply(&tower.w);
    if !w_act.is_zero() {
        bad.push(format!("C~ w = {}", brief(&w_act)));
    }
    for (&(k, m), e) in &tower.phi_km {
        let want = if k == kk {
            Expr::constant(b.clone())
        } else if m == kk {
            tower.phi_sym(k + 1, kk).scale(&lam(k))
        } else {
            tower.phi_sym(k + 1, m).scale(&lam(k)).add_ref(&tower.phi_sym(k, m + 1).scale(&lam(m)))
        };
        let got = ct.apply(e);
        if !got.equals(&want) {
            bad.push(format!("C~ phi_{k}{m} = {}", brief(&got)));
        }
    }
    Check::assert(
        "ctilde/action",
        bad.is_empty(),
        "C~ w = 0, C~ phi_km = lambda_k phi_{k+1,m} + lambda_m phi_{k,m+1}, C~ phi_kK = lambda_k phi_{k+1,K}, C~ phi_KK = b",
        format!("b = {}{}{}", rat_text(&b), if bad.is_empty() { "" } else { "\n" }, bad.join("\n")),
    )
}

/// The height-one diagonal invariant with the recursion's coefficient against the printed one.
fn w_third_check(ct: &Prolonged, tower: &TowerGeneral) -> Result<Check> {
    let ell = tower.ell;
    let kk = ell.k();
    let k1 = kk - 1;
    let jet = tower.jet();
    let lam = lambda_k(k1 as i64, ell)?;
    let b = b_ell(ell);
    let table = CoeffTable::build(ell);
    let computed = table.gamma(k1, k1);
    let printed = rat_int(2) * (rat_int(2) * &lam / &b) * (rat_int(2) * &lam / &b);
    let phi_top = phi_km_jet(jet, kk as u8, kk as u8);
    let leaf = tower.w_km[&NodeLabel::leaf(ell)].as_poly().cloned().unwrap_or_default();
    let variant = phi_km_jet(jet, k1 as u8, k1 as u8)
        - leaf.mul_ref(&phi_top).scale(&(rat_int(2) * &lam / &b))
        - phi_top.pow(3).scale(&(printed.clone() / fact_rat(3)));
    let printed_action = ct.apply(&Expr::from(variant));
    let ours = ct.apply(&tower.w_km[&NodeLabel { k: k1, m: k1 }]);
    let closed = rat_int(2) * &lam * &lam / (&b * &b);
    let detail = format!(
        "gamma({k1},{k1}) from the recursion = {} (= 2 lambda^2 / b^2 = {}); printed 2(2 lambda/b)^2 = {}\n\
         C~ annihilates the recursion value: {}; C~ applied to the printed variant is {}",
        rat_text(&computed),
        rat_text(&closed),
        rat_text(&printed),
        ours.is_zero(),
        if printed_action.is_zero() { "zero".to_string() } else { format!("nonzero: {}", brief(&printed_action)) }
    );
    let desc = "trailing coefficient of w_{K-1,K-1}";
    Ok(if !ours.is_zero() || computed != closed {
        Check::assert("w-third", false, desc, detail)
    } else if computed == printed {
        Check::assert("w-third", true, desc, detail)
    } else {
        Check::new("w-third", Status::Warn, desc, detail).with_discrepancy("w-third")
    })
}

fn weight_check(gens: &GeneratorSet, tower: &TowerGeneral) -> Result<Check> {
    let ell = tower.ell;
    let d = gens.prolonged(GenName::D)?;
    let mut bad = Vec::new();
    let mut lines = Vec::new();
    let mut expect = |name: String, e: &Expr, want: Rat| {
        let got = weight_eigenvalue(e, d);
        if got.as_ref() != Some(&want) {
            bad.push(format!(
                "D^ {name}: got {}, want {}",
                got.map_or("(not an eigenvector)".into(), |g| rat_text(&g)),
                rat_text(&want)
            ));
        }
    };
    expect("w".into(), &tower.w, rat_int(-2));
    for (&(k, m), e) in &tower.phi_km {
        expect(format!("phi_{k}{m}"), e, rat_int(-2 * (ell.twice() as i64 + 2 - k as i64 - m as i64)));
    }
    for (l, e) in &tower.w_km {
        expect(l.to_string(), e, rat_int(-2 * l.weight(ell) as i64));
        lines.push(format!("D^ {l} / D^ w = {}", l.weight(ell)));
    }
    for n in 2..=ell.k() {
        expect(format!("alpha_{n}"), &tower.alpha[&n], rat_int(-(ell.twice() as i64 + 2)));
        expect(format!("beta_{n}"), &tower.beta[&n], rat_int(-(ell.twice() as i64)));
    }
    for (l, e) in &tower.finals {
        expect(format!("{l}/w^{}", l.weight(ell)), e, Rat::zero());
    }
    lines.extend(bad.iter().cloned());
    Ok(Check::assert(
        "weights",
        bad.is_empty(),
        "D^ eigenvalues: w -> -2, phi_km and w_km -> -2(2l+2-k-m), alpha_n -> -2(l+1), beta_n -> -2l, finals -> 0",
        lines.join("\n"),
    ))
}

fn coefficient_checks(report: &mut Report, ell: HalfInt) -> Result<()> {
    let table = CoeffTable::build(ell);
    let mut bad = Vec::new();
    let mut count = 0;
    let labels = all_labels(ell);
    for &root in &labels {
        for &target in &labels {
            if target.k < root.k || target.m < root.m || target == root {
                continue;
            }
            let (a, b) = (target.k - root.k, target.m - root.m);
            count += 1;
            let p = treecoef::coeff_c_paths(root.k, root.m, a, b, ell)?;
            if p != table.c(root.k, root.m, a, b) {
                bad.push(format!("c_{a}{b}({},{})", root.k, root.m));
            }
        }
        count += 1;
        if treecoef::coeff_gamma_paths(root.k, root.m, ell)? != table.gamma(root.k, root.m) {
            bad.push(format!("gamma({},{})", root.k, root.m));
        }
    }
    report.push(Check::assert(
        "treecoef/paths",
        bad.is_empty(),
        "memoized recursion equals path enumeration for every c_ab(k,m) and gamma(k,m)",
        format!("{count} coefficients compared{}{}", if bad.is_empty() { "" } else { "; mismatch: " }, bad.join(", ")),
    ));

    let kk = ell.k();
    let mut bad = Vec::new();
    for k in 1..kk {
        let cf = corollary_closed_form(k, ell)?;
        for (n, v) in &cf.chain {
            if *v != table.c(k, kk, *n, 0) / fact_rat(*n) {
                bad.push(format!("w_{k}{kk} chain n = {n}"));
            }
        }
        if cf.trailing != table.gamma(k, kk) / fact_rat(cf.trailing_power) {
            bad.push(format!("w_{k}{kk} trailing"));
        }
    }
    report.push(Check::assert(
        "treecoef/closed-form",
        bad.is_empty(),
        "binomial closed form of w_{k,K} equals the recursion",
        bad.join(", "),
    ));

    if kk >= 4 {
        let b = b_ell(ell);
        let want = rat_int(2) * lambda_k(1, ell)? * lambda_k(3, ell)? / (&b * &b);
        let got = table.c(1, 3, 1, 1);
        report.push(Check::assert(
            "treecoef/c11-13",
            got == want,
            "c_11(1,3) = 2 lambda_1 lambda_3 / b^2",
            format!("{} vs {}", rat_text(&got), rat_text(&want)),
        ));
    }
    Ok(())
}

/// The `ℓ = 5/2` expansions of `w_km` in the `φ` variables exactly as printed, keyed by `(k, m)`.
pub fn printed_example_expansions() -> Vec<((u32, u32), PhiPoly)> {
    let v = |k, m| PhiVar::new(k, m);
    let term = |factors: &[((u8, u8), i32)], c: Rat| {
        PhiPoly::term(Monomial::from_pairs(factors.iter().map(|&((k, m), e)| (v(k, m), e))), c)
    };
    let p = |n: i64, d: i64| rat(n, d);
    let lines: Vec<((u32, u32), Vec<(Vec<((u8, u8), i32)>, Rat)>)> = vec![
        ((2, 3), vec![(vec![((2, 3), 1)], p(1, 1)), (vec![((3, 3), 2)], p(-1, 18))]),
        (
            (2, 2),
            vec![
                (vec![((2, 2), 1)], p(1, 1)),
                (vec![((2, 3), 1), ((3, 3), 1)], p(-2, 9)),
                (vec![((3, 3), 3)], p(2, 243)),
            ],
        ),
        (
            (1, 3),
            vec![
                (vec![((1, 3), 1)], p(1, 1)),
                (vec![((2, 3), 1), ((3, 3), 1)], p(-5, 36)),
                (vec![((3, 3), 3)], p(5, 4 * 243)),
            ],
        ),
        (
            (1, 2),
            vec![
                (vec![((1, 2), 1)], p(1, 1)),
                (vec![((1, 3), 1), ((3, 3), 1)], p(-1, 9)),
                (vec![((2, 2), 1), ((3, 3), 1)], p(-5, 36)),
                (vec![((2, 3), 1), ((3, 3), 2)], p(5, 8 * 27)),
                (vec![((3, 3), 4)], p(-5, 32 * 243)),
            ],
        ),
        (
            (1, 1),
            vec![
                (vec![((1, 1), 1)], p(1, 1)),
                (vec![((1, 2), 1), ((3, 3), 1)], p(-5, 18)),
                (vec![((1, 3), 1), ((3, 3), 2)], p(5, 4 * 81)),
                (vec![((2, 2), 1), ((3, 3), 2)], p(-25, 16 * 81)),
                (vec![((2, 3), 1), ((3, 3), 3)], p(-25, 16 * 729)),
                (vec![((3, 3), 5)], p(-5, 16 * 6561)),
            ],
        ),
    ];
    lines
        .into_iter()
        .map(|(l, terms)| (l, terms.into_iter().map(|(f, c)| term(&f, c)).sum()))
        .collect()
}

fn example_checks(gens: &GeneratorSet, tower: &TowerGeneral, report: &mut Report) -> Result<()> {
    let jet = tower.jet();
    let ct = tilde_c_from(gens)?;
    let mut lines = Vec::new();
    let mut typos = Vec::new();
    let mut real = Vec::new();
    for ((k, m), want) in printed_example_expansions() {
        let got: PhiPoly = expand_wkm_in_phi(tower, k, m)?.into_iter().map(|(mo, c)| PhiPoly::term(mo, c)).sum();
        if got == want {
            continue;
        }
        let diff = got.sub_ref(&want);
        lines.push(format!("w_{k}{m}: computed minus printed = {}", poly_text(&diff)));
        let printed_jet = want.compose(|v: PhiVar| phi_km_jet(jet, v.k, v.m))?;
        let action = ct.apply(&Expr::from(printed_jet));
        if action.is_zero() {
            real.push(format!("w_{k}{m}"));
        } else {
            lines.push(format!("C~ applied to the printed w_{k}{m} is nonzero: {}", brief(&action)));
            typos.push(format!("w_{k}{m}"));
        }
    }
    let w_top = tower.w.num().coefficient(&Monomial::from_pairs([(JetCoord::U1(3), 2), (JetCoord::U, -2)]));
    if w_top != rat(-1, 8) {
        real.push("w".into());
        lines.push(format!("w: coefficient of U_3^2/U^2 is {}", rat_text(&w_top)));
    }
    let desc = "the printed l = 5/2 expansions of w_23, w_22, w_13, w_12, w_11 and the -U_3^2/(8U^2) term of w";
    report.push(if typos.is_empty() && real.is_empty() {
        Check::assert("example/wkm", true, desc, "every printed coefficient reproduced")
    } else if real.is_empty() && typos == ["w_11"] {
        Check::new("example/wkm", Status::Warn, desc, lines.join("\n")).with_discrepancy("example-w11")
    } else {
        Check::assert("example/wkm", false, desc, lines.join("\n"))
    });

    let printed = example_generators(jet, false);
    let corrected = example_generators(jet, true);
    let mut mismatched = Vec::new();
    let mut unresolved = Vec::new();
    for ((name, f), (_, fc)) in printed.iter().zip(&corrected) {
        let built = gens.get(*name)?;
        if built.sub_ref(f).is_zero() {
            continue;
        }
        mismatched.push(name.to_string());
        if !built.sub_ref(fc).is_zero() {
            unresolved.push(name.to_string());
        }
    }
    let h = gens.get(GenName::H)?;
    let p6 = gens.get(GenName::P(6))?;
    let p5 = gens.get(GenName::P(5))?;
    let ladder = h.bracket(p6).sub_ref(&p5.scale(&rat_int(5))).is_zero();
    let desc = "the printed l = 5/2 generators against the realization";
    let detail = format!(
        "differing: {}; [H, P6] = 5 P5 holds: {ladder}",
        if mismatched.is_empty() { "none".to_string() } else { mismatched.join(", ") }
    );
    report.push(if mismatched.is_empty() {
        Check::assert("example/generators", true, desc, detail)
    } else if unresolved.is_empty() && mismatched == ["P5"] && ladder {
        Check::new("example/generators", Status::Warn, desc, detail).with_discrepancy("example-p5")
    } else {
        Check::assert("example/generators", false, desc, detail)
    });
    Ok(())
}

/// The explicit `ℓ = 5/2` generators as printed, or with the `P^(5)` line repaired.
fn example_generators(j: Jet, repaired: bool) -> Vec<(GenName, Field)> {
    let (t, u) = (j.t(), j.u());
    let (x1, x2, x3) = (j.x(1), j.x(2), j.x(3));
    let n = |v: i64| rat_int(v);
    let field = |xi: [Poly; 4], eta: Poly| Field::new(3, xi.to_vec(), eta);
    let z = Poly::zero;
    let one = Poly::one;
    let tp = |e: u32| t.pow(e);
    let p5_x3 = if repaired { 6 } else { 4 };
    let p5_eta = if repaired {
        (tp(1) * x3.scale(&n(2)) - x2.clone()) * u.clone()
    } else {
        (tp(1) * x3.scale(&n(2)) + x2.clone()) * u.clone()
    };
    vec![
        (GenName::M, field([z(), z(), z(), z()], u.clone())),
        (
            GenName::D,
            field([t.scale(&n(2)), x1.scale(&n(5)), x2.scale(&n(3)), x3.clone()], z()),
        ),
        (GenName::H, field([one(), z(), z(), z()], z())),
        (
            GenName::C,
            field(
                [
                    tp(2),
                    (&t * &x1).scale(&n(5)),
                    (&t * &x2).scale(&n(3)) + x1.scale(&n(5)),
                    &t * &x3 + x2.scale(&n(4)),
                ],
                (x3.pow(2) * u.clone()).scale(&n(-18)),
            ),
        ),
        (GenName::P(1), field([z(), one(), z(), z()], z())),
        (GenName::P(2), field([z(), t.clone(), one(), z()], z())),
        (GenName::P(3), field([z(), tp(2), t.scale(&n(2)), one()], z())),
        (
            GenName::P(4),
            field([z(), tp(3), tp(2).scale(&n(3)), t.scale(&n(3))], (&x3 * &u).scale(&n(-12))),
        ),
        (
            GenName::P(5),
            field([z(), tp(4), tp(3).scale(&n(4)), tp(2).scale(&n(p5_x3))], p5_eta.scale(&n(-24))),
        ),
        (
            GenName::P(6),
            field(
                [z(), tp(5), tp(4).scale(&n(5)), tp(3).scale(&n(10))],
                ((tp(2) * x3.clone() - &t * &x2 + x1.clone()) * u.clone()).scale(&n(-120)),
            ),
        ),
    ]
}

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::arith::{a_ell, rat_int, HalfInt, Rat};
use crate::error::{Error, Result};
use crate::jet::{Jet, Monomial};
use crate::treecoef::{all_labels, fact_rat, CoeffTable, NodeLabel};
use crate::{Expr, Poly};

use super::{phi_km_jet, ratio_u, PhiPoly, PhiVar};

/// Invariant tower for `ℓ ≥ 5/2`.
#[derive(Clone, Debug)]
pub struct TowerGeneral {
    pub ell: HalfInt,
    /// `φ_km` for `1 ≤ k ≤ m ≤ K`.
    pub phi_km: BTreeMap<(u32, u32), Expr>,
    pub phi: Expr,
    pub phi_tilde: Expr,
    pub phi01: Expr,
    pub phi02: Expr,
    pub w: Expr,
    pub w01: Expr,
    pub w02: Expr,
    /// `α_n`, `β_n` for `n = 2 … K`.
    pub alpha: BTreeMap<u32, Expr>,
    pub beta: BTreeMap<u32, Expr>,
    pub w_km: BTreeMap<NodeLabel, Expr>,
    /// `w_km` with nested `w`'s eliminated, as a polynomial in the `φ_km`.
    pub w_km_phi: BTreeMap<NodeLabel, PhiPoly>,
    /// `w_km / w^{2ℓ+2−k−m}`.
    pub finals: BTreeMap<NodeLabel, Expr>,
}

impl TowerGeneral {
    pub fn jet(&self) -> Jet {
        Jet::new(self.ell)
    }

    /// `(ℓ − 1/2)(ℓ + 5/2)/2`.
    pub fn expected_final_count(ell: HalfInt) -> usize {
        let k = ell.k() as usize;
        (k - 1) * (k + 2) / 2
    }

    pub fn phi_sym(&self, k: u32, m: u32) -> &Expr {
        &self.phi_km[&(k.min(m), k.max(m))]
    }

    /// `w_01 + Σ_n (n−1) x_n φ_{1,n−1}` (`which = 1`) or the `β` analogue (`which = 2`).
    pub fn summed_alpha_beta(&self, which: u32) -> Expr {
        let j = self.jet();
        let base = if which == 1 { &self.w01 } else { &self.w02 };
        (2..=self.ell.k()).fold(base.clone(), |acc, n| {
            let x = Expr::from(j.x(n as u8).scale(&rat_int(n as i64 - 1)));
            acc.add_ref(&x.mul_ref(self.phi_sym(which, n - 1)))
        })
    }
}

fn phi_poly(k: u32, m: u32) -> PhiPoly {
    PhiPoly::var(PhiVar::new(k as u8, m as u8))
}

/// `w_km` for every label in `φ` space, leaf first.
fn wkm_in_phi(table: &CoeffTable) -> BTreeMap<NodeLabel, PhiPoly> {
    let ell = table.ell();
    let kk = ell.k();
    let top = phi_poly(kk, kk);
    let mut out: BTreeMap<NodeLabel, PhiPoly> = BTreeMap::new();
    for label in all_labels(ell) {
        let mut w = phi_poly(label.k, label.m);
        for (a, b, c) in table.terms_for(label) {
            let nested = &out[&NodeLabel {
                k: label.k + a,
                m: label.m + b,
            }];
            let coef = c / fact_rat(a + b);
            w = w - nested.mul_ref(&top.pow(a + b)).scale(&coef);
        }
        let n = label.weight(ell);
        w = w - top.pow(n).scale(&(table.gamma(label.k, label.m) / fact_rat(n)));
        out.insert(label, w);
    }
    out
}

/// The same recursion carried out directly on jet-space polynomials.
///
/// Used as an independent check of the `φ`-space expansion followed by substitution.
pub fn wkm_jet_recursive(ell: HalfInt) -> Result<BTreeMap<NodeLabel, Poly>> {
    check_general(ell)?;
    let table = CoeffTable::build(ell);
    let jet = Jet::new(ell);
    let kk = ell.k();
    let top = phi_km_jet(jet, kk as u8, kk as u8);
    let mut out: BTreeMap<NodeLabel, Poly> = BTreeMap::new();
    for label in all_labels(ell) {
        let mut w = phi_km_jet(jet, label.k as u8, label.m as u8);
        for (a, b, c) in table.terms_for(label) {
            let nested = &out[&NodeLabel {
                k: label.k + a,
                m: label.m + b,
            }];
            w = w - nested.mul_ref(&top.pow(a + b)).scale(&(c / fact_rat(a + b)));
        }
        let n = label.weight(ell);
        w = w - top.pow(n).scale(&(table.gamma(label.k, label.m) / fact_rat(n)));
        out.insert(label, w);
    }
    Ok(out)
}

fn check_general(ell: HalfInt) -> Result<()> {
    if ell.twice() < 5 {
        return Err(Error::Unsupported(format!(
            "the general tower needs ell >= 5/2, got {ell}; use the ell = 3/2 tower"
        )));
    }
    Ok(())
}

/// Builds the complete tower for `ℓ ≥ 5/2`.
pub fn build_tower_general(ell: HalfInt) -> Result<TowerGeneral> {
    check_general(ell)?;
    let jet = Jet::new(ell);
    let kk = ell.k();
    let k8 = kk as u8;
    let a = a_ell(ell);
    let q = |i: u8| ratio_u(jet, i);
    let e = |p: Poly| Expr::from(p);

    let mut phi_km = BTreeMap::new();
    for k in 1..=kk {
        for m in k..=kk {
            phi_km.insert((k, m), e(phi_km_jet(jet, k as u8, m as u8)));
        }
    }
    let phi_sym = |k: u32, m: u32| phi_km_jet(jet, k as u8, m as u8);

    let mut phi = q(0);
    for j in 1..kk {
        phi = phi + jet.x(j as u8 + 1).mul_ref(&q(j as u8)).scale(&rat_int(j as i64));
    }
    let w = phi.clone() - jet.u1(k8).pow(2).mul_ref(&jet.u_inv(2)).scale(&(rat_int(1) / (rat_int(2) * &a)));
    let phi_tilde = q(0) + jet.x(2).mul_ref(&q(1)) + jet.x(3).mul_ref(&q(2)).scale(&rat_int(2));
    let phi01 = jet.u2(0, 1).mul_ref(&jet.u_inv(1)) - q(0).mul_ref(&q(1));
    let phi02 = jet.u2(0, 2).mul_ref(&jet.u_inv(1)) + q(1) - q(0).mul_ref(&q(2));
    let w0 = |p0: &Poly, alpha: u32| p0.clone() - phi_sym(alpha, kk).mul_ref(&q(k8)).scale(&(rat_int(1) / &a));
    let w01 = w0(&phi01, 1);
    let w02 = w0(&phi02, 2);

    let mut alpha = BTreeMap::new();
    let mut beta = BTreeMap::new();
    for n in 2..=kk {
        let xn = jet.x(n as u8).scale(&rat_int(n as i64 - 1));
        alpha.insert(n, e(w01.clone() + xn.mul_ref(&phi_sym(1, n - 1))));
        beta.insert(n, e(w02.clone() + xn.mul_ref(&phi_sym(2, n - 1))));
    }

    let table = CoeffTable::build(ell);
    let w_km_phi = wkm_in_phi(&table);
    let labels: Vec<NodeLabel> = w_km_phi.keys().copied().collect();
    let jet_polys: Vec<Poly> = labels
        .par_iter()
        .map(|l| w_km_phi[l].compose(|v: PhiVar| phi_km_jet(jet, v.k, v.m)))
        .collect::<Result<_>>()?;
    let w_expr = e(w.clone());
    let w_inv = w_expr.inverse()?;
    let mut w_km = BTreeMap::new();
    let mut finals = BTreeMap::new();
    for (l, p) in labels.iter().zip(jet_polys) {
        let wk = e(p);
        finals.insert(*l, wk.mul_ref(&w_inv.pow(l.weight(ell) as i32)?));
        w_km.insert(*l, wk);
    }

    Ok(TowerGeneral {
        ell,
        phi_km,
        phi: e(phi),
        phi_tilde: e(phi_tilde),
        phi01: e(phi01),
        phi02: e(phi02),
        w: w_expr,
        w01: e(w01),
        w02: e(w02),
        alpha,
        beta,
        w_km,
        w_km_phi,
        finals,
    })
}

/// Coefficients of `w_km` over `φ` monomials, in canonical order.
pub fn expand_wkm_in_phi(tower: &TowerGeneral, k: u32, m: u32) -> Result<Vec<(Monomial<PhiVar>, Rat)>> {
    let label = NodeLabel::new(k, m, tower.ell)?;
    Ok(tower.w_km_phi[&label]
        .canonical_terms()
        .into_iter()
        .map(|(mo, c)| (mo.clone(), c.clone()))
        .collect())
}

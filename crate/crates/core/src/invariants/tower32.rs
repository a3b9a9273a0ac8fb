use crate::arith::rat;
use crate::error::Result;
use crate::jet::{Jet, JetCoord};
use crate::{Expr, Poly, Prolonged};

use super::{phi_km_jet, ratio_u};

/// `φ_1 … φ_7` for `ℓ = 3/2`.
#[derive(Clone, Debug)]
pub struct PhiTower32 {
    pub phi: Vec<Expr>,
}

/// The `C̃`-invariants, the final `ψ_i`, and the closed polynomial forms `Φ`, `Ψ_i`.
///
/// `w[2]` and `w[4]` are `w_3' = φ_6` and `w_5' = φ_5 − (3/4)φ_6 φ_2`, without
/// the irrational prefactors; `ψ_2`, `ψ_3`, `ψ_4` change by the rational factors
/// `8`, `1/8`, `2` against the conventional normalization.
#[derive(Clone, Debug)]
pub struct PsiTower32 {
    pub w: Vec<Expr>,
    /// `w_4` with the printed coefficient `3/2` in place of `3/4`.
    pub w4_printed: Expr,
    pub psi: Vec<Expr>,
    pub big_phi: Expr,
    /// `Ψ_1 … Ψ_5` as printed.
    pub big_psi: Vec<Expr>,
    /// `Ψ_4` with the term `−4 U_2 (U_12 U − U_1 U_2) U²` restored.
    pub big_psi4_corrected: Expr,
}

impl PsiTower32 {
    /// `Ψ_1/Φ², Ψ_2²/Φ³, Ψ_3/Ψ_2², Ψ_4²/Φ⁵, Ψ_5/Ψ_1` from the printed `Ψ_i`.
    pub fn psi_forms(&self) -> Result<Vec<Expr>> {
        self.forms_with(&self.big_psi[3])
    }

    /// The same list with the corrected `Ψ_4`.
    pub fn psi_forms_corrected(&self) -> Result<Vec<Expr>> {
        self.forms_with(&self.big_psi4_corrected)
    }

    fn forms_with(&self, psi4: &Expr) -> Result<Vec<Expr>> {
        let p = &self.big_psi;
        let phi_inv = self.big_phi.inverse()?;
        Ok(vec![
            p[0].mul_ref(&phi_inv.pow(2)?),
            p[1].pow(2)?.mul_ref(&phi_inv.pow(3)?),
            p[2].mul_ref(&p[1].inverse()?.pow(2)?),
            psi4.pow(2)?.mul_ref(&phi_inv.pow(5)?),
            p[4].div_ref(&p[0])?,
        ])
    }
}

/// Builds every object of the `ℓ = 3/2` tower.
pub fn build_tower_32() -> (PhiTower32, PsiTower32) {
    let j = Jet::with_k(2);
    let u = j.u();
    let inv = |n| j.u_inv(n);
    let c = |a, b| Poly::constant(rat(a, b));
    let x2 = j.x(2);
    let (u0, u1, u2) = (j.u1(0), j.u1(1), j.u1(2));
    let uu = |a, b| j.u2(a, b);
    let (q0, q1, q2) = (ratio_u(j, 0), ratio_u(j, 1), ratio_u(j, 2));

    let p1 = phi_km_jet(j, 1, 1);
    let p2 = phi_km_jet(j, 2, 2);
    let p3 = phi_km_jet(j, 1, 2);
    let p4 = &q0 + &(&x2 * &q1) - uu(2, 2) * inv(1) * c(1, 2);
    let p5 = uu(0, 1) * inv(1) - &q0 * &q1 + &x2 * &p1 - &q2 * &p3;
    let p6 = uu(0, 2) * inv(1) + q1.clone() - &q0 * &q2 - &q2 * &p2 + &x2 * &p3;
    let p7 = uu(0, 0) * inv(1) - q0.pow(2) - (q1.clone() + uu(0, 2) * inv(1) * c(2, 1)) * q2.clone()
        + (q0.scale(&rat(2, 1)) + uu(2, 2) * inv(1)) * q2.pow(2)
        - q2.pow(4)
        - x2.pow(2) * p1.clone()
        + (&x2 * &p5).scale(&rat(2, 1));

    let w1 = p2.scale(&rat(1, 2)) + p4.clone();
    let w2 = p3.scale(&rat(2, 1)) - p2.pow(2).scale(&rat(3, 4));
    let w3 = p6.clone();
    let w4 = p1.clone() - (&w2 * &p2).scale(&rat(3, 4)) - p2.pow(3).scale(&rat(3, 16));
    let w4_printed = p1.clone() - ((&w2 * &p2) + p2.pow(3).scale(&rat(1, 8))).scale(&rat(3, 2));
    let w5 = p5.clone() - (&p6 * &p2).scale(&rat(3, 4));
    let w6 = p7.clone() - (&w1 * &p2).scale(&rat(1, 2));

    let e = |p: &Poly| Expr::from(p.clone());
    let ratio = |a: &Poly, ea: i32, b: &Poly, eb: i32| -> Expr {
        e(a).pow(ea)
            .and_then(|n| Ok(n.mul_ref(&e(b).inverse()?.pow(eb)?)))
            .expect("w_i are nonzero")
    };
    let psi = vec![
        ratio(&w2, 1, &w1, 2),
        ratio(&w3, 2, &w1, 3),
        ratio(&w4, 1, &w3, 2),
        ratio(&w5, 2, &w1, 5),
        ratio(&w6, 1, &w2, 1),
    ];

    let big_phi = (u0.clone() + &x2 * &u1).mul_ref(&u).scale(&rat(2, 1)) - u2.pow(2);
    let a = uu(2, 2) * u.clone() - u2.pow(2);
    let b = uu(1, 2) * u.clone() - &u1 * &u2;
    let uk = |n: u32| u.pow(n);
    let psi1 = (&b * &uk(2)).scale(&rat(8, 1)) - a.pow(2).scale(&rat(3, 1));
    let psi2 = (u1.clone() + uu(0, 2)) * uk(2) - &u2 * &((u0.clone() + uu(2, 2)) * u.clone() - u2.pow(2))
        + &x2 * &b * u.clone();
    let psi3 = (uu(1, 1) * uk(5)).scale(&rat(8, 1)) - (u1.pow(2) * uk(4)).scale(&rat(8, 1))
        - (&a * &b * uk(2)).scale(&rat(12, 1))
        + a.pow(3).scale(&rat(3, 1));
    let psi4 = (uu(0, 1) * uk(4)).scale(&rat(4, 1)) - (&u0 * &u1 * uk(3)).scale(&rat(4, 1))
        - (((u1.clone() + uu(0, 2)) * u.clone() - &u0 * &u2) * a.clone() * u.clone()).scale(&rat(3, 1))
        + (&u2 * &a.pow(2)).scale(&rat(3, 1))
        + &x2
            * &((uu(1, 1) * uk(3)).scale(&rat(4, 1))
                - (u1.pow(2) * uk(2)).scale(&rat(4, 1))
                - (&a * &b).scale(&rat(3, 1)))
            * u.clone();
    let psi5 = (uu(0, 0) * uk(3)).scale(&rat(4, 1))
        - ((u0.pow(2)).scale(&rat(2, 1))
            + &u0 * &uu(2, 2)
            + ((u1.clone() + uu(0, 2).scale(&rat(2, 1))) * u2.clone()).scale(&rat(2, 1)))
        .mul_ref(&uk(2))
        .scale(&rat(2, 1))
        + ((u0.scale(&rat(2, 1)) + uu(2, 2)) * u2.pow(2) * u.clone()).scale(&rat(5, 1))
        - u2.pow(4).scale(&rat(5, 1))
        + (&x2
            * &((uu(0, 1) * uk(2)).scale(&rat(4, 1))
                - ((&u0 * &u1).scale(&rat(4, 1)) + (&u2 * &uu(1, 2)).scale(&rat(4, 1)) + &u1 * &uu(2, 2))
                    * u.clone()
                + (&u1 * &u2.pow(2)).scale(&rat(5, 1)))
            * u.clone())
        .scale(&rat(2, 1))
        + (x2.pow(2) * (uu(1, 1) * u.clone() - u1.pow(2)) * uk(2)).scale(&rat(4, 1));
    let psi4c = psi4.clone() - (&u2 * &b * uk(2)).scale(&rat(4, 1));

    let phis = PhiTower32 {
        phi: [p1, p2, p3, p4, p5, p6, p7].iter().map(e).collect(),
    };
    let psis = PsiTower32 {
        w: [w1, w2, w3, w4, w5, w6].iter().map(e).collect(),
        w4_printed: e(&w4_printed),
        psi,
        big_phi: e(&big_phi),
        big_psi: [psi1, psi2, psi3, psi4, psi5].iter().map(e).collect(),
        big_psi4_corrected: e(&psi4c),
    };
    (phis, psis)
}

/// The operator `C̃` at `ℓ = 3/2` written out coefficient by coefficient as printed.
pub fn printed_tilde_c_32() -> Prolonged {
    let j = Jet::with_k(2);
    let u = j.u();
    let x2 = j.x(2);
    let (u0, u1, u2) = (j.u1(0), j.u1(1), j.u1(2));
    let uu = |a, b| j.u2(a, b);
    let n = |k: i64| crate::arith::rat_int(k);
    let coeffs = vec![
        (JetCoord::U1(0), &x2 * &u2),
        (JetCoord::U1(1), u2.scale(&n(3))),
        (JetCoord::U1(2), (&x2 * &u).scale(&n(4))),
        (JetCoord::u2(0, 0), (u0.clone() + &x2 * &uu(0, 2)).scale(&n(2))),
        (JetCoord::u2(0, 1), u1.scale(&n(3)) + uu(0, 2).scale(&n(3)) + &x2 * &uu(1, 2)),
        (JetCoord::u2(0, 2), u2.clone() + (&x2 * &u0).scale(&n(4)) + &x2 * &uu(2, 2)),
        (JetCoord::u2(1, 1), uu(1, 2).scale(&n(6))),
        (JetCoord::u2(1, 2), (&x2 * &u1).scale(&n(4)) + uu(2, 2).scale(&n(3))),
        (JetCoord::u2(2, 2), (u.clone() + (&x2 * &u2).scale(&n(2))).scale(&n(4))),
    ];
    Prolonged::from_coeffs(2, coeffs)
}

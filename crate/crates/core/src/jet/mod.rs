//! Second-order jet space, Laurent polynomials over it and rational expressions.

mod coord;
mod monomial;
mod poly;
mod ratexpr;

pub use coord::JetCoord;
pub use monomial::{canonical_cmp, Monomial};
pub use poly::LaurentPoly;
pub use ratexpr::RatExpr;

use crate::arith::{HalfInt, Rat};
use crate::prolong::ProlongedField;
use crate::{Expr, Poly};

/// Coordinate builders for the jet space of a fixed `K = ℓ + 1/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Jet {
    k: u8,
}

impl Jet {
    pub fn new(ell: HalfInt) -> Self {
        Jet { k: ell.k() as u8 }
    }

    pub fn with_k(k: u8) -> Self {
        Jet { k }
    }

    /// Number of spatial variables.
    pub fn k(self) -> u8 {
        self.k
    }

    pub fn coords(self) -> Vec<JetCoord> {
        JetCoord::all(self.k)
    }

    /// Whether every index of `c` exists in this jet space.
    pub fn has(self, c: JetCoord) -> bool {
        c.max_index().is_none_or(|i| i <= self.k)
    }

    pub fn t(self) -> Poly {
        Poly::var(JetCoord::T)
    }

    pub fn x(self, i: u8) -> Poly {
        debug_assert!(i <= self.k);
        Poly::var(JetCoord::X(i))
    }

    pub fn u(self) -> Poly {
        Poly::var(JetCoord::U)
    }

    /// `U^{-n}`.
    pub fn u_inv(self, n: i32) -> Poly {
        Poly::var_pow(JetCoord::U, -n)
    }

    pub fn u1(self, i: u8) -> Poly {
        debug_assert!(i <= self.k);
        Poly::var(JetCoord::U1(i))
    }

    pub fn u2(self, a: u8, b: u8) -> Poly {
        debug_assert!(a <= self.k && b <= self.k);
        Poly::var(JetCoord::u2(a, b))
    }

    pub fn c(self, r: Rat) -> Poly {
        Poly::constant(r)
    }
}

/// `κ` with `field(p) = κ·p`, if `p` is an eigenvector of the prolonged field.
pub fn weight_eigenvalue(p: &Expr, field: &ProlongedField<Rat>) -> Option<Rat> {
    if p.is_zero() {
        return Some(Rat::from_integer(0.into()));
    }
    field.apply(p).proportionality_factor(p)
}

/// Debug check that negative exponents only ever hit `U`.
pub fn only_u_negative(p: &Poly) -> bool {
    p.terms().iter().all(|(m, _)| {
        m.factors()
            .iter()
            .all(|&(v, e)| e >= 0 || v == JetCoord::U)
    })
}

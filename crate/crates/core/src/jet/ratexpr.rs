use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::jet::poly::LaurentPoly;
use crate::jet::JetCoord;
use crate::scalar::{Scalar, Variable};

/// Unnormalized rational expression `num / den`.
///
/// The denominator is kept as a product of factor powers. Each factor is
/// stripped of its monomial content and made monic, with the stripped parts
/// folded into the Laurent numerator. Identical factors are merged, but no
/// gcd is ever taken, so equality goes through [`RatExpr::is_zero`] of a
/// difference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatExpr<C, V = JetCoord> {
    num: LaurentPoly<C, V>,
    den: Vec<(LaurentPoly<C, V>, u32)>,
}

impl<C: Scalar, V: Variable> From<LaurentPoly<C, V>> for RatExpr<C, V> {
    fn from(p: LaurentPoly<C, V>) -> Self {
        RatExpr {
            num: p,
            den: Vec::new(),
        }
    }
}

impl<C: Scalar, V: Variable> RatExpr<C, V> {
    pub fn zero() -> Self {
        LaurentPoly::zero().into()
    }

    pub fn one() -> Self {
        LaurentPoly::one().into()
    }

    pub fn constant(c: C) -> Self {
        LaurentPoly::constant(c).into()
    }

    /// `num / den`; fails when `den` is the zero polynomial.
    pub fn ratio(num: LaurentPoly<C, V>, den: &LaurentPoly<C, V>) -> Result<Self> {
        let mut out = RatExpr::from(num);
        out.push_factor(den, 1)?;
        Ok(out)
    }

    pub fn num(&self) -> &LaurentPoly<C, V> {
        &self.num
    }

    pub fn den_factors(&self) -> &[(LaurentPoly<C, V>, u32)] {
        &self.den
    }

    /// Expanded denominator polynomial.
    pub fn den(&self) -> LaurentPoly<C, V> {
        self.den
            .iter()
            .fold(LaurentPoly::one(), |acc, (f, e)| acc.mul_ref(&f.pow(*e)))
    }

    /// Polynomial value when there is no denominator.
    pub fn as_poly(&self) -> Option<&LaurentPoly<C, V>> {
        self.den.is_empty().then_some(&self.num)
    }

    pub fn as_constant(&self) -> Option<C> {
        if self.num.is_zero() {
            return Some(C::zero());
        }
        if self.den.is_empty() {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// True iff the numerator expands to the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn contains(&self, v: V) -> bool {
        self.num.contains(v) || self.den.iter().any(|(f, _)| f.contains(v))
    }

    pub fn variables(&self) -> std::collections::BTreeSet<V> {
        let mut out = self.num.variables();
        for (f, _) in &self.den {
            out.extend(f.variables());
        }
        out
    }

    /// Largest polynomial inside the expression.
    pub fn term_count(&self) -> usize {
        self.den
            .iter()
            .map(|(f, _)| f.len())
            .chain(std::iter::once(self.num.len()))
            .max()
            .unwrap_or(0)
    }

    fn push_factor(&mut self, f: &LaurentPoly<C, V>, exp: u32) -> Result<()> {
        if exp == 0 {
            return Ok(());
        }
        if f.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let content = f.monomial_content();
        let stripped = f.mul_monomial(&content.inverse(), &C::one());
        let lead = stripped.terms()[0].1.clone();
        let monic = stripped.scale(&(C::one() / lead.clone()));
        // f^exp = (lead * content)^exp * monic^exp
        let inv = content.inverse().pow(exp as i32);
        let mut lead_pow = C::one();
        for _ in 0..exp {
            lead_pow = lead_pow * lead.clone();
        }
        self.num = self.num.mul_monomial(&inv, &(C::one() / lead_pow));
        if monic.as_constant().is_some() {
            return Ok(());
        }
        match self.den.iter_mut().find(|(g, _)| *g == monic) {
            Some((_, e)) => *e += exp,
            None => self.den.push((monic, exp)),
        }
        Ok(())
    }

    /// Least common multiple of the two factor multisets, with cofactors.
    fn common_den(
        a: &[(LaurentPoly<C, V>, u32)],
        b: &[(LaurentPoly<C, V>, u32)],
    ) -> (
        Vec<(LaurentPoly<C, V>, u32)>,
        LaurentPoly<C, V>,
        LaurentPoly<C, V>,
    ) {
        let mut lcm: Vec<(LaurentPoly<C, V>, u32)> = a.to_vec();
        for (f, e) in b {
            match lcm.iter_mut().find(|(g, _)| g == f) {
                Some((_, ea)) => *ea = (*ea).max(*e),
                None => lcm.push((f.clone(), *e)),
            }
        }
        let exp_in = |list: &[(LaurentPoly<C, V>, u32)], f: &LaurentPoly<C, V>| {
            list.iter().find(|(g, _)| g == f).map(|(_, e)| *e).unwrap_or(0)
        };
        let mut co_a = LaurentPoly::one();
        let mut co_b = LaurentPoly::one();
        for (f, e) in &lcm {
            let da = e - exp_in(a, f);
            let db = e - exp_in(b, f);
            if da > 0 {
                co_a = co_a.mul_ref(&f.pow(da));
            }
            if db > 0 {
                co_b = co_b.mul_ref(&f.pow(db));
            }
        }
        (lcm, co_a, co_b)
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let (den, co_a, co_b) = Self::common_den(&self.den, &other.den);
        RatExpr {
            num: self.num.mul_ref(&co_a).add_ref(&other.num.mul_ref(&co_b)),
            den,
        }
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    pub fn neg_ref(&self) -> Self {
        RatExpr {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut den = self.den.clone();
        for (f, e) in &other.den {
            match den.iter_mut().find(|(g, _)| g == f) {
                Some((_, ea)) => *ea += e,
                None => den.push((f.clone(), *e)),
            }
        }
        RatExpr {
            num: self.num.mul_ref(&other.num),
            den,
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        RatExpr {
            num: self.num.scale(c),
            den: if c.is_zero() { Vec::new() } else { self.den.clone() },
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut num = LaurentPoly::one();
        for (f, e) in &self.den {
            num = num.mul_ref(&f.pow(*e));
        }
        let mut out = RatExpr::from(num);
        out.push_factor(&self.num, 1)?;
        Ok(out)
    }

    pub fn div_ref(&self, other: &Self) -> Result<Self> {
        Ok(self.mul_ref(&other.inverse()?))
    }

    /// Integer power; negative exponents need a nonzero base.
    pub fn pow(&self, e: i32) -> Result<Self> {
        if e < 0 {
            return self.inverse()?.pow(-e);
        }
        let e = e as u32;
        Ok(RatExpr {
            num: self.num.pow(e),
            den: if e == 0 {
                Vec::new()
            } else {
                self.den.iter().map(|(f, k)| (f.clone(), k * e)).collect()
            },
        })
    }

    /// Applies a derivation `d` (acting on polynomials) through the quotient rule.
    ///
    /// For `n / Π f_i^{e_i}` the result is
    /// `(d(n)·Π f_i − n·Σ e_i d(f_i) Π_{j≠i} f_j) / Π f_i^{e_i+1}`.
    pub fn derive(&self, d: impl Fn(&LaurentPoly<C, V>) -> LaurentPoly<C, V>) -> Self {
        if self.den.is_empty() {
            return d(&self.num).into();
        }
        let n = self.den.len();
        let mut prod_all = LaurentPoly::one();
        for (f, _) in &self.den {
            prod_all = prod_all.mul_ref(f);
        }
        let mut num = d(&self.num).mul_ref(&prod_all);
        for i in 0..n {
            let (fi, ei) = &self.den[i];
            let dfi = d(fi);
            if dfi.is_zero() {
                continue;
            }
            let mut others = LaurentPoly::one();
            for (j, (fj, _)) in self.den.iter().enumerate() {
                if j != i {
                    others = others.mul_ref(fj);
                }
            }
            let term = self
                .num
                .mul_ref(&dfi)
                .mul_ref(&others)
                .scale(&C::from_int(*ei as i64));
            num = num.sub_ref(&term);
        }
        RatExpr {
            num,
            den: self.den.iter().map(|(f, e)| (f.clone(), e + 1)).collect(),
        }
    }

    /// Exact `κ` with `self = κ·other`, if one exists.
    pub fn proportionality_factor(&self, other: &Self) -> Option<C> {
        if other.is_zero() {
            return self.is_zero().then(C::zero);
        }
        if self.is_zero() {
            return Some(C::zero());
        }
        let (_, co_a, co_b) = Self::common_den(&self.den, &other.den);
        let x = self.num.mul_ref(&co_a);
        let y = other.num.mul_ref(&co_b);
        let (mx, cx) = &x.terms()[0];
        let (my, cy) = &y.terms()[0];
        if mx != my || x.len() != y.len() {
            return None;
        }
        let kappa = cx.clone() / cy.clone();
        (x == y.scale(&kappa)).then_some(kappa)
    }

    /// Exact equality as rational functions.
    pub fn equals(&self, other: &Self) -> bool {
        self.sub_ref(other).is_zero()
    }

    pub fn map_polys(
        &self,
        f: impl Fn(&LaurentPoly<C, V>) -> Result<LaurentPoly<C, V>>,
    ) -> Result<Self> {
        let mut out = RatExpr::from(f(&self.num)?);
        for (g, e) in &self.den {
            out.push_factor(&f(g)?, *e)?;
        }
        Ok(out)
    }
}

impl<C: Scalar, V: Variable> Add for RatExpr<C, V> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.add_ref(&rhs)
    }
}

impl<'a, C: Scalar, V: Variable> Add<&'a RatExpr<C, V>> for &'a RatExpr<C, V> {
    type Output = RatExpr<C, V>;
    fn add(self, rhs: Self) -> RatExpr<C, V> {
        self.add_ref(rhs)
    }
}

impl<C: Scalar, V: Variable> Sub for RatExpr<C, V> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.sub_ref(&rhs)
    }
}

impl<'a, C: Scalar, V: Variable> Sub<&'a RatExpr<C, V>> for &'a RatExpr<C, V> {
    type Output = RatExpr<C, V>;
    fn sub(self, rhs: Self) -> RatExpr<C, V> {
        self.sub_ref(rhs)
    }
}

impl<C: Scalar, V: Variable> Mul for RatExpr<C, V> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl<'a, C: Scalar, V: Variable> Mul<&'a RatExpr<C, V>> for &'a RatExpr<C, V> {
    type Output = RatExpr<C, V>;
    fn mul(self, rhs: Self) -> RatExpr<C, V> {
        self.mul_ref(rhs)
    }
}

impl<C: Scalar, V: Variable> Div for RatExpr<C, V> {
    type Output = Result<Self>;
    fn div(self, rhs: Self) -> Result<Self> {
        self.div_ref(&rhs)
    }
}

impl<C: Scalar, V: Variable> Neg for RatExpr<C, V> {
    type Output = Self;
    fn neg(self) -> Self {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int, Rat};

    type P = LaurentPoly<Rat>;
    type E = RatExpr<Rat>;

    fn v(c: JetCoord) -> P {
        P::var(c)
    }

    #[test]
    fn unnormalized_product_is_one() {
        let a = E::ratio(v(JetCoord::U1(1)), &v(JetCoord::U)).unwrap();
        let b = E::ratio(v(JetCoord::U), &v(JetCoord::U1(1))).unwrap();
        let prod = &a * &b;
        assert!(prod.sub_ref(&E::one()).is_zero());
    }

    #[test]
    fn self_difference_is_zero() {
        let x = v(JetCoord::X(1)) + v(JetCoord::U);
        let a = E::ratio(v(JetCoord::U2(1, 1)), &x).unwrap();
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn quotient_zero_test() {
        // (U·U_1 − U_1·U)/U^2
        let n = v(JetCoord::U) * v(JetCoord::U1(1)) - v(JetCoord::U1(1)) * v(JetCoord::U);
        let e = E::ratio(n, &v(JetCoord::U).pow(2)).unwrap();
        assert!(e.is_zero());
    }

    #[test]
    fn division_by_zero_numerator() {
        let zero = E::ratio(v(JetCoord::U) - v(JetCoord::U), &P::one()).unwrap();
        assert_eq!(E::one().div_ref(&zero), Err(Error::DivisionByZero));
        assert!(E::ratio(P::one(), &P::zero()).is_err());
    }

    #[test]
    fn monomial_denominators_fold_into_numerator() {
        let e = E::ratio(P::one(), &v(JetCoord::U).scale(&rat_int(4))).unwrap();
        assert!(e.den_factors().is_empty());
        assert_eq!(e.num(), &P::var_pow(JetCoord::U, -1).scale(&rat(1, 4)));
    }

    #[test]
    fn common_factors_are_shared() {
        let w = v(JetCoord::X(1)) + v(JetCoord::X(2));
        let a = E::ratio(P::one(), &w).unwrap();
        let b = E::ratio(v(JetCoord::U), &w.scale(&rat_int(3))).unwrap();
        let s = &a + &b;
        assert_eq!(s.den_factors().len(), 1);
        assert_eq!(s.den_factors()[0].1, 1);
    }

    #[test]
    fn derivation_quotient_rule() {
        // d/dx1 of 1/(x1 + x2)^2 = -2/(x1+x2)^3
        let w = v(JetCoord::X(1)) + v(JetCoord::X(2));
        let e = E::ratio(P::one(), &w).unwrap().pow(2).unwrap();
        let de = e.derive(|p| p.partial(JetCoord::X(1)));
        let expect = E::ratio(P::constant(rat_int(-2)), &w.pow(3)).unwrap();
        assert!(de.equals(&expect));
    }

    #[test]
    fn proportionality() {
        let w = v(JetCoord::X(1)) + v(JetCoord::U);
        let a = E::ratio(v(JetCoord::U1(0)), &w).unwrap();
        let b = a.scale(&rat(-7, 3));
        assert_eq!(b.proportionality_factor(&a), Some(rat(-7, 3)));
        assert_eq!(E::one().proportionality_factor(&a), None);
        assert_eq!(E::zero().proportionality_factor(&a), Some(rat_int(0)));
    }
}

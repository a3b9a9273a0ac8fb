use std::collections::{BTreeSet, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::jet::monomial::{canonical_cmp, Monomial};
use crate::jet::JetCoord;
use crate::scalar::{Scalar, Variable};
use crate::stats;

/// Sparse multivariate Laurent polynomial.
///
/// Terms are kept sorted by monomial with no zero coefficients, so structural
/// equality is polynomial equality and the zero polynomial has no terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly<C, V = JetCoord> {
    terms: Vec<(Monomial<V>, C)>,
}

impl<C: Scalar, V: Variable> Default for LaurentPoly<C, V> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Scalar, V: Variable> LaurentPoly<C, V> {
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn var(v: V) -> Self {
        Self::term(Monomial::var(v, 1), C::one())
    }

    pub fn var_pow(v: V, exp: i32) -> Self {
        Self::term(Monomial::var(v, exp), C::one())
    }

    pub fn term(m: Monomial<V>, c: C) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            LaurentPoly {
                terms: vec![(m, c)],
            }
        }
    }

    /// Collects arbitrary terms, combining equal monomials and pruning zeros.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial<V>, C)>) -> Self {
        let mut acc: HashMap<Monomial<V>, C> = HashMap::new();
        for (m, c) in terms {
            accumulate(&mut acc, m, c);
        }
        Self::from_map(acc)
    }

    fn from_map(acc: HashMap<Monomial<V>, C>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        stats::record_terms(terms.len());
        LaurentPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in storage order (sorted by monomial structure).
    pub fn terms(&self) -> &[(Monomial<V>, C)] {
        &self.terms
    }

    /// Terms in canonical print order.
    pub fn canonical_terms(&self) -> Vec<&(Monomial<V>, C)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| canonical_cmp(&a.0, &b.0));
        v
    }

    /// Constant value if the polynomial has no variable part.
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.as_slice() {
            [] => Some(C::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn as_monomial(&self) -> Option<(&Monomial<V>, &C)> {
        match self.terms.as_slice() {
            [(m, c)] => Some((m, c)),
            _ => None,
        }
    }

    pub fn coefficient(&self, m: &Monomial<V>) -> C {
        match self.terms.binary_search_by(|(w, _)| w.cmp(m)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => C::zero(),
        }
    }

    pub fn variables(&self) -> BTreeSet<V> {
        self.terms
            .iter()
            .flat_map(|(m, _)| m.factors().iter().map(|f| f.0))
            .collect()
    }

    pub fn contains(&self, v: V) -> bool {
        self.terms.iter().any(|(m, _)| m.exponent(v) != 0)
    }

    /// Minimum and maximum exponent of `v` over all terms.
    pub fn degree_range(&self, v: V) -> Option<(i32, i32)> {
        self.terms
            .iter()
            .map(|(m, _)| m.exponent(v))
            .fold(None, |acc, e| match acc {
                None => Some((e, e)),
                Some((lo, hi)) => Some((lo.min(e), hi.max(e))),
            })
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial<V>, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut terms: Vec<_> = self
            .terms
            .iter()
            .map(|(w, a)| (w.mul(m), a.clone() * c.clone()))
            .collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        LaurentPoly { terms }
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        self.merge(other, false)
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.merge(other, true)
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let neg = |c: &C| if negate { -c.clone() } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((b[j].0.clone(), neg(&b[j].1)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = a[i].1.clone() + neg(&b[j].1);
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), neg(c))));
        stats::record_terms(out.len());
        LaurentPoly { terms: out }
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let Some((m, c)) = other.as_monomial() {
            return self.mul_monomial(m, c);
        }
        if let Some((m, c)) = self.as_monomial() {
            return other.mul_monomial(m, c);
        }
        let mut acc: HashMap<Monomial<V>, C> =
            HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                accumulate(&mut acc, ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        Self::from_map(acc)
    }

    /// Non-negative integer power by repeated squaring.
    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        result
    }

    /// Formal partial derivative, all variables independent.
    pub fn partial(&self, v: V) -> Self {
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e != 0 {
                terms.push((m.with_exponent(v, e - 1), c.clone() * C::from_int(e as i64)));
            }
        }
        // Lowering one exponent can reorder monomials.
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        LaurentPoly { terms }
    }

    /// Replaces `v` by `value`; negative powers of `v` need a monomial `value`.
    pub fn substitute(&self, v: V, value: &Self) -> Result<Self> {
        if !self.contains(v) {
            return Ok(self.clone());
        }
        let inverse = value.as_monomial().map(|(m, c)| Self::term(m.inverse(), C::one() / c.clone()));
        let mut powers: HashMap<i32, Self> = HashMap::new();
        let mut acc: HashMap<Monomial<V>, C> = HashMap::new();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            let rest = m.without(v);
            let p = match powers.get(&e) {
                Some(p) => p.clone(),
                None => {
                    let p = if e >= 0 {
                        value.pow(e as u32)
                    } else {
                        inverse
                            .as_ref()
                            .ok_or_else(|| Error::Pole(format!("{v:?}")))?
                            .pow((-e) as u32)
                    };
                    powers.insert(e, p.clone());
                    p
                }
            };
            for (pm, pc) in p.terms() {
                accumulate(&mut acc, rest.mul(pm), c.clone() * pc.clone());
            }
        }
        Ok(Self::from_map(acc))
    }

    /// Substitutes every variable at once, possibly changing the variable type.
    pub fn compose<W: Variable>(
        &self,
        image: impl Fn(V) -> LaurentPoly<C, W>,
    ) -> Result<LaurentPoly<C, W>> {
        let mut cache: HashMap<(V, i32), LaurentPoly<C, W>> = HashMap::new();
        let mut acc = LaurentPoly::<C, W>::zero();
        for (m, c) in &self.terms {
            let mut t = LaurentPoly::<C, W>::constant(c.clone());
            for &(v, e) in m.factors() {
                let p = match cache.get(&(v, e)) {
                    Some(p) => p.clone(),
                    None => {
                        let base = image(v);
                        let p = if e >= 0 {
                            base.pow(e as u32)
                        } else {
                            let (bm, bc) = base
                                .as_monomial()
                                .ok_or_else(|| Error::Pole(format!("{v:?}")))?;
                            LaurentPoly::term(bm.inverse(), C::one() / bc.clone()).pow((-e) as u32)
                        };
                        cache.insert((v, e), p.clone());
                        p
                    }
                };
                t = t.mul_ref(&p);
            }
            acc = acc.add_ref(&t);
        }
        Ok(acc)
    }

    /// Terms whose exponent of `v` equals `exp`, with `v` removed.
    pub fn coefficient_of(&self, v: V, exp: i32) -> Self {
        let mut terms: Vec<_> = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponent(v) == exp)
            .map(|(m, c)| (m.without(v), c.clone()))
            .collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        LaurentPoly { terms }
    }

    pub fn map_coefficients(&self, f: impl Fn(&C) -> C) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Monomial with componentwise-minimal exponents over all terms.
    pub fn monomial_content(&self) -> Monomial<V> {
        let mut it = self.terms.iter();
        let first = match it.next() {
            Some((m, _)) => m.clone(),
            None => return Monomial::one(),
        };
        it.fold(first, |acc, (m, _)| acc.gcd_exponents(m))
    }

    pub fn max_term_count(polys: &[&Self]) -> usize {
        polys.iter().map(|p| p.len()).max().unwrap_or(0)
    }
}

fn accumulate<C: Scalar, V: Variable>(acc: &mut HashMap<Monomial<V>, C>, m: Monomial<V>, c: C) {
    match acc.get_mut(&m) {
        Some(slot) => *slot = slot.clone() + c,
        None => {
            acc.insert(m, c);
        }
    }
}

impl<C: Scalar, V: Variable> Add for LaurentPoly<C, V> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.add_ref(&rhs)
    }
}

impl<'a, C: Scalar, V: Variable> Add<&'a LaurentPoly<C, V>> for &'a LaurentPoly<C, V> {
    type Output = LaurentPoly<C, V>;
    fn add(self, rhs: Self) -> LaurentPoly<C, V> {
        self.add_ref(rhs)
    }
}

impl<C: Scalar, V: Variable> Sub for LaurentPoly<C, V> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.sub_ref(&rhs)
    }
}

impl<'a, C: Scalar, V: Variable> Sub<&'a LaurentPoly<C, V>> for &'a LaurentPoly<C, V> {
    type Output = LaurentPoly<C, V>;
    fn sub(self, rhs: Self) -> LaurentPoly<C, V> {
        self.sub_ref(rhs)
    }
}

impl<C: Scalar, V: Variable> Mul for LaurentPoly<C, V> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl<'a, C: Scalar, V: Variable> Mul<&'a LaurentPoly<C, V>> for &'a LaurentPoly<C, V> {
    type Output = LaurentPoly<C, V>;
    fn mul(self, rhs: Self) -> LaurentPoly<C, V> {
        self.mul_ref(rhs)
    }
}

impl<C: Scalar, V: Variable> Neg for LaurentPoly<C, V> {
    type Output = Self;
    fn neg(self) -> Self {
        LaurentPoly {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl<C: Scalar, V: Variable> Neg for &LaurentPoly<C, V> {
    type Output = LaurentPoly<C, V>;
    fn neg(self) -> LaurentPoly<C, V> {
        -(self.clone())
    }
}

impl<C: Scalar, V: Variable> std::iter::Sum for LaurentPoly<C, V> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        let mut acc: HashMap<Monomial<V>, C> = HashMap::new();
        for p in iter {
            for (m, c) in p.terms {
                accumulate(&mut acc, m, c);
            }
        }
        Self::from_map(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int, Rat};

    type P = LaurentPoly<Rat>;

    fn x(i: u8) -> P {
        P::var(JetCoord::X(i))
    }
    fn u() -> P {
        P::var(JetCoord::U)
    }

    #[test]
    fn difference_of_squares() {
        let lhs = (x(1) + u()) * (x(1) - u());
        let rhs = x(1).pow(2) - u().pow(2);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn additive_identity_and_laurent_cancel() {
        let p = x(1) * u() + P::constant(rat(3, 2));
        assert_eq!(p.clone() + P::zero(), p);
        assert_eq!(P::var_pow(JetCoord::U, -1) * u(), P::one());
    }

    #[test]
    fn partials() {
        let u11 = P::var(JetCoord::U2(1, 1));
        let e = &u11 * &P::var_pow(JetCoord::U, -1);
        let expect = -(u11 * P::var_pow(JetCoord::U, -2));
        assert_eq!(e.partial(JetCoord::U), expect);
        assert!(P::var(JetCoord::U1(1)).partial(JetCoord::X(2)).is_zero());
        let e = P::var(JetCoord::U2(0, 1)).scale(&rat_int(2)) * x(2);
        assert_eq!(e.partial(JetCoord::U2(0, 1)), x(2).scale(&rat_int(2)));
    }

    #[test]
    fn substitute_t_zero() {
        let t = P::var(JetCoord::T);
        let p = t.pow(2) * x(1) + &t * &x(2) + x(3);
        assert_eq!(p.substitute(JetCoord::T, &P::zero()).unwrap(), x(3));
        let pole = P::var_pow(JetCoord::U, -1);
        assert!(matches!(
            pole.substitute(JetCoord::U, &P::zero()),
            Err(Error::Pole(_))
        ));
        // invertible monomial into a negative power is fine
        let two_x = x(1).scale(&rat_int(2));
        assert_eq!(
            pole.substitute(JetCoord::U, &two_x).unwrap(),
            P::var_pow(JetCoord::X(1), -1).scale(&rat(1, 2))
        );
    }

    #[test]
    fn coefficient_extraction() {
        let t = P::var(JetCoord::T);
        let p = t.pow(2) * x(1) + t.clone() * x(2).scale(&rat_int(5)) + x(3);
        assert_eq!(p.coefficient_of(JetCoord::T, 1), x(2).scale(&rat_int(5)));
        assert_eq!(p.degree_range(JetCoord::T), Some((0, 2)));
        assert!(p.coefficient_of(JetCoord::T, 7).is_zero());
    }

    #[test]
    fn compose_changes_variables() {
        let p = x(1).pow(2) - P::var_pow(JetCoord::U, -1);
        let q = p
            .compose(|v| match v {
                JetCoord::X(1) => u() + P::one(),
                other => P::var(other).scale(&rat_int(2)),
            })
            .unwrap();
        let expect = (u() + P::one()).pow(2) - P::var_pow(JetCoord::U, -1).scale(&rat(1, 2));
        assert_eq!(q, expect);
    }
}

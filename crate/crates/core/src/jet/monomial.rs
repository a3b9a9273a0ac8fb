use std::cmp::Ordering;

use smallvec::SmallVec;

use crate::scalar::Variable;

/// Sparse Laurent monomial: sorted `(variable, exponent)` pairs, no zero exponents.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial<V> {
    factors: SmallVec<[(V, i32); 6]>,
}

impl<V: Variable> Default for Monomial<V> {
    fn default() -> Self {
        Self::one()
    }
}

impl<V: Variable> Monomial<V> {
    pub fn one() -> Self {
        Monomial {
            factors: SmallVec::new(),
        }
    }

    pub fn var(v: V, exp: i32) -> Self {
        let mut factors = SmallVec::new();
        if exp != 0 {
            factors.push((v, exp));
        }
        Monomial { factors }
    }

    /// Builds from arbitrary pairs, merging repeats and dropping zero exponents.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (V, i32)>) -> Self {
        let mut v: SmallVec<[(V, i32); 6]> = pairs.into_iter().collect();
        v.sort_by_key(|a| a.0);
        let mut out: SmallVec<[(V, i32); 6]> = SmallVec::new();
        for (var, e) in v {
            match out.last_mut() {
                Some((last, acc)) if *last == var => *acc += e,
                _ => out.push((var, e)),
            }
        }
        out.retain(|(_, e)| *e != 0);
        Monomial { factors: out }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(V, i32)] {
        &self.factors
    }

    pub fn exponent(&self, v: V) -> i32 {
        match self.factors.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(i) => self.factors[i].1,
            Err(_) => 0,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = (&self.factors, &other.factors);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial { factors: out }
    }

    pub fn inverse(&self) -> Self {
        Monomial {
            factors: self.factors.iter().map(|&(v, e)| (v, -e)).collect(),
        }
    }

    pub fn pow(&self, n: i32) -> Self {
        if n == 0 {
            return Self::one();
        }
        Monomial {
            factors: self.factors.iter().map(|&(v, e)| (v, e * n)).collect(),
        }
    }

    /// Copy with the exponent of `v` replaced by `exp`.
    pub fn with_exponent(&self, v: V, exp: i32) -> Self {
        let mut factors = self.factors.clone();
        match factors.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(i) if exp == 0 => {
                factors.remove(i);
            }
            Ok(i) => factors[i].1 = exp,
            Err(_) if exp == 0 => {}
            Err(i) => factors.insert(i, (v, exp)),
        }
        Monomial { factors }
    }

    pub fn without(&self, v: V) -> Self {
        self.with_exponent(v, 0)
    }

    pub fn total_degree(&self) -> i64 {
        self.factors.iter().map(|&(_, e)| e as i64).sum()
    }

    pub fn grade(&self) -> i64 {
        self.factors.iter().map(|(v, e)| v.grade() * *e as i64).sum()
    }

    pub fn has_negative_exponent(&self) -> bool {
        self.factors.iter().any(|&(_, e)| e < 0)
    }

    /// Splits into the positive and (inverted) negative parts.
    pub fn split_signs(&self) -> (Self, Self) {
        let pos = self.factors.iter().filter(|f| f.1 > 0).copied().collect();
        let neg = self
            .factors
            .iter()
            .filter(|f| f.1 < 0)
            .map(|&(v, e)| (v, -e))
            .collect();
        (Monomial { factors: pos }, Monomial { factors: neg })
    }

    /// Componentwise minimum of exponents (treating absent as zero).
    pub fn gcd_exponents(&self, other: &Self) -> Self {
        let mut vars: Vec<V> = self
            .factors
            .iter()
            .chain(other.factors.iter())
            .map(|f| f.0)
            .collect();
        vars.sort();
        vars.dedup();
        Monomial::from_pairs(
            vars.into_iter()
                .map(|v| (v, self.exponent(v).min(other.exponent(v)))),
        )
    }
}

/// Canonical print order: ascending grade, then reverse-lexicographic
/// (the largest variable decides, smaller exponent first).
pub fn canonical_cmp<V: Variable>(a: &Monomial<V>, b: &Monomial<V>) -> Ordering {
    a.grade().cmp(&b.grade()).then_with(|| {
        let (fa, fb) = (a.factors(), b.factors());
        let (mut i, mut j) = (fa.len(), fb.len());
        loop {
            match (i, j) {
                (0, 0) => return Ordering::Equal,
                (0, _) => {
                    j -= 1;
                    return 0.cmp(&fb[j].1);
                }
                (_, 0) => {
                    i -= 1;
                    return fa[i].1.cmp(&0);
                }
                _ => {
                    let (va, ea) = fa[i - 1];
                    let (vb, eb) = fb[j - 1];
                    match va.cmp(&vb) {
                        Ordering::Equal => {
                            if ea != eb {
                                return ea.cmp(&eb);
                            }
                            i -= 1;
                            j -= 1;
                        }
                        Ordering::Greater => return ea.cmp(&0),
                        Ordering::Less => return 0.cmp(&eb),
                    }
                }
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::JetCoord;

    #[test]
    fn mul_cancels() {
        let a = Monomial::var(JetCoord::U, -1);
        let b = Monomial::var(JetCoord::U, 1);
        assert!(a.mul(&b).is_one());
    }

    #[test]
    fn from_pairs_merges() {
        let m = Monomial::from_pairs([(JetCoord::U, 2), (JetCoord::X(1), 1), (JetCoord::U, -2)]);
        assert_eq!(m, Monomial::var(JetCoord::X(1), 1));
    }

    #[test]
    fn canonical_order_example() {
        // u_0/u < x2*u_1/u < u_22/u
        let a = Monomial::from_pairs([(JetCoord::U1(0), 1), (JetCoord::U, -1)]);
        let b = Monomial::from_pairs([(JetCoord::X(2), 1), (JetCoord::U1(1), 1), (JetCoord::U, -1)]);
        let c = Monomial::from_pairs([(JetCoord::U2(2, 2), 1), (JetCoord::U, -1)]);
        assert_eq!(canonical_cmp(&a, &b), Ordering::Less);
        assert_eq!(canonical_cmp(&b, &c), Ordering::Less);
        assert_eq!(canonical_cmp(&a, &c), Ordering::Less);
        assert_eq!(canonical_cmp(&c, &c), Ordering::Equal);
    }
}

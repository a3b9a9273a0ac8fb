//! First-order vector fields on `(t, x_k, U)` and their second-order prolongation.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::jet::{JetCoord, LaurentPoly, RatExpr};
use crate::scalar::Scalar;

/// `X = Σ ξ^μ ∂_{x_μ} + η ∂_U` with coefficients polynomial in `x_μ, U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField<C> {
    k: u8,
    xi: Vec<LaurentPoly<C>>,
    eta: LaurentPoly<C>,
}

impl<C: Scalar> VectorField<C> {
    /// Zero field on the jet space with `K = k` spatial variables.
    pub fn zero(k: u8) -> Self {
        VectorField {
            k,
            xi: vec![LaurentPoly::zero(); k as usize + 1],
            eta: LaurentPoly::zero(),
        }
    }

    /// Panics if a coefficient involves derivative coordinates.
    pub fn new(k: u8, xi: Vec<LaurentPoly<C>>, eta: LaurentPoly<C>) -> Self {
        assert_eq!(xi.len(), k as usize + 1, "need one xi per x_0..x_K");
        let f = VectorField { k, xi, eta };
        assert!(f.is_point_field(), "vector field coefficients must not contain U_mu, U_mu_nu");
        f
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn xi(&self, mu: u8) -> &LaurentPoly<C> {
        &self.xi[mu as usize]
    }

    pub fn xis(&self) -> &[LaurentPoly<C>] {
        &self.xi
    }

    pub fn eta(&self) -> &LaurentPoly<C> {
        &self.eta
    }

    pub fn set_xi(&mut self, mu: u8, p: LaurentPoly<C>) {
        self.xi[mu as usize] = p;
    }

    pub fn set_eta(&mut self, p: LaurentPoly<C>) {
        self.eta = p;
    }

    pub fn is_zero(&self) -> bool {
        self.eta.is_zero() && self.xi.iter().all(|p| p.is_zero())
    }

    fn is_point_field(&self) -> bool {
        self.xi
            .iter()
            .chain(std::iter::once(&self.eta))
            .all(|p| p.variables().iter().all(|c| !c.is_derivative()))
    }

    /// Components in the order `ξ^0 … ξ^K, η`.
    pub fn components(&self) -> impl Iterator<Item = &LaurentPoly<C>> {
        self.xi.iter().chain(std::iter::once(&self.eta))
    }

    /// Action on a function of `(x_μ, U)`.
    pub fn apply_poly(&self, p: &LaurentPoly<C>) -> LaurentPoly<C> {
        let vars = p.variables();
        let mut parts = Vec::new();
        for (mu, coef) in self.xi.iter().enumerate() {
            let c = JetCoord::X(mu as u8);
            if !coef.is_zero() && vars.contains(&c) {
                parts.push(coef.mul_ref(&p.partial(c)));
            }
        }
        if !self.eta.is_zero() && vars.contains(&JetCoord::U) {
            parts.push(self.eta.mul_ref(&p.partial(JetCoord::U)));
        }
        parts.into_iter().sum()
    }

    /// Commutator `[X, Y] = XY − YX`, coefficientwise `X(Y^i) − Y(X^i)`.
    pub fn bracket(&self, other: &Self) -> Self {
        assert_eq!(self.k, other.k, "fields live on different jet spaces");
        let comp = |a: &LaurentPoly<C>, b: &LaurentPoly<C>| {
            self.apply_poly(b).sub_ref(&other.apply_poly(a))
        };
        VectorField {
            k: self.k,
            xi: self
                .xi
                .iter()
                .zip(&other.xi)
                .map(|(a, b)| comp(a, b))
                .collect(),
            eta: comp(&self.eta, &other.eta),
        }
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.add_ref(b))
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.sub_ref(b))
    }

    pub fn scale(&self, c: &C) -> Self {
        VectorField {
            k: self.k,
            xi: self.xi.iter().map(|p| p.scale(c)).collect(),
            eta: self.eta.scale(c),
        }
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(&LaurentPoly<C>, &LaurentPoly<C>) -> LaurentPoly<C>,
    ) -> Self {
        assert_eq!(self.k, other.k);
        VectorField {
            k: self.k,
            xi: self.xi.iter().zip(&other.xi).map(|(a, b)| f(a, b)).collect(),
            eta: f(&self.eta, &other.eta),
        }
    }
}

/// Differential operator on second-order jet space: one coefficient per coordinate.
///
/// Values produced by [`prolong2`] are second-order prolongations of their
/// base field. Linear combinations with function coefficients (such as the
/// reduced operator `C̃`) are general operators and carry no such guarantee.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProlongedField<C> {
    k: u8,
    coeffs: BTreeMap<JetCoord, LaurentPoly<C>>,
}

impl<C: Scalar> ProlongedField<C> {
    pub fn zero(k: u8) -> Self {
        ProlongedField {
            k,
            coeffs: BTreeMap::new(),
        }
    }

    /// Operator with the given coefficients; zero entries are dropped.
    pub fn from_coeffs(k: u8, coeffs: impl IntoIterator<Item = (JetCoord, LaurentPoly<C>)>) -> Self {
        let mut out = Self::zero(k);
        for (c, p) in coeffs {
            out.set(c, p);
        }
        out
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    /// Coefficient of `∂/∂c`.
    pub fn coeff(&self, c: JetCoord) -> LaurentPoly<C> {
        self.coeffs.get(&c).cloned().unwrap_or_else(LaurentPoly::zero)
    }

    pub fn coeffs(&self) -> &BTreeMap<JetCoord, LaurentPoly<C>> {
        &self.coeffs
    }

    pub fn set(&mut self, c: JetCoord, p: LaurentPoly<C>) {
        assert!(
            c.max_index().is_none_or(|i| i <= self.k),
            "coordinate {c:?} outside jet space"
        );
        if p.is_zero() {
            self.coeffs.remove(&c);
        } else {
            self.coeffs.insert(c, p);
        }
    }

    pub fn rho(&self, mu: u8) -> LaurentPoly<C> {
        self.coeff(JetCoord::U1(mu))
    }

    pub fn sigma(&self, mu: u8, nu: u8) -> LaurentPoly<C> {
        self.coeff(JetCoord::u2(mu, nu))
    }

    /// The first-order part `(ξ, η)`.
    pub fn base(&self) -> VectorField<C> {
        let mut f = VectorField::zero(self.k);
        for mu in 0..=self.k {
            f.set_xi(mu, self.coeff(JetCoord::X(mu)));
        }
        f.set_eta(self.coeff(JetCoord::U));
        f
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Whether this operator is exactly the prolongation of its first-order part.
    pub fn is_prolongation(&self) -> bool {
        let base = self.base();
        base.is_point_field() && prolong2(&base) == *self
    }

    /// `Σ_c coef_c ∂p/∂c` over every jet coordinate.
    pub fn apply_poly(&self, p: &LaurentPoly<C>) -> LaurentPoly<C> {
        let parts: Vec<LaurentPoly<C>> = p
            .variables()
            .into_iter()
            .filter_map(|v| self.coeffs.get(&v).map(|coef| coef.mul_ref(&p.partial(v))))
            .collect();
        parts.into_iter().sum()
    }

    /// Action on a rational expression via the quotient rule.
    pub fn apply(&self, e: &RatExpr<C>) -> RatExpr<C> {
        e.derive(|p| self.apply_poly(p))
    }

    /// Every coefficient with `t` set to zero.
    pub fn restrict_t0(&self) -> Self {
        let zero = LaurentPoly::zero();
        self.map(|p| {
            p.substitute(JetCoord::T, &zero)
                .expect("operator coefficients are polynomial in t")
        })
    }

    /// Coefficient operator of `t^a`.
    pub fn taylor_coefficient_t(&self, a: u32) -> Self {
        self.map(|p| p.coefficient_of(JetCoord::T, a as i32))
    }

    /// Highest power of `t` in any coefficient.
    pub fn t_degree(&self) -> u32 {
        self.coeffs
            .values()
            .filter_map(|p| p.degree_range(JetCoord::T))
            .map(|(_, hi)| hi.max(0) as u32)
            .max()
            .unwrap_or(0)
    }

    pub fn map(&self, f: impl Fn(&LaurentPoly<C>) -> LaurentPoly<C>) -> Self {
        Self::from_coeffs(self.k, self.coeffs.iter().map(|(c, p)| (*c, f(p))))
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        assert_eq!(self.k, other.k);
        let mut out = self.clone();
        for (c, p) in &other.coeffs {
            let sum = out.coeff(*c).add_ref(p);
            out.set(*c, sum);
        }
        out
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.scale(&-C::one()))
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map(|p| p.scale(c))
    }

    /// Multiplication by a function: `(f·X)(F) = f·X(F)`.
    pub fn mul_poly(&self, f: &LaurentPoly<C>) -> Self {
        self.map(|p| p.mul_ref(f))
    }

    /// Apply many operators to many expressions; returns `out[i][j] = fields[i](exprs[j])`.
    pub fn apply_batch(fields: &[Self], exprs: &[RatExpr<C>], parallel: bool) -> Vec<Vec<RatExpr<C>>> {
        let pairs: Vec<(usize, usize)> = (0..fields.len())
            .flat_map(|i| (0..exprs.len()).map(move |j| (i, j)))
            .collect();
        let run = |&(i, j): &(usize, usize)| fields[i].apply(&exprs[j]);
        let flat: Vec<RatExpr<C>> = if parallel {
            pairs.par_iter().map(run).collect()
        } else {
            pairs.iter().map(run).collect()
        };
        let mut it = flat.into_iter();
        (0..fields.len())
            .map(|_| (0..exprs.len()).map(|_| it.next().unwrap()).collect())
            .collect()
    }
}

fn dx<C: Scalar>(p: &LaurentPoly<C>, mu: u8) -> LaurentPoly<C> {
    p.partial(JetCoord::X(mu))
}

fn du<C: Scalar>(p: &LaurentPoly<C>) -> LaurentPoly<C> {
    p.partial(JetCoord::U)
}

fn u1<C: Scalar>(mu: u8) -> LaurentPoly<C> {
    LaurentPoly::var(JetCoord::U1(mu))
}

fn u2<C: Scalar>(mu: u8, nu: u8) -> LaurentPoly<C> {
    LaurentPoly::var(JetCoord::u2(mu, nu))
}

/// `ρ^μ = η_μ + η_U U_μ − Σ_ν U_ν (ξ^ν_μ + ξ^ν_U U_μ)`.
pub fn rho<C: Scalar>(x: &VectorField<C>, mu: u8) -> LaurentPoly<C> {
    let eta = x.eta();
    let mut acc = dx(eta, mu).add_ref(&du(eta).mul_ref(&u1(mu)));
    for nu in 0..=x.k() {
        let xi = x.xi(nu);
        if xi.is_zero() {
            continue;
        }
        let inner = dx(xi, mu).add_ref(&du(xi).mul_ref(&u1(mu)));
        acc = acc.sub_ref(&u1(nu).mul_ref(&inner));
    }
    acc
}

/// The five pieces of `σ^{μν}`: the `η` part followed by the four `τ`-sums.
pub fn sigma_groups<C: Scalar>(x: &VectorField<C>, mu: u8, nu: u8) -> [LaurentPoly<C>; 5] {
    let eta = x.eta();
    let (um, un, umn) = (u1::<C>(mu), u1::<C>(nu), u2::<C>(mu, nu));
    let eta_u = du(eta);
    let eta_part = dx(&dx(eta, mu), nu)
        .add_ref(&du(&dx(eta, mu)).mul_ref(&un))
        .add_ref(&du(&dx(eta, nu)).mul_ref(&um))
        .add_ref(&eta_u.mul_ref(&umn))
        .add_ref(&du(&eta_u).mul_ref(&um).mul_ref(&un));

    let mut second_x = Vec::new();
    let mut first_x = Vec::new();
    let mut first_u = Vec::new();
    let mut mixed = Vec::new();
    for tau in 0..=x.k() {
        let xi = x.xi(tau);
        if xi.is_zero() {
            continue;
        }
        let ut = u1::<C>(tau);
        // Σ ξ^τ_{μν} U_τ
        second_x.push(dx(&dx(xi, mu), nu).mul_ref(&ut));
        // Σ (ξ^τ_μ U_{ντ} + ξ^τ_ν U_{μτ})
        first_x.push(
            dx(xi, mu)
                .mul_ref(&u2(nu, tau))
                .add_ref(&dx(xi, nu).mul_ref(&u2(mu, tau))),
        );
        // Σ ξ^τ_U (U_τ U_{μν} + U_μ U_{ντ} + U_ν U_{μτ})
        let xi_u = du(xi);
        first_u.push(
            xi_u.mul_ref(
                &ut.mul_ref(&umn)
                    .add_ref(&um.mul_ref(&u2(nu, tau)))
                    .add_ref(&un.mul_ref(&u2(mu, tau))),
            ),
        );
        // Σ (ξ^τ_{μU} U_ν + ξ^τ_{νU} U_μ + ξ^τ_{UU} U_μ U_ν) U_τ
        mixed.push(
            du(&dx(xi, mu))
                .mul_ref(&un)
                .add_ref(&du(&dx(xi, nu)).mul_ref(&um))
                .add_ref(&du(&xi_u).mul_ref(&um).mul_ref(&un))
                .mul_ref(&ut),
        );
    }
    let neg_sum = |v: Vec<LaurentPoly<C>>| -v.into_iter().sum::<LaurentPoly<C>>();
    [
        eta_part,
        neg_sum(second_x),
        neg_sum(first_x),
        neg_sum(first_u),
        neg_sum(mixed),
    ]
}

pub fn sigma<C: Scalar>(x: &VectorField<C>, mu: u8, nu: u8) -> LaurentPoly<C> {
    sigma_groups(x, mu, nu).into_iter().sum()
}

/// Second-order prolongation `X̂ = X + Σ ρ^μ ∂_{U_μ} + Σ_{μ≤ν} σ^{μν} ∂_{U_{μν}}`.
pub fn prolong2<C: Scalar>(x: &VectorField<C>) -> ProlongedField<C> {
    let k = x.k();
    let mut out = ProlongedField::zero(k);
    for mu in 0..=k {
        out.set(JetCoord::X(mu), x.xi(mu).clone());
    }
    out.set(JetCoord::U, x.eta().clone());
    for mu in 0..=k {
        out.set(JetCoord::U1(mu), rho(x, mu));
    }
    for mu in 0..=k {
        for nu in mu..=k {
            out.set(JetCoord::U2(mu, nu), sigma(x, mu, nu));
        }
    }
    out
}

//! The generator realization of the algebra and verification of its commutation table.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{b_ell, binomial, lambda_k, rat, rat_int, rat_text, structure_constant_i, HalfInt, Rat};
use crate::error::{Error, Result};
use crate::expr_io::{render_field, Format};
use crate::jet::{Jet, JetCoord, Monomial};
use crate::linalg::solve_sparse;
use crate::prolong::prolong2;
use crate::report::{Check, Status};
use crate::{Field, Poly, Prolonged};

/// Name of a basis element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GenName {
    M,
    D,
    H,
    C,
    P(u32),
}

impl fmt::Display for GenName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenName::M => f.write_str("M"),
            GenName::D => f.write_str("D"),
            GenName::H => f.write_str("H"),
            GenName::C => f.write_str("C"),
            GenName::P(n) => write!(f, "P{n}"),
        }
    }
}

impl FromStr for GenName {
    type Err = Error;

    /// Accepts `M`, `D`, `H`, `C`, `P3`, `P(3)` and `P^(3)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "M" => return Ok(GenName::M),
            "D" => return Ok(GenName::D),
            "H" => return Ok(GenName::H),
            "C" => return Ok(GenName::C),
            _ => {}
        }
        let idx = s
            .strip_prefix("P^(")
            .or_else(|| s.strip_prefix("P("))
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| s.strip_prefix('P'))
            .ok_or_else(|| Error::UnknownGenerator(s.to_string()))?;
        idx.parse::<u32>()
            .ok()
            .filter(|&n| n >= 1)
            .map(GenName::P)
            .ok_or_else(|| Error::UnknownGenerator(s.to_string()))
    }
}

impl Serialize for GenName {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GenName {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Rational linear combination of basis elements.
pub type Combination = Vec<(Rat, GenName)>;

/// Renders `2*H - 1/3*P2`; the empty combination is `0`.
pub fn combination_text(c: &[(Rat, GenName)]) -> String {
    let mut out = String::new();
    for (coef, name) in c {
        let neg = coef.is_negative();
        let mag = coef.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !mag.is_one() {
            out.push_str(&rat_text(&mag));
            out.push('*');
        }
        out.push_str(&name.to_string());
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// All `2ℓ+5` generators of the realization, with cached prolongations.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    ell: HalfInt,
    names: Vec<GenName>,
    fields: Vec<Field>,
    prolonged: Vec<Prolonged>,
}

/// Builds the realization on functions of `t, x_1 … x_K, U`.
pub fn build_generators(ell: HalfInt) -> GeneratorSet {
    let jet = Jet::new(ell);
    let k = jet.k();
    let kk = k as i64;
    let twice = ell.twice() as i64;
    let t = jet.t();
    let u = jet.u();
    // 2(ℓ+1−k) = 2ℓ + 2 − 2k
    let dil = |i: u8| rat_int(twice + 2 - 2 * i as i64);

    let mut m = Field::zero(k);
    m.set_eta(u.clone());

    let mut h = Field::zero(k);
    h.set_xi(0, Poly::one());

    let mut d = Field::zero(k);
    d.set_xi(0, t.scale(&rat_int(2)));
    for i in 1..=k {
        d.set_xi(i, jet.x(i).scale(&dil(i)));
    }

    let mut c = Field::zero(k);
    c.set_xi(0, t.pow(2));
    for i in 1..=k {
        let mut xi = t.mul_ref(&jet.x(i)).scale(&dil(i));
        if i >= 2 {
            let lam = lambda_k(i as i64 - 1, ell).expect("index in range");
            xi = xi.add_ref(&jet.x(i - 1).scale(&lam));
        }
        c.set_xi(i, xi);
    }
    let half_b = b_ell(ell) * rat(1, 2);
    c.set_eta(-jet.x(k).pow(2).mul_ref(&u).scale(&half_b));

    let mut names = vec![GenName::M, GenName::D, GenName::H, GenName::C];
    let mut fields = vec![m, d, h, c];
    for n in 1..=(twice + 1) {
        let mut p = Field::zero(k);
        for i in 1..=n.min(kk) {
            let coef = Rat::from_integer(binomial(n as u32 - 1, i - 1));
            p.set_xi(i as u8, t.pow((n - i) as u32).scale(&coef));
        }
        if n > kk {
            let mut eta = Poly::zero();
            for i in (kk + 1)..=n {
                let coef = Rat::from_integer(binomial(n as u32 - 1, i - 1))
                    * structure_constant_i(i - 1, ell).expect("index in range");
                let x = jet.x((twice + 2 - i) as u8);
                eta = eta.add_ref(&t.pow((n - i) as u32).mul_ref(&x).scale(&coef));
            }
            p.set_eta(-eta.mul_ref(&u));
        }
        names.push(GenName::P(n as u32));
        fields.push(p);
    }
    let prolonged = fields.iter().map(prolong2).collect();
    GeneratorSet {
        ell,
        names,
        fields,
        prolonged,
    }
}

impl GeneratorSet {
    pub fn ell(&self) -> HalfInt {
        self.ell
    }

    pub fn jet(&self) -> Jet {
        Jet::new(self.ell)
    }

    /// Names in the order `M, D, H, C, P1 … P_{2ℓ+1}`.
    pub fn names(&self) -> &[GenName] {
        &self.names
    }

    pub fn fields(&self) -> &[Field] {
        &self.fields
    }

    pub fn prolonged_all(&self) -> &[Prolonged] {
        &self.prolonged
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    fn index(&self, name: GenName) -> Result<usize> {
        self.names
            .iter()
            .position(|&n| n == name)
            .ok_or_else(|| Error::UnknownGenerator(format!("{name} (ℓ = {})", self.ell)))
    }

    pub fn get(&self, name: GenName) -> Result<&Field> {
        Ok(&self.fields[self.index(name)?])
    }

    pub fn prolonged(&self, name: GenName) -> Result<&Prolonged> {
        Ok(&self.prolonged[self.index(name)?])
    }

    /// `P̃^(n)`: the prolonged `P^(n)` at `t = 0`.
    pub fn tilde_p(&self, n: u32) -> Result<Prolonged> {
        Ok(self.prolonged(GenName::P(n))?.restrict_t0())
    }

    /// Writes `field` in the generator basis, if it lies in the rational span.
    pub fn decompose(&self, field: &Field) -> Option<Combination> {
        let cols: Vec<_> = self.fields.iter().map(field_vector).collect();
        let x = solve_sparse(&cols, &field_vector(field))?;
        Some(
            x.into_iter()
                .zip(&self.names)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, &n)| (c, n))
                .collect(),
        )
    }

    /// The field of a combination.
    pub fn combine(&self, c: &[(Rat, GenName)]) -> Result<Field> {
        let mut out = Field::zero(self.jet().k());
        for (coef, name) in c {
            out = out.add_ref(&self.get(*name)?.scale(coef));
        }
        Ok(out)
    }
}

fn field_vector(f: &Field) -> Vec<((usize, Monomial<JetCoord>), Rat)> {
    f.components()
        .enumerate()
        .flat_map(|(i, p)| p.terms().iter().map(move |(m, c)| ((i, m.clone()), c.clone())))
        .collect()
}

fn check_name(n: GenName, ell: HalfInt) -> Result<()> {
    match n {
        GenName::P(i) if i == 0 || i > ell.twice() + 1 => {
            Err(Error::UnknownGenerator(format!("{n} (ℓ = {ell})")))
        }
        _ => Ok(()),
    }
}

/// Right-hand side of the commutation table for `[g1, g2]`.
///
/// The central term is `[P^(m), P^(n)] = −central_sign · δ_{m+n,2ℓ+2} I_{m−1} M`;
/// `central_sign = 1` is the tabulated convention.
pub fn expected_bracket(g1: GenName, g2: GenName, ell: HalfInt, central_sign: i32) -> Result<Combination> {
    use GenName::*;
    check_name(g1, ell)?;
    check_name(g2, ell)?;
    let twice = ell.twice() as i64;
    let one = |c: Rat, n: GenName| if c.is_zero() { vec![] } else { vec![(c, n)] };
    let forward = |a: GenName, b: GenName| -> Option<Combination> {
        Some(match (a, b) {
            (D, H) => one(rat_int(-2), H),
            (D, C) => one(rat_int(2), C),
            (H, C) => one(rat_int(1), D),
            // 2(n−1−ℓ) = 2n − 2 − 2ℓ
            (D, P(n)) => one(rat_int(2 * n as i64 - 2 - twice), P(n)),
            (H, P(n)) if n >= 2 => one(rat_int(n as i64 - 1), P(n - 1)),
            (H, P(_)) => vec![],
            (C, P(n)) if (n as i64) <= twice => one(rat_int(n as i64 - 1 - twice), P(n + 1)),
            (C, P(_)) => vec![],
            (P(m), P(n)) => {
                if m as i64 + n as i64 == twice + 2 {
                    let i = structure_constant_i(m as i64 - 1, ell).expect("index in range");
                    one(-i * rat_int(central_sign as i64), M)
                } else {
                    vec![]
                }
            }
            (M, _) | (_, M) => vec![],
            _ => return None,
        })
    };
    if g1 == g2 {
        return Ok(vec![]);
    }
    if let Some(c) = forward(g1, g2) {
        return Ok(c);
    }
    let c = forward(g2, g1).expect("every unordered pair is tabulated");
    Ok(c.into_iter().map(|(r, n)| (-r, n)).collect())
}

/// One row of the commutation check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BracketEntry {
    pub lhs: (GenName, GenName),
    /// Decomposition of the computed bracket in the generator basis, absent if it leaves the span.
    #[serde(with = "combo_serde")]
    pub computed: Option<Combination>,
    #[serde(with = "combo_serde_req")]
    pub expected: Combination,
    pub matches: bool,
    /// `+1` when this central bracket agrees with the tabulated sign, `−1` when it is opposite.
    pub central_sign: Option<i32>,
    /// Text of `computed − expected` when they differ.
    pub residual: Option<String>,
}

/// Result of checking every unordered generator pair.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BracketReport {
    pub ell: HalfInt,
    pub generator_count: usize,
    /// Sign of the realized central term relative to the tabulated one.
    pub central_sign: i32,
    pub central_sign_consistent: bool,
    /// Every bracket lies in the span of the generators.
    pub closure: bool,
    pub all_match: bool,
    pub entries: Vec<BracketEntry>,
}

impl BracketReport {
    pub fn passed(&self) -> bool {
        self.closure && self.all_match && self.central_sign_consistent
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &BracketEntry> {
        self.entries.iter().filter(|e| !e.matches)
    }
}

impl fmt::Display for BracketReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "commutation table, ell = {} ({} generators)", self.ell, self.generator_count)?;
        let w = self
            .entries
            .iter()
            .map(|e| combination_text(e.computed.as_deref().unwrap_or(&[])).len())
            .max()
            .unwrap_or(1)
            .max(8);
        writeln!(f, "  {:<12} {:<w$}  {:<w$}  status", "bracket", "computed", "expected")?;
        for e in &self.entries {
            let lhs = format!("[{}, {}]", e.lhs.0, e.lhs.1);
            let comp = e
                .computed
                .as_ref()
                .map(|c| combination_text(c))
                .unwrap_or_else(|| "outside span".into());
            let status = if e.matches { "ok" } else { "MISMATCH" };
            writeln!(f, "  {:<12} {:<w$}  {:<w$}  {status}", lhs, comp, combination_text(&e.expected))?;
            if let Some(r) = &e.residual {
                writeln!(f, "      residual: {r}")?;
            }
        }
        writeln!(
            f,
            "central sign relative to table: {:+} ({})",
            self.central_sign,
            if self.central_sign_consistent { "consistent" } else { "INCONSISTENT" }
        )?;
        write!(
            f,
            "closure: {}, all brackets match: {}",
            if self.closure { "yes" } else { "NO" },
            if self.all_match { "yes" } else { "NO" }
        )
    }
}

/// Computes every bracket, decomposes it, infers the central sign and compares with the table.
pub fn verify_commutation_table(ell: HalfInt, parallel: bool) -> BracketReport {
    let gens = build_generators(ell);
    verify_with(&gens, parallel)
}

pub fn verify_with(gens: &GeneratorSet, parallel: bool) -> BracketReport {
    let ell = gens.ell();
    let n = gens.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
    let compute = |&(i, j): &(usize, usize)| {
        let br = gens.fields()[i].bracket(&gens.fields()[j]);
        let dec = gens.decompose(&br);
        (i, j, br, dec)
    };
    let raw: Vec<_> = if parallel {
        pairs.par_iter().map(compute).collect()
    } else {
        pairs.iter().map(compute).collect()
    };

    // Central sign: compare each nonzero [P, P] bracket with the tabulated M coefficient.
    let pp_sign = |a: GenName, b: GenName, dec: &Option<Combination>| -> Option<i32> {
        let (GenName::P(_), GenName::P(_)) = (a, b) else { return None };
        let tab = expected_bracket(a, b, ell, 1).ok()?;
        let (tc, _) = tab.first()?;
        let got = dec.as_ref()?.iter().find(|(_, nm)| *nm == GenName::M)?.0.clone();
        if got == *tc {
            Some(1)
        } else if got == -tc.clone() {
            Some(-1)
        } else {
            None
        }
    };
    let signs: Vec<Option<i32>> = raw
        .iter()
        .map(|(i, j, _, dec)| pp_sign(gens.names()[*i], gens.names()[*j], dec))
        .collect();
    let global = signs.iter().flatten().next().copied().unwrap_or(1);
    let consistent = signs.iter().flatten().all(|&s| s == global);

    let mut entries = Vec::with_capacity(raw.len());
    for ((i, j, br, dec), sign) in raw.into_iter().zip(signs) {
        let (a, b) = (gens.names()[i], gens.names()[j]);
        let expected = expected_bracket(a, b, ell, global).expect("names from the set");
        let exp_field = gens.combine(&expected).expect("names from the set");
        let diff = br.sub_ref(&exp_field);
        let matches = diff.is_zero();
        entries.push(BracketEntry {
            lhs: (a, b),
            computed: dec,
            expected,
            matches,
            central_sign: sign,
            residual: (!matches).then(|| render_field(&diff, Format::Text)),
        });
    }
    let closure = entries.iter().all(|e| e.computed.is_some());
    let all_match = entries.iter().all(|e| e.matches);
    BracketReport {
        ell,
        generator_count: n,
        central_sign: global,
        central_sign_consistent: consistent,
        closure,
        all_match,
        entries,
    }
}

/// The central brackets `[P^(m), P^(2ℓ+2−m)]` against the tabulated sign, as a report entry.
///
/// A uniformly opposite sign is a WARN tied to the `central-sign` discrepancy.
pub fn central_sign_check(gens: &GeneratorSet) -> Check {
    let ell = gens.ell();
    let top = ell.twice() + 2;
    let mut lines = Vec::new();
    let mut signs = Vec::new();
    for m in 1..top / 2 + 1 {
        let n = top - m;
        if m >= n {
            continue;
        }
        let (Ok(a), Ok(b)) = (gens.get(GenName::P(m)), gens.get(GenName::P(n))) else {
            continue;
        };
        let got = gens
            .decompose(&a.bracket(b))
            .and_then(|c| match c.as_slice() {
                [(r, GenName::M)] => Some(r.clone()),
                _ => None,
            });
        let tab = -structure_constant_i(m as i64 - 1, ell).expect("index in range");
        let sign = got.as_ref().and_then(|g| {
            if *g == tab {
                Some(1)
            } else if *g == -tab.clone() {
                Some(-1)
            } else {
                None
            }
        });
        lines.push(format!(
            "[P{m}, P{n}] = {} M, table: {} M",
            got.as_ref().map_or("(not central)".to_string(), rat_text),
            rat_text(&tab)
        ));
        signs.push(sign);
    }
    let desc = "sign of the central term in [P^(m), P^(2l+2-m)]";
    let detail = lines.join("\n");
    if signs.iter().all(|s| *s == Some(1)) {
        Check::assert("central-sign", true, desc, detail)
    } else if signs.iter().all(|s| *s == Some(-1)) {
        Check::new("central-sign", Status::Warn, desc, format!("{detail}\nrecorded central sign: -1"))
            .with_discrepancy("central-sign")
    } else {
        Check::assert("central-sign", false, desc, detail)
    }
}

mod combo_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    pub(super) struct Term {
        coef: String,
        gen: GenName,
    }

    pub(super) fn to_terms(c: &[(Rat, GenName)]) -> Vec<Term> {
        c.iter()
            .map(|(r, g)| Term {
                coef: rat_text(r),
                gen: *g,
            })
            .collect()
    }

    pub(super) fn from_terms<E: serde::de::Error>(t: Vec<Term>) -> std::result::Result<Combination, E> {
        t.into_iter()
            .map(|t| Ok((crate::arith::parse_rat(&t.coef).map_err(E::custom)?, t.gen)))
            .collect()
    }

    pub fn serialize<S: Serializer>(c: &Option<Combination>, s: S) -> std::result::Result<S::Ok, S::Error> {
        c.as_ref().map(|c| to_terms(c)).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Combination>, D::Error> {
        Option::<Vec<Term>>::deserialize(d)?.map(from_terms).transpose()
    }
}

mod combo_serde_req {
    use super::combo_serde::{from_terms, to_terms};
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(c: &Combination, s: S) -> std::result::Result<S::Ok, S::Error> {
        to_terms(c).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Combination, D::Error> {
        from_terms(Deserialize::deserialize(d)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ell(twice: u32) -> HalfInt {
        HalfInt::from_twice(twice).unwrap()
    }

    #[test]
    fn name_round_trip() {
        for s in ["M", "D", "H", "C", "P1", "P12"] {
            assert_eq!(s.parse::<GenName>().unwrap().to_string(), s);
        }
        assert_eq!("P^(3)".parse::<GenName>().unwrap(), GenName::P(3));
        assert!("P0".parse::<GenName>().is_err());
        assert!("Q".parse::<GenName>().is_err());
    }

    #[test]
    fn theorem_list_c_at_three_halves() {
        let g = build_generators(ell(3));
        let j = g.jet();
        let c = g.get(GenName::C).unwrap();
        assert_eq!(c.xi(0), &j.t().pow(2));
        assert_eq!(c.xi(1), &j.t().mul_ref(&j.x(1)).scale(&rat_int(3)));
        assert_eq!(c.xi(2), &(j.t().mul_ref(&j.x(2)) + j.x(1).scale(&rat_int(3))));
        assert_eq!(c.eta(), &j.x(2).pow(2).mul_ref(&j.u()).scale(&rat_int(-2)));
    }

    #[test]
    fn p6_at_five_halves() {
        let g = build_generators(ell(5));
        let j = g.jet();
        let p6 = g.get(GenName::P(6)).unwrap();
        let t = j.t();
        assert_eq!(p6.xi(1), &t.pow(5));
        assert_eq!(p6.xi(2), &t.pow(4).scale(&rat_int(5)));
        assert_eq!(p6.xi(3), &t.pow(3).scale(&rat_int(10)));
        let inner = t.pow(2).mul_ref(&j.x(3)) - t.mul_ref(&j.x(2)) + j.x(1);
        assert_eq!(p6.eta(), &inner.mul_ref(&j.u()).scale(&rat_int(-120)));
    }

    #[test]
    fn expected_entries() {
        let l = ell(5);
        assert_eq!(
            expected_bracket(GenName::D, GenName::P(2), l, 1).unwrap(),
            vec![(rat_int(-3), GenName::P(2))]
        );
        assert!(expected_bracket(GenName::H, GenName::P(1), l, 1).unwrap().is_empty());
        assert!(expected_bracket(GenName::C, GenName::P(6), l, 1).unwrap().is_empty());
        assert_eq!(
            expected_bracket(GenName::C, GenName::H, l, 1).unwrap(),
            vec![(rat_int(-1), GenName::D)]
        );
        assert!(expected_bracket(GenName::P(7), GenName::H, l, 1).is_err());
    }

    #[test]
    fn central_term_at_three_halves() {
        let g = build_generators(ell(3));
        let br = g.get(GenName::P(2)).unwrap().bracket(g.get(GenName::P(3)).unwrap());
        assert_eq!(g.decompose(&br).unwrap(), vec![(rat_int(-2), GenName::M)]);
    }

    #[test]
    fn table_closes_small() {
        for t in [3, 5] {
            let r = verify_commutation_table(ell(t), false);
            assert!(r.passed(), "{r}");
            assert_eq!(r.central_sign, -1);
            assert_eq!(r.entries.len(), r.generator_count * (r.generator_count - 1) / 2);
        }
    }

    #[test]
    fn report_json_round_trip() {
        let r = verify_commutation_table(ell(3), false);
        let s = serde_json::to_string(&r).unwrap();
        let back: BracketReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back.entries.len(), r.entries.len());
        assert_eq!(back.entries[5].expected, r.entries[5].expected);
    }
}

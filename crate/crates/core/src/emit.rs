//! Deterministic rendering of whole towers and generator lists.
//!
//! The output of [`emit`] is byte-stable for a given `(ℓ, target, format)`
//! and is what the golden files store.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::arith::HalfInt;
use crate::cga::build_generators;
use crate::error::{Error, Result};
use crate::expr_io::{expr_json, expr_latex, expr_text, field_json, poly_json, poly_latex, poly_text, render_field, Format};
use crate::invariants::{build_tower_32, build_tower_general, PhiPoly, TowerGeneral};
use crate::{Expr, Field};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Phi,
    W,
    Wkm,
    Final,
    Generators,
}

impl Target {
    pub const ALL: [Target; 5] = [Target::Phi, Target::W, Target::Wkm, Target::Final, Target::Generators];

    pub fn name(self) -> &'static str {
        match self {
            Target::Phi => "phi",
            Target::W => "w",
            Target::Wkm => "wkm",
            Target::Final => "final",
            Target::Generators => "generators",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Target::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown emit target `{s}` (phi, w, wkm, final, generators)")))
    }
}

#[derive(Clone, Debug)]
enum Body {
    Expr(Expr),
    /// Polynomial in the `φ_km` together with its jet-space value.
    Phi(PhiPoly, Expr),
    Field(Field),
}

/// One named item of an emitted artifact.
#[derive(Clone, Debug)]
pub struct Entry {
    pub name: String,
    pub latex_name: String,
    body: Body,
}

impl Entry {
    fn expr(name: String, latex_name: String, e: &Expr) -> Self {
        Entry {
            name,
            latex_name,
            body: Body::Expr(e.clone()),
        }
    }

    /// The jet-space value, if this entry is an expression.
    pub fn value(&self) -> Option<&Expr> {
        match &self.body {
            Body::Expr(e) | Body::Phi(_, e) => Some(e),
            Body::Field(_) => None,
        }
    }

    pub fn phi_form(&self) -> Option<&PhiPoly> {
        match &self.body {
            Body::Phi(p, _) => Some(p),
            _ => None,
        }
    }

    pub fn field(&self) -> Option<&Field> {
        match &self.body {
            Body::Field(f) => Some(f),
            _ => None,
        }
    }
}

fn sub(name: &str, idx: impl fmt::Display) -> (String, String) {
    (format!("{name}_{idx}"), format!("\\{name}_{{{idx}}}"))
}

/// Builds the entries of `target` at `ell`.
pub fn entries(ell: HalfInt, target: Target) -> Result<Vec<Entry>> {
    if target == Target::Generators {
        let gens = build_generators(ell);
        return Ok(gens
            .names()
            .iter()
            .zip(gens.fields())
            .map(|(n, f)| {
                let latex = match n {
                    crate::cga::GenName::P(k) => format!("P^{{({k})}}"),
                    other => other.to_string(),
                };
                Entry {
                    name: n.to_string(),
                    latex_name: latex,
                    body: Body::Field(f.clone()),
                }
            })
            .collect());
    }
    if ell.twice() == 3 {
        entries_32(target)
    } else {
        entries_general(&build_tower_general(ell)?, target)
    }
}

fn entries_32(target: Target) -> Result<Vec<Entry>> {
    let (phis, psis) = build_tower_32();
    let list = |greek: &str, items: &[Expr], primed: &[usize]| -> Vec<Entry> {
        items
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let (mut n, mut l) = sub(greek, i + 1);
                if primed.contains(&(i + 1)) {
                    n.push('\'');
                    l.push('\'');
                }
                Entry::expr(n, l, e)
            })
            .collect()
    };
    match target {
        Target::Phi => Ok(list("phi", &phis.phi, &[])),
        Target::W => Ok(list("w", &psis.w, &[3, 5])),
        Target::Final => Ok(list("psi", &psis.psi, &[])),
        Target::Wkm => Err(Error::Unsupported(
            "ell = 3/2 has no w_km; use `w` or `final`".to_string(),
        )),
        Target::Generators => unreachable!("handled by the caller"),
    }
}

fn entries_general(tower: &TowerGeneral, target: Target) -> Result<Vec<Entry>> {
    let ell = tower.ell;
    let mut out = Vec::new();
    match target {
        Target::Phi => {
            for ((k, m), e) in &tower.phi_km {
                let (n, l) = sub("phi", format!("{k}{m}"));
                out.push(Entry::expr(n, l, e));
            }
            out.push(Entry::expr("phi".into(), "\\phi".into(), &tower.phi));
            out.push(Entry::expr("phi~".into(), "\\tilde\\phi".into(), &tower.phi_tilde));
            out.push(Entry::expr("phi_01".into(), "\\phi_{01}".into(), &tower.phi01));
            out.push(Entry::expr("phi_02".into(), "\\phi_{02}".into(), &tower.phi02));
        }
        Target::W => {
            out.push(Entry::expr("w".into(), "w".into(), &tower.w));
            out.push(Entry::expr("w_01".into(), "w_{01}".into(), &tower.w01));
            out.push(Entry::expr("w_02".into(), "w_{02}".into(), &tower.w02));
            for (n, e) in &tower.alpha {
                let (a, b) = sub("alpha", n);
                out.push(Entry::expr(a, b, e));
            }
            for (n, e) in &tower.beta {
                let (a, b) = sub("beta", n);
                out.push(Entry::expr(a, b, e));
            }
        }
        Target::Wkm => {
            for (label, e) in &tower.w_km {
                out.push(Entry {
                    name: format!("w_{}{}", label.k, label.m),
                    latex_name: format!("w_{{{}{}}}", label.k, label.m),
                    body: Body::Phi(tower.w_km_phi[label].clone(), e.clone()),
                });
            }
        }
        Target::Final => {
            for (label, e) in &tower.finals {
                let n = label.weight(ell);
                out.push(Entry::expr(
                    format!("w_{}{}/w^{n}", label.k, label.m),
                    format!("\\frac{{w_{{{}{}}}}}{{w^{{{n}}}}}", label.k, label.m),
                    e,
                ));
            }
        }
        Target::Generators => unreachable!("handled by the caller"),
    }
    Ok(out)
}

/// Renders `target` at `ell` in `format`. Text and LaTeX end with a newline.
pub fn emit(ell: HalfInt, target: Target, format: Format) -> Result<String> {
    Ok(render_entries(ell, target, &entries(ell, target)?, format))
}

pub fn render_entries(ell: HalfInt, target: Target, list: &[Entry], format: Format) -> String {
    match format {
        Format::Text => {
            let mut s = format!("# ell = {ell}, {target}\n");
            for e in list {
                match &e.body {
                    Body::Expr(x) => s.push_str(&format!("{} = {}\n", e.name, expr_text(x))),
                    Body::Phi(p, x) => {
                        s.push_str(&format!("{} = {}\n", e.name, poly_text(p)));
                        s.push_str(&format!("{} = {}\n", " ".repeat(e.name.len()), expr_text(x)));
                    }
                    Body::Field(f) => s.push_str(&format!("{} = {}\n", e.name, render_field(f, Format::Text))),
                }
            }
            s
        }
        Format::Latex => {
            let mut s = format!("% ell = {ell}, {target}\n");
            for e in list {
                match &e.body {
                    Body::Expr(x) => s.push_str(&format!("{} &= {} \\\\\n", e.latex_name, expr_latex(x))),
                    Body::Phi(p, x) => {
                        s.push_str(&format!("{} &= {} \\\\\n", e.latex_name, poly_latex(p)));
                        s.push_str(&format!("&= {} \\\\\n", expr_latex(x)));
                    }
                    Body::Field(f) => {
                        s.push_str(&format!("{} &= {} \\\\\n", e.latex_name, render_field(f, Format::Latex)))
                    }
                }
            }
            s
        }
        Format::Json => {
            let items: Vec<Value> = list
                .iter()
                .map(|e| {
                    let mut v = json!({"name": e.name, "latex_name": e.latex_name});
                    match &e.body {
                        Body::Expr(x) => v["expr"] = expr_json(x),
                        Body::Phi(p, x) => {
                            v["phi"] = poly_json(p);
                            v["expr"] = expr_json(x);
                        }
                        Body::Field(f) => v["field"] = field_json(f),
                    }
                    v
                })
                .collect();
            let doc = json!({"ell": ell.to_string(), "what": target.name(), "entries": items});
            let mut s = serde_json::to_string_pretty(&doc).expect("values serialize");
            s.push('\n');
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn target_parse() {
        for t in Target::ALL {
            assert_eq!(t.name().parse::<Target>().unwrap(), t);
        }
        assert!("psi".parse::<Target>().is_err());
    }

    #[test]
    fn wkm_rejected_at_three_halves() {
        let ell: HalfInt = "3/2".parse().unwrap();
        assert!(matches!(emit(ell, Target::Wkm, Format::Text), Err(Error::Unsupported(_))));
    }

    #[test]
    fn phi4_line() {
        let ell: HalfInt = "3/2".parse().unwrap();
        let s = emit(ell, Target::Phi, Format::Text).unwrap();
        assert!(s.contains("phi_4 = u_0/u + x2*u_1/u - u_22/(2*u)\n"));
    }
}

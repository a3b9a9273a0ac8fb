use std::fs;
use std::io::{Read, Write};
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use cga_core::arith::{rat_text, HalfInt};
use cga_core::cga::{build_generators, central_sign_check, verify_with, BracketReport};
use cga_core::emit::{emit as emit_target, Target};
use cga_core::expr_io::{expr_text, parse_expr, Format};
use cga_core::invariants::{
    build_tilde_c, build_tower_32, build_tower_general, verify_full_annihilation, verify_intermediate_lemmas,
    verify_invariants as run_invariants,
};
use cga_core::jet::weight_eigenvalue;
use cga_core::report::{discrepancy, Check, Report, Status};
use cga_core::stats::{peak_terms, reset_peak_terms};
use cga_core::treecoef::CoeffTable;
use cga_core::Prolonged;
use serde_json::{json, Value};

pub const EXIT_FAIL: u8 = 1;
pub const EXIT_ERROR: u8 = 2;

/// Environment variable bounding the term-count high-water mark during `bench`.
pub const BENCH_CAP_VAR: &str = "CGA_BENCH_MAX_TERMS";

pub struct RunConfig {
    pub ell: HalfInt,
    pub format: Format,
    pub parallel: bool,
    pub jobs: usize,
}

/// Rendered output and whether it contains a FAIL.
pub struct Outcome {
    pub text: String,
    pub failed: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, failed: false }
    }
}

pub fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn report_only(cfg: &RunConfig) -> Result<()> {
    if cfg.format == Format::Latex {
        bail!("reports are available as text or json");
    }
    Ok(())
}

fn check_json(c: &Check) -> Value {
    let mut v = serde_json::to_value(c).expect("checks serialize");
    if let Some(d) = c.discrepancy.as_deref().and_then(discrepancy) {
        v["known_discrepancy"] = serde_json::to_value(d).expect("entries serialize");
    }
    v
}

fn report_json(r: &Report) -> Value {
    json!({
        "schema": "cga.report/1",
        "title": r.title,
        "ell": r.ell.to_string(),
        "checks": r.checks.iter().map(check_json).collect::<Vec<_>>(),
        "summary": summary_json(r),
    })
}

fn summary_json(r: &Report) -> Value {
    json!({
        "pass": r.count(Status::Pass),
        "warn": r.count(Status::Warn),
        "fail": r.count(Status::Fail),
    })
}

pub fn verify_algebra(cfg: &RunConfig) -> Result<Outcome> {
    report_only(cfg)?;
    let gens = build_generators(cfg.ell);
    let table = verify_with(&gens, cfg.parallel);
    let sign = central_sign_check(&gens);
    let failed = !table.passed() || sign.status == Status::Fail;
    let text = match cfg.format {
        Format::Json => pretty(&brackets_json(&table, &sign)),
        _ => {
            let mut r = Report::new("central term", cfg.ell);
            r.push(sign);
            format!("{table}\n{r}\n")
        }
    };
    Ok(Outcome { text, failed })
}

fn brackets_json(table: &BracketReport, sign: &Check) -> Value {
    let mut v = serde_json::to_value(table).expect("reports serialize");
    v["schema"] = json!("cga.brackets/1");
    v["passed"] = json!(table.passed());
    v["central_sign_check"] = check_json(sign);
    v
}

pub fn verify_invariants(cfg: &RunConfig) -> Result<Outcome> {
    report_only(cfg)?;
    let r = run_invariants(cfg.ell, cfg.parallel)?;
    let text = match cfg.format {
        Format::Json => pretty(&report_json(&r)),
        _ => format!("{r}\n"),
    };
    Ok(Outcome { text, failed: !r.passed() })
}

pub fn emit(cfg: &RunConfig, what: Target) -> Result<Outcome> {
    Ok(Outcome::ok(emit_target(cfg.ell, what, cfg.format)?))
}

pub fn coeff(cfg: &RunConfig) -> Result<Outcome> {
    let t = CoeffTable::build(cfg.ell);
    Ok(Outcome::ok(match cfg.format {
        Format::Json => pretty(&t.to_json()),
        Format::Text => t.to_text(),
        Format::Latex => bail!("the coefficient table is available as text or json"),
    }))
}

fn read_source(file: &Path) -> Result<String> {
    if file.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))
    }
}

fn truncate(s: String, max: usize) -> String {
    match s.char_indices().nth(max) {
        Some((i, _)) => format!("{} ...", &s[..i]),
        None => s,
    }
}

pub fn check(cfg: &RunConfig, file: &Path) -> Result<Outcome> {
    let src = read_source(file)?;
    let expr = parse_expr(src.trim(), cfg.ell)?;
    let gens = build_generators(cfg.ell);
    let mut ops: Vec<(String, Prolonged)> = gens
        .names()
        .iter()
        .zip(gens.prolonged_all())
        .map(|(n, p)| (n.to_string(), p.clone()))
        .collect();
    ops.push(("C~".to_string(), build_tilde_c(cfg.ell)?));
    let d = gens.prolonged(cga_core::cga::GenName::D)?;
    let weight = weight_eigenvalue(&expr, d);

    let rows: Vec<(String, bool, String)> = ops
        .iter()
        .map(|(name, op)| {
            let r = op.apply(&expr);
            let zero = r.is_zero();
            (name.clone(), zero, if zero { String::new() } else { truncate(expr_text(&r), 200) })
        })
        .collect();

    let text = match cfg.format {
        Format::Json => pretty(&json!({
            "schema": "cga.check/1",
            "ell": cfg.ell.to_string(),
            "expr": expr_text(&expr),
            "d_eigenvalue": weight.as_ref().map(rat_text),
            "results": rows.iter().map(|(n, z, r)| json!({
                "generator": n,
                "annihilated": z,
                "image": if *z { Value::Null } else { json!(r) },
            })).collect::<Vec<_>>(),
        })),
        Format::Latex => bail!("check results are available as text or json"),
        Format::Text => {
            let mut s = format!("expression: {}\n", truncate(expr_text(&expr), 200));
            s.push_str(&format!(
                "D eigenvalue: {}\n",
                weight.as_ref().map_or("none (not homogeneous)".to_string(), rat_text)
            ));
            s.push_str("generator  annihilated\n");
            for (n, z, r) in &rows {
                if *z {
                    s.push_str(&format!("{n:<10} yes\n"));
                } else {
                    s.push_str(&format!("{n:<10} no   image: {r}\n"));
                }
            }
            s
        }
    };
    Ok(Outcome::ok(text))
}

struct Phase {
    name: &'static str,
    seconds: f64,
    peak_terms: usize,
}

pub fn bench(cfg: &RunConfig) -> Result<Outcome> {
    report_only(cfg)?;
    let cap = match std::env::var(BENCH_CAP_VAR) {
        Ok(v) => Some(
            v.parse::<usize>()
                .with_context(|| format!("{BENCH_CAP_VAR} must be a nonnegative integer, got `{v}`"))?,
        ),
        Err(_) => None,
    };
    let ell = cfg.ell;
    let mut phases: Vec<Phase> = Vec::new();
    let mut stopped: Option<String> = None;
    let mut results = serde_json::Map::new();

    let mut run = |name: &'static str, f: &mut dyn FnMut(&mut serde_json::Map<String, Value>) -> Result<()>| -> Result<()> {
        if stopped.is_some() {
            return Ok(());
        }
        reset_peak_terms();
        let start = Instant::now();
        f(&mut results)?;
        let p = Phase {
            name,
            seconds: start.elapsed().as_secs_f64(),
            peak_terms: peak_terms(),
        };
        if let Some(c) = cap.filter(|c| p.peak_terms > *c) {
            stopped = Some(format!(
                "stopped after `{name}`: {} terms exceed {BENCH_CAP_VAR}={c}",
                p.peak_terms
            ));
        }
        phases.push(p);
        Ok(())
    };

    let gens = build_generators(ell);
    run("brackets", &mut |res| {
        let t = verify_with(&gens, cfg.parallel);
        res.insert("brackets_passed".into(), json!(t.passed()));
        Ok(())
    })?;
    run("tower", &mut |_| {
        if ell.twice() == 3 {
            build_tower_32();
        } else {
            build_tower_general(ell)?;
        }
        Ok(())
    })?;
    run("lemmas", &mut |res| {
        let r = verify_intermediate_lemmas(ell, cfg.parallel)?;
        res.insert("lemmas".into(), summary_json(&r));
        Ok(())
    })?;
    run("annihilation", &mut |res| {
        let r = verify_full_annihilation(ell, cfg.parallel)?;
        let s = r.find("annihilate/summary").map(|c| c.detail.clone()).unwrap_or_default();
        res.insert("annihilation".into(), json!(s));
        res.insert("annihilation_fail".into(), json!(r.count(Status::Fail)));
        Ok(())
    })?;

    let failed = stopped.is_some()
        || results.get("brackets_passed") == Some(&json!(false))
        || results.get("annihilation_fail").is_some_and(|v| v != &json!(0))
        || results.get("lemmas").is_some_and(|v| v["fail"] != json!(0));
    let text = match cfg.format {
        Format::Json => pretty(&json!({
            "schema": "cga.bench/1",
            "ell": ell.to_string(),
            "jobs": cfg.jobs,
            "phases": phases.iter().map(|p| json!({
                "name": p.name, "seconds": p.seconds, "peak_terms": p.peak_terms,
            })).collect::<Vec<_>>(),
            "results": results,
            "stopped": stopped,
        })),
        _ => {
            let mut s = format!("bench, ell = {ell}, jobs = {}\n", cfg.jobs);
            for p in &phases {
                s.push_str(&format!("{:<14} {:>10.3} s   peak terms {}\n", p.name, p.seconds, p.peak_terms));
            }
            let peak = phases.iter().map(|p| p.peak_terms).max().unwrap_or(0);
            s.push_str(&format!("term-count high-water mark: {peak}\n"));
            for (k, v) in &results {
                s.push_str(&format!("{k}: {v}\n"));
            }
            if let Some(m) = &stopped {
                s.push_str(&format!("{m}\n"));
            }
            s
        }
    };
    Ok(Outcome { text, failed })
}

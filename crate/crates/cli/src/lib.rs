//! Command line front end: input documents, reports and pictures.

pub mod input;
pub mod svg;

use std::path::PathBuf;
use std::time::Instant;

use serde_json::{json, Map, Value};

use tfk_core::catalog;
use tfk_core::degen::{enumerate_candidates, DegenerationCandidate};
use tfk_core::divpol::{fano_check, validate, DivisorialPolytope, FanoCertificate};
use tfk_core::exactgeom::{fmt_rat, Polytope, Rat, RatVec};
use tfk_core::futaki::{kstability_verdict, soliton_verdict, StabilityStatus, DEFAULT_DIGITS};
use tfk_core::real::Real;
use tfk_core::symmetry::soliton_criteria;

pub use input::{parse_input, InputDocument, InputError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Fano,
    Candidates,
    Kstab,
    Soliton,
    Symmetry,
    Report,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Fano => "fano",
            Command::Candidates => "candidates",
            Command::Kstab => "kstab",
            Command::Soliton => "soliton",
            Command::Symmetry => "symmetry",
            Command::Report => "report",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("unknown catalog entry {0:?}")]
    UnknownCatalogEntry(String),
    #[error("{stage} requires a passing {requires} stage: {reason}")]
    StageDependency {
        stage: &'static str,
        requires: &'static str,
        reason: String,
    },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Computation(String),
    #[error(transparent)]
    Svg(#[from] svg::SvgError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::UnknownCatalogEntry(_) | CliError::Usage(_) => 1,
            CliError::StageDependency { .. } => 2,
            CliError::Computation(_) | CliError::Svg(_) => 3,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub precision: Option<u32>,
    pub timings: bool,
    pub svg_dir: Option<PathBuf>,
}

/// Result of a command: a JSON document, a text rendering and the exit code.
/// Verdicts never change the exit code; failed validation does.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub json: Value,
    pub text: String,
    pub exit_code: i32,
}

pub fn catalog_document(name: &str) -> Result<InputDocument, CliError> {
    catalog::by_name(name)
        .map(|p| InputDocument::from_divpol(&p))
        .ok_or_else(|| CliError::UnknownCatalogEntry(name.to_string()))
}

pub fn catalog_list() -> Vec<&'static str> {
    catalog::all().into_iter().map(|(n, _)| n).collect()
}

/// Precision from the command line, then the document, then `TFK_PRECISION`,
/// then the default.
pub fn resolve_precision(flag: Option<u32>, doc: &InputDocument, env: Option<&str>) -> Result<u32, CliError> {
    if let Some(p) = flag.or(doc.precision) {
        return Ok(p);
    }
    match env {
        Some(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("TFK_PRECISION={s:?} is not a number"))),
        None => Ok(DEFAULT_DIGITS),
    }
}

fn rat(r: &Rat) -> Value {
    Value::String(fmt_rat(r))
}

fn ratvec(v: &RatVec) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

fn real(r: &Real, digits: u32) -> String {
    r.to_sci(digits as usize)
}

fn reals(xs: &[Real], digits: u32) -> String {
    let s: Vec<String> = xs.iter().map(|x| real(x, digits)).collect();
    format!("({})", s.join(", "))
}

fn vertices(p: &Polytope) -> Value {
    Value::Array(p.vertices().iter().map(ratvec).collect())
}

struct Ctx {
    psi: DivisorialPolytope,
    digits: u32,
    timings: bool,
    times: Map<String, Value>,
}

impl Ctx {
    fn timed<T>(&mut self, stage: &str, f: impl FnOnce(&Self) -> T) -> T {
        let t = Instant::now();
        let out = f(self);
        if self.timings {
            self.times
                .insert(stage.to_string(), json!(t.elapsed().as_secs_f64() * 1e3));
        }
        out
    }
}

fn validate_stage(ctx: &mut Ctx) -> (Value, Vec<String>, bool) {
    let rep = ctx.timed("validate", |c| validate(&c.psi));
    let failures: Vec<String> = rep.failures.iter().map(|f| f.to_string()).collect();
    let mut text = vec![format!("valid: {}", rep.passed())];
    text.extend(failures.iter().map(|f| format!("  {f}")));
    (
        json!({
            "valid": rep.passed(),
            "box_ok": rep.box_ok,
            "degree_ok": rep.degree_ok,
            "graphs_ok": rep.graphs_ok,
            "failures": failures,
        }),
        text,
        rep.passed(),
    )
}

fn fano_stage(ctx: &mut Ctx) -> (Value, Vec<String>, Option<FanoCertificate>) {
    match ctx.timed("fano", |c| fano_check(&c.psi)) {
        Ok(cert) => {
            let a: Map<String, Value> = cert
                .kdiv()
                .iter()
                .map(|(p, a)| (p.to_string(), json!(a.to_string())))
                .collect();
            let parts: Vec<String> = cert.kdiv().iter().map(|(p, a)| format!("{p}: {a}")).collect();
            let sum: num_bigint::BigInt = cert.kdiv().values().sum();
            (
                json!({"fano": true, "a": a, "sum": sum.to_string()}),
                vec![format!("fano: true; a = {{{}}}", parts.join(", "))],
                Some(cert),
            )
        }
        Err(e) => (
            json!({"fano": false, "failure": e.to_string()}),
            vec![format!("fano: false; {e}")],
            None,
        ),
    }
}

fn require_fano(ctx: &mut Ctx, stage: &'static str) -> Result<FanoCertificate, CliError> {
    fano_check(&ctx.psi).map_err(|e| CliError::StageDependency {
        stage,
        requires: "fano",
        reason: e.to_string(),
    })
}

fn candidates_stage(ctx: &mut Ctx, cert: &FanoCertificate) -> Result<(Value, Vec<String>, Vec<DegenerationCandidate>), CliError> {
    let cands = ctx
        .timed("candidates", |_| enumerate_candidates(cert))
        .map_err(|e| CliError::Computation(e.to_string()))?;
    let mut rows = Vec::new();
    let mut text = vec![format!("candidates: {}", cands.len())];
    for c in &cands {
        let b = c.barycenter();
        rows.push(json!({
            "q": c.q.to_string(),
            "delta_vertices": vertices(&c.delta),
            "u_q": ratvec(&c.u_q),
            "normal": c.normal,
            "barycenter": ratvec(&b),
        }));
        text.push(format!(
            "  Q={}: normal={}, u_Q={}, b_Q={}, {} vertices",
            c.q,
            c.normal,
            c.u_q,
            b,
            c.delta.vertices().len()
        ));
    }
    Ok((Value::Array(rows), text, cands))
}

fn status_name(s: StabilityStatus) -> &'static str {
    match s {
        StabilityStatus::EquivariantlyKStable => "EquivariantlyKStable",
        StabilityStatus::Semistable => "Semistable",
        StabilityStatus::Unstable => "Unstable",
    }
}

fn kstab_stage(ctx: &mut Ctx, cert: &FanoCertificate) -> Result<(Value, Vec<String>), CliError> {
    let v = ctx
        .timed("kstab", |_| kstability_verdict(cert))
        .map_err(|e| CliError::Computation(e.to_string()))?;
    let witnesses: Vec<Value> = v
        .witnesses
        .iter()
        .map(|w| json!({"q": w.q.to_string(), "barycenter": ratvec(&w.barycenter), "kind": format!("{:?}", w.kind)}))
        .collect();
    let mut line = status_name(v.status).to_string();
    if let Some(w) = v.witnesses.first() {
        line.push_str(&format!("; destabilizer Q={}, b={}", w.q, w.barycenter));
    }
    Ok((
        json!({
            "status": status_name(v.status),
            "description": v.status.to_string(),
            "futaki_character": ratvec(&v.futaki_character),
            "witnesses": witnesses,
            "barycenters": v.barycenters.iter().map(|(q, b, n)| json!({"q": q.to_string(), "barycenter": ratvec(b), "normal": n})).collect::<Vec<_>>(),
        }),
        vec![line, format!("  futaki character: {}", v.futaki_character)],
    ))
}

fn symmetry_stage(ctx: &mut Ctx, cert: &FanoCertificate) -> (Value, Vec<String>, Option<u8>) {
    let s = ctx.timed("symmetry", |_| soliton_criteria(cert));
    let pairs: Vec<Value> = s
        .pairs
        .iter()
        .map(|p| {
            let shifts: Map<String, Value> = p
                .shifts
                .iter()
                .map(|(q, (v, b))| {
                    (
                        q.to_string(),
                        json!({"v": v.iter().map(|x| x.to_string()).collect::<Vec<_>>(), "b": b.to_string()}),
                    )
                })
                .collect();
            json!({
                "psi": p.psi.to_string(),
                "fstar": p.fstar,
                "shifts": shifts,
                "off_support_b": p.off_support_b.to_string(),
            })
        })
        .collect();
    let mu: Map<String, Value> = s.mu.iter().map(|(p, m)| (p.to_string(), json!(m.to_string()))).collect();
    let mut text = vec![format!(
        "criteria: c1={}, c2={}, c3={}{}",
        s.c1,
        s.c2,
        s.c3,
        if s.c3 { "" } else { " (c3 inconclusive)" }
    )];
    if let Some((p, q, m)) = &s.c2_swap {
        text.push(format!("  {m} swaps {p} and {q}"));
    }
    text.push(format!("  automorphism pairs: {}", s.pairs.len()));
    text.push(format!("  common fixed points: {}", s.common_fixed));
    (
        json!({
            "c1": s.c1,
            "c2": s.c2,
            "c3": s.c3,
            "mu": mu,
            "c1_points": s.c1_points.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "c2_swap": s.c2_swap.as_ref().map(|(p, q, m)| json!({"p": p.to_string(), "q": q.to_string(), "psi": m.to_string()})),
            "common_fixed_points": s.common_fixed.to_string(),
            "pairs": pairs,
            "note": s.note,
        }),
        text,
        s.first(),
    )
}

fn soliton_stage(ctx: &mut Ctx, cert: &FanoCertificate, criterion: Option<u8>) -> Result<(Value, Vec<String>), CliError> {
    let digits = ctx.digits;
    let s = ctx
        .timed("soliton", |c| soliton_verdict(cert, c.digits))
        .map_err(|e| CliError::Computation(e.to_string()))?;
    let xi = reals(&s.field.xi, digits);
    let via = match criterion {
        Some(k) => format!("via symmetry criterion ({k})"),
        None => "via weighted moments".to_string(),
    };
    let mut text = vec![format!("exists: {}; {via}; xi={xi}", s.exists)];
    for (q, w) in &s.weighted_moments {
        text.push(format!("  W({q}) = {}", real(w, digits)));
    }
    let mut warnings = s.warnings.clone();
    if criterion.is_some() && !s.exists {
        warnings.push("symmetry criterion holds but the weighted moments disagree".to_string());
    }
    text.extend(warnings.iter().map(|w| format!("  warning: {w}")));
    Ok((
        json!({
            "exists": s.exists,
            "indeterminate": s.indeterminate,
            "via": via,
            "xi": s.field.xi.iter().map(|x| real(x, digits)).collect::<Vec<_>>(),
            "residual": real(&s.field.residual, 6),
            "iterations": s.field.iterations,
            "weighted_moments": s.weighted_moments.iter().map(|(q, w)| json!({"q": q.to_string(), "w": real(w, digits)})).collect::<Vec<_>>(),
            "margin": s.margin.as_ref().map(|m| real(m, digits)),
            "precision_digits": digits,
            "warnings": warnings,
        }),
        text,
    ))
}

/// Run a command on a document.
pub fn run(cmd: Command, doc: &InputDocument, opts: &Options) -> Result<Outcome, CliError> {
    let digits = match opts.precision {
        Some(d) => d,
        None => resolve_precision(None, doc, std::env::var("TFK_PRECISION").ok().as_deref())?,
    };
    if !(16..=2000).contains(&digits) {
        return Err(CliError::Usage(format!("precision {digits} is outside 16..=2000")));
    }
    let psi = doc.to_divpol()?;
    let mut ctx = Ctx {
        psi,
        digits,
        timings: opts.timings,
        times: Map::new(),
    };
    let mut out = Map::new();
    out.insert("command".into(), json!(cmd.name()));
    out.insert("precision_digits".into(), json!(digits));
    let mut text = Vec::new();
    let mut exit_code = 0;
    let mut cands_for_svg = Vec::new();

    match cmd {
        Command::Validate => {
            let (v, t, ok) = validate_stage(&mut ctx);
            out.insert("validation".into(), v);
            text.extend(t);
            if !ok {
                exit_code = 2;
            }
        }
        Command::Fano => {
            let (v, t, cert) = fano_stage(&mut ctx);
            out.insert("fano".into(), v);
            text.extend(t);
            if cert.is_none() {
                exit_code = 2;
            }
        }
        Command::Candidates => {
            let cert = require_fano(&mut ctx, "candidates")?;
            let (v, t, c) = candidates_stage(&mut ctx, &cert)?;
            out.insert("candidates".into(), v);
            text.extend(t);
            cands_for_svg = c;
        }
        Command::Kstab => {
            let cert = require_fano(&mut ctx, "kstab")?;
            let (v, t) = kstab_stage(&mut ctx, &cert)?;
            out.insert("kstab".into(), v);
            text.extend(t);
        }
        Command::Symmetry => {
            let cert = require_fano(&mut ctx, "symmetry")?;
            let (v, t, _) = symmetry_stage(&mut ctx, &cert);
            out.insert("symmetry".into(), v);
            text.extend(t);
        }
        Command::Soliton => {
            let cert = require_fano(&mut ctx, "soliton")?;
            let (_, _, crit) = symmetry_stage(&mut ctx, &cert);
            let (v, t) = soliton_stage(&mut ctx, &cert, crit)?;
            out.insert("soliton".into(), v);
            text.extend(t);
        }
        Command::Report => {
            out.insert("input".into(), doc.to_json());
            let (v, t, ok) = validate_stage(&mut ctx);
            out.insert("validation".into(), v);
            text.extend(t);
            if !ok {
                exit_code = 2;
            } else {
                let (v, t, cert) = fano_stage(&mut ctx);
                out.insert("fano".into(), v);
                text.extend(t);
                match cert {
                    None => exit_code = 2,
                    Some(cert) => {
                        let (v, t, c) = candidates_stage(&mut ctx, &cert)?;
                        out.insert("candidates".into(), v);
                        text.extend(t);
                        cands_for_svg = c;
                        let (v, t) = kstab_stage(&mut ctx, &cert)?;
                        out.insert("kstab".into(), v);
                        text.extend(t);
                        let (v, t, crit) = symmetry_stage(&mut ctx, &cert);
                        out.insert("symmetry".into(), v);
                        text.extend(t);
                        let (v, t) = soliton_stage(&mut ctx, &cert, crit)?;
                        out.insert("soliton".into(), v);
                        text.extend(t);
                    }
                }
            }
        }
    }

    if let Some(dir) = &opts.svg_dir {
        if cands_for_svg.is_empty() {
            if let Ok(cert) = fano_check(&ctx.psi) {
                cands_for_svg = enumerate_candidates(&cert).unwrap_or_default();
            }
        }
        let files = svg::write_svgs(&ctx.psi, &cands_for_svg, dir)?;
        out.insert(
            "svg".into(),
            Value::Array(files.iter().map(|f| json!(f.display().to_string())).collect()),
        );
    }
    if opts.timings {
        out.insert("timings_ms".into(), Value::Object(ctx.times.clone()));
        let parts: Vec<String> = ctx
            .times
            .iter()
            .map(|(k, v)| format!("{k}={:.1}ms", v.as_f64().unwrap_or(0.0)))
            .collect();
        text.push(format!("timings: {}", parts.join(", ")));
    }
    let mut text = text.join("\n");
    text.push('\n');
    Ok(Outcome {
        json: Value::Object(out),
        text,
        exit_code,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_catalog(cmd: Command, name: &str) -> Outcome {
        run(cmd, &catalog_document(name).unwrap(), &Options::default()).unwrap()
    }

    #[test]
    fn kstab_on_del_pezzo() {
        let o = run_catalog(Command::Kstab, "dp4-3A1");
        assert!(o.text.starts_with("Semistable; destabilizer Q=inf, b=(0, 0)"), "{}", o.text);
        assert_eq!(o.exit_code, 0);
    }

    #[test]
    fn soliton_on_threefold() {
        let o = run_catalog(Command::Soliton, "mm-3.21");
        assert!(o.text.starts_with("exists: true; via symmetry criterion (2); xi=("), "{}", o.text);
        assert_eq!(o.json["soliton"]["exists"], json!(true));
    }

    #[test]
    fn unknown_catalog() {
        assert!(matches!(catalog_document("nope"), Err(CliError::UnknownCatalogEntry(_))));
    }

    #[test]
    fn stage_dependency() {
        let doc = parse_input(
            r#"{"box": [[-1], [2]], "entries": [{"point": "0", "pieces": [{"slope": [0], "constant": 1}]}]}"#,
        )
        .unwrap();
        let err = run(Command::Kstab, &doc, &Options::default()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let o = run(Command::Validate, &doc, &Options::default()).unwrap();
        assert_eq!(o.exit_code, 0);
        let o = run(Command::Fano, &doc, &Options::default()).unwrap();
        assert_eq!(o.exit_code, 2);
    }

    #[test]
    fn precision_order() {
        let mut doc = catalog_document("dp4-3A1").unwrap();
        assert_eq!(resolve_precision(None, &doc, None).unwrap(), DEFAULT_DIGITS);
        assert_eq!(resolve_precision(None, &doc, Some("30")).unwrap(), 30);
        doc.precision = Some(40);
        assert_eq!(resolve_precision(None, &doc, Some("30")).unwrap(), 40);
        assert_eq!(resolve_precision(Some(20), &doc, Some("30")).unwrap(), 20);
    }

    #[test]
    fn report_is_deterministic() {
        let a = run_catalog(Command::Report, "dp4-3A1");
        let b = run_catalog(Command::Report, "dp4-3A1");
        assert_eq!(a.text, b.text);
        assert_eq!(a.json, b.json);
    }
}

use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};
use toricq::dirac1d::{
    deformation_sweep, model_index, parse_model_spec, parse_real, Deformation, ModelSpec1D, DEFAULT_GRID_POINTS,
};
use toricq::polytope::DelzantReport;
use toricq::quantize::{level_sweep, localization_report, quantize_with, reduce, verify_qr_many, DelzantMode, QRReport};
use toricq::{parse_polytope, Error, LatticeBox, Polyhedron, Weight, REPORT_SCHEMA};

use crate::{Command, Format, GridArgs, LocalizeArgs, ModelArgs, QuantizeArgs, ReduceArgs, SweepArgs, VerifyArgs};

pub const GRID_ENV: &str = "TORICQ_GRID_N";

pub struct Output {
    pub stdout: String,
    pub code: u8,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { stdout, code: 0 }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub kind: String,
    pub message: String,
}

impl CliError {
    fn usage(kind: &str, message: impl Into<String>) -> Self {
        CliError { code: 2, kind: kind.into(), message: message.into() }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => json!({
                "schema": REPORT_SCHEMA,
                "error": { "kind": self.kind, "message": self.message, "exit_code": self.code },
            })
            .to_string(),
            _ => format!("error[{}]: {}", self.kind, self.message),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Parse { .. }) { 2 } else { 1 };
        CliError { code, kind: e.kind().into(), message: e.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

pub fn format_of(cmd: &Command) -> Format {
    let (f, default) = match cmd {
        Command::Quantize(a) => (a.format, Format::Text),
        Command::Reduce(a) => (a.format, Format::Text),
        Command::VerifyQr(a) => (a.format, Format::Text),
        Command::ModelIndex(a) => (a.format, Format::Text),
        Command::Sweep(a) => (a.format, Format::Csv),
        Command::Localize(a) => (a.format, Format::Text),
    };
    f.unwrap_or(default)
}

pub fn run(cmd: &Command) -> CliResult<Output> {
    let format = format_of(cmd);
    match cmd {
        Command::Quantize(a) => run_quantize(a, format),
        Command::Reduce(a) => run_reduce(a, format),
        Command::VerifyQr(a) => run_verify(a, format),
        Command::ModelIndex(a) => run_model(a, format),
        Command::Sweep(a) => run_sweep(a, format),
        Command::Localize(a) => run_localize(a, format),
    }
}

/// `a..b` (inclusive).
pub fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected LO..HI, got {s:?}"))?;
    let lo = a.trim().parse().map_err(|_| format!("bad integer {a:?}"))?;
    let hi = b.trim().parse().map_err(|_| format!("bad integer {b:?}"))?;
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok((lo, hi))
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntList(pub Vec<i64>);

#[derive(Clone, Debug, PartialEq)]
pub struct RealList(pub Vec<f64>);

/// `a..b` (inclusive) or a comma-separated list.
pub fn parse_int_list(s: &str) -> Result<IntList, String> {
    if s.contains("..") {
        let (lo, hi) = parse_range(s)?;
        return Ok(IntList((lo..=hi).collect()));
    }
    s.split(',').map(|p| p.trim().parse().map_err(|_| format!("bad integer {p:?}"))).collect::<Result<_, _>>().map(IntList)
}

pub fn parse_real_list(s: &str) -> Result<RealList, String> {
    s.split(',').map(|p| parse_real(p).map_err(|e| e.to_string())).collect::<Result<_, _>>().map(RealList)
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::usage("io", format!("cannot read {}: {e}", path.display())))
}

fn load_polytope(path: &Path) -> CliResult<Polyhedron> {
    parse_polytope(&read(path)?).map_err(|e| {
        let mut c = CliError::from(e);
        c.message = format!("{}: {}", path.display(), c.message);
        c
    })
}

fn reject_format(format: Format, allowed: &[Format], cmd: &str) -> CliResult<()> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(CliError::usage("usage", format!("{cmd} does not support --format {format:?}").to_lowercase()))
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn warn_non_delzant(report: &DelzantReport) {
    if !report.is_delzant {
        eprintln!("warning: {}", report.summary());
    }
}

fn run_quantize(a: &QuantizeArgs, format: Format) -> CliResult<Output> {
    reject_format(format, &[Format::Text, Format::Json], "quantize")?;
    let p = load_polytope(&a.polytope)?;
    let mode = if a.allow_non_delzant { DelzantMode::Warn } else { DelzantMode::Strict };
    let (q, report) = quantize_with(&p, mode)?;
    warn_non_delzant(&report);
    if !a.eval.is_empty() {
        let values = a.eval.iter().map(|w| q.evaluate(w).map(|v| (w, v))).collect::<Result<Vec<_>, _>>()?;
        return Ok(Output::ok(match format {
            Format::Json => pretty(&json!({
                "schema": REPORT_SCHEMA,
                "report": "quantize",
                "delzant": report.is_delzant,
                "evaluations": values.iter().map(|(w, v)| json!({"weight": w.coords(), "value": v})).collect::<Vec<_>>(),
            })),
            _ => values.iter().map(|(_, v)| format!("{v}\n")).collect(),
        }));
    }
    let bbox = a.bbox.map(|(lo, hi)| LatticeBox::cube(p.dim(), lo, hi));
    let points = p.lattice_points(bbox.as_ref())?;
    Ok(Output::ok(match format {
        Format::Json => pretty(&json!({
            "schema": REPORT_SCHEMA,
            "report": "quantize",
            "delzant": report.is_delzant,
            "bounded": p.is_bounded(),
            "box": a.bbox.map(|(lo, hi)| [lo, hi]),
            "character": q.to_json()?,
            "support": points.iter().map(|w| w.coords().to_vec()).collect::<Vec<_>>(),
        })),
        _ => {
            let mut s = String::new();
            let scope = if p.is_bounded() { "" } else { " in box" };
            let _ = writeln!(s, "# {} lattice points{scope}, multiplicity 1 each", points.len());
            for w in &points {
                let _ = writeln!(s, "{}", join(w.coords()));
            }
            s
        }
    }))
}

fn join(c: &[i64]) -> String {
    c.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

fn run_reduce(a: &ReduceArgs, format: Format) -> CliResult<Output> {
    reject_format(format, &[Format::Text, Format::Json], "reduce")?;
    let p = load_polytope(&a.polytope)?;
    let r = reduce(&p, &a.xi, a.level)?;
    Ok(Output::ok(match format {
        Format::Json => pretty(&json!({
            "schema": REPORT_SCHEMA,
            "report": "reduce",
            "xi": a.xi.coords(),
            "level": a.level,
            "polytope": r.to_json(),
            "lattice_points": r.lattice_points(None).ok().map(|v| v.len()),
        })),
        _ => r.to_spec_text()?,
    }))
}

fn qr_line(r: &QRReport) -> String {
    let verdict = if r.pass {
        "pass"
    } else if r.regular {
        "FAIL"
    } else {
        "irregular"
    };
    format!("xi={} level={} regular={} lhs={} rhs={} {verdict}\n", r.xi, r.level, r.regular, r.lhs, r.rhs)
}

fn run_verify(a: &VerifyArgs, format: Format) -> CliResult<Output> {
    let p = load_polytope(&a.polytope)?;
    let levels = match a.level {
        Some(l) => vec![l],
        None => level_sweep(&p, &a.xi)?,
    };
    let cases: Vec<(Weight, i64)> = levels.iter().map(|&l| (a.xi.clone(), l)).collect();
    let reports = verify_qr_many(&p, &cases)?;
    // a single requested level must pass; a sweep fails only on regular levels
    let failed = match a.level {
        Some(_) => reports.iter().any(|r| !r.pass),
        None => reports.iter().any(|r| r.regular && !r.pass),
    };
    let stdout = match format {
        Format::Json => pretty(&if a.level.is_some() {
            reports[0].to_json()
        } else {
            json!({
                "schema": REPORT_SCHEMA,
                "report": "verify-qr-sweep",
                "xi": a.xi.coords(),
                "levels": reports.iter().map(QRReport::to_json).collect::<Vec<_>>(),
                "pass": !failed,
            })
        }),
        Format::Csv => {
            let mut s = String::from("xi,level,regular,lhs,rhs,pass\n");
            for r in &reports {
                let _ = writeln!(s, "\"{}\",{},{},{},{},{}", join(r.xi.coords()), r.level, r.regular, r.lhs, r.rhs, r.pass);
            }
            s
        }
        Format::Text => reports.iter().map(qr_line).collect(),
    };
    Ok(Output { stdout, code: failed as u8 })
}

fn default_grid_n() -> CliResult<Option<usize>> {
    match std::env::var(GRID_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::usage("usage", format!("{GRID_ENV} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(None),
    }
}

/// Base spec from a document or from flags, with grid overrides applied.
fn base_spec(
    spec: &Option<std::path::PathBuf>,
    kind: Option<toricq::dirac1d::ModelKind>,
    rho: Option<i64>,
    tau: Option<i64>,
    grid: &GridArgs,
) -> CliResult<ModelSpec1D> {
    let env_n = default_grid_n()?;
    let mut s = match spec {
        Some(path) => parse_model_spec(&read(path)?, env_n).map_err(|e| {
            // a malformed document is an input error
            CliError { code: 2, kind: e.kind().into(), message: format!("{}: {e}", path.display()) }
        })?,
        None => {
            let kind = kind.expect("clap requires --kind without --spec");
            let mut s = ModelSpec1D::new(kind, rho.unwrap_or(0), tau.unwrap_or(0));
            s.grid.n = env_n.unwrap_or(DEFAULT_GRID_POINTS);
            s
        }
    };
    if let Some(r) = rho {
        s.rho = r;
    }
    if let Some(t) = tau {
        s.tau = t;
    }
    if let Some(n) = grid.grid_n {
        s.grid.n = n;
    }
    if let Some(r) = grid.r_max {
        s.grid.r_max = r;
    }
    s.validate()?;
    Ok(s)
}

fn run_model(a: &ModelArgs, format: Format) -> CliResult<Output> {
    reject_format(format, &[Format::Text, Format::Json], "model-index")?;
    if a.spec.is_none() && (a.rho.is_none() || a.tau.is_none()) {
        return Err(CliError::usage("usage", "model-index needs --rho and --tau (or --spec)"));
    }
    let mut spec = base_spec(&a.spec, a.kind, a.rho, a.tau, &a.grid)?;
    if let Some(d) = a.deformation {
        spec.deformation = d;
        spec.validate()?;
    }
    let r = model_index(&spec)?;
    Ok(Output::ok(match format {
        Format::Json => pretty(&json!({
            "schema": REPORT_SCHEMA,
            "report": "model-index",
            "model": spec_json(&spec),
            "result": r.to_json(),
        })),
        _ => format!("{}\n", r.index),
    }))
}

fn spec_json(s: &ModelSpec1D) -> Value {
    json!({
        "kind": s.kind.to_string(),
        "rho": s.rho,
        "tau": s.tau,
        "deformation": s.deformation.to_string(),
        "grid": {"r_max": s.grid.r_max, "n": s.grid.n},
    })
}

fn run_sweep(a: &SweepArgs, format: Format) -> CliResult<Output> {
    let base = base_spec(&a.spec, a.kind, None, None, &a.grid)?;
    let rhos = a.rho.clone().map_or_else(|| vec![base.rho], |l| l.0);
    let taus = a.tau.clone().map(|l| l.0);
    let mut family: Vec<Deformation> = a.deformation.clone();
    family.extend(a.t.iter().flat_map(|l| &l.0).map(|&t| Deformation::ConstantT(t)));
    family.extend(a.epsilon.iter().flat_map(|l| &l.0).map(|&e| Deformation::EpsilonFamily(e)));
    if a.proper {
        family.push(Deformation::ProperFunction);
    }
    if family.is_empty() {
        family.push(base.deformation);
    }
    for d in &family {
        base.with_deformation(*d).validate()?;
    }
    let mut rows = Vec::new();
    let mut all_equal = true;
    for &rho in &rhos {
        let tau_values = taus.clone().unwrap_or_else(|| vec![if a.rho.is_some() { rho } else { base.tau }]);
        for tau in tau_values {
            let spec = ModelSpec1D { rho, tau, ..base };
            spec.validate()?;
            let sweep = deformation_sweep(&spec, &family);
            all_equal &= sweep.all_equal;
            for e in sweep.entries {
                rows.push((rho, tau, e.deformation, e.result));
            }
        }
    }
    let unresolved = rows.iter().filter(|r| r.3.is_err()).count();
    let stdout = match format {
        Format::Csv => {
            let mut s = String::from("rho,tau,deformation,index,gap,resolved\n");
            for (rho, tau, d, r) in &rows {
                match r {
                    Ok(r) => {
                        let _ = writeln!(s, "{rho},{tau},{d},{},{:.6e},true", r.index, r.spectral_gap);
                    }
                    Err(_) => {
                        let _ = writeln!(s, "{rho},{tau},{d},,,false");
                    }
                }
            }
            s
        }
        Format::Json => pretty(&json!({
            "schema": REPORT_SCHEMA,
            "report": "sweep",
            "kind": base.kind.to_string(),
            "grid": {"r_max": base.grid.r_max, "n": base.grid.n},
            "all_equal": all_equal,
            "entries": rows.iter().map(|(rho, tau, d, r)| json!({
                "rho": rho,
                "tau": tau,
                "deformation": d.to_string(),
                "resolved": r.is_ok(),
                "result": r.as_ref().ok().map(|r| r.to_json()),
                "error": r.as_ref().err().map(|e| json!({"kind": e.kind(), "message": e.to_string()})),
            })).collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut s = String::new();
            for (rho, tau, d, r) in &rows {
                match r {
                    Ok(r) => {
                        let _ = writeln!(s, "rho={rho} tau={tau} {d}: index {} (gap {:.3e})", r.index, r.spectral_gap);
                    }
                    Err(e) => {
                        let _ = writeln!(s, "rho={rho} tau={tau} {d}: unresolved ({e})");
                    }
                }
            }
            s
        }
    };
    if unresolved > 0 {
        eprintln!("error[unresolved]: {unresolved} of {} entries unresolved", rows.len());
    }
    Ok(Output { stdout, code: (unresolved > 0) as u8 })
}

fn run_localize(a: &LocalizeArgs, format: Format) -> CliResult<Output> {
    reject_format(format, &[Format::Text, Format::Json], "localize")?;
    let p = load_polytope(&a.polytope)?;
    let r = localization_report(&p, &a.rho)?;
    Ok(Output::ok(match format {
        Format::Json => pretty(&r.to_json()),
        _ => {
            let mut s = String::new();
            let _ = writeln!(s, "fiber over {}: {}", a.rho, r.fiber_contribution);
            for t in &r.boundary_terms {
                let _ = writeln!(s, "{}: {} ({})", t.label(), t.contribution, t.justification);
            }
            let _ = writeln!(s, "total: {}", r.total());
            s
        }
    }))
}

use std::fs;
use std::io::Write;
use std::path::Path;

use k3lab::curves::{self, CurveConfig, SeveriQuery};
use k3lab::families::{roots_of_unity, FamilyParams};
use k3lab::format::{self, FibreReportJson};
use k3lab::kodaira::fibre_report;
use k3lab::modulipath::{self, PathReport, Permutation, TraceOptions};
use k3lab::weierstrass::WeierstrassData;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{self, CliError};
use crate::svg;
use crate::{Command, FamilyArgs, FamilyKind, Format, JobConfig, PathKind};

pub fn run(cfg: &JobConfig) -> Result<(), CliError> {
    match &cfg.command {
        Command::Analyze { input, family, tol } => {
            only(cfg, "analyze", &[Format::Json])?;
            let w = match input {
                Some(path) => {
                    let text = fs::read_to_string(path).map_err(|e| CliError::io("cli::read_input", e))?;
                    format::weierstrass_from_str(&text).map_err(|e| error::format("format::weierstrass_from_str", &e))?
                }
                None => build(family)?,
            };
            emit(cfg, &pretty(&analyze(&w, *tol)?))
        }
        Command::Family { family } => {
            only(cfg, "family", &[Format::Json])?;
            let w = build(family)?;
            emit(cfg, &format!("{}\n", format::weierstrass_to_string(&w)))
        }
        Command::Enumerate { g, s } => {
            only(cfg, "enumerate", &[Format::Jsonl])?;
            let members = curves::enumerate_rational_members(*g, *s).map_err(|e| error::curves("curves::enumerate_rational_members", &e))?;
            let mut out = String::new();
            let mut n = 0u64;
            for c in members {
                out.push_str(&serde_json::to_string(&c).expect("plain data"));
                out.push('\n');
                n += 1;
            }
            out.push_str(&serde_json::json!({ "count": n }).to_string());
            out.push('\n');
            emit(cfg, &out)
        }
        Command::Count { gmax } => {
            let rows: Vec<(usize, String)> = curves::yau_zaslow(*gmax).iter().enumerate().map(|(g, n)| (g, n.to_string())).collect();
            match only(cfg, "count", &[Format::Csv, Format::Json])? {
                Format::Json => {
                    let table: Vec<_> = rows.iter().map(|(g, n)| serde_json::json!({ "g": g, "n_g": n })).collect();
                    emit(cfg, &pretty(&table))
                }
                _ => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["g", "n_g"]).expect("in memory");
                    for (g, n) in &rows {
                        w.write_record([g.to_string(), n.clone()]).expect("in memory");
                    }
                    emit(cfg, &String::from_utf8(w.into_inner().expect("in memory")).expect("ascii"))
                }
            }
        }
        Command::Severi { quartic, l, g, k, h } => {
            only(cfg, "severi", &[Format::Json])?;
            emit(cfg, &pretty(&severi(*quartic, *l, *g, *k, *h)?))
        }
        Command::Trace { path, m, g, sigma, k_param, steps, sep, eps_cont, svg } => {
            let format = only(cfg, "trace", &[Format::Jsonl, Format::Svg])?;
            let kind = path.unwrap_or(if sigma.is_some() { PathKind::Permute } else { PathKind::Connect });
            let opts = TraceOptions { steps: *steps, eps_sep: *sep, k: *k_param, ..TraceOptions::from_env() };
            let report = trace(kind, m, *g, sigma.as_deref(), *k_param, &opts, *eps_cont)?;
            if let Some(p) = svg {
                write_file(p, &svg::trajectories(&report.samples))?;
            }
            let body = match format {
                Format::Svg => svg::trajectories(&report.samples),
                _ => format::samples_to_jsonl(&report.samples),
            };
            emit(cfg, &body)?;
            check(&report)
        }
    }
}

/// The requested format if allowed, else the first allowed one.
fn only(cfg: &JobConfig, command: &str, allowed: &[Format]) -> Result<Format, CliError> {
    match cfg.format {
        None => Ok(allowed[0]),
        Some(f) if allowed.contains(&f) => Ok(f),
        Some(f) => Err(CliError::validation("cli::config", "UnsupportedFormat", format!("{command} cannot write {f:?}"))),
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data");
    s.push('\n');
    s
}

fn write_file(path: &Path, body: &str) -> Result<(), CliError> {
    fs::write(path, body).map_err(|e| CliError::io("cli::write_output", e))
}

fn emit(cfg: &JobConfig, body: &str) -> Result<(), CliError> {
    match &cfg.output {
        Some(p) => write_file(p, body),
        None => std::io::stdout().lock().write_all(body.as_bytes()).map_err(|e| CliError::io("cli::write_output", e)),
    }
}

fn build(f: &FamilyArgs) -> Result<WeierstrassData, CliError> {
    let kind = f.family.ok_or_else(|| CliError::validation("cli::config", "MissingInput", "give --input or --family"))?;
    let k = match kind {
        FamilyKind::Cuspidal => Complex64::new(0.0, 0.0),
        FamilyKind::Nodal => Complex64::new(f.k_param, 0.0),
    };
    let op = if kind == FamilyKind::Cuspidal { "families::cuspidal_family" } else { "families::nodal_family" };
    FamilyParams::roots_of_unity(k).build().map_err(|e| error::family(op, &e))
}

fn analyze(w: &WeierstrassData, tol: f64) -> Result<FibreReportJson, CliError> {
    let report = fibre_report(w).map_err(|e| error::kodaira("kodaira::fibre_report", &e))?;
    let mut json = FibreReportJson::from_report(&report);
    for (out, rec) in json.fibres.iter_mut().zip(&report.fibres) {
        let smooth = w.smoothness_probe(&rec.position, tol).map_err(|e| error::weierstrass("weierstrass::smoothness_probe", &e))?;
        out.probe_smooth = Some(smooth);
    }
    Ok(json)
}

fn severi(quartic: bool, l: Option<u32>, g: Option<u64>, k: u64, h: Option<u64>) -> Result<serde_json::Value, CliError> {
    if quartic {
        let l = l.ok_or_else(|| CliError::validation("cli::config", "MissingInput", "--quartic needs --l"))?;
        let q = curves::quartic_severi_numbers(l).map_err(|e| error::curves("curves::quartic_severi_numbers", &e))?;
        return Ok(serde_json::to_value(q).expect("plain data"));
    }
    let g = g.ok_or_else(|| CliError::validation("cli::config", "MissingInput", "give --quartic --l, or --g"))?;
    let mut out = serde_json::json!({ "g": g, "k": k });
    if let Some(h) = h {
        let n = curves::severi_numbers(&SeveriQuery { g, k, h }).map_err(|e| error::curves("curves::severi_numbers", &e))?;
        out["h"] = h.into();
        out["severi"] = serde_json::to_value(n).expect("plain data");
    }
    let v = curves::very_ample_and_bound(g, k).map_err(|e| error::curves("curves::very_ample_and_bound", &e))?;
    out["very_ample"] = serde_json::to_value(v).expect("plain data");
    Ok(out)
}

fn trace(kind: PathKind, m: &[u32], g: Option<u32>, sigma: Option<&str>, k: f64, opts: &TraceOptions, eps_cont: Option<f64>) -> Result<PathReport, CliError> {
    if m.len() > 12 {
        return Err(CliError::validation("cli::config", "InvalidConfig", format!("--m lists {} fibres, at most 12", m.len())));
    }
    let mut mult = m.to_vec();
    mult.resize(12, 0);
    let total = mult.iter().sum();
    let cfg = CurveConfig::new(g.unwrap_or(total), mult).map_err(|e| error::curves("curves::CurveConfig::new", &e))?;
    let report = match kind {
        PathKind::Connect => modulipath::connect_to_canonical(&cfg, k, opts).map_err(|e| error::path("modulipath::connect_to_canonical", &e))?,
        PathKind::Permute => {
            let text = sigma.ok_or_else(|| CliError::validation("cli::config", "MissingInput", "--path permute needs --sigma"))?;
            let p: Permutation = text.parse().map_err(|e| error::path("modulipath::Permutation::from_str", &e))?;
            modulipath::permutation_path(&roots_of_unity(), &p, &cfg, k, opts).map_err(|e| error::path("modulipath::permutation_path", &e))?
        }
        PathKind::Cusp => modulipath::cusp_limit_path(&roots_of_unity(), &cfg, k, opts).map_err(|e| error::path("modulipath::cusp_limit_path", &e))?,
        PathKind::Transfer => modulipath::node_transfer_path(&cfg, k, opts).map_err(|e| error::path("modulipath::node_transfer_path", &e))?,
    };
    Ok(match eps_cont {
        Some(e) => modulipath::verify_path_with(report, total as u64, e),
        None => report,
    })
}

fn check(report: &PathReport) -> Result<(), CliError> {
    if report.is_valid() {
        return Ok(());
    }
    let first = report.invariant_violations.first().map_or_else(String::new, |v| format!(": sample {} {:?}: {}", v.sample, v.kind, v.detail));
    Err(CliError::numeric(
        "modulipath::verify_path",
        "InvalidPath",
        format!("{} violations, continuous = {}, endpoint residual {:e}{first}", report.invariant_violations.len(), report.continuous, report.endpoint_residual),
    ))
}

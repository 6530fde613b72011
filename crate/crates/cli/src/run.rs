//! Command dispatch, artifact writing and exit-status mapping.

use std::fs;
use std::path::PathBuf;

use divisor_maxcut::certificate::build_embedding;
use divisor_maxcut::literal::{refuted, run_literal_checks};
use divisor_maxcut::rational::{format_rational, int};
use divisor_maxcut::rounding::factorize_embedding;
use divisor_maxcut::{
    bounds_closed_form, lattice_graph, performance_ratio, verify_srmg, verify_strong_duality, spectrum_from_srmg,
    verify_spectrum_exact, Error, Family, MinusculeParams,
};
use serde_json::Value;

use crate::config::{CommandKind, OutputFormat, RunConfig, Target};
use crate::drivers::{best_cut, simulate_parallel};
use crate::formats::{self, ReportRow};

/// Families swept by `full-report` when no target is given.
pub fn default_report_targets() -> Vec<Target> {
    let mut out = Vec::new();
    for (r, s) in [(4, 1), (4, 2), (5, 1), (5, 2), (5, 3), (6, 1), (6, 2)] {
        out.push(Target::Family(Family::TypeA { r, s }));
    }
    for r in 5..=8 {
        out.push(Target::Family(Family::TypeD { r }));
    }
    out.push(Target::Family(Family::E6));
    out.push(Target::Family(Family::E7));
    out
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad input: unknown family, parameters outside the theory, size limits.
    Validation(String),
    /// An exact identity failed; `record` is the machine-readable discrepancy.
    Refutation { message: String, record: Value },
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Refutation { .. } => 3,
            CliError::Io(_) => 1,
        }
    }

    fn from_core(context: &str, e: Error) -> CliError {
        if e.is_refutation() {
            CliError::Refutation { message: format!("{context}: {e}"), record: formats::discrepancy_json(context, &e) }
        } else {
            CliError::Validation(format!("{context}: {e}"))
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "validation error: {m}"),
            CliError::Refutation { message, .. } => write!(f, "refuted: {message}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

/// What a successful run produced.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Outcome {
    pub stdout: String,
    pub artifact: Option<PathBuf>,
}

struct Resolved {
    label: String,
    params: MinusculeParams,
}

fn resolve(cfg: &RunConfig, command: CommandKind) -> Result<Vec<Resolved>, CliError> {
    let targets = if cfg.targets.is_empty() && command == CommandKind::FullReport {
        default_report_targets()
    } else {
        cfg.targets.clone()
    };
    if targets.is_empty() {
        return Err(CliError::Validation("no target given: pass --abc A,B,C or --family NAME".into()));
    }
    targets
        .iter()
        .map(|t| {
            let params = t.params().map_err(|e| CliError::from_core(&t.to_string(), e))?;
            Ok(Resolved { label: params.family().to_string(), params })
        })
        .collect()
}

fn single_or_array(mut values: Vec<Value>) -> Value {
    if values.len() == 1 {
        values.pop().expect("one value")
    } else {
        Value::Array(values)
    }
}

/// Flat objects become CSV rows; nested values are embedded as JSON text.
pub fn values_csv(values: &[Value]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Option<Vec<String>> = None;
    for v in values {
        let obj = v.as_object().ok_or_else(|| CliError::Validation("CSV needs one object per row".into()))?;
        let keys: Vec<String> = obj.keys().cloned().collect();
        match &header {
            None => {
                w.write_record(&keys).map_err(|e| CliError::Io(e.to_string()))?;
                header = Some(keys.clone());
            }
            Some(h) if *h != keys => return Err(CliError::Validation("CSV rows have different columns".into())),
            Some(_) => {}
        }
        let cells: Vec<String> = obj
            .values()
            .map(|x| match x {
                Value::String(s) => s.clone(),
                Value::Null => String::new(),
                other => other.to_string(),
            })
            .collect();
        w.write_record(&cells).map_err(|e| CliError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn render(cfg: &RunConfig, values: Vec<Value>) -> Result<String, CliError> {
    match cfg.format {
        OutputFormat::Json => Ok(formats::to_text(&single_or_array(values))),
        OutputFormat::Csv => values_csv(&values),
    }
}

fn emit(cfg: &RunConfig, text: String, summary: String) -> Result<Outcome, CliError> {
    match &cfg.out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
            }
            fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            Ok(Outcome { stdout: format!("{summary}wrote {}\n", path.display()), artifact: Some(path.clone()) })
        }
        None => Ok(Outcome { stdout: format!("{summary}{text}"), artifact: None }),
    }
}

fn construct(cfg: &RunConfig, targets: &[Resolved]) -> Result<Outcome, CliError> {
    let mut values = Vec::new();
    let mut graphs = Vec::new();
    for t in targets {
        let (_, g) = lattice_graph(&t.params).map_err(|e| CliError::from_core(&t.label, e))?;
        values.push(formats::graph_json(&g));
        graphs.push(g);
    }
    let text = match cfg.format {
        OutputFormat::Json => formats::to_text(&single_or_array(values)),
        OutputFormat::Csv if graphs.len() == 1 => {
            formats::graph_csv(&graphs[0]).map_err(|e| CliError::Io(e.to_string()))?
        }
        OutputFormat::Csv => return Err(CliError::Validation("CSV edge lists take exactly one target".into())),
    };
    emit(cfg, text, String::new())
}

fn certify_one(t: &Resolved) -> Result<Value, CliError> {
    let duality = verify_strong_duality(&t.params).map_err(|e| CliError::from_core(&t.label, e))?;
    let bounds = bounds_closed_form(&t.params).map_err(|e| CliError::from_core(&t.label, e))?;
    let alpha_g =
        performance_ratio(&duality.lambda1, &duality.degree).map_err(|e| CliError::from_core(&t.label, e))?;
    Ok(formats::certificate_json(&t.label, &t.params.to_string(), &duality, &bounds, alpha_g))
}

fn spectrum_one(t: &Resolved) -> Result<Value, CliError> {
    let ctx = |e| CliError::from_core(&t.label, e);
    let (_, g) = lattice_graph(&t.params).map_err(ctx)?;
    let cert = verify_srmg(&g).map_err(ctx)?;
    let spec = spectrum_from_srmg(&cert).map_err(ctx)?;
    verify_spectrum_exact(&g, &spec).map_err(ctx)?;
    Ok(formats::spectrum_json(&t.label, &cert, &spec))
}

fn bounds_one(t: &Resolved) -> Result<Value, CliError> {
    let b = bounds_closed_form(&t.params).map_err(|e| CliError::from_core(&t.label, e))?;
    Ok(formats::bounds_json(&t.label, &t.params.to_string(), &b))
}

/// Construction, certification and rounding for one family; the oracle is optional.
pub fn report_row(p: &MinusculeParams, samples: u64, seed: u64, oracle_restarts: Option<u64>) -> Result<ReportRow, CliError> {
    let label = p.family().to_string();
    let ctx = |e| CliError::from_core(&label, e);
    let (divs, g) = lattice_graph(p).map_err(ctx)?;
    verify_strong_duality(p).map_err(ctx)?;
    let bounds = bounds_closed_form(p).map_err(ctx)?;
    let f = factorize_embedding(&build_embedding(p, &divs, &g).map_err(ctx)?).map_err(ctx)?;
    let stats = simulate_parallel(&g, &f, samples, seed).map_err(ctx)?;
    stats.verify_upper(bounds.u_floor).map_err(ctx)?;
    let oracle = match oracle_restarts {
        Some(restarts) => {
            let r = best_cut(&g, restarts, seed).map_err(ctx)?;
            let upper = int(bounds.u_floor);
            if r.value > upper || (r.exact && r.value < int(bounds.ell_ceil)) {
                return Err(ctx(Error::Inconsistency {
                    what: "oracle outside [ceil(l), floor(u)]",
                    left: format_rational(&r.value),
                    right: format!("[{}, {}]", bounds.ell_ceil, bounds.u_floor),
                }));
            }
            Some(r)
        }
        None => None,
    };
    Ok(ReportRow {
        family: label.clone(),
        params: p.to_string(),
        n: g.n(),
        samples: stats.samples,
        seed,
        mean: stats.mean,
        cv: stats.coefficient_of_variation,
        max: format_rational(&stats.max_weight),
        u_floor: bounds.u_floor,
        ell_ceil: bounds.ell_ceil,
        u: format_rational(&bounds.u),
        ell: bounds.ell_value,
        degenerate: stats.degenerate,
        oracle: oracle.as_ref().map(|r| format_rational(&r.value)),
        oracle_method: oracle.as_ref().map(|r| r.method.as_str().to_owned()),
    })
}

fn rows_output(cfg: &RunConfig, rows: &[ReportRow]) -> Result<Outcome, CliError> {
    let text = match cfg.format {
        OutputFormat::Json => formats::to_text(&formats::rows_json(rows)),
        OutputFormat::Csv => formats::rows_csv(rows).map_err(|e| CliError::Io(e.to_string()))?,
    };
    emit(cfg, text, String::new())
}

fn oracle(cfg: &RunConfig, targets: &[Resolved]) -> Result<Outcome, CliError> {
    let mut values = Vec::new();
    let mut summary = String::new();
    for t in targets {
        let ctx = |e| CliError::from_core(&t.label, e);
        let (_, g) = lattice_graph(&t.params).map_err(ctx)?;
        let r = best_cut(&g, cfg.restarts, cfg.seed).map_err(ctx)?;
        let how = if r.exact { "exhaustive, exact" } else { "local search, lower bound" };
        summary.push_str(&format!("{}: maxcut = {} ({how})\n", t.label, format_rational(&r.value)));
        values.push(formats::oracle_json(&t.label, &g, &r));
    }
    if cfg.out.is_some() {
        let text = render(cfg, values)?;
        emit(cfg, text, summary)
    } else {
        Ok(Outcome { stdout: summary, artifact: None })
    }
}

fn literal(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let findings = run_literal_checks().map_err(|e| CliError::from_core("literal checks", e))?;
    let record = formats::findings_json(&findings);
    let text = formats::to_text(&record);
    let outcome = emit(cfg, text, String::new())?;
    let count = refuted(&findings);
    if count > 0 {
        return Err(CliError::Refutation {
            message: format!("{count} of {} stated formulas refuted", findings.len()),
            record,
        });
    }
    Ok(outcome)
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    if cfg.check_paper_literal {
        return literal(cfg);
    }
    let command = cfg
        .command
        .ok_or_else(|| CliError::Validation("no command given (try --help)".into()))?;
    let targets = resolve(cfg, command)?;
    match command {
        CommandKind::Construct => construct(cfg, &targets),
        CommandKind::Certify => {
            let values = targets.iter().map(certify_one).collect::<Result<Vec<_>, _>>()?;
            emit(cfg, render(cfg, values)?, String::new())
        }
        CommandKind::Spectrum => {
            let values = targets.iter().map(spectrum_one).collect::<Result<Vec<_>, _>>()?;
            emit(cfg, render(cfg, values)?, String::new())
        }
        CommandKind::Bounds => {
            let values = targets.iter().map(bounds_one).collect::<Result<Vec<_>, _>>()?;
            emit(cfg, render(cfg, values)?, String::new())
        }
        CommandKind::Simulate => {
            if cfg.samples == 0 {
                return Err(CliError::Validation("--samples must be at least 1".into()));
            }
            let rows = targets
                .iter()
                .map(|t| report_row(&t.params, cfg.samples, cfg.seed, None))
                .collect::<Result<Vec<_>, _>>()?;
            rows_output(cfg, &rows)
        }
        CommandKind::Oracle => {
            if cfg.restarts == 0 {
                return Err(CliError::Validation("--restarts must be at least 1".into()));
            }
            oracle(cfg, &targets)
        }
        CommandKind::FullReport => {
            if cfg.samples == 0 || cfg.restarts == 0 {
                return Err(CliError::Validation("--samples and --restarts must be at least 1".into()));
            }
            let rows = targets
                .iter()
                .map(|t| report_row(&t.params, cfg.samples, cfg.seed, Some(cfg.restarts)))
                .collect::<Result<Vec<_>, _>>()?;
            rows_output(cfg, &rows)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(command: CommandKind, t: Target) -> RunConfig {
        RunConfig::new(command, [t])
    }

    #[test]
    fn certify_e6() {
        let out = run(&cfg(CommandKind::Certify, Target::Abc(2, 3, 3))).unwrap();
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["sd_primal"], "405/4");
        assert_eq!(v["sd_dual"], "405/4");
        assert_eq!(v["lambda1"], "-5");
        assert_eq!((v["ell_ceil"].as_i64(), v["u_floor"].as_i64()), (Some(90), Some(101)));
    }

    #[test]
    fn oracle_twelve() {
        let out = run(&cfg(CommandKind::Oracle, Target::Abc(2, 1, 3))).unwrap();
        assert!(out.stdout.contains("maxcut = 12"), "{}", out.stdout);
    }

    #[test]
    fn exit_statuses() {
        let err = run(&cfg(CommandKind::Bounds, Target::Abc(2, 4, 4))).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("not a finite root system"));
        assert_eq!(run(&RunConfig::default()).unwrap_err().exit_code(), 2);
        let mut literal = RunConfig::default();
        literal.check_paper_literal = true;
        let err = run(&literal).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        let CliError::Refutation { record, .. } = err else { panic!() };
        assert!(record["refuted"].as_u64().unwrap() > 0);
    }

    #[test]
    fn csv_for_flat_objects() {
        let mut c = cfg(CommandKind::Bounds, Target::Family(Family::TypeD { r: 5 }));
        c.targets.push(Target::Family(Family::E6));
        c.format = OutputFormat::Csv;
        let out = run(&c).unwrap();
        let lines: Vec<&str> = out.stdout.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("ell,ell_ceil,"));
    }
}

use std::fs;
use std::io::Write;
use std::path::Path;

use bhlower_core::certify::is_family_form;
use bhlower_core::format::{parse_form, serialize_form};
use bhlower_core::{
    build_extremal_form, certify_lower_bound, exhaustive_search, family_certificate,
    family_norm_certificate, hill_climb, render_table, summary_table, sup_norm_exact,
    verify_certificate, Certificate, CoeffTensor, Error, NormMethod, SearchReport, SearchSpace,
    Strategy, TableFormat,
};

use crate::{Command, RunConfig};

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Argument(_) | Error::Dimension(_) | Error::Parse(_) | Error::Io(_) => 1,
            Error::Resource { .. } => 2,
            Error::Consistency(_) => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<(), Failure>;

fn argument(msg: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: msg.into(),
    }
}

fn emit(cfg: &RunConfig, text: &str) -> Outcome {
    match &cfg.out {
        Some(path) => fs::write(path, text).map_err(|e| Error::Io(e).into()),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::Io(e).into())
        }
    }
}

fn read_form(path: &Path) -> Result<CoeffTensor, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| argument(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_form(&text)?)
}

fn parse_method(s: &str) -> Result<NormMethod, Failure> {
    match s {
        "exact" | "exhaustive" => Ok(NormMethod::Exhaustive),
        "recursive" | "recursive-certificate" => Ok(NormMethod::RecursiveCertificate),
        other => Err(argument(format!(
            "unknown method {other:?} (expected exact or recursive)"
        ))),
    }
}

/// Documents are JSON unless `--format text` asks for a short summary.
fn wants_text(cfg: &RunConfig) -> Result<bool, Failure> {
    match cfg.format.as_deref() {
        None | Some("json") => Ok(false),
        Some("text") => Ok(true),
        Some(other) => Err(argument(format!(
            "unknown format {other:?} (expected json or text)"
        ))),
    }
}

fn certificate_summary(c: &Certificate) -> String {
    format!(
        "m = {}\ndims = {:?}\nnorm = {} ({})\npower_sum = {}\nexponent = {}\nC_{} >= {}\n",
        c.m,
        c.dims,
        c.sup_norm.value,
        c.sup_norm.method,
        c.power_sum.map_or("-".to_string(), |k| k.to_string()),
        c.exponent,
        c.m,
        c.lower_bound
    )
}

pub fn run(command: &Command, cfg: &RunConfig) -> Outcome {
    let core = &cfg.core;
    match command {
        Command::Construct { m } => {
            let t = build_extremal_form(*m, core)?;
            emit(cfg, &serialize_form(&t))?;
            if let Some(path) = &cfg.out {
                eprintln!(
                    "wrote T_{m} ({} entries) to {}",
                    t.nonzero_count(),
                    path.display()
                );
            }
            Ok(())
        }
        Command::Norm { form, method } => {
            let t = read_form(form)?;
            let result = match parse_method(method)? {
                NormMethod::Exhaustive => sup_norm_exact(&t, core)?,
                NormMethod::RecursiveCertificate => {
                    if !is_family_form(&t, core)? {
                        return Err(argument(
                            "--method recursive only applies to the extremal family T_m",
                        ));
                    }
                    family_norm_certificate(t.arity() as u32, core)?
                }
            };
            if wants_text(cfg)? {
                emit(
                    cfg,
                    &format!(
                        "norm = {} ({})\nwitness = {:?}\n",
                        result.value, result.method, result.witness
                    ),
                )
            } else {
                emit(cfg, &bhlower_core::format::to_document(&result))
            }
        }
        Command::Certify { m, form, method } => {
            let cert = match (m, form) {
                (Some(m), None) => match parse_method(method.as_deref().unwrap_or("recursive"))? {
                    NormMethod::RecursiveCertificate => family_certificate(*m, core)?,
                    NormMethod::Exhaustive => {
                        let t = build_extremal_form(*m, core)?;
                        certify_lower_bound(&t, NormMethod::Exhaustive, core)?
                    }
                },
                (None, Some(path)) => {
                    let t = read_form(path)?;
                    certify_lower_bound(
                        &t,
                        parse_method(method.as_deref().unwrap_or("exact"))?,
                        core,
                    )?
                }
                _ => return Err(argument("give exactly one of --m or --form")),
            };
            if wants_text(cfg)? {
                emit(cfg, &certificate_summary(&cert))
            } else {
                emit(cfg, &cert.to_json())
            }
        }
        Command::Table { max_m } => {
            let format: TableFormat = cfg.format.as_deref().unwrap_or("text").parse()?;
            let rows = summary_table(*max_m, core)?;
            emit(cfg, &render_table(&rows, format))
        }
        Command::Search {
            n,
            m,
            strategy,
            alphabet,
            restarts,
            start,
        } => {
            let space = SearchSpace::new(*n, *m, alphabet.clone(), cfg.search_budget, cfg.seed)?;
            let report = match strategy.parse::<Strategy>()? {
                Strategy::Exhaustive => {
                    if start.is_some() {
                        return Err(argument("--start only applies to hillclimb"));
                    }
                    exhaustive_search(&space, core)?
                }
                Strategy::HillClimb => {
                    let initial = start.as_deref().map(read_form).transpose()?;
                    hill_climb(&space, *restarts, initial.as_ref(), core)?
                }
            };
            if wants_text(cfg)? {
                emit(
                    cfg,
                    &format!(
                        "strategy = {:?}\nevaluations = {}\ntruncated = {}\nbest ratio = {}\n{}",
                        report.strategy,
                        report.evaluations,
                        report.truncated,
                        report.best_ratio,
                        certificate_summary(&report.best)
                    ),
                )
            } else {
                emit(cfg, &report.to_json())
            }
        }
        Command::Verify { path } => {
            let text = fs::read_to_string(path)
                .map_err(|e| argument(format!("cannot read {}: {e}", path.display())))?;
            let value: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| argument(format!("malformed document: {e}")))?;
            let cert = if value.get("best").is_some() {
                let report = SearchReport::from_json(&text)?;
                let form = CoeffTensor::try_from(report.form.clone())?;
                if bhlower_core::format::form_digest(&form) != report.best.form_digest {
                    return Err(Failure {
                        code: 3,
                        message: "verification failed on `form`: report form does not match its certificate".into(),
                    });
                }
                report.best
            } else {
                Certificate::from_json(&text)?
            };
            match verify_certificate(&cert, core) {
                Ok(()) => emit(
                    cfg,
                    &format!("PASS m = {} C_{} >= {}\n", cert.m, cert.m, cert.lower_bound),
                ),
                Err(e) => Err(Failure {
                    code: 3,
                    message: e.to_string(),
                }),
            }
        }
    }
}

//! Lower/upper bound table for the real Bohnenblust–Hille constants.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::certify::{family_certificate, LowerBound};
use crate::config::Config;
use crate::dyadic::DyadicPower;
use crate::error::{Error, Result};

/// Best published upper bounds for `C_m` (real scalars), `m = 2..=10`, as
/// exponents `p/q` of `2^(p/q)`. Literature data, not computed here.
const LITERATURE_UPPER: [(u32, i64, i64); 9] = [
    (2, 1, 2),
    (3, 20, 24),
    (4, 32, 32),
    (5, 48, 40),
    (6, 64, 48),
    (7, 84, 56),
    (8, 104, 64),
    (9, 128, 72),
    (10, 152, 80),
];

/// Stored upper bound for `C_m`, if the literature table covers `m`.
pub fn literature_upper_bound(m: u32) -> Option<DyadicPower> {
    LITERATURE_UPPER
        .iter()
        .find(|(k, _, _)| *k == m)
        .map(|&(_, p, q)| DyadicPower::new(p, q).expect("positive denominators"))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsRow {
    pub m: u32,
    pub lower_bound: DyadicPower,
    pub upper_bound: Option<DyadicPower>,
    pub lower_float: f64,
    pub upper_float: Option<f64>,
}

/// Rows `m = 2..=max_m`: certified family lower bounds next to the stored
/// upper bounds.
pub fn summary_table(max_m: u32, cfg: &Config) -> Result<Vec<BoundsRow>> {
    if max_m < 2 {
        return Err(Error::argument(format!(
            "max_m must be at least 2, got {max_m}"
        )));
    }
    (2..=max_m)
        .map(|m| {
            let cert = family_certificate(m, cfg)?;
            let lower = match cert.lower_bound {
                LowerBound::Dyadic(d) => d,
                LowerBound::Float { .. } => {
                    return Err(Error::consistency(format!(
                        "family bound for m = {m} is not dyadic"
                    )))
                }
            };
            let upper = literature_upper_bound(m);
            if let Some(u) = upper {
                if lower > u {
                    return Err(Error::consistency(format!(
                        "lower bound {lower} exceeds the literature upper bound {u} for m = {m}"
                    )));
                }
            }
            Ok(BoundsRow {
                m,
                lower_bound: lower,
                upper_bound: upper,
                lower_float: lower.to_f64(),
                upper_float: upper.map(|u| u.to_f64()),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Text,
    Csv,
    Markdown,
}

impl FromStr for TableFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(TableFormat::Text),
            "csv" => Ok(TableFormat::Csv),
            "md" | "markdown" => Ok(TableFormat::Markdown),
            other => Err(Error::argument(format!(
                "unknown table format {other:?} (expected text, csv or md)"
            ))),
        }
    }
}

/// Text and markdown print 3 decimals; CSV prints full precision.
pub fn render_table(rows: &[BoundsRow], format: TableFormat) -> String {
    let mut out = String::new();
    match format {
        TableFormat::Text => {
            let _ = writeln!(
                out,
                "{:>3}  {:>7}          {:>7}  {:<12}  upper exact",
                "m", "lower", "upper", "lower exact"
            );
            for r in rows {
                let (rel, upper, upper_exact) = match r.upper_bound {
                    Some(u) if u == r.lower_bound => {
                        ("=", format!("{:.3}", u.to_f64()), u.to_string())
                    }
                    Some(u) => ("<=", format!("{:.3}", u.to_f64()), u.to_string()),
                    None => ("", "-".to_string(), "-".to_string()),
                };
                let lrel = if rel == "=" { "=" } else { "<=" };
                let _ = writeln!(
                    out,
                    "{:>3}  {:>7.3} {:>2} {:<4} {:<2} {:>7}  {:<12}  {}",
                    r.m,
                    r.lower_float,
                    lrel,
                    format!("C_{}", r.m),
                    rel,
                    upper,
                    r.lower_bound.to_string(),
                    upper_exact
                );
            }
        }
        TableFormat::Csv => {
            out.push_str("m,lower,upper,lower_exact,upper_exact\n");
            for r in rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.m,
                    r.lower_float,
                    r.upper_float.map(|u| u.to_string()).unwrap_or_default(),
                    r.lower_bound,
                    r.upper_bound.map(|u| u.to_string()).unwrap_or_default()
                );
            }
        }
        TableFormat::Markdown => {
            out.push_str("| m | lower | upper | lower (exact) | upper (exact) |\n");
            out.push_str("|---|---|---|---|---|\n");
            for r in rows {
                let _ = writeln!(
                    out,
                    "| {} | {:.3} | {} | {} | {} |",
                    r.m,
                    r.lower_float,
                    r.upper_float
                        .map(|u| format!("{u:.3}"))
                        .unwrap_or_else(|| "-".into()),
                    r.lower_bound,
                    r.upper_bound
                        .map(|u| u.to_string())
                        .unwrap_or_else(|| "-".into())
                );
            }
        }
    }
    out
}

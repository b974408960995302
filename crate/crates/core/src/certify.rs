//! Lower-bound certificates for `C_m`.
//!
//! For any nonzero m-linear form `T`, the inequality
//! `(Σ |a|^{2m/(m+1)})^{(m+1)/(2m)} ≤ C_m ‖T‖` forces
//! `C_m ≥ mixed_norm(T) / ‖T‖`. A [`Certificate`] records every ingredient of
//! that ratio so it can be re-checked independently.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::dyadic::DyadicPower;
use crate::error::{Error, Result};
use crate::family::build_extremal_form;
use crate::format::{form_digest, FormDoc};
use crate::norms::{
    bh_exponent, family_norm_certificate, mixed_norm, sup_norm_exact, NormMethod, NormResult,
};
use crate::table::literature_upper_bound;
use crate::tensor::CoeffTensor;
use crate::ARTIFACT_VERSION;

/// Slack allowed above a literature upper bound before a float certificate
/// is rejected as an engine bug.
pub const LITERATURE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LowerBound {
    /// Exact `2^(p/q)`, serialized as `{"two_exp": "p/q"}`.
    Dyadic(DyadicPower),
    /// Serialized as `{"float": x}`.
    Float { float: f64 },
}

impl LowerBound {
    pub fn value(&self) -> f64 {
        match self {
            LowerBound::Dyadic(d) => d.to_f64(),
            LowerBound::Float { float } => *float,
        }
    }
}

impl std::fmt::Display for LowerBound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LowerBound::Dyadic(d) => write!(f, "{d} ≈ {:.6}", d.to_f64()),
            LowerBound::Float { float } => write!(f, "{float}"),
        }
    }
}

mod rational_str {
    use num_rational::Rational64;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational64, D::Error> {
        let s = String::deserialize(d)?;
        let (p, q) = s
            .split_once('/')
            .ok_or_else(|| serde::de::Error::custom(format!("expected p/q, got {s:?}")))?;
        let p: i64 = p.trim().parse().map_err(serde::de::Error::custom)?;
        let q: i64 = q.trim().parse().map_err(serde::de::Error::custom)?;
        if q <= 0 {
            return Err(serde::de::Error::custom("denominator must be positive"));
        }
        Ok(Rational64::new(p, q))
    }
}

/// A re-checkable lower bound for `C_m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub m: u32,
    pub dims: Vec<usize>,
    pub form_digest: String,
    pub sup_norm: NormResult,
    /// `Σ |a|^p` when every coefficient is 0 or ±1.
    pub power_sum: Option<u64>,
    #[serde(with = "rational_str")]
    pub exponent: Rational64,
    pub lower_bound: LowerBound,
    pub lower_bound_decimal: f64,
    /// The certified form. Absent for `T_m`, which is rebuilt from `m`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<FormDoc>,
    pub artifact_version: String,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        crate::format::to_document(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// True when `form` is exactly `T_m` for its arity.
pub fn is_family_form(form: &CoeffTensor, cfg: &Config) -> Result<bool> {
    let m = form.arity() as u32;
    if m < 2 || m > cfg.max_m || form.dims().iter().any(|&d| d != 1usize << (m - 1)) {
        return Ok(false);
    }
    if form.nonzero_count() != 1usize << (2 * (m - 1)) {
        return Ok(false);
    }
    Ok(build_extremal_form(m, cfg)? == *form)
}

/// `mixed / norm`, exact when both are powers of two.
fn lower_bound_of(
    form: &CoeffTensor,
    norm: &NormResult,
) -> Result<(Option<u64>, Rational64, LowerBound)> {
    let m = form.arity() as u32;
    let exponent = bh_exponent(m)?;
    let mixed = mixed_norm(form, exponent)?;
    if norm.value <= 0 {
        return Err(Error::consistency("nonzero form with non-positive norm"));
    }
    let exact = mixed
        .dyadic()
        .zip(DyadicPower::from_integer(norm.value as u64))
        .map(|(num, den)| num / den);
    let lower = match exact {
        Some(d) => LowerBound::Dyadic(d),
        None => LowerBound::Float {
            float: mixed.value / norm.value as f64,
        },
    };
    Ok((mixed.power_sum, exponent, lower))
}

fn check_literature(m: u32, lower: &LowerBound) -> Result<()> {
    let Some(upper) = literature_upper_bound(m) else {
        return Ok(());
    };
    let exceeds = match lower {
        LowerBound::Dyadic(d) => *d > upper,
        LowerBound::Float { float } => *float > upper.to_f64() + LITERATURE_SLACK,
    };
    if exceeds {
        return Err(Error::consistency(format!(
            "certified lower bound {lower} exceeds the literature upper bound {upper} for m = {m}; \
             the norm engine is wrong"
        )));
    }
    Ok(())
}

fn assemble(form: &CoeffTensor, norm: NormResult, cfg: &Config) -> Result<Certificate> {
    let m = form.arity() as u32;
    let (power_sum, exponent, lower_bound) = lower_bound_of(form, &norm)?;
    check_literature(m, &lower_bound)?;
    let embed = !is_family_form(form, cfg)?;
    Ok(Certificate {
        m,
        dims: form.dims().to_vec(),
        form_digest: form_digest(form),
        sup_norm: norm,
        power_sum,
        exponent,
        lower_bound,
        lower_bound_decimal: lower_bound.value(),
        form: embed.then(|| FormDoc::from(form)),
        artifact_version: ARTIFACT_VERSION.to_string(),
    })
}

/// Certifies `C_m ≥ mixed_norm(form) / ‖form‖` with the norm established by
/// `method`. The recursive method applies only to the `T_m` family.
pub fn certify_lower_bound(
    form: &CoeffTensor,
    method: NormMethod,
    cfg: &Config,
) -> Result<Certificate> {
    if form.is_zero() {
        return Err(Error::argument("cannot certify with the zero form"));
    }
    let norm = match method {
        NormMethod::Exhaustive => sup_norm_exact(form, cfg)?,
        NormMethod::RecursiveCertificate => {
            if !is_family_form(form, cfg)? {
                return Err(Error::argument(
                    "the recursive norm certificate only applies to the extremal family T_m",
                ));
            }
            family_norm_certificate(form.arity() as u32, cfg)?
        }
    };
    assemble(form, norm, cfg)
}

/// Certificate for `T_m` with the closed form `C_m ≥ 2^{(m-1)/m}` checked
/// exactly against the computed ratio.
pub fn family_certificate(m: u32, cfg: &Config) -> Result<Certificate> {
    let form = build_extremal_form(m, cfg)?;
    let norm = family_norm_certificate(m, cfg)?;
    let count = 1u64 << (2 * (m - 1));
    if form.nonzero_count() as u64 != count || norm.value != 1i64 << (m - 1) {
        return Err(Error::consistency(format!(
            "T_{m} does not have 4^{} unit entries and norm 2^{}",
            m - 1,
            m - 1
        )));
    }
    let cert = assemble(&form, norm, cfg)?;
    let closed = DyadicPower::new(m as i64 - 1, m as i64)?;
    match cert.lower_bound {
        LowerBound::Dyadic(d) if d == closed => Ok(cert),
        other => Err(Error::consistency(format!(
            "computed ratio {other} differs from the closed form {closed}"
        ))),
    }
}

/// The first certificate field that failed verification.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("certificate check failed on `{field}`: {detail}")]
pub struct VerifyError {
    pub field: &'static str,
    pub detail: String,
}

fn fail<T>(field: &'static str, detail: impl Into<String>) -> std::result::Result<T, VerifyError> {
    Err(VerifyError {
        field,
        detail: detail.into(),
    })
}

/// Recomputes every field of `cert` from the form and compares.
///
/// Dyadic quantities must match exactly; float bounds within `cfg.tolerance`.
/// The norm is re-established with the recorded method.
pub fn verify_certificate(
    cert: &Certificate,
    cfg: &Config,
) -> std::result::Result<(), VerifyError> {
    if cert.m == 0 || cert.m as usize != cert.dims.len() {
        return fail("m", format!("m = {} with {} dims", cert.m, cert.dims.len()));
    }
    let form = match &cert.form {
        Some(doc) => match CoeffTensor::try_from(doc.clone()) {
            Ok(t) => t,
            Err(e) => return fail("form", e.to_string()),
        },
        None => match build_extremal_form(cert.m, cfg) {
            Ok(t) => t,
            Err(e) => return fail("m", format!("cannot rebuild T_{}: {e}", cert.m)),
        },
    };
    if form.dims() != cert.dims.as_slice() {
        return fail(
            "dims",
            format!(
                "form has dims {:?}, certificate says {:?}",
                form.dims(),
                cert.dims
            ),
        );
    }
    let digest = form_digest(&form);
    if digest != cert.form_digest {
        return fail(
            "form_digest",
            format!(
                "form hashes to {digest}, certificate says {}",
                cert.form_digest
            ),
        );
    }
    if form.is_zero() {
        return fail("form", "zero form");
    }

    let witness = cert.sup_norm.witness_point();
    let at_witness = match form.evaluate(&witness) {
        Ok(v) => v,
        Err(e) => return fail("sup_norm.witness", e.to_string()),
    };
    if !witness.is_in_ball() {
        return fail("sup_norm.witness", "witness leaves the unit cube");
    }
    if at_witness != cert.sup_norm.value {
        return fail(
            "sup_norm.witness",
            format!(
                "form at witness is {at_witness}, claimed norm is {}",
                cert.sup_norm.value
            ),
        );
    }

    let recomputed = match cert.sup_norm.method {
        NormMethod::Exhaustive => sup_norm_exact(&form, cfg),
        NormMethod::RecursiveCertificate => {
            if cert.form.is_some() {
                return fail(
                    "sup_norm.method",
                    "recursive certificates apply only to T_m",
                );
            }
            family_norm_certificate(cert.m, cfg)
        }
    };
    match recomputed {
        Ok(r) if r.value == cert.sup_norm.value => {}
        Ok(r) => {
            return fail(
                "sup_norm.value",
                format!(
                    "recomputed norm is {}, certificate says {}",
                    r.value, cert.sup_norm.value
                ),
            )
        }
        Err(e) => {
            return fail(
                "sup_norm.value",
                format!("cannot re-establish the norm: {e}"),
            )
        }
    }

    let (power_sum, exponent, lower) = match lower_bound_of(&form, &cert.sup_norm) {
        Ok(x) => x,
        Err(e) => return fail("lower_bound", e.to_string()),
    };
    if power_sum != cert.power_sum {
        return fail(
            "power_sum",
            format!(
                "recomputed {power_sum:?}, certificate says {:?}",
                cert.power_sum
            ),
        );
    }
    if exponent != cert.exponent {
        return fail(
            "exponent",
            format!("recomputed {exponent}, certificate says {}", cert.exponent),
        );
    }
    match (lower, cert.lower_bound) {
        (LowerBound::Dyadic(a), LowerBound::Dyadic(b)) if a == b => {}
        (LowerBound::Float { float: a }, LowerBound::Float { float: b })
            if (a - b).abs() <= cfg.tolerance => {}
        (a, b) => {
            return fail(
                "lower_bound",
                format!("recomputed {a}, certificate says {b}"),
            )
        }
    }
    if (lower.value() - cert.lower_bound_decimal).abs() > cfg.tolerance {
        return fail(
            "lower_bound_decimal",
            format!(
                "recomputed {}, certificate says {}",
                lower.value(),
                cert.lower_bound_decimal
            ),
        );
    }
    if let Err(e) = check_literature(cert.m, &lower) {
        return fail("lower_bound", e.to_string());
    }
    Ok(())
}

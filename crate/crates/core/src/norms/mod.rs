//! Supremum norms over products of ℓ∞ unit balls.
//!
//! A real multilinear form attains its supremum over the cube product at a
//! vertex, so for integer coefficients the norm is an exact integer obtained
//! by enumerating sign vectors. [`sup_norm_exact`] does this with one slot
//! closed in ℓ1 form and the rest walked in Gray-code order.
//! [`family_norm_certificate`] handles `T_m` without enumeration.

mod mixed;
pub mod walker;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::family::{build_extremal_form, check_recursive_structure, family_witness};
use crate::tensor::{CoeffTensor, PointTuple};

pub use mixed::{bh_exponent, mixed_norm, MixedNorm};
use walker::{walk_block, SignWalker, WalkPlan};

/// How a norm value was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormMethod {
    /// Full enumeration of the sign space.
    Exhaustive,
    /// `‖T_m‖ ≤ 2‖T_{m-1}‖` chained from `‖T_2‖ = 2`, matched by a witness.
    RecursiveCertificate,
}

impl std::fmt::Display for NormMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            NormMethod::Exhaustive => "exhaustive",
            NormMethod::RecursiveCertificate => "recursive-certificate",
        })
    }
}

/// A norm value with a point of the cube product attaining it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormResult {
    pub value: i64,
    pub method: NormMethod,
    pub witness: Vec<Vec<i64>>,
}

impl NormResult {
    pub fn witness_point(&self) -> PointTuple<i64> {
        PointTuple::new(self.witness.clone())
    }
}

/// Maximum number of prefix bits used to split the sign space into blocks.
/// Fixed so the partition (and hence tie-breaking) does not depend on the
/// thread count.
const PREFIX_BITS: u32 = 8;

/// Exact `‖form‖` by enumerating `2^{Σ_{k≠r} N_k}` sign assignments, where
/// `r` is the largest slot.
///
/// Ties between maximizing assignments go to the lexicographically smallest
/// sign vector (slots in order, `+1` before `−1`); the row slot's witness
/// signs are `sign(S_i)` with `sign(0) = +1`.
pub fn sup_norm_exact(form: &CoeffTensor, cfg: &Config) -> Result<NormResult> {
    cfg.validate()?;
    let plan = WalkPlan::new(form)?;
    let bits = plan.bits();
    if bits >= 64 || (1u64 << bits) > cfg.budget {
        return Err(Error::Resource {
            what: format!("exact norm of a form with dims {:?}", form.dims()),
            required: format!("2^{bits} sign assignments"),
            budget: cfg.budget,
        });
    }

    let prefix_bits = bits.min(PREFIX_BITS);
    let low_bits = bits - prefix_bits;
    let blocks = 1u64 << prefix_bits;
    let run = |h: u64| walk_block(&plan, h, low_bits);
    let results: Vec<(i64, u64, u64)> = if cfg.threads == 1 {
        (0..blocks).map(run).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| Error::argument(format!("cannot start worker pool: {e}")))?;
        pool.install(|| (0..blocks).into_par_iter().map(run).collect())
    };
    let (value, _, assignment) = results
        .into_iter()
        .reduce(|a, b| {
            if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                b
            } else {
                a
            }
        })
        .expect("at least one block");

    let witness = reconstruct_witness(form, &plan, assignment);
    let check = form.evaluate(&witness)?;
    if check != value {
        return Err(Error::consistency(format!(
            "witness evaluates to {check}, enumeration reported {value}"
        )));
    }
    Ok(NormResult {
        value,
        method: NormMethod::Exhaustive,
        witness: witness.into_points(),
    })
}

fn reconstruct_witness(form: &CoeffTensor, plan: &WalkPlan, assignment: u64) -> PointTuple<i64> {
    let mut w = SignWalker::new(plan);
    w.set_assignment(assignment);
    let mut points: Vec<Vec<i64>> = form.dims().iter().map(|&n| vec![1; n]).collect();
    points[plan.row_slot()] = w
        .inner_sums()
        .iter()
        .map(|&s| if s < 0 { -1 } else { 1 })
        .collect();
    for (b, &s) in w.signs().iter().enumerate() {
        let (slot, i) = plan.coordinate_of_bit(b as u32);
        points[slot][i] = s;
    }
    PointTuple::new(points)
}

/// `‖T_m‖ = 2^{m-1}` without enumeration.
///
/// The upper bound starts from the enumerated `‖T_2‖ = 2` and doubles once per
/// recursion step, each step gated on [`check_recursive_structure`]. The lower
/// bound is the exact value of `T_m` at [`family_witness`].
pub fn family_norm_certificate(m: u32, cfg: &Config) -> Result<NormResult> {
    let t2 = build_extremal_form(2, cfg)?;
    let base = sup_norm_exact(&t2, &cfg.sequential())?;
    if base.value != 2 {
        return Err(Error::consistency(format!(
            "‖T_2‖ enumerated as {}, expected 2",
            base.value
        )));
    }
    let mut upper = base.value;
    let mut prev = t2;
    for k in 3..=m {
        let next = build_extremal_form(k, cfg)?;
        check_recursive_structure(&next, &prev, k)?;
        upper *= 2;
        prev = next;
    }
    let witness = family_witness(m)?;
    let lower = prev.evaluate(&witness)?;
    if lower != upper {
        return Err(Error::consistency(format!(
            "T_{m} at its witness is {lower}, induction bound is {upper}"
        )));
    }
    Ok(NormResult {
        value: upper,
        method: NormMethod::RecursiveCertificate,
        witness: witness.into_points(),
    })
}

//! The recursive extremal family `T_m`.
//!
//! `T_2(x, y) = x1 y1 + x1 y2 + x2 y1 - x2 y2`, and for `m ≥ 3`
//!
//! ```text
//! T_m(x_1..x_m) = (x_m^1 + x_m^2) T_{m-1}(x_1, …, x_{m-1})
//!               + (x_m^1 - x_m^2) T_{m-1}(B^{s_1} x_1, …, B^{s_{m-1}} x_{m-1})
//! ```
//!
//! with `B` the backward shift, `s_1 = s_2 = 2^{m-2}` and `s_k = 2^{m-k}` for
//! `3 ≤ k ≤ m-1`. On coefficients, feeding `B^s x` into a slot moves an entry
//! at index `i` to index `i + s`, so the second block is `T_{m-1}` translated
//! by the shift vector.

use crate::config::Config;
use crate::error::{Error, Result};
use crate::tensor::{CoeffTensor, PointTuple};

/// Slot dimension of `T_m`.
pub fn family_dim(m: u32) -> usize {
    1usize << (m - 1)
}

/// Index translation (per slot of `T_{m-1}`) applied to the second block of `T_m`.
pub fn block_shifts(m: u32) -> Vec<usize> {
    assert!(m >= 3);
    (1..m)
        .map(|k| {
            if k <= 2 {
                1usize << (m - 2)
            } else {
                1usize << (m - k)
            }
        })
        .collect()
}

fn check_m(m: u32, cfg: &Config) -> Result<()> {
    if m < 2 {
        return Err(Error::argument(format!(
            "the family starts at m = 2, got m = {m}"
        )));
    }
    if m > cfg.max_m {
        return Err(Error::Resource {
            what: format!("building T_{m}"),
            required: format!("max_m >= {m} (4^{} entries)", m - 1),
            budget: cfg.max_m as u64,
        });
    }
    Ok(())
}

fn base_form() -> CoeffTensor {
    CoeffTensor::from_entries(
        vec![2, 2],
        [
            (vec![1, 1], 1),
            (vec![1, 2], 1),
            (vec![2, 1], 1),
            (vec![2, 2], -1),
        ],
    )
    .expect("static base form")
}

/// One recursion step: `T_{m-1}` ↦ `T_m`.
fn extend(prev: &CoeffTensor, m: u32) -> Result<CoeffTensor> {
    let n = family_dim(m);
    let shifts = block_shifts(m);
    let mut next = CoeffTensor::zeros(vec![n; m as usize])?;
    for (idx, c) in prev.entries() {
        let mut plain = idx.as_slice().to_vec();
        let mut moved: Vec<usize> = plain.iter().zip(&shifts).map(|(i, s)| i + s).collect();
        for (last, sign) in [(1, 1), (2, 1)] {
            plain.push(last);
            next.insert_fresh(plain.clone(), sign * c)?;
            plain.pop();
        }
        for (last, sign) in [(1, 1), (2, -1)] {
            moved.push(last);
            next.insert_fresh(moved.clone(), sign * c)?;
            moved.pop();
        }
    }
    Ok(next)
}

/// Builds `T_m` (dims `2^{m-1}` in every slot, `4^{m-1}` entries, all ±1).
pub fn build_extremal_form(m: u32, cfg: &Config) -> Result<CoeffTensor> {
    check_m(m, cfg)?;
    let mut t = base_form();
    for k in 3..=m {
        t = extend(&t, k)?;
    }
    let expected = 1usize << (2 * (m - 1));
    if t.nonzero_count() != expected {
        return Err(Error::consistency(format!(
            "T_{m} has {} entries, expected {expected}",
            t.nonzero_count()
        )));
    }
    Ok(t)
}

/// Checks that `t_m` is exactly the two-block recursion applied to `t_prev`.
///
/// This is the structural hypothesis of the norm induction: once it holds,
/// `‖T_m‖ ≤ (|x^1 + x^2| + |x^1 - x^2|)‖T_{m-1}‖ ≤ 2‖T_{m-1}‖`.
pub fn check_recursive_structure(t_m: &CoeffTensor, t_prev: &CoeffTensor, m: u32) -> Result<()> {
    if m < 3 || t_prev.arity() + 1 != m as usize || t_m.arity() != m as usize {
        return Err(Error::argument("arity mismatch in recursion check"));
    }
    let n = family_dim(m);
    if t_m.dims().iter().any(|&d| d != n) {
        return Err(Error::consistency(format!("T_{m} does not have dims {n}")));
    }
    if t_m.nonzero_count() != 4 * t_prev.nonzero_count() {
        return Err(Error::consistency(format!(
            "T_{m} has {} entries, recursion predicts {}",
            t_m.nonzero_count(),
            4 * t_prev.nonzero_count()
        )));
    }
    let shifts = block_shifts(m);
    for (idx, c) in t_prev.entries() {
        let plain = idx.as_slice();
        let moved: Vec<usize> = plain.iter().zip(&shifts).map(|(i, s)| i + s).collect();
        for (base, signs) in [(plain.to_vec(), [1, 1]), (moved, [1, -1])] {
            for (last, sign) in [(1usize, signs[0]), (2, signs[1])] {
                let mut full = base.clone();
                full.push(last);
                if t_m.get(&full) != sign * c {
                    return Err(Error::consistency(format!(
                        "T_{m} coefficient at {full:?} does not follow the recursion"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// The recursive norming point of `T_m`.
///
/// `witness(2) = ((1,1),(1,1))`; `witness(m)` zero-pads `witness(m-1)` to
/// length `2^{m-1}` and appends `(1,1,0,…,0)` as the last slot. The last slot
/// kills the translated block and doubles the plain one, so
/// `T_m(witness(m)) = 2^{m-1}`.
pub fn family_witness(m: u32) -> Result<PointTuple<i64>> {
    if m < 2 {
        return Err(Error::argument(format!(
            "the family starts at m = 2, got m = {m}"
        )));
    }
    if m > 62 {
        return Err(Error::argument(format!(
            "m = {m} is too large for a witness"
        )));
    }
    let n = family_dim(m);
    let mut slot = vec![0i64; n];
    slot[0] = 1;
    slot[1] = 1;
    Ok(PointTuple::new(vec![slot; m as usize]))
}

//! Sparse integer-coefficient multilinear forms on `ℓ∞^{N_1} × … × ℓ∞^{N_m}`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use crate::error::{Error, Result};

/// A 1-based position `(i_1, …, i_m)` in the coefficient tensor.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(indices: Vec<usize>) -> Self {
        MultiIndex(indices)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<usize>> for MultiIndex {
    fn from(v: Vec<usize>) -> Self {
        MultiIndex(v)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, ")")
    }
}

/// Scalars a form can be evaluated over. Integer scalars give exact results.
pub trait Scalar: Copy + PartialEq + Add<Output = Self> + Mul<Output = Self> {
    fn zero() -> Self;
    fn from_coeff(c: i64) -> Self;
}

impl Scalar for i64 {
    fn zero() -> Self {
        0
    }
    fn from_coeff(c: i64) -> Self {
        c
    }
}

impl Scalar for i128 {
    fn zero() -> Self {
        0
    }
    fn from_coeff(c: i64) -> Self {
        c as i128
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_coeff(c: i64) -> Self {
        c as f64
    }
}

/// One argument vector per slot.
#[derive(Debug, Clone, PartialEq)]
pub struct PointTuple<T> {
    points: Vec<Vec<T>>,
}

impl<T: Scalar> PointTuple<T> {
    pub fn new(points: Vec<Vec<T>>) -> Self {
        PointTuple { points }
    }

    pub fn points(&self) -> &[Vec<T>] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Vec<T>> {
        self.points
    }

    pub fn arity(&self) -> usize {
        self.points.len()
    }

    /// Replace slot `k` (0-based) and return the new tuple.
    pub fn with_slot(mut self, k: usize, v: Vec<T>) -> Self {
        self.points[k] = v;
        self
    }
}

impl PointTuple<i64> {
    pub fn is_in_ball(&self) -> bool {
        self.points.iter().flatten().all(|x| (-1..=1).contains(x))
    }

    pub fn is_vertex(&self) -> bool {
        self.points.iter().flatten().all(|x| *x == 1 || *x == -1)
    }

    pub fn to_f64(&self) -> PointTuple<f64> {
        PointTuple::new(
            self.points
                .iter()
                .map(|v| v.iter().map(|&x| x as f64).collect())
                .collect(),
        )
    }
}

impl PointTuple<f64> {
    pub fn is_in_ball(&self) -> bool {
        self.points
            .iter()
            .flatten()
            .all(|x| (-1.0..=1.0).contains(x))
    }

    pub fn is_vertex(&self) -> bool {
        self.points
            .iter()
            .flatten()
            .all(|x| *x == 1.0 || *x == -1.0)
    }
}

/// Sparse multilinear form with integer coefficients.
///
/// Entries are kept in a sorted map so iteration order (and therefore every
/// serialized document) is canonical. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffTensor {
    dims: Vec<usize>,
    entries: BTreeMap<MultiIndex, i64>,
}

impl CoeffTensor {
    /// The zero form of the given shape.
    pub fn zeros(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::argument("a form needs at least one slot"));
        }
        if dims.contains(&0) {
            return Err(Error::argument(format!(
                "slot dimensions must be positive, got {dims:?}"
            )));
        }
        Ok(CoeffTensor {
            dims,
            entries: BTreeMap::new(),
        })
    }

    /// Builds a form from `(index, coefficient)` pairs. Zero coefficients are
    /// dropped; a repeated index is an error.
    pub fn from_entries<I>(dims: Vec<usize>, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, i64)>,
    {
        let mut t = CoeffTensor::zeros(dims)?;
        for (idx, c) in entries {
            let idx = MultiIndex::new(idx);
            t.check_index(&idx)?;
            if t.entries.contains_key(&idx) {
                return Err(Error::argument(format!("duplicate entry at {idx}")));
            }
            if c != 0 {
                t.entries.insert(idx, c);
            }
        }
        Ok(t)
    }

    /// Dense constructor: `coeffs` lists all `Π N_k` coefficients with the
    /// last slot varying fastest.
    pub fn from_dense(dims: Vec<usize>, coeffs: &[i64]) -> Result<Self> {
        let total: usize = dims.iter().product();
        if coeffs.len() != total {
            return Err(Error::Dimension(format!(
                "dense data has {} values, shape {dims:?} needs {total}",
                coeffs.len()
            )));
        }
        let mut t = CoeffTensor::zeros(dims)?;
        let mut idx = vec![1usize; t.arity()];
        for &c in coeffs {
            if c != 0 {
                t.entries.insert(MultiIndex::new(idx.clone()), c);
            }
            for k in (0..idx.len()).rev() {
                if idx[k] < t.dims[k] {
                    idx[k] += 1;
                    break;
                }
                idx[k] = 1;
            }
        }
        Ok(t)
    }

    pub fn arity(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Number of stored (nonzero) coefficients.
    pub fn nonzero_count(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, idx: &[usize]) -> i64 {
        self.entries
            .get(&MultiIndex::new(idx.to_vec()))
            .copied()
            .unwrap_or(0)
    }

    /// Entries in lexicographic index order.
    pub fn entries(&self) -> impl ExactSizeIterator<Item = (&MultiIndex, i64)> + '_ {
        self.entries.iter().map(|(k, &v)| (k, v))
    }

    /// Sets a coefficient; setting 0 removes the entry.
    pub fn set(&mut self, idx: Vec<usize>, c: i64) -> Result<()> {
        let idx = MultiIndex::new(idx);
        self.check_index(&idx)?;
        if c == 0 {
            self.entries.remove(&idx);
        } else {
            self.entries.insert(idx, c);
        }
        Ok(())
    }

    /// Inserts a coefficient at an index that must not be occupied yet.
    pub(crate) fn insert_fresh(&mut self, idx: Vec<usize>, c: i64) -> Result<()> {
        let idx = MultiIndex::new(idx);
        self.check_index(&idx)?;
        if c == 0 {
            return Ok(());
        }
        if self.entries.insert(idx.clone(), c).is_some() {
            return Err(Error::consistency(format!(
                "index {idx} received two contributions"
            )));
        }
        Ok(())
    }

    fn check_index(&self, idx: &MultiIndex) -> Result<()> {
        if idx.len() != self.arity() {
            return Err(Error::Dimension(format!(
                "index {idx} has length {}, form has arity {}",
                idx.len(),
                self.arity()
            )));
        }
        for (k, (&i, &n)) in idx.as_slice().iter().zip(&self.dims).enumerate() {
            if i == 0 || i > n {
                return Err(Error::Dimension(format!(
                    "index {idx}: slot {} value {i} outside 1..={n}",
                    k + 1
                )));
            }
        }
        Ok(())
    }

    /// `Σ_entries a_i · Π_k x_k[i_k]`.
    pub fn evaluate<T: Scalar>(&self, args: &PointTuple<T>) -> Result<T> {
        let pts = args.points();
        if pts.len() != self.arity() {
            return Err(Error::Dimension(format!(
                "form has arity {}, got {} argument vectors",
                self.arity(),
                pts.len()
            )));
        }
        for (k, (v, &n)) in pts.iter().zip(&self.dims).enumerate() {
            if v.len() != n {
                return Err(Error::Dimension(format!(
                    "slot {} expects length {n}, got {}",
                    k + 1,
                    v.len()
                )));
            }
        }
        let mut acc = T::zero();
        for (idx, c) in self.entries() {
            let mut term = T::from_coeff(c);
            for (v, &i) in pts.iter().zip(idx.as_slice()) {
                term = term * v[i - 1];
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    /// `λ · form`.
    pub fn scaled(&self, lambda: i64) -> CoeffTensor {
        let entries = if lambda == 0 {
            BTreeMap::new()
        } else {
            self.entries
                .iter()
                .map(|(k, &v)| (k.clone(), v * lambda))
                .collect()
        };
        CoeffTensor {
            dims: self.dims.clone(),
            entries,
        }
    }

    /// Reorders the slots: slot `k` of the result is slot `order[k]` of `self`.
    pub fn permute_slots(&self, order: &[usize]) -> Result<CoeffTensor> {
        check_permutation(order, self.arity())?;
        let dims = order.iter().map(|&k| self.dims[k]).collect();
        let entries = self
            .entries
            .iter()
            .map(|(idx, &c)| {
                let s = idx.as_slice();
                (MultiIndex::new(order.iter().map(|&k| s[k]).collect()), c)
            })
            .collect();
        Ok(CoeffTensor { dims, entries })
    }

    /// Renames basis vectors within one slot: index `i` (1-based) of slot
    /// `slot` becomes `relabel[i - 1] + 1`.
    pub fn relabel_slot(&self, slot: usize, relabel: &[usize]) -> Result<CoeffTensor> {
        if slot >= self.arity() {
            return Err(Error::argument(format!("no slot {slot}")));
        }
        check_permutation(relabel, self.dims[slot])?;
        let entries = self
            .entries
            .iter()
            .map(|(idx, &c)| {
                let mut v = idx.as_slice().to_vec();
                v[slot] = relabel[v[slot] - 1] + 1;
                (MultiIndex::new(v), c)
            })
            .collect();
        Ok(CoeffTensor {
            dims: self.dims.clone(),
            entries,
        })
    }

    /// `Σ |a|`, the trivial upper bound for the sup norm.
    pub fn abs_sum(&self) -> u128 {
        self.entries
            .values()
            .map(|c| c.unsigned_abs() as u128)
            .sum()
    }

    /// Coefficients in dense order (last slot fastest), for small shapes.
    pub fn to_dense(&self) -> Vec<i64> {
        let total: usize = self.dims.iter().product();
        let mut out = vec![0; total];
        for (idx, c) in self.entries() {
            let mut flat = 0;
            for (&i, &n) in idx.as_slice().iter().zip(&self.dims) {
                flat = flat * n + (i - 1);
            }
            out[flat] = c;
        }
        out
    }
}

fn check_permutation(p: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if p.len() != n {
        return Err(Error::argument(format!(
            "permutation of length {} for size {n}",
            p.len()
        )));
    }
    for &k in p {
        if k >= n || seen[k] {
            return Err(Error::argument(format!(
                "{p:?} is not a permutation of 0..{n}"
            )));
        }
        seen[k] = true;
    }
    Ok(())
}

/// Backward shift by `s`: `out[j] = v[j + s]`, zero-padded to the input length.
pub fn backward_shift<T: Scalar>(v: &[T], s: usize) -> Vec<T> {
    (0..v.len())
        .map(|j| v.get(j + s).copied().unwrap_or_else(T::zero))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t2() -> CoeffTensor {
        CoeffTensor::from_entries(
            vec![2, 2],
            [
                (vec![1, 1], 1),
                (vec![1, 2], 1),
                (vec![2, 1], 1),
                (vec![2, 2], -1),
            ],
        )
        .unwrap()
    }

    #[test]
    fn evaluate_t2_at_all_ones() {
        let x = PointTuple::new(vec![vec![1i64, 1], vec![1, 1]]);
        assert_eq!(t2().evaluate(&x).unwrap(), 2);
    }

    #[test]
    fn zero_form_evaluates_to_zero() {
        let z = CoeffTensor::zeros(vec![3, 2]).unwrap();
        let x = PointTuple::new(vec![vec![0.3, -1.0, 0.5], vec![1.0, 1.0]]);
        assert_eq!(z.evaluate(&x).unwrap(), 0.0);
        assert_eq!(z.nonzero_count(), 0);
    }

    #[test]
    fn evaluate_rejects_bad_shapes() {
        let t = t2();
        let short = PointTuple::new(vec![vec![1i64, 1]]);
        assert!(matches!(t.evaluate(&short), Err(Error::Dimension(_))));
        let wrong_len = PointTuple::new(vec![vec![1i64, 1, 1], vec![1, 1]]);
        assert!(matches!(t.evaluate(&wrong_len), Err(Error::Dimension(_))));
    }

    #[test]
    fn shift_examples() {
        assert_eq!(backward_shift(&[1i64, 2, 3, 4], 2), vec![3, 4, 0, 0]);
        assert_eq!(backward_shift(&[5i64, 6, 7], 0), vec![5, 6, 7]);
        assert_eq!(backward_shift(&[1i64, 2], 5), vec![0, 0]);
        assert_eq!(backward_shift::<i64>(&[], 3), Vec::<i64>::new());
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(CoeffTensor::zeros(vec![]).is_err());
        assert!(CoeffTensor::zeros(vec![2, 0]).is_err());
        assert!(matches!(
            CoeffTensor::from_entries(vec![2, 2], [(vec![3, 1], 1)]),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            CoeffTensor::from_entries(vec![2, 2], [(vec![1], 1)]),
            Err(Error::Dimension(_))
        ));
        assert!(CoeffTensor::from_entries(vec![2, 2], [(vec![1, 1], 1), (vec![1, 1], 2)]).is_err());
    }

    #[test]
    fn zero_coefficients_are_not_stored() {
        let mut t =
            CoeffTensor::from_entries(vec![2, 2], [(vec![1, 1], 0), (vec![2, 2], 3)]).unwrap();
        assert_eq!(t.nonzero_count(), 1);
        t.set(vec![2, 2], 0).unwrap();
        assert!(t.is_zero());
    }

    #[test]
    fn dense_round_trip() {
        let dense = [1, 0, -1, 2, 0, 0, 3, 1];
        let t = CoeffTensor::from_dense(vec![2, 2, 2], &dense).unwrap();
        assert_eq!(t.to_dense(), dense);
        assert_eq!(t.get(&[1, 1, 1]), 1);
        assert_eq!(t.get(&[1, 2, 2]), 2);
        assert_eq!(t.get(&[2, 2, 2]), 1);
    }

    #[test]
    fn permutations_move_entries() {
        let t = CoeffTensor::from_entries(vec![2, 3], [(vec![1, 3], 5)]).unwrap();
        let p = t.permute_slots(&[1, 0]).unwrap();
        assert_eq!(p.dims(), &[3, 2]);
        assert_eq!(p.get(&[3, 1]), 5);
        let r = t.relabel_slot(1, &[2, 1, 0]).unwrap();
        assert_eq!(r.get(&[1, 1]), 5);
        assert!(t.permute_slots(&[0, 0]).is_err());
    }

    #[test]
    fn vertex_and_ball_flags() {
        let v = PointTuple::new(vec![vec![1i64, -1], vec![-1, 1]]);
        assert!(v.is_vertex() && v.is_in_ball());
        let b = PointTuple::new(vec![vec![1i64, 0]]);
        assert!(!b.is_vertex() && b.is_in_ball());
        let f = PointTuple::new(vec![vec![0.5, -1.0]]);
        assert!(f.is_in_ball() && !f.is_vertex());
    }
}

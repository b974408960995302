//! Gray-code walk over sign assignments with incremental inner sums.
//!
//! One slot (the "row" slot) is resolved in closed form: for fixed signs in
//! every other slot the form is linear in the row argument, so its maximum
//! over the cube is `Σ_i |S_i|` where
//! `S_i = Σ a_{i, i_2..} ε_{i_2} ⋯` is the inner sum of row `i`.
//! The remaining slots contribute one bit per coordinate. Flipping a single
//! bit changes only the entries that touch it, so each step costs
//! `O(entries touching that coordinate × arity)` instead of a full rescan.

use crate::error::{Error, Result};
use crate::tensor::CoeffTensor;

/// Immutable precomputation shared by all walkers over one form.
#[derive(Debug, Clone)]
pub struct WalkPlan {
    arity: usize,
    row_slot: usize,
    row_len: usize,
    /// Enumerated slots in original order, with the bit offset of each.
    enumerated: Vec<(usize, usize)>,
    bits: u32,
    coeff: Vec<i64>,
    row: Vec<u32>,
    /// `arity - 1` bit positions per entry.
    entry_bits: Vec<u32>,
    /// CSR: entries touching bit `b` are `touch[touch_start[b]..touch_start[b + 1]]`.
    touch_start: Vec<usize>,
    touch: Vec<u32>,
}

impl WalkPlan {
    /// Plans the walk with the largest slot (first one on ties) as row slot.
    pub fn new(form: &CoeffTensor) -> Result<Self> {
        let dims = form.dims();
        let row_slot = dims
            .iter()
            .enumerate()
            .max_by(|(a, x), (b, y)| x.cmp(y).then(b.cmp(a)))
            .map(|(k, _)| k)
            .expect("forms have at least one slot");
        Self::with_row_slot(form, row_slot)
    }

    pub fn with_row_slot(form: &CoeffTensor, row_slot: usize) -> Result<Self> {
        let dims = form.dims();
        let arity = dims.len();
        if row_slot >= arity {
            return Err(Error::argument(format!("no slot {row_slot}")));
        }
        // Inner sums never exceed Σ|a| in magnitude; keep two bits of headroom.
        if form.abs_sum() > (i64::MAX as u128) / 4 {
            return Err(Error::argument(
                "coefficients too large for exact 64-bit sums",
            ));
        }
        let mut enumerated = Vec::with_capacity(arity.saturating_sub(1));
        let mut offset = 0usize;
        for (k, &n) in dims.iter().enumerate() {
            if k != row_slot {
                enumerated.push((k, offset));
                offset += n;
            }
        }
        let bits = u32::try_from(offset).unwrap_or(u32::MAX);

        let n_entries = form.nonzero_count();
        let mut coeff = Vec::with_capacity(n_entries);
        let mut row = Vec::with_capacity(n_entries);
        let mut entry_bits = Vec::with_capacity(n_entries * (arity - 1));
        let mut counts = vec![0usize; offset + 1];
        for (idx, c) in form.entries() {
            let s = idx.as_slice();
            coeff.push(c);
            row.push((s[row_slot] - 1) as u32);
            for &(k, off) in &enumerated {
                let b = off + s[k] - 1;
                entry_bits.push(b as u32);
                counts[b + 1] += 1;
            }
        }
        for b in 0..offset {
            counts[b + 1] += counts[b];
        }
        let touch_start = counts.clone();
        let mut fill = counts;
        let mut touch = vec![0u32; entry_bits.len()];
        let per = arity - 1;
        for e in 0..n_entries {
            for &b in &entry_bits[e * per..(e + 1) * per] {
                touch[fill[b as usize]] = e as u32;
                fill[b as usize] += 1;
            }
        }

        Ok(WalkPlan {
            arity,
            row_slot,
            row_len: dims[row_slot],
            enumerated,
            bits,
            coeff,
            row,
            entry_bits,
            touch_start,
            touch,
        })
    }

    /// Number of enumerated sign bits; the walk visits `2^bits` assignments.
    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn row_slot(&self) -> usize {
        self.row_slot
    }

    pub fn row_len(&self) -> usize {
        self.row_len
    }

    /// Maps a bit position to `(slot, 0-based coordinate)`.
    pub fn coordinate_of_bit(&self, bit: u32) -> (usize, usize) {
        let b = bit as usize;
        let &(slot, off) = self
            .enumerated
            .iter()
            .rev()
            .find(|(_, off)| *off <= b)
            .expect("bit within range");
        (slot, b - off)
    }

    /// Enumerated slots and their bit offsets.
    pub fn enumerated_slots(&self) -> &[(usize, usize)] {
        &self.enumerated
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Lexicographic rank of an assignment: bit 0 is the most significant
    /// position and a set bit (sign −1) sorts after a clear one (+1).
    pub fn lex_key(&self, assignment: u64) -> u64 {
        if self.bits == 0 {
            0
        } else {
            assignment.reverse_bits() >> (64 - self.bits)
        }
    }
}

/// Mutable walk state: current signs, inner sums and `Σ |S_i|`.
#[derive(Debug, Clone)]
pub struct SignWalker<'a> {
    plan: &'a WalkPlan,
    signs: Vec<i64>,
    sums: Vec<i64>,
    total: i64,
}

impl<'a> SignWalker<'a> {
    /// Starts at the all-plus assignment.
    pub fn new(plan: &'a WalkPlan) -> Self {
        let mut w = SignWalker {
            plan,
            signs: vec![1; plan.bits as usize],
            sums: vec![0; plan.row_len],
            total: 0,
        };
        w.recompute();
        w
    }

    /// Loads an assignment: bit `b` set means coordinate `b` has sign −1.
    pub fn set_assignment(&mut self, assignment: u64) {
        for (b, s) in self.signs.iter_mut().enumerate() {
            *s = if assignment >> b & 1 == 1 { -1 } else { 1 };
        }
        self.recompute();
    }

    fn recompute(&mut self) {
        let p = self.plan;
        let per = p.arity - 1;
        self.sums.iter_mut().for_each(|s| *s = 0);
        for e in 0..p.coeff.len() {
            let mut term = p.coeff[e];
            for &b in &p.entry_bits[e * per..(e + 1) * per] {
                term *= self.signs[b as usize];
            }
            self.sums[p.row[e] as usize] += term;
        }
        self.total = self.sums.iter().map(|s| s.abs()).sum();
    }

    /// Negates one sign and updates the affected inner sums.
    #[inline]
    pub fn flip(&mut self, bit: u32) {
        let p = self.plan;
        let per = p.arity - 1;
        let range = p.touch_start[bit as usize]..p.touch_start[bit as usize + 1];
        for &e in &p.touch[range] {
            let e = e as usize;
            let mut term = p.coeff[e];
            for &b in &p.entry_bits[e * per..(e + 1) * per] {
                term *= self.signs[b as usize];
            }
            let r = p.row[e] as usize;
            let old = self.sums[r];
            let new = old - 2 * term;
            self.total += new.abs() - old.abs();
            self.sums[r] = new;
        }
        self.signs[bit as usize] = -self.signs[bit as usize];
    }

    pub fn inner_sums(&self) -> &[i64] {
        &self.sums
    }

    pub fn signs(&self) -> &[i64] {
        &self.signs
    }

    /// `Σ_i |S_i|`, the maximum of the form over the row argument.
    pub fn value(&self) -> i64 {
        self.total
    }
}

/// Best `(value, lex key, assignment)` inside one block of the sign space.
///
/// The block fixes the top `bits - low_bits` bits to `prefix` and walks the
/// low bits in reflected Gray-code order.
pub(crate) fn walk_block(plan: &WalkPlan, prefix: u64, low_bits: u32) -> (i64, u64, u64) {
    let start = if low_bits >= 64 {
        0
    } else {
        prefix << low_bits
    };
    let mut w = SignWalker::new(plan);
    w.set_assignment(start);
    let mut g = start;
    let mut best = (w.value(), plan.lex_key(g), g);
    let steps: u64 = 1u64 << low_bits;
    for t in 1..steps {
        let b = t.trailing_zeros();
        w.flip(b);
        g ^= 1 << b;
        let v = w.value();
        if v > best.0 || (v == best.0 && plan.lex_key(g) < best.1) {
            best = (v, plan.lex_key(g), g);
        }
    }
    best
}

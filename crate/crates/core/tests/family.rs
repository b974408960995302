use bhlower_core::family::{block_shifts, check_recursive_structure};
use bhlower_core::{build_extremal_form, family_witness, CoeffTensor, Config, PointTuple};
use proptest::prelude::*;

/// Two-variable block `a1 b1 + a1 b2 + a2 b1 - a2 b2` on coordinates `(i, i+1)`.
fn block(a: &[i64], b: &[i64], i: usize) -> i64 {
    a[i] * b[i] + a[i] * b[i + 1] + a[i + 1] * b[i] - a[i + 1] * b[i + 1]
}

fn t3_formula(x: &[i64], y: &[i64], z: &[i64]) -> i64 {
    (z[0] + z[1]) * block(x, y, 0) + (z[0] - z[1]) * block(x, y, 2)
}

fn t4_formula(x: &[i64], y: &[i64], z: &[i64], w: &[i64]) -> i64 {
    (w[0] + w[1]) * ((z[0] + z[1]) * block(x, y, 0) + (z[0] - z[1]) * block(x, y, 2))
        + (w[0] - w[1]) * ((z[2] + z[3]) * block(x, y, 4) + (z[2] - z[3]) * block(x, y, 6))
}

fn basis(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

#[test]
fn t3_coefficients_match_explicit_formula() {
    let t = build_extremal_form(3, &Config::default()).unwrap();
    let mut support = 0;
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                let (x, y, z) = (basis(4, i), basis(4, j), basis(4, k));
                let want = t3_formula(&x, &y, &z);
                assert_eq!(t.get(&[i + 1, j + 1, k + 1]), want, "at ({i},{j},{k})");
                support += (want != 0) as usize;
            }
        }
    }
    assert_eq!(support, 16);
}

#[test]
fn t4_coefficients_match_explicit_formula() {
    let t = build_extremal_form(4, &Config::default()).unwrap();
    let mut support = 0;
    for i in 0..8 {
        for j in 0..8 {
            for k in 0..8 {
                for l in 0..8 {
                    let want = t4_formula(&basis(8, i), &basis(8, j), &basis(8, k), &basis(8, l));
                    assert_eq!(t.get(&[i + 1, j + 1, k + 1, l + 1]), want);
                    support += (want != 0) as usize;
                }
            }
        }
    }
    assert_eq!(support, 64);
}

/// Direct evaluation of the recursion with the backward shift, on functions.
fn recursive_value(m: usize, xs: &[Vec<i64>]) -> i64 {
    if m == 2 {
        return block(&xs[0], &xs[1], 0);
    }
    let last = &xs[m - 1];
    let plain: Vec<Vec<i64>> = xs[..m - 1]
        .iter()
        .map(|v| v[..v.len() / 2].to_vec())
        .collect();
    let shifts = block_shifts(m as u32);
    let moved: Vec<Vec<i64>> = xs[..m - 1]
        .iter()
        .zip(&shifts)
        .map(|(v, &s)| {
            let shifted = bhlower_core::backward_shift(v, s);
            shifted[..v.len() / 2].to_vec()
        })
        .collect();
    (last[0] + last[1]) * recursive_value(m - 1, &plain)
        + (last[0] - last[1]) * recursive_value(m - 1, &moved)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn coefficient_recursion_matches_operator_recursion(
        m in 2usize..=5,
        seed in any::<u64>(),
    ) {
        let n = 1usize << (m - 1);
        let mut state = seed;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 7) as i64 - 3
        };
        let xs: Vec<Vec<i64>> = (0..m).map(|_| (0..n).map(|_| next()).collect()).collect();
        let t = build_extremal_form(m as u32, &Config::default()).unwrap();
        let got = t.evaluate(&PointTuple::new(xs.clone())).unwrap();
        prop_assert_eq!(got, recursive_value(m, &xs));
    }
}

#[test]
fn family_invariants_up_to_eight() {
    let cfg = Config::default();
    let mut prev: Option<CoeffTensor> = None;
    for m in 2..=8u32 {
        let t = build_extremal_form(m, &cfg).unwrap();
        let n = 1usize << (m - 1);
        assert_eq!(t.dims(), vec![n; m as usize].as_slice());
        assert_eq!(t.nonzero_count(), 1 << (2 * (m - 1)));
        assert!(t.entries().all(|(_, c)| c == 1 || c == -1));
        if let Some(p) = &prev {
            check_recursive_structure(&t, p, m).unwrap();
        }
        let w = family_witness(m).unwrap();
        assert_eq!(t.evaluate(&w).unwrap(), 1 << (m - 1));
        prev = Some(t);
    }
}

#[test]
fn explicit_witness_points_for_t2_t3() {
    let cfg = Config::default();
    let t2 = build_extremal_form(2, &cfg).unwrap();
    assert_eq!(
        t2.evaluate(&PointTuple::new(vec![vec![1i64, 1], vec![1, 1]]))
            .unwrap(),
        2
    );
    let t3 = build_extremal_form(3, &cfg).unwrap();
    let e123 = vec![1i64, 1, 1, 0];
    assert_eq!(
        t3.evaluate(&PointTuple::new(vec![e123.clone(), e123.clone(), e123]))
            .unwrap(),
        4
    );
}

proptest! {
    #[test]
    fn evaluate_is_multilinear(
        dense in prop::collection::vec(-3i64..=3, 27),
        x in prop::collection::vec(prop::collection::vec(-5i64..=5, 3), 3),
        u in prop::collection::vec(-5i64..=5, 3),
        slot in 0usize..3,
        lambda in -4i64..=4,
    ) {
        let t = CoeffTensor::from_dense(vec![3, 3, 3], &dense).unwrap();
        let base = PointTuple::new(x.clone());
        let f = t.evaluate(&base).unwrap();

        let scaled: Vec<i64> = x[slot].iter().map(|v| v * lambda).collect();
        prop_assert_eq!(t.evaluate(&base.clone().with_slot(slot, scaled)).unwrap(), lambda * f);

        let sum: Vec<i64> = x[slot].iter().zip(&u).map(|(a, b)| a + b).collect();
        let with_u = t.evaluate(&base.clone().with_slot(slot, u.clone())).unwrap();
        prop_assert_eq!(t.evaluate(&base.with_slot(slot, sum)).unwrap(), f + with_u);
    }
}

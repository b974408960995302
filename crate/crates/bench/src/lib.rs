//! Shared fixtures for the criterion benches.

use bhlower_core::{CoeffTensor, Config};

/// A deterministic dense ±1/0 form for benchmarking the norm engine.
pub fn patterned_form(n: usize, m: usize) -> CoeffTensor {
    let total = n.pow(m as u32);
    let dense: Vec<i64> = (0..total as u64)
        .map(|i| {
            let h = i.wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(17);
            (h % 3) as i64 - 1
        })
        .collect();
    CoeffTensor::from_dense(vec![n; m], &dense).expect("valid shape")
}

pub fn bench_config() -> Config {
    Config::default()
}

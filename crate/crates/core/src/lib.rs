//! Extremal multilinear forms on products of ℓ∞ cubes.
//!
//! The crate builds the recursive family of ±1 forms `T_m`, computes exact
//! supremum norms of integer multilinear forms by sign enumeration, and turns
//! them into certified lower bounds for the real Bohnenblust–Hille constants
//! `C_m`. A local/exhaustive search over small coefficient spaces looks for
//! forms with a better ratio.

pub mod certify;
pub mod config;
pub mod dyadic;
pub mod error;
pub mod family;
pub mod format;
pub mod norms;
pub mod search;
pub mod table;
pub mod tensor;

pub use certify::{
    certify_lower_bound, family_certificate, verify_certificate, Certificate, LowerBound,
    VerifyError,
};
pub use config::Config;
pub use dyadic::DyadicPower;
pub use error::{Error, Result};
pub use family::{build_extremal_form, family_witness};
pub use norms::{
    bh_exponent, family_norm_certificate, mixed_norm, sup_norm_exact, MixedNorm, NormMethod,
    NormResult,
};
pub use search::{exhaustive_search, hill_climb, ratio, SearchReport, SearchSpace, Strategy};
pub use table::{literature_upper_bound, render_table, summary_table, BoundsRow, TableFormat};
pub use tensor::{backward_shift, CoeffTensor, MultiIndex, PointTuple, Scalar};

/// Version string embedded in emitted documents.
pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

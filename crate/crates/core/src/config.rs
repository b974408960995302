use crate::error::{Error, Result};

/// Default cap on the family arity; `T_10` has 4^9 = 262144 entries.
pub const DEFAULT_MAX_M: u32 = 10;
/// Default number of sign assignments the exact norm engine may visit.
pub const DEFAULT_BUDGET: u64 = 1 << 28;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Resource limits shared by construction, norm computation and search.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    /// Largest `m` accepted by [`crate::build_extremal_form`].
    pub max_m: u32,
    /// Maximum number of sign assignments for [`crate::sup_norm_exact`].
    pub budget: u64,
    /// Worker threads for the norm engine and search restarts.
    pub threads: usize,
    /// Tolerance for float comparisons in reports and verification.
    pub tolerance: f64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_m: DEFAULT_MAX_M,
            budget: DEFAULT_BUDGET,
            threads: 1,
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

impl Config {
    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.threads == 0 {
            return Err(Error::argument("threads must be at least 1"));
        }
        if self.budget == 0 {
            return Err(Error::argument("budget must be at least 1"));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::argument("tolerance must be positive"));
        }
        if self.max_m < 2 {
            return Err(Error::argument("max_m must be at least 2"));
        }
        Ok(())
    }

    /// Same limits, single-threaded; used for norms nested inside parallel search.
    pub(crate) fn sequential(&self) -> Config {
        Config {
            threads: 1,
            ..self.clone()
        }
    }
}

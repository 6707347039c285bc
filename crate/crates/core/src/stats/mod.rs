//! Goodness-of-fit tests and the exact small-`n` oracle.

pub mod chisq;
pub mod ks;
pub mod oracle;
pub mod ranked;

pub use chisq::{chi_square_keyed, chi_square_test, ChiSquareReport};
pub use ks::{kolmogorov_survival, ks_distance, ks_distance_tabulated, ks_two_sample};
pub use oracle::{brute_force_oracle, oracle_table, ExactLaw, OracleTable, OutcomeKey, ORACLE_MAX_N};
pub use ranked::{coordinatewise_ks, ranked_l1_compare, RankedComparison, DEFAULT_DEPTH};

/// Significance level shared by the verification suites.
pub const SIGNIFICANCE: f64 = 1e-3;

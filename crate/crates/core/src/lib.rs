#![forbid(unsafe_code)]

//! Exact and asymptotic machinery for the rank/crank family of partition
//! statistics N_k(m,n): arbitrary-precision tables of p(n), two independent
//! exact evaluation routes, log-domain estimators with their error bounds,
//! and a sweep harness that fits the bound constants empirically.

pub mod asymptotics;
pub mod config;
pub mod enumerate;
pub mod error;
pub mod harness;
pub mod krank;
pub mod precise;
pub mod series;
pub mod signed_log;
pub mod table;
pub mod verify;

pub use asymptotics::{
    b_constant, corollary_prediction, dprz_error_factor, dprz_lhs, dprz_rhs,
    dyson_sech_estimate, error_bound_main, error_bound_zn1, hat_f_k, hat_p, hat_p_shift,
    i_k_truncated, main_term_asymptotic, parry_rhoades_estimate, AsymptoticConstants,
    EstimateReport,
};
pub use enumerate::{enumerate_statistic, Statistic, ENUMERATION_MAX_N};
pub use error::{Error, Result};
pub use harness::{
    csv_to_string, fit_bound_constant, parse_sweep_spec, run_sweep, write_csv, Estimator,
    FittedConstant, MRule, PassThresholds, ReportRow, SweepKind, SweepSpec, CSV_HEADER,
};
pub use krank::{
    backward_difference, exact_regime_threshold, f_k_term, main_term_exact, n_k_exact,
    KRankQuery, KRankValue,
};
pub use num_bigint::{BigInt, BigUint};
pub use precise::Residuals;
pub use series::{n_k_oracle_series, CoefficientSeries, SERIES_MAX_N};
pub use signed_log::{ln_biguint, relative_error, signed_log_sum, SignedLogReal};
pub use table::{spot_check_indices, PartitionTable, MAX_TABLE_N};
pub use verify::{load_or_build, run_verify, CriterionReport, VerifyOptions, VerifyRun};

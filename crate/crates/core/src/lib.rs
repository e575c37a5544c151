//! Relative-entropy moments of single-mode Gaussian states and the
//! second-order Stein bounds they feed, for coherent-state target detection
//! against a thermal background.

// `!(x >= 0.0)` style guards reject NaN too; reference constants keep all quoted digits.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod error;
pub mod fock;
pub mod gaussian;
pub mod marcum;
pub mod scan;
pub mod special;
pub mod stein;
pub mod summation;

pub use error::{Error, Result};
pub use fock::{spectral_oracle, third_moment, transition_prob, ThirdMoment, TruncationPolicy};
pub use gaussian::{
    gibbs_matrix, rel_entropy, rel_entropy_variance, scenario_states, thermal_closed_forms, GaussianState,
    RelEntStats, ThermalScenario,
};
pub use marcum::{heterodyne_log_pmd, marcum_q, BenchmarkConvention, MarcumArgs, MarcumQ};
pub use scan::{emit, parse_csv, run_scan, MomentCache, OutputFormat, ScanConfig, ScanRow};
pub use stein::{error_exponent, inv_std_normal_cdf, refined_bracket, std_normal_cdf, DetectionParams, MDBounds};

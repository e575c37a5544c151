//! Finite-size bounds on the mis-detection probability from the first three
//! relative-entropy moments. All probabilities are carried as natural logs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::RelEntStats;

/// Supremum of the admissible Berry–Esseen constant.
pub const BERRY_ESSEEN_MAX: f64 = 0.4748;

const SQRT_2PI: f64 = 2.5066282746310002;

/// `Φ(x) = ½ erfc(−x/√2)`.
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * std::f64::consts::FRAC_1_SQRT_2)
}

// Acklam's rational approximation, relative error ~1e-9 before refinement.
const A: [f64; 6] = [
    -3.969683028665376e+01,
    2.209460984245205e+02,
    -2.759285104469687e+02,
    1.383577518672690e+02,
    -3.066479806614716e+01,
    2.506628277459239e+00,
];
const B: [f64; 5] = [
    -5.447609879822406e+01,
    1.615858368580409e+02,
    -1.556989798598866e+02,
    6.680131188771972e+01,
    -1.328068155288572e+01,
];
const C: [f64; 6] = [
    -7.784894002430293e-03,
    -3.223964580411365e-01,
    -2.400758277161838e+00,
    -2.549732539343734e+00,
    4.374664141464968e+00,
    2.938163982698783e+00,
];
const D: [f64; 4] = [
    7.784695709041462e-03,
    3.224671290700398e-01,
    2.445134137142996e+00,
    3.754408661907416e+00,
];

fn acklam(p: f64) -> f64 {
    const P_LOW: f64 = 0.02425;
    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    }
}

/// `Φ⁻¹(eps)` for `eps ∈ (0, 1)`: rational initial guess, then Halley steps.
pub fn inv_std_normal_cdf(eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("Φ⁻¹ needs eps in (0, 1), got {eps}")));
    }
    if eps == 0.5 {
        return Ok(0.0);
    }
    // Refine on the lower tail, where Φ has full relative precision.
    let (p, sign) = if eps > 0.5 { (1.0 - eps, -1.0) } else { (eps, 1.0) };
    let mut x = acklam(p);
    for _ in 0..3 {
        let e = std_normal_cdf(x) - p;
        let u = e * SQRT_2PI * (0.5 * x * x).exp();
        let step = u / (1.0 + 0.5 * x * u);
        x -= step;
        if step.abs() <= 1e-16 * x.abs() {
            break;
        }
    }
    Ok(sign * x)
}

/// Operating point of the asymmetric test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionParams {
    pub p_fa: f64,
    pub m: u64,
    pub c: f64,
}

impl DetectionParams {
    pub fn new(p_fa: f64, m: u64, c: f64) -> Result<Self> {
        if !(p_fa > 0.0 && p_fa < 1.0) {
            return Err(Error::InvalidParameter(format!("p_fa must lie in (0, 1), got {p_fa}")));
        }
        if m < 1 {
            return Err(Error::InvalidParameter("number of copies must be >= 1".into()));
        }
        if !(c > 0.0 && c <= BERRY_ESSEEN_MAX) {
            return Err(Error::InvalidParameter(format!(
                "Berry-Esseen constant must lie in (0, {BERRY_ESSEEN_MAX}], got {c}"
            )));
        }
        Ok(Self { p_fa, m, c })
    }

    /// Conservative default `C = 0.4748`.
    pub fn with_default_c(p_fa: f64, m: u64) -> Result<Self> {
        Self::new(p_fa, m, BERRY_ESSEEN_MAX)
    }

    fn m_f64(&self) -> f64 {
        self.m as f64
    }
}

/// Log-domain bounds on `p_MD` at each expansion order.
///
/// Refined sides outside their validity domain are `None` with the matching
/// flag cleared.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MDBounds {
    pub log_first_order: f64,
    pub log_lambda_upper: f64,
    pub log_lambda_lower: f64,
    pub log_refined_upper: Option<f64>,
    pub log_refined_lower: Option<f64>,
    pub refined_upper_valid: bool,
    pub refined_lower_valid: bool,
    pub theta_l: f64,
    pub theta_u: f64,
}

/// `ln p_MD ≈ −M D`.
pub fn first_order_log_pmd(d: f64, params: &DetectionParams) -> f64 {
    -params.m_f64() * d
}

/// `(ln Λ − 2 ln M, ln Λ)` with `ln Λ = −M D − √(M V) Φ⁻¹(p_FA)`.
pub fn lambda_bracket(d: f64, v: f64, params: &DetectionParams) -> (f64, f64) {
    let m = params.m_f64();
    // p_fa is validated at construction, so the inverse exists.
    let q = inv_std_normal_cdf(params.p_fa).expect("validated p_fa");
    let upper = -m * d - (m * v).sqrt() * q;
    (upper - 2.0 * m.ln(), upper)
}

/// Berry–Esseen-corrected bracket.
///
/// `θ_L = p_FA + (C T / V^{3/2} + 2)/√M` and `θ_U = p_FA − C T /(V^{3/2} √M)`;
/// the upper bound `−MD − √(MV) Φ⁻¹(θ_U)` exists for `θ_U ∈ (0,1)` and the lower
/// bound `−9 ln 2 − 2 ln M − MD − √(MV) Φ⁻¹(θ_L)` for `θ_L ∈ (0,1)`.
pub fn refined_bracket(stats: &RelEntStats, params: &DetectionParams) -> Result<MDBounds> {
    let t = stats
        .t
        .ok_or_else(|| Error::InvalidParameter("third moment T is required".into()))?;
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("third moment must be >= 0, got {t}")));
    }
    if !(stats.v > 0.0) {
        return Err(Error::DegenerateVariance(stats.v));
    }
    let m = params.m_f64();
    let (d, v) = (stats.d, stats.v);
    let correction = params.c * t / v.powf(1.5);
    let sqrt_m = m.sqrt();
    let theta_l = params.p_fa + (correction + 2.0) / sqrt_m;
    let theta_u = params.p_fa - correction / sqrt_m;
    let spread = (m * v).sqrt();
    let in_range = |th: f64| th > 0.0 && th < 1.0;

    let log_refined_upper = in_range(theta_u)
        .then(|| inv_std_normal_cdf(theta_u).map(|q| -m * d - spread * q))
        .transpose()?;
    let log_refined_lower = in_range(theta_l)
        .then(|| {
            inv_std_normal_cdf(theta_l)
                .map(|q| -9.0 * std::f64::consts::LN_2 - 2.0 * m.ln() - m * d - spread * q)
        })
        .transpose()?;
    let (log_lambda_lower, log_lambda_upper) = lambda_bracket(d, v, params);
    Ok(MDBounds {
        log_first_order: first_order_log_pmd(d, params),
        log_lambda_upper,
        log_lambda_lower,
        log_refined_upper,
        log_refined_lower,
        refined_upper_valid: log_refined_upper.is_some(),
        refined_lower_valid: log_refined_lower.is_some(),
        theta_l,
        theta_u,
    })
}

/// `ε_MD = −ln p_MD / M`.
pub fn error_exponent(log_pmd: f64, m: u64) -> f64 {
    -log_pmd / m as f64
}

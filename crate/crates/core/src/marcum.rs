//! Classical benchmark: coherent pulses with heterodyne detection, whose
//! mis-detection probability is `1 − Q(√(2γ), √(−2 ln p_FA))`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::summation::LogSum;

/// `e^{−t} I₀(t)`.
///
/// The power series has only positive terms and is used up to `t = 30`;
/// past that the asymptotic series is truncated at its smallest term,
/// which is below `e^{−2t}` relative.
pub fn bessel_i0_scaled(t: f64) -> f64 {
    let t = t.abs();
    if t < 30.0 {
        i0_series_scaled(t)
    } else {
        i0_asymptotic_scaled(t)
    }
}

fn i0_series_scaled(t: f64) -> f64 {
    let q = 0.25 * t * t;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut k = 1.0f64;
    while term > 1e-17 * sum {
        term *= q / (k * k);
        sum += term;
        k += 1.0;
    }
    sum * (-t).exp()
}

fn i0_asymptotic_scaled(t: f64) -> f64 {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for k in 1..200 {
        let kf = k as f64;
        let next = term * (2.0 * kf - 1.0) * (2.0 * kf - 1.0) / (8.0 * t * kf);
        if next >= term || next < 1e-17 * sum {
            break;
        }
        term = next;
        sum += term;
    }
    sum / (2.0 * std::f64::consts::PI * t).sqrt()
}

/// Arguments of the first-order Marcum Q-function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarcumArgs {
    x: f64,
    y: f64,
}

impl MarcumArgs {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x >= 0.0 && x.is_finite() && y >= 0.0 && y.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "Marcum arguments must be finite and >= 0, got ({x}, {y})"
            )));
        }
        Ok(Self { x, y })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }
}

/// `Q(x, y)` and its complement, each with its logarithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarcumQ {
    pub q: f64,
    pub p: f64,
    pub ln_q: f64,
    pub ln_p: f64,
}

/// `ln P(N = k)` for `N ~ Poisson(mean)` and `k = 0..=k_max`.
///
/// Built by the ratio recurrence outwards from the mode, then normalised
/// over the table, so the anchor's rounding cancels and consecutive values
/// carry only the small increments' errors. `k_max` must cover the upper
/// tail.
fn ln_poisson_table(mean: f64, k_max: u64) -> Vec<f64> {
    let len = k_max as usize + 1;
    if mean == 0.0 {
        let mut t = vec![f64::NEG_INFINITY; len];
        t[0] = 0.0;
        return t;
    }
    let mode = (mean.floor() as usize).min(len - 1);
    let mut t = vec![0.0f64; len];
    for k in mode + 1..len {
        t[k] = t[k - 1] + (mean / k as f64).ln();
    }
    for k in (0..mode).rev() {
        t[k] = t[k + 1] + ((k + 1) as f64 / mean).ln();
    }
    let mut total = LogSum::new();
    for &v in &t {
        total.add_ln(v);
    }
    let norm = total.ln_value();
    t.iter_mut().for_each(|v| *v -= norm);
    t
}

/// Marcum Q-function by Poisson mixtures.
///
/// With `λ = x²/2`, `μ = y²/2` and `N ~ Poisson(λ)`, `J ~ Poisson(μ)`:
/// `Q = Σ_k P(N=k) P(J ≤ k)` and `P = 1 − Q = Σ_k P(N=k) P(J > k)`.
/// Both routes add positive terms only, so neither suffers cancellation,
/// and both are accumulated in the log domain.
pub fn marcum_q(args: MarcumArgs) -> MarcumQ {
    let lambda = 0.5 * args.x * args.x;
    let mu = 0.5 * args.y * args.y;
    if mu == 0.0 {
        return MarcumQ { q: 1.0, p: 0.0, ln_q: 0.0, ln_p: f64::NEG_INFINITY };
    }
    let width = |m: f64| m + 40.0 * m.sqrt() + 60.0;
    let k_hi = width(lambda) as u64;
    let j_top = (width(mu) as u64).max(k_hi) + 1;
    let ln_w = ln_poisson_table(lambda, k_hi);
    let ln_j = ln_poisson_table(mu, j_top);

    // ln P(J ≤ k) for k = 0..=k_hi.
    let mut ln_cdf = Vec::with_capacity(k_hi as usize + 1);
    let mut acc = LogSum::new();
    for &lj in &ln_j[..=k_hi as usize] {
        acc.add_ln(lj);
        ln_cdf.push(acc.ln_value());
    }
    // ln P(J > k) for k = 0..=k_hi, summed from the far tail inwards.
    let mut ln_sf = vec![f64::NEG_INFINITY; k_hi as usize + 1];
    let mut acc = LogSum::new();
    for j in (1..=j_top as usize).rev() {
        acc.add_ln(ln_j[j]);
        if j - 1 <= k_hi as usize {
            ln_sf[j - 1] = acc.ln_value();
        }
    }

    let mut q_acc = LogSum::new();
    let mut p_acc = LogSum::new();
    for (k, &lw) in ln_w.iter().enumerate() {
        q_acc.add_ln(lw + ln_cdf[k]);
        p_acc.add_ln(lw + ln_sf[k]);
    }
    let ln_q = q_acc.ln_value().min(0.0);
    let ln_p = p_acc.ln_value().min(0.0);
    MarcumQ { q: ln_q.exp(), p: ln_p.exp(), ln_q, ln_p }
}

/// `ln p_MD = ln[1 − Q(√(2γ), √(−2 ln p_FA))]`, via the direct complement.
pub fn heterodyne_log_pmd(gamma: f64, p_fa: f64) -> Result<f64> {
    if !(p_fa > 0.0 && p_fa < 1.0) {
        return Err(Error::Domain(format!("p_fa must lie in (0, 1), got {p_fa}")));
    }
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::Domain(format!("SNR must be finite and >= 0, got {gamma}")));
    }
    let args = MarcumArgs::new((2.0 * gamma).sqrt(), (-2.0 * p_fa.ln()).sqrt())?;
    Ok(marcum_q(args).ln_p)
}

/// How the `M` copies enter the classical curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchmarkConvention {
    /// `−ln p_MD(γ)` plotted directly against the per-copy SNR.
    #[default]
    PerCopy,
    /// `−ln p_MD(Mγ) / M`: coherent integration of all copies.
    Total,
}

impl std::str::FromStr for BenchmarkConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "per-copy" => Ok(Self::PerCopy),
            "total" => Ok(Self::Total),
            other => Err(Error::InvalidParameter(format!(
                "unknown benchmark convention {other:?} (expected per-copy or total)"
            ))),
        }
    }
}

impl std::fmt::Display for BenchmarkConvention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::PerCopy => "per-copy",
            Self::Total => "total",
        })
    }
}

/// Benchmark error exponent under the chosen convention.
pub fn benchmark_exponent(gamma: f64, p_fa: f64, m: u64, convention: BenchmarkConvention) -> Result<f64> {
    match convention {
        BenchmarkConvention::PerCopy => Ok(-heterodyne_log_pmd(gamma, p_fa)?),
        BenchmarkConvention::Total => {
            let m = m as f64;
            Ok(-heterodyne_log_pmd(m * gamma, p_fa)? / m)
        }
    }
}

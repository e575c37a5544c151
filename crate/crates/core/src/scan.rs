//! SNR sweep assembling every exponent curve, plus table emission.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{third_moment, ThermalSpectrum, ThirdMoment, TruncationPolicy};
use crate::gaussian::{thermal_closed_forms, RelEntStats, ThermalScenario};
use crate::marcum::{benchmark_exponent, BenchmarkConvention};
use crate::stein::{error_exponent, lambda_bracket, refined_bracket, DetectionParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::InvalidParameter(format!("unknown output format {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub p_fa: f64,
    pub m: u64,
    pub nb: f64,
    pub snr_db_min: f64,
    pub snr_db_max: f64,
    pub points: usize,
    pub tail_tol: f64,
    pub c: f64,
    pub benchmark_m_convention: BenchmarkConvention,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
    pub meta: bool,
    pub keep_partial: bool,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            p_fa: 1e-3,
            m: 5000,
            nb: 600.0,
            snr_db_min: -15.0,
            snr_db_max: 5.0,
            points: 200,
            tail_tol: 1e-10,
            c: crate::stein::BERRY_ESSEEN_MAX,
            benchmark_m_convention: BenchmarkConvention::PerCopy,
            format: OutputFormat::Csv,
            output: None,
            meta: false,
            keep_partial: false,
        }
    }
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(Error::InvalidParameter(format!("points must be >= 2, got {}", self.points)));
        }
        if !(self.snr_db_min.is_finite() && self.snr_db_max.is_finite() && self.snr_db_min < self.snr_db_max) {
            return Err(Error::InvalidParameter(format!(
                "need finite snr_db_min < snr_db_max, got {} and {}",
                self.snr_db_min, self.snr_db_max
            )));
        }
        for db in [self.snr_db_min, self.snr_db_max] {
            let g = gamma_from_db(db);
            if !(g > 0.0 && g.is_finite()) {
                return Err(Error::InvalidParameter(format!("SNR {db} dB is not representable")));
            }
        }
        self.detection()?;
        self.policy()?;
        ThermalSpectrum::new(self.nb)?;
        Ok(())
    }

    pub fn detection(&self) -> Result<DetectionParams> {
        DetectionParams::new(self.p_fa, self.m, self.c)
    }

    pub fn policy(&self) -> Result<TruncationPolicy> {
        TruncationPolicy::with_tail_tol(self.tail_tol)
    }

    /// Grid points, uniform in dB.
    pub fn snr_grid(&self) -> Vec<f64> {
        let n = self.points;
        let step = (self.snr_db_max - self.snr_db_min) / (n - 1) as f64;
        (0..n)
            .map(|i| if i + 1 == n { self.snr_db_max } else { self.snr_db_min + step * i as f64 })
            .collect()
    }

    /// `key=value` pairs in a fixed order, for CSV comment lines.
    fn meta_pairs(&self) -> Vec<(&'static str, String)> {
        vec![
            ("p_fa", fmt_g(self.p_fa)),
            ("m", self.m.to_string()),
            ("nb", fmt_g(self.nb)),
            ("snr_db_min", fmt_g(self.snr_db_min)),
            ("snr_db_max", fmt_g(self.snr_db_max)),
            ("points", self.points.to_string()),
            ("tail_tol", fmt_g(self.tail_tol)),
            ("c", fmt_g(self.c)),
            ("benchmark_m_convention", self.benchmark_m_convention.to_string()),
            ("keep_partial", self.keep_partial.to_string()),
        ]
    }
}

pub fn gamma_from_db(snr_db: f64) -> f64 {
    10f64.powf(snr_db / 10.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub snr_db: f64,
    pub gamma: f64,
    pub d: f64,
    pub v: f64,
    pub t: Option<f64>,
    pub captured_mass: Option<f64>,
    pub eps_first_order: f64,
    pub eps_refined_upper: Option<f64>,
    pub eps_refined_lower: Option<f64>,
    pub upper_valid: bool,
    pub lower_valid: bool,
    pub eps_lambda_upper: f64,
    pub eps_lambda_lower: f64,
    pub eps_marcum: f64,
}

pub const CSV_HEADER: [&str; 14] = [
    "snr_db",
    "gamma",
    "d",
    "v",
    "t",
    "captured_mass",
    "eps_first_order",
    "eps_refined_upper",
    "eps_refined_lower",
    "upper_valid",
    "lower_valid",
    "eps_lambda_upper",
    "eps_lambda_lower",
    "eps_marcum",
];

/// Third moments keyed by `(n̄_B, γ n̄_B, tail_tol)` bit patterns.
#[derive(Debug, Default)]
pub struct MomentCache {
    inner: Mutex<HashMap<(u64, u64, u64), ThirdMoment>>,
}

impl MomentCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.inner.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn get_or_compute(&self, s: &ThermalScenario, policy: &TruncationPolicy) -> Result<ThirdMoment> {
        let key = (s.nb().to_bits(), s.received_photons().to_bits(), policy.tail_tol.to_bits());
        if let Some(hit) = self.inner.lock().expect("cache lock").get(&key) {
            return Ok(*hit);
        }
        // Computed outside the lock; a racing duplicate yields the same value.
        let tm = third_moment(s, policy)?;
        self.inner.lock().expect("cache lock").insert(key, tm);
        Ok(tm)
    }
}

/// Closed-form and benchmark columns; the truncated-sum columns start empty.
fn base_row(snr_db: f64, config: &ScanConfig, params: &DetectionParams) -> Result<(ScanRow, ThermalScenario)> {
    let gamma = gamma_from_db(snr_db);
    let scenario = ThermalScenario::from_snr(config.nb, gamma)?;
    let closed = thermal_closed_forms(&scenario);
    let (lambda_lower, lambda_upper) = lambda_bracket(closed.d, closed.v, params);
    let row = ScanRow {
        snr_db,
        gamma,
        d: closed.d,
        v: closed.v,
        t: None,
        captured_mass: None,
        eps_first_order: closed.d,
        eps_refined_upper: None,
        eps_refined_lower: None,
        upper_valid: false,
        lower_valid: false,
        eps_lambda_upper: error_exponent(lambda_upper, config.m),
        eps_lambda_lower: error_exponent(lambda_lower, config.m),
        eps_marcum: benchmark_exponent(gamma, config.p_fa, config.m, config.benchmark_m_convention)?,
    };
    Ok((row, scenario))
}

fn scan_row(
    snr_db: f64,
    config: &ScanConfig,
    params: &DetectionParams,
    policy: &TruncationPolicy,
    cache: &MomentCache,
) -> Result<ScanRow> {
    let (mut row, scenario) = base_row(snr_db, config, params)?;
    let tm = cache.get_or_compute(&scenario, policy)?;
    let stats = RelEntStats { d: row.d, v: row.v, t: Some(tm.t) };
    let bounds = refined_bracket(&stats, params)?;
    row.t = Some(tm.t);
    row.captured_mass = Some(tm.captured_mass);
    row.eps_refined_upper = bounds.log_refined_upper.map(|l| error_exponent(l, config.m));
    row.eps_refined_lower = bounds.log_refined_lower.map(|l| error_exponent(l, config.m));
    row.upper_valid = bounds.refined_upper_valid;
    row.lower_valid = bounds.refined_lower_valid;
    Ok(row)
}

pub fn run_scan(config: &ScanConfig) -> Result<Vec<ScanRow>> {
    run_scan_cached(config, &MomentCache::new())
}

/// Rows are computed in parallel and returned in grid order; the first
/// failing row (lowest SNR) is reported unless `keep_partial` is set.
pub fn run_scan_cached(config: &ScanConfig, cache: &MomentCache) -> Result<Vec<ScanRow>> {
    config.validate()?;
    let params = config.detection()?;
    let policy = config.policy()?;
    let results: Vec<(f64, Result<ScanRow>)> = config
        .snr_grid()
        .into_par_iter()
        .map(|db| (db, scan_row(db, config, &params, &policy, cache)))
        .collect();
    results
        .into_iter()
        .map(|(db, r)| match r {
            Ok(row) => Ok(row),
            Err(e) if config.keep_partial && !e.is_config() => base_row(db, config, &params).map(|(row, _)| row),
            Err(e) => Err(Error::Row { snr_db: db, source: Box::new(e) }),
        })
        .collect()
}

/// `%.12g`-style text: 12 significant digits, trailing zeros trimmed.
pub fn fmt_g(v: f64) -> String {
    const SIG: i32 = 12;
    if !v.is_finite() {
        return if v.is_nan() { "nan".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", (SIG - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..SIG).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (SIG - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, v)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_g).unwrap_or_default()
}

fn csv_line(row: &ScanRow) -> String {
    [
        fmt_g(row.snr_db),
        fmt_g(row.gamma),
        fmt_g(row.d),
        fmt_g(row.v),
        opt(row.t),
        opt(row.captured_mass),
        fmt_g(row.eps_first_order),
        opt(row.eps_refined_upper),
        opt(row.eps_refined_lower),
        row.upper_valid.to_string(),
        row.lower_valid.to_string(),
        fmt_g(row.eps_lambda_upper),
        fmt_g(row.eps_lambda_lower),
        fmt_g(row.eps_marcum),
    ]
    .join(",")
}

#[derive(Serialize)]
struct JsonDoc<'a> {
    config: &'a ScanConfig,
    rows: &'a [ScanRow],
}

pub fn emit(rows: &[ScanRow], config: &ScanConfig) -> Result<Vec<u8>> {
    if rows.is_empty() {
        return Err(Error::InvalidParameter("no rows to emit".into()));
    }
    match config.format {
        OutputFormat::Csv => {
            let mut out = String::new();
            if config.meta {
                for (k, v) in config.meta_pairs() {
                    let _ = writeln!(out, "# {k}={v}");
                }
            }
            out.push_str(&CSV_HEADER.join(","));
            out.push('\n');
            for row in rows {
                out.push_str(&csv_line(row));
                out.push('\n');
            }
            Ok(out.into_bytes())
        }
        OutputFormat::Json => {
            let mut out = serde_json::to_vec_pretty(&JsonDoc { config, rows })
                .map_err(|e| Error::Parse(e.to_string()))?;
            out.push(b'\n');
            Ok(out)
        }
    }
}

/// Writes to `path`, or standard output when `None`.
pub fn write_output(bytes: &[u8], path: Option<&Path>) -> Result<()> {
    use std::io::Write;
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|source| Error::Io { path: p.to_path_buf(), source }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|source| Error::Io { path: PathBuf::from("<stdout>"), source })
        }
    }
}

fn parse_f64(field: &str, name: &str) -> Result<f64> {
    field
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("column {name}: cannot parse {field:?}")))
}

fn parse_opt(field: &str, name: &str) -> Result<Option<f64>> {
    if field.is_empty() {
        Ok(None)
    } else {
        parse_f64(field, name).map(Some)
    }
}

fn parse_bool(field: &str, name: &str) -> Result<bool> {
    match field {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(Error::Parse(format!("column {name}: expected true or false, got {field:?}"))),
    }
}

/// Inverse of the CSV branch of [`emit`]; `#` lines are skipped.
pub fn parse_csv(text: &str) -> Result<Vec<ScanRow>> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty table".into()))?;
    if header != CSV_HEADER.join(",") {
        return Err(Error::Parse(format!("unexpected header {header:?}")));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != CSV_HEADER.len() {
                return Err(Error::Parse(format!("row {}: {} fields", i + 1, f.len())));
            }
            let h = &CSV_HEADER;
            Ok(ScanRow {
                snr_db: parse_f64(f[0], h[0])?,
                gamma: parse_f64(f[1], h[1])?,
                d: parse_f64(f[2], h[2])?,
                v: parse_f64(f[3], h[3])?,
                t: parse_opt(f[4], h[4])?,
                captured_mass: parse_opt(f[5], h[5])?,
                eps_first_order: parse_f64(f[6], h[6])?,
                eps_refined_upper: parse_opt(f[7], h[7])?,
                eps_refined_lower: parse_opt(f[8], h[8])?,
                upper_valid: parse_bool(f[9], h[9])?,
                lower_valid: parse_bool(f[10], h[10])?,
                eps_lambda_upper: parse_f64(f[11], h[11])?,
                eps_lambda_lower: parse_f64(f[12], h[12])?,
                eps_marcum: parse_f64(f[13], h[13])?,
            })
        })
        .collect()
}

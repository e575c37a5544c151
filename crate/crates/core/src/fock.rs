//! Displaced number-state transition probabilities and the Fock-space
//! moments of the log-likelihood ratio for the thermal detection scenario.
//!
//! Both output states share the thermal spectrum `γ_k`, and the joint
//! distribution `p(k,l) = γ_k |⟨k|D(α)|l⟩|²` drives every moment. The
//! log-likelihood ratio `(k − l) ln(n̄_B/(n̄_B+1))` only depends on the
//! difference `k − l`, so the sums are organised by diagonals of the
//! `(k, l)` grid: each diagonal is one run of the associated Laguerre
//! recurrence at fixed order `m = |k − l|`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{RelEntStats, ThermalScenario};
use crate::special::{ln_factorial, ln_gamma, ln_rising_factorial_int};
use crate::summation::{pairwise_sum, Neumaier};

const LN_UNDERFLOW: f64 = -690.7755278982137; // ln 1e-300

/// Thermal photon-number distribution `γ_k = n̄^k / (n̄+1)^{k+1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalSpectrum {
    nb: f64,
    ln_ratio: f64,
    ln_norm: f64,
}

impl ThermalSpectrum {
    pub fn new(nb: f64) -> Result<Self> {
        if !(nb > 0.0 && nb.is_finite()) {
            return Err(Error::InvalidParameter(format!("nb must be > 0, got {nb}")));
        }
        Ok(Self {
            nb,
            ln_ratio: -nb.recip().ln_1p(),
            ln_norm: nb.ln_1p(),
        })
    }

    pub fn nb(&self) -> f64 {
        self.nb
    }

    /// `ln(n̄/(n̄+1))`, negative.
    pub fn ln_ratio(&self) -> f64 {
        self.ln_ratio
    }

    pub fn log_weight(&self, k: u64) -> f64 {
        k as f64 * self.ln_ratio - self.ln_norm
    }

    pub fn weight(&self, k: u64) -> f64 {
        self.log_weight(k).exp()
    }

    /// `Σ_{k>K} γ_k = (n̄/(n̄+1))^{K+1}`.
    pub fn tail(&self, k: u64) -> f64 {
        ((k + 1) as f64 * self.ln_ratio).exp()
    }

    /// `Σ_{k≤K} γ_k`.
    pub fn partial_sum(&self, k: u64) -> f64 {
        -((k + 1) as f64 * self.ln_ratio).exp_m1()
    }
}

/// Controls how much probability mass the Fock-space sums may drop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    pub tail_tol: f64,
    pub k_max_cap: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            tail_tol: 1e-10,
            k_max_cap: 200_000,
        }
    }
}

impl TruncationPolicy {
    pub fn new(tail_tol: f64, k_max_cap: usize) -> Result<Self> {
        let p = Self { tail_tol, k_max_cap };
        p.validate()?;
        Ok(p)
    }

    pub fn with_tail_tol(tail_tol: f64) -> Result<Self> {
        Self::new(tail_tol, Self::default().k_max_cap)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tail_tol > 0.0 && self.tail_tol < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "tail_tol must lie in (0, 1), got {}",
                self.tail_tol
            )));
        }
        if self.k_max_cap < 1 {
            return Err(Error::InvalidParameter("k_max_cap must be >= 1".into()));
        }
        Ok(())
    }
}

/// A real number stored as `sign · exp(ln_abs)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub sign: f64,
    pub ln_abs: f64,
}

impl Scaled {
    pub fn value(&self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * self.ln_abs.exp()
        }
    }
}

const RESCALE_AT: f64 = 1e200;
const LN_RESCALE: f64 = 460.51701859880916; // ln 1e200

/// Three-term recurrence in `n`, carried on rescaled values.
fn laguerre_recurrence(n: u64, m: f64, x: f64) -> Scaled {
    if n == 0 {
        return Scaled { sign: 1.0, ln_abs: 0.0 };
    }
    let mut prev = 1.0f64;
    let mut cur = 1.0 + m - x;
    let mut ln_scale = 0.0f64;
    for j in 1..n {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + m - x) * cur - (jf + m) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_AT {
            cur /= RESCALE_AT;
            prev /= RESCALE_AT;
            ln_scale += LN_RESCALE;
        }
    }
    if cur == 0.0 {
        Scaled { sign: 0.0, ln_abs: f64::NEG_INFINITY }
    } else {
        Scaled {
            sign: cur.signum(),
            ln_abs: cur.abs().ln() + ln_scale,
        }
    }
}

fn check_laguerre_args(n: u64, m: i64, x: f64) -> Result<()> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("Laguerre argument must be finite and >= 0, got {x}")));
    }
    if m < -(n as i64) {
        return Err(Error::Domain(format!("Laguerre order {m} below -n = -{n}")));
    }
    Ok(())
}

/// Associated Laguerre polynomial `L_n^{(m)}(x)` by forward recurrence.
///
/// Returns [`Error::Overflow`] when the value is not representable; use
/// [`laguerre_assoc_scaled`] at large `x`.
pub fn laguerre_assoc(n: u64, m: i64, x: f64) -> Result<f64> {
    check_laguerre_args(n, m, x)?;
    if n == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0f64;
    let mut cur = 1.0 + m as f64 - x;
    let mf = m as f64;
    for j in 1..n {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + mf - x) * cur - (jf + mf) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
        if !cur.is_finite() {
            return Err(Error::Overflow);
        }
    }
    Ok(cur)
}

/// `L_n^{(m)}(x)` as sign and log-magnitude; never overflows.
pub fn laguerre_assoc_scaled(n: u64, m: i64, x: f64) -> Result<Scaled> {
    check_laguerre_args(n, m, x)?;
    Ok(laguerre_recurrence(n, m as f64, x))
}

/// `ln |⟨k|D(√x)|l⟩|²`, `-inf` when the element vanishes.
pub fn ln_transition_prob(k: u64, l: u64, x: f64) -> f64 {
    let (n, m) = (k.min(l), k.abs_diff(l));
    if x == 0.0 {
        return if m == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    let lag = laguerre_recurrence(n, m as f64, x);
    if lag.sign == 0.0 {
        return f64::NEG_INFINITY;
    }
    -ln_rising_factorial_int(n, m) + m as f64 * x.ln() - x + 2.0 * lag.ln_abs
}

/// `|⟨k|D(√x)|l⟩|² = (l!/k!) x^{k−l} e^{−x} [L_l^{(k−l)}(x)]²`, symmetric in `k ↔ l`.
///
/// Assembled in the log domain; values below `1e-300` are returned as zero.
pub fn transition_prob(k: u64, l: u64, x: f64) -> f64 {
    assert!(x >= 0.0 && x.is_finite(), "displacement x = {x} must be finite and >= 0");
    let lp = ln_transition_prob(k, l, x);
    if lp < LN_UNDERFLOW {
        0.0
    } else {
        lp.exp().min(1.0)
    }
}

/// Photon-number distribution of a thermal state displaced by `√x`:
/// `P(l) = γ_l e^{−x/(n̄+1)} L_l(−x/(n̄(n̄+1)))`, returned as logs for
/// `l = 0..=l_max`.
pub fn displaced_thermal_ln_pmf(nb: f64, x: f64, l_max: usize) -> Vec<f64> {
    let spectrum = ThermalSpectrum { nb, ln_ratio: -nb.recip().ln_1p(), ln_norm: nb.ln_1p() };
    let y = x / (nb * (nb + 1.0));
    let offset = -x / (nb + 1.0);
    let mut out = Vec::with_capacity(l_max + 1);
    // L_l(-y) is positive and increasing, so the recurrence has no cancellation.
    let mut prev = 0.0f64;
    let mut cur = 1.0f64;
    let mut ln_scale = 0.0f64;
    for l in 0..=l_max {
        out.push(spectrum.log_weight(l as u64) + offset + cur.ln() + ln_scale);
        let lf = l as f64;
        let next = ((2.0 * lf + 1.0 + y) * cur - lf * prev) / (lf + 1.0);
        prev = cur;
        cur = next;
        if cur > RESCALE_AT {
            cur /= RESCALE_AT;
            prev /= RESCALE_AT;
            ln_scale += LN_RESCALE;
        }
    }
    out
}

fn thermal_radius(spectrum: &ThermalSpectrum, half_tol: f64, cap: usize) -> Result<usize> {
    let estimate = (half_tol.ln() / spectrum.ln_ratio).ceil() - 1.0;
    if !(estimate <= cap as f64 + 1.0) {
        return Err(Error::CapExceeded {
            required: if estimate.is_finite() { estimate as usize } else { usize::MAX },
            cap,
        });
    }
    let mut k = estimate.max(0.0) as u64;
    while spectrum.tail(k) > half_tol {
        k += 1;
    }
    while k > 0 && spectrum.tail(k - 1) <= half_tol {
        k -= 1;
    }
    Ok(k as usize)
}

fn displaced_radius(nb: f64, x: f64, half_tol: f64, cap: usize) -> Result<usize> {
    // Sum the marginal well past the requested tolerance, then read the
    // radius off suffix sums.
    let mean = nb + x;
    let spread = (x * (2.0 * nb + 1.0) + nb * (nb + 1.0)).sqrt();
    let ln_stop = half_tol.ln() - 40.0;
    let hard_limit = 2 * cap + 64;
    let mut l_max = (mean + 10.0 * spread + 64.0) as usize;
    loop {
        let ln_p = displaced_thermal_ln_pmf(nb, x, l_max.min(hard_limit));
        let last = ln_p[ln_p.len() - 1];
        let decaying = ln_p[ln_p.len() - 2] > last;
        let past_tail = last < ln_stop && decaying;
        if !past_tail && l_max >= hard_limit {
            return Err(Error::CapExceeded {
                required: (mean + 10.0 * spread) as usize,
                cap,
            });
        }
        if past_tail {
            let mut suffix = vec![0.0f64; ln_p.len() + 1];
            let mut acc = Neumaier::new();
            for l in (0..ln_p.len()).rev() {
                acc.add(ln_p[l].exp());
                suffix[l] = acc.value();
            }
            if suffix[ln_p.len() - 1] > half_tol {
                return Err(Error::CapExceeded { required: hard_limit, cap });
            }
            let k = (0..ln_p.len())
                .find(|&k| suffix[k + 1] <= half_tol)
                .unwrap_or(ln_p.len() - 1);
            return Ok(k);
        }
        l_max = (l_max * 2).min(hard_limit);
    }
}

/// Smallest index `K` such that both the thermal tail and the displaced
/// marginal tail beyond `K` hold at most `tail_tol / 2` each.
pub fn truncation_radius(nb: f64, x: f64, policy: &TruncationPolicy) -> Result<usize> {
    policy.validate()?;
    let spectrum = ThermalSpectrum::new(nb)?;
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::InvalidParameter(format!("displacement x = {x}")));
    }
    let half = policy.tail_tol / 2.0;
    let mut k = thermal_radius(&spectrum, half, policy.k_max_cap)?;
    if x > 0.0 {
        k = k.max(displaced_radius(nb, x, half, policy.k_max_cap)?);
    }
    if k > policy.k_max_cap {
        return Err(Error::CapExceeded { required: k, cap: policy.k_max_cap });
    }
    Ok(k)
}

/// `ln` of the Szegő bound on the mass of diagonal `k − l = d`:
/// `Σ_n γ_k C(n+m,n) x^m/m!`, which sums to `(x·n̄)^m/m!` for `d ≥ 0`
/// and `(x·(n̄+1))^m/m!` for `d < 0`.
fn ln_szego_diagonal_bound(d: i64, nb: f64, x: f64) -> f64 {
    let m = d.unsigned_abs();
    let base = if d >= 0 { x * nb } else { x * (nb + 1.0) };
    m as f64 * base.ln() - ln_factorial(m)
}

const BLOCK_EXP: i32 = 512;
const LN_BLOCK: f64 = 512.0 * std::f64::consts::LN_2;

/// `√j` and `1/√j` for `j = 0..len`, shared by all diagonals.
struct RootTable {
    sqrt: Vec<f64>,
    inv_sqrt: Vec<f64>,
}

impl RootTable {
    fn new(len: usize) -> Self {
        let sqrt: Vec<f64> = (0..len).map(|j| (j as f64).sqrt()).collect();
        let inv_sqrt = sqrt.iter().map(|&r| if r > 0.0 { r.recip() } else { 0.0 }).collect();
        Self { sqrt, inv_sqrt }
    }
}

/// Recurrence state for one diagonal.
///
/// `u_n = √(n!/(n+m)!) x^{m/2} e^{−x/2} L_n^{(m)}(x)` obeys
/// `u_{n+1} = [(2n+1+m−x) u_n − √(n(n+m)) u_{n−1}] / √((n+1)(n+m+1))`.
/// Values are tracked as `mantissa · 2^{512·block}` with `block ≤ 0`; terms are
/// only accumulated once the block reaches 0, everything before that is
/// below `2^{-256}` in amplitude.
#[derive(Clone, Copy)]
struct Lane {
    m: usize,
    cur: f64,
    prev: f64,
    b_coef: f64,
    block: i32,
    acc: Neumaier,
}

impl Lane {
    fn new(m: usize, x: f64) -> Self {
        let ln_u0 = 0.5 * (m as f64 * x.ln() - x - ln_factorial(m as u64));
        let (block, cur) = if ln_u0 > -600.0 {
            (0i32, ln_u0.exp())
        } else {
            let b = (ln_u0 / LN_BLOCK).floor() as i32 + 1;
            (b, (ln_u0 - b as f64 * LN_BLOCK).exp())
        };
        Self { m, cur, prev: 0.0, b_coef: 0.0, block, acc: Neumaier::new() }
    }

    #[inline(always)]
    fn accumulate(&mut self, rpow: f64) {
        if self.block == 0 {
            self.acc.add(rpow * self.cur * self.cur);
        }
    }

    #[inline(always)]
    fn advance(&mut self, n: usize, x: f64, roots: &RootTable) {
        let (j, k) = (n + 1, n + self.m + 1);
        let inv_a = roots.inv_sqrt[j] * roots.inv_sqrt[k];
        let c = (2 * n + 1 + self.m) as f64 - x;
        let next = c.mul_add(self.cur, -self.b_coef * self.prev) * inv_a;
        self.prev = self.cur;
        self.cur = next;
        self.b_coef = roots.sqrt[j] * roots.sqrt[k];
        if self.block < 0 && self.cur.abs() > GROW_LIMIT {
            self.cur *= SHRINK;
            self.prev *= SHRINK;
            self.block += 1;
        }
    }
}

/// `2^{-512}` and `2^{256}`.
const SHRINK: f64 = f64::from_bits(((1023 - BLOCK_EXP) as u64) << 52);
const GROW_LIMIT: f64 = f64::from_bits(((1023 + BLOCK_EXP / 2) as u64) << 52);

const LANES: usize = 4;

/// `S_m = Σ_{n ≤ K−m} r^n u_n²` for `m = m0..m0+LANES` (clipped to `K`).
///
/// Lanes run interleaved so their recurrences overlap in the pipeline; each
/// lane is still a serial sum in `n`.
fn diagonal_sums(m0: usize, x: f64, r: f64, radius: usize, roots: &RootTable) -> Vec<f64> {
    let count = LANES.min(radius + 1 - m0);
    let mut lanes: Vec<Lane> = (0..count).map(|i| Lane::new(m0 + i, x)).collect();
    // The lane with the largest m stops first.
    let common = radius - (m0 + count - 1);
    let mut rpow = 1.0f64;
    if count == LANES {
        let mut quad: [Lane; LANES] = [lanes[0], lanes[1], lanes[2], lanes[3]];
        for n in 0..common {
            for lane in quad.iter_mut() {
                lane.accumulate(rpow);
                lane.advance(n, x, roots);
            }
            rpow *= r;
        }
        lanes.copy_from_slice(&quad);
    } else {
        for n in 0..common {
            for lane in lanes.iter_mut() {
                lane.accumulate(rpow);
                lane.advance(n, x, roots);
            }
            rpow *= r;
        }
    }
    lanes
        .iter_mut()
        .map(|lane| {
            let steps = radius - lane.m;
            let mut rp = rpow;
            for n in common..steps {
                lane.accumulate(rp);
                lane.advance(n, x, roots);
                rp *= r;
            }
            lane.accumulate(rp);
            lane.acc.value()
        })
        .collect()
}

/// Probability masses `P(k − l = d)` of the joint distribution restricted to
/// `k, l ≤ K`, for `d = −K..=K`.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceMasses {
    radius: usize,
    masses: Vec<f64>,
}

impl DifferenceMasses {
    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Mass of diagonal `d`.
    pub fn get(&self, d: i64) -> f64 {
        let idx = d + self.radius as i64;
        if idx < 0 || idx as usize >= self.masses.len() {
            0.0
        } else {
            self.masses[idx as usize]
        }
    }

    /// `(d, mass)` in ascending `d`.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (i64, f64)> + '_ {
        let r = self.radius as i64;
        self.masses.iter().enumerate().map(move |(i, &p)| (i as i64 - r, p))
    }

    pub fn total(&self) -> f64 {
        pairwise_sum(&self.masses)
    }

    /// `Σ_d P(d) |(d + shift)·scale|^power`, pairwise-reduced in ascending `d`.
    pub fn abs_moment(&self, shift: f64, scale: f64, power: i32) -> f64 {
        let terms: Vec<f64> = self
            .iter()
            .map(|(d, p)| p * ((d as f64 + shift) * scale).abs().powi(power))
            .collect();
        pairwise_sum(&terms)
    }
}

const CHUNK: usize = 128;

/// Diagonal masses of `p(k,l) = γ_k |⟨k|D(√x)|l⟩|²` over `k, l ≤ radius`.
///
/// Diagonals `±m` share the displacement factor, so with `S_m` the
/// thermally weighted sum along it, `P(−m) = (1−r) S_m` and
/// `P(m) = r^m P(−m)`. The masses are unimodal with mode near `d = −x`;
/// `S_m` is evaluated for increasing `m` in fixed chunks until a chunk past
/// the mode is wholly below `skip_tol / (2K+1)` and still falling.
/// Every `S_m` is a serial sum and chunk boundaries do not depend on the
/// thread count, so neither does the output.
pub fn difference_masses(nb: f64, x: f64, radius: usize, skip_tol: f64) -> Result<DifferenceMasses> {
    let spectrum = ThermalSpectrum::new(nb)?;
    let mut masses = vec![0.0f64; 2 * radius + 1];
    if x == 0.0 {
        masses[radius] = spectrum.partial_sum(radius as u64);
        return Ok(DifferenceMasses { radius, masses });
    }
    let skip = skip_tol / (2 * radius + 1) as f64;
    let ln_skip = skip.ln();
    let r = spectrum.ln_ratio.exp();
    let roots = RootTable::new(2 * radius + 2);
    let mut m0 = 0usize;
    while m0 <= radius {
        let end = (m0 + CHUNK).min(radius + 1);
        let starts: Vec<usize> = (m0..end).step_by(LANES).collect();
        let sums: Vec<f64> = starts
            .par_iter()
            .flat_map_iter(|&s| {
                // The Szegő bound of the lower diagonal dominates the upper one.
                if ln_szego_diagonal_bound(-(s as i64), nb, x) < ln_skip {
                    vec![0.0; LANES.min(radius + 1 - s)]
                } else {
                    diagonal_sums(s, x, r, radius, &roots)
                }
            })
            .collect();
        for (i, &sm) in sums.iter().enumerate() {
            let m = m0 + i;
            let lower = spectrum.weight(0) * sm;
            masses[radius - m] = lower;
            masses[radius + m] = spectrum.weight(m as u64) * sm;
        }
        let negligible = sums.iter().all(|&sm| spectrum.weight(0) * sm < skip);
        let falling = sums[sums.len() - 1] <= sums[0];
        if (m0 as f64) > x && negligible && falling {
            break;
        }
        m0 = end;
    }
    Ok(DifferenceMasses { radius, masses })
}

/// Third absolute moment together with its truncation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThirdMoment {
    pub t: f64,
    pub captured_mass: f64,
    pub radius: usize,
}

fn scenario_masses(s: &ThermalScenario, policy: &TruncationPolicy) -> Result<(DifferenceMasses, f64)> {
    let nb = s.nb();
    let x = s.snr() * nb;
    let radius = truncation_radius(nb, x, policy)?;
    let masses = difference_masses(nb, x, radius, 1e-3 * policy.tail_tol)?;
    let captured = masses.total();
    let required = 1.0 - 10.0 * policy.tail_tol;
    if captured < required {
        return Err(Error::MassDeficit { captured, required });
    }
    Ok((masses, x))
}

/// `T = Σ_{k,l≤K} p(k,l) |(k − l + γn̄_B) ln(n̄_B/(n̄_B+1))|³`.
pub fn third_moment(s: &ThermalScenario, policy: &TruncationPolicy) -> Result<ThirdMoment> {
    let (masses, x) = scenario_masses(s, policy)?;
    let ln_ratio = ThermalSpectrum::new(s.nb())?.ln_ratio();
    let t = if x == 0.0 { 0.0 } else { masses.abs_moment(x, ln_ratio, 3) };
    Ok(ThirdMoment {
        t,
        captured_mass: masses.total(),
        radius: masses.radius(),
    })
}

/// Moments of `ln(α_X/β_Y) = (k − l) ln(n̄_B/(n̄_B+1))` under `p(k,l)`:
/// mean `D`, central second moment `V` and absolute central third moment `T`.
///
/// Centres on the computed mean and accumulates from the top diagonal down,
/// so it shares the kernel with [`third_moment`] but not its aggregation.
pub fn spectral_oracle(s: &ThermalScenario, policy: &TruncationPolicy) -> Result<RelEntStats> {
    let (masses, x) = scenario_masses(s, policy)?;
    if x == 0.0 {
        return Ok(RelEntStats { d: 0.0, v: 0.0, t: Some(0.0) });
    }
    let ln_ratio = ThermalSpectrum::new(s.nb())?.ln_ratio();
    let mut mean = Neumaier::new();
    for (d, p) in masses.iter().rev() {
        mean.add(p * d as f64 * ln_ratio);
    }
    let d_hat = mean.value();
    let (mut second, mut third) = (Neumaier::new(), Neumaier::new());
    for (d, p) in masses.iter().rev() {
        let z = (d as f64 * ln_ratio - d_hat).abs();
        second.add(p * z * z);
        third.add(p * z * z * z);
    }
    Ok(RelEntStats {
        d: d_hat,
        v: second.value(),
        t: Some(third.value()),
    })
}

/// `ln (a)_n = ln Γ(a+n) − ln Γ(a)`, summed directly for small `n`.
pub fn pochhammer_log(a: f64, n: u64) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Domain(format!("Pochhammer base must be > 0, got {a}")));
    }
    if n <= 64 {
        Ok((0..n).map(|i| (a + i as f64).ln()).sum())
    } else {
        Ok(ln_gamma(a + n as f64) - ln_gamma(a))
    }
}

/// A bound value together with its natural logarithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogBound {
    pub value: f64,
    pub ln_value: f64,
}

impl LogBound {
    fn from_ln(ln_value: f64) -> Self {
        Self { value: ln_value.exp(), ln_value }
    }
}

/// Szegő's bound `|L_n^{(m)}(x)| ≤ ((m+1)_n / n!) e^{x/2}` for `x, m ≥ 0`.
pub fn szego_bound(n: u64, m: f64, x: f64) -> Result<LogBound> {
    if !(m >= 0.0) || !(x >= 0.0) {
        return Err(Error::Domain(format!("Szegő bound needs m, x >= 0 (m = {m}, x = {x})")));
    }
    Ok(LogBound::from_ln(pochhammer_log(m + 1.0, n)? - ln_factorial(n) + 0.5 * x))
}

/// `ln q_n` with `q_n = √((2n)!) / (2^{n+1/2} n!)`.
pub fn rooney_ln_q(n: u64) -> f64 {
    0.5 * ln_factorial(2 * n) - (n as f64 + 0.5) * std::f64::consts::LN_2 - ln_factorial(n)
}

/// Large-`n` form `q_n ≈ (4πn)^{-1/4}`.
pub fn rooney_q_asymptotic(n: u64) -> f64 {
    (4.0 * std::f64::consts::PI * n as f64).powf(-0.25)
}

/// Rooney's bound `|L_n^{(m)}(x)| ≤ 2^{−m} q_n e^{x/2}` for `m ≤ −1/2`, `x ≥ 0`.
pub fn rooney_bound(n: u64, m: f64, x: f64) -> Result<LogBound> {
    if !(m <= -0.5) {
        return Err(Error::Domain(format!("Rooney bound needs m <= -1/2, got {m}")));
    }
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("Rooney bound needs x >= 0, got {x}")));
    }
    Ok(LogBound::from_ln(-m * std::f64::consts::LN_2 + rooney_ln_q(n) + 0.5 * x))
}

//! Independent reference evaluations shared by the integration tests.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use qir_core::special::ln_factorial;

/// `T` at `n̄ = 1`, `x = 1` from exact integers.
///
/// With `A = n! L_n^{(m)}(1)` (an integer),
/// `p(k,l) = 2^{−(k+1)} e^{−1} A² / (n! (n+m)!)` and `|z|³ = |d+1|³ ln³2`,
/// so `T = e^{−1} ln³2 · Σ A² |d+1|³ / (2^{k+1} n! (n+m)!)`. Terms are summed
/// in fixed point with `FRAC` fractional bits after dropping everything whose
/// Szegő bound is below `2^{−(FRAC+20)}`.
pub fn brute_force_t() -> f64 {
    const K: u64 = 500;
    const FRAC: u64 = 256;
    let mut fact = vec![BigUint::one()];
    for j in 1..=2 * K {
        let next = &fact[j as usize - 1] * BigUint::from(j);
        fact.push(next);
    }
    let ln2 = std::f64::consts::LN_2;
    let mut total = BigUint::zero();
    for k in 0..=K {
        for l in 0..=K {
            let (n, m) = (k.min(l), k.abs_diff(l));
            let d = k as i64 - l as i64;
            let w = (d + 1).unsigned_abs();
            if w == 0 {
                continue;
            }
            // |L_n^{(m)}(1)| ≤ C(n+m, n) e^{1/2}.
            let ln_bound = -((k + 1) as f64) * ln2 + ln_factorial(n + m) - ln_factorial(n)
                - 2.0 * ln_factorial(m)
                + 3.0 * (w as f64).ln();
            if ln_bound < -((FRAC + 20) as f64) * ln2 {
                continue;
            }
            // A = Σ_j (−1)^j t_j, t_0 = (n+m)!/m!, t_{j+1} = t_j (n−j)/((m+j+1)(j+1)).
            let mut t = &fact[(n + m) as usize] / &fact[m as usize];
            let (mut pos, mut neg) = (BigUint::zero(), BigUint::zero());
            for j in 0..=n {
                if j % 2 == 0 {
                    pos += &t;
                } else {
                    neg += &t;
                }
                if j < n {
                    t = t * BigUint::from(n - j) / BigUint::from((m + j + 1) * (j + 1));
                }
            }
            let a = if pos >= neg { pos - neg } else { neg - pos };
            let num = (&a * &a * BigUint::from(w * w * w)) << FRAC;
            let den = (&fact[n as usize] * &fact[(n + m) as usize]) << (k + 1);
            total += num / den;
        }
    }
    let shift = total.bits().saturating_sub(60);
    let mantissa = (total >> shift).to_f64().unwrap();
    let sum = mantissa * 2f64.powi(shift as i32 - FRAC as i32);
    (-1.0f64).exp() * ln2.powi(3) * sum
}

/// `e^{−z} I_ν(z)` for `ν = 0..=top` by Miller's backward recurrence,
/// normalised with `e^{−z}(I₀ + 2 Σ I_ν) = 1`.
fn scaled_bessel_i_all(z: f64, top: usize) -> Vec<f64> {
    let start = top + 64;
    let mut v = vec![0.0f64; start + 2];
    v[start] = 1e-300;
    for nu in (1..=start).rev() {
        v[nu - 1] = v[nu + 1] + 2.0 * nu as f64 / z * v[nu];
        if v[nu - 1] > 1e250 {
            for e in v[nu - 1..].iter_mut() {
                *e *= 1e-250;
            }
        }
    }
    let norm: f64 = v[0] + 2.0 * v[1..].iter().sum::<f64>();
    v.truncate(top + 1);
    v.iter().map(|e| e / norm).collect()
}

/// `T` from the difference law `k − l ~ Poisson(x n̄) − Poisson(x(n̄+1))`, whose
/// mass is `e^{−(μ₁+μ₂)} (μ₁/μ₂)^{d/2} I_{|d|}(2√(μ₁μ₂))`.
pub fn skellam_t(nb: f64, x: f64) -> f64 {
    let (mu1, mu2) = (x * nb, x * (nb + 1.0));
    let z = 2.0 * (mu1 * mu2).sqrt();
    let span = (x + 40.0 * (mu1 + mu2).sqrt() + 100.0) as usize;
    let bessel = scaled_bessel_i_all(z, span);
    let ln_l = (nb / (nb + 1.0)).ln();
    let gap = (mu2.sqrt() - mu1.sqrt()).powi(2);
    let half_ln_ratio = 0.5 * (mu1 / mu2).ln();
    let mut t = 0.0f64;
    for d in -(span as i64)..=(span as i64) {
        let p = (-gap + d as f64 * half_ln_ratio).exp() * bessel[d.unsigned_abs() as usize];
        t += p * ((d as f64 + x) * ln_l).abs().powi(3);
    }
    t
}

/// `e^{−z} I₀(z) = (1/π) ∫_0^π e^{z(cos θ − 1)} dθ` by the trapezoid rule,
/// which converges geometrically for this periodic integrand.
pub fn i0_scaled_trapezoid(z: f64) -> f64 {
    const N: usize = 400;
    let h = std::f64::consts::PI / N as f64;
    let f = |th: f64| (z * (th.cos() - 1.0)).exp();
    let inner: f64 = (1..N).map(|i| f(i as f64 * h)).sum();
    (0.5 * (f(0.0) + f(std::f64::consts::PI)) + inner) * h / std::f64::consts::PI
}

/// `1 − Q(x, y) = ∫_0^y t e^{−(t−x)²/2} e^{−tx} I₀(tx) dt` by composite Simpson.
fn complement_quadrature(x: f64, y: f64, panels: usize) -> f64 {
    let h = y / panels as f64;
    let f = |t: f64| t * (-0.5 * (t - x) * (t - x)).exp() * i0_scaled_trapezoid(t * x);
    let mut s = f(0.0) + f(y);
    for i in 1..panels {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
    }
    s * h / 3.0
}

/// Richardson-extrapolated Simpson, checked against one further halving.
pub fn oracle_complement(x: f64, y: f64) -> f64 {
    let extrapolate = |n: usize| {
        let (c, f) = (complement_quadrature(x, y, n), complement_quadrature(x, y, 2 * n));
        (16.0 * f - c) / 15.0
    };
    let (a, b) = (extrapolate(1000), extrapolate(2000));
    assert!((a - b).abs() < 1e-12 * b, "{a} vs {b}");
    b
}

/// `Φ(x)` for `x < 0` from `½ + φ(x) Σ x^{2n+1}/(2n+1)!!`; shares no code with libm.
pub fn series_cdf(x: f64) -> f64 {
    let phi = (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0f64;
    while term.abs() > 1e-18 * sum.abs() {
        n += 1.0;
        term *= x * x / (2.0 * n + 1.0);
        sum += term;
    }
    0.5 + phi * sum
}

pub fn bisect_quantile(p: f64) -> f64 {
    let (mut lo, mut hi) = (-10.0f64, 0.0f64);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if series_cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

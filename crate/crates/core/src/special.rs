//! Gamma-function helpers shared by the Fock-space and Marcum code.

/// `ln Γ(x)` for `x > 0`.
#[inline]
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `ln n!`. Exact products below 32, `lgamma` beyond.
pub fn ln_factorial(n: u64) -> f64 {
    if n < 32 {
        let mut p = 1.0f64;
        for i in 2..=n {
            p *= i as f64;
        }
        p.ln()
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// `ln [(a+n)! / a!]` for integer arguments, summed directly when `n` is small.
pub fn ln_rising_factorial_int(a: u64, n: u64) -> f64 {
    if n <= 16 {
        (1..=n).map(|i| ((a + i) as f64).ln()).sum()
    } else {
        ln_factorial(a + n) - ln_factorial(a)
    }
}

/// `ln P(X = j)` for `X ~ Poisson(mean)`.
#[inline]
pub fn ln_poisson(j: u64, mean: f64) -> f64 {
    if mean == 0.0 {
        return if j == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    j as f64 * mean.ln() - mean - ln_factorial(j)
}

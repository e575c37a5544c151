//! Fock-basis reference states for the Gaussian formulas.

use nalgebra::{DMatrix, DVector};
use qir_core::GaussianState;

pub fn annihilation(dim: usize) -> DMatrix<f64> {
    DMatrix::from_fn(dim, dim, |i, j| if j == i + 1 { (j as f64).sqrt() } else { 0.0 })
}

/// A single-mode state `U τ U†` with `τ` thermal and `U = D(α) S(s)`, real α and s.
pub struct FockState {
    pub rho: DMatrix<f64>,
    pub log_rho: DMatrix<f64>,
}

impl FockState {
    pub fn new(dim: usize, nbar: f64, alpha: f64, squeeze: f64) -> Self {
        let a = annihilation(dim);
        let ad = a.transpose();
        let disp = ((&ad - &a) * alpha).exp();
        let sq = ((&a * &a - &ad * &ad) * (0.5 * squeeze)).exp();
        let u = disp * sq;
        let r = nbar / (nbar + 1.0);
        let weights = DVector::from_fn(dim, |k, _| (1.0 - r) * r.powi(k as i32));
        let logs = DVector::from_fn(dim, |k, _| (1.0 - r).ln() + k as f64 * r.ln());
        let rho = &u * DMatrix::from_diagonal(&weights) * u.transpose();
        let log_rho = &u * DMatrix::from_diagonal(&logs) * u.transpose();
        Self { rho, log_rho }
    }

    /// Mean and covariance matrix read off the density matrix (vacuum CM = I/2).
    pub fn gaussian(&self) -> GaussianState {
        let dim = self.rho.nrows();
        let a = annihilation(dim);
        let ad = a.transpose();
        let s2 = std::f64::consts::SQRT_2;
        let q = (&a + &ad) / s2;
        // p = i(a† − a)/√2; only p² and the real parts below are needed.
        let k = (&ad - &a) / s2;
        let ev = |op: &DMatrix<f64>| (&self.rho * op).trace();
        let mq = ev(&q);
        let var_q = ev(&(&q * &q)) - mq * mq;
        let var_p = -ev(&(&k * &k));
        // For real symmetric ρ, ⟨p⟩ and the q–p covariance vanish.
        let cm = DMatrix::from_row_slice(2, 2, &[var_q, 0.0, 0.0, var_p]);
        GaussianState::new(DVector::from_column_slice(&[mq, 0.0]), cm).unwrap()
    }
}

/// `(D, V)` of `ρ₀ ‖ ρ₁` evaluated in the truncated Fock basis.
pub fn fock_moments(s0: &FockState, s1: &FockState) -> (f64, f64) {
    let delta = &s0.log_rho - &s1.log_rho;
    let rd = &s0.rho * &delta;
    let d = rd.trace();
    let second = (&rd * &delta).trace();
    (d, second - d * d)
}

//! Gaussian states, the thermal detection scenario, and the first two
//! relative-entropy moments of a Gaussian state pair.
//!
//! Quadratures are ordered `q1, p1, ..., qN, pN` with vacuum covariance `I/2`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Symplectic eigenvalues closer than this to 1/2 make the Gibbs matrix diverge.
pub const DEFAULT_EPS_PURE: f64 = 1e-9;

const SYMMETRY_TOL: f64 = 1e-12;
const BONA_FIDE_TOL: f64 = 1e-12;
const IMAG_RESIDUE_TOL: f64 = 1e-10;
const CLAMP_TOL: f64 = 1e-10;

/// Block-diagonal symplectic form with blocks `[[0, 1], [-1, 0]]`.
pub fn symplectic_form(modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * modes, 2 * modes);
    for j in 0..modes {
        omega[(2 * j, 2 * j + 1)] = 1.0;
        omega[(2 * j + 1, 2 * j)] = -1.0;
    }
    omega
}

/// An N-mode bosonic Gaussian state given by its first and second moments.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    cm: DMatrix<f64>,
    modes: usize,
}

impl GaussianState {
    /// Validates shape, symmetry and the uncertainty principle.
    pub fn new(mean: DVector<f64>, cm: DMatrix<f64>) -> Result<Self> {
        let dim = cm.nrows();
        if dim == 0 || dim & 1 == 1 || cm.ncols() != dim {
            return Err(Error::InvalidParameter(format!(
                "covariance matrix must be 2N x 2N, got {}x{}",
                cm.nrows(),
                cm.ncols()
            )));
        }
        if mean.len() != dim {
            return Err(Error::InvalidParameter(format!(
                "mean has length {}, expected {dim}",
                mean.len()
            )));
        }
        if mean.iter().chain(cm.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite moments".into()));
        }
        let scale = cm.amax().max(f64::MIN_POSITIVE);
        let asym = (&cm - cm.transpose()).amax();
        if asym > SYMMETRY_TOL * scale {
            return Err(Error::InvalidParameter(format!(
                "covariance matrix is not symmetric (residue {asym:e})"
            )));
        }
        let cm = (&cm + cm.transpose()) * 0.5;
        let state = Self {
            mean,
            cm,
            modes: dim / 2,
        };
        let nus = state.symplectic_eigenvalues()?;
        if let Some(&nu) = nus.iter().find(|&&nu| nu < 0.5 - BONA_FIDE_TOL) {
            return Err(Error::InvalidParameter(format!(
                "symplectic eigenvalue {nu} violates the uncertainty principle"
            )));
        }
        Ok(state)
    }

    /// Single-mode thermal state with `nbar` mean photons, displaced to `mean`.
    pub fn thermal(nbar: f64, mean: [f64; 2]) -> Result<Self> {
        if !(nbar >= 0.0) {
            return Err(Error::InvalidParameter(format!("thermal occupation {nbar}")));
        }
        Self::new(
            DVector::from_column_slice(&mean),
            DMatrix::identity(2, 2) * (nbar + 0.5),
        )
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cm(&self) -> &DMatrix<f64> {
        &self.cm
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn omega(&self) -> DMatrix<f64> {
        symplectic_form(self.modes)
    }

    /// Symplectic eigenvalues in ascending order, from the spectrum of the
    /// Hermitian matrix `i Lᵀ Ω L` (with `V = L Lᵀ`), which is similar to `iΩV`.
    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        let (_, eig) = self.hermitian_spectrum()?;
        let mut nus: Vec<f64> = eig.eigenvalues.iter().map(|l| l.abs() / 2.0).collect();
        nus.sort_by(f64::total_cmp);
        // Eigenvalues come in ± pairs.
        Ok(nus.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect())
    }

    /// Cholesky factor `L` of the CM and the eigendecomposition of
    /// `2i Lᵀ Ω L`, whose eigenvalues are `±2ν`.
    fn hermitian_spectrum(&self) -> Result<(DMatrix<f64>, SymmetricEigen<Complex64, nalgebra::Dyn>)> {
        let l = self
            .cm
            .clone()
            .cholesky()
            .ok_or_else(|| Error::InvalidParameter("covariance matrix is not positive definite".into()))?
            .l();
        let a = l.transpose() * self.omega() * &l;
        let h = a.map(|v| Complex64::new(0.0, 2.0 * v));
        Ok((l, SymmetricEigen::new(h)))
    }
}

/// Physical parameters of the single-bin detection problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalScenario {
    nb: f64,
    eta: f64,
    ns: f64,
}

impl ThermalScenario {
    pub fn new(nb: f64, eta: f64, ns: f64) -> Result<Self> {
        if !(nb > 0.0 && nb.is_finite()) {
            return Err(Error::InvalidParameter(format!("nb must be > 0, got {nb}")));
        }
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::InvalidParameter(format!("eta must lie in [0, 1], got {eta}")));
        }
        if !(ns >= 0.0 && ns.is_finite()) {
            return Err(Error::InvalidParameter(format!("ns must be >= 0, got {ns}")));
        }
        Ok(Self { nb, eta, ns })
    }

    /// Unit transmissivity with `ns = gamma * nb`.
    pub fn from_snr(nb: f64, gamma: f64) -> Result<Self> {
        Self::new(nb, 1.0, gamma * nb)
    }

    pub fn nb(&self) -> f64 {
        self.nb
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn ns(&self) -> f64 {
        self.ns
    }

    /// `γ = η n̄_S / n̄_B`.
    pub fn snr(&self) -> f64 {
        self.eta * self.ns / self.nb
    }

    /// Mean number of signal photons at the receiver, `η n̄_S`.
    pub fn received_photons(&self) -> f64 {
        self.eta * self.ns
    }
}

/// Relative-entropy moments `(D, V, T)` of a state pair, in nats.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelEntStats {
    pub d: f64,
    pub v: f64,
    pub t: Option<f64>,
}

/// Target-absent and target-present output states.
pub fn scenario_states(s: &ThermalScenario) -> (GaussianState, GaussianState) {
    let cm = DMatrix::identity(2, 2) * (s.nb + 0.5);
    let q1 = (2.0 * s.eta * s.ns).sqrt();
    let rho0 = GaussianState {
        mean: DVector::zeros(2),
        cm: cm.clone(),
        modes: 1,
    };
    let rho1 = GaussianState {
        mean: DVector::from_column_slice(&[q1, 0.0]),
        cm,
        modes: 1,
    };
    (rho0, rho1)
}

#[inline]
fn arccoth_times_arg(z_abs: f64) -> f64 {
    // |z| coth⁻¹|z| = |z| · ½ ln((|z|+1)/(|z|-1)), even in z.
    0.5 * z_abs * (2.0 / (z_abs - 1.0)).ln_1p()
}

/// Gibbs matrix `G = 2iΩ coth⁻¹(2iVΩ)` with the default purity cutoff.
pub fn gibbs_matrix(state: &GaussianState) -> Result<DMatrix<f64>> {
    gibbs_matrix_with(state, DEFAULT_EPS_PURE)
}

/// Gibbs matrix with an explicit purity cutoff.
///
/// `2iVΩ = (LU) Λ (LU)⁻¹` where `U Λ U†` diagonalizes `2i Lᵀ Ω L`; folding
/// the outer `2iΩ` through gives `G = L⁻ᵀ U (Λ coth⁻¹Λ) U† L⁻¹`.
pub fn gibbs_matrix_with(state: &GaussianState, eps_pure: f64) -> Result<DMatrix<f64>> {
    let (l, eig) = state.hermitian_spectrum()?;
    let n = l.nrows();
    let mut scaled = DMatrix::<Complex64>::zeros(n, n);
    for (j, &lam) in eig.eigenvalues.iter().enumerate() {
        let nu = lam.abs() / 2.0;
        if nu - 0.5 <= eps_pure {
            return Err(Error::SingularGibbs { nu, eps: eps_pure });
        }
        let g = arccoth_times_arg(lam.abs());
        let col = eig.eigenvectors.column(j);
        scaled += (col * col.adjoint()) * Complex64::new(g, 0.0);
    }
    let l_inv = l
        .solve_lower_triangular(&DMatrix::identity(n, n))
        .ok_or_else(|| Error::Consistency("singular Cholesky factor".into()))?;
    let l_inv_c = l_inv.map(|v| Complex64::new(v, 0.0));
    let g = l_inv_c.transpose() * scaled * &l_inv_c;
    let residue = g.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if residue > IMAG_RESIDUE_TOL {
        return Err(Error::Consistency(format!(
            "Gibbs matrix imaginary residue {residue:e}"
        )));
    }
    let g = g.map(|z| z.re);
    Ok((&g + g.transpose()) * 0.5)
}

fn check_modes(a: &GaussianState, b: &GaussianState) -> Result<()> {
    if a.modes != b.modes {
        return Err(Error::ModeMismatch {
            left: a.modes,
            right: b.modes,
        });
    }
    Ok(())
}

/// `ln det(V + iΩ/2)`.
fn ln_det_shifted(state: &GaussianState) -> Result<f64> {
    let omega = state.omega();
    let m = DMatrix::from_fn(state.cm.nrows(), state.cm.ncols(), |i, j| {
        Complex64::new(state.cm[(i, j)], 0.5 * omega[(i, j)])
    });
    let det = m.determinant();
    if det.im.abs() > IMAG_RESIDUE_TOL * det.norm() {
        return Err(Error::Consistency(format!("det(V + iΩ/2) = {det} is not real")));
    }
    if !(det.re > 0.0) {
        return Err(Error::SingularGibbs {
            nu: 0.5,
            eps: DEFAULT_EPS_PURE,
        });
    }
    Ok(det.re.ln())
}

fn quad_form(g: &DMatrix<f64>, v: &DVector<f64>) -> f64 {
    v.dot(&(g * v))
}

/// `Σ(V₀,V₁) = ½[ln det(V₁ + iΩ/2) + Tr(V₀G₁) + δᵀG₁δ]`, `δ = x̄₀ − x̄₁`.
pub fn sigma_fn(v0: &GaussianState, v1: &GaussianState) -> Result<f64> {
    check_modes(v0, v1)?;
    let g1 = gibbs_matrix(v1)?;
    let delta = &v0.mean - &v1.mean;
    Ok(0.5 * (ln_det_shifted(v1)? + (&v0.cm * &g1).trace() + quad_form(&g1, &delta)))
}

fn clamp_nonnegative(value: f64, what: &str) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -CLAMP_TOL {
        Ok(0.0)
    } else {
        Err(Error::Consistency(format!("{what} = {value:e} is negative")))
    }
}

/// `D(ρ₀‖ρ₁) = Σ(V₀,V₁) − Σ(V₀,V₀)`, evaluated term by term so matching
/// pieces cancel exactly.
pub fn rel_entropy(rho0: &GaussianState, rho1: &GaussianState) -> Result<f64> {
    check_modes(rho0, rho1)?;
    let g0 = gibbs_matrix(rho0)?;
    let g1 = gibbs_matrix(rho1)?;
    let delta = &rho0.mean - &rho1.mean;
    let ln_det = ln_det_shifted(rho1)? - ln_det_shifted(rho0)?;
    let trace = (&rho0.cm * (&g1 - &g0)).trace();
    let d = 0.5 * (ln_det + trace + quad_form(&g1, &delta));
    clamp_nonnegative(d, "relative entropy")
}

/// `V(ρ₀‖ρ₁) = Tr[(ΓV₀)²]/2 + Tr[(ΓΩ)²]/8 + δᵀG₁V₀G₁δ` with `Γ = G₀ − G₁`.
pub fn rel_entropy_variance(rho0: &GaussianState, rho1: &GaussianState) -> Result<f64> {
    check_modes(rho0, rho1)?;
    let g0 = gibbs_matrix(rho0)?;
    let g1 = gibbs_matrix(rho1)?;
    let gamma = &g0 - &g1;
    let delta = &rho0.mean - &rho1.mean;
    let gv = &gamma * &rho0.cm;
    let go = &gamma * rho0.omega();
    let shifted = &g1 * &delta;
    let v = 0.5 * (&gv * &gv).trace()
        + 0.125 * (&go * &go).trace()
        + quad_form(&rho0.cm, &shifted);
    clamp_nonnegative(v, "relative entropy variance")
}

/// Closed forms `D = γ n̄_B ln(1+1/n̄_B)`, `V = γ n̄_B (2n̄_B+1) ln²(1+1/n̄_B)`.
pub fn thermal_closed_forms(s: &ThermalScenario) -> RelEntStats {
    let x = s.snr() * s.nb;
    let lg = s.nb.recip().ln_1p();
    RelEntStats {
        d: x * lg,
        v: x * (2.0 * s.nb + 1.0) * lg * lg,
        t: None,
    }
}

/// Leading-order `(D, V) ≈ (γ, 2γ)` for `n̄_B ≫ 1`.
pub fn large_nb_expansion(gamma: f64) -> (f64, f64) {
    (gamma, 2.0 * gamma)
}

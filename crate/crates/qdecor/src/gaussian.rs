//! Two-mode Gaussian states at the level of the characteristic-function correlation matrix M,
//! χ(q) = e^{−½ qᵀ M q}, quadrature order (x_A, y_A, x_B, y_B). The vacuum is M = 1.
//!
//! A covariant Gaussian noise channel adds U = J G⁻¹ Jᵀ with J = diag(j, −j),
//! j = [[0, −1], [1, 0]]. J is the real matrix −i·diag(σ_y, −σ_y); the two conventions give the
//! same U.

use nalgebra::{Matrix2, Matrix4};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, RMat, C64};

pub type M2 = Matrix2<f64>;
pub type M4 = Matrix4<f64>;

pub const SYM_TOL: f64 = 1e-12;
pub const PHYS_TOL: f64 = 1e-9;
pub const NOISE_FLOOR: f64 = 0.5;

fn j2() -> M2 {
    M2::new(0.0, -1.0, 1.0, 0.0)
}

fn sigma_z() -> M2 {
    M2::new(1.0, 0.0, 0.0, -1.0)
}

/// J = diag(j, −j): Jᵀ = −J, J² = −1.
pub fn sigma_coupling() -> M4 {
    let mut s = M4::zeros();
    s.fixed_view_mut::<2, 2>(0, 0).copy_from(&j2());
    s.fixed_view_mut::<2, 2>(2, 2).copy_from(&(-j2()));
    s
}

/// ω ⊕ ω with ω = [[0, 1], [−1, 0]].
pub fn omega() -> M4 {
    let w = M2::new(0.0, 1.0, -1.0, 0.0);
    blocks(&w, &M2::zeros(), &M2::zeros(), &w)
}

pub fn blocks(a: &M2, c: &M2, ct: &M2, b: &M2) -> M4 {
    let mut m = M4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(c);
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(ct);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(b);
    m
}

fn offdiag(c: &M2) -> M4 {
    blocks(&M2::zeros(), c, &c.transpose(), &M2::zeros())
}

fn max_abs4(m: &M4) -> f64 {
    m.iter().fold(0.0_f64, |a, v| a.max(v.abs()))
}

fn min_eig_sym(m: &M4) -> f64 {
    m.symmetric_eigen().eigenvalues.min()
}

fn to_cmat(m: &M4) -> CMat {
    CMat::from_fn(4, 4, |r, c| C64::new(m[(r, c)], 0.0))
}

/// Symplectic eigenvalues (ν₁ ≤ ν₂): the positive eigenvalues of i M^{1/2} Ω M^{1/2}.
pub fn symplectic_eigenvalues(m: &M4) -> [f64; 2] {
    let eig = m.symmetric_eigen();
    let root = eig.eigenvectors * M4::from_diagonal(&eig.eigenvalues.map(|x| x.max(0.0).sqrt())) * eig.eigenvectors.transpose();
    let k = root * omega() * root;
    let h = to_cmat(&k) * C64::new(0.0, 1.0);
    let ev = linalg::eigvals_h(&h);
    [ev[2], ev[3]]
}

/// Min eigenvalue of M + (i/4)Ω, the uncertainty relation with the literal factor ¼.
pub fn heisenberg_quarter_factor(m: &M4) -> f64 {
    let h = to_cmat(m) + to_cmat(&omega()) * C64::new(0.0, 0.25);
    linalg::min_eig_h(&h)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeGaussian {
    m: M4,
}

impl TwoModeGaussian {
    /// Requires symmetry, positive definiteness and symplectic eigenvalues ≥ 1.
    pub fn new(m: M4) -> Result<Self> {
        let asym = max_abs4(&(m - m.transpose()));
        if asym > SYM_TOL {
            return Err(Error::InvalidState(format!("correlation matrix not symmetric (defect {asym:.3e})")));
        }
        let m = (m + m.transpose()) * 0.5;
        let min_eig = min_eig_sym(&m);
        if min_eig <= 0.0 {
            return Err(Error::NotPositiveDefinite { min_eig });
        }
        let nu = symplectic_eigenvalues(&m);
        if nu[0] < 1.0 - PHYS_TOL {
            return Err(Error::InvalidState(format!("unphysical: symplectic eigenvalue {:.6}", nu[0])));
        }
        Ok(Self { m })
    }

    pub fn matrix(&self) -> &M4 {
        &self.m
    }

    pub fn a(&self) -> M2 {
        self.m.fixed_view::<2, 2>(0, 0).into_owned()
    }

    pub fn b(&self) -> M2 {
        self.m.fixed_view::<2, 2>(2, 2).into_owned()
    }

    pub fn c(&self) -> M2 {
        self.m.fixed_view::<2, 2>(0, 2).into_owned()
    }

    pub fn symplectic_eigenvalues(&self) -> [f64; 2] {
        symplectic_eigenvalues(&self.m)
    }

    /// Mean photon number of each mode, from the mean of its diagonal block.
    pub fn nbar_per_mode(&self) -> [f64; 2] {
        [thermal_photons(self.a().trace() / 2.0), thermal_photons(self.b().trace() / 2.0)]
    }
}

/// Two-mode squeezed vacuum with Schmidt ratio λ.
pub fn twin_beam(lam: f64) -> Result<TwoModeGaussian> {
    if !(0.0..1.0).contains(&lam) {
        return Err(Error::InvalidArgument(format!("lambda = {lam} must lie in [0, 1)")));
    }
    let d = 1.0 - lam * lam;
    let m = M4::identity() * ((1.0 + lam * lam) / d) - offdiag(&sigma_z()) * (2.0 * lam / d);
    TwoModeGaussian::new(m)
}

/// Coherent states with perfectly correlated amplitudes of variance δ².
pub fn correlated_coherent(delta2: f64) -> Result<TwoModeGaussian> {
    if !(delta2 >= 0.0) || !delta2.is_finite() {
        return Err(Error::InvalidArgument(format!("delta^2 = {delta2} must be >= 0")));
    }
    let m = M4::identity() * (1.0 + 2.0 * delta2) + offdiag(&sigma_z()) * (2.0 * delta2);
    TwoModeGaussian::new(m)
}

/// n̄ = (m − 1)/2 for a mode with correlation matrix m·1.
pub fn thermal_photons(m_diag: f64) -> f64 {
    (m_diag - 1.0) / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianNoiseMap {
    g: M4,
    ginv: M4,
}

impl GaussianNoiseMap {
    pub fn from_ginv(ginv: M4) -> Result<Self> {
        let ginv = (ginv + ginv.transpose()) * 0.5;
        let min_eig = min_eig_sym(&ginv);
        if min_eig <= 1e-10 * max_abs4(&ginv).max(1.0) {
            return Err(Error::NotPositiveDefinite { min_eig });
        }
        let g = ginv.try_inverse().ok_or(Error::NotPositiveDefinite { min_eig })?;
        Ok(Self { g, ginv })
    }

    pub fn from_g(g: M4) -> Result<Self> {
        let g = (g + g.transpose()) * 0.5;
        let min_eig = min_eig_sym(&g);
        if min_eig <= 1e-10 * max_abs4(&g).max(1.0) {
            return Err(Error::NotPositiveDefinite { min_eig });
        }
        let ginv = g.try_inverse().ok_or(Error::NotPositiveDefinite { min_eig })?;
        Ok(Self { g, ginv: (ginv + ginv.transpose()) * 0.5 })
    }

    pub fn g(&self) -> &M4 {
        &self.g
    }

    pub fn ginv(&self) -> &M4 {
        &self.ginv
    }

    pub fn w(&self) -> M2 {
        self.ginv.fixed_view::<2, 2>(0, 0).into_owned()
    }

    pub fn v(&self) -> M2 {
        self.ginv.fixed_view::<2, 2>(0, 2).into_owned()
    }

    pub fn z(&self) -> M2 {
        self.ginv.fixed_view::<2, 2>(2, 2).into_owned()
    }

    /// U = J G⁻¹ Jᵀ.
    pub fn added_noise(&self) -> M4 {
        let j = sigma_coupling();
        let u = j * self.ginv * j.transpose();
        (u + u.transpose()) * 0.5
    }
}

/// M ↦ M + U. Adding a positive matrix keeps the state physical.
pub fn apply_noise(state: &TwoModeGaussian, map: &GaussianNoiseMap) -> TwoModeGaussian {
    TwoModeGaussian { m: state.m + map.added_noise() }
}

/// V = σ_y C σ_y, written in real form as j C jᵀ.
pub fn decorrelating_v(state: &TwoModeGaussian) -> M2 {
    j2() * state.c() * j2().transpose()
}

/// Noise map with off-diagonal block V = σ_y C σ_y, which cancels C exactly.
pub fn decorrelator_for(state: &TwoModeGaussian, w: &M2, z: &M2) -> Result<GaussianNoiseMap> {
    let v = decorrelating_v(state);
    GaussianNoiseMap::from_ginv(blocks(w, &v, &v.transpose(), z))
}

/// W = Z = (1 + ε) s(V) · 1 with s the largest singular value of V; ε · 1 when C = 0.
pub fn default_wz(state: &TwoModeGaussian, eps: f64) -> Result<(M2, M2)> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidArgument(format!("eps = {eps} must be > 0")));
    }
    let s = decorrelating_v(state).singular_values().max();
    let w = if s > 1e-12 { (1.0 + eps) * s } else { eps };
    Ok((M2::identity() * w, M2::identity() * w))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stage {
    pub name: &'static str,
    /// Mean amplitude in units of the input amplitude α.
    pub amplitude: f64,
    /// Δx² + Δy² per output mode of the stage.
    pub noise: f64,
    pub modes: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CloneNoiseLedger {
    pub n: usize,
    pub m: usize,
    pub stages: Vec<Stage>,
    pub clone_amplitude: f64,
    pub clone_noise: f64,
    /// Largest |entry| of any off-diagonal 2×2 block of the splitter output, when verified.
    pub cross_correlation: Option<f64>,
}

fn pipeline_front(n: usize, m: usize, input_noises: &[f64]) -> Result<(f64, f64, Vec<Stage>)> {
    if n < 1 || m <= n {
        return Err(Error::InvalidArgument(format!("need M > N >= 1, got N={n}, M={m}")));
    }
    if input_noises.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: input_noises.len() });
    }
    if let Some(bad) = input_noises.iter().find(|&&g| !(g >= NOISE_FLOOR - 1e-12)) {
        return Err(Error::InvalidArgument(format!("input noise {bad} is below the coherent floor 1/2")));
    }
    let (nf, mf) = (n as f64, m as f64);
    let gamma = input_noises.iter().sum::<f64>() / nf;
    let gamma_amp = mf / nf * gamma + mf / (2.0 * nf) - 0.5;
    let stages = vec![
        Stage { name: "input", amplitude: 1.0, noise: gamma, modes: n },
        Stage { name: "concentration", amplitude: nf.sqrt(), noise: gamma, modes: 1 },
        Stage { name: "amplification", amplitude: mf.sqrt(), noise: gamma_amp, modes: 1 },
    ];
    Ok((gamma, gamma_amp, stages))
}

/// Concentrate, amplify by M/N, distribute with M−1 vacuum ancillas.
pub fn clone_pipeline(n: usize, m: usize, input_noises: &[f64]) -> Result<CloneNoiseLedger> {
    let (_, gamma_amp, mut stages) = pipeline_front(n, m, input_noises)?;
    let mf = m as f64;
    let big_gamma = (gamma_amp + (mf - 1.0) / 2.0) / mf;
    stages.push(Stage { name: "distribution", amplitude: 1.0, noise: big_gamma, modes: m });
    Ok(CloneNoiseLedger { n, m, stages, clone_amplitude: 1.0, clone_noise: big_gamma, cross_correlation: None })
}

/// As `clone_pipeline`, but the M−1 splitter ancillas are thermal with noise γ′, which leaves the
/// clones uncorrelated at per-clone noise γ′. The zero cross-correlation is checked on explicit
/// covariance matrices.
pub fn decorrelated_clone_pipeline(n: usize, m: usize, input_noises: &[f64]) -> Result<CloneNoiseLedger> {
    let (_, gamma_amp, mut stages) = pipeline_front(n, m, input_noises)?;
    let cov = splitter_input_cov(&vec![gamma_amp; m]);
    let out = msplitter_transform(&cov, &balanced_mixing(m))?;
    let noise = (0..m).map(|k| mode_noise(&out, k)).fold(f64::NEG_INFINITY, f64::max);
    stages.push(Stage { name: "distribution", amplitude: 1.0, noise, modes: m });
    Ok(CloneNoiseLedger {
        n,
        m,
        stages,
        clone_amplitude: 1.0,
        clone_noise: noise,
        cross_correlation: Some(max_cross_block(&out)),
    })
}

/// Quadrature covariance diag(γ_k/2, γ_k/2) per mode, so each mode block has trace γ_k.
pub fn splitter_input_cov(noises: &[f64]) -> RMat {
    let m = noises.len();
    let mut cov = RMat::zeros(2 * m, 2 * m);
    for (k, g) in noises.iter().enumerate() {
        cov[(2 * k, 2 * k)] = g / 2.0;
        cov[(2 * k + 1, 2 * k + 1)] = g / 2.0;
    }
    cov
}

/// Real orthogonal M×M matrix whose first column is uniform (Helmert construction), so a mode
/// entering port 0 reaches every output with amplitude 1/√M.
pub fn balanced_mixing(m: usize) -> RMat {
    let mut h = RMat::zeros(m, m);
    let mf = m as f64;
    for r in 0..m {
        h[(r, 0)] = 1.0 / mf.sqrt();
    }
    for k in 1..m {
        let kf = k as f64;
        let norm = (kf * (kf + 1.0)).sqrt();
        for r in 0..k {
            h[(r, k)] = 1.0 / norm;
        }
        h[(k, k)] = -kf / norm;
    }
    h
}

/// S cov Sᵀ with S = mixing ⊗ 1₂.
pub fn msplitter_transform(cov: &RMat, mixing: &RMat) -> Result<RMat> {
    let m = mixing.nrows();
    if mixing.ncols() != m {
        return Err(Error::DimensionMismatch { expected: m, got: mixing.ncols() });
    }
    if cov.nrows() != 2 * m || cov.ncols() != 2 * m {
        return Err(Error::DimensionMismatch { expected: 2 * m, got: cov.nrows() });
    }
    let defect = linalg::max_abs_real(&(mixing * mixing.transpose() - RMat::identity(m, m)));
    if defect > 1e-10 {
        return Err(Error::InvalidArgument(format!("mixing matrix not orthogonal (defect {defect:.3e})")));
    }
    let s = mixing.kronecker(&RMat::identity(2, 2));
    let out = &s * cov * s.transpose();
    Ok((&out + out.transpose()) * 0.5)
}

/// Trace of mode `k`'s 2×2 block.
pub fn mode_noise(cov: &RMat, k: usize) -> f64 {
    cov[(2 * k, 2 * k)] + cov[(2 * k + 1, 2 * k + 1)]
}

/// Trace of the (j, k) off-diagonal block, in the same units as `mode_noise`.
pub fn cross_correlation_trace(cov: &RMat, j: usize, k: usize) -> f64 {
    cov[(2 * j, 2 * k)] + cov[(2 * j + 1, 2 * k + 1)]
}

/// Largest |entry| over all off-diagonal 2×2 blocks.
pub fn max_cross_block(cov: &RMat) -> f64 {
    let m = cov.nrows() / 2;
    let mut worst = 0.0_f64;
    for j in 0..m {
        for k in 0..m {
            if j != k {
                for a in 0..2 {
                    for b in 0..2 {
                        worst = worst.max(cov[(2 * j + a, 2 * k + b)].abs());
                    }
                }
            }
        }
    }
    worst
}

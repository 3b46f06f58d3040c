//! One- and two-qubit states in the Pauli parametrization.
//!
//! Basis index of a two-qubit operator is `2a + b` for `|a⟩⊗|b⟩`, with `|0⟩` the +1 eigenvector of
//! σ_z. Pauli indices run `0 = 1, 1 = x, 2 = y, 3 = z`.

use crate::error::{Error, Result};
use crate::linalg::{self, c, kron, max_abs, CMat, CVec, C64, I, ONE, ZERO};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;
pub const PRODUCT_TOL: f64 = 1e-8;

pub fn pauli(k: usize) -> CMat {
    match k {
        0 => CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ONE]),
        1 => CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        2 => CMat::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        3 => CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
        _ => panic!("pauli index {k} out of range"),
    }
}

/// σ_i ⊗ σ_j.
pub fn pauli2(i: usize, j: usize) -> CMat {
    kron(&pauli(i), &pauli(j))
}

/// A validated density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(CMat);

impl DensityMatrix {
    pub fn new(m: CMat) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidDensity("not square".into()));
        }
        let h = linalg::hermitian_defect(&m);
        if h > HERMITIAN_TOL {
            return Err(Error::InvalidDensity(format!("hermiticity defect {h:.3e}")));
        }
        let tr = m.trace();
        if (tr - ONE).norm() > TRACE_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr}")));
        }
        let min_eig = linalg::min_eig_h(&m);
        if min_eig < -PSD_TOL {
            return Err(Error::NotPositive { min_eig });
        }
        Ok(Self(m))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.0
    }

    pub fn into_matrix(self) -> CMat {
        self.0
    }
}

impl AsRef<CMat> for DensityMatrix {
    fn as_ref(&self) -> &CMat {
        &self.0
    }
}

/// Permutation-invariant two-qubit state
/// ρ = ¼(1 + η(σ_z⊗1 + 1⊗σ_z) − Σ λ_ij σ_i⊗σ_j).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitPauliState {
    eta: f64,
    lam: [[f64; 3]; 3],
}

impl TwoQubitPauliState {
    /// `lam` must be symmetric; only the upper triangle is read.
    pub fn new(eta: f64, lam: [[f64; 3]; 3]) -> Result<Self> {
        if !eta.is_finite() || lam.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidState("non-finite parameter".into()));
        }
        let mut sym = lam;
        for i in 0..3 {
            for j in 0..i {
                sym[i][j] = lam[j][i];
            }
        }
        let s = Self { eta, lam: sym };
        let min_eig = linalg::min_eig_h(&s.realize());
        if min_eig < -PSD_TOL {
            return Err(Error::NotPositive { min_eig });
        }
        Ok(s)
    }

    /// Only λ_zz nonzero.
    pub fn zz(eta: f64, lambda: f64) -> Result<Self> {
        Self::new(eta, [[0.0; 3], [0.0; 3], [0.0, 0.0, lambda]])
    }

    /// Symmetric-subspace member: λ_xx = λ_yy = −(1+λ)/2, λ_zz = λ.
    pub fn symmetric(eta: f64, lambda: f64) -> Result<Self> {
        let t = -(1.0 + lambda) / 2.0;
        Self::new(eta, [[t, 0.0, 0.0], [0.0, t, 0.0], [0.0, 0.0, lambda]])
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn lam(&self) -> [[f64; 3]; 3] {
        self.lam
    }

    pub fn lam_zz(&self) -> f64 {
        self.lam[2][2]
    }

    /// Λ = λ_xx + λ_yy + λ_zz.
    pub fn big_lambda(&self) -> f64 {
        self.lam[0][0] + self.lam[1][1] + self.lam[2][2]
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix(self.realize())
    }

    fn realize(&self) -> CMat {
        let mut m = pauli2(0, 0);
        m += (pauli2(3, 0) + pauli2(0, 3)).scale(self.eta);
        for i in 0..3 {
            for j in 0..3 {
                m -= pauli2(i + 1, j + 1).scale(self.lam[i][j]);
            }
        }
        m.scale(0.25)
    }

    /// Reads (η, λ) back through η = Tr[σ_z⊗1 ρ], λ_ij = −Tr[σ_i⊗σ_j ρ].
    /// Fails if ρ is not of the permutation-invariant z-axis form.
    pub fn from_density(rho: &CMat) -> Result<Self> {
        check_dim(rho, 4)?;
        let ex = |i, j| (pauli2(i, j) * rho).trace();
        let eta = ex(3, 0).re;
        let mut lam = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                lam[i][j] = -ex(i + 1, j + 1).re;
            }
        }
        let s = Self::new(eta, lam)?;
        let defect = max_abs(&(s.realize() - rho));
        if defect > 1e-10 {
            return Err(Error::InvalidState(format!("not permutation invariant along z (defect {defect:.3e})")));
        }
        Ok(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn of(rho: &CMat) -> Result<Self> {
        check_dim(rho, 2)?;
        let ex = |k| (pauli(k) * rho).trace().re;
        let v = Self { x: ex(1), y: ex(2), z: ex(3) };
        if v.norm() > 1.0 + 1e-10 {
            return Err(Error::InvalidDensity(format!("Bloch length {}", v.norm())));
        }
        Ok(v)
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// ½(1 + r·σ).
    pub fn to_density(&self) -> CMat {
        (pauli(0) + pauli(1).scale(self.x) + pauli(2).scale(self.y) + pauli(3).scale(self.z)).scale(0.5)
    }
}

/// ½(1 + η σ_z).
pub fn z_qubit(eta: f64) -> CMat {
    BlochVector { x: 0.0, y: 0.0, z: eta }.to_density()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

fn check_dim(m: &CMat, dim: usize) -> Result<()> {
    if m.nrows() != dim || m.ncols() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: m.nrows() });
    }
    Ok(())
}

pub fn partial_trace(rho: &CMat, keep: Subsystem) -> Result<CMat> {
    check_dim(rho, 4)?;
    let mask = match keep {
        Subsystem::A => [true, false],
        Subsystem::B => [false, true],
    };
    Ok(linalg::partial_trace_dims(rho, &[2, 2], &mask))
}

/// Uhlmann fidelity in the squared convention, F = (Tr√(√ρ σ √ρ))².
pub fn fidelity(rho: &CMat, sigma: &CMat) -> Result<f64> {
    check_dim(sigma, rho.nrows())?;
    let s = linalg::sqrt_psd(rho);
    let inner = &s * sigma * &s;
    let root_trace: f64 = linalg::eigvals_h(&inner).iter().map(|x| x.max(0.0).sqrt()).sum();
    Ok((root_trace * root_trace).clamp(0.0, 1.0))
}

/// Max-abs entry of ρ − ρ_A ⊗ ρ_B.
pub fn product_residual(rho: &CMat) -> Result<f64> {
    let a = partial_trace(rho, Subsystem::A)?;
    let b = partial_trace(rho, Subsystem::B)?;
    Ok(max_abs(&(rho - kron(&a, &b))))
}

pub fn is_product(rho: &CMat, tol: f64) -> Result<(bool, f64)> {
    let r = product_residual(rho)?;
    Ok((r <= tol, r))
}

/// Row-major vectorization: component `2m + n` is `A[m][n]`, so `vec(1) = |00⟩ + |11⟩`.
pub fn vec(a: &CMat) -> CVec {
    assert_eq!((a.nrows(), a.ncols()), (2, 2));
    CVec::from_vec(vec![a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]])
}

pub fn unvec(v: &CVec) -> CMat {
    assert_eq!(v.len(), 4);
    CMat::from_row_slice(2, 2, &[v[0], v[1], v[2], v[3]])
}

/// ¼(1⊗1 − σ_x⊗σ_x − σ_y⊗σ_y − σ_z⊗σ_z), the projector onto |Ψ⁻⟩.
pub fn projector_singlet() -> CMat {
    (pauli2(0, 0) - pauli2(1, 1) - pauli2(2, 2) - pauli2(3, 3)).scale(0.25)
}

pub fn projector_triplet() -> CMat {
    linalg::identity(4) - projector_singlet()
}

pub fn ket(amps: &[C64]) -> CVec {
    CVec::from_column_slice(amps)
}

pub fn proj(v: &CVec) -> CMat {
    v * v.adjoint()
}

/// (|01⟩ − |10⟩)/√2.
pub fn psi_minus() -> CVec {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    ket(&[ZERO, c(h), c(-h), ZERO])
}

/// (|01⟩ + |10⟩)/√2.
pub fn psi_plus() -> CVec {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    ket(&[ZERO, c(h), c(h), ZERO])
}

/// σ_y^⊗2 ρᵀ σ_y^⊗2 for a two-qubit operator.
pub fn spin_flip(rho: &CMat) -> CMat {
    let yy = pauli2(2, 2);
    &yy * rho.transpose() * &yy
}

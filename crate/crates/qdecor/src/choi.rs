//! Choi operators of channels, ordered out⊗in:
//! R = Σ_ij D(|i⟩⟨j|) ⊗ |i⟩⟨j|, and D(ρ) = Tr_in[R (1 ⊗ ρᵀ)].
//!
//! Covariance under a unitary U acting on the input means [R, U ⊗ Ū] = 0.

use crate::error::{Error, Result};
use crate::linalg::{self, kron, CMat};
use crate::par;
use crate::qubit::{self, pauli2};
use crate::sampling;

pub const CP_TOL: f64 = 1e-10;
pub const TP_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct ChoiOperator {
    dim_in: usize,
    dim_out: usize,
    matrix: CMat,
}

/// Which SU(2) representation the signals use: independent unitaries per qubit, or the same
/// unitary on both.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CovarianceMode {
    Different,
    Identical,
}

impl ChoiOperator {
    pub fn new(dim_in: usize, dim_out: usize, matrix: CMat) -> Result<Self> {
        let n = dim_in * dim_out;
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: matrix.nrows() });
        }
        Ok(Self { dim_in, dim_out, matrix })
    }

    /// Choi operator of an arbitrary linear map given by its action on matrix units.
    pub fn from_map(dim_in: usize, dim_out: usize, f: impl Fn(&CMat) -> CMat) -> Self {
        let mut m = CMat::zeros(dim_in * dim_out, dim_in * dim_out);
        for i in 0..dim_in {
            for j in 0..dim_in {
                let mut e = CMat::zeros(dim_in, dim_in);
                e[(i, j)] = linalg::ONE;
                m += kron(&f(&e), &e);
            }
        }
        Self { dim_in, dim_out, matrix: m }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_map(dim, dim, |e| e.clone())
    }

    /// ρ ↦ 1/dim_out.
    pub fn depolarizing(dim_in: usize, dim_out: usize) -> Self {
        let m = linalg::identity(dim_in * dim_out).unscale(dim_out as f64);
        Self { dim_in, dim_out, matrix: m }
    }

    /// ρ ↦ σ Tr ρ.
    pub fn fixed_output(sigma: &CMat, dim_in: usize) -> Self {
        Self { dim_in, dim_out: sigma.nrows(), matrix: kron(sigma, &linalg::identity(dim_in)) }
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMat {
        self.matrix
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { matrix: self.matrix.scale(s), ..self.clone() }
    }

    pub fn apply(&self, rho: &CMat) -> Result<CMat> {
        if rho.nrows() != self.dim_in || rho.ncols() != self.dim_in {
            return Err(Error::DimensionMismatch { expected: self.dim_in, got: rho.nrows() });
        }
        let (di, dout) = (self.dim_in, self.dim_out);
        let mut out = CMat::zeros(dout, dout);
        // Tr_in[R (1 ⊗ ρᵀ)]_{ab} = Σ_{ij} R_{(a,i),(b,j)} ρ_{ij}
        for a in 0..dout {
            for b in 0..dout {
                let mut acc = linalg::ZERO;
                for i in 0..di {
                    for j in 0..di {
                        acc += self.matrix[(a * di + i, b * di + j)] * rho[(i, j)];
                    }
                }
                out[(a, b)] = acc;
            }
        }
        Ok(out)
    }

    /// Tr_out R, the operator that must equal 1 for trace preservation.
    pub fn input_effect(&self) -> CMat {
        linalg::partial_trace_dims(&self.matrix, &[self.dim_out, self.dim_in], &[false, true])
    }

    pub fn is_cp(&self) -> (bool, f64) {
        let m = linalg::min_eig_h(&self.matrix);
        let herm = linalg::hermitian_defect(&self.matrix) <= 1e-12;
        (herm && m >= -CP_TOL, m)
    }

    pub fn is_tp(&self) -> (bool, f64) {
        let r = linalg::max_abs(&(self.input_effect() - linalg::identity(self.dim_in)));
        (r <= TP_TOL, r)
    }

    /// (1 ⊗ σ_y^⊗2) R (1 ⊗ σ_y^⊗2) on a two-qubit input.
    pub fn conjugate_flip(&self) -> Result<Self> {
        if self.dim_in != 4 {
            return Err(Error::DimensionMismatch { expected: 4, got: self.dim_in });
        }
        let f = kron(&linalg::identity(self.dim_out), &pauli2(2, 2));
        Ok(Self { matrix: &f * &self.matrix * &f, ..self.clone() })
    }

    /// Choi operator of ρ ↦ U† D(U ρ U†) U for a unitary U on the input.
    pub fn conjugated(&self, u: &CMat) -> Self {
        let k = kron(u, &u.conjugate());
        Self { matrix: k.adjoint() * &self.matrix * &k, ..self.clone() }
    }

    /// Norm of the commutator with U ⊗ Ū.
    pub fn commutator_norm(&self, u: &CMat) -> f64 {
        let k = kron(u, &u.conjugate());
        linalg::op_norm(&(&self.matrix * &k - &k * &self.matrix))
    }
}

/// Reorders a 4-qubit operator between the interleaved (out₁,in₁,out₂,in₂) and blocked
/// (out₁,out₂,in₁,in₂) factor orders. The permutation is an involution.
pub fn swap_interleaved(m: &CMat) -> CMat {
    linalg::permute_qubits(m, &[0, 2, 1, 3])
}

/// Two-qubit signal unitary drawn from stream `stream` of `seed`.
pub fn group_element(mode: CovarianceMode, seed: u64, stream: u64) -> CMat {
    let mut r = sampling::rng_stream(seed, stream);
    let u1 = sampling::haar_su2_with(&mut r);
    match mode {
        CovarianceMode::Different => {
            let u2 = sampling::haar_su2_with(&mut r);
            kron(&u1, &u2)
        }
        CovarianceMode::Identical => kron(&u1, &u1),
    }
}

/// Max over `samples` Haar draws of ‖[R, W_g ⊗ V_g]‖.
pub fn covariance_residual(r: &ChoiOperator, samples: usize, mode: CovarianceMode, seed: u64) -> f64 {
    assert_eq!((r.dim_in, r.dim_out), (4, 4), "covariance is defined for two-qubit channels");
    par::max_indexed(samples.max(1), |i| r.commutator_norm(&group_element(mode, seed, i as u64)))
}

/// Monte-Carlo group average of U_g† D(U_g · U_g†) U_g.
pub fn twirl(r: &ChoiOperator, samples: usize, mode: CovarianceMode, seed: u64) -> ChoiOperator {
    assert_eq!((r.dim_in, r.dim_out), (4, 4), "twirl is defined for two-qubit channels");
    let n = samples.max(1);
    let terms = par::map_indexed(n, |i| r.conjugated(&group_element(mode, seed, i as u64)).matrix);
    let sum = terms.into_iter().fold(CMat::zeros(16, 16), |acc, t| acc + t);
    ChoiOperator { matrix: sum.unscale(n as f64), ..r.clone() }
}

/// Averaged local fidelity (1/2) Σ_i E_g F([ρ_g]_i, [D(ρ_g)]_i) with ρ_g = U_g ρ U_g†.
pub fn averaged_local_fidelity(
    r: &ChoiOperator,
    seed_state: &CMat,
    samples: usize,
    mode: CovarianceMode,
    seed: u64,
) -> Result<f64> {
    let n = samples.max(1);
    let vals = par::map_indexed(n, |i| -> Result<f64> {
        let u = group_element(mode, seed, i as u64);
        let rho_g = &u * seed_state * u.adjoint();
        let out = r.apply(&rho_g)?;
        let mut f = 0.0;
        for side in [qubit::Subsystem::A, qubit::Subsystem::B] {
            f += qubit::fidelity(&qubit::partial_trace(&rho_g, side)?, &qubit::partial_trace(&out, side)?)?;
        }
        Ok(f / 2.0)
    });
    let mut acc = 0.0;
    for v in vals {
        acc += v?;
    }
    Ok(acc / n as f64)
}

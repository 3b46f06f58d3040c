//! Small dense helpers shared by the qubit, Choi and Gaussian modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;
pub type RMat = DMatrix<f64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn kron_all(ms: &[&CMat]) -> CMat {
    let mut out = CMat::identity(1, 1);
    for m in ms {
        out = out.kronecker(*m);
    }
    out
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_real(m: &RMat) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.abs()))
}

/// Largest deviation of `m` from its conjugate transpose.
pub fn hermitian_defect(m: &CMat) -> f64 {
    max_abs(&(m - m.adjoint()))
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

pub fn trace(m: &CMat) -> C64 {
    m.trace()
}

/// Ascending eigenvalues of the Hermitian part of `m`.
pub fn eigvals_h(m: &CMat) -> Vec<f64> {
    let mut v: Vec<f64> = hermitian_part(m).symmetric_eigen().eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| a.total_cmp(b));
    v
}

pub fn min_eig_h(m: &CMat) -> f64 {
    eigvals_h(m)[0]
}

/// Apply `f` to the spectrum of a Hermitian matrix.
pub fn spectral_map(m: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let eig = hermitian_part(m).symmetric_eigen();
    let n = m.nrows();
    let mut d = CMat::zeros(n, n);
    for i in 0..n {
        d[(i, i)] = c(f(eig.eigenvalues[i]));
    }
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// Square root of a positive semidefinite matrix; negative rounding noise is clipped.
pub fn sqrt_psd(m: &CMat) -> CMat {
    spectral_map(m, |x| x.max(0.0).sqrt())
}

/// Spectral norm.
pub fn op_norm(m: &CMat) -> f64 {
    m.singular_values().iter().fold(0.0_f64, |a, &b| a.max(b))
}

/// Trace out subsystems of an operator on a tensor product with local dimensions `dims`.
/// `keep[k]` selects which factors survive, in their original order.
pub fn partial_trace_dims(m: &CMat, dims: &[usize], keep: &[bool]) -> CMat {
    let n: usize = dims.iter().product();
    assert_eq!(m.nrows(), n);
    assert_eq!(dims.len(), keep.len());
    let kept: usize = dims.iter().zip(keep).filter(|(_, &k)| k).map(|(d, _)| *d).product();
    let mut out = CMat::zeros(kept, kept);
    let digits = |mut idx: usize| {
        let mut d = vec![0usize; dims.len()];
        for k in (0..dims.len()).rev() {
            d[k] = idx % dims[k];
            idx /= dims[k];
        }
        d
    };
    let compose = |d: &[usize]| {
        let mut idx = 0;
        for k in 0..dims.len() {
            if keep[k] {
                idx = idx * dims[k] + d[k];
            }
        }
        idx
    };
    for r in 0..n {
        let dr = digits(r);
        for col in 0..n {
            let dc = digits(col);
            let traced_match = (0..dims.len()).all(|k| keep[k] || dr[k] == dc[k]);
            if traced_match {
                out[(compose(&dr), compose(&dc))] += m[(r, col)];
            }
        }
    }
    out
}

/// Reorder qubit factors of a 2^n × 2^n operator: factor `k` of the result is factor `perm[k]` of `m`.
pub fn permute_qubits(m: &CMat, perm: &[usize]) -> CMat {
    let n = perm.len();
    let dim = 1usize << n;
    assert_eq!(m.nrows(), dim);
    let map = |idx: usize| {
        let mut out = 0usize;
        for (k, &src) in perm.iter().enumerate() {
            let bit = (idx >> (n - 1 - src)) & 1;
            out |= bit << (n - 1 - k);
        }
        out
    };
    let idx: Vec<usize> = (0..dim).map(map).collect();
    let mut out = CMat::zeros(dim, dim);
    for r in 0..dim {
        for col in 0..dim {
            out[(idx[r], idx[col])] = m[(r, col)];
        }
    }
    out
}

pub fn to_complex(m: &RMat) -> CMat {
    m.map(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_trace_of_product() {
        let a = CMat::from_row_slice(2, 2, &[c(0.7), c(0.1), c(0.1), c(0.3)]);
        let b = CMat::from_row_slice(2, 2, &[c(0.4), I * 0.2, -I * 0.2, c(0.6)]);
        let ab = kron(&a, &b);
        assert!(max_abs(&(partial_trace_dims(&ab, &[2, 2], &[true, false]) - &a)) < 1e-15);
        assert!(max_abs(&(partial_trace_dims(&ab, &[2, 2], &[false, true]) - &b)) < 1e-15);
    }

    #[test]
    fn permute_swaps_factors() {
        let a = CMat::from_row_slice(2, 2, &[c(1.0), c(2.0), c(3.0), c(4.0)]);
        let b = CMat::from_row_slice(2, 2, &[c(5.0), I, c(7.0), c(8.0)]);
        let ab = kron(&a, &b);
        let ba = permute_qubits(&ab, &[1, 0]);
        assert!(max_abs(&(ba - kron(&b, &a))) < 1e-15);
    }

    #[test]
    fn sqrt_squares_back() {
        let m = CMat::from_row_slice(2, 2, &[c(2.0), I, -I, c(1.0)]);
        let s = sqrt_psd(&m);
        assert!(max_abs(&(&s * &s - m)) < 1e-12);
    }
}

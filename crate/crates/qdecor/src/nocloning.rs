//! Fourier-degree witness that clones of a phase orbit cannot be both informative and
//! uncorrelated.
//!
//! Any linear map sends |φ⟩⟨φ|^⊗N to a trigonometric polynomial in φ of degree ≤ N, while a
//! product of M marginals that each depend on φ reaches degree M. With M > N the output cannot
//! equal the product of its marginals.

use rustfft::{num_complex::Complex64, FftPlanner};

use crate::choi::ChoiOperator;
use crate::error::{Error, Result};
use crate::linalg::{self, c, kron, CMat, CVec};
use crate::par;

pub const DEGREE_TOL: f64 = 1e-9;
pub const INFORMATIVE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseOrbitSpec {
    p: f64,
    n: usize,
    m: usize,
    phi_samples: usize,
}

impl PhaseOrbitSpec {
    /// Uses the default grid: 4(M+1) rounded up to a power of two, at least 8.
    pub fn new(p: f64, n: usize, m: usize) -> Result<Self> {
        Self::with_samples(p, n, m, default_grid(m))
    }

    pub fn with_samples(p: f64, n: usize, m: usize, phi_samples: usize) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidArgument(format!("p = {p} must lie in (0, 1)")));
        }
        if n < 1 || m <= n {
            return Err(Error::InvalidArgument(format!("need M > N >= 1, got N={n}, M={m}")));
        }
        if phi_samples < 8 || !phi_samples.is_power_of_two() || phi_samples < 4 * (m + 1) {
            return Err(Error::GridTooCoarse { samples: phi_samples, degree: m });
        }
        Ok(Self { p, n, m, phi_samples })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn phi_samples(&self) -> usize {
        self.phi_samples
    }

    pub fn phis(&self) -> Vec<f64> {
        let n = self.phi_samples as f64;
        (0..self.phi_samples).map(|k| std::f64::consts::TAU * k as f64 / n).collect()
    }
}

pub fn default_grid(m: usize) -> usize {
    (4 * (m + 1)).next_power_of_two().max(8)
}

/// √p|0⟩ + √(1−p) e^{iφ}|1⟩.
pub fn phase_state(p: f64, phi: f64) -> CVec {
    CVec::from_vec(vec![c(p.sqrt()), Complex64::from_polar((1.0 - p).sqrt(), phi)])
}

fn harmonics(samples: &[CMat]) -> Vec<Vec<Complex64>> {
    let n = samples.len();
    let (rows, cols) = samples[0].shape();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(n);
    let mut out = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for col in 0..cols {
            let mut buf: Vec<Complex64> = samples.iter().map(|s| s[(r, col)]).collect();
            fft.process(&mut buf);
            buf.iter_mut().for_each(|z| *z /= n as f64);
            out.push(buf);
        }
    }
    out
}

fn frequency(k: usize, n: usize) -> usize {
    if k <= n / 2 {
        k
    } else {
        n - k
    }
}

/// Largest |n| whose Fourier coefficient, in any matrix entry, exceeds `tol` times the largest
/// coefficient. Samples must sit on the uniform grid φ_k = 2πk/len.
pub fn fourier_degree(samples: &[CMat], tol: f64, max_degree: usize) -> Result<usize> {
    let n = samples.len();
    if n < 2 * max_degree + 2 {
        return Err(Error::GridTooCoarse { samples: n, degree: max_degree });
    }
    let h = harmonics(samples);
    let scale = h.iter().flatten().fold(0.0_f64, |a, z| a.max(z.norm()));
    if scale == 0.0 {
        return Ok(0);
    }
    let mut degree = 0;
    for entry in &h {
        for (k, z) in entry.iter().enumerate() {
            if z.norm() > tol * scale {
                degree = degree.max(frequency(k, n));
            }
        }
    }
    Ok(degree)
}

/// Largest magnitude of the e^{±iφ} coefficients over all entries.
pub fn first_harmonic(samples: &[CMat]) -> f64 {
    let n = samples.len();
    harmonics(samples)
        .iter()
        .map(|e| e[1].norm().max(e[n - 1].norm()))
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContradictionReport {
    pub n: usize,
    pub m: usize,
    pub p: f64,
    pub phi_samples: usize,
    pub degree_out: usize,
    pub marginal_degrees: Vec<usize>,
    pub marginal_informative: Vec<bool>,
    pub degree_product: usize,
    pub decorrelation_gap: f64,
}

impl ContradictionReport {
    pub fn all_informative(&self) -> bool {
        self.marginal_informative.iter().all(|&b| b)
    }
}

fn tensor_power(v: &CVec, k: usize) -> CVec {
    let mut out = CVec::from_element(1, linalg::ONE);
    for _ in 0..k {
        out = out.kronecker(v);
    }
    out
}

/// Runs the channel over the phase grid. Outputs are renormalized per φ, so trace-decreasing
/// maps are handled as post-selected channels.
pub fn contradiction_report(spec: &PhaseOrbitSpec, channel: &ChoiOperator) -> Result<ContradictionReport> {
    let (n, m) = (spec.n, spec.m);
    if channel.dim_in() != 1 << n {
        return Err(Error::DimensionMismatch { expected: 1 << n, got: channel.dim_in() });
    }
    if channel.dim_out() != 1 << m {
        return Err(Error::DimensionMismatch { expected: 1 << m, got: channel.dim_out() });
    }
    let phis = spec.phis();
    let evals = par::map_indexed(phis.len(), |i| -> Result<(CMat, Vec<CMat>, CMat)> {
        let psi = tensor_power(&phase_state(spec.p, phis[i]), n);
        let mut out = channel.apply(&(&psi * psi.adjoint()))?;
        let tr = out.trace();
        if tr.norm() <= 1e-300 {
            return Err(Error::InvalidArgument(format!("channel annihilates the orbit at phi={}", phis[i])));
        }
        out /= tr;
        let dims = vec![2usize; m];
        let marg: Vec<CMat> = (0..m)
            .map(|k| {
                let keep: Vec<bool> = (0..m).map(|j| j == k).collect();
                linalg::partial_trace_dims(&out, &dims, &keep)
            })
            .collect();
        let prod = marg.iter().skip(1).fold(marg[0].clone(), |acc, x| kron(&acc, x));
        Ok((out, marg, prod))
    });
    let mut outs = Vec::with_capacity(phis.len());
    let mut margs: Vec<Vec<CMat>> = vec![Vec::with_capacity(phis.len()); m];
    let mut prods = Vec::with_capacity(phis.len());
    for e in evals {
        let (o, mg, pr) = e?;
        outs.push(o);
        for (k, x) in mg.into_iter().enumerate() {
            margs[k].push(x);
        }
        prods.push(pr);
    }
    let max_degree = (spec.phi_samples - 2) / 2;
    let degree_out = fourier_degree(&outs, DEGREE_TOL, max_degree)?;
    let degree_product = fourier_degree(&prods, DEGREE_TOL, max_degree)?;
    let mut marginal_degrees = Vec::with_capacity(m);
    let mut marginal_informative = Vec::with_capacity(m);
    for mg in &margs {
        marginal_degrees.push(fourier_degree(mg, DEGREE_TOL, max_degree)?);
        marginal_informative.push(first_harmonic(mg) > INFORMATIVE_TOL);
    }
    let decorrelation_gap =
        outs.iter().zip(&prods).map(|(o, pr)| linalg::max_abs(&(o - pr))).fold(0.0, f64::max);
    Ok(ContradictionReport {
        n,
        m,
        p: spec.p,
        phi_samples: spec.phi_samples,
        degree_out,
        marginal_degrees,
        marginal_informative,
        degree_product,
        decorrelation_gap,
    })
}

/// The optimal universal 1→2 qubit cloner, ρ ↦ ⅔ S(ρ ⊗ 1)S with S the symmetric projector.
pub fn universal_cloner() -> ChoiOperator {
    let mut swap = CMat::zeros(4, 4);
    for a in 0..2 {
        for b in 0..2 {
            swap[(2 * a + b, 2 * b + a)] = linalg::ONE;
        }
    }
    let s = (linalg::identity(4) + swap).scale(0.5);
    ChoiOperator::from_map(2, 4, |e| (&s * kron(e, &linalg::identity(2)) * &s).scale(2.0 / 3.0))
}

/// ρ ↦ σ^⊗M Tr ρ on N input qubits.
pub fn fixed_output_cloner(sigma: &CMat, n: usize, m: usize) -> ChoiOperator {
    let out = (1..m).fold(sigma.clone(), |acc, _| kron(&acc, sigma));
    ChoiOperator::fixed_output(&out, 1 << n)
}

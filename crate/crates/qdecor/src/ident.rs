//! Decorrelators covariant under the same SU(2) signal on both qubits.
//!
//! The flipped Choi operator is Σ_k q_k P_k over the six projectors
//! (P⁰₀₀, P¹₁₀, P¹₀₁, P⁰₁₁, P¹₁₁, P²₁₁), labelled P^J_{j,l} with j the output spin, l the input
//! spin and J the total. They act in (out₁, out₂, in₁, in₂) order.
//! Trace preservation: q₀ + 3q₁ = 1 and q₂ + q₃/3 + q₄ + 5q₅/3 = 1.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use crate::choi::ChoiOperator;
use crate::diff::bisect_sup;
use crate::error::{Error, Result};
use crate::linalg::{self, kron, CMat, CVec};
use crate::qubit::{self, pauli, projector_singlet, projector_triplet, spin_flip, vec, TwoQubitPauliState};

pub const Q_TOL: f64 = 1e-12;

/// Multiplicity of each component map: D = Σ_k q_k · WEIGHTS[k] · D_k.
pub const WEIGHTS: [f64; 6] = [1.0, 3.0, 1.0, 1.0 / 3.0, 1.0, 5.0 / 3.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentSignalChannel {
    q: [f64; 6],
}

impl IdentSignalChannel {
    /// Entries above −1e-12 are clamped to zero; both trace constraints are checked.
    pub fn new(q: [f64; 6]) -> Result<Self> {
        let mut q = q;
        for (index, v) in q.iter_mut().enumerate() {
            if !v.is_finite() || *v < -Q_TOL {
                return Err(Error::NegativeCoefficient { index, value: *v });
            }
            *v = v.max(0.0);
        }
        let r = constraint_residuals(&q);
        let scale = 1.0 + q.iter().sum::<f64>();
        let worst = r[0].abs().max(r[1].abs());
        if worst > Q_TOL * scale {
            return Err(Error::TraceConstraint(worst));
        }
        Ok(Self { q })
    }

    pub fn q(&self) -> [f64; 6] {
        self.q
    }

    /// The coefficient of ρ itself in the output, q₃/3 − q₄/2 + q₅/6.
    pub fn memory(&self) -> f64 {
        self.q[3] / 3.0 - self.q[4] / 2.0 + self.q[5] / 6.0
    }
}

fn constraint_residuals(q: &[f64; 6]) -> [f64; 2] {
    [q[0] + 3.0 * q[1] - 1.0, q[2] + q[3] / 3.0 + q[4] + 5.0 * q[5] / 3.0 - 1.0]
}

fn dket_pair(a: &CMat, b: &CMat) -> CVec {
    vec(a).kronecker(&vec(b))
}

/// P⁰₀₀, P¹₁₀, P¹₀₁, P⁰₁₁, P¹₁₁, P²₁₁ built from double kets.
pub fn projectors_jl() -> [CMat; 6] {
    let vy = vec(&pauli(2));
    let yy = &vy * vy.adjoint();
    let one = linalg::identity(4);
    let half_comp = &one - yy.scale(0.5);
    let p000 = kron(&yy, &yy).scale(0.25);
    let p110 = kron(&half_comp, &yy).scale(0.5);
    let p101 = kron(&yy, &half_comp).scale(0.5);

    // σ₀, σ_x, σ_z with signs s(0) = 1, s(x) = s(z) = −1
    let basis = [(pauli(0), 1.0), (pauli(1), -1.0), (pauli(3), -1.0)];
    let mut phi = CVec::zeros(16);
    for (s, sign) in &basis {
        phi += dket_pair(s, s).scale(*sign);
    }
    let p011 = (&phi * phi.adjoint()).unscale(12.0);
    let mut anti = CMat::zeros(16, 16);
    let mut symm = CMat::zeros(16, 16);
    for (a, _) in &basis {
        for (b, _) in &basis {
            let ab = dket_pair(a, b);
            let ba = dket_pair(b, a);
            let d = &ab - &ba;
            let s = &ab + &ba;
            anti += &d * d.adjoint();
            symm += &s * s.adjoint();
        }
    }
    let p111 = anti.unscale(16.0);
    let p211 = symm.unscale(16.0) - &p011;
    [p000, p110, p101, p011, p111, p211]
}

pub fn build_choi_ident(c: &IdentSignalChannel) -> ChoiOperator {
    let ps = projectors_jl();
    let mut m = CMat::zeros(16, 16);
    for (qk, p) in c.q.iter().zip(ps.iter()) {
        m += p.scale(*qk);
    }
    ChoiOperator::new(4, 4, m).expect("16x16").conjugate_flip().expect("two-qubit input")
}

/// Normalized component maps D⁰₀₀ … D²₁₁ on a two-qubit input.
pub fn component_maps(rho: &CMat) -> Result<[CMat; 6]> {
    if rho.nrows() != 4 || rho.ncols() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: rho.nrows() });
    }
    let p0 = projector_singlet();
    let p1 = projector_triplet();
    let t0 = (&p0 * rho).trace();
    let t1 = (&p1 * rho).trace();
    let bar = spin_flip(rho);
    let p1rp1 = &p1 * rho * &p1;
    let p1bp1 = &p1 * &bar * &p1;
    Ok([
        &p0 * t0,
        p1.unscale(3.0) * t0,
        &p0 * t1,
        p1rp1.clone(),
        (&p1 * t1 - &p1bp1).scale(0.5),
        (&p1 * t1 + &p1bp1).scale(0.3) - p1rp1.scale(0.2),
    ])
}

/// Closed-form output of the channel on a permutation-invariant state.
pub fn output_state_ident(c: &IdentSignalChannel, s: &TwoQubitPauliState) -> CMat {
    let [q0, q1, q2, _, q4, q5] = c.q;
    let big = s.big_lambda();
    let rho = s.to_density().into_matrix();
    let zsum = qubit::pauli2(3, 0) + qubit::pauli2(0, 3);
    let p0 = projector_singlet();
    let p1 = projector_triplet();
    let m = c.memory();
    rho.scale(m)
        + zsum.scale((q4 - q5) * s.eta() / 4.0)
        + p0.scale(0.25 * (q0 - m) * (1.0 + big))
        + p1.scale(0.25 * ((q4 + q5) / 2.0) * (3.0 - big))
        + p0.scale(q2 / 4.0 * (3.0 - big))
        + p1.scale(q1 / 4.0 * (1.0 + big))
}

/// True iff λ_ij = 0 off the diagonal and λ_xx = λ_yy.
pub fn decorrelable_family_check(s: &TwoQubitPauliState) -> bool {
    let l = s.lam();
    let off = [l[0][1], l[0][2], l[1][2]].iter().all(|v| v.abs() <= 1e-10);
    off && (l[0][0] - l[1][1]).abs() <= 1e-10
}

fn check_sym_state(eta: f64, lambda: f64) -> Result<()> {
    let ok = eta.is_finite()
        && lambda.is_finite()
        && eta.abs() <= 1.0 + 1e-12
        && lambda >= -1.0 - 1e-10
        && lambda <= 1.0 - 2.0 * eta.abs() + 1e-10;
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidState(format!("(eta={eta}, lambda={lambda}) is not a valid symmetric state")))
    }
}

/// Unclamped (q₂, q₃, q₄, q₅) for a symmetric seed.
pub fn q_symmetric_raw(eta: f64, lambda: f64, eta_tilde: f64) -> Result<[f64; 4]> {
    if eta == 0.0 {
        return Err(Error::SingularParameter("eta = 0"));
    }
    let alpha = 1.0 + 3.0 * lambda;
    if alpha == 0.0 {
        return Err(Error::SingularParameter("lambda = -1/3"));
    }
    let a = eta_tilde;
    Ok([
        (1.0 - a * a) / 4.0,
        (3.0 + a * (a - 40.0 * a / alpha + 12.0 / eta)) / 12.0,
        (3.0 + a * (a + 20.0 * a / alpha + 6.0 / eta)) / 12.0,
        (3.0 + a * (a - 4.0 * a / alpha - 6.0 / eta)) / 12.0,
    ])
}

/// Pass η̃ with the sign of η. q₀ = 1, q₁ = 0 since the singlet sectors see no input weight.
pub fn solve_q_symmetric(eta: f64, lambda: f64, eta_tilde: f64) -> Result<IdentSignalChannel> {
    let [q2, q3, q4, q5] = q_symmetric_raw(eta, lambda, eta_tilde)?;
    let min_q = [q2, q3, q4, q5].iter().copied().fold(f64::INFINITY, f64::min);
    if min_q < -Q_TOL {
        return Err(Error::Infeasible { min_q });
    }
    IdentSignalChannel::new([1.0, 0.0, q2, q3, q4, q5])
}

/// λ₁ and λ₂, the inner branch boundaries of the symmetric optimum.
pub fn symmetric_boundaries(eta: f64) -> (f64, f64) {
    let e2 = eta * eta;
    ((2.0 * (4.0 - 3.0 * e2).sqrt() - 5.0) / 3.0, (7.0 - 2.0 * (16.0 - 3.0 * e2).sqrt()) / 3.0)
}

fn sym_outer(eta: f64, lambda: f64, lead: f64, sign: f64) -> f64 {
    let alpha = 1.0 + 3.0 * lambda;
    let disc = alpha * alpha + eta * eta * (1.0 + (2.0 - 3.0 * lambda) * lambda);
    (lead + sign * disc.max(0.0).sqrt()) / (eta.abs() * (1.0 - lambda))
}

/// Outermost branch for λ ≥ λ₂, numerator −(1+3λ). Formula only: no state-region check.
pub fn rmaxsym4(eta: f64, lambda: f64) -> f64 {
    sym_outer(eta, lambda, -(1.0 + 3.0 * lambda), 1.0)
}

/// Outermost branch for λ ≥ λ₂ with the numerator read literally as −4λ. Kept only to document
/// that this reading disagrees with the feasibility oracle.
pub fn rmaxsym4_literal(eta: f64, lambda: f64) -> f64 {
    sym_outer(eta, lambda, -4.0 * lambda, 1.0)
}

/// Largest output Bloch length for a seed on the symmetric subspace.
pub fn optimal_eta_symmetric(eta: f64, lambda: f64) -> Result<f64> {
    check_sym_state(eta, lambda)?;
    let e = eta.abs();
    let alpha = 1.0 + 3.0 * lambda;
    if e == 0.0 || alpha == 0.0 {
        return Ok(0.0);
    }
    let (l1, l2) = symmetric_boundaries(eta);
    let root = |x: f64| x.max(0.0).sqrt();
    let v = if lambda <= l1 {
        sym_outer(eta, lambda, -alpha, -1.0)
    } else if lambda <= -1.0 / 3.0 {
        (-alpha + root(alpha * (alpha - e * e * (7.0 + lambda)))) / (e * (7.0 + lambda))
    } else if lambda <= l2 {
        (2.0 * alpha + root(alpha * (e * e * (13.0 - lambda) + 4.0 * alpha))) / (e * (13.0 - lambda))
    } else {
        rmaxsym4(eta, lambda)
    };
    Ok(v)
}

/// Bisection on the feasibility of `solve_q_symmetric`.
pub fn oracle_optimal_symmetric(eta: f64, lambda: f64) -> Result<f64> {
    check_sym_state(eta, lambda)?;
    if eta == 0.0 || 1.0 + 3.0 * lambda == 0.0 {
        return Ok(0.0);
    }
    let sign = eta.signum();
    Ok(bisect_sup(|x| solve_q_symmetric(eta, lambda, sign * x).is_ok()))
}

/// p|Ψ⁻⟩⟨Ψ⁻| + (1−p) ρ^sym(η, λ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralSeed {
    p: f64,
    eta: f64,
    lambda: f64,
}

impl GeneralSeed {
    pub fn new(p: f64, eta: f64, lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidState(format!("singlet fraction {p} outside [0, 1]")));
        }
        check_sym_state(eta, lambda)?;
        let s = Self { p, eta, lambda };
        let min_eig = linalg::min_eig_h(&s.to_density());
        if min_eig < -qubit::PSD_TOL {
            return Err(Error::NotPositive { min_eig });
        }
        Ok(s)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Bloch length of either marginal, (1−p)η.
    pub fn local_eta(&self) -> f64 {
        (1.0 - self.p) * self.eta
    }

    pub fn to_density(&self) -> CMat {
        let sym = TwoQubitPauliState::symmetric(self.eta, self.lambda)
            .expect("checked at construction")
            .to_density()
            .into_matrix();
        projector_singlet().scale(self.p) + sym.scale(1.0 - self.p)
    }

    pub fn pauli_state(&self) -> TwoQubitPauliState {
        TwoQubitPauliState::from_density(&self.to_density()).expect("permutation invariant")
    }
}

/// Largest output Bloch length for a seed with a singlet fraction.
pub fn optimal_eta_general(seed: &GeneralSeed) -> Result<f64> {
    let (p, eta, lambda) = (seed.p, seed.eta, seed.lambda);
    let alpha = 1.0 + 3.0 * lambda;
    if p == 1.0 || alpha == 0.0 || eta == 0.0 {
        return Ok(0.0);
    }
    let sym = optimal_eta_symmetric(eta, lambda)?;
    if 1.0 - sym * sym - 4.0 * p >= 0.0 {
        return Ok(sym);
    }
    let e = eta.abs();
    let w = eta * eta * (1.0 - p);
    let l1 = -(1.0 + 2.0 * w) / 3.0;
    let l2 = -(1.0 - w) / 3.0;
    let root = |x: f64| x.max(0.0).sqrt();
    let v = if lambda <= l1 || lambda >= l2 {
        (-3.0 * alpha + alpha.signum() * root(alpha * (9.0 * alpha + 16.0 * w))) / (4.0 * e)
    } else if lambda <= -1.0 / 3.0 {
        (-3.0 * alpha + root(alpha * (9.0 * alpha - 80.0 * w))) / (20.0 * e)
    } else {
        (3.0 * alpha + root(alpha * (9.0 * alpha + 40.0 * w))) / (20.0 * e)
    };
    Ok(v)
}

/// Unclamped coefficients for a singlet-fraction seed at a given free q₀.
pub fn q_general_raw(seed: &GeneralSeed, eta_tilde: f64, q0: f64) -> Result<[f64; 6]> {
    let (p, eta, lambda) = (seed.p, seed.eta, seed.lambda);
    if p == 1.0 {
        return Err(Error::SingularParameter("p = 1"));
    }
    if eta == 0.0 {
        return Err(Error::SingularParameter("eta = 0"));
    }
    let alpha = 1.0 + 3.0 * lambda;
    if alpha == 0.0 {
        return Err(Error::SingularParameter("lambda = -1/3"));
    }
    let a = eta_tilde;
    let d = 12.0 * eta * alpha * (1.0 - p);
    let tail = eta * alpha * (3.0 - 4.0 * p * (1.0 - q0));
    Ok([
        q0,
        (1.0 - q0) / 3.0,
        (1.0 - a * a - 4.0 * p * q0) / (4.0 * (1.0 - p)),
        (a * a * eta * (3.0 * lambda - 39.0) + 12.0 * a * alpha + tail) / d,
        (a * a * eta * (3.0 * lambda + 21.0) + 6.0 * a * alpha + tail) / d,
        (a * a * eta * (3.0 * lambda - 3.0) - 6.0 * a * alpha + tail) / d,
    ])
}

/// Coefficients reaching [½(1+η̃σ_z)]^⊗2 from a singlet-fraction seed. Pass η̃ with the sign of η.
/// q₁…q₅ are affine in q₀; the midpoint of the feasible q₀ interval is returned.
pub fn solve_q_general(seed: &GeneralSeed, eta_tilde: f64) -> Result<IdentSignalChannel> {
    let p = seed.p;
    let q0 = if p == 0.0 {
        1.0
    } else {
        let at0 = q_general_raw(seed, eta_tilde, 0.0)?;
        // q₃, q₄, q₅ grow by p q₀ / (3(1−p)); q₂ falls by p q₀ / (1−p)
        let slope = p / (3.0 * (1.0 - p));
        let mut lo = 0.0_f64;
        for v in &at0[3..] {
            lo = lo.max(-v / slope);
        }
        let hi = 1.0_f64.min((1.0 - eta_tilde * eta_tilde) / (4.0 * p));
        (0.5 * (lo + hi)).clamp(0.0, 1.0)
    };
    let q = q_general_raw(seed, eta_tilde, q0)?;
    let min_q = q.iter().copied().fold(f64::INFINITY, f64::min);
    if min_q < -Q_TOL {
        return Err(Error::Infeasible { min_q });
    }
    IdentSignalChannel::new(q)
}

/// Feasibility of a product output at Bloch length `eta_tilde`, decided by a direct linear solve
/// over all six coefficients followed by a nonnegativity search on the affine solution set.
pub fn feasible_by_linear_solve(seed_state: &CMat, eta_tilde: f64) -> Result<bool> {
    let maps = component_maps(seed_state)?;
    let target = kron(&qubit::z_qubit(eta_tilde), &qubit::z_qubit(eta_tilde));
    let rows = 2 * 16 + 2;
    let mut a = DMatrix::<f64>::zeros(rows, 6);
    let mut b = DVector::<f64>::zeros(rows);
    for k in 0..6 {
        let o = maps[k].scale(WEIGHTS[k]);
        for e in 0..16 {
            a[(2 * e, k)] = o[(e / 4, e % 4)].re;
            a[(2 * e + 1, k)] = o[(e / 4, e % 4)].im;
        }
    }
    for e in 0..16 {
        b[2 * e] = target[(e / 4, e % 4)].re;
        b[2 * e + 1] = target[(e / 4, e % 4)].im;
    }
    let tr = [[1.0, 3.0, 0.0, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0, 1.0 / 3.0, 1.0, 5.0 / 3.0]];
    for (r, row) in tr.iter().enumerate() {
        for k in 0..6 {
            a[(32 + r, k)] = row[k];
        }
        b[32 + r] = 1.0;
    }
    Ok(nonnegative_solution_exists(&a, &b, 1e-9, Q_TOL))
}

/// Whether A x = b has a solution with x ≥ −`neg_tol`, via vertex enumeration on the affine set.
pub(crate) fn nonnegative_solution_exists(a: &DMatrix<f64>, b: &DVector<f64>, eq_tol: f64, neg_tol: f64) -> bool {
    let n = a.ncols();
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let cut = smax * 1e-10;
    let x = match svd.solve(b, cut) {
        Ok(x) => x,
        Err(_) => return false,
    };
    if (a * &x - b).amax() > eq_tol {
        return false;
    }
    let v_t = svd.v_t.as_ref().expect("requested");
    let null: Vec<DVector<f64>> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= cut)
        .map(|i| v_t.row(i).transpose())
        .collect();
    let d = null.len();
    let ok = |y: &DVector<f64>| y.iter().all(|&v| v >= -neg_tol);
    if d == 0 {
        return ok(&x);
    }
    let nmat = DMatrix::from_columns(&null);
    // every vertex of {x + N z ≥ 0} makes d of the constraints active
    let mut idx: Vec<usize> = (0..d).collect();
    loop {
        let mut m = DMatrix::<f64>::zeros(d, d);
        let mut rhs = DVector::<f64>::zeros(d);
        for (r, &k) in idx.iter().enumerate() {
            for cidx in 0..d {
                m[(r, cidx)] = nmat[(k, cidx)];
            }
            rhs[r] = -x[k];
        }
        if let Some(z) = m.lu().solve(&rhs) {
            let y = &x + &nmat * z;
            if ok(&y) {
                return true;
            }
        }
        // next combination
        let mut i = d;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if idx[i] < n - d + i {
                idx[i] += 1;
                for j in i + 1..d {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Bisection on `feasible_by_linear_solve` for a singlet-fraction seed.
pub fn oracle_optimal_general(seed: &GeneralSeed) -> Result<f64> {
    let rho = seed.to_density();
    let sign = if seed.eta < 0.0 { -1.0 } else { 1.0 };
    let feasible = |x: f64| feasible_by_linear_solve(&rho, sign * x).unwrap_or(false);
    if !feasible(0.0) {
        return Err(Error::Infeasible { min_q: f64::NAN });
    }
    Ok(bisect_sup(feasible))
}

/// Key into the general-N coefficient table: doubled (j, l, J) so half-integers stay exact.
pub type SpinKey = (u32, u32, u32);

fn binom(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Residuals Σ_j Σ_J ((2J+1)/(2l+1)) κ_j s^J_{j,l} − 1, one per l from s_N to N/2.
/// Missing table entries count as zero.
pub fn trace_constraint_ident_general(n: u32, s: &BTreeMap<SpinKey, f64>) -> Vec<f64> {
    let start = n % 2;
    let kappa = |j2: u32| (j2 + 1) as f64 / ((n + j2) as f64 / 2.0 + 1.0) * binom(n, (n + j2) / 2);
    (start..=n)
        .step_by(2)
        .map(|l2| {
            let mut sum = 0.0;
            for j2 in (start..=n).step_by(2) {
                let lo = j2.abs_diff(l2);
                for big2 in (lo..=j2 + l2).step_by(2) {
                    if let Some(v) = s.get(&(j2, l2, big2)) {
                        sum += (big2 + 1) as f64 / (l2 + 1) as f64 * kappa(j2) * v;
                    }
                }
            }
            sum - 1.0
        })
        .collect()
}

/// Output of the symmetric-seed solution on its seed.
pub fn decorrelate_symmetric(eta: f64, lambda: f64, eta_tilde: f64) -> Result<(IdentSignalChannel, CMat)> {
    let seed = TwoQubitPauliState::symmetric(eta, lambda)?;
    let c = solve_q_symmetric(eta, lambda, eta_tilde)?;
    let out = build_choi_ident(&c).apply(seed.to_density().matrix())?;
    Ok((c, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;
    use approx::assert_abs_diff_eq;

    #[test]
    fn projector_algebra() {
        let ps = projectors_jl();
        let ranks: Vec<f64> = ps.iter().map(|p| p.trace().re).collect();
        for (r, want) in ranks.iter().zip([1.0, 3.0, 3.0, 1.0, 3.0, 5.0]) {
            assert_abs_diff_eq!(*r, want, epsilon = 1e-12);
        }
        let mut sum = CMat::zeros(16, 16);
        for (i, p) in ps.iter().enumerate() {
            sum += p;
            for (j, q) in ps.iter().enumerate() {
                let prod = p * q;
                if i == j {
                    assert!(max_abs(&(prod - p)) < 1e-12);
                } else {
                    assert!(max_abs(&prod) < 1e-12);
                }
            }
        }
        assert!(max_abs(&(sum - linalg::identity(16))) < 1e-12);
    }

    #[test]
    fn singlet_components() {
        let s = qubit::proj(&qubit::psi_minus());
        let d = component_maps(&s).unwrap();
        assert!(max_abs(&(&d[0] - projector_singlet())) < 1e-14);
        assert!(max_abs(&(&d[1] - projector_triplet().unscale(3.0))) < 1e-14);
    }

    #[test]
    fn example_vectors() {
        let c = IdentSignalChannel::new([1.0, 0.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
        let r = build_choi_ident(&c);
        assert!(r.is_cp().0 && r.is_tp().0);
        // the uniform vector already meets both constraints at 1/4
        let uniform = IdentSignalChannel::new([0.25; 6]).unwrap();
        assert!(build_choi_ident(&uniform).is_tp().0);
        assert!(matches!(IdentSignalChannel::new([0.3; 6]), Err(Error::TraceConstraint(_))));
        assert!(IdentSignalChannel::new([2.0, 0.0, 1.0, 0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn zero_target() {
        let c = solve_q_symmetric(0.5, 0.2, 0.0).unwrap();
        assert_eq!(c.q(), [1.0, 0.0, 0.25, 0.25, 0.25, 0.25]);
    }

    #[test]
    fn clone_seed_is_undecorrelable() {
        assert_eq!(optimal_eta_symmetric(2.0 / 3.0, -1.0 / 3.0).unwrap(), 0.0);
        assert!(matches!(solve_q_symmetric(2.0 / 3.0, -1.0 / 3.0, 0.1), Err(Error::SingularParameter(_))));
    }

    #[test]
    fn family_check() {
        assert!(decorrelable_family_check(&TwoQubitPauliState::symmetric(0.3, 0.1).unwrap()));
        let mut l = [[0.0; 3]; 3];
        l[0][1] = 0.1;
        assert!(!decorrelable_family_check(&TwoQubitPauliState::new(0.0, l).unwrap()));
        let l = [[0.2, 0.0, 0.0], [0.0, 0.1, 0.0], [0.0, 0.0, 0.0]];
        assert!(!decorrelable_family_check(&TwoQubitPauliState::new(0.0, l).unwrap()));
    }

    #[test]
    fn general_reduces_to_symmetric() {
        for (e, l) in [(0.5, -0.8), (0.3, 0.2), (0.7, -0.5)] {
            let g = GeneralSeed::new(0.0, e, l).unwrap();
            assert_eq!(optimal_eta_general(&g).unwrap(), optimal_eta_symmetric(e, l).unwrap());
        }
        assert_eq!(optimal_eta_general(&GeneralSeed::new(1.0, 0.5, -0.5).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn general_solution_reaches_target() {
        let g = GeneralSeed::new(0.3, 0.8, -0.8).unwrap();
        let opt = optimal_eta_general(&g).unwrap();
        let c = solve_q_general(&g, opt).unwrap();
        let out = build_choi_ident(&c).apply(&g.to_density()).unwrap();
        let want = kron(&qubit::z_qubit(opt), &qubit::z_qubit(opt));
        assert!(max_abs(&(out - want)) < 1e-10);
    }

    #[test]
    fn n2_ident_constraint_matches_pair() {
        let q = [0.4, 0.2, 0.3, 0.6, 0.2, 0.18];
        let mut s = BTreeMap::new();
        s.insert((0, 0, 0), q[0]);
        s.insert((2, 0, 2), q[1]);
        s.insert((0, 2, 2), q[2]);
        s.insert((2, 2, 0), q[3]);
        s.insert((2, 2, 2), q[4]);
        s.insert((2, 2, 4), q[5]);
        let r = trace_constraint_ident_general(2, &s);
        let want = constraint_residuals(&q);
        assert_abs_diff_eq!(r[0], want[0], epsilon = 1e-14);
        assert_abs_diff_eq!(r[1], want[1], epsilon = 1e-14);
        assert_eq!(trace_constraint_ident_general(2, &BTreeMap::new()), vec![-1.0, -1.0]);
    }
}

//! Decorrelators covariant under independent SU(2) signals on each qubit.
//!
//! In the conjugate-flipped picture the Choi operator is
//! R̄ = q₀ P⁰⊗P⁰ + q₁ (P⁰⊗P¹ + P¹⊗P⁰) + q₂ P¹⊗P¹, each factor acting on one (out, in) pair.
//! Trace preservation is q₀ + 6q₁ + 9q₂ = 4.

use crate::choi::{swap_interleaved, ChoiOperator};
use crate::error::{Error, Result};
use crate::linalg::{self, kron, CMat};
use crate::qubit::{self, projector_singlet, projector_triplet, Subsystem, TwoQubitPauliState};

pub const Q_TOL: f64 = 1e-12;
pub const BISECT_TOL: f64 = 1e-9;
pub const BISECT_MAX_ITER: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffSignalChannel {
    q: [f64; 3],
}

impl DiffSignalChannel {
    /// Entries above −1e-12 are clamped to zero; the trace constraint is checked to 1e-12
    /// relative to the coefficient scale.
    pub fn new(q0: f64, q1: f64, q2: f64) -> Result<Self> {
        let mut q = [q0, q1, q2];
        for (index, v) in q.iter_mut().enumerate() {
            if !v.is_finite() || *v < -Q_TOL {
                return Err(Error::NegativeCoefficient { index, value: *v });
            }
            *v = v.max(0.0);
        }
        let scale = 1.0 + q[0] + 6.0 * q[1] + 9.0 * q[2];
        let residual = (q[0] + 6.0 * q[1] + 9.0 * q[2] - 4.0).abs();
        if residual > Q_TOL * scale {
            return Err(Error::TraceConstraint(residual));
        }
        Ok(Self { q })
    }

    pub fn q(&self) -> [f64; 3] {
        self.q
    }

    pub fn completely_mixing() -> Self {
        Self { q: [0.25; 3] }
    }
}

/// Unflipped Choi operator in out⊗in order.
pub fn build_choi_diff(c: &DiffSignalChannel) -> ChoiOperator {
    let (p0, p1) = (projector_singlet(), projector_triplet());
    let [q0, q1, q2] = c.q;
    let interleaved = kron(&p0, &p0).scale(q0)
        + (kron(&p0, &p1) + kron(&p1, &p0)).scale(q1)
        + kron(&p1, &p1).scale(q2);
    let flipped = ChoiOperator::new(4, 4, swap_interleaved(&interleaved)).expect("16x16");
    flipped.conjugate_flip().expect("two-qubit input")
}

/// The trace-preserving maps D₀, D₁, D₂ with D = (q₀/4)D₀ + (3q₁/2)D₁ + (9q₂/4)D₂.
pub fn apply_components(rho: &CMat) -> Result<[CMat; 3]> {
    let a = qubit::partial_trace(rho, Subsystem::A)?;
    let b = qubit::partial_trace(rho, Subsystem::B)?;
    let one = linalg::identity(2);
    let a1 = kron(&a, &one);
    let b1 = kron(&one, &b);
    let d1 = (&a1 + &b1 - rho).unscale(3.0);
    let d2 = (linalg::identity(4).scale(4.0) - a1.scale(2.0) - b1.scale(2.0) + rho).unscale(9.0);
    Ok([rho.clone(), d1, d2])
}

/// Weights of the component maps in the full channel.
pub fn component_weights(c: &DiffSignalChannel) -> [f64; 3] {
    [c.q[0] / 4.0, 1.5 * c.q[1], 2.25 * c.q[2]]
}

/// Unclamped coefficients reaching the product output [½(1+η̃σ_z)]^⊗2 from the zz-only seed.
pub fn q_diff_raw(eta: f64, lambda: f64, eta_tilde: f64) -> Result<[f64; 3]> {
    if eta == 0.0 {
        return Err(Error::SingularParameter("eta = 0"));
    }
    if lambda == 0.0 {
        return Err(Error::SingularParameter("lambda = 0"));
    }
    let t = eta_tilde / eta;
    let s = eta_tilde * eta_tilde / lambda;
    Ok([
        0.25 * (1.0 + 6.0 * t - 9.0 * s),
        0.25 * (1.0 + 2.0 * t + 3.0 * s),
        0.25 * (1.0 - 2.0 * t - s),
    ])
}

/// Pass η̃ with the sign of η.
pub fn solve_q_diff(eta: f64, lambda: f64, eta_tilde: f64) -> Result<DiffSignalChannel> {
    let q = q_diff_raw(eta, lambda, eta_tilde)?;
    let min_q = q.iter().copied().fold(f64::INFINITY, f64::min);
    if min_q < -Q_TOL {
        return Err(Error::Infeasible { min_q });
    }
    DiffSignalChannel::new(q[0], q[1], q[2])
}

fn check_zz_state(eta: f64, lambda: f64) -> Result<()> {
    let ok = eta.is_finite()
        && lambda.is_finite()
        && eta.abs() <= 1.0 + 1e-12
        && lambda >= -1.0 - 1e-10
        && lambda <= 1.0 - 2.0 * eta.abs() + 1e-10;
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidState(format!("(eta={eta}, lambda={lambda}) is not a valid zz-only state")))
    }
}

/// Largest output Bloch length over the channel family, for the seed with only λ_zz = λ.
pub fn optimal_eta_diff(eta: f64, lambda: f64) -> Result<f64> {
    check_zz_state(eta, lambda)?;
    let e = eta.abs();
    if e == 0.0 || lambda == 0.0 {
        return Ok(0.0);
    }
    let e2 = e * e;
    // η²λ + λ² = λ(λ + η²) is nonnegative on branches 1, 3, 4
    let root = |x: f64| x.max(0.0).sqrt();
    let v = if lambda <= -e2 {
        (-lambda - root(e2 * lambda + lambda * lambda)) / e
    } else if lambda <= 0.0 {
        (-lambda + root(lambda * lambda - 3.0 * e2 * lambda)) / (3.0 * e)
    } else if lambda <= e2 / 3.0 {
        (lambda + root(e2 * lambda + lambda * lambda)) / (3.0 * e)
    } else {
        (-lambda + root(e2 * lambda + lambda * lambda)) / e
    };
    Ok(v)
}

/// Bisection over η̃ ∈ [0, 1] on the feasibility of `solve_q_diff`. A coarse scan first locates
/// the first infeasible point so the search stays on the component containing η̃ = 0.
pub fn oracle_optimal_diff(eta: f64, lambda: f64) -> Result<f64> {
    check_zz_state(eta, lambda)?;
    if eta == 0.0 || lambda == 0.0 {
        return Ok(0.0);
    }
    let sign = eta.signum();
    let feasible = |x: f64| solve_q_diff(eta, lambda, sign * x).is_ok();
    Ok(bisect_sup(feasible))
}

/// Boundary of the feasible component of [0, 1] that contains 0.
pub(crate) fn bisect_sup(feasible: impl Fn(f64) -> bool) -> f64 {
    const SCAN: usize = 256;
    let mut lo = 0.0;
    let mut hi = None;
    for k in 1..=SCAN {
        let x = k as f64 / SCAN as f64;
        if feasible(x) {
            lo = x;
        } else {
            hi = Some(x);
            break;
        }
    }
    let Some(mut hi) = hi else { return 1.0 };
    for _ in 0..BISECT_MAX_ITER {
        if hi - lo <= BISECT_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// |Σ_n (3ⁿ/2ᴺ) C(N,n) q_n − 1|.
pub fn trace_constraint_diff_general(n: usize, q: &[f64]) -> Result<f64> {
    if q.len() != n + 1 {
        return Err(Error::DimensionMismatch { expected: n + 1, got: q.len() });
    }
    let mut sum = 0.0;
    let mut binom = 1.0;
    for (k, qk) in q.iter().enumerate() {
        sum += 3f64.powi(k as i32) / 2f64.powi(n as i32) * binom * qk;
        binom = binom * (n - k) as f64 / (k + 1) as f64;
    }
    Ok((sum - 1.0).abs())
}

/// Output of the solved channel on the zz-only seed.
pub fn decorrelate_diff(eta: f64, lambda: f64, eta_tilde: f64) -> Result<(DiffSignalChannel, CMat)> {
    let seed = TwoQubitPauliState::zz(eta, lambda)?;
    let c = solve_q_diff(eta, lambda, eta_tilde)?;
    let out = build_choi_diff(&c).apply(seed.to_density().matrix())?;
    Ok((c, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;
    use crate::qubit::z_qubit;
    use approx::assert_abs_diff_eq;

    #[test]
    fn identity_vector_gives_identity_channel() {
        let r = build_choi_diff(&DiffSignalChannel::new(4.0, 0.0, 0.0).unwrap());
        assert!(r.is_tp().0 && r.is_cp().0);
        assert!(max_abs(&(r.matrix() - ChoiOperator::identity(4).matrix())) < 1e-14);
    }

    #[test]
    fn completely_mixing() {
        let r = build_choi_diff(&DiffSignalChannel::completely_mixing());
        let s = TwoQubitPauliState::zz(0.7, -0.5).unwrap();
        let out = r.apply(s.to_density().matrix()).unwrap();
        assert!(max_abs(&(out - linalg::identity(4).scale(0.25))) < 1e-14);
    }

    #[test]
    fn rejects_negative() {
        assert!(matches!(DiffSignalChannel::new(4.5, -0.1, 0.0), Err(Error::NegativeCoefficient { index: 1, .. })));
        assert!(matches!(DiffSignalChannel::new(1.0, 0.0, 0.0), Err(Error::TraceConstraint(_))));
    }

    #[test]
    fn zero_target_is_mixing() {
        let c = solve_q_diff(0.4, -0.3, 0.0).unwrap();
        assert_eq!(c.q(), [0.25; 3]);
    }

    #[test]
    fn product_seed_is_fixed() {
        let (_, out) = decorrelate_diff(0.6, -0.36, 0.6).unwrap();
        assert!(max_abs(&(out - kron(&z_qubit(0.6), &z_qubit(0.6)))) < 1e-12);
        assert_abs_diff_eq!(optimal_eta_diff(0.6, -0.36).unwrap(), 0.6, epsilon = 1e-12);
    }

    #[test]
    fn boundary_continuity() {
        let e = 0.3_f64;
        let l = e * e / 3.0;
        let b3 = (l + (e * e * l + l * l).sqrt()) / (3.0 * e);
        let b4 = (-l + (e * e * l + l * l).sqrt()) / e;
        assert_abs_diff_eq!(b3, 0.1, epsilon = 1e-12);
        assert_abs_diff_eq!(b4, 0.1, epsilon = 1e-12);
        assert_abs_diff_eq!(optimal_eta_diff(e, l).unwrap(), 0.1, epsilon = 1e-12);
    }

    #[test]
    fn active_constraint_at_optimum() {
        let opt = optimal_eta_diff(0.3, 0.2).unwrap();
        let q = q_diff_raw(0.3, 0.2, opt).unwrap();
        assert!(q.iter().any(|v| v.abs() < 1e-9), "{q:?}");
    }

    #[test]
    fn general_constraint() {
        assert_abs_diff_eq!(trace_constraint_diff_general(1, &[0.5, 0.5]).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(trace_constraint_diff_general(3, &[0.0; 4]).unwrap(), 1.0);
        let q = solve_q_diff(0.5, -0.5, 0.25).unwrap().q();
        assert_abs_diff_eq!(trace_constraint_diff_general(2, &q).unwrap(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn invalid_states() {
        assert!(optimal_eta_diff(0.5, 0.4).is_err());
        assert!(optimal_eta_diff(1.2, 0.0).is_err());
        assert_eq!(optimal_eta_diff(0.0, 0.3).unwrap(), 0.0);
        assert_eq!(optimal_eta_diff(0.3, 0.0).unwrap(), 0.0);
    }
}

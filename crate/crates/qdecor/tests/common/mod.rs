//! Oracles shared by the integration tests. Nothing here calls the closed-form optimum or the
//! closed-form coefficient solves of the library.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector, Matrix4, SymmetricEigen};
use num_complex::Complex64;
use qdecor::choi::ChoiOperator;
use qdecor::ident::projectors_jl;
use qdecor::linalg::{kron, CMat};
use rand::Rng;

pub type C = Complex64;

pub fn z_qubit(eta: f64) -> CMat {
    CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![C::new((1.0 + eta) / 2.0, 0.0), C::new((1.0 - eta) / 2.0, 0.0)]))
}

pub fn product_target(eta_tilde: f64) -> CMat {
    kron(&z_qubit(eta_tilde), &z_qubit(eta_tilde))
}

/// Tr_B and Tr_A of a two-qubit operator, written out index by index.
pub fn marginals(rho: &CMat) -> (CMat, CMat) {
    let mut a = CMat::zeros(2, 2);
    let mut b = CMat::zeros(2, 2);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                a[(i, j)] += rho[(2 * i + k, 2 * j + k)];
                b[(i, j)] += rho[(2 * k + i, 2 * k + j)];
            }
        }
    }
    (a, b)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

/// The three trace-preserving maps of the independent-signal family, with their weights
/// q₀/4, 3q₁/2, 9q₂/4 folded in per unit q.
pub fn diff_components(rho: &CMat) -> Vec<CMat> {
    let (a, b) = marginals(rho);
    let id2 = CMat::identity(2, 2);
    let ra = kron(&a, &id2);
    let rb = kron(&id2, &b);
    let d0 = rho.clone();
    let d1 = (&ra + &rb - rho).unscale(3.0);
    let d2 = (CMat::identity(4, 4).scale(4.0) - ra.scale(2.0) - rb.scale(2.0) + rho).unscale(9.0);
    vec![d0.scale(0.25), d1.scale(1.5), d2.scale(2.25)]
}

pub const DIFF_CONSTRAINTS: &[(&[f64], f64)] = &[(&[1.0, 6.0, 9.0], 4.0)];

pub const IDENT_CONSTRAINTS: &[(&[f64], f64)] =
    &[(&[1.0, 3.0, 0.0, 0.0, 0.0, 0.0], 1.0), (&[0.0, 0.0, 1.0, 1.0 / 3.0, 1.0, 5.0 / 3.0], 1.0)];

/// Per-coefficient Choi operators of the identical-signal family.
pub fn ident_component_chois() -> Vec<ChoiOperator> {
    projectors_jl()
        .iter()
        .map(|p| ChoiOperator::new(4, 4, p.clone()).unwrap().conjugate_flip().unwrap())
        .collect()
}

pub fn ident_components(chois: &[ChoiOperator], rho: &CMat) -> Vec<CMat> {
    chois.iter().map(|r| r.apply(rho).unwrap()).collect()
}

/// Nonnegative solutions of Σ q_k comps[k] = target under linear constraints, for a fixed set of
/// component outputs and varying targets. The system is factored once: least squares fixes the
/// affine solution set and its nonnegative part is searched by vertex enumeration, which is
/// exhaustive because the positive-weight constraints bound it.
pub struct AffineCone {
    pinv: DMatrix<f64>,
    a: DMatrix<f64>,
    null: DMatrix<f64>,
    vertices: Vec<(Vec<usize>, DMatrix<f64>)>,
    rhs: Vec<f64>,
}

impl AffineCone {
    pub fn new(comps: &[CMat], constraints: &[(&[f64], f64)]) -> Self {
        let k = comps.len();
        let n_entries = comps[0].len();
        let rows = 2 * n_entries + constraints.len();
        let mut a = DMatrix::<f64>::zeros(rows, k);
        for (col, c) in comps.iter().enumerate() {
            for (e, z) in c.iter().enumerate() {
                a[(2 * e, col)] = z.re;
                a[(2 * e + 1, col)] = z.im;
            }
        }
        for (r, (w, _)) in constraints.iter().enumerate() {
            for col in 0..k {
                a[(2 * n_entries + r, col)] = w[col];
            }
        }
        let svd = a.clone().svd(true, true);
        let cut = 1e-10 * svd.singular_values.max();
        let u = svd.u.as_ref().unwrap();
        let vt = svd.v_t.as_ref().unwrap();
        let mut pinv = DMatrix::<f64>::zeros(k, rows);
        let mut null = Vec::new();
        for i in 0..svd.singular_values.len() {
            let s = svd.singular_values[i];
            let vi = vt.row(i).transpose();
            if s > cut {
                pinv += &vi * u.column(i).transpose() / s;
            } else {
                null.push(vi);
            }
        }
        let nd = null.len();
        let null = if nd == 0 { DMatrix::zeros(k, 0) } else { DMatrix::from_columns(&null) };
        let vertices = subsets(k, nd)
            .into_iter()
            .filter_map(|s| {
                let mut m = DMatrix::<f64>::zeros(nd, nd);
                for (r, &idx) in s.iter().enumerate() {
                    m.set_row(r, &null.row(idx));
                }
                if nd > 0 && m.determinant().abs() < 1e-12 {
                    return None;
                }
                m.try_inverse().map(|inv| (s, inv))
            })
            .collect();
        Self { pinv, a, null, vertices, rhs: constraints.iter().map(|c| c.1).collect() }
    }

    pub fn feasible(&self, target: &CMat, tol: f64) -> bool {
        let rows = self.a.nrows();
        let mut b = DVector::<f64>::zeros(rows);
        for (e, z) in target.iter().enumerate() {
            b[2 * e] = z.re;
            b[2 * e + 1] = z.im;
        }
        let off = 2 * target.len();
        for (r, v) in self.rhs.iter().enumerate() {
            b[off + r] = *v;
        }
        let qp = &self.pinv * &b;
        if (&self.a * &qp - &b).norm() > RESIDUAL_TOL {
            return false;
        }
        if self.null.ncols() == 0 {
            return qp.iter().all(|&v| v >= -tol);
        }
        self.vertices.iter().any(|(s, inv)| {
            let sel = DVector::from_iterator(s.len(), s.iter().map(|&i| -qp[i]));
            let z = inv * sel;
            (&qp + &self.null * z).iter().all(|&v| v >= -tol)
        })
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Supremum of {x ∈ [0, 1] : ok(x)} assuming ok(0): a 128-point scan for the last feasible
/// sample, then bisection to 1e-11 against the next sample.
pub fn sup_feasible(ok: impl Fn(f64) -> bool) -> f64 {
    let n = 128;
    let mut last = 0;
    for i in 1..=n {
        if ok(i as f64 / n as f64) {
            last = i;
        }
    }
    if last == n {
        return 1.0;
    }
    let (mut lo, mut hi) = (last as f64 / n as f64, (last + 1) as f64 / n as f64);
    while hi - lo > 1e-11 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

pub fn zz_seed(eta: f64, lambda: f64) -> CMat {
    let z = CMat::from_diagonal(&DVector::from_vec(vec![C::new(1.0, 0.0), C::new(-1.0, 0.0)]));
    let id = CMat::identity(2, 2);
    (CMat::identity(4, 4) + (kron(&z, &id) + kron(&id, &z)).scale(eta) - kron(&z, &z).scale(lambda)).scale(0.25)
}

/// ¼(1 + η(Z1+1Z) − λ_⊥(XX+YY) − λ ZZ) with λ_⊥ = −(1+λ)/2.
pub fn sym_seed(eta: f64, lambda: f64) -> CMat {
    let x = CMat::from_row_slice(2, 2, &[C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 0.0)]);
    let y = CMat::from_row_slice(2, 2, &[C::new(0.0, 0.0), C::new(0.0, -1.0), C::new(0.0, 1.0), C::new(0.0, 0.0)]);
    let perp = -(1.0 + lambda) / 2.0;
    zz_seed(eta, lambda) - (kron(&x, &x) + kron(&y, &y)).scale(0.25 * perp)
}

pub fn singlet_seed(p: f64, eta: f64, lambda: f64) -> CMat {
    let s = 0.5_f64.sqrt();
    let v = DVector::from_vec(vec![C::new(0.0, 0.0), C::new(s, 0.0), C::new(-s, 0.0), C::new(0.0, 0.0)]);
    (&v * v.adjoint()).scale(p) + sym_seed(eta, lambda).scale(1.0 - p)
}

pub const FEAS_TOL: f64 = 1e-12;
/// Least-squares residual above which a target counts as unreachable. Where the mismatch grows
/// like η̃², the oracle then resolves η̃ = 0 only to about √RESIDUAL_TOL.
pub const RESIDUAL_TOL: f64 = 1e-9;
pub const ORACLE_ZERO_RESOLUTION: f64 = 1e-4;

pub fn oracle_diff(eta: f64, lambda: f64) -> f64 {
    let cone = AffineCone::new(&diff_components(&zz_seed(eta, lambda)), DIFF_CONSTRAINTS);
    let s = if eta < 0.0 { -1.0 } else { 1.0 };
    sup_feasible(|x| cone.feasible(&product_target(s * x), FEAS_TOL))
}

pub fn oracle_ident(chois: &[ChoiOperator], seed: &CMat, eta: f64) -> f64 {
    let cone = AffineCone::new(&ident_components(chois, seed), IDENT_CONSTRAINTS);
    let s = if eta < 0.0 { -1.0 } else { 1.0 };
    sup_feasible(|x| cone.feasible(&product_target(s * x), FEAS_TOL))
}

/// Probabilists' Gauss–Hermite rule for weight e^{−x²/2} via Golub–Welsch.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut j = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let b = (k as f64).sqrt();
        j[(k - 1, k)] = b;
        j[(k, k - 1)] = b;
    }
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| (eig.eigenvalues[i], (2.0 * std::f64::consts::PI).sqrt() * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    pairs.into_iter().unzip()
}

/// √det G/(2π)² ∫ d⁴x e^{−½xᵀGx − xᵀΣq} with Σ = −i diag(ω, −ω), on a tensor-product
/// Gauss–Hermite grid after whitening x = L y, L Lᵀ = G⁻¹.
pub fn kernel_quadrature(ginv: &Matrix4<f64>, q: &[f64; 4], nodes: &(Vec<f64>, Vec<f64>)) -> C {
    let l = ginv.cholesky().expect("G⁻¹ positive definite").l();
    let d = Matrix4::new(
        0.0, 1.0, 0.0, 0.0, //
        -1.0, 0.0, 0.0, 0.0, //
        0.0, 0.0, 0.0, -1.0, //
        0.0, 0.0, 1.0, 0.0,
    );
    // −xᵀΣq = i xᵀ D q = i yᵀ (Lᵀ D q)
    let k = l.transpose() * d * nalgebra::Vector4::from_row_slice(q);
    let (xs, ws) = nodes;
    let n = xs.len();
    let mut acc = C::new(0.0, 0.0);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for e in 0..n {
                    let w = ws[a] * ws[b] * ws[c] * ws[e];
                    let ph = k[0] * xs[a] + k[1] * xs[b] + k[2] * xs[c] + k[3] * xs[e];
                    acc += C::from_polar(w, ph);
                }
            }
        }
    }
    acc / (2.0 * std::f64::consts::PI).powi(2)
}

fn rotation(theta: f64, mode: usize) -> Matrix4<f64> {
    let mut s = Matrix4::identity();
    let (c, sn) = (theta.cos(), theta.sin());
    let o = 2 * mode;
    s[(o, o)] = c;
    s[(o, o + 1)] = -sn;
    s[(o + 1, o)] = sn;
    s[(o + 1, o + 1)] = c;
    s
}

fn squeezer(r: f64, mode: usize) -> Matrix4<f64> {
    let mut s = Matrix4::identity();
    s[(2 * mode, 2 * mode)] = r;
    s[(2 * mode + 1, 2 * mode + 1)] = 1.0 / r;
    s
}

fn beam_splitter(theta: f64) -> Matrix4<f64> {
    let (c, s) = (theta.cos(), theta.sin());
    let mut m = Matrix4::identity() * c;
    for k in 0..2 {
        m[(k, 2 + k)] = s;
        m[(2 + k, k)] = -s;
    }
    m
}

pub fn omega4() -> Matrix4<f64> {
    let mut w = Matrix4::zeros();
    w[(0, 1)] = 1.0;
    w[(1, 0)] = -1.0;
    w[(2, 3)] = 1.0;
    w[(3, 2)] = -1.0;
    w
}

pub fn random_symplectic<R: Rng>(rng: &mut R) -> Matrix4<f64> {
    let mut s = Matrix4::identity();
    for _ in 0..3 {
        s = rotation(rng.gen_range(0.0..6.3), 0) * rotation(rng.gen_range(0.0..6.3), 1) * s;
        s = squeezer(rng.gen_range(0.4..2.5), 0) * squeezer(rng.gen_range(0.4..2.5), 1) * s;
        s = beam_splitter(rng.gen_range(0.0..6.3)) * s;
    }
    s
}

/// S diag(ν₁, ν₁, ν₂, ν₂) Sᵀ with ν ≥ 1: physical by construction.
pub fn random_physical_m<R: Rng>(rng: &mut R) -> Matrix4<f64> {
    let s = random_symplectic(rng);
    let (n1, n2) = (rng.gen_range(1.0..3.0), rng.gen_range(1.0..3.0));
    let d = Matrix4::from_diagonal(&nalgebra::Vector4::new(n1, n1, n2, n2));
    let m = s * d * s.transpose();
    (m + m.transpose()) * 0.5
}

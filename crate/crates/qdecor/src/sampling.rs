//! Seeded random objects: Haar SU(2), random states and random channels.
//!
//! Every routine draws from an explicit ChaCha8 stream, so shards evaluated in parallel are
//! reproducible from `(seed, stream)` alone.

use nalgebra::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::choi::ChoiOperator;
use crate::linalg::{self, c, CMat, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rng_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Haar-distributed SU(2) element from a uniformly random unit quaternion.
pub fn haar_su2_with<R: Rng + ?Sized>(rng: &mut R) -> CMat {
    let mut q = [0.0_f64; 4];
    loop {
        for v in q.iter_mut() {
            *v = rng.sample(StandardNormal);
        }
        let n = q.iter().map(|v| v * v).sum::<f64>().sqrt();
        if n > 1e-12 {
            q.iter_mut().for_each(|v| *v /= n);
            break;
        }
    }
    let [a, b, cc, d] = q;
    CMat::from_row_slice(2, 2, &[C64::new(a, b), C64::new(cc, d), C64::new(-cc, d), C64::new(a, -b)])
}

pub fn haar_su2(seed: u64) -> CMat {
    haar_su2_with(&mut rng(seed))
}

fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex::new(re, im)
    })
}

/// Full-rank random density matrix (Hilbert–Schmidt measure).
pub fn random_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMat {
    let g = ginibre(dim, dim, rng);
    let m = &g * g.adjoint();
    let tr = m.trace();
    linalg::hermitian_part(&m.unscale(tr.re))
}

/// Random permutation-invariant two-qubit operator with Pauli coefficients scaled by `scale`.
pub fn random_pauli_params<R: Rng + ?Sized>(scale: f64, rng: &mut R) -> (f64, [[f64; 3]; 3]) {
    let eta = scale * rng.gen_range(-1.0..1.0);
    let mut lam = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            lam[i][j] = scale * rng.gen_range(-1.0..1.0);
            lam[j][i] = lam[i][j];
        }
    }
    (eta, lam)
}

/// Random CPTP channel: a Ginibre Choi matrix renormalized on the input factor.
pub fn random_channel<R: Rng + ?Sized>(dim_in: usize, dim_out: usize, rng: &mut R) -> ChoiOperator {
    let n = dim_in * dim_out;
    let g = ginibre(n, n, rng);
    let r = &g * g.adjoint();
    let t = linalg::partial_trace_dims(&r, &[dim_out, dim_in], &[false, true]);
    let a = linalg::spectral_map(&t, |x| 1.0 / x.sqrt());
    let k = linalg::identity(dim_out).kronecker(&a);
    let m = linalg::hermitian_part(&(&k * r * &k));
    ChoiOperator::new(dim_in, dim_out, m).expect("square by construction")
}

/// Random trace-nonincreasing CP map: a random channel followed by an input-dependent
/// acceptance probability between 0.2 and 1.
pub fn random_subchannel<R: Rng + ?Sized>(dim_in: usize, dim_out: usize, rng: &mut R) -> ChoiOperator {
    let base = random_channel(dim_in, dim_out, rng);
    let u = {
        let g = ginibre(dim_in, dim_in, rng);
        g.qr().q()
    };
    let mut d = CMat::zeros(dim_in, dim_in);
    for i in 0..dim_in {
        d[(i, i)] = c(rng.gen_range(0.2_f64..1.0).sqrt());
    }
    let b = &u * d * u.adjoint();
    let k = linalg::identity(dim_out).kronecker(&b);
    let m = linalg::hermitian_part(&(&k * base.matrix() * &k));
    ChoiOperator::new(dim_in, dim_out, m).expect("square by construction")
}

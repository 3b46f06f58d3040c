//! Surfaces of the optimal output Bloch length over (η, λ), evaluated cell-parallel and returned
//! in row-major order (η outer, λ inner).

use crate::diff;
use crate::error::{Error, Result};
use crate::ident::{self, GeneralSeed};
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceMode {
    Diff,
    Ident,
    IdentGeneral,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceCell {
    pub eta: f64,
    pub lambda: f64,
    /// None outside the PSD region of the mode's family.
    pub eta_tilde: Option<f64>,
}

impl SurfaceCell {
    pub fn feasible(&self) -> bool {
        self.eta_tilde.is_some()
    }
}

/// `steps` evenly spaced points on [lo, hi], endpoints included.
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![lo];
    }
    let h = (hi - lo) / (steps - 1) as f64;
    (0..steps).map(|k| if k == steps - 1 { hi } else { lo + h * k as f64 }).collect()
}

/// η ∈ [−1, 1]; λ ∈ [−1, 1 − 2 min|η|], the hull of the per-row PSD ranges.
pub fn grid_axes(eta_steps: usize, lambda_steps: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if eta_steps < 2 || lambda_steps < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid needs at least 2 steps per axis, got {eta_steps}x{lambda_steps}"
        )));
    }
    let etas = linspace(-1.0, 1.0, eta_steps);
    let emin = etas.iter().fold(f64::INFINITY, |a, e| a.min(e.abs()));
    Ok((etas, linspace(-1.0, 1.0 - 2.0 * emin, lambda_steps)))
}

/// Upper end of the PSD range at a given η, shared by both seed families.
pub fn lambda_max(eta: f64) -> f64 {
    1.0 - 2.0 * eta.abs()
}

fn in_region(eta: f64, lambda: f64) -> bool {
    lambda >= -1.0 && lambda <= lambda_max(eta) + 1e-12
}

/// Closed-form optimum at one cell; None when the seed is not a state.
pub fn cell_value(mode: SurfaceMode, eta: f64, lambda: f64, p: f64) -> Option<f64> {
    if !in_region(eta, lambda) {
        return None;
    }
    match mode {
        SurfaceMode::Diff => diff::optimal_eta_diff(eta, lambda).ok(),
        SurfaceMode::Ident => ident::optimal_eta_symmetric(eta, lambda).ok(),
        SurfaceMode::IdentGeneral => {
            GeneralSeed::new(p, eta, lambda).and_then(|s| ident::optimal_eta_general(&s)).ok()
        }
    }
}

pub fn surface(mode: SurfaceMode, etas: &[f64], lambdas: &[f64], p: f64) -> Result<Vec<SurfaceCell>> {
    if mode == SurfaceMode::IdentGeneral && !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("p = {p} must lie in [0, 1]")));
    }
    let nl = lambdas.len();
    Ok(par::map_indexed(etas.len() * nl, |k| {
        let (eta, lambda) = (etas[k / nl], lambdas[k % nl]);
        SurfaceCell { eta, lambda, eta_tilde: cell_value(mode, eta, lambda, p) }
    }))
}

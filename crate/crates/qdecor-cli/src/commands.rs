use std::collections::BTreeMap;

use nalgebra::Matrix4;
use qdecor::choi::{covariance_residual, ChoiOperator, CovarianceMode};
use qdecor::gaussian::{self, TwoModeGaussian};
use qdecor::ident::{self, GeneralSeed};
use qdecor::linalg::{self, CMat};
use qdecor::nocloning::{self, PhaseOrbitSpec};
use qdecor::qubit::{self, BlochVector, Subsystem, TwoQubitPauliState};
use qdecor::sweep::{self, SurfaceMode};
use qdecor::{diff, Error};
use serde::Serialize;

use crate::io::{self, print_json};
use crate::{
    CliError, CliResult, CvCloneArgs, DecorrelateArgs, GaussianState, Globals, Mode, NoCloningArgs, SurfaceArgs,
};

/// Product residual above which an applied solution counts as a failed verification.
pub const PRODUCT_TOL: f64 = 1e-8;
/// Haar draws behind the reported covariance residual.
pub const COVARIANCE_SAMPLES: usize = 50;
/// Largest splitter cross-correlation accepted for decorrelated clones.
pub const CROSS_TOL: f64 = 1e-10;

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Diff => "diff",
        Mode::Ident => "ident",
        Mode::IdentGeneral => "ident-general",
    }
}

/// p belongs to ident-general alone and defaults to 0 there.
fn singlet_fraction(mode: Mode, p: Option<f64>) -> CliResult<f64> {
    match (mode, p) {
        (Mode::IdentGeneral, p) => {
            let p = p.unwrap_or(0.0);
            if (0.0..=1.0).contains(&p) {
                Ok(p)
            } else {
                Err(CliError::Usage(format!("--p {p} must lie in [0, 1]")))
            }
        }
        (_, None) => Ok(0.0),
        (m, Some(_)) => Err(CliError::Usage(format!("--p only applies to ident-general, not {}", mode_name(m)))),
    }
}

pub fn surface(a: &SurfaceArgs) -> CliResult<()> {
    let p = singlet_fraction(a.mode, a.p)?;
    let mode = match a.mode {
        Mode::Diff => SurfaceMode::Diff,
        Mode::Ident => SurfaceMode::Ident,
        Mode::IdentGeneral => SurfaceMode::IdentGeneral,
    };
    let (etas, lambdas) = sweep::grid_axes(a.eta_steps, a.lambda_steps)?;
    let cells = sweep::surface(mode, &etas, &lambdas, p)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(["eta", "lambda", "eta_tilde", "feasible"]).map_err(csv_err)?;
    for c in &cells {
        let (v, f) = match c.eta_tilde {
            Some(v) => (v.to_string(), "1"),
            None => ("nan".to_string(), "0"),
        };
        w.write_record([c.eta.to_string(), c.lambda.to_string(), v, f.to_string()]).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    io::write_out(&a.out, &bytes)
}

#[derive(Serialize)]
struct Verify {
    tp_residual: f64,
    cp_min_eig: f64,
    covariance_residual: f64,
    product_residual: f64,
    output_bloch: f64,
}

#[derive(Serialize)]
struct DecorrelateOut {
    mode: &'static str,
    eta: f64,
    lambda: f64,
    p: Option<f64>,
    eta_tilde: f64,
    /// Null when no coefficient vector exists, e.g. at the singular points λ = −1/3 or η = 0.
    coefficients: Option<BTreeMap<String, f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verify: Option<Verify>,
}

fn named(q: &[f64]) -> BTreeMap<String, f64> {
    q.iter().enumerate().map(|(k, v)| (format!("q{k}"), *v)).collect()
}

fn solve_at(mode: Mode, eta: f64, lambda: f64, seed: Option<&GeneralSeed>, target: f64) -> Result<(Vec<f64>, ChoiOperator), Error> {
    match mode {
        Mode::Diff => {
            let c = diff::solve_q_diff(eta, lambda, target)?;
            Ok((c.q().to_vec(), diff::build_choi_diff(&c)))
        }
        Mode::Ident => {
            let c = ident::solve_q_symmetric(eta, lambda, target)?;
            Ok((c.q().to_vec(), ident::build_choi_ident(&c)))
        }
        Mode::IdentGeneral => {
            let c = ident::solve_q_general(seed.expect("general seed"), target)?;
            Ok((c.q().to_vec(), ident::build_choi_ident(&c)))
        }
    }
}

pub fn decorrelate(a: &DecorrelateArgs, g: &Globals) -> CliResult<()> {
    let p = singlet_fraction(a.mode, a.p)?;
    let (eta, lambda) = (a.eta, a.lambda);
    let mut general = None;
    let (v, rho, cov_mode): (f64, CMat, CovarianceMode) = match a.mode {
        Mode::Diff => {
            let s = TwoQubitPauliState::zz(eta, lambda)?;
            (diff::optimal_eta_diff(eta, lambda)?, s.to_density().into_matrix(), CovarianceMode::Different)
        }
        Mode::Ident => {
            let s = TwoQubitPauliState::symmetric(eta, lambda)?;
            (ident::optimal_eta_symmetric(eta, lambda)?, s.to_density().into_matrix(), CovarianceMode::Identical)
        }
        Mode::IdentGeneral => {
            let s = GeneralSeed::new(p, eta, lambda)?;
            general = Some(s);
            (ident::optimal_eta_general(&s)?, s.to_density(), CovarianceMode::Identical)
        }
    };
    let sign = if eta < 0.0 { -1.0 } else { 1.0 };
    // the optimum sits on the boundary of the feasible set; step inside if rounding lands outside
    let solved = [1.0, 1.0 - 1e-12, 1.0 - 1e-9]
        .iter()
        .find_map(|f| solve_at(a.mode, eta, lambda, general.as_ref(), sign * v * f).ok());
    let verify = match (&solved, a.apply) {
        (Some((_, r)), true) => {
            let out = r.apply(&rho)?;
            let bloch = BlochVector::of(&qubit::partial_trace(&out, Subsystem::A)?)?;
            Some(Verify {
                tp_residual: r.is_tp().1,
                cp_min_eig: linalg::min_eig_h(r.matrix()),
                covariance_residual: covariance_residual(r, COVARIANCE_SAMPLES, cov_mode, g.seed),
                product_residual: qubit::product_residual(&out)?,
                output_bloch: bloch.norm(),
            })
        }
        _ => None,
    };
    if let (Some(path), Some((_, r))) = (&a.choi_out, &solved) {
        let json = serde_json::to_string(&io::ChoiFile::from_choi(r)).map_err(|e| CliError::Verify(e.to_string()))?;
        io::write_out(path, json.as_bytes())?;
    }
    let failed = verify.as_ref().map(|v| v.product_residual > PRODUCT_TOL).unwrap_or(false);
    print_json(&DecorrelateOut {
        mode: mode_name(a.mode),
        eta,
        lambda,
        p: (a.mode == Mode::IdentGeneral).then_some(p),
        eta_tilde: v,
        coefficients: solved.as_ref().map(|(q, _)| named(q)),
        verify,
    })?;
    if failed {
        return Err(CliError::Verify(format!("product residual above {PRODUCT_TOL:e}")));
    }
    if v <= g.tol {
        return Err(CliError::Infeasible("only η̃ = 0 is reachable for this seed".into()));
    }
    if a.apply && solved.is_none() {
        return Err(CliError::Verify("no coefficient vector found at the optimum".into()));
    }
    Ok(())
}

fn rows(m: &Matrix4<f64>) -> Vec<[f64; 4]> {
    (0..4).map(|r| [m[(r, 0)], m[(r, 1)], m[(r, 2)], m[(r, 3)]]).collect()
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct GaussianOut {
    kind: &'static str,
    eps: f64,
    M_in: Vec<[f64; 4]>,
    Ginv: Vec<[f64; 4]>,
    M_out: Vec<[f64; 4]>,
    nbar_per_mode: [f64; 2],
    C_residual: f64,
}

pub fn gaussian(state: &GaussianState) -> CliResult<()> {
    let (kind, s, eps) = match state {
        GaussianState::TwinBeam { lambda, eps } => ("twin-beam", gaussian::twin_beam(*lambda)?, *eps),
        GaussianState::Coherent { delta2, eps } => ("coherent", gaussian::correlated_coherent(*delta2)?, *eps),
        GaussianState::Custom { file, eps } => ("custom", TwoModeGaussian::new(io::read_matrix4(file)?)?, *eps),
    };
    let (w, z) = gaussian::default_wz(&s, eps)?;
    let map = gaussian::decorrelator_for(&s, &w, &z)?;
    let out = gaussian::apply_noise(&s, &map);
    let c_residual = out.c().iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    print_json(&GaussianOut {
        kind,
        eps,
        M_in: rows(s.matrix()),
        Ginv: rows(map.ginv()),
        M_out: rows(out.matrix()),
        nbar_per_mode: out.nbar_per_mode(),
        C_residual: c_residual,
    })
}

#[derive(Serialize)]
struct NoCloningOut {
    channel: &'static str,
    n: usize,
    m: usize,
    p: f64,
    phi_samples: usize,
    degree_out: usize,
    marginal_degrees: Vec<usize>,
    marginal_informative: Vec<bool>,
    degree_product: usize,
    decorrelation_gap: f64,
}

pub fn nocloning(a: &NoCloningArgs) -> CliResult<()> {
    let spec = PhaseOrbitSpec::new(a.p, a.n, a.m)?;
    let (label, channel) = match &a.choi {
        Some(path) => {
            let r = io::read_choi(path)?;
            let (cp, min_eig) = r.is_cp();
            if !cp {
                return Err(CliError::Usage(format!("Choi operator is not positive (min eigenvalue {min_eig:.3e})")));
            }
            ("file", r)
        }
        None if (a.n, a.m) == (1, 2) => ("universal", nocloning::universal_cloner()),
        None => return Err(CliError::Usage("the built-in universal cloner is 1 → 2; pass --choi otherwise".into())),
    };
    let r = nocloning::contradiction_report(&spec, &channel)?;
    print_json(&NoCloningOut {
        channel: label,
        n: r.n,
        m: r.m,
        p: r.p,
        phi_samples: r.phi_samples,
        degree_out: r.degree_out,
        marginal_degrees: r.marginal_degrees,
        marginal_informative: r.marginal_informative,
        degree_product: r.degree_product,
        decorrelation_gap: r.decorrelation_gap,
    })
}

#[derive(Serialize)]
struct StageOut {
    name: &'static str,
    amplitude: f64,
    noise: f64,
    modes: usize,
}

#[derive(Serialize)]
struct CvCloneOut {
    n: usize,
    m: usize,
    input_noise: Vec<f64>,
    decorrelated: bool,
    stages: Vec<StageOut>,
    clone_amplitude: f64,
    clone_noise: f64,
    cross_correlation: Option<f64>,
}

pub fn cv_clone(a: &CvCloneArgs) -> CliResult<()> {
    let noise = match a.noise.as_slice() {
        [g] => vec![*g; a.n],
        list => list.to_vec(),
    };
    let ledger = if a.decorrelated {
        gaussian::decorrelated_clone_pipeline(a.n, a.m, &noise)?
    } else {
        gaussian::clone_pipeline(a.n, a.m, &noise)?
    };
    let cross = ledger.cross_correlation;
    print_json(&CvCloneOut {
        n: ledger.n,
        m: ledger.m,
        input_noise: noise,
        decorrelated: a.decorrelated,
        stages: ledger
            .stages
            .into_iter()
            .map(|s| StageOut { name: s.name, amplitude: s.amplitude, noise: s.noise, modes: s.modes })
            .collect(),
        clone_amplitude: ledger.clone_amplitude,
        clone_noise: ledger.clone_noise,
        cross_correlation: cross,
    })?;
    match cross {
        Some(c) if c > CROSS_TOL => Err(CliError::Verify(format!("cross-correlation {c:.3e} above {CROSS_TOL:e}"))),
        _ => Ok(()),
    }
}

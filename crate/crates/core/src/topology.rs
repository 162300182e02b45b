//! First Chern numbers of the drive-family bands by independent routes:
//! a gauge-invariant plaquette sum over link variables (integer-exact),
//! midpoint quadrature of the spectral Berry curvature, the dynamical
//! (measured) route, and the two-patch equatorial line integral of the
//! monopole potentials. Plus Wilson-loop Berry phases and the
//! topological-transition sweep.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{dynamical_chern, RampProtocol};
use crate::error::Error;
use crate::geometry::{berry_curvature_spectral, StateMap};
use crate::monopole::{vector_potential, MonopoleConfig, Patch, SpacePoint};
use crate::numeric::pairwise_sum;
use crate::qubit::{build_hamiltonian, eigensystem, Band, DriveParams, SpherePoint, State2};
use crate::Result;

/// How a Chern number was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChernRoute {
    Plaquette,
    SpectralQuadrature,
    Dynamical,
    TwoPatch,
}

impl ChernRoute {
    pub fn label(&self) -> &'static str {
        match self {
            ChernRoute::Plaquette => "plaquette",
            ChernRoute::SpectralQuadrature => "spectral_quadrature",
            ChernRoute::Dynamical => "dynamical",
            ChernRoute::TwoPatch => "two_patch",
        }
    }
}

impl std::str::FromStr for ChernRoute {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plaquette" => Ok(ChernRoute::Plaquette),
            "spectral" | "spectral_quadrature" => Ok(ChernRoute::SpectralQuadrature),
            "dynamical" => Ok(ChernRoute::Dynamical),
            "two_patch" => Ok(ChernRoute::TwoPatch),
            other => Err(Error::InvalidInput(format!(
                "unknown route '{other}' (expected plaquette|spectral|dynamical|two_patch)"
            ))),
        }
    }
}

/// A computed first Chern number.
#[derive(Clone, Debug)]
pub struct ChernResult {
    /// Pre-rounding integral divided by 2π.
    pub value: f64,
    pub rounded: i64,
    pub route: ChernRoute,
    pub grid: (usize, usize),
    /// |value - rounded|.
    pub residual: f64,
    /// Attached warning (Dirac-condition violation, sweep notes).
    pub note: Option<String>,
}

impl ChernResult {
    fn new(value: f64, route: ChernRoute, grid: (usize, usize)) -> Self {
        let rounded = value.round() as i64;
        Self {
            value,
            rounded,
            route,
            grid,
            residual: (value - rounded as f64).abs(),
            note: None,
        }
    }
}

/// Discrete Wilson-loop Berry phase `-arg Π_k ⟨ψ(φ_k)|ψ(φ_{k+1})⟩` around the
/// constant-θ circle, in (-π, π]. Gauge-invariant.
pub fn berry_phase_loop(map: &StateMap, theta: f64, n_phi: usize) -> Result<f64> {
    if theta.sin() <= 1e-6 {
        return Err(Error::InvalidInput(format!(
            "loop at theta = {theta} is too close to a pole"
        )));
    }
    if n_phi < 16 {
        return Err(Error::InvalidInput(format!(
            "berry_phase_loop needs n_phi >= 16, got {n_phi}"
        )));
    }
    let d_phi = std::f64::consts::TAU / n_phi as f64;
    let states: Vec<State2> = (0..n_phi)
        .map(|k| map.state(theta, k as f64 * d_phi))
        .collect::<Result<Vec<_>>>()
        .map_err(|_| Error::DegenerateOnLoop)?;
    let mut product = C64::new(1.0, 0.0);
    for k in 0..n_phi {
        product *= states[k].inner(&states[(k + 1) % n_phi]);
    }
    Ok(-product.arg())
}

fn row_loop_phase(row: &[State2]) -> f64 {
    let n = row.len();
    let mut product = C64::new(1.0, 0.0);
    for k in 0..n {
        product *= row[k].inner(&row[(k + 1) % n]);
    }
    -product.arg()
}

/// Field-strength-from-link-variables Chern sum over an open θ grid (cell
/// centers) with the pole caps closed by the principal Wilson-loop phases of
/// the first and last rows. The assembled total is 2π times an integer by
/// construction; each plaquette and cap must carry less than half a flux
/// quantum, which the contract grids guarantee away from the transition.
pub fn chern_plaquette_states<F>(state_at: F, grid: (usize, usize)) -> Result<ChernResult>
where
    F: Fn(f64, f64) -> Result<State2> + Sync,
{
    let (n_theta, n_phi) = grid;
    if n_theta < 24 || n_phi < 24 {
        return Err(Error::InvalidInput(format!(
            "plaquette grid must be at least 24x24, got {n_theta}x{n_phi}"
        )));
    }
    let d_theta = std::f64::consts::PI / n_theta as f64;
    let d_phi = std::f64::consts::TAU / n_phi as f64;

    let rows: Vec<Vec<State2>> = (0..n_theta)
        .into_par_iter()
        .map(|j| {
            let theta = (j as f64 + 0.5) * d_theta;
            (0..n_phi)
                .map(|k| state_at(theta, k as f64 * d_phi))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    // plaquette loop (+θ, +φ, -θ, -φ); F = -arg of the link product
    let plaquette_phases: Vec<f64> = (0..n_theta - 1)
        .into_par_iter()
        .flat_map_iter(|j| {
            let lower = &rows[j];
            let upper = &rows[j + 1];
            (0..n_phi).map(move |k| {
                let k1 = (k + 1) % n_phi;
                let u = lower[k].inner(&upper[k])
                    * upper[k].inner(&upper[k1])
                    * upper[k1].inner(&lower[k1])
                    * lower[k1].inner(&lower[k]);
                -u.arg()
            })
        })
        .collect();

    let cap_north = row_loop_phase(&rows[0]);
    let cap_south = -row_loop_phase(&rows[n_theta - 1]);
    let total = cap_north + pairwise_sum(&plaquette_phases) + cap_south;
    Ok(ChernResult::new(
        total / std::f64::consts::TAU,
        ChernRoute::Plaquette,
        grid,
    ))
}

fn check_transition_boundary(params: &DriveParams) -> Result<()> {
    if params.delta2.abs() == params.delta1.abs() {
        return Err(Error::BoundaryDegeneracy {
            ratio: params.detuning_ratio(),
        });
    }
    Ok(())
}

/// Plaquette Chern number of a band, with states taken from the numerical
/// eigensolver (arbitrary per-point phases; the link products do not care).
pub fn chern_plaquette(params: &DriveParams, band: Band, grid: (usize, usize)) -> Result<ChernResult> {
    check_transition_boundary(params)?;
    chern_plaquette_states(
        |theta, phi| {
            let point = SpherePoint::wrapped(theta, phi)?;
            let es = eigensystem(&build_hamiltonian(params, &point))?;
            Ok(es.band_state(band))
        },
        grid,
    )
}

/// Plaquette Chern number of an arbitrary state map (used to inject gauge
/// twists and to close loops over analytic sections).
pub fn chern_plaquette_map(map: &StateMap, grid: (usize, usize)) -> Result<ChernResult> {
    chern_plaquette_states(|theta, phi| map.state(theta, phi), grid)
}

/// Midpoint quadrature of the spectral Berry curvature over the open
/// (θ, φ) grid: `C₁ = (1/2π) ΣF_θφ ΔθΔφ`.
pub fn chern_spectral_quadrature(
    params: &DriveParams,
    band: Band,
    grid: (usize, usize),
) -> Result<ChernResult> {
    check_transition_boundary(params)?;
    let (n_theta, n_phi) = grid;
    if n_theta < 24 || n_phi < 24 {
        return Err(Error::InvalidInput(format!(
            "quadrature grid must be at least 24x24, got {n_theta}x{n_phi}"
        )));
    }
    let d_theta = std::f64::consts::PI / n_theta as f64;
    let d_phi = std::f64::consts::TAU / n_phi as f64;
    let cell_terms: Vec<f64> = (0..n_theta)
        .into_par_iter()
        .map(|j| -> Result<f64> {
            let theta = (j as f64 + 0.5) * d_theta;
            let row: Vec<f64> = (0..n_phi)
                .map(|k| {
                    let phi = (k as f64 + 0.5) * d_phi;
                    berry_curvature_spectral(params, &SpherePoint::new(theta, phi)?, band)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(pairwise_sum(&row) * d_theta * d_phi)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ChernResult::new(
        pairwise_sum(&cell_terms) / std::f64::consts::TAU,
        ChernRoute::SpectralQuadrature,
        grid,
    ))
}

/// Two-patch Chern number `(1/2π) ∮_{equator} (A_N - A_S) · dl = 2g`,
/// quadrature of the patch-potential difference along the equatorial circle
/// of radius `r`. Warns (but still computes) when 2g is not an integer.
pub fn wu_yang_chern(g_charge: f64, r: f64, n_phi: usize) -> Result<ChernResult> {
    if r <= 0.0 {
        return Err(Error::InvalidInput(format!("radius must be positive, got {r}")));
    }
    if n_phi < 16 {
        return Err(Error::InvalidInput(format!(
            "wu_yang_chern needs n_phi >= 16, got {n_phi}"
        )));
    }
    let cfg = MonopoleConfig { g_charge };
    let equator = std::f64::consts::FRAC_PI_2;
    let d_phi = std::f64::consts::TAU / n_phi as f64;
    let terms: Vec<f64> = (0..n_phi)
        .map(|k| -> Result<f64> {
            let phi = (k as f64 + 0.5) * d_phi;
            let p = SpacePoint::new(r, equator, phi)?;
            let a_n = vector_potential(&cfg, &p, Patch::North)?;
            let a_s = vector_potential(&cfg, &p, Patch::South)?;
            Ok((a_n - a_s) * r * d_phi)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut result = ChernResult::new(
        pairwise_sum(&terms) / std::f64::consts::TAU,
        ChernRoute::TwoPatch,
        (1, n_phi),
    );
    let doubled = 2.0 * g_charge;
    if (doubled - doubled.round()).abs() > 1e-9 {
        result.note = Some(format!(
            "Dirac condition violated: 2g = {doubled} is not an integer"
        ));
    }
    Ok(result)
}

/// Chern number read off the winding of the two-patch transition function
/// `Γ_NS = e^{inφ}` around the equator.
pub fn chern_from_transition_winding(n: i32, n_phi: usize) -> Result<ChernResult> {
    if n_phi <= 2 * n.unsigned_abs() as usize {
        return Err(Error::InvalidInput(format!(
            "need n_phi > 2|n| to resolve winding {n}, got {n_phi}"
        )));
    }
    let d_phi = std::f64::consts::TAU / n_phi as f64;
    let gamma = |phi: f64| C64::from_polar(1.0, n as f64 * phi);
    let terms: Vec<f64> = (0..n_phi)
        .map(|k| {
            let z0 = gamma(k as f64 * d_phi);
            let z1 = gamma((k + 1) as f64 * d_phi);
            (z1 * z0.conj()).arg()
        })
        .collect();
    Ok(ChernResult::new(
        pairwise_sum(&terms) / std::f64::consts::TAU,
        ChernRoute::TwoPatch,
        (1, n_phi),
    ))
}

/// One point of a transition sweep; `chern` is NaN when the computation at
/// that detuning failed, with the reason in `note`.
#[derive(Clone, Debug)]
pub struct TransitionPoint {
    pub ratio: f64,
    pub chern: f64,
    pub note: Option<String>,
}

/// Chern number against `Δ₂/Δ₁`, per band and route.
#[derive(Clone, Debug)]
pub struct TransitionCurve {
    pub band: Band,
    pub route: ChernRoute,
    pub points: Vec<TransitionPoint>,
}

/// Controls for the per-point computation of a transition sweep.
#[derive(Clone, Copy, Debug)]
pub struct SweepSettings {
    pub grid: (usize, usize),
    pub t_ramp: f64,
    pub dt: Option<f64>,
}

impl Default for SweepSettings {
    fn default() -> Self {
        Self {
            grid: (48, 48),
            t_ramp: 1.0,
            dt: None,
        }
    }
}

/// Sweep the detuning ratio Δ₂/Δ₁ and record the Chern number per point.
/// Points are computed concurrently and reported sorted by ratio; failures
/// become NaN entries with a note.
pub fn transition_sweep(
    template: &DriveParams,
    ratios: &[f64],
    band: Band,
    route: ChernRoute,
    settings: &SweepSettings,
) -> Result<TransitionCurve> {
    if ratios.is_empty() {
        return Err(Error::InvalidInput("transition sweep needs at least one point".into()));
    }
    if route == ChernRoute::TwoPatch {
        return Err(Error::InvalidInput(
            "two_patch route does not depend on the drive and cannot sweep it".into(),
        ));
    }
    let mut sorted: Vec<f64> = ratios.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let points: Vec<TransitionPoint> = sorted
        .par_iter()
        .map(|&ratio| {
            let point = DriveParams::new(template.delta1, ratio * template.delta1, template.omega_n)
                .and_then(|params| match route {
                    ChernRoute::Plaquette => chern_plaquette(&params, band, settings.grid),
                    ChernRoute::SpectralQuadrature => {
                        chern_spectral_quadrature(&params, band, settings.grid)
                    }
                    ChernRoute::Dynamical => {
                        let mut protocol = RampProtocol::new(params, settings.t_ramp, band)?;
                        if let Some(dt) = settings.dt {
                            protocol = protocol.with_dt(dt)?;
                        }
                        dynamical_chern(&protocol)
                    }
                    ChernRoute::TwoPatch => unreachable!(),
                });
            match point {
                Ok(c) => TransitionPoint {
                    ratio,
                    chern: c.value,
                    note: c.note,
                },
                Err(e) => TransitionPoint {
                    ratio,
                    chern: f64::NAN,
                    note: Some(e.to_string()),
                },
            }
        })
        .collect();

    Ok(TransitionCurve {
        band,
        route,
        points,
    })
}

//! Resolved run configurations and the deterministic dispatcher behind the
//! command-line front end. Identical configurations produce byte-identical
//! output tables.

use rayon::prelude::*;

use crate::dynamics::{
    dynamical_chern, evolve, extract_curvature, fidelity_cut_theta_pi, fidelity_map,
    FidelityControls, FidelityTarget, RampProtocol, ShotNoise,
};
use crate::error::Error;
use crate::geometry::{
    berry_curvature_qgt, berry_curvature_spectral, gauss_bonnet_check, qgt_finite_difference,
    StateMap, STATE_STEP,
};
use crate::monopole::{monopole_flux, MonopoleConfig};
use crate::numeric::linspace;
use crate::qubit::{Band, DriveParams, SpherePoint};
use crate::sweep::{format_float, Cell, OutputFormat, SweepResult};
use crate::topology::{
    chern_from_transition_winding, chern_plaquette, chern_spectral_quadrature, transition_sweep,
    wu_yang_chern, ChernResult, ChernRoute, SweepSettings,
};
use crate::Result;

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Inclusive linear sweep specification `start:stop:count`.
#[derive(Clone, Copy, Debug)]
pub struct SweepSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl SweepSpec {
    pub fn values(&self) -> Result<Vec<f64>> {
        if self.count < 1 {
            return Err(Error::InvalidInput("sweep count must be >= 1".into()));
        }
        Ok(linspace(self.start, self.stop, self.count))
    }
}

impl std::str::FromStr for SweepSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidInput(format!(
                "sweep spec must be START:STOP:COUNT, got '{s}'"
            )));
        }
        let bad = |what: &str| Error::InvalidInput(format!("bad {what} in sweep spec '{s}'"));
        Ok(SweepSpec {
            start: parts[0].parse().map_err(|_| bad("start"))?,
            stop: parts[1].parse().map_err(|_| bad("stop"))?,
            count: parts[2].parse().map_err(|_| bad("count"))?,
        })
    }
}

/// The work a single invocation performs.
#[derive(Clone, Debug)]
pub enum RunCommand {
    /// Berry curvature over the parameter sphere, both routes.
    Curvature {
        params: DriveParams,
        band: Band,
        grid: (usize, usize),
    },
    /// One Chern number by the requested route.
    Chern {
        params: DriveParams,
        band: Band,
        route: ChernRoute,
        grid: (usize, usize),
        g_charge: f64,
        radius: f64,
        winding: Option<i32>,
        t_ramp: f64,
        dt: Option<f64>,
    },
    /// Chern number against Δ₂/Δ₁.
    Transition {
        params: DriveParams,
        band: Band,
        route: ChernRoute,
        sweep: SweepSpec,
        grid: (usize, usize),
        t_ramp: f64,
        dt: Option<f64>,
    },
    /// One ramp: recorded ⟨σ̂_y⟩ and extracted curvature.
    Quench {
        params: DriveParams,
        band: Band,
        t_ramp: f64,
        dt: Option<f64>,
        samples: usize,
        shots: Option<u64>,
        seed: u64,
    },
    /// Fidelity map over (θ_meas, Δ₂/Δ₁), or the θ = π cut families.
    Fidelity {
        params: DriveParams,
        band: Band,
        sweep: SweepSpec,
        theta_count: usize,
        t_ramp: f64,
        dt: Option<f64>,
        target: FidelityTarget,
        cut: bool,
    },
    /// Gauss-Bonnet assembly on the sphere section.
    Geometry {
        theta_cap_over_pi: f64,
        grid: (usize, usize),
    },
    /// Monopole flux and two-patch Chern number per radius.
    Monopole {
        g_charge: f64,
        radii: Vec<f64>,
        grid: (usize, usize),
    },
}

impl RunCommand {
    pub fn label(&self) -> &'static str {
        match self {
            RunCommand::Curvature { .. } => "curvature",
            RunCommand::Chern { .. } => "chern",
            RunCommand::Transition { .. } => "transition",
            RunCommand::Quench { .. } => "quench",
            RunCommand::Fidelity { .. } => "fidelity",
            RunCommand::Geometry { .. } => "geometry",
            RunCommand::Monopole { .. } => "monopole",
        }
    }
}

/// A fully resolved invocation.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: RunCommand,
    pub out: Option<std::path::PathBuf>,
    pub format: OutputFormat,
}

fn meta_params(result: &mut SweepResult, params: &DriveParams) {
    result.push_meta("delta1_rad_per_us", format_float(params.delta1));
    result.push_meta("delta2_rad_per_us", format_float(params.delta2));
    result.push_meta("omega_n_rad_per_us", format_float(params.omega_n));
}

fn meta_common(result: &mut SweepResult, command: &RunCommand) {
    result.push_meta("command", command.label());
    result.push_meta("engine_version", ENGINE_VERSION);
}

fn chern_row(result: &mut SweepResult, c: &ChernResult, band_label: &str) {
    result.push_row(vec![
        Cell::Text(c.route.label().to_string()),
        Cell::Text(band_label.to_string()),
        Cell::Float(c.value),
        Cell::Int(c.rounded),
        Cell::Float(c.residual),
    ]);
    if let Some(note) = &c.note {
        result.push_note(note.clone());
    }
}

/// Sweep ratios with exact transition points |Δ₂/Δ₁| = 1 nudged outward by
/// 1e-6; each nudge leaves a note.
fn nudged_ratios(spec: &SweepSpec, notes: &mut Vec<String>) -> Result<Vec<f64>> {
    let mut values = spec.values()?;
    for v in values.iter_mut() {
        if (v.abs() - 1.0).abs() < 1e-12 {
            let nudged = v.signum() * (1.0 + 1e-6);
            notes.push(format!(
                "sweep point {v} sits on the transition; nudged to {nudged}"
            ));
            *v = nudged;
        }
    }
    Ok(values)
}

/// Execute a resolved configuration. Deterministic: identical configs yield
/// identical tables on the same build.
pub fn run(config: &RunConfig) -> Result<SweepResult> {
    let mut result = match &config.command {
        RunCommand::Curvature { params, band, grid } => run_curvature(params, *band, *grid)?,
        RunCommand::Chern {
            params,
            band,
            route,
            grid,
            g_charge,
            radius,
            winding,
            t_ramp,
            dt,
        } => run_chern(params, *band, *route, *grid, *g_charge, *radius, *winding, *t_ramp, *dt)?,
        RunCommand::Transition {
            params,
            band,
            route,
            sweep,
            grid,
            t_ramp,
            dt,
        } => run_transition(params, *band, *route, sweep, *grid, *t_ramp, *dt)?,
        RunCommand::Quench {
            params,
            band,
            t_ramp,
            dt,
            samples,
            shots,
            seed,
        } => run_quench(params, *band, *t_ramp, *dt, *samples, *shots, *seed)?,
        RunCommand::Fidelity {
            params,
            band,
            sweep,
            theta_count,
            t_ramp,
            dt,
            target,
            cut,
        } => run_fidelity(params, *band, sweep, *theta_count, *t_ramp, *dt, *target, *cut)?,
        RunCommand::Geometry {
            theta_cap_over_pi,
            grid,
        } => run_geometry(*theta_cap_over_pi, *grid)?,
        RunCommand::Monopole {
            g_charge,
            radii,
            grid,
        } => run_monopole(*g_charge, radii, *grid)?,
    };
    let mut meta = SweepResult::new(result.columns.clone());
    meta_common(&mut meta, &config.command);
    meta.metadata.append(&mut result.metadata);
    meta.rows = std::mem::take(&mut result.rows);
    meta.notes = std::mem::take(&mut result.notes);
    Ok(meta)
}

fn run_curvature(params: &DriveParams, band: Band, grid: (usize, usize)) -> Result<SweepResult> {
    let (n_theta, n_phi) = grid;
    if n_theta < 8 || n_phi < 8 {
        return Err(Error::InvalidInput("curvature grid must be at least 8x8".into()));
    }
    let mut result = SweepResult::new(
        ["theta", "phi", "f_spectral", "f_qgt"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
    );
    meta_params(&mut result, params);
    result.push_meta("band", band.label());
    result.push_meta("grid", format!("{n_theta}x{n_phi}"));
    let d_theta = std::f64::consts::PI / n_theta as f64;
    let d_phi = std::f64::consts::TAU / n_phi as f64;
    let map = StateMap::band(band, *params);
    let rows: Vec<Vec<Cell>> = (0..n_theta)
        .into_par_iter()
        .map(|j| -> Result<Vec<Vec<Cell>>> {
            let theta = (j as f64 + 0.5) * d_theta;
            (0..n_phi)
                .map(|k| {
                    let phi = (k as f64 + 0.5) * d_phi;
                    let point = SpherePoint::new(theta, phi)?;
                    let f_spec = berry_curvature_spectral(params, &point, band)?;
                    let f_qgt =
                        berry_curvature_qgt(&qgt_finite_difference(&map, &point, STATE_STEP)?);
                    Ok(vec![
                        Cell::Float(theta),
                        Cell::Float(phi),
                        Cell::Float(f_spec),
                        Cell::Float(f_qgt),
                    ])
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    result.rows = rows;
    Ok(result)
}

#[allow(clippy::too_many_arguments)]
fn run_chern(
    params: &DriveParams,
    band: Band,
    route: ChernRoute,
    grid: (usize, usize),
    g_charge: f64,
    radius: f64,
    winding: Option<i32>,
    t_ramp: f64,
    dt: Option<f64>,
) -> Result<SweepResult> {
    let mut result = SweepResult::new(
        ["route", "band", "value", "rounded", "residual"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
    );
    meta_params(&mut result, params);
    result.push_meta("grid", format!("{}x{}", grid.0, grid.1));
    let c = match route {
        ChernRoute::Plaquette => chern_plaquette(params, band, grid)?,
        ChernRoute::SpectralQuadrature => chern_spectral_quadrature(params, band, grid)?,
        ChernRoute::Dynamical => {
            let mut protocol = RampProtocol::new(*params, t_ramp, band)?;
            if let Some(dt) = dt {
                protocol = protocol.with_dt(dt)?;
            }
            result.push_meta("t_ramp_us", format_float(t_ramp));
            result.push_meta("dt_us", format_float(protocol.dt));
            dynamical_chern(&protocol)?
        }
        ChernRoute::TwoPatch => {
            result.push_meta("g_charge", format_float(g_charge));
            result.push_meta("radius", format_float(radius));
            match winding {
                Some(n) => {
                    result.push_meta("transition_winding", n.to_string());
                    chern_from_transition_winding(n, grid.1.max(16))?
                }
                None => wu_yang_chern(g_charge, radius, grid.1.max(16))?,
            }
        }
    };
    chern_row(&mut result, &c, band.label());
    Ok(result)
}

fn run_transition(
    params: &DriveParams,
    band: Band,
    route: ChernRoute,
    sweep: &SweepSpec,
    grid: (usize, usize),
    t_ramp: f64,
    dt: Option<f64>,
) -> Result<SweepResult> {
    let mut notes = Vec::new();
    let ratios = nudged_ratios(sweep, &mut notes)?;
    let settings = SweepSettings { grid, t_ramp, dt };
    let curve = transition_sweep(params, &ratios, band, route, &settings)?;
    let mut result = SweepResult::new(vec![
        "delta2_over_delta1".to_string(),
        format!("chern_{}", band.label()),
    ]);
    meta_params(&mut result, params);
    result.push_meta("band", band.label());
    result.push_meta("route", route.label());
    result.push_meta("grid", format!("{}x{}", grid.0, grid.1));
    if route == ChernRoute::Dynamical {
        result.push_meta("t_ramp_us", format_float(t_ramp));
    }
    result.notes = notes;
    for p in &curve.points {
        result.push_row(vec![Cell::Float(p.ratio), Cell::Float(p.chern)]);
        if let Some(note) = &p.note {
            result.push_note(format!("ratio {}: {}", p.ratio, note));
        }
    }
    Ok(result)
}

fn run_quench(
    params: &DriveParams,
    band: Band,
    t_ramp: f64,
    dt: Option<f64>,
    samples: usize,
    shots: Option<u64>,
    seed: u64,
) -> Result<SweepResult> {
    if samples < 2 {
        return Err(Error::InvalidInput("quench needs at least 2 samples".into()));
    }
    let mut protocol = RampProtocol::new(*params, t_ramp, band)?;
    if let Some(dt) = dt {
        protocol = protocol.with_dt(dt)?;
    }
    if let Some(shots) = shots {
        protocol = protocol.with_shot_noise(ShotNoise { shots, seed });
    }
    let traj = evolve(&protocol)?;
    let quench = extract_curvature(&traj, &protocol)?;
    let mut result = SweepResult::new(
        ["t_us", "theta", "sigma_y", "f_theta_phi"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
    );
    meta_params(&mut result, params);
    result.push_meta("band", band.label());
    result.push_meta("t_ramp_us", format_float(t_ramp));
    result.push_meta("dt_us", format_float(protocol.dt));
    result.push_meta("quench_velocity", format_float(quench.quench_velocity));
    if let Some(shots) = shots {
        result.push_meta("shots", shots.to_string());
        result.push_meta("seed", seed.to_string());
    }
    let n = traj.len();
    for s in 0..samples {
        let i = (s * (n - 1)) / (samples - 1);
        result.push_row(vec![
            Cell::Float(traj.times[i]),
            Cell::Float(traj.theta_values[i]),
            Cell::Float(traj.sigma_y_expect[i]),
            Cell::Float(quench.f_theta_phi[i]),
        ]);
    }
    Ok(result)
}

#[allow(clippy::too_many_arguments)]
fn run_fidelity(
    params: &DriveParams,
    band: Band,
    sweep: &SweepSpec,
    theta_count: usize,
    t_ramp: f64,
    dt: Option<f64>,
    target: FidelityTarget,
    cut: bool,
) -> Result<SweepResult> {
    let mut notes = Vec::new();
    let ratios = nudged_ratios(sweep, &mut notes)?;
    let controls = FidelityControls {
        t_ramp,
        dt,
        initial_band: band,
    };
    let mut result = if cut {
        fidelity_cut_theta_pi(params, &ratios, &controls)?
    } else {
        if theta_count < 1 {
            return Err(Error::InvalidInput("fidelity needs theta_count >= 1".into()));
        }
        let thetas = linspace(0.0, std::f64::consts::PI, theta_count.max(2));
        fidelity_map(params, &ratios, &thetas, &controls, target)?
    };
    for note in notes {
        result.push_note(note);
    }
    let mut head = SweepResult::new(result.columns.clone());
    meta_params(&mut head, params);
    head.push_meta("initial_band", band.label());
    head.push_meta("t_ramp_us", format_float(t_ramp));
    head.push_meta("mode", if cut { "cut_theta_pi" } else { "map" });
    if !cut {
        head.push_meta("target", target.label());
    }
    head.metadata.append(&mut result.metadata);
    head.rows = std::mem::take(&mut result.rows);
    head.notes = std::mem::take(&mut result.notes);
    Ok(head)
}

fn run_geometry(theta_cap_over_pi: f64, grid: (usize, usize)) -> Result<SweepResult> {
    let theta_cap = theta_cap_over_pi * std::f64::consts::PI;
    let check = gauss_bonnet_check(&StateMap::SphereSection, theta_cap, grid)?;
    let mut result = SweepResult::new(
        ["theta_cap", "bulk", "boundary", "euler_estimate"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
    );
    result.push_meta("map", "sphere_section");
    result.push_meta("grid", format!("{}x{}", grid.0, grid.1));
    result.push_row(vec![
        Cell::Float(theta_cap),
        Cell::Float(check.bulk),
        Cell::Float(check.boundary),
        Cell::Float(check.euler_estimate),
    ]);
    Ok(result)
}

fn run_monopole(g_charge: f64, radii: &[f64], grid: (usize, usize)) -> Result<SweepResult> {
    if radii.is_empty() {
        return Err(Error::InvalidInput("monopole needs at least one radius".into()));
    }
    let cfg = MonopoleConfig { g_charge };
    let mut result = SweepResult::new(
        ["g", "r", "flux", "chern_two_patch"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
    );
    result.push_meta("g_charge", format_float(g_charge));
    result.push_meta("grid", format!("{}x{}", grid.0, grid.1));
    let mut radii = radii.to_vec();
    radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for r in radii {
        let flux = monopole_flux(&cfg, r, grid)?;
        let chern = wu_yang_chern(g_charge, r, grid.1.max(16))?;
        result.push_row(vec![
            Cell::Float(g_charge),
            Cell::Float(r),
            Cell::Float(flux),
            Cell::Float(chern.value),
        ]);
        if let Some(note) = chern.note {
            result.push_note(note);
        }
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ellipsoid() -> DriveParams {
        DriveParams::from_mhz(30.0, 0.0, 10.0).unwrap()
    }

    #[test]
    fn sweep_spec_parses() {
        let s: SweepSpec = "-2:2:41".parse().unwrap();
        assert_eq!(s.count, 41);
        let v = s.values().unwrap();
        assert_eq!(v.len(), 41);
        assert!((v[0] + 2.0).abs() < 1e-15 && (v[40] - 2.0).abs() < 1e-15);
        assert!("1:2".parse::<SweepSpec>().is_err());
    }

    #[test]
    fn transition_run_nudges_exact_boundary_points() {
        let config = RunConfig {
            command: RunCommand::Transition {
                params: ellipsoid(),
                band: Band::Ground,
                route: ChernRoute::Plaquette,
                sweep: SweepSpec {
                    start: -2.0,
                    stop: 2.0,
                    count: 41,
                },
                grid: (24, 24),
                t_ramp: 1.0,
                dt: None,
            },
            out: None,
            format: OutputFormat::Csv,
        };
        let result = run(&config).unwrap();
        assert_eq!(result.rows.len(), 41);
        assert_eq!(result.notes.len(), 2); // ±1 both nudged
        for row in &result.rows {
            if let Cell::Float(v) = row[1] {
                assert!(!v.is_nan());
            }
        }
    }

    fn two_patch_command(winding: Option<i32>) -> RunConfig {
        RunConfig {
            command: RunCommand::Chern {
                params: ellipsoid(),
                band: Band::Ground,
                route: ChernRoute::TwoPatch,
                grid: (1, 64),
                g_charge: 0.5,
                radius: 1.0,
                winding,
                t_ramp: 1.0,
                dt: None,
            },
            out: None,
            format: OutputFormat::Csv,
        }
    }

    #[test]
    fn chern_run_two_patch_and_winding() {
        let r = run(&two_patch_command(None)).unwrap();
        assert!((r.float_at(0, 2) - 1.0).abs() < 1e-12);
        let r = run(&two_patch_command(Some(3))).unwrap();
        assert_eq!(r.float_at(0, 2).round() as i64, 3);
    }

    #[test]
    fn geometry_run_reports_euler_two() {
        let config = RunConfig {
            command: RunCommand::Geometry {
                theta_cap_over_pi: 1.0,
                grid: (128, 128),
            },
            out: None,
            format: OutputFormat::Csv,
        };
        let result = run(&config).unwrap();
        assert!((result.float_at(0, 3) - 2.0).abs() < 1e-4);
    }

    #[test]
    fn runs_are_byte_identical() {
        let config = RunConfig {
            command: RunCommand::Quench {
                params: ellipsoid(),
                band: Band::Ground,
                t_ramp: 1.0,
                dt: None,
                samples: 101,
                shots: Some(500),
                seed: 42,
            },
            out: None,
            format: OutputFormat::Csv,
        };
        let a = run(&config).unwrap().to_csv_string();
        let b = run(&config).unwrap().to_csv_string();
        assert_eq!(a, b);
        assert!(a.contains("t_us,theta,sigma_y,f_theta_phi"));
    }
}

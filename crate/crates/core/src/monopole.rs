//! Real-space monopole fields: the radial field of a point charge, its flux,
//! the two-patch vector potentials that avoid the string singularity, and the
//! rotating synthetic-field Hamiltonian that maps the construction onto the
//! driven qubit.

use rayon::prelude::*;

use crate::error::Error;
use crate::numeric::pairwise_sum;
use crate::qubit::Hermitian2;
use crate::Result;

/// Angular distance from a patch's string axis below which evaluation refuses.
pub const STRING_GUARD: f64 = 1e-6;

/// Point in spherical coordinates, r > 0.
#[derive(Clone, Copy, Debug)]
pub struct SpacePoint {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

impl SpacePoint {
    pub fn new(r: f64, theta: f64, phi: f64) -> Result<Self> {
        if r.is_nan() || r <= 0.0 {
            return Err(Error::InvalidInput(format!("r must be positive, got {r}")));
        }
        Ok(Self { r, theta, phi })
    }
}

/// Magnetic charge of the monopole; g = ±1/2 for the band analogues.
#[derive(Clone, Copy, Debug)]
pub struct MonopoleConfig {
    pub g_charge: f64,
}

/// Hemisphere patches of the two-potential construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Patch {
    /// Regular everywhere except the south pole (string at θ = π).
    North,
    /// Regular everywhere except the north pole (string at θ = 0).
    South,
}

/// Field vector in spherical components.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldVector {
    pub b_r: f64,
    pub b_theta: f64,
    pub b_phi: f64,
}

/// Radial monopole field `B = g r̂ / r²`.
pub fn dirac_field(cfg: &MonopoleConfig, p: &SpacePoint) -> Result<FieldVector> {
    if p.r <= 1e-9 {
        return Err(Error::OriginSingularity);
    }
    Ok(FieldVector {
        b_r: cfg.g_charge / (p.r * p.r),
        b_theta: 0.0,
        b_phi: 0.0,
    })
}

/// Flux of the monopole field through the sphere of radius `r` by midpoint
/// quadrature on equal-area cells (uniform in cosθ and φ); equals `4πg`
/// independent of the radius.
pub fn monopole_flux(cfg: &MonopoleConfig, r: f64, grid: (usize, usize)) -> Result<f64> {
    if r.is_nan() || r <= 0.0 {
        return Err(Error::InvalidInput(format!("r must be positive, got {r}")));
    }
    let (n_theta, n_phi) = grid;
    if n_theta < 32 || n_phi < 32 {
        return Err(Error::InvalidInput(format!(
            "flux quadrature needs a grid of at least 32x32, got {n_theta}x{n_phi}"
        )));
    }
    let du = 2.0 / n_theta as f64;
    let d_phi = std::f64::consts::TAU / n_phi as f64;
    let rows: Vec<f64> = (0..n_theta)
        .into_par_iter()
        .map(|j| -> Result<f64> {
            let u = -1.0 + (j as f64 + 0.5) * du;
            let theta = u.acos();
            let cells: Vec<f64> = (0..n_phi)
                .map(|k| {
                    let phi = (k as f64 + 0.5) * d_phi;
                    let b = dirac_field(cfg, &SpacePoint::new(r, theta, phi)?)?;
                    Ok(b.b_r * r * r * du * d_phi)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(pairwise_sum(&cells))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(pairwise_sum(&rows))
}

/// Azimuthal component of the patch potential:
/// `A_φ = g(1 - cosθ)/(r sinθ)` on the northern patch and
/// `A_φ = -g(1 + cosθ)/(r sinθ)` on the southern one. Each is finite at its
/// own pole; evaluation on the excluded axis fails.
pub fn vector_potential(cfg: &MonopoleConfig, p: &SpacePoint, patch: Patch) -> Result<f64> {
    let pi = std::f64::consts::PI;
    match patch {
        Patch::North => {
            if p.theta >= pi - STRING_GUARD {
                return Err(Error::StringSingularity { theta: p.theta });
            }
            // (1 - cosθ)/sinθ = tan(θ/2)
            Ok(cfg.g_charge * (0.5 * p.theta).tan() / p.r)
        }
        Patch::South => {
            if p.theta <= STRING_GUARD {
                return Err(Error::StringSingularity { theta: p.theta });
            }
            // (1 + cosθ)/sinθ = cot(θ/2)
            Ok(-cfg.g_charge / ((0.5 * p.theta).tan() * p.r))
        }
    }
}

/// Finite-difference spherical curl of the patch potential
/// (`A_r = A_θ = 0`, axisymmetric):
/// `B_r = ∂_θ(sinθ A_φ)/(r sinθ)`, `B_θ = -∂_r(r A_φ)/r`, `B_φ = 0`.
/// Matches the radial monopole field to O(h²) on the patch's regular domain.
pub fn curl_check(cfg: &MonopoleConfig, p: &SpacePoint, patch: Patch, h: f64) -> Result<FieldVector> {
    let axis_distance = match patch {
        Patch::North => std::f64::consts::PI - p.theta,
        Patch::South => p.theta,
    };
    if axis_distance <= 10.0 * h {
        return Err(Error::StringSingularity { theta: p.theta });
    }
    if p.r <= h {
        return Err(Error::OriginSingularity);
    }
    let a = |r: f64, theta: f64| -> Result<f64> {
        vector_potential(cfg, &SpacePoint::new(r, theta, p.phi)?, patch)
    };
    let half = 0.5 / h;
    let b_r = ((p.theta + h).sin() * a(p.r, p.theta + h)?
        - (p.theta - h).sin() * a(p.r, p.theta - h)?)
        * half
        / (p.r * p.theta.sin());
    let b_theta =
        -((p.r + h) * a(p.r + h, p.theta)? - (p.r - h) * a(p.r - h, p.theta)?) * half / p.r;
    Ok(FieldVector {
        b_r,
        b_theta,
        b_phi: 0.0,
    })
}

/// Finite-difference divergence of the monopole field away from the origin,
/// `(1/r²) ∂_r(r² B_r)`; vanishes identically off the charge.
pub fn divergence_check(cfg: &MonopoleConfig, p: &SpacePoint, h: f64) -> Result<f64> {
    if p.r - h <= 1e-9 {
        return Err(Error::OriginSingularity);
    }
    let radial = |r: f64| -> Result<f64> {
        let b = dirac_field(cfg, &SpacePoint::new(r, p.theta, p.phi)?)?;
        Ok(r * r * b.b_r)
    };
    Ok((radial(p.r + h)? - radial(p.r - h)?) / (2.0 * h) / (p.r * p.r))
}

/// Rotating synthetic-field configuration: horizontal magnitude `B₁ sinθ_d`,
/// vertical `B₁ cosθ_d + B₂`, drive phase `φ = ω₀ t`, magneton scale `m_b`.
#[derive(Clone, Copy, Debug)]
pub struct SyntheticFieldConfig {
    pub b1: f64,
    pub b2: f64,
    pub theta_drive: f64,
    pub omega0: f64,
    pub m_b: f64,
}

impl SyntheticFieldConfig {
    pub fn new(b1: f64, b2: f64, theta_drive: f64, omega0: f64) -> Result<Self> {
        if b1.is_nan() || b1 < 0.0 {
            return Err(Error::InvalidInput(format!("b1 must be >= 0, got {b1}")));
        }
        Ok(Self {
            b1,
            b2,
            theta_drive,
            omega0,
            m_b: 1.0,
        })
    }

    pub fn with_magneton(mut self, m_b: f64) -> Self {
        self.m_b = m_b;
        self
    }
}

/// Rotating-field Hamiltonian
/// `H = M_b [B_x cosφ σx + B_y sinφ σy + B_z σz]` with
/// `B_x = B_y = B₁ sinθ_d`, `B_z = B₁ cosθ_d + B₂`, `φ = ω₀ t`.
/// Identical to the drive family under Δ₁ = 2M_bB₁, Δ₂ = 2M_bB₂,
/// Ωₙ = 2M_bB₁ at the point (θ_d, ω₀t).
pub fn synthetic_hamiltonian(cfg: &SyntheticFieldConfig, t: f64) -> Hermitian2 {
    let phi = cfg.omega0 * t;
    let horizontal = cfg.b1 * cfg.theta_drive.sin();
    let vertical = cfg.b1 * cfg.theta_drive.cos() + cfg.b2;
    Hermitian2::from_pauli(
        cfg.m_b * horizontal * phi.cos(),
        cfg.m_b * horizontal * phi.sin(),
        cfg.m_b * vertical,
        0.0,
    )
}

/// The same Hamiltonian with the misprinted couplings sometimes quoted for
/// this construction (cosφ on both transverse axes and a doubled magneton on
/// the longitudinal term); kept for comparison only.
pub fn synthetic_hamiltonian_as_printed(cfg: &SyntheticFieldConfig, t: f64) -> Hermitian2 {
    let phi = cfg.omega0 * t;
    let horizontal = cfg.b1 * cfg.theta_drive.sin();
    let vertical = cfg.b1 * cfg.theta_drive.cos() + cfg.b2;
    Hermitian2::from_pauli(
        cfg.m_b * horizontal * phi.cos(),
        cfg.m_b * horizontal * phi.cos(),
        cfg.m_b * cfg.m_b * vertical,
        0.0,
    )
}

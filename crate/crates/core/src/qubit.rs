//! Exact 2x2 complex linear algebra and the driven-qubit Hamiltonian family.
//!
//! Basis convention: `|0⟩ = |e⟩ = (1, 0)ᵀ` is the bare excited state and
//! `|1⟩ = |g⟩ = (0, 1)ᵀ` the bare ground state.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Error;
use crate::Result;

pub type C64 = Complex64;

/// Degeneracy threshold in rad/µs: far below every physical scale in use,
/// far above double-precision noise.
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;

/// Gauge convention threshold on the |0⟩ amplitude magnitude.
const GAUGE_THRESHOLD: f64 = 1e-12;

/// Two-component complex amplitude vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct State2 {
    /// Amplitude on `|0⟩ = |e⟩`.
    pub a0: C64,
    /// Amplitude on `|1⟩ = |g⟩`.
    pub a1: C64,
}

impl State2 {
    pub const fn new(a0: C64, a1: C64) -> Self {
        Self { a0, a1 }
    }

    pub fn from_re(a0: f64, a1: f64) -> Self {
        Self::new(C64::new(a0, 0.0), C64::new(a1, 0.0))
    }

    /// Bare excited state `|e⟩`.
    pub fn bare_excited() -> Self {
        Self::from_re(1.0, 0.0)
    }

    /// Bare ground state `|g⟩`.
    pub fn bare_ground() -> Self {
        Self::from_re(0.0, 1.0)
    }

    /// Equal superposition `(|e⟩ + |g⟩)/√2`, the degenerate state at Δ = 0.
    pub fn symmetric() -> Self {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_re(r, r)
    }

    /// Inner product `⟨self|other⟩` (conjugate-linear in `self`).
    pub fn inner(&self, other: &State2) -> C64 {
        self.a0.conj() * other.a0 + self.a1.conj() * other.a1
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).re.sqrt()
    }

    pub fn normalized(&self) -> State2 {
        let n = self.norm();
        State2::new(self.a0 / n, self.a1 / n)
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    /// Overlap probability `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &State2) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn scale(&self, z: C64) -> State2 {
        State2::new(self.a0 * z, self.a1 * z)
    }

    pub fn add(&self, other: &State2) -> State2 {
        State2::new(self.a0 + other.a0, self.a1 + other.a1)
    }

    /// Fix the global phase: the |0⟩ amplitude is made real and >= 0; when its
    /// magnitude falls below 1e-12 the |1⟩ amplitude is made real positive
    /// instead. Idempotent.
    pub fn gauge_fixed(&self) -> State2 {
        let pivot = if self.a0.norm() >= GAUGE_THRESHOLD {
            self.a0
        } else {
            self.a1
        };
        let m = pivot.norm();
        if m == 0.0 {
            return *self;
        }
        self.scale(pivot.conj() / m)
    }
}

/// 2x2 Hermitian matrix (entries in rad/µs for Hamiltonians).
#[derive(Clone, Copy, Debug)]
pub struct Hermitian2 {
    m: [[C64; 2]; 2],
}

/// Pauli matrices.
pub fn pauli_x() -> Hermitian2 {
    Hermitian2::from_entries_unchecked([
        [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
    ])
}

pub fn pauli_y() -> Hermitian2 {
    Hermitian2::from_entries_unchecked([
        [C64::new(0.0, 0.0), C64::new(0.0, -1.0)],
        [C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
    ])
}

pub fn pauli_z() -> Hermitian2 {
    Hermitian2::from_entries_unchecked([
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        [C64::new(0.0, 0.0), C64::new(-1.0, 0.0)],
    ])
}

impl Hermitian2 {
    /// Hermiticity tolerance for checked construction.
    pub const HERMITICITY_TOL: f64 = 1e-14;

    /// Build from entries, verifying `m = m†` (within 1e-14 on each entry)
    /// and a real trace.
    pub fn new(m: [[C64; 2]; 2]) -> Result<Self> {
        let scale = m
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(1.0_f64, f64::max);
        let tol = Self::HERMITICITY_TOL * scale;
        if m[0][0].im.abs() > tol
            || m[1][1].im.abs() > tol
            || (m[0][1] - m[1][0].conj()).norm() > tol
        {
            return Err(Error::InvalidInput("matrix is not Hermitian".into()));
        }
        Ok(Self::from_entries_unchecked(m))
    }

    pub(crate) fn from_entries_unchecked(m: [[C64; 2]; 2]) -> Self {
        Self { m }
    }

    /// Real combination `z σz + x σx + y σy + w 1`; Hermitian by construction.
    pub fn from_pauli(x: f64, y: f64, z: f64, w: f64) -> Self {
        Self::from_entries_unchecked([
            [C64::new(w + z, 0.0), C64::new(x, -y)],
            [C64::new(x, y), C64::new(w - z, 0.0)],
        ])
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.m[i][j]
    }

    pub fn entries(&self) -> [[C64; 2]; 2] {
        self.m
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0].re + self.m[1][1].re
    }

    pub fn scale(&self, s: f64) -> Hermitian2 {
        Self::from_entries_unchecked([
            [self.m[0][0] * s, self.m[0][1] * s],
            [self.m[1][0] * s, self.m[1][1] * s],
        ])
    }

    pub fn add(&self, other: &Hermitian2) -> Hermitian2 {
        Self::from_entries_unchecked([
            [self.m[0][0] + other.m[0][0], self.m[0][1] + other.m[0][1]],
            [self.m[1][0] + other.m[1][0], self.m[1][1] + other.m[1][1]],
        ])
    }

    /// `H|ψ⟩`.
    pub fn apply(&self, psi: &State2) -> State2 {
        State2::new(
            self.m[0][0] * psi.a0 + self.m[0][1] * psi.a1,
            self.m[1][0] * psi.a0 + self.m[1][1] * psi.a1,
        )
    }

    /// `⟨ψ|H|ψ⟩` (real for Hermitian H).
    pub fn expectation(&self, psi: &State2) -> f64 {
        psi.inner(&self.apply(psi)).re
    }

    /// `⟨a|H|b⟩`.
    pub fn matrix_element(&self, a: &State2, b: &State2) -> C64 {
        a.inner(&self.apply(b))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.m[0][0].im.abs() <= tol
            && self.m[1][1].im.abs() <= tol
            && (self.m[0][1] - self.m[1][0].conj()).norm() <= tol
    }
}

/// Eigenstate band selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Band {
    Ground,
    Excited,
}

impl Band {
    pub fn sign(&self) -> f64 {
        match self {
            Band::Ground => 1.0,
            Band::Excited => -1.0,
        }
    }

    pub fn other(&self) -> Band {
        match self {
            Band::Ground => Band::Excited,
            Band::Excited => Band::Ground,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Band::Ground => "ground",
            Band::Excited => "excited",
        }
    }
}

impl std::str::FromStr for Band {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ground" => Ok(Band::Ground),
            "excited" => Ok(Band::Excited),
            other => Err(Error::InvalidInput(format!(
                "unknown band '{other}' (expected ground|excited)"
            ))),
        }
    }
}

/// Drive parameters of the Hamiltonian family (rad/µs).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DriveParams {
    /// Detuning sweep amplitude Δ₁.
    pub delta1: f64,
    /// Detuning offset Δ₂.
    pub delta2: f64,
    /// Rabi amplitude scale Ωₙ (>= 0).
    pub omega_n: f64,
}

impl DriveParams {
    pub fn new(delta1: f64, delta2: f64, omega_n: f64) -> Result<Self> {
        if omega_n.is_nan() || omega_n < 0.0 {
            return Err(Error::InvalidInput(format!(
                "omega_n must be >= 0, got {omega_n}"
            )));
        }
        if !(delta1.is_finite() && delta2.is_finite() && omega_n.is_finite()) {
            return Err(Error::InvalidInput("drive parameters must be finite".into()));
        }
        Ok(Self {
            delta1,
            delta2,
            omega_n,
        })
    }

    /// Plain-MHz convenience matching the `Δ₁ = 2π × 30 MHz` notation.
    pub fn from_mhz(delta1_mhz: f64, delta2_mhz: f64, omega_mhz: f64) -> Result<Self> {
        let k = std::f64::consts::TAU;
        Self::new(k * delta1_mhz, k * delta2_mhz, k * omega_mhz)
    }

    /// Instantaneous detuning and Rabi amplitude `(Δ, Ω)` at polar angle θ.
    pub fn delta_omega(&self, theta: f64) -> (f64, f64) {
        (
            self.delta1 * theta.cos() + self.delta2,
            self.omega_n * theta.sin(),
        )
    }

    /// Bloch angle `β = atan2(Ω, Δ)` of the instantaneous field direction.
    pub fn bloch_angle(&self, theta: f64) -> f64 {
        let (d, o) = self.delta_omega(theta);
        o.atan2(d)
    }

    /// dβ/dθ. Diverges only at the degeneracy Δ = Ω = 0.
    pub fn bloch_angle_rate(&self, theta: f64) -> f64 {
        let (d, o) = self.delta_omega(theta);
        let dp = -self.delta1 * theta.sin();
        let op = self.omega_n * theta.cos();
        (op * d - o * dp) / (d * d + o * o)
    }

    /// Upper bound on the instantaneous eigenfrequency |E| over all θ.
    pub fn eigenfrequency_bound(&self) -> f64 {
        0.5 * (self.delta1.abs() + self.delta2.abs()).hypot(self.omega_n)
    }

    /// Ratio Δ₂/Δ₁ controlling the topological transition.
    pub fn detuning_ratio(&self) -> f64 {
        self.delta2 / self.delta1
    }
}

/// A point of the parameter sphere: θ in [0, π], φ in [0, 2π).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpherePoint {
    theta: f64,
    phi: f64,
}

impl SpherePoint {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(Error::InvalidInput(format!(
                "theta must lie in [0, pi], got {theta}"
            )));
        }
        if !(0.0..std::f64::consts::TAU).contains(&phi) {
            return Err(Error::InvalidInput(format!(
                "phi must lie in [0, 2*pi), got {phi}"
            )));
        }
        Ok(Self { theta, phi })
    }

    /// Construct with φ reduced modulo 2π.
    pub fn wrapped(theta: f64, phi: f64) -> Result<Self> {
        Self::new(theta, crate::numeric::wrap_angle(phi))
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// Eigensystem of a 2x2 Hermitian matrix, sorted ascending in energy and
/// gauge-fixed.
#[derive(Clone, Copy, Debug)]
pub struct EigenSystem {
    pub e_ground: f64,
    pub e_excited: f64,
    pub psi_ground: State2,
    pub psi_excited: State2,
}

impl EigenSystem {
    pub fn gap(&self) -> f64 {
        self.e_excited - self.e_ground
    }

    pub fn band_state(&self, band: Band) -> State2 {
        match band {
            Band::Ground => self.psi_ground,
            Band::Excited => self.psi_excited,
        }
    }

    pub fn band_energy(&self, band: Band) -> f64 {
        match band {
            Band::Ground => self.e_ground,
            Band::Excited => self.e_excited,
        }
    }
}

/// `H = (Δ σz + Ω cosφ σx + Ω sinφ σy)/2` with `Δ = Δ₁cosθ + Δ₂` and
/// `Ω = Ωₙ sinθ`. Hermitian and traceless for every input.
pub fn build_hamiltonian(params: &DriveParams, point: &SpherePoint) -> Hermitian2 {
    let (delta, omega) = params.delta_omega(point.theta());
    Hermitian2::from_pauli(
        0.5 * omega * point.phi().cos(),
        0.5 * omega * point.phi().sin(),
        0.5 * delta,
        0.0,
    )
}

/// Closed-form eigensystem of a Hermitian 2x2 matrix. Eigenpairs are sorted
/// ascending by energy and the gauge convention is applied. Signals
/// `DegenerateSpectrum` when the gap is below 1e-12 rad/µs.
pub fn eigensystem(h: &Hermitian2) -> Result<EigenSystem> {
    let a = h.entry(0, 0).re;
    let b = h.entry(1, 1).re;
    let c = h.entry(0, 1);
    let mean = 0.5 * (a + b);
    let half_diff = 0.5 * (a - b);
    let radius = half_diff.hypot(c.norm());
    let (e_ground, e_excited) = (mean - radius, mean + radius);
    if e_excited - e_ground < DEGENERACY_THRESHOLD {
        return Err(Error::DegenerateSpectrum {
            gap: e_excited - e_ground,
        });
    }

    // For eigenvalue E the two candidate eigenvectors are (c, E-a) and
    // (E-b, c*): pick whichever has the larger norm to avoid cancellation.
    let vector_for = |e: f64| -> State2 {
        let v1 = State2::new(c, C64::new(e - a, 0.0));
        let v2 = State2::new(C64::new(e - b, 0.0), c.conj());
        let v = if v1.norm() >= v2.norm() { v1 } else { v2 };
        v.normalized().gauge_fixed()
    };

    Ok(EigenSystem {
        e_ground,
        e_excited,
        psi_ground: vector_for(e_ground),
        psi_excited: vector_for(e_excited),
    })
}

/// Closed-form eigenstates `(ground, excited)` of the drive family, in the
/// half-angle form: with `β = atan2(Ω, Δ)`,
/// `|ψ₁⟩ = cos(β/2)|0⟩ + e^{iφ} sin(β/2)|1⟩` and
/// `|ψ₀⟩ = sin(β/2)|0⟩ - e^{iφ} cos(β/2)|1⟩`,
/// equivalent to normalizing `(Ω/2)|0⟩ + e^{iφ}(E - Δ/2)|1⟩` over each band.
/// Eigen-residual `‖Hψ - Eψ‖` is at machine precision.
pub fn analytic_eigenstates(params: &DriveParams, point: &SpherePoint) -> Result<(State2, State2)> {
    let (delta, omega) = params.delta_omega(point.theta());
    if delta.hypot(omega) < DEGENERACY_THRESHOLD {
        return Err(Error::DegeneratePoint);
    }
    let beta = omega.atan2(delta);
    let (s, c) = (0.5 * beta).sin_cos();
    let phase = C64::from_polar(1.0, point.phi());
    let ground = State2::new(C64::new(s, 0.0), -phase * c).gauge_fixed();
    let excited = State2::new(C64::new(c, 0.0), phase * s).gauge_fixed();
    Ok((ground, excited))
}

/// Whether the degeneracy Δ = Ω = 0 lies strictly inside the closed manifold
/// swept by the drive: 1 when `sign(Δ₁+Δ₂) != sign(-Δ₁+Δ₂)`, 0 outside.
/// `BoundaryDegeneracy` exactly at |Δ₂| = |Δ₁|.
pub fn degeneracy_enclosed(params: &DriveParams) -> Result<i32> {
    if params.delta1 == 0.0 {
        return Err(Error::InvalidInput(
            "degeneracy_enclosed requires delta1 != 0".into(),
        ));
    }
    if params.delta2.abs() == params.delta1.abs() {
        return Err(Error::BoundaryDegeneracy {
            ratio: params.detuning_ratio(),
        });
    }
    let north = params.delta1 + params.delta2; // Δ at θ = 0
    let south = -params.delta1 + params.delta2; // Δ at θ = π
    Ok(if north.signum() != south.signum() { 1 } else { 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI, TAU};

    fn ellipsoid() -> DriveParams {
        DriveParams::from_mhz(30.0, 0.0, 10.0).unwrap()
    }

    #[test]
    fn hamiltonian_at_north_pole_is_diagonal() {
        // sinθ = 0, cosθ = 1 leaves only Δ₁σz/2
        let p = DriveParams::from_mhz(30.0, 0.0, 10.0).unwrap();
        let h = build_hamiltonian(&p, &SpherePoint::new(0.0, 0.0).unwrap());
        assert_abs_diff_eq!(h.entry(0, 0).re, PI * 30.0, epsilon = 1e-12);
        assert_abs_diff_eq!(h.entry(1, 1).re, -PI * 30.0, epsilon = 1e-12);
        assert_eq!(h.entry(0, 1), C64::new(0.0, 0.0));
    }

    #[test]
    fn hamiltonian_at_equator_is_pure_sigma_x() {
        let p = DriveParams::from_mhz(25.0, 0.0, 10.0).unwrap();
        let h = build_hamiltonian(&p, &SpherePoint::new(FRAC_PI_2, 0.0).unwrap());
        let w = TAU * 10.0;
        assert_abs_diff_eq!(h.entry(0, 0).re, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(h.entry(0, 1).re, 0.5 * w, epsilon = 1e-12);
        assert_abs_diff_eq!(h.entry(0, 1).im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn hamiltonian_mixed_point_matches_hand_evaluation() {
        // Δ₁ = 2π·30, Δ₂ = 2π·15, Ωₙ = 2π·10 at θ = π/3, φ = π/2:
        // Δ = 2π·30·(1/2) + 2π·15 = 2π·30, Ω = 2π·10·(√3/2) = π·10√3,
        // so H = diag(2π·15, -2π·15) + (Ω/2)σy.
        let p = DriveParams::from_mhz(30.0, 15.0, 10.0).unwrap();
        let h = build_hamiltonian(&p, &SpherePoint::new(FRAC_PI_3, FRAC_PI_2).unwrap());
        let half_omega = PI * 5.0 * 3.0_f64.sqrt();
        assert_abs_diff_eq!(h.entry(0, 0).re, TAU * 15.0, epsilon = 1e-10);
        assert_abs_diff_eq!(h.entry(1, 1).re, -TAU * 15.0, epsilon = 1e-10);
        assert_abs_diff_eq!(h.entry(0, 1).re, 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(h.entry(0, 1).im, -half_omega, epsilon = 1e-10);
        assert_abs_diff_eq!(h.entry(1, 0).im, half_omega, epsilon = 1e-10);
        assert!(h.is_hermitian(1e-14));
        assert_abs_diff_eq!(h.trace(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn eigensystem_diagonal_case() {
        let a = 3.7;
        let h = Hermitian2::from_pauli(0.0, 0.0, a, 0.0);
        let es = eigensystem(&h).unwrap();
        assert_abs_diff_eq!(es.e_ground, -a, epsilon = 1e-14);
        assert_abs_diff_eq!(es.e_excited, a, epsilon = 1e-14);
        assert!((es.psi_ground.a1.re - 1.0).abs() < 1e-14);
        assert!((es.psi_excited.a0.re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigensystem_resonant_case() {
        // H = Ω σx / 2: eigenvectors (1, ∓1)/√2 up to gauge
        let w = TAU * 10.0;
        let h = Hermitian2::from_pauli(0.5 * w, 0.0, 0.0, 0.0);
        let es = eigensystem(&h).unwrap();
        assert_abs_diff_eq!(es.e_excited, 0.5 * w, epsilon = 1e-10);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((es.psi_ground.a0.re - r).abs() < 1e-12);
        assert!((es.psi_ground.a1.re + r).abs() < 1e-12);
        assert!((es.psi_excited.a1.re - r).abs() < 1e-12);
    }

    #[test]
    fn eigensystem_signals_degeneracy() {
        let h = Hermitian2::from_pauli(0.0, 0.0, 0.0, 1.0);
        assert!(matches!(
            eigensystem(&h),
            Err(Error::DegenerateSpectrum { .. })
        ));
    }

    #[test]
    fn numeric_matches_analytic_eigenstates() {
        let p = ellipsoid();
        let point = SpherePoint::new(FRAC_PI_3, 0.7).unwrap();
        let h = build_hamiltonian(&p, &point);
        let es = eigensystem(&h).unwrap();
        let (g, e) = analytic_eigenstates(&p, &point).unwrap();
        assert!(es.psi_ground.inner(&g).norm() > 1.0 - 1e-10);
        assert!(es.psi_excited.inner(&e).norm() > 1.0 - 1e-10);
        // energies ±√(Ω²+Δ²)/2
        let (d, o) = p.delta_omega(point.theta());
        assert_abs_diff_eq!(es.e_excited, 0.5 * d.hypot(o), epsilon = 1e-12);
        assert_abs_diff_eq!(es.e_ground, -0.5 * d.hypot(o), epsilon = 1e-12);
    }

    #[test]
    fn analytic_eigenstates_have_tiny_residual() {
        let p = DriveParams::from_mhz(30.0, 12.0, 10.0).unwrap();
        for &(th, ph) in &[(0.3, 0.0), (FRAC_PI_3, 2.1), (2.9, 5.5)] {
            let point = SpherePoint::new(th, ph).unwrap();
            let h = build_hamiltonian(&p, &point);
            let (d, o) = p.delta_omega(th);
            let w = 0.5 * d.hypot(o);
            let (g, e) = analytic_eigenstates(&p, &point).unwrap();
            for (psi, energy) in [(g, -w), (e, w)] {
                let r = h.apply(&psi).add(&psi.scale(C64::new(-energy, 0.0)));
                assert!(r.norm() < 1e-10, "residual {}", r.norm());
            }
        }
    }

    #[test]
    fn analytic_eigenstates_sphere_section_form() {
        // Δ₁ = Ωₙ, Δ₂ = 0 makes β = θ: excited state is the spherical section
        // cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩.
        let p = DriveParams::from_mhz(10.0, 0.0, 10.0).unwrap();
        let th = FRAC_PI_3;
        let ph = std::f64::consts::FRAC_PI_4;
        let (_, e) = analytic_eigenstates(&p, &SpherePoint::new(th, ph).unwrap()).unwrap();
        assert_abs_diff_eq!(e.a0.re, (th / 2.0).cos(), epsilon = 1e-12);
        let expected = C64::from_polar((th / 2.0).sin(), ph);
        assert!((e.a1 - expected).norm() < 1e-12);
    }

    #[test]
    fn analytic_eigenstates_resonant_and_polar_limits() {
        let p = DriveParams::from_mhz(0.0, 0.0, 7.0).unwrap();
        let (g, e) =
            analytic_eigenstates(&p, &SpherePoint::new(FRAC_PI_2, 0.0).unwrap()).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((g.a0.re - r).abs() < 1e-12 && (g.a1.re + r).abs() < 1e-12);
        assert!((e.a0.re - r).abs() < 1e-12 && (e.a1.re - r).abs() < 1e-12);

        // θ → 0 with Δ₁+Δ₂ > 0: bare states up to phase
        let p = DriveParams::from_mhz(30.0, 5.0, 10.0).unwrap();
        let (g, e) = analytic_eigenstates(&p, &SpherePoint::new(1e-9, 0.3).unwrap()).unwrap();
        assert!(g.fidelity(&State2::bare_ground()) > 1.0 - 1e-12);
        assert!(e.fidelity(&State2::bare_excited()) > 1.0 - 1e-12);
    }

    #[test]
    fn analytic_eigenstates_degenerate_point_errors() {
        let p = DriveParams::new(TAU * 30.0, -TAU * 30.0, TAU * 10.0).unwrap();
        // θ = 0 puts Δ = Δ₁ + Δ₂ = 0 and Ω = 0
        assert!(matches!(
            analytic_eigenstates(&p, &SpherePoint::new(0.0, 0.0).unwrap()),
            Err(Error::DegeneratePoint)
        ));
    }

    #[test]
    fn gauge_fix_is_idempotent() {
        let s = State2::new(C64::new(0.3, -0.4), C64::new(-0.5, 0.7)).normalized();
        let once = s.gauge_fixed();
        let twice = once.gauge_fixed();
        assert!((once.a0 - twice.a0).norm() < 1e-15);
        assert!((once.a1 - twice.a1).norm() < 1e-15);
        assert!(once.a0.im.abs() < 1e-15 && once.a0.re >= 0.0);
    }

    #[test]
    fn enclosure_indicator() {
        let d1 = TAU * 30.0;
        let w = TAU * 10.0;
        assert_eq!(
            degeneracy_enclosed(&DriveParams::new(d1, 0.0, w).unwrap()).unwrap(),
            1
        );
        assert_eq!(
            degeneracy_enclosed(&DriveParams::new(d1, 2.0 * d1, w).unwrap()).unwrap(),
            0
        );
        assert_eq!(
            degeneracy_enclosed(&DriveParams::new(d1, -2.0 * d1, w).unwrap()).unwrap(),
            0
        );
        assert!(matches!(
            degeneracy_enclosed(&DriveParams::new(d1, d1, w).unwrap()),
            Err(Error::BoundaryDegeneracy { .. })
        ));
        assert!(matches!(
            degeneracy_enclosed(&DriveParams::new(d1, -d1, w).unwrap()),
            Err(Error::BoundaryDegeneracy { .. })
        ));
    }

    #[test]
    fn drive_params_reject_negative_rabi() {
        assert!(DriveParams::new(1.0, 0.0, -0.1).is_err());
    }

    #[test]
    fn hermitian_constructor_rejects_bad_matrices() {
        let good = [
            [C64::new(1.0, 0.0), C64::new(0.5, -0.2)],
            [C64::new(0.5, 0.2), C64::new(-1.0, 0.0)],
        ];
        assert!(Hermitian2::new(good).is_ok());
        let complex_trace = [
            [C64::new(1.0, 0.1), C64::new(0.5, -0.2)],
            [C64::new(0.5, 0.2), C64::new(-1.0, 0.0)],
        ];
        assert!(Hermitian2::new(complex_trace).is_err());
        let asymmetric = [
            [C64::new(1.0, 0.0), C64::new(0.5, -0.2)],
            [C64::new(0.4, 0.2), C64::new(-1.0, 0.0)],
        ];
        assert!(Hermitian2::new(asymmetric).is_err());
    }

    #[test]
    fn sphere_point_ranges() {
        assert!(SpherePoint::new(-0.1, 0.0).is_err());
        assert!(SpherePoint::new(0.0, TAU).is_err());
        assert!(SpherePoint::wrapped(1.0, -0.5).is_ok());
    }
}

//! Quantum geometry of eigenstate maps over the parameter sphere: quantum
//! geometric tensor, Fubini-Study metric, Berry curvature, and the classical
//! surface invariants (Christoffel symbols, Gauss and geodesic curvature)
//! with a Gauss-Bonnet consistency check.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::Error;
use crate::numeric::{pairwise_sum, wrap_angle};
use crate::qubit::{analytic_eigenstates, Band, DriveParams, SpherePoint, State2};
use crate::Result;

/// Default step for first derivatives of states.
pub const STATE_STEP: f64 = 1e-4;
/// Default step for second-derivative quantities (Christoffel, curvatures).
pub const METRIC_STEP: f64 = 1e-3;
/// Points with sinθ below this are treated as coordinate-singular.
pub const POLE_GUARD: f64 = 1e-6;

/// A smooth map `(θ, φ) -> |ψ(θ, φ)⟩` into normalized states.
#[derive(Clone, Debug)]
pub enum StateMap {
    /// Ground-band eigenstate of the drive family.
    Ground(DriveParams),
    /// Excited-band eigenstate of the drive family.
    Excited(DriveParams),
    /// Ground-band section of the round sphere,
    /// `sin(θ/2)|0⟩ - e^{iφ} cos(θ/2)|1⟩`; its metric is the Fubini-Study
    /// sphere of radius 1/2 and its curvature `+sinθ/2`.
    SphereSection,
    /// `inner` multiplied by the smooth gauge factor
    /// `exp(i(a·θ + b·sinφ))`; used to exercise gauge invariance.
    Twisted {
        inner: Box<StateMap>,
        theta_coeff: f64,
        sin_phi_coeff: f64,
    },
}

/// A state together with its parameter derivatives at a point.
#[derive(Clone, Copy, Debug)]
pub struct StateJet {
    pub psi: State2,
    pub d_theta: State2,
    pub d_phi: State2,
}

impl StateMap {
    pub fn band(band: Band, params: DriveParams) -> StateMap {
        match band {
            Band::Ground => StateMap::Ground(params),
            Band::Excited => StateMap::Excited(params),
        }
    }

    pub fn twisted(self, theta_coeff: f64, sin_phi_coeff: f64) -> StateMap {
        StateMap::Twisted {
            inner: Box::new(self),
            theta_coeff,
            sin_phi_coeff,
        }
    }

    /// Evaluate the map. Smooth away from band degeneracies; the global
    /// phase follows the half-angle section, not the gauge convention.
    pub fn state(&self, theta: f64, phi: f64) -> Result<State2> {
        Ok(self.jet(theta, phi)?.psi)
    }

    /// Evaluate the map together with its analytic `∂_θ` and `∂_φ`.
    pub fn jet(&self, theta: f64, phi: f64) -> Result<StateJet> {
        match self {
            StateMap::Ground(p) => band_jet(p, theta, phi, Band::Ground),
            StateMap::Excited(p) => band_jet(p, theta, phi, Band::Excited),
            StateMap::SphereSection => Ok(section_jet(theta, phi)),
            StateMap::Twisted {
                inner,
                theta_coeff,
                sin_phi_coeff,
            } => {
                let base = inner.jet(theta, phi)?;
                let alpha = theta_coeff * theta + sin_phi_coeff * phi.sin();
                let factor = C64::from_polar(1.0, alpha);
                let i = C64::new(0.0, 1.0);
                let da_dth = C64::new(*theta_coeff, 0.0);
                let da_dph = C64::new(sin_phi_coeff * phi.cos(), 0.0);
                Ok(StateJet {
                    psi: base.psi.scale(factor),
                    d_theta: base.d_theta.add(&base.psi.scale(i * da_dth)).scale(factor),
                    d_phi: base.d_phi.add(&base.psi.scale(i * da_dph)).scale(factor),
                })
            }
        }
    }
}

fn band_jet(params: &DriveParams, theta: f64, phi: f64, band: Band) -> Result<StateJet> {
    let point = SpherePoint::wrapped(theta, phi)?;
    let (ground, excited) = analytic_eigenstates(params, &point)?;
    let beta = params.bloch_angle(theta);
    let rate = params.bloch_angle_rate(theta);
    let (s, c) = (0.5 * beta).sin_cos();
    let phase = C64::from_polar(1.0, point.phi());
    let i = C64::new(0.0, 1.0);
    Ok(match band {
        // ψ₀ = (sin(β/2), -e^{iφ} cos(β/2))
        Band::Ground => StateJet {
            psi: ground,
            d_theta: State2::new(
                C64::new(0.5 * rate * c, 0.0),
                phase * (0.5 * rate * s),
            ),
            d_phi: State2::new(C64::new(0.0, 0.0), -i * phase * c),
        },
        // ψ₁ = (cos(β/2), e^{iφ} sin(β/2))
        Band::Excited => StateJet {
            psi: excited,
            d_theta: State2::new(
                C64::new(-0.5 * rate * s, 0.0),
                phase * (0.5 * rate * c),
            ),
            d_phi: State2::new(C64::new(0.0, 0.0), i * phase * s),
        },
    })
}

fn section_jet(theta: f64, phi: f64) -> StateJet {
    let (s, c) = (0.5 * theta).sin_cos();
    let phase = C64::from_polar(1.0, phi);
    let i = C64::new(0.0, 1.0);
    StateJet {
        psi: State2::new(C64::new(s, 0.0), -phase * c),
        d_theta: State2::new(C64::new(0.5 * c, 0.0), phase * (0.5 * s)),
        d_phi: State2::new(C64::new(0.0, 0.0), -i * phase * c),
    }
}

/// Quantum geometric tensor sample at a point.
#[derive(Clone, Copy, Debug)]
pub struct QgtSample {
    pub q_tt: C64,
    pub q_tp: C64,
    pub q_pt: C64,
    pub q_pp: C64,
    pub point: SpherePoint,
}

/// First-fundamental-form sample `E dθ² + 2F dθdφ + G dφ²`.
#[derive(Clone, Copy, Debug)]
pub struct MetricSample {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub point: SpherePoint,
}

impl MetricSample {
    pub fn det(&self) -> f64 {
        self.e * self.g - self.f * self.f
    }

    pub fn sqrt_det(&self) -> f64 {
        self.det().max(0.0).sqrt()
    }
}

/// Christoffel symbols `Γ^σ_{μν}` with indices 0 = θ, 1 = φ.
#[derive(Clone, Copy, Debug)]
pub struct ChristoffelSample {
    pub symbols: [[[f64; 2]; 2]; 2],
    pub point: SpherePoint,
}

impl ChristoffelSample {
    pub fn theta_phiphi(&self) -> f64 {
        self.symbols[0][1][1]
    }

    pub fn phi_phitheta(&self) -> f64 {
        self.symbols[1][1][0]
    }
}

/// The pointwise invariants of classical surface geometry.
#[derive(Clone, Copy, Debug)]
pub struct CurvatureInvariants {
    /// √(EG - F²), the area element per dθ dφ.
    pub sqrt_g: f64,
    /// Gauss curvature K.
    pub gauss_k: f64,
    /// Geodesic curvature of the constant-θ curve through the point.
    pub kappa_g: f64,
    /// dS per dθ dφ (equals √g).
    pub area_element: f64,
    /// dl per dφ along constant θ (equals √G).
    pub line_element: f64,
}

fn qgt_from_jet(jet: &StateJet, point: SpherePoint) -> QgtSample {
    let q = |dmu: &State2, dnu: &State2| {
        dmu.inner(dnu) - dmu.inner(&jet.psi) * jet.psi.inner(dnu)
    };
    QgtSample {
        q_tt: q(&jet.d_theta, &jet.d_theta),
        q_tp: q(&jet.d_theta, &jet.d_phi),
        q_pt: q(&jet.d_phi, &jet.d_theta),
        q_pp: q(&jet.d_phi, &jet.d_phi),
        point,
    }
}

/// Quantum geometric tensor from the map's analytic derivatives; exact to
/// rounding, used wherever the downstream stencils need a quiet metric.
pub fn qgt_analytic(map: &StateMap, point: &SpherePoint) -> Result<QgtSample> {
    let jet = map.jet(point.theta(), point.phi())?;
    Ok(qgt_from_jet(&jet, *point))
}

/// Quantum geometric tensor by phase-aligned central differences: each
/// neighbor state is rephased so its overlap with the center state is real
/// positive before differencing, giving a smooth local gauge. Error O(h²).
pub fn qgt_finite_difference(map: &StateMap, point: &SpherePoint, h: f64) -> Result<QgtSample> {
    if !(1e-6..=1e-2).contains(&h) {
        return Err(Error::InvalidInput(format!(
            "finite-difference step must lie in [1e-6, 1e-2], got {h}"
        )));
    }
    let (theta, phi) = (point.theta(), point.phi());
    if theta < h || theta > std::f64::consts::PI - h {
        return Err(Error::InvalidInput(format!(
            "stencil at theta = {theta} leaves [0, pi] for h = {h}"
        )));
    }
    let center = map
        .state(theta, phi)
        .map_err(|_| Error::DegenerateNeighborhood)?;
    let aligned = |th: f64, ph: f64| -> Result<State2> {
        let raw = map
            .state(th, wrap_angle(ph))
            .map_err(|_| Error::DegenerateNeighborhood)?;
        let overlap = center.inner(&raw);
        let m = overlap.norm();
        if m < 1e-8 {
            return Err(Error::DegenerateNeighborhood);
        }
        Ok(raw.scale(overlap.conj() / m))
    };
    let tp = aligned(theta + h, phi)?;
    let tm = aligned(theta - h, phi)?;
    let pp = aligned(theta, phi + h)?;
    let pm = aligned(theta, phi - h)?;
    let half = 0.5 / h;
    let jet = StateJet {
        psi: center,
        d_theta: tp.add(&tm.scale(C64::new(-1.0, 0.0))).scale(C64::new(half, 0.0)),
        d_phi: pp.add(&pm.scale(C64::new(-1.0, 0.0))).scale(C64::new(half, 0.0)),
    };
    Ok(qgt_from_jet(&jet, *point))
}

/// Fubini-Study metric: the real part of the quantum geometric tensor.
pub fn fubini_study_metric(q: &QgtSample) -> MetricSample {
    MetricSample {
        e: q.q_tt.re,
        f: q.q_tp.re,
        g: q.q_pp.re,
        point: q.point,
    }
}

/// Berry curvature `F_θφ = -2 Im[Q_θφ]`.
pub fn berry_curvature_qgt(q: &QgtSample) -> f64 {
    -2.0 * q.q_tp.im
}

/// Berry curvature from the two-level spectral sum
/// `F_θφ = i (⟨b|∂_θH|o⟩⟨o|∂_φH|b⟩ - (θ↔φ)) / (E_o - E_b)²`
/// with the analytic drive derivatives `∂_θH`, `∂_φH`.
pub fn berry_curvature_spectral(
    params: &DriveParams,
    point: &SpherePoint,
    band: Band,
) -> Result<f64> {
    let (ground, excited) = analytic_eigenstates(params, point)?;
    let (delta, omega) = params.delta_omega(point.theta());
    let gap = delta.hypot(omega);

    let (theta, phi) = (point.theta(), point.phi());
    let d_delta = -params.delta1 * theta.sin();
    let d_omega = params.omega_n * theta.cos();
    let dh_theta = crate::qubit::Hermitian2::from_pauli(
        0.5 * d_omega * phi.cos(),
        0.5 * d_omega * phi.sin(),
        0.5 * d_delta,
        0.0,
    );
    let dh_phi = crate::qubit::Hermitian2::from_pauli(
        -0.5 * omega * phi.sin(),
        0.5 * omega * phi.cos(),
        0.0,
        0.0,
    );

    let (this, other) = match band {
        Band::Ground => (ground, excited),
        Band::Excited => (excited, ground),
    };
    let t = dh_theta.matrix_element(&this, &other);
    let p = dh_phi.matrix_element(&other, &this);
    let cross = t * p;
    // i(z - z*) = -2 Im z
    Ok(-2.0 * cross.im / (gap * gap))
}

/// Christoffel symbols by central differences of an axisymmetric metric
/// field (∂_φ g = 0 for every map in this family).
pub fn christoffel<M>(metric: &M, point: &SpherePoint, h: f64) -> Result<ChristoffelSample>
where
    M: Fn(f64) -> Result<MetricSample>,
{
    let theta = point.theta();
    if theta.sin() < POLE_GUARD {
        return Err(Error::SingularMetric { theta });
    }
    let g0 = metric(theta)?;
    let det = g0.det();
    if det.max(0.0).sqrt() <= 1e-9 {
        return Err(Error::SingularMetric { theta });
    }
    let gp = metric(theta + h)?;
    let gm = metric(theta - h)?;
    let half = 0.5 / h;
    // lower-index metric and its θ-derivative as 2x2 arrays
    let g = [[g0.e, g0.f], [g0.f, g0.g]];
    let dg_theta = [
        [(gp.e - gm.e) * half, (gp.f - gm.f) * half],
        [(gp.f - gm.f) * half, (gp.g - gm.g) * half],
    ];
    let inv = [
        [g[1][1] / det, -g[0][1] / det],
        [-g[1][0] / det, g[0][0] / det],
    ];
    // ∂_ν g_{μλ} with ∂_φ = 0
    let d = |nu: usize, mu: usize, lam: usize| -> f64 {
        if nu == 0 {
            dg_theta[mu][lam]
        } else {
            0.0
        }
    };
    let mut symbols = [[[0.0; 2]; 2]; 2];
    #[allow(clippy::needless_range_loop)] // indices mirror the Γ^σ_{μν} formula
    for sigma in 0..2 {
        for mu in 0..2 {
            for nu in 0..2 {
                let mut sum = 0.0;
                for lam in 0..2 {
                    sum += inv[sigma][lam] * (d(nu, mu, lam) + d(mu, nu, lam) - d(lam, mu, nu));
                }
                symbols[sigma][mu][nu] = 0.5 * sum;
            }
        }
    }
    Ok(ChristoffelSample {
        symbols,
        point: *point,
    })
}

/// Gauss curvature via
/// `K = (1/√g)[∂_φ(√g Γ^φ_{θθ}/E) - ∂_θ(√g Γ^φ_{θφ}/E)]`
/// (the ∂_φ term vanishes for axisymmetric metrics).
pub fn gauss_curvature<M>(metric: &M, point: &SpherePoint, h: f64) -> Result<f64>
where
    M: Fn(f64) -> Result<MetricSample>,
{
    let theta = point.theta();
    let g0 = metric(theta)?;
    let sqrt_g = g0.det().max(0.0).sqrt();
    if sqrt_g <= 1e-9 || theta.sin() < POLE_GUARD {
        return Err(Error::SingularMetric { theta });
    }
    let p_at = |th: f64| -> Result<f64> {
        let gs = metric(th)?;
        let gamma = christoffel(metric, &SpherePoint::new(th, point.phi())?, h)?;
        Ok(gs.sqrt_det() * gamma.symbols[1][0][1] / gs.e)
    };
    let dp = (p_at(theta + h)? - p_at(theta - h)?) / (2.0 * h);
    Ok(-dp / sqrt_g)
}

/// Geodesic curvature of the constant-θ curve, `κ_g = √g G^{-3/2} Γ^θ_{φφ}`,
/// oriented as the boundary of the south cap (equals `-2 cotθ` on the
/// Fubini-Study sphere).
pub fn geodesic_curvature<M>(metric: &M, point: &SpherePoint, h: f64) -> Result<f64>
where
    M: Fn(f64) -> Result<MetricSample>,
{
    let g0 = metric(point.theta())?;
    let gamma = christoffel(metric, point, h)?;
    Ok(g0.sqrt_det() * g0.g.powf(-1.5) * gamma.theta_phiphi())
}

/// All pointwise invariants at once.
pub fn curvature_invariants<M>(
    metric: &M,
    point: &SpherePoint,
    h: f64,
) -> Result<CurvatureInvariants>
where
    M: Fn(f64) -> Result<MetricSample>,
{
    let g0 = metric(point.theta())?;
    Ok(CurvatureInvariants {
        sqrt_g: g0.sqrt_det(),
        gauss_k: gauss_curvature(metric, point, h)?,
        kappa_g: geodesic_curvature(metric, point, h)?,
        area_element: g0.sqrt_det(),
        line_element: g0.g.max(0.0).sqrt(),
    })
}

/// The metric field of a map along θ (every map in this family is
/// axisymmetric, so φ = 0 is representative).
pub fn metric_field(map: &StateMap) -> impl Fn(f64) -> Result<MetricSample> + Sync + '_ {
    move |theta: f64| {
        let q = qgt_analytic(map, &SpherePoint::new(theta, 0.0)?)?;
        Ok(fubini_study_metric(&q))
    }
}

/// Result of the Gauss-Bonnet assembly split at a latitude cap.
#[derive(Clone, Copy, Debug)]
pub struct GaussBonnetCheck {
    /// `∬_{θ <= cap} K dS` by midpoint quadrature.
    pub bulk: f64,
    /// Gauss-Bonnet closure of the complementary cap,
    /// `2π - ∮_{θ=cap} κ_g dl`; zero when the cap is the whole sphere.
    pub boundary: f64,
    /// `(bulk + boundary) / 2π`; the Euler characteristic estimate.
    pub euler_estimate: f64,
}

/// Verify the Gauss-Bonnet assembly: the cap integral of `K dS` plus the
/// boundary-closed complement reproduces `2π χ(S²) = 4π` for every cap,
/// and the full-sphere integral alone does so at `theta_cap = π`.
pub fn gauss_bonnet_check(
    map: &StateMap,
    theta_cap: f64,
    grid: (usize, usize),
) -> Result<GaussBonnetCheck> {
    let pi = std::f64::consts::PI;
    if !(theta_cap > 0.0 && theta_cap <= pi) {
        return Err(Error::InvalidInput(format!(
            "theta_cap must lie in (0, pi], got {theta_cap}"
        )));
    }
    let (n_theta, n_phi) = grid;
    if n_theta < 64 || n_phi < 64 {
        return Err(Error::InvalidInput(format!(
            "gauss_bonnet_check requires a grid of at least 64x64, got {n_theta}x{n_phi}"
        )));
    }
    let metric = metric_field(map);
    let d_theta = theta_cap / n_theta as f64;
    let d_phi = std::f64::consts::TAU / n_phi as f64;

    let row_terms: Vec<f64> = (0..n_theta)
        .into_par_iter()
        .map(|j| -> Result<f64> {
            let theta = (j as f64 + 0.5) * d_theta;
            let h = METRIC_STEP.min(theta / 4.0).min((pi - theta) / 4.0);
            let point = SpherePoint::new(theta, 0.0)?;
            let k = gauss_curvature(&metric, &point, h)?;
            let sqrt_g = metric(theta)?.sqrt_det();
            Ok(k * sqrt_g * d_theta * (n_phi as f64 * d_phi))
        })
        .collect::<Result<Vec<_>>>()?;
    let bulk = pairwise_sum(&row_terms);

    let closed = theta_cap >= pi - 1e-9;
    let boundary = if closed {
        0.0
    } else {
        let point = SpherePoint::new(theta_cap, 0.0)?;
        let h = METRIC_STEP.min(theta_cap / 4.0).min((pi - theta_cap) / 4.0);
        let kappa = geodesic_curvature(&metric, &point, h)?;
        let line = metric(theta_cap)?.g.max(0.0).sqrt();
        std::f64::consts::TAU - kappa * line * (n_phi as f64 * d_phi)
    };

    Ok(GaussBonnetCheck {
        bulk,
        boundary,
        euler_estimate: (bulk + boundary) / std::f64::consts::TAU,
    })
}

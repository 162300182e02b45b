//! Geometric and topological structure of a driven two-level system.
//!
//! The parameter space of the qubit Hamiltonian
//! `H = (Δ σz + Ω cosφ σx + Ω sinφ σy)/2` with `Δ = Δ₁cosθ + Δ₂`,
//! `Ω = Ωₙ sinθ` is a closed surface swept by the spherical angles
//! `(θ, φ)`. This crate computes its quantum geometry (quantum geometric
//! tensor, Fubini-Study metric, Berry curvature, Gauss/geodesic curvature)
//! and topology (first Chern number by plaquette, spectral-quadrature,
//! dynamical and two-patch routes), the real-space monopole analogues, and
//! the nonadiabatic ramp dynamics used to measure curvature through the
//! generalized-force response.
//!
//! Angular frequencies are in rad/µs throughout, time in µs, `ħ = 1`.

pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod monopole;
pub mod numeric;
pub mod qubit;
pub mod runner;
pub mod sweep;
pub mod topology;

pub use error::Error;
pub use qubit::{Band, DriveParams, EigenSystem, Hermitian2, SpherePoint, State2, C64};

/// Crate result alias.
pub type Result<T> = std::result::Result<T, Error>;

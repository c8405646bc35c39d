//! Temperature-dependent dispersion (Casimir-Polder) interactions between
//! two ground-state atoms, in free space and in front of a perfectly
//! reflecting wall.
//!
//! The library evaluates the interaction energy
//!
//! ```text
//! W(R, T) = −(1/2π) Im ∫₀^∞ dk coth(k/2T) α_A(k) α_B(k) Σ_lm Vc_lm(k,R)²
//! ```
//!
//! (natural units, ħ = c = k_B = 1) and its image-dressed counterpart near
//! a wall, by several mutually checking routes:
//!
//! * [`potentials`] — the user-facing entry points: full real-axis
//!   integrals, the near-zone form, far-zone operator forms valid at any
//!   temperature, and every closed-form limit (zero-T, high-T, and the
//!   mixed wall regime), with automatic regime dispatch;
//! * [`matsubara`] — the same free-space energy from the imaginary axis
//!   (thermal sum / zero-T integral), numerically disjoint from the
//!   real-axis machinery and used as a built-in oracle;
//! * [`tensors`], [`operators`] — the dipole coupling tensors, their
//!   contractions, and the far-zone radial operators;
//! * [`quadrature`] — the oscillatory-integral engine (Abel-regularized
//!   vacuum pass plus exponentially weighted thermal pass) with honest
//!   error estimates and a start-up self-test on closed-form integrals;
//! * [`atom`], [`thermal`], [`geometry`], [`units`] — input models:
//!   transition data, bath, wall geometry, and gaussian-cgs conversion.
//!
//! Internally everything is in natural units; [`units::UnitSystem`]
//! converts at the boundary. Energies are in units of ħc × cm⁻¹ when
//! lengths are in cm.

pub mod atom;
pub mod error;
pub mod findiff;
pub mod geometry;
pub mod matsubara;
pub mod operators;
pub mod potentials;
pub mod quadrature;
pub mod special;
pub mod tensors;
pub mod thermal;
pub mod units;

pub use atom::{AtomModel, Transition};
pub use error::{Error, Result};
pub use geometry::{FreeSpaceConfiguration, WallConfiguration};
pub use potentials::{
    free_space_potential, wall_potential, Method, MethodChoice, PotentialResult, RegimeLabel,
    WallTerms,
};
pub use quadrature::QuadratureOptions;
pub use thermal::ThermalBath;
pub use units::UnitSystem;

//! Isotropic ground-state atom models.
//!
//! An atom is a ladder of electric-dipole transitions (wavenumber k_p0,
//! squared dipole matrix element mu2_p0) plus an optional damping width γ.
//! Its dynamical polarizability in natural units is
//!
//!   α(k) = (2/3) Σ_p k_p0 mu2_p0 / (k_p0² − k² − iγk),
//!
//! reported as the real part when γ > 0. The damping is a pole prescription
//! for real-axis integration, not a physical linewidth model: closed-form
//! and imaginary-axis evaluations ignore it.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// One electric-dipole transition from the ground state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    /// Transition wavenumber k_p0 > 0 (energy over ħc).
    pub k0: f64,
    /// Squared dipole matrix element, ≥ 0.
    pub mu2: f64,
}

/// Immutable atom model; construction validates all invariants.
#[derive(Debug, Clone)]
pub struct AtomModel {
    transitions: Vec<Transition>,
    gamma: f64,
    resonance_tol: f64,
}

/// Default half-width (relative to k_p0) of the window around an undamped
/// resonance in which real-axis evaluation is refused.
pub const DEFAULT_RESONANCE_TOL: f64 = 1e-6;

impl AtomModel {
    pub fn new(transitions: Vec<Transition>, gamma: f64) -> Result<Self> {
        if transitions.is_empty() {
            return Err(Error::InvalidAtom("no transitions".into()));
        }
        for (i, t) in transitions.iter().enumerate() {
            if !(t.k0 > 0.0 && t.k0.is_finite()) {
                return Err(Error::InvalidAtom(format!(
                    "transition {} has non-positive wavenumber {}",
                    i + 1,
                    t.k0
                )));
            }
            if !(t.mu2 >= 0.0 && t.mu2.is_finite()) {
                return Err(Error::InvalidAtom(format!(
                    "transition {} has negative squared dipole element {}",
                    i + 1,
                    t.mu2
                )));
            }
        }
        if !transitions.iter().any(|t| t.mu2 > 0.0) {
            return Err(Error::InvalidAtom(
                "all transitions have zero dipole weight".into(),
            ));
        }
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidAtom(format!("damping must be ≥ 0, got {gamma}")));
        }
        Ok(AtomModel { transitions, gamma, resonance_tol: DEFAULT_RESONANCE_TOL })
    }

    /// Single-transition atom.
    pub fn two_level(k0: f64, mu2: f64, gamma: f64) -> Result<Self> {
        AtomModel::new(vec![Transition { k0, mu2 }], gamma)
    }

    /// An atom whose polarizability is flat at `alpha0` for k well below
    /// `cutoff` and whose static value is exactly `alpha0`. Used to emulate
    /// the static-polarizability limits while keeping a legal pole
    /// prescription (γ = 10⁻³ cutoff) for real-axis quadrature.
    pub fn quasi_static(alpha0: f64, cutoff: f64) -> Result<Self> {
        if !(alpha0 > 0.0) {
            return Err(Error::InvalidAtom(format!(
                "quasi-static polarizability must be > 0, got {alpha0}"
            )));
        }
        AtomModel::two_level(cutoff, 1.5 * alpha0 * cutoff, 1e-3 * cutoff)
    }

    /// Override the refusal window around undamped resonances.
    pub fn with_resonance_tolerance(mut self, tol: f64) -> Self {
        self.resonance_tol = tol.max(0.0);
        self
    }

    /// Replace the damping width (validated).
    pub fn with_gamma(mut self, gamma: f64) -> Result<Self> {
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidAtom(format!("damping must be ≥ 0, got {gamma}")));
        }
        self.gamma = gamma;
        Ok(self)
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn min_k0(&self) -> f64 {
        self.transitions.iter().map(|t| t.k0).fold(f64::INFINITY, f64::min)
    }

    pub fn max_k0(&self) -> f64 {
        self.transitions.iter().map(|t| t.k0).fold(0.0, f64::max)
    }

    /// α(0) = (2/3) Σ mu2/k_p0; independent of γ.
    pub fn static_polarizability(&self) -> f64 {
        (2.0 / 3.0) * self.transitions.iter().map(|t| t.mu2 / t.k0).sum::<f64>()
    }

    /// Real dynamical polarizability at real wavenumber k ≥ 0.
    ///
    /// γ = 0: exact pole form, refusing evaluation within the resonance
    /// window. γ > 0: real part of the damped form.
    pub fn dynamic_polarizability(&self, k: f64) -> Result<f64> {
        if !(k >= 0.0) {
            return Err(Error::Domain(format!("wavenumber must be ≥ 0, got {k}")));
        }
        if self.gamma == 0.0 {
            for t in &self.transitions {
                if (k - t.k0).abs() <= self.resonance_tol * t.k0 {
                    return Err(Error::ResonanceSingularity {
                        k,
                        k_resonance: t.k0,
                        tolerance: self.resonance_tol * t.k0,
                    });
                }
            }
            Ok((2.0 / 3.0)
                * self
                    .transitions
                    .iter()
                    .map(|t| t.k0 * t.mu2 / (t.k0 * t.k0 - k * k))
                    .sum::<f64>())
        } else {
            Ok(self.polarizability_retarded(k).re)
        }
    }

    /// Complex retarded polarizability (2/3) Σ k_p0 mu2/(k_p0² − k² − iγk).
    ///
    /// All poles sit in the lower half of the complex k plane for γ > 0,
    /// which is what makes the real-axis potential integrals equal to their
    /// imaginary-axis (Matsubara) representation.
    pub fn polarizability_retarded(&self, k: f64) -> Complex64 {
        let g = self.gamma;
        (2.0 / 3.0)
            * self
                .transitions
                .iter()
                .map(|t| {
                    t.k0 * t.mu2 / Complex64::new(t.k0 * t.k0 - k * k, -g * k)
                })
                .sum::<Complex64>()
    }

    /// Polarizability on the imaginary frequency axis, α(iξ); γ is ignored
    /// (the Matsubara representation is taken at the undamped poles).
    pub fn polarizability_imag_axis(&self, xi: f64) -> f64 {
        (2.0 / 3.0)
            * self
                .transitions
                .iter()
                .map(|t| t.k0 * t.mu2 / (t.k0 * t.k0 + xi * xi))
                .sum::<f64>()
    }

    /// Parse the line-oriented atom block:
    ///
    /// ```text
    /// # comment
    /// transition <k_p0> <mu2>     (one line per transition)
    /// gamma <width>               (optional, at most once)
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut transitions = Vec::new();
        let mut gamma: Option<f64> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let word = parts.next().unwrap();
            let lineno = idx + 1;
            match word {
                "transition" => {
                    let k0 = parse_number(parts.next(), "k_p0", lineno)?;
                    let mu2 = parse_number(parts.next(), "mu2", lineno)?;
                    if parts.next().is_some() {
                        return Err(Error::InvalidAtom(format!(
                            "line {lineno}: trailing fields after `transition k_p0 mu2`"
                        )));
                    }
                    transitions.push(Transition { k0, mu2 });
                }
                "gamma" => {
                    if gamma.is_some() {
                        return Err(Error::InvalidAtom(format!(
                            "line {lineno}: duplicate `gamma`"
                        )));
                    }
                    gamma = Some(parse_number(parts.next(), "gamma", lineno)?);
                    if parts.next().is_some() {
                        return Err(Error::InvalidAtom(format!(
                            "line {lineno}: trailing fields after `gamma <width>`"
                        )));
                    }
                }
                other => {
                    return Err(Error::InvalidAtom(format!(
                        "line {lineno}: unknown directive `{other}` (expected `transition` or `gamma`)"
                    )));
                }
            }
        }
        AtomModel::new(transitions, gamma.unwrap_or(0.0))
    }
}

fn parse_number(field: Option<&str>, name: &str, lineno: usize) -> Result<f64> {
    let s = field.ok_or_else(|| {
        Error::InvalidAtom(format!("line {lineno}: missing {name} value"))
    })?;
    s.parse::<f64>().map_err(|_| {
        Error::InvalidAtom(format!("line {lineno}: cannot parse {name} value `{s}`"))
    })
}

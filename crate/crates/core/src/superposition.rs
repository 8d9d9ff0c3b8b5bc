//! The equal-weight superposition of a position-localized component and its
//! momentum companion, with interval probabilities computed both from the
//! localization coefficients and by exact integration.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::localization::LocalizationCoefficients;
use crate::numerics::QuadratureSpec;
use crate::wavefunction::{momentum_companion, Interval, Representation, Wavefunction};

/// Overlaps below this magnitude leave the relative phase undefined.
pub const PHASE_EPSILON: f64 = 1e-12;

/// Physical configuration in units `hbar = m = 1`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Scenario {
    /// Position interval width `L`.
    pub length: f64,
    /// Uncertainty suppression factor `U = L B / (2 pi hbar)`.
    pub suppression: f64,
    /// Momentum interval width `B`.
    pub bandwidth: f64,
    /// Evaluation time `m L / B`.
    pub time: f64,
}

impl Scenario {
    pub const HBAR: f64 = 1.0;
    pub const MASS: f64 = 1.0;

    /// `L = 1`.
    pub fn new(suppression: f64) -> Result<Self> {
        Scenario::with_length(1.0, suppression)
    }

    pub fn with_length(length: f64, suppression: f64) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::invalid("interval width L must be positive"));
        }
        if !(suppression > 0.0 && suppression.is_finite()) {
            return Err(Error::invalid("suppression factor U must be positive"));
        }
        let bandwidth = 2.0 * PI * suppression * Self::HBAR / length;
        Ok(Scenario {
            length,
            suppression,
            bandwidth,
            time: Self::MASS * length / bandwidth,
        })
    }

    /// The scenario in which a two-Gaussian state with position widths
    /// `sigma1`, `sigma2` is symmetric under the Fourier transform:
    /// `4 pi U sigma1 sigma2 = L^2`.
    pub fn from_sigmas(sigma1: f64, sigma2: f64, length: f64) -> Result<Self> {
        if !(sigma1 > 0.0 && sigma2 > 0.0) {
            return Err(Error::invalid("gaussian widths must be positive"));
        }
        Scenario::with_length(length, length * length / (4.0 * PI * sigma1 * sigma2))
    }

    pub fn hbar(&self) -> f64 {
        Self::HBAR
    }

    pub fn mass(&self) -> f64 {
        Self::MASS
    }

    pub fn position_interval(&self) -> Interval {
        Interval {
            lo: -0.5 * self.length,
            hi: 0.5 * self.length,
        }
    }

    pub fn momentum_interval(&self) -> Interval {
        Interval {
            lo: -0.5 * self.bandwidth,
            hi: 0.5 * self.bandwidth,
        }
    }

    /// The straight-line target `|x(t)| <= L`.
    pub fn target_interval(&self) -> Interval {
        Interval {
            lo: -self.length,
            hi: self.length,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Position,
    Momentum,
}

/// `(phi_L + phi_B) / sqrt(2 + 2 <phi_L|phi_B>)` with the phase of `phi_B`
/// chosen so the overlap is real and non-negative. Both components are
/// stored in the position representation.
#[derive(Debug, Clone, PartialEq)]
pub struct PlusState {
    pub phi_l: Wavefunction,
    pub phi_b: Wavefunction,
    pub overlap: f64,
    pub normalization: f64,
    /// False when the raw overlap was too small to fix the phase.
    pub phase_fixed: bool,
}

impl PlusState {
    /// Phase-fixes `phi_b` against `phi_l` and assembles the state.
    pub fn assemble(phi_l: Wavefunction, phi_b: Wavefunction) -> Result<Self> {
        let phi_l = phi_l.in_representation(Representation::Position)?;
        let phi_b = phi_b.in_representation(Representation::Position)?;
        let raw = phi_l.inner_product(&phi_b)?;
        let magnitude = raw.norm();
        let (phi_b, overlap, phase_fixed) = if magnitude < PHASE_EPSILON {
            (phi_b, 0.0, false)
        } else {
            let phase = raw.conj() / magnitude;
            let fixed = phi_b.scaled(phase);
            (fixed, magnitude, true)
        };
        Ok(PlusState {
            phi_l,
            phi_b,
            overlap,
            normalization: 1.0 / (2.0 + 2.0 * overlap).sqrt(),
            phase_fixed,
        })
    }

    /// The assembled position-space amplitude.
    pub fn state(&self) -> Wavefunction {
        let n = Complex64::new(self.normalization, 0.0);
        Wavefunction {
            representation: Representation::Position,
            form: crate::wavefunction::Form::Superposition(vec![
                (n, self.phi_l.clone()),
                (n, self.phi_b.clone()),
            ]),
        }
    }
}

/// Builds `psi_+` from a position-localized component and its momentum companion.
pub fn build_plus_state(phi_l: &Wavefunction, scenario: &Scenario) -> Result<PlusState> {
    if phi_l.representation != Representation::Position {
        return Err(Error::invalid(
            "phi_L must be given in the position representation",
        ));
    }
    let companion = momentum_companion(phi_l, scenario)?;
    let state = PlusState::assemble(phi_l.clone(), companion)?;
    if !state.phase_fixed {
        let magnitude = phi_l
            .inner_product(&state.phi_b)
            .map(|z| z.norm())
            .unwrap_or(0.0);
        return Err(Error::PhaseUndefined { magnitude });
    }
    Ok(state)
}

/// `|C|^2 sqrt(U)`, the small-U overlap of the two components.
pub fn overlap_estimate(csq: f64, u: f64) -> f64 {
    csq * u.sqrt()
}

/// Exact probability of the position interval `|x| <= L/2` (or the momentum
/// interval `|p| <= B/2`).
pub fn plus_interval_probability(
    state: &PlusState,
    scenario: &Scenario,
    which: Target,
) -> Result<f64> {
    plus_interval_probability_with(state, scenario, which, &QuadratureSpec::default())
}

pub fn plus_interval_probability_with(
    state: &PlusState,
    scenario: &Scenario,
    which: Target,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let psi = state.state();
    match which {
        Target::Position => psi.interval_probability_with(&scenario.position_interval(), spec),
        Target::Momentum => psi
            .fourier_transform()?
            .interval_probability_with(&scenario.momentum_interval(), spec),
    }
}

/// `(1 - eta + |C|^2 U + 2 gamma |C|^2 sqrt(U)) / (2 + 2 |C|^2 sqrt(U))`.
pub fn plus_interval_probability_estimate(coeffs: &LocalizationCoefficients, u: f64) -> f64 {
    let csq = coeffs.csq();
    let s = csq * u.sqrt();
    (1.0 - coeffs.mismatch + csq * u + 2.0 * coeffs.cross_section * s) / (2.0 + 2.0 * s)
}

/// `P(L) + P(B) - 1` from exact integration.
pub fn joint_lower_bound_exact(state: &PlusState, scenario: &Scenario) -> Result<f64> {
    let pl = plus_interval_probability(state, scenario, Target::Position)?;
    let pb = plus_interval_probability(state, scenario, Target::Momentum)?;
    Ok(pl + pb - 1.0)
}

/// `(|C|^2 U + (2 gamma - 1) |C|^2 sqrt(U) - eta) / (1 + |C|^2 sqrt(U))`.
pub fn joint_lower_bound_formula(csq: f64, eta: f64, gamma: f64, u: f64) -> f64 {
    let s = csq * u.sqrt();
    (csq * u + (2.0 * gamma - 1.0) * s - eta) / (1.0 + s)
}

/// `P(L) + P(B) <= 1 + sqrt(U)`, with a `1e-9` allowance for roundoff.
pub fn uncertainty_bound_check(pl: f64, pb: f64, u: f64) -> bool {
    pl + pb <= 1.0 + u.sqrt() + 1e-9
}

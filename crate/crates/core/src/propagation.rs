//! Free evolution to `t = m L / B`, the interference pattern of the two
//! components, and the probability of the straight-line target `|x| <= L`.
//!
//! Evolution multiplies momentum amplitudes by `exp(-i p^2 t / (2 m))`.
//! Gaussians stay Gaussian, grids take the spectral path, and rectangles
//! (or their sinc transforms) become [`Evolved`] amplitudes evaluated by
//! quadrature over the compact side.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::numerics::{integrate_complex_estimate, integrate_panels, QuadratureSpec};
use crate::superposition::{PlusState, Scenario};
use crate::wavefunction::{Evolved, Form, Representation, Wavefunction};

/// Minimum number of panels over `[-L, L]` for the target probability.
pub const TARGET_PANELS: usize = 64;

const SOURCE_PANELS: usize = 4;

/// Position amplitude of an [`Evolved`] wavefunction at `x`.
///
/// Position sources use the free kernel `sqrt(m / (2 pi i t)) exp(i m (x - y)^2 / (2 t))`;
/// momentum sources the plane-wave sum `int phi(p) exp(-i p^2 t / (2 m) + i p x) dp / sqrt(2 pi)`.
/// Quadrature that misses its tolerance still returns its best estimate.
pub(crate) fn evaluate_evolved(e: &Evolved, x: f64) -> Complex64 {
    let source = &e.source;
    if e.time == 0.0 {
        return match source.in_representation(Representation::Position) {
            Ok(wf) => wf.evaluate(x),
            Err(_) => Complex64::new(f64::NAN, f64::NAN),
        };
    }
    let compact = match source.support() {
        Some(_) => (**source).clone(),
        None => match source.fourier_transform() {
            Ok(t) if t.support().is_some() => t,
            _ => return Complex64::new(f64::NAN, f64::NAN),
        },
    };
    let (lo, hi) = compact.support().expect("checked above");
    let spec = QuadratureSpec::default();
    let (t, m) = (e.time, e.mass);
    let value = match compact.representation {
        Representation::Position => {
            let prefactor = (Complex64::new(m, 0.0) / Complex64::new(0.0, 2.0 * PI * t)).sqrt();
            let k = m / (2.0 * t);
            integrate_complex_estimate(
                |y| {
                    let d = x - y;
                    compact.evaluate(y) * Complex64::from_polar(1.0, k * d * d)
                },
                lo,
                hi,
                SOURCE_PANELS,
                &spec,
            )
            .map(|(v, _)| prefactor * v)
        }
        Representation::Momentum => {
            let tau = t / (2.0 * m);
            integrate_complex_estimate(
                |p| compact.evaluate(p) * Complex64::from_polar(1.0, p * x - tau * p * p),
                lo,
                hi,
                SOURCE_PANELS,
                &spec,
            )
            .map(|(v, _)| v / (2.0 * PI).sqrt())
        }
    };
    value.unwrap_or(Complex64::new(f64::NAN, f64::NAN))
}

/// Evolves `wf` freely for time `t` with the scenario's mass; the result is
/// in the position representation. Negative `t` runs backwards.
pub fn propagate_free(wf: &Wavefunction, t: f64, scenario: &Scenario) -> Result<Wavefunction> {
    evolve(wf, t, scenario.mass())
}

pub fn evolve(wf: &Wavefunction, t: f64, mass: f64) -> Result<Wavefunction> {
    if !t.is_finite() {
        return Err(Error::invalid("propagation time must be finite"));
    }
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(Error::invalid("mass must be positive"));
    }
    if t == 0.0 {
        return wf.in_representation(Representation::Position);
    }
    let tau = t / (2.0 * mass);
    let momentum_side = |wf: &Wavefunction| wf.in_representation(Representation::Momentum);
    let form = match &wf.form {
        Form::Gaussian(_) => {
            let Form::Gaussian(g) = momentum_side(wf)?.form else {
                unreachable!("gaussians transform to gaussians")
            };
            let chirped =
                Wavefunction::new(Representation::Momentum, Form::Gaussian(g.chirped(tau)))?;
            return chirped.fourier_transform();
        }
        Form::Grid(_) => {
            let Form::Grid(g) = momentum_side(wf)?.form else {
                unreachable!("grids transform to grids")
            };
            return Ok(Wavefunction::grid(
                Representation::Position,
                g.chirped(tau).transform(1.0)?,
            ));
        }
        Form::Rectangle(_) => Form::Evolved(Evolved {
            source: Box::new(wf.clone()),
            time: t,
            mass,
        }),
        Form::Sinc(_) => Form::Evolved(Evolved {
            source: Box::new(wf.fourier_transform()?),
            time: t,
            mass,
        }),
        Form::Superposition(parts) => Form::Superposition(
            parts
                .iter()
                .map(|(w, part)| evolve(part, t, mass).map(|p| (*w, p)))
                .collect::<Result<_>>()?,
        ),
        Form::Evolved(e) => {
            if e.mass != mass {
                return Err(Error::invalid(
                    "cannot chain evolutions with different masses",
                ));
            }
            let total = e.time + t;
            if total == 0.0 {
                return e.source.in_representation(Representation::Position);
            }
            Form::Evolved(Evolved {
                source: e.source.clone(),
                time: total,
                mass,
            })
        }
    };
    Wavefunction::new(Representation::Position, form)
}

/// Spectral evolution of a sampled amplitude without resolution checks.
///
/// Tails that leave the box wrap around; use only when that loss is
/// bounded separately.
pub fn evolve_grid_unchecked(
    grid: &Grid,
    representation: Representation,
    t: f64,
    mass: f64,
) -> Grid {
    let momentum = match representation {
        Representation::Position => grid.transform_unchecked(-1.0),
        Representation::Momentum => grid.clone(),
    };
    momentum.chirped(t / (2.0 * mass)).transform_unchecked(1.0)
}

/// `psi_+` evolved to `t = m L / B`, keeping the two components apart for
/// the envelope.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagatedState {
    /// The position amplitude at `time`.
    pub amplitude: Wavefunction,
    /// Normalized contributions of `phi_L` and `phi_B` to `amplitude`.
    pub components: [Wavefunction; 2],
    pub time: f64,
    pub scenario: Scenario,
    pub source: PlusState,
    /// Accuracy for the integrals over `[-L, L]`.
    pub spec: QuadratureSpec,
}

impl PropagatedState {
    pub fn new(state: &PlusState, scenario: &Scenario) -> Result<Self> {
        PropagatedState::at_time(state, scenario, scenario.time)
    }

    pub fn at_time(state: &PlusState, scenario: &Scenario, time: f64) -> Result<Self> {
        let n = Complex64::new(state.normalization, 0.0);
        let l = propagate_free(&state.phi_l, time, scenario)?.scaled(n);
        let b = propagate_free(&state.phi_b, time, scenario)?.scaled(n);
        let amplitude = Wavefunction::superposition(
            Representation::Position,
            vec![
                (Complex64::new(1.0, 0.0), l.clone()),
                (Complex64::new(1.0, 0.0), b.clone()),
            ],
        )?;
        Ok(PropagatedState {
            amplitude,
            components: [l, b],
            time,
            scenario: *scenario,
            source: state.clone(),
            spec: QuadratureSpec::default(),
        })
    }

    pub fn with_spec(mut self, spec: QuadratureSpec) -> Self {
        self.spec = spec;
        self
    }

    /// `|psi(x, t)|^2`.
    pub fn density(&self, x: f64) -> f64 {
        self.amplitude.evaluate(x).norm_sqr()
    }

    /// `(|n phi_L(x, t)| + |n phi_B(x, t)|)^2`, the density with the
    /// interference cosine replaced by one.
    pub fn envelope_density(&self, x: f64) -> f64 {
        let s = self.components[0].evaluate(x).norm() + self.components[1].evaluate(x).norm();
        s * s
    }

    pub fn norm_squared(&self) -> Result<f64> {
        self.amplitude.norm_squared()
    }

    /// `int_{-L}^{L} |psi(x, t)|^2 dx`.
    pub fn target_probability(&self) -> Result<f64> {
        let iv = self.scenario.target_interval();
        integrate_panels(|x| self.density(x), iv.lo, iv.hi, TARGET_PANELS, &self.spec)
    }

    /// `int_{-L}^{L}` of the envelope density.
    pub fn target_envelope_probability(&self) -> Result<f64> {
        let iv = self.scenario.target_interval();
        integrate_panels(
            |x| self.envelope_density(x),
            iv.lo,
            iv.hi,
            TARGET_PANELS,
            &self.spec,
        )
    }
}

/// `P(M)`: probability of `|x| <= L` at `t = m L / B`, including the full
/// interference phase.
pub fn probability_m_exact(state: &PlusState, scenario: &Scenario) -> Result<f64> {
    PropagatedState::new(state, scenario)?.target_probability()
}

/// The envelope integral, an upper bound on [`probability_m_exact`].
pub fn probability_m_envelope_integral(state: &PlusState, scenario: &Scenario) -> Result<f64> {
    PropagatedState::new(state, scenario)?.target_envelope_probability()
}

/// `4 |C|^2 U / (1 + |C|^2 sqrt(U))`.
pub fn probability_m_envelope(csq: f64, u: f64) -> f64 {
    4.0 * csq * u / (1.0 + csq * u.sqrt())
}

/// Exact `|psi_+(x, m L / B)|^2`.
pub fn interference_pattern_density(state: &PlusState, scenario: &Scenario, x: f64) -> Result<f64> {
    Ok(PropagatedState::new(state, scenario)?.density(x))
}

/// `2 |phi_B(x)|^2 cos^2((pi/2)(sqrt(U) x / L)^2 - pi/8) / (1 + overlap)`,
/// which treats `phi_B` as stationary.
pub fn approximate_pattern_density(state: &PlusState, scenario: &Scenario, x: f64) -> f64 {
    let y = scenario.suppression.sqrt() * x / scenario.length;
    let c = (0.5 * PI * y * y - PI / 8.0).cos();
    2.0 * state.phi_b.evaluate(x).norm_sqr() * c * c / (1.0 + state.overlap)
}

/// `(4 sqrt(U) / (1 + sqrt(U))) (1/2 + cos(pi (sqrt(U) x / L)^2 - pi/4) / 2)`,
/// the pattern of the ideal rectangle pair in units of `1 / L`.
pub fn scaled_pattern(u: f64, x_over_l: f64) -> f64 {
    let r = u.sqrt();
    let y = r * x_over_l;
    4.0 * r / (1.0 + r) * (0.5 + 0.5 * (PI * y * y - PI / 4.0).cos())
}

/// `L / sqrt(U)`, the integral of the chirped cosine of the pattern.
pub fn effective_width(u: f64, length: f64) -> f64 {
    length / u.sqrt()
}

/// [`effective_width`] by quadrature of `cos(pi (sqrt(U) x / L)^2 - pi/4)`
/// out to the `periods`-th zero of the phase, plus the leading Fresnel tail.
pub fn effective_width_numeric(u: f64, length: f64, periods: usize) -> Result<f64> {
    if !(u > 0.0 && length > 0.0) {
        return Err(Error::invalid("U and L must be positive"));
    }
    if periods == 0 {
        return Err(Error::invalid("need at least one period"));
    }
    // pi Y^2 - pi/4 = n pi at the cut
    let n = periods as f64;
    let y_max = (n + 0.25).sqrt();
    let head = integrate_panels(
        |y| (PI * y * y - PI / 4.0).cos(),
        0.0,
        y_max,
        4 * periods,
        &QuadratureSpec::default(),
    )?;
    let sign = if periods.is_multiple_of(2) { 1.0 } else { -1.0 };
    let tail = sign / (4.0 * PI * PI * y_max.powi(3));
    Ok(2.0 * (head + tail) * length / u.sqrt())
}

/// One row of the density-profile export.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ProfileRow {
    pub x: f64,
    pub density_exact: f64,
    pub density_envelope: f64,
    pub density_approx: f64,
}

/// `points` evenly spaced samples over `[-x_max, x_max]` at the state's time.
pub fn density_profile(
    propagated: &PropagatedState,
    x_max: f64,
    points: usize,
) -> Result<Vec<ProfileRow>> {
    if !(x_max > 0.0 && x_max.is_finite()) {
        return Err(Error::invalid("x_max must be positive"));
    }
    if points < 2 {
        return Err(Error::invalid("profile needs at least two points"));
    }
    let step = 2.0 * x_max / (points - 1) as f64;
    Ok((0..points)
        .map(|k| {
            let x = -x_max + step * k as f64;
            ProfileRow {
                x,
                density_exact: propagated.density(x),
                density_envelope: propagated.envelope_density(x),
                density_approx: approximate_pattern_density(
                    &propagated.source,
                    &propagated.scenario,
                    x,
                ),
            }
        })
        .collect())
}

/// CSV with header `x,density_exact,density_envelope,density_approx`.
pub fn write_profile_csv<W: Write>(rows: &[ProfileRow], out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Csv(e.to_string());
    wtr.write_record(["x", "density_exact", "density_envelope", "density_approx"])
        .map_err(io)?;
    for r in rows {
        wtr.write_record([
            format!("{:.8e}", r.x),
            format!("{:.8e}", r.density_exact),
            format!("{:.8e}", r.density_envelope),
            format!("{:.8e}", r.density_approx),
        ])
        .map_err(io)?;
    }
    wtr.flush().map_err(|e| Error::Csv(e.to_string()))
}

//! Localization coefficients of a component against its target interval:
//! coherent spread `C`, statistical mismatch `eta` and coherent
//! cross-section `gamma`, with the Gaussian closed forms.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{erf, erfc, integrate, integrate_complex, QuadratureSpec};
use crate::wavefunction::{Form, Gaussian, Interval, Representation, Wavefunction};

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LocalizationCoefficients {
    /// `C = L^(-1/2) int phi_L dx`.
    pub coherent_spread: Complex64,
    /// `eta`, the weight outside `|x| <= L/2`.
    pub mismatch: f64,
    /// `gamma`, the share of the coherent integral inside `|x| <= L/2`.
    pub cross_section: f64,
}

impl LocalizationCoefficients {
    /// The ideal rectangle of width `L`: `C = 1`, `eta = 0`, `gamma = 1`.
    pub fn rectangle() -> Self {
        LocalizationCoefficients {
            coherent_spread: Complex64::new(1.0, 0.0),
            mismatch: 0.0,
            cross_section: 1.0,
        }
    }

    /// `|C|^2`.
    pub fn csq(&self) -> f64 {
        self.coherent_spread.norm_sqr()
    }

    /// `1 - gamma`.
    pub fn coherent_mismatch(&self) -> f64 {
        1.0 - self.cross_section
    }

    /// All three coefficients by the generic integration path.
    pub fn of(phi_l: &Wavefunction, length: f64) -> Result<Self> {
        Ok(LocalizationCoefficients {
            coherent_spread: coherent_spread(phi_l, length)?,
            mismatch: statistical_mismatch(phi_l, length)?,
            cross_section: coherent_cross_section(phi_l, length)?,
        })
    }

    /// All three coefficients by direct adaptive quadrature of `phi_L`,
    /// bypassing any closed-form interval integrals. Needs a component of
    /// bounded support.
    pub fn by_quadrature(phi_l: &Wavefunction, length: f64, spec: &QuadratureSpec) -> Result<Self> {
        check_position(phi_l, length)?;
        let (lo, hi) = phi_l.support().ok_or(Error::Unsupported(
            "quadrature needs a component of bounded support",
        ))?;
        let half = 0.5 * length;
        let amp = |a: f64, b: f64| -> Result<Complex64> {
            if b > a {
                integrate_complex(|x| phi_l.evaluate(x), a, b, spec)
            } else {
                Ok(Complex64::new(0.0, 0.0))
            }
        };
        let prob = |a: f64, b: f64| -> Result<f64> {
            if b > a {
                integrate(|x| phi_l.evaluate(x).norm_sqr(), a, b, spec)
            } else {
                Ok(0.0)
            }
        };
        let (a, b) = (lo.max(-half), hi.min(half));
        let inside = amp(a, b)?;
        let total = inside + amp(lo, a)? + amp(b, hi)?;
        if total.norm() < 1e-12 * length.sqrt() {
            return Err(Error::DegenerateState {
                magnitude: total.norm(),
            });
        }
        Ok(LocalizationCoefficients {
            coherent_spread: total / length.sqrt(),
            mismatch: 1.0 - prob(a, b)?,
            cross_section: (inside / total).re,
        })
    }
}

fn check_position(phi_l: &Wavefunction, length: f64) -> Result<()> {
    if phi_l.representation != Representation::Position {
        return Err(Error::invalid(
            "localized component must be in the position representation",
        ));
    }
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::invalid("interval width L must be positive"));
    }
    Ok(())
}

pub fn coherent_spread(phi_l: &Wavefunction, length: f64) -> Result<Complex64> {
    check_position(phi_l, length)?;
    Ok(phi_l.amplitude_integral(None)? / length.sqrt())
}

pub fn statistical_mismatch(phi_l: &Wavefunction, length: f64) -> Result<f64> {
    check_position(phi_l, length)?;
    Ok(1.0 - phi_l.interval_probability(&Interval::centered(length)?)?)
}

pub fn coherent_cross_section(phi_l: &Wavefunction, length: f64) -> Result<f64> {
    check_position(phi_l, length)?;
    let total = phi_l.amplitude_integral(None)?;
    if total.norm() < 1e-12 * length.sqrt() {
        return Err(Error::DegenerateState {
            magnitude: total.norm(),
        });
    }
    let inside = phi_l.amplitude_integral(Some(&Interval::centered(length)?))?;
    Ok((inside / total).re)
}

/// Closed forms for the Gaussian family parameterized by `|C|^2`:
/// `eta = 1 - erf(sqrt(pi) / |C|^2)`, `gamma = erf(sqrt(pi/2) / |C|^2)`.
pub fn gaussian_coefficients(csq: f64) -> Result<LocalizationCoefficients> {
    if !(csq > 0.0 && csq.is_finite()) {
        return Err(Error::invalid("squared coherent spread must be positive"));
    }
    Ok(LocalizationCoefficients {
        coherent_spread: Complex64::new(csq.sqrt(), 0.0),
        mismatch: erfc(PI.sqrt() / csq),
        cross_section: erf((PI / 2.0).sqrt() / csq),
    })
}

/// `sigma1 = |C|^2 L / sqrt(8 pi)` and `sigma2 = L / (sqrt(2 pi) U |C|^2)`.
pub fn gaussian_sigmas(csq: f64, u: f64, length: f64) -> Result<(f64, f64)> {
    if !(csq > 0.0 && u > 0.0 && length > 0.0) {
        return Err(Error::invalid("csq, U and L must be positive"));
    }
    let sigma1 = csq * length / (8.0 * PI).sqrt();
    let sigma2 = length / ((2.0 * PI).sqrt() * u * csq);
    Ok((sigma1, sigma2))
}

/// `sqrt(2 / (|C|^2 L)) exp(-2 pi (x / (|C|^2 L))^2)`.
pub fn gaussian_component(csq: f64, length: f64) -> Result<Wavefunction> {
    if !(csq > 0.0 && length > 0.0) {
        return Err(Error::invalid("csq and L must be positive"));
    }
    let width = csq * length;
    let amplitude = Complex64::new((2.0 / width).sqrt(), 0.0);
    let sigma = width / (8.0 * PI).sqrt();
    Wavefunction::new(
        Representation::Position,
        Form::Gaussian(Gaussian::with_amplitude(sigma, 0.0, amplitude)?),
    )
}

/// Unit rectangle of width `L` centred on zero.
pub fn rectangle_component(length: f64) -> Result<Wavefunction> {
    Wavefunction::rectangle(Representation::Position, length, 0.0)
}

/// `|C|^2 U`, the small-U momentum-interval probability of `phi_L`.
pub fn cross_probability(csq: f64, u: f64) -> f64 {
    csq * u
}

/// `|C|^2 U - eta`, the joint bound of a single localized component.
pub fn single_component_joint(coeffs: &LocalizationCoefficients, u: f64) -> f64 {
    coeffs.csq() * u - coeffs.mismatch
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superposition::Scenario;
    use crate::wavefunction::momentum_companion;

    #[test]
    fn rectangle_coefficients() {
        let r = rectangle_component(1.0).unwrap();
        let c = LocalizationCoefficients::of(&r, 1.0).unwrap();
        assert!((c.coherent_spread.re - 1.0).abs() < 1e-15);
        assert!(c.mismatch.abs() < 1e-15);
        assert!((c.cross_section - 1.0).abs() < 1e-15);
        assert_eq!(LocalizationCoefficients::rectangle().csq(), 1.0);
    }

    #[test]
    fn family_is_self_consistent() {
        for &csq in &[0.1, 0.5, 0.8, 1.0, 1.3, 2.5] {
            let phi = gaussian_component(csq, 1.0).unwrap();
            assert!((phi.norm_squared().unwrap() - 1.0).abs() < 1e-14);
            let c = coherent_spread(&phi, 1.0).unwrap();
            assert!((c.norm_sqr() - csq).abs() < 1e-13);
        }
    }

    #[test]
    fn quadrature_matches_closed_forms() {
        let spec = QuadratureSpec::default();
        for csq in [0.5, 0.8, 1.0, 1.3] {
            let closed = gaussian_coefficients(csq).unwrap();
            let phi = gaussian_component(csq, 1.0).unwrap();
            let quad = LocalizationCoefficients::by_quadrature(&phi, 1.0, &spec).unwrap();
            assert!((quad.csq() - closed.csq()).abs() < 1e-9, "{csq}");
            assert!((quad.mismatch - closed.mismatch).abs() < 1e-9, "{csq}");
            assert!(
                (quad.cross_section - closed.cross_section).abs() < 1e-9,
                "{csq}"
            );
        }
        let rect = rectangle_component(1.0).unwrap();
        let quad = LocalizationCoefficients::by_quadrature(&rect, 1.0, &spec).unwrap();
        assert!((quad.csq() - 1.0).abs() < 1e-12);
        assert!(quad.mismatch.abs() < 1e-12);
        assert!((quad.cross_section - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unreachable_tolerance_is_an_accuracy_error() {
        let phi = gaussian_component(0.8, 1.0).unwrap();
        let spec = QuadratureSpec::with_tolerance(1e-300).unwrap();
        let err = LocalizationCoefficients::by_quadrature(&phi, 1.0, &spec).unwrap_err();
        assert!(err.is_numerical(), "{err}");
    }

    #[test]
    fn optimum_width() {
        let phi = Wavefunction::gaussian(Representation::Position, 0.1596, 0.0).unwrap();
        let c = coherent_spread(&phi, 1.0).unwrap();
        assert!((c.norm_sqr() - 0.8).abs() < 2e-4, "{}", c.norm_sqr());
        let (s1, s2) = gaussian_sigmas(0.8, 0.022, 1.0).unwrap();
        assert!((s1 - 0.1596).abs() < 1e-4);
        assert!((s2 - 22.667).abs() < 1e-3);
    }

    #[test]
    fn sigma_product_identity() {
        for &(csq, u, l) in &[
            (0.8, 0.022, 1.0),
            (0.8 * 2f64.sqrt(), 0.022, 2.0),
            (1.2, 0.07, 0.3),
        ] {
            let (s1, s2) = gaussian_sigmas(csq, u, l).unwrap();
            assert!((s1 * s2 - l * l / (4.0 * PI * u)).abs() < 1e-12 * s1 * s2);
        }
        let s = 1.0 / (8.0 * PI).sqrt();
        let u = 1.0 / (4.0 * PI * s * s);
        let (s1, s2) = gaussian_sigmas(1.0, u, 1.0).unwrap();
        assert!((s1 - s).abs() < 1e-15 && (s2 - s).abs() < 1e-14);
    }

    #[test]
    fn closed_form_values() {
        let c1 = gaussian_coefficients(1.0).unwrap();
        assert!((c1.mismatch - 0.012_19).abs() < 1e-5);
        assert!((c1.cross_section - 0.9237).abs() < 1e-4);
        let c8 = gaussian_coefficients(0.8).unwrap();
        assert!((c8.mismatch - 0.0017).abs() < 1e-4);
        assert!((c8.cross_section - 0.9733).abs() < 1e-4);
        assert!((c8.csq() - 0.8).abs() < 1e-15);
        let tiny = gaussian_coefficients(1e-3).unwrap();
        assert_eq!(tiny.mismatch, 0.0);
        assert_eq!(tiny.cross_section, 1.0);
        assert!(gaussian_coefficients(0.0).is_err());
    }

    #[test]
    fn closed_form_matches_integration() {
        for &csq in &[0.2, 0.6, 0.8, 1.0, 1.25, 2.0, 3.0] {
            let closed = gaussian_coefficients(csq).unwrap();
            let phi = gaussian_component(csq, 1.0).unwrap();
            let generic = LocalizationCoefficients::of(&phi, 1.0).unwrap();
            assert!((closed.mismatch - generic.mismatch).abs() < 1e-8);
            assert!((closed.cross_section - generic.cross_section).abs() < 1e-8);
            assert!((closed.csq() - generic.csq()).abs() < 1e-8);
        }
    }

    #[test]
    fn monotone_and_gamma_below_containment() {
        let mut prev = gaussian_coefficients(0.01).unwrap();
        for k in 2..=300 {
            let c = gaussian_coefficients(0.01 * k as f64).unwrap();
            assert!(c.mismatch >= prev.mismatch);
            assert!(c.cross_section <= prev.cross_section);
            prev = c;
        }
        for k in 1..=300 {
            let c = gaussian_coefficients(0.01 * k as f64).unwrap();
            // strict once erf separates from 1 in double precision
            assert!(c.cross_section <= 1.0 - c.mismatch);
            if k >= 40 {
                assert!(c.cross_section < 1.0 - c.mismatch);
            }
        }
    }

    #[test]
    fn contained_states_have_bounded_spread() {
        // nonnegative, unit norm, inside [-1/2, 1/2]
        let shapes = [
            Wavefunction::rectangle(Representation::Position, 0.4, 0.1).unwrap(),
            Wavefunction::rectangle(Representation::Position, 1.0, 0.0).unwrap(),
        ];
        for s in &shapes {
            assert!(coherent_spread(s, 1.0).unwrap().norm() <= 1.0 + 1e-15);
        }
    }

    #[test]
    fn degenerate_cross_section() {
        let a = Wavefunction::rectangle(Representation::Position, 0.5, -0.25).unwrap();
        let b = Wavefunction::rectangle(Representation::Position, 0.5, 0.25).unwrap();
        let odd = Wavefunction::superposition(
            Representation::Position,
            vec![
                (Complex64::new(1.0, 0.0), a),
                (Complex64::new(-1.0, 0.0), b),
            ],
        )
        .unwrap();
        assert!(matches!(
            coherent_cross_section(&odd, 1.0),
            Err(Error::DegenerateState { .. })
        ));
    }

    #[test]
    fn cross_probability_examples() {
        assert!((cross_probability(1.0, 0.024) - 0.024).abs() < 1e-15);
        assert!((cross_probability(0.8, 0.022) - 0.0176).abs() < 1e-15);
        assert_eq!(cross_probability(3.0, 0.0), 0.0);
    }

    #[test]
    fn cross_probability_vs_exact_momentum_probability() {
        let (csq, u) = (0.8, 0.022);
        let sc = Scenario::new(u).unwrap();
        let phi = gaussian_component(csq, 1.0).unwrap();
        let exact = phi
            .fourier_transform()
            .unwrap()
            .interval_probability(&sc.momentum_interval())
            .unwrap();
        let est = cross_probability(csq, u);
        assert!((exact - est).abs() / est < 0.05, "{exact} vs {est}");
        // same number read off the companion in position space
        let b = momentum_companion(&phi, &sc)
            .unwrap()
            .fourier_transform()
            .unwrap();
        let exact_b = b.interval_probability(&sc.position_interval()).unwrap();
        assert!((exact - exact_b).abs() < 1e-12);
    }

    #[test]
    fn single_component_examples() {
        assert!(
            (single_component_joint(&LocalizationCoefficients::rectangle(), 0.024) - 0.024).abs()
                < 1e-15
        );
        let c1 = gaussian_coefficients(1.0).unwrap();
        assert!((single_component_joint(&c1, 0.022) - 0.009_81).abs() < 1e-5);
        assert!((single_component_joint(&c1, 0.0) + c1.mismatch).abs() < 1e-15);
    }
}

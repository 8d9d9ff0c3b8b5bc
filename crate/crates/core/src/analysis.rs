//! Defect probability `P(L) + P(B) - 1 - P(M)`: closed-form bounds, exact
//! reports, and the sweep over `(U, |C|^2)`.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::localization::{
    gaussian_coefficients, gaussian_component, rectangle_component, LocalizationCoefficients,
};
use crate::numerics::QuadratureSpec;
use crate::propagation::{probability_m_envelope, PropagatedState};
use crate::superposition::{
    build_plus_state, plus_interval_probability_with, PlusState, Scenario, Target,
};
use crate::wavefunction::{Representation, Wavefunction};

/// Largest suppression factor accepted by [`sweep`].
pub const MAX_SWEEP_U: f64 = 0.12;

/// Bound on `|C|^2 sqrt(U)` for [`very_localized_probability`].
pub const VERY_LOCALIZED_LIMIT: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Gaussian,
    Rectangle,
}

impl Family {
    /// The position-localized component for `|C|^2` at interval width `L`.
    /// The rectangle ignores `csq`; it always has `|C|^2 = 1`.
    pub fn component(self, csq: f64, length: f64) -> Result<Wavefunction> {
        match self {
            Family::Gaussian => gaussian_component(csq, length),
            Family::Rectangle => rectangle_component(length),
        }
    }

    pub fn coefficients(self, csq: f64) -> Result<LocalizationCoefficients> {
        match self {
            Family::Gaussian => gaussian_coefficients(csq),
            Family::Rectangle => Ok(LocalizationCoefficients::rectangle()),
        }
    }
}

/// `((2 gamma - 1) |C|^2 sqrt(U) - 3 |C|^2 U - eta) / (1 + |C|^2 sqrt(U))`.
pub fn defect_bound(csq: f64, eta: f64, gamma: f64, u: f64) -> f64 {
    let s = csq * u.sqrt();
    ((2.0 * gamma - 1.0) * s - 3.0 * csq * u - eta) / (1.0 + s)
}

/// [`defect_bound`] with the Gaussian closed-form coefficients.
pub fn gaussian_defect_bound(csq: f64, u: f64) -> Result<f64> {
    let c = gaussian_coefficients(csq)?;
    Ok(defect_bound(csq, c.mismatch, c.cross_section, u))
}

/// `(sqrt(U) / (1 + sqrt(U))) (1 - 3 sqrt(U))`.
pub fn rect_defect_bound(u: f64) -> f64 {
    let r = u.sqrt();
    r / (1.0 + r) * (1.0 - 3.0 * r)
}

/// `4 |C|^2 U / (|C|^2 U + (2 gamma - 1) |C|^2 sqrt(U) - eta)`.
pub fn ratio_bound(csq: f64, eta: f64, gamma: f64, u: f64) -> Result<f64> {
    let denominator = csq * u + (2.0 * gamma - 1.0) * csq * u.sqrt() - eta;
    if !(denominator > 0.0) {
        return Err(Error::NoViolationRegime { denominator });
    }
    Ok(4.0 * csq * u / denominator)
}

/// `(1 + |C|^2 sqrt(U)) / 2`, valid while `|C|^2 sqrt(U)` is small.
pub fn very_localized_probability(csq: f64, u: f64) -> Result<f64> {
    let s = csq * u.sqrt();
    if !(s < VERY_LOCALIZED_LIMIT) {
        return Err(Error::ApproximationDomain(format!(
            "|C|^2 sqrt(U) = {s} is not below {VERY_LOCALIZED_LIMIT}"
        )));
    }
    Ok(0.5 * (1.0 + s))
}

/// Exact and closed-form probabilities for one scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbabilityReport {
    pub p_l: f64,
    pub p_b: f64,
    /// `p_l + p_b - 1`.
    pub joint_lower: f64,
    pub sqrt_u: f64,
    pub p_m_exact: f64,
    /// Envelope integral over `[-L, L]`.
    pub p_m_envelope: f64,
    /// `4 |C|^2 U / (1 + |C|^2 sqrt(U))`.
    pub p_m_envelope_estimate: f64,
    /// `joint_lower - p_m_exact`.
    pub defect_exact: f64,
    /// `joint_lower - p_m_envelope`.
    pub defect_envelope: f64,
    pub defect_bound: f64,
    /// `p_m_envelope / joint_lower`.
    pub ratio: f64,
    /// `None` outside the violation regime.
    pub ratio_bound: Option<f64>,
    pub scenario: Scenario,
    pub coefficients: LocalizationCoefficients,
}

/// Full report for `state`, with exact quadrature for every probability.
pub fn defect_exact(state: &PlusState, scenario: &Scenario) -> Result<ProbabilityReport> {
    defect_exact_with(state, scenario, &QuadratureSpec::default())
}

pub fn defect_exact_with(
    state: &PlusState,
    scenario: &Scenario,
    spec: &QuadratureSpec,
) -> Result<ProbabilityReport> {
    let coefficients = LocalizationCoefficients::of(&state.phi_l, scenario.length)?;
    let (csq, eta, gamma, u) = (
        coefficients.csq(),
        coefficients.mismatch,
        coefficients.cross_section,
        scenario.suppression,
    );
    let p_l = plus_interval_probability_with(state, scenario, Target::Position, spec)?;
    let p_b = plus_interval_probability_with(state, scenario, Target::Momentum, spec)?;
    let propagated = PropagatedState::new(state, scenario)?.with_spec(*spec);
    let p_m_exact = propagated.target_probability()?;
    let p_m_envelope = propagated.target_envelope_probability()?;
    let joint_lower = p_l + p_b - 1.0;
    Ok(ProbabilityReport {
        p_l,
        p_b,
        joint_lower,
        sqrt_u: u.sqrt(),
        p_m_exact,
        p_m_envelope,
        p_m_envelope_estimate: probability_m_envelope(csq, u),
        defect_exact: joint_lower - p_m_exact,
        defect_envelope: joint_lower - p_m_envelope,
        defect_bound: defect_bound(csq, eta, gamma, u),
        ratio: p_m_envelope / joint_lower,
        ratio_bound: ratio_bound(csq, eta, gamma, u).ok(),
        scenario: *scenario,
        coefficients,
    })
}

/// Report for a family member at `(U, |C|^2)` with `L = 1`.
pub fn family_report(family: Family, u: f64, csq: f64) -> Result<ProbabilityReport> {
    let scenario = Scenario::new(u)?;
    let phi = family.component(csq, scenario.length)?;
    defect_exact(&build_plus_state(&phi, &scenario)?, &scenario)
}

/// Report for the Gaussian pair with position widths `sigma1`, `sigma2`.
pub fn sigma_report(sigma1: f64, sigma2: f64) -> Result<ProbabilityReport> {
    let scenario = Scenario::from_sigmas(sigma1, sigma2, 1.0)?;
    let phi = Wavefunction::gaussian(Representation::Position, sigma1, 0.0)?;
    defect_exact(&build_plus_state(&phi, &scenario)?, &scenario)
}

/// `(lo, hi, steps)`; one step samples `lo` only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct AxisRange {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl AxisRange {
    pub fn new(lo: f64, hi: f64, steps: usize) -> Result<Self> {
        let r = AxisRange { lo, hi, steps };
        r.validate()?;
        Ok(r)
    }

    fn validate(&self) -> Result<()> {
        if !(self.lo > 0.0 && self.lo.is_finite() && self.hi.is_finite()) {
            return Err(Error::invalid("sweep ranges must be positive"));
        }
        if self.hi < self.lo {
            return Err(Error::invalid(
                "sweep range upper end is below the lower end",
            ));
        }
        if self.steps == 0 {
            return Err(Error::invalid("sweep needs at least one step per axis"));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.lo];
        }
        let d = (self.hi - self.lo) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| {
                if k + 1 == self.steps {
                    self.hi
                } else {
                    self.lo + d * k as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Optimum {
    #[serde(rename = "U")]
    pub u: f64,
    #[serde(rename = "Csq")]
    pub csq: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContourPoint {
    #[serde(rename = "U")]
    pub u: f64,
    #[serde(rename = "Csq")]
    pub csq: f64,
}

/// Closed-form defect bound over a `(U, |C|^2)` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub family: Family,
    pub u_values: Vec<f64>,
    pub csq_values: Vec<f64>,
    /// `defect_bound[i][j]` at `(u_values[i], csq_values[j])`.
    pub defect_bound: Vec<Vec<f64>>,
    /// The grid maximum (first in row-major order on ties).
    pub optimum: Optimum,
    /// The optimum after golden-section refinement inside the swept box.
    pub refined: Optimum,
    /// Sign changes of the bound, solved to full precision between cells.
    pub zero_contour_samples: Vec<ContourPoint>,
}

#[derive(Serialize)]
struct Summary<'a> {
    family: Family,
    optimum: &'a Optimum,
    refined: &'a Optimum,
    zero_contour_samples: &'a [ContourPoint],
}

impl SweepGrid {
    /// CSV `U,Csq,defect_bound`, `U` outer.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Csv(e.to_string());
        wtr.write_record(["U", "Csq", "defect_bound"]).map_err(io)?;
        for (i, u) in self.u_values.iter().enumerate() {
            for (j, c) in self.csq_values.iter().enumerate() {
                wtr.write_record([
                    format!("{u:.8e}"),
                    format!("{c:.8e}"),
                    format!("{:.8e}", self.defect_bound[i][j]),
                ])
                .map_err(io)?;
            }
        }
        wtr.flush().map_err(|e| Error::Csv(e.to_string()))
    }

    /// JSON `{family, optimum, refined, zero_contour_samples}`.
    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::to_value(Summary {
            family: self.family,
            optimum: &self.optimum,
            refined: &self.refined,
            zero_contour_samples: &self.zero_contour_samples,
        })
        .expect("summary serializes")
    }

    /// Smallest bound over the cells inside the given box.
    pub fn min_in(&self, u: (f64, f64), csq: (f64, f64)) -> Option<f64> {
        let mut best: Option<f64> = None;
        for (i, &uv) in self.u_values.iter().enumerate() {
            for (j, &cv) in self.csq_values.iter().enumerate() {
                if uv >= u.0 && uv <= u.1 && cv >= csq.0 && cv <= csq.1 {
                    let v = self.defect_bound[i][j];
                    best = Some(best.map_or(v, |b| b.min(v)));
                }
            }
        }
        best
    }
}

fn evaluate_family(family: Family, csq: f64, coeffs: &LocalizationCoefficients, u: f64) -> f64 {
    match family {
        Family::Gaussian => defect_bound(csq, coeffs.mismatch, coeffs.cross_section, u),
        Family::Rectangle => rect_defect_bound(u),
    }
}

/// Fills the defect bound over the grid in parallel; the result does not
/// depend on the thread count. The rectangle family has a single `|C|^2 = 1`
/// column and ignores `csq_range`.
pub fn sweep(u_range: AxisRange, csq_range: AxisRange, family: Family) -> Result<SweepGrid> {
    u_range.validate()?;
    csq_range.validate()?;
    if u_range.hi > MAX_SWEEP_U {
        return Err(Error::invalid(format!(
            "U values must lie in (0, {MAX_SWEEP_U}]"
        )));
    }
    let u_values = u_range.values();
    let csq_values = match family {
        Family::Gaussian => csq_range.values(),
        Family::Rectangle => vec![1.0],
    };
    let coeffs = csq_values
        .iter()
        .map(|&c| family.coefficients(c))
        .collect::<Result<Vec<_>>>()?;
    let defect: Vec<Vec<f64>> = u_values
        .par_iter()
        .map(|&u| {
            csq_values
                .iter()
                .zip(&coeffs)
                .map(|(&csq, c)| evaluate_family(family, csq, c, u))
                .collect()
        })
        .collect();

    let mut optimum = Optimum {
        u: u_values[0],
        csq: csq_values[0],
        value: defect[0][0],
    };
    for (i, row) in defect.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v > optimum.value {
                optimum = Optimum {
                    u: u_values[i],
                    csq: csq_values[j],
                    value: v,
                };
            }
        }
    }
    let refined = refine(family, optimum, &u_range, &csq_range)?;
    let zero_contour_samples = zero_contour(family, &u_values, &csq_values, &defect)?;
    Ok(SweepGrid {
        family,
        u_values,
        csq_values,
        defect_bound: defect,
        optimum,
        refined,
        zero_contour_samples,
    })
}

fn family_bound(family: Family, u: f64, csq: f64) -> Result<f64> {
    Ok(evaluate_family(family, csq, &family.coefficients(csq)?, u))
}

const GOLDEN_TOLERANCE: f64 = 1e-6;

/// Maximizes `f` on `[a, b]` by golden-section search.
fn golden_max<F: Fn(f64) -> Result<f64>>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    Ok(0.5 * (a + b))
}

fn refine(family: Family, start: Optimum, u: &AxisRange, csq: &AxisRange) -> Result<Optimum> {
    let mut best = start;
    let csq_box = match family {
        Family::Gaussian => (csq.lo, csq.hi),
        Family::Rectangle => (1.0, 1.0),
    };
    for _ in 0..50 {
        let prev = best;
        if u.hi > u.lo {
            let nu = golden_max(
                |x| family_bound(family, x, best.csq),
                u.lo,
                u.hi,
                GOLDEN_TOLERANCE,
            )?;
            best.u = nu;
        }
        if csq_box.1 > csq_box.0 {
            let nc = golden_max(
                |c| family_bound(family, best.u, c),
                csq_box.0,
                csq_box.1,
                GOLDEN_TOLERANCE,
            )?;
            best.csq = nc;
        }
        best.value = family_bound(family, best.u, best.csq)?;
        if (best.u - prev.u).abs() < GOLDEN_TOLERANCE
            && (best.csq - prev.csq).abs() < GOLDEN_TOLERANCE
        {
            break;
        }
    }
    // unimodality is not guaranteed over arbitrary boxes
    if best.value < start.value {
        return Ok(start);
    }
    Ok(best)
}

/// Root of `f` in `[a, b]` by bisection, given a sign change.
fn bisect<F: Fn(f64) -> Result<f64>>(f: F, mut a: f64, mut b: f64) -> Result<f64> {
    let fa = f(a)?;
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        if (f(m)? > 0.0) == (fa > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// `|C|^2` in `[lo, hi]` where the Gaussian bound at `u` changes sign, if it does.
pub fn zero_crossing_csq(u: f64, lo: f64, hi: f64) -> Result<Option<f64>> {
    let f = |c: f64| gaussian_defect_bound(c, u);
    let (fl, fh) = (f(lo)?, f(hi)?);
    if (fl > 0.0) == (fh > 0.0) {
        return Ok(None);
    }
    bisect(f, lo, hi).map(Some)
}

fn zero_contour(
    family: Family,
    u_values: &[f64],
    csq_values: &[f64],
    defect: &[Vec<f64>],
) -> Result<Vec<ContourPoint>> {
    let mut out = Vec::new();
    match family {
        Family::Gaussian => {
            for (i, &u) in u_values.iter().enumerate() {
                for j in 1..csq_values.len() {
                    if (defect[i][j - 1] > 0.0) != (defect[i][j] > 0.0) {
                        let c = bisect(
                            |c| gaussian_defect_bound(c, u),
                            csq_values[j - 1],
                            csq_values[j],
                        )?;
                        out.push(ContourPoint { u, csq: c });
                    }
                }
            }
        }
        Family::Rectangle => {
            for i in 1..u_values.len() {
                if (defect[i - 1][0] > 0.0) != (defect[i][0] > 0.0) {
                    let u = bisect(|u| Ok(rect_defect_bound(u)), u_values[i - 1], u_values[i])?;
                    out.push(ContourPoint { u, csq: 1.0 });
                }
            }
        }
    }
    Ok(out)
}

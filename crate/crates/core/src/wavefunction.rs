//! One-dimensional wavefunctions in the position or momentum representation.
//!
//! Analytic families are closed under the Fourier transform:
//!
//! * [`Gaussian`] `A exp(-q (u - c)^2 + i k u)` with complex `q` maps to
//!   another Gaussian, which also makes free evolution exact;
//! * [`Rectangle`] maps to [`Sinc`] and back.
//!
//! Sampled [`Grid`]s go through the discrete transform, and
//! [`Form::Superposition`] distributes every linear operation over its
//! parts. Units follow `hbar = 1`; the position-to-momentum kernel is
//! `exp(-i p x) / sqrt(2 pi)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::numerics::{erf, integrate_complex_panels, integrate_panels, QuadratureSpec};
use crate::superposition::Scenario;

/// Amplitudes below this fraction of the peak are treated as zero when a
/// Gaussian's support is truncated.
pub const TAIL_CUTOFF: f64 = 1e-18;

const DEFAULT_PANELS: usize = 16;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    Position,
    Momentum,
}

impl Representation {
    pub fn dual(self) -> Self {
        match self {
            Representation::Position => Representation::Momentum,
            Representation::Momentum => Representation::Position,
        }
    }

    pub fn axis_label(self) -> &'static str {
        match self {
            Representation::Position => "x",
            Representation::Momentum => "p",
        }
    }

    /// Sign of the exponent when transforming *out of* this representation.
    fn kernel_sign(self) -> f64 {
        match self {
            Representation::Position => -1.0,
            Representation::Momentum => 1.0,
        }
    }
}

/// A closed interval on the representation axis. Infinite bounds are only
/// allowed together, for the full axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || !(lo < hi) {
            return Err(Error::invalid(format!(
                "interval needs lo < hi, got [{lo}, {hi}]"
            )));
        }
        if lo.is_infinite() != hi.is_infinite() {
            return Err(Error::invalid("half-infinite intervals are not supported"));
        }
        Ok(Interval { lo, hi })
    }

    /// `[-width/2, width/2]`.
    pub fn centered(width: f64) -> Result<Self> {
        Interval::new(-0.5 * width, 0.5 * width)
    }

    pub fn full() -> Self {
        Interval {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn is_full(&self) -> bool {
        self.lo == f64::NEG_INFINITY && self.hi == f64::INFINITY
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    fn clip(&self, support: (f64, f64)) -> Option<(f64, f64)> {
        let lo = self.lo.max(support.0);
        let hi = self.hi.min(support.1);
        (lo < hi).then_some((lo, hi))
    }
}

/// `amplitude * exp(-spread * (u - center)^2 + i * wavenumber * u)`.
///
/// A plain Gaussian of density standard deviation `sigma` has
/// `spread = 1 / (4 sigma^2)`; free evolution makes `spread` complex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gaussian {
    pub amplitude: Complex64,
    pub spread: Complex64,
    pub center: f64,
    pub wavenumber: f64,
}

impl Gaussian {
    /// Unit-norm Gaussian, amplitude `(2 pi sigma^2)^(-1/4)`.
    pub fn normalized(sigma: f64, center: f64) -> Result<Self> {
        Gaussian::with_amplitude(
            sigma,
            center,
            c64((2.0 * PI * sigma * sigma).powf(-0.25), 0.0),
        )
    }

    pub fn with_amplitude(sigma: f64, center: f64, amplitude: Complex64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::invalid("gaussian sigma must be positive"));
        }
        if !center.is_finite() {
            return Err(Error::invalid("gaussian center must be finite"));
        }
        Ok(Gaussian {
            amplitude,
            spread: c64(0.25 / (sigma * sigma), 0.0),
            center,
            wavenumber: 0.0,
        })
    }

    /// Standard deviation of `|g|^2`.
    pub fn sigma(&self) -> f64 {
        0.5 / self.spread.re.sqrt()
    }

    pub fn evaluate(&self, u: f64) -> Complex64 {
        let d = u - self.center;
        self.amplitude * (-self.spread * d * d + c64(0.0, self.wavenumber * u)).exp()
    }

    fn is_real_profile(&self) -> bool {
        self.spread.im == 0.0 && self.wavenumber == 0.0
    }

    /// Half-width beyond which `|g|` drops below [`TAIL_CUTOFF`] of its peak.
    pub fn cutoff_radius(&self) -> f64 {
        ((1.0 / TAIL_CUTOFF).ln() / self.spread.re).sqrt()
    }

    fn transform(&self, from: Representation) -> Gaussian {
        // int A e^{-q (y)^2 + i k y} e^{s i v y} ... closes with q' = 1/(4q)
        let q = self.spread;
        let amplitude =
            self.amplitude * c64(0.0, self.wavenumber * self.center).exp() / (2.0 * q).sqrt();
        let spread = 1.0 / (4.0 * q);
        match from {
            Representation::Position => Gaussian {
                amplitude,
                spread,
                center: self.wavenumber,
                wavenumber: -self.center,
            },
            Representation::Momentum => Gaussian {
                amplitude,
                spread,
                center: -self.wavenumber,
                wavenumber: self.center,
            },
        }
    }

    fn rescaled(&self, s: f64) -> Gaussian {
        Gaussian {
            amplitude: self.amplitude * s.sqrt(),
            spread: self.spread * s * s,
            center: self.center / s,
            wavenumber: self.wavenumber * s,
        }
    }

    /// Multiplies by `exp(-i tau u^2)`; exact in closed form.
    pub(crate) fn chirped(&self, tau: f64) -> Gaussian {
        let c = self.center;
        Gaussian {
            amplitude: self.amplitude * c64(0.0, tau * c * c).exp(),
            spread: self.spread + c64(0.0, tau),
            center: c,
            wavenumber: self.wavenumber - 2.0 * c * tau,
        }
    }

    /// Coefficients `(a, b, d)` of `conj(self) * other = exp(-a u^2 + b u + d)`,
    /// with the amplitude product returned separately.
    fn product_exponent(&self, other: &Gaussian) -> (Complex64, Complex64, Complex64, Complex64) {
        let q1 = self.spread.conj();
        let q2 = other.spread;
        let (c1, c2) = (self.center, other.center);
        let a = q1 + q2;
        let b = q1 * (2.0 * c1) + q2 * (2.0 * c2) + c64(0.0, other.wavenumber - self.wavenumber);
        let d = -q1 * (c1 * c1) - q2 * (c2 * c2);
        (self.amplitude.conj() * other.amplitude, a, b, d)
    }

    fn inner(&self, other: &Gaussian) -> Complex64 {
        let (amp, a, b, d) = self.product_exponent(other);
        amp * (PI / a).sqrt() * (b * b / (4.0 * a) + d).exp()
    }

    /// `int_lo^hi conj(self) other`, in closed form when the combined
    /// exponent is real.
    fn interval_inner(&self, other: &Gaussian, lo: f64, hi: f64) -> Option<Complex64> {
        let (amp, a, b, d) = self.product_exponent(other);
        if a.im != 0.0 || b.im != 0.0 || d.im != 0.0 {
            return None;
        }
        let (a, b, d) = (a.re, b.re, d.re);
        let mid = b / (2.0 * a);
        let root = a.sqrt();
        let mass = (PI / a).sqrt() * 0.5 * (erf(root * (hi - mid)) - erf(root * (lo - mid)));
        Some(amp * (b * b / (4.0 * a) + d).exp() * mass)
    }

    fn integral(&self) -> Complex64 {
        let q = self.spread;
        let k = self.wavenumber;
        self.amplitude * (PI / q).sqrt() * (-(k * k) / (4.0 * q) + c64(0.0, k * self.center)).exp()
    }

    fn interval_integral(&self, lo: f64, hi: f64) -> Option<Complex64> {
        if !self.is_real_profile() {
            return None;
        }
        let q = self.spread.re;
        let root = q.sqrt();
        let mass = (PI / q).sqrt()
            * 0.5
            * (erf(root * (hi - self.center)) - erf(root * (lo - self.center)));
        Some(self.amplitude * mass)
    }
}

/// `amplitude` on `|u - center| <= width / 2`, zero outside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rectangle {
    pub width: f64,
    pub center: f64,
    pub amplitude: Complex64,
}

impl Rectangle {
    /// Unit-norm rectangle, amplitude `1 / sqrt(width)`.
    pub fn normalized(width: f64, center: f64) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::invalid("rectangle width must be positive"));
        }
        if !center.is_finite() {
            return Err(Error::invalid("rectangle center must be finite"));
        }
        Ok(Rectangle {
            width,
            center,
            amplitude: c64(1.0 / width.sqrt(), 0.0),
        })
    }

    pub fn support(&self) -> (f64, f64) {
        (
            self.center - 0.5 * self.width,
            self.center + 0.5 * self.width,
        )
    }

    pub fn evaluate(&self, u: f64) -> Complex64 {
        if (u - self.center).abs() <= 0.5 * self.width {
            self.amplitude
        } else {
            c64(0.0, 0.0)
        }
    }

    fn overlap_length(&self, lo: f64, hi: f64) -> f64 {
        let (a, b) = self.support();
        (b.min(hi) - a.max(lo)).max(0.0)
    }
}

/// `amplitude * sinc(u * width / 2) * exp(i * offset * u)`, the transform
/// of a rectangle of the given width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sinc {
    pub amplitude: Complex64,
    pub width: f64,
    pub offset: f64,
}

impl Sinc {
    pub fn evaluate(&self, u: f64) -> Complex64 {
        self.amplitude * sinc(0.5 * u * self.width) * c64(0.0, self.offset * u).exp()
    }
}

fn sinc(z: f64) -> f64 {
    if z.abs() < 1e-6 {
        1.0 - z * z / 6.0
    } else {
        z.sin() / z
    }
}

/// A compactly supported amplitude after free evolution for `time`,
/// evaluated on demand by quadrature over the source support.
#[derive(Debug, Clone, PartialEq)]
pub struct Evolved {
    pub source: Box<Wavefunction>,
    pub time: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Form {
    Gaussian(Gaussian),
    Rectangle(Rectangle),
    Sinc(Sinc),
    Grid(Grid),
    Superposition(Vec<(Complex64, Wavefunction)>),
    Evolved(Evolved),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Wavefunction {
    pub representation: Representation,
    pub form: Form,
}

impl Wavefunction {
    pub fn new(representation: Representation, form: Form) -> Result<Self> {
        if let Form::Superposition(parts) = &form {
            if parts.is_empty() {
                return Err(Error::invalid("superposition needs at least one part"));
            }
            if parts
                .iter()
                .any(|(_, wf)| wf.representation != representation)
            {
                return Err(Error::invalid(
                    "superposition parts must share a representation",
                ));
            }
        }
        if let Form::Evolved(_) = &form {
            if representation != Representation::Position {
                return Err(Error::invalid(
                    "evolved amplitudes live in the position representation",
                ));
            }
        }
        Ok(Wavefunction {
            representation,
            form,
        })
    }

    pub fn gaussian(representation: Representation, sigma: f64, center: f64) -> Result<Self> {
        Wavefunction::new(
            representation,
            Form::Gaussian(Gaussian::normalized(sigma, center)?),
        )
    }

    pub fn rectangle(representation: Representation, width: f64, center: f64) -> Result<Self> {
        Wavefunction::new(
            representation,
            Form::Rectangle(Rectangle::normalized(width, center)?),
        )
    }

    pub fn grid(representation: Representation, grid: Grid) -> Self {
        Wavefunction {
            representation,
            form: Form::Grid(grid),
        }
    }

    pub fn superposition(
        representation: Representation,
        parts: Vec<(Complex64, Wavefunction)>,
    ) -> Result<Self> {
        Wavefunction::new(representation, Form::Superposition(parts))
    }

    /// The amplitude `<u|wf>` in this wavefunction's own representation.
    pub fn evaluate(&self, u: f64) -> Complex64 {
        match &self.form {
            Form::Gaussian(g) => g.evaluate(u),
            Form::Rectangle(r) => r.evaluate(u),
            Form::Sinc(s) => s.evaluate(u),
            Form::Grid(g) => g.evaluate(u),
            Form::Superposition(parts) => parts.iter().map(|(w, wf)| w * wf.evaluate(u)).sum(),
            Form::Evolved(e) => crate::propagation::evaluate_evolved(e, u),
        }
    }

    /// Multiplies the amplitude by a constant.
    pub fn scaled(&self, factor: Complex64) -> Wavefunction {
        let form = match &self.form {
            Form::Gaussian(g) => Form::Gaussian(Gaussian {
                amplitude: g.amplitude * factor,
                ..*g
            }),
            Form::Rectangle(r) => Form::Rectangle(Rectangle {
                amplitude: r.amplitude * factor,
                ..*r
            }),
            Form::Sinc(s) => Form::Sinc(Sinc {
                amplitude: s.amplitude * factor,
                ..*s
            }),
            Form::Grid(g) => Form::Grid(g.scaled(factor)),
            Form::Superposition(parts) => Form::Superposition(
                parts
                    .iter()
                    .map(|(w, wf)| (w * factor, wf.clone()))
                    .collect(),
            ),
            Form::Evolved(e) => Form::Evolved(Evolved {
                source: Box::new(e.source.scaled(factor)),
                ..e.clone()
            }),
        };
        Wavefunction {
            representation: self.representation,
            form,
        }
    }

    /// Leaf components with their accumulated weights.
    pub fn terms(&self) -> Vec<(Complex64, &Wavefunction)> {
        let mut out = Vec::new();
        self.collect_terms(c64(1.0, 0.0), &mut out);
        out
    }

    fn collect_terms<'a>(
        &'a self,
        weight: Complex64,
        out: &mut Vec<(Complex64, &'a Wavefunction)>,
    ) {
        match &self.form {
            Form::Superposition(parts) => {
                for (w, wf) in parts {
                    wf.collect_terms(weight * w, out);
                }
            }
            _ => out.push((weight, self)),
        }
    }

    /// Interval outside of which the amplitude is zero or negligible, if finite.
    pub fn support(&self) -> Option<(f64, f64)> {
        match &self.form {
            Form::Gaussian(g) => {
                let r = g.cutoff_radius();
                Some((g.center - r, g.center + r))
            }
            Form::Rectangle(r) => Some(r.support()),
            Form::Grid(g) => Some(g.span()),
            Form::Superposition(parts) => parts
                .iter()
                .try_fold((f64::INFINITY, f64::NEG_INFINITY), |acc, (_, wf)| {
                    wf.support().map(|(a, b)| (acc.0.min(a), acc.1.max(b)))
                }),
            Form::Sinc(_) | Form::Evolved(_) => None,
        }
    }

    pub fn norm_squared(&self) -> Result<f64> {
        Ok(self.inner_product(self)?.re)
    }

    pub fn normalized(&self) -> Result<Wavefunction> {
        let n = self.norm_squared()?;
        if !(n > 0.0) {
            return Err(Error::invalid("cannot normalize a zero wavefunction"));
        }
        Ok(self.scaled(c64(1.0 / n.sqrt(), 0.0)))
    }

    /// Transform into the other representation.
    pub fn fourier_transform(&self) -> Result<Wavefunction> {
        let from = self.representation;
        let form = match &self.form {
            Form::Gaussian(g) => Form::Gaussian(g.transform(from)),
            Form::Rectangle(r) => {
                let sign = from.kernel_sign();
                Form::Sinc(Sinc {
                    amplitude: r.amplitude * (r.width / (2.0 * PI).sqrt()),
                    width: r.width,
                    offset: sign * r.center,
                })
            }
            Form::Sinc(s) => {
                let sign = from.kernel_sign();
                Form::Rectangle(Rectangle {
                    width: s.width,
                    center: -sign * s.offset,
                    amplitude: s.amplitude * ((2.0 * PI).sqrt() / s.width),
                })
            }
            Form::Grid(g) => Form::Grid(g.transform(from.kernel_sign())?),
            Form::Superposition(parts) => Form::Superposition(
                parts
                    .iter()
                    .map(|(w, wf)| wf.fourier_transform().map(|t| (*w, t)))
                    .collect::<Result<_>>()?,
            ),
            Form::Evolved(_) => {
                return Err(Error::Unsupported(
                    "fourier transform of an evolved amplitude",
                ))
            }
        };
        Ok(Wavefunction {
            representation: from.dual(),
            form,
        })
    }

    /// `sqrt(s) * wf(s * u)`, a norm-preserving change of scale.
    pub fn rescaled(&self, s: f64) -> Result<Wavefunction> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::invalid("scale factor must be positive"));
        }
        let form = match &self.form {
            Form::Gaussian(g) => Form::Gaussian(g.rescaled(s)),
            Form::Rectangle(r) => Form::Rectangle(Rectangle {
                width: r.width / s,
                center: r.center / s,
                amplitude: r.amplitude * s.sqrt(),
            }),
            Form::Sinc(c) => Form::Sinc(Sinc {
                amplitude: c.amplitude * s.sqrt(),
                width: c.width * s,
                offset: c.offset * s,
            }),
            Form::Grid(g) => Form::Grid(Grid {
                samples: g.samples.iter().map(|z| z * s.sqrt()).collect(),
                step: g.step / s,
                origin: g.origin / s,
            }),
            Form::Superposition(parts) => Form::Superposition(
                parts
                    .iter()
                    .map(|(w, wf)| wf.rescaled(s).map(|r| (*w, r)))
                    .collect::<Result<_>>()?,
            ),
            Form::Evolved(_) => return Err(Error::Unsupported("rescaling an evolved amplitude")),
        };
        Ok(Wavefunction {
            representation: self.representation,
            form,
        })
    }

    /// Same amplitude function, read on the other axis.
    pub fn relabeled(&self, representation: Representation) -> Result<Wavefunction> {
        let form = match &self.form {
            Form::Superposition(parts) => Form::Superposition(
                parts
                    .iter()
                    .map(|(w, wf)| wf.relabeled(representation).map(|r| (*w, r)))
                    .collect::<Result<_>>()?,
            ),
            Form::Evolved(_) => return Err(Error::Unsupported("relabeling an evolved amplitude")),
            other => other.clone(),
        };
        Ok(Wavefunction {
            representation,
            form,
        })
    }

    /// Brings `self` into `representation`, transforming if needed.
    pub fn in_representation(&self, representation: Representation) -> Result<Wavefunction> {
        if self.representation == representation {
            Ok(self.clone())
        } else {
            self.fourier_transform()
        }
    }

    /// `<self|other>`; `other` is transformed first if the representations differ.
    pub fn inner_product(&self, other: &Wavefunction) -> Result<Complex64> {
        if self.representation != other.representation {
            let other = other.in_representation(self.representation)?;
            return self.inner_product(&other);
        }
        let spec = QuadratureSpec::default();
        let mut total = c64(0.0, 0.0);
        for (wa, a) in self.terms() {
            for (wb, b) in other.terms() {
                total += wa.conj() * wb * leaf_inner(a, b, &spec, true)?;
            }
        }
        Ok(total)
    }

    /// `int_iv |wf|^2`, using closed forms where every pair of components
    /// allows it and adaptive quadrature otherwise.
    pub fn interval_probability(&self, iv: &Interval) -> Result<f64> {
        self.interval_probability_with(iv, &QuadratureSpec::default())
    }

    pub fn interval_probability_with(&self, iv: &Interval, spec: &QuadratureSpec) -> Result<f64> {
        if iv.is_full() {
            return self.norm_squared();
        }
        let terms = self.terms();
        let mut total = 0.0;
        let mut closed = true;
        'pairs: for (i, (wa, a)) in terms.iter().enumerate() {
            for (j, (wb, b)) in terms.iter().enumerate().skip(i) {
                match closed_interval_inner(a, b, iv.lo, iv.hi) {
                    Some(v) => {
                        let v = wa.conj() * wb * v;
                        total += if i == j { v.re } else { 2.0 * v.re };
                    }
                    None => {
                        closed = false;
                        break 'pairs;
                    }
                }
            }
        }
        if closed {
            return Ok(total);
        }
        self.interval_probability_quadrature(iv, DEFAULT_PANELS, spec)
    }

    /// Direct adaptive quadrature of `|wf|^2` over the interval, clipped to
    /// the support when one is known.
    pub fn interval_probability_quadrature(
        &self,
        iv: &Interval,
        panels: usize,
        spec: &QuadratureSpec,
    ) -> Result<f64> {
        let (lo, hi) = match self.support() {
            Some(s) => match iv.clip(s) {
                Some(r) => r,
                None => return Ok(0.0),
            },
            None if iv.is_full() => {
                return Err(Error::Unsupported(
                    "full-axis quadrature of an unbounded amplitude",
                ))
            }
            None => (iv.lo, iv.hi),
        };
        integrate_panels(|u| self.evaluate(u).norm_sqr(), lo, hi, panels, spec)
    }

    /// `int_iv wf(u) du` (the full axis when `iv` is `None`).
    pub fn amplitude_integral(&self, iv: Option<&Interval>) -> Result<Complex64> {
        let spec = QuadratureSpec::default();
        let mut total = c64(0.0, 0.0);
        for (w, leaf) in self.terms() {
            total += w * leaf_integral(leaf, iv.filter(|i| !i.is_full()), &spec)?;
        }
        Ok(total)
    }

    /// Samples onto a centred grid of `n` points spanning `[-half_span, half_span)`.
    pub fn to_grid(&self, half_span: f64, n: usize) -> Result<Wavefunction> {
        Ok(Wavefunction::grid(
            self.representation,
            Grid::centered(|u| self.evaluate(u), half_span, n)?,
        ))
    }
}

/// `phi_B` with `<p|phi_B> = sqrt(L/B) <x = (L/B) p|phi_L>`, returned in the
/// momentum representation.
pub fn momentum_companion(phi_l: &Wavefunction, scenario: &Scenario) -> Result<Wavefunction> {
    if phi_l.representation != Representation::Position {
        return Err(Error::invalid(
            "momentum companion needs a position-space component",
        ));
    }
    let s = scenario.length / scenario.bandwidth;
    phi_l.rescaled(s)?.relabeled(Representation::Momentum)
}

fn closed_interval_inner(
    a: &Wavefunction,
    b: &Wavefunction,
    lo: f64,
    hi: f64,
) -> Option<Complex64> {
    match (&a.form, &b.form) {
        (Form::Gaussian(x), Form::Gaussian(y)) => x.interval_inner(y, lo, hi),
        (Form::Rectangle(x), Form::Rectangle(y)) => {
            let (ya, yb) = y.support();
            let len = x.overlap_length(lo.max(ya), hi.min(yb));
            Some(x.amplitude.conj() * y.amplitude * len)
        }
        _ => None,
    }
}

fn leaf_inner(
    a: &Wavefunction,
    b: &Wavefunction,
    spec: &QuadratureSpec,
    allow_transform: bool,
) -> Result<Complex64> {
    match (&a.form, &b.form) {
        (Form::Gaussian(x), Form::Gaussian(y)) => return Ok(x.inner(y)),
        (Form::Rectangle(x), Form::Rectangle(y)) => {
            let (lo, hi) = y.support();
            return Ok(x.amplitude.conj() * y.amplitude * x.overlap_length(lo, hi));
        }
        (Form::Grid(x), Form::Grid(y)) if x.aligned_with(y) => return Ok(x.dot(y)),
        (Form::Evolved(x), Form::Evolved(y)) if x.time == y.time && x.mass == y.mass => {
            return x.source.inner_product(&y.source);
        }
        _ => {}
    }

    let region = match (a.support(), b.support()) {
        (Some(x), Some(y)) => {
            let lo = x.0.max(y.0);
            let hi = x.1.min(y.1);
            if lo >= hi {
                return Ok(c64(0.0, 0.0));
            }
            Some((lo, hi))
        }
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    };
    match region {
        Some((lo, hi)) => integrate_complex_panels(
            |u| a.evaluate(u).conj() * b.evaluate(u),
            lo,
            hi,
            DEFAULT_PANELS,
            spec,
        ),
        None if allow_transform => {
            let ta = a.fourier_transform()?;
            let tb = b.fourier_transform()?;
            leaf_inner(&ta, &tb, spec, false)
        }
        None => Err(Error::Unsupported(
            "inner product of two unbounded amplitudes",
        )),
    }
}

fn leaf_integral(
    wf: &Wavefunction,
    iv: Option<&Interval>,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    match (&wf.form, iv) {
        (Form::Gaussian(g), None) => Ok(g.integral()),
        (Form::Gaussian(g), Some(iv)) => match g.interval_integral(iv.lo, iv.hi) {
            Some(v) => Ok(v),
            None => quad_integral(wf, iv, spec),
        },
        (Form::Rectangle(r), None) => Ok(r.amplitude * r.width),
        (Form::Rectangle(r), Some(iv)) => Ok(r.amplitude * r.overlap_length(iv.lo, iv.hi)),
        (Form::Sinc(s), None) => {
            // transform of sinc evaluated at zero frequency
            let half = 0.5 * s.width;
            let weight = if s.offset.abs() < half {
                1.0
            } else if s.offset.abs() == half {
                0.5
            } else {
                0.0
            };
            Ok(s.amplitude * (2.0 * PI / s.width) * weight)
        }
        (Form::Grid(g), None) => Ok(g.sum()),
        (Form::Evolved(e), None) => match e.source.representation {
            Representation::Position => e.source.amplitude_integral(None),
            Representation::Momentum => Ok(e.source.evaluate(0.0) * (2.0 * PI).sqrt()),
        },
        (_, Some(iv)) => quad_integral(wf, iv, spec),
        (Form::Superposition(_), None) => unreachable!("terms are flattened"),
    }
}

fn quad_integral(wf: &Wavefunction, iv: &Interval, spec: &QuadratureSpec) -> Result<Complex64> {
    let (lo, hi) = match wf.support() {
        Some(s) => match iv.clip(s) {
            Some(r) => r,
            None => return Ok(c64(0.0, 0.0)),
        },
        None => (iv.lo, iv.hi),
    };
    integrate_complex_panels(|u| wf.evaluate(u), lo, hi, DEFAULT_PANELS, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::integrate_complex;

    const POS: Representation = Representation::Position;
    const MOM: Representation = Representation::Momentum;

    fn two_gauss(s1: f64, s2: f64) -> Wavefunction {
        let overlap = (2.0 * s1 * s2 / (s1 * s1 + s2 * s2)).sqrt();
        let n = 1.0 / (2.0 * (1.0 + overlap)).sqrt();
        Wavefunction::superposition(
            POS,
            vec![
                (c64(n, 0.0), Wavefunction::gaussian(POS, s1, 0.0).unwrap()),
                (c64(n, 0.0), Wavefunction::gaussian(POS, s2, 0.0).unwrap()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let g = Wavefunction::gaussian(POS, 1.0, 0.0).unwrap();
        assert!((g.evaluate(0.0).re - (2.0 * PI).powf(-0.25)).abs() < 1e-15);
        assert!((g.evaluate(0.0).re - 0.631_618_7).abs() < 1e-7);
        let r = Wavefunction::rectangle(POS, 1.0, 0.0).unwrap();
        assert_eq!(r.evaluate(0.75), c64(0.0, 0.0));
        assert_eq!(r.evaluate(0.25), c64(1.0, 0.0));
    }

    #[test]
    fn two_gaussian_state_at_origin_matches_formula() {
        let (s1, s2) = (0.16, 22.67);
        let psi = two_gauss(s1, s2);
        // hand evaluation: prefactor * (a1 + a2)
        let pref = 1.0 / (2.0 * (1.0 + (2.0 * s1 * s2 / (s1 * s1 + s2 * s2)).sqrt())).sqrt();
        let a1 = (2.0 * PI * s1 * s1).powf(-0.25);
        let a2 = (2.0 * PI * s2 * s2).powf(-0.25);
        assert!((psi.evaluate(0.0).re - pref * (a1 + a2)).abs() < 1e-14);
    }

    #[test]
    fn norms() {
        let g = Wavefunction::gaussian(POS, 1.3, 0.4).unwrap();
        assert!((g.norm_squared().unwrap() - 1.0).abs() < 1e-14);
        let doubled = Wavefunction::superposition(
            POS,
            vec![(c64(1.0, 0.0), g.clone()), (c64(1.0, 0.0), g.clone())],
        )
        .unwrap();
        assert!((doubled.norm_squared().unwrap() - 4.0).abs() < 1e-13);
        assert!((two_gauss(0.16, 22.67).norm_squared().unwrap() - 1.0).abs() < 1e-9);
        let r = Wavefunction::rectangle(POS, 2.5, 0.0).unwrap();
        assert!((r.norm_squared().unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gaussian_fourier_widths() {
        let g = Wavefunction::gaussian(POS, 1.0, 0.0).unwrap();
        let p = g.fourier_transform().unwrap();
        assert_eq!(p.representation, MOM);
        let expected = Wavefunction::gaussian(MOM, 0.5, 0.0).unwrap();
        for &u in &[0.0, 0.3, -1.1, 2.0] {
            assert!((p.evaluate(u) - expected.evaluate(u)).norm() < 1e-15);
        }
    }

    #[test]
    fn two_gaussian_state_is_fourier_symmetric_in_family() {
        let (s1, s2) = (0.16, 22.67);
        let p = two_gauss(s1, s2).fourier_transform().unwrap();
        let sig: Vec<f64> = p
            .terms()
            .iter()
            .map(|(_, wf)| match &wf.form {
                Form::Gaussian(g) => g.sigma(),
                _ => panic!("expected gaussians"),
            })
            .collect();
        assert!((sig[0] - 1.0 / (2.0 * s1)).abs() < 1e-12);
        assert!((sig[1] - 1.0 / (2.0 * s2)).abs() < 1e-12);
    }

    #[test]
    fn off_center_gaussian_transform_matches_quadrature() {
        let mut g = Gaussian::normalized(0.8, 0.7).unwrap();
        g.wavenumber = 1.3;
        let wf = Wavefunction::new(POS, Form::Gaussian(g)).unwrap();
        let p = wf.fourier_transform().unwrap();
        let spec = QuadratureSpec::default();
        for &pv in &[-1.0, 0.0, 0.9, 2.5] {
            let direct = integrate_complex(
                |x| wf.evaluate(x) * c64(0.0, -pv * x).exp() / (2.0 * PI).sqrt(),
                -12.0,
                12.0,
                &spec,
            )
            .unwrap();
            assert!((direct - p.evaluate(pv)).norm() < 1e-10, "p={pv}");
        }
        let back = p.fourier_transform().unwrap();
        for &x in &[-1.0, 0.0, 0.7, 2.0] {
            assert!((back.evaluate(x) - wf.evaluate(x)).norm() < 1e-14);
        }
    }

    #[test]
    fn rectangle_transforms_to_sinc_and_back() {
        let r = Wavefunction::rectangle(POS, 1.0, 0.3).unwrap();
        let s = r.fourier_transform().unwrap();
        let spec = QuadratureSpec::default();
        for &pv in &[0.0, 1.7, -4.0] {
            let direct = integrate_complex(
                |x| r.evaluate(x) * c64(0.0, -pv * x).exp() / (2.0 * PI).sqrt(),
                -0.2,
                0.8,
                &spec,
            )
            .unwrap();
            assert!((direct - s.evaluate(pv)).norm() < 1e-12);
        }
        let back = s.fourier_transform().unwrap();
        assert_eq!(back, r);
        assert!((s.norm_squared().unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn centered_gaussian_overlap() {
        let (s1, s2) = (0.3, 2.1);
        let a = Wavefunction::gaussian(POS, s1, 0.0).unwrap();
        let b = Wavefunction::gaussian(POS, s2, 0.0).unwrap();
        let v = a.inner_product(&b).unwrap();
        assert!((v.re - (2.0 * s1 * s2 / (s1 * s1 + s2 * s2)).sqrt()).abs() < 1e-14);
        assert!(v.im.abs() < 1e-15);
        assert!((a.inner_product(&a).unwrap().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn inner_product_is_conjugate_symmetric_across_forms() {
        let mut g = Gaussian::normalized(0.4, 0.1).unwrap();
        g.wavenumber = 2.0;
        let a = Wavefunction::new(POS, Form::Gaussian(g)).unwrap();
        let b = Wavefunction::rectangle(POS, 1.0, 0.0).unwrap();
        let ab = a.inner_product(&b).unwrap();
        let ba = b.inner_product(&a).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-12);
    }

    #[test]
    fn interval_probabilities() {
        let r = Wavefunction::rectangle(POS, 1.0, 0.0).unwrap();
        let iv = Interval::centered(1.0).unwrap();
        assert!((r.interval_probability(&iv).unwrap() - 1.0).abs() < 1e-15);

        let sigma = 0.7;
        let g = Wavefunction::gaussian(POS, sigma, 0.0).unwrap();
        for &w in &[0.2, 0.5, 1.0, 3.0] {
            let iv = Interval::new(-w, w).unwrap();
            let closed = g.interval_probability(&iv).unwrap();
            let expected = erf(w / (sigma * 2f64.sqrt()));
            assert!((closed - expected).abs() < 1e-14);
            let quad = g
                .interval_probability_quadrature(&iv, 4, &QuadratureSpec::default())
                .unwrap();
            assert!((quad - expected).abs() < 1e-10);
        }
    }

    #[test]
    fn two_gaussian_position_probability() {
        let psi = two_gauss(0.16, 22.67);
        let iv = Interval::centered(1.0).unwrap();
        let p = psi.interval_probability(&iv).unwrap();
        assert!((p - 0.557_284_5).abs() < 1e-5, "{p}");
        let q = psi
            .interval_probability_quadrature(&iv, 8, &QuadratureSpec::default())
            .unwrap();
        assert!((p - q).abs() < 1e-10);
    }

    #[test]
    fn full_axis_probability_is_norm() {
        let psi = two_gauss(0.5, 3.0).scaled(c64(0.0, 1.2));
        let full = psi.interval_probability(&Interval::full()).unwrap();
        assert!((full - psi.norm_squared().unwrap()).abs() < 1e-12);
        let wide = psi
            .interval_probability_quadrature(
                &Interval::new(-1e3, 1e3).unwrap(),
                32,
                &QuadratureSpec::default(),
            )
            .unwrap();
        assert!((wide - full).abs() < 1e-9);
    }

    #[test]
    fn interval_validation() {
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(f64::NAN, 1.0).is_err());
        assert!(Interval::new(0.0, f64::INFINITY).is_err());
        assert!(Interval::full().is_full());
    }

    #[test]
    fn companion_of_rectangle_is_momentum_rectangle() {
        let scenario = Scenario::new(0.024).unwrap();
        let r = Wavefunction::rectangle(POS, 1.0, 0.0).unwrap();
        let b = momentum_companion(&r, &scenario).unwrap();
        assert_eq!(b.representation, MOM);
        match b.form {
            Form::Rectangle(rb) => {
                assert!((rb.width - scenario.bandwidth).abs() < 1e-15);
                assert!((rb.amplitude.re - 1.0 / scenario.bandwidth.sqrt()).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn companion_of_gaussian_has_reciprocal_width() {
        let u = 0.022;
        let scenario = Scenario::new(u).unwrap();
        let s1 = 0.8 / (8.0 * PI).sqrt();
        let g = Wavefunction::gaussian(POS, s1, 0.0).unwrap();
        let b = momentum_companion(&g, &scenario).unwrap();
        let bx = b.fourier_transform().unwrap();
        let sigma2 = match bx.form {
            Form::Gaussian(g) => g.sigma(),
            other => panic!("{other:?}"),
        };
        assert!((sigma2 - 1.0 / (4.0 * PI * u * s1)).abs() < 1e-9);
        assert!((sigma2 - 22.667).abs() < 1e-3);
        assert!((b.norm_squared().unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn superposition_needs_matching_representations() {
        let a = Wavefunction::gaussian(POS, 1.0, 0.0).unwrap();
        let b = Wavefunction::gaussian(MOM, 1.0, 0.0).unwrap();
        assert!(
            Wavefunction::superposition(POS, vec![(c64(1.0, 0.0), a), (c64(1.0, 0.0), b)]).is_err()
        );
        assert!(Wavefunction::superposition(POS, vec![]).is_err());
    }

    #[test]
    fn coherent_integrals() {
        let r = Wavefunction::rectangle(POS, 1.0, 0.0).unwrap();
        assert!((r.amplitude_integral(None).unwrap().re - 1.0).abs() < 1e-15);
        let s = r.fourier_transform().unwrap();
        // int sinc-form = sqrt(2 pi) * rect(0)
        assert!((s.amplitude_integral(None).unwrap().re - (2.0 * PI).sqrt()).abs() < 1e-12);
        let g = Wavefunction::gaussian(POS, 0.5, 0.0).unwrap();
        let iv = Interval::centered(1.0).unwrap();
        let closed = g.amplitude_integral(Some(&iv)).unwrap();
        let quad =
            integrate_complex(|x| g.evaluate(x), -0.5, 0.5, &QuadratureSpec::default()).unwrap();
        assert!((closed - quad).norm() < 1e-12);
    }
}

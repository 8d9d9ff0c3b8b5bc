//! Adaptive Gauss–Kronrod quadrature for complex integrands on finite
//! intervals, plus the error function.
//!
//! The integrator is a global adaptive scheme in the spirit of QUADPACK's
//! `qag`: the interval with the largest error estimate is bisected until the
//! summed estimate meets `max(abs_tolerance, rel_tolerance * |result|)`.
//! Everything here is a pure function of its inputs, so results are
//! bit-for-bit reproducible and safe to call from many threads.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Kronrod abscissae of the 21-point rule (positive half, centre last).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_208_703_729,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

/// Weights of the embedded 10-point Gauss rule, matching XGK[1], XGK[3], ...
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tolerance: f64,
    pub rel_tolerance: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tolerance: 1e-10,
            rel_tolerance: 1e-10,
            max_subdivisions: 1 << 16,
        }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tolerance: f64, rel_tolerance: f64, max_subdivisions: usize) -> Result<Self> {
        let spec = QuadratureSpec {
            abs_tolerance,
            rel_tolerance,
            max_subdivisions,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Same absolute and relative tolerance, default subdivision budget.
    pub fn with_tolerance(tolerance: f64) -> Result<Self> {
        Self::new(
            tolerance,
            tolerance,
            QuadratureSpec::default().max_subdivisions,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tolerance > 0.0 && self.abs_tolerance.is_finite()) {
            return Err(Error::invalid("abs_tolerance must be positive"));
        }
        if !(self.rel_tolerance > 0.0 && self.rel_tolerance.is_finite()) {
            return Err(Error::invalid("rel_tolerance must be positive"));
        }
        if self.max_subdivisions < 4 {
            return Err(Error::invalid("max_subdivisions must be at least 4"));
        }
        Ok(())
    }

    fn target(&self, value: Complex64) -> f64 {
        self.abs_tolerance.max(self.rel_tolerance * value.norm())
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    // Largest error first; ties broken by position so the pop order is total.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn kronrod21<F>(f: &F, a: f64, b: f64) -> Segment
where
    F: Fn(f64) -> Complex64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    let mut abs_sum = fc.norm() * WGK[10];

    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(10).enumerate() {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += (f1 + f2) * w;
        abs_sum += (f1.norm() + f2.norm()) * w;
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }

    let value = kronrod * half;
    let raw = ((kronrod - gauss) * half).norm();
    // roundoff floor
    let floor = 50.0 * f64::EPSILON * abs_sum * half.abs();
    Segment {
        a,
        b,
        value,
        error: raw.max(floor),
    }
}

/// Integrates a complex-valued `f` over `[a, b]`.
///
/// On non-convergence the error carries the best estimate (real part) and
/// its error bound; use [`integrate_complex_estimate`] to get the complex
/// estimate back regardless.
pub fn integrate_complex<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    integrate_complex_panels(f, a, b, 1, spec)
}

/// Like [`integrate_complex`] but starts from `panels` equal subintervals,
/// which keeps the adaptive rule from undersampling a structured integrand.
pub fn integrate_complex_panels<F>(
    f: F,
    a: f64,
    b: f64,
    panels: usize,
    spec: &QuadratureSpec,
) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let (value, error, converged) = adapt(&f, a, b, panels, spec)?;
    if converged {
        Ok(value)
    } else {
        Err(Error::Accuracy {
            estimate: value.re,
            error_bound: error,
        })
    }
}

/// Best estimate and error bound, without turning non-convergence into an error.
pub fn integrate_complex_estimate<F>(
    f: F,
    a: f64,
    b: f64,
    panels: usize,
    spec: &QuadratureSpec,
) -> Result<(Complex64, f64)>
where
    F: Fn(f64) -> Complex64,
{
    let (value, error, _) = adapt(&f, a, b, panels, spec)?;
    Ok((value, error))
}

/// Real-valued convenience wrapper around [`integrate_complex_panels`].
pub fn integrate<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    integrate_panels(f, a, b, 1, spec)
}

pub fn integrate_panels<F>(
    f: F,
    a: f64,
    b: f64,
    panels: usize,
    spec: &QuadratureSpec,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    integrate_complex_panels(|x| Complex64::new(f(x), 0.0), a, b, panels, spec).map(|z| z.re)
}

fn adapt<F>(
    f: &F,
    a: f64,
    b: f64,
    panels: usize,
    spec: &QuadratureSpec,
) -> Result<(Complex64, f64, bool)>
where
    F: Fn(f64) -> Complex64,
{
    spec.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::invalid("integration bounds must be finite"));
    }
    if a > b {
        return Err(Error::invalid(format!(
            "integration bounds reversed: [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok((Complex64::new(0.0, 0.0), 0.0, true));
    }

    let panels = panels.clamp(1, spec.max_subdivisions);
    let width = (b - a) / panels as f64;
    let mut heap = BinaryHeap::with_capacity(2 * panels);
    for k in 0..panels {
        let lo = a + width * k as f64;
        let hi = if k + 1 == panels {
            b
        } else {
            a + width * (k + 1) as f64
        };
        heap.push(kronrod21(f, lo, hi));
    }

    // running sums steer the loop; the ordered sum decides and is returned
    let (mut value, mut error) = totals(&heap);
    loop {
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::invalid("integrand is not finite on the interval"));
        }
        if error <= spec.target(value) {
            (value, error) = totals(&heap);
            if error <= spec.target(value) {
                return Ok((value, error, true));
            }
        }
        if heap.len() >= spec.max_subdivisions {
            let (value, error) = totals(&heap);
            return Ok((value, error, error <= spec.target(value)));
        }
        let worst = heap.pop().expect("heap holds at least one segment");
        let mid = 0.5 * (worst.a + worst.b);
        let scale = worst.a.abs().max(worst.b.abs()).max(1.0);
        if worst.b - worst.a <= 1e3 * f64::EPSILON * scale {
            heap.push(worst);
            let (value, error) = totals(&heap);
            return Ok((value, error, error <= spec.target(value)));
        }
        let left = kronrod21(f, worst.a, mid);
        let right = kronrod21(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
}

fn totals(heap: &BinaryHeap<Segment>) -> (Complex64, f64) {
    // Sum in position order so the result does not depend on heap layout.
    let mut segs: Vec<&Segment> = heap.iter().collect();
    segs.sort_by(|x, y| x.a.total_cmp(&y.a));
    segs.iter()
        .fold((Complex64::new(0.0, 0.0), 0.0), |(v, e), s| {
            (v + s.value, e + s.error)
        })
}

/// The error function, accurate to a few ulp.
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// Complementary error function, `1 - erf(x)` without cancellation.
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

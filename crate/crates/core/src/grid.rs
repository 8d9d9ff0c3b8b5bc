//! Uniformly sampled amplitudes: linear interpolation, the discrete
//! spectral transform with axis bookkeeping, and CSV import/export.

use std::f64::consts::PI;
use std::io::{Read, Write};
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::wavefunction::Representation;

/// Fraction of the norm allowed in the outer 1/32 of a transformed grid.
pub const EDGE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub samples: Vec<Complex64>,
    pub step: f64,
    pub origin: f64,
}

impl Grid {
    pub fn new(samples: Vec<Complex64>, step: f64, origin: f64) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::invalid("grid needs at least two samples"));
        }
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::invalid("grid step must be positive"));
        }
        if !origin.is_finite() {
            return Err(Error::invalid("grid origin must be finite"));
        }
        if samples
            .iter()
            .any(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::invalid("grid samples must be finite"));
        }
        Ok(Grid {
            samples,
            step,
            origin,
        })
    }

    /// Samples `f` at `n` points `origin + k * step`.
    pub fn sample<F: Fn(f64) -> Complex64>(f: F, origin: f64, step: f64, n: usize) -> Result<Self> {
        let samples = (0..n).map(|k| f(origin + step * k as f64)).collect();
        Grid::new(samples, step, origin)
    }

    /// A grid of `n` points covering `[-half_span, half_span)` symmetrically,
    /// with the sample at index `n/2` sitting on zero.
    pub fn centered<F: Fn(f64) -> Complex64>(f: F, half_span: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("grid needs at least two samples"));
        }
        let step = 2.0 * half_span / n as f64;
        Grid::sample(f, -((n / 2) as f64) * step, step, n)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn coordinate(&self, k: usize) -> f64 {
        self.origin + self.step * k as f64
    }

    pub fn span(&self) -> (f64, f64) {
        (self.origin, self.coordinate(self.len() - 1))
    }

    pub fn evaluate(&self, u: f64) -> Complex64 {
        let t = (u - self.origin) / self.step;
        if !(t >= 0.0) || t > (self.len() - 1) as f64 {
            return Complex64::new(0.0, 0.0);
        }
        let k = (t.floor() as usize).min(self.len() - 2);
        let frac = t - k as f64;
        self.samples[k] * (1.0 - frac) + self.samples[k + 1] * frac
    }

    /// Riemann-sum norm, `step * sum |s_k|^2`.
    pub fn norm_squared(&self) -> f64 {
        self.step * self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    pub fn sum(&self) -> Complex64 {
        self.samples.iter().sum::<Complex64>() * self.step
    }

    pub fn aligned_with(&self, other: &Grid) -> bool {
        self.len() == other.len()
            && (self.step - other.step).abs() <= 1e-12 * self.step
            && (self.origin - other.origin).abs() <= 1e-12 * self.step.max(self.origin.abs())
    }

    pub fn dot(&self, other: &Grid) -> Complex64 {
        self.samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            * self.step
    }

    pub fn scaled(&self, factor: Complex64) -> Grid {
        Grid {
            samples: self.samples.iter().map(|z| z * factor).collect(),
            step: self.step,
            origin: self.origin,
        }
    }

    /// Conjugate axis step, `2 pi / (n * step)`.
    pub fn dual_step(&self) -> f64 {
        2.0 * PI / (self.len() as f64 * self.step)
    }

    /// Discrete transform onto the conjugate axis, which is always centred
    /// (`origin = -(n/2) * dual_step`).
    ///
    /// `sign = -1` is the position-to-momentum kernel `exp(-i p x)`, `+1`
    /// the inverse. The sum is scaled by `step / sqrt(2 pi)` so the norm is
    /// preserved exactly.
    pub fn transform(&self, sign: f64) -> Result<Grid> {
        let out = self.transform_unchecked(sign);
        out.check_edges(if sign < 0.0 { "momentum" } else { "position" })?;
        Ok(out)
    }

    /// [`Grid::transform`] without the resolution check, for callers that
    /// accept truncated or wrapped tails.
    pub fn transform_unchecked(&self, sign: f64) -> Grid {
        let n = self.len();
        let dual_step = self.dual_step();
        let dual_origin = -((n / 2) as f64) * dual_step;
        let fft = planner(n, sign);

        // exp(s i p_k x_j) = exp(s i p0 x_j) exp(s i k dp x0) exp(s 2 pi i k j / n)
        let mut buf: Vec<Complex64> = self
            .samples
            .iter()
            .enumerate()
            .map(|(j, z)| z * Complex64::from_polar(1.0, sign * dual_origin * self.coordinate(j)))
            .collect();
        fft.process(&mut buf);
        let scale = self.step / (2.0 * PI).sqrt();
        for (k, z) in buf.iter_mut().enumerate() {
            let pk = dual_step * k as f64;
            *z *= Complex64::from_polar(scale, sign * pk * self.origin);
        }

        Grid {
            samples: buf,
            step: dual_step,
            origin: dual_origin,
        }
    }

    /// Same samples but forces the resolution check on this grid.
    pub fn check_edges(&self, axis: &'static str) -> Result<()> {
        let frac = self.edge_fraction();
        if frac > EDGE_TOLERANCE {
            return Err(Error::Resolution {
                axis,
                edge_fraction: frac,
            });
        }
        Ok(())
    }

    /// Share of the norm held by the outer 1/32 of samples on either side.
    pub fn edge_fraction(&self) -> f64 {
        let n = self.len();
        let band = (n / 32).max(1);
        let total: f64 = self.samples.iter().map(|z| z.norm_sqr()).sum();
        if total == 0.0 {
            return 0.0;
        }
        let edge: f64 = self.samples[..band]
            .iter()
            .chain(&self.samples[n - band..])
            .map(|z| z.norm_sqr())
            .sum();
        edge / total
    }

    /// Multiplies each sample by `exp(-i tau u^2)`.
    pub fn chirped(&self, tau: f64) -> Grid {
        Grid {
            samples: self
                .samples
                .iter()
                .enumerate()
                .map(|(k, z)| {
                    let u = self.coordinate(k);
                    z * Complex64::from_polar(1.0, -tau * u * u)
                })
                .collect(),
            step: self.step,
            origin: self.origin,
        }
    }

    pub fn write_csv<W: Write>(&self, representation: Representation, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        let csv_err = |e: csv::Error| Error::Csv(e.to_string());
        wtr.write_record([representation.axis_label(), "re", "im"])
            .map_err(csv_err)?;
        for (k, z) in self.samples.iter().enumerate() {
            wtr.write_record([
                format!("{:e}", self.coordinate(k)),
                format!("{:e}", z.re),
                format!("{:e}", z.im),
            ])
            .map_err(csv_err)?;
        }
        wtr.flush().map_err(|e| Error::Csv(e.to_string()))?;
        Ok(())
    }

    /// Parses `x,re,im` (or `p,re,im`) rows. The axis must be strictly
    /// increasing with a uniform step.
    pub fn read_csv<R: Read>(input: R) -> Result<(Representation, Grid)> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(input);
        let headers = rdr
            .headers()
            .map_err(|e| Error::Csv(e.to_string()))?
            .clone();
        let cols: Vec<&str> = headers.iter().collect();
        let representation = match cols.as_slice() {
            ["x", "re", "im"] => Representation::Position,
            ["p", "re", "im"] => Representation::Momentum,
            _ => {
                return Err(Error::Csv(format!(
                    "expected header x,re,im or p,re,im, found {}",
                    cols.join(",")
                )))
            }
        };

        let mut axis = Vec::new();
        let mut samples = Vec::new();
        for (line, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| Error::Csv(e.to_string()))?;
            if record.len() != 3 {
                return Err(Error::Csv(format!("row {}: expected 3 fields", line + 2)));
            }
            let field = |i: usize| -> Result<f64> {
                let v: f64 = record[i].parse().map_err(|_| {
                    Error::Csv(format!("row {}: bad number {:?}", line + 2, &record[i]))
                })?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::Csv(format!("row {}: non-finite value", line + 2)))
                }
            };
            axis.push(field(0)?);
            samples.push(Complex64::new(field(1)?, field(2)?));
        }
        if axis.len() < 2 {
            return Err(Error::Csv("need at least two rows".into()));
        }

        let n = axis.len();
        let step = (axis[n - 1] - axis[0]) / (n - 1) as f64;
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::Csv("axis must be strictly increasing".into()));
        }
        let tol = 1e-6 * step;
        for (k, &u) in axis.iter().enumerate() {
            if (u - (axis[0] + step * k as f64)).abs() > tol {
                return Err(Error::Csv(format!("non-uniform step at row {}", k + 2)));
            }
        }
        let grid = Grid::new(samples, step, axis[0])?;
        Ok((representation, grid))
    }
}

fn planner(n: usize, sign: f64) -> Arc<dyn Fft<f64>> {
    let mut planner = FftPlanner::new();
    if sign < 0.0 {
        planner.plan_fft_forward(n)
    } else {
        planner.plan_fft_inverse(n)
    }
}

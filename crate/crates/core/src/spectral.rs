//! Periodic pseudospectral toolbox on `[0, L)`.
//!
//! Conventions, fixed for the whole crate:
//!
//! * grid points `x_j = j·L/N`, `N` even;
//! * coefficients `û_m = (1/N) Σ_j f(x_j) e^{-i k_m x_j}`, so `û_0` is the mean;
//! * wavenumbers `k_m = 2πm/L`, stored in FFT order (`m = 0, 1, …, N/2-1, -N/2, …, -1`);
//! * `∫ |f|² dx = L Σ_m |û_m|²` (Parseval), which fixes the explicit `L`
//!   factor in every norm;
//! * the Nyquist mode `m = -N/2` is dropped by odd-order derivatives and by
//!   dealiasing, since `(ik)^odd` has no conjugate partner there.

use std::fmt;
use std::io::{BufRead, Write};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::splitting::SplitState;

/// Uniform periodic grid together with its wavenumber table and FFT plans.
pub struct PeriodicGrid {
    length: f64,
    n: usize,
    wavenumbers: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for PeriodicGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PeriodicGrid")
            .field("length", &self.length)
            .field("n", &self.n)
            .finish()
    }
}

impl PeriodicGrid {
    pub fn new(length: f64, n: usize) -> Result<Arc<Self>> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "domain length must be positive, got {length}"
            )));
        }
        if n < 4 || n % 2 != 0 {
            return Err(Error::InvalidConfig(format!(
                "number of points must be even and at least 4, got {n}"
            )));
        }
        let wavenumbers = (0..n)
            .map(|i| 2.0 * std::f64::consts::PI * mode_of(i, n) as f64 / length)
            .collect();
        let mut planner = FftPlanner::new();
        Ok(Arc::new(Self {
            length,
            n,
            wavenumbers,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }))
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        j as f64 * self.length / self.n as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|j| self.x(j))
    }

    /// Wavenumbers in FFT order.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    /// Mode number `m` of FFT slot `i`.
    pub fn mode(&self, i: usize) -> i64 {
        mode_of(i, self.n)
    }

    /// FFT slot of mode `m`, for `-N/2 <= m < N/2`.
    pub fn slot(&self, m: i64) -> Option<usize> {
        let half = (self.n / 2) as i64;
        if m < -half || m >= half {
            None
        } else if m >= 0 {
            Some(m as usize)
        } else {
            Some((m + self.n as i64) as usize)
        }
    }

    pub fn nyquist_slot(&self) -> usize {
        self.n / 2
    }

    /// Largest resolved |k|, `πN/L`.
    pub fn k_max(&self) -> f64 {
        std::f64::consts::PI * self.n as f64 / self.length
    }

    /// Modes with `|m| > N/3` are removed by dealiasing.
    pub fn dealias_cutoff(&self) -> i64 {
        (self.n / 3) as i64
    }

    pub fn same_as(&self, other: &PeriodicGrid) -> bool {
        self.n == other.n && self.length == other.length
    }

    /// Normalized forward transform of real samples.
    pub(crate) fn forward(&self, values: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward.process(&mut buf);
        let scale = 1.0 / self.n as f64;
        for c in buf.iter_mut() {
            *c *= scale;
        }
        buf[self.n / 2].im = 0.0;
        buf
    }

    /// Inverse transform, keeping the real part.
    pub(crate) fn inverse(&self, mut coeffs: Vec<Complex64>) -> Vec<f64> {
        self.inverse.process(&mut coeffs);
        coeffs.into_iter().map(|c| c.re).collect()
    }

    /// Zeroes every mode with `|m| > N/3` (this includes the Nyquist mode).
    pub(crate) fn truncate(&self, coeffs: &mut [Complex64]) {
        let cutoff = self.dealias_cutoff();
        for (i, c) in coeffs.iter_mut().enumerate() {
            if self.mode(i).abs() > cutoff {
                *c = Complex64::new(0.0, 0.0);
            }
        }
    }
}

fn mode_of(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// `(ik)^order` with the Nyquist entry zeroed for odd orders.
pub(crate) fn derivative_multiplier(grid: &PeriodicGrid, slot: usize, order: u32) -> Complex64 {
    if order == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if order % 2 == 1 && slot == grid.nyquist_slot() {
        return Complex64::new(0.0, 0.0);
    }
    let k = grid.wavenumbers[slot];
    Complex64::new(0.0, k).powu(order)
}

/// Real samples of a periodic function.
#[derive(Debug, Clone)]
pub struct RealField {
    grid: Arc<PeriodicGrid>,
    values: Vec<f64>,
}

impl RealField {
    pub fn new(grid: Arc<PeriodicGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::InvalidConfig(format!(
                "expected {} samples, got {}",
                grid.n(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("field samples".into()));
        }
        Ok(Self { grid, values })
    }

    /// Unchecked constructor for internal results known to be well formed.
    pub(crate) fn from_parts(grid: Arc<PeriodicGrid>, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.n());
        Self { grid, values }
    }

    pub fn from_fn(grid: Arc<PeriodicGrid>, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.points().map(f).collect();
        Self { grid, values }
    }

    pub fn zeros(grid: Arc<PeriodicGrid>) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: Arc<PeriodicGrid>, c: f64) -> Self {
        let values = vec![c; grid.n()];
        Self { grid, values }
    }

    pub fn grid(&self) -> &Arc<PeriodicGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn same_grid(&self, other: &RealField) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || self.grid.same_as(&other.grid)
    }

    pub fn scaled(&self, a: f64) -> RealField {
        self.map(|v| a * v)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> RealField {
        Self::from_parts(
            self.grid.clone(),
            self.values.iter().map(|&v| f(v)).collect(),
        )
    }

    /// `a·self + b·other`.
    pub fn lin_comb(&self, a: f64, other: &RealField, b: f64) -> Result<RealField> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Ok(Self::from_parts(self.grid.clone(), values))
    }

    pub fn checked_sub(&self, other: &RealField) -> Result<RealField> {
        self.lin_comb(1.0, other, -1.0)
    }

    pub fn to_spectrum(&self) -> Spectrum {
        to_spectrum(self)
    }

    /// Writes the snapshot as CSV with header `x,u`, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "x,u")?;
        for (j, v) in self.values.iter().enumerate() {
            writeln!(out, "{:.16e},{:.16e}", self.grid.x(j), v)?;
        }
        Ok(())
    }

    /// Reads an `x,u` snapshot onto `grid`; the `x` column must match the grid points.
    pub fn read_csv<R: BufRead>(grid: Arc<PeriodicGrid>, input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty snapshot".into()))??;
        if header.trim() != "x,u" {
            return Err(Error::Parse(format!(
                "unexpected header '{}'",
                header.trim()
            )));
        }
        let mut values = Vec::with_capacity(grid.n());
        for (j, line) in lines.enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (x, u) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("row {}: expected two columns", j + 1)))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("row {}: {e}", j + 1)))
            };
            let (x, u) = (parse(x)?, parse(u)?);
            let idx = values.len();
            if idx >= grid.n() || (x - grid.x(idx)).abs() > 1e-9 * grid.length() {
                return Err(Error::Parse(format!(
                    "row {}: x = {x} does not match the grid",
                    j + 1
                )));
            }
            values.push(u);
        }
        Self::new(grid, values)
    }
}

impl SplitState for RealField {
    fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

macro_rules! binary_op {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&RealField> for &RealField {
            type Output = RealField;

            /// Panics when the fields live on different grids.
            fn $method(self, rhs: &RealField) -> RealField {
                assert!(self.same_grid(rhs), "fields live on different grids");
                let values = self
                    .values
                    .iter()
                    .zip(&rhs.values)
                    .map(|(a, b)| a $op b)
                    .collect();
                RealField::from_parts(self.grid.clone(), values)
            }
        }
    };
}

binary_op!(Add, add, +);
binary_op!(Sub, sub, -);

impl Mul<&RealField> for f64 {
    type Output = RealField;

    fn mul(self, rhs: &RealField) -> RealField {
        rhs.scaled(self)
    }
}

impl Neg for &RealField {
    type Output = RealField;

    fn neg(self) -> RealField {
        self.scaled(-1.0)
    }
}

/// Fourier coefficients of a real field, in FFT order.
#[derive(Debug, Clone)]
pub struct Spectrum {
    grid: Arc<PeriodicGrid>,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    /// Wraps coefficients in FFT order after checking conjugate symmetry
    /// (relative `1e-12`). The Nyquist coefficient is forced real.
    pub fn from_coeffs(grid: Arc<PeriodicGrid>, mut coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.n() {
            return Err(Error::InvalidConfig(format!(
                "expected {} coefficients, got {}",
                grid.n(),
                coeffs.len()
            )));
        }
        let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()));
        let n = grid.n();
        for i in 1..n / 2 {
            let gap = (coeffs[i] - coeffs[n - i].conj()).norm();
            if gap > 1e-12 * scale.max(f64::MIN_POSITIVE) {
                return Err(Error::InvalidConfig(format!(
                    "coefficients of modes ±{i} are not conjugate"
                )));
            }
        }
        if coeffs[0].im.abs() > 1e-12 * scale {
            return Err(Error::InvalidConfig("mean coefficient is not real".into()));
        }
        coeffs[0].im = 0.0;
        coeffs[n / 2].im = 0.0;
        Ok(Self { grid, coeffs })
    }

    pub fn grid(&self) -> &Arc<PeriodicGrid> {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of mode `m ∈ [-N/2, N/2)`.
    pub fn coeff(&self, m: i64) -> Option<Complex64> {
        self.grid.slot(m).map(|i| self.coeffs[i])
    }

    pub fn to_field(&self) -> RealField {
        from_spectrum(self)
    }
}

pub fn to_spectrum(f: &RealField) -> Spectrum {
    Spectrum {
        grid: f.grid.clone(),
        coeffs: f.grid.forward(&f.values),
    }
}

pub fn from_spectrum(s: &Spectrum) -> RealField {
    RealField::from_parts(s.grid.clone(), s.grid.inverse(s.coeffs.clone()))
}

/// `∂_x^order f`, computed by multiplying the spectrum with `(ik)^order`.
pub fn derivative(f: &RealField, order: u32) -> RealField {
    if order == 0 {
        return f.clone();
    }
    let grid = &f.grid;
    let mut coeffs = grid.forward(&f.values);
    for (i, c) in coeffs.iter_mut().enumerate() {
        *c *= derivative_multiplier(grid, i, order);
    }
    RealField::from_parts(grid.clone(), grid.inverse(coeffs))
}

/// Pointwise product with 2/3-rule dealiasing: both factors and the result
/// are truncated to `|m| <= N/3`.
pub fn dealiased_product(f: &RealField, g: &RealField) -> Result<RealField> {
    if !f.same_grid(g) {
        return Err(Error::GridMismatch);
    }
    let grid = &f.grid;
    let mut fh = grid.forward(&f.values);
    let mut gh = grid.forward(&g.values);
    grid.truncate(&mut fh);
    grid.truncate(&mut gh);
    Ok(RealField::from_parts(
        grid.clone(),
        dealiased_product_spectral(grid, fh, gh),
    ))
}

/// Product of two already-truncated spectra, returned in physical space and
/// truncated again.
pub(crate) fn dealiased_product_spectral(
    grid: &PeriodicGrid,
    fh: Vec<Complex64>,
    gh: Vec<Complex64>,
) -> Vec<f64> {
    let fv = grid.inverse(fh);
    let gv = grid.inverse(gh);
    let prod: Vec<f64> = fv.iter().zip(&gv).map(|(a, b)| a * b).collect();
    let mut ph = grid.forward(&prod);
    grid.truncate(&mut ph);
    grid.inverse(ph)
}

/// `Σ_{j=0}^{s} k^{2j}`.
fn sobolev_weight(k: f64, s: u32) -> f64 {
    let k2 = k * k;
    let mut w = 1.0;
    let mut p = 1.0;
    for _ in 0..s {
        p *= k2;
        w += p;
    }
    w
}

/// `(f, g)_{H^s} = Σ_{j≤s} ∫ ∂^j f ∂^j g dx`, evaluated exactly through Parseval.
pub fn sobolev_inner(f: &RealField, g: &RealField, s: u32) -> Result<f64> {
    if !f.same_grid(g) {
        return Err(Error::GridMismatch);
    }
    let grid = &f.grid;
    let fh = grid.forward(&f.values);
    let gh = grid.forward(&g.values);
    let sum: f64 = fh
        .iter()
        .zip(&gh)
        .zip(grid.wavenumbers())
        .map(|((a, b), &k)| sobolev_weight(k, s) * (a * b.conj()).re)
        .sum();
    Ok(grid.length() * sum)
}

/// Discrete `H^s` norm, `sqrt(L Σ_m (Σ_{j≤s} k_m^{2j}) |û_m|²)`.
pub fn sobolev_norm(f: &RealField, s: u32) -> f64 {
    spectrum_sobolev_norm(&f.to_spectrum(), s)
}

pub fn spectrum_sobolev_norm(spec: &Spectrum, s: u32) -> f64 {
    let grid = &spec.grid;
    let sum: f64 = spec
        .coeffs
        .iter()
        .zip(grid.wavenumbers())
        .map(|(c, &k)| sobolev_weight(k, s) * c.norm_sqr())
        .sum();
    (grid.length() * sum).sqrt()
}

/// `∫ f g dx`.
pub fn l2_inner(f: &RealField, g: &RealField) -> Result<f64> {
    sobolev_inner(f, g, 0)
}

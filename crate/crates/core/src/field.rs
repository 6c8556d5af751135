//! Complex fields on a [`Grid2D`], their mode spectra, and the transforms
//! and quadratures connecting them.
//!
//! The transform pair is the discrete image of
//! `psi(x) = (1/2pi) int dp a(p) e^{+ip.x}` and
//! `a(p) = (1/2pi) int dx psi(x) e^{-ip.x}`:
//!
//! ```text
//! a_m   = (dx dy / 2pi)   sum_j psi_j e^{-i p_m . x_j}
//! psi_j = (dpx dpy / 2pi) sum_m a_m   e^{+i p_m . x_j}
//! ```
//!
//! which is an exact inverse pair and satisfies
//! `sum |psi|^2 dx dy = sum |a|^2 dpx dpy` to round-off.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::fft2;
use crate::grid::Grid2D;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Complex samples `psi(x_i, y_j)` at a fixed longitudinal position `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field2D {
    grid: Grid2D,
    z: f64,
    values: Vec<Complex64>,
}

impl Field2D {
    pub fn new(grid: Grid2D, z: f64, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        if !z.is_finite() {
            return Err(Error::NonFinite("field z"));
        }
        if !all_finite(&values) {
            return Err(Error::NonFinite("field samples"));
        }
        Ok(Self { grid, z, values })
    }

    pub(crate) fn from_parts(grid: Grid2D, z: f64, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, z, values }
    }

    pub fn zeros(grid: Grid2D, z: f64) -> Self {
        Self::from_parts(grid, z, vec![ZERO; grid.len()])
    }

    /// Sample `f(x, y)` at every grid point.
    pub fn from_fn(grid: Grid2D, z: f64, f: impl Fn(f64, f64) -> Complex64) -> Result<Self> {
        let xs = grid.xs();
        let mut values = Vec::with_capacity(grid.len());
        for iy in 0..grid.ny() {
            let y = grid.y(iy);
            for &x in &xs {
                values.push(f(x, y));
            }
        }
        Self::new(grid, z, values)
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn with_z(mut self, z: f64) -> Self {
        self.z = z;
        self
    }

    pub fn conj(&self) -> Self {
        Self::from_parts(self.grid, self.z, self.values.iter().map(|v| v.conj()).collect())
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self::from_parts(self.grid, self.z, self.values.iter().map(|v| v * c).collect())
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self::from_parts(self.grid, self.z, self.values.iter().map(|&v| f(v)).collect())
    }

    /// `sqrt(int |psi|^2)`.
    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.cell_area()).sqrt()
    }

    /// `sqrt(int |psi - other|^2)`.
    pub fn l2_distance(&self, other: &Field2D) -> Result<f64> {
        check_same_grid(&self.grid, &other.grid)?;
        let s: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        Ok((s * self.grid.cell_area()).sqrt())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest `|psi|` outside the centred box covering 75% of each axis,
    /// relative to the peak. Zero for the zero field.
    pub fn tail_ratio(&self) -> f64 {
        let peak = self.max_abs();
        if peak == 0.0 {
            return 0.0;
        }
        let (nx, ny) = (self.grid.nx(), self.grid.ny());
        let half_x = 0.375 * nx as f64 * self.grid.dx();
        let half_y = 0.375 * ny as f64 * self.grid.dy();
        let mut tail = 0.0f64;
        for iy in 0..ny {
            let y = self.grid.y(iy);
            for ix in 0..nx {
                let x = self.grid.x(ix);
                if x.abs() > half_x || y.abs() > half_y {
                    tail = tail.max(self.values[iy * nx + ix].norm());
                }
            }
        }
        tail / peak
    }

    /// Localization guard: the field has decayed below `1e-10` of its peak
    /// outside the inner 75% of the domain, so discarded surface terms are
    /// numerically negligible.
    pub fn is_localized(&self) -> bool {
        self.tail_ratio() <= 1e-10
    }
}

/// Mode amplitudes `a(p)` on the dual grid together with the longitudinal
/// frequency `zeta_p` of each mode.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum2D {
    grid: Grid2D,
    z: f64,
    amps: Vec<Complex64>,
    zeta: Vec<Complex64>,
}

impl Spectrum2D {
    pub fn new(grid: Grid2D, z: f64, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} modes, got {}",
                grid.len(),
                amps.len()
            )));
        }
        if !z.is_finite() {
            return Err(Error::NonFinite("spectrum z"));
        }
        if !all_finite(&amps) {
            return Err(Error::NonFinite("spectrum amplitudes"));
        }
        Ok(Self::from_parts(grid, z, amps))
    }

    pub(crate) fn from_parts(grid: Grid2D, z: f64, amps: Vec<Complex64>) -> Self {
        let zeta = grid.zeta_table();
        Self { grid, z, amps, zeta }
    }

    pub fn zeros(grid: Grid2D, z: f64) -> Self {
        Self::from_parts(grid, z, vec![ZERO; grid.len()])
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn zeta(&self) -> &[Complex64] {
        &self.zeta
    }

    /// `p^2 <= k0^2` (including the branch band).
    pub fn is_propagating(&self, mode: usize) -> bool {
        self.zeta[mode].im == 0.0
    }

    pub fn propagating_mask(&self) -> Vec<bool> {
        self.zeta.iter().map(|z| z.im == 0.0).collect()
    }

    pub fn with_z(mut self, z: f64) -> Self {
        self.z = z;
        self
    }

    /// Multiply each mode by `f(mode, zeta_p)`.
    pub fn map_modes(&self, f: impl Fn(usize, Complex64) -> Complex64) -> Self {
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(i, a)| a * f(i, self.zeta[i]))
            .collect();
        Self { grid: self.grid, z: self.z, amps, zeta: self.zeta.clone() }
    }

    /// Spectrum of `d_z psi` for a forward (angular-spectrum) field:
    /// each mode times `i zeta_p`.
    pub fn dz(&self) -> Self {
        self.map_modes(|_, zeta| Complex64::i() * zeta)
    }

    /// Spectrum of `d_z^2 psi` for a forward field: each mode times
    /// `-zeta_p^2`.
    pub fn dz2(&self) -> Self {
        self.map_modes(|_, zeta| -(zeta * zeta))
    }

    /// `sum |a|^2 dpx dpy`.
    pub fn power(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.mode_area()
    }
}

/// A field together with its longitudinal derivative on the same plane: the
/// Cauchy data of the second-order Helmholtz equation.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyPlane {
    pub psi: Field2D,
    pub dz: Field2D,
}

impl CauchyPlane {
    pub fn new(psi: Field2D, dz: Field2D) -> Result<Self> {
        check_same_grid(psi.grid(), dz.grid())?;
        Ok(Self { psi, dz })
    }

    /// Cauchy data of the forward field whose spectrum is `s`, with `d_z psi`
    /// taken spectrally.
    pub fn from_spectrum(s: &Spectrum2D) -> Self {
        let psi = inverse_transform_unchecked(s);
        let dz = inverse_transform_unchecked(&s.dz());
        Self { psi, dz }
    }

    pub fn grid(&self) -> &Grid2D {
        self.psi.grid()
    }

    pub fn z(&self) -> f64 {
        self.psi.z()
    }
}

pub(crate) fn check_same_grid(a: &Grid2D, b: &Grid2D) -> Result<()> {
    if a.same_as(b) {
        Ok(())
    } else {
        Err(Error::GridMismatch("operands live on different grids"))
    }
}

fn all_finite(v: &[Complex64]) -> bool {
    v.iter().all(|c| c.re.is_finite() && c.im.is_finite())
}

/// `e^{2 pi i m c / n}` per FFT-ordered index, with `c = n/2` the index of
/// the coordinate origin.
fn origin_phase(n: usize) -> Vec<Complex64> {
    let c = (n / 2) as f64;
    (0..n)
        .map(|i| {
            let m = Grid2D::mode_number(i, n) as f64;
            Complex64::from_polar(1.0, 2.0 * PI * m * c / n as f64)
        })
        .collect()
}

pub fn forward_transform(f: &Field2D) -> Result<Spectrum2D> {
    if !all_finite(&f.values) {
        return Err(Error::NonFinite("field samples"));
    }
    Ok(forward_transform_unchecked(f))
}

pub(crate) fn forward_transform_unchecked(f: &Field2D) -> Spectrum2D {
    let g = f.grid;
    let (nx, ny) = (g.nx(), g.ny());
    let mut data = f.values.clone();
    fft2(&mut data, nx, ny, false);
    let (phx, phy) = (origin_phase(nx), origin_phase(ny));
    let scale = g.cell_area() / (2.0 * PI);
    for iy in 0..ny {
        for ix in 0..nx {
            data[iy * nx + ix] *= phx[ix] * phy[iy] * scale;
        }
    }
    Spectrum2D::from_parts(g, f.z, data)
}

pub fn inverse_transform(s: &Spectrum2D) -> Result<Field2D> {
    if !all_finite(&s.amps) {
        return Err(Error::NonFinite("spectrum amplitudes"));
    }
    Ok(inverse_transform_unchecked(s))
}

pub(crate) fn inverse_transform_unchecked(s: &Spectrum2D) -> Field2D {
    let g = s.grid;
    let (nx, ny) = (g.nx(), g.ny());
    let (phx, phy) = (origin_phase(nx), origin_phase(ny));
    let scale = g.mode_area() / (2.0 * PI);
    let mut data: Vec<Complex64> = Vec::with_capacity(g.len());
    for iy in 0..ny {
        for ix in 0..nx {
            data.push(s.amps[iy * nx + ix] * (phx[ix] * phy[iy]).conj() * scale);
        }
    }
    fft2(&mut data, nx, ny, true);
    Field2D::from_parts(g, s.z, data)
}

/// `int f dx dy` as the periodic Riemann sum `sum f dx dy`.
pub fn integrate_plane(grid: &Grid2D, samples: &[f64]) -> Result<f64> {
    if samples.len() != grid.len() {
        return Err(Error::InvalidArgument("sample count does not match grid".into()));
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("integrand"));
    }
    Ok(plane_sum(grid, samples))
}

pub fn integrate_plane_complex(grid: &Grid2D, samples: &[Complex64]) -> Result<Complex64> {
    if samples.len() != grid.len() {
        return Err(Error::InvalidArgument("sample count does not match grid".into()));
    }
    if !all_finite(samples) {
        return Err(Error::NonFinite("integrand"));
    }
    Ok(samples.iter().sum::<Complex64>() * grid.cell_area())
}

pub(crate) fn plane_sum(grid: &Grid2D, samples: &[f64]) -> f64 {
    samples.iter().sum::<f64>() * grid.cell_area()
}

/// Spectral transverse gradient `(d_x psi, d_y psi)`.
pub fn gradient_xy(f: &Field2D) -> (Field2D, Field2D) {
    let s = forward_transform_unchecked(f);
    let g = f.grid;
    let (pxs, pys) = (g.pxs(), g.pys());
    let nx = g.nx();
    let gx = s.map_modes(|i, _| Complex64::new(0.0, pxs[i % nx]));
    let gy = s.map_modes(|i, _| Complex64::new(0.0, pys[i / nx]));
    (inverse_transform_unchecked(&gx), inverse_transform_unchecked(&gy))
}

/// Spectral transverse Laplacian `(d_x^2 + d_y^2) psi`.
pub fn laplacian(f: &Field2D) -> Field2D {
    let s = forward_transform_unchecked(f);
    let p2 = f.grid.p2_table();
    inverse_transform_unchecked(&s.map_modes(|i, _| Complex64::new(-p2[i], 0.0)))
}

//! Exact quadrature over a centred rectangular window of the periodic grid.
//!
//! Integrals over a sub-window are evaluated by integrating the trigonometric
//! interpolant of the samples, which is exact for band-limited integrands.
//! Window edges sit on grid lines so boundary values are plain samples.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid2D;

#[derive(Debug, Clone)]
pub struct Window {
    grid: Grid2D,
    ix: (usize, usize),
    iy: (usize, usize),
    wx: Vec<f64>,
    wy: Vec<f64>,
}

impl Window {
    /// Centred window covering half of each axis.
    pub fn centered_half(grid: &Grid2D) -> Result<Self> {
        let (nx, ny) = (grid.nx(), grid.ny());
        let (hx, hy) = (nx / 4, ny / 4);
        if hx == 0 || hy == 0 {
            return Err(Error::InvalidGrid("window needs at least 4 samples per axis".into()));
        }
        let ix = (nx / 2 - hx, nx / 2 + hx);
        let iy = (ny / 2 - hy, ny / 2 + hy);
        let wx = axis_weights(nx, grid.dx(), grid.x(ix.0), grid.x(ix.1));
        let wy = axis_weights(ny, grid.dy(), grid.y(iy.0), grid.y(iy.1));
        Ok(Self { grid: *grid, ix, iy, wx, wy })
    }

    pub fn x_edges(&self) -> (f64, f64) {
        (self.grid.x(self.ix.0), self.grid.x(self.ix.1))
    }

    pub fn y_edges(&self) -> (f64, f64) {
        (self.grid.y(self.iy.0), self.grid.y(self.iy.1))
    }

    /// `int_W f dx dy`.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        let nx = self.grid.nx();
        let mut acc = 0.0;
        for (iy, wy) in self.wy.iter().enumerate() {
            let row = &f[iy * nx..(iy + 1) * nx];
            let s: f64 = row.iter().zip(&self.wx).map(|(v, w)| v * w).sum();
            acc += wy * s;
        }
        acc
    }

    /// Outward flux `oint_{dW} (F_x n_x + F_y n_y) dl` of the vector density
    /// `(fx, fy)`.
    pub fn boundary_flux(&self, fx: &[f64], fy: &[f64]) -> f64 {
        let nx = self.grid.nx();
        let (lo, hi) = self.ix;
        let mut acc = 0.0;
        for (iy, wy) in self.wy.iter().enumerate() {
            acc += wy * (fx[iy * nx + hi] - fx[iy * nx + lo]);
        }
        let (lo, hi) = self.iy;
        for (ix, wx) in self.wx.iter().enumerate() {
            acc += wx * (fy[hi * nx + ix] - fy[lo * nx + ix]);
        }
        acc
    }
}

/// Weights `w_j` with `sum_j w_j f(x_j) = int_a^b f dx` for every
/// trigonometric polynomial resolved by the `n`-point periodic grid.
fn axis_weights(n: usize, d: f64, a: f64, b: f64) -> Vec<f64> {
    let dp = 2.0 * PI / (n as f64 * d);
    let c = (n / 2) as f64;
    let xs: Vec<f64> = (0..n).map(|j| (j as f64 - c) * d).collect();
    let top = (n - 1) / 2;
    let mut w = vec![b - a; n];
    for m in 1..=top {
        let p = m as f64 * dp;
        let integral = (Complex64::from_polar(1.0, p * b) - Complex64::from_polar(1.0, p * a)) / Complex64::new(0.0, p);
        for (wj, &x) in w.iter_mut().zip(&xs) {
            *wj += 2.0 * (Complex64::from_polar(1.0, -p * x) * integral).re;
        }
    }
    if n.is_multiple_of(2) {
        let p = (n / 2) as f64 * dp;
        let integral = ((p * b).sin() - (p * a).sin()) / p;
        for (wj, &x) in w.iter_mut().zip(&xs) {
            *wj += (p * x).cos() * integral;
        }
    }
    for wj in &mut w {
        *wj /= n as f64;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_trig_polynomials_exactly() {
        let g = Grid2D::new(32, 16, 0.4, 0.7, 1.0).unwrap();
        let win = Window::centered_half(&g).unwrap();
        let (xa, xb) = win.x_edges();
        let (ya, yb) = win.y_edges();
        let (kx, ky) = (3.0 * g.dpx(), 2.0 * g.dpy());
        let mut f = Vec::new();
        for iy in 0..g.ny() {
            for ix in 0..g.nx() {
                let (x, y) = (g.x(ix), g.y(iy));
                f.push(1.0 + (kx * x).cos() * (ky * y + 0.3).sin() + (kx * x).sin());
            }
        }
        let exact_x_cos = ((kx * xb).sin() - (kx * xa).sin()) / kx;
        let exact_x_sin = ((kx * xa).cos() - (kx * xb).cos()) / kx;
        let exact_y_sin = ((ky * ya + 0.3).cos() - (ky * yb + 0.3).cos()) / ky;
        let exact = (xb - xa) * (yb - ya) + exact_x_cos * exact_y_sin + exact_x_sin * (yb - ya);
        assert!((win.integrate(&f) - exact).abs() < 1e-12 * exact.abs());
    }

    #[test]
    fn flux_of_gradient_matches_divergence_theorem() {
        // F = (sin(kx x), 0): oint F.n = sin(kx xb) - sin(kx xa) times the y-extent
        let g = Grid2D::square(16, 0.5, 1.0).unwrap();
        let win = Window::centered_half(&g).unwrap();
        let kx = 2.0 * g.dpx();
        let mut fx = Vec::new();
        for _ in 0..g.ny() {
            for ix in 0..g.nx() {
                fx.push((kx * g.x(ix)).sin());
            }
        }
        let fy = vec![0.0; g.len()];
        let (xa, xb) = win.x_edges();
        let (ya, yb) = win.y_edges();
        let exact = ((kx * xb).sin() - (kx * xa).sin()) * (yb - ya);
        assert!((win.boundary_flux(&fx, &fy) - exact).abs() < 1e-12);
    }
}

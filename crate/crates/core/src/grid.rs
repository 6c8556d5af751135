//! Uniform transverse sampling and its dual (spatial-frequency) grid.
//!
//! Samples are stored row-major with `y` outer and `x` inner, so sample
//! `(ix, iy)` lives at `iy * nx + ix`. Coordinates are measured from the
//! geometric centre: `x_i = (i - nx/2) dx`. The dual grid uses the same
//! storage order as the FFT output, with mode index `m` mapped onto
//! `(-n/2, n/2]` so that `p_x` spans `(-pi/dx, pi/dx]`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Modes with `|p^2 - k0^2| < BRANCH_EPS * k0^2` sit on the branch point and
/// are treated as propagating with `zeta = 0`.
pub const BRANCH_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    nx: usize,
    ny: usize,
    dx: f64,
    dy: f64,
    k0: f64,
}

impl Grid2D {
    pub fn new(nx: usize, ny: usize, dx: f64, dy: f64, k0: f64) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 samples per axis, got {nx} x {ny}"
            )));
        }
        if nx.checked_mul(ny).is_none() {
            return Err(Error::InvalidGrid("sample count overflows".into()));
        }
        for (name, v) in [("dx", dx), ("dy", dy), ("k0", k0)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidGrid(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        Ok(Self { nx, ny, dx, dy, k0 })
    }

    /// Square grid helper.
    pub fn square(n: usize, d: f64, k0: f64) -> Result<Self> {
        Self::new(n, n, d, d, k0)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }
    pub fn ny(&self) -> usize {
        self.ny
    }
    pub fn dx(&self) -> f64 {
        self.dx
    }
    pub fn dy(&self) -> f64 {
        self.dy
    }
    pub fn k0(&self) -> f64 {
        self.k0
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }

    #[inline]
    pub fn x(&self, ix: usize) -> f64 {
        (ix as f64 - (self.nx / 2) as f64) * self.dx
    }

    #[inline]
    pub fn y(&self, iy: usize) -> f64 {
        (iy as f64 - (self.ny / 2) as f64) * self.dy
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.nx).map(|i| self.x(i)).collect()
    }

    pub fn ys(&self) -> Vec<f64> {
        (0..self.ny).map(|i| self.y(i)).collect()
    }

    /// Signed mode number for FFT-ordered index `i` on an axis of length `n`.
    #[inline]
    pub fn mode_number(i: usize, n: usize) -> i64 {
        if i <= n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    /// FFT-ordered index for a signed mode number, if it is on the axis.
    pub fn mode_index(m: i64, n: usize) -> Option<usize> {
        let n_i = n as i64;
        let lo = -((n_i - 1) / 2);
        let hi = n_i / 2;
        if m < lo || m > hi {
            return None;
        }
        Some(if m >= 0 { m as usize } else { (m + n_i) as usize })
    }

    pub fn dpx(&self) -> f64 {
        2.0 * PI / (self.nx as f64 * self.dx)
    }

    pub fn dpy(&self) -> f64 {
        2.0 * PI / (self.ny as f64 * self.dy)
    }

    #[inline]
    pub fn px(&self, ix: usize) -> f64 {
        Self::mode_number(ix, self.nx) as f64 * self.dpx()
    }

    #[inline]
    pub fn py(&self, iy: usize) -> f64 {
        Self::mode_number(iy, self.ny) as f64 * self.dpy()
    }

    pub fn pxs(&self) -> Vec<f64> {
        (0..self.nx).map(|i| self.px(i)).collect()
    }

    pub fn pys(&self) -> Vec<f64> {
        (0..self.ny).map(|i| self.py(i)).collect()
    }

    /// Area element of one real-space sample.
    pub fn cell_area(&self) -> f64 {
        self.dx * self.dy
    }

    /// Area element of one dual-grid mode.
    pub fn mode_area(&self) -> f64 {
        self.dpx() * self.dpy()
    }

    /// Physical area of the periodic domain.
    pub fn area(&self) -> f64 {
        self.nx as f64 * self.dx * self.ny as f64 * self.dy
    }

    /// Locate an on-grid frequency. Returns the storage index of the mode if
    /// `p` is an exact dual-grid frequency (to 1e-9 of a grid step).
    pub fn mode_at(&self, p: [f64; 2]) -> Option<usize> {
        let mx = p[0] / self.dpx();
        let my = p[1] / self.dpy();
        let (rx, ry) = (mx.round(), my.round());
        if (mx - rx).abs() > 1e-9 || (my - ry).abs() > 1e-9 {
            return None;
        }
        let ix = Self::mode_index(rx as i64, self.nx)?;
        let iy = Self::mode_index(ry as i64, self.ny)?;
        Some(self.index(ix, iy))
    }

    /// Per-mode `zeta_p`, FFT order.
    pub fn zeta_table(&self) -> Vec<Complex64> {
        let pxs = self.pxs();
        let pys = self.pys();
        let mut out = Vec::with_capacity(self.len());
        for py in &pys {
            for px in &pxs {
                out.push(zeta(px * px + py * py, self.k0));
            }
        }
        out
    }

    /// Per-mode `p^2`, FFT order.
    pub fn p2_table(&self) -> Vec<f64> {
        let pxs = self.pxs();
        let pys = self.pys();
        let mut out = Vec::with_capacity(self.len());
        for py in &pys {
            for px in &pxs {
                out.push(px * px + py * py);
            }
        }
        out
    }

    pub fn same_as(&self, other: &Grid2D) -> bool {
        self == other
    }
}

/// `zeta = +(k0^2 - p^2)^{1/2}` on the branch fixed by `zeta >= 0` for
/// propagating modes and `zeta = i|zeta|` for evanescent ones. Exactly one of
/// the real and imaginary parts is nonzero (or both are zero at the branch
/// point).
pub fn zeta(p2: f64, k0: f64) -> Complex64 {
    let s = k0 * k0 - p2;
    if s.abs() < BRANCH_EPS * k0 * k0 {
        Complex64::new(0.0, 0.0)
    } else if s > 0.0 {
        Complex64::new(s.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-s).sqrt())
    }
}

/// `zeta_p^2 = k0^2 - p^2`, zeroed inside the branch band.
pub fn zeta_squared(p2: f64, k0: f64) -> f64 {
    let s = k0 * k0 - p2;
    if s.abs() < BRANCH_EPS * k0 * k0 {
        0.0
    } else {
        s
    }
}

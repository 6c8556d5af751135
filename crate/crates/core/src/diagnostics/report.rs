use num_complex::Complex64;

use crate::error::Result;
use crate::field::{CauchyPlane, Field2D, Spectrum2D};

use super::{angular_momentum, cauchy_spectra, energy, longitudinal_divergence, momentum, noether_charge, spectral_energy};

/// Column order of the diagnostics CSV.
pub const CSV_COLUMNS: [&str; 12] = ["z", "Q", "H", "H_L", "H_D", "Px", "Py", "Jx", "Jy", "Jz", "xbar", "ybar"];

/// Conserved and derived functionals at one plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsReport {
    pub z: f64,
    pub q: f64,
    pub h: f64,
    pub h_light: f64,
    pub h_dark: f64,
    pub p: [f64; 2],
    pub jx: f64,
    pub jy: f64,
    pub jz: f64,
    pub centroid: [f64; 2],
    /// `int (|d_z psi|^2 + psi* d_z^2 psi)`, when `d_z^2 psi` is known.
    pub lagrangian_integral: Complex64,
}

impl DiagnosticsReport {
    /// Report for a forward angular-spectrum field, with all `z`-derivatives
    /// taken spectrally.
    pub fn from_spectrum(s: &Spectrum2D) -> Result<Self> {
        let plane = CauchyPlane::from_spectrum(s);
        let dz2 = crate::field::inverse_transform_unchecked(&s.dz2());
        Self::from_cauchy(&plane, Some(&dz2))
    }

    /// Report for arbitrary Cauchy data. The energy split uses the canonical
    /// mode data `(Q, d_z Q)` of the plane.
    pub fn from_cauchy(plane: &CauchyPlane, dz2: Option<&Field2D>) -> Result<Self> {
        let q = noether_charge(plane)?;
        let h = energy(plane);
        let (sq, sdz) = cauchy_spectra(plane);
        let split = spectral_energy(&sq, &sdz)?;
        let p = momentum(plane);
        let am = angular_momentum(plane);
        let lagrangian_integral = match dz2 {
            Some(d) => longitudinal_divergence(plane, d)?,
            None => Complex64::new(0.0, 0.0),
        };
        Ok(Self {
            z: plane.z(),
            q,
            h,
            h_light: split.light,
            h_dark: split.dark,
            p,
            jx: am.jx,
            jy: am.jy,
            jz: am.jz,
            centroid: am.centroid,
            lagrangian_integral,
        })
    }

    /// Values in [`CSV_COLUMNS`] order.
    pub fn csv_values(&self) -> [f64; 12] {
        [
            self.z,
            self.q,
            self.h,
            self.h_light,
            self.h_dark,
            self.p[0],
            self.p[1],
            self.jx,
            self.jy,
            self.jz,
            self.centroid[0],
            self.centroid[1],
        ]
    }

    pub fn from_csv_values(v: [f64; 12]) -> Self {
        Self {
            z: v[0],
            q: v[1],
            h: v[2],
            h_light: v[3],
            h_dark: v[4],
            p: [v[5], v[6]],
            jx: v[7],
            jy: v[8],
            jz: v[9],
            centroid: [v[10], v[11]],
            lagrangian_integral: Complex64::new(0.0, 0.0),
        }
    }
}

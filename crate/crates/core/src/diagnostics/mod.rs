//! Conserved functionals, densities and continuity checks of the Helmholtz
//! field theory, evaluated on Cauchy data `(psi, d_z psi)` at one plane.
//!
//! All transverse derivatives are spectral. Coordinates for moments and
//! angular momentum are measured from the geometric grid centre.

mod report;
mod tensor;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{
    check_same_grid, forward_transform_unchecked, gradient_xy, laplacian, plane_sum, CauchyPlane, Field2D,
    Spectrum2D,
};
use crate::grid::{zeta_squared, Grid2D};

pub use report::{DiagnosticsReport, CSV_COLUMNS};
pub use tensor::{
    angular_momentum_continuity, angular_momentum_flux, momentum_continuity, noether_continuity, ray_check,
    stress_tensor, windowed_ray_check, AngularMomentumFlux, ContinuityBalance, StressTensor,
};

/// Imaginary residue allowed on nominally real functionals, relative to the
/// magnitude of the integrand.
pub const REAL_TOLERANCE: f64 = 1e-10;

/// `psi` and its three first derivatives, sample by sample.
pub(crate) struct Jet {
    pub grid: Grid2D,
    pub z: f64,
    pub psi: Vec<Complex64>,
    /// `[d_x, d_y, d_z]`
    pub d: [Vec<Complex64>; 3],
}

impl Jet {
    pub fn new(plane: &CauchyPlane) -> Self {
        let (gx, gy) = gradient_xy(&plane.psi);
        Self {
            grid: *plane.grid(),
            z: plane.z(),
            psi: plane.psi.values().to_vec(),
            d: [gx.into_values(), gy.into_values(), plane.dz.values().to_vec()],
        }
    }

    pub fn len(&self) -> usize {
        self.psi.len()
    }

    /// `sum_mu |d_mu psi|^2 - k0^2 |psi|^2`: the first-order Lagrangian
    /// density.
    pub fn lagrangian(&self, i: usize) -> f64 {
        let k0 = self.grid.k0();
        self.d.iter().map(|d| d[i].norm_sqr()).sum::<f64>() - k0 * k0 * self.psi[i].norm_sqr()
    }
}

/// Noether charge of the global phase symmetry,
/// `Q = (1/i) int (psi d_z psi* - psi* d_z psi)`.
pub fn noether_charge(plane: &CauchyPlane) -> Result<f64> {
    let g = plane.grid();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    for (p, d) in plane.psi.values().iter().zip(plane.dz.values()) {
        acc += p * d.conj() - p.conj() * d;
        scale += 2.0 * p.norm() * d.norm();
    }
    let q = acc * Complex64::new(0.0, -1.0) * g.cell_area();
    real_part(q, scale * g.cell_area(), "Noether charge")
}

fn real_part(v: Complex64, scale: f64, what: &str) -> Result<f64> {
    if v.im.abs() > REAL_TOLERANCE * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::Consistency(format!("{what} has imaginary residue {:e} (scale {scale:e})", v.im)));
    }
    Ok(v.re)
}

/// Pointwise Noether current `J_mu = (1/i)(psi d_mu psi* - psi* d_mu psi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoetherCurrent {
    /// Components `[J_x, J_y, J_z]`.
    pub j: [Vec<f64>; 3],
}

pub fn noether_current(plane: &CauchyPlane) -> NoetherCurrent {
    current_from_jet(&Jet::new(plane))
}

pub(crate) fn current_from_jet(jet: &Jet) -> NoetherCurrent {
    // (1/i)(w - w*) = 2 Im w with w = psi d psi*
    let comp = |d: &Vec<Complex64>| -> Vec<f64> {
        jet.psi.iter().zip(d).map(|(p, dp)| 2.0 * (p * dp.conj()).im).collect()
    };
    NoetherCurrent { j: [comp(&jet.d[0]), comp(&jet.d[1]), comp(&jet.d[2])] }
}

/// Pointwise `d_z J_z + div J` from three equally spaced planes: central
/// difference in `z`, spectral transverse divergence at the centre plane.
pub fn noether_divergence(minus: &CauchyPlane, centre: &CauchyPlane, plus: &CauchyPlane) -> Result<Vec<f64>> {
    check_same_grid(minus.grid(), centre.grid())?;
    check_same_grid(plus.grid(), centre.grid())?;
    let h = 0.5 * (plus.z() - minus.z());
    if !(h.abs() > 0.0) {
        return Err(Error::InvalidArgument("planes must be at distinct z".into()));
    }
    let jm = noether_current(minus);
    let jc = noether_current(centre);
    let jp = noether_current(plus);
    let div = transverse_divergence(centre.grid(), &jc.j[0], &jc.j[1]);
    Ok((0..div.len()).map(|i| (jp.j[2][i] - jm.j[2][i]) / (2.0 * h) + div[i]).collect())
}

pub(crate) fn transverse_divergence(grid: &Grid2D, fx: &[f64], fy: &[f64]) -> Vec<f64> {
    let as_field = |v: &[f64]| Field2D::from_parts(*grid, 0.0, v.iter().map(|&r| Complex64::new(r, 0.0)).collect());
    let (dxx, _) = gradient_xy(&as_field(fx));
    let (_, dyy) = gradient_xy(&as_field(fy));
    dxx.values().iter().zip(dyy.values()).map(|(a, b)| a.re + b.re).collect()
}

/// `H = int (|d_z psi|^2 - |grad psi|^2 + k0^2 |psi|^2)`.
pub fn energy(plane: &CauchyPlane) -> f64 {
    let jet = Jet::new(plane);
    let k0 = jet.grid.k0();
    let dens: Vec<f64> = (0..jet.len())
        .map(|i| jet.d[2][i].norm_sqr() - jet.d[0][i].norm_sqr() - jet.d[1][i].norm_sqr() + k0 * k0 * jet.psi[i].norm_sqr())
        .collect();
    plane_sum(&jet.grid, &dens)
}

/// Canonical Hamiltonian split into the propagating ("light") and
/// evanescent ("dark") sectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergySplit {
    pub total: f64,
    pub light: f64,
    pub dark: f64,
}

/// Spectral Hamiltonian from mode data `Q(p)` and `d_z Q(p)`, with the
/// conjugate momentum `P = (d_z Q)*`:
/// `H_L = int (|P|^2 + zeta^2 |Q|^2)` over `p^2 <= k0^2` and
/// `H_D = int (|P|^2 - |zeta|^2 |Q|^2)` over `p^2 > k0^2`.
pub fn spectral_energy(q: &Spectrum2D, dzq: &Spectrum2D) -> Result<EnergySplit> {
    check_same_grid(q.grid(), dzq.grid())?;
    let g = q.grid();
    let k0 = g.k0();
    let p2 = g.p2_table();
    let (mut light, mut dark) = (0.0, 0.0);
    for i in 0..g.len() {
        let qq = q.amps()[i].norm_sqr();
        let pp = dzq.amps()[i].norm_sqr();
        let z2 = zeta_squared(p2[i], k0);
        if q.is_propagating(i) {
            light += pp + z2 * qq;
        } else {
            dark += pp + z2 * qq;
        }
    }
    let da = g.mode_area();
    let (light, dark) = (light * da, dark * da);
    Ok(EnergySplit { total: light + dark, light, dark })
}

/// Spectral Hamiltonian of a forward angular-spectrum field at the plane of
/// `s`: `H_L = 2 int |Q|^2 zeta^2` on the propagating disc, and `H_D`
/// evaluated from the canonical form with `P = (i zeta Q)*`.
pub fn spectral_energy_angular(s: &Spectrum2D) -> EnergySplit {
    let g = s.grid();
    let k0 = g.k0();
    let p2 = g.p2_table();
    let (mut light, mut dark) = (0.0, 0.0);
    for i in 0..g.len() {
        let a = s.amps()[i];
        let z2 = zeta_squared(p2[i], k0);
        if s.is_propagating(i) {
            light += 2.0 * a.norm_sqr() * z2;
        } else {
            let p = (Complex64::i() * s.zeta()[i] * a).conj();
            dark += p.norm_sqr() + z2 * a.norm_sqr();
        }
    }
    let da = g.mode_area();
    EnergySplit { total: (light + dark) * da, light: light * da, dark: dark * da }
}

/// Mode data `(Q, d_z Q)` of arbitrary Cauchy data.
pub fn cauchy_spectra(plane: &CauchyPlane) -> (Spectrum2D, Spectrum2D) {
    (forward_transform_unchecked(&plane.psi), forward_transform_unchecked(&plane.dz))
}

/// Transverse momentum `P = int (d_z psi* grad psi + d_z psi grad psi*)`.
pub fn momentum(plane: &CauchyPlane) -> [f64; 2] {
    momentum_from_jet(&Jet::new(plane))
}

pub(crate) fn momentum_from_jet(jet: &Jet) -> [f64; 2] {
    let comp = |k: usize| -> f64 {
        let dens: Vec<f64> = (0..jet.len()).map(|i| 2.0 * (jet.d[2][i].conj() * jet.d[k][i]).re).collect();
        plane_sum(&jet.grid, &dens)
    };
    [comp(0), comp(1)]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularMomentum {
    pub jx: f64,
    pub jy: f64,
    pub jz: f64,
    /// `(x_bar, y_bar) = int (x, y) T^33`: the energy-weighted first moment
    /// (not divided by `H`).
    pub centroid: [f64; 2],
}

/// `J_z = int (x P_y - y P_x)`, `J_x = y_bar - z P_y`, `J_y = z P_x - x_bar`.
pub fn angular_momentum(plane: &CauchyPlane) -> AngularMomentum {
    let jet = Jet::new(plane);
    let t = tensor::stress_from_jet(&jet);
    let g = &jet.grid;
    let nx = g.nx();
    let (xs, ys) = (g.xs(), g.ys());
    let (mut jz, mut xb, mut yb) = (0.0, 0.0, 0.0);
    for i in 0..jet.len() {
        let (x, y) = (xs[i % nx], ys[i / nx]);
        jz += x * t.t[2][1][i] - y * t.t[2][0][i];
        xb += x * t.t[2][2][i];
        yb += y * t.t[2][2][i];
    }
    let da = g.cell_area();
    let p = momentum_from_jet(&jet);
    let (xb, yb) = (xb * da, yb * da);
    AngularMomentum { jx: yb - jet.z * p[1], jy: jet.z * p[0] - xb, jz: jz * da, centroid: [xb, yb] }
}

/// Both forms of the Lagrangian density: `A = d_mu psi* d_mu psi - k0^2|psi|^2`
/// and `B = psi* (d^2 + k0^2) psi`. Their pointwise sum is the divergence
/// `d_mu (psi* d_mu psi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangianDensity {
    pub form_a: Vec<f64>,
    pub form_b: Vec<Complex64>,
}

pub fn lagrangian_density(plane: &CauchyPlane, dz2: &Field2D) -> Result<LagrangianDensity> {
    check_same_grid(plane.grid(), dz2.grid())?;
    let jet = Jet::new(plane);
    let k0 = jet.grid.k0();
    let lap = laplacian(&plane.psi);
    let form_a = (0..jet.len()).map(|i| jet.lagrangian(i)).collect();
    let form_b = (0..jet.len())
        .map(|i| jet.psi[i].conj() * (lap.values()[i] + dz2.values()[i] + k0 * k0 * jet.psi[i]))
        .collect();
    Ok(LagrangianDensity { form_a, form_b })
}

/// `int d_z (psi* d_z psi) = int (|d_z psi|^2 + psi* d_z^2 psi)`: the part of
/// the Lagrangian divergence term that survives plane integration.
pub fn longitudinal_divergence(plane: &CauchyPlane, dz2: &Field2D) -> Result<Complex64> {
    check_same_grid(plane.grid(), dz2.grid())?;
    let s: Complex64 = plane
        .psi
        .values()
        .iter()
        .zip(plane.dz.values())
        .zip(dz2.values())
        .map(|((p, d), d2)| d.norm_sqr() + p.conj() * d2)
        .sum();
    Ok(s * plane.grid().cell_area())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaSquared {
    /// `[k0^2 int |phi|^2 - int |grad phi|^2] / int |phi|^2`
    pub real_space: f64,
    /// `int (k0^2 - p^2) |a|^2 / int |a|^2`
    pub spectral: f64,
}

/// Longitudinal frequency estimate of a transverse profile, by both the
/// real-space and the spectral route; they must agree to `1e-10 k0^2`.
pub fn zeta_squared_estimate(phi: &Field2D) -> Result<ZetaSquared> {
    let g = phi.grid();
    let k0 = g.k0();
    let norm: f64 = phi.values().iter().map(|v| v.norm_sqr()).sum::<f64>() * g.cell_area();
    if norm == 0.0 {
        return Err(Error::InvalidArgument("zero-norm profile has no longitudinal frequency".into()));
    }
    let (gx, gy) = gradient_xy(phi);
    let grad: f64 = gx.values().iter().zip(gy.values()).map(|(a, b)| a.norm_sqr() + b.norm_sqr()).sum::<f64>()
        * g.cell_area();
    let real_space = (k0 * k0 * norm - grad) / norm;

    let s = forward_transform_unchecked(phi);
    let p2 = g.p2_table();
    let (mut num, mut den) = (0.0, 0.0);
    for (a, p2) in s.amps().iter().zip(&p2) {
        num += (k0 * k0 - p2) * a.norm_sqr();
        den += a.norm_sqr();
    }
    let spectral = num / den;
    if (real_space - spectral).abs() > 1e-10 * k0 * k0 {
        return Err(Error::Consistency(format!(
            "real-space zeta^2 {real_space} and spectral zeta^2 {spectral} disagree"
        )));
    }
    Ok(ZetaSquared { real_space, spectral })
}

/// Canonical momentum `Pi = d_z psi*` and the Hamiltonian density
/// `Pi* Pi - grad psi* . grad psi + k0^2 psi* psi`.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalMomentum {
    pub pi: Field2D,
    pub hamiltonian_density: Vec<f64>,
}

pub fn conjugate_momentum(plane: &CauchyPlane) -> CanonicalMomentum {
    let jet = Jet::new(plane);
    let k0 = jet.grid.k0();
    let pi = plane.dz.conj();
    let hamiltonian_density = (0..jet.len())
        .map(|i| {
            let pi_i = pi.values()[i];
            (pi_i.conj() * pi_i).re - (jet.d[0][i].conj() * jet.d[0][i]).re - (jet.d[1][i].conj() * jet.d[1][i]).re
                + k0 * k0 * (jet.psi[i].conj() * jet.psi[i]).re
        })
        .collect();
    CanonicalMomentum { pi, hamiltonian_density }
}

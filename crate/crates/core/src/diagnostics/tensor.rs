//! Stress tensor, angular-momentum flux and the windowed continuity laws
//! they satisfy.

use crate::error::{Error, Result};
use crate::field::{check_same_grid, plane_sum, CauchyPlane};
use crate::window::Window;

use super::{current_from_jet, Jet};

/// `T_{mu nu} = d_mu psi* d_nu psi + d_mu psi d_nu psi* - delta_{mu nu} L`,
/// indices ordered `(x, y, z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StressTensor {
    pub t: [[Vec<f64>; 3]; 3],
}

impl StressTensor {
    /// Momentum density `P^mu = T^{3 mu}`.
    pub fn momentum_density(&self, mu: usize) -> &[f64] {
        &self.t[2][mu]
    }
}

pub fn stress_tensor(plane: &CauchyPlane) -> StressTensor {
    stress_from_jet(&Jet::new(plane))
}

pub(crate) fn stress_from_jet(jet: &Jet) -> StressTensor {
    let n = jet.len();
    let lag: Vec<f64> = (0..n).map(|i| jet.lagrangian(i)).collect();
    let entry = |mu: usize, nu: usize| -> Vec<f64> {
        (0..n)
            .map(|i| {
                let v = 2.0 * (jet.d[mu][i].conj() * jet.d[nu][i]).re;
                if mu == nu {
                    v - lag[i]
                } else {
                    v
                }
            })
            .collect()
    };
    StressTensor { t: std::array::from_fn(|mu| std::array::from_fn(|nu| entry(mu, nu))) }
}

/// Angular-momentum densities built from the stress tensor at one plane.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularMomentumFlux {
    /// `J^{mu nu} = x^mu P^nu - x^nu P^mu`.
    pub tensor: [[Vec<f64>; 3]; 3],
    /// Axial density `(J^{23}, J^{31}, J^{12})`.
    pub density: [Vec<f64>; 3],
    /// `flux[i][lambda] = (1/2) eps_{lambda mu nu} (x^mu T^{i nu} - x^nu T^{i mu})`
    /// for transverse `i`.
    pub flux: [[Vec<f64>; 3]; 2],
}

pub fn angular_momentum_flux(plane: &CauchyPlane) -> AngularMomentumFlux {
    flux_from_stress(&stress_tensor(plane), plane)
}

fn coords(plane: &CauchyPlane) -> [Vec<f64>; 3] {
    let g = plane.grid();
    let (xs, ys) = (g.xs(), g.ys());
    let nx = g.nx();
    [
        (0..g.len()).map(|i| xs[i % nx]).collect(),
        (0..g.len()).map(|i| ys[i / nx]).collect(),
        vec![plane.z(); g.len()],
    ]
}

fn moment(x: &[Vec<f64>; 3], f: &[Vec<f64>; 3], mu: usize, nu: usize) -> Vec<f64> {
    (0..x[0].len()).map(|i| x[mu][i] * f[nu][i] - x[nu][i] * f[mu][i]).collect()
}

const AXIAL: [(usize, usize); 3] = [(1, 2), (2, 0), (0, 1)];

fn flux_from_stress(t: &StressTensor, plane: &CauchyPlane) -> AngularMomentumFlux {
    let x = coords(plane);
    let tensor = std::array::from_fn(|mu| std::array::from_fn(|nu| moment(&x, &t.t[2], mu, nu)));
    let density = std::array::from_fn(|l| moment(&x, &t.t[2], AXIAL[l].0, AXIAL[l].1));
    let flux = std::array::from_fn(|i| std::array::from_fn(|l| moment(&x, &t.t[i], AXIAL[l].0, AXIAL[l].1)));
    AngularMomentumFlux { tensor, density, flux }
}

/// Rate of change of a windowed charge against the outward flux through the
/// window boundary; the continuity law is `rate + flux = 0` per component.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuityBalance {
    pub rate: Vec<f64>,
    pub flux: Vec<f64>,
}

impl ContinuityBalance {
    pub fn residual(&self) -> Vec<f64> {
        self.rate.iter().zip(&self.flux).map(|(r, f)| r + f).collect()
    }

    /// Largest `|rate + flux|` divided by the largest of `|rate|`, `|flux|`
    /// and `floor`.
    pub fn relative_residual(&self, floor: f64) -> f64 {
        let scale = self.rate.iter().chain(&self.flux).fold(floor, |m, v| m.max(v.abs()));
        self.residual().iter().fold(0.0f64, |m, v| m.max(v.abs())) / scale
    }
}

fn half_step(minus: &CauchyPlane, centre: &CauchyPlane, plus: &CauchyPlane) -> Result<f64> {
    check_same_grid(minus.grid(), centre.grid())?;
    check_same_grid(plus.grid(), centre.grid())?;
    let (h1, h2) = (centre.z() - minus.z(), plus.z() - centre.z());
    if !(h1.abs() > 0.0) || (h1 - h2).abs() > 1e-9 * h1.abs() {
        return Err(Error::InvalidArgument("planes must be distinct and equally spaced".into()));
    }
    Ok(h1)
}

/// Windowed Noether continuity `d_z int_W J_z + oint J.n = 0`.
pub fn noether_continuity(minus: &CauchyPlane, centre: &CauchyPlane, plus: &CauchyPlane) -> Result<ContinuityBalance> {
    let h = half_step(minus, centre, plus)?;
    let w = Window::centered_half(centre.grid())?;
    let jz = |p: &CauchyPlane| w.integrate(&current_from_jet(&Jet::new(p)).j[2]);
    let jc = current_from_jet(&Jet::new(centre));
    Ok(ContinuityBalance {
        rate: vec![(jz(plus) - jz(minus)) / (2.0 * h)],
        flux: vec![w.boundary_flux(&jc.j[0], &jc.j[1])],
    })
}

/// Windowed momentum continuity `d_z int_W P^i + oint T^{ij} n_j = 0` for
/// `i = x, y`.
pub fn momentum_continuity(minus: &CauchyPlane, centre: &CauchyPlane, plus: &CauchyPlane) -> Result<ContinuityBalance> {
    let h = half_step(minus, centre, plus)?;
    let w = Window::centered_half(centre.grid())?;
    let (tm, tc, tp) = (stress_tensor(minus), stress_tensor(centre), stress_tensor(plus));
    let rate = (0..2).map(|i| (w.integrate(&tp.t[2][i]) - w.integrate(&tm.t[2][i])) / (2.0 * h)).collect();
    let flux = (0..2).map(|i| w.boundary_flux(&tc.t[0][i], &tc.t[1][i])).collect();
    Ok(ContinuityBalance { rate, flux })
}

/// Windowed angular-momentum continuity
/// `d_z int_W J_lambda + oint L^j_lambda n_j = 0` for `lambda = x, y, z`.
pub fn angular_momentum_continuity(
    minus: &CauchyPlane,
    centre: &CauchyPlane,
    plus: &CauchyPlane,
) -> Result<ContinuityBalance> {
    let h = half_step(minus, centre, plus)?;
    let w = Window::centered_half(centre.grid())?;
    let (fm, fc, fp) = (angular_momentum_flux(minus), angular_momentum_flux(centre), angular_momentum_flux(plus));
    let rate = (0..3).map(|l| (w.integrate(&fp.density[l]) - w.integrate(&fm.density[l])) / (2.0 * h)).collect();
    let flux = (0..3).map(|l| w.boundary_flux(&fc.flux[0][l], &fc.flux[1][l])).collect();
    Ok(ContinuityBalance { rate, flux })
}

/// Energy centroid drift over a sequence of planes: for each adjacent pair
/// `(d x_bar/dz - P_x, d y_bar/dz - P_y)` with the momentum averaged over
/// the pair.
pub fn ray_check(planes: &[CauchyPlane]) -> Result<Vec<[f64; 2]>> {
    if planes.len() < 3 {
        return Err(Error::InvalidArgument(format!("ray check needs at least 3 planes, got {}", planes.len())));
    }
    for p in &planes[1..] {
        check_same_grid(planes[0].grid(), p.grid())?;
    }
    let data: Vec<([f64; 2], [f64; 2], f64)> = planes
        .iter()
        .map(|p| {
            let jet = Jet::new(p);
            let t = stress_from_jet(&jet);
            let x = coords(p);
            let c = [0, 1].map(|k| {
                let d: Vec<f64> = (0..jet.len()).map(|i| x[k][i] * t.t[2][2][i]).collect();
                plane_sum(&jet.grid, &d)
            });
            (c, super::momentum_from_jet(&jet), p.z())
        })
        .collect();
    data.windows(2)
        .map(|w| {
            let h = w[1].2 - w[0].2;
            if !(h.abs() > 0.0) {
                return Err(Error::InvalidArgument("planes must be at distinct z".into()));
            }
            Ok([0, 1].map(|k| (w[1].0[k] - w[0].0[k]) / h - 0.5 * (w[1].1[k] + w[0].1[k])))
        })
        .collect()
}

/// Windowed centroid law
/// `d_z int_W x^k T^33 = int_W T^{k3} - oint x^k T^{j3} n_j` for `k = x, y`,
/// returned as a balance whose rate is the left side and whose flux is the
/// negated right side.
pub fn windowed_ray_check(minus: &CauchyPlane, centre: &CauchyPlane, plus: &CauchyPlane) -> Result<ContinuityBalance> {
    let h = half_step(minus, centre, plus)?;
    let w = Window::centered_half(centre.grid())?;
    let weighted = |p: &CauchyPlane, k: usize| -> f64 {
        let t = stress_tensor(p);
        let x = coords(p);
        let d: Vec<f64> = (0..x[0].len()).map(|i| x[k][i] * t.t[2][2][i]).collect();
        w.integrate(&d)
    };
    let tc = stress_tensor(centre);
    let x = coords(centre);
    let rate = (0..2).map(|k| (weighted(plus, k) - weighted(minus, k)) / (2.0 * h)).collect();
    let flux = (0..2)
        .map(|k| {
            let fx: Vec<f64> = (0..x[0].len()).map(|i| x[k][i] * tc.t[0][2][i]).collect();
            let fy: Vec<f64> = (0..x[0].len()).map(|i| x[k][i] * tc.t[1][2][i]).collect();
            w.boundary_flux(&fx, &fy) - w.integrate(&tc.t[k][2])
        })
        .collect();
    Ok(ContinuityBalance { rate, flux })
}
